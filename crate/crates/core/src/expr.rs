//! Text syntax for the objects the calculator exchanges: permutations
//! `[4,2]` or `[42]`, words `s3 s2`, diagrams `{5,3,1}` or the empty
//! symbol, final types `{0,0,1}`, and class/polynomial expressions such
//! as `(p-1)(p^2+1)L1L2 - 2(p^3-1)L3` with `L`/`λ` for lambda classes
//! and `l`/`ℓ` for Chern roots. Juxtaposition multiplies; `/` divides by
//! a scalar; the unicode minus is accepted.

use crate::finals::{FinalType, YoungDiagram};
use crate::poly::{elementary, MultiPoly};
use crate::rings::{BaseClass, ClassJson, FlagClass, RingCtx};
use crate::scalars::{PolyP, RatP, Ring};
use crate::weyl::{SignedPermutation, Word};
use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {0:?} at byte {1}")]
    BadChar(char, usize),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("index {0} out of range 1..={1}")]
    IndexRange(usize, usize),
    #[error("division by a non-scalar or zero")]
    BadDivision,
    #[error("the expression must not contain {0}")]
    UnexpectedSymbol(&'static str),
    #[error("coefficient is not a polynomial in p: {0}")]
    NotPolynomial(String),
    #[error("invalid permutation: {0}")]
    BadPermutation(String),
    #[error("invalid diagram or type: {0}")]
    BadSet(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    P,
    Lambda(usize),
    Ell(usize),
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, ch) = chars[i];
        match ch {
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' | '\u{2212}' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' | '\u{00b7}' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '0'..='9' => {
                let mut n = String::new();
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    n.push(chars[i].1);
                    i += 1;
                }
                out.push(Tok::Int(n.parse().expect("digits")));
            }
            'p' => {
                out.push(Tok::P);
                i += 1;
            }
            'L' | '\u{03bb}' => {
                i += 1;
                let (idx, used) = read_index(&chars, i)?;
                out.push(Tok::Lambda(idx));
                i += used;
            }
            'l' | '\u{2113}' => {
                i += 1;
                let (idx, used) = read_index(&chars, i)?;
                out.push(Tok::Ell(idx));
                i += used;
            }
            other => return Err(ParseError::BadChar(other, pos)),
        }
    }
    Ok(out)
}

fn read_index(chars: &[(usize, char)], at: usize) -> Result<(usize, usize), ParseError> {
    let mut n = String::new();
    let mut used = 0;
    while at + used < chars.len() && chars[at + used].1.is_ascii_digit() {
        n.push(chars[at + used].1);
        used += 1;
    }
    if n.is_empty() {
        return Err(ParseError::Expected("a class index after λ/L or ℓ/l"));
    }
    Ok((n.parse().expect("digits"), used))
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    g: usize,
}

/// An expression value: a polynomial in the lambdas (variables 0..g-1)
/// and roots (variables g..2g-1) with rational-function coefficients.
type Value = MultiPoly<RatP>;

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Value, ParseError> {
        let mut negate = false;
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.next();
            negate = true;
        } else if matches!(self.peek(), Some(Tok::Plus)) {
            self.next();
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Tok::Minus) => {
                    self.next();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                Some(Tok::Slash) => {
                    self.next();
                    let f = self.factor()?;
                    // division only by a nonzero scalar
                    let scalar = as_scalar(&f).ok_or(ParseError::BadDivision)?;
                    let inv = scalar.inv().ok_or(ParseError::BadDivision)?;
                    acc = acc.scalar_mul(&inv);
                }
                // juxtaposition
                Some(Tok::Int(_)) | Some(Tok::P) | Some(Tok::Lambda(_)) | Some(Tok::Ell(_))
                | Some(Tok::LParen) => {
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Value, ParseError> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.next();
            match self.next() {
                Some(Tok::Int(n)) => {
                    let e =
                        usize::try_from(n).map_err(|_| ParseError::Expected("small exponent"))?;
                    Ok(base.pow(e))
                }
                _ => Err(ParseError::Expected("an integer exponent after ^")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Value, ParseError> {
        let nv = 2 * self.g;
        match self.next() {
            Some(Tok::Int(n)) => Ok(MultiPoly::constant(
                nv,
                RatP::from_poly(PolyP::constant(n)),
            )),
            Some(Tok::P) => Ok(MultiPoly::constant(nv, RatP::from_poly(PolyP::p()))),
            Some(Tok::Lambda(i)) => {
                if i < 1 || i > self.g {
                    return Err(ParseError::IndexRange(i, self.g));
                }
                Ok(MultiPoly::variable(nv, i - 1))
            }
            Some(Tok::Ell(i)) => {
                if i < 1 || i > self.g {
                    return Err(ParseError::IndexRange(i, self.g));
                }
                Ok(MultiPoly::variable(nv, self.g + i - 1))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(ParseError::Expected("a closing parenthesis")),
                }
            }
            Some(_) => Err(ParseError::Expected("a value")),
            None => Err(ParseError::UnexpectedEnd),
        }
    }
}

fn as_scalar(v: &Value) -> Option<RatP> {
    if v.is_zero() {
        return Some(RatP::zero());
    }
    let mut it = v.terms();
    let (m, c) = it.next()?;
    if it.next().is_some() || m.iter().any(|&e| e != 0) {
        return None;
    }
    Some(c.clone())
}

/// Parse a mixed lambda/root expression for genus `g`.
pub fn parse_mixed(g: usize, s: &str) -> Result<MultiPoly<RatP>, ParseError> {
    let toks = tokenize(s)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        g,
    };
    let v = p.expr()?;
    if p.pos != toks.len() {
        return Err(ParseError::Expected("end of input"));
    }
    Ok(v)
}

/// Parse a flag-ring class: lambdas embed as elementary symmetric
/// functions of the roots, then the flag normal form is taken.
pub fn parse_flag_class(ctx: &RingCtx, s: &str) -> Result<FlagClass<RatP>, ParseError> {
    let g = ctx.g;
    let mixed = parse_mixed(g, s)?;
    let mut images: Vec<MultiPoly<RatP>> = (1..=g)
        .map(|i| elementary(g, &(0..g).collect::<Vec<_>>(), i))
        .collect();
    for i in 0..g {
        images.push(MultiPoly::variable(g, i));
    }
    Ok(FlagClass::from_root_poly(ctx, mixed.substitute(&images)))
}

/// Parse a base-ring class; the expression must not mention roots.
pub fn parse_base_class(ctx: &RingCtx, s: &str) -> Result<BaseClass<RatP>, ParseError> {
    let g = ctx.g;
    let mixed = parse_mixed(g, s)?;
    if mixed.terms().any(|(m, _)| m[g..].iter().any(|&e| e != 0)) {
        return Err(ParseError::UnexpectedSymbol("Chern roots in a base class"));
    }
    let lam = MultiPoly::from_terms(
        g,
        mixed
            .terms()
            .map(|(m, c)| (m[..g].to_vec(), c.clone()))
            .collect(),
    );
    Ok(BaseClass::from_lambda_poly(ctx, lam))
}

/// Parse a scalar polynomial in p.
pub fn parse_polyp(s: &str) -> Result<PolyP, ParseError> {
    let r = parse_ratp(s)?;
    r.as_polynomial()
        .cloned()
        .ok_or_else(|| ParseError::NotPolynomial(s.into()))
}

/// Parse a scalar rational function in p.
pub fn parse_ratp(s: &str) -> Result<RatP, ParseError> {
    let v = parse_mixed(1, s)?;
    as_scalar(&v).ok_or(ParseError::UnexpectedSymbol("class symbols in a scalar"))
}

/// Parse `[a1,a2,...,ag]` (or digit-run form `[42]`) into an element.
pub fn parse_permutation(g: usize, s: &str) -> Result<SignedPermutation, ParseError> {
    let t = s.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| ParseError::BadPermutation(format!("{s}: expected [ ... ]")))?;
    let entries: Vec<usize> = if inner.contains(',') {
        inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| ParseError::BadPermutation(s.into()))
            })
            .collect::<Result<_, _>>()?
    } else {
        inner
            .trim()
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| ParseError::BadPermutation(s.into()))
            })
            .collect::<Result<_, _>>()?
    };
    SignedPermutation::make_perm(g, &entries)
        .map_err(|e| ParseError::BadPermutation(format!("{s}: {e}")))
}

/// Parse a word like `s3 s2`, `s3s2`, or `1`/`id` for the empty word.
pub fn parse_word(s: &str) -> Result<Word, ParseError> {
    let t = s.trim();
    if t == "1" || t.eq_ignore_ascii_case("id") || t.is_empty() {
        return Ok(Word::new(vec![]));
    }
    let mut letters = Vec::new();
    let mut chars = t.chars().peekable();
    while let Some(c) = chars.next() {
        if c.is_whitespace() {
            continue;
        }
        if c != 's' {
            return Err(ParseError::Expected("words use tokens like s3"));
        }
        let mut n = String::new();
        while let Some(d) = chars.peek() {
            if d.is_ascii_digit() {
                n.push(*d);
                chars.next();
            } else {
                break;
            }
        }
        if n.is_empty() {
            return Err(ParseError::Expected("an index after s"));
        }
        letters.push(n.parse::<u8>().expect("digits"));
    }
    Ok(Word::new(letters))
}

fn parse_brace_set(s: &str) -> Result<Vec<u8>, ParseError> {
    let t = s.trim();
    if t == "\u{2205}" || t == "{}" || t.eq_ignore_ascii_case("empty") {
        return Ok(vec![]);
    }
    let inner = t
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| ParseError::BadSet(format!("{s}: expected {{ ... }}")))?;
    if inner.trim().is_empty() {
        return Ok(vec![]);
    }
    inner
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<u8>()
                .map_err(|_| ParseError::BadSet(s.into()))
        })
        .collect()
}

/// Parse a final Young diagram `{5,3,1}` or the empty symbol.
pub fn parse_diagram(g: usize, s: &str) -> Result<YoungDiagram, ParseError> {
    let parts = parse_brace_set(s)?;
    YoungDiagram::new(g, parts).map_err(|e| ParseError::BadSet(e.to_string()))
}

/// Parse a final type `{0,0,1}`.
pub fn parse_final_type(g: usize, s: &str) -> Result<FinalType, ParseError> {
    let values = parse_brace_set(s)?;
    FinalType::new(g, values).map_err(|e| ParseError::BadSet(e.to_string()))
}

/// Rebuild a flag class from its JSON form (round-trip of `to_json`).
pub fn class_from_json(ctx: &RingCtx, json: &ClassJson) -> Result<FlagClass<RatP>, ParseError> {
    let g = ctx.g;
    assert_eq!(g, json.g, "genus mismatch in class JSON");
    let mut acc = MultiPoly::<RatP>::zero(2 * g);
    for term in &json.terms {
        let coeff = parse_ratp(&term.coeff)?;
        let mut expo = vec![0u16; 2 * g];
        for &l in &term.lambda {
            let l = l as usize;
            if l < 1 || l > g {
                return Err(ParseError::IndexRange(l, g));
            }
            expo[l - 1] += 1;
        }
        for (v, &e) in term.ell.iter().enumerate() {
            expo[g + v] = e;
        }
        acc = acc.add(&MultiPoly::monomial(2 * g, expo, coeff));
    }
    let mut images: Vec<MultiPoly<RatP>> = (1..=g)
        .map(|i| elementary(g, &(0..g).collect::<Vec<_>>(), i))
        .collect();
    for i in 0..g {
        images.push(MultiPoly::variable(g, i));
    }
    Ok(FlagClass::from_root_poly(ctx, acc.substitute(&images)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_parsing() {
        assert_eq!(
            parse_polyp("p^3+p^2+p+1").unwrap().to_string(),
            "p^3+p^2+p+1"
        );
        assert_eq!(
            parse_polyp("(p-1)(p^2+1)").unwrap().to_string(),
            "p^3-p^2+p-1"
        );
        assert_eq!(parse_polyp("2p").unwrap().to_string(), "2*p");
        assert_eq!(parse_ratp("(p-1)/24").unwrap().to_string(), "(p-1)/24");
        assert!(parse_polyp("(p-1)/24").is_err());
        // unicode minus accepted
        assert_eq!(parse_polyp("p\u{2212}1").unwrap().to_string(), "p-1");
    }

    #[test]
    fn class_parsing_and_equality() {
        let ctx = RingCtx::new(2);
        // the two presentations of one class agree after normal form
        let a = parse_flag_class(&ctx, "(1-p)l1^2+(p^2-p)L2").unwrap();
        let b = parse_flag_class(&ctx, "(1-p)*\u{2113}1^2 + (p^2-p)\u{03bb}2").unwrap();
        assert_eq!(a, b);
        let base = parse_base_class(&ctx, "(p-1)(p^2-1)L2").unwrap();
        assert!(!base.is_zero());
        assert!(parse_base_class(&ctx, "l1").is_err());
        assert!(parse_flag_class(&ctx, "l3").is_err());
    }

    #[test]
    fn permutation_word_set_parsing() {
        let w = parse_permutation(2, "[4,2]").unwrap();
        assert_eq!(w.prefix(), vec![4, 2]);
        assert_eq!(
            parse_permutation(3, "[142]").unwrap().prefix(),
            vec![1, 4, 2]
        );
        assert!(parse_permutation(2, "[1,4]").is_err());
        let word = parse_word("s3 s2").unwrap();
        assert_eq!(word.letters, vec![3, 2]);
        assert_eq!(parse_word("1").unwrap().letters, vec![]);
        assert_eq!(parse_diagram(5, "{5,3,1}").unwrap().parts(), &[5, 3, 1]);
        assert!(parse_diagram(5, "\u{2205}").unwrap().parts().is_empty());
        assert_eq!(
            parse_final_type(3, "{0,0,1}").unwrap().values(),
            &[0, 0, 1]
        );
    }

    #[test]
    fn json_round_trip() {
        let ctx = RingCtx::new(2);
        let c = parse_flag_class(&ctx, "(p^2-1)l1^2(l1-pl2)").unwrap();
        let json = c.to_json(&ctx);
        let back = class_from_json(&ctx, &json).unwrap();
        assert_eq!(c, back);
    }
}
