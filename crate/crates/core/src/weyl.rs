//! The Weyl group of type C_g realised as signed permutations: the
//! subgroup of S_2g of permutations w with w(2g+1-i) = 2g+1-w(i).
//!
//! # Composition convention
//!
//! Group elements are functions on {1..2g} and `compose(a, b)` is the
//! function composition `a . b`, with `b` acting first:
//! `compose(a, b).apply(x) = a.apply(b.apply(x))`. Words multiply the same
//! way: `apply_word([i1, ..., ik]) = s_{i1} . s_{i2} . ... . s_{ik}`, the
//! rightmost letter acting first. The convention is pinned by the table
//! identities `apply_word(s3 s2, g=3) = [1,4,2]` and
//! `apply_word(s1 s2 s1 s2, g=2) = [4,3]`, which the unit tests assert.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeylError {
    #[error("prefix entry {0} out of range 1..={1}")]
    OutOfRange(usize, usize),
    #[error("duplicate prefix entry {0}")]
    Duplicate(usize),
    #[error("prefix entries {0} and {1} are a symmetric pair (they sum to 2g+1)")]
    SymmetricPair(usize, usize),
    #[error("expected an element of degree {expected}, got degree {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("word letter {0} exceeds rank {1}")]
    BadLetter(usize, usize),
    #[error("expected a final element, got {0}")]
    NotFinal(String),
    #[error("expected an admissible element (w <= w_empty), got {0}")]
    NotAdmissible(String),
}

/// An element of W_g stored by its full image sequence on {1..2g}. The
/// symmetry w(2g+1-i) = 2g+1-w(i) is enforced at construction, so invalid
/// values cannot be represented.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPermutation {
    g: usize,
    images: Vec<u8>,
}

/// A word in the simple reflections s_1, ..., s_g.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    pub letters: Vec<u8>,
}

impl Word {
    pub fn new(letters: Vec<u8>) -> Self {
        Word { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl fmt::Display for Word {
    /// Token form `s3 s2`; the empty word prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let toks: Vec<String> = self.letters.iter().map(|i| format!("s{i}")).collect();
        write!(f, "{}", toks.join(" "))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Enumeration filters for [`enumerate`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Filter {
    All,
    Final,
    Admissible,
}

impl SignedPermutation {
    /// The identity of W_g.
    pub fn identity(g: usize) -> Self {
        assert!(g >= 1);
        SignedPermutation {
            g,
            images: (1..=2 * g as u8).collect(),
        }
    }

    /// Build the element `[a_1,...,a_g]` from its prefix, completing the
    /// lower half by the symmetry rule.
    pub fn make_perm(g: usize, prefix: &[usize]) -> Result<Self, WeylError> {
        assert!(g >= 1);
        if prefix.len() != g {
            return Err(WeylError::DegreeMismatch {
                expected: g,
                got: prefix.len(),
            });
        }
        let n = 2 * g;
        let mut seen = vec![false; n + 1];
        for (k, &a) in prefix.iter().enumerate() {
            if a < 1 || a > n {
                return Err(WeylError::OutOfRange(a, n));
            }
            if seen[a] {
                return Err(WeylError::Duplicate(a));
            }
            if seen[n + 1 - a] {
                // the partner n+1-a was already chosen by an earlier entry
                let j = prefix[..k].iter().copied().find(|&b| b == n + 1 - a).unwrap();
                return Err(WeylError::SymmetricPair(j, a));
            }
            seen[a] = true;
        }
        let mut images = vec![0u8; n];
        for (k, &a) in prefix.iter().enumerate() {
            images[k] = a as u8;
            images[n - 1 - k] = (n + 1 - a) as u8;
        }
        Ok(SignedPermutation { g, images })
    }

    /// The simple reflection s_i: (i,i+1)(2g-i,2g+1-i) for i < g and
    /// (g,g+1) for i = g.
    pub fn simple(g: usize, i: usize) -> Self {
        assert!((1..=g).contains(&i), "simple reflection index out of range");
        let mut w = Self::identity(g);
        let n = 2 * g;
        w.images.swap(i - 1, i);
        if i < g {
            w.images.swap(n - i - 1, n - i);
        }
        w
    }

    /// The longest final element w_empty = [g+1, g+2, ..., 2g].
    pub fn w_empty(g: usize) -> Self {
        Self::make_perm(g, &(g + 1..=2 * g).collect::<Vec<_>>()).unwrap()
    }

    /// The longest element of W_g, i = 2g+1-i on every point.
    pub fn longest(g: usize) -> Self {
        SignedPermutation {
            g,
            images: (1..=2 * g as u8).rev().collect(),
        }
    }

    /// The longest element of the subgroup S_g: i = g+1-i on {1..g}.
    pub fn sigma0(g: usize) -> Self {
        Self::make_perm(g, &(1..=g).rev().collect::<Vec<_>>()).unwrap()
    }

    pub fn g(&self) -> usize {
        self.g
    }

    /// w(i) for 1 <= i <= 2g.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] as usize
    }

    /// The prefix [w(1),...,w(g)].
    pub fn prefix(&self) -> Vec<usize> {
        self.images[..self.g].iter().map(|&a| a as usize).collect()
    }

    /// r_w(i,j) = #{a <= i : w(a) <= j}.
    pub fn r_count(&self, i: usize, j: usize) -> usize {
        debug_assert!(i >= 1 && i <= 2 * self.g && j >= 1 && j <= 2 * self.g);
        self.images[..i].iter().filter(|&&a| (a as usize) <= j).count()
    }

    /// Coxeter length: inversions among the first g values plus pairs
    /// i <= j <= g with w(i)+w(j) > 2g+1.
    pub fn length(&self) -> usize {
        let g = self.g;
        let n = 2 * g + 1;
        let mut len = 0;
        for i in 1..=g {
            for j in i..=g {
                if i < j && self.apply(i) > self.apply(j) {
                    len += 1;
                }
                if self.apply(i) + self.apply(j) > n {
                    len += 1;
                }
            }
        }
        len
    }

    /// Codimension, computed by its own formula (not as g^2 - length).
    pub fn codim(&self) -> usize {
        let g = self.g;
        let n = 2 * g + 1;
        let mut c = 0;
        for i in 1..=g {
            for j in i..=g {
                if i < j && self.apply(i) < self.apply(j) {
                    c += 1;
                }
                if self.apply(i) + self.apply(j) < n {
                    c += 1;
                }
            }
        }
        debug_assert_eq!(c + self.length(), g * g);
        c
    }

    /// Bruhat-Chevalley order: w1 <= w2 iff r_{w1}(i,j) >= r_{w2}(i,j) for
    /// 1 <= i <= g, 1 <= j <= 2g (a sufficient index range).
    pub fn bruhat_leq(&self, other: &SignedPermutation) -> bool {
        assert_eq!(self.g, other.g, "Bruhat comparison across different degrees");
        for i in 1..=self.g {
            let mut r1 = 0;
            let mut r2 = 0;
            let mut seen1 = vec![false; 2 * self.g + 1];
            let mut seen2 = vec![false; 2 * self.g + 1];
            for a in 1..=i {
                seen1[self.apply(a)] = true;
                seen2[other.apply(a)] = true;
            }
            for j in 1..=2 * self.g {
                if seen1[j] {
                    r1 += 1;
                }
                if seen2[j] {
                    r2 += 1;
                }
                if r1 < r2 {
                    return false;
                }
            }
        }
        true
    }

    /// w1 . w2, with w2 acting first (see the module docs).
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        assert_eq!(self.g, other.g, "composition across different degrees");
        let images = (1..=2 * self.g)
            .map(|x| self.apply(other.apply(x)) as u8)
            .collect();
        SignedPermutation { g: self.g, images }
    }

    pub fn inverse(&self) -> SignedPermutation {
        let mut images = vec![0u8; 2 * self.g];
        for x in 1..=2 * self.g {
            images[self.apply(x) - 1] = x as u8;
        }
        SignedPermutation { g: self.g, images }
    }

    /// Right multiplication by s_i, i.e. compose(self, s_i).
    fn mul_simple_right(&self, i: usize) -> SignedPermutation {
        let mut w = self.clone();
        let n = 2 * self.g;
        w.images.swap(i - 1, i);
        if i < self.g {
            w.images.swap(n - i - 1, n - i);
        }
        w
    }

    /// True iff right multiplication by s_i shortens the element.
    fn has_right_descent(&self, i: usize) -> bool {
        if i < self.g {
            self.apply(i) > self.apply(i + 1)
        } else {
            self.apply(self.g) > self.g
        }
    }

    /// A reduced word for w, deterministic: the lexicographically least
    /// right descent is taken at each step, so the word is built from its
    /// last letter backwards.
    pub fn reduced_word(&self) -> Word {
        let mut w = self.clone();
        let mut rev = Vec::new();
        loop {
            let Some(i) = (1..=self.g).find(|&i| w.has_right_descent(i)) else {
                break;
            };
            rev.push(i as u8);
            w = w.mul_simple_right(i);
        }
        debug_assert!(w == Self::identity(self.g));
        rev.reverse();
        Word::new(rev)
    }

    /// True iff w <= w_empty, tested by the closed criterion
    /// w(i) <= g+i for all i <= g.
    pub fn is_admissible(&self) -> bool {
        (1..=self.g).all(|i| self.apply(i) <= self.g + i)
    }
}

impl fmt::Display for SignedPermutation {
    /// Prefix form `[a1,a2,...,ag]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pre: Vec<String> = self.images[..self.g].iter().map(|a| a.to_string()).collect();
        write!(f, "[{}]", pre.join(","))
    }
}

impl fmt::Debug for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Evaluate a word: `apply_word([i1,...,ik], g) = s_{i1} . ... . s_{ik}`,
/// rightmost letter acting first.
pub fn apply_word(word: &Word, g: usize) -> Result<SignedPermutation, WeylError> {
    let mut w = SignedPermutation::identity(g);
    for &i in &word.letters {
        let i = i as usize;
        if i < 1 || i > g {
            return Err(WeylError::BadLetter(i, g));
        }
        // (s_{i1} ... s_{ik}) = ((s_{i1} ... s_{i(k-1)}) . s_{ik}):
        // fold left with right multiplication.
        w = w.mul_simple_right(i);
    }
    Ok(w)
}

/// Enumerate W_g elements, ordered lexicographically by prefix.
pub fn enumerate(g: usize, filter: Filter) -> Vec<SignedPermutation> {
    assert!(g >= 1, "degree must be positive");
    let n = 2 * g;
    let mut out = Vec::new();
    match filter {
        Filter::Final => {
            // choose one value from each symmetric pair {i, 2g+1-i} and sort
            for mask in 0..(1u32 << g) {
                let mut pre: Vec<usize> = (0..g)
                    .map(|k| if mask >> k & 1 == 1 { n - k } else { k + 1 })
                    .collect();
                pre.sort_unstable();
                out.push(SignedPermutation::make_perm(g, &pre).unwrap());
            }
            out.sort();
        }
        Filter::All | Filter::Admissible => {
            let mut prefix = Vec::with_capacity(g);
            let mut used = vec![false; n + 1];
            fn rec(
                g: usize,
                n: usize,
                prefix: &mut Vec<usize>,
                used: &mut Vec<bool>,
                admissible_only: bool,
                out: &mut Vec<SignedPermutation>,
            ) {
                if prefix.len() == g {
                    out.push(SignedPermutation::make_perm(g, prefix).unwrap());
                    return;
                }
                let bound = if admissible_only {
                    g + prefix.len() + 1
                } else {
                    n
                };
                for a in 1..=bound {
                    if used[a] || used[n + 1 - a] {
                        continue;
                    }
                    used[a] = true;
                    prefix.push(a);
                    rec(g, n, prefix, used, admissible_only, out);
                    prefix.pop();
                    used[a] = false;
                }
            }
            rec(
                g,
                n,
                &mut prefix,
                &mut used,
                filter == Filter::Admissible,
                &mut out,
            );
        }
    }
    out
}

/// The order-preserving embedding of W_{g-i} into W_g acting on the
/// middle block {i+1, ..., 2g-i}:
/// rho_i(w)(l) = i + w(l) for l <= g-i, and g+l for g-i < l <= g.
pub fn rho_embed(
    i: usize,
    w: &SignedPermutation,
    g: usize,
) -> Result<SignedPermutation, WeylError> {
    assert!(i >= 1 && i < g, "rho index must be in 1..g-1");
    if w.g() != g - i {
        return Err(WeylError::DegreeMismatch {
            expected: g - i,
            got: w.g(),
        });
    }
    let prefix: Vec<usize> = (1..=g)
        .map(|l| if l <= g - i { i + w.apply(l) } else { g + l })
        .collect();
    SignedPermutation::make_perm(g, &prefix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn mk(g: usize, pre: &[usize]) -> SignedPermutation {
        SignedPermutation::make_perm(g, pre).unwrap()
    }

    #[test]
    fn make_perm_completes_by_symmetry() {
        assert_eq!(mk(2, &[1, 2]).images, vec![1, 2, 3, 4]);
        assert_eq!(mk(2, &[4, 2]).images, vec![4, 2, 3, 1]);
        assert_eq!(mk(3, &[4, 5, 6]).images, vec![4, 5, 6, 1, 2, 3]);
        assert_eq!(SignedPermutation::w_empty(3), mk(3, &[4, 5, 6]));
    }

    #[test]
    fn make_perm_rejects_bad_prefixes() {
        assert!(matches!(
            SignedPermutation::make_perm(2, &[1, 1]),
            Err(WeylError::Duplicate(1))
        ));
        assert!(matches!(
            SignedPermutation::make_perm(2, &[5, 1]),
            Err(WeylError::OutOfRange(5, 4))
        ));
        assert!(matches!(
            SignedPermutation::make_perm(2, &[1, 4]),
            Err(WeylError::SymmetricPair(1, 4))
        ));
    }

    #[test]
    fn r_count_examples() {
        assert_eq!(mk(2, &[2, 4]).r_count(2, 3), 1);
        assert_eq!(SignedPermutation::identity(2).r_count(3, 3), 3);
        assert_eq!(mk(2, &[4, 2]).r_count(2, 2), 1);
    }

    #[test]
    fn length_and_codim() {
        assert_eq!(mk(2, &[4, 3]).length(), 4);
        assert_eq!(mk(2, &[3, 4]).length(), 3);
        assert_eq!(mk(2, &[3, 4]).codim(), 1);
        for g in 1..=3 {
            assert_eq!(SignedPermutation::identity(g).length(), 0);
            assert_eq!(SignedPermutation::identity(g).codim(), g * g);
            for w in enumerate(g, Filter::All) {
                assert_eq!(w.length() + w.codim(), g * g);
            }
        }
    }

    #[test]
    fn composition_convention_matches_word_column() {
        // the two calibration rows for the fixed composition order
        assert_eq!(
            apply_word(&Word::new(vec![3, 2]), 3).unwrap(),
            mk(3, &[1, 4, 2])
        );
        assert_eq!(
            apply_word(&Word::new(vec![1, 2, 1, 2]), 2).unwrap(),
            mk(2, &[4, 3])
        );
        assert_eq!(
            apply_word(&Word::new(vec![1, 2]), 2).unwrap(),
            mk(2, &[2, 4])
        );
    }

    #[test]
    fn compose_inverse_identity() {
        for w in enumerate(2, Filter::All) {
            assert_eq!(w.compose(&w.inverse()), SignedPermutation::identity(2));
            assert_eq!(w.inverse().compose(&w), SignedPermutation::identity(2));
        }
    }

    #[test]
    fn reduced_word_is_lex_least_and_reproduces_table_words() {
        assert!(SignedPermutation::identity(3).reduced_word().is_empty());
        assert_eq!(mk(2, &[2, 4]).reduced_word().letters, vec![1, 2]);
        assert_eq!(mk(3, &[1, 4, 5]).reduced_word().letters, vec![3, 2, 3]);
        assert_eq!(mk(3, &[1, 4, 2]).reduced_word().letters, vec![3, 2]);
        for g in 1..=3 {
            for w in enumerate(g, Filter::All) {
                let word = w.reduced_word();
                assert_eq!(word.len(), w.length());
                assert_eq!(apply_word(&word, g).unwrap(), w);
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate(2, Filter::All).len(), 8);
        assert_eq!(enumerate(3, Filter::All).len(), 48);
        assert_eq!(enumerate(1, Filter::Final).len(), 2);
        assert_eq!(enumerate(4, Filter::Final).len(), 16);
        assert_eq!(enumerate(3, Filter::Admissible).len(), 26);
    }

    #[test]
    fn bruhat_examples_and_reflexivity() {
        assert!(mk(2, &[1, 2]).bruhat_leq(&mk(2, &[2, 4])));
        // incomparable pair
        assert!(!mk(2, &[2, 4]).bruhat_leq(&mk(2, &[3, 1])));
        assert!(!mk(2, &[3, 1]).bruhat_leq(&mk(2, &[2, 4])));
        for w in enumerate(2, Filter::All) {
            assert!(w.bruhat_leq(&w));
        }
    }

    /// All subword products of a reduced word of w form the lower Bruhat
    /// interval [e, w]; an independent oracle for `bruhat_leq`.
    fn subword_closure(w: &SignedPermutation) -> HashSet<SignedPermutation> {
        let g = w.g();
        let word = w.reduced_word();
        let mut set = HashSet::new();
        set.insert(SignedPermutation::identity(g));
        for &i in &word.letters {
            let extra: Vec<_> = set.iter().map(|u| u.mul_simple_right(i as usize)).collect();
            set.extend(extra);
        }
        set
    }

    #[test]
    fn bruhat_agrees_with_chevalley_subwords() {
        for g in 1..=3 {
            let all = enumerate(g, Filter::All);
            for w in &all {
                let below = subword_closure(w);
                for u in &all {
                    assert_eq!(
                        u.bruhat_leq(w),
                        below.contains(u),
                        "bruhat mismatch: {u} vs {w}"
                    );
                }
            }
        }
    }

    #[test]
    fn bruhat_invariant_under_inverse() {
        for g in 1..=3 {
            let all = enumerate(g, Filter::All);
            for u in &all {
                for v in &all {
                    assert_eq!(
                        u.bruhat_leq(v),
                        u.inverse().bruhat_leq(&v.inverse()),
                        "inverse compatibility failed for {u}, {v}"
                    );
                }
            }
        }
    }

    #[test]
    fn admissible_characterisations_agree() {
        for g in 1..=3 {
            let w_empty = SignedPermutation::w_empty(g);
            for w in enumerate(g, Filter::All) {
                let by_bruhat = w.bruhat_leq(&w_empty);
                let by_r = (1..=g).all(|i| w.r_count(i, g + i) == i);
                assert_eq!(w.is_admissible(), by_bruhat);
                assert_eq!(w.is_admissible(), by_r);
            }
        }
    }

    #[test]
    fn rho_embedding() {
        let w = mk(2, &[2, 4]);
        assert_eq!(rho_embed(1, &w, 3).unwrap(), mk(3, &[3, 5, 6]));
        let id2 = SignedPermutation::identity(2);
        assert_eq!(rho_embed(1, &id2, 3).unwrap(), mk(3, &[2, 3, 6]));
        assert!(rho_embed(2, &w, 3).is_err());
    }

    #[test]
    fn rho_preserves_bruhat_order_and_finality() {
        for (i, g) in [(1usize, 3usize), (2, 3), (1, 4)] {
            let small = enumerate(g - i, Filter::All);
            for u in &small {
                for v in &small {
                    let ru = rho_embed(i, u, g).unwrap();
                    let rv = rho_embed(i, v, g).unwrap();
                    assert_eq!(u.bruhat_leq(v), ru.bruhat_leq(&rv));
                }
            }
            for u in enumerate(g - i, Filter::Final) {
                let ru = rho_embed(i, &u, g).unwrap();
                let pre = ru.prefix();
                assert!(pre.windows(2).all(|ab| ab[0] < ab[1]));
            }
        }
    }
}
