//! The tautological rings of the flag space and of the base, as quotient
//! rings with computable normal forms.
//!
//! The flag ring is Z[l_1..l_g]/(e_1(l^2), ..., e_g(l^2)) with the
//! monomial basis 0 <= a_i <= 2(g-i+1)-1 (2^g g! monomials). The base
//! ring is Z[lambda_1..lambda_g] modulo the relation
//! (1 + lambda_1 + ... + lambda_g)(1 - lambda_1 + - ...) = 1, with the
//! square-free monomial basis (2^g monomials). Coefficients are generic;
//! in practice Z[p] and its fraction field.

use crate::counting::hm_degree;
use crate::poly::{complete, elementary, MultiPoly};
use crate::scalars::{PolyP, RatP, Ring};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingsError {
    #[error("class has degree {got}, expected {expected}")]
    WrongDegree { expected: usize, got: usize },
    #[error("coefficient denominator vanishes at the evaluation point")]
    DenominatorVanishes,
    #[error("a base class may not contain Chern roots")]
    RootsInBaseClass,
}

/// Precomputed rewriting data for one genus: the flag-ring elimination
/// rules, the lambda square rules, and the resolvent rules expressing
/// high powers of each root over the base.
pub struct RingCtx {
    pub g: usize,
    /// for i = 1..g: rewrite of l_i^{2(g-i+1)} as a pure-l polynomial
    /// (integer coefficients, exponent vectors of arity g)
    flag_rules: Vec<Vec<(Vec<u16>, i64)>>,
    /// for k = 1..g: rewrite of lambda_k^2 as a lambda polynomial
    /// (arity g)
    lambda_rules: Vec<Vec<(Vec<u16>, i64)>>,
    /// for j = 1..g: rewrite of l_j^j in the mixed ring (arity 2g,
    /// lambdas at 0..g-1 and roots at g..2g-1)
    resolvent_rules: Vec<MultiPoly<BigInt>>,
}

impl RingCtx {
    pub fn new(g: usize) -> Self {
        assert!(g >= 1);
        // flag rules: l_i^{2(g-i+1)} -> -sum_{k=1}^{g-i+1}
        //   h_k(l_1^2,...,l_{i-1}^2) l_i^{2(g-i+1-k)}
        let mut flag_rules = Vec::with_capacity(g);
        for i in 1..=g {
            let m = g - i + 1;
            let mut rule: Vec<(Vec<u16>, i64)> = Vec::new();
            for k in 1..=m {
                let h: MultiPoly<BigInt> = complete(i - 1, &(0..i - 1).collect::<Vec<_>>(), k);
                for (expo, c) in h.terms() {
                    let mut full = vec![0u16; g];
                    for (v, &e) in expo.iter().enumerate() {
                        full[v] = 2 * e;
                    }
                    full[i - 1] = 2 * (m - k) as u16;
                    let ci = i64::try_from(c.clone()).expect("small h coefficient");
                    rule.push((full, -ci));
                }
            }
            flag_rules.push(rule);
        }
        // lambda rules: lambda_k^2 -> 2 sum_{j<k} (-1)^{k-j+1}
        //   lambda_j lambda_{2k-j}, indices outside 1..g dropped
        let mut lambda_rules = Vec::with_capacity(g);
        for k in 1..=g {
            let mut rule: Vec<(Vec<u16>, i64)> = Vec::new();
            for j in 0..k {
                let other = 2 * k - j;
                if other > g {
                    continue;
                }
                let sign = if (k - j + 1) % 2 == 0 { 2 } else { -2 };
                let mut expo = vec![0u16; g];
                if j >= 1 {
                    expo[j - 1] += 1;
                }
                expo[other - 1] += 1;
                rule.push((expo, sign));
            }
            lambda_rules.push(rule);
        }
        // resolvents: R_g(t) = t^g - lambda_1 t^{g-1} + ...; R_{j-1} is
        // the synthetic quotient of R_j by (t - l_j). The rewrite for
        // l_j^j is -sum_{k<j} coeff_k(R_j) l_j^k; it holds modulo the
        // defining relations of the ring, which is all that is needed.
        let nv = 2 * g;
        let mut coeffs: Vec<MultiPoly<BigInt>> = Vec::with_capacity(g + 1);
        for k in 0..=g {
            // coefficient of t^k in R_g: (-1)^{g-k} lambda_{g-k}
            let idx = g - k;
            if idx == 0 {
                coeffs.push(MultiPoly::one(nv));
            } else {
                let sign = if idx % 2 == 0 { 1 } else { -1 };
                let mut e = vec![0u16; nv];
                e[idx - 1] = 1;
                coeffs.push(MultiPoly::monomial(nv, e, BigInt::from(sign)));
            }
        }
        let mut resolvent_rules = vec![MultiPoly::zero(nv); g];
        for j in (1..=g).rev() {
            // current coeffs describe R_j of degree j (monic)
            let mut rewrite = MultiPoly::zero(nv);
            for (k, c) in coeffs.iter().enumerate().take(j) {
                let mut mono = vec![0u16; nv];
                mono[g + j - 1] = k as u16;
                rewrite = rewrite.sub(&c.mul(&MultiPoly::monomial(nv, mono, BigInt::from(1))));
            }
            resolvent_rules[j - 1] = rewrite;
            // synthetic division by (t - l_j): b_{k-1} = a_k + l_j b_k
            let lj = MultiPoly::variable(nv, g + j - 1);
            let mut next: Vec<MultiPoly<BigInt>> = vec![MultiPoly::zero(nv); j];
            let mut carry = MultiPoly::zero(nv);
            for k in (1..=j).rev() {
                let b = coeffs[k].add(&lj.mul(&carry));
                next[k - 1] = b.clone();
                carry = b;
            }
            coeffs = next;
        }
        RingCtx {
            g,
            flag_rules,
            lambda_rules,
            resolvent_rules,
        }
    }

    /// Normal form in the flag ring: exponents of l_i below 2(g-i+1).
    pub fn flag_nf<C: Ring>(&self, poly: &MultiPoly<C>) -> MultiPoly<C> {
        let g = self.g;
        assert_eq!(poly.nvars(), g);
        let mut cur = poly.clone();
        for i in (1..=g).rev() {
            let bound = 2 * (g - i + 1) as u16;
            loop {
                let mut next = MultiPoly::zero(g);
                let mut changed = false;
                for (m, c) in cur.terms() {
                    if m[i - 1] < bound {
                        next = next.add(&MultiPoly::monomial(g, m.clone(), c.clone()));
                        continue;
                    }
                    changed = true;
                    let mut rest = m.clone();
                    rest[i - 1] -= bound;
                    for (rexpo, rc) in &self.flag_rules[i - 1] {
                        let key: Vec<u16> = rest.iter().zip(rexpo).map(|(a, b)| a + b).collect();
                        let coeff = c.mul(&C::from_i64(*rc));
                        next = next.add(&MultiPoly::monomial(g, key, coeff));
                    }
                }
                cur = next;
                if !changed {
                    break;
                }
            }
        }
        cur
    }

    /// Normal form in the base ring: square-free lambda monomials.
    pub fn base_nf<C: Ring>(&self, poly: &MultiPoly<C>) -> MultiPoly<C> {
        let g = self.g;
        assert_eq!(poly.nvars(), g);
        let mut cur = poly.clone();
        loop {
            let violating = cur
                .terms()
                .find(|(m, _)| m.iter().any(|&e| e >= 2))
                .map(|(m, c)| (m.clone(), c.clone()));
            let Some((m, c)) = violating else {
                return cur;
            };
            let k = m.iter().position(|&e| e >= 2).unwrap() + 1;
            let mut rest = m.clone();
            rest[k - 1] -= 2;
            cur = cur.sub(&MultiPoly::monomial(g, m, c.clone()));
            for (rexpo, rc) in &self.lambda_rules[k - 1] {
                let key: Vec<u16> = rest.iter().zip(rexpo).map(|(a, b)| a + b).collect();
                cur = cur.add(&MultiPoly::monomial(g, key, c.mul(&C::from_i64(*rc))));
            }
        }
    }

    /// Rewrite a pure-root polynomial into the mixed module basis:
    /// square-free lambda monomials times l^m with m_j <= j-1. The
    /// result lives in arity 2g (lambdas first).
    pub fn module_basis<C: Ring>(&self, poly: &MultiPoly<C>) -> MultiPoly<C> {
        let g = self.g;
        assert_eq!(poly.nvars(), g);
        let nv = 2 * g;
        // inject roots at positions g..2g-1
        let mut cur = MultiPoly::zero(nv);
        for (m, c) in poly.terms() {
            let mut e = vec![0u16; nv];
            e[g..].copy_from_slice(m);
            cur = cur.add(&MultiPoly::monomial(nv, e, c.clone()));
        }
        for j in 1..=g {
            let bound = j as u16;
            let rule = self.resolvent_rules[j - 1].map_coeff(|c: &BigInt| {
                C::from_i64(i64::try_from(c.clone()).expect("small resolvent coefficient"))
            });
            loop {
                let violating = cur
                    .terms()
                    .find(|(m, _)| m[g + j - 1] >= bound)
                    .map(|(m, c)| (m.clone(), c.clone()));
                let Some((m, c)) = violating else { break };
                let mut rest = m.clone();
                rest[g + j - 1] -= bound;
                cur = cur.sub(&MultiPoly::monomial(nv, m, c.clone()));
                let shifted = rule
                    .mul(&MultiPoly::monomial(nv, rest, C::one()))
                    .scalar_mul(&c);
                cur = cur.add(&shifted);
            }
        }
        // reduce the lambda block to square-free form
        loop {
            let violating = cur
                .terms()
                .find(|(m, _)| m[..g].iter().any(|&e| e >= 2))
                .map(|(m, c)| (m.clone(), c.clone()));
            let Some((m, c)) = violating else { break };
            let k = m[..g].iter().position(|&e| e >= 2).unwrap() + 1;
            let mut rest = m.clone();
            rest[k - 1] -= 2;
            cur = cur.sub(&MultiPoly::monomial(nv, m, c.clone()));
            for (rexpo, rc) in &self.lambda_rules[k - 1] {
                let mut key = rest.clone();
                for (v, &e) in rexpo.iter().enumerate() {
                    key[v] += e;
                }
                cur = cur.add(&MultiPoly::monomial(nv, key, c.mul(&C::from_i64(*rc))));
            }
        }
        cur
    }
}

/// A homogeneous element of the flag tautological ring, stored in the
/// pure-root normal form.
#[derive(Clone, PartialEq, Eq)]
pub struct FlagClass<C: Ring = PolyP> {
    g: usize,
    poly: MultiPoly<C>,
}

/// A homogeneous element of the base tautological ring, stored on the
/// square-free lambda basis.
#[derive(Clone, PartialEq, Eq)]
pub struct BaseClass<C: Ring = PolyP> {
    g: usize,
    poly: MultiPoly<C>,
}

impl<C: Ring> FlagClass<C> {
    pub fn from_root_poly(ctx: &RingCtx, poly: MultiPoly<C>) -> Self {
        assert_eq!(poly.nvars(), ctx.g);
        FlagClass {
            g: ctx.g,
            poly: ctx.flag_nf(&poly),
        }
    }

    /// Wrap an already-normal polynomial (debug-checked).
    pub fn from_normal_poly(g: usize, poly: MultiPoly<C>) -> Self {
        debug_assert!(poly
            .terms()
            .all(|(m, _)| m.iter().enumerate().all(|(v, &e)| (e as usize) < 2 * (g - v))));
        FlagClass { g, poly }
    }

    pub fn zero(g: usize) -> Self {
        FlagClass {
            g,
            poly: MultiPoly::zero(g),
        }
    }

    pub fn one(g: usize) -> Self {
        FlagClass {
            g,
            poly: MultiPoly::one(g),
        }
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn poly(&self) -> &MultiPoly<C> {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn degree(&self) -> Option<usize> {
        self.poly.total_degree()
    }

    pub fn is_homogeneous_of(&self, d: usize) -> bool {
        self.poly.is_homogeneous_of(d)
    }

    pub fn add(&self, other: &Self) -> Self {
        FlagClass {
            g: self.g,
            poly: self.poly.add(&other.poly),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        FlagClass {
            g: self.g,
            poly: self.poly.sub(&other.poly),
        }
    }

    pub fn scalar_mul(&self, s: &C) -> Self {
        FlagClass {
            g: self.g,
            poly: self.poly.scalar_mul(s),
        }
    }

    pub fn mul(&self, other: &Self, ctx: &RingCtx) -> Self {
        FlagClass {
            g: self.g,
            poly: ctx.flag_nf(&self.poly.mul(&other.poly)),
        }
    }

    pub fn map_coeff<D: Ring>(&self, f: impl Fn(&C) -> D) -> FlagClass<D> {
        FlagClass {
            g: self.g,
            poly: self.poly.map_coeff(f),
        }
    }
}

impl<C: Ring> BaseClass<C> {
    pub fn from_lambda_poly(ctx: &RingCtx, poly: MultiPoly<C>) -> Self {
        assert_eq!(poly.nvars(), ctx.g);
        BaseClass {
            g: ctx.g,
            poly: ctx.base_nf(&poly),
        }
    }

    pub fn from_normal_poly(g: usize, poly: MultiPoly<C>) -> Self {
        debug_assert!(poly.terms().all(|(m, _)| m.iter().all(|&e| e <= 1)));
        BaseClass { g, poly }
    }

    pub fn zero(g: usize) -> Self {
        BaseClass {
            g,
            poly: MultiPoly::zero(g),
        }
    }

    pub fn one(g: usize) -> Self {
        BaseClass {
            g,
            poly: MultiPoly::one(g),
        }
    }

    /// The class c * lambda_S for a subset S of {1..g}.
    pub fn lambda_monomial(g: usize, subset: &[usize], c: C) -> Self {
        let mut expo = vec![0u16; g];
        for &s in subset {
            assert!((1..=g).contains(&s));
            expo[s - 1] = 1;
        }
        BaseClass {
            g,
            poly: MultiPoly::monomial(g, expo, c),
        }
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn poly(&self) -> &MultiPoly<C> {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Weighted degree: lambda_i has degree i.
    pub fn degree(&self) -> Option<usize> {
        self.poly.terms().map(|(m, _)| weighted_degree(m)).max()
    }

    pub fn is_homogeneous_of(&self, d: usize) -> bool {
        self.poly.terms().all(|(m, _)| weighted_degree(m) == d)
    }

    pub fn add(&self, other: &Self) -> Self {
        BaseClass {
            g: self.g,
            poly: self.poly.add(&other.poly),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        BaseClass {
            g: self.g,
            poly: self.poly.sub(&other.poly),
        }
    }

    pub fn scalar_mul(&self, s: &C) -> Self {
        BaseClass {
            g: self.g,
            poly: self.poly.scalar_mul(s),
        }
    }

    pub fn mul(&self, other: &Self, ctx: &RingCtx) -> Self {
        BaseClass {
            g: self.g,
            poly: ctx.base_nf(&self.poly.mul(&other.poly)),
        }
    }

    pub fn map_coeff<D: Ring>(&self, f: impl Fn(&C) -> D) -> BaseClass<D> {
        BaseClass {
            g: self.g,
            poly: self.poly.map_coeff(f),
        }
    }

    /// The coefficient of the lambda-subset monomial.
    pub fn coeff_of(&self, subset: &[usize]) -> C {
        let mut expo = vec![0u16; self.g];
        for &s in subset {
            expo[s - 1] = 1;
        }
        self.poly
            .terms()
            .find(|(m, _)| **m == expo)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(C::zero)
    }
}

fn weighted_degree(m: &[u16]) -> usize {
    m.iter()
        .enumerate()
        .map(|(v, &e)| (v + 1) * e as usize)
        .sum()
}

/// Embed a base class into the flag ring via lambda_i -> e_i(l).
pub fn lambda_embed<C: Ring>(ctx: &RingCtx, b: &BaseClass<C>) -> FlagClass<C> {
    let g = ctx.g;
    let images: Vec<MultiPoly<C>> = (1..=g)
        .map(|i| elementary(g, &(0..g).collect::<Vec<_>>(), i))
        .collect();
    let poly = b.poly.substitute(&images);
    FlagClass::from_root_poly(ctx, poly)
}

/// The sequence of divided-difference steps realising the full
/// pushforward: blocks (1), (2,1), (3,2,1), ..., applied left to right.
fn pushforward_steps(g: usize) -> Vec<usize> {
    let mut steps = Vec::new();
    for i in 1..g {
        for j in (1..=i).rev() {
            steps.push(j);
        }
    }
    steps
}

/// Full Gysin pushforward from the flag ring to the base ring: the
/// composite of divided differences over the longest permutation of the
/// roots, then the rewrite of the (symmetric) result in the lambdas.
pub fn gysin_full<C: Ring>(ctx: &RingCtx, c: &FlagClass<C>) -> BaseClass<C> {
    let g = ctx.g;
    let mut cur = c.poly.clone();
    for i in pushforward_steps(g) {
        cur = cur.jacobi_step(i);
    }
    let lam = symmetric_to_lambda(&cur).expect("pushforward output must be symmetric");
    BaseClass::from_lambda_poly(ctx, lam)
}

/// Express a symmetric polynomial in the elementary symmetric functions
/// of its variables; the exponent of e_i becomes the exponent of the
/// i-th lambda. Returns `None` when the input is not symmetric.
pub fn symmetric_to_lambda<C: Ring>(poly: &MultiPoly<C>) -> Option<MultiPoly<C>> {
    let g = poly.nvars();
    let mut rest = poly.clone();
    let mut out = MultiPoly::zero(g);
    let elems: Vec<MultiPoly<C>> = (1..=g)
        .map(|i| elementary(g, &(0..g).collect::<Vec<_>>(), i))
        .collect();
    while !rest.is_zero() {
        // lex-leading monomial; symmetry forces a non-increasing shape
        let (m, c) = rest
            .terms()
            .next_back()
            .map(|(m, c)| (m.clone(), c.clone()))?;
        if m.windows(2).any(|ab| ab[0] < ab[1]) {
            return None;
        }
        let mut e_expo = vec![0u16; g];
        for i in 0..g {
            let next = if i + 1 < g { m[i + 1] } else { 0 };
            e_expo[i] = m[i] - next;
        }
        let mut prod = MultiPoly::one(g);
        for (i, &e) in e_expo.iter().enumerate() {
            for _ in 0..e {
                prod = prod.mul(&elems[i]);
            }
        }
        rest = rest.sub(&prod.scalar_mul(&c));
        out = out.add(&MultiPoly::monomial(g, e_expo, c));
    }
    Some(out)
}

/// The degree of a top-degree base class: the coefficient of
/// lambda_1...lambda_g times the exact zeta-value constant.
pub fn degree_map(ctx: &RingCtx, b: &BaseClass<PolyP>) -> Result<RatP, RingsError> {
    degree_map_ratp(ctx, &b.map_coeff(|c| RatP::from_poly(c.clone())))
}

pub fn degree_map_ratp(ctx: &RingCtx, b: &BaseClass<RatP>) -> Result<RatP, RingsError> {
    let g = ctx.g;
    let top = g * (g + 1) / 2;
    if !b.is_zero() && !b.is_homogeneous_of(top) {
        return Err(RingsError::WrongDegree {
            expected: top,
            got: b.degree().unwrap_or(0),
        });
    }
    let full: Vec<usize> = (1..=g).collect();
    let coeff = b.coeff_of(&full);
    let hm = hm_degree(g);
    let scale = RatP::new(
        PolyP::constant(hm.numer().clone()),
        PolyP::constant(hm.denom().clone()),
    );
    Ok(coeff.mul(&scale))
}

/// Evaluation point for `specialize`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SpecializeAt {
    Zero,
    Prime(u64),
}

fn eval_ratp(c: &RatP, at: SpecializeAt) -> Result<BigRational, RingsError> {
    let x = match at {
        SpecializeAt::Zero => BigRational::from_integer(BigInt::from(0)),
        SpecializeAt::Prime(p0) => BigRational::from_integer(BigInt::from(p0)),
    };
    c.eval_rat(&x).ok_or(RingsError::DenominatorVanishes)
}

pub fn specialize_flag(
    c: &FlagClass<RatP>,
    at: SpecializeAt,
) -> Result<FlagClass<BigRational>, RingsError> {
    let mut terms = BTreeMap::new();
    for (m, coeff) in c.poly.terms() {
        let v = eval_ratp(coeff, at)?;
        if !Ring::is_zero(&v) {
            terms.insert(m.clone(), v);
        }
    }
    Ok(FlagClass {
        g: c.g,
        poly: MultiPoly::from_terms(c.g, terms),
    })
}

pub fn specialize_base(
    c: &BaseClass<RatP>,
    at: SpecializeAt,
) -> Result<BaseClass<BigRational>, RingsError> {
    let mut terms = BTreeMap::new();
    for (m, coeff) in c.poly.terms() {
        let v = eval_ratp(coeff, at)?;
        if !Ring::is_zero(&v) {
            terms.insert(m.clone(), v);
        }
    }
    Ok(BaseClass {
        g: c.g,
        poly: MultiPoly::from_terms(c.g, terms),
    })
}

/// All flag normal-form monomials of homogeneous degree `d`.
pub fn flag_monomials(g: usize, d: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    fn rec(g: usize, i: usize, left: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if i == g {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let bound = 2 * (g - i) - 1; // max exponent of l_{i+1}
        for e in 0..=bound.min(left) {
            cur.push(e as u16);
            rec(g, i + 1, left - e, cur, out);
            cur.pop();
        }
    }
    rec(g, 0, d, &mut Vec::new(), &mut out);
    out
}

/// All square-free lambda monomials of weighted degree `d`, as exponent
/// vectors.
pub fn base_monomials(g: usize, d: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << g) {
        let expo: Vec<u16> = (0..g).map(|i| (mask >> i & 1) as u16).collect();
        if weighted_degree(&expo) == d {
            out.push(expo);
        }
    }
    out.sort();
    out
}

/// Fraction-free (Bareiss) elimination in Gauss-Jordan form; returns the
/// determinant of the square block. The augmented matrix ends diagonal
/// when the determinant is nonzero.
fn bareiss(aug: &mut [Vec<PolyP>], ncols_square: usize) -> PolyP {
    let n = aug.len();
    let mut prev = PolyP::one();
    let mut sign = 1i64;
    for k in 0..n.min(ncols_square) {
        if aug[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !aug[r][k].is_zero()) else {
                return PolyP::zero();
            };
            aug.swap(k, r);
            sign = -sign;
        }
        let pivot = aug[k][k].clone();
        for i in 0..n {
            if i == k {
                continue;
            }
            let factor = aug[i][k].clone();
            for j in 0..aug[i].len() {
                let num = pivot.mul(&aug[i][j]).sub(&factor.mul(&aug[k][j]));
                aug[i][j] = num
                    .exact_div(&prev)
                    .expect("Bareiss division is always exact");
            }
        }
        prev = pivot;
    }
    if sign < 0 {
        prev.neg()
    } else {
        prev
    }
}

/// Solve A x = b exactly over the rational function field; A has
/// polynomial entries. Returns `None` when A is singular.
pub fn solve_exact(a: &[Vec<PolyP>], b: &[PolyP]) -> Option<Vec<RatP>> {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n) && b.len() == n);
    if n == 0 {
        return Some(vec![]);
    }
    let mut aug: Vec<Vec<PolyP>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let det = bareiss(&mut aug, n);
    if det.is_zero() {
        return None;
    }
    Some(
        (0..n)
            .map(|i| RatP::new(aug[i][n].clone(), aug[i][i].clone()))
            .collect(),
    )
}

/// Exact determinant of a square polynomial matrix.
pub fn det_exact(a: &[Vec<PolyP>]) -> PolyP {
    let n = a.len();
    if n == 0 {
        return PolyP::one();
    }
    let mut aug: Vec<Vec<PolyP>> = a.to_vec();
    bareiss(&mut aug, n)
}

/// JSON form of a class: mixed module-basis terms. A base class has
/// zero `ell` blocks; a flag class carries both blocks.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ClassJson {
    pub g: usize,
    pub degree: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct TermJson {
    /// exponents of the Chern roots l_1..l_g
    pub ell: Vec<u16>,
    /// the square-free lambda subset, as sorted indices
    pub lambda: Vec<u8>,
    /// coefficient, in the polynomial/rational-function text syntax
    pub coeff: String,
}

pub trait CoeffText: Ring {
    fn coeff_text(&self) -> String;
}

impl CoeffText for PolyP {
    fn coeff_text(&self) -> String {
        self.to_string()
    }
}

impl CoeffText for RatP {
    fn coeff_text(&self) -> String {
        self.to_string()
    }
}

impl CoeffText for BigRational {
    fn coeff_text(&self) -> String {
        crate::scalars::format_rational(self)
    }
}

impl<C: CoeffText> FlagClass<C> {
    /// Mixed module-basis terms: (lambda subset, root exponents, coeff),
    /// stable-sorted by exponent vector.
    pub fn mixed_terms(&self, ctx: &RingCtx) -> Vec<(Vec<u8>, Vec<u16>, C)> {
        let g = self.g;
        let mixed = ctx.module_basis(&self.poly);
        mixed
            .terms()
            .map(|(m, c)| {
                let lambda: Vec<u8> = (0..g).filter(|&v| m[v] == 1).map(|v| v as u8 + 1).collect();
                let ell: Vec<u16> = m[g..].to_vec();
                (lambda, ell, c.clone())
            })
            .collect()
    }

    pub fn to_json(&self, ctx: &RingCtx) -> ClassJson {
        let terms = self
            .mixed_terms(ctx)
            .into_iter()
            .map(|(lambda, ell, c)| TermJson {
                ell,
                lambda,
                coeff: c.coeff_text(),
            })
            .collect();
        ClassJson {
            g: self.g,
            degree: self.degree().unwrap_or(0),
            terms,
        }
    }

    /// Human-readable form, e.g. `(p-1)λ1`; zero prints `0`.
    pub fn to_text(&self, ctx: &RingCtx) -> String {
        render_terms(self.mixed_terms(ctx))
    }
}

impl<C: CoeffText> BaseClass<C> {
    pub fn mixed_terms(&self) -> Vec<(Vec<u8>, Vec<u16>, C)> {
        let g = self.g;
        self.poly
            .terms()
            .map(|(m, c)| {
                let lambda: Vec<u8> = (0..g).filter(|&v| m[v] == 1).map(|v| v as u8 + 1).collect();
                (lambda, vec![0u16; g], c.clone())
            })
            .collect()
    }

    pub fn to_json(&self) -> ClassJson {
        let terms = self
            .mixed_terms()
            .into_iter()
            .map(|(lambda, ell, c)| TermJson {
                ell,
                lambda,
                coeff: c.coeff_text(),
            })
            .collect();
        ClassJson {
            g: self.g,
            degree: self.degree().unwrap_or(0),
            terms,
        }
    }

    pub fn to_text(&self) -> String {
        render_terms(self.mixed_terms())
    }
}

fn render_terms<C: CoeffText>(terms: Vec<(Vec<u8>, Vec<u16>, C)>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (lambda, ell, c) in terms {
        let mut mono = String::new();
        for l in &lambda {
            mono.push_str(&format!("λ{l}"));
        }
        for (v, &e) in ell.iter().enumerate() {
            if e == 1 {
                mono.push_str(&format!("ℓ{}", v + 1));
            } else if e > 1 {
                mono.push_str(&format!("ℓ{}^{}", v + 1, e));
            }
        }
        let cs = c.coeff_text();
        let piece = if mono.is_empty() {
            if needs_parens(&cs) {
                format!("({cs})")
            } else {
                cs
            }
        } else if cs == "1" {
            mono
        } else if cs == "-1" {
            format!("-{mono}")
        } else if needs_parens(&cs) {
            format!("({cs}){mono}")
        } else {
            format!("{cs}*{mono}")
        };
        parts.push(piece);
    }
    let mut out = String::new();
    for (k, piece) in parts.iter().enumerate() {
        if k == 0 {
            out.push_str(piece);
        } else if let Some(stripped) = piece.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(stripped);
        } else {
            out.push_str(" + ");
            out.push_str(piece);
        }
    }
    out
}

fn needs_parens(s: &str) -> bool {
    s.chars().skip(1).any(|ch| ch == '+' || ch == '-') || s.contains('/') || s.contains('*')
}

impl<C: Ring> std::fmt::Debug for FlagClass<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}",
            self.poly.dump(&|v| format!("l{}", v + 1)).replace('\n', " + ")
        )
    }
}

impl<C: Ring> std::fmt::Debug for BaseClass<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}",
            self.poly.dump(&|v| format!("L{}", v + 1)).replace('\n', " + ")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Z = BigInt;

    fn lp(v: &[i64]) -> PolyP {
        PolyP::from_coeffs(v.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn flag_nf_basics() {
        let ctx = RingCtx::new(2);
        // l2^2 -> -l1^2
        let l2sq = MultiPoly::<Z>::variable(2, 1).pow(2);
        let nf = ctx.flag_nf(&l2sq);
        assert_eq!(nf, MultiPoly::variable(2, 0).pow(2).neg());
        // e_k of the squared roots dies for every k and g
        for g in 1..=4usize {
            let ctx = RingCtx::new(g);
            let squares: Vec<MultiPoly<Z>> =
                (0..g).map(|v| MultiPoly::variable(g, v).pow(2)).collect();
            for k in 1..=g {
                let mut e = MultiPoly::zero(g);
                for mask in 0u32..(1 << g) {
                    if (mask.count_ones() as usize) != k {
                        continue;
                    }
                    let mut term = MultiPoly::one(g);
                    for (v, sq) in squares.iter().enumerate() {
                        if mask >> v & 1 == 1 {
                            term = term.mul(sq);
                        }
                    }
                    e = e.add(&term);
                }
                assert!(ctx.flag_nf(&e).is_zero(), "e_{k} of squares, g={g}");
            }
        }
    }

    #[test]
    fn flag_and_base_basis_counts() {
        for g in 1..=4usize {
            let total: usize = (0..=g * g).map(|d| flag_monomials(g, d).len()).sum();
            let expect = (1..=g).map(|i| 2 * i).product::<usize>();
            assert_eq!(total, expect, "2^g g! for g={g}");
            let base_total: usize = (0..=g * (g + 1) / 2)
                .map(|d| base_monomials(g, d).len())
                .sum();
            assert_eq!(base_total, 1 << g);
            // top degree of the base ring is one-dimensional
            assert_eq!(base_monomials(g, g * (g + 1) / 2).len(), 1);
        }
    }

    #[test]
    fn flag_nf_is_idempotent_and_multiplicative() {
        let ctx = RingCtx::new(3);
        for seed in 0..8u64 {
            let f = random_root_poly(3, seed);
            let h = random_root_poly(3, seed + 100);
            let nf = ctx.flag_nf(&f);
            assert_eq!(ctx.flag_nf(&nf), nf);
            let a = ctx.flag_nf(&f.mul(&h));
            let b = ctx.flag_nf(&ctx.flag_nf(&f).mul(&ctx.flag_nf(&h)));
            assert_eq!(a, b);
        }
    }

    fn random_root_poly(g: usize, seed: u64) -> MultiPoly<Z> {
        let mut s = seed.wrapping_mul(0x2545f4914f6cdd1d).wrapping_add(7);
        let mut next = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            s
        };
        let mut p = MultiPoly::zero(g);
        for _ in 0..5 {
            let mut expo = vec![0u16; g];
            for e in expo.iter_mut() {
                *e = (next() % 4) as u16;
            }
            p = p.add(&MultiPoly::monomial(
                g,
                expo,
                Z::from((next() % 7) as i64 - 3),
            ));
        }
        p
    }

    #[test]
    fn base_nf_basics() {
        let ctx = RingCtx::new(2);
        // lambda_1^2 = 2 lambda_2
        let sq = MultiPoly::<Z>::variable(2, 0).pow(2);
        let nf = ctx.base_nf(&sq);
        assert_eq!(nf, MultiPoly::variable(2, 1).scalar_mul(&Z::from(2)));
        // the full square-free monomial is already normal
        let full = MultiPoly::<Z>::monomial(2, vec![1, 1], Z::from(1));
        assert_eq!(ctx.base_nf(&full), full);
    }

    #[test]
    fn lambda_embed_is_multiplicative() {
        let ctx = RingCtx::new(3);
        for seed in 0..6u64 {
            let a = random_base(3, seed);
            let b = random_base(3, seed + 50);
            let left = lambda_embed(&ctx, &a.mul(&b, &ctx));
            let right = lambda_embed(&ctx, &a).mul(&lambda_embed(&ctx, &b), &ctx);
            assert_eq!(left.poly, right.poly);
        }
    }

    fn random_base(g: usize, seed: u64) -> BaseClass<Z> {
        let mut s = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(3);
        let mut next = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            s
        };
        let ctx = RingCtx::new(g);
        let mut p = MultiPoly::zero(g);
        for _ in 0..3 {
            let mut expo = vec![0u16; g];
            for e in expo.iter_mut() {
                *e = (next() % 2) as u16;
            }
            p = p.add(&MultiPoly::monomial(
                g,
                expo,
                Z::from((next() % 5) as i64 - 2),
            ));
        }
        BaseClass::from_lambda_poly(&ctx, p)
    }

    #[test]
    fn gysin_calibration_and_zero() {
        let ctx = RingCtx::new(2);
        // -l1 + p l2 pushes to 1 + p
        let c = MultiPoly::<PolyP>::variable(2, 0)
            .scalar_mul(&PolyP::from_i64(-1))
            .add(&MultiPoly::variable(2, 1).scalar_mul(&PolyP::p()));
        let fc = FlagClass::from_root_poly(&ctx, c);
        let pushed = gysin_full(&ctx, &fc);
        assert_eq!(pushed.poly, MultiPoly::constant(2, lp(&[1, 1])));
        // constants push to zero for g >= 2
        let one = FlagClass::<PolyP>::one(2);
        assert!(gysin_full(&ctx, &one).is_zero());
    }

    #[test]
    fn gysin_agrees_with_single_step_segre() {
        // the block d_1 ... d_i applied to l_{i+1}^k equals
        // h_{k-i}(l_1..l_{i+1}) as polynomials
        for g in 2..=4usize {
            for i in 1..g {
                for k in i..=(i + 3) {
                    let mut cur = MultiPoly::<Z>::variable(g, i).pow(k);
                    for j in (1..=i).rev() {
                        cur = cur.jacobi_step(j);
                    }
                    let vars: Vec<usize> = (0..=i).collect();
                    assert_eq!(cur, complete::<Z>(g, &vars, k - i), "g={g} i={i} k={k}");
                }
            }
        }
    }

    #[test]
    fn projection_formula_on_random_pairs() {
        for g in 2..=3usize {
            let ctx = RingCtx::new(g);
            for seed in 0..50u64 {
                let b = random_base(g, seed).map_coeff(|c| PolyP::constant(c.clone()));
                let c = FlagClass::from_root_poly(
                    &ctx,
                    random_root_poly(g, seed + 1000).map_coeff(|c| PolyP::constant(c.clone())),
                );
                let lhs = gysin_full(&ctx, &lambda_embed(&ctx, &b).mul(&c, &ctx));
                let rhs = b.mul(&gysin_full(&ctx, &c), &ctx);
                assert_eq!(lhs.poly, rhs.poly, "projection formula g={g} seed={seed}");
            }
        }
    }

    #[test]
    fn degree_examples() {
        let ctx = RingCtx::new(1);
        let l1 = BaseClass::lambda_monomial(1, &[1], PolyP::one());
        assert_eq!(degree_map(&ctx, &l1).unwrap().to_string(), "1/24");
        let deuring = BaseClass::lambda_monomial(1, &[1], lp(&[-1, 1]));
        assert_eq!(degree_map(&ctx, &deuring).unwrap().to_string(), "(p-1)/24");
        let ctx2 = RingCtx::new(2);
        let l12 = BaseClass::lambda_monomial(2, &[1, 2], PolyP::one());
        assert_eq!(degree_map(&ctx2, &l12).unwrap().to_string(), "1/5760");
    }

    #[test]
    fn specialisation() {
        let ctx = RingCtx::new(2);
        let c = FlagClass::from_root_poly(
            &ctx,
            MultiPoly::<PolyP>::variable(2, 0).scalar_mul(&lp(&[-1, 0, 1])),
        );
        let r = c.map_coeff(|c| RatP::from_poly(c.clone()));
        let at0 = specialize_flag(&r, SpecializeAt::Zero).unwrap();
        assert_eq!(
            at0.poly,
            MultiPoly::variable(2, 0).scalar_mul(&BigRational::from_integer(BigInt::from(-1)))
        );
        let at3 = specialize_flag(&r, SpecializeAt::Prime(3)).unwrap();
        assert_eq!(
            at3.poly,
            MultiPoly::variable(2, 0).scalar_mul(&BigRational::from_integer(BigInt::from(8)))
        );
    }

    #[test]
    fn module_basis_presentation() {
        let ctx = RingCtx::new(2);
        // (p-1) l1 + (p-1) l2 presents as (p-1) lambda_1
        let c = MultiPoly::<PolyP>::variable(2, 0)
            .add(&MultiPoly::variable(2, 1))
            .scalar_mul(&lp(&[-1, 1]));
        let fc = FlagClass::from_root_poly(&ctx, c);
        assert_eq!(fc.to_text(&ctx), "(p-1)λ1");
        let terms = fc.mixed_terms(&ctx);
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].0, vec![1u8]);
        assert_eq!(terms[0].1, vec![0, 0]);
    }

    #[test]
    fn solver_and_determinant() {
        // [[1, p],[0, p-1]] x = [1+p, p-1]  =>  x = [1+p-p/(p-1)... solved exactly]
        let a = vec![vec![lp(&[1]), lp(&[0, 1])], vec![lp(&[0]), lp(&[-1, 1])]];
        let b = vec![lp(&[1, 1]), lp(&[-1, 1])];
        let x = solve_exact(&a, &b).unwrap();
        // second equation: (p-1) x2 = p-1 => x2 = 1; then x1 + p = 1+p
        assert_eq!(x[1], RatP::from_poly(lp(&[1])));
        assert_eq!(x[0], RatP::from_poly(lp(&[1])));
        assert_eq!(det_exact(&a), lp(&[-1, 1]));
        let s = vec![vec![lp(&[1]), lp(&[1])], vec![lp(&[1]), lp(&[1])]];
        assert!(solve_exact(&s, &b).is_none());
    }
}
