//! Exact coefficient domains: big integers, rationals, polynomials in the
//! formal prime `p`, and rational functions in `p`.
//!
//! `PolyP` is the ring Z[p]. `RatP` is its fraction field; elements whose
//! denominator has constant coefficient +-1 are exactly the elements of
//! Z{p}, the localisation of Z[p] at polynomials with constant term 1.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;
use std::fmt;

/// Minimal commutative-ring interface shared by all coefficient domains.
pub trait Ring: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Exact division: returns `None` unless `self = q * d` exactly.
    fn exact_div(&self, d: &Self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl Ring for BigInt {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn from_i64(n: i64) -> Self {
        BigInt::from(n)
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, d: &Self) -> Option<Self> {
        if num_traits::Zero::is_zero(d) {
            return None;
        }
        let (q, r) = self.div_rem(d);
        if num_traits::Zero::is_zero(&r) {
            Some(q)
        } else {
            None
        }
    }
}

impl Ring for BigRational {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, d: &Self) -> Option<Self> {
        if num_traits::Zero::is_zero(d) {
            None
        } else {
            Some(self / d)
        }
    }
}

/// A univariate polynomial in the formal variable `p` with arbitrary
/// precision integer coefficients. `coeffs[k]` is the coefficient of
/// `p^k`; the vector carries no trailing zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyP {
    coeffs: Vec<BigInt>,
}

impl PolyP {
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| Ring::is_zero(c)) {
            coeffs.pop();
        }
        PolyP { coeffs }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The variable `p` itself.
    pub fn p() -> Self {
        Self::monomial(<BigInt as Ring>::one(), 1)
    }

    /// `c * p^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        if Ring::is_zero(&c) {
            return Self::zero();
        }
        let mut coeffs = vec![<BigInt as Ring>::zero(); k + 1];
        coeffs[k] = c;
        PolyP { coeffs }
    }

    /// `p^b + p^(b-1) + ... + p^a` for a <= b; 0 when the range is empty.
    pub fn p_range_sum(a: usize, b: usize) -> Self {
        if a > b {
            return Self::zero();
        }
        let mut coeffs = vec![<BigInt as Ring>::zero(); b + 1];
        for k in a..=b {
            coeffs[k] = <BigInt as Ring>::one();
        }
        Self::from_coeffs(coeffs)
    }

    /// `p^k - 1`.
    pub fn p_pow_minus_one(k: usize) -> Self {
        Self::monomial(<BigInt as Ring>::one(), k).sub(&Self::one())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_coeff(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = <BigInt as Ring>::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rat(&self, x: &BigRational) -> BigRational {
        let mut acc = <BigRational as Ring>::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn pow(&self, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Greatest common divisor of all integer coefficients (non-negative).
    pub fn content(&self) -> BigInt {
        let mut c = <BigInt as Ring>::zero();
        for a in &self.coeffs {
            c = c.gcd(a);
        }
        c
    }

    /// Primitive part together with the content, sign normalised so that
    /// the primitive part has positive leading coefficient.
    fn primitive(&self) -> (BigInt, PolyP) {
        if self.is_zero() {
            return (<BigInt as Ring>::zero(), Self::zero());
        }
        let mut c = self.content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        let coeffs = self.coeffs.iter().map(|a| a / &c).collect();
        (c, PolyP { coeffs })
    }

    /// Polynomial gcd over Z[p] via the primitive remainder sequence,
    /// normalised with positive leading coefficient.
    pub fn gcd(&self, other: &PolyP) -> PolyP {
        if self.is_zero() {
            let (_, mut p) = other.primitive();
            let c = self.content().gcd(&other.content());
            p = p.mul(&PolyP::constant(c));
            return p;
        }
        if other.is_zero() {
            return other.gcd(self);
        }
        let cont = self.content().gcd(&other.content());
        let (_, mut a) = self.primitive();
        let (_, mut b) = other.primitive();
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            let (_, rp) = r.primitive();
            b = rp;
        }
        a.mul(&PolyP::constant(cont))
    }

    /// Pseudo-remainder: lc(b)^k * a mod b for suitable k.
    fn pseudo_rem(&self, b: &PolyP) -> PolyP {
        let db = b.degree().expect("pseudo_rem by zero");
        let lb = b.leading_coeff();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading_coeff();
            // r <- lb * r - lr * p^(dr-db) * b
            let mut scaled = r.mul(&PolyP::constant(lb.clone()));
            let shift = b.mul(&PolyP::monomial(lr, dr - db));
            scaled = scaled.sub(&shift);
            r = scaled;
            if r.degree() == Some(dr) {
                // cancellation must remove the leading term
                unreachable!("pseudo-division failed to reduce degree");
            }
        }
        r
    }

    /// Specialise: substitute the forgetful `p = 0`.
    pub fn at_zero(&self) -> BigInt {
        self.constant_coeff()
    }
}

impl Ring for PolyP {
    fn zero() -> Self {
        PolyP { coeffs: vec![] }
    }
    fn one() -> Self {
        Self::constant(<BigInt as Ring>::one())
    }
    fn from_i64(n: i64) -> Self {
        Self::constant(BigInt::from(n))
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + other.coeff(k));
        }
        Self::from_coeffs(coeffs)
    }
    fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) - other.coeff(k));
        }
        Self::from_coeffs(coeffs)
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || Ring::is_zero(other) {
            return Self::zero();
        }
        let mut coeffs = vec![<BigInt as Ring>::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if Ring::is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_coeffs(coeffs)
    }
    fn neg(&self) -> Self {
        PolyP {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
    /// Exact polynomial division over Z[p].
    fn exact_div(&self, d: &Self) -> Option<Self> {
        if Ring::is_zero(d) {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let dd = d.degree().unwrap();
        let ld = d.leading_coeff();
        let mut r = self.clone();
        let mut q = vec![<BigInt as Ring>::zero(); self.coeffs.len()];
        while let Some(dr) = r.degree() {
            if dr < dd {
                return None;
            }
            let lr = r.leading_coeff();
            let (c, rem) = lr.div_rem(&ld);
            if !Ring::is_zero(&rem) {
                return None;
            }
            q[dr - dd] = c.clone();
            r = r.sub(&d.mul(&PolyP::monomial(c, dr - dd)));
        }
        Some(Self::from_coeffs(q))
    }
}

impl fmt::Display for PolyP {
    /// Descending powers with explicit signs, e.g. `p^3-2*p+1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if Ring::is_zero(c) {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            if k == 0 {
                write!(f, "{abs}")?;
            } else if Ring::is_one(&abs) {
                if k == 1 {
                    write!(f, "p")?;
                } else {
                    write!(f, "p^{k}")?;
                }
            } else if k == 1 {
                write!(f, "{abs}*p")?;
            } else {
                write!(f, "{abs}*p^{k}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<i64> for PolyP {
    fn from(n: i64) -> Self {
        Self::from_i64(n)
    }
}

/// A rational function in `p`, stored in lowest terms. The denominator's
/// lowest-order nonzero coefficient is kept positive so the representation
/// is canonical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatP {
    num: PolyP,
    den: PolyP,
}

impl RatP {
    pub fn new(num: PolyP, den: PolyP) -> Self {
        assert!(!Ring::is_zero(&den), "zero denominator in RatP");
        let mut r = RatP { num, den };
        r.reduce();
        r
    }

    pub fn from_poly(num: PolyP) -> Self {
        RatP {
            num,
            den: PolyP::one(),
        }
    }

    pub fn num(&self) -> &PolyP {
        &self.num
    }

    pub fn den(&self) -> &PolyP {
        &self.den
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = PolyP::one();
            return;
        }
        let g = self.num.gcd(&self.den);
        if !g.is_one() {
            self.num = Ring::exact_div(&self.num, &g).expect("gcd divides numerator");
            self.den = Ring::exact_div(&self.den, &g).expect("gcd divides denominator");
        }
        // normalise the sign of the lowest nonzero denominator coefficient
        let low = self
            .den
            .coeffs()
            .iter()
            .find(|c| !Ring::is_zero(*c))
            .cloned()
            .unwrap();
        if low.is_negative() {
            self.num = Ring::neg(&self.num);
            self.den = Ring::neg(&self.den);
        }
    }

    /// True when the element lies in Z[p].
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The Z[p]-numerator when the element is a polynomial.
    pub fn as_polynomial(&self) -> Option<&PolyP> {
        if self.is_polynomial() {
            Some(&self.num)
        } else {
            None
        }
    }

    /// True when the element lies in Z{p}: the denominator's constant
    /// coefficient is a unit of Z.
    pub fn in_z_brace_p(&self) -> bool {
        let c0 = self.den.constant_coeff();
        Ring::is_one(&c0) || Ring::is_one(&(-&c0))
    }

    pub fn inv(&self) -> Option<RatP> {
        if self.num.is_zero() {
            return None;
        }
        Some(RatP::new(self.den.clone(), self.num.clone()))
    }

    pub fn eval_rat(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval_rat(x);
        if Ring::is_zero(&d) {
            return None;
        }
        Some(self.num.eval_rat(x) / d)
    }

    /// The p-adic valuation of the rational function: ord_p(num) - ord_p(den).
    pub fn p_valuation(&self) -> Option<i64> {
        if self.num.is_zero() {
            return None;
        }
        let ord = |q: &PolyP| q.coeffs().iter().position(|c| !Ring::is_zero(c)).unwrap() as i64;
        Some(ord(&self.num) - ord(&self.den))
    }
}

impl Ring for RatP {
    fn zero() -> Self {
        Self::from_poly(PolyP::zero())
    }
    fn one() -> Self {
        Self::from_poly(PolyP::one())
    }
    fn from_i64(n: i64) -> Self {
        Self::from_poly(PolyP::from_i64(n))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        RatP::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }
    fn sub(&self, other: &Self) -> Self {
        RatP::new(
            self.num.mul(&other.den).sub(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }
    fn mul(&self, other: &Self) -> Self {
        RatP::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }
    fn neg(&self) -> Self {
        RatP {
            num: Ring::neg(&self.num),
            den: self.den.clone(),
        }
    }
    fn exact_div(&self, d: &Self) -> Option<Self> {
        let i = d.inv()?;
        Some(self.mul(&i))
    }
}

impl fmt::Display for RatP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            return write!(f, "{}", self.num);
        }
        let num_simple = self.num.coeffs().iter().filter(|c| !Ring::is_zero(*c)).count() <= 1;
        let den_simple = self.den.coeffs().iter().filter(|c| !Ring::is_zero(*c)).count() <= 1
            && !self.den.leading_coeff().is_negative();
        if num_simple && !self.num.leading_coeff().is_negative() {
            write!(f, "{}", self.num)?;
        } else {
            write!(f, "({})", self.num)?;
        }
        write!(f, "/")?;
        if den_simple {
            write!(f, "{}", self.den)
        } else {
            write!(f, "({})", self.den)
        }
    }
}

impl fmt::Debug for RatP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<PolyP> for RatP {
    fn from(p: PolyP) -> Self {
        Self::from_poly(p)
    }
}

/// Format a rational as `a/b` in lowest terms (`a` when integral).
pub fn format_rational(q: &BigRational) -> String {
    if Ring::is_one(q.denom()) {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(v: &[i64]) -> PolyP {
        PolyP::from_coeffs(v.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn display_descending_powers() {
        assert_eq!(poly(&[1, 1, 1, 1]).to_string(), "p^3+p^2+p+1");
        assert_eq!(poly(&[-1, 0, 0, 0, 1]).to_string(), "p^4-1");
        assert_eq!(poly(&[5, -2]).to_string(), "-2*p+5");
        assert_eq!(PolyP::zero().to_string(), "0");
    }

    #[test]
    fn exact_division() {
        let a = poly(&[-1, 0, 0, 0, 1]); // p^4 - 1
        let b = poly(&[1, 1]); // p + 1
        let q = Ring::exact_div(&a, &b).unwrap();
        assert_eq!(q, poly(&[-1, 1, -1, 1])); // p^3 - p^2 + p - 1
        assert!(Ring::exact_div(&a, &poly(&[2, 1])).is_none());
    }

    #[test]
    fn gcd_and_ratp_reduction() {
        let a = poly(&[-1, 0, 1]); // p^2 - 1
        let b = poly(&[1, 1]); // p + 1
        assert_eq!(a.gcd(&b), b);
        let r = RatP::new(poly(&[0, -1, 0, 1]), poly(&[-1, 1])); // (p^3-p)/(p-1)
        assert!(r.is_polynomial());
        assert_eq!(r.num(), &poly(&[0, 1, 1])); // p^2 + p
    }

    #[test]
    fn z_brace_p_membership() {
        let r = RatP::new(poly(&[1]), poly(&[1, 1])); // 1/(p+1)
        assert!(r.in_z_brace_p());
        let s = RatP::new(poly(&[1]), poly(&[0, 1])); // 1/p
        assert!(!s.in_z_brace_p());
        assert_eq!(s.p_valuation(), Some(-1));
    }

    proptest! {
        #[test]
        fn ring_axioms(a in proptest::collection::vec(-9i64..10, 0..5),
                       b in proptest::collection::vec(-9i64..10, 0..5),
                       c in proptest::collection::vec(-9i64..10, 0..5)) {
            let (a, b, c) = (poly(&a), poly(&b), poly(&c));
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn mul_then_exact_div_roundtrips(a in proptest::collection::vec(-9i64..10, 1..5),
                                         b in proptest::collection::vec(-9i64..10, 1..5)) {
            let (a, b) = (poly(&a), poly(&b));
            prop_assume!(!a.is_zero() && !b.is_zero());
            let ab = a.mul(&b);
            prop_assert_eq!(Ring::exact_div(&ab, &b).unwrap(), a);
        }

        #[test]
        fn ratp_field_ops(a in proptest::collection::vec(-5i64..6, 1..4),
                          b in proptest::collection::vec(-5i64..6, 1..4)) {
            let (a, b) = (poly(&a), poly(&b));
            prop_assume!(!a.is_zero() && !b.is_zero());
            let r = RatP::new(a.clone(), b.clone());
            let back = r.mul(&RatP::from_poly(b));
            prop_assert_eq!(back, RatP::from_poly(a));
        }
    }
}
