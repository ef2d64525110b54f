//! Flag-counting polynomials in the formal prime, brute-force finite
//! field oracles for them, necklace numbers, and the exact zeta constants
//! entering mass formulas.

use crate::finals::{final_type_of, fragments_and_orbits, is_final, FinalsError, OrbitKind};
use crate::scalars::{PolyP, Ring};
use crate::weyl::SignedPermutation;
use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountingError {
    #[error("oracle instance too large: would explore more than {0} states")]
    OracleTooLarge(u64),
    #[error("{0} is not a prime power q = p^k with k <= 2")]
    BadPrimePower(u64),
    #[error(transparent)]
    Finals(#[from] FinalsError),
}

const ORACLE_STATE_BUDGET: u64 = 10_000_000;

/// The number of complete flags in an n-dimensional space over the field
/// with p^m elements, as an exact polynomial in p:
/// product over k = 2..n of (q^k - 1)/(q - 1) with q = p^m.
pub fn gamma_e(n: usize, m: usize) -> PolyP {
    assert!(m >= 1);
    let mut acc = PolyP::one();
    for k in 2..=n {
        let num = PolyP::p_pow_minus_one(m * k);
        let den = PolyP::p_pow_minus_one(m);
        let factor = num.exact_div(&den).expect("(q^k-1)/(q-1) divides exactly");
        acc = acc.mul(&factor);
    }
    acc
}

/// The number of complete self-dual flags for the unitary form on an
/// n-dimensional space over the field with p^{2m} elements: the product
/// over d = n, n-2, ... (d >= 2) of the isotropic-line counts
/// (q^d - (-1)^d)(q^{d-1} - (-1)^{d-1})/(q^2 - 1) with q = p^m.
pub fn gamma_o(n: usize, m: usize) -> PolyP {
    assert!(m >= 1);
    // q^k - (-1)^k with q = p^m
    let q_pow_pm = |k: usize| {
        let s = if k % 2 == 0 { -1 } else { 1 };
        PolyP::monomial(BigInt::from(1), m * k).add(&PolyP::from_i64(s))
    };
    let mut acc = PolyP::one();
    let mut d = n;
    while d >= 2 {
        let num = q_pow_pm(d).mul(&q_pow_pm(d - 1));
        let den = PolyP::p_pow_minus_one(2 * m);
        let factor = num
            .exact_div(&den)
            .expect("isotropic line count divides exactly");
        acc = acc.mul(&factor);
        d -= 2;
    }
    acc
}

/// The flag-count factor of a final element: over its fragment orbits,
/// gamma_o(#I, #S/2) for odd orbits and gamma_e(#I, #S) for even pairs.
pub fn gamma_of(w: &SignedPermutation) -> Result<PolyP, CountingError> {
    if !is_final(w) {
        return Err(FinalsError::NotFinal(w.to_string()).into());
    }
    let fo = fragments_and_orbits(&final_type_of(w))?;
    let mut acc = PolyP::one();
    for orbit in &fo.orbits {
        let factor = match orbit.kind {
            OrbitKind::Odd => gamma_o(orbit.fragment_len, orbit.member_count / 2),
            OrbitKind::EvenPair => gamma_e(orbit.fragment_len, orbit.member_count),
        };
        acc = acc.mul(&factor);
    }
    Ok(acc)
}

/// Small finite fields GF(q) for q = p or p^2, table based.
mod gf {
    use super::CountingError;

    pub struct Gf {
        pub q: usize,
        add: Vec<u16>,
        mul: Vec<u16>,
    }

    fn is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    impl Gf {
        pub fn new(q: usize) -> Result<Gf, CountingError> {
            if is_prime(q as u64) {
                return Ok(Self::prime_field(q));
            }
            let p = (q as f64).sqrt().round() as usize;
            if p * p != q || !is_prime(p as u64) {
                return Err(CountingError::BadPrimePower(q as u64));
            }
            Ok(Self::quadratic_extension(p))
        }

        fn prime_field(p: usize) -> Gf {
            let mut add = vec![0u16; p * p];
            let mut mul = vec![0u16; p * p];
            for a in 0..p {
                for b in 0..p {
                    add[a * p + b] = ((a + b) % p) as u16;
                    mul[a * p + b] = ((a * b) % p) as u16;
                }
            }
            Gf { q: p, add, mul }
        }

        /// GF(p^2) = GF(p)[t]/(t^2 + b0 t + c0) for an irreducible
        /// quadratic; elements a + b*t are encoded as a + b*p.
        fn quadratic_extension(p: usize) -> Gf {
            let (b0, c0) = (0..p)
                .flat_map(|b| (0..p).map(move |c| (b, c)))
                .find(|&(b, c)| (0..p).all(|x| (x * x + b * x + c) % p != 0))
                .expect("an irreducible quadratic exists over any prime field");
            let q = p * p;
            let mut add = vec![0u16; q * q];
            let mut mul = vec![0u16; q * q];
            let enc = |a: usize, b: usize| a + b * p;
            for x in 0..q {
                let (a1, b1) = (x % p, x / p);
                for y in 0..q {
                    let (a2, b2) = (y % p, y / p);
                    add[x * q + y] = enc((a1 + a2) % p, (b1 + b2) % p) as u16;
                    // (a1 + b1 t)(a2 + b2 t) with t^2 = -b0 t - c0
                    let tt = b1 * b2 % p;
                    let lin = (a1 * b2 + a2 * b1 + tt * ((p - b0) % p)) % p;
                    let con = (a1 * a2 + tt * ((p - c0) % p)) % p;
                    mul[x * q + y] = enc(con, lin) as u16;
                }
            }
            Gf { q, add, mul }
        }

        pub fn add(&self, a: usize, b: usize) -> usize {
            self.add[a * self.q + b] as usize
        }

        pub fn mul(&self, a: usize, b: usize) -> usize {
            self.mul[a * self.q + b] as usize
        }

        pub fn pow(&self, mut a: usize, mut e: usize) -> usize {
            let mut acc = 1 % self.q;
            while e > 0 {
                if e & 1 == 1 {
                    acc = self.mul(acc, a);
                }
                a = self.mul(a, a);
                e >>= 1;
            }
            acc
        }
    }
}

use gf::Gf;

struct Budget {
    used: u64,
}

impl Budget {
    fn spend(&mut self, n: u64) -> Result<(), CountingError> {
        self.used += n;
        if self.used > ORACLE_STATE_BUDGET {
            Err(CountingError::OracleTooLarge(ORACLE_STATE_BUDGET))
        } else {
            Ok(())
        }
    }
}

type Vector = Vec<usize>;

fn all_vectors(field: &Gf, n: usize) -> Vec<Vector> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * field.q);
        for v in &out {
            for c in 0..field.q {
                let mut w = v.clone();
                w.push(c);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// The span of `subspace` (a full, sorted list of its vectors) and one
/// extra vector, again as a sorted full vector list.
fn extend_span(field: &Gf, subspace: &[Vector], extra: &Vector) -> Vec<Vector> {
    let mut out = Vec::with_capacity(subspace.len() * field.q);
    for s in subspace {
        for c in 0..field.q {
            let v: Vector = s
                .iter()
                .zip(extra.iter())
                .map(|(&a, &b)| field.add(a, field.mul(c, b)))
                .collect();
            out.push(v);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Exhaustive count of complete flags in F_q^n by enumerating subspace
/// chains; refuses instances beyond the fixed state budget.
pub fn flag_count_oracle(n: usize, q: usize) -> Result<u64, CountingError> {
    if (q as u64).pow(n as u32) > 200_000 {
        return Err(CountingError::OracleTooLarge(ORACLE_STATE_BUDGET));
    }
    let field = Gf::new(q)?;
    let mut budget = Budget { used: 0 };
    let vectors = all_vectors(&field, n);
    let zero = vec![vec![0usize; n]];

    fn count(
        field: &Gf,
        n: usize,
        vectors: &[Vector],
        current: &[Vector],
        dim: usize,
        budget: &mut Budget,
    ) -> Result<u64, CountingError> {
        if dim == n {
            return Ok(1);
        }
        let mut seen: std::collections::HashSet<Vec<Vector>> = Default::default();
        let mut total = 0u64;
        for v in vectors {
            budget.spend(1)?;
            if current.binary_search(v).is_ok() {
                continue;
            }
            let bigger = extend_span(field, current, v);
            if seen.contains(&bigger) {
                continue;
            }
            total += count(field, n, vectors, &bigger, dim + 1, budget)?;
            seen.insert(bigger);
        }
        Ok(total)
    }
    count(&field, n, &vectors, &zero, 0, &mut budget)
}

/// Exhaustive count of complete self-dual flags in F_{q^2}^n under the
/// Hermitian form sum u_i v_i^q. A self-dual flag is determined by its
/// chain of totally isotropic subspaces of dimensions 1..floor(n/2).
pub fn selfdual_flag_count_oracle(n: usize, q: usize) -> Result<u64, CountingError> {
    if (q as u64 * q as u64).pow(n as u32) > 200_000 {
        return Err(CountingError::OracleTooLarge(ORACLE_STATE_BUDGET));
    }
    let field = Gf::new(q * q)?;
    let mut budget = Budget { used: 0 };
    let vectors = all_vectors(&field, n);
    let zero = vec![vec![0usize; n]];
    let herm = |field: &Gf, u: &Vector, v: &Vector| -> usize {
        let mut acc = 0usize;
        for (&a, &b) in u.iter().zip(v.iter()) {
            acc = field.add(acc, field.mul(a, field.pow(b, q)));
        }
        acc
    };

    fn count(
        field: &Gf,
        half: usize,
        vectors: &[Vector],
        current: &[Vector],
        basis: &[Vector],
        herm: &dyn Fn(&Gf, &Vector, &Vector) -> usize,
        budget: &mut Budget,
    ) -> Result<u64, CountingError> {
        if basis.len() == half {
            return Ok(1);
        }
        let mut seen: std::collections::HashSet<Vec<Vector>> = Default::default();
        let mut total = 0u64;
        for v in vectors {
            budget.spend(1)?;
            if current.binary_search(v).is_ok() {
                continue;
            }
            let isotropic = herm(field, v, v) == 0
                && basis
                    .iter()
                    .all(|b| herm(field, v, b) == 0 && herm(field, b, v) == 0);
            if !isotropic {
                continue;
            }
            let bigger = extend_span(field, current, v);
            if seen.contains(&bigger) {
                continue;
            }
            let mut basis2 = basis.to_vec();
            basis2.push(v.clone());
            total += count(field, half, vectors, &bigger, &basis2, herm, budget)?;
            seen.insert(bigger);
        }
        Ok(total)
    }
    count(&field, n / 2, &vectors, &zero, &[], &herm, &mut budget)
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Necklace-of-sets numbers by the recurrence
/// a(0) = 1, a(n) = 1 + sum_{j<n} C(n,j) a(j).
pub fn necklace_count(g: usize) -> BigInt {
    let mut a: Vec<BigInt> = vec![BigInt::from(1)];
    for n in 1..=g {
        let mut s = BigInt::from(1);
        for (j, aj) in a.iter().enumerate() {
            s += binomial(n, j) * aj;
        }
        a.push(s);
    }
    a[g].clone()
}

/// Independent oracle for the necklace numbers: apply (x d/dx) g times to
/// 1/(1-x), exactly, and evaluate at x = 1/2. The state is kept as
/// P(x)/(1-x)^d with integer P.
pub fn necklace_series_oracle(g: usize) -> BigRational {
    let mut p_coeffs: Vec<BigInt> = vec![BigInt::from(1)];
    let mut d: usize = 1;
    for _ in 0..g {
        // x d/dx [P/(1-x)^d] = (x P'(x)(1-x) + d x P) / (1-x)^{d+1}
        let deriv: Vec<BigInt> = (1..p_coeffs.len())
            .map(|k| &p_coeffs[k] * BigInt::from(k))
            .collect();
        let mut x_deriv = vec![BigInt::from(0)];
        x_deriv.extend(deriv);
        let mut next = vec![BigInt::from(0); p_coeffs.len() + 2];
        for (k, c) in x_deriv.iter().enumerate() {
            next[k] += c;
            next[k + 1] -= c;
        }
        for (k, c) in p_coeffs.iter().enumerate() {
            next[k + 1] += c * BigInt::from(d);
        }
        while next.last().map_or(false, |c| c.is_zero()) {
            next.pop();
        }
        p_coeffs = next;
        d += 1;
    }
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut val = BigRational::from_integer(BigInt::from(0));
    let mut pw = BigRational::from_integer(BigInt::from(1));
    for c in &p_coeffs {
        val += BigRational::from_integer(c.clone()) * &pw;
        pw *= &half;
    }
    val * BigRational::from_integer(BigInt::from(2).pow(d as u32))
}

/// Bernoulli number B_m (B_1 = -1/2 convention) by the convolution
/// recurrence sum_{j<=m} C(m+1,j) B_j = 0.
pub fn bernoulli(m: usize) -> BigRational {
    let mut b: Vec<BigRational> = Vec::with_capacity(m + 1);
    for n in 0..=m {
        if n == 0 {
            b.push(BigRational::from_integer(BigInt::from(1)));
            continue;
        }
        let mut s = BigRational::from_integer(BigInt::from(0));
        for (j, bj) in b.iter().enumerate() {
            s += BigRational::from_integer(binomial(n + 1, j)) * bj;
        }
        b.push(-s / BigRational::from_integer(BigInt::from(n as i64 + 1)));
    }
    b[m].clone()
}

/// zeta(1-2j) = -B_{2j}/(2j), exactly.
pub fn zeta_one_minus(two_j: usize) -> BigRational {
    assert!(two_j >= 2 && two_j % 2 == 0);
    -bernoulli(two_j) / BigRational::from_integer(BigInt::from(two_j as i64))
}

/// The stack degree of lambda_1 ... lambda_g:
/// (-1)^{g(g+1)/2} * prod_{j=1..g} zeta(1-2j)/2.
pub fn hm_degree(g: usize) -> BigRational {
    assert!(g >= 1);
    let mut acc = BigRational::from_integer(BigInt::from(1));
    for j in 1..=g {
        acc *= zeta_one_minus(2 * j) / BigRational::from_integer(BigInt::from(2));
    }
    if (g * (g + 1) / 2) % 2 == 1 {
        acc = -acc;
    }
    acc
}
