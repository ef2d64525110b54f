//! Cycle classes of the strata: degeneracy-locus classes [U_w] on the
//! flag space, their Gysin pushdowns, E-O classes [V_nu] on the base,
//! closed p-rank and a-number formulas, the Pfaffian-sum interpolation
//! formula (experimental), Pieri products, and the tau map.

use crate::counting::gamma_of;
use crate::finals::{
    final_type_of, is_final, type_of_young, young_of_type, FinalType, YoungDiagram,
};
use crate::poly::{fulton_polynomial, qtilde_beta, determinant, FultonCache, MultiPoly};
use crate::rings::{
    base_monomials, flag_monomials, gysin_full, solve_exact, BaseClass, FlagClass, RingCtx,
};
use crate::scalars::{PolyP, RatP, Ring};
use crate::weyl::{enumerate, Filter, SignedPermutation};
use num_bigint::BigInt;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

/// Shared computation context for one genus: ring rewrite tables, the
/// operator-chain cache, and memoised classes. Parallel per-element
/// computations share it behind the internal locks.
pub struct StrataCtx {
    g: usize,
    pub ring: RingCtx,
    fulton: FultonCache,
    u_memo: RwLock<HashMap<SignedPermutation, Arc<FlagClass<PolyP>>>>,
    v_memo: RwLock<HashMap<SignedPermutation, Arc<BaseClass<PolyP>>>>,
}

impl StrataCtx {
    pub fn new(g: usize) -> Self {
        StrataCtx {
            g,
            ring: RingCtx::new(g),
            fulton: FultonCache::new(g),
            u_memo: RwLock::new(HashMap::new()),
            v_memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn g(&self) -> usize {
        self.g
    }

    /// [U_w]: the operator chain over the seed, evaluated at
    /// x_i = -l_i, y_j = p l_j, in flag normal form. Homogeneous of
    /// degree codim(w); anything else is a fatal inconsistency.
    pub fn class_u(&self, w: &SignedPermutation) -> Arc<FlagClass<PolyP>> {
        assert_eq!(w.g(), self.g);
        if let Some(hit) = self.u_memo.read().unwrap().get(w) {
            return hit.clone();
        }
        let g = self.g;
        let word = w.reduced_word();
        let pw = fulton_polynomial(&self.fulton, &word);
        let mut images: Vec<MultiPoly<PolyP>> = Vec::with_capacity(2 * g);
        for i in 0..g {
            images.push(MultiPoly::variable(g, i).scalar_mul(&PolyP::from_i64(-1)));
        }
        for i in 0..g {
            images.push(MultiPoly::variable(g, i).scalar_mul(&PolyP::p()));
        }
        let substituted = pw.substitute_into(|c: &BigInt| PolyP::constant(c.clone()), &images);
        let class = FlagClass::from_root_poly(&self.ring, substituted);
        assert!(
            class.is_homogeneous_of(w.codim()) && !class.is_zero(),
            "[U_w] must be homogeneous of degree codim(w) = {} for w = {w}",
            w.codim()
        );
        let arc = Arc::new(class);
        self.u_memo
            .write()
            .unwrap()
            .entry(w.clone())
            .or_insert(arc)
            .clone()
    }

    /// The Gysin pushdown of [U_w] to the base.
    pub fn push_u(&self, w: &SignedPermutation) -> BaseClass<PolyP> {
        gysin_full(&self.ring, &self.class_u(w))
    }

    /// [V_nu] for a final element: the pushdown divided by gamma(w).
    /// The division must be exact over Z[p]; failure is fatal.
    pub fn class_v(&self, w: &SignedPermutation) -> Arc<BaseClass<PolyP>> {
        assert!(is_final(w), "class_v requires a final element, got {w}");
        if let Some(hit) = self.v_memo.read().unwrap().get(w) {
            return hit.clone();
        }
        let gamma = gamma_of(w).expect("gamma of a final element");
        let pushed = self.push_u(w);
        let divided = pushed.map_coeff(|c| {
            c.exact_div(&gamma)
                .expect("pushdown coefficients must divide exactly by gamma")
        });
        let arc = Arc::new(divided);
        self.v_memo
            .write()
            .unwrap()
            .entry(w.clone())
            .or_insert(arc)
            .clone()
    }

    pub fn class_v_of_type(&self, nu: &FinalType) -> Arc<BaseClass<PolyP>> {
        self.class_v(&crate::finals::final_of_type(nu))
    }

    pub fn class_v_of_diagram(&self, y: &YoungDiagram) -> Arc<BaseClass<PolyP>> {
        self.class_v_of_type(&type_of_young(y))
    }

    /// Expand a homogeneous flag class over the degeneracy-class basis
    /// of its degree. The change of basis is invertible over the
    /// rational function field; singularity is a fatal inconsistency.
    pub fn expand_in_strata_u(&self, c: &FlagClass<PolyP>) -> BTreeMap<SignedPermutation, RatP> {
        let g = self.g;
        let d = match c.degree() {
            None => return BTreeMap::new(),
            Some(d) => d,
        };
        assert!(c.is_homogeneous_of(d), "expansion requires homogeneity");
        let monos = flag_monomials(g, d);
        let ws: Vec<SignedPermutation> = enumerate(g, Filter::All)
            .into_iter()
            .filter(|w| w.codim() == d)
            .collect();
        assert_eq!(monos.len(), ws.len(), "basis size mismatch in degree {d}");
        // columns index basis classes; rows index monomials
        let a: Vec<Vec<PolyP>> = monos
            .iter()
            .map(|m| {
                ws.iter()
                    .map(|w| coeff_of_mono(self.class_u(w).poly(), m))
                    .collect()
            })
            .collect();
        let b: Vec<PolyP> = monos.iter().map(|m| coeff_of_mono(c.poly(), m)).collect();
        let x = solve_exact(&a, &b)
            .expect("degeneracy classes of one degree must be linearly independent");
        ws.into_iter().zip(x).collect()
    }

    /// Expand a homogeneous base class over the E-O class basis of its
    /// degree.
    pub fn expand_in_strata_v(&self, c: &BaseClass<PolyP>) -> BTreeMap<SignedPermutation, RatP> {
        let g = self.g;
        let d = match c.degree() {
            None => return BTreeMap::new(),
            Some(d) => d,
        };
        assert!(c.is_homogeneous_of(d), "expansion requires homogeneity");
        let monos = base_monomials(g, d);
        let finals: Vec<SignedPermutation> = enumerate(g, Filter::Final)
            .into_iter()
            .filter(|w| g * (g + 1) / 2 - w.length() == d)
            .collect();
        assert_eq!(monos.len(), finals.len(), "basis size mismatch in degree {d}");
        let a: Vec<Vec<PolyP>> = monos
            .iter()
            .map(|m| {
                finals
                    .iter()
                    .map(|w| coeff_of_mono(self.class_v(w).poly(), m))
                    .collect()
            })
            .collect();
        let b: Vec<PolyP> = monos.iter().map(|m| coeff_of_mono(c.poly(), m)).collect();
        let x = solve_exact(&a, &b).expect("E-O classes of one degree must be linearly independent");
        finals.into_iter().zip(x).collect()
    }

    /// The tau map: the pushdown of [U_w] expanded over the E-O basis.
    /// `None` when the pushdown vanishes; more than one nonzero
    /// coordinate contradicts the uniqueness theorem and is fatal.
    pub fn tau_of(&self, w: &SignedPermutation) -> Option<(SignedPermutation, RatP)> {
        let pushed = self.push_u(w);
        if pushed.is_zero() {
            return None;
        }
        let coords = self.expand_in_strata_v(&pushed);
        let nonzero: Vec<(SignedPermutation, RatP)> = coords
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        assert!(
            nonzero.len() == 1,
            "pushdown of [U_{w}] must be supported on a single E-O class, got {}",
            nonzero.len()
        );
        nonzero.into_iter().next()
    }
}

fn coeff_of_mono<C: Ring>(poly: &MultiPoly<C>, m: &[u16]) -> C {
    poly.terms()
        .find(|(k, _)| k.as_slice() == m)
        .map(|(_, c)| c.clone())
        .unwrap_or_else(C::zero)
}

/// Closed-formula class of the p-rank <= f locus:
/// (p-1)(p^2-1)...(p^{g-f}-1) lambda_{g-f}.
pub fn prank_class(g: usize, f: usize) -> BaseClass<PolyP> {
    assert!(f <= g);
    let mut coeff = PolyP::one();
    for k in 1..=(g - f) {
        coeff = coeff.mul(&PolyP::p_pow_minus_one(k));
    }
    if f == g {
        BaseClass::lambda_monomial(g, &[], coeff)
    } else {
        BaseClass::lambda_monomial(g, &[g - f], coeff)
    }
}

/// Chern sequence of the Frobenius twist: c_k = p^k lambda_k.
fn chern_twist(g: usize) -> Vec<MultiPoly<PolyP>> {
    let mut a = vec![MultiPoly::one(g)];
    for k in 1..=g {
        let mut e = vec![0u16; g];
        e[k - 1] = 1;
        a.push(MultiPoly::monomial(
            g,
            e,
            PolyP::monomial(BigInt::from(1), k),
        ));
    }
    a
}

/// Chern sequence of the dual: c_k = (-1)^k lambda_k.
fn chern_dual(g: usize) -> Vec<MultiPoly<PolyP>> {
    let mut a = vec![MultiPoly::one(g)];
    for k in 1..=g {
        let mut e = vec![0u16; g];
        e[k - 1] = 1;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        a.push(MultiPoly::monomial(g, e, PolyP::from_i64(sign)));
    }
    a
}

/// The a-number stratum class [T_a] by the Pfaffian double sum:
/// sum over subsets beta of the staircase {a..1} of
/// Q_beta(twist) Q_{staircase minus beta}(dual).
pub fn anumber_class(ctx: &StrataCtx, a: usize) -> BaseClass<PolyP> {
    let g = ctx.g;
    assert!((1..=g).contains(&a));
    let twist = chern_twist(g);
    let dual = chern_dual(g);
    let rho: Vec<usize> = (1..=a).rev().collect();
    let mut acc = MultiPoly::<PolyP>::zero(g);
    for mask in 0u32..(1 << a) {
        let beta: Vec<usize> = rho
            .iter()
            .copied()
            .filter(|&x| mask >> (x - 1) & 1 == 1)
            .collect();
        let compl: Vec<usize> = rho
            .iter()
            .copied()
            .filter(|&x| mask >> (x - 1) & 1 == 0)
            .collect();
        let q1 = qtilde_beta(&beta, &twist, g);
        let q2 = qtilde_beta(&compl, &dual, g);
        acc = acc.add(&q1.mul(&q2));
    }
    BaseClass::from_lambda_poly(&ctx.ring, acc)
}

/// The excess of a strict partition: |xi| - r(r+1)/2.
pub fn excess(xi: &[usize]) -> i64 {
    let r = xi.len() as i64;
    xi.iter().map(|&x| x as i64).sum::<i64>() - r * (r + 1) / 2
}

/// Intertwining number of two disjoint strict partitions:
/// sum_i i * #{j : xi_i > eta_j > xi_{i+1}} (xi_k = 0 past the end).
pub fn intertwining(xi: &[usize], eta: &[usize]) -> usize {
    let at = |k: usize| -> usize {
        if k == 0 {
            usize::MAX // xi_0 treated as +infinity
        } else {
            xi.get(k - 1).copied().unwrap_or(0)
        }
    };
    let mut total = 0;
    for i in 1..=xi.len() {
        let hi = at(i);
        let lo = at(i + 1);
        total += i * eta.iter().filter(|&&e| hi > e && e > lo).count();
    }
    total
}

/// Bundle interpretation for the experimental interpolation formula.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum KtConfig {
    /// c_k of the rank-m dual sub-bundle read as (-1)^k lambda_k for
    /// k <= m and 0 beyond.
    TruncatedHodge,
}

/// Experimental interpolation formula for a general E-O class, behind a
/// configuration for the sub-bundle Chern classes. Validated against
/// `class_v` by `kt_matches`.
pub fn kt_class(ctx: &StrataCtx, y: &YoungDiagram, config: KtConfig) -> BaseClass<PolyP> {
    let g = ctx.g;
    let xi: Vec<usize> = y.parts().iter().map(|&p| p as usize).collect();
    let xi_prime: Vec<usize> = y.complement().parts().iter().map(|&p| p as usize).collect();
    let rp = xi_prime.len();
    let twist = chern_twist(g);
    let dual = chern_dual(g);
    let KtConfig::TruncatedHodge = config;
    // c_k(E^*_m): truncated dual Chern classes
    let dual_trunc = |k: i64, m: usize| -> MultiPoly<PolyP> {
        if k < 0 || k as usize > m {
            MultiPoly::zero(g)
        } else if k == 0 {
            MultiPoly::one(g)
        } else {
            dual[k as usize].clone()
        }
    };
    let mut acc = MultiPoly::<PolyP>::zero(g);
    // beta: strict partitions of length rp, componentwise >= xi_prime
    let betas = strict_partitions_at_least(g, &xi_prime);
    for beta in &betas {
        // the determinant det(c_{beta_i - xi'_j}(E^*_{g - xi'_j}))
        let det = if rp == 0 {
            MultiPoly::one(g)
        } else {
            let mat: Vec<Vec<MultiPoly<PolyP>>> = (0..rp)
                .map(|i| {
                    (0..rp)
                        .map(|j| {
                            dual_trunc(beta[i] as i64 - xi_prime[j] as i64, g - xi_prime[j])
                        })
                        .collect()
                })
                .collect();
            determinant(&mat)
        };
        if det.is_zero() {
            continue;
        }
        // alpha: subsets of {1..g} disjoint from beta
        let avail: Vec<usize> = (1..=g).filter(|k| !beta.contains(k)).collect();
        for amask in 0u32..(1 << avail.len()) {
            let mut alpha: Vec<usize> = avail
                .iter()
                .enumerate()
                .filter(|(t, _)| amask >> t & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            alpha.sort_unstable_by(|a, b| b.cmp(a));
            let mut union: Vec<usize> = alpha.iter().chain(beta.iter()).copied().collect();
            union.sort_unstable_by(|a, b| b.cmp(a));
            let union_prime: Vec<usize> =
                (1..=g).rev().filter(|k| !union.contains(k)).collect();
            let q_alpha = qtilde_beta(&alpha, &twist, g);
            if q_alpha.is_zero() {
                continue;
            }
            let q_rest = qtilde_beta(&union_prime, &dual, g);
            let sign = intertwining(&alpha, beta) % 2;
            let mut term = q_alpha.mul(&q_rest).mul(&det);
            if sign == 1 {
                term = term.neg();
            }
            acc = acc.add(&term);
        }
    }
    let sign = (excess(&xi) + xi_prime.iter().map(|&x| x as i64).sum::<i64>()) % 2;
    if sign != 0 {
        acc = acc.neg();
    }
    BaseClass::from_lambda_poly(&ctx.ring, acc)
}

fn strict_partitions_at_least(g: usize, lower: &[usize]) -> Vec<Vec<usize>> {
    // strictly decreasing sequences of the same length, componentwise >=
    let r = lower.len();
    let mut out = Vec::new();
    fn rec(
        g: usize,
        lower: &[usize],
        idx: usize,
        prev: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if idx == lower.len() {
            out.push(cur.clone());
            return;
        }
        for v in lower[idx]..prev {
            cur.push(v);
            rec(g, lower, idx + 1, v, cur, out);
            cur.pop();
        }
    }
    if r == 0 {
        return vec![vec![]];
    }
    rec(g, lower, 0, g + 1, &mut Vec::new(), &mut out);
    out
}

/// Whether the experimental formula reproduces the Fulton route.
pub fn kt_matches(ctx: &StrataCtx, y: &YoungDiagram, config: KtConfig) -> bool {
    let by_kt = kt_class(ctx, y, config);
    let by_v = ctx.class_v_of_diagram(y);
    by_kt == *by_v
}

/// The Pieri degree-one factor p lambda_1 + p L_{g-i} - w L_i, where
/// L_k = l_{2g} + ... + l_{2g-k+1} = -(l_1 + ... + l_k) and the group
/// acts by w . l_j = l_{w(j)} with l_{2g+1-k} = -l_k.
pub fn pieri_class(ctx: &StrataCtx, w: &SignedPermutation, i: usize) -> FlagClass<PolyP> {
    let g = ctx.g;
    assert!((1..=g).contains(&i));
    let ell = |m: usize| -> MultiPoly<PolyP> {
        // l_m with the reflection rule for m > g
        if m <= g {
            MultiPoly::variable(g, m - 1)
        } else {
            MultiPoly::variable(g, 2 * g - m).scalar_mul(&PolyP::from_i64(-1))
        }
    };
    let mut acc = MultiPoly::<PolyP>::zero(g);
    // p lambda_1
    for j in 1..=g {
        acc = acc.add(&ell(j).scalar_mul(&PolyP::p()));
    }
    // p L_{g-i}
    for j in 1..=(g - i) {
        acc = acc.sub(&ell(j).scalar_mul(&PolyP::p()));
    }
    // - w L_i = - sum_{m=2g-i+1}^{2g} l_{w(m)}
    for m in (2 * g - i + 1)..=(2 * g) {
        acc = acc.sub(&ell(w.apply(m)));
    }
    FlagClass::from_root_poly(&ctx.ring, acc)
}

/// The expansion of the Pieri product over the degeneracy basis one
/// degree up, split into coefficients on Bruhat predecessors and a
/// residual support outside them (reported, not fatal).
pub struct PieriExpansion {
    pub factor: FlagClass<PolyP>,
    pub coeffs: Vec<(SignedPermutation, RatP)>,
    pub residual: Vec<(SignedPermutation, RatP)>,
}

pub fn pieri_expand(ctx: &StrataCtx, w: &SignedPermutation, i: usize) -> PieriExpansion {
    let factor = pieri_class(ctx, w, i);
    let product = factor.mul(&ctx.class_u(w), &ctx.ring);
    let coords = ctx.expand_in_strata_u(&product);
    let mut coeffs = Vec::new();
    let mut residual = Vec::new();
    for (w2, c) in coords {
        if c.is_zero() {
            continue;
        }
        let covers = w2.bruhat_leq(w) && w2.length() + 1 == w.length();
        if covers {
            coeffs.push((w2, c));
        } else {
            residual.push((w2, c));
        }
    }
    PieriExpansion {
        factor,
        coeffs,
        residual,
    }
}

/// Positive roots of type C_g with the data the support criterion needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PositiveRoot {
    /// e_a - e_b for a < b
    Short(usize, usize),
    /// e_a + e_b for a < b
    Sum(usize, usize),
    /// 2 e_a
    Long(usize),
}

impl PositiveRoot {
    pub fn all(g: usize) -> Vec<PositiveRoot> {
        let mut v = Vec::new();
        for a in 1..=g {
            for b in (a + 1)..=g {
                v.push(PositiveRoot::Short(a, b));
                v.push(PositiveRoot::Sum(a, b));
            }
            v.push(PositiveRoot::Long(a));
        }
        v
    }

    /// The reflection as a signed permutation.
    pub fn reflection(&self, g: usize) -> SignedPermutation {
        let n = 2 * g;
        let mut images: Vec<usize> = (1..=n).collect();
        let mut swap_pair = |x: usize, y: usize, images: &mut Vec<usize>| {
            images.swap(x - 1, y - 1);
        };
        match *self {
            PositiveRoot::Short(a, b) => {
                swap_pair(a, b, &mut images);
                swap_pair(n + 1 - a, n + 1 - b, &mut images);
            }
            PositiveRoot::Sum(a, b) => {
                swap_pair(a, n + 1 - b, &mut images);
                swap_pair(b, n + 1 - a, &mut images);
            }
            PositiveRoot::Long(a) => {
                swap_pair(a, n + 1 - a, &mut images);
            }
        }
        let prefix: Vec<usize> = images[..g].to_vec();
        SignedPermutation::make_perm(g, &prefix).expect("reflections satisfy the symmetry")
    }

    /// Whether the simple root alpha_i carries a strictly positive
    /// coefficient in this root.
    pub fn contains_simple(&self, i: usize, g: usize) -> bool {
        match *self {
            PositiveRoot::Short(a, b) => a <= i && i < b,
            PositiveRoot::Sum(a, b) => {
                if i == g {
                    true
                } else if i >= b {
                    true
                } else {
                    a <= i
                }
            }
            PositiveRoot::Long(a) => i >= a || i == g,
        }
    }

    /// The Chevalley pairing of the i-th fundamental weight with the
    /// coroot: <e_1 + ... + e_i, alpha^v>.
    pub fn pairing(&self, i: usize) -> i64 {
        let ind = |a: usize| -> i64 { i64::from(a <= i) };
        match *self {
            PositiveRoot::Short(a, b) => ind(a) - ind(b),
            PositiveRoot::Sum(a, b) => ind(a) + ind(b),
            PositiveRoot::Long(a) => ind(a),
        }
    }
}

/// The predecessors w s_alpha predicted to appear in the i-th Pieri
/// product by the root criterion, together with the Chevalley pairing.
pub fn pieri_predicted_support(
    w: &SignedPermutation,
    i: usize,
) -> Vec<(SignedPermutation, PositiveRoot, i64)> {
    let g = w.g();
    let mut out = Vec::new();
    for root in PositiveRoot::all(g) {
        let refl = root.reflection(g);
        let w2 = w.compose(&refl);
        if w2.length() + 1 == w.length() && root.contains_simple(i, g) {
            out.push((w2, root, root.pairing(i)));
        }
    }
    out
}
