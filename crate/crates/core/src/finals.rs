//! Final elements and their alternative encodings: final types, final
//! Young diagrams and canonical types, plus the fragment/orbit structure
//! of the complementary element, shuffles, and a-number style invariants.

use crate::weyl::{apply_word, SignedPermutation, Word};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FinalsError {
    #[error("expected a final element, got {0}")]
    NotFinal(String),
    #[error("expected an admissible element (w <= w_empty), got {0}")]
    NotAdmissible(String),
    #[error("invalid final type values {0:?}: {1}")]
    BadType(Vec<u8>, &'static str),
    #[error("invalid final Young diagram {0:?}: {1}")]
    BadDiagram(Vec<u8>, &'static str),
    #[error("complementary element does not permute the canonical fragments: {0}")]
    FragmentAssertion(String),
    #[error("odd orbit of size {0} is not even-sized")]
    OddOrbitSize(usize),
    #[error("shuffle index set {0:?} does not match the semi-simple rank {1}")]
    BadShuffleSet(Vec<usize>, usize),
}

/// A final type: the increasing surjection nu on {0..2g} determined by
/// its values on {1..g} via nu(0) = 0 and nu(2g-i) = nu(i) - i + g.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinalType {
    g: usize,
    values: Vec<u8>,
}

/// A final Young diagram of degree g: a strictly decreasing subset of
/// {1..g}, possibly empty. Rows are the parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YoungDiagram {
    g: usize,
    parts: Vec<u8>,
}

/// A canonical type: the restriction of a final type to its canonical
/// domain, the least subset of {0..2g} containing {0,2g} stable under
/// i -> 2g-i and i -> nu(i).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonicalType {
    pub g: usize,
    /// sorted, contains 0 and 2g
    pub domain: Vec<usize>,
    /// f(d) for d in `domain`, in matching order
    pub values: Vec<usize>,
}

/// Orbit tag for the action of the complementary element on fragments.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OrbitKind {
    /// the orbit is invariant under the bar involution i -> 2g+1-i
    Odd,
    /// the orbit and its bar image form a two-element family {S, S-bar}
    EvenPair,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Orbit {
    pub kind: OrbitKind,
    /// #S, the number of fragments in one member of the family
    pub member_count: usize,
    /// #I, the common length of the fragments in the orbit
    pub fragment_len: usize,
    /// indices into `FragmentOrbit::fragments` of one member S
    pub members: Vec<usize>,
}

/// The canonical fragments ]i,j] partitioning {1..2g} together with the
/// orbit decomposition of the complementary element acting on them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FragmentOrbit {
    /// half-open intervals ]lo, hi], stored as (lo, hi), in increasing order
    pub fragments: Vec<(usize, usize)>,
    pub orbits: Vec<Orbit>,
}

impl FinalType {
    pub fn new(g: usize, values: Vec<u8>) -> Result<Self, FinalsError> {
        if values.len() != g {
            return Err(FinalsError::BadType(values, "wrong number of values"));
        }
        let mut prev = 0u8;
        for (i, &v) in values.iter().enumerate() {
            if v != prev && v != prev + 1 {
                return Err(FinalsError::BadType(values.clone(), "slope must be 0 or 1"));
            }
            if v as usize > i + 1 {
                return Err(FinalsError::BadType(values.clone(), "nu(i) must be <= i"));
            }
            prev = v;
        }
        Ok(FinalType { g, values })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    /// Stack height i - nu(i) at 1 <= i <= g; nondecreasing in i.
    fn height(&self, i: usize) -> usize {
        i - self.values[i - 1] as usize
    }
}

impl fmt::Display for FinalType {
    /// `{0,0,1}`, the values on 1..g.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.values.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", v.join(","))
    }
}

impl fmt::Debug for FinalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl YoungDiagram {
    pub fn new(g: usize, parts: Vec<u8>) -> Result<Self, FinalsError> {
        for w in parts.windows(2) {
            if w[0] <= w[1] {
                return Err(FinalsError::BadDiagram(
                    parts.clone(),
                    "parts must strictly decrease",
                ));
            }
        }
        if parts.iter().any(|&p| p == 0 || p as usize > g) {
            return Err(FinalsError::BadDiagram(parts, "parts must lie in 1..=g"));
        }
        Ok(YoungDiagram { g, parts })
    }

    pub fn empty(g: usize) -> Self {
        YoungDiagram { g, parts: vec![] }
    }

    /// The full staircase {g, g-1, ..., 1}.
    pub fn staircase(g: usize) -> Self {
        YoungDiagram {
            g,
            parts: (1..=g as u8).rev().collect(),
        }
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn parts(&self) -> &[u8] {
        &self.parts
    }

    pub fn contains_part(&self, p: usize) -> bool {
        self.parts.iter().any(|&q| q as usize == p)
    }

    pub fn area(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }

    /// The complementary diagram, whose parts are {1..g} minus this one's.
    pub fn complement(&self) -> YoungDiagram {
        let parts = (1..=self.g as u8)
            .rev()
            .filter(|p| !self.parts.contains(p))
            .collect();
        YoungDiagram { g: self.g, parts }
    }

    /// Containment of diagrams: every row of `self` fits in `other`.
    pub fn contained_in(&self, other: &YoungDiagram) -> bool {
        if self.parts.len() > other.parts.len() {
            return false;
        }
        self.parts.iter().zip(other.parts.iter()).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "∅");
        }
        let v: Vec<String> = self.parts.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", v.join(","))
    }
}

impl fmt::Debug for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The final type of the coset w S_g: nu(i) = i - r_w(g, i).
pub fn final_type_of(w: &SignedPermutation) -> FinalType {
    let g = w.g();
    let values = (1..=g).map(|i| (i - w.r_count(g, i)) as u8).collect();
    FinalType::new(g, values).expect("r_w always yields a valid final type")
}

/// mu_w on 1..g: mu(i) = (max{w^{-1}(a) : a <= i} - g)^+.
pub fn mu_of(w: &SignedPermutation) -> Vec<usize> {
    mu_full(w).into_iter().take(w.g()).collect()
}

/// mu_w on the full range 1..2g.
pub fn mu_full(w: &SignedPermutation) -> Vec<usize> {
    let g = w.g();
    let winv = w.inverse();
    let mut best = 0usize;
    (1..=2 * g)
        .map(|i| {
            best = best.max(winv.apply(i));
            best.saturating_sub(g)
        })
        .collect()
}

/// nu_w on the full range 1..2g (the final type of the coset, extended).
pub fn nu_full(w: &SignedPermutation) -> Vec<usize> {
    let g = w.g();
    let nu = final_type_of(w);
    (1..=2 * g).map(|i| nu_at(&nu, i)).collect()
}

/// nu(i) for 0 <= i <= 2g, using nu(2g-i) = nu(i) - i + g.
pub fn nu_at(nu: &FinalType, i: usize) -> usize {
    let g = nu.g();
    assert!(i <= 2 * g);
    if i == 0 {
        0
    } else if i <= g {
        nu.values()[i - 1] as usize
    } else {
        let j = 2 * g - i;
        let nj = if j == 0 { 0 } else { nu.values()[j - 1] as usize };
        nj + g - j
    }
}

/// Finality test: w(1) < w(2) < ... < w(g). Cross-checked against the
/// mu = nu criterion and against r_w(g + nu(i), i) = i.
pub fn is_final(w: &SignedPermutation) -> bool {
    let g = w.g();
    let sorted = (1..g).all(|i| w.apply(i) < w.apply(i + 1));
    let by_mu_nu = mu_full(w) == nu_full(w);
    let nu_t = final_type_of(w);
    let by_r = (1..=g).all(|i| w.r_count(g + nu_at(&nu_t, i), i) == i);
    assert_eq!(sorted, by_mu_nu, "mu=nu criterion disagrees for {w}");
    assert_eq!(sorted, by_r, "r-fulfillment criterion disagrees for {w}");
    sorted
}

/// The final element w_nu: the elements i with nu(i) = nu(i-1) in
/// increasing order, followed by 2g+1-j over the complement j taken in
/// decreasing order.
pub fn final_of_type(nu: &FinalType) -> SignedPermutation {
    let g = nu.g();
    let mut beta = Vec::new();
    let mut beta_c = Vec::new();
    for i in 1..=g {
        if nu_at(nu, i) == nu_at(nu, i - 1) {
            beta.push(i);
        } else {
            beta_c.push(i);
        }
    }
    beta_c.reverse();
    let mut prefix = beta;
    prefix.extend(beta_c.into_iter().map(|j| 2 * g + 1 - j));
    SignedPermutation::make_perm(g, &prefix).expect("w_nu construction")
}

/// The final Young diagram of a final type: xi_j = #{i : nu(i) <= i-j}.
pub fn young_of_type(nu: &FinalType) -> YoungDiagram {
    let g = nu.g();
    let mut parts = Vec::new();
    for j in 1..=g {
        let c = (1..=g).filter(|&i| nu.height(i) >= j).count();
        if c == 0 {
            break;
        }
        parts.push(c as u8);
    }
    YoungDiagram::new(g, parts).expect("xi_j are strictly decreasing")
}

/// Inverse of `young_of_type`: nu(i) = i - #{j : xi_j >= g+1-i}.
pub fn type_of_young(y: &YoungDiagram) -> FinalType {
    let g = y.g();
    let values = (1..=g)
        .map(|i| {
            let h = y.parts().iter().filter(|&&p| p as usize >= g + 1 - i).count();
            (i - h) as u8
        })
        .collect();
    FinalType::new(g, values).expect("diagram heights give a valid type")
}

/// Break points of a final type: i in {1..g} with either
/// nu(i-1) = nu(i) != nu(i+1) or nu(i-1) != nu(i) = nu(i+1).
pub fn break_points(nu: &FinalType) -> Vec<usize> {
    let g = nu.g();
    (1..=g)
        .filter(|&i| {
            let a = nu_at(nu, i - 1);
            let b = nu_at(nu, i);
            let c = nu_at(nu, i + 1);
            (a == b && b != c) || (a != b && b == c)
        })
        .collect()
}

/// The action of s_i on a final type: fixed off break points; at a break
/// point the value nu(i) moves by +1 if nu(i-1) = nu(i) and by -1 else.
pub fn s_action(i: usize, nu: &FinalType) -> FinalType {
    let g = nu.g();
    assert!((1..=g).contains(&i));
    if !break_points(nu).contains(&i) {
        return nu.clone();
    }
    let mut values = nu.values().to_vec();
    if nu_at(nu, i - 1) == nu_at(nu, i) {
        values[i - 1] += 1;
    } else {
        values[i - 1] -= 1;
    }
    FinalType::new(g, values).expect("s-action preserves final types")
}

/// The complementary permutation of a final element: the increasing
/// complement of its prefix. Checked against v = sigma_1 w sigma_0.
pub fn complementary(w: &SignedPermutation) -> Result<SignedPermutation, FinalsError> {
    if !is_final(w) {
        return Err(FinalsError::NotFinal(w.to_string()));
    }
    let g = w.g();
    let taken: Vec<usize> = w.prefix();
    let prefix: Vec<usize> = (1..=2 * g).filter(|a| !taken.contains(a)).collect();
    let v = SignedPermutation::make_perm(g, &prefix).expect("complement is symmetric-pair free");
    let alt = SignedPermutation::longest(g)
        .compose(w)
        .compose(&SignedPermutation::sigma0(g));
    assert_eq!(v, alt, "complementary element disagrees with sigma_1 w sigma_0");
    Ok(v)
}

/// The canonical domain: close {0, 2g} under i -> 2g-i and i -> nu(i),
/// and restrict nu to it. The result is checked to be stable, adapted,
/// surjective onto its lower half, and to recover nu by linear extension.
pub fn canonical_domain(nu: &FinalType) -> CanonicalType {
    let g = nu.g();
    let n = 2 * g;
    let mut in_dom = vec![false; n + 1];
    in_dom[0] = true;
    in_dom[n] = true;
    loop {
        let mut changed = false;
        for i in 0..=n {
            if in_dom[i] {
                for j in [n - i, nu_at(nu, i)] {
                    if !in_dom[j] {
                        in_dom[j] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let domain: Vec<usize> = (0..=n).filter(|&i| in_dom[i]).collect();
    let values: Vec<usize> = domain.iter().map(|&i| nu_at(nu, i)).collect();
    let ct = CanonicalType { g, domain, values };
    ct.validate(nu);
    ct
}

impl CanonicalType {
    /// f(i) for i in the domain.
    pub fn value_at(&self, i: usize) -> usize {
        let k = self
            .domain
            .iter()
            .position(|&d| d == i)
            .expect("point in domain");
        self.values[k]
    }

    fn validate(&self, nu: &FinalType) {
        let g = self.g;
        let n = 2 * g;
        // stability under the reflection and under f
        for (&d, &v) in self.domain.iter().zip(&self.values) {
            assert!(self.domain.contains(&(n - d)), "domain not reflection stable");
            assert!(self.domain.contains(&v), "domain not stable under f");
        }
        assert_eq!(self.value_at(0), 0);
        assert_eq!(self.value_at(n), g);
        // contracting and the complementarity condition on consecutive points
        for k in 1..self.domain.len() {
            let (i, j) = (self.domain[k - 1], self.domain[k]);
            let (fi, fj) = (self.values[k - 1], self.values[k]);
            assert!(fj >= fi && fj - fi <= j - i, "f is not contracting");
            if fj - fi == j - i {
                assert_eq!(
                    self.value_at(n - i),
                    self.value_at(n - j),
                    "complementarity condition fails"
                );
            }
        }
        // surjectivity onto the lower half (necessary for minimality)
        for &d in &self.domain {
            if d <= g {
                assert!(self.values.contains(&d), "f not surjective onto C in [0,g]");
            }
        }
        // linear extension recovers nu
        for k in 1..self.domain.len() {
            let (i, j) = (self.domain[k - 1], self.domain[k]);
            let (fi, fj) = (self.values[k - 1], self.values[k]);
            for t in i..=j {
                let expect = if fj == fi { fi } else { fi + (t - i) };
                assert_eq!(nu_at(nu, t), expect, "linear extension mismatch at {t}");
            }
        }
    }
}

/// Fragments (consecutive intervals of the canonical domain) and their
/// orbit structure under the complementary element of w_nu.
pub fn fragments_and_orbits(nu: &FinalType) -> Result<FragmentOrbit, FinalsError> {
    let g = nu.g();
    let n = 2 * g;
    let ct = canonical_domain(nu);
    let fragments: Vec<(usize, usize)> = ct.domain.windows(2).map(|w| (w[0], w[1])).collect();
    let w = final_of_type(nu);
    let v = complementary(&w)?;

    // v must permute the fragments setwise
    let mut image = vec![usize::MAX; fragments.len()];
    for (k, &(lo, hi)) in fragments.iter().enumerate() {
        let mut img: Vec<usize> = (lo + 1..=hi).map(|a| v.apply(a)).collect();
        img.sort_unstable();
        let contiguous = img.windows(2).all(|ab| ab[1] == ab[0] + 1);
        let target = fragments
            .iter()
            .position(|&(l2, h2)| l2 + 1 == img[0] && h2 == *img.last().unwrap());
        match (contiguous, target) {
            (true, Some(t)) => image[k] = t,
            _ => {
                return Err(FinalsError::FragmentAssertion(format!(
                    "v = {v} maps ]{lo},{hi}] to the non-fragment set {img:?}"
                )))
            }
        }
    }

    // orbits of the induced permutation on fragment indices
    let bar = |k: usize| -> usize {
        let (lo, hi) = fragments[k];
        fragments
            .iter()
            .position(|&(l2, h2)| l2 == n - hi && h2 == n - lo)
            .expect("fragments are reflection stable")
    };
    let mut seen = vec![false; fragments.len()];
    let mut orbits = Vec::new();
    for start in 0..fragments.len() {
        if seen[start] {
            continue;
        }
        let mut members = vec![start];
        seen[start] = true;
        let mut k = image[start];
        while k != start {
            seen[k] = true;
            members.push(k);
            k = image[k];
        }
        let bar_set: Vec<usize> = members.iter().map(|&m| bar(m)).collect();
        let is_odd = bar_set.iter().all(|m| members.contains(m));
        if is_odd {
            if members.len() % 2 != 0 {
                return Err(FinalsError::OddOrbitSize(members.len()));
            }
        } else {
            for &m in &bar_set {
                seen[m] = true;
            }
        }
        let len = fragments[start].1 - fragments[start].0;
        assert!(
            members.iter().all(|&m| fragments[m].1 - fragments[m].0 == len),
            "fragments in one orbit must share their length"
        );
        orbits.push(Orbit {
            kind: if is_odd { OrbitKind::Odd } else { OrbitKind::EvenPair },
            member_count: members.len(),
            fragment_len: len,
            members,
        });
    }
    Ok(FragmentOrbit { fragments, orbits })
}

/// A building word for the complement of Y's diagram: reading the word
/// right to left, each letter adds one box, ending at Y^c; the product of
/// the word is w_nu for nu the type of Y. Deterministic: the least
/// admissible column is taken at each step.
pub fn building_word(y: &YoungDiagram) -> Word {
    let g = y.g();
    let target = y.complement();
    let target_h: Vec<usize> = (1..=g)
        .map(|i| target.parts().iter().filter(|&&p| p as usize >= g + 1 - i).count())
        .collect();
    // start from the empty diagram, i.e. nu(i) = i
    let mut cur = FinalType::new(g, (1..=g as u8).collect()).unwrap();
    let mut applied = Vec::new();
    loop {
        let h: Vec<usize> = (1..=g).map(|i| cur.height(i)).collect();
        if h == target_h {
            break;
        }
        let mut stepped = false;
        for i in 1..=g {
            // a box is added at column i when s_i lowers nu(i)
            let is_break = break_points(&cur).contains(&i);
            if is_break && nu_at(&cur, i - 1) != nu_at(&cur, i) && h[i - 1] + 1 <= target_h[i - 1] {
                cur = s_action(i, &cur);
                applied.push(i as u8);
                stepped = true;
                break;
            }
        }
        assert!(stepped, "building stalled before reaching the target diagram");
    }
    applied.reverse();
    let word = Word::new(applied);
    // the defining identities of a building word
    let w_nu = final_of_type(&type_of_young(y));
    debug_assert_eq!(apply_word(&word, g).unwrap(), w_nu);
    debug_assert_eq!(word.len(), target.area());
    word
}

/// The shuffle permutation sigma^I: 1..|I| onto I increasingly, the rest
/// onto the complement increasingly.
pub fn sigma_upper(g: usize, set: &[usize]) -> SignedPermutation {
    let mut i_sorted: Vec<usize> = set.to_vec();
    i_sorted.sort_unstable();
    assert!(i_sorted.windows(2).all(|ab| ab[0] < ab[1]), "index set has duplicates");
    assert!(i_sorted.iter().all(|&i| (1..=g).contains(&i)));
    let mut prefix = i_sorted.clone();
    prefix.extend((1..=g).filter(|i| !i_sorted.contains(i)));
    SignedPermutation::make_perm(g, &prefix).unwrap()
}

/// The companion shuffle sigma_I with sigma_I(i) = g+1-sigma^I(g+1-i).
pub fn sigma_lower(g: usize, set: &[usize]) -> SignedPermutation {
    let up = sigma_upper(g, set);
    let prefix: Vec<usize> = (1..=g).map(|i| g + 1 - up.apply(g + 1 - i)).collect();
    SignedPermutation::make_perm(g, &prefix).unwrap()
}

/// Raw shuffle: sigma^I w sigma_I^{-1}.
pub fn shuffle(w: &SignedPermutation, set: &[usize]) -> SignedPermutation {
    let g = w.g();
    sigma_upper(g, set)
        .compose(w)
        .compose(&sigma_lower(g, set).inverse())
}

/// Shuffle of a semi-simply final element, rejecting index sets whose
/// size differs from the semi-simple rank.
pub fn shuffle_checked(
    w: &SignedPermutation,
    set: &[usize],
) -> Result<SignedPermutation, FinalsError> {
    let g = w.g();
    let ss = semi_simple_indices(w)?;
    let f = ss.len();
    let semi_simply_final = ss == ((g - f + 1)..=g).collect::<Vec<_>>();
    if !semi_simply_final || set.len() != f {
        return Err(FinalsError::BadShuffleSet(set.to_vec(), f));
    }
    Ok(shuffle(w, set))
}

/// Height of the shuffle of I = {i_1 < ... < i_k}: sum of (i_s - s).
pub fn shuffle_height(set: &[usize]) -> usize {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.iter().enumerate().map(|(k, &i)| i - (k + 1)).sum()
}

/// One elementary reduction: with k least such that i_k > k, replace i_k
/// by i_k - 1. Returns the reduced set and the reduction index i_k, or
/// `None` when I is a bottom segment {1..r}.
pub fn elementary_reduction(set: &[usize]) -> Option<(Vec<usize>, usize)> {
    let mut s = set.to_vec();
    s.sort_unstable();
    let k = s.iter().enumerate().find(|&(k, &i)| i > k + 1)?.0;
    let idx = s[k];
    s[k] = idx - 1;
    Some((s, idx))
}

/// a(w) = r_w(g, g). For a final element this is also the largest a with
/// the staircase {a,...,1} contained in its diagram, which is asserted.
pub fn a_number(w: &SignedPermutation) -> usize {
    let g = w.g();
    let a = w.r_count(g, g);
    if (1..g).all(|i| w.apply(i) < w.apply(i + 1)) {
        let y = young_of_type(&final_type_of(w));
        let by_staircase = (0..=g)
            .rev()
            .find(|&k| {
                let stair = YoungDiagram {
                    g,
                    parts: (1..=k as u8).rev().collect(),
                };
                stair.contained_in(&y)
            })
            .unwrap_or(0);
        assert_eq!(a, by_staircase, "a-number/staircase mismatch for {w}");
    }
    a
}

/// The semi-simple index set {i <= g : w(i) = g+i} of an admissible element.
pub fn semi_simple_indices(w: &SignedPermutation) -> Result<Vec<usize>, FinalsError> {
    if !w.is_admissible() {
        return Err(FinalsError::NotAdmissible(w.to_string()));
    }
    let g = w.g();
    Ok((1..=g).filter(|&i| w.apply(i) == g + i).collect())
}

/// Movability of index j = g-i for an admissible w: r_w(g+i-1, i+1) >= i+1.
pub fn is_movable(w: &SignedPermutation, j: usize) -> Result<bool, FinalsError> {
    if !w.is_admissible() {
        return Err(FinalsError::NotAdmissible(w.to_string()));
    }
    let g = w.g();
    assert!((1..g).contains(&j), "movable index must be in 1..g-1");
    let i = g - j;
    Ok(w.r_count(g + i - 1, i + 1) >= i + 1)
}

/// The final element u_f of p-rank f: one row of g-f boxes.
pub fn u_f(g: usize, f: usize) -> SignedPermutation {
    assert!(f <= g);
    let y = if f == g {
        YoungDiagram::empty(g)
    } else {
        YoungDiagram::new(g, vec![(g - f) as u8]).unwrap()
    };
    final_of_type(&type_of_young(&y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{enumerate, Filter};

    fn mk(g: usize, pre: &[usize]) -> SignedPermutation {
        SignedPermutation::make_perm(g, pre).unwrap()
    }

    fn ft(g: usize, v: &[u8]) -> FinalType {
        FinalType::new(g, v.to_vec()).unwrap()
    }

    #[test]
    fn final_type_examples() {
        assert_eq!(final_type_of(&mk(2, &[2, 4])), ft(2, &[1, 1]));
        assert_eq!(final_type_of(&mk(2, &[1, 2])), ft(2, &[0, 0]));
        assert_eq!(final_type_of(&mk(3, &[1, 4, 2])), ft(3, &[0, 0, 1]));
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu_of(&mk(2, &[3, 1])), vec![0, 2]);
        assert_eq!(mu_of(&mk(2, &[2, 4])), vec![1, 1]);
        assert_eq!(mu_of(&SignedPermutation::identity(3)), vec![0, 0, 0]);
    }

    #[test]
    fn finality() {
        assert!(is_final(&mk(2, &[2, 4])));
        assert!(!is_final(&mk(2, &[4, 2])));
        assert!(is_final(&SignedPermutation::identity(2)));
    }

    #[test]
    fn mu_dominates_nu_with_equality_on_finals() {
        for g in 1..=3 {
            for w in enumerate(g, Filter::All) {
                let mu = mu_full(&w);
                let nu = nu_full(&w);
                assert!(mu.iter().zip(&nu).all(|(m, n)| m >= n), "mu < nu for {w}");
                let sorted = (1..g).all(|i| w.apply(i) < w.apply(i + 1));
                assert_eq!(mu == nu, sorted);
            }
        }
    }

    #[test]
    fn type_young_element_bijections() {
        let nu = ft(5, &[0, 1, 1, 2, 2]);
        assert_eq!(young_of_type(&nu).parts(), &[5, 3, 1]);
        assert_eq!(final_of_type(&nu), mk(5, &[1, 3, 5, 7, 9]));
        assert_eq!(final_of_type(&ft(2, &[1, 1])), mk(2, &[2, 4]));
        assert_eq!(young_of_type(&ft(2, &[1, 1])).parts(), &[1]);
        // full staircase -> identity
        for g in 1..=5 {
            let y = YoungDiagram::staircase(g);
            assert_eq!(
                final_of_type(&type_of_young(&y)),
                SignedPermutation::identity(g)
            );
        }
        // all three representations biject with the 2^g finals
        for g in 1..=5 {
            let finals = enumerate(g, Filter::Final);
            assert_eq!(finals.len(), 1 << g);
            for w in finals {
                let nu = final_type_of(&w);
                assert_eq!(final_of_type(&nu), w);
                assert_eq!(type_of_young(&young_of_type(&nu)), nu);
            }
        }
    }

    #[test]
    fn nu_is_coset_invariant() {
        for g in 1..=3 {
            let sg: Vec<_> = enumerate(g, Filter::All)
                .into_iter()
                .filter(|s| (1..=g).all(|i| s.apply(i) <= g))
                .collect();
            assert_eq!(sg.len(), (1..=g).product::<usize>());
            for w in enumerate(g, Filter::All) {
                for s in &sg {
                    assert_eq!(final_type_of(&w.compose(s)), final_type_of(&w));
                }
            }
        }
    }

    #[test]
    fn bruhat_on_finals_matches_types_and_prefix_sets() {
        for g in 1..=4 {
            let finals = enumerate(g, Filter::Final);
            for a in &finals {
                for b in &finals {
                    let by_bruhat = a.bruhat_leq(b);
                    let (na, nb) = (final_type_of(a), final_type_of(b));
                    let by_nu = (1..=g).all(|i| nu_at(&na, i) <= nu_at(&nb, i));
                    let (mut pa, mut pb) = (a.prefix(), b.prefix());
                    pa.sort_unstable();
                    pb.sort_unstable();
                    let by_prec = pa.iter().zip(&pb).all(|(x, y)| x <= y);
                    assert_eq!(by_bruhat, by_nu, "nu order mismatch {a} {b}");
                    assert_eq!(by_bruhat, by_prec, "prefix order mismatch {a} {b}");
                }
            }
        }
    }

    #[test]
    fn length_of_final_elements() {
        for g in 1..=5 {
            for w in enumerate(g, Filter::Final) {
                let y = young_of_type(&final_type_of(&w));
                assert_eq!(w.length() + y.area(), g * (g + 1) / 2);
            }
        }
    }

    #[test]
    fn break_point_examples_and_s_action() {
        let nu = ft(2, &[1, 1]);
        assert_eq!(break_points(&nu), vec![1, 2]);
        // g is always a break point
        for g in 1..=4 {
            for w in enumerate(g, Filter::Final) {
                assert!(break_points(&final_type_of(&w)).contains(&g));
            }
        }
        assert_eq!(s_action(2, &ft(2, &[0, 0])), ft(2, &[0, 1]));
        // action at a non break point fixes the type
        let nu = ft(3, &[0, 0, 1]);
        assert!(!break_points(&nu).contains(&1));
        assert_eq!(s_action(1, &nu), nu);
    }

    #[test]
    fn building_words() {
        let y = YoungDiagram::new(5, vec![5, 3, 1]).unwrap();
        assert_eq!(building_word(&y).letters, vec![4, 5, 2, 3, 4, 5]);
        assert!(building_word(&YoungDiagram::staircase(4)).is_empty());
        let y = YoungDiagram::new(2, vec![1]).unwrap();
        let w = building_word(&y);
        assert_eq!(w.len(), 2);
        assert_eq!(apply_word(&w, 2).unwrap(), mk(2, &[2, 4]));
        // every final diagram builds to its element with the right length
        for g in 1..=5 {
            for w in enumerate(g, Filter::Final) {
                let y = young_of_type(&final_type_of(&w));
                let t = building_word(&y);
                assert_eq!(t.len(), w.length());
                assert_eq!(apply_word(&t, g).unwrap(), w);
            }
        }
    }

    /// Words are building exactly when they are reduced with a final product.
    #[test]
    fn building_equals_h_reduced_on_small_words() {
        for g in 2..=3usize {
            let mut words: Vec<Vec<u8>> = vec![vec![]];
            let mut frontier: Vec<Vec<u8>> = vec![vec![]];
            for _ in 0..4 {
                let mut next = Vec::new();
                for w in &frontier {
                    for i in 1..=g as u8 {
                        let mut v = w.clone();
                        v.push(i);
                        next.push(v);
                    }
                }
                words.extend(next.iter().cloned());
                frontier = next;
            }
            for letters in words {
                let word = Word::new(letters.clone());
                // act on the empty diagram, right to left, tracking area growth
                let mut cur = FinalType::new(g, (1..=g as u8).collect()).unwrap();
                let mut building = true;
                for &i in letters.iter().rev() {
                    let next = s_action(i as usize, &cur);
                    let grow = young_of_type(&next).area() == young_of_type(&cur).area() + 1;
                    if !grow {
                        building = false;
                        break;
                    }
                    cur = next;
                }
                let prod = apply_word(&word, g).unwrap();
                let h_reduced = prod.length() == word.len()
                    && (1..g).all(|i| prod.apply(i) < prod.apply(i + 1));
                assert_eq!(building, h_reduced, "word {word} for g={g}");
            }
        }
    }

    #[test]
    fn complementary_examples() {
        assert_eq!(complementary(&mk(2, &[1, 2])).unwrap(), mk(2, &[3, 4]));
        assert_eq!(complementary(&mk(2, &[3, 4])).unwrap(), mk(2, &[1, 2]));
        assert!(complementary(&mk(2, &[4, 2])).is_err());
        // complementary diagram is the complement; break points coincide
        for g in 1..=4 {
            for w in enumerate(g, Filter::Final) {
                let v = complementary(&w).unwrap();
                let yw = young_of_type(&final_type_of(&w));
                let yv = young_of_type(&final_type_of(&v));
                assert_eq!(yv, yw.complement());
                assert_eq!(
                    break_points(&final_type_of(&w)),
                    break_points(&final_type_of(&v))
                );
            }
        }
    }

    #[test]
    fn canonical_domain_examples() {
        // p-rank f with a-number 1: domain {0, f, f+1, ..., 2g-f-1, 2g-f, 2g}
        for (g, f) in [(3usize, 1usize), (4, 2), (5, 0)] {
            let nu = final_type_of(&u_f(g, f));
            let ct = canonical_domain(&nu);
            let mut expect: Vec<usize> = vec![0];
            expect.extend(f..=2 * g - f);
            expect.push(2 * g);
            expect.sort_unstable();
            expect.dedup();
            assert_eq!(ct.domain, expect, "u_f domain for g={g}, f={f}");
        }
        // ordinary and superspecial collapse to {0, g, 2g}
        for g in 2..=5 {
            let ord = final_type_of(&SignedPermutation::w_empty(g));
            assert_eq!(canonical_domain(&ord).domain, vec![0, g, 2 * g]);
            let ss = final_type_of(&SignedPermutation::identity(g));
            assert_eq!(canonical_domain(&ss).domain, vec![0, g, 2 * g]);
        }
    }

    #[test]
    fn fragment_orbit_examples() {
        // superspecial: two fragments swapped by w_empty, one odd orbit
        let fo = fragments_and_orbits(&final_type_of(&SignedPermutation::identity(2))).unwrap();
        assert_eq!(fo.fragments, vec![(0, 2), (2, 4)]);
        assert_eq!(fo.orbits.len(), 1);
        assert_eq!(fo.orbits[0].kind, OrbitKind::Odd);
        assert_eq!(fo.orbits[0].member_count, 2);
        assert_eq!(fo.orbits[0].fragment_len, 2);
        // ordinary: v = identity, one even pair
        let fo = fragments_and_orbits(&final_type_of(&SignedPermutation::w_empty(2))).unwrap();
        assert_eq!(fo.orbits.len(), 1);
        assert_eq!(fo.orbits[0].kind, OrbitKind::EvenPair);
        assert_eq!(fo.orbits[0].member_count, 1);
        assert_eq!(fo.orbits[0].fragment_len, 2);
        // [1,3]: four singleton fragments in a single odd 4-cycle
        let fo = fragments_and_orbits(&final_type_of(&mk(2, &[1, 3]))).unwrap();
        assert_eq!(fo.fragments.len(), 4);
        assert_eq!(fo.orbits.len(), 1);
        assert_eq!(fo.orbits[0].kind, OrbitKind::Odd);
        assert_eq!(fo.orbits[0].member_count, 4);
        assert_eq!(fo.orbits[0].fragment_len, 1);
    }

    #[test]
    fn fragments_partition_and_match_domain() {
        for g in 1..=5 {
            for w in enumerate(g, Filter::Final) {
                let nu = final_type_of(&w);
                let fo = fragments_and_orbits(&nu).unwrap();
                let mut covered = vec![false; 2 * g + 1];
                for &(lo, hi) in &fo.fragments {
                    for a in lo + 1..=hi {
                        assert!(!covered[a]);
                        covered[a] = true;
                    }
                }
                assert!((1..=2 * g).all(|a| covered[a]));
                let mut uppers: Vec<usize> = fo.fragments.iter().map(|&(_, hi)| hi).collect();
                uppers.push(0);
                uppers.sort_unstable();
                assert_eq!(uppers, canonical_domain(&nu).domain);
            }
        }
    }

    #[test]
    fn shuffle_examples() {
        let u1 = u_f(2, 1);
        assert_eq!(u1, mk(2, &[2, 4]));
        assert_eq!(shuffle(&u1, &[2]), mk(2, &[3, 1]));
        assert_eq!(shuffle(&u1, &[1]), u1);
        assert_eq!(shuffle_height(&[2]), 1);
        assert_eq!(shuffle_height(&[1]), 0);
        // bottom segments give identity conjugation
        for g in 2..=4 {
            for f in 1..=g {
                let w = u_f(g, f);
                let bottom: Vec<usize> = (1..=f).collect();
                assert_eq!(shuffle(&w, &bottom), w);
                assert_eq!(shuffle_height(&bottom), 0);
            }
        }
        assert!(shuffle_checked(&u1, &[2]).is_ok());
        assert!(shuffle_checked(&u1, &[1, 2]).is_err());
    }

    #[test]
    fn shuffled_semi_simple_index_set() {
        for g in 2..=3usize {
            for w in enumerate(g, Filter::Admissible) {
                let ss = semi_simple_indices(&w).unwrap();
                let f = ss.len();
                if ss != ((g - f + 1)..=g).collect::<Vec<_>>() || f == 0 {
                    continue;
                }
                for mask in 0u32..(1 << g) {
                    let set: Vec<usize> = (1..=g).filter(|i| mask >> (i - 1) & 1 == 1).collect();
                    if set.len() != f {
                        continue;
                    }
                    let sh = shuffle(&w, &set);
                    let expect: Vec<usize> = {
                        let mut v: Vec<usize> = set.iter().map(|&i| g + 1 - i).collect();
                        v.sort_unstable();
                        v
                    };
                    assert_eq!(semi_simple_indices(&sh).unwrap(), expect);
                }
            }
        }
    }

    #[test]
    fn elementary_reduction_factorisation() {
        assert_eq!(elementary_reduction(&[1, 2]), None);
        let (r, idx) = elementary_reduction(&[2]).unwrap();
        assert_eq!((r.as_slice(), idx), (&[1usize][..], 2));
        for g in 2..=4usize {
            for mask in 1u32..(1 << g) {
                let set: Vec<usize> = (1..=g).filter(|i| mask >> (i - 1) & 1 == 1).collect();
                if let Some((red, idx)) = elementary_reduction(&set) {
                    assert_eq!(shuffle_height(&set), shuffle_height(&red) + 1);
                    let s_up = SignedPermutation::simple(g, idx - 1);
                    assert_eq!(sigma_upper(g, &set), s_up.compose(&sigma_upper(g, &red)));
                    // the index in the lower factor must mirror idx-1 at g+1-idx
                    // for sigma_I(i) = g+1-sigma^I(g+1-i) to hold
                    let s_low = SignedPermutation::simple(g, g + 1 - idx);
                    assert_eq!(sigma_lower(g, &set), s_low.compose(&sigma_lower(g, &red)));
                } else {
                    assert_eq!(set, (1..=set.len()).collect::<Vec<_>>());
                    assert_eq!(sigma_upper(g, &set), SignedPermutation::identity(g));
                }
            }
        }
    }

    #[test]
    fn a_number_and_movability() {
        assert_eq!(a_number(&mk(2, &[1, 3])), 1);
        for g in 1..=4 {
            assert_eq!(a_number(&SignedPermutation::identity(g)), g);
        }
        assert_eq!(semi_simple_indices(&mk(2, &[2, 4])).unwrap(), vec![2]);
        assert!(semi_simple_indices(&mk(2, &[4, 2])).is_err());
        // movability demands admissibility
        assert!(is_movable(&mk(2, &[4, 2]), 1).is_err());
        assert!(is_movable(&SignedPermutation::w_empty(3), 1).is_ok());
    }
}
