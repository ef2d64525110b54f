//! Exact computation of Ekedahl-Oort stratum cycle classes.
//!
//! The crate implements, over exact arithmetic in a formal prime `p`:
//!
//! * the Weyl group of type C_g as signed permutations, with lengths,
//!   Bruhat-Chevalley order, reduced words and enumeration ([`weyl`]);
//! * the dictionary between final elements, final types, final Young
//!   diagrams and canonical types, together with fragments, orbits,
//!   shuffles and a-numbers ([`finals`]);
//! * flag-counting polynomials over finite fields, necklace numbers and
//!   the exact zeta constants behind mass formulas ([`counting`]);
//! * sparse multivariate polynomial arithmetic with divided-difference
//!   operators of types A and C, Schur determinants, Pfaffians and
//!   Q-tilde polynomials ([`poly`]);
//! * the tautological rings of the symplectic flag space and its base as
//!   quotient rings with normal forms, the Gysin pushforward, the degree
//!   map and strata-basis expansions ([`rings`]);
//! * the stratum classes themselves: degeneracy-locus classes `[U_w]`,
//!   their pushdowns, E-O classes `[V_nu]`, closed p-rank and a-number
//!   formulas, Pieri products, the tau map, and verification against the
//!   embedded golden tables for g = 2, 3, 4 ([`classes`]).
//!
//! No floating point is used anywhere: coefficients are integers,
//! rationals, polynomials in `p`, or rational functions in `p`.

pub mod classes;
pub mod counting;
pub mod expr;
pub mod finals;
pub mod golden;
pub mod poly;
pub mod rings;
pub mod scalars;
pub mod weyl;

pub use scalars::{PolyP, RatP};
pub use weyl::{SignedPermutation, Word};

/// Configure the size of the global thread pool used for per-element
/// class computations. Call at most once, before any parallel work.
pub fn set_parallelism(jobs: usize) -> Result<(), rayon::ThreadPoolBuildError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()
}
