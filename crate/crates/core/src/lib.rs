//! Extremal problems for families of `{0, ±1}`-vectors with bounded scalar
//! products, and the set-family machinery around them.
//!
//! * [`vector`]: signed vectors, families, and the level `L_k`.
//! * [`shifting`]: coordinate shifts and fixpoint shifting.
//! * [`bounds`]: closed-form values of `F(n, k, l)` and related counts.
//! * [`constructions`]: explicit families attaining or approaching them.
//! * [`setfam`]: k-uniform set families, kernels, and matchings.
//! * [`solver`]: exact values by maximum clique search.
//!
//! ```
//! use ekrlab::{exact_f, formula_f_exact, SearchOptions};
//!
//! let r = exact_f(5, 3, 0, &SearchOptions::default()).unwrap();
//! assert_eq!(r.value, 14);
//! let star = formula_f_exact(9, 3, 1).unwrap().unwrap();
//! assert_eq!(star.value, 28u32.into());
//! ```

pub mod bounds;
pub mod constructions;
pub mod error;
pub mod mask;
pub mod num;
pub mod setfam;
pub mod shifting;
pub mod solver;
pub mod vector;

pub use num_bigint::BigUint;

pub use bounds::{BoundResult, Confidence, Provenance};
pub use error::{Error, Result};
pub use mask::Mask;
pub use num::Count;
pub use setfam::SetFamily;
pub use solver::{
    cross_pair_search, exact_f, exact_f_forbidden, exact_max_t_intersecting, exact_union_bounded, max_clique,
    SearchOptions, SearchResult,
};
pub use vector::{Origin, SignedVector, VectorFamily};

/// Exact count type used by the convenience wrappers below.
pub type BigCount = BigUint;

/// A closed-form value with unbounded precision.
pub type ExactBound = BoundResult<BigUint>;

/// [`bounds::formula_f`] at `BigUint` precision.
pub fn formula_f_exact(n: usize, k: usize, l: i64) -> Result<Option<ExactBound>> {
    bounds::formula_f(n, k, l)
}

/// [`bounds::katona_f`] at `BigUint` precision.
pub fn katona_f_exact(n: usize, s: usize) -> Result<BigCount> {
    bounds::katona_f(n, s)
}
