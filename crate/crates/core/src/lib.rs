//! Fourier analysis on finite abelian groups with a verification harness
//! for lacunary-set inequalities.
//!
//! The crate is organized as a small tower:
//!
//! - [`group`] — mixed-radix arithmetic in `G = Z_{n1} x ... x Z_{nk}` and the
//!   character pairing `e(xi . x)`,
//! - [`fourier`] — the unnormalized transform `f^(xi) = sum_x f(x) e(-xi.x)`,
//!   convolution, reflection, pointwise multiplication and norms,
//! - [`linalg`] — dense complex kernels: products, trace moments, a cyclic
//!   Jacobi Hermitian eigensolver, rank and determinant,
//! - [`operators`] — the windowed Fourier-multiplier operators, their
//!   composition chains, adjoints and restrictions to a support set,
//! - [`dissociation`] — dissociated-set predicates (exhaustive and
//!   meet-in-the-middle) and structured instance generators,
//! - [`harness`] — one evaluator per identity/inequality, named verification
//!   suites and deterministic seeded sweeps with JSON-lines reports.
//!
//! Exact identities are asserted at fixed tolerances; inequalities carry an
//! unspecified absolute constant and are therefore evaluated as
//! `(lhs, rhs_core, ratio)` records checked against a configurable budget.

pub mod dissociation;
pub mod error;
pub mod fourier;
pub mod group;
pub mod harness;
pub mod linalg;
pub mod operators;

pub use error::{Error, Result};
