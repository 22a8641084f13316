//! Weighted Moore-Penrose inverses, group inverses and weighted-EP
//! verification for dense complex matrices under configurable operator
//! norms.
//!
//! The crate is organized around a small dense kernel ([`linalg`], [`norms`],
//! [`matrix`]) and four theory modules: [`hermitian`] decides hermiticity
//! and positivity of a matrix viewed as a Banach-algebra element,
//! [`geninv`] computes weighted Moore-Penrose and group inverses along two
//! independent routes, [`ep`] runs the weighted-EP equivalence clauses as a
//! battery, and [`structure`] checks the left-multiplication lift and the
//! invariant-block restriction/quotient compatibilities. [`testkit`]
//! provides seeded generators and the closed-form 2x2 oracle the test suite
//! is built on; [`io`], [`report`] and [`cli`] back the command-line tool.
//!
//! Every operation is a pure function of its inputs; all values are
//! immutable once constructed, so concurrent use needs no synchronization.

pub mod cli;
pub mod ep;
pub mod error;
pub mod geninv;
pub mod hermitian;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod norms;
pub mod report;
pub mod structure;
pub mod testkit;

pub use error::{Error, Result};
pub use matrix::CMatrix;
pub use norms::NormKind;
pub use num_complex::Complex64;

/// Default verdict tolerance (theorem checks, hermiticity, clause battery).
pub const DEFAULT_TOL: f64 = 1e-8;
/// Default kernel tolerance (rank cutoffs, factorization residuals).
pub const KERNEL_TOL: f64 = 1e-10;
