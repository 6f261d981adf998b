//! # framemult
//!
//! A finite-dimensional toolkit for *frame multipliers*: operators of the
//! form
//!
//! ```text
//! M f = Σ_n m_n ⟨f, ψ_n⟩ φ_n
//! ```
//!
//! built from an analysis family `Ψ`, a scalar symbol `m`, and a synthesis
//! family `Φ`. The crate constructs such operators matrix-free, diagnoses
//! necessary conditions for their unconditional convergence over truncation
//! sweeps, certifies invertibility through a family of sufficient-condition
//! rules with explicit constants and two-sided bounds on the inverse, and
//! evaluates inverses by truncated series or closed dual-basis formulas.
//!
//! Every certified claim is cross-checkable against a dense linear-algebra
//! oracle ([`dense`]), and the [`catalogue`] module ships the reference
//! families the test suite regresses against.
//!
//! The companion guide under `book/` walks through the concepts chapter by
//! chapter; its code snippets are compiled as doc-tests.

pub mod catalogue;
pub mod config;
pub mod convergence;
pub mod dense;
pub mod error;
pub mod frames;
pub mod inversion;
pub mod linop;
pub mod multiplier;

pub use config::Tolerances;
pub use error::{Error, Result};

/// The scalar type of the toolkit: all spaces are complex coordinate spaces.
pub type Complex = num_complex::Complex64;
