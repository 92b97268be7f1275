//! mbdef: an exact-arithmetic workbench for the homological algebra of
//! Morse-Bott superpotentials.
//!
//! The crate computes, over the Gaussian rationals and without any floating
//! point:
//!
//! - free graded-commutative algebras with the Koszul sign rule and a weight
//!   filtration ([`algebra`]);
//! - Schouten brackets, Maurer-Cartan residuals and twisted differentials on
//!   shifted-cotangent-bundle models ([`gerstenhaber`]);
//! - the degree-by-degree critical-point solve `t + phi'(t) = 0` and the
//!   critical-value class it produces, with its scaling family and ideal
//!   closure diagnostics ([`critical`]);
//! - structure fields of the controlling L-infinity algebras, the
//!   critical-value morphism `chi` with its chain-map check, Hochschild
//!   cohomology of truncated one-parameter algebras, and curved skyscraper
//!   ranks ([`linfty`]);
//! - Clifford algebras with Hessian anticommutation relations, spinor
//!   modules, the quadratic Thom matrix factorization and its resolution /
//!   Koszul-kernel degenerations ([`clifford`]);
//! - a small term parser, JSON reports and golden-file regression ([`io`]).

pub mod algebra;
pub mod clifford;
pub mod critical;
pub mod gerstenhaber;
pub mod io;
pub mod linalg;
pub mod linfty;
pub mod scalar;

pub use algebra::{Context, ContextBuilder, Element, GenClass, GenId, Generator, Monomial};
pub use scalar::Scalar;

/// Crate-wide error type. CLI maps `Input`-like variants to exit code 2 and
/// failed assertions to exit code 1.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("generator contexts differ")]
    ContextMismatch,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("parity mismatch on substitution into `{0}`")]
    ParityMismatch(String),
    #[error("substitution into `{0}` may not terminate: value has lower weight and no cutoff is set")]
    Divergence(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("model validation failed: {0}")]
    Model(String),
    #[error("maurer-cartan residual is nonzero: {0}")]
    NotMaurerCartan(String),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("resource bound exceeded: {0}")]
    Bound(String),
    #[error("iteration failed to stabilize within the weight filtration")]
    Unstable,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
