//! Error taxonomy.
//!
//! Certificate rules report *refusals* (their sufficient condition does not
//! hold) through the same enum as hard failures; the dispatcher records
//! refusals as nearest misses instead of propagating them.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("dimension {dim} exceeds the dense-oracle cap {cap}")]
    DimTooLarge { dim: usize, cap: usize },

    #[error("power iteration did not converge after {iters} iterations (residual {residual:.3e})")]
    NoConvergence { iters: usize, residual: f64 },

    #[error("contraction factor {q:.6} is not below 1; the series criterion does not apply")]
    NotContraction { q: f64 },

    #[error("family is not a certified frame (lower bound estimate {a_lower:.3e})")]
    NotAFrame { a_lower: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    #[error("count mismatch: expected {expected}, got {got}")]
    CountMismatch { expected: usize, got: usize },

    #[error("every index was pruned; the multiplier is the zero operator")]
    EmptyAfterPrune,

    #[error("symbol is not bounded, no finite norm bound exists")]
    UnboundedSymbol,

    #[error("symbol is not one-signed semi-normalized")]
    SymbolNotSigned,

    #[error("symbol deviation {lambda:.6} from one is not below the threshold {threshold:.6}")]
    LambdaTooLarge { lambda: f64, threshold: f64 },

    #[error("perturbation bound {bound:.6} is not below the threshold {threshold:.6}")]
    PerturbationTooLarge { bound: f64, threshold: f64 },

    #[error("symbol ratio {ratio:.6} is not below the threshold {threshold:.6}")]
    SymbolRatioTooLarge { ratio: f64, threshold: f64 },

    #[error("perturbation Bessel bound {mu:.6} is not below the threshold {threshold:.6}")]
    MuTooLarge { mu: f64, threshold: f64 },

    #[error("family is not a certified Riesz basis (margin {min_sv:.3e})")]
    NotRiesz { min_sv: f64 },

    #[error("weighted family is not a Riesz basis (margin {min_sv:.3e}); the multiplier is not invertible")]
    NotRieszWeighted { min_sv: f64 },

    #[error("the families are not a dual pair (residual {residual:.3e})")]
    NotDualPair { residual: f64 },

    #[error("no operator maps the synthesis family onto the analysis family (residual {residual:.3e})")]
    NotEquivalent { residual: f64 },

    #[error("unknown fixture id `{0}`")]
    UnknownFixture(String),

    #[error("parameter `{param}` = {value} is outside the admissible range {range}")]
    ParamOutOfRange { param: String, value: f64, range: String },

    #[error("auxiliary dense operation failed: {0}")]
    Oracle(String),
}
