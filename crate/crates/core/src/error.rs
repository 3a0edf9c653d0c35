use thiserror::Error;

/// Errors raised anywhere in the LMG pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LmgError {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("parity block {0} is empty for N = {1}")]
    EmptySector(&'static str, usize),

    #[error("full-space Hamiltonian requested for N = {n}, limit is {max}")]
    FullSpaceTooLarge { n: usize, max: usize },

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("density matrix is not normalized (trace {trace})")]
    NotNormalized { trace: f64 },

    #[error("density matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("reduced state violates positivity: {0}")]
    PositivityViolation(String),

    #[error("two-spin reduced state is not X-shaped (largest off-X entry {0:e})")]
    NotXShaped(f64),

    #[error("reduced state depends on the spin pair (deviation {0:e})")]
    PairDependence(f64),

    #[error("marginal state is degenerate; measurement optimum is not unique")]
    DegenerateMarginal,

    #[error("phase {phase} is inconsistent with h = {h}")]
    PhaseMismatch { phase: &'static str, h: f64 },

    #[error("{0}")]
    Unsupported(String),

    #[error("series '{name}' has non-positive transformed value {value:e} at N = {n}")]
    NonPositiveSeries { name: String, n: u64, value: f64 },

    #[error("need at least {needed} points for a fit, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("series is not strictly increasing in N")]
    UnorderedSeries,

    #[error("sequence N*delta for '{0}' does not converge")]
    Divergent(String),
}

pub type Result<T> = std::result::Result<T, LmgError>;
