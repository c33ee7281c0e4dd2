use thiserror::Error;

/// Errors raised by the special-function, model, scattering, bound-state
/// and oracle layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series denominator parameter {0} is a non-positive integer")]
    PoleParameter(String),
    #[error("series did not converge within {terms} terms")]
    NoConvergence { terms: usize },
    #[error("argument modulus {modulus} exceeds the supported limit {limit}")]
    DomainTooLarge { modulus: f64, limit: f64 },
    #[error("argument lies on the branch cut (negative real axis)")]
    BranchAmbiguity,
    #[error("2mu = {0} is an integer; the logarithmic case is not supported")]
    LogarithmicCase(String),
    #[error("mu is too close to zero (|2mu| = {0:e})")]
    MuDegenerate(f64),
    #[error("energy {0} is too close to the continuum threshold |E| = 1")]
    KleinBorder(f64),
    #[error("operation requires a {expected} potential")]
    WrongKind { expected: &'static str },
    #[error("matching system is singular (condition number {0:e})")]
    SingularMatching(f64),
    #[error("unitarity violated: |R + T - 1| = {0:e}")]
    UnitarityViolation(f64),
    #[error("evaluation error estimate {est:e} exceeds acceptance tolerance {tol:e}")]
    Inaccurate { est: f64, tol: f64 },
    #[error("grid needs at least {min} points with min < max")]
    EmptyGrid { min: usize },
    #[error("no resonance peaks found in the scanned range")]
    NoPeaks,
    #[error("step size underflow at x = {0}")]
    StepUnderflow(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("non-finite value produced: {0}")]
    NonFinite(&'static str),
}

impl Error {
    /// Short machine-readable tag used in the `status` column of tabular output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::PoleParameter(_) => "pole_parameter",
            Error::NoConvergence { .. } => "no_convergence",
            Error::DomainTooLarge { .. } => "domain_too_large",
            Error::BranchAmbiguity => "branch_ambiguity",
            Error::LogarithmicCase(_) => "logarithmic_case",
            Error::MuDegenerate(_) => "mu_degenerate",
            Error::KleinBorder(_) => "klein_border",
            Error::WrongKind { .. } => "wrong_kind",
            Error::SingularMatching(_) => "singular_matching",
            Error::UnitarityViolation(_) => "unitarity_violation",
            Error::Inaccurate { .. } => "inaccurate",
            Error::EmptyGrid { .. } => "empty_grid",
            Error::NoPeaks => "no_peaks",
            Error::StepUnderflow(_) => "step_underflow",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::NonFinite(_) => "non_finite",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
