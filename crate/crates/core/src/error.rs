use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("eigenvalue iteration did not converge after {0} sweeps")]
    EigenFailure(usize),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("matrix argument is not positive stable (min Re eigenvalue = {0})")]
    NotPositiveStable(f64),
    #[error("eigenvector basis too ill-conditioned (cond = {0:.3e})")]
    IllConditionedEigenbasis(f64),
    #[error("matrices do not commute (relative commutator norm = {0:.3e})")]
    NonCommuting(f64),
    #[error("could not generate a commuting family meeting the conditioning constraints after {0} attempts")]
    GenerationFailure(usize),
    #[error("series did not converge within {max_terms} terms (last term norm {last_term:.3e})")]
    Nonconvergence { max_terms: usize, last_term: f64 },
    #[error("denominator shift {0} is numerically singular")]
    SingularDenominator(String),
    #[error("coefficient sequence degenerates to zero at index {0} (polynomial case)")]
    DegenerateSeries(usize),
    #[error("operator constant does not commute with the series coefficients (residual {0:.3e})")]
    NonCommutingOperator(f64),
    #[error("coefficient extraction unstable: disagreement {0:.3e} between resolutions")]
    ExtractionUnstable(f64),
    #[error("quadrature error estimate {estimate:.3e} exceeds requested tolerance {tolerance:.3e}")]
    QuadratureError { estimate: f64, tolerance: f64 },
    #[error("truncation tail bound {bound:.3e} exceeds tolerance {tolerance:.3e}")]
    TailBoundViolation { bound: f64, tolerance: f64 },
    #[error("endpoint singularity could not be resolved: {0}")]
    SingularityUnresolved(String),
    #[error("integral diverges: {0}")]
    DivergentIntegral(String),
    #[error("shifted parameter {0} is singular")]
    SingularShift(String),
    #[error("argument {0} lies on the branch cut (-inf, 0]")]
    BranchCut(num_complex::Complex64),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("singular matrix encountered in {0}")]
    SingularMatrix(String),
}

pub type Result<T> = std::result::Result<T, Error>;
