use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The exponents violate `2 <= p <= q <= 5p - 1`.
    #[error("assumption violated: {0}")]
    AssumptionViolation(String),

    #[error("degenerate model: {0}")]
    DegenerateModel(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The variational formula for the limiting free energy is only
    /// established for non-negative second and third couplings.
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// Second derivatives of the free energy diverge on the transition
    /// surface and the critical curve.
    #[error("point lies on the transition surface or critical curve: {0}")]
    Surface(String),

    #[error("resource budget exceeded: {0}")]
    Resource(String),

    #[error("unknown figure id {0} (expected 1..=8)")]
    UnknownFigure(u32),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable identifier of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::AssumptionViolation(_) => "assumption_violation",
            Error::DegenerateModel(_) => "degenerate_model",
            Error::Domain(_) => "domain_error",
            Error::HypothesisViolation(_) => "hypothesis_violation",
            Error::NumericalFailure(_) => "numerical_failure",
            Error::Surface(_) => "surface_error",
            Error::Resource(_) => "resource_error",
            Error::UnknownFigure(_) => "unknown_figure",
            Error::Parse(_) => "parse_error",
            Error::Io(_) => "io_error",
        }
    }

    /// Process exit code: 2 usage, 3 domain/hypothesis, 4 numerical, 5 resource.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::UnknownFigure(_) | Error::Parse(_) => 2,
            Error::AssumptionViolation(_)
            | Error::DegenerateModel(_)
            | Error::Domain(_)
            | Error::HypothesisViolation(_)
            | Error::Surface(_) => 3,
            Error::NumericalFailure(_) => 4,
            Error::Resource(_) => 5,
            Error::Io(_) => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
