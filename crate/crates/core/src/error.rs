use thiserror::Error;

/// Errors produced by the analysis pipeline.
///
/// Several variants (`NotSymmetric`, `NotSymmetrizable`, `Infeasible`) are
/// negative decisions rather than failures; callers that only care about
/// the verdict can match on them directly.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("invalid value: {0}")]
    Value(String),
    #[error("sI - A is numerically singular at s = {re} + {im}i")]
    SingularResolvent { re: f64, im: f64 },
    #[error("transformation matrix {0} is singular")]
    SingularTransform(&'static str),
    #[error("gave up after {0} resampling attempts")]
    ExhaustedRetries(usize),
    #[error("sign constraints are inconsistent (odd cycle {cycle:?})")]
    Infeasible { cycle: Vec<usize> },
    #[error("system is not symmetric: {0}")]
    NotSymmetric(String),
    #[error("matrix is not symmetric")]
    NotSymmetricMatrix,
    #[error("system matrix is defective (eigenvalue near {eigenvalue})")]
    Defective { eigenvalue: f64 },
    #[error("wrong eigenstructure: {0}")]
    WrongStructure(String),
    #[error("system is not symmetrizable")]
    NotSymmetrizable,
    #[error("no certificate with signature {target} was found")]
    TargetSignatureUnreached { target: i64 },
    #[error("sign enumeration over {size} coordinates exceeds the cap of {cap}")]
    PatternLimitExceeded { size: usize, cap: usize },
    #[error("no positive definite certificate exists")]
    NotCompletelySymmetrizable,
    #[error("numerical solver failure: {0}")]
    SolverFailure(String),
    #[error("diagonal block {0} of the certificate is singular")]
    SingularBlock(&'static str),
    #[error("realization is not minimal ({0})")]
    NotMinimal(&'static str),
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("state matrix A is singular")]
    SingularA,
    #[error("closed loop is ill-posed (I - F D singular)")]
    IllPosedLoop,
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
