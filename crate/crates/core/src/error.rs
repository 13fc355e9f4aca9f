use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("conditioning block over [{0}] is numerically singular")]
    SingularConditioningSet(String),

    #[error("degenerate variance for `{0}`")]
    DegenerateVariance(String),

    #[error("mutual information diverges for {0} (|partial correlation| = 1)")]
    DivergentInformation(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("projected covariance is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NonPsdResult { min_eigenvalue: f64 },

    #[error("standardization infeasible at `{variable}`: required noise variance {required:e}")]
    InfeasibleStandardization { variable: String, required: f64 },

    #[error("need at least {needed} rows, got {got}")]
    TooFewRows { needed: usize, got: usize },

    #[error("insufficient samples for {test}: n - |cond| - 3 = {effective}")]
    InsufficientSamples { test: String, effective: i64 },

    #[error("invalid subsample size {k} for {n} rows")]
    InvalidSubsampleSize { k: usize, n: usize },

    #[error("all {0} replicates were degenerate")]
    AllReplicatesDegenerate(usize),

    #[error("rank-deficient parent design for `{0}`")]
    RankDeficientParents(String),

    #[error("graph contains a cycle through `{0}`")]
    CyclicGraph(String),

    #[error("invalid covariance: {0}")]
    InvalidCovariance(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("internal consistency: {0}")]
    InternalConsistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for errors caused by the numbers rather than by malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularConditioningSet(_)
                | Error::DegenerateVariance(_)
                | Error::DivergentInformation(_)
                | Error::NonPsdResult { .. }
                | Error::InfeasibleStandardization { .. }
                | Error::TooFewRows { .. }
                | Error::InsufficientSamples { .. }
                | Error::InvalidSubsampleSize { .. }
                | Error::AllReplicatesDegenerate(_)
                | Error::RankDeficientParents(_)
                | Error::InternalConsistency(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
