use std::fmt;

use poncelet_core::GeometryError;

/// Failure of a command, carrying its exit code class.
#[derive(Debug)]
pub enum CliError {
    /// Residuals were computed but at least one check failed.
    Verification(String),
    /// Bad flags, unreadable or malformed files, degenerate input geometry.
    Input(String),
    /// A construction step degenerated.
    Construction(String),
    /// Numerical failure: non-finite values, rank deficiency, retries exhausted.
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input(_) => 2,
            CliError::Construction(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Input(m) => write!(f, "invalid input: {m}"),
            CliError::Construction(m) => write!(f, "construction failed: {m}"),
            CliError::Numeric(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        use GeometryError::*;
        let msg = e.to_string();
        match e {
            DegenerateInput(_)
            | CoincidentElements(_)
            | PointNotOnConic { .. }
            | DegenerateConic
            | ProportionalConics
            | DegenerateCrossRatio
            | NotAHeptagonPrefix { .. }
            | NotAnOctagonPrefix { .. }
            | NotClosed { .. } => CliError::Input(msg),
            ConstructionDegeneracy { .. }
            | DegenerateChain(_)
            | TangentialDegeneracy
            | DegeneratePencil(_)
            | NoValidLabeling => CliError::Construction(msg),
            NumericalRankDeficiency(_) | NonFinite => CliError::Numeric(msg),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
