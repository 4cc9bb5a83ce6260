use thiserror::Error;

pub type Result<T> = std::result::Result<T, GeometryError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("coincident elements: {0}")]
    CoincidentElements(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("numerical rank deficiency: {0}")]
    NumericalRankDeficiency(String),
    #[error("point is not on the conic (residual {residual:.3e})")]
    PointNotOnConic { residual: f64 },
    #[error("conic is degenerate")]
    DegenerateConic,
    #[error("conics are proportional")]
    ProportionalConics,
    #[error("cross ratio is undefined: a denominator bracket vanishes")]
    DegenerateCrossRatio,
    #[error("degenerate chain: {0}")]
    DegenerateChain(String),
    #[error("tangential degeneracy: both candidates coincide")]
    TangentialDegeneracy,
    #[error("construction step `{step}` is degenerate")]
    ConstructionDegeneracy { step: String },
    #[error("points are not the start of a Poncelet heptagon (residual {residual:.3e})")]
    NotAHeptagonPrefix { residual: f64 },
    #[error("points are not consistent with a Poncelet octagon (residual {residual:.3e})")]
    NotAnOctagonPrefix { residual: f64 },
    #[error("conic pencil is degenerate: {0}")]
    DegeneratePencil(String),
    #[error("no labeling of the doubling map yields a closing polygon")]
    NoValidLabeling,
    #[error("chain does not close (residual {residual:.3e})")]
    NotClosed { residual: f64 },
    #[error("non-finite value produced")]
    NonFinite,
}

impl GeometryError {
    pub(crate) fn step(label: impl Into<String>) -> Self {
        GeometryError::ConstructionDegeneracy { step: label.into() }
    }
}
