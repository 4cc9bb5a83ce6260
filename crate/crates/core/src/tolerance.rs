use serde::{Deserialize, Serialize};

/// Numerical thresholds. Every "is zero" test is relative to operand magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Verification tolerance for residuals of computed relations.
    pub relative: f64,
    /// Threshold below which an operation is treated as degenerate.
    pub degeneracy: f64,
    /// Threshold for "point lies on conic" preconditions.
    pub membership: f64,
    /// Threshold for incidences inside assembled configurations.
    pub incidence: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        relative: 1e-9,
        degeneracy: 1e-12,
        membership: 1e-8,
        incidence: 1e-7,
    };

    /// Imaginary parts below this fraction of the magnitude are reported as real.
    pub const REALITY: f64 = 1e-9;
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances::DEFAULT
    }
}
