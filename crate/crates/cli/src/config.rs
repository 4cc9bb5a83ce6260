use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Field in which coordinates are computed. Only IEEE double is available.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Double,
}

impl Precision {
    pub fn parse(s: &str) -> CliResult<Precision> {
        match s {
            "double" => Ok(Precision::Double),
            other => Err(CliError::Input(format!(
                "unsupported precision `{other}`; only `double` is available"
            ))),
        }
    }
}

pub const DEFAULT_TOLERANCE: f64 = 1e-8;
const MAX_STEPS: usize = 10_000;

/// Validated settings shared by all subcommands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub tolerance: f64,
    pub precision: Precision,
    pub seed: u64,
    pub branch: usize,
    pub n: Option<usize>,
    pub steps: Option<usize>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub x: Option<Vec<f64>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tolerance: DEFAULT_TOLERANCE,
            precision: Precision::Double,
            seed: 0,
            branch: 0,
            n: None,
            steps: None,
            input: None,
            output: None,
            svg: None,
            x: None,
        }
    }
}

fn check_output(path: &Option<PathBuf>) -> CliResult<()> {
    if let Some(p) = path {
        let parent = p
            .parent()
            .filter(|d| !d.as_os_str().is_empty())
            .unwrap_or(Path::new("."));
        if !parent.is_dir() {
            return Err(CliError::Input(format!(
                "output directory {} does not exist",
                parent.display()
            )));
        }
    }
    Ok(())
}

impl RunConfig {
    /// Checks every field before any computation starts.
    pub fn validate(&self) -> CliResult<()> {
        if !(self.tolerance.is_finite() && self.tolerance > 0.0 && self.tolerance < 1.0) {
            return Err(CliError::Input(format!(
                "tolerance must lie in (0, 1), got {}",
                self.tolerance
            )));
        }
        if let Some(n) = self.n {
            if !(5..=64).contains(&n) {
                return Err(CliError::Input(format!("--n must lie in 5..=64, got {n}")));
            }
        }
        if let Some(s) = self.steps {
            if s > MAX_STEPS {
                return Err(CliError::Input(format!(
                    "--steps must be at most {MAX_STEPS}, got {s}"
                )));
            }
        }
        if let Some(x) = &self.x {
            if x.iter().any(|v| !v.is_finite()) {
                return Err(CliError::Input("--x values must be finite".into()));
            }
        }
        if let Some(p) = &self.input {
            if !p.is_file() {
                return Err(CliError::Input(format!(
                    "input file {} does not exist",
                    p.display()
                )));
            }
        }
        check_output(&self.output)?;
        check_output(&self.svg)?;
        Ok(())
    }

    pub fn need_x(&self, count: usize) -> CliResult<Option<&[f64]>> {
        match &self.x {
            Some(x) if x.len() != count => Err(CliError::Input(format!(
                "--x needs exactly {count} values, got {}",
                x.len()
            ))),
            Some(x) => Ok(Some(x.as_slice())),
            None => Ok(None),
        }
    }
}
