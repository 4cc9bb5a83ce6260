use serde::{Deserialize, Serialize};

use crate::projective::{conic_contains, join, meet, Conic, ProjLine, ProjPoint};
use crate::{GeometryError, Result};

/// A labeled intermediate of a construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Element {
    Point(ProjPoint),
    Line(ProjLine),
    Conic(Conic),
}

/// An incidence asserted by a construction step, by label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Incidence {
    PointOnLine { point: String, line: String },
    PointOnConic { point: String, conic: String },
    LineTangent { line: String, conic: String },
}

/// A two-valued choice made at a step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub step: String,
    pub index: usize,
}

/// Result of re-checking every recorded incidence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub checked: usize,
    pub max_residual: f64,
    /// Incidences whose residual exceeds the tolerance.
    pub failures: Vec<(Incidence, f64)>,
}

impl ReplayReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Audit trail of a construction: labeled elements in creation order, branch
/// choices and the incidences each step relies on.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub elements: Vec<(String, Element)>,
    pub branches: Vec<Branch>,
    pub incidences: Vec<Incidence>,
    /// Relative shift of each output point under the final Newton polish.
    pub polish: Vec<(String, f64)>,
}

impl ConstructionTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, label: &str) -> Option<&Element> {
        self.elements
            .iter()
            .rev()
            .find(|(l, _)| l == label)
            .map(|(_, e)| e)
    }

    pub fn point(&self, label: &str) -> Option<ProjPoint> {
        match self.get(label) {
            Some(Element::Point(p)) => Some(*p),
            _ => None,
        }
    }

    pub fn line(&self, label: &str) -> Option<ProjLine> {
        match self.get(label) {
            Some(Element::Line(l)) => Some(*l),
            _ => None,
        }
    }

    pub fn conic(&self, label: &str) -> Option<Conic> {
        match self.get(label) {
            Some(Element::Conic(c)) => Some(*c),
            _ => None,
        }
    }

    pub fn points(&self) -> impl Iterator<Item = (&str, &ProjPoint)> {
        self.elements.iter().filter_map(|(l, e)| match e {
            Element::Point(p) => Some((l.as_str(), p)),
            _ => None,
        })
    }

    pub fn lines(&self) -> impl Iterator<Item = (&str, &ProjLine)> {
        self.elements.iter().filter_map(|(l, e)| match e {
            Element::Line(x) => Some((l.as_str(), x)),
            _ => None,
        })
    }

    pub fn add_point(&mut self, label: impl Into<String>, p: ProjPoint) -> ProjPoint {
        self.elements.push((label.into(), Element::Point(p)));
        p
    }

    pub fn add_line(&mut self, label: impl Into<String>, l: ProjLine) -> ProjLine {
        self.elements.push((label.into(), Element::Line(l)));
        l
    }

    pub fn add_conic(&mut self, label: impl Into<String>, c: Conic) -> Conic {
        self.elements.push((label.into(), Element::Conic(c)));
        c
    }

    pub fn add_branch(&mut self, step: impl Into<String>, index: usize) {
        self.branches.push(Branch {
            step: step.into(),
            index,
        });
    }

    pub fn on_line(&mut self, point: &str, line: &str) {
        self.incidences.push(Incidence::PointOnLine {
            point: point.into(),
            line: line.into(),
        });
    }

    pub fn on_conic(&mut self, point: &str, conic: &str) {
        self.incidences.push(Incidence::PointOnConic {
            point: point.into(),
            conic: conic.into(),
        });
    }

    pub fn tangent(&mut self, line: &str, conic: &str) {
        self.incidences.push(Incidence::LineTangent {
            line: line.into(),
            conic: conic.into(),
        });
    }

    fn need_point(&self, label: &str, step: &str) -> Result<ProjPoint> {
        self.point(label)
            .ok_or_else(|| GeometryError::step(format!("{step}: unknown point {label}")))
    }

    fn need_line(&self, label: &str, step: &str) -> Result<ProjLine> {
        self.line(label)
            .ok_or_else(|| GeometryError::step(format!("{step}: unknown line {label}")))
    }

    /// Records `label` = a ∨ b.
    pub fn join(&mut self, label: &str, a: &str, b: &str) -> Result<ProjLine> {
        let (p, q) = (self.need_point(a, label)?, self.need_point(b, label)?);
        let l = join(&p, &q).map_err(|_| GeometryError::step(label))?;
        self.add_line(label, l);
        self.on_line(a, label);
        self.on_line(b, label);
        Ok(l)
    }

    /// Records `label` = l ∧ m.
    pub fn meet(&mut self, label: &str, l: &str, m: &str) -> Result<ProjPoint> {
        let (a, b) = (self.need_line(l, label)?, self.need_line(m, label)?);
        let p = meet(&a, &b).map_err(|_| GeometryError::step(label))?;
        self.add_point(label, p);
        self.on_line(label, l);
        self.on_line(label, m);
        Ok(p)
    }

    /// Records the line through the two named points under the label "ab".
    pub fn join_points(&mut self, a: &str, b: &str) -> Result<ProjLine> {
        let label = format!("{a}{b}");
        if let Some(l) = self.line(&label) {
            return Ok(l);
        }
        self.join(&label, a, b)
    }

    /// Re-evaluates every recorded incidence from the stored elements.
    pub fn replay(&self, tol: f64) -> ReplayReport {
        let mut report = ReplayReport {
            checked: 0,
            max_residual: 0.0,
            failures: Vec::new(),
        };
        for inc in &self.incidences {
            let residual = match inc {
                Incidence::PointOnLine { point, line } => {
                    match (self.point(point), self.line(line)) {
                        (Some(p), Some(l)) => p.incidence(&l),
                        _ => f64::INFINITY,
                    }
                }
                Incidence::PointOnConic { point, conic } => {
                    match (self.point(point), self.conic(conic)) {
                        (Some(p), Some(c)) => conic_contains(&c, &p),
                        _ => f64::INFINITY,
                    }
                }
                Incidence::LineTangent { line, conic } => {
                    match (self.line(line), self.conic(conic)) {
                        (Some(l), Some(c)) => c.tangency(&l),
                        _ => f64::INFINITY,
                    }
                }
            };
            report.checked += 1;
            report.max_residual = report.max_residual.max(residual);
            if !(residual <= tol) {
                report.failures.push((inc.clone(), residual));
            }
        }
        report
    }
}
