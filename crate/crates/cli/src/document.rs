//! The JSON scene document and its conversion to and from core types.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use poncelet_core::configurations::{Color, IncidenceConfiguration};
use poncelet_core::constructions::{Branch, ConstructionTrace, Element, Incidence};
use poncelet_core::engine::{touch_point, PonceletScene};
use poncelet_core::projective::{Conic, ProjLine, ProjPoint};
use serde::{Deserialize, Serialize};

use crate::config::Precision;
use crate::error::{CliError, CliResult};

pub const FORMAT: &str = "poncelet-scene";
pub const VERSION: u32 = 1;

/// A complex number as [re, im].
pub type C = [f64; 2];
/// Homogeneous coordinates of a point or line.
pub type Coords = [C; 3];
/// Symmetric 3×3 conic matrix.
pub type Matrix = [[C; 3]; 3];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneDocument {
    pub format: String,
    pub version: u32,
    pub precision: Precision,
    /// What the document describes, e.g. "heptagon", "polygon", "chain".
    pub kind: String,
    /// Closure period of the vertex list, if it is a closed polygon.
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub outer: Option<Matrix>,
    #[serde(default)]
    pub inner: Option<Matrix>,
    #[serde(default)]
    pub vertices: Vec<Coords>,
    #[serde(default)]
    pub points: BTreeMap<String, Coords>,
    #[serde(default)]
    pub lines: BTreeMap<String, Coords>,
    #[serde(default)]
    pub conics: BTreeMap<String, Matrix>,
    #[serde(default)]
    pub traces: BTreeMap<String, TraceDoc>,
    #[serde(default)]
    pub configuration: Option<ConfigurationDoc>,
    #[serde(default)]
    pub checks: BTreeMap<String, Check>,
    #[serde(default)]
    pub metadata: Metadata,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub generator: String,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Subcommand and the arguments that determine the content.
    #[serde(default)]
    pub command: Vec<String>,
}

/// A residual against its threshold. Non-finite values are stored as null.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub value: Option<f64>,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    pub fn below(value: f64, threshold: f64) -> Check {
        Check {
            value: value.is_finite().then_some(value),
            threshold,
            pass: value < threshold,
        }
    }

    /// A yes/no condition, stored as value 0 (holds) or 1 (fails).
    pub fn flag(ok: bool) -> Check {
        Check {
            value: Some(if ok { 0.0 } else { 1.0 }),
            threshold: 0.5,
            pass: ok,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ElementDoc {
    Point { label: String, coords: Coords },
    Line { label: String, coords: Coords },
    Conic { label: String, matrix: Matrix },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TraceDoc {
    pub elements: Vec<ElementDoc>,
    #[serde(default)]
    pub branches: Vec<Branch>,
    #[serde(default)]
    pub incidences: Vec<Incidence>,
    #[serde(default)]
    pub polish: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledElement {
    pub label: String,
    pub coords: Coords,
    #[serde(default)]
    pub color: Option<Color>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigurationDoc {
    pub tolerance: f64,
    pub points: Vec<LabeledElement>,
    pub lines: Vec<LabeledElement>,
}

fn c(z: Complex64) -> C {
    [z.re, z.im]
}

fn z(c: &C) -> Complex64 {
    Complex64::new(c[0], c[1])
}

pub fn coords_of(v: [Complex64; 3]) -> Coords {
    v.map(c)
}

pub fn matrix_of(conic: &Conic) -> Matrix {
    conic.matrix().map(|r| r.map(c))
}

fn context(what: &str, e: poncelet_core::GeometryError) -> CliError {
    CliError::Input(format!("{what}: {e}"))
}

pub fn point_from(v: &Coords, what: &str) -> CliResult<ProjPoint> {
    ProjPoint::new(v.map(|x| z(&x))).map_err(|e| context(what, e))
}

pub fn line_from(v: &Coords, what: &str) -> CliResult<ProjLine> {
    ProjLine::new(v.map(|x| z(&x))).map_err(|e| context(what, e))
}

pub fn conic_from(m: &Matrix, what: &str) -> CliResult<Conic> {
    let conic = Conic::from_matrix(m.map(|r| r.map(|x| z(&x)))).map_err(|e| context(what, e))?;
    if conic.is_degenerate() {
        return Err(CliError::Input(format!("{what}: conic is degenerate")));
    }
    Ok(conic)
}

impl TraceDoc {
    pub fn from_trace(t: &ConstructionTrace) -> TraceDoc {
        let elements = t
            .elements
            .iter()
            .map(|(label, e)| match e {
                Element::Point(p) => ElementDoc::Point {
                    label: label.clone(),
                    coords: coords_of(p.coords()),
                },
                Element::Line(l) => ElementDoc::Line {
                    label: label.clone(),
                    coords: coords_of(l.coords()),
                },
                Element::Conic(k) => ElementDoc::Conic {
                    label: label.clone(),
                    matrix: matrix_of(k),
                },
            })
            .collect();
        TraceDoc {
            elements,
            branches: t.branches.clone(),
            incidences: t.incidences.clone(),
            polish: t.polish.clone(),
        }
    }

    pub fn to_trace(&self, name: &str) -> CliResult<ConstructionTrace> {
        let mut t = ConstructionTrace::new();
        for e in &self.elements {
            match e {
                ElementDoc::Point { label, coords } => {
                    t.add_point(
                        label.clone(),
                        point_from(coords, &format!("trace {name}, point {label}"))?,
                    );
                }
                ElementDoc::Line { label, coords } => {
                    t.add_line(
                        label.clone(),
                        line_from(coords, &format!("trace {name}, line {label}"))?,
                    );
                }
                ElementDoc::Conic { label, matrix } => {
                    t.add_conic(
                        label.clone(),
                        conic_from(matrix, &format!("trace {name}, conic {label}"))?,
                    );
                }
            }
        }
        t.branches = self.branches.clone();
        t.incidences = self.incidences.clone();
        t.polish = self.polish.clone();
        Ok(t)
    }
}

impl ConfigurationDoc {
    pub fn from_configuration(cfg: &IncidenceConfiguration) -> ConfigurationDoc {
        let color = |cs: &Option<Vec<Color>>, i: usize| cs.as_ref().map(|v| v[i]);
        let points = cfg
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| LabeledElement {
                label: cfg.point_labels[i].clone(),
                coords: coords_of(p.coords()),
                color: color(&cfg.point_colors, i),
            })
            .collect();
        let lines = cfg
            .lines
            .iter()
            .enumerate()
            .map(|(i, l)| LabeledElement {
                label: cfg.line_labels[i].clone(),
                coords: coords_of(l.coords()),
                color: color(&cfg.line_colors, i),
            })
            .collect();
        ConfigurationDoc {
            tolerance: cfg.tol,
            points,
            lines,
        }
    }

    pub fn to_configuration(&self, tol: Option<f64>) -> CliResult<IncidenceConfiguration> {
        let points = self
            .points
            .iter()
            .map(|e| point_from(&e.coords, &format!("configuration point {}", e.label)))
            .collect::<CliResult<Vec<_>>>()?;
        let lines = self
            .lines
            .iter()
            .map(|e| line_from(&e.coords, &format!("configuration line {}", e.label)))
            .collect::<CliResult<Vec<_>>>()?;
        let cfg = IncidenceConfiguration::labeled(
            points,
            self.points.iter().map(|e| e.label.clone()).collect(),
            lines,
            self.lines.iter().map(|e| e.label.clone()).collect(),
            tol.unwrap_or(self.tolerance),
        );
        let pc: Option<Vec<Color>> = self.points.iter().map(|e| e.color).collect();
        let lc: Option<Vec<Color>> = self.lines.iter().map(|e| e.color).collect();
        Ok(match (pc, lc) {
            (Some(pc), Some(lc)) if !pc.is_empty() || !lc.is_empty() => cfg.with_colors(pc, lc),
            _ => cfg,
        })
    }
}

impl SceneDocument {
    pub fn new(kind: &str, precision: Precision) -> SceneDocument {
        SceneDocument {
            format: FORMAT.into(),
            version: VERSION,
            precision,
            kind: kind.into(),
            n: None,
            outer: None,
            inner: None,
            vertices: Vec::new(),
            points: BTreeMap::new(),
            lines: BTreeMap::new(),
            conics: BTreeMap::new(),
            traces: BTreeMap::new(),
            configuration: None,
            checks: BTreeMap::new(),
            metadata: Metadata::default(),
        }
    }

    pub fn set_scene(&mut self, scene: &PonceletScene) {
        self.outer = Some(matrix_of(&scene.outer));
        self.inner = Some(matrix_of(&scene.inner));
        self.vertices = scene
            .vertices
            .iter()
            .map(|p| coords_of(p.coords()))
            .collect();
        self.n = scene.n;
    }

    pub fn add_point(&mut self, label: &str, p: &ProjPoint) {
        self.points.insert(label.into(), coords_of(p.coords()));
    }

    pub fn passed(&self) -> bool {
        self.checks.values().all(|c| c.pass)
    }

    pub fn outer_conic(&self) -> CliResult<Option<Conic>> {
        self.outer
            .as_ref()
            .map(|m| conic_from(m, "outer conic"))
            .transpose()
    }

    pub fn inner_conic(&self) -> CliResult<Option<Conic>> {
        self.inner
            .as_ref()
            .map(|m| conic_from(m, "inner conic"))
            .transpose()
    }

    pub fn vertex_points(&self) -> CliResult<Vec<ProjPoint>> {
        self.vertices
            .iter()
            .enumerate()
            .map(|(i, v)| point_from(v, &format!("vertex {}", i + 1)))
            .collect()
    }

    /// The polygon as a scene; touch points are recomputed from the inner conic.
    pub fn scene(&self) -> CliResult<PonceletScene> {
        let (Some(outer), Some(inner)) = (self.outer_conic()?, self.inner_conic()?) else {
            return Err(CliError::Input(
                "document has no outer and inner conic".into(),
            ));
        };
        let vertices = self.vertex_points()?;
        if vertices.len() < 2 {
            return Err(CliError::Input(
                "document needs at least two vertices".into(),
            ));
        }
        let mut scene = PonceletScene {
            outer,
            inner,
            vertices,
            touch_points: Vec::new(),
            n: self.n,
        };
        scene.touch_points = scene
            .edges()?
            .iter()
            .map(|l| touch_point(&inner, l))
            .collect::<Result<_, _>>()?;
        Ok(scene)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str, origin: &str) -> CliResult<SceneDocument> {
        let doc: SceneDocument = serde_json::from_str(text).map_err(|e| {
            let full = e.to_string();
            let msg = full
                .rsplit_once(" at line ")
                .map_or(full.as_str(), |(m, _)| m);
            CliError::Input(format!(
                "{origin}: line {}, column {}: {msg}",
                e.line(),
                e.column()
            ))
        })?;
        if doc.format != FORMAT {
            return Err(CliError::Input(format!(
                "{origin}: format is `{}`, expected `{FORMAT}`",
                doc.format
            )));
        }
        if doc.version != VERSION {
            return Err(CliError::Input(format!(
                "{origin}: unsupported version {}",
                doc.version
            )));
        }
        Ok(doc)
    }

    pub fn read(path: &Path) -> CliResult<SceneDocument> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        SceneDocument::parse(&text, &path.display().to_string())
    }
}
