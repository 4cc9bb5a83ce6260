//! Incidence configurations built from Poncelet polygons.
//!
//! Rings are cyclically indexed point or line sequences. [`ring_join`] and
//! [`ring_meet`] are the operators ∨ₐ and ∧_b; composing them on a Poncelet
//! heptagon gives the Grünbaum–Rigby (21₄) configuration. Iterated join/meet
//! chains on an n-gon give a three-colored (3n₄) configuration.

use std::collections::BTreeMap;

use petgraph::algo::is_isomorphic_matching;
use petgraph::graph::UnGraph;
use serde::{Deserialize, Serialize};

use crate::constructions::ConstructionTrace;
use crate::projective::{
    conic_tangent_to_5, join, meet, six_on_conic_test, ProjLine, ProjMap, ProjPoint,
};
use crate::{GeometryError, Result};

/// Default threshold on the scaled incidence residual |pᵀl|.
pub const DEFAULT_INCIDENCE_TOL: f64 = 1e-7;

/// Cyclically ordered points p₁..pₙ, indices taken mod n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRing {
    pub points: Vec<ProjPoint>,
}

/// Cyclically ordered lines l₁..lₙ, indices taken mod n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineRing {
    pub lines: Vec<ProjLine>,
}

impl PointRing {
    pub fn new(points: Vec<ProjPoint>) -> PointRing {
        PointRing { points }
    }

    pub fn period(&self) -> usize {
        self.points.len()
    }

    /// Point with 0-based index i taken mod n.
    pub fn at(&self, i: isize) -> &ProjPoint {
        &self.points[wrap(i, self.period())]
    }

    /// Largest distance between corresponding points.
    pub fn distance(&self, other: &PointRing) -> f64 {
        self.points
            .iter()
            .zip(&other.points)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }
}

impl LineRing {
    pub fn new(lines: Vec<ProjLine>) -> LineRing {
        LineRing { lines }
    }

    pub fn period(&self) -> usize {
        self.lines.len()
    }

    pub fn at(&self, i: isize) -> &ProjLine {
        &self.lines[wrap(i, self.period())]
    }
}

fn wrap(i: isize, n: usize) -> usize {
    i.rem_euclid(n as isize) as usize
}

fn check_step(step: isize, n: usize, what: &str) -> Result<()> {
    if n == 0 {
        return Err(GeometryError::DegenerateInput(format!("empty {what} ring")));
    }
    if wrap(step, n) == 0 {
        return Err(GeometryError::CoincidentElements(format!(
            "step {step} is 0 mod {n}: every {what} would be combined with itself"
        )));
    }
    Ok(())
}

/// ∨ₐ(P): line i is pᵢ ∨ p_{i+a}.
pub fn ring_join(p: &PointRing, a: isize) -> Result<LineRing> {
    let n = p.period();
    check_step(a, n, "point")?;
    let lines = (0..n as isize)
        .map(|i| {
            join(p.at(i), p.at(i + a)).map_err(|_| {
                GeometryError::CoincidentElements(format!(
                    "points {} and {} coincide",
                    i + 1,
                    wrap(i + a, n) + 1
                ))
            })
        })
        .collect::<Result<_>>()?;
    Ok(LineRing { lines })
}

/// ∧_b(L): point i is lᵢ ∧ l_{i−b}.
pub fn ring_meet(l: &LineRing, b: isize) -> Result<PointRing> {
    let n = l.period();
    check_step(b, n, "line")?;
    let points = (0..n as isize)
        .map(|i| {
            meet(l.at(i), l.at(i - b)).map_err(|_| {
                GeometryError::CoincidentElements(format!(
                    "lines {} and {} coincide",
                    i + 1,
                    wrap(i - b, n) + 1
                ))
            })
        })
        .collect::<Result<_>>()?;
    Ok(PointRing { points })
}

/// Color class of a configuration element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Color {
    Red,
    Green,
    Blue,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::Red, Color::Green, Color::Blue];
}

/// Points, lines and their thresholded incidence matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncidenceConfiguration {
    pub points: Vec<ProjPoint>,
    pub lines: Vec<ProjLine>,
    pub point_labels: Vec<String>,
    pub line_labels: Vec<String>,
    /// incidence[i][j] ⟺ scaled |pᵢᵀlⱼ| < tol.
    pub incidence: Vec<Vec<bool>>,
    pub point_degrees: Vec<usize>,
    pub line_degrees: Vec<usize>,
    pub tol: f64,
    pub point_colors: Option<Vec<Color>>,
    pub line_colors: Option<Vec<Color>>,
}

impl IncidenceConfiguration {
    /// Labels default to "p1".. and "l1"..
    pub fn new(points: Vec<ProjPoint>, lines: Vec<ProjLine>, tol: f64) -> IncidenceConfiguration {
        let point_labels = (1..=points.len()).map(|i| format!("p{i}")).collect();
        let line_labels = (1..=lines.len()).map(|i| format!("l{i}")).collect();
        Self::labeled(points, point_labels, lines, line_labels, tol)
    }

    pub fn labeled(
        points: Vec<ProjPoint>,
        point_labels: Vec<String>,
        lines: Vec<ProjLine>,
        line_labels: Vec<String>,
        tol: f64,
    ) -> IncidenceConfiguration {
        assert_eq!(points.len(), point_labels.len(), "one label per point");
        assert_eq!(lines.len(), line_labels.len(), "one label per line");
        let incidence: Vec<Vec<bool>> = points
            .iter()
            .map(|p| lines.iter().map(|l| p.incidence(l) < tol).collect())
            .collect();
        let point_degrees = incidence
            .iter()
            .map(|row| row.iter().filter(|&&x| x).count())
            .collect();
        let line_degrees = (0..lines.len())
            .map(|j| incidence.iter().filter(|row| row[j]).count())
            .collect();
        IncidenceConfiguration {
            points,
            lines,
            point_labels,
            line_labels,
            incidence,
            point_degrees,
            line_degrees,
            tol,
            point_colors: None,
            line_colors: None,
        }
    }

    pub fn with_colors(mut self, points: Vec<Color>, lines: Vec<Color>) -> IncidenceConfiguration {
        assert_eq!(points.len(), self.points.len(), "one color per point");
        assert_eq!(lines.len(), self.lines.len(), "one color per line");
        self.point_colors = Some(points);
        self.line_colors = Some(lines);
        self
    }

    /// The configuration with point i removed; incidences are recomputed.
    pub fn without_point(&self, i: usize) -> IncidenceConfiguration {
        let mut points = self.points.clone();
        let mut labels = self.point_labels.clone();
        points.remove(i);
        labels.remove(i);
        let mut out = Self::labeled(
            points,
            labels,
            self.lines.clone(),
            self.line_labels.clone(),
            self.tol,
        );
        if let (Some(pc), Some(lc)) = (&self.point_colors, &self.line_colors) {
            let mut pc = pc.clone();
            pc.remove(i);
            out = out.with_colors(pc, lc.clone());
        }
        out
    }

    /// Applies a projective map to every element; incidences are recomputed.
    pub fn transformed(&self, s: &ProjMap) -> IncidenceConfiguration {
        let points = self.points.iter().map(|p| s.apply(p)).collect();
        let lines = self.lines.iter().map(|l| s.apply(l)).collect();
        let mut out = Self::labeled(
            points,
            self.point_labels.clone(),
            lines,
            self.line_labels.clone(),
            self.tol,
        );
        out.point_colors = self.point_colors.clone();
        out.line_colors = self.line_colors.clone();
        out
    }

    /// Largest residual among the recorded incidences.
    pub fn max_incidence_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, p) in self.points.iter().enumerate() {
            for (j, l) in self.lines.iter().enumerate() {
                if self.incidence[i][j] {
                    worst = worst.max(p.incidence(l));
                }
            }
        }
        worst
    }

    /// Smallest residual among the non-incident pairs.
    pub fn min_non_incidence_residual(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, p) in self.points.iter().enumerate() {
            for (j, l) in self.lines.iter().enumerate() {
                if !self.incidence[i][j] {
                    best = best.min(p.incidence(l));
                }
            }
        }
        best
    }
}

/// A failed (N₄) requirement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum N4Violation {
    CountMismatch {
        points: usize,
        lines: usize,
    },
    PointDegree {
        index: usize,
        label: String,
        degree: usize,
    },
    LineDegree {
        index: usize,
        label: String,
        degree: usize,
    },
    CoincidentPoints {
        first: usize,
        second: usize,
    },
    CoincidentLines {
        first: usize,
        second: usize,
    },
}

/// Result of [`verify_n4`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct N4Report {
    pub points: usize,
    pub lines: usize,
    /// degree → number of points with that degree.
    pub point_degree_histogram: BTreeMap<usize, usize>,
    pub line_degree_histogram: BTreeMap<usize, usize>,
    pub violations: Vec<N4Violation>,
    pub pass: bool,
}

/// Checks that the configuration is an (N₄): as many points as lines, every
/// element of degree exactly 4 and no two points or lines coinciding. An empty
/// configuration does not pass.
pub fn verify_n4(cfg: &IncidenceConfiguration) -> N4Report {
    let histogram = |degrees: &[usize]| {
        let mut h = BTreeMap::new();
        for &d in degrees {
            *h.entry(d).or_insert(0) += 1;
        }
        h
    };
    let mut violations = Vec::new();
    if cfg.points.len() != cfg.lines.len() {
        violations.push(N4Violation::CountMismatch {
            points: cfg.points.len(),
            lines: cfg.lines.len(),
        });
    }
    for (index, &degree) in cfg.point_degrees.iter().enumerate() {
        if degree != 4 {
            violations.push(N4Violation::PointDegree {
                index,
                label: cfg.point_labels[index].clone(),
                degree,
            });
        }
    }
    for (index, &degree) in cfg.line_degrees.iter().enumerate() {
        if degree != 4 {
            violations.push(N4Violation::LineDegree {
                index,
                label: cfg.line_labels[index].clone(),
                degree,
            });
        }
    }
    for i in 0..cfg.points.len() {
        for j in i + 1..cfg.points.len() {
            if cfg.points[i].distance(&cfg.points[j]) < cfg.tol {
                violations.push(N4Violation::CoincidentPoints {
                    first: i,
                    second: j,
                });
            }
        }
    }
    for i in 0..cfg.lines.len() {
        for j in i + 1..cfg.lines.len() {
            if cfg.lines[i].distance(&cfg.lines[j]) < cfg.tol {
                violations.push(N4Violation::CoincidentLines {
                    first: i,
                    second: j,
                });
            }
        }
    }
    let pass = !cfg.points.is_empty() && violations.is_empty();
    N4Report {
        points: cfg.points.len(),
        lines: cfg.lines.len(),
        point_degree_histogram: histogram(&cfg.point_degrees),
        line_degree_histogram: histogram(&cfg.line_degrees),
        violations,
        pass,
    }
}

/// The six rings of the operator word ∧₃∨₁∧₂∨₃∧₁∨₂ applied to a heptagon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrunbaumRigby {
    /// Points P, P₁ = ∧₁∨₂P, P₂ = ∧₂∨₃P₁ and lines L₁ = ∨₂P, L₂ = ∨₃P₁,
    /// L₃ = ∨₁P₂, labeled P1..P7, Q1..Q7, R1..R7 and L1..L7, M1..M7, N1..N7.
    pub configuration: IncidenceConfiguration,
    /// P′ = ∧₃L₃.
    pub image: PointRing,
    /// Largest distance between P and P′.
    pub fixed_point_residual: f64,
}

/// Runs P′ = ∧₃∨₁∧₂∨₃∧₁∨₂(P) on a 7-point ring and assembles the 21 points
/// and 21 lines of all intermediate rings, with P itself as the first point
/// ring. For a Poncelet heptagon P′ = P and the result is a (21₄).
pub fn grunbaum_rigby(p: &PointRing, tol: f64) -> Result<GrunbaumRigby> {
    if p.period() != 7 {
        return Err(GeometryError::DegenerateInput(format!(
            "expected 7 points, got {}",
            p.period()
        )));
    }
    fn step(label: &'static str) -> impl Fn(GeometryError) -> GeometryError {
        move |_| GeometryError::step(label)
    }
    let l1 = ring_join(p, 2).map_err(step("∨₂"))?;
    let p1 = ring_meet(&l1, 1).map_err(step("∧₁"))?;
    let l2 = ring_join(&p1, 3).map_err(step("∨₃"))?;
    let p2 = ring_meet(&l2, 2).map_err(step("∧₂"))?;
    let l3 = ring_join(&p2, 1).map_err(step("∨₁"))?;
    let image = ring_meet(&l3, 3).map_err(step("∧₃"))?;

    let labels = |prefix: &'static str| (1..=7).map(move |i| format!("{prefix}{i}"));
    let points = [p, &p1, &p2]
        .iter()
        .flat_map(|r| r.points.clone())
        .collect();
    let lines = [&l1, &l2, &l3]
        .iter()
        .flat_map(|r| r.lines.clone())
        .collect();
    let point_labels = labels("P").chain(labels("Q")).chain(labels("R")).collect();
    let line_labels = labels("L").chain(labels("M")).chain(labels("N")).collect();
    let configuration =
        IncidenceConfiguration::labeled(points, point_labels, lines, line_labels, tol);
    let fixed_point_residual = p.distance(&image);
    Ok(GrunbaumRigby {
        configuration,
        image,
        fixed_point_residual,
    })
}

/// Combinatorial incidence matrix of the (21₄) produced by [`grunbaum_rigby`],
/// from the index pattern of the operator word: with rings P, Q, R and
/// L, M, N (0-based i mod 7), Lᵢ ∋ Pᵢ, Pᵢ₊₂, Qᵢ, Qᵢ₊₁; Mᵢ ∋ Qᵢ, Qᵢ₊₃, Rᵢ, Rᵢ₊₂;
/// Nᵢ ∋ Rᵢ, Rᵢ₊₁, Pᵢ, Pᵢ₊₃.
pub fn grunbaum_rigby_pattern() -> Vec<Vec<bool>> {
    let mut m = vec![vec![false; 21]; 21];
    // (own ring, step within it, other ring, its two offsets) for L, M, N
    let pattern: [(usize, usize, usize, usize, usize); 3] =
        [(0, 2, 1, 0, 1), (1, 3, 2, 0, 2), (2, 1, 0, 0, 3)];
    for (ring, &(own, own_step, other, o0, o1)) in pattern.iter().enumerate() {
        for i in 0..7 {
            let line = 7 * ring + i;
            m[7 * own + i][line] = true;
            m[7 * own + (i + own_step) % 7][line] = true;
            m[7 * other + (i + o0) % 7][line] = true;
            m[7 * other + (i + o1) % 7][line] = true;
        }
    }
    m
}

fn incidence_graph(m: &[Vec<bool>]) -> UnGraph<bool, ()> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut g = UnGraph::<bool, ()>::with_capacity(rows + cols, rows * 4);
    let points: Vec<_> = (0..rows).map(|_| g.add_node(true)).collect();
    let lines: Vec<_> = (0..cols).map(|_| g.add_node(false)).collect();
    for (i, row) in m.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if x {
                g.add_edge(points[i], lines[j], ());
            }
        }
    }
    g
}

/// Whether two point×line incidence matrices describe isomorphic incidence
/// structures (points mapped to points, lines to lines).
pub fn incidence_isomorphic(a: &[Vec<bool>], b: &[Vec<bool>]) -> bool {
    if a.len() != b.len() || a.first().map_or(0, Vec::len) != b.first().map_or(0, Vec::len) {
        return false;
    }
    let mut da: Vec<usize> = a.iter().map(|r| r.iter().filter(|&&x| x).count()).collect();
    let mut db: Vec<usize> = b.iter().map(|r| r.iter().filter(|&&x| x).count()).collect();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    is_isomorphic_matching(
        &incidence_graph(a),
        &incidence_graph(b),
        |x, y| x == y,
        |_, _| true,
    )
}

/// The (3n₄) configuration of a join/meet chain run on a closed n-gon.
///
/// Red points are the polygon vertices rᵢ, green and blue points the auxiliary
/// points Gᵢ and Bᵢ (indices mod n). The lines are the edges rᵢrᵢ₊₁ (green,
/// through Bᵢ and Bᵢ₊₂), the diagonals rᵢrᵢ₊₃ (blue, through Gᵢ and Gᵢ₊₂) and
/// the lines GᵢBᵢ (red, through Gᵢ₊₁ and Bᵢ₊₃). The trace must cover at least
/// n steps so that every ring is seen to wrap around.
pub fn config_from_chain_trace(
    trace: &ConstructionTrace,
    n: usize,
    tol: f64,
) -> Result<IncidenceConfiguration> {
    if n < 5 {
        return Err(GeometryError::DegenerateInput(format!(
            "period {n} is below 5"
        )));
    }
    let get = |label: String| {
        trace.point(&label).ok_or_else(|| {
            GeometryError::DegenerateInput(format!(
                "trace has no point {label}; run at least {n} steps"
            ))
        })
    };
    // red 1..=n+1, green 3..=n+3, blue 3..=n+3
    let mut rings = Vec::new();
    let mut residual: f64 = 0.0;
    for (prefix, first) in [("", 1), ("G", 3), ("B", 3)] {
        let ring = (first..first + n)
            .map(|i| get(format!("{prefix}{i}")))
            .collect::<Result<Vec<_>>>()?;
        let again = get(format!("{prefix}{}", first + n))?;
        residual = residual.max(again.distance(&ring[0]));
        // rotate so that slot k holds index k + 1
        let mut ordered = vec![ring[0]; n];
        for (k, q) in ring.into_iter().enumerate() {
            ordered[(first - 1 + k) % n] = q;
        }
        rings.push(ordered);
    }
    if residual > tol {
        return Err(GeometryError::NotClosed { residual });
    }
    let (red, green, blue) = (&rings[0], &rings[1], &rings[2]);
    let line = |a: &ProjPoint, b: &ProjPoint, label: String| {
        join(a, b).map_err(|_| GeometryError::step(label))
    };
    let mut lines = Vec::with_capacity(3 * n);
    let mut line_labels = Vec::with_capacity(3 * n);
    let mut line_colors = Vec::with_capacity(3 * n);
    for i in 0..n {
        let label = format!("{}v{}", i + 1, (i + 1) % n + 1);
        lines.push(line(&red[i], &red[(i + 1) % n], label.clone())?);
        line_labels.push(label);
        line_colors.push(Color::Green);
    }
    for i in 0..n {
        let label = format!("{}v{}", i + 1, (i + 3) % n + 1);
        lines.push(line(&red[i], &red[(i + 3) % n], label.clone())?);
        line_labels.push(label);
        line_colors.push(Color::Blue);
    }
    for i in 0..n {
        let label = format!("G{}vB{}", i + 1, i + 1);
        lines.push(line(&green[i], &blue[i], label.clone())?);
        line_labels.push(label);
        line_colors.push(Color::Red);
    }
    let points: Vec<ProjPoint> = rings.concat();
    let point_labels = ["", "G", "B"]
        .iter()
        .flat_map(|p| (1..=n).map(move |i| format!("{p}{i}")))
        .collect();
    let point_colors = [Color::Red, Color::Green, Color::Blue]
        .iter()
        .flat_map(|&c| vec![c; n])
        .collect();
    Ok(
        IncidenceConfiguration::labeled(points, point_labels, lines, line_labels, tol)
            .with_colors(point_colors, line_colors),
    )
}

/// Per-color checks of a colored configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColorReport {
    /// Largest six-on-a-conic residual of each point color (first five points
    /// against each further one).
    pub conconic: BTreeMap<Color, f64>,
    /// Largest tangency residual of each line color against the conic tangent
    /// to its first five lines.
    pub tangent: BTreeMap<Color, f64>,
    /// Incidences joining a line to a point of its own color.
    pub same_color_incidences: Vec<(usize, usize)>,
}

impl ColorReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.same_color_incidences.is_empty()
            && self
                .conconic
                .values()
                .chain(self.tangent.values())
                .all(|&r| r < tol)
    }
}

/// Checks that each point color is conconic, each line color is tangent to a
/// common conic and that no line meets a point of its own color. Colors with
/// fewer than six elements are trivially conconic.
pub fn color_report(cfg: &IncidenceConfiguration) -> Result<ColorReport> {
    let (Some(pc), Some(lc)) = (&cfg.point_colors, &cfg.line_colors) else {
        return Err(GeometryError::DegenerateInput(
            "configuration has no colors".into(),
        ));
    };
    let mut conconic = BTreeMap::new();
    let mut tangent = BTreeMap::new();
    for color in Color::ALL {
        let pts: Vec<ProjPoint> = cfg
            .points
            .iter()
            .zip(pc)
            .filter(|(_, &c)| c == color)
            .map(|(p, _)| *p)
            .collect();
        let mut worst: f64 = 0.0;
        for q in pts.iter().skip(5) {
            worst = worst.max(six_on_conic_test(&[
                pts[0], pts[1], pts[2], pts[3], pts[4], *q,
            ]));
        }
        conconic.insert(color, worst);

        let ls: Vec<ProjLine> = cfg
            .lines
            .iter()
            .zip(lc)
            .filter(|(_, &c)| c == color)
            .map(|(l, _)| *l)
            .collect();
        let mut worst: f64 = 0.0;
        if ls.len() > 5 {
            let five: [ProjLine; 5] = std::array::from_fn(|i| ls[i]);
            let conic = conic_tangent_to_5(&five)
                .map_err(|_| GeometryError::step(format!("{color:?} line conic")))?;
            for l in &ls[5..] {
                worst = worst.max(conic.tangency(l));
            }
        }
        tangent.insert(color, worst);
    }
    let mut same_color_incidences = Vec::new();
    for (i, row) in cfg.incidence.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if x && pc[i] == lc[j] {
                same_color_incidences.push((i, j));
            }
        }
    }
    Ok(ColorReport {
        conconic,
        tangent,
        same_color_incidences,
    })
}
