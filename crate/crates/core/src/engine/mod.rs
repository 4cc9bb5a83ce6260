//! Poncelet chains on a pair of conics and closure testing.
//!
//! Two independent chain engines are provided: the synthetic one alternates
//! "other intersection with the outer conic" and "other tangent to the inner
//! conic"; the algebraic one works on the projective line with
//! [`next_chain_point`](crate::rp1::next_chain_point). The closure polynomial
//! solver lives in [`closure`].

pub mod closure;

use serde::{Deserialize, Serialize};

use crate::projective::{
    conic_contains, conic_tangent_to_5, join, line_conic_intersect, tangents_from_point, Conic,
    ProjLine, ProjPoint,
};
use crate::rp1::{bracket, RP1Point, StereoChart};
use crate::{linalg, GeometryError, Result, Tolerances};

pub use closure::{
    closure_polynomial, closure_polynomial_rp1, count_solutions, count_solutions_random,
    exact_affine, exact_point, solve_closure, ClosurePolynomial, ClosureRoot, ClosureSolutions,
    ExactPoint,
};

/// Polygon (or chain) inscribed in `outer` with edges tangent to `inner`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PonceletScene {
    pub outer: Conic,
    pub inner: Conic,
    pub vertices: Vec<ProjPoint>,
    /// Point where edge i (from vertex i to vertex i+1) touches the inner conic.
    pub touch_points: Vec<ProjPoint>,
    pub n: Option<usize>,
}

/// Worst residuals of the scene invariants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SceneResiduals {
    pub vertex_on_outer: f64,
    pub edge_tangency: f64,
    pub touch_on_edge: f64,
    pub touch_on_inner: f64,
}

impl SceneResiduals {
    pub fn max(&self) -> f64 {
        self.vertex_on_outer
            .max(self.edge_tangency)
            .max(self.touch_on_edge)
            .max(self.touch_on_inner)
    }
}

/// Point where a tangent line touches the conic: the pole of the line.
pub fn touch_point(inner: &Conic, l: &ProjLine) -> Result<ProjPoint> {
    ProjPoint::new(linalg::mat_vec(&inner.dual_matrix(), &l.coords()))
        .map_err(|_| GeometryError::DegenerateConic)
}

impl PonceletScene {
    /// Runs the synthetic chain for `n` steps and keeps the first `n` vertices.
    pub fn from_chain(
        outer: Conic,
        inner: Conic,
        start: ProjPoint,
        tangent_choice: usize,
        n: usize,
    ) -> Result<Self> {
        let states = run_chain_states(&outer, &inner, start, tangent_choice, n)?;
        let vertices: Vec<ProjPoint> = states.iter().take(n).map(|s| s.current).collect();
        let touch_points = states
            .iter()
            .take(n)
            .map(|s| touch_point(&inner, &s.incoming_line))
            .collect::<Result<_>>()?;
        Ok(PonceletScene {
            outer,
            inner,
            vertices,
            touch_points,
            n: Some(n),
        })
    }

    /// Closed polygon: edges wrap around from the last vertex to the first.
    pub fn edges(&self) -> Result<Vec<ProjLine>> {
        let k = self.vertices.len();
        let count = if self.n.is_some() {
            k
        } else {
            k.saturating_sub(1)
        };
        (0..count)
            .map(|i| join(&self.vertices[i], &self.vertices[(i + 1) % k]))
            .collect()
    }

    pub fn residuals(&self) -> Result<SceneResiduals> {
        let vertex_on_outer = self
            .vertices
            .iter()
            .map(|p| conic_contains(&self.outer, p))
            .fold(0.0, f64::max);
        let edges = self.edges()?;
        let edge_tangency = edges
            .iter()
            .map(|l| self.inner.tangency(l))
            .fold(0.0, f64::max);
        let mut touch_on_edge: f64 = 0.0;
        let mut touch_on_inner: f64 = 0.0;
        for (q, l) in self.touch_points.iter().zip(edges.iter()) {
            touch_on_edge = touch_on_edge.max(q.incidence(l));
            touch_on_inner = touch_on_inner.max(conic_contains(&self.inner, q));
        }
        Ok(SceneResiduals {
            vertex_on_outer,
            edge_tangency,
            touch_on_edge,
            touch_on_inner,
        })
    }

    pub fn closure(&self, tol: f64) -> Result<ClosureReport> {
        let n = self.n.unwrap_or(self.vertices.len());
        let start = *self
            .vertices
            .first()
            .ok_or_else(|| GeometryError::DegenerateInput("empty scene".into()))?;
        let first = join(&start, &self.vertices[1 % self.vertices.len()])?;
        closure_test_from(
            &self.outer,
            &self.inner,
            ChainState {
                current: start,
                incoming_line: first,
            },
            n,
            tol,
        )
    }
}

/// Current vertex of a chain and the tangent line through it to be followed next.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainState {
    pub current: ProjPoint,
    pub incoming_line: ProjLine,
}

fn other<T, F: Fn(&T) -> f64>(items: [T; 2], dist: F) -> Result<T> {
    let [a, b] = items;
    let (da, db) = (dist(&a), dist(&b));
    if (da - db).abs() <= 1e-12 * da.max(db).max(1e-300) || da.max(db) <= 1e-12 {
        return Err(GeometryError::TangentialDegeneracy);
    }
    Ok(if da > db { a } else { b })
}

/// One Poncelet step: follow the line to the other outer intersection, then
/// take the other tangent to the inner conic from there.
pub fn chain_step(outer: &Conic, inner: &Conic, state: &ChainState) -> Result<ChainState> {
    let hits = line_conic_intersect(&state.incoming_line, outer)?;
    if hits.tangential {
        return Err(GeometryError::TangentialDegeneracy);
    }
    let next = other(hits.items, |p| p.distance(&state.current))?;
    let tangents = tangents_from_point(&next, inner)?;
    if tangents.tangential {
        return Err(GeometryError::TangentialDegeneracy);
    }
    let line = other(tangents.items, |l| l.distance(&state.incoming_line))?;
    Ok(ChainState {
        current: next,
        incoming_line: line,
    })
}

/// Initial state at `start` following tangent number `choice` (0 or 1).
pub fn initial_state(
    outer: &Conic,
    inner: &Conic,
    start: ProjPoint,
    choice: usize,
) -> Result<ChainState> {
    let residual = conic_contains(outer, &start);
    if residual > Tolerances::DEFAULT.membership {
        return Err(GeometryError::PointNotOnConic { residual });
    }
    let t = tangents_from_point(&start, inner)?;
    if t.tangential {
        return Err(GeometryError::TangentialDegeneracy);
    }
    Ok(ChainState {
        current: start,
        incoming_line: t.items[choice % 2],
    })
}

pub fn run_chain_states(
    outer: &Conic,
    inner: &Conic,
    start: ProjPoint,
    choice: usize,
    steps: usize,
) -> Result<Vec<ChainState>> {
    let mut states = vec![initial_state(outer, inner, start, choice)?];
    for _ in 0..steps {
        let s = chain_step(outer, inner, states.last().expect("nonempty"))?;
        states.push(s);
    }
    Ok(states)
}

/// Vertices p₀..p_steps of the synthetic chain.
pub fn run_chain(
    outer: &Conic,
    inner: &Conic,
    start: ProjPoint,
    choice: usize,
    steps: usize,
) -> Result<Vec<ProjPoint>> {
    Ok(run_chain_states(outer, inner, start, choice, steps)?
        .into_iter()
        .map(|s| s.current)
        .collect())
}

/// Outcome of a two-wrap closure check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub n: usize,
    pub closes: bool,
    /// Distance of p_{n+1} from p₁.
    pub residual_p: f64,
    /// Distance of p_{n+2} from p₂.
    pub residual_q: f64,
    /// First wrap closes, second does not.
    pub spurious: bool,
}

impl ClosureReport {
    pub fn new(n: usize, residual_p: f64, residual_q: f64, tol: f64) -> ClosureReport {
        let first = residual_p < tol;
        let second = residual_q < tol;
        ClosureReport {
            n,
            closes: first && second,
            residual_p,
            residual_q,
            spurious: first && !second,
        }
    }
}

/// Two-wrap closure test of the synthetic chain from `start`.
pub fn closure_test(
    outer: &Conic,
    inner: &Conic,
    start: ProjPoint,
    choice: usize,
    n: usize,
    tol: f64,
) -> Result<ClosureReport> {
    closure_test_from(
        outer,
        inner,
        initial_state(outer, inner, start, choice)?,
        n,
        tol,
    )
}

fn closure_test_from(
    outer: &Conic,
    inner: &Conic,
    state: ChainState,
    n: usize,
    tol: f64,
) -> Result<ClosureReport> {
    let mut states = vec![state];
    for _ in 0..n + 1 {
        let s = chain_step(outer, inner, states.last().expect("nonempty"))?;
        states.push(s);
    }
    Ok(ClosureReport::new(
        n,
        states[n].current.distance(&states[0].current),
        states[n + 1].current.distance(&states[1].current),
        tol,
    ))
}

/// The chain step on the projective line without the properness check, so
/// non-proper chains (repeated points) can still be followed.
pub(crate) fn next_point_unchecked(p: &[RP1Point]) -> Result<RP1Point> {
    let b = |i: usize, j: usize| bracket(&p[i - 1], &p[j - 1]);
    let c4 = b(1, 6) * b(5, 4) * b(3, 2);
    let c2 = b(1, 4) * b(5, 6) * b(3, 4);
    let [x4, y4] = p[3].coords();
    let [x2, y2] = p[1].coords();
    RP1Point::new([c4 * x4 - c2 * x2, c4 * y4 - c2 * y2])
        .map_err(|_| GeometryError::DegenerateChain("next-point coefficients vanish".into()))
}

/// Extends six points on the line by `steps` further chain points.
pub fn algebraic_chain(first6: &[RP1Point; 6], steps: usize) -> Result<Vec<RP1Point>> {
    let mut pts = first6.to_vec();
    for _ in 0..steps {
        let k = pts.len();
        let next = next_point_unchecked(&pts[k - 6..])?;
        pts.push(next);
    }
    Ok(pts)
}

/// Two-wrap closure test of the algebraic chain through the first six points.
pub fn closure_test_rp1(first6: &[RP1Point; 6], n: usize, tol: f64) -> Result<ClosureReport> {
    if n < 5 {
        return Err(GeometryError::DegenerateInput(
            "closure period must be at least 5".into(),
        ));
    }
    let pts = algebraic_chain(first6, (n + 2).saturating_sub(6))?;
    Ok(ClosureReport::new(
        n,
        pts[n].distance(&pts[0]),
        pts[n + 1].distance(&pts[1]),
        tol,
    ))
}

/// Lifts six points through the chart and fits the inner conic to the five edges.
pub fn scene_from_rp1(chart: &StereoChart, p: &[RP1Point; 6]) -> Result<PonceletScene> {
    let vertices: Vec<ProjPoint> = p.iter().map(|x| chart.lift(x)).collect();
    let mut edges = Vec::with_capacity(5);
    for i in 0..5 {
        edges.push(join(&vertices[i], &vertices[i + 1]).map_err(|_| {
            GeometryError::DegenerateInput(format!(
                "lifted points {} and {} coincide",
                i + 1,
                i + 2
            ))
        })?);
    }
    let edges: [ProjLine; 5] = edges.try_into().expect("five edges");
    let inner = conic_tangent_to_5(&edges)?;
    let touch_points = edges
        .iter()
        .map(|l| touch_point(&inner, l))
        .collect::<Result<_>>()?;
    Ok(PonceletScene {
        outer: *chart.conic(),
        inner,
        vertices,
        touch_points,
        n: None,
    })
}

/// Lifts the closed polygon x₁..xₙ and fits the inner conic to its first five edges.
pub fn closed_scene_from_rp1(chart: &StereoChart, xs: &[RP1Point]) -> Result<PonceletScene> {
    if xs.len() < 5 {
        return Err(GeometryError::DegenerateInput(
            "a closed polygon needs at least five vertices".into(),
        ));
    }
    let n = xs.len();
    let vertices: Vec<ProjPoint> = xs.iter().map(|x| chart.lift(x)).collect();
    let edges = (0..n)
        .map(|i| join(&vertices[i], &vertices[(i + 1) % n]))
        .collect::<Result<Vec<_>>>()?;
    let five: [ProjLine; 5] = edges[..5].try_into().expect("five edges");
    let inner = conic_tangent_to_5(&five)?;
    let touch_points = edges
        .iter()
        .map(|l| touch_point(&inner, l))
        .collect::<Result<_>>()?;
    Ok(PonceletScene {
        outer: *chart.conic(),
        inner,
        vertices,
        touch_points,
        n: Some(n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn on_circle(t: f64) -> ProjPoint {
        ProjPoint::real(t.cos(), t.sin(), 1.0).unwrap()
    }

    #[test]
    fn concentric_circles_step_by_fixed_angle() {
        let n = 7;
        let outer = Conic::circle(1.0);
        let inner = Conic::circle((PI / n as f64).cos());
        let states = run_chain_states(&outer, &inner, on_circle(0.0), 0, 2 * n).unwrap();
        let step = 2.0 * PI / n as f64;
        let sign = if states[1].current.distance(&on_circle(step)) < 1e-9 {
            1.0
        } else {
            -1.0
        };
        for (k, s) in states.iter().enumerate() {
            assert!(
                s.current.distance(&on_circle(sign * step * k as f64)) < 1e-9,
                "step {k}"
            );
        }
        assert!(
            states[2 * n]
                .incoming_line
                .distance(&states[0].incoming_line)
                < 1e-9
        );
    }

    #[test]
    fn closure_detects_period() {
        let outer = Conic::circle(1.0);
        let inner = Conic::circle((PI / 6.0).cos());
        let r = closure_test(&outer, &inner, on_circle(0.3), 1, 6, 1e-8).unwrap();
        assert!(r.closes && !r.spurious);
        let r = closure_test(&outer, &inner, on_circle(0.3), 1, 5, 1e-8).unwrap();
        assert!(!r.closes);
    }

    #[test]
    fn tangent_line_to_outer_is_stuck() {
        let outer = Conic::circle(1.0);
        let inner = Conic::circle(0.5);
        let p = on_circle(0.0);
        let state = ChainState {
            current: p,
            incoming_line: ProjLine::real(1.0, 0.0, -1.0).unwrap(),
        };
        assert_eq!(
            chain_step(&outer, &inner, &state),
            Err(GeometryError::TangentialDegeneracy)
        );
    }

    #[test]
    fn zero_steps_is_singleton() {
        let v = run_chain(
            &Conic::circle(1.0),
            &Conic::circle(0.5),
            on_circle(1.0),
            0,
            0,
        )
        .unwrap();
        assert_eq!(v.len(), 1);
    }
}
