use serde::{Deserialize, Serialize};

use super::ConstructionTrace;
use crate::projective::{
    conic_contains, join, meet, second_intersection, Conic, ProjLine, ProjPoint,
};
use crate::{GeometryError, Result, Tolerances};

/// Points of a join/meet chain iteration and its trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainRun {
    /// Points 1, 2, …, 6 + steps.
    pub points: Vec<ProjPoint>,
    pub trace: ConstructionTrace,
}

fn line_label(a: &str, b: &str) -> String {
    format!("{a}v{b}")
}

/// Records a∨b once under the label "avb".
fn jl(t: &mut ConstructionTrace, a: &str, b: &str) -> Result<String> {
    let label = line_label(a, b);
    if t.line(&label).is_none() {
        t.join(&label, a, b)?;
    }
    Ok(label)
}

fn meet_lines(
    t: &mut ConstructionTrace,
    label: &str,
    l: (&str, &str),
    m: (&str, &str),
) -> Result<ProjPoint> {
    let l = jl(t, l.0, l.1)?;
    let m = jl(t, m.0, m.1)?;
    t.meet(label, &l, &m)
}

/// Point 7 continuing the chain 1..6 on a conic, by joins and meets only:
/// B₃ = 12∧34, B₄ = 23∧45, B₅ = 34∧56, G₃ = 14∧36, then
/// G₄ = G₃B₃∧25, B₆ = G₃B₃∧45, 7 = G₄4∧B₆6.
pub fn chain_point7_joinmeet(
    p: &[ProjPoint; 6],
    conic: &Conic,
) -> Result<(ProjPoint, ConstructionTrace)> {
    for q in p {
        let residual = conic_contains(conic, q);
        if residual > Tolerances::DEFAULT.membership {
            return Err(GeometryError::PointNotOnConic { residual });
        }
    }
    let run = chain_iterate_joinmeet(p, Some(conic), 1)?;
    Ok((run.points[6], run.trace))
}

/// Iterates the join/meet chain step `steps` times.
///
/// Step i (for i ≥ 6) uses the line m = G_{i−3}B_{i−3} and constructs
/// G_{i−2} = m∧(i−4)(i−1), B_i = m∧(i−2)(i−1) and i+1 = G_{i−2}(i−2)∧B_i i.
/// Red points are the chain points, G and B the green and blue ones. With a
/// conic, membership of each point is recorded as an incidence; without one
/// the iteration runs on arbitrary seeds.
pub fn chain_iterate_joinmeet(
    p: &[ProjPoint; 6],
    conic: Option<&Conic>,
    steps: usize,
) -> Result<ChainRun> {
    let mut t = ConstructionTrace::new();
    let name = |i: usize| i.to_string();
    for (i, q) in p.iter().enumerate() {
        t.add_point(name(i + 1), *q);
    }
    if let Some(c) = conic {
        t.add_conic("A", *c);
        for i in 1..=6 {
            t.on_conic(&name(i), "A");
        }
    }
    meet_lines(&mut t, "B3", ("1", "2"), ("3", "4"))?;
    meet_lines(&mut t, "B4", ("2", "3"), ("4", "5"))?;
    meet_lines(&mut t, "B5", ("3", "4"), ("5", "6"))?;
    meet_lines(&mut t, "G3", ("1", "4"), ("3", "6"))?;

    let mut points = p.to_vec();
    for i in 6..6 + steps {
        let (g_prev, b_prev) = (format!("G{}", i - 3), format!("B{}", i - 3));
        let m = jl(&mut t, &g_prev, &b_prev)?;
        let diag = jl(&mut t, &name(i - 4), &name(i - 1))?;
        let g = format!("G{}", i - 2);
        t.meet(&g, &m, &diag)?;
        let edge = jl(&mut t, &name(i - 2), &name(i - 1))?;
        let b = format!("B{i}");
        t.meet(&b, &m, &edge)?;
        let next = meet_lines(&mut t, &name(i + 1), (&g, &name(i - 2)), (&b, &name(i)))?;
        if conic.is_some() {
            t.on_conic(&name(i + 1), "A");
        }
        points.push(next);
    }
    Ok(ChainRun { points, trace: t })
}

/// Second quadrilateral of the Butterfly configuration: with Xᵢ = AᵢAᵢ₊₁∧l,
/// Bᵢ₊₁ is the other intersection of the conic with the line BᵢXᵢ (i = 1, 2, 3).
pub fn butterfly_complete(
    conic: &Conic,
    a: &[ProjPoint; 4],
    b1: &ProjPoint,
    l: &ProjLine,
) -> Result<[ProjPoint; 4]> {
    let mut b = [*b1; 4];
    for i in 0..3 {
        let side = join(&a[i], &a[i + 1])
            .map_err(|_| GeometryError::step(format!("A{}A{}", i + 1, i + 2)))?;
        let x = meet(&side, l).map_err(|_| GeometryError::step(format!("X{}", i + 1)))?;
        b[i + 1] = second_intersection(conic, &b[i], &x)
            .map_err(|_| GeometryError::step(format!("B{}", i + 2)))?;
    }
    Ok(b)
}

/// Conclusion residual of the Butterfly Theorem: the distance between
/// B₄B₁∧l and X₄ = A₄A₁∧l.
pub fn butterfly_check(
    a: &[ProjPoint; 4],
    b: &[ProjPoint; 4],
    conic: &Conic,
    l: &ProjLine,
) -> Result<f64> {
    for q in a.iter().chain(b) {
        let residual = conic_contains(conic, q);
        if residual > Tolerances::DEFAULT.membership {
            return Err(GeometryError::PointNotOnConic { residual });
        }
    }
    let side = |p: &ProjPoint, q: &ProjPoint, label: &str| {
        join(p, q).map_err(|_| GeometryError::step(label))
    };
    let x4 = meet(&side(&a[3], &a[0], "A4A1")?, l).map_err(|_| GeometryError::step("X4"))?;
    let y4 = meet(&side(&b[3], &b[0], "B4B1")?, l).map_err(|_| GeometryError::step("B4B1∧l"))?;
    Ok(x4.distance(&y4))
}
