use serde::{Deserialize, Serialize};

use super::{chart, digit_labels, polish_on_chart, project, ConstructionTrace};
use crate::projective::{
    concurrency, conic_contains, conic_through_5, join, line_conic_intersect, second_intersection,
    ProjPoint,
};
use crate::rp1::{bracket, octagon_point7_residual, quadset_residual, BracketResidual, RP1Point};
use crate::{GeometryError, Result, Tolerances};

/// Point 7 of a Poncelet octagon starting with 1..5.
///
/// P = 14∧25, Q = 12∧45, R = 24∧3Q, l = R∨P; point 7 is one of the two
/// intersections of l with the conic through 1..5. The trace keeps the other
/// intersection "7bar" and the second point "3bar" of line 3Q on the conic.
pub fn construct_octagon_p7(
    p: &[ProjPoint; 5],
    branch: usize,
) -> Result<(ProjPoint, ConstructionTrace)> {
    let a = conic_through_5(p)?;
    let mut t = ConstructionTrace::new();
    for (label, q) in digit_labels(5).iter().zip(p) {
        t.add_point(label.as_str(), *q);
    }
    t.add_conic("A", a);
    for label in digit_labels(5) {
        t.on_conic(&label, "A");
    }
    for (x, y) in [("1", "4"), ("2", "5"), ("1", "2"), ("4", "5"), ("2", "4")] {
        t.join_points(x, y)?;
    }
    t.meet("P", "14", "25")?;
    t.meet("Q", "12", "45")?;
    t.join("3Q", "3", "Q")?;
    t.meet("R", "24", "3Q")?;
    let l = t.join("l", "R", "P")?;

    let hits = line_conic_intersect(&l, &a).map_err(|_| GeometryError::step("7"))?;
    let b = branch % 2;
    t.add_point("7", hits.items[b]);
    t.add_point("7bar", hits.items[1 - b]);
    t.add_branch("7", b);
    for x in ["7", "7bar"] {
        t.on_line(x, "l");
        t.on_conic(x, "A");
    }
    let p3bar = second_intersection(&a, &p[2], &t.point("Q").expect("recorded"))
        .map_err(|_| GeometryError::step("3bar"))?;
    t.add_point("3bar", p3bar);
    t.on_line("3bar", "3Q");
    t.on_conic("3bar", "A");
    let ch = chart(&a, &[p[0], p[1], p[2], p[3], p[4], hits.items[b]])?;
    let x = project(&ch, p)?;
    let p7 = polish_on_chart(&mut t, "7", &ch, &hits.items[b], |y| {
        let r = octagon_point7_residual(&[x[0], x[1], x[2], x[3], x[4], y]);
        Ok(r.lhs - r.rhs)
    })?;
    Ok((p7, t))
}

/// Quadset relations of a Construction-2 trace: P (14:25:7 7bar),
/// Q (12:45:3 3bar), R (24:3 3bar:7 7bar).
pub fn octagon_certificates(trace: &ConstructionTrace) -> Result<[BracketResidual; 3]> {
    let a = trace.conic("A").ok_or_else(|| GeometryError::step("A"))?;
    let labels = ["1", "2", "3", "4", "5", "7", "7bar", "3bar"];
    let mut pts = [ProjPoint::affine(0.0, 0.0); 8];
    for (slot, label) in pts.iter_mut().zip(labels) {
        *slot = trace
            .point(label)
            .ok_or_else(|| GeometryError::step(label))?;
    }
    let ch = chart(&a, &pts[..5])?;
    let x = project(&ch, &pts)?;
    let at = |label: &str| x[labels.iter().position(|l| *l == label).expect("label")];
    let quad = |pairs: [(&str, &str); 3]| {
        quadset_residual(&[
            at(pairs[0].0),
            at(pairs[1].0),
            at(pairs[2].0),
            at(pairs[0].1),
            at(pairs[1].1),
            at(pairs[2].1),
        ])
    };
    Ok([
        quad([("1", "4"), ("2", "5"), ("7", "7bar")]),
        quad([("1", "2"), ("4", "5"), ("3", "3bar")]),
        quad([("2", "4"), ("3", "3bar"), ("7", "7bar")]),
    ])
}

/// The remaining octagon vertices and its center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OctagonCompletion {
    pub p6: ProjPoint,
    pub p8: ProjPoint,
    pub center: ProjPoint,
    /// Worst concurrency of the long diagonals 15, 26, 37, 48, with 6 and 8
    /// taken from the chain relation rather than from the center.
    pub center_residual: f64,
    /// Distance between the center-based and the chain-based points 6 and 8.
    pub agreement: f64,
    pub trace: ConstructionTrace,
}

/// Completes an octagon from 1..5 and 7: the center O = 15∧37, then 6 and 8 as
/// the second intersections of the lines 2O and 4O with the conic.
pub fn complete_octagon(p: &[ProjPoint; 5], p7: &ProjPoint) -> Result<OctagonCompletion> {
    let a = conic_through_5(p)?;
    let residual = conic_contains(&a, p7);
    if residual > Tolerances::DEFAULT.membership {
        return Err(GeometryError::NotAnOctagonPrefix { residual });
    }
    let six = [p[0], p[1], p[2], p[3], p[4], *p7];
    let ch = chart(&a, &six)?;
    let x = project(&ch, &six)?;
    let gap = octagon_point7_residual(&x).scaled_gap;
    if !(gap <= Tolerances::DEFAULT.incidence) {
        return Err(GeometryError::NotAnOctagonPrefix { residual: gap });
    }

    let mut t = ConstructionTrace::new();
    for (label, q) in ["1", "2", "3", "4", "5", "7"].iter().zip(&six) {
        t.add_point(*label, *q);
    }
    t.add_conic("A", a);
    t.join_points("1", "5")?;
    t.join_points("3", "7")?;
    let o = t.meet("O", "15", "37")?;
    t.join("2O", "2", "O")?;
    t.join("4O", "4", "O")?;
    let p6 = second_intersection(&a, &p[1], &o).map_err(|_| GeometryError::step("6"))?;
    let p8 = second_intersection(&a, &p[3], &o).map_err(|_| GeometryError::step("8"))?;
    t.add_point("6", p6);
    t.add_point("8", p8);
    for (pt, line) in [("6", "2O"), ("8", "4O")] {
        t.on_line(pt, line);
        t.on_conic(pt, "A");
    }

    // 6 from the chain relation, which is linear in 6: 6 = K1·1 − K2·5
    let [x1, x2, x3, x4, x5, x7] = x;
    let k1 = bracket(&x7, &x4) * bracket(&x5, &x4) * bracket(&x3, &x2);
    let k2 = bracket(&x7, &x2) * bracket(&x1, &x4) * bracket(&x3, &x4);
    let [a0, a1] = x1.coords();
    let [c0, c1] = x5.coords();
    let x6 = RP1Point::new([k1 * a0 - k2 * c0, k1 * a1 - k2 * c1]).map_err(|_| {
        GeometryError::NotAnOctagonPrefix {
            residual: f64::INFINITY,
        }
    })?;
    let x8 = crate::rp1::next_chain_point(&[x2, x3, x4, x5, x6, x7])?;
    let (q6, q8) = (ch.lift(&x6), ch.lift(&x8));
    let diag =
        |i: &ProjPoint, j: &ProjPoint| join(i, j).map_err(|_| GeometryError::step("diagonal"));
    let lines = [
        diag(&p[0], &p[4])?,
        diag(&p[1], &q6)?,
        diag(&p[2], p7)?,
        diag(&p[3], &q8)?,
    ];
    let center_residual = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
        .iter()
        .map(|&(i, j, k)| concurrency(&lines[i], &lines[j], &lines[k]))
        .fold(0.0, f64::max);
    let agreement = p6.distance(&q6).max(p8.distance(&q8));
    Ok(OctagonCompletion {
        p6,
        p8,
        center: o,
        center_residual,
        agreement,
        trace: t,
    })
}
