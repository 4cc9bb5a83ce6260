use super::{chart, digit_labels, polish_on_chart, project, ConstructionTrace};
use crate::projective::{conic_contains, conic_through_5, line_conic_intersect, ProjPoint};
use crate::rp1::{
    heptagon6_residual, hexagon_point6, next_chain_point, quadset_residual, BracketResidual,
};
use crate::{GeometryError, Result, Tolerances};

/// Point 6 of a Poncelet 7-gon through 1..5.
///
/// O = 14∧25, P = 13∧24, Q = 24∧35, R = 15∧OP, l = R∨Q; point 6 is one of the
/// two intersections of l with the conic A through 1..5. The trace also holds
/// the other intersection "6bar" and the points 8, 9 where OP meets A, which
/// the quadset certificates use.
pub fn construct_heptagon_p6(
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

    for (x, y) in [
        ("1", "4"),
        ("2", "5"),
        ("1", "3"),
        ("2", "4"),
        ("3", "5"),
        ("1", "5"),
    ] {
        t.join_points(x, y)?;
    }
    t.meet("O", "14", "25")?;
    t.meet("P", "13", "24")?;
    t.meet("Q", "24", "35")?;
    t.join("OP", "O", "P")?;
    t.meet("R", "15", "OP")?;
    let l = t.join("l", "R", "Q")?;

    let hits = line_conic_intersect(&l, &a).map_err(|_| GeometryError::step("6"))?;
    let b = branch % 2;
    t.add_point("6", hits.items[b]);
    t.add_point("6bar", hits.items[1 - b]);
    t.add_branch("6", b);
    for x in ["6", "6bar"] {
        t.on_line(x, "l");
        t.on_conic(x, "A");
    }

    let op = t.line("OP").expect("recorded");
    let ends = line_conic_intersect(&op, &a).map_err(|_| GeometryError::step("89"))?;
    t.add_point("8", ends.items[0]);
    t.add_point("9", ends.items[1]);
    for x in ["8", "9"] {
        t.on_line(x, "OP");
        t.on_conic(x, "A");
    }
    let ch = chart(&a, &[p[0], p[1], p[2], p[3], p[4], hits.items[b]])?;
    let x = project(&ch, p)?;
    let p6 = polish_on_chart(&mut t, "6", &ch, &hits.items[b], |y| {
        let r = heptagon6_residual(&[x[0], x[1], x[2], x[3], x[4], y]);
        Ok(r.lhs - r.rhs)
    })?;
    Ok((p6, t))
}

/// Quadset relations of a Construction-1 trace on the projected points, one per
/// auxiliary point: O (14:25:89), P (13:24:89), Q (24:35:6 6bar), R (15:6 6bar:89).
pub fn heptagon_certificates(trace: &ConstructionTrace) -> Result<[BracketResidual; 4]> {
    let a = trace.conic("A").ok_or_else(|| GeometryError::step("A"))?;
    let labels = ["1", "2", "3", "4", "5", "6", "6bar", "8", "9"];
    let mut pts = [ProjPoint::affine(0.0, 0.0); 9];
    for (slot, label) in pts.iter_mut().zip(labels) {
        *slot = trace
            .point(label)
            .ok_or_else(|| GeometryError::step(label))?;
    }
    let ch = chart(&a, &pts[..5])?;
    let x = project(&ch, &pts)?;
    let at = |label: &str| x[labels.iter().position(|l| *l == label).expect("label")];
    // pairs (a,b), (c,d), (e,f) go to slots 1/4, 2/5, 3/6
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
        quad([("1", "4"), ("2", "5"), ("8", "9")]),
        quad([("1", "3"), ("2", "4"), ("8", "9")]),
        quad([("2", "4"), ("3", "5"), ("6", "6bar")]),
        quad([("1", "5"), ("6", "6bar"), ("8", "9")]),
    ])
}

/// Point 7 of the heptagon starting with p1..p6, from the chain relation.
pub fn complete_heptagon(p: &[ProjPoint; 6]) -> Result<ProjPoint> {
    let first5: [ProjPoint; 5] = std::array::from_fn(|i| p[i]);
    let a = conic_through_5(&first5)?;
    let residual = conic_contains(&a, &p[5]);
    if residual > Tolerances::DEFAULT.membership {
        return Err(GeometryError::NotAHeptagonPrefix { residual });
    }
    let ch = chart(&a, p)?;
    let x = project(&ch, p)?;
    let gap = heptagon6_residual(&x).scaled_gap;
    if !(gap <= Tolerances::DEFAULT.incidence) {
        return Err(GeometryError::NotAHeptagonPrefix { residual: gap });
    }
    Ok(ch.lift(&next_chain_point(&x)?))
}

/// Point 6 closing the hexagon through p1..p5.
pub fn complete_hexagon_p6(p: &[ProjPoint; 5]) -> Result<ProjPoint> {
    let a = conic_through_5(p)?;
    let ch = chart(&a, p)?;
    let x = project(&ch, p)?;
    Ok(ch.lift(&hexagon_point6(&x)?))
}
