use super::{chart, polish_on_chart, project, ConstructionTrace};
use crate::projective::{conic_conic_intersect, conic_through_5, tangent_line_at, ProjPoint};
use crate::rp1::{bracket, RP1Point, RawPair};
use crate::{GeometryError, Result};

/// The three candidates for point 4 of a Poncelet 9-gon through 1, 2, 3, 5, 6.
///
/// A = conic(1,2,3,5,6), P = 25∧36, Q = 12∧56, L = 56∧tangent(1), M = 13∧LP,
/// N = 25∧Q3, C = conic(1,P,Q,N,M). The candidates are the intersections of
/// A and C other than 1, listed with multiplicity.
pub fn construct_ninegon_p4(p: &[ProjPoint; 5]) -> Result<(Vec<ProjPoint>, ConstructionTrace)> {
    let a = conic_through_5(p)?;
    let mut t = ConstructionTrace::new();
    for (label, q) in ["1", "2", "3", "5", "6"].iter().zip(p) {
        t.add_point(*label, *q);
        t.on_conic(label, "A");
    }
    t.add_conic("A", a);
    for (x, y) in [("2", "5"), ("3", "6"), ("1", "2"), ("5", "6"), ("1", "3")] {
        t.join_points(x, y)?;
    }
    t.meet("P", "25", "36")?;
    t.meet("Q", "12", "56")?;
    let tangent = tangent_line_at(&a, &p[0]).map_err(|_| GeometryError::step("tangent(1)"))?;
    t.add_line("t1", tangent);
    t.on_line("1", "t1");
    t.tangent("t1", "A");
    t.meet("L", "56", "t1")?;
    t.join("LP", "L", "P")?;
    t.meet("M", "13", "LP")?;
    t.join("Q3", "Q", "3")?;
    t.meet("N", "25", "Q3")?;

    let labels = ["1", "P", "Q", "N", "M"];
    let five: [ProjPoint; 5] = std::array::from_fn(|i| t.point(labels[i]).expect("recorded"));
    let c = conic_through_5(&five).map_err(|_| GeometryError::step("C"))?;
    t.add_conic("C", c);
    for label in labels {
        t.on_conic(label, "C");
    }

    let mut hits = conic_conic_intersect(&a, &c).map_err(|_| GeometryError::step("4"))?;
    let own = hits
        .iter()
        .enumerate()
        .min_by(|x, y| {
            x.1.point
                .distance(&p[0])
                .total_cmp(&y.1.point.distance(&p[0]))
        })
        .map(|(i, _)| i)
        .ok_or_else(|| GeometryError::step("4"))?;
    hits[own].multiplicity -= 1;
    let mut out = Vec::with_capacity(3);
    for h in hits {
        for _ in 0..h.multiplicity {
            out.push(h.point);
        }
    }
    let mut avoid = p.to_vec();
    avoid.extend(&out);
    let ch = chart(&a, &avoid)?;
    let x = project(&ch, p)?;
    let mut polished = Vec::with_capacity(out.len());
    for (i, q) in out.iter().enumerate() {
        let label = format!("4_{}", i + 1);
        t.add_point(label.as_str(), *q);
        t.on_conic(&label, "A");
        t.on_conic(&label, "C");
        polished.push(polish_on_chart(&mut t, &label, &ch, q, |y| {
            Ok(wrap_bracket(&[x[0], x[1], x[2], y, x[3], x[4]]))
        })?);
    }
    Ok((polished, t))
}

/// [p₁₀, p₁] for the chain through the six points, without normalization so that
/// it is a polynomial in each input coordinate.
fn wrap_bracket(six: &[RP1Point; 6]) -> num_complex::Complex64 {
    let mut p: Vec<RawPair> = six.iter().map(|x| RawPair(x.coords())).collect();
    while p.len() < 10 {
        let k = p.len() - 6;
        let w = &p[k..k + 6];
        let b = |i: usize, j: usize| bracket(&w[i - 1], &w[j - 1]);
        let c4 = b(1, 6) * b(5, 4) * b(3, 2);
        let c2 = b(1, 4) * b(5, 6) * b(3, 4);
        p.push(RawPair([
            c4 * w[3].0[0] - c2 * w[1].0[0],
            c4 * w[3].0[1] - c2 * w[1].0[1],
        ]));
    }
    bracket(&p[9], &p[0])
}
