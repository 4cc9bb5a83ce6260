//! Random inputs: projective maps, conics, points on conics and closing
//! Poncelet scenes.

use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;

use crate::engine::{closed_scene_from_rp1, exact_point, solve_closure, PonceletScene};
use crate::poly::GaussianRational;
use crate::projective::{Conic, ProjMap, ProjPoint, Transform};
use crate::rp1::{is_proper, RP1Point, StereoChart};
use crate::{GeometryError, Result};

/// Real projective map I + `spread`·R with R uniform in [-1, 1]; resampled until well conditioned.
pub fn map_near_identity<R: Rng>(rng: &mut R, spread: f64) -> ProjMap {
    loop {
        let mut m = [[Complex64::zero(); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                let base = if i == j { 1.0 } else { 0.0 };
                *z = Complex64::new(base + spread * rng.gen_range(-1.0..1.0), 0.0);
            }
        }
        if let Ok(s) = ProjMap::new(m) {
            let det = crate::linalg::det(&s.matrix()).norm();
            if det > 0.05 {
                return s;
            }
        }
    }
}

/// Real point with affine coordinates uniform in [-r, r]².
pub fn affine_point<R: Rng>(rng: &mut R, r: f64) -> ProjPoint {
    ProjPoint::affine(rng.gen_range(-r..r), rng.gen_range(-r..r))
}

/// Random real ellipse-like conic: a mild projective image of the unit circle.
pub fn real_conic<R: Rng>(rng: &mut R) -> Conic {
    Conic::circle(1.0).transform(&map_near_identity(rng, 0.3))
}

/// Real point of the chart's conic with chart coordinate uniform in [-r, r].
pub fn point_on_conic<R: Rng>(rng: &mut R, chart: &StereoChart, r: f64) -> ProjPoint {
    chart.lift(&RP1Point::affine(rng.gen_range(-r..r)))
}

/// `k` real values in [-r, r] with pairwise gaps of at least `gap`.
pub fn separated_values<R: Rng>(rng: &mut R, k: usize, r: f64, gap: f64) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..k).map(|_| rng.gen_range(-r..r)).collect();
        let ok = (0..k).all(|i| (i + 1..k).all(|j| (v[i] - v[j]).abs() >= gap));
        if ok {
            return v;
        }
    }
}

fn to_rp1(p: &[GaussianRational; 2]) -> Result<RP1Point> {
    let (a, b) = (&p[0], &p[1]);
    let big_a = a.norm_sqr() >= b.norm_sqr();
    let pair = if big_a {
        [
            Complex64::new(1.0, 0.0),
            (b.clone() / a.clone()).to_complex(),
        ]
    } else {
        [
            (a.clone() / b.clone()).to_complex(),
            Complex64::new(1.0, 0.0),
        ]
    };
    RP1Point::new(pair)
}

/// Real, proper closed Poncelet n-gons on the line through five random points.
/// Returns every proper real solution as a list of n chart coordinates.
pub fn closing_polygons_rp1<R: Rng>(rng: &mut R, n: usize) -> Result<Vec<Vec<RP1Point>>> {
    let xs = separated_values(rng, 5, 3.0, 0.25);
    let first5: [RP1Point; 5] = std::array::from_fn(|i| RP1Point::affine(xs[i]));
    if n == 5 {
        return Ok(vec![first5.to_vec()]);
    }
    let mut exact = Vec::with_capacity(5);
    for p in &first5 {
        exact.push(exact_point(p)?);
    }
    let sol = solve_closure(&exact.try_into().expect("five"), n, 1e-9)?;
    let mut out = Vec::new();
    for root in &sol.accepted {
        if root.x6.im.abs() > 1e-20 || !root.report.closes {
            continue;
        }
        // re-polish the real part; the reported root is rounded to double precision
        let x = sol
            .polynomial
            .accepted
            .refine_root(Complex64::new(root.x6.re, 0.0), 200);
        let mut pts = Vec::with_capacity(n);
        for k in 1..=n {
            pts.push(to_rp1(&sol.polynomial.point_at(k, &x))?);
        }
        let separated =
            (0..n).all(|i| (i + 1..n).all(|j| pts[i].distance(&pts[j]) >= WELL_SEPARATED));
        if is_proper(&pts) && separated {
            out.push(pts);
        }
    }
    Ok(out)
}

/// A real Poncelet n-gon (5 ≤ n ≤ 12) on the unit circle, then moved by a
/// mild random projective map.
pub fn closing_scene<R: Rng>(rng: &mut R, n: usize) -> Result<PonceletScene> {
    let chart = StereoChart::standard();
    for _ in 0..200 {
        let polys = match closing_polygons_rp1(rng, n) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let Some(poly) = polys.first() else { continue };
        let Ok(scene) = closed_scene_from_rp1(&chart, poly) else {
            continue;
        };
        let s = map_near_identity(rng, 0.2);
        return Ok(scene.transform(&s));
    }
    Err(GeometryError::DegenerateInput(format!(
        "no real proper {n}-gon found"
    )))
}

impl Transform for PonceletScene {
    fn transform(&self, map: &ProjMap) -> Self {
        PonceletScene {
            outer: self.outer.transform(map),
            inner: self.inner.transform(map),
            vertices: self.vertices.iter().map(|p| p.transform(map)).collect(),
            touch_points: self.touch_points.iter().map(|p| p.transform(map)).collect(),
            n: self.n,
        }
    }
}

/// Smallest pairwise chordal distance among the points. Closure residuals of a
/// polygon with nearly coincident vertices amplify the rounding of its inputs,
/// so random trials use this to keep to well-conditioned instances.
pub fn min_separation(points: &[RP1Point]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.min(a.distance(b));
        }
    }
    best
}

/// Separation below which a random closed polygon counts as ill-conditioned.
pub const WELL_SEPARATED: f64 = 1e-2;

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn closing_scenes_close() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for n in [5, 6, 7, 8] {
            let scene = closing_scene(&mut rng, n).unwrap();
            assert_eq!(scene.vertices.len(), n);
            assert!(scene.residuals().unwrap().max() < 1e-9, "n={n}");
            let r = scene.closure(1e-8).unwrap();
            assert!(r.closes, "n={n} {r:?}");
        }
    }
}
