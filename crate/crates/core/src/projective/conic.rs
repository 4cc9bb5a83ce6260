use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::element::{collinearity, ProjLine, ProjPoint};
use crate::linalg::{self, M3, V3, ZERO};
use crate::poly;
use crate::{GeometryError, Result, Tolerances};

/// A conic given by a symmetric 3×3 matrix, stored as its six independent
/// entries (a00, a01, a02, a11, a12, a22) and scaled so the largest entry has
/// magnitude 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Conic {
    entries: [Complex64; 6],
    dual: [Complex64; 6],
    degenerate: bool,
}

fn pack(m: &M3) -> [Complex64; 6] {
    [m[0][0], m[0][1], m[0][2], m[1][1], m[1][2], m[2][2]]
}

fn unpack(e: &[Complex64; 6]) -> M3 {
    [[e[0], e[1], e[2]], [e[1], e[3], e[4]], [e[2], e[4], e[5]]]
}

impl Conic {
    /// Builds a conic from any 3×3 matrix; the symmetric part is used.
    pub fn from_matrix(m: [[Complex64; 3]; 3]) -> Result<Conic> {
        let mut sym = m;
        for i in 0..3 {
            for j in 0..3 {
                sym[i][j] = (m[i][j] + m[j][i]) * 0.5;
            }
        }
        Conic::from_entries(pack(&sym))
    }

    pub fn from_real(m: [[f64; 3]; 3]) -> Result<Conic> {
        Conic::from_matrix(m.map(|r| r.map(|x| Complex64::new(x, 0.0))))
    }

    fn from_entries(e: [Complex64; 6]) -> Result<Conic> {
        if !linalg::all_finite(&e) {
            return Err(GeometryError::NonFinite);
        }
        let entries = linalg::normalize(&e)
            .ok_or_else(|| GeometryError::DegenerateInput("zero conic matrix".into()))?;
        let m = unpack(&entries);
        let det = linalg::det(&m);
        let degenerate = det.norm() < Tolerances::DEFAULT.degeneracy;
        let adj = pack(&linalg::adjugate(&m));
        let dual = linalg::normalize(&adj).unwrap_or([ZERO; 6]);
        Ok(Conic {
            entries,
            dual,
            degenerate,
        })
    }

    /// Circle x² + y² = r² z².
    pub fn circle(r: f64) -> Conic {
        Conic::from_real([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -r * r]])
            .expect("circle matrix is finite and nonzero")
    }

    pub fn matrix(&self) -> [[Complex64; 3]; 3] {
        unpack(&self.entries)
    }

    /// The adjugate, scaled like the primal matrix. Zero for rank ≤ 1.
    pub fn dual_matrix(&self) -> [[Complex64; 3]; 3] {
        unpack(&self.dual)
    }

    /// The dual conic as a conic on lines.
    pub fn dual(&self) -> Result<Conic> {
        if self.degenerate {
            return Err(GeometryError::DegenerateConic);
        }
        Conic::from_entries(self.dual)
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn is_real(&self) -> bool {
        self.entries
            .iter()
            .all(|z| z.im.abs() <= Tolerances::REALITY * z.norm().max(1.0))
    }

    /// Scaled |det|, for conditioning diagnostics.
    pub fn det_magnitude(&self) -> f64 {
        linalg::det(&self.matrix()).norm()
    }

    /// Chordal distance between the two conics as points of P⁵.
    pub fn distance(&self, other: &Conic) -> f64 {
        let a = &self.entries;
        let b = &other.entries;
        let na: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let nb: f64 = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut s = 0.0;
        for i in 0..6 {
            for j in i + 1..6 {
                s += (a[i] * b[j] - a[j] * b[i]).norm_sqr();
            }
        }
        s.sqrt() / (na * nb)
    }

    pub fn approx_eq(&self, other: &Conic, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    /// Scaled tangency residual |lᵀ A* l| of a line against the dual conic.
    pub fn tangency(&self, l: &ProjLine) -> f64 {
        linalg::quad_form(&self.dual_matrix(), &l.coords()).norm()
    }

    /// Polar line A·p.
    pub fn polar(&self, p: &ProjPoint) -> Result<ProjLine> {
        ProjLine::new(linalg::mat_vec(&self.matrix(), &p.coords()))
            .map_err(|_| GeometryError::DegenerateConic)
    }
}

/// |pᵀCp| with C and p scaled to unit max-entry.
pub fn conic_contains(c: &Conic, p: &ProjPoint) -> f64 {
    linalg::quad_form(&c.matrix(), &p.coords()).norm()
}

fn fit_rows(vs: &[V3; 5]) -> [[Complex64; 6]; 5] {
    vs.map(|v| {
        let [x, y, z] = v;
        [x * x, x * y * 2.0, x * z * 2.0, y * y, y * z * 2.0, z * z]
    })
}

fn fit_conic(vs: &[V3; 5], what: &str) -> Result<Conic> {
    let (v, quality) = linalg::null_vector_5x6(&fit_rows(vs));
    if quality < 1e-14 {
        return Err(GeometryError::NumericalRankDeficiency(format!(
            "five {what} do not isolate a conic (quality {quality:.2e})"
        )));
    }
    let c = Conic::from_entries(v)?;
    if c.is_degenerate() {
        return Err(GeometryError::DegenerateInput(format!(
            "conic through five {what} is degenerate"
        )));
    }
    Ok(c)
}

fn check_no_three(vs: &[V3; 5], what: &str) -> Result<()> {
    for i in 0..5 {
        for j in i + 1..5 {
            for k in j + 1..5 {
                let s = linalg::det3(&vs[i], &vs[j], &vs[k]).norm()
                    / (linalg::norm(&vs[i]) * linalg::norm(&vs[j]) * linalg::norm(&vs[k]));
                if s < 1e-10 {
                    return Err(GeometryError::DegenerateInput(format!(
                        "{what} {} {} {} are {}",
                        i + 1,
                        j + 1,
                        k + 1,
                        if what == "points" {
                            "collinear"
                        } else {
                            "concurrent"
                        }
                    )));
                }
            }
        }
    }
    Ok(())
}

/// The unique conic through five points, no three collinear.
pub fn conic_through_5(points: &[ProjPoint; 5]) -> Result<Conic> {
    let vs = points.map(|p| p.coords());
    check_no_three(&vs, "points")?;
    fit_conic(&vs, "points")
}

/// The unique conic tangent to five lines, no three concurrent.
pub fn conic_tangent_to_5(lines: &[ProjLine; 5]) -> Result<Conic> {
    let vs = lines.map(|l| l.coords());
    check_no_three(&vs, "lines")?;
    let dual = fit_conic(&vs, "lines")?;
    dual.dual()
}

/// Tangent line C·p at a point of the conic.
pub fn tangent_line_at(c: &Conic, p: &ProjPoint) -> Result<ProjLine> {
    let residual = conic_contains(c, p);
    if residual > Tolerances::DEFAULT.membership {
        return Err(GeometryError::PointNotOnConic { residual });
    }
    c.polar(p)
}

/// Two intersections of a line with a conic, or two tangents from a point.
/// `tangential` marks a double solution; the two entries are then equal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pair<T> {
    pub items: [T; 2],
    pub tangential: bool,
}

/// Roots (s:t) of a s² + 2b st + c t² and the tangency flag.
fn homogeneous_quadratic(
    a: Complex64,
    b: Complex64,
    c: Complex64,
) -> Option<([[Complex64; 2]; 2], bool)> {
    let scale = (a.norm() + b.norm() + c.norm()).powi(2);
    if scale == 0.0 {
        return None;
    }
    let disc = b * b - a * c;
    let tangential = disc.norm() <= Tolerances::DEFAULT.degeneracy * scale;
    if tangential {
        // double root: a s + b t = 0 (or b s + c t = 0)
        let r = if a.norm() >= c.norm() {
            [-b, a]
        } else {
            [c, -b]
        };
        return Some(([r, r], true));
    }
    let sq = disc.sqrt();
    let q = if (b + sq).norm() >= (b - sq).norm() {
        -(b + sq)
    } else {
        -(b - sq)
    };
    let r1 = [q, a];
    let r2 = [c, q];
    let zero = |r: &[Complex64; 2]| r[0].is_zero() && r[1].is_zero();
    match (zero(&r1), zero(&r2)) {
        (false, false) => Some(([r1, r2], false)),
        (true, false) => Some(([r2, r2], false)),
        (false, true) => Some(([r1, r1], false)),
        _ => None,
    }
}

/// Two points spanning the line with coordinates l.
fn line_basis(l: &V3) -> (V3, V3) {
    let m = (0..3)
        .max_by(|&i, &j| l[i].norm().total_cmp(&l[j].norm()))
        .unwrap_or(0);
    let mut e = [[ZERO; 3]; 2];
    let mut k = 0;
    for i in 0..3 {
        if i != m {
            e[k][i] = linalg::ONE;
            k += 1;
        }
    }
    (linalg::cross(l, &e[0]), linalg::cross(l, &e[1]))
}

fn intersect_raw(l: &V3, m: &M3) -> Result<([V3; 2], bool)> {
    let (u, v) = line_basis(l);
    let a = linalg::quad_form(m, &u);
    let b = linalg::bilinear_form(m, &u, &v);
    let c = linalg::quad_form(m, &v);
    let (roots, tangential) =
        homogeneous_quadratic(a, b, c).ok_or(GeometryError::DegenerateConic)?;
    let pt = |r: &[Complex64; 2]| linalg::add(&linalg::scale(&u, r[0]), &linalg::scale(&v, r[1]));
    Ok(([pt(&roots[0]), pt(&roots[1])], tangential))
}

/// Intersections of a line with a conic. Tangency yields a doubled point.
pub fn line_conic_intersect(l: &ProjLine, c: &Conic) -> Result<Pair<ProjPoint>> {
    let (pts, tangential) = intersect_raw(&l.coords(), &c.matrix())?;
    Ok(Pair {
        items: [ProjPoint::from_raw(pts[0])?, ProjPoint::from_raw(pts[1])?],
        tangential,
    })
}

/// Tangent lines from a point to a conic, via the dual conic.
pub fn tangents_from_point(p: &ProjPoint, c: &Conic) -> Result<Pair<ProjLine>> {
    if c.is_degenerate() {
        return Err(GeometryError::DegenerateConic);
    }
    let (ls, tangential) = intersect_raw(&p.coords(), &c.dual_matrix())?;
    Ok(Pair {
        items: [ProjLine::from_raw(ls[0])?, ProjLine::from_raw(ls[1])?],
        tangential,
    })
}

/// A point of A ∩ B with its intersection multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicIntersection {
    pub point: ProjPoint,
    pub multiplicity: u8,
}

/// Coefficients of det(A + λB), constant term first.
pub(crate) fn pencil_cubic(a: &M3, b: &M3) -> [Complex64; 4] {
    let c0 = linalg::det(a);
    let c3 = linalg::det(b);
    let f1 = linalg::det(&linalg::mat_add(a, b, linalg::ONE));
    let fm1 = linalg::det(&linalg::mat_add(a, b, -linalg::ONE));
    let c1 = (f1 - fm1) * 0.5 - c3;
    let c2 = (f1 + fm1) * 0.5 - c0;
    [c0, c1, c2, c3]
}

/// Splits a rank-2 symmetric matrix into the two lines it is the product of.
fn split_degenerate(d: &M3) -> Option<(V3, V3)> {
    let adj = linalg::adjugate(d);
    let i = (0..3).max_by(|&i, &j| adj[i][i].norm().total_cmp(&adj[j][j].norm()))?;
    let beta = (-adj[i][i]).sqrt();
    if beta.is_zero() {
        // rank one: a double line, which is any nonzero row
        let r =
            (0..3).max_by(|&i, &j| linalg::max_abs(&d[i]).total_cmp(&linalg::max_abs(&d[j])))?;
        return Some((d[r], d[r]));
    }
    let p = [adj[0][i] / beta, adj[1][i] / beta, adj[2][i] / beta];
    let c = linalg::mat_add(d, &linalg::cross_matrix(&p), linalg::ONE);
    let mut best = (0, 0);
    for r in 0..3 {
        for s in 0..3 {
            if c[r][s].norm() > c[best.0][best.1].norm() {
                best = (r, s);
            }
        }
    }
    let row = c[best.0];
    let col = [c[0][best.1], c[1][best.1], c[2][best.1]];
    Some((row, col))
}

pub(crate) fn rank2_quality(d: &M3) -> f64 {
    let n = linalg::mat_max_abs(d);
    if n == 0.0 {
        return 0.0;
    }
    linalg::mat_max_abs(&linalg::adjugate(d)) / (n * n)
}

/// Newton polish of a common point of two conics in the chart fixing its largest coordinate.
fn polish(a: &M3, b: &M3, p: V3) -> V3 {
    let k = (0..3)
        .max_by(|&i, &j| p[i].norm().total_cmp(&p[j].norm()))
        .unwrap_or(2);
    let free: Vec<usize> = (0..3).filter(|&i| i != k).collect();
    let mut x = match linalg::normalize(&p) {
        Some(x) => x,
        None => return p,
    };
    let res = |x: &V3| linalg::quad_form(a, x).norm() + linalg::quad_form(b, x).norm();
    for _ in 0..3 {
        let f = linalg::quad_form(a, &x);
        let g = linalg::quad_form(b, &x);
        let ax = linalg::mat_vec(a, &x);
        let bx = linalg::mat_vec(b, &x);
        let (j00, j01) = (ax[free[0]] * 2.0, ax[free[1]] * 2.0);
        let (j10, j11) = (bx[free[0]] * 2.0, bx[free[1]] * 2.0);
        let det = j00 * j11 - j01 * j10;
        let scale = (j00.norm() + j01.norm()) * (j10.norm() + j11.norm());
        if det.norm() <= 1e-8 * scale || scale == 0.0 {
            break;
        }
        let d0 = (f * j11 - g * j01) / det;
        let d1 = (j00 * g - j10 * f) / det;
        let mut y = x;
        y[free[0]] -= d0;
        y[free[1]] -= d1;
        if res(&y) < res(&x) {
            x = y;
        } else {
            break;
        }
    }
    x
}

/// All intersections of two conics, with multiplicities summing to 4.
///
/// A degenerate member of the pencil A + λB is split into two lines, each of
/// which is intersected with A. Repeated intersections (tangential contact)
/// are reported once with multiplicity 2, 3 or 4.
pub fn conic_conic_intersect(a: &Conic, b: &Conic) -> Result<Vec<ConicIntersection>> {
    if a.approx_eq(b, Tolerances::DEFAULT.degeneracy) {
        return Err(GeometryError::ProportionalConics);
    }
    if a.is_degenerate() || b.is_degenerate() {
        return Err(GeometryError::DegenerateConic);
    }
    let (am, bm) = (a.matrix(), b.matrix());
    let cubic = pencil_cubic(&am, &bm);
    let lambdas = poly::roots(&cubic);
    let degenerate_member = lambdas
        .iter()
        .map(|&l| linalg::mat_add(&am, &bm, l))
        .max_by(|x, y| rank2_quality(x).total_cmp(&rank2_quality(y)))
        .ok_or(GeometryError::DegeneratePencil(
            "no degenerate member".into(),
        ))?;
    let (l1, l2) = split_degenerate(&degenerate_member).ok_or(GeometryError::DegeneratePencil(
        "cannot split degenerate member".into(),
    ))?;

    let mut raw: Vec<(V3, u8)> = Vec::with_capacity(4);
    for l in [l1, l2] {
        let (pts, tangential) = intersect_raw(&l, &am)?;
        if tangential {
            raw.push((pts[0], 2));
        } else {
            raw.push((pts[0], 1));
            raw.push((pts[1], 1));
        }
    }

    let mut out: Vec<ConicIntersection> = Vec::new();
    for (p, m) in raw {
        let p = polish(&am, &bm, p);
        let point = ProjPoint::from_raw(p)?;
        match out.iter_mut().find(|q| q.point.distance(&point) < 1e-6) {
            Some(q) => q.multiplicity += m,
            None => out.push(ConicIntersection {
                point,
                multiplicity: m,
            }),
        }
    }
    Ok(out)
}

/// Scaled residual of the six-points-on-a-conic bracket identity
/// [123][156][426][453] = [456][423][153][126].
pub fn six_on_conic_test(points: &[ProjPoint; 6]) -> f64 {
    let v = points.map(|p| p.coords());
    let br = |i: usize, j: usize, k: usize| linalg::det3(&v[i - 1], &v[j - 1], &v[k - 1]);
    let lhs = br(1, 2, 3) * br(1, 5, 6) * br(4, 2, 6) * br(4, 5, 3);
    let rhs = br(4, 5, 6) * br(4, 2, 3) * br(1, 5, 3) * br(1, 2, 6);
    (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1e-300)
}

/// Point of the conic where it meets a line through `on`, other than `on`.
/// Uses (yᵀCy)·c − 2(cᵀCy)·y, exact for any y on the line.
pub fn second_intersection(c: &Conic, on: &ProjPoint, through: &ProjPoint) -> Result<ProjPoint> {
    let m = c.matrix();
    let cv = on.coords();
    let y = through.coords();
    let yy = linalg::quad_form(&m, &y);
    let cy = linalg::bilinear_form(&m, &cv, &y);
    let v = linalg::sub(&linalg::scale(&cv, yy), &linalg::scale(&y, cy * 2.0));
    ProjPoint::from_raw(v).map_err(|_| GeometryError::TangentialDegeneracy)
}

/// Whether three points are collinear within the degeneracy tolerance.
pub fn are_collinear(a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> bool {
    collinearity(a, b, c) < 1e-10
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::element::join;

    fn unit() -> Conic {
        Conic::circle(1.0)
    }

    fn pt(x: f64, y: f64, z: f64) -> ProjPoint {
        ProjPoint::real(x, y, z).unwrap()
    }

    #[test]
    fn circle_through_five_points() {
        let pts = [0.1, 1.0, 2.3, 3.9, 5.0].map(|t: f64| pt(t.cos(), t.sin(), 1.0));
        let c = conic_through_5(&pts).unwrap();
        assert!(c.approx_eq(&unit(), 1e-12));
    }

    #[test]
    fn collinear_triple_rejected() {
        let pts = [
            pt(0., 0., 1.),
            pt(1., 1., 1.),
            pt(2., 2., 1.),
            pt(1., 0., 1.),
            pt(0., 3., 1.),
        ];
        assert!(matches!(
            conic_through_5(&pts),
            Err(GeometryError::DegenerateInput(_))
        ));
    }

    #[test]
    fn containment_values() {
        assert!(conic_contains(&unit(), &pt(1., 0., 1.)) < 1e-15);
        assert!((conic_contains(&unit(), &pt(1., 1., 1.)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tangent_at_point() {
        let l = tangent_line_at(&unit(), &pt(1., 0., 1.)).unwrap();
        assert!(l.approx_eq(&ProjLine::real(1., 0., -1.).unwrap(), 1e-15));
        assert!(matches!(
            tangent_line_at(&unit(), &pt(2., 0., 1.)),
            Err(GeometryError::PointNotOnConic { .. })
        ));
    }

    #[test]
    fn line_meets_circle() {
        let r = line_conic_intersect(&ProjLine::real(0., 1., 0.).unwrap(), &unit()).unwrap();
        assert!(!r.tangential);
        let a = pt(1., 0., 1.);
        let b = pt(1., 0., -1.);
        assert!(r.items.iter().any(|p| p.approx_eq(&a, 1e-14)));
        assert!(r.items.iter().any(|p| p.approx_eq(&b, 1e-14)));
        let t = line_conic_intersect(&ProjLine::real(1., 0., -1.).unwrap(), &unit()).unwrap();
        assert!(t.tangential);
        assert!(t.items[0].approx_eq(&a, 1e-14) && t.items[1].approx_eq(&a, 1e-14));
    }

    #[test]
    fn exterior_line_gives_conjugate_pair() {
        let l = ProjLine::real(1., 0., -2.).unwrap();
        let r = line_conic_intersect(&l, &unit()).unwrap();
        for p in r.items {
            assert!(!p.is_real());
            assert!(conic_contains(&unit(), &p) < 1e-12);
            assert!(p.incidence(&l) < 1e-12);
        }
    }

    #[test]
    fn tangents_from_exterior_point() {
        let p = pt(2., 0., 1.);
        let r = tangents_from_point(&p, &unit()).unwrap();
        for l in r.items {
            assert!(l.is_real());
            assert!(p.incidence(&l) < 1e-12);
            assert!(unit().tangency(&l) < 1e-12);
        }
        let center = tangents_from_point(&pt(0., 0., 1.), &unit()).unwrap();
        assert!(center.items.iter().all(|l| !l.is_real()));
        let on = tangents_from_point(&pt(1., 0., 1.), &unit()).unwrap();
        assert!(on.tangential);
    }

    #[test]
    fn concentric_conics_touch_twice() {
        let b = Conic::from_real([[1., 0., 0.], [0., 2., 0.], [0., 0., -1.]]).unwrap();
        let r = conic_conic_intersect(&unit(), &b).unwrap();
        assert_eq!(r.iter().map(|c| c.multiplicity as u32).sum::<u32>(), 4);
        assert_eq!(r.len(), 2);
        for c in &r {
            assert_eq!(c.multiplicity, 2);
            assert!(
                c.point.approx_eq(&pt(1., 0., 1.), 1e-7)
                    || c.point.approx_eq(&pt(-1., 0., 1.), 1e-7)
            );
        }
    }

    #[test]
    fn concentric_circles_meet_in_four_complex_points() {
        let r = conic_conic_intersect(&unit(), &Conic::circle(0.5)).unwrap();
        assert_eq!(r.iter().map(|c| c.multiplicity as u32).sum::<u32>(), 4);
        for c in &r {
            assert!(conic_contains(&unit(), &c.point) < 1e-8);
            assert!(conic_contains(&Conic::circle(0.5), &c.point) < 1e-8);
        }
    }

    #[test]
    fn proportional_conics_rejected() {
        assert_eq!(
            conic_conic_intersect(&unit(), &unit()),
            Err(GeometryError::ProportionalConics)
        );
    }

    #[test]
    fn second_intersection_on_circle() {
        let c = unit();
        let p = pt(1., 0., 1.);
        let q = second_intersection(&c, &p, &pt(0., 0., 1.)).unwrap();
        assert!(q.approx_eq(&pt(-1., 0., 1.), 1e-15));
        let l = join(&p, &pt(0., 3., 1.)).unwrap();
        let other = second_intersection(&c, &p, &pt(0., 3., 1.)).unwrap();
        assert!(other.incidence(&l) < 1e-14 && conic_contains(&c, &other) < 1e-14);
    }

    #[test]
    fn six_points_on_circle() {
        let pts = [0.1, 1.0, 2.3, 3.9, 5.0, 5.9].map(|t: f64| pt(t.cos(), t.sin(), 1.0));
        assert!(six_on_conic_test(&pts) < 1e-12);
        let mut off = pts;
        off[5] = pt(0.3, 0.2, 1.0);
        assert!(six_on_conic_test(&off) > 1e-3);
        let mut dup = [
            pt(0.3, 0.2, 1.0),
            pt(1., 2., 1.),
            pt(-1., 0.5, 1.),
            pt(3., -2., 1.),
            pt(0.2, 0.1, 1.),
            pt(4., 4., 1.),
        ];
        dup[3] = dup[0];
        assert_eq!(six_on_conic_test(&dup), 0.0);
    }
}
