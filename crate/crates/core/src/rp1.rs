//! Points of a conic as points of the projective line, and the 2×2 bracket
//! conditions for Poncelet chains and polygons.
//!
//! Every condition is reported as a [`BracketResidual`] holding both sides of
//! the equation and their relative gap, so conditions are invariant under
//! rescaling of the inputs and under projective maps of the line.

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, V3};
use crate::projective::{
    conic_contains, join, line_conic_intersect, meet, second_intersection, tangent_line_at, Conic,
    ProjLine, ProjPoint,
};
use crate::{GeometryError, Result, Tolerances};

/// A point of the complex projective line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RP1Point {
    coords: [Complex64; 2],
}

impl RP1Point {
    pub fn new(coords: [Complex64; 2]) -> Result<RP1Point> {
        if !linalg::all_finite(&coords) {
            return Err(GeometryError::NonFinite);
        }
        linalg::normalize(&coords)
            .map(|coords| RP1Point { coords })
            .ok_or_else(|| GeometryError::DegenerateInput("RP1Point is the zero vector".into()))
    }

    /// The affine point (x, 1).
    pub fn affine(x: f64) -> RP1Point {
        RP1Point::from_value(Complex64::new(x, 0.0))
    }

    /// The point (z, 1) for a complex affine coordinate.
    pub fn from_value(z: Complex64) -> RP1Point {
        RP1Point::new([z, Complex64::new(1.0, 0.0)]).unwrap_or(RP1Point::infinity())
    }

    pub fn infinity() -> RP1Point {
        RP1Point {
            coords: [linalg::ONE, linalg::ZERO],
        }
    }

    pub fn coords(&self) -> [Complex64; 2] {
        self.coords
    }

    /// Affine coordinate x₀/x₁, `None` at infinity.
    pub fn value(&self) -> Option<Complex64> {
        if self.coords[1].norm() < 1e-300 {
            None
        } else {
            Some(self.coords[0] / self.coords[1])
        }
    }

    /// |[a,b]| relative to the operands; zero iff equal.
    pub fn distance(&self, other: &RP1Point) -> f64 {
        let n = |c: &[Complex64; 2]| (c[0].norm_sqr() + c[1].norm_sqr()).sqrt();
        bracket(self, other).norm() / (n(&self.coords) * n(&other.coords))
    }

    pub fn approx_eq(&self, other: &RP1Point, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    /// Image under the 2×2 matrix m.
    pub fn map(&self, m: &[[Complex64; 2]; 2]) -> Result<RP1Point> {
        let [x, y] = self.coords;
        RP1Point::new([m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y])
    }

    /// Same point with independent rescaling of its coordinate pair.
    pub fn rescaled(&self, s: Complex64) -> RawPair {
        RawPair([self.coords[0] * s, self.coords[1] * s])
    }
}

/// An unnormalized coordinate pair, for checking multihomogeneity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawPair(pub [Complex64; 2]);

/// Anything with two homogeneous coordinates.
pub trait Homogeneous2 {
    fn pair(&self) -> [Complex64; 2];
}

impl Homogeneous2 for RP1Point {
    fn pair(&self) -> [Complex64; 2] {
        self.coords
    }
}

impl Homogeneous2 for RawPair {
    fn pair(&self) -> [Complex64; 2] {
        self.0
    }
}

/// [a,b] = a₀b₁ − a₁b₀.
pub fn bracket<P: Homogeneous2>(a: &P, b: &P) -> Complex64 {
    let (a, b) = (a.pair(), b.pair());
    a[0] * b[1] - a[1] * b[0]
}

/// (a,b;c,d) = [a,c][b,d] / ([a,d][b,c]).
pub fn cross_ratio(a: &RP1Point, b: &RP1Point, c: &RP1Point, d: &RP1Point) -> Result<Complex64> {
    let den = bracket(a, d) * bracket(b, c);
    if den.norm() <= Tolerances::DEFAULT.degeneracy {
        return Err(GeometryError::DegenerateCrossRatio);
    }
    Ok(bracket(a, c) * bracket(b, d) / den)
}

/// Both sides of a bracket equation and their relative gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BracketResidual {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub scaled_gap: f64,
}

impl BracketResidual {
    pub const FLOOR: f64 = 1e-300;

    pub fn new(lhs: Complex64, rhs: Complex64) -> BracketResidual {
        let scaled_gap = (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(Self::FLOOR);
        BracketResidual {
            lhs,
            rhs,
            scaled_gap,
        }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.scaled_gap <= tol
    }
}

/// 1-based bracket lookup over a list of points.
struct Br<'a, P>(&'a [P]);

impl<P: Homogeneous2> Br<'_, P> {
    fn b(&self, i: usize, j: usize) -> Complex64 {
        bracket(&self.0[i - 1], &self.0[j - 1])
    }

    /// Product of brackets written as digit pairs, e.g. `self.m(&[15, 26, 34])`.
    fn m(&self, ids: &[usize]) -> Complex64 {
        ids.iter()
            .fold(linalg::ONE, |acc, &ij| acc * self.b(ij / 10, ij % 10))
    }
}

/// True when no two of the points coincide.
pub fn is_proper<P: Homogeneous2>(points: &[P]) -> bool {
    let n = |c: [Complex64; 2]| (c[0].norm_sqr() + c[1].norm_sqr()).sqrt();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = bracket(&points[i], &points[j]).norm()
                / (n(points[i].pair()) * n(points[j].pair()));
            if d <= 1e-12 {
                return false;
            }
        }
    }
    true
}

/// Quadset relation [15][26][34] = [16][24][35] for the pairs (1,4), (2,5), (3,6).
pub fn quadset_residual<P: Homogeneous2>(p: &[P; 6]) -> BracketResidual {
    let b = Br(p);
    BracketResidual::new(b.m(&[15, 26, 34]), b.m(&[16, 24, 35]))
}

/// Chain condition [74][16][54][32] = [72][14][56][34]: seven points form a
/// proper Poncelet chain iff it holds and the points are distinct.
pub fn chain7_residual<P: Homogeneous2>(p: &[P; 7]) -> BracketResidual {
    let b = Br(p);
    BracketResidual::new(b.m(&[74, 16, 54, 32]), b.m(&[72, 14, 56, 34]))
}

/// The three lexicographically sorted equivalent forms of the chain condition.
pub fn chain7_forms<P: Homogeneous2>(p: &[P; 7]) -> [BracketResidual; 3] {
    let b = Br(p);
    [
        BracketResidual::new(b.m(&[14, 27, 34, 56]), b.m(&[16, 23, 45, 47])),
        BracketResidual::new(b.m(&[14, 24, 37, 56]), b.m(&[15, 23, 46, 47])),
        BracketResidual::new(b.m(&[15, 27, 34, 46]), b.m(&[16, 24, 37, 45])),
    ]
}

/// Unique point 7 continuing the chain 1..6: 7 = [16][54][32]·4 − [14][56][34]·2.
pub fn next_chain_point(p: &[RP1Point; 6]) -> Result<RP1Point> {
    if !is_proper(p) {
        return Err(GeometryError::DegenerateChain(
            "input points are not distinct".into(),
        ));
    }
    let b = Br(p);
    let c4 = b.m(&[16, 54, 32]);
    let c2 = b.m(&[14, 56, 34]);
    let [x4, y4] = p[3].coords;
    let [x2, y2] = p[1].coords;
    let v = [c4 * x4 - c2 * x2, c4 * y4 - c2 * y2];
    if linalg::max_abs(&v) <= Tolerances::DEFAULT.degeneracy * (c4.norm() + c2.norm()) {
        return Err(GeometryError::DegenerateChain(
            "next-point coefficients vanish".into(),
        ));
    }
    RP1Point::new(v)
}

/// Hexagon closure: the point 6 with 7 = 1 in the chain relation,
/// 6 = [54][32]·1 − [12][34]·5.
pub fn hexagon_point6(p: &[RP1Point; 5]) -> Result<RP1Point> {
    if !is_proper(p) {
        return Err(GeometryError::DegenerateChain(
            "input points are not distinct".into(),
        ));
    }
    let b = Br(p);
    let c1 = b.m(&[54, 32]);
    let c5 = b.m(&[12, 34]);
    let [x1, y1] = p[0].coords;
    let [x5, y5] = p[4].coords;
    let v = [c1 * x1 - c5 * x5, c1 * y1 - c5 * y5];
    if linalg::max_abs(&v) <= Tolerances::DEFAULT.degeneracy * (c1.norm() + c5.norm()) {
        return Err(GeometryError::DegenerateChain(
            "hexagon coefficients vanish".into(),
        ));
    }
    RP1Point::new(v)
}

/// Six consecutive points of a Poncelet 7-gon:
/// [36][24][56][35][12][14] = [13][45][26][15][46][23].
pub fn heptagon6_residual<P: Homogeneous2>(p: &[P; 6]) -> BracketResidual {
    let b = Br(p);
    BracketResidual::new(
        b.m(&[36, 24, 56, 35, 12, 14]),
        b.m(&[13, 45, 26, 15, 46, 23]),
    )
}

/// The same condition as the cross-ratio product (1,6;4,3)(3,4;5,2)(5,2;6,1), which equals 1.
pub fn heptagon6_cross_ratio_product(p: &[RP1Point; 6]) -> Result<Complex64> {
    let q = |i: usize| &p[i - 1];
    Ok(cross_ratio(q(1), q(6), q(4), q(3))?
        * cross_ratio(q(3), q(4), q(5), q(2))?
        * cross_ratio(q(5), q(2), q(6), q(1))?)
}

/// Construction polynomial for point 6 of a Poncelet 7-gon:
/// [12][14][25][34][56][36] = [15][16][23]²[45][46] + [12][16][45]²[23][36].
pub fn heptagon_precondition_residual<P: Homogeneous2>(p: &[P; 6]) -> BracketResidual {
    let b = Br(p);
    BracketResidual::new(
        b.m(&[12, 14, 25, 34, 56, 36]),
        b.m(&[15, 16, 23, 23, 45, 46]) + b.m(&[12, 16, 45, 45, 23, 36]),
    )
}

/// Position of point 7 of a Poncelet octagon given 1..5; inputs are (1,2,3,4,5,7).
/// [12][14][27][34][35][57] = [13][17][23][25][45][47].
pub fn octagon_point7_residual<P: Homogeneous2>(p: &[P; 6]) -> BracketResidual {
    // slot 6 of the array holds point 7
    let q = [&p[0], &p[1], &p[2], &p[3], &p[4], &p[5], &p[5]];
    let b = |i: usize, j: usize| bracket(q[i - 1], q[j - 1]);
    let m = |ids: &[usize]| {
        ids.iter()
            .fold(linalg::ONE, |acc, &ij| acc * b(ij / 10, ij % 10))
    };
    BracketResidual::new(m(&[12, 14, 27, 34, 35, 57]), m(&[13, 17, 23, 25, 45, 47]))
}

/// Condition for (1,2,3,4,5,7) to be part of a Poncelet 9-gon:
/// [12][14][15][27]²[34][35]²[47] = [15][17]²[23]²[24][34][45][57] + [12][14][17][24][25][35][37]²[45].
pub fn ninegon_residual<P: Homogeneous2>(p: &[P; 6]) -> BracketResidual {
    let q = [&p[0], &p[1], &p[2], &p[3], &p[4], &p[5], &p[5]];
    let b = |i: usize, j: usize| bracket(q[i - 1], q[j - 1]);
    let m = |ids: &[usize]| {
        ids.iter()
            .fold(linalg::ONE, |acc, &ij| acc * b(ij / 10, ij % 10))
    };
    BracketResidual::new(
        m(&[12, 14, 15, 27, 27, 34, 35, 35, 47]),
        m(&[15, 17, 17, 23, 23, 24, 34, 45, 57]) + m(&[12, 14, 17, 24, 25, 35, 37, 37, 45]),
    )
}

/// Grassmann–Plücker residual |[ab][cd] − [ac][bd] + [ad][bc]|, scaled by the term sizes.
pub fn gp_residual<P: Homogeneous2>(a: &P, b: &P, c: &P, d: &P) -> f64 {
    let t1 = bracket(a, b) * bracket(c, d);
    let t2 = bracket(a, c) * bracket(b, d);
    let t3 = bracket(a, d) * bracket(b, c);
    (t1 - t2 + t3).norm() / (t1.norm() + t2.norm() + t3.norm()).max(BracketResidual::FLOOR)
}

/// Antisymmetric table of free bracket values [ij], 1-based, for checking
/// bracket-polynomial identities without imposing the relations among brackets.
#[derive(Debug, Clone)]
pub struct FreeBrackets {
    values: Vec<Vec<Complex64>>,
}

impl FreeBrackets {
    /// Builds the table from the values for i < j, read row by row.
    pub fn new(n: usize, mut upper: impl FnMut(usize, usize) -> Complex64) -> FreeBrackets {
        let mut values = vec![vec![Complex64::zero(); n + 1]; n + 1];
        for i in 1..=n {
            for j in i + 1..=n {
                let v = upper(i, j);
                values[i][j] = v;
                values[j][i] = -v;
            }
        }
        FreeBrackets { values }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i][j]
    }

    fn m(&self, ids: &[usize]) -> Complex64 {
        ids.iter()
            .fold(linalg::ONE, |acc, &ij| acc * self.get(ij / 10, ij % 10))
    }

    fn gp(&self, a: usize, b: usize, c: usize, d: usize) -> Complex64 {
        self.get(a, b) * self.get(c, d) - self.get(a, c) * self.get(b, d)
            + self.get(a, d) * self.get(b, c)
    }
}

/// Checks that the heptagon test polynomial minus the construction polynomial
/// equals [15][45][46][23]·GP(1236) + [12][23][36][45]·GP(1456) − [12][36][14][56]·GP(2345)
/// as a polynomial in free brackets. Returns (difference, combination, scaled gap).
pub fn heptagon_syzygy_defect(b: &FreeBrackets) -> (Complex64, Complex64, f64) {
    let t = b.m(&[36, 24, 56, 35, 12, 14]) - b.m(&[13, 45, 26, 15, 46, 23]);
    let e5 = b.m(&[12, 14, 25, 34, 56, 36])
        - b.m(&[15, 16, 23, 23, 45, 46])
        - b.m(&[12, 16, 45, 45, 23, 36]);
    let diff = t - e5;
    let combo = b.m(&[15, 45, 46, 23]) * b.gp(1, 2, 3, 6)
        + b.m(&[12, 23, 36, 45]) * b.gp(1, 4, 5, 6)
        - b.m(&[12, 36, 14, 56]) * b.gp(2, 3, 4, 5);
    let scale = [
        b.m(&[36, 24, 56, 35, 12, 14]),
        b.m(&[13, 45, 26, 15, 46, 23]),
        b.m(&[12, 14, 25, 34, 56, 36]),
        b.m(&[15, 16, 23, 23, 45, 46]),
        b.m(&[12, 16, 45, 45, 23, 36]),
    ]
    .iter()
    .map(|z| z.norm())
    .fold(BracketResidual::FLOOR, f64::max);
    (diff, combo, (diff - combo).norm() / scale)
}

/// Stereographic transfer between a conic and a line.
///
/// Conic points are projected from `center` onto `axis`; the axis carries the
/// frame (u, v) where u is the image of the center itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StereoChart {
    conic: Conic,
    center: ProjPoint,
    axis: ProjLine,
    u: V3,
    v: V3,
}

impl StereoChart {
    pub fn new(conic: Conic, center: ProjPoint, axis: ProjLine) -> Result<StereoChart> {
        if conic.is_degenerate() {
            return Err(GeometryError::DegenerateConic);
        }
        let tangent = tangent_line_at(&conic, &center)?;
        if center.incidence(&axis) < 1e-6 {
            return Err(GeometryError::DegenerateInput(
                "chart axis passes through the center".into(),
            ));
        }
        let u = meet(&tangent, &axis)?.coords();
        let (b0, b1) = axis_basis(&axis.coords());
        let v = if linalg::chordal(&u, &b0) >= linalg::chordal(&u, &b1) {
            b0
        } else {
            b1
        };
        let v = linalg::normalize(&v).ok_or(GeometryError::NonFinite)?;
        Ok(StereoChart {
            conic,
            center,
            axis,
            u,
            v,
        })
    }

    /// Unit circle projected from (0,1,1) onto the x-axis; (x,1) ↔ the classical
    /// stereographic coordinate x.
    pub fn standard() -> StereoChart {
        StereoChart::new(
            Conic::circle(1.0),
            ProjPoint::real(0.0, 1.0, 1.0).expect("finite"),
            ProjLine::real(0.0, 1.0, 0.0).expect("finite"),
        )
        .expect("standard chart is valid")
    }

    /// A deterministic chart for the conic.
    pub fn for_conic(conic: &Conic) -> Result<StereoChart> {
        StereoChart::for_conic_avoiding(conic, &[])
    }

    /// A deterministic chart whose center is away from every listed point.
    pub fn for_conic_avoiding(conic: &Conic, avoid: &[ProjPoint]) -> Result<StereoChart> {
        const PROBES: [[f64; 3]; 5] = [
            [0.31, -0.57, 1.0],
            [1.0, 0.23, -0.41],
            [-0.66, 1.0, 0.17],
            [0.12, 0.35, -0.9],
            [1.0, -1.0, 0.6],
        ];
        const AXES: [[f64; 3]; 3] = [[0.37, -0.71, 1.0], [1.0, 0.5, 0.2], [0.1, 1.0, -0.4]];
        let mut best: Option<(f64, ProjPoint)> = None;
        for probe in PROBES {
            let line = ProjLine::real(probe[0], probe[1], probe[2])?;
            for c in line_conic_intersect(&line, conic)?.items {
                let clearance = avoid.iter().map(|a| a.distance(&c)).fold(1.0, f64::min);
                if best.is_none_or(|(d, _)| clearance > d) {
                    best = Some((clearance, c));
                }
            }
            if best.is_some_and(|(d, _)| d > 1e-2) {
                break;
            }
        }
        let (_, center) = best.ok_or(GeometryError::DegenerateConic)?;
        let axis = AXES
            .iter()
            .map(|a| ProjLine::real(a[0], a[1], a[2]).expect("finite"))
            .max_by(|a, b| center.incidence(a).total_cmp(&center.incidence(b)))
            .expect("nonempty");
        StereoChart::new(*conic, center, axis)
    }

    /// A chart with real center and axis, so that real values lift to real
    /// points. The center is found on lines through the pole of the line at
    /// infinity, with a few fixed lines as fallback.
    pub fn for_real_conic(conic: &Conic) -> Result<StereoChart> {
        if !conic.is_real() {
            return Err(GeometryError::DegenerateInput("conic is not real".into()));
        }
        let m = conic.dual_matrix();
        let mut lines = Vec::new();
        if let Ok(pole) = ProjPoint::new([m[0][2], m[1][2], m[2][2]]) {
            for t in [0.0f64, 0.7, 1.3, 2.1, 2.9] {
                if let Ok(l) = join(&pole, &ProjPoint::real(t.cos(), t.sin(), 0.0)?) {
                    lines.push(l);
                }
            }
        }
        for t in [-0.5, 0.0, 0.5] {
            lines.push(ProjLine::real(1.0, 0.0, t)?);
            lines.push(ProjLine::real(0.0, 1.0, t)?);
        }
        let center = lines
            .iter()
            .filter(|l| l.is_real())
            .filter_map(|l| line_conic_intersect(l, conic).ok())
            .filter(|hits| !hits.tangential)
            .flat_map(|hits| hits.items)
            .find(|p| p.is_real())
            .ok_or_else(|| GeometryError::DegenerateInput("conic has no real points".into()))?;
        let c = center.coords();
        let center = ProjPoint::real(c[0].re, c[1].re, c[2].re)?;
        const AXES: [[f64; 3]; 3] = [[0.37, -0.71, 1.0], [1.0, 0.5, 0.2], [0.1, 1.0, -0.4]];
        let axis = AXES
            .iter()
            .map(|a| ProjLine::real(a[0], a[1], a[2]).expect("finite"))
            .max_by(|a, b| center.incidence(a).total_cmp(&center.incidence(b)))
            .expect("nonempty");
        StereoChart::new(*conic, center, axis)
    }

    pub fn conic(&self) -> &Conic {
        &self.conic
    }

    pub fn center(&self) -> ProjPoint {
        self.center
    }

    pub fn axis(&self) -> ProjLine {
        self.axis
    }

    /// Projects a conic point to the line; the center goes to (1,0).
    pub fn project(&self, p: &ProjPoint) -> Result<RP1Point> {
        let residual = conic_contains(&self.conic, p);
        if residual > Tolerances::DEFAULT.membership {
            return Err(GeometryError::PointNotOnConic { residual });
        }
        self.project_unchecked(p)
    }

    /// Projection from the chart center without the membership check; a point
    /// slightly off the conic maps to the parameter of the nearby conic point.
    pub fn project_unchecked(&self, p: &ProjPoint) -> Result<RP1Point> {
        if p.distance(&self.center) <= Tolerances::DEFAULT.degeneracy {
            return Ok(RP1Point::infinity());
        }
        let x = meet(&join(&self.center, p)?, &self.axis)?.coords();
        self.frame_coords(&x)
    }

    fn frame_coords(&self, x: &V3) -> Result<RP1Point> {
        let uv = linalg::cross(&self.u, &self.v);
        let den = linalg::hdot(&uv, &uv);
        let alpha = linalg::hdot(&linalg::cross(x, &self.v), &uv) / den;
        let beta = linalg::hdot(&linalg::cross(&self.u, x), &uv) / den;
        RP1Point::new([alpha, beta])
    }

    /// Point of the conic projecting to x.
    pub fn lift(&self, x: &RP1Point) -> ProjPoint {
        let [a, b] = x.coords();
        let y = linalg::add(&linalg::scale(&self.u, a), &linalg::scale(&self.v, b));
        let y = ProjPoint::new(y).expect("frame points are independent");
        second_intersection(&self.conic, &self.center, &y).unwrap_or(self.center)
    }

    pub fn lift_all<const N: usize>(&self, xs: &[RP1Point; N]) -> [ProjPoint; N] {
        xs.map(|x| self.lift(&x))
    }

    pub fn project_all<const N: usize>(&self, ps: &[ProjPoint; N]) -> Result<[RP1Point; N]> {
        let mut out = [RP1Point::infinity(); N];
        for (o, p) in out.iter_mut().zip(ps.iter()) {
            *o = self.project(p)?;
        }
        Ok(out)
    }
}

fn axis_basis(l: &V3) -> (V3, V3) {
    let m = (0..3)
        .max_by(|&i, &j| l[i].norm().total_cmp(&l[j].norm()))
        .unwrap_or(0);
    let mut e = [[linalg::ZERO; 3]; 2];
    let mut k = 0;
    for i in 0..3 {
        if i != m {
            e[k][i] = linalg::ONE;
            k += 1;
        }
    }
    (linalg::cross(l, &e[0]), linalg::cross(l, &e[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xs<const N: usize>(v: [f64; N]) -> [RP1Point; N] {
        v.map(RP1Point::affine)
    }

    #[test]
    fn bracket_is_difference_of_affine_values() {
        let raw = |x: f64| RawPair([Complex64::new(x, 0.0), linalg::ONE]);
        assert_eq!(bracket(&raw(3.5), &raw(-1.25)), Complex64::new(4.75, 0.0));
        let [a, b] = xs([3.5, -1.25]);
        assert_eq!(bracket(&a, &a), Complex64::zero());
        assert_eq!(bracket(&a, &b), -bracket(&b, &a));
    }

    #[test]
    fn harmonic_cross_ratio() {
        let [z, o, m] = xs([0.0, 1.0, -1.0]);
        let cr = cross_ratio(&z, &RP1Point::infinity(), &o, &m).unwrap();
        assert!((cr + 1.0).norm() < 1e-15);
        let [a, b, c] = xs([0.3, 2.0, 5.0]);
        assert!((cross_ratio(&a, &b, &c, &c).unwrap() - 1.0).norm() < 1e-15);
        assert_eq!(
            cross_ratio(&a, &b, &c, &a),
            Err(GeometryError::DegenerateCrossRatio)
        );
    }

    #[test]
    fn next_point_matches_worked_example() {
        let p = xs([-1.0, 0.0, 1.0, 4.0, 5.0, 2.0]);
        let x7 = next_chain_point(&p).unwrap().value().unwrap();
        assert!((x7 - 0.25).norm() < 1e-15);
        let mut bad = p;
        bad[3] = bad[1];
        assert!(matches!(
            next_chain_point(&bad),
            Err(GeometryError::DegenerateChain(_))
        ));
    }

    #[test]
    fn chain_formula_in_one_parameter() {
        for x6 in [2.0, -3.0, 0.5, 7.0] {
            let x7 = (2.0 + 2.0 * x6) / (38.0 - 7.0 * x6);
            let p = xs([-1.0, 0.0, 1.0, 4.0, 5.0, x6, x7]);
            assert!(chain7_residual(&p).scaled_gap < 1e-12);
            for f in chain7_forms(&p) {
                assert!(f.scaled_gap < 1e-12);
            }
        }
    }

    #[test]
    fn hexagon_point_closes() {
        let p = xs([-1.0, 0.0, 1.0, 4.0, 5.0]);
        let p6 = hexagon_point6(&p).unwrap();
        let chain = [p[0], p[1], p[2], p[3], p[4], p6, p[0]];
        assert!(chain7_residual(&chain).scaled_gap < 1e-14);
    }

    #[test]
    fn octagon_golden_values() {
        let s = 649f64.sqrt();
        let x6 = (209.0 - 5.0 * s) / 66.0;
        let p = xs([-1.0, 0.0, 1.0, 4.0, 5.0, x6]);
        let x7 = next_chain_point(&p).unwrap().value().unwrap().re;
        assert!((x7 - (27.0 - s) / 10.0).abs() < 1e-12);
        let q = xs([-1.0, 0.0, 1.0, 4.0, 5.0, x7]);
        assert!(octagon_point7_residual(&q).scaled_gap < 1e-9);
    }

    #[test]
    fn gp_is_exact_on_integers() {
        let raw = |x: f64, y: f64| RawPair([Complex64::new(x, 0.0), Complex64::new(y, 0.0)]);
        let (a, b, c, d) = (
            raw(3.0, 1.0),
            raw(-7.0, 2.0),
            raw(11.0, -4.0),
            raw(2.0, 5.0),
        );
        assert_eq!(gp_residual(&a, &b, &c, &d), 0.0);
    }

    #[test]
    fn standard_chart_is_classical_stereographic_projection() {
        let chart = StereoChart::standard();
        assert!(chart
            .project(&chart.center())
            .unwrap()
            .approx_eq(&RP1Point::infinity(), 1e-15));
        for t in [0.3_f64, 1.2, 2.9, -2.0] {
            let p = ProjPoint::real(t.cos(), t.sin(), 1.0).unwrap();
            let x = chart.project(&p).unwrap().value().unwrap().re;
            assert!((x - t.cos() / (1.0 - t.sin())).abs() < 1e-12);
            assert!(chart.lift(&RP1Point::affine(x)).approx_eq(&p, 1e-12));
        }
        assert!(chart
            .lift(&RP1Point::infinity())
            .approx_eq(&chart.center(), 1e-15));
    }

    #[test]
    fn real_chart_lifts_real_values_to_real_points() {
        let hyperbola =
            Conic::from_real([[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]]).unwrap();
        let parabola =
            Conic::from_real([[1.0, 0.0, 0.0], [0.0, 0.0, -0.5], [0.0, -0.5, 0.0]]).unwrap();
        let ellipse =
            Conic::from_real([[4.0, 1.0, 0.5], [1.0, 1.0, 0.0], [0.5, 0.0, -3.0]]).unwrap();
        for conic in [hyperbola, parabola, ellipse] {
            let chart = StereoChart::for_real_conic(&conic).unwrap();
            for x in [-3.0, -0.4, 0.0, 1.7, 25.0] {
                let p = chart.lift(&RP1Point::affine(x));
                assert!(p.is_real());
                assert!(conic_contains(&conic, &p) < 1e-12);
            }
        }
        let empty = Conic::from_real([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]).unwrap();
        assert!(StereoChart::for_real_conic(&empty).is_err());
    }

    #[test]
    fn syzygy_holds_for_free_brackets() {
        let mut k = 0.0;
        let fb = FreeBrackets::new(6, |i, j| {
            k += 1.0;
            Complex64::new(
                (i as f64 * 0.37 + j as f64 * 1.3 + k).sin(),
                (k * 0.7).cos(),
            )
        });
        let (diff, _, gap) = heptagon_syzygy_defect(&fb);
        assert!(diff.norm() > 1e-6);
        assert!(gap < 1e-12);
    }
}
