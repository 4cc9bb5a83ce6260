use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, V3};
use crate::{GeometryError, Result, Tolerances};

macro_rules! homogeneous {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
        pub struct $name {
            coords: V3,
        }

        impl $name {
            /// Builds the element from homogeneous coordinates, rescaled so the
            /// largest-magnitude component is 1.
            pub fn new(coords: [Complex64; 3]) -> Result<Self> {
                if !linalg::all_finite(&coords) {
                    return Err(GeometryError::NonFinite);
                }
                linalg::normalize(&coords)
                    .map(|coords| $name { coords })
                    .ok_or_else(|| {
                        GeometryError::DegenerateInput(concat!(stringify!($name), " is the zero vector").into())
                    })
            }

            pub fn real(x: f64, y: f64, z: f64) -> Result<Self> {
                Self::new([
                    Complex64::new(x, 0.0),
                    Complex64::new(y, 0.0),
                    Complex64::new(z, 0.0),
                ])
            }

            pub fn coords(&self) -> [Complex64; 3] {
                self.coords
            }

            /// Chordal distance between the two projective classes, in [0, 1].
            pub fn distance(&self, other: &Self) -> f64 {
                linalg::chordal(&self.coords, &other.coords)
            }

            /// Projective equality: all 2×2 minors vanish relative to the operands.
            pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
                self.distance(other) <= tol
            }

            pub fn is_real(&self) -> bool {
                self.coords
                    .iter()
                    .all(|z| z.im.abs() <= Tolerances::REALITY * z.norm().max(1.0))
            }

            pub(crate) fn from_raw(coords: V3) -> Result<Self> {
                Self::new(coords)
            }
        }
    };
}

homogeneous!(
    /// A point of the complex projective plane.
    ProjPoint
);
homogeneous!(
    /// A line of the complex projective plane.
    ProjLine
);

impl ProjPoint {
    /// Affine point (x, y, 1).
    pub fn affine(x: f64, y: f64) -> ProjPoint {
        ProjPoint {
            coords: linalg::normalize(&[
                Complex64::new(x, 0.0),
                Complex64::new(y, 0.0),
                linalg::ONE,
            ])
            .expect("affine point is never zero"),
        }
    }

    /// Real affine coordinates, if the point is real and not at infinity.
    pub fn to_affine(&self) -> Option<(f64, f64)> {
        if !self.is_real() {
            return None;
        }
        let z = self.coords[2].re;
        if z.abs() < 1e-12 {
            return None;
        }
        Some((self.coords[0].re / z, self.coords[1].re / z))
    }

    /// Scaled incidence residual |pᵀl| with both operands normalized.
    pub fn incidence(&self, line: &ProjLine) -> f64 {
        linalg::dot(&self.coords, &line.coords).norm()
    }
}

/// p ∨ q, the line through two points.
pub fn join(p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine> {
    let l = linalg::cross(&p.coords, &q.coords);
    if linalg::norm(&l)
        <= Tolerances::DEFAULT.degeneracy * linalg::norm(&p.coords) * linalg::norm(&q.coords)
    {
        return Err(GeometryError::CoincidentElements(
            "join of coincident points".into(),
        ));
    }
    ProjLine::from_raw(l)
}

/// l ∧ m, the intersection point of two lines.
pub fn meet(l: &ProjLine, m: &ProjLine) -> Result<ProjPoint> {
    let p = linalg::cross(&l.coords, &m.coords);
    if linalg::norm(&p)
        <= Tolerances::DEFAULT.degeneracy * linalg::norm(&l.coords) * linalg::norm(&m.coords)
    {
        return Err(GeometryError::CoincidentElements(
            "meet of coincident lines".into(),
        ));
    }
    ProjPoint::from_raw(p)
}

/// Scaled 3×3 bracket [a, b, c] of three points (or three lines).
pub(crate) fn bracket3(a: &V3, b: &V3, c: &V3) -> Complex64 {
    linalg::det3(a, b, c)
}

/// |[a,b,c]| / (|a||b||c|); zero iff the three are collinear (or concurrent, for lines).
pub fn collinearity(a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> f64 {
    bracket3(&a.coords, &b.coords, &c.coords).norm()
        / (linalg::norm(&a.coords) * linalg::norm(&b.coords) * linalg::norm(&c.coords))
}

/// Concurrency measure of three lines, same scaling as [`collinearity`].
pub fn concurrency(a: &ProjLine, b: &ProjLine, c: &ProjLine) -> f64 {
    bracket3(&a.coords, &b.coords, &c.coords).norm()
        / (linalg::norm(&a.coords) * linalg::norm(&b.coords) * linalg::norm(&c.coords))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn join_of_basis_points() {
        let l = join(
            &ProjPoint::real(1., 0., 0.).unwrap(),
            &ProjPoint::real(0., 1., 0.).unwrap(),
        )
        .unwrap();
        assert!(l.approx_eq(&ProjLine::real(0., 0., 1.).unwrap(), 1e-15));
    }

    #[test]
    fn join_is_incident_with_both_points() {
        let p = ProjPoint::real(1., 0., 1.).unwrap();
        let q = ProjPoint::real(0., 1., 1.).unwrap();
        let l = join(&p, &q).unwrap();
        assert!(p.incidence(&l) < 1e-12 && q.incidence(&l) < 1e-12);
    }

    #[test]
    fn meet_of_basis_lines() {
        let p = meet(
            &ProjLine::real(0., 0., 1.).unwrap(),
            &ProjLine::real(0., 1., 0.).unwrap(),
        )
        .unwrap();
        assert!(p.approx_eq(&ProjPoint::real(1., 0., 0.).unwrap(), 1e-15));
    }

    #[test]
    fn meet_of_two_joins_recovers_common_point() {
        let p = ProjPoint::real(1., 2., 3.).unwrap();
        let q = ProjPoint::real(-1., 0.5, 1.).unwrap();
        let r = ProjPoint::real(4., -2., 1.).unwrap();
        let back = meet(&join(&p, &q).unwrap(), &join(&p, &r).unwrap()).unwrap();
        assert!(back.approx_eq(&p, 1e-14));
    }

    #[test]
    fn coincident_points_are_rejected() {
        let p = ProjPoint::real(1., 2., 3.).unwrap();
        let q = ProjPoint::real(2., 4., 6.).unwrap();
        assert!(matches!(
            join(&p, &q),
            Err(GeometryError::CoincidentElements(_))
        ));
        let l = ProjLine::real(1., 1., 1.).unwrap();
        assert!(matches!(
            meet(&l, &l),
            Err(GeometryError::CoincidentElements(_))
        ));
    }

    #[test]
    fn normalization_and_scale_invariant_equality() {
        let p = ProjPoint::real(2., -8., 4.).unwrap();
        assert_eq!(p.coords()[1], Complex64::new(1.0, 0.0));
        let q = ProjPoint::new([
            Complex64::new(0., 1.),
            Complex64::new(0., -4.),
            Complex64::new(0., 2.),
        ])
        .unwrap();
        assert!(p.approx_eq(&q, 1e-15));
        assert!(ProjPoint::real(0., 0., 0.).is_err());
        assert!(ProjPoint::real(f64::NAN, 0., 1.).is_err());
    }
}
