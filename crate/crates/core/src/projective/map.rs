use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::conic::Conic;
use super::element::{collinearity, ProjLine, ProjPoint};
use crate::linalg::{self, M3};
use crate::{GeometryError, Result, Tolerances};

/// A projective transformation p ↦ Sp of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjMap {
    matrix: M3,
}

/// Objects a projective map can act on.
pub trait Transform: Sized {
    fn transform(&self, map: &ProjMap) -> Self;
}

impl ProjMap {
    pub fn new(m: [[Complex64; 3]; 3]) -> Result<ProjMap> {
        let flat: Vec<Complex64> = m.iter().flatten().copied().collect();
        if !linalg::all_finite(&flat) {
            return Err(GeometryError::NonFinite);
        }
        let scale = linalg::mat_max_abs(&m);
        if scale == 0.0 {
            return Err(GeometryError::DegenerateInput("zero matrix".into()));
        }
        let matrix = m.map(|r| r.map(|z| z / scale));
        if linalg::det(&matrix).norm() < Tolerances::DEFAULT.degeneracy {
            return Err(GeometryError::DegenerateInput(
                "singular projective map".into(),
            ));
        }
        Ok(ProjMap { matrix })
    }

    pub fn identity() -> ProjMap {
        let mut m = [[linalg::ZERO; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = linalg::ONE;
        }
        ProjMap { matrix: m }
    }

    pub fn matrix(&self) -> [[Complex64; 3]; 3] {
        self.matrix
    }

    pub fn inverse(&self) -> ProjMap {
        ProjMap::new(linalg::adjugate(&self.matrix))
            .expect("adjugate of a regular matrix is regular")
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &ProjMap) -> ProjMap {
        ProjMap::new(linalg::mat_mul(&self.matrix, &other.matrix))
            .expect("product of regular maps is regular")
    }

    pub fn apply<T: Transform>(&self, x: &T) -> T {
        x.transform(self)
    }

    /// (S⁻¹)ᵀ up to scale.
    fn cotransform(&self) -> M3 {
        linalg::transpose(&linalg::adjugate(&self.matrix))
    }
}

impl Transform for ProjPoint {
    fn transform(&self, map: &ProjMap) -> Self {
        ProjPoint::from_raw(linalg::mat_vec(&map.matrix, &self.coords()))
            .expect("regular map keeps points nonzero")
    }
}

impl Transform for ProjLine {
    fn transform(&self, map: &ProjMap) -> Self {
        ProjLine::from_raw(linalg::mat_vec(&map.cotransform(), &self.coords()))
            .expect("regular map keeps lines nonzero")
    }
}

impl Transform for Conic {
    fn transform(&self, map: &ProjMap) -> Self {
        let t = map.cotransform();
        let m = linalg::mat_mul(&linalg::mat_mul(&t, &self.matrix()), &linalg::transpose(&t));
        Conic::from_matrix(m).expect("regular map keeps conics nonzero")
    }
}

fn frame(pts: &[ProjPoint; 4], what: &str) -> Result<M3> {
    for skip in 0..4 {
        let tri: Vec<&ProjPoint> = (0..4).filter(|&i| i != skip).map(|i| &pts[i]).collect();
        if collinearity(tri[0], tri[1], tri[2]) < 1e-10 {
            return Err(GeometryError::DegenerateInput(format!(
                "{what} quadruple has a collinear triple"
            )));
        }
    }
    let cols = [pts[0].coords(), pts[1].coords(), pts[2].coords()];
    let basis = linalg::transpose(&cols);
    let inv = linalg::adjugate(&basis);
    let lambda = linalg::mat_vec(&inv, &pts[3].coords());
    let scaled = [0, 1, 2].map(|i| linalg::scale(&cols[i], lambda[i]));
    Ok(linalg::transpose(&scaled))
}

/// The unique projective map sending `src[i]` to `dst[i]`.
pub fn proj_map_from_4(src: &[ProjPoint; 4], dst: &[ProjPoint; 4]) -> Result<ProjMap> {
    let fs = frame(src, "source")?;
    let fd = frame(dst, "target")?;
    ProjMap::new(linalg::mat_mul(&fd, &linalg::adjugate(&fs)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::{conic_contains, join};

    fn pt(x: f64, y: f64, z: f64) -> ProjPoint {
        ProjPoint::real(x, y, z).unwrap()
    }

    fn standard() -> [ProjPoint; 4] {
        [
            pt(1., 0., 0.),
            pt(0., 1., 0.),
            pt(0., 0., 1.),
            pt(1., 1., 1.),
        ]
    }

    #[test]
    fn standard_frame_gives_identity() {
        let m = proj_map_from_4(&standard(), &standard()).unwrap();
        let id = ProjMap::identity();
        for i in 0..3 {
            for j in 0..3 {
                assert!((m.matrix()[i][j] - id.matrix()[i][j] * m.matrix()[0][0]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn frames_are_mapped() {
        let src = [
            pt(1., 2., 1.),
            pt(-1., 0.5, 1.),
            pt(3., -2., 1.),
            pt(0.2, 0.1, 1.),
        ];
        let dst = [
            pt(0., 1., 2.),
            pt(1., 1., -1.),
            pt(2., 0., 1.),
            pt(-1., 3., 1.),
        ];
        let m = proj_map_from_4(&src, &dst).unwrap();
        for (s, d) in src.iter().zip(dst.iter()) {
            assert!(m.apply(s).approx_eq(d, 1e-13));
        }
        let back = m.inverse().compose(&m);
        let p = pt(0.7, -0.3, 1.1);
        assert!(back.apply(&p).approx_eq(&p, 1e-13));
    }

    #[test]
    fn collinear_source_rejected() {
        let src = [
            pt(0., 0., 1.),
            pt(1., 1., 1.),
            pt(2., 2., 1.),
            pt(0., 1., 1.),
        ];
        assert!(matches!(
            proj_map_from_4(&src, &standard()),
            Err(GeometryError::DegenerateInput(_))
        ));
    }

    #[test]
    fn incidence_and_containment_preserved() {
        let m = proj_map_from_4(
            &standard(),
            &[
                pt(1., 2., 1.),
                pt(-1., 0.5, 1.),
                pt(3., -2., 1.),
                pt(0.2, 0.1, 1.),
            ],
        )
        .unwrap();
        let p = pt(0.6, 0.8, 1.);
        let q = pt(0., 1., 1.);
        let l = join(&p, &q).unwrap();
        assert!(m.apply(&p).incidence(&m.apply(&l)) < 1e-13);
        let c = Conic::circle(1.0);
        assert!(conic_contains(&m.apply(&c), &m.apply(&p)) < 1e-13);
    }
}
