//! Small fixed-size complex linear algebra.

use num_complex::Complex64;
use num_traits::Zero;

pub(crate) type V3 = [Complex64; 3];
pub(crate) type M3 = [[Complex64; 3]; 3];

pub(crate) const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

pub(crate) fn cross(a: &V3, b: &V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Bilinear (non-conjugating) pairing, the incidence form pᵀl.
pub(crate) fn dot(a: &V3, b: &V3) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Hermitian inner product ⟨a, b⟩ = Σ aᵢ·conj(bᵢ).
pub(crate) fn hdot(a: &V3, b: &V3) -> Complex64 {
    a[0] * b[0].conj() + a[1] * b[1].conj() + a[2] * b[2].conj()
}

pub(crate) fn norm(a: &V3) -> f64 {
    (a[0].norm_sqr() + a[1].norm_sqr() + a[2].norm_sqr()).sqrt()
}

pub(crate) fn max_abs(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn all_finite(a: &[Complex64]) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub(crate) fn scale(a: &V3, s: Complex64) -> V3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub(crate) fn add(a: &V3, b: &V3) -> V3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn sub(a: &V3, b: &V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Divides by the largest-magnitude component. Returns `None` for the zero vector.
pub(crate) fn normalize<const N: usize>(a: &[Complex64; N]) -> Option<[Complex64; N]> {
    let mut best = 0;
    for i in 1..N {
        if a[i].norm() > a[best].norm() {
            best = i;
        }
    }
    let pivot = a[best];
    if pivot.is_zero() || !all_finite(a) {
        return None;
    }
    let mut out = *a;
    for (i, z) in out.iter_mut().enumerate() {
        *z = if i == best { ONE } else { *z / pivot };
    }
    Some(out)
}

/// Sine of the angle between two homogeneous vectors; zero iff proportional.
pub(crate) fn chordal(a: &V3, b: &V3) -> f64 {
    let d = norm(a) * norm(b);
    if d == 0.0 {
        return 1.0;
    }
    norm(&cross(a, b)) / d
}

pub(crate) fn det3(a: &V3, b: &V3, c: &V3) -> Complex64 {
    dot(a, &cross(b, c))
}

pub(crate) fn mat_vec(m: &M3, v: &V3) -> V3 {
    [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
}

pub(crate) fn transpose(m: &M3) -> M3 {
    let mut t = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = m[j][i];
        }
    }
    t
}

pub(crate) fn mat_mul(a: &M3, b: &M3) -> M3 {
    let mut c = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    c
}

pub(crate) fn mat_add(a: &M3, b: &M3, lambda: Complex64) -> M3 {
    let mut c = *a;
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] += lambda * b[i][j];
        }
    }
    c
}

pub(crate) fn det(m: &M3) -> Complex64 {
    det3(&m[0], &m[1], &m[2])
}

/// Adjugate; proportional to the inverse for non-singular matrices.
pub(crate) fn adjugate(m: &M3) -> M3 {
    let c0 = cross(&m[1], &m[2]);
    let c1 = cross(&m[2], &m[0]);
    let c2 = cross(&m[0], &m[1]);
    // columns of the adjugate are the cross products of row pairs
    [
        [c0[0], c1[0], c2[0]],
        [c0[1], c1[1], c2[1]],
        [c0[2], c1[2], c2[2]],
    ]
}

pub(crate) fn mat_max_abs(m: &M3) -> f64 {
    m.iter().map(|r| max_abs(r)).fold(0.0, f64::max)
}

pub(crate) fn quad_form(m: &M3, v: &V3) -> Complex64 {
    dot(v, &mat_vec(m, v))
}

pub(crate) fn bilinear_form(m: &M3, a: &V3, b: &V3) -> Complex64 {
    dot(a, &mat_vec(m, b))
}

/// Cross-product matrix M with M·v = p × v.
pub(crate) fn cross_matrix(p: &V3) -> M3 {
    [
        [ZERO, -p[2], p[1]],
        [p[2], ZERO, -p[0]],
        [-p[1], p[0], ZERO],
    ]
}

/// Determinant of a square complex matrix by partial-pivot elimination.
pub(crate) fn det_n(mut a: Vec<Vec<Complex64>>) -> Complex64 {
    let n = a.len();
    let mut d = ONE;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .unwrap_or(col);
        if a[piv][col].is_zero() {
            return ZERO;
        }
        if piv != col {
            a.swap(piv, col);
            d = -d;
        }
        d *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f.is_zero() {
                continue;
            }
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
        }
    }
    d
}

/// One-dimensional null space of a 5×6 system via signed maximal minors.
/// Returns the vector and the ratio of its norm to the product of row norms.
pub(crate) fn null_vector_5x6(rows: &[[Complex64; 6]; 5]) -> ([Complex64; 6], f64) {
    let mut v = [ZERO; 6];
    for (skip, out) in v.iter_mut().enumerate() {
        let minor: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != skip)
                    .map(|(_, z)| *z)
                    .collect()
            })
            .collect();
        let sign = if skip % 2 == 0 { 1.0 } else { -1.0 };
        *out = det_n(minor) * sign;
    }
    let row_scale: f64 = rows
        .iter()
        .map(|r| r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .product();
    let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let quality = if row_scale > 0.0 { vn / row_scale } else { 0.0 };
    (v, quality)
}
