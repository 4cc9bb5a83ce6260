//! Closure polynomial of a Poncelet chain on the projective line.
//!
//! Points 1..5 are fixed exact constants and point 6 is (x, 1). Iterating the
//! linear next-point rule gives every later point as a pair of polynomials in
//! x; common factors are divided out at each step. The chain closes with
//! period n when p_{n+1} = p₁ and p_{n+2} = p₂, so the closing positions are
//! the roots of gcd(f, g) with f = [p_{n+1}, p₁] and g = [p_{n+2}, p₂].
//! Roots of f that are not roots of g close only once (spurious).

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ClosureReport;
use crate::poly::{GaussianRational, Poly};
use crate::rp1::RP1Point;
use crate::{GeometryError, Result};

type G = GaussianRational;

/// Exact homogeneous coordinates of a point of the line.
pub type ExactPoint = [GaussianRational; 2];

/// Working precision, in bits, of the exact Newton polish of closure roots.
const POLISH_BITS: u32 = 200;

pub fn exact_affine(x: BigRational) -> ExactPoint {
    [G::new(x, BigRational::zero()), G::one()]
}

/// Exact copy of the stored double-precision coordinates.
pub fn exact_point(p: &RP1Point) -> Result<ExactPoint> {
    let [a, b] = p.coords();
    Ok([
        G::from_complex(a).ok_or(GeometryError::NonFinite)?,
        G::from_complex(b).ok_or(GeometryError::NonFinite)?,
    ])
}

type PolyPoint = [Poly<G>; 2];

fn bracket(a: &PolyPoint, b: &PolyPoint) -> Poly<G> {
    a[0].mul(&b[1]).sub(&a[1].mul(&b[0]))
}

fn reduce(p: PolyPoint) -> PolyPoint {
    let g = p[0].gcd(&p[1]);
    let (mut a, mut b) = if g.degree().unwrap_or(0) > 0 {
        (p[0].div_rem(&g).0, p[1].div_rem(&g).0)
    } else {
        (p[0].clone(), p[1].clone())
    };
    let lead = if a.degree() >= b.degree() {
        a.leading().cloned()
    } else {
        b.leading().cloned()
    };
    if let Some(l) = lead {
        let inv = G::one() / l;
        a = a.scale(&inv);
        b = b.scale(&inv);
    }
    [a, b]
}

fn next(p: &[PolyPoint]) -> PolyPoint {
    let b = |i: usize, j: usize| bracket(&p[i - 1], &p[j - 1]);
    let c4 = b(1, 6).mul(&b(5, 4)).mul(&b(3, 2));
    let c2 = b(1, 4).mul(&b(5, 6)).mul(&b(3, 4));
    reduce([
        c4.mul(&p[3][0]).sub(&c2.mul(&p[1][0])),
        c4.mul(&p[3][1]).sub(&c2.mul(&p[1][1])),
    ])
}

/// The chain as polynomial pairs together with its closure polynomials.
#[derive(Debug, Clone)]
pub struct ClosurePolynomial {
    pub n: usize,
    chain: Vec<PolyPoint>,
    /// First-wrap condition [p_{n+1}, p₁].
    pub f: Poly<G>,
    /// Second-wrap condition [p_{n+2}, p₂].
    pub g: Poly<G>,
    /// Squarefree part of gcd(f, g): the genuine closing positions.
    pub accepted: Poly<G>,
    /// Squarefree part of the remaining roots of f.
    pub rejected: Poly<G>,
}

impl ClosurePolynomial {
    pub fn count(&self) -> usize {
        self.accepted.degree().unwrap_or(0)
    }

    /// Exact chain point k (1-based) at parameter x.
    pub fn point_at(&self, k: usize, x: &G) -> ExactPoint {
        let p = &self.chain[k - 1];
        [p[0].eval_gaussian(x), p[1].eval_gaussian(x)]
    }

    /// Closure residuals at x, evaluated exactly and rounded at the end.
    pub fn report_at(&self, x: &G, tol: f64) -> ClosureReport {
        let n = self.n;
        let d = |a: usize, b: usize| exact_distance(&self.point_at(a, x), &self.point_at(b, x));
        ClosureReport::new(n, d(n + 1, 1), d(n + 2, 2), tol)
    }

    /// Polynomial degrees of the chain points 1..n+2 in x.
    pub fn degrees(&self) -> Vec<usize> {
        self.chain
            .iter()
            .map(|p| p[0].degree().max(p[1].degree()).unwrap_or(0))
            .collect()
    }
}

fn exact_distance(a: &ExactPoint, b: &ExactPoint) -> f64 {
    let br = (a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone())
        .to_complex()
        .norm();
    let n = |p: &ExactPoint| (p[0].to_complex().norm_sqr() + p[1].to_complex().norm_sqr()).sqrt();
    let den = n(a) * n(b);
    if den == 0.0 {
        return f64::INFINITY;
    }
    br / den
}

fn distinct(points: &[ExactPoint]) -> bool {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let a = &points[i];
            let b = &points[j];
            if (a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone()).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Closure polynomial for period `n` ≥ 6 with point 6 = (x, 1).
pub fn closure_polynomial(p: &[ExactPoint; 5], n: usize) -> Result<ClosurePolynomial> {
    if n < 6 {
        return Err(GeometryError::DegenerateInput(
            "closure polynomial needs n >= 6".into(),
        ));
    }
    if p.iter().any(|q| q[0].is_zero() && q[1].is_zero()) {
        return Err(GeometryError::DegenerateInput("zero point".into()));
    }
    if !distinct(p) {
        return Err(GeometryError::DegenerateInput(
            "input points are not distinct".into(),
        ));
    }
    let mut chain: Vec<PolyPoint> = p
        .iter()
        .map(|q| [Poly::constant(q[0].clone()), Poly::constant(q[1].clone())])
        .collect();
    chain.push([Poly::x(), Poly::constant(G::one())]);
    while chain.len() < n + 2 {
        let k = chain.len();
        let q = next(&chain[k - 6..]);
        if q[0].is_zero() && q[1].is_zero() {
            return Err(GeometryError::DegenerateInput(
                "chain collapses identically".into(),
            ));
        }
        chain.push(q);
    }
    let f = bracket(&chain[n], &chain[0]);
    let g = bracket(&chain[n + 1], &chain[1]);
    if f.is_zero() || g.is_zero() {
        return Err(GeometryError::DegenerateInput(
            "closure condition vanishes identically".into(),
        ));
    }
    let accepted = f.gcd(&g).squarefree();
    let sf = f.squarefree();
    let rejected = sf.div_rem(&sf.gcd(&accepted)).0.monic();
    Ok(ClosurePolynomial {
        n,
        chain,
        f,
        g,
        accepted,
        rejected,
    })
}

/// Closure polynomial from double-precision points (converted exactly).
pub fn closure_polynomial_rp1(p: &[RP1Point; 5], n: usize) -> Result<ClosurePolynomial> {
    let mut e: Vec<ExactPoint> = Vec::with_capacity(5);
    for q in p {
        e.push(exact_point(q)?);
    }
    closure_polynomial(&e.try_into().expect("five points"), n)
}

/// A root x₆ of the closure polynomial with its exact-arithmetic closure report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClosureRoot {
    pub x6: Complex64,
    pub report: ClosureReport,
}

#[derive(Debug, Clone)]
pub struct ClosureSolutions {
    pub polynomial: ClosurePolynomial,
    pub accepted: Vec<ClosureRoot>,
    pub rejected: Vec<ClosureRoot>,
}

fn polished_roots(p: &Poly<G>) -> Vec<G> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    p.complex_roots()
        .into_iter()
        .map(|z| p.refine_root(z, POLISH_BITS))
        .collect()
}

/// Closure polynomial, its roots and the two-wrap verdict on each root.
pub fn solve_closure(p: &[ExactPoint; 5], n: usize, tol: f64) -> Result<ClosureSolutions> {
    let polynomial = closure_polynomial(p, n)?;
    let roots = |q: &Poly<G>| -> Vec<ClosureRoot> {
        polished_roots(q)
            .into_iter()
            .map(|x| ClosureRoot {
                x6: x.to_complex(),
                report: polynomial.report_at(&x, tol),
            })
            .collect()
    };
    let accepted = roots(&polynomial.accepted);
    let rejected = roots(&polynomial.rejected);
    Ok(ClosureSolutions {
        polynomial,
        accepted,
        rejected,
    })
}

/// Number of positions of point 6 for which the chain closes with period n
/// (periods dividing n included), for generic inputs.
pub fn count_solutions(p: &[ExactPoint; 5], n: usize) -> Result<usize> {
    Ok(closure_polynomial(p, n)?.count())
}

/// Random small rational, numerator in [-30, 30], denominator in [1, 7].
fn random_rational<R: Rng>(rng: &mut R) -> BigRational {
    BigRational::new(
        BigInt::from(rng.gen_range(-30i64..=30)),
        BigInt::from(rng.gen_range(1i64..=7)),
    )
}

/// Counts solutions for random rational inputs, resampling degenerate draws.
/// Returns the count and the inputs used.
pub fn count_solutions_random<R: Rng>(
    n: usize,
    rng: &mut R,
    retries: usize,
) -> Result<(usize, [BigRational; 5])> {
    let mut last = GeometryError::DegenerateInput("no attempts".into());
    for _ in 0..retries.max(1) {
        let xs: [BigRational; 5] = std::array::from_fn(|_| random_rational(rng));
        let pts = xs.clone().map(exact_affine);
        match closure_polynomial(&pts, n) {
            Ok(cp) => {
                // a repeated root of gcd(f, g) or a shared root of f and the
                // chain's degeneracy locus signals a non-generic draw
                if cp.f.gcd(&cp.g).degree() == cp.accepted.degree() {
                    return Ok((cp.count(), xs));
                }
                last = GeometryError::DegenerateInput("non-generic input".into());
            }
            Err(e) => last = e,
        }
    }
    Err(last)
}
