//! Univariate polynomials.
//!
//! Exact polynomials over a field ([`Poly`]) back the closure-polynomial
//! computation; [`roots`] is a floating-point simultaneous root finder
//! (Aberth–Ehrlich iteration followed by Newton polishing).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Field of exact coefficients.
pub trait ExactField:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn to_gaussian(&self) -> GaussianRational;

    fn to_complex(&self) -> Complex64 {
        self.to_gaussian().to_complex()
    }
}

impl ExactField for BigRational {
    fn to_gaussian(&self) -> GaussianRational {
        GaussianRational::new(self.clone(), BigRational::zero())
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Element of ℚ(i).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    /// Exact conversion; every finite double is a dyadic rational.
    pub fn from_complex(z: Complex64) -> Option<Self> {
        Some(GaussianRational {
            re: BigRational::from_float(z.re)?,
            im: BigRational::from_float(z.im)?,
        })
    }

    pub fn from_integer(n: i64) -> Self {
        GaussianRational::new(
            BigRational::from_integer(BigInt::from(n)),
            BigRational::zero(),
        )
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Rounds both parts to the grid 2^-bits.
    pub fn round_dyadic(&self, bits: u32) -> Self {
        GaussianRational::new(round_dyadic(&self.re, bits), round_dyadic(&self.im, bits))
    }
}

fn round_dyadic(q: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = q * BigRational::from_integer(scale.clone());
    BigRational::new(scaled.round().to_integer(), scale)
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational::new(BigRational::one(), BigRational::zero())
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        GaussianRational::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        GaussianRational::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussianRational::new(self.re * o.re, BigRational::zero());
        }
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Div for GaussianRational {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussianRational::new(self.re / o.re, BigRational::zero());
        }
        let d = o.norm_sqr();
        let n = self * o.conj();
        GaussianRational::new(n.re / d.clone(), n.im / d)
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl ExactField for GaussianRational {
    fn to_gaussian(&self) -> GaussianRational {
        self.clone()
    }
}

/// Dense polynomial, coefficients from constant term upwards, no trailing zeros.
#[derive(Clone, PartialEq)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: ExactField> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl<F: ExactField> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Poly::new(vec![c])
    }

    /// The identity polynomial x.
    pub fn x() -> Self {
        Poly::new(vec![F::zero(), F::one()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn scale(&self, s: &F) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) if !l.is_one() => {
                let inv = F::one() / l.clone();
                self.scale(&inv)
            }
            _ => self.clone(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(F::zero);
            let b = o.coeffs.get(i).cloned().unwrap_or_else(F::zero);
            out.push(a + b);
        }
        Poly::new(out)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a.clone() * b.clone();
                let slot = std::mem::replace(&mut out[i + j], F::zero());
                out[i + j] = slot + prod;
            }
        }
        Poly::new(out)
    }

    /// Euclidean division; panics on division by the zero polynomial.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dl = d.leading().expect("division by zero polynomial").clone();
        let dd = d.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() / dl.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let v = std::mem::replace(&mut rem[k + j], F::zero());
                rem[k + j] = v - c.clone() * dc.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.monic(), o.monic());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let mut out = Vec::new();
        let mut k = F::zero();
        for c in self.coeffs.iter() {
            out.push(k.clone() * c.clone());
            k = k + F::one();
        }
        if !out.is_empty() {
            out.remove(0);
        }
        Poly::new(out)
    }

    /// Product of the distinct irreducible factors.
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn eval_gaussian(&self, x: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.to_gaussian();
        }
        acc
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.to_complex()).collect()
    }

    /// All complex roots of the polynomial, by the floating-point solver.
    pub fn complex_roots(&self) -> Vec<Complex64> {
        roots(&self.to_complex())
    }

    /// Newton iteration in exact arithmetic, rounding iterates to 2^-bits.
    pub fn refine_root(&self, start: Complex64, bits: u32) -> GaussianRational {
        let d = self.derivative();
        let mut z = match GaussianRational::from_complex(start) {
            Some(z) => z,
            None => return GaussianRational::zero(),
        };
        let tiny = 2f64.powi(-(bits as i32 - 8));
        for _ in 0..40 {
            let fz = self.eval_gaussian(&z);
            if fz.is_zero() {
                break;
            }
            let dz = d.eval_gaussian(&z);
            if dz.is_zero() {
                break;
            }
            let step = fz / dz;
            let size = step.to_complex().norm();
            z = (z - step).round_dyadic(bits);
            if !(size > tiny * (1.0 + z.to_complex().norm())) {
                break;
            }
        }
        z
    }
}

impl Poly<BigRational> {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    /// Scales to a primitive integer polynomial with positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        use num_integer::Integer;
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return ints;
        }
        let sign = if ints.last().is_some_and(|l| l.is_negative()) {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Roots of Σ cₖ zᵏ (constant term first), with multiplicity.
pub fn roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|z| z.is_zero()) {
        c.pop();
    }
    let mut out = Vec::new();
    while c.len() > 1 && c[0].is_zero() {
        out.push(Complex64::zero());
        c.remove(0);
    }
    let deg = match c.len() {
        0 | 1 => return out,
        n => n - 1,
    };
    let lead = c[deg];
    let monic: Vec<Complex64> = c.iter().map(|z| z / lead).collect();
    if deg == 1 {
        out.push(-monic[0]);
        return out;
    }
    if deg == 2 {
        let (b, cc) = (monic[1], monic[0]);
        let disc = (b * b - 4.0 * cc).sqrt();
        let q = if (-b + disc).norm() >= (-b - disc).norm() {
            -b + disc
        } else {
            -b - disc
        };
        let r1 = q / 2.0;
        let r2 = if r1.is_zero() {
            Complex64::zero()
        } else {
            cc / r1
        };
        out.push(r1);
        out.push(r2);
        return out;
    }

    // Cauchy-type bound on root moduli.
    let radius = 1.0 + monic[..deg].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let geometric = monic[0].norm().powf(1.0 / deg as f64).max(1e-3).min(radius);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / deg as f64 + 0.4;
            Complex64::from_polar(geometric, theta)
        })
        .collect();

    for _ in 0..2000 {
        let mut max_step: f64 = 0.0;
        for i in 0..deg {
            let (p, dp) = horner(&monic, z[i]);
            if p.is_zero() {
                continue;
            }
            let ratio = p / dp;
            let mut sum = Complex64::zero();
            for j in 0..deg {
                if j != i {
                    let diff = z[i] - z[j];
                    if !diff.is_zero() {
                        sum += diff.inv();
                    }
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-16 {
            break;
        }
    }

    for r in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(&monic, *r);
            if dp.is_zero() {
                break;
            }
            let cand = *r - p / dp;
            if horner(&monic, cand).0.norm() < p.norm() {
                *r = cand;
            } else {
                break;
            }
        }
    }
    out.extend(z);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn gcd_extracts_common_factor() {
        // (x-4)(x+1) and (x-4)(x-2)
        let a = Poly::from_i64(&[-4, -3, 1]);
        let b = Poly::from_i64(&[8, -6, 1]);
        assert_eq!(a.gcd(&b), Poly::from_i64(&[-4, 1]));
    }

    #[test]
    fn squarefree_removes_repeated_factor() {
        // (x-1)^2 (x+2)
        let p = Poly::from_i64(&[1, -2, 1]).mul(&Poly::from_i64(&[2, 1]));
        assert_eq!(
            p.squarefree(),
            Poly::from_i64(&[-1, 1]).mul(&Poly::from_i64(&[2, 1]))
        );
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = Poly::from_i64(&[3, 0, -2, 5, 1]);
        let b = Poly::from_i64(&[1, 2, 3]);
        let (quo, rem) = a.div_rem(&b);
        assert_eq!(quo.mul(&b).add(&rem), a);
        assert!(rem.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn roots_of_known_cubic() {
        // (x-1)(x-2)(x+3)
        let c: Vec<Complex64> = [6.0, -7.0, 0.0, 1.0]
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        let mut r: Vec<f64> = roots(&c).iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        for (got, want) in r.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn roots_with_complex_coefficients() {
        let want = [
            Complex64::new(1.0, 1.0),
            Complex64::new(-2.0, 0.5),
            Complex64::new(0.0, -3.0),
            Complex64::new(4.0, 0.0),
        ];
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for w in want {
            let mut next = vec![Complex64::zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * w;
            }
            coeffs = next;
        }
        let got = roots(&coeffs);
        for w in want {
            assert!(
                got.iter().any(|g| (g - w).norm() < 1e-10),
                "missing root {w}"
            );
        }
    }

    #[test]
    fn exact_refinement_reaches_high_accuracy() {
        // x^2 - 2
        let p = Poly::from_i64(&[-2, 0, 1]);
        let r = p.refine_root(Complex64::new(1.4, 0.0), 200);
        let err = p.eval_gaussian(&r).to_complex().norm();
        assert!(err < 1e-50, "{err}");
    }

    #[test]
    fn primitive_integer_form() {
        let p = Poly::new(vec![q(-2496), q(3132), q(-1023), q(99)])
            .scale(&BigRational::new(BigInt::from(-1), BigInt::from(3)));
        let ints: Vec<i64> = p
            .primitive_integer()
            .iter()
            .map(|b| b.to_i64().unwrap())
            .collect();
        assert_eq!(ints, vec![-832, 1044, -341, 33]);
    }

    #[test]
    fn gaussian_division_roundtrip() {
        let a = GaussianRational::from_complex(Complex64::new(1.5, -2.0)).unwrap();
        let b = GaussianRational::from_complex(Complex64::new(0.25, 3.0)).unwrap();
        assert_eq!((a.clone() / b.clone()) * b, a);
    }
}
