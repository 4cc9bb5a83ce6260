//! Join/meet constructions of Poncelet polygons.
//!
//! Every construction records its intermediate points, lines and conics in a
//! [`ConstructionTrace`] together with the incidences each step asserts, so a
//! result can be audited by [`ConstructionTrace::replay`]. Two-valued choices
//! (which intersection of a line with a conic) are explicit `branch`
//! parameters and are recorded in the trace.

mod chain;
mod doubling;
mod heptagon;
mod ninegon;
mod octagon;
mod trace;

pub use chain::{
    butterfly_check, butterfly_complete, chain_iterate_joinmeet, chain_point7_joinmeet, ChainRun,
};
pub use doubling::{doubling, Doubling};
pub use heptagon::{
    complete_heptagon, complete_hexagon_p6, construct_heptagon_p6, heptagon_certificates,
};
pub use ninegon::construct_ninegon_p4;
pub use octagon::{
    complete_octagon, construct_octagon_p7, octagon_certificates, OctagonCompletion,
};
pub use trace::{Branch, ConstructionTrace, Element, Incidence, ReplayReport};

use num_complex::Complex64;

use crate::projective::{Conic, ProjPoint};
use crate::rp1::{RP1Point, StereoChart};
use crate::{GeometryError, Result};

/// Chart of `conic` whose center avoids the given points.
fn chart(conic: &Conic, points: &[ProjPoint]) -> Result<StereoChart> {
    StereoChart::for_conic_avoiding(conic, points)
}

fn project<const N: usize>(chart: &StereoChart, points: &[ProjPoint; N]) -> Result<[RP1Point; N]> {
    chart.project_all(points)
}

fn digit_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

/// Largest relative move the final polish may make before the construction is
/// considered wrong rather than merely rounded.
const POLISH_LIMIT: f64 = 1e-6;

/// Secant refinement of a constructed conic point on the defining bracket
/// equation `f` of its chart coordinate. The join/meet result is the starting
/// value; the polish only removes the rounding of the construction steps.
fn polish_on_chart(
    trace: &mut ConstructionTrace,
    label: &str,
    chart: &StereoChart,
    p: &ProjPoint,
    f: impl Fn(RP1Point) -> Result<Complex64>,
) -> Result<ProjPoint> {
    let Some(x0) = chart.project_unchecked(p)?.value() else {
        trace.polish.push((label.into(), 0.0));
        return Ok(*p);
    };
    let raw = |x: Complex64| f(RP1Point::from_value(x));
    let scale = 1.0 + x0.norm();
    let (mut a, mut b) = (x0, x0 + Complex64::new(1e-7 * scale, 0.0));
    let (mut fa, mut fb) = (raw(a)?, raw(b)?);
    let mut best = (fa.norm(), x0);
    for _ in 0..60 {
        let den = fb - fa;
        if den.norm() == 0.0 || fb.norm() == 0.0 {
            break;
        }
        let c = b - fb * (b - a) / den;
        if !(c.re.is_finite() && c.im.is_finite()) {
            break;
        }
        a = b;
        fa = fb;
        b = c;
        fb = raw(b)?;
        if fb.norm() < best.0 {
            best = (fb.norm(), b);
        }
        if (b - a).norm() <= 1e-17 * scale {
            break;
        }
    }
    let shift = (best.1 - x0).norm() / scale;
    trace.polish.push((label.into(), shift));
    if shift > POLISH_LIMIT {
        return Err(GeometryError::step(format!(
            "{label}: polish moved the point by {shift:.1e}"
        )));
    }
    Ok(chart.lift(&RP1Point::from_value(best.1)))
}
