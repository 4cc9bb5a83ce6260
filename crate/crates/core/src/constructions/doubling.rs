use serde::{Deserialize, Serialize};

use super::ConstructionTrace;
use crate::engine::{touch_point, PonceletScene};
use crate::linalg::{self, M3, V3};
use crate::projective::{
    conic_conic_intersect, conic_tangent_to_5, join, line_conic_intersect, meet, pencil_cubic,
    proj_map_from_4, rank2_quality, Conic, ProjLine, ProjMap, ProjPoint, Transform,
};
use crate::{poly, GeometryError, Result, Tolerances};

/// Output of the doubling construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Doubling {
    pub scene: PonceletScene,
    /// The map τ sending the inner conic's axis points to the outer conic's.
    pub tau: ProjMap,
    pub trace: ConstructionTrace,
}

const SEPARATION: f64 = 1e-6;

/// The Poncelet 2n-gon p₁, τ(q₁), p₂, τ(q₂), … from a closing n-gon with touch points qᵢ.
///
/// The common self-polar triangle O, X, Y of the two conics is read off the
/// complete quadrangle of their four intersections (or, when intersections
/// repeat, from the degenerate members of the pencil). On the axes x = OX and
/// y = OY, τ maps the inner conic's intersection points to the outer conic's.
/// The labelings of these correspondences are tried in a fixed order and the
/// first one giving a closing 2n-gon is returned.
pub fn doubling(scene: &PonceletScene) -> Result<Doubling> {
    let n = scene.n.unwrap_or(scene.vertices.len());
    if scene.vertices.len() != n || scene.touch_points.len() != n || n < 3 {
        return Err(GeometryError::DegenerateInput(
            "doubling needs a closed polygon with its touch points".into(),
        ));
    }
    let report = scene.closure(Tolerances::DEFAULT.incidence)?;
    if !report.closes {
        return Err(GeometryError::NotClosed {
            residual: report.residual_p.max(report.residual_q),
        });
    }
    let (a, b) = (scene.outer, scene.inner);
    let mut trace = ConstructionTrace::new();
    trace.add_conic("A", a);
    trace.add_conic("B", b);
    let frame = self_polar_frame(&a, &b, &mut trace)?;

    for center in 0..3 {
        let o = frame[center];
        let x = frame[(center + 1) % 3];
        let y = frame[(center + 2) % 3];
        let (Ok(xl), Ok(yl)) = (join(&o, &x), join(&o, &y)) else {
            continue;
        };
        let axes = (|| -> Result<_> {
            Ok((
                line_conic_intersect(&xl, &a)?,
                line_conic_intersect(&xl, &b)?,
                line_conic_intersect(&yl, &a)?,
                line_conic_intersect(&yl, &b)?,
            ))
        })();
        let Ok((ax, bx, ay, by)) = axes else { continue };
        if ax.tangential || bx.tangential || ay.tangential || by.tangential {
            continue;
        }
        for swap in 0..4 {
            let sx = swap & 1;
            let sy = (swap >> 1) & 1;
            let src = [bx.items[0], bx.items[1], by.items[0], by.items[1]];
            let dst = [
                ax.items[sx],
                ax.items[1 - sx],
                ay.items[sy],
                ay.items[1 - sy],
            ];
            let Ok(tau) = proj_map_from_4(&src, &dst) else {
                continue;
            };
            let Some(doubled) = doubled_scene(scene, &tau) else {
                continue;
            };

            let labels = ["O", "X", "Y"];
            trace.add_branch("O", center);
            trace.add_branch("tau", swap);
            trace.add_point("O*", o);
            trace.add_line("x", xl);
            trace.add_line("y", yl);
            trace.on_line("O*", "x");
            trace.on_line("O*", "y");
            trace.on_line(labels[(center + 1) % 3], "x");
            trace.on_line(labels[(center + 2) % 3], "y");
            let named = [
                ("ax1", &dst[0]),
                ("ax2", &dst[1]),
                ("bx1", &src[0]),
                ("bx2", &src[1]),
            ];
            let named_y = [
                ("ay1", &dst[2]),
                ("ay2", &dst[3]),
                ("by1", &src[2]),
                ("by2", &src[3]),
            ];
            for (label, p) in named {
                trace.add_point(label, *p);
                trace.on_line(label, "x");
                trace.on_conic(label, if label.starts_with('a') { "A" } else { "B" });
            }
            for (label, p) in named_y {
                trace.add_point(label, *p);
                trace.on_line(label, "y");
                trace.on_conic(label, if label.starts_with('a') { "A" } else { "B" });
            }
            trace.add_conic("B2", doubled.inner);
            for (i, v) in doubled.vertices.iter().enumerate() {
                let label = format!("v{}", i + 1);
                trace.add_point(label.as_str(), *v);
                trace.on_conic(&label, "A");
            }
            return Ok(Doubling {
                scene: doubled,
                tau,
                trace,
            });
        }
    }
    Err(GeometryError::NoValidLabeling)
}

/// Interleaves the vertices with the mapped touch points and checks that the
/// result is a closing Poncelet polygon.
fn doubled_scene(scene: &PonceletScene, tau: &ProjMap) -> Option<PonceletScene> {
    let n = scene.vertices.len();
    let mut vertices = Vec::with_capacity(2 * n);
    for (p, q) in scene.vertices.iter().zip(&scene.touch_points) {
        vertices.push(*p);
        vertices.push(q.transform(tau));
    }
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            if vertices[i].distance(&vertices[j]) <= SEPARATION {
                return None;
            }
        }
    }
    let m = vertices.len();
    let edges: Vec<ProjLine> = (0..m)
        .map(|i| join(&vertices[i], &vertices[(i + 1) % m]).ok())
        .collect::<Option<_>>()?;
    let five: [ProjLine; 5] = std::array::from_fn(|i| edges[i]);
    let inner = conic_tangent_to_5(&five).ok()?;
    let tol = Tolerances::DEFAULT.incidence;
    if edges.iter().any(|l| !(inner.tangency(l) <= tol)) {
        return None;
    }
    let touch_points = edges
        .iter()
        .map(|l| touch_point(&inner, l))
        .collect::<Result<_>>()
        .ok()?;
    let out = PonceletScene {
        outer: scene.outer,
        inner,
        vertices,
        touch_points,
        n: Some(m),
    };
    let report = out.closure(tol).ok()?;
    report.closes.then_some(out)
}

/// Vertices of the common self-polar triangle of two conics, recorded as O, X, Y.
fn self_polar_frame(a: &Conic, b: &Conic, trace: &mut ConstructionTrace) -> Result<[ProjPoint; 3]> {
    let hits = match conic_conic_intersect(a, b) {
        Err(GeometryError::ProportionalConics) => {
            return Err(GeometryError::DegeneratePencil(
                "the conics are proportional".into(),
            ))
        }
        Err(GeometryError::DegenerateConic) => {
            return Err(GeometryError::DegeneratePencil("degenerate conic".into()))
        }
        other => other.unwrap_or_default(),
    };
    let simple = hits.len() == 4 && hits.iter().all(|h| h.multiplicity == 1);
    if simple {
        let r: Vec<ProjPoint> = hits.iter().map(|h| h.point).collect();
        for (i, p) in r.iter().enumerate() {
            let label = format!("r{}", i + 1);
            trace.add_point(label.as_str(), *p);
            trace.on_conic(&label, "A");
            trace.on_conic(&label, "B");
        }
        let quadrangle = (|| -> Result<[ProjPoint; 3]> {
            for (i, j) in [(1, 2), (3, 4), (1, 3), (2, 4), (1, 4), (2, 3)] {
                trace.join(&format!("l{i}{j}"), &format!("r{i}"), &format!("r{j}"))?;
            }
            Ok([
                trace.meet("O", "l12", "l34")?,
                trace.meet("X", "l13", "l24")?,
                trace.meet("Y", "l14", "l23")?,
            ])
        })();
        if let Ok(frame) = quadrangle {
            return Ok(frame);
        }
    }
    let frame = pencil_frame(a, b)?;
    for (label, p) in ["O", "X", "Y"].iter().zip(&frame) {
        trace.add_point(*label, *p);
    }
    Ok(frame)
}

/// Singular point of a rank-2 member: the largest column of its adjugate.
fn kernel(d: &M3) -> Result<ProjPoint> {
    let adj = linalg::adjugate(d);
    let col = |j: usize| [adj[0][j], adj[1][j], adj[2][j]];
    let j = (0..3)
        .max_by(|&i, &k| linalg::norm(&col(i)).total_cmp(&linalg::norm(&col(k))))
        .unwrap_or(0);
    ProjPoint::new(col(j))
        .map_err(|_| GeometryError::DegeneratePencil("member has no singular point".into()))
}

/// Self-polar triangle from the degenerate members A + λB. A double line r in
/// the pencil (double contact) leaves the two vertices on r free up to
/// conjugacy; X is a point of r off A and Y the meet of r with its polar.
fn pencil_frame(a: &Conic, b: &Conic) -> Result<[ProjPoint; 3]> {
    let (am, bm) = (a.matrix(), b.matrix());
    let lambdas = poly::roots(&pencil_cubic(&am, &bm));
    if lambdas.len() != 3 {
        return Err(GeometryError::DegeneratePencil(
            "pencil cubic has no three roots".into(),
        ));
    }
    let members: Vec<M3> = lambdas
        .iter()
        .map(|&l| linalg::mat_add(&am, &bm, l))
        .collect();
    let quality: Vec<f64> = members.iter().map(rank2_quality).collect();
    let r = (0..3)
        .min_by(|&i, &j| quality[i].total_cmp(&quality[j]))
        .expect("three members");
    if quality[r] < 1e-5 {
        let d = &members[r];
        let row = (0..3)
            .max_by(|&i, &j| linalg::max_abs(&d[i]).total_cmp(&linalg::max_abs(&d[j])))
            .expect("rows");
        let line = ProjLine::new(d[row])
            .map_err(|_| GeometryError::DegeneratePencil("zero member".into()))?;
        let simple = (0..3)
            .max_by(|&i, &j| {
                (lambdas[i] - lambdas[r])
                    .norm()
                    .total_cmp(&(lambdas[j] - lambdas[r]).norm())
            })
            .expect("three roots");
        let o = kernel(&members[simple])?;
        let x = basis_point_off_conic(&line, &am)?;
        let polar = ProjLine::new(linalg::mat_vec(&am, &x.coords()))
            .map_err(|_| GeometryError::DegeneratePencil("polar vanishes".into()))?;
        let y = meet(&line, &polar)
            .map_err(|_| GeometryError::DegeneratePencil("polar coincides with r".into()))?;
        return Ok([o, x, y]);
    }
    let scale = lambdas.iter().map(|l| l.norm()).fold(1.0, f64::max);
    for i in 0..3 {
        for j in i + 1..3 {
            if (lambdas[i] - lambdas[j]).norm() <= SEPARATION * scale {
                return Err(GeometryError::DegeneratePencil(
                    "repeated pencil root without a double line".into(),
                ));
            }
        }
    }
    Ok([
        kernel(&members[0])?,
        kernel(&members[1])?,
        kernel(&members[2])?,
    ])
}

fn basis_point_off_conic(line: &ProjLine, m: &M3) -> Result<ProjPoint> {
    let l = line.coords();
    let k = (0..3)
        .max_by(|&i, &j| l[i].norm().total_cmp(&l[j].norm()))
        .unwrap_or(0);
    let mut best: Option<(f64, V3)> = None;
    for i in (0..3).filter(|&i| i != k) {
        let mut e = [linalg::ZERO; 3];
        e[i] = linalg::ONE;
        let p = linalg::cross(&l, &e);
        let v = linalg::quad_form(m, &p).norm() / linalg::norm(&p).powi(2).max(1e-300);
        if best.is_none_or(|(b, _)| v > b) {
            best = Some((v, p));
        }
    }
    let (v, p) = best.expect("two basis points");
    if v <= Tolerances::DEFAULT.degeneracy {
        return Err(GeometryError::DegeneratePencil(
            "double line lies on the conic".into(),
        ));
    }
    ProjPoint::new(p).map_err(|_| GeometryError::DegeneratePencil("zero basis point".into()))
}
