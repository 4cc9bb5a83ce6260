use std::collections::BTreeMap;

use poncelet_core::configurations::{
    color_report, config_from_chain_trace, grunbaum_rigby, verify_n4, ColorReport, N4Report,
    PointRing, DEFAULT_INCIDENCE_TOL,
};
use poncelet_core::constructions::{
    chain_iterate_joinmeet, complete_heptagon, complete_hexagon_p6, complete_octagon,
    construct_heptagon_p6, construct_ninegon_p4, construct_octagon_p7, doubling, ConstructionTrace,
};
use poncelet_core::engine::{
    algebraic_chain, chain_step, closed_scene_from_rp1, closure_test_rp1, count_solutions_random,
    exact_affine, exact_point, solve_closure, touch_point, ChainState, ClosureRoot, PonceletScene,
};
use poncelet_core::projective::{
    concurrency, conic_tangent_to_5, join, Conic, ProjLine, ProjPoint,
};
use poncelet_core::rp1::{
    heptagon6_residual, ninegon_residual, octagon_point7_residual, RP1Point, StereoChart,
};
use poncelet_core::sample::{
    closing_polygons_rp1, closing_scene, min_separation, real_conic, separated_values,
    WELL_SEPARATED,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::RunConfig;
use crate::document::{Check, ConfigurationDoc, SceneDocument, TraceDoc};
use crate::error::{CliError, CliResult};

/// What `construct` builds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Hexagon,
    Heptagon,
    Octagon,
    Ninegon,
    Double,
    Chain,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Hexagon => "hexagon",
            Kind::Heptagon => "heptagon",
            Kind::Octagon => "octagon",
            Kind::Ninegon => "ninegon",
            Kind::Double => "doubled",
            Kind::Chain => "chain",
        }
    }

    pub fn arg(self) -> &'static str {
        match self {
            Kind::Hexagon => "6",
            Kind::Heptagon => "7",
            Kind::Octagon => "8",
            Kind::Ninegon => "9",
            Kind::Double => "double",
            Kind::Chain => "chain",
        }
    }
}

/// Random draws tried before giving up on a well-conditioned instance.
const MAX_DRAWS: usize = 100;
const COUNT_RETRIES: usize = 20;

pub fn rng_for(cfg: &RunConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed)
}

/// Five conic points: from `--x` on the unit circle chart, or random.
fn draw_inputs(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> CliResult<(StereoChart, [ProjPoint; 5])> {
    if let Some(x) = cfg.need_x(5)? {
        let chart = StereoChart::standard();
        return Ok((
            chart,
            std::array::from_fn(|i| chart.lift(&RP1Point::affine(x[i]))),
        ));
    }
    let conic = real_conic(rng);
    let chart = StereoChart::for_real_conic(&conic)?;
    let xs = separated_values(rng, 5, 2.5, 0.3);
    Ok((
        chart,
        std::array::from_fn(|i| chart.lift(&RP1Point::affine(xs[i]))),
    ))
}

fn project(chart: &StereoChart, points: &[ProjPoint]) -> CliResult<Vec<RP1Point>> {
    Ok(points
        .iter()
        .map(|p| chart.project_unchecked(p))
        .collect::<Result<_, _>>()?)
}

/// Closed polygon on `outer` whose inner conic is fitted to the first five edges.
pub fn closed_scene(outer: Conic, vertices: Vec<ProjPoint>) -> CliResult<PonceletScene> {
    let n = vertices.len();
    let edges = (0..n)
        .map(|i| join(&vertices[i], &vertices[(i + 1) % n]))
        .collect::<Result<Vec<_>, _>>()?;
    let five: [ProjLine; 5] = edges[..5].try_into().expect("at least five edges");
    let inner = conic_tangent_to_5(&five)?;
    let touch_points = edges
        .iter()
        .map(|l| touch_point(&inner, l))
        .collect::<Result<_, _>>()?;
    Ok(PonceletScene {
        outer,
        inner,
        vertices,
        touch_points,
        n: Some(n),
    })
}

struct Built {
    scene: PonceletScene,
    points: Vec<(String, ProjPoint)>,
    traces: Vec<(String, ConstructionTrace)>,
    configuration: Option<ConfigurationDoc>,
}

impl Built {
    fn polygon(scene: PonceletScene) -> Built {
        Built {
            scene,
            points: Vec::new(),
            traces: Vec::new(),
            configuration: None,
        }
    }

    fn separation(&self) -> CliResult<f64> {
        let chart = StereoChart::for_conic_avoiding(&self.scene.outer, &self.scene.vertices)?;
        Ok(min_separation(&project(&chart, &self.scene.vertices)?))
    }
}

fn build_from_five(
    kind: Kind,
    chart: &StereoChart,
    p: &[ProjPoint; 5],
    cfg: &RunConfig,
) -> CliResult<Built> {
    let outer = *chart.conic();
    if matches!(kind, Kind::Heptagon | Kind::Octagon) && cfg.branch > 1 {
        return Err(CliError::Input(format!(
            "--branch must be 0 or 1, got {}",
            cfg.branch
        )));
    }
    match kind {
        Kind::Hexagon => {
            let p6 = complete_hexagon_p6(p)?;
            Ok(Built::polygon(closed_scene(
                outer,
                vec![p[0], p[1], p[2], p[3], p[4], p6],
            )?))
        }
        Kind::Heptagon => {
            let (p6, trace) = construct_heptagon_p6(p, cfg.branch)?;
            let six = [p[0], p[1], p[2], p[3], p[4], p6];
            let p7 = complete_heptagon(&six)?;
            let mut vertices = six.to_vec();
            vertices.push(p7);
            let mut built = Built::polygon(closed_scene(outer, vertices)?);
            built.traces.push(("construction".into(), trace));
            Ok(built)
        }
        Kind::Octagon => {
            let (p7, trace) = construct_octagon_p7(p, cfg.branch)?;
            let done = complete_octagon(p, &p7)?;
            let vertices = vec![p[0], p[1], p[2], p[3], p[4], done.p6, p7, done.p8];
            let mut built = Built::polygon(closed_scene(outer, vertices)?);
            built.points.push(("O".into(), done.center));
            built.traces.push(("construction".into(), trace));
            built.traces.push(("completion".into(), done.trace));
            Ok(built)
        }
        Kind::Ninegon => {
            let (candidates, trace) = construct_ninegon_p4(p)?;
            let Some(&p4) = candidates.get(cfg.branch) else {
                return Err(CliError::Input(format!(
                    "--branch {} out of range; the 9-gon construction has {} candidates",
                    cfg.branch,
                    candidates.len()
                )));
            };
            let six = [p[0], p[1], p[2], p4, p[3], p[4]];
            let x: [RP1Point; 6] = project(chart, &six)?.try_into().expect("six points");
            let chain = algebraic_chain(&x, 3)?;
            let mut vertices = six.to_vec();
            vertices.extend(chain[6..].iter().map(|y| chart.lift(y)));
            let mut built = Built::polygon(closed_scene(outer, vertices)?);
            for (i, c) in candidates.iter().enumerate() {
                built.points.push((format!("4_{}", i + 1), *c));
            }
            built.traces.push(("construction".into(), trace));
            Ok(built)
        }
        Kind::Double | Kind::Chain => unreachable!("not built from five points"),
    }
}

fn build(kind: Kind, cfg: &RunConfig) -> CliResult<Built> {
    let mut rng = rng_for(cfg);
    match kind {
        Kind::Double => {
            let scene = match &cfg.input {
                Some(path) => {
                    let doc = SceneDocument::read(path)?;
                    if doc.n.is_none() {
                        return Err(CliError::Input(
                            "doubling needs a closed polygon (field `n`)".into(),
                        ));
                    }
                    let scene = doc.scene()?;
                    let r = scene.residuals()?;
                    if r.max() > DEFAULT_INCIDENCE_TOL {
                        return Err(CliError::Input(format!(
                            "input is not a Poncelet polygon: vertex residual {:e}, edge tangency {:e}",
                            r.vertex_on_outer, r.edge_tangency
                        )));
                    }
                    scene
                }
                None => closing_scene(&mut rng, cfg.n.unwrap_or(5))?,
            };
            let d = doubling(&scene)?;
            let mut built = Built::polygon(d.scene);
            built.traces.push(("doubling".into(), d.trace));
            Ok(built)
        }
        Kind::Chain => {
            let n = cfg.n.unwrap_or(7);
            let steps = cfg.steps.unwrap_or(n).max(n);
            let chart = StereoChart::standard();
            let poly = (0..MAX_DRAWS)
                .find_map(|_| {
                    closing_polygons_rp1(&mut rng, n)
                        .ok()
                        .and_then(|v| v.into_iter().next())
                })
                .ok_or_else(|| {
                    CliError::Numeric(format!("no closing {n}-gon found in {MAX_DRAWS} draws"))
                })?;
            let scene = closed_scene_from_rp1(&chart, &poly)?;
            let first6: [RP1Point; 6] = std::array::from_fn(|i| poly[i]);
            let run = chain_iterate_joinmeet(&chart.lift_all(&first6), Some(chart.conic()), steps)?;
            let config = config_from_chain_trace(&run.trace, n, DEFAULT_INCIDENCE_TOL)?;
            let mut built = Built::polygon(scene);
            built.traces.push(("chain".into(), run.trace));
            built.configuration = Some(ConfigurationDoc::from_configuration(&config));
            Ok(built)
        }
        _ => {
            let draws = if cfg.x.is_some() { 1 } else { MAX_DRAWS };
            let mut last = None;
            for _ in 0..draws {
                let (chart, p) = draw_inputs(cfg, &mut rng)?;
                let built = build_from_five(kind, &chart, &p, cfg)?;
                if cfg.x.is_some() || built.separation()? >= WELL_SEPARATED {
                    return Ok(built);
                }
                last = Some(built);
            }
            last.ok_or_else(|| CliError::Numeric("no input drawn".into()))
        }
    }
}

fn command_line(kind: Kind, cfg: &RunConfig, configuration: bool) -> Vec<String> {
    let mut c = vec!["construct".to_string(), kind.arg().to_string()];
    let mut push = |k: &str, v: String| {
        c.push(k.into());
        c.push(v);
    };
    push("--tolerance", format!("{:e}", cfg.tolerance));
    push("--branch", cfg.branch.to_string());
    if let Some(n) = cfg.n {
        push("--n", n.to_string());
    }
    if let Some(s) = cfg.steps {
        push("--steps", s.to_string());
    }
    if let Some(x) = &cfg.x {
        push(
            "--x",
            x.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
    }
    if configuration {
        c.push("--configuration".into());
    }
    c
}

pub fn construct(kind: Kind, cfg: &RunConfig, configuration: bool) -> CliResult<SceneDocument> {
    if configuration && kind != Kind::Heptagon {
        return Err(CliError::Input(
            "--configuration is available for `construct 7` only".into(),
        ));
    }
    let mut built = build(kind, cfg)?;
    if configuration {
        let gr = grunbaum_rigby(
            &PointRing::new(built.scene.vertices.clone()),
            DEFAULT_INCIDENCE_TOL,
        )?;
        built.configuration = Some(ConfigurationDoc::from_configuration(&gr.configuration));
    }

    let mut doc = SceneDocument::new(kind.name(), cfg.precision);
    doc.set_scene(&built.scene);
    for (label, p) in &built.points {
        doc.add_point(label, p);
    }
    for (name, t) in &built.traces {
        doc.traces.insert(name.clone(), TraceDoc::from_trace(t));
    }
    doc.configuration = built.configuration;
    doc.metadata.generator = generator();
    doc.metadata.seed = (cfg.x.is_none() && cfg.input.is_none()).then_some(cfg.seed);
    doc.metadata.command = command_line(kind, cfg, configuration);
    doc.checks = compute_checks(&doc, cfg.tolerance)?.checks;
    Ok(doc)
}

pub fn generator() -> String {
    format!("poncelet {}", env!("CARGO_PKG_VERSION"))
}

/// Every check that can be evaluated on a document, with details of the
/// configuration checks.
#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub kind: String,
    pub pass: bool,
    pub checks: BTreeMap<String, Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n4: Option<N4Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub colors: Option<ColorReport>,
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |a, b| {
        if b.is_nan() || a.is_nan() {
            f64::NAN
        } else {
            a.max(b)
        }
    })
}

fn polygon_checks(
    doc: &SceneDocument,
    n_override: Option<usize>,
    tol: f64,
    checks: &mut BTreeMap<String, Check>,
) -> CliResult<()> {
    let mut scene = doc.scene()?;
    if n_override.is_some() {
        scene.n = n_override;
    }
    let r = scene.residuals()?;
    checks.insert(
        "vertices_on_outer".into(),
        Check::below(r.vertex_on_outer, tol),
    );
    checks.insert(
        "edges_tangent_to_inner".into(),
        Check::below(r.edge_tangency, tol),
    );
    let Some(n) = scene.n else { return Ok(()) };
    if n < 3 || scene.vertices.len() < n {
        return Err(CliError::Input(format!(
            "period {n} does not fit {} vertices",
            scene.vertices.len()
        )));
    }
    let closure = scene.closure(tol)?;
    checks.insert(
        "closure_first_wrap".into(),
        Check::below(closure.residual_p, tol),
    );
    checks.insert(
        "closure_second_wrap".into(),
        Check::below(closure.residual_q, tol),
    );

    let v = &scene.vertices;
    if v.len() < 6 || n < 5 {
        return Ok(());
    }
    let chart = StereoChart::for_conic_avoiding(&scene.outer, v)?;
    let x = project(&chart, v)?;
    let first6: [RP1Point; 6] = std::array::from_fn(|i| x[i]);
    let line = closure_test_rp1(&first6, n, tol)?;
    checks.insert(
        "chain_closure_first_wrap".into(),
        Check::below(line.residual_p, tol),
    );
    checks.insert(
        "chain_closure_second_wrap".into(),
        Check::below(line.residual_q, tol),
    );

    match (doc.kind.as_str(), v.len()) {
        ("heptagon", 7) => {
            checks.insert(
                "heptagon_condition".into(),
                Check::below(heptagon6_residual(&first6).scaled_gap, tol),
            );
        }
        ("octagon", 8) => {
            let s = [x[0], x[1], x[2], x[3], x[4], x[6]];
            checks.insert(
                "octagon_point7_condition".into(),
                Check::below(octagon_point7_residual(&s).scaled_gap, tol),
            );
            let d: Vec<ProjLine> = (0..4)
                .map(|i| join(&v[i], &v[i + 4]))
                .collect::<Result<_, _>>()?;
            let c = worst(
                [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
                    .map(|(a, b, e)| concurrency(&d[a], &d[b], &d[e])),
            );
            checks.insert("long_diagonals_concurrent".into(), Check::below(c, tol));
        }
        ("ninegon", 9) => {
            let s = [x[0], x[1], x[2], x[3], x[4], x[6]];
            checks.insert(
                "ninegon_condition".into(),
                Check::below(ninegon_residual(&s).scaled_gap, tol),
            );
        }
        _ => {}
    }
    Ok(())
}

/// Recomputes every residual from the document's coordinates.
pub fn compute_checks(doc: &SceneDocument, tol: f64) -> CliResult<Verification> {
    compute_checks_with(doc, None, tol)
}

pub fn compute_checks_with(
    doc: &SceneDocument,
    n: Option<usize>,
    tol: f64,
) -> CliResult<Verification> {
    let mut checks = BTreeMap::new();
    if doc.outer.is_some() && doc.inner.is_some() && !doc.vertices.is_empty() {
        polygon_checks(doc, n, tol, &mut checks)?;
    }
    for (name, t) in &doc.traces {
        let report = t.to_trace(name)?.replay(tol);
        checks.insert(
            format!("trace_{name}"),
            Check::below(report.max_residual, tol),
        );
    }
    let mut n4 = None;
    let mut colors = None;
    if let Some(c) = &doc.configuration {
        let cfg = c.to_configuration(None)?;
        let report = verify_n4(&cfg);
        checks.insert("configuration_n4".into(), Check::flag(report.pass));
        if doc.kind == "heptagon" && doc.vertices.len() == 7 {
            let ring = PointRing::new(doc.vertex_points()?);
            let gr = grunbaum_rigby(&ring, cfg.tol)?;
            checks.insert(
                "grunbaum_rigby_fixed_point".into(),
                Check::below(gr.fixed_point_residual, tol),
            );
        }
        if cfg.point_colors.is_some() {
            let cr = color_report(&cfg)?;
            for (color, r) in &cr.conconic {
                checks.insert(
                    format!("conconic_{color:?}").to_lowercase(),
                    Check::below(*r, cfg.tol),
                );
            }
            for (color, r) in &cr.tangent {
                checks.insert(
                    format!("common_tangent_conic_{color:?}").to_lowercase(),
                    Check::below(*r, cfg.tol),
                );
            }
            checks.insert(
                "lines_avoid_own_color".into(),
                Check::flag(cr.same_color_incidences.is_empty()),
            );
            colors = Some(cr);
        }
        n4 = Some(report);
    }
    let pass = checks.values().all(|c: &Check| c.pass);
    Ok(Verification {
        kind: doc.kind.clone(),
        pass,
        checks,
        n4,
        colors,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RootReport {
    pub x6: [f64; 2],
    pub closes: bool,
    pub residual_first_wrap: f64,
    pub residual_second_wrap: f64,
}

impl RootReport {
    fn from(r: &ClosureRoot) -> RootReport {
        RootReport {
            x6: [r.x6.re, r.x6.im],
            closes: r.report.closes,
            residual_first_wrap: r.report.residual_p,
            residual_second_wrap: r.report.residual_q,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CountReport {
    pub n: usize,
    /// Inputs x₁..x₅ as exact rationals.
    pub inputs: Vec<String>,
    pub count: usize,
    pub roots: Vec<RootReport>,
    /// Roots closing only at the first wrap, or at a proper divisor of n.
    pub rejected: Vec<RootReport>,
    pub pass: bool,
}

pub fn count(cfg: &RunConfig) -> CliResult<CountReport> {
    let n = cfg
        .n
        .ok_or_else(|| CliError::Input("count needs --n".into()))?;
    if !(6..=12).contains(&n) {
        return Err(CliError::Input(format!(
            "count supports 6 <= n <= 12, got {n}"
        )));
    }
    let (points, inputs) = match cfg.need_x(5)? {
        Some(x) => {
            let pts = x
                .iter()
                .map(|&v| exact_point(&RP1Point::affine(v)))
                .collect::<Result<Vec<_>, _>>()?;
            (pts, x.iter().map(|v| v.to_string()).collect())
        }
        None => {
            let mut rng = rng_for(cfg);
            let (_, xs) = count_solutions_random(n, &mut rng, COUNT_RETRIES).map_err(|e| {
                CliError::Numeric(format!("no generic input in {COUNT_RETRIES} draws: {e}"))
            })?;
            let inputs = xs.iter().map(|q| q.to_string()).collect();
            (xs.into_iter().map(exact_affine).collect(), inputs)
        }
    };
    let points: [_; 5] = points.try_into().expect("five inputs");
    let sol = solve_closure(&points, n, cfg.tolerance)?;
    let roots: Vec<RootReport> = sol.accepted.iter().map(RootReport::from).collect();
    let pass = roots.iter().all(|r| r.closes);
    Ok(CountReport {
        n,
        inputs,
        count: sol.polynomial.count(),
        roots,
        rejected: sol.rejected.iter().map(RootReport::from).collect(),
        pass,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    pub n: usize,
    pub steps: usize,
    /// Largest distance between the tangent iteration and the next-point formula.
    pub synthetic_vs_formula: f64,
    /// Largest distance between the join/meet chain and the next-point formula.
    pub joinmeet_vs_formula: f64,
    /// Largest distance of the formula chain from the periodic continuation.
    pub formula_vs_period: f64,
    pub checks: BTreeMap<String, Check>,
    pub pass: bool,
}

/// Vertices p₀..p_steps of the tangent iteration along the polygon's edges.
pub fn synthetic_chain(scene: &PonceletScene, steps: usize) -> CliResult<Vec<ProjPoint>> {
    let v = &scene.vertices;
    let mut state = ChainState {
        current: v[0],
        incoming_line: join(&v[0], &v[1])?,
    };
    let mut out = vec![v[0]];
    for _ in 0..steps {
        state = chain_step(&scene.outer, &scene.inner, &state)?;
        out.push(state.current);
    }
    Ok(out)
}

/// Runs the three chain engines side by side on a closing polygon.
pub fn chain(cfg: &RunConfig) -> CliResult<ChainReport> {
    let steps = cfg.steps.unwrap_or(50);
    let (chart, poly) = match &cfg.input {
        Some(path) => {
            let doc = SceneDocument::read(path)?;
            let scene = doc.scene()?;
            let chart = StereoChart::for_conic_avoiding(&scene.outer, &scene.vertices)?;
            let n = doc.n.unwrap_or(scene.vertices.len());
            (
                chart,
                project(&chart, &scene.vertices[..n.min(scene.vertices.len())])?,
            )
        }
        None => {
            let n = cfg.n.unwrap_or(7);
            let mut rng = rng_for(cfg);
            let poly = (0..MAX_DRAWS)
                .find_map(|_| {
                    closing_polygons_rp1(&mut rng, n)
                        .ok()
                        .and_then(|v| v.into_iter().next())
                })
                .ok_or_else(|| {
                    CliError::Numeric(format!("no closing {n}-gon found in {MAX_DRAWS} draws"))
                })?;
            (StereoChart::standard(), poly)
        }
    };
    let n = poly.len();
    if n < 6 {
        return Err(CliError::Input(format!(
            "the chain comparison needs at least six vertices, got {n}"
        )));
    }
    let scene = closed_scene_from_rp1(&chart, &poly)?;
    let first6: [RP1Point; 6] = std::array::from_fn(|i| poly[i]);
    let formula: Vec<ProjPoint> = algebraic_chain(&first6, steps.saturating_sub(5))?
        .iter()
        .map(|y| chart.lift(y))
        .collect();
    let synthetic = synthetic_chain(&scene, steps)?;
    let joinmeet = chain_iterate_joinmeet(
        &chart.lift_all(&first6),
        Some(chart.conic()),
        steps.saturating_sub(5),
    )?
    .points;

    let dev = |a: &[ProjPoint]| worst((0..=steps).map(|k| a[k].distance(&formula[k])));
    let synthetic_vs_formula = dev(&synthetic);
    let joinmeet_vs_formula = dev(&joinmeet);
    let formula_vs_period = worst((0..=steps).map(|k| formula[k].distance(&scene.vertices[k % n])));
    let tol = cfg.tolerance;
    let mut checks = BTreeMap::new();
    checks.insert(
        "synthetic_vs_formula".into(),
        Check::below(synthetic_vs_formula, tol),
    );
    checks.insert(
        "joinmeet_vs_formula".into(),
        Check::below(joinmeet_vs_formula, tol),
    );
    checks.insert(
        "formula_vs_period".into(),
        Check::below(formula_vs_period, tol),
    );
    let pass = checks.values().all(|c: &Check| c.pass);
    Ok(ChainReport {
        n,
        steps,
        synthetic_vs_formula,
        joinmeet_vs_formula,
        formula_vs_period,
        checks,
        pass,
    })
}
