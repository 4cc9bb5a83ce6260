//! Deterministic SVG figures of scene documents.
//!
//! Only real elements are drawn. Complex points, lines and conics are listed in
//! a legend. Conics are sampled as 256-segment paths through a chart on one of
//! their real points; lines are clipped to the viewport.

use std::fmt::Write;

use poncelet_core::configurations::Color;
use poncelet_core::projective::{Conic, ProjLine, ProjPoint};
use poncelet_core::rp1::{RP1Point, StereoChart};

use crate::document::{conic_from, line_from, point_from, ElementDoc, SceneDocument};
use crate::error::CliResult;

const SEGMENTS: usize = 256;
const MARGIN: f64 = 0.05;
const WIDTH: f64 = 800.0;

#[derive(Debug, Clone, Copy)]
struct Viewport {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
}

impl Viewport {
    fn fit(points: &[(f64, f64)]) -> Viewport {
        if points.is_empty() {
            return Viewport {
                x0: -1.0,
                y0: -1.0,
                x1: 1.0,
                y1: 1.0,
            };
        }
        let (mut x0, mut y0, mut x1, mut y1) = (
            f64::INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::NEG_INFINITY,
        );
        for &(x, y) in points {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        let size = (x1 - x0).max(y1 - y0);
        let pad = if size > 0.0 { MARGIN * size } else { 1.0 };
        Viewport {
            x0: x0 - pad,
            y0: y0 - pad,
            x1: x1 + pad,
            y1: y1 + pad,
        }
    }

    fn size(&self) -> f64 {
        (self.x1 - self.x0).max(self.y1 - self.y0)
    }

    /// Far box used to cut conic paths where they run off to infinity.
    fn contains_far(&self, (x, y): (f64, f64)) -> bool {
        let r = 20.0 * self.size();
        x.is_finite()
            && y.is_finite()
            && x > self.x0 - r
            && x < self.x1 + r
            && y > self.y0 - r
            && y < self.y1 + r
    }

    /// Segment of the real line ax + by + c = 0 inside the viewport.
    fn clip(&self, [a, b, c]: [f64; 3]) -> Option<((f64, f64), (f64, f64))> {
        let mut hits: Vec<(f64, f64)> = Vec::new();
        if b.abs() > 1e-300 {
            for x in [self.x0, self.x1] {
                let y = -(a * x + c) / b;
                if y >= self.y0 && y <= self.y1 {
                    hits.push((x, y));
                }
            }
        }
        if a.abs() > 1e-300 {
            for y in [self.y0, self.y1] {
                let x = -(b * y + c) / a;
                if x >= self.x0 && x <= self.x1 {
                    hits.push((x, y));
                }
            }
        }
        // the two hits farthest apart along the line direction (-b, a)
        let t = |p: &(f64, f64)| -b * p.0 + a * p.1;
        let lo = hits.iter().copied().min_by(|p, q| t(p).total_cmp(&t(q)))?;
        let hi = hits.iter().copied().max_by(|p, q| t(p).total_cmp(&t(q)))?;
        Some((lo, hi))
    }
}

fn real_line(l: &ProjLine) -> Option<[f64; 3]> {
    if !l.is_real() {
        return None;
    }
    let c = l.coords();
    let v = [c[0].re, c[1].re, c[2].re];
    (v[0].hypot(v[1]) > 1e-12 * v[2].abs()).then_some(v)
}

/// Affine sample points of a real conic, split where the curve leaves the far box.
fn sample_conic(conic: &Conic, view: Option<&Viewport>) -> Option<Vec<Vec<(f64, f64)>>> {
    if !conic.is_real() || conic.is_degenerate() {
        return None;
    }
    let chart = StereoChart::for_real_conic(conic).ok()?;
    let mut runs: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
    for k in 0..=SEGMENTS {
        let phi = std::f64::consts::PI * k as f64 / SEGMENTS as f64;
        let p = chart.lift(&RP1Point::new([phi.cos().into(), phi.sin().into()]).ok()?);
        let xy = p
            .to_affine()
            .filter(|&xy| view.is_none_or(|v| v.contains_far(xy)));
        match xy {
            Some(xy) => runs.last_mut().expect("nonempty").push(xy),
            None if !runs.last().expect("nonempty").is_empty() => runs.push(Vec::new()),
            None => {}
        }
    }
    // the parameter circle is closed: join the last run onto the first
    if runs.len() > 1 && !runs.last().expect("nonempty").is_empty() && !runs[0].is_empty() {
        let mut last = runs.pop().expect("nonempty");
        last.pop();
        last.append(&mut runs[0]);
        runs[0] = last;
    }
    runs.retain(|r| r.len() > 1);
    Some(runs)
}

/// Real conic with real points and no real point at infinity.
fn is_ellipse(c: &Conic) -> bool {
    let m = c.matrix();
    c.is_real() && !c.is_degenerate() && (m[0][0] * m[1][1] - m[0][1] * m[1][0]).re > 0.0
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn color(c: Option<Color>) -> &'static str {
    match c {
        Some(Color::Red) => "#c0392b",
        Some(Color::Green) => "#27864a",
        Some(Color::Blue) => "#2f6fb5",
        None => "#555555",
    }
}

struct Canvas {
    body: String,
    legend: Vec<String>,
    view: Viewport,
}

impl Canvas {
    fn stroke(&self) -> f64 {
        0.003 * self.view.size()
    }

    fn conic(&mut self, class: &str, name: &str, conic: &Conic, stroke: &str) {
        match sample_conic(conic, Some(&self.view)) {
            Some(runs) if !runs.is_empty() => {
                let mut d = String::new();
                for run in runs {
                    for (i, (x, y)) in run.iter().enumerate() {
                        let _ = write!(d, "{}{:.4} {:.4} ", if i == 0 { "M" } else { "L" }, x, -y);
                    }
                }
                let _ = writeln!(
                    self.body,
                    r#"<path class="{class}" data-name="{}" d="{}" fill="none" stroke="{stroke}" stroke-width="{:.4}"/>"#,
                    escape(name),
                    d.trim_end(),
                    self.stroke()
                );
            }
            _ => self.legend.push(format!("conic {name} (no real points)")),
        }
    }

    fn segment(&mut self, class: &str, a: (f64, f64), b: (f64, f64), stroke: &str, width: f64) {
        let _ = writeln!(
            self.body,
            r#"<line class="{class}" x1="{:.4}" y1="{:.4}" x2="{:.4}" y2="{:.4}" stroke="{stroke}" stroke-width="{:.4}"/>"#,
            a.0, -a.1, b.0, -b.1, width
        );
    }

    fn line(&mut self, class: &str, name: &str, l: &ProjLine, stroke: &str, width: f64) {
        match real_line(l).and_then(|v| self.view.clip(v)) {
            Some((a, b)) => self.segment(class, a, b, stroke, width),
            None if !l.is_real() => self.legend.push(format!("line {name} (complex)")),
            None => {}
        }
    }

    fn point(&mut self, class: &str, name: &str, p: &ProjPoint, fill: &str, r: f64, label: bool) {
        match p.to_affine() {
            Some((x, y)) => {
                let _ = writeln!(
                    self.body,
                    r#"<circle class="{class}" cx="{x:.4}" cy="{:.4}" r="{r:.4}" fill="{fill}"><title>{}</title></circle>"#,
                    -y,
                    escape(name)
                );
                if label {
                    let s = 0.03 * self.view.size();
                    let _ = writeln!(
                        self.body,
                        r#"<text class="label" x="{:.4}" y="{:.4}" font-size="{s:.4}">{}</text>"#,
                        x + 0.4 * s,
                        -y - 0.4 * s,
                        escape(name)
                    );
                }
            }
            None if !p.is_real() => self.legend.push(format!("point {name} (complex)")),
            None => self.legend.push(format!("point {name} (at infinity)")),
        }
    }
}

/// SVG figure of the document: conics, polygon edges, vertices, named elements,
/// the configuration if present, otherwise the construction auxiliaries.
pub fn render(doc: &SceneDocument) -> CliResult<String> {
    let outer = doc.outer_conic()?;
    let inner = doc.inner_conic()?;
    let vertices = doc.vertex_points()?;
    let named: Vec<(String, ProjPoint)> = doc
        .points
        .iter()
        .map(|(k, v)| Ok((k.clone(), point_from(v, &format!("point {k}"))?)))
        .collect::<CliResult<_>>()?;
    let named_lines: Vec<(String, ProjLine)> = doc
        .lines
        .iter()
        .map(|(k, v)| Ok((k.clone(), line_from(v, &format!("line {k}"))?)))
        .collect::<CliResult<_>>()?;
    let conics: Vec<(String, Conic)> = doc
        .conics
        .iter()
        .map(|(k, m)| Ok((k.clone(), conic_from(m, &format!("conic {k}"))?)))
        .collect::<CliResult<_>>()?;
    let config = doc
        .configuration
        .as_ref()
        .map(|c| c.to_configuration(None))
        .transpose()?;

    // the viewport covers the real points and every bounded conic
    let mut anchor: Vec<(f64, f64)> = vertices
        .iter()
        .chain(named.iter().map(|(_, p)| p))
        .filter_map(|p| p.to_affine())
        .collect();
    if let Some(cfg) = &config {
        anchor.extend(cfg.points.iter().filter_map(|p| p.to_affine()));
    }
    for c in outer
        .iter()
        .chain(inner.iter())
        .chain(conics.iter().map(|(_, c)| c))
    {
        if is_ellipse(c) {
            if let Some(runs) = sample_conic(c, None) {
                anchor.extend(runs.into_iter().flatten());
            }
        }
    }
    let view = Viewport::fit(&anchor);
    let mut canvas = Canvas {
        body: String::new(),
        legend: Vec::new(),
        view,
    };
    let sw = canvas.stroke();
    let r = 2.5 * sw;

    if let Some(c) = &outer {
        canvas.conic("conic", "outer", c, "#222222");
    }
    if let Some(c) = &inner {
        canvas.conic("conic", "inner", c, "#7a7a7a");
    }
    for (k, c) in &conics {
        canvas.conic("conic", k, c, "#8e44ad");
    }

    if config.is_none() {
        for (name, t) in &doc.traces {
            for e in &t.elements {
                match e {
                    ElementDoc::Line { label, coords } => {
                        let l = line_from(coords, label)?;
                        canvas.line(
                            "aux-line",
                            &format!("{name}:{label}"),
                            &l,
                            "#b0b0b0",
                            0.5 * sw,
                        );
                    }
                    ElementDoc::Point { label, coords } => {
                        let p = point_from(coords, label)?;
                        canvas.point(
                            "aux",
                            &format!("{name}:{label}"),
                            &p,
                            "#9a9a9a",
                            0.6 * r,
                            false,
                        );
                    }
                    ElementDoc::Conic { .. } => {}
                }
            }
        }
    }

    let k = vertices.len();
    let edge_count = if doc.n.is_some() {
        k
    } else {
        k.saturating_sub(1)
    };
    for i in 0..edge_count {
        let (a, b) = (&vertices[i], &vertices[(i + 1) % k]);
        match (a.to_affine(), b.to_affine()) {
            (Some(pa), Some(pb)) => canvas.segment("edge", pa, pb, "#1f4e8c", 1.2 * sw),
            _ => canvas
                .legend
                .push(format!("edge {}{} (not drawable)", i + 1, (i + 1) % k + 1)),
        }
    }

    for (k, l) in &named_lines {
        canvas.line("line", k, l, "#8e44ad", sw);
    }

    if let Some(cfg) = &config {
        for (j, l) in cfg.lines.iter().enumerate() {
            let c = color(cfg.line_colors.as_ref().map(|v| v[j]));
            canvas.line("config-line", &cfg.line_labels[j], l, c, 0.8 * sw);
        }
        for (i, p) in cfg.points.iter().enumerate() {
            let c = color(cfg.point_colors.as_ref().map(|v| v[i]));
            canvas.point("config-point", &cfg.point_labels[i], p, c, r, false);
        }
    }

    for (i, v) in vertices.iter().enumerate() {
        canvas.point("vertex", &(i + 1).to_string(), v, "#1f4e8c", r, true);
    }
    for (k, p) in &named {
        canvas.point("point", k, p, "#8e44ad", r, true);
    }

    let v = canvas.view;
    let (w, h) = (v.x1 - v.x0, v.y1 - v.y0);
    let height = WIDTH * h / w;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{height:.0}" viewBox="{:.4} {:.4} {:.4} {:.4}">"#,
        v.x0, -v.y1, w, h
    );
    let _ = writeln!(
        out,
        r##"<rect x="{:.4}" y="{:.4}" width="{w:.4}" height="{h:.4}" fill="#ffffff"/>"##,
        v.x0, -v.y1
    );
    out.push_str(&canvas.body);
    if !canvas.legend.is_empty() {
        let s = 0.025 * v.size();
        let _ = writeln!(out, r#"<g class="legend" font-size="{s:.4}">"#);
        for (i, entry) in canvas.legend.iter().enumerate() {
            let _ = writeln!(
                out,
                r#"<text x="{:.4}" y="{:.4}">{}</text>"#,
                v.x0 + s,
                -v.y0 - s * (canvas.legend.len() - i) as f64,
                escape(entry)
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}
