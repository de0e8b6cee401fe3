//! Scenes and SVG, CSV and JSON output.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::conics::{ConicSpec, Curve};
use crate::error::{Error, Result};
use crate::isoptics::IsopticQuery;
use crate::kernel::GeometryKind;
use crate::tracer::{trace, trace_isoptic, TracedCurve, Viewport, HYPERBOLIC_MASK_RADIUS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Svg,
    Csv,
    Json,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "svg" => Ok(Self::Svg),
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::InvalidParameter(format!("unknown format {other:?}"))),
        }
    }
}

/// Stroke widths are fractions of the view width.
#[derive(Debug, Clone, PartialEq)]
pub struct Style {
    pub conic_color: String,
    pub isoptic_color: String,
    pub boundary_color: String,
    pub point_color: String,
    pub conic_width: f64,
    pub isoptic_width: f64,
    pub boundary_width: f64,
    pub point_radius: f64,
}

impl Default for Style {
    fn default() -> Self {
        Self {
            conic_color: "#1f4e9c".into(),
            isoptic_color: "#c0392b".into(),
            boundary_color: "#000000".into(),
            point_color: "#000000".into(),
            conic_width: 0.003,
            isoptic_width: 0.003,
            boundary_width: 0.002,
            point_radius: 0.006,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    ConicOutline(TracedCurve),
    /// A segment drawn as a straight line between its endpoints.
    SegmentOutline { from: (f64, f64), to: (f64, f64) },
    Isoptic(TracedCurve),
    MarkedPoints(Vec<(f64, f64)>),
    /// The unit circle of the hyperbolic model.
    ModelBoundary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub geometry: GeometryKind,
    pub elements: Vec<Element>,
    pub style: Style,
    /// Drawn region `(xmin, xmax, ymin, ymax)`.
    pub view: (f64, f64, f64, f64),
}

impl Scene {
    /// Empty scene; hyperbolic scenes start with the model boundary.
    pub fn new(geometry: GeometryKind, vp: &Viewport) -> Self {
        let view = if geometry == GeometryKind::Hyperbolic {
            (-1.05, 1.05, -1.05, 1.05)
        } else {
            let (mx, my) = ((vp.xmax - vp.xmin) / 60.0, (vp.ymax - vp.ymin) / 60.0);
            (vp.xmin - mx, vp.xmax + mx, vp.ymin - my, vp.ymax + my)
        };
        let elements = if geometry == GeometryKind::Hyperbolic { vec![Element::ModelBoundary] } else { Vec::new() };
        Self { geometry, elements, style: Style::default(), view }
    }

    pub fn push(&mut self, e: Element) {
        self.elements.push(e);
    }

    /// Conic, isoptic, marked points and (hyperbolic) boundary for a query.
    /// Returns the scene and the traced isoptic.
    pub fn for_query(query: &IsopticQuery, vp: &Viewport) -> Result<(Self, TracedCurve)> {
        let spec = query.conic;
        let mut scene = Scene::new(spec.geometry, vp);
        scene.push(conic_outline(&spec, vp)?);
        let curve = trace_isoptic(query, vp)?;
        scene.push(Element::Isoptic(curve.clone()));
        let points = spec.marked_points().iter().filter_map(|p| p.to_affine().ok()).collect();
        scene.push(Element::MarkedPoints(points));
        Ok((scene, curve))
    }
}

/// The conic drawn from its implicit equation, or the segment itself.
pub fn conic_outline(spec: &ConicSpec, vp: &Viewport) -> Result<Element> {
    if let Curve::Segment { a } = spec.curve {
        return Ok(Element::SegmentOutline { from: (-a, 0.0), to: (a, 0.0) });
    }
    let q = spec.quadratic_form()?.normalized();
    let r2 = HYPERBOLIC_MASK_RADIUS * HYPERBOLIC_MASK_RADIUS;
    let disk = (spec.geometry == GeometryKind::Hyperbolic).then_some(move |x: f64, y: f64| x * x + y * y <= r2);
    Ok(Element::ConicOutline(trace(|x, y| q.eval(x, y), vp, disk)?))
}

fn path_data(curve: &TracedCurve) -> String {
    let mut d = String::new();
    for b in &curve.branches {
        for (k, p) in b.points.iter().enumerate() {
            let _ = write!(d, "{}{:.6} {:.6} ", if k == 0 { "M" } else { "L" }, p.x, p.y);
        }
        if b.closed {
            d.push_str("Z ");
        }
    }
    d.trim_end().to_string()
}

pub fn export_svg(scene: &Scene) -> String {
    let (x0, x1, y0, y1) = scene.view;
    let (w, h) = (x1 - x0, y1 - y0);
    let s = &scene.style;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="{:.0}" viewBox="{x0} {} {w} {h}">"#,
        800.0 * h / w,
        -y1
    );
    let _ = writeln!(out, r#"<g transform="scale(1,-1)" fill="none" stroke-linejoin="round">"#);
    for e in &scene.elements {
        match e {
            Element::ModelBoundary => {
                let _ = writeln!(
                    out,
                    r#"<circle class="boundary" cx="0" cy="0" r="1" stroke="{}" stroke-width="{}"/>"#,
                    s.boundary_color,
                    s.boundary_width * w
                );
            }
            Element::ConicOutline(c) if !c.is_empty() => {
                let _ = writeln!(
                    out,
                    r#"<path class="conic" d="{}" stroke="{}" stroke-width="{}"/>"#,
                    path_data(c),
                    s.conic_color,
                    s.conic_width * w
                );
            }
            Element::SegmentOutline { from, to } => {
                let _ = writeln!(
                    out,
                    r#"<line class="conic" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="{}"/>"#,
                    from.0,
                    from.1,
                    to.0,
                    to.1,
                    s.conic_color,
                    s.conic_width * w
                );
            }
            Element::Isoptic(c) if !c.is_empty() => {
                let _ = writeln!(
                    out,
                    r#"<path class="isoptic" d="{}" stroke="{}" stroke-width="{}"/>"#,
                    path_data(c),
                    s.isoptic_color,
                    s.isoptic_width * w
                );
            }
            Element::MarkedPoints(ps) => {
                for (x, y) in ps {
                    let _ = writeln!(
                        out,
                        r#"<circle class="focus" cx="{x}" cy="{y}" r="{}" fill="{}" stroke="none"/>"#,
                        s.point_radius * w,
                        s.point_color
                    );
                }
            }
            _ => {}
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}

/// One row per traced vertex with 17 significant digits.
pub fn export_csv(curve: &TracedCurve) -> String {
    let mut out = String::from("branch,x,y,residual\n");
    for (k, b) in curve.branches.iter().enumerate() {
        for p in &b.points {
            let _ = writeln!(out, "{k},{:.16e},{:.16e},{:.16e}", p.x, p.y, p.residual);
        }
    }
    out
}

pub fn export_json(curve: &TracedCurve) -> String {
    let mut s = serde_json::to_string_pretty(curve).expect("traced curves hold finite numbers");
    s.push('\n');
    s
}

pub fn import_json(text: &str) -> Result<TracedCurve> {
    serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("bad curve json: {e}")))
}

pub fn export(curve: &TracedCurve, scene: &Scene, format: ExportFormat) -> Vec<u8> {
    match format {
        ExportFormat::Svg => export_svg(scene),
        ExportFormat::Csv => export_csv(curve),
        ExportFormat::Json => export_json(curve),
    }
    .into_bytes()
}
