//! Reference computations that do not go through the library's tangent code.
//!
//! The viewpoint is moved to the origin by an isometry (a Lorentz boost,
//! a reflection of the sphere, or a translation). At the origin the model
//! chart is conformal, so angles there are ordinary Euclidean angles.
#![allow(dead_code)]

use std::f64::consts::PI;

use isoptic::conics::{classify_central, CentralKind, ConicSpec, Curve};
use isoptic::kernel::{classify_point, distance, GeometryKind, HomogeneousPoint, PointClass};
use isoptic::tracer::TracedCurve;
use GeometryKind::*;

pub type V3 = [f64; 3];
pub type M3 = [[f64; 3]; 3];

pub fn mat_vec(m: &M3, v: &V3) -> V3 {
    [0, 1, 2].map(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2])
}

fn mat_mul(a: &M3, b: &M3) -> M3 {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

fn transpose(a: &M3) -> M3 {
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = a[j][i];
        }
    }
    t
}

fn inverse(m: &M3) -> M3 {
    let c = |i: usize, j: usize| {
        let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
        let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
        m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]
    };
    let det: f64 = (0..3).map(|j| m[0][j] * c(0, j)).sum();
    let mut inv = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            inv[j][i] = c(i, j) / det;
        }
    }
    inv
}

/// Isometry of the geometry mapping the chart point `(kx, ky)` to the origin.
pub fn to_origin(g: GeometryKind, kx: f64, ky: f64) -> M3 {
    match g {
        GeometryKind::Euclidean => [[1.0, 0.0, 0.0], [-kx, 1.0, 0.0], [-ky, 0.0, 1.0]],
        GeometryKind::Hyperbolic => {
            let v2 = kx * kx + ky * ky;
            let gamma = 1.0 / (1.0 - v2).sqrt();
            if v2 == 0.0 {
                return [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
            }
            let v = [kx, ky];
            let mut m = [[0.0; 3]; 3];
            m[0][0] = gamma;
            for i in 0..2 {
                m[0][i + 1] = -gamma * v[i];
                m[i + 1][0] = -gamma * v[i];
                for j in 0..2 {
                    let id = if i == j { 1.0 } else { 0.0 };
                    m[i + 1][j + 1] = id + (gamma - 1.0) * v[i] * v[j] / v2;
                }
            }
            m
        }
        GeometryKind::Elliptic => {
            let n = (1.0 + kx * kx + ky * ky).sqrt();
            let k = [1.0 / n, kx / n, ky / n];
            let u = [k[0] - 1.0, k[1], k[2]];
            let uu: f64 = u.iter().map(|c| c * c).sum();
            let mut m = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
            if uu > 0.0 {
                for i in 0..3 {
                    for j in 0..3 {
                        m[i][j] -= 2.0 * u[i] * u[j] / uu;
                    }
                }
            }
            m
        }
    }
}

pub fn conic_matrix(spec: &ConicSpec) -> M3 {
    spec.quadratic_form().unwrap().matrix()
}

/// Folded angle in `[0, π/2]` between the two tangent lines from `(kx, ky)`.
///
/// After moving the viewpoint to the origin, the line through the origin
/// in direction `(c, s)` touches the conic when the quadratic in `t` for
/// the point `(1, tc, ts)` has a double root. That is a binary quadratic
/// form in `(c, s)` whose two roots are the tangent directions.
pub fn line_pair_angle(g: GeometryKind, m: &M3, kx: f64, ky: f64) -> Option<f64> {
    let t = to_origin(g, kx, ky);
    let ti = inverse(&t);
    let q = mat_mul(&transpose(&ti), &mat_mul(m, &ti));
    // (q01 c + q02 s)² - q00 (q11 c² + 2 q12 c s + q22 s²)
    let a = q[0][1] * q[0][1] - q[0][0] * q[1][1];
    let b = 2.0 * (q[0][1] * q[0][2] - q[0][0] * q[1][2]);
    let c = q[0][2] * q[0][2] - q[0][0] * q[2][2];
    let disc = b * b - 4.0 * a * c;
    if disc <= 0.0 {
        return None;
    }
    // angle between the line pair a c² + b c s + c s² = 0
    Some(disc.sqrt().atan2((a + c).abs()))
}

/// Point where the geodesic from `r` in chart direction `phi` first meets
/// the conic, as a homogeneous vector `cos(s)·r̂ + sin(s)·d` with `s` in
/// `(0, π)`.
fn first_hit(m: &M3, r: &V3, phi: f64) -> V3 {
    let rn = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    let rh = [r[0] / rn, r[1] / rn, r[2] / rn];
    let d = [0.0, phi.cos(), phi.sin()];
    let qa = |u: &V3, v: &V3| -> f64 {
        let mv = mat_vec(m, v);
        u[0] * mv[0] + u[1] * mv[1] + u[2] * mv[2]
    };
    // A cos² + 2B cos sin + C sin² = 0, i.e. C τ² + 2B τ + A = 0 with τ = tan s
    let (a, b, c) = (qa(&rh, &rh), qa(&rh, &d), qa(&d, &d));
    let mut best = f64::INFINITY;
    let disc = (b * b - a * c).max(0.0).sqrt();
    let roots: Vec<f64> = if c.abs() < 1e-15 {
        vec![(-a / (2.0 * b)).atan().rem_euclid(PI)]
    } else {
        vec![((-b + disc) / c).atan().rem_euclid(PI), ((-b - disc) / c).atan().rem_euclid(PI)]
    };
    for s in roots {
        if s > 0.0 && s < best {
            best = s;
        }
    }
    [0, 1, 2].map(|i| best.cos() * rh[i] + best.sin() * d[i])
}

/// Interior point of the curve used as the center of the sampling pencil.
pub fn interior_point(spec: &ConicSpec) -> V3 {
    match spec.curve {
        Curve::Ellipse { .. } => [1.0, 0.0, 0.0],
        _ => spec.marked_points()[0].coords(),
    }
}

/// Points of the curve: the segment itself, or the conic swept by the
/// pencil through an interior point.
pub fn curve_point(spec: &ConicSpec, t: f64) -> V3 {
    match spec.curve {
        Curve::Segment { a } => [1.0, a * (2.0 * PI * t).cos(), 0.0],
        _ => first_hit(&conic_matrix(spec), &interior_point(spec), 2.0 * PI * t),
    }
}

fn is_proper(g: GeometryKind, p: &V3) -> bool {
    match g {
        GeometryKind::Hyperbolic => -p[0] * p[0] + p[1] * p[1] + p[2] * p[2] < -1e-12 * p[0] * p[0],
        GeometryKind::Euclidean => p[0].abs() > 1e-12,
        GeometryKind::Elliptic => true,
    }
}

/// Direction of `p` seen from the origin after applying `t`: an angle of
/// the ray (period 2π), or of the line for the elliptic plane (period π).
fn direction(g: GeometryKind, t: &M3, p: &V3) -> f64 {
    let q = mat_vec(t, p);
    match g {
        GeometryKind::Elliptic => q[2].atan2(q[1]).rem_euclid(PI),
        _ => {
            let s = q[0].signum();
            (s * q[2]).atan2(s * q[1])
        }
    }
}

fn wrap(x: f64, period: f64) -> f64 {
    let h = period / 2.0;
    (x + h).rem_euclid(period) - h
}

/// Angle of the smallest sector at `(kx, ky)` containing the curve: the
/// ray sector for the Euclidean and hyperbolic planes, the sector of lines
/// meeting the curve in the elliptic plane. The direction is lifted
/// continuously along the curve parameter and its extremes refined by a
/// golden-section search. `None` when an extreme direction is reached at a
/// point outside the model.
pub fn sector_angle(spec: &ConicSpec, kx: f64, ky: f64) -> Option<f64> {
    let g = spec.geometry;
    let t = to_origin(g, kx, ky);
    let period = if g == GeometryKind::Elliptic { PI } else { 2.0 * PI };
    let dir = |s: f64| -> Option<f64> {
        let p = curve_point(spec, s.rem_euclid(1.0));
        is_proper(g, &p).then(|| direction(g, &t, &p))
    };
    let n = 4000;
    let raw: Vec<Option<f64>> = (0..n).map(|i| dir(i as f64 / n as f64)).collect();
    let start = raw.iter().position(|v| v.is_some())?;
    let mut lift: Vec<Option<f64>> = vec![None; n];
    let mut last = raw[start].unwrap();
    for k in 0..n {
        let i = (start + k) % n;
        if let Some(v) = raw[i] {
            last += wrap(v - last, period);
            lift[i] = Some(last);
        }
    }
    let mut lo = (f64::INFINITY, 0usize);
    let mut hi = (f64::NEG_INFINITY, 0usize);
    for (i, v) in lift.iter().enumerate() {
        if let Some(v) = *v {
            if v < lo.0 {
                lo = (v, i);
            }
            if v > hi.0 {
                hi = (v, i);
            }
        }
    }
    let mut out = [0.0; 2];
    for (k, (base, i)) in [lo, hi].into_iter().enumerate() {
        let sign = if k == 0 { 1.0 } else { -1.0 };
        lift[(i + n - 1) % n]?;
        lift[(i + 1) % n]?;
        let anchor = raw[i].unwrap();
        let f = |s: f64| match dir(s) {
            Some(v) => sign * (base + wrap(v - anchor, period)),
            None => f64::INFINITY,
        };
        let (mut a, mut b) = ((i as f64 - 1.0) / n as f64, (i as f64 + 1.0) / n as f64);
        let gr = (5f64.sqrt() - 1.0) / 2.0;
        let (mut x1, mut x2) = (b - gr * (b - a), a + gr * (b - a));
        let (mut f1, mut f2) = (f(x1), f(x2));
        for _ in 0..100 {
            if f1 < f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = f(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = f(x2);
            }
        }
        out[k] = sign * f1.min(f2).min(sign * base);
    }
    Some(out[1] - out[0])
}

/// The viewing angle as the closed-form equations measure it: the ray
/// sector, or in the elliptic plane the sector of lines missing the curve.
pub fn reference_view_angle(spec: &ConicSpec, kx: f64, ky: f64) -> Option<f64> {
    let s = sector_angle(spec, kx, ky)?;
    Some(if spec.geometry == GeometryKind::Elliptic { PI - s } else { s })
}

/// Points of the conic from the sampling pencil that lie on it to within
/// `1e-12` of the normalized equation, in chart coordinates.
pub fn on_curve_points(spec: &ConicSpec, n: usize, offset: f64) -> Vec<(f64, f64)> {
    let q = spec.quadratic_form().unwrap().normalized();
    (0..n)
        .filter_map(|i| {
            let p = curve_point(spec, (offset + i as f64 / n as f64).rem_euclid(1.0));
            if p[0].abs() < 1e-9 {
                return None;
            }
            let (x, y) = (p[1] / p[0], p[2] / p[0]);
            (q.eval(x, y).abs() < 1e-12).then_some((x, y))
        })
        .collect()
}

fn point_segment(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 { 0.0 } else { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0) };
    (p.0 - a.0 - t * dx).hypot(p.1 - a.1 - t * dy)
}

/// Distance from `p` to the nearest polyline of `curve`.
pub fn polyline_distance(p: (f64, f64), curve: &TracedCurve) -> f64 {
    let mut best = f64::INFINITY;
    for b in &curve.branches {
        let pts = &b.points;
        if pts.len() == 1 {
            best = best.min((p.0 - pts[0].x).hypot(p.1 - pts[0].y));
        }
        let n = pts.len();
        let segs = if b.closed { n } else { n.saturating_sub(1) };
        for k in 0..segs {
            let (u, v) = (&pts[k], &pts[(k + 1) % n]);
            best = best.min(point_segment(p, (u.x, u.y), (v.x, v.y)));
        }
    }
    best
}

/// Symmetric Hausdorff distance between the vertex sets and polylines,
/// taken over the vertices accepted by `keep`.
pub fn hausdorff(a: &TracedCurve, b: &TracedCurve, keep: impl Fn(f64, f64) -> bool) -> f64 {
    let one = |u: &TracedCurve, v: &TracedCurve| {
        u.points().filter(|p| keep(p.x, p.y)).map(|p| polyline_distance((p.x, p.y), v)).fold(0.0, f64::max)
    };
    one(a, b).max(one(b, a))
}

/// On-curve proper points; elliptic points are kept where the chart
/// representatives of `p` and both marked points pair positively, so that
/// the distances are not folded at π/2.
pub fn focal_sample(s: &ConicSpec, n: usize, offset: f64) -> Vec<HomogeneousPoint> {
    let marks = s.marked_points();
    on_curve_points(s, n, offset)
        .into_iter()
        .map(|(x, y)| HomogeneousPoint::affine(x, y))
        .filter(|p| match s.geometry {
            Hyperbolic => classify_point(Hyperbolic, p).unwrap() == PointClass::Proper,
            Elliptic => marks.iter().all(|m| {
                let (a, b) = (p.coords(), m.coords());
                a[0] * b[0] + a[1] * b[1] + a[2] * b[2] > 1e-3
            }),
            Euclidean => true,
        })
        .collect()
}

fn dist(g: GeometryKind, p: &HomogeneousPoint, q: &HomogeneousPoint) -> f64 {
    match g {
        Euclidean => {
            let ((a, b), (c, d)) = (p.to_affine().unwrap(), q.to_affine().unwrap());
            (a - c).hypot(b - d)
        }
        _ => distance(g, p, q).unwrap(),
    }
}

/// Largest deviation from the focal identity over the sampled points.
pub fn focus_error(s: &ConicSpec, n: usize, offset: f64) -> (f64, usize) {
    let g = s.geometry;
    let pts = focal_sample(s, n, offset);
    let marks = s.marked_points();
    let err = pts
        .iter()
        .map(|p| match s.curve {
            Curve::Parabola { .. } => {
                let (x, y) = p.to_affine().unwrap();
                let foot = HomogeneousPoint::affine(x, 0.0);
                let to_directrix = if g == Euclidean { y.abs() } else { dist(g, p, &foot) };
                (dist(g, p, &marks[0]) - to_directrix).abs()
            }
            _ => {
                let (d1, d2) = (dist(g, p, &marks[0]), dist(g, p, &marks[1]));
                let (two_a, kind) = match s.curve {
                    Curve::Central { a, .. } => (2.0 * a, classify_central(s).unwrap()),
                    Curve::Ellipse { a, b } => (2.0 * a.max(b), CentralKind::Ellipse),
                    Curve::Hyperbola { a, .. } => (2.0 * a, CentralKind::Hyperbola),
                    _ => unreachable!(),
                };
                match kind {
                    CentralKind::Ellipse => (d1 + d2 - two_a).abs(),
                    CentralKind::Hyperbola => ((d1 - d2).abs() - two_a).abs(),
                }
            }
        })
        .fold(0.0, f64::max);
    (err, pts.len())
}
