//! Tangents from an external point and the angle under which a curve is seen.
//!
//! The tangency points from `K` are the intersections of the conic with the
//! polar line of `K` (with respect to the conic's own matrix), so no chart
//! special cases are needed. [`view_angle`] is the direct geometric
//! measurement the closed-form isoptic equations are checked against.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::conics::{classify_central, CentralKind, ConicSpec, Curve, QuadraticForm, ON_CURVE_TOL};
use crate::error::{Error, Result};
use crate::kernel::{
    classify_point, cross, join, norm, ray_angle, GeometryKind, HomogeneousPoint, PointClass, ProjectiveLine,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Multiplicity {
    TwoDistinct,
    Double,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TangentPair {
    /// Tangency points ordered lexicographically by their chart coordinates;
    /// `t_i` is the line through the viewpoint and `q_i`.
    TwoDistinct {
        q1: HomogeneousPoint,
        q2: HomogeneousPoint,
        t1: ProjectiveLine,
        t2: ProjectiveLine,
    },
    Double { q: HomogeneousPoint },
    None,
}

impl TangentPair {
    pub fn multiplicity(&self) -> Multiplicity {
        match self {
            TangentPair::TwoDistinct { .. } => Multiplicity::TwoDistinct,
            TangentPair::Double { .. } => Multiplicity::Double,
            TangentPair::None => Multiplicity::None,
        }
    }
}

/// How [`view_angle`] reports the angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AngleConvention {
    /// The measured angle in `[0, π]`.
    Raw,
    /// `min(θ, π - θ)`: the unordered pair `{θ, π - θ}` that squared
    /// isoptic equations cannot tell apart.
    CentralPair,
}

fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = norm(&v);
    [v[0] / n, v[1] / n, v[2] / n]
}

fn chart_representative(k: &HomogeneousPoint) -> [f64; 3] {
    if k.is_ideal() {
        unit(k.coords())
    } else {
        k.normalized().coords()
    }
}

/// `true` when real tangents can be drawn from `k` to the conic.
///
/// The polar line of `k` meets the conic in two real points exactly when
/// `det(M)·kᵀMk < 0`; the test does not depend on the scale of `M` or `k`.
pub fn is_exterior(q: &QuadraticForm, k: &HomogeneousPoint) -> bool {
    let qn = q.normalized();
    let kv = chart_representative(k);
    let value = qn.bilinear(&kv, &kv);
    value.abs() > ON_CURVE_TOL && qn.determinant() * value < 0.0
}

/// Points where the line through `b1` and `b2` meets the conic, together
/// with the discriminant of the restricted binary quadratic.
fn line_conic_roots(q: &QuadraticForm, b1: &[f64; 3], b2: &[f64; 3]) -> (f64, Option<([f64; 3], [f64; 3])>) {
    let a = q.bilinear(b1, b1);
    let b = 2.0 * q.bilinear(b1, b2);
    let c = q.bilinear(b2, b2);
    let disc = b * b - 4.0 * a * c;
    let scale = b * b + (4.0 * a * c).abs();
    if disc < -1e-12 * scale || scale == 0.0 {
        return (disc, None);
    }
    let root = disc.max(0.0).sqrt();
    // s/t roots of a s² + b s t + c t², in cancellation-free form
    let h = -0.5 * (b + if b >= 0.0 { root } else { -root });
    let p1 = [h * b1[0] + a * b2[0], h * b1[1] + a * b2[1], h * b1[2] + a * b2[2]];
    let p2 = [c * b1[0] + h * b2[0], c * b1[1] + h * b2[1], c * b1[2] + h * b2[2]];
    (disc, Some((p1, p2)))
}

/// Two points spanning the line `l`.
fn line_basis(l: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    let i = (0..3)
        .min_by(|&i, &j| l[i].abs().partial_cmp(&l[j].abs()).unwrap())
        .unwrap();
    let mut e = [0.0; 3];
    e[i] = 1.0;
    let b1 = unit(cross(l, &e));
    let b2 = unit(cross(l, &b1));
    (b1, b2)
}

/// Discriminant of the conic restricted to a line, relative to its size.
/// Zero for tangent lines, positive for secants, negative for passants.
pub fn restricted_discriminant(q: &QuadraticForm, line: &ProjectiveLine) -> f64 {
    let qn = q.normalized();
    let (b1, b2) = line_basis(&unit(line.coords()));
    let a = qn.bilinear(&b1, &b1);
    let b = 2.0 * qn.bilinear(&b1, &b2);
    let c = qn.bilinear(&b2, &b2);
    b * b - 4.0 * a * c
}

fn sort_key(p: &HomogeneousPoint) -> (bool, f64, f64) {
    match p.to_affine() {
        Ok((x, y)) => (false, x, y),
        Err(_) => {
            let c = unit(p.coords());
            (true, c[1], c[2])
        }
    }
}

pub fn tangency_points(q: &QuadraticForm, k: &HomogeneousPoint) -> Result<TangentPair> {
    let qn = q.normalized();
    let kv = chart_representative(k);
    if qn.bilinear(&kv, &kv).abs() <= ON_CURVE_TOL {
        return Err(Error::OnCurve);
    }
    let polar = unit(qn.apply(&kv));
    let (b1, b2) = line_basis(&polar);
    let (disc, roots) = line_conic_roots(&qn, &b1, &b2);
    let Some((p1, p2)) = roots else {
        return Ok(TangentPair::None);
    };
    let (p1, p2) = (HomogeneousPoint::try_new(p1[0], p1[1], p1[2])?, HomogeneousPoint::try_new(p2[0], p2[1], p2[2])?);
    if disc.abs() <= 1e-12 || p1 == p2 {
        return Ok(TangentPair::Double { q: p1.normalized() });
    }
    let (mut q1, mut q2) = (p1.normalized(), p2.normalized());
    if sort_key(&q2) < sort_key(&q1) {
        std::mem::swap(&mut q1, &mut q2);
    }
    let t1 = join(k, &q1)?;
    let t2 = join(k, &q2)?;
    Ok(TangentPair::TwoDistinct { q1, q2, t1, t2 })
}

pub fn tangent_lines_from(q: &QuadraticForm, k: &HomogeneousPoint) -> Result<(ProjectiveLine, ProjectiveLine)> {
    match tangency_points(q, k)? {
        TangentPair::TwoDistinct { t1, t2, .. } => Ok((t1, t2)),
        TangentPair::Double { .. } | TangentPair::None => Err(Error::NoTangents),
    }
}

/// A point inside the curve, used to pick consistent representatives of
/// tangency points that are ideal (or, in the elliptic plane, of all of them).
fn reference_point(spec: &ConicSpec) -> Result<[f64; 3]> {
    Ok(match spec.curve {
        Curve::Segment { .. } | Curve::Ellipse { .. } => [1.0, 0.0, 0.0],
        Curve::Hyperbola { .. } | Curve::Parabola { .. } => spec.marked_points()[0].coords(),
        Curve::Central { .. } => match classify_central(spec)? {
            CentralKind::Ellipse => [1.0, 0.0, 0.0],
            CentralKind::Hyperbola => spec.marked_points()[0].coords(),
        },
    })
}

/// Flip `p` onto the same side of the polar of `r` as `r` itself. On the
/// sphere over the projective plane this selects the copy of the conic that
/// surrounds `r`.
fn same_sheet(q: &QuadraticForm, r: &[f64; 3], p: [f64; 3]) -> [f64; 3] {
    let mr = q.apply(r);
    let side = crate::kernel::dot(&mr, r) * crate::kernel::dot(&mr, &p);
    if side < 0.0 {
        [-p[0], -p[1], -p[2]]
    } else {
        p
    }
}

/// Angle under which the curve is seen from `k`.
///
/// The measured angle is the one between the geodesic rays from `k` toward
/// the two tangency points (the segment endpoints for segments). In the
/// Euclidean and hyperbolic planes the rays are the chart segments. An
/// elliptic line through `k` reaches a point in both directions, so there the
/// rays run toward the tangency points on the copy of the curve around its
/// interior reference point, and the reported angle is the supplement of the
/// ray angle, i.e. the angle between the tangent lines on the far side of the
/// viewpoint. This is the angle the elliptic closed forms describe.
pub fn view_angle(spec: &ConicSpec, k: &HomogeneousPoint, convention: AngleConvention) -> Result<f64> {
    spec.validate()?;
    let g = spec.geometry;
    if k.is_ideal() {
        return Err(Error::IdealPoint);
    }
    if g == GeometryKind::Hyperbolic && classify_point(g, k)? != PointClass::Proper {
        return Err(Error::ImproperPoint);
    }
    let kv = k.normalized().coords();
    let reference = reference_point(spec)?;

    let (r1, r2, form) = match spec.curve {
        Curve::Segment { a } => {
            let (x, y) = (kv[1], kv[2]);
            if y.abs() <= 1e-14 * (1.0 + x.abs()) && x.abs() <= a {
                return Err(Error::OnCurve);
            }
            ([1.0, a, 0.0], [1.0, -a, 0.0], None)
        }
        _ => {
            let q = spec.quadratic_form()?;
            match tangency_points(&q, k)? {
                TangentPair::TwoDistinct { q1, q2, .. } => (q1.coords(), q2.coords(), Some(q)),
                _ => return Err(Error::NoTangents),
            }
        }
    };

    let orient = |p: [f64; 3]| -> [f64; 3] {
        let chart_ok = p[0].abs() > 1e-12 * norm(&p);
        match (g, &form) {
            (GeometryKind::Elliptic, Some(q)) => same_sheet(q, &reference, p),
            (_, _) if chart_ok => {
                if p[0] < 0.0 {
                    [-p[0], -p[1], -p[2]]
                } else {
                    p
                }
            }
            (_, Some(q)) => same_sheet(q, &reference, p),
            (_, None) => p,
        }
    };
    let (q1, q2) = (orient(r1), orient(r2));

    let theta = match g {
        GeometryKind::Euclidean => {
            // chart direction from k toward q, valid for ideal q as well
            let dir = |q: &[f64; 3]| (q[1] - q[0] * kv[1], q[2] - q[0] * kv[2]);
            let (ax, ay) = dir(&q1);
            let (bx, by) = dir(&q2);
            let c = (ax * bx + ay * by) / ((ax * ax + ay * ay) * (bx * bx + by * by)).sqrt();
            c.clamp(-1.0, 1.0).acos()
        }
        _ => ray_angle(g.epsilon()?, &kv, &q1, &q2),
    };
    let raw = if g == GeometryKind::Elliptic { PI - theta } else { theta };
    Ok(match convention {
        AngleConvention::Raw => raw,
        AngleConvention::CentralPair => raw.min(PI - raw),
    })
}
