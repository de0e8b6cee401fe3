//! Projective metric primitives for the hyperbolic and elliptic planes.
//!
//! Both planes live in the real projective plane. Points are homogeneous
//! triples `x = (x0, x1, x2)`, lines are dual triples `u = (u0, u1, u2)` and
//! a point lies on a line when `u·x = 0`. The metric comes from the bilinear
//! form `ε·x0·y0 + x1·y1 + x2·y2` with `ε = -1` (hyperbolic, proper points
//! inside the unit disk of the chart `x0 = 1`) or `ε = +1` (elliptic). The
//! signature matrix is its own inverse, so the same form measures lines.
//!
//! The Euclidean plane does not go through this module.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arguments of `acos`/`acosh` this close past their domain are clamped.
pub const CLAMP_TOL: f64 = 1e-12;
/// Relative bound on `|<x,x>|` for a hyperbolic point to count as absolute.
pub const ABSOLUTE_TOL: f64 = 1e-10;
/// Relative tolerance for projective equality and degenerate joins.
pub const PROJECTIVE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryKind {
    Euclidean,
    Hyperbolic,
    Elliptic,
}

impl GeometryKind {
    /// Signature parameter of the absolute form: -1 hyperbolic, +1 elliptic.
    pub fn epsilon(self) -> Result<f64> {
        match self {
            GeometryKind::Euclidean => Err(Error::UnsupportedGeometry(self.name())),
            GeometryKind::Hyperbolic => Ok(-1.0),
            GeometryKind::Elliptic => Ok(1.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GeometryKind::Euclidean => "euclidean",
            GeometryKind::Hyperbolic => "hyperbolic",
            GeometryKind::Elliptic => "elliptic",
        }
    }
}

impl fmt::Display for GeometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointClass {
    Proper,
    Absolute,
    Outer,
}

pub(crate) fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm(a: &[f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

fn projectively_equal(a: &[f64; 3], b: &[f64; 3]) -> bool {
    norm(&cross(a, b)) <= PROJECTIVE_TOL * norm(a) * norm(b)
}

fn ensure_nonzero(c: [f64; 3]) -> Result<[f64; 3]> {
    if c.iter().all(|v| *v == 0.0) || c.iter().any(|v| !v.is_finite()) {
        Err(Error::ZeroVector)
    } else {
        Ok(c)
    }
}

/// A point of the projective plane, determined up to a nonzero factor.
///
/// Equality is projective: `(1, 2, 3) == (-2, -4, -6)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HomogeneousPoint([f64; 3]);

impl HomogeneousPoint {
    /// Panics when all coordinates are zero; use [`HomogeneousPoint::try_new`]
    /// for unchecked input.
    pub fn new(x0: f64, x1: f64, x2: f64) -> Self {
        Self::try_new(x0, x1, x2).expect("homogeneous point with zero coordinates")
    }

    pub fn try_new(x0: f64, x1: f64, x2: f64) -> Result<Self> {
        ensure_nonzero([x0, x1, x2]).map(Self)
    }

    /// The point `(1, x, y)` of the affine chart.
    pub fn affine(x: f64, y: f64) -> Self {
        Self([1.0, x, y])
    }

    pub fn coords(&self) -> [f64; 3] {
        self.0
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(s * self.0[0], s * self.0[1], s * self.0[2])
    }

    pub fn is_ideal(&self) -> bool {
        self.0[0].abs() <= PROJECTIVE_TOL * norm(&self.0)
    }

    /// Chart coordinates `(x1/x0, x2/x0)`.
    pub fn to_affine(&self) -> Result<(f64, f64)> {
        if self.is_ideal() {
            return Err(Error::IdealPoint);
        }
        Ok((self.0[1] / self.0[0], self.0[2] / self.0[0]))
    }

    /// Representative with `x0 = 1`, or the original triple for ideal points.
    pub fn normalized(&self) -> Self {
        if self.is_ideal() {
            *self
        } else {
            Self([1.0, self.0[1] / self.0[0], self.0[2] / self.0[0]])
        }
    }
}

impl PartialEq for HomogeneousPoint {
    fn eq(&self, other: &Self) -> bool {
        projectively_equal(&self.0, &other.0)
    }
}

impl fmt::Display for HomogeneousPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.normalized().0;
        write!(f, "({}, {}, {})", c[0], c[1], c[2])
    }
}

/// A line in dual coordinates, determined up to a nonzero factor.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ProjectiveLine([f64; 3]);

impl ProjectiveLine {
    pub fn new(u0: f64, u1: f64, u2: f64) -> Self {
        Self::try_new(u0, u1, u2).expect("projective line with zero coordinates")
    }

    pub fn try_new(u0: f64, u1: f64, u2: f64) -> Result<Self> {
        ensure_nonzero([u0, u1, u2]).map(Self)
    }

    pub fn coords(&self) -> [f64; 3] {
        self.0
    }

    /// The incidence product `u·x`.
    pub fn incidence(&self, p: &HomogeneousPoint) -> f64 {
        dot(&self.0, &p.0)
    }

    /// `|u·x|` relative to the sizes of both triples.
    pub fn relative_incidence(&self, p: &HomogeneousPoint) -> f64 {
        self.incidence(p).abs() / (norm(&self.0) * norm(&p.0))
    }

    /// Representative whose first coordinate of significant size is positive.
    ///
    /// For lines missing the chart origin this is the `u0 > 0` orientation,
    /// the one in which the origin lies on the positive side.
    pub fn oriented(&self) -> Self {
        let scale = self.0.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let lead = self
            .0
            .iter()
            .copied()
            .find(|v| v.abs() > 1e-14 * scale)
            .unwrap_or(1.0);
        if lead < 0.0 {
            Self([-self.0[0], -self.0[1], -self.0[2]])
        } else {
            *self
        }
    }

    /// Chart direction `(dx, dy)` of the line.
    pub fn direction(&self) -> (f64, f64) {
        (self.0[2], -self.0[1])
    }
}

impl PartialEq for ProjectiveLine {
    fn eq(&self, other: &Self) -> bool {
        projectively_equal(&self.0, &other.0)
    }
}

impl fmt::Display for ProjectiveLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.0;
        write!(f, "[{}, {}, {}]", c[0], c[1], c[2])
    }
}

pub(crate) fn form3(eps: f64, a: &[f64; 3], b: &[f64; 3]) -> f64 {
    eps * a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn point_form(g: GeometryKind, x: &HomogeneousPoint, y: &HomogeneousPoint) -> Result<f64> {
    Ok(form3(g.epsilon()?, &x.0, &y.0))
}

pub fn line_form(g: GeometryKind, u: &ProjectiveLine, v: &ProjectiveLine) -> Result<f64> {
    Ok(form3(g.epsilon()?, &u.0, &v.0))
}

pub fn classify_point(g: GeometryKind, x: &HomogeneousPoint) -> Result<PointClass> {
    let eps = g.epsilon()?;
    if eps > 0.0 {
        return Ok(PointClass::Proper);
    }
    let q = form3(eps, &x.0, &x.0);
    let scale = dot(&x.0, &x.0);
    Ok(if q.abs() <= ABSOLUTE_TOL * scale {
        PointClass::Absolute
    } else if q < 0.0 {
        PointClass::Proper
    } else {
        PointClass::Outer
    })
}

fn clamped(value: f64, lo: f64, hi: f64) -> Option<f64> {
    if value < lo - CLAMP_TOL || value > hi + CLAMP_TOL || value.is_nan() {
        None
    } else {
        Some(value.clamp(lo, hi))
    }
}

/// Geodesic distance with curvature radius 1.
///
/// The normalized form is taken in absolute value, so the result does not
/// depend on the signs of the representatives. In the elliptic plane this
/// yields the metric of the plane itself (at most `π/2`).
pub fn distance(g: GeometryKind, x: &HomogeneousPoint, y: &HomogeneousPoint) -> Result<f64> {
    let eps = g.epsilon()?;
    for p in [x, y] {
        if classify_point(g, p)? != PointClass::Proper {
            return Err(Error::Domain(format!("{p} is not proper")));
        }
    }
    let xx = form3(eps, &x.0, &x.0);
    let yy = form3(eps, &y.0, &y.0);
    let c = form3(eps, &x.0, &y.0).abs() / (xx * yy).sqrt();
    if eps < 0.0 {
        let c = clamped(c, 1.0, f64::INFINITY)
            .ok_or_else(|| Error::Domain(format!("cosh argument {c} below 1")))?;
        Ok(c.acosh())
    } else {
        let c = clamped(c, 0.0, 1.0)
            .ok_or_else(|| Error::Domain(format!("cos argument {c} above 1")))?;
        Ok(c.acos())
    }
}

/// Angle in `[0, π]` between two lines.
///
/// Both lines are first brought to their [`ProjectiveLine::oriented`]
/// representative, which makes the angle independent of the scale factors.
pub fn line_angle(g: GeometryKind, u: &ProjectiveLine, v: &ProjectiveLine) -> Result<f64> {
    let eps = g.epsilon()?;
    let u = u.oriented();
    let v = v.oriented();
    let uu = form3(eps, &u.0, &u.0);
    let vv = form3(eps, &v.0, &v.0);
    let uv = form3(eps, &u.0, &v.0);
    if eps < 0.0 {
        let gram = uu * vv - uv * uv;
        if gram <= 0.0 {
            return Err(Error::NoProperAngle);
        }
    }
    let c = eps * uv / (uu * vv).sqrt();
    let c = clamped(c, -1.0, 1.0).ok_or(Error::NoProperAngle)?;
    Ok(c.acos())
}

/// The line through two distinct points.
pub fn join(p: &HomogeneousPoint, q: &HomogeneousPoint) -> Result<ProjectiveLine> {
    if projectively_equal(&p.0, &q.0) {
        return Err(Error::DegenerateJoin);
    }
    Ok(ProjectiveLine(cross(&p.0, &q.0)))
}

/// The intersection point of two distinct lines.
pub fn meet(u: &ProjectiveLine, v: &ProjectiveLine) -> Result<HomogeneousPoint> {
    if projectively_equal(&u.0, &v.0) {
        return Err(Error::DegenerateJoin);
    }
    Ok(HomogeneousPoint(cross(&u.0, &v.0)))
}

/// The polar of `p`: all points conjugate to `p` under the absolute form.
pub fn polar_line(g: GeometryKind, p: &HomogeneousPoint) -> Result<ProjectiveLine> {
    let eps = g.epsilon()?;
    Ok(ProjectiveLine([eps * p.0[0], p.0[1], p.0[2]]))
}

/// Inverse of [`polar_line`].
pub fn pole(g: GeometryKind, u: &ProjectiveLine) -> Result<HomogeneousPoint> {
    let eps = g.epsilon()?;
    Ok(HomogeneousPoint([eps * u.0[0], u.0[1], u.0[2]]))
}

/// Angle at `k` between the geodesic rays toward `q1` and `q2`, using the
/// given representatives: each ray leaves `k` along the tangent direction of
/// the arc to `q_i` through the projection `q_i - (<q_i,k>/<k,k>) k`.
///
/// In the hyperbolic plane with `k0, q0 > 0` these are the chart segments.
/// Signs of `q_i` matter, the sign of `k` does not.
pub(crate) fn ray_angle(eps: f64, k: &[f64; 3], q1: &[f64; 3], q2: &[f64; 3]) -> f64 {
    let kk = form3(eps, k, k);
    let tangent = |q: &[f64; 3]| {
        let t = form3(eps, q, k) / kk;
        [q[0] - t * k[0], q[1] - t * k[1], q[2] - t * k[2]]
    };
    let w1 = tangent(q1);
    let w2 = tangent(q2);
    let c = form3(eps, &w1, &w2) / (form3(eps, &w1, &w1) * form3(eps, &w2, &w2)).sqrt();
    c.clamp(-1.0, 1.0).acos()
}
