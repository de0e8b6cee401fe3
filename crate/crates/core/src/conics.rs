//! Segments and proper conics in the model chart `x0 = 1`.
//!
//! Central conics of the non-Euclidean planes are given by the semimajor
//! axis `a` (a geodesic length) and the foci `(1, ±f, 0)`; parabolas by the
//! focus `(1, 0, p)` with the x-axis as directrix. Euclidean central conics
//! use the standard semi-axes `(a, b)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{cross, dot, norm, GeometryKind, HomogeneousPoint, ProjectiveLine};

/// Bound on `|implicit value|` (coefficients scaled to max 1) for a point to
/// count as lying on a conic.
pub const ON_CURVE_TOL: f64 = 1e-9;
/// Relative size of the y²-denominator below which a central conic is degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConicFamily {
    Segment,
    CentralConic,
    Parabola,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CentralKind {
    Ellipse,
    Hyperbola,
}

impl fmt::Display for CentralKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CentralKind::Ellipse => "Ellipse",
            CentralKind::Hyperbola => "Hyperbola",
        })
    }
}

/// Shape parameters of a curve. Which variants are allowed depends on the
/// geometry, see [`ConicSpec::new`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Curve {
    /// Segment between `(1, a, 0)` and `(1, -a, 0)`.
    Segment { a: f64 },
    /// Non-Euclidean ellipse or hyperbola with semimajor axis `a`, foci `(1, ±f, 0)`.
    Central { a: f64, f: f64 },
    /// Euclidean `x²/a² + y²/b² = 1`.
    Ellipse { a: f64, b: f64 },
    /// Euclidean `x²/a² - y²/b² = 1`.
    Hyperbola { a: f64, b: f64 },
    /// Focus `(1, 0, p)`, directrix the x-axis.
    Parabola { p: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConicSpec {
    pub geometry: GeometryKind,
    pub curve: Curve,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be a positive number, got {v}")))
    }
}

impl ConicSpec {
    pub fn new(geometry: GeometryKind, curve: Curve) -> Result<Self> {
        let spec = Self { geometry, curve };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        use GeometryKind::*;
        match (self.geometry, self.curve) {
            (g, Curve::Segment { a }) => {
                positive("a", a)?;
                if g == Hyperbolic && a > 1.0 {
                    return Err(Error::InvalidParameter(format!(
                        "hyperbolic segment needs 0 < a <= 1, got {a}"
                    )));
                }
                Ok(())
            }
            (Euclidean, Curve::Central { .. }) => Err(Error::InvalidParameter(
                "euclidean central conics are given by semi-axes a and b".into(),
            )),
            (g, Curve::Central { a, f }) => {
                positive("a", a)?;
                positive("f", f)?;
                if g == Hyperbolic && f >= 1.0 {
                    return Err(Error::InvalidParameter(format!(
                        "hyperbolic foci need 0 < f < 1, got {f}"
                    )));
                }
                if g == Elliptic && a >= std::f64::consts::FRAC_PI_2 {
                    return Err(Error::InvalidParameter(format!(
                        "elliptic semimajor axis needs a < pi/2, got {a}"
                    )));
                }
                Ok(())
            }
            (Euclidean, Curve::Ellipse { a, b } | Curve::Hyperbola { a, b }) => {
                positive("a", a)?;
                positive("b", b)
            }
            (g, Curve::Ellipse { .. } | Curve::Hyperbola { .. }) => Err(Error::InvalidParameter(
                format!("{g} central conics are given by a and the focus coordinate f"),
            )),
            (g, Curve::Parabola { p }) => {
                positive("p", p)?;
                if g == Hyperbolic && p >= 1.0 {
                    return Err(Error::ImproperFocus(p));
                }
                Ok(())
            }
        }
    }

    pub fn family(&self) -> ConicFamily {
        match self.curve {
            Curve::Segment { .. } => ConicFamily::Segment,
            Curve::Central { .. } | Curve::Ellipse { .. } | Curve::Hyperbola { .. } => {
                ConicFamily::CentralConic
            }
            Curve::Parabola { .. } => ConicFamily::Parabola,
        }
    }

    /// Distinguished points: foci, the parabola focus, or segment endpoints.
    /// Euclidean hyperbola foci and ellipse foci lie on the major axis.
    pub fn marked_points(&self) -> Vec<HomogeneousPoint> {
        match self.curve {
            Curve::Segment { a } => vec![HomogeneousPoint::affine(a, 0.0), HomogeneousPoint::affine(-a, 0.0)],
            Curve::Central { f, .. } => vec![HomogeneousPoint::affine(f, 0.0), HomogeneousPoint::affine(-f, 0.0)],
            Curve::Ellipse { a, b } => {
                let (big, small) = if a >= b { (a, b) } else { (b, a) };
                let c = (big * big - small * small).sqrt();
                if a >= b {
                    vec![HomogeneousPoint::affine(c, 0.0), HomogeneousPoint::affine(-c, 0.0)]
                } else {
                    vec![HomogeneousPoint::affine(0.0, c), HomogeneousPoint::affine(0.0, -c)]
                }
            }
            Curve::Hyperbola { a, b } => {
                let c = (a * a + b * b).sqrt();
                vec![HomogeneousPoint::affine(c, 0.0), HomogeneousPoint::affine(-c, 0.0)]
            }
            Curve::Parabola { p } => vec![HomogeneousPoint::affine(0.0, p)],
        }
    }

    /// The implicit equation of the curve; segments have none.
    pub fn quadratic_form(&self) -> Result<QuadraticForm> {
        match self.family() {
            ConicFamily::Segment => Err(Error::InvalidParameter("a segment has no conic equation".into())),
            ConicFamily::CentralConic => central_conic_form(self),
            ConicFamily::Parabola => parabola_form(self),
        }
    }
}

/// `xx·x² + xy·xy + yy·y² + x·x + y·y + c = 0` in the chart `x0 = 1`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
    pub x: f64,
    pub y: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AffineType {
    Ellipse,
    Hyperbola,
    Parabola,
}

impl QuadraticForm {
    pub fn new(xx: f64, xy: f64, yy: f64, x: f64, y: f64, c: f64) -> Result<Self> {
        let q = Self { xx, xy, yy, x, y, c };
        let coeffs = q.coefficients();
        if coeffs.iter().all(|v| *v == 0.0) || coeffs.iter().any(|v| !v.is_finite()) {
            return Err(Error::ZeroVector);
        }
        Ok(q)
    }

    pub fn coefficients(&self) -> [f64; 6] {
        [self.xx, self.xy, self.yy, self.x, self.y, self.c]
    }

    /// Symmetric matrix acting on homogeneous `(x0, x1, x2)`.
    pub fn matrix(&self) -> [[f64; 3]; 3] {
        [
            [self.c, 0.5 * self.x, 0.5 * self.y],
            [0.5 * self.x, self.xx, 0.5 * self.xy],
            [0.5 * self.y, 0.5 * self.xy, self.yy],
        ]
    }

    pub(crate) fn apply(&self, v: &[f64; 3]) -> [f64; 3] {
        let m = self.matrix();
        [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
    }

    /// `vᵀ M w`.
    pub(crate) fn bilinear(&self, v: &[f64; 3], w: &[f64; 3]) -> f64 {
        dot(v, &self.apply(w))
    }

    pub fn determinant(&self) -> f64 {
        let m = self.matrix();
        dot(&m[0], &cross(&m[1], &m[2]))
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.xx * x * x + self.xy * x * y + self.yy * y * y + self.x * x + self.y * y + self.c
    }

    /// Copy scaled so the largest coefficient has magnitude 1.
    pub fn normalized(&self) -> Self {
        let s = self.coefficients().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Self {
            xx: self.xx / s,
            xy: self.xy / s,
            yy: self.yy / s,
            x: self.x / s,
            y: self.y / s,
            c: self.c / s,
        }
    }

    /// Equality up to a nonzero factor.
    pub fn projectively_eq(&self, other: &Self, tol: f64) -> bool {
        let a = self.coefficients();
        let b = other.coefficients();
        let (i, _) = a
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |(bi, bv), (i, v)| if v.abs() > bv { (i, v.abs()) } else { (bi, bv) });
        if b[i] == 0.0 {
            return false;
        }
        let r = a[i] / b[i];
        let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        a.iter().zip(b.iter()).all(|(u, v)| (u - r * v).abs() <= tol * scale)
    }

    /// Type of the conic in the Euclidean sense, read off `xy² - 4·xx·yy`.
    pub fn affine_type(&self) -> AffineType {
        let q = self.normalized();
        let disc = q.xy * q.xy - 4.0 * q.xx * q.yy;
        if disc.abs() <= 1e-14 {
            AffineType::Parabola
        } else if disc < 0.0 {
            AffineType::Ellipse
        } else {
            AffineType::Hyperbola
        }
    }
}

impl PartialEq for QuadraticForm {
    fn eq(&self, other: &Self) -> bool {
        self.projectively_eq(other, 1e-12)
    }
}

fn y_denominator(geometry: GeometryKind, a: f64, f: f64) -> Result<f64> {
    match geometry {
        GeometryKind::Hyperbolic => Ok(1.0 + 1.0 / ((f * f - 1.0) * a.cosh().powi(2))),
        GeometryKind::Elliptic => Ok(1.0 / ((1.0 + f * f) * a.cos().powi(2)) - 1.0),
        GeometryKind::Euclidean => Err(Error::UnsupportedGeometry("euclidean")),
    }
}

pub fn central_conic_form(spec: &ConicSpec) -> Result<QuadraticForm> {
    spec.validate()?;
    match (spec.geometry, spec.curve) {
        (GeometryKind::Euclidean, Curve::Ellipse { a, b }) => QuadraticForm::new(1.0 / (a * a), 0.0, 1.0 / (b * b), 0.0, 0.0, -1.0),
        (GeometryKind::Euclidean, Curve::Hyperbola { a, b }) => {
            QuadraticForm::new(1.0 / (a * a), 0.0, -1.0 / (b * b), 0.0, 0.0, -1.0)
        }
        (g, Curve::Central { a, f }) => {
            let dy = y_denominator(g, a, f)?;
            if dy.abs() < DEGENERACY_TOL {
                return Err(Error::DegenerateConic(format!(
                    "vanishing y-axis denominator ({dy:e}) for a = {a}, f = {f}"
                )));
            }
            let t = match g {
                GeometryKind::Hyperbolic => a.tanh(),
                _ => a.tan(),
            };
            QuadraticForm::new(1.0 / (t * t), 0.0, 1.0 / dy, 0.0, 0.0, -1.0)
        }
        _ => Err(Error::InvalidParameter("not a central conic".into())),
    }
}

pub fn parabola_form(spec: &ConicSpec) -> Result<QuadraticForm> {
    let Curve::Parabola { p } = spec.curve else {
        return Err(Error::InvalidParameter("not a parabola".into()));
    };
    spec.validate()?;
    match spec.geometry {
        // x² + (1 - py)²/(1 - p²) = 1
        GeometryKind::Hyperbolic => {
            let k = 1.0 - p * p;
            QuadraticForm::new(1.0, 0.0, p * p / k, 0.0, -2.0 * p / k, 1.0 / k - 1.0)
        }
        // -x² + (1 + py)²/(1 + p²) = 1
        GeometryKind::Elliptic => {
            let k = 1.0 + p * p;
            QuadraticForm::new(-1.0, 0.0, p * p / k, 0.0, 2.0 * p / k, 1.0 / k - 1.0)
        }
        // x² + (y - p)² = y²
        GeometryKind::Euclidean => QuadraticForm::new(1.0, 0.0, 0.0, 0.0, -2.0 * p, p * p),
    }
}

/// Ellipse when `2a` exceeds the focal distance, hyperbola when it falls short.
///
/// For the projective geometries this is decided by the sign of the
/// y²-denominator of the conic's equation, which is equivalent to comparing
/// `cosh 2a` (resp. `cos 2a`) with the cosine of the focal distance measured
/// in the chart.
pub fn classify_central(spec: &ConicSpec) -> Result<CentralKind> {
    spec.validate()?;
    match spec.curve {
        Curve::Ellipse { .. } => Ok(CentralKind::Ellipse),
        Curve::Hyperbola { .. } => Ok(CentralKind::Hyperbola),
        Curve::Central { a, f } => {
            let dy = y_denominator(spec.geometry, a, f)?;
            if dy.abs() < DEGENERACY_TOL {
                Err(Error::DegenerateConic(format!(
                    "2a equals the focal distance (a = {a}, f = {f})"
                )))
            } else if dy > 0.0 {
                Ok(CentralKind::Ellipse)
            } else {
                Ok(CentralKind::Hyperbola)
            }
        }
        _ => Err(Error::InvalidParameter("not a central conic".into())),
    }
}

pub fn implicit_value(q: &QuadraticForm, p: &HomogeneousPoint) -> Result<f64> {
    let (x, y) = p.to_affine()?;
    Ok(q.eval(x, y))
}

/// The tangent line at an on-curve point, obtained as its polar line.
pub fn tangent_at(q: &QuadraticForm, p: &HomogeneousPoint) -> Result<ProjectiveLine> {
    let p = p.normalized();
    let qn = q.normalized();
    let value = implicit_value(&qn, &p)?;
    if value.abs() > ON_CURVE_TOL {
        return Err(Error::OffCurve(value));
    }
    let l = qn.apply(&p.coords());
    if norm(&l) <= 1e-12 * norm(&p.coords()) {
        return Err(Error::SingularPoint);
    }
    ProjectiveLine::try_new(l[0], l[1], l[2])
}
