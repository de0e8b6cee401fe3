//! Closed-form isoptic equations, orthoptic curves and existence predicates.
//!
//! Every family is written as `cos α = N / √D` (or `cos² α = N² / D` for the
//! squared families, whose zero set is the α and the π - α isoptic
//! together). The residual of a point is `N - cos α·√D`, resp.
//! `N² - cos² α·D`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::conics::{classify_central, CentralKind, ConicSpec, Curve, QuadraticForm, ON_CURVE_TOL};
use crate::error::{Error, Result};
use crate::kernel::{classify_point, GeometryKind, HomogeneousPoint, PointClass, ProjectiveLine};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsopticQuery {
    pub conic: ConicSpec,
    pub alpha: f64,
}

impl IsopticQuery {
    pub fn new(conic: ConicSpec, alpha: f64) -> Result<Self> {
        let q = Self { conic, alpha };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        self.conic.validate()?;
        if !(self.alpha > 0.0 && self.alpha < PI) {
            return Err(Error::InvalidParameter(format!("alpha must lie in (0, pi), got {}", self.alpha)));
        }
        Ok(())
    }
}

/// `true` for the families whose equation only fixes `cos² α`.
pub fn is_squared(spec: &ConicSpec) -> bool {
    matches!(spec.curve, Curve::Central { .. } | Curve::Hyperbola { .. })
}

/// Length scale used to make the Euclidean residuals dimensionless.
fn euclidean_scale(spec: &ConicSpec) -> f64 {
    match spec.curve {
        Curve::Segment { a } => a,
        Curve::Ellipse { a, b } | Curve::Hyperbola { a, b } => a.max(b),
        Curve::Parabola { p } => p,
        Curve::Central { .. } => 1.0,
    }
}

/// Numerator and denominator of the family's isoptic equation at `(x, y)`.
fn parts(spec: &ConicSpec, x: f64, y: f64) -> (f64, f64) {
    use GeometryKind::*;
    let (x2, y2) = (x * x, y * y);
    match (spec.geometry, spec.curve) {
        (Euclidean, c) => {
            let s = euclidean_scale(spec);
            let (x, y) = (x / s, y / s);
            let (x2, y2) = (x * x, y * y);
            match c {
                Curve::Segment { .. } => (x2 + y2 - 1.0, ((1.0 - x).powi(2) + y2) * ((1.0 + x).powi(2) + y2)),
                Curve::Ellipse { a, b } => {
                    let (a2, b2) = ((a / s).powi(2), (b / s).powi(2));
                    (
                        -(a2 + b2 - x2 - y2),
                        (-a2 + b2 + x2).powi(2) + 2.0 * y2 * (a2 - b2 + x2) + y2 * y2,
                    )
                }
                Curve::Hyperbola { a, b } => {
                    let (a2, b2) = ((a / s).powi(2), (b / s).powi(2));
                    (
                        -a2 + b2 + x2 + y2,
                        (a2 + b2 - x2).powi(2) + 2.0 * y2 * (a2 + b2 + x2) + y2 * y2,
                    )
                }
                Curve::Parabola { .. } => (-y, (1.0 - y).powi(2) + x2),
                Curve::Central { .. } => unreachable!("validated"),
            }
        }
        (g, Curve::Segment { a }) => {
            let e = if g == Hyperbolic { -1.0 } else { 1.0 };
            let a2 = a * a;
            let n = e * (e * a2 * y2 - y2 + a2 - x2);
            let d = (e * a2 * y2 + y2 + (a - x).powi(2)) * (e * a2 * y2 + y2 + (a + x).powi(2));
            (n, d)
        }
        (Hyperbolic, Curve::Central { a, f }) => {
            let (f2, k) = (f * f, f * f - 1.0);
            let c2 = (2.0 * a).cosh();
            (
                k * c2 * (x2 + y2 - 1.0) + f2 * x2 - 1.0,
                -2.0 * k * y2 * (f2 + x2) + (f2 - x2).powi(2) + k * k * y2 * y2,
            )
        }
        (Elliptic, Curve::Central { a, f }) => {
            let (f2, k) = (f * f, 1.0 + f * f);
            let c2 = (2.0 * a).cos();
            (
                k * c2 * (x2 + y2 + 1.0) + f2 * x2 - 1.0,
                2.0 * k * y2 * (f2 + x2) + (f2 - x2).powi(2) + k * k * y2 * y2,
            )
        }
        (Hyperbolic, Curve::Parabola { p }) => {
            (y * (p * y - 1.0), (x2 - 1.0) * (p * p * (x2 - 1.0) + 2.0 * p * y - y2 - x2))
        }
        (Elliptic, Curve::Parabola { p }) => {
            (y * (p * y + 1.0), (x2 + 1.0) * (p * p * (x2 + 1.0) - 2.0 * p * y + y2 + x2))
        }
        (_, Curve::Ellipse { .. } | Curve::Hyperbola { .. }) => unreachable!("validated"),
    }
}

/// Checks that `(x, y)` is an admissible viewpoint and returns its chart
/// coordinates.
fn admissible(spec: &ConicSpec, p: &HomogeneousPoint) -> Result<(f64, f64)> {
    let (x, y) = p.to_affine()?;
    if spec.geometry == GeometryKind::Hyperbolic && classify_point(spec.geometry, p)? != PointClass::Proper {
        return Err(Error::Domain(format!("({x}, {y}) is not inside the unit disk")));
    }
    match spec.curve {
        Curve::Segment { a } => {
            if y == 0.0 && x.abs() <= a {
                return Err(Error::OnCurve);
            }
        }
        _ => {
            let q = spec.quadratic_form()?.normalized();
            let v = q.eval(x, y);
            if v.abs() <= ON_CURVE_TOL {
                return Err(Error::OnCurve);
            }
            if q.determinant() * v > 0.0 {
                return Err(Error::NoTangents);
            }
        }
    }
    Ok((x, y))
}

/// Value of the family's isoptic equation at `p`, zero on the isoptic.
///
/// Hyperbolic viewpoints must lie in the open unit disk. Points on the conic
/// give [`Error::OnCurve`], points inside it [`Error::NoTangents`].
pub fn isoptic_residual(query: &IsopticQuery, p: &HomogeneousPoint) -> Result<f64> {
    query.validate()?;
    let (x, y) = admissible(&query.conic, p)?;
    let (n, d) = parts(&query.conic, x, y);
    if !(d > 0.0) {
        return Err(Error::OnCurve);
    }
    let c = query.alpha.cos();
    Ok(if is_squared(&query.conic) { n * n - c * c * d } else { n - c * d.sqrt() })
}

/// The value `cos α` (or `|cos α|` for the squared families) the equation
/// assigns to `p`.
pub fn isoptic_cosine(spec: &ConicSpec, p: &HomogeneousPoint) -> Result<f64> {
    spec.validate()?;
    let (x, y) = admissible(spec, p)?;
    let (n, d) = parts(spec, x, y);
    if !(d > 0.0) {
        return Err(Error::OnCurve);
    }
    let c = n / d.sqrt();
    Ok(if is_squared(spec) { c.abs() } else { c })
}

/// One sign-changing factor of an isoptic residual, suitable for tracing.
///
/// A squared residual `N² - c²D` never changes sign where `c = 0` and only
/// touches zero, so it is split into `N - c√D` and `N + c√D`. The value is
/// NaN outside the admissible region (inside or on the conic or segment,
/// off the disk).
#[derive(Debug, Clone, Copy)]
pub struct BranchResidual {
    spec: ConicSpec,
    form: Option<(QuadraticForm, f64)>,
    cos: f64,
}

impl BranchResidual {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        if self.spec.geometry == GeometryKind::Hyperbolic && x * x + y * y >= 1.0 {
            return f64::NAN;
        }
        match (&self.form, self.spec.curve) {
            (Some((q, det)), _) => {
                let v = q.eval(x, y);
                if v.abs() <= ON_CURVE_TOL || det * v > 0.0 {
                    return f64::NAN;
                }
            }
            // the isoptic passes through the endpoints, where no angle is defined
            (None, Curve::Segment { a }) if y == 0.0 && x.abs() <= a => return f64::NAN,
            _ => {}
        }
        let (n, d) = parts(&self.spec, x, y);
        if !(d > 0.0) {
            return f64::NAN;
        }
        n - self.cos * d.sqrt()
    }

    pub fn spec(&self) -> &ConicSpec {
        &self.spec
    }
}

/// The factors whose union of zero sets is the isoptic of `query`.
pub fn branch_residuals(query: &IsopticQuery) -> Result<Vec<BranchResidual>> {
    query.validate()?;
    let spec = query.conic;
    let form = match spec.curve {
        Curve::Segment { .. } => None,
        _ => {
            let q = spec.quadratic_form()?.normalized();
            Some((q, q.determinant().signum()))
        }
    };
    let c = query.alpha.cos();
    let mut out = vec![BranchResidual { spec, form, cos: c }];
    if is_squared(&spec) && c.abs() > 1e-15 {
        out.push(BranchResidual { spec, form, cos: -c });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Orthoptic {
    Conic { form: QuadraticForm },
    Lines { lines: Vec<ProjectiveLine> },
    NotExists { reason: String },
}

fn diagonal(xx: f64, yy: f64, c: f64) -> Result<QuadraticForm> {
    QuadraticForm::new(xx, 0.0, yy, 0.0, 0.0, c)
}

/// `A x² + C y² + F = 0` has a real point.
fn has_real_points(a: f64, c: f64, f: f64) -> bool {
    if a == 0.0 && c == 0.0 {
        return f == 0.0;
    }
    !((a >= 0.0 && c >= 0.0 && f > 0.0) || (a <= 0.0 && c <= 0.0 && f < 0.0))
}

/// The locus of viewpoints seeing the curve under a right angle.
pub fn orthoptic_curve(conic: &ConicSpec) -> Result<Orthoptic> {
    use GeometryKind::*;
    conic.validate()?;
    let g = conic.geometry;
    Ok(match conic.curve {
        Curve::Segment { a } => {
            let e = match g {
                Euclidean => 0.0,
                Hyperbolic => -1.0,
                Elliptic => 1.0,
            };
            Orthoptic::Conic { form: diagonal(1.0, 1.0 - e * a * a, -a * a)? }
        }
        Curve::Ellipse { a, b } => Orthoptic::Conic { form: diagonal(1.0, 1.0, -(a * a + b * b))? },
        Curve::Hyperbola { a, b } => {
            if a > b {
                Orthoptic::Conic { form: diagonal(1.0, 1.0, -(a * a - b * b))? }
            } else {
                Orthoptic::NotExists { reason: format!("needs a > b, got a = {a}, b = {b}") }
            }
        }
        Curve::Central { a, f } if g == Hyperbolic => {
            let c2 = (2.0 * a).cosh();
            let bound = (1.0 - 1.0 / c2).sqrt();
            if classify_central(conic)? == CentralKind::Hyperbola && f > bound {
                Orthoptic::NotExists { reason: format!("needs f <= sqrt(1 - 1/cosh(2a)) = {bound}, got f = {f}") }
            } else {
                let k = (f * f - 1.0) * c2;
                Orthoptic::Conic { form: diagonal(k + f * f, k, -k - 1.0)? }
            }
        }
        Curve::Central { a, f } => {
            let k = (1.0 + f * f) * (2.0 * a).cos();
            let (xx, yy, c) = (k + f * f, k, k - 1.0);
            if has_real_points(xx, yy, c) {
                Orthoptic::Conic { form: diagonal(xx, yy, c)? }
            } else {
                Orthoptic::NotExists { reason: "the orthoptic equation has no real points".into() }
            }
        }
        Curve::Parabola { p } => Orthoptic::Lines {
            lines: match g {
                Euclidean => vec![ProjectiveLine::new(0.0, 0.0, 1.0)],
                Hyperbolic => vec![ProjectiveLine::new(0.0, 0.0, 1.0), ProjectiveLine::new(-1.0, 0.0, p)],
                Elliptic => vec![ProjectiveLine::new(0.0, 0.0, 1.0), ProjectiveLine::new(1.0, 0.0, p)],
            },
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExistenceVerdict {
    pub exists: bool,
    pub forbidden_interval: Option<(f64, f64)>,
    pub condition_note: String,
}

impl ExistenceVerdict {
    fn always(note: &str) -> Self {
        Self { exists: true, forbidden_interval: None, condition_note: note.into() }
    }

    fn interval(alpha: f64, lo: f64, hi: f64, note: String) -> Self {
        Self { exists: !(alpha > lo && alpha < hi), forbidden_interval: Some((lo, hi)), condition_note: note }
    }
}

fn acos_clamped(c: f64) -> f64 {
    c.clamp(-1.0, 1.0).acos()
}

/// Whether the α-isoptic has real points, with the forbidden α interval
/// when there is one.
pub fn existence_verdict(query: &IsopticQuery) -> Result<ExistenceVerdict> {
    use GeometryKind::*;
    query.validate()?;
    let alpha = query.alpha;
    let spec = query.conic;
    Ok(match (spec.geometry, spec.curve) {
        (Euclidean, Curve::Hyperbola { a, b }) if b > a => {
            let s = a * a + b * b;
            let (lo, hi) = (acos_clamped((b * b - a * a) / s), acos_clamped((a * a - b * b) / s));
            ExistenceVerdict::interval(alpha, lo, hi, "b > a: no isoptic for alpha in the interval".into())
        }
        (Hyperbolic, Curve::Central { a, f }) => {
            let f2 = f * f;
            let sech2 = 1.0 / a.cosh().powi(2);
            if (1.0 / (1.0 - f2) + 1.0) * sech2 > 2.0 {
                let c2 = (2.0 * a).cosh();
                let lo = acos_clamped(((f2 - 1.0) * c2 + 1.0) / f2);
                let hi = acos_clamped(((1.0 - f2) * c2 - 1.0) / f2);
                ExistenceVerdict::interval(
                    alpha,
                    lo,
                    hi,
                    "(1/(1-f^2) + 1) sech^2(a) > 2: no isoptic for alpha in the interval".into(),
                )
            } else {
                ExistenceVerdict::always("exists for every alpha in (0, pi)")
            }
        }
        (Elliptic, Curve::Central { a, f }) if classify_central(&spec)? == CentralKind::Hyperbola => {
            elliptic_hyperbola_verdict(alpha, a, f)
        }
        _ => ExistenceVerdict::always("exists for every alpha in (0, pi)"),
    })
}

/// Elliptic hyperbola condition, evaluated as stated without a derivation.
fn elliptic_hyperbola_verdict(alpha: f64, a: f64, f: f64) -> ExistenceVerdict {
    let f2 = f * f;
    let k = (1.0 + f2) * (2.0 * a).cos();
    let note = "stated condition, evaluated without its derivation (ignoring the discussion)";
    let cos_bound = ((1.0 - k) / f2).max(f2 + k);
    if alpha.cos() > cos_bound {
        return ExistenceVerdict {
            exists: false,
            forbidden_interval: None,
            condition_note: format!("{note}; cos(alpha) exceeds {cos_bound}"),
        };
    }
    let c2 = (2.0 * a).cos();
    let escape = a >= PI / 6.0 || (c2 > 0.0 && f <= (1.0 / c2 - 1.0).sqrt());
    if escape {
        return ExistenceVerdict::always(note);
    }
    let lo = acos_clamped((k - 1.0) / f2);
    let hi = acos_clamped((1.0 - k) / f2);
    if lo < hi {
        ExistenceVerdict::interval(alpha, lo, hi, note.into())
    } else {
        ExistenceVerdict::always(note)
    }
}

/// `x² + y²/cos²(α/2) = 1`, the limit of the segment isoptics as the
/// endpoints approach the absolute.
pub fn limit_segment_curve(alpha: f64) -> Result<QuadraticForm> {
    if !(alpha > 0.0 && alpha < PI) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, pi), got {alpha}")));
    }
    diagonal(1.0, 1.0 / (alpha / 2.0).cos().powi(2), -1.0)
}
