use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The operation only exists for the projective (non-Euclidean) geometries.
    #[error("operation is not defined for {0} geometry")]
    UnsupportedGeometry(&'static str),
    #[error("all homogeneous coordinates are zero")]
    ZeroVector,
    #[error("point is not a proper point of the model: {0}")]
    Domain(String),
    #[error("lines do not meet in a proper point")]
    NoProperAngle,
    #[error("points coincide, no unique joining line")]
    DegenerateJoin,
    #[error("conic degenerates: {0}")]
    DegenerateConic(String),
    #[error("focus is not a proper point (p = {0})")]
    ImproperFocus(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("point lies on the line at infinity of the affine chart")]
    IdealPoint,
    #[error("point is a singular point of the conic")]
    SingularPoint,
    #[error("point lies on the curve")]
    OnCurve,
    #[error("point does not lie on the curve (residual {0:e})")]
    OffCurve(f64),
    #[error("point is interior to the curve, no real tangents")]
    NoTangents,
    #[error("point is outside the hyperbolic model")]
    ImproperPoint,
    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Errors caused by bad user input rather than by the mathematics of a query.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::InvalidParameter(_) | Error::ImproperFocus(_) | Error::ZeroVector)
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
