//! Isoptic curves of segments and conics in the Euclidean, hyperbolic and
//! elliptic planes.

pub mod cli;
pub mod conics;
pub mod error;
pub mod export;
pub mod isoptics;
pub mod kernel;
pub mod tangents;
pub mod tracer;

pub use error::{Error, Result};
pub use kernel::{GeometryKind, HomogeneousPoint, ProjectiveLine};
