//! Command-line front end.

use std::ffi::OsString;
use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::conics::{classify_central, CentralKind, ConicSpec, Curve};
use crate::error::{Error, Result};
use crate::export::{export, ExportFormat, Scene};
use crate::isoptics::{existence_verdict, is_squared, isoptic_residual, IsopticQuery};
use crate::kernel::{GeometryKind, HomogeneousPoint};
use crate::tangents::{view_angle, AngleConvention};
use crate::tracer::{trace_isoptic, Viewport, DEFAULT_RESOLUTION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MATH: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "isoptic", version, about = "Isoptic curves of conics in the Euclidean, hyperbolic and elliptic planes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Trace an isoptic curve and write it as SVG, CSV or JSON.
    Trace {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        angle: AngleArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format; guessed from the file extension, else svg.
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Trace an isoptic and report the largest deviation of the measured
    /// viewing angle from alpha.
    OracleCheck {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        angle: AngleArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Tell whether the alpha-isoptic exists.
    Exists {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        angle: AngleArgs,
    },
    /// Tell whether a non-Euclidean central conic is an ellipse or a hyperbola.
    Classify {
        #[command(flatten)]
        curve: CurveArgs,
    },
    /// Evaluate the isoptic equation at a point.
    Residual {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        angle: AngleArgs,
        /// Chart coordinates `x,y`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GeometryArg {
    Euclidean,
    Hyperbolic,
    Elliptic,
}

impl From<GeometryArg> for GeometryKind {
    fn from(g: GeometryArg) -> Self {
        match g {
            GeometryArg::Euclidean => GeometryKind::Euclidean,
            GeometryArg::Hyperbolic => GeometryKind::Hyperbolic,
            GeometryArg::Elliptic => GeometryKind::Elliptic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConicArg {
    Segment,
    Ellipse,
    Hyperbola,
    Parabola,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Svg,
    Csv,
    Json,
}

impl From<FormatArg> for ExportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Svg => ExportFormat::Svg,
            FormatArg::Csv => ExportFormat::Csv,
            FormatArg::Json => ExportFormat::Json,
        }
    }
}

#[derive(Debug, Args)]
struct CurveArgs {
    #[arg(long, value_enum)]
    geometry: GeometryArg,
    /// Curve family; `classify` may omit it.
    #[arg(long, value_enum)]
    conic: Option<ConicArg>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    f: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<f64>,
}

#[derive(Debug, Args)]
struct AngleArgs {
    /// Viewing angle, radians unless --deg is given.
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long)]
    deg: bool,
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Grid cells per axis.
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    resolution: usize,
    /// `xmin,xmax,ymin,ymax` in chart coordinates.
    #[arg(long, allow_hyphen_values = true)]
    viewport: Option<String>,
}

fn required(name: &str, v: Option<f64>) -> Result<f64> {
    v.ok_or_else(|| Error::InvalidParameter(format!("--{name} is required for this curve")))
}

impl CurveArgs {
    fn spec(&self) -> Result<ConicSpec> {
        let g: GeometryKind = self.geometry.into();
        let conic = self.conic.ok_or_else(|| Error::InvalidParameter("--conic is required".into()))?;
        let curve = match (conic, g) {
            (ConicArg::Segment, _) => Curve::Segment { a: required("a", self.a)? },
            (ConicArg::Parabola, _) => Curve::Parabola { p: required("p", self.p)? },
            (ConicArg::Ellipse, GeometryKind::Euclidean) => {
                Curve::Ellipse { a: required("a", self.a)?, b: required("b", self.b)? }
            }
            (ConicArg::Hyperbola, GeometryKind::Euclidean) => {
                Curve::Hyperbola { a: required("a", self.a)?, b: required("b", self.b)? }
            }
            (ConicArg::Ellipse | ConicArg::Hyperbola, _) => {
                Curve::Central { a: required("a", self.a)?, f: required("f", self.f)? }
            }
        };
        let spec = ConicSpec::new(g, curve)?;
        if let Curve::Central { a, f } = curve {
            let kind = classify_central(&spec)?;
            let wanted = if conic == ConicArg::Ellipse { CentralKind::Ellipse } else { CentralKind::Hyperbola };
            if kind != wanted {
                return Err(Error::InvalidParameter(format!(
                    "a = {a}, f = {f} gives a {g} {kind}, not a {wanted}"
                )));
            }
        }
        Ok(spec)
    }

    /// Central conic for `classify`, where the family flag is optional.
    fn central_spec(&self) -> Result<ConicSpec> {
        let g: GeometryKind = self.geometry.into();
        match (g, self.conic) {
            (GeometryKind::Euclidean, _) | (_, Some(ConicArg::Segment | ConicArg::Parabola)) => {
                Err(Error::InvalidParameter("classify needs a non-euclidean central conic (--a and --f)".into()))
            }
            _ => ConicSpec::new(g, Curve::Central { a: required("a", self.a)?, f: required("f", self.f)? }),
        }
    }
}

impl AngleArgs {
    fn radians(&self) -> f64 {
        if self.deg {
            self.alpha.to_radians()
        } else {
            self.alpha
        }
    }
}

fn parse_numbers(text: &str, n: usize, what: &str) -> Result<Vec<f64>> {
    let vals: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidParameter(format!("{what}: {e}")))?;
    if vals.len() != n {
        return Err(Error::InvalidParameter(format!("{what} needs {n} comma separated numbers")));
    }
    Ok(vals)
}

/// Default region: the model disk, `[-3, 3]²` for elliptic scenes, and for
/// Euclidean scenes a square large enough for the curve's own size.
fn default_viewport(spec: &ConicSpec, n: usize) -> Result<Viewport> {
    match (spec.geometry, spec.curve) {
        (GeometryKind::Euclidean, c) => {
            let size = match c {
                Curve::Segment { a } => a,
                Curve::Ellipse { a, b } | Curve::Hyperbola { a, b } => a.max(b),
                Curve::Parabola { p } => p,
                Curve::Central { a, .. } => a,
            };
            Viewport::square((3.0f64).max(4.0 * size), n)
        }
        (g, _) => Viewport::default_for(g, n),
    }
}

impl GridArgs {
    fn viewport(&self, spec: &ConicSpec) -> Result<Viewport> {
        match &self.viewport {
            Some(text) => {
                let v = parse_numbers(text, 4, "--viewport")?;
                Viewport::new(v[0], v[1], v[2], v[3], self.resolution, self.resolution)
            }
            None => default_viewport(spec, self.resolution),
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_validation() {
        EXIT_USAGE
    } else {
        EXIT_MATH
    }
}

/// Runs the command line and returns the process exit code.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match run(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn query(curve: &CurveArgs, angle: &AngleArgs) -> Result<IsopticQuery> {
    IsopticQuery::new(curve.spec()?, angle.radians())
}

fn run(cmd: Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Trace { curve, angle, grid, out: path, format } => {
            let q = query(&curve, &angle)?;
            let vp = grid.viewport(&q.conic)?;
            let format = match (format, &path) {
                (Some(f), _) => f.into(),
                (None, Some(p)) => match p.extension().and_then(|e| e.to_str()) {
                    Some(ext) => ext.parse().unwrap_or(ExportFormat::Svg),
                    None => ExportFormat::Svg,
                },
                (None, None) => ExportFormat::Svg,
            };
            let (scene, traced) = Scene::for_query(&q, &vp)?;
            let bytes = export(&traced, &scene, format);
            match path {
                Some(p) => {
                    std::fs::write(&p, bytes)?;
                    writeln!(
                        out,
                        "wrote {} branches ({} vertices) to {}",
                        traced.branches.len(),
                        traced.vertex_count(),
                        p.display()
                    )?;
                    if traced.is_empty() {
                        let v = existence_verdict(&q)?;
                        writeln!(out, "no isoptic points in the viewport; {}", verdict_text(&v))?;
                    }
                }
                None => out.write_all(&bytes)?,
            }
        }
        Command::OracleCheck { curve, angle, grid } => {
            let q = query(&curve, &angle)?;
            let vp = grid.viewport(&q.conic)?;
            let traced = trace_isoptic(&q, &vp)?;
            let squared = is_squared(&q.conic);
            let mut worst = 0.0f64;
            for p in traced.points() {
                let theta = view_angle(&q.conic, &HomogeneousPoint::affine(p.x, p.y), AngleConvention::Raw)?;
                let d = if squared {
                    (theta - q.alpha).abs().min((theta - (PI - q.alpha)).abs())
                } else {
                    (theta - q.alpha).abs()
                };
                worst = worst.max(d);
            }
            writeln!(out, "vertices: {}", traced.vertex_count())?;
            writeln!(out, "branches: {}", traced.branches.len())?;
            writeln!(out, "max |view_angle - alpha|: {worst:e}")?;
        }
        Command::Exists { curve, angle } => {
            let v = existence_verdict(&query(&curve, &angle)?)?;
            writeln!(out, "{}", verdict_text(&v))?;
        }
        Command::Classify { curve } => {
            let kind = classify_central(&curve.central_spec()?)?;
            writeln!(out, "{kind}")?;
        }
        Command::Residual { curve, angle, point } => {
            let q = query(&curve, &angle)?;
            let v = parse_numbers(&point, 2, "--point")?;
            let r = isoptic_residual(&q, &HomogeneousPoint::affine(v[0], v[1]))?;
            writeln!(out, "{r:e}")?;
        }
    }
    Ok(())
}

fn verdict_text(v: &crate::isoptics::ExistenceVerdict) -> String {
    let head = if v.exists { "exists" } else { "not exists" };
    match v.forbidden_interval {
        Some((lo, hi)) => format!("{head}; forbidden interval ({lo}, {hi}); {}", v.condition_note),
        None => format!("{head}; {}", v.condition_note),
    }
}
