//! The `flatsurf` command line.
//!
//! Every command prints one JSON object carrying `version`, `command`,
//! `input_digest` and `seed` next to its own fields. `--format text` renders the
//! same object as `key: value` lines. Exit status is 0 on success, 1 on a domain
//! error (reported as `{"error": {"kind", "message"}}`) and 2 on a usage error.

use std::ffi::OsString;
use std::fmt::Display;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use flatsurf_core::fixtures::ALL;
use flatsurf_core::props::{run_property, Context, Property, PropertyReport, Subject, SuiteConfig};
use flatsurf_core::teich::{gb_residual, TeichError};
use flatsurf_core::{
    build_engine, chart_dimension, gb_membership, invariants, parse_curve, parse_lengths,
    parse_point, parse_spec, surface_curve_length, validate, DistanceEngine, FlatSurface, Geodesic,
    SurfaceCurve, Triangulation,
};
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable that takes precedence over `--seed`.
pub const SEED_ENV: &str = "FLATSURF_SEED";

#[derive(Parser, Debug)]
#[command(
    name = "flatsurf",
    version,
    about = "Flat cone metrics on glued triangle complexes"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Seed for randomized commands; FLATSURF_SEED overrides it.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Approx,
}

#[derive(Args, Debug)]
pub struct Surface {
    /// Gluing file.
    pub complex: PathBuf,
    /// Edge-length file.
    pub lengths: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a gluing file and report |V|, |E|, |F| and chi.
    Validate {
        complex: PathBuf,
        /// Also print the canonical serialization.
        #[arg(long)]
        emit_canonical: bool,
    },
    /// Vertex and edge classes of a gluing.
    Info { complex: PathBuf },
    /// Cone angles, area and Gauss-Bonnet residual.
    Angles(Surface),
    /// Gauss-Bonnet check, for a surface or for prescribed cone angles.
    Gb {
        complex: Option<PathBuf>,
        lengths: Option<PathBuf>,
        /// Comma-separated cone angles.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["complex", "lengths"], requires = "chi")]
        angles: Option<Vec<f64>>,
        #[arg(long, allow_hyphen_values = true, requires = "angles")]
        chi: Option<i64>,
    },
    /// Distance between two points given as <face>:<b1>,<b2>,<b3>.
    Dist {
        #[command(flatten)]
        surface: Surface,
        x: String,
        y: String,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Steiner points per edge for approximate queries.
        #[arg(long, default_value_t = flatsurf_core::engine::DEFAULT_REFINEMENT)]
        k: usize,
    },
    /// Length of a piecewise-linear curve under the surface metric.
    Length {
        #[command(flatten)]
        surface: Surface,
        curve: PathBuf,
        /// Maximum dyadic refinement depth.
        #[arg(long, default_value_t = flatsurf_core::curves::DEPTH_MAX)]
        depth: usize,
    },
    /// Dimension of the edge-length chart.
    Chart { complex: PathBuf },
    /// Isometry invariants computed from the edge lengths.
    Invariants(Surface),
    /// Randomized property suite on the bundled complexes.
    Proptest {
        /// Trials per property and complex.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Miswire the Steiner graph behind approximate queries.
        #[arg(long)]
        inject_fault: bool,
        /// Extra complex to include, with --lengths.
        #[arg(long, requires = "lengths")]
        complex: Option<PathBuf>,
        #[arg(long, requires = "complex")]
        lengths: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Info { .. } => "info",
            Command::Angles(_) => "angles",
            Command::Gb { .. } => "gb",
            Command::Dist { .. } => "dist",
            Command::Length { .. } => "length",
            Command::Chart { .. } => "chart",
            Command::Invariants(_) => "invariants",
            Command::Proptest { .. } => "proptest",
        }
    }
}

/// What the binary should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
struct Failure {
    kind: &'static str,
    message: String,
}

fn domain<E: Display>(kind: &'static str) -> impl Fn(E) -> Failure {
    move |e| Failure {
        kind,
        message: e.to_string(),
    }
}

/// Files read so far, hashed in order with length prefixes.
#[derive(Default)]
struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    fn feed(&mut self, bytes: &[u8]) {
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure {
            kind: "io",
            message: format!("{}: {e}", path.display()),
        })?;
        self.feed(text.as_bytes());
        Ok(text)
    }

    fn digest(&self) -> String {
        hex::encode(self.hasher.clone().finalize())
    }
}

fn load_triangulation(inputs: &mut Inputs, path: &Path) -> Result<Triangulation, Failure> {
    let text = inputs.read(path)?;
    let spec = parse_spec(&text).map_err(domain("parse"))?;
    validate(&spec).map_err(domain("validation"))
}

fn load_surface(inputs: &mut Inputs, s: &Surface) -> Result<FlatSurface, Failure> {
    let tri = load_triangulation(inputs, &s.complex)?;
    let text = inputs.read(&s.lengths)?;
    let lengths = parse_lengths(&tri, &text).map_err(domain("lengths"))?;
    FlatSurface::new(tri, lengths).map_err(domain("lengths"))
}

fn to_object<T: Serialize>(value: &T) -> Map<String, Value> {
    match serde_json::to_value(value).expect("reports serialize") {
        Value::Object(m) => m,
        other => Map::from_iter([("value".to_string(), other)]),
    }
}

fn counts(tri: &Triangulation) -> Map<String, Value> {
    to_object(&json!({
        "V": tri.vertex_count(),
        "E": tri.edge_count(),
        "F": tri.face_count(),
        "chi": tri.euler_char(),
    }))
}

fn angle_report(surface: &FlatSurface) -> Map<String, Value> {
    let report = surface.angle_report();
    let vertices: Vec<Value> = report
        .cone_angles
        .iter()
        .enumerate()
        .map(|(id, a)| json!({"id": id, "cone_angle": a}))
        .collect();
    to_object(&json!({
        "vertices": vertices,
        "area": report.area,
        "euler_char": surface.triangulation().euler_char(),
        "gb_residual": surface.gauss_bonnet_residual(),
    }))
}

/// Straight segments of a curve with 1-based faces.
fn segments(curve: &SurfaceCurve) -> Vec<Value> {
    curve
        .pieces
        .iter()
        .flat_map(|p| {
            p.points
                .windows(2)
                .map(|w| json!({"face": p.face + 1, "start": w[0].coords(), "end": w[1].coords()}))
        })
        .collect()
}

fn proptest_report(
    inputs: &mut Inputs,
    seed: u64,
    trials: usize,
    inject_fault: bool,
    extra: Option<(&Path, &Path)>,
) -> Result<Map<String, Value>, Failure> {
    for f in &ALL {
        inputs.feed(f.glue.as_bytes());
        inputs.feed(f.lengths.as_bytes());
    }
    let mut subjects = Subject::fixtures();
    if let Some((complex, lengths)) = extra {
        let surface = load_surface(
            inputs,
            &Surface {
                complex: complex.to_path_buf(),
                lengths: lengths.to_path_buf(),
            },
        )?;
        subjects.push(Subject::new(complex.display().to_string(), surface));
    }
    let cfg = SuiteConfig {
        seed,
        trials,
        inject_fault,
    };
    let mut reports: Vec<PropertyReport> = Vec::new();
    if trials > 0 {
        for (i, subject) in subjects.iter().enumerate() {
            let ctx = Context::new(subject, &cfg);
            reports.extend(
                Property::ALL
                    .iter()
                    .map(|&p| run_property(p, &ctx, i, &cfg)),
            );
        }
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    Ok(to_object(&json!({
        "trials": trials,
        "inject_fault": inject_fault,
        "subjects": subjects.iter().map(|s| s.name.clone()).collect::<Vec<_>>(),
        "passed": failed == 0,
        "failed": failed,
        "properties": reports,
    })))
}

fn execute(
    command: &Command,
    seed: u64,
    inputs: &mut Inputs,
) -> Result<Map<String, Value>, Failure> {
    match command {
        Command::Validate {
            complex,
            emit_canonical,
        } => {
            let tri = load_triangulation(inputs, complex)?;
            let mut out = counts(&tri);
            if *emit_canonical {
                out.insert("canonical".into(), tri.spec().canonical().to_text().into());
            }
            Ok(out)
        }
        Command::Info { complex } => {
            let tri = load_triangulation(inputs, complex)?;
            let mut out = counts(&tri);
            let vertices: Vec<Value> = tri
                .vertices()
                .map(|v| {
                    let corners: Vec<String> = tri
                        .vertex_corners(v)
                        .iter()
                        .map(ToString::to_string)
                        .collect();
                    json!({"id": v.0, "corners": corners})
                })
                .collect();
            let edges: Vec<Value> = tri
                .edges()
                .map(|e| {
                    let sides: Vec<String> =
                        tri.edge_sides(e).iter().map(ToString::to_string).collect();
                    json!({"id": e.0, "sides": sides})
                })
                .collect();
            out.insert("vertices".into(), vertices.into());
            out.insert("edges".into(), edges.into());
            Ok(out)
        }
        Command::Angles(s) => Ok(angle_report(&load_surface(inputs, s)?)),
        Command::Gb {
            complex,
            lengths,
            angles,
            chi,
        } => match (complex, lengths, angles, chi) {
            (_, _, Some(angles), Some(chi)) => {
                let text = angles
                    .iter()
                    .map(f64::to_string)
                    .collect::<Vec<_>>()
                    .join(",");
                inputs.feed(format!("{text};{chi}").as_bytes());
                let pass = gb_membership(angles, *chi).map_err(domain::<TeichError>("teich"))?;
                Ok(to_object(&json!({
                    "angles": angles,
                    "chi": chi,
                    "gb_residual": gb_residual(angles, *chi),
                    "pass": pass,
                })))
            }
            (Some(complex), Some(lengths), None, None) => {
                let surface = load_surface(
                    inputs,
                    &Surface {
                        complex: complex.clone(),
                        lengths: lengths.clone(),
                    },
                )?;
                let mut out = angle_report(&surface);
                let cones = surface.angle_report().cone_angles;
                let pass = gb_membership(&cones, surface.triangulation().euler_char())
                    .map_err(domain("teich"))?;
                out.insert("pass".into(), pass.into());
                Ok(out)
            }
            _ => Err(Failure {
                kind: "usage",
                message: "gb needs either <complex> <lengths> or --angles and --chi".into(),
            }),
        },
        Command::Dist {
            surface,
            x,
            y,
            mode,
            k,
        } => {
            let s = load_surface(inputs, surface)?;
            inputs.feed(format!("{x};{y};{mode:?};{k}").as_bytes());
            let tri = s.triangulation();
            let px = parse_point(tri, x).map_err(domain("point"))?;
            let py = parse_point(tri, y).map_err(domain("point"))?;
            let engine = build_engine(s, *k);
            let g: Geodesic = match mode {
                Mode::Exact => engine
                    .realize_geodesic(&px, &py)
                    .map_err(domain("engine"))?,
                Mode::Approx => engine.approx_geodesic(&px, &py, *k),
            };
            Ok(to_object(&json!({
                "distance": g.length,
                "mode": mode,
                "k": (*mode == Mode::Approx).then_some(*k),
                "path": segments(&g.curve),
            })))
        }
        Command::Length {
            surface,
            curve,
            depth,
        } => {
            let s = load_surface(inputs, surface)?;
            let text = inputs.read(curve)?;
            let c = parse_curve(s.triangulation(), &text).map_err(domain("curve"))?;
            let engine = DistanceEngine::new(s, Default::default());
            let report = surface_curve_length(&c, &engine, *depth).map_err(domain("curve"))?;
            let mut out = to_object(&report);
            out.insert("estimate".into(), report.estimate().into());
            Ok(out)
        }
        Command::Chart { complex } => {
            let tri = load_triangulation(inputs, complex)?;
            let dimension = chart_dimension(&tri).map_err(domain("teich"))?;
            Ok(to_object(&json!({ "dimension": dimension })))
        }
        Command::Invariants(s) => Ok(to_object(&invariants(&load_surface(inputs, s)?))),
        Command::Proptest {
            trials,
            inject_fault,
            complex,
            lengths,
        } => {
            let extra = complex.as_deref().zip(lengths.as_deref());
            proptest_report(inputs, seed, *trials, *inject_fault, extra)
        }
    }
}

fn render(value: &Map<String, Value>, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", Value::Object(value.clone())),
        Format::Text => value
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) if s.contains('\n') => format!("{k}:\n{}", s.trim_end()),
                Value::String(s) => format!("{k}: {s}"),
                other => format!("{k}: {other}"),
            })
            .map(|line| line + "\n")
            .collect(),
    }
}

/// The seed in force: `FLATSURF_SEED` if set, else `--seed`.
fn effective_seed(flag: u64) -> Result<u64, Failure> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Failure {
            kind: "usage",
            message: format!("{SEED_ENV}={v} is not an unsigned integer"),
        }),
        Err(_) => Ok(flag),
    }
}

/// Parse `args` (program name first) and run the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            let code = e.exit_code() as u8;
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), rendered)
            } else {
                (rendered, String::new())
            };
            return Output {
                code,
                stdout,
                stderr,
            };
        }
    };
    let mut inputs = Inputs::default();
    let seed = effective_seed(cli.seed);
    let shown = *seed.as_ref().unwrap_or(&cli.seed);
    let result = seed.and_then(|s| execute(&cli.command, s, &mut inputs));
    let mut out = Map::new();
    out.insert("version".into(), VERSION.into());
    out.insert("command".into(), cli.command.name().into());
    out.insert("input_digest".into(), inputs.digest().into());
    out.insert("seed".into(), shown.into());
    match result {
        Ok(report) => {
            out.extend(report);
            Output {
                code: 0,
                stdout: render(&out, cli.format),
                stderr: String::new(),
            }
        }
        Err(f) => {
            let code = if f.kind == "usage" { 2 } else { 1 };
            out.insert(
                "error".into(),
                json!({"kind": f.kind, "message": f.message}),
            );
            Output {
                code,
                stdout: render(&out, cli.format),
                stderr: format!("flatsurf: {}\n", f.message),
            }
        }
    }
}
