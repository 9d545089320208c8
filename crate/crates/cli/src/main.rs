use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use spatch::bezier::require_sabin;
use spatch::domain::{Barycentric, CoordScheme};
use spatch::fill::{self, Continuity};
use spatch::interior::MaskKind;
use spatch::labels::LabelClass;
use spatch::meshio;
use spatch::sample::generate_ribbon;
use spatch::verify::{self, CheckOptions};
use spatch::{Error, Vec2};

#[derive(Parser)]
#[command(name = "spatch", version, about = "Fill n-sided holes with G1 S-patches")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fill a ribbon file and write the S-patch net.
    Fill(FillArgs),
    /// Evaluate a net at one domain point.
    Eval(EvalArgs),
    /// Tessellate a net and write an OBJ mesh.
    Mesh(MeshArgs),
    /// Verify a net against its ribbon; exits 2 if any check fails.
    Check(CheckArgs),
    /// Print label counts of a net.
    Info(InfoArgs),
    /// Write a seeded random twist-compatible ribbon.
    Gen(GenArgs),
}

#[derive(Args)]
struct FillArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, short)]
    output: PathBuf,
    #[arg(long, default_value_t = Continuity::G1)]
    continuity: Continuity,
    /// Interior mask; defaults to harmonic for c0 and biharmonic for g1.
    #[arg(long)]
    mask: Option<MaskKind>,
    /// Relative tolerance for the ribbon's twist-compatibility checks.
    #[arg(long, default_value_t = verify::DEFAULT_TOL)]
    tolerance: f64,
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "point")]
struct EvalPoint {
    /// Barycentric coordinates `l1,...,ln` summing to 1.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    bary: Option<Vec<f64>>,
    /// Domain coordinates `x,y`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    uv: Option<Vec<f64>>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[command(flatten)]
    point: EvalPoint,
    #[arg(long, default_value_t = CoordScheme::Wachspress)]
    coords: CoordScheme,
}

#[derive(Args)]
struct MeshArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, short)]
    output: PathBuf,
    #[arg(long, default_value_t = 16)]
    resolution: usize,
    #[arg(long, default_value_t = CoordScheme::Wachspress)]
    coords: CoordScheme,
    #[arg(long)]
    no_normals: bool,
}

#[derive(Args)]
struct CheckArgs {
    /// Net file to verify.
    #[arg(long, short)]
    input: PathBuf,
    /// Ribbon the net was filled from.
    #[arg(long, short)]
    ribbon: PathBuf,
    /// Report path; standard output when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = Continuity::G1)]
    continuity: Continuity,
    #[arg(long, default_value_t = verify::DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = verify::DEFAULT_TOL)]
    tolerance: f64,
    /// Largest accepted normal angle (radians) at the smallest offset.
    #[arg(long, default_value_t = verify::DEFAULT_G1_TOL)]
    g1_tolerance: f64,
    #[arg(long, default_value_t = CoordScheme::Wachspress)]
    coords: CoordScheme,
}

#[derive(Args)]
struct InfoArgs {
    #[arg(long, short)]
    input: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Ribbon path; standard output when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

/// A failed run: exit code plus message for standard error.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) | Error::Parse(_) => 1,
            _ => 2,
        };
        Failure(code, e.to_string())
    }
}

type Run = Result<(), Failure>;

fn io_context(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| {
        let f = Failure::from(e);
        Failure(f.0, format!("{}: {}", path.display(), f.1))
    }
}

fn print(s: &str) -> Run {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{s}").map_err(|e| Failure(1, e.to_string()))
}

fn cmd_fill(a: FillArgs) -> Run {
    let mut r = meshio::read_ribbon(&a.input).map_err(io_context(&a.input))?;
    require_sabin(&mut r, a.tolerance)?;
    let mask = a.mask.unwrap_or(a.continuity.default_mask());
    let net = fill::fill(&r, a.continuity, mask)?;
    meshio::write_net(&net, &a.output).map_err(io_context(&a.output))?;
    let fixed = net
        .index()
        .iter()
        .filter(|s| match s.classify(net.depth()) {
            LabelClass::Boundary => true,
            LabelClass::PanelRing => a.continuity == Continuity::G1,
            LabelClass::Free => false,
        })
        .count();
    print(
        &json!({
            "n": net.n(),
            "d": r.degree(),
            "depth": net.depth(),
            "continuity": a.continuity.to_string(),
            "mask": mask.to_string(),
            "points": net.len(),
            "fixed": fixed,
            "free": net.len() - fixed,
        })
        .to_string(),
    )
}

fn cmd_eval(a: EvalArgs) -> Run {
    let net = meshio::read_net(&a.input).map_err(io_context(&a.input))?;
    let p = if let Some(values) = a.point.bary {
        if values.len() != net.n() {
            return Err(Error::DimensionMismatch {
                expected: net.n(),
                got: values.len(),
            }
            .into());
        }
        net.eval(&Barycentric::from_values(values, verify::DEFAULT_TOL)?)?
    } else {
        let uv = a.point.uv.expect("clap enforces one of --bary/--uv");
        if uv.len() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: uv.len() }.into());
        }
        net.eval_at_domain_point(Vec2::new(uv[0], uv[1]), a.coords)?
    };
    print(&json!([p.x, p.y, p.z]).to_string())
}

fn cmd_mesh(a: MeshArgs) -> Run {
    let net = meshio::read_net(&a.input).map_err(io_context(&a.input))?;
    let mesh = meshio::mesh_patch(&net, a.resolution, a.coords, !a.no_normals)?;
    if mesh.degenerate_normals > 0 {
        eprintln!("warning: {} vertices have degenerate normals (written as zero)", mesh.degenerate_normals);
    }
    meshio::write_obj(&mesh, &a.output).map_err(io_context(&a.output))?;
    print(&json!({"vertices": mesh.vertices.len(), "triangles": mesh.triangles.len()}).to_string())
}

fn cmd_check(a: CheckArgs) -> Run {
    let net = meshio::read_net(&a.input).map_err(io_context(&a.input))?;
    let r = meshio::read_ribbon(&a.ribbon).map_err(io_context(&a.ribbon))?;
    let opts = CheckOptions {
        samples: a.samples,
        scheme: a.coords,
        tolerance: a.tolerance,
        g1_tolerance: a.g1_tolerance,
        ..CheckOptions::default()
    };
    let report = verify::check(&net, &r, a.continuity, &opts)?;
    let text = report.to_json();
    match &a.output {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| io_context(path)(e.into()))?,
        None => print(&text)?,
    }
    if report.pass {
        Ok(())
    } else {
        Err(Failure(2, "check failed".into()))
    }
}

fn cmd_info(a: InfoArgs) -> Run {
    let net = meshio::read_net(&a.input).map_err(io_context(&a.input))?;
    let (mut boundary, mut ring, mut free) = (0, 0, 0);
    for s in net.index().iter() {
        match s.classify(net.depth()) {
            LabelClass::Boundary => boundary += 1,
            LabelClass::PanelRing => ring += 1,
            LabelClass::Free => free += 1,
        }
    }
    print(
        &json!({
            "n": net.n(),
            "depth": net.depth(),
            "points": net.len(),
            "boundary": boundary,
            "panel_ring": ring,
            "free": free,
        })
        .to_string(),
    )
}

fn cmd_gen(a: GenArgs) -> Run {
    let r = generate_ribbon(a.n, a.d, a.seed)?;
    match &a.output {
        Some(path) => meshio::write_ribbon(&r, path).map_err(io_context(path)),
        None => print(meshio::format_ribbon(&r)?.trim_end()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = spatch::with_thread_cap(move || match cli.command {
        Command::Fill(a) => cmd_fill(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Mesh(a) => cmd_mesh(a),
        Command::Check(a) => cmd_check(a),
        Command::Info(a) => cmd_info(a),
        Command::Gen(a) => cmd_gen(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("spatch: {msg}");
            ExitCode::from(code)
        }
    }
}
