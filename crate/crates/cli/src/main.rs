use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ehc_core::complexes::{ect, euler_bessel, euler_bessel_index, sublevel_transform, PlFunction};
use ehc_core::geometry::{AxisSign, LinearForm, OrthantCone, Vector};
use ehc_core::io::{parse_mesh, parse_scene, Mesh};
use ehc_core::kernels::Kernel;
use ehc_core::radon::{recover_pushforward, RecoveryParams};
use ehc_core::transforms::{grid_eval, unit_directions, TransformGrid};
use ehc_core::verify::{run_suite, Fault, VerifyConfig, SUITES};

#[derive(Parser)]
#[command(name = "ehc", version, about = "Exact hybrid transforms of constructible functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transform grid of a scene over directions × radii.
    Transform(TransformArgs),
    /// Euler characteristic curve of a mesh in one direction.
    Ect(EctArgs),
    /// Euler-Bessel transform of a mesh, by both evaluation routes.
    Bessel(BesselArgs),
    /// Sublevel-sets transform of a mesh over directions × radii.
    Sublevel(SublevelArgs),
    /// Recover a directional pushforward from Euler-Fourier samples.
    RadonRecover(RadonArgs),
    /// Run the randomized identity suites.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GridArgs {
    /// Kernel: laplace, neglaplace, fourier, gr, constant or ecb:a, with optional :window=a,b.
    #[arg(long, default_value = "laplace")]
    kernel: String,
    /// Number of evenly spread unit directions.
    #[arg(long, conflicts_with = "xi")]
    directions: Option<usize>,
    /// Explicit directions, `x,y;x,y`.
    #[arg(long, allow_hyphen_values = true)]
    xi: Option<String>,
    /// Radii as `start:end:steps` or a comma list.
    #[arg(long)]
    radii: Option<String>,
}

#[derive(Args)]
struct TransformArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EctArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    xi: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BesselArgs {
    #[arg(long)]
    input: PathBuf,
    /// Centers, `x,y;x,y`.
    #[arg(long, allow_hyphen_values = true)]
    center: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Filtration {
    /// Vertex coordinates of the embedding.
    Coords,
    /// The mesh's per-vertex values.
    Values,
}

#[derive(Args)]
struct SublevelArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_enum, default_value = "coords")]
    filtration: Filtration,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RadonArgs {
    #[arg(long)]
    input: PathBuf,
    /// Cone sign per axis (`neg`, `pos`), or one sign for every axis.
    #[arg(long, default_value = "neg")]
    gamma: String,
    #[arg(long, allow_hyphen_values = true)]
    xi: String,
    /// Evaluation points, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    #[arg(long = "A", default_value_t = 500.0)]
    truncation: f64,
    #[arg(long, default_value_t = 0.01)]
    ds: f64,
    #[arg(long, default_value_t = 1e-3)]
    delta: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    DualitySign,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    cases: usize,
    /// Restrict to the named suites (repeatable).
    #[arg(long)]
    suite: Vec<String>,
    #[arg(long, value_enum)]
    inject_fault: Option<FaultArg>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn other(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<ehc_core::Error> for Failure {
    fn from(e: ehc_core::Error) -> Self {
        match e {
            ehc_core::Error::InvalidInput(_) | ehc_core::Error::DimensionMismatch { .. } => {
                Failure::parse(e.to_string())
            }
            _ => Failure::other(e.to_string()),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::other(format!("{}: {e}", path.display())))
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::other(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_numbers(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Failure::parse(format!("not a number: `{x}`")))
        })
        .collect()
}

fn parse_points(s: &str) -> Result<Vec<Vec<f64>>, Failure> {
    s.split(';').filter(|p| !p.trim().is_empty()).map(parse_numbers).collect()
}

fn parse_radii(s: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [_] => parse_numbers(s),
        [a, b, n] => {
            let bad = || Failure::parse(format!("bad radius range `{s}`"));
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            let n: usize = n.trim().parse().map_err(|_| bad())?;
            Ok(match n {
                0 => return Err(bad()),
                1 => vec![a],
                _ => (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect(),
            })
        }
        _ => Err(Failure::parse(format!("bad radius range `{s}`"))),
    }
}

fn parse_kernel(s: &str) -> Result<Kernel, Failure> {
    s.parse::<Kernel>().map_err(|e| Failure::parse(e.to_string()))
}

fn grid_axes(grid: &GridArgs, dim: usize, default_radii: &str) -> Result<(Vec<LinearForm>, Vec<f64>), Failure> {
    let directions = match (&grid.xi, grid.directions) {
        (Some(xi), _) => parse_points(xi)?.into_iter().map(LinearForm::new).collect(),
        (None, Some(n)) => unit_directions(dim, n),
        (None, None) => unit_directions(dim, 8),
    };
    if directions.is_empty() {
        return Err(Failure::parse("empty direction set"));
    }
    if let Some(d) = directions.iter().find(|d| d.dim() != dim) {
        return Err(Failure::parse(format!("direction of dimension {} for input of dimension {dim}", d.dim())));
    }
    let radii = parse_radii(grid.radii.as_deref().unwrap_or(default_radii))?;
    Ok((directions, radii))
}

/// Exit 3 when more than half of the cells could not be evaluated.
fn grid_status(grid: &TransformGrid) -> u8 {
    let missing = grid.missing_count();
    if 2 * missing > grid.cell_count() {
        eprintln!("{missing} of {} cells are not integrable", grid.cell_count());
        3
    } else {
        0
    }
}

fn cmd_transform(args: &TransformArgs) -> Outcome {
    let phi = parse_scene(&read(&args.input)?)?;
    let kernel = parse_kernel(&args.grid.kernel)?;
    let (directions, radii) = grid_axes(&args.grid, phi.dimension(), "0.25:2:8")?;
    let grid = grid_eval(&phi, &kernel, &directions, &radii)?;
    emit(&args.output, &grid.to_csv())?;
    Ok(grid_status(&grid))
}

fn load_mesh(path: &PathBuf) -> Result<Mesh, Failure> {
    Ok(parse_mesh(&read(path)?)?)
}

fn cmd_ect(args: &EctArgs) -> Outcome {
    let mesh = load_mesh(&args.input)?;
    let xi = LinearForm::new(parse_numbers(&args.xi)?);
    let curve = ect(&mesh.complex, &xi)?;
    let mut out = String::from("t,jump\n");
    for (t, j) in curve.jumps() {
        let _ = writeln!(out, "{t},{j}");
    }
    emit(&args.output, &out)?;
    Ok(0)
}

fn cmd_bessel(args: &BesselArgs) -> Outcome {
    let mesh = load_mesh(&args.input)?;
    let dim = mesh.complex.vertices().first().map_or(0, |v| v.dim());
    let mut out = String::new();
    for i in 1..=dim {
        let _ = write!(out, "center_{i},");
    }
    out.push_str("euler_bessel,index_formula\n");
    for c in parse_points(&args.center)? {
        if c.len() != dim {
            return Err(Failure::parse(format!("center of dimension {} for mesh of dimension {dim}", c.len())));
        }
        let v = Vector::new(c);
        for x in v.coords() {
            let _ = write!(out, "{x},");
        }
        let _ = writeln!(
            out,
            "{},{}",
            euler_bessel(&mesh.complex, &v),
            euler_bessel_index(&mesh.complex, &v)
        );
    }
    emit(&args.output, &out)?;
    Ok(0)
}

fn cmd_sublevel(args: &SublevelArgs) -> Outcome {
    let mesh = load_mesh(&args.input)?;
    let z = &mesh.complex;
    let f: Vec<PlFunction> = match args.filtration {
        Filtration::Values => vec![mesh
            .values
            .clone()
            .ok_or_else(|| Failure::parse("mesh has no `values`"))?],
        Filtration::Coords => {
            let dim = z.vertices().first().map_or(0, |v| v.dim());
            (0..dim)
                .map(|i| PlFunction::new(z, z.vertices().iter().map(|v| v[i]).collect()))
                .collect::<ehc_core::Result<_>>()?
        }
    };
    let kernel = parse_kernel(&args.grid.kernel)?;
    let (directions, radii) = grid_axes(&args.grid, f.len(), "1")?;
    let values = directions
        .iter()
        .map(|d| {
            radii
                .iter()
                .map(|&r| sublevel_transform(z, &f, &d.scale(r), &kernel).ok())
                .collect()
        })
        .collect();
    let grid = TransformGrid {
        directions,
        radii,
        values,
    };
    emit(&args.output, &grid.to_csv())?;
    Ok(grid_status(&grid))
}

fn parse_cone(s: &str, dim: usize) -> Result<OrthantCone, Failure> {
    let sign = |x: &str| match x.trim() {
        "neg" => Ok(AxisSign::NonPositive),
        "pos" => Ok(AxisSign::NonNegative),
        other => Err(Failure::parse(format!("cone sign must be `neg` or `pos`, got `{other}`"))),
    };
    let signs: Vec<AxisSign> = s.split(',').map(sign).collect::<Result<_, _>>()?;
    match signs.len() {
        1 => Ok(OrthantCone::new(vec![signs[0]; dim])),
        n if n == dim => Ok(OrthantCone::new(signs)),
        n => Err(Failure::parse(format!("{n} cone signs for dimension {dim}"))),
    }
}

fn cmd_radon(args: &RadonArgs) -> Outcome {
    let phi = parse_scene(&read(&args.input)?)?;
    let cone = parse_cone(&args.gamma, phi.dimension())?;
    let xi = LinearForm::new(parse_numbers(&args.xi)?);
    if xi.dim() != phi.dimension() {
        return Err(Failure::parse("direction dimension does not match the scene"));
    }
    let params = RecoveryParams {
        truncation: args.truncation,
        step: args.ds,
        offset: args.delta,
    };
    let exact = phi.pushforward_linear(&xi)?;
    let mut out = String::from("t,recovered,exact\n");
    for t in parse_numbers(&args.t)? {
        let r = recover_pushforward(&phi, &cone, &xi, t, &params)?;
        let _ = writeln!(out, "{t},{r},{}", exact.evaluate(t));
    }
    emit(&args.output, &out)?;
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> Outcome {
    let config = VerifyConfig {
        seed: args.seed,
        cases: args.cases,
        fault: args.inject_fault.map(|FaultArg::DualitySign| Fault::DualitySign),
    };
    let names: Vec<&str> = if args.suite.is_empty() {
        SUITES.to_vec()
    } else {
        args.suite.iter().map(String::as_str).collect()
    };
    let mut failed = 0;
    for name in names {
        let r = run_suite(name, &config)?;
        println!(
            "{} {} cases={} failures={} max_deviation={:e} tolerance={:e}",
            if r.passed() { "PASS" } else { "FAIL" },
            r.name,
            r.cases,
            r.failures,
            r.max_deviation,
            r.tolerance
        );
        if let Some(why) = &r.first_failure {
            println!("  first failure: {why}");
        }
        failed += usize::from(!r.passed());
    }
    Ok(u8::from(failed > 0))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(n) = std::env::var("EHC_THREADS") {
        match n.parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = ehc_core::limit_threads(n) {
                    eprintln!("error: EHC_THREADS: {e}");
                }
            }
            _ => {
                eprintln!("error: EHC_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    let outcome = match &cli.command {
        Command::Transform(a) => cmd_transform(a),
        Command::Ect(a) => cmd_ect(a),
        Command::Bessel(a) => cmd_bessel(a),
        Command::Sublevel(a) => cmd_sublevel(a),
        Command::RadonRecover(a) => cmd_radon(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
