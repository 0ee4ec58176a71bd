//! `qmink`: Minkowski products of unit quaternion sets from the command line.
//!
//! Exit codes: 0 success / property passed, 1 property failed, 2 usage,
//! 3 numeric domain error, 4 I/O.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qmink::oracle::{self, Projection, Property, VerifyParams};
use qmink::{product, Error, PointCloud, RotationSet};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "qmink", version, about = "Minkowski products of unit quaternion sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Closed-form product (or enclosing bound) of two sets, as JSON.
    Product {
        #[command(flatten)]
        operands: Operands,
        /// Write the JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a sampling check of one property; exits 1 if it fails.
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
    /// Sample a product, project it to R³ and write a point cloud.
    Export {
        #[command(flatten)]
        operands: Operands,
        #[arg(long, value_enum, default_value_t = Method::Bch)]
        method: Method,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long)]
        out: PathBuf,
        /// Output format; inferred from the file extension when omitted.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Project an S³ point cloud (CSV with a w,x,y,z header) to R³.
    Project {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Bch)]
        method: Method,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Args, Debug, Clone)]
struct Operands {
    /// Left operand descriptor, e.g. '{"type":"cap","center":[1,0,0,0],"t":0.5}'.
    #[arg(long, requires = "b", conflicts_with_all = ["file", "preset"])]
    a: Option<String>,
    /// Right operand descriptor.
    #[arg(long, requires = "a")]
    b: Option<String>,
    /// JSON file holding {"a": descriptor, "b": descriptor}.
    #[arg(long, conflicts_with = "preset")]
    file: Option<PathBuf>,
    #[arg(long, value_enum)]
    preset: Option<Preset>,
}

#[derive(Args, Debug, Clone)]
struct Sampling {
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// CAP_CLOSURE, CAP_SHARPNESS, ARC_SAME_AXIS, ARC_SURFACE_CAP, CORNER_MIN,
    /// AXISCAP_BOUND, AXISCAP_SHARP_HALFPI, BCH_CONSISTENCY,
    /// BOUNDARY_IN_PRODUCT_OF_BOUNDARIES or NECESSARY_FILTER (any case, '-' for '_').
    property: String,
    #[command(flatten)]
    sampling: Sampling,
    /// JSON file with property parameters; flags override its fields.
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long, value_parser = parse_array::<4>)]
    u0: Option<[f64; 4]>,
    #[arg(long, value_parser = parse_array::<4>)]
    v0: Option<[f64; 4]>,
    #[arg(long, value_parser = parse_array::<3>)]
    c1: Option<[f64; 3]>,
    #[arg(long, value_parser = parse_array::<3>)]
    c2: Option<[f64; 3]>,
    #[arg(long)]
    phi1: Option<f64>,
    #[arg(long)]
    phi2: Option<f64>,
    #[arg(long)]
    delta1: Option<f64>,
    #[arg(long)]
    delta2: Option<f64>,
    #[arg(long)]
    xi: Option<f64>,
    #[arg(long)]
    xi1: Option<f64>,
    #[arg(long)]
    xi2: Option<f64>,
    #[arg(long)]
    cases: Option<usize>,
    /// Violation tolerance; each property has its own default (1e-9 for
    /// membership checks).
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Stereo,
    Bch,
}

impl From<Method> for Projection {
    fn from(m: Method) -> Projection {
        match m {
            Method::Stereo => Projection::Stereo,
            Method::Bch => Projection::Bch,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Ply,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Preset {
    /// Great circles about ĵ and k̂.
    Example1,
    /// C(ĵ, 0, π/4) ⊗ S(k̂, π/8, π/8).
    Example3,
    /// S(ĵ, π/8, π/8) ⊗ S(k̂, π/8, π/8).
    Example5,
}

impl Preset {
    fn sets(self) -> Result<(RotationSet, RotationSet), Error> {
        let name = match self {
            Preset::Example1 => "example1",
            Preset::Example3 => "example3",
            Preset::Example5 => "example5",
        };
        oracle::preset(name)
    }
}

/// The fully resolved job, echoed into every JSON output.
#[derive(Debug, Serialize)]
struct JobConfig {
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<RotationSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<RotationSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    preset: Option<Preset>,
    #[serde(skip_serializing_if = "Option::is_none")]
    property: Option<Property>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    method: Option<Method>,
    #[serde(skip_serializing_if = "Option::is_none")]
    format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<PathBuf>,
    threads: usize,
}

impl JobConfig {
    fn new(command: &'static str) -> Self {
        JobConfig {
            command,
            a: None,
            b: None,
            preset: None,
            property: None,
            n: None,
            seed: None,
            method: None,
            format: None,
            input: None,
            out: None,
            threads: rayon::current_num_threads(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OperandFile {
    a: Value,
    b: Value,
}

enum Failure {
    Lib(Error),
    PropertyFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn parse_array<const N: usize>(s: &str) -> std::result::Result<[f64; N], String> {
    let trimmed = s.trim().trim_start_matches('[').trim_end_matches(']');
    let vals = trimmed
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("bad number '{p}': {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    vals.try_into().map_err(|v: Vec<f64>| format!("expected {N} comma-separated numbers, got {}", v.len()))
}

fn descriptor(json: &str) -> Outcome<RotationSet> {
    Ok(RotationSet::from_json(json)?)
}

fn resolve_operands(ops: &Operands, cfg: &mut JobConfig) -> Outcome<(RotationSet, RotationSet)> {
    let (a, b) = if let Some(p) = ops.preset {
        cfg.preset = Some(p);
        p.sets()?
    } else if let Some(path) = &ops.file {
        let text = std::fs::read_to_string(path).map_err(Error::from)?;
        let f: OperandFile =
            serde_json::from_str(&text).map_err(|e| Error::Usage(format!("bad operand file: {e}")))?;
        (descriptor(&f.a.to_string())?, descriptor(&f.b.to_string())?)
    } else {
        match (&ops.a, &ops.b) {
            (Some(a), Some(b)) => (descriptor(a)?, descriptor(b)?),
            _ => return Err(Error::Usage("give --a and --b, --file or --preset".into()).into()),
        }
    };
    cfg.a = Some(a);
    cfg.b = Some(b);
    Ok((a, b))
}

fn format_for(path: &Path, given: Option<Format>) -> Format {
    given.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("ply") => Format::Ply,
        _ => Format::Csv,
    })
}

fn write_cloud(cloud: &PointCloud, path: &Path, format: Format) -> Outcome<()> {
    let file = File::create(path).map_err(Error::from)?;
    let w = BufWriter::new(file);
    match format {
        Format::Csv => cloud.write_csv(w)?,
        Format::Ply => cloud.write_ply(w)?,
    }
    Ok(())
}

fn emit(value: &Value, out: Option<&Path>) -> Outcome<()> {
    let text = serde_json::to_string_pretty(value).expect("json value serializes");
    match out {
        Some(p) => std::fs::write(p, text + "\n").map_err(Error::from)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}").map_err(Error::from)?;
        }
    }
    Ok(())
}

fn cloud_summary(cloud: &PointCloud) -> Value {
    json!({
        "frame": cloud.frame,
        "points": cloud.len(),
        "dropped": cloud.dropped,
        "tags": cloud.tag_names,
        "max_radius": oracle::max_radius(cloud),
    })
}

fn verify_params(args: &VerifyArgs) -> Outcome<VerifyParams> {
    let mut p = match &args.params {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(Error::from)?;
            serde_json::from_str(&text).map_err(|e| Error::Usage(format!("bad params file: {e}")))?
        }
        None => VerifyParams::default(),
    };
    macro_rules! over {
        ($($f:ident),*) => { $( if args.$f.is_some() { p.$f = args.$f; } )* };
    }
    over!(s, t, u0, v0, c1, c2, phi1, phi2, delta1, delta2, xi, xi1, xi2, cases, tol);
    Ok(p)
}

fn run(cli: Cli) -> Outcome<()> {
    match cli.command {
        Command::Product { operands, out } => {
            let mut cfg = JobConfig::new("product");
            let (a, b) = resolve_operands(&operands, &mut cfg)?;
            cfg.out = out.clone();
            let result = product::product(&a, &b);
            emit(&json!({ "config": cfg, "result": result }), out.as_deref())
        }
        Command::Verify(args) => {
            let mut cfg = JobConfig::new("verify");
            let property: Property = args.property.parse()?;
            let params = verify_params(&args)?;
            cfg.property = Some(property);
            cfg.n = Some(args.sampling.n);
            cfg.seed = Some(args.sampling.seed);
            cfg.out = args.out.clone();
            let report = oracle::verify(property, &params, args.sampling.n, args.sampling.seed)?;
            let passed = report.passed;
            emit(&json!({ "config": cfg, "report": report }), args.out.as_deref())?;
            eprintln!("{property}: {}", if passed { "PASS" } else { "FAIL" });
            if passed {
                Ok(())
            } else {
                Err(Failure::PropertyFailed)
            }
        }
        Command::Export { operands, method, sampling, out, format } => {
            let mut cfg = JobConfig::new("export");
            let (a, b) = resolve_operands(&operands, &mut cfg)?;
            let format = format_for(&out, format);
            cfg.method = Some(method);
            cfg.n = Some(sampling.n);
            cfg.seed = Some(sampling.seed);
            cfg.format = Some(format);
            cfg.out = Some(out.clone());
            let cloud = oracle::product_cloud(&a, &b, sampling.n, sampling.seed)?;
            let projected = oracle::project_cloud(&cloud, method.into())?;
            write_cloud(&projected, &out, format)?;
            emit(&json!({ "config": cfg, "cloud": cloud_summary(&projected) }), None)
        }
        Command::Project { input, method, out, format } => {
            let mut cfg = JobConfig::new("project");
            let format = format_for(&out, format);
            cfg.method = Some(method);
            cfg.format = Some(format);
            cfg.input = Some(input.clone());
            cfg.out = Some(out.clone());
            let file = File::open(&input).map_err(Error::from)?;
            let cloud = PointCloud::read_csv(file, qmink::Frame::R3Bch)?;
            if cloud.frame != qmink::Frame::S3 {
                return Err(Error::Usage("input cloud must have a w,x,y,z header".into()).into());
            }
            let projected = oracle::project_cloud(&cloud, method.into())?;
            write_cloud(&projected, &out, format)?;
            emit(&json!({ "config": cfg, "cloud": cloud_summary(&projected) }), None)
        }
    }
}

fn configure_threads() -> std::result::Result<(), Error> {
    let Ok(v) = std::env::var("QMINK_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Error::Usage(format!("QMINK_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Usage(format!("cannot configure thread pool: {e}")))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Usage(_) => 2,
        Error::Domain(_) => 3,
        Error::Io(_) => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("qmink: {e}");
        return ExitCode::from(exit_code(&e));
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::PropertyFailed) => ExitCode::from(1),
        Err(Failure::Lib(e)) => {
            eprintln!("qmink: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
