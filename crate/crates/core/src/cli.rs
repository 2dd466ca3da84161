//! Command-line entry points.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or parse error, 3 numerical
//! error. Diagnostics go to standard error. `TVDEPTH_THREADS` caps the worker
//! pool (unset or 0 uses every core).

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::data::FunctionalDataset;
use crate::depth::{DepthProfile, WeightChoice};
use crate::error::{Error, Result};
use crate::io::report::{to_json_writer, ReportDocument, ReportMeta};
use crate::io::{write_geometry, write_truth, write_wide_csv, InputDescriptor, InputFormat};
use crate::outliers::{boxplot_geometry, detect, DetectionConfig};
use crate::sim::{bench, simulate, BenchConfig, BenchTable, Method, ModelId, ModelSpec};

pub const THREADS_ENV: &str = "TVDEPTH_THREADS";

#[derive(Debug, Parser)]
#[command(name = "tvdepth", version, about = "Total variation depth and outlier detection for functional data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Per-curve TVD and MSV as CSV.
    Depth(DepthArgs),
    /// Shape and magnitude outliers as a JSON report.
    Detect(DetectArgs),
    /// Curves from one of the simulation models as wide CSV.
    Simulate(SimulateArgs),
    /// Monte-Carlo TPR/FPR table over simulation models.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Input file or directory; `-` reads CSV from standard input.
    input: PathBuf,
    /// Input format; defaults to pgm_dir for directories and wide_csv otherwise.
    #[arg(long, value_enum)]
    format: Option<InputFormat>,
    /// Keep every K-th grid point.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    stride: u64,
    /// Grid-point weights for the depth.
    #[arg(long, value_enum, default_value_t = WeightChoice::Sd)]
    weight: WeightChoice,
}

#[derive(Debug, Args)]
struct DepthArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DetectArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 3.0)]
    shape_factor: f64,
    #[arg(long, default_value_t = 1.5)]
    mag_factor: f64,
    /// Central region size as a fraction of the sample.
    #[arg(long, default_value_t = 0.5)]
    central: f64,
    /// Also write the boxplot geometry JSON here.
    #[arg(long)]
    geometry: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=7))]
    model: u8,
    #[arg(long = "n", default_value_t = 100)]
    n: usize,
    #[arg(long = "m", default_value_t = 50)]
    m: usize,
    #[arg(long, default_value_t = 0.1)]
    contamination: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Wide CSV destination (standard output if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Truth-label sidecar; defaults to `<out stem>.truth.csv` when --out is given.
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Models as a list of numbers and ranges, e.g. `1-7` or `2,4,6`.
    #[arg(long, default_value = "1-7")]
    models: String,
    #[arg(long, default_value_t = 200)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "tvd_msv,mbd_fbplot")]
    methods: String,
    #[arg(long = "n", default_value_t = 100)]
    n: usize,
    #[arg(long = "m", default_value_t = 50)]
    m: usize,
    #[arg(long, default_value_t = 0.1)]
    contamination: f64,
    #[arg(long, default_value_t = 3.0)]
    shape_factor: f64,
    #[arg(long, default_value_t = 1.5)]
    mag_factor: f64,
    #[arg(long, default_value_t = 0.5)]
    central: f64,
    /// Write JSON instead of CSV (implied by a `.json` --out path).
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Runs the CLI on the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_io(argv, &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with_io<I, T>(
    argv: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 1;
        }
    };
    match execute(cli.command, &pool, stdin, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn thread_pool() -> std::result::Result<rayon::ThreadPool, String> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| format!("{THREADS_ENV} must be a nonnegative integer, got {v:?}"))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| e.to_string())
}

fn execute(
    command: Command,
    pool: &rayon::ThreadPool,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<()> {
    match command {
        Command::Depth(args) => cmd_depth(args, pool, stdin, stdout, stderr),
        Command::Detect(args) => cmd_detect(args, pool, stdin, stdout, stderr),
        Command::Simulate(args) => cmd_simulate(args, pool, stdout),
        Command::Bench(args) => cmd_bench(args, pool, stdout),
    }
}

fn load(args: &InputArgs, stdin: &mut dyn Read) -> Result<(InputDescriptor, FunctionalDataset)> {
    let desc = InputDescriptor::new(&args.input, args.format, args.stride as usize)?;
    let ds = desc.load_with_stdin(stdin)?;
    Ok((desc, ds))
}

/// Runs `f` with the requested weights, retrying with uniform weights when sd
/// weights are degenerate.
fn with_weight_fallback<T>(
    choice: WeightChoice,
    stderr: &mut dyn Write,
    warnings: &mut Vec<String>,
    mut f: impl FnMut(WeightChoice) -> Result<T>,
) -> Result<(T, WeightChoice)> {
    match f(choice) {
        Err(Error::DegenerateWeights) if choice == WeightChoice::Sd => {
            let msg = "every grid point has zero spread; falling back to uniform weights";
            writeln!(stderr, "warning: {msg}")?;
            warnings.push(msg.to_string());
            Ok((f(WeightChoice::Uniform)?, WeightChoice::Uniform))
        }
        other => other.map(|v| (v, choice)),
    }
}

/// Standard output for `None`, otherwise a freshly created file.
fn sink<'a>(path: Option<&Path>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    match path {
        None => Ok(Box::new(stdout)),
        Some(p) => {
            let f = File::create(p).map_err(|e| Error::file(p, e))?;
            Ok(Box::new(BufWriter::new(f)))
        }
    }
}

fn cmd_depth(
    args: DepthArgs,
    pool: &rayon::ThreadPool,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<()> {
    let (_, ds) = load(&args.input, stdin)?;
    let mut warnings = Vec::new();
    let (profile, _) = with_weight_fallback(args.input.weight, stderr, &mut warnings, |w| {
        pool.install(|| DepthProfile::compute(&ds, w))
    })?;
    let mut out = sink(args.out.as_deref(), stdout)?;
    writeln!(out, "curve,tvd,msv")?;
    for (j, (t, s)) in profile.tvd.iter().zip(&profile.msv).enumerate() {
        writeln!(out, "{j},{t},{s}")?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_detect(
    args: DetectArgs,
    pool: &rayon::ThreadPool,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<()> {
    let (desc, ds) = load(&args.input, stdin)?;
    let base = DetectionConfig {
        shape_factor: args.shape_factor,
        magnitude_factor: args.mag_factor,
        central_proportion: args.central,
        weight_choice: args.input.weight,
    };
    let mut warnings = Vec::new();
    let (report, weight) = with_weight_fallback(base.weight_choice, stderr, &mut warnings, |w| {
        let cfg = DetectionConfig {
            weight_choice: w,
            ..base
        };
        pool.install(|| detect(&ds, &cfg))
    })?;
    let config = DetectionConfig {
        weight_choice: weight,
        ..base
    };
    let mut meta = ReportMeta::new(ds.n(), ds.m(), config);
    meta.input = Some(desc);
    meta.warnings = warnings;
    let doc = ReportDocument::new(&report, meta);
    if let Some(path) = &args.geometry {
        write_geometry(&boxplot_geometry(&ds, &report), path)?;
    }
    to_json_writer(&doc, sink(args.out.as_deref(), stdout)?)
}

fn truth_path_for(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "simulated".into());
    out.with_file_name(format!("{stem}.truth.csv"))
}

fn cmd_simulate(args: SimulateArgs, pool: &rayon::ThreadPool, stdout: &mut dyn Write) -> Result<()> {
    let spec = ModelSpec {
        model: ModelId::new(args.model)?,
        n: args.n,
        m: args.m,
        contamination: args.contamination,
        seed: args.seed,
    };
    let sim = pool.install(|| simulate(&spec))?;
    write_wide_csv(&sim.dataset, sink(args.out.as_deref(), stdout)?)?;
    let truth_path = args
        .truth
        .or_else(|| args.out.as_deref().map(truth_path_for));
    if let Some(p) = truth_path {
        let f = File::create(&p).map_err(|e| Error::file(&p, e))?;
        write_truth(&sim.truth, BufWriter::new(f))?;
    }
    Ok(())
}

/// Parses `1-3,5` style lists.
pub fn parse_model_list(s: &str) -> Result<Vec<ModelId>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (ModelId, ModelId) = (a.parse()?, b.parse()?);
                if a > b {
                    return Err(Error::InvalidData(format!("empty model range {part:?}")));
                }
                out.extend((a.get()..=b.get()).map(|k| ModelId::new(k).expect("in range")));
            }
            None => out.push(part.parse()?),
        }
    }
    out.dedup();
    if out.is_empty() {
        return Err(Error::InvalidData("no models given".into()));
    }
    Ok(out)
}

pub fn parse_method_list(s: &str) -> Result<Vec<Method>> {
    let methods: Vec<Method> = s
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    if methods.is_empty() {
        return Err(Error::InvalidData("no methods given".into()));
    }
    Ok(methods)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_bench_csv<W: Write>(table: &BenchTable, mut w: W) -> Result<()> {
    writeln!(
        w,
        "model,method,reps,tpr_mean,tpr_sd,tpr_count,fpr_mean,fpr_sd,fpr_count"
    )?;
    for r in &table.rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.model,
            r.method,
            r.reps,
            fmt_opt(r.tpr.mean),
            fmt_opt(r.tpr.sd),
            r.tpr.count,
            fmt_opt(r.fpr.mean),
            fmt_opt(r.fpr.sd),
            r.fpr.count
        )?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_bench(args: BenchArgs, pool: &rayon::ThreadPool, stdout: &mut dyn Write) -> Result<()> {
    let cfg = BenchConfig {
        models: parse_model_list(&args.models)?,
        reps: args.reps,
        base_seed: args.seed,
        n: args.n,
        m: args.m,
        contamination: args.contamination,
        detection: DetectionConfig {
            shape_factor: args.shape_factor,
            magnitude_factor: args.mag_factor,
            central_proportion: args.central,
            weight_choice: WeightChoice::Sd,
        },
        methods: parse_method_list(&args.methods)?,
    };
    let table = pool.install(|| bench(&cfg))?;
    let json = args.json
        || args
            .out
            .as_deref()
            .and_then(|p| p.extension())
            .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let out = sink(args.out.as_deref(), stdout)?;
    if json {
        to_json_writer(&table, out)
    } else {
        write_bench_csv(&table, out)
    }
}
