use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tropsolve::liftgen::{LiftParams, DEFAULT_MAX_RETRIES};
use tropsolve::pipeline::io::read_problem;
use tropsolve::pipeline::io::RunReport;
use tropsolve::pipeline::{self, exit_code, parse_config, RunConfig};
use tropsolve::tracker::TrackerSettings;
use tropsolve::tropgeom::ingest_complex_file;
use tropsolve::{Error, Result};

#[derive(Parser)]
#[command(name = "tropsolve", version, about = "Tropical homotopy solver for generic members of linear systems on a variety")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem.v1 file and write a report.v1 JSON document.
    Solve(SolveArgs),
    /// Compute deg(X, L) from the tropical intersection alone.
    Count(CommonArgs),
    /// Write the tropical intersection points with multiplicities.
    TropIntersect(CommonArgs),
    /// Write the lifted family for the given seed.
    Lift(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Input problem (JSON, schema problem.v1).
    problem: PathBuf,
    /// trop(X) as a tropical_complex.v1 file; required when G′ has two or more polynomials.
    #[arg(long)]
    complex: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    lift_denominator: u64,
    /// Largest lift numerator; default 10 · N · max |Fᵢ|.
    #[arg(long)]
    lift_bound: Option<u64>,
    /// Fix the target coefficients independently of the lift seed.
    #[arg(long)]
    coefficient_seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_MAX_RETRIES)]
    max_retries: u32,
    #[arg(long)]
    threads: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// TOML file with a [tracker] section.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Per-path diagnostics, one JSON object per line.
    #[arg(long)]
    paths_jsonl: Option<PathBuf>,
    #[arg(long)]
    newton_tol: Option<f64>,
    #[arg(long)]
    max_newton_iters: Option<u32>,
    #[arg(long)]
    initial_step: Option<f64>,
    #[arg(long)]
    min_step: Option<f64>,
    #[arg(long)]
    max_steps: Option<u64>,
    #[arg(long)]
    endpoint_refine_iters: Option<u32>,
}

impl CommonArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            lift: LiftParams {
                seed: self.seed,
                lift_denominator: self.lift_denominator,
                lift_bound: self.lift_bound,
                coefficient_seed: self.coefficient_seed,
            },
            max_retries: self.max_retries,
            tracker: TrackerSettings::default(),
        }
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, format!("{text}\n"))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}")?;
        }
    }
    Ok(())
}

fn setup(common: &CommonArgs) -> Result<(tropsolve::reformulate::ProblemB, Option<tropsolve::tropgeom::TropicalComplex>)> {
    if let Some(n) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidProblem(format!("thread pool: {e}")))?;
    }
    let problem = read_problem(&common.problem)?;
    let complex = common.complex.as_deref().map(ingest_complex_file).transpose()?;
    Ok((problem, complex))
}

fn write_paths_jsonl(path: &Path, report: &RunReport) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    for p in &report.paths {
        writeln!(f, "{}", serde_json::to_string(p)?)?;
    }
    f.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve(args) => {
            let (problem, complex) = setup(&args.common)?;
            let mut config = args.common.config();
            if let Some(path) = &args.config {
                config.tracker = parse_config(&std::fs::read_to_string(path)?)?.tracker;
            }
            let t = &mut config.tracker;
            if let Some(v) = args.newton_tol {
                t.newton_tol = v;
            }
            if let Some(v) = args.max_newton_iters {
                t.max_newton_iters = v;
            }
            if let Some(v) = args.initial_step {
                t.initial_step = v;
            }
            if let Some(v) = args.min_step {
                t.min_step = v;
            }
            if let Some(v) = args.max_steps {
                t.max_steps = v;
            }
            if let Some(v) = args.endpoint_refine_iters {
                t.endpoint_refine_iters = v;
            }
            let report = pipeline::solve(&problem, complex.as_ref(), &config)?;
            if let Some(p) = &args.paths_jsonl {
                write_paths_jsonl(p, &report)?;
            }
            write_output(args.common.out.as_deref(), &report.to_json())
        }
        Command::Count(args) | Command::TropIntersect(args) => {
            let (problem, complex) = setup(&args)?;
            let report = pipeline::count(&problem, complex.as_ref(), &args.config())?;
            write_output(args.out.as_deref(), &serde_json::to_string_pretty(&report)?)
        }
        Command::Lift(args) => {
            let (problem, _) = setup(&args)?;
            let lift = pipeline::lift(&problem, &args.config())?;
            write_output(args.out.as_deref(), &serde_json::to_string_pretty(&lift)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tropsolve: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
