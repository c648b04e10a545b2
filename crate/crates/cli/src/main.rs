//! `gld` command-line runner.
//!
//! Exit codes: 0 on success, 1 on a parameter or usage error, 2 on an I/O
//! error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gld::harness::{
    self, default_seed, run_experiment, run_single, summarize_traces, verify_geometry, write_csv,
    Algorithm, ExperimentSpec, RunRequest, GEOMETRY_COLUMNS, SUMMARY_COLUMNS,
};
use gld::objectives::TransformId;
use gld::{Error, SamplerKind};

#[derive(Debug, Parser)]
#[command(name = "gld", version, about = "Gradientless descent experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one optimizer on the quadratic f_{alpha,beta,n} and write its trace.
    Run(RunArgs),
    /// Run a named experiment from a JSON config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's worker count.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Monte Carlo sweep of the ball-intersection and cap bounds.
    VerifyGeometry {
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Probe the descent probability of a large fixed rung on f_{1,Q,n}.
    ProbeLowerBound {
        #[arg(long, value_delimiter = ',', default_value = "100")]
        dim: Vec<usize>,
        #[arg(long, default_value_t = 10.0)]
        q: f64,
        #[arg(long)]
        rung: Option<f64>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Aggregate trace CSVs into one summary row per cell.
    Summarize {
        #[arg(required = true)]
        traces: Vec<PathBuf>,
        #[arg(long)]
        target: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value_t = AlgoArg::GldFast)]
    algo: AlgoArg,
    #[arg(long, default_value_t = 10)]
    dim: usize,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Smoothness; defaults to alpha * q, or 8 when q is also absent.
    #[arg(long)]
    beta: Option<f64>,
    /// Condition number beta / alpha.
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 100_000)]
    max_evals: u64,
    #[arg(long)]
    target_gap: Option<f64>,
    #[arg(long, value_enum, default_value_t = TransformArg::Identity)]
    transform: TransformArg,
    #[arg(long, value_enum, default_value_t = SamplerArg::UniformBall)]
    sampler: SamplerArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgoArg {
    GldSearch,
    GldFast,
    Ars,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TransformArg {
    Identity,
    NegExpNegSqrt,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SamplerArg {
    UniformBall,
    Gaussian,
}

impl RunArgs {
    fn request(&self) -> gld::Result<RunRequest> {
        let beta = match (self.beta, self.q) {
            (Some(b), Some(q)) if (b - self.alpha * q).abs() > 1e-12 * b.abs().max(1.0) => {
                return Err(Error::Parameter(format!(
                    "beta={b} disagrees with alpha*q={}",
                    self.alpha * q
                )))
            }
            (Some(b), _) => b,
            (None, Some(q)) => self.alpha * q,
            (None, None) => 8.0,
        };
        Ok(RunRequest {
            algorithm: match self.algo {
                AlgoArg::GldSearch => Algorithm::GldSearch,
                AlgoArg::GldFast => Algorithm::GldFast,
                AlgoArg::Ars => Algorithm::Ars,
            },
            dim: self.dim,
            alpha: self.alpha,
            beta,
            seed: self.seed.unwrap_or_else(|| default_seed(0)),
            max_evals: self.max_evals,
            target_gap: self.target_gap,
            transform: match self.transform {
                TransformArg::Identity => TransformId::Identity,
                TransformArg::NegExpNegSqrt => TransformId::NegExpNegSqrt,
            },
            sampler: match self.sampler {
                SamplerArg::UniformBall => SamplerKind::UniformBall,
                SamplerArg::Gaussian => SamplerKind::Gaussian,
            },
            output: self.out.clone(),
        })
    }
}

fn run(command: Command) -> gld::Result<()> {
    match command {
        Command::Run(args) => {
            let rows = run_single(&args.request()?)?;
            if let Some(last) = rows.last() {
                println!(
                    "{} iterations, {} evaluations, best value {:e}, status {}",
                    last.iteration, last.evaluations, last.best_value, last.status
                );
            }
            println!("wrote {}", args.out.display());
        }
        Command::Experiment { config, jobs } => {
            let mut spec = ExperimentSpec::from_json_file(&config)?;
            if let Some(j) = jobs {
                spec.jobs = j;
            }
            let report = run_experiment(&spec)?;
            println!(
                "{}: {} runs ({} failed), {} rows -> {}",
                spec.name,
                report.runs,
                report.failed_runs,
                report.rows,
                report.output.display()
            );
            if let Some(s) = report.summary {
                println!("summary -> {}", s.display());
            }
        }
        Command::VerifyGeometry { samples, seed, out } => {
            let rows = verify_geometry(samples, seed.unwrap_or_else(|| default_seed(0)))?;
            write_geometry(&out, &rows)?;
        }
        Command::ProbeLowerBound {
            dim,
            q,
            rung,
            samples,
            seed,
            out,
        } => {
            let seed = seed.unwrap_or_else(|| default_seed(0));
            let rows = harness::grids::lower_bound_rows("LowerBoundProbe", &dim, q, rung, samples, seed)?;
            for r in &rows {
                println!(
                    "{} n={} rung={:e} estimate={:e} stderr={:e} satisfied={}",
                    r.check,
                    r.dim,
                    r.rung.unwrap_or(f64::NAN),
                    r.estimate,
                    r.stderr.unwrap_or(f64::NAN),
                    r.satisfied
                );
            }
            write_geometry(&out, &rows)?;
        }
        Command::Summarize { traces, target, out } => {
            let rows = summarize_traces(&traces, target)?;
            write_csv(&out, &SUMMARY_COLUMNS, &rows)?;
            println!("{} cells -> {}", rows.len(), out.display());
        }
    }
    Ok(())
}

fn write_geometry(out: &Path, rows: &[harness::GeometryRow]) -> gld::Result<()> {
    write_csv(out, &GEOMETRY_COLUMNS, rows)?;
    let failed = rows.iter().filter(|r| !r.satisfied).count();
    println!("{} rows ({} unsatisfied) -> {}", rows.len(), failed, out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_io() { 2 } else { 1 })
        }
    }
}
