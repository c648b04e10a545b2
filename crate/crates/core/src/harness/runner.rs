use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use crate::baselines::{apply_misestimation, ars_run, misestimated_condition_bound, ArsConfig, MisestimationKind, MisestimationVariant};
use crate::error::{Error, Result};
use crate::gld::{gld_fast_run, gld_search_run, GldFastConfig, GldSearchConfig, RunControl, RunTrace};
use crate::objectives::{
    build_low_rank, build_quadratic, wrap_monotone, BenchmarkFunction, BenchmarkKind, LowRankComposite, Objective,
    ObjectiveOracle, TransformId,
};
use crate::sampling::{SamplerKind, SeededRng};

use super::grids;
use super::rows::{CsvSink, GeometryRow, TraceRow, GEOMETRY_COLUMNS, SUMMARY_COLUMNS, TRACE_COLUMNS};
use super::spec::{Algorithm, ExperimentName, ExperimentSpec};
use super::summary::summarize_rows;

/// `(1/√n)(1, ..., 1)`.
pub fn standard_start(n: usize) -> Vec<f64> {
    vec![1.0 / (n as f64).sqrt(); n]
}

/// Diameter `√Q` of the search region for the quadratic suite.
pub fn standard_diameter(q: f64) -> f64 {
    q.sqrt()
}

/// Target on the `g ∘ f` gap scale matching a gap `t` of `f`, for
/// `g(y) = -exp(-√y)` and `f* = 0`.
pub fn gap_equivalent_target(transform: TransformId, target: f64) -> f64 {
    match transform {
        TransformId::NegExpNegSqrt => 1.0 - (-target.sqrt()).exp(),
        _ => target,
    }
}

pub(crate) const DEFAULT_MIN_RADIUS_RATIO: f64 = 1e-4;
const DEFAULT_GEOMETRY_SAMPLES: u64 = 100_000;
const DEFAULT_DESCENT_SAMPLES: u64 = 10_000;

#[derive(Debug, Clone, PartialEq)]
enum Problem {
    Quadratic(TransformId),
    LowRank { latent_dim: usize, delta: f64 },
    Benchmark(BenchmarkKind),
}

#[derive(Debug, Clone, PartialEq)]
enum Solver {
    Search { latent: bool },
    Fast { condition_bound: f64, latent: bool },
    Ars { alpha_hat: f64, beta_hat: f64 },
}

/// One fully specified optimizer run.
#[derive(Debug, Clone, PartialEq)]
struct RunPlan {
    algorithm: String,
    variant: String,
    dim: usize,
    seed: u64,
    problem: Problem,
    solver: Solver,
}

/// Settings shared by every run of an experiment.
#[derive(Debug, Clone)]
struct RunContext {
    experiment: String,
    alpha: f64,
    beta: f64,
    max_evals: u64,
    target_gap: Option<f64>,
    sampler: SamplerKind,
    min_radius_ratio: f64,
    record_every: u64,
}

impl RunContext {
    fn q(&self) -> f64 {
        self.beta / self.alpha
    }
}

fn base_solver(algorithm: Algorithm, ctx: &RunContext, latent: bool) -> Solver {
    match algorithm {
        Algorithm::GldSearch => Solver::Search { latent },
        Algorithm::GldFast => Solver::Fast {
            condition_bound: ctx.q(),
            latent,
        },
        Algorithm::Ars => Solver::Ars {
            alpha_hat: ctx.alpha,
            beta_hat: ctx.beta,
        },
    }
}

fn plan_runs(spec: &ExperimentSpec, ctx: &RunContext) -> Result<Vec<RunPlan>> {
    let mut plans = Vec::new();
    let mut push = |algorithm: &str, variant: String, problem: Problem, solver: Solver| {
        for &dim in &spec.dims {
            for &seed in &spec.seeds {
                plans.push(RunPlan {
                    algorithm: algorithm.to_string(),
                    variant: variant.clone(),
                    dim,
                    seed,
                    problem: problem.clone(),
                    solver: solver.clone(),
                });
            }
        }
    };
    let plain = Problem::Quadratic(TransformId::Identity);
    match spec.name {
        ExperimentName::ConvergenceByDim => {
            for &a in &spec.algorithms {
                push(a.name(), "base".into(), plain.clone(), base_solver(a, ctx, false));
            }
        }
        ExperimentName::MonotoneTransform => {
            for &a in &spec.algorithms {
                for (variant, t) in [("raw", TransformId::Identity), ("transformed", TransformId::NegExpNegSqrt)] {
                    push(a.name(), variant.into(), Problem::Quadratic(t), base_solver(a, ctx, false));
                }
            }
        }
        ExperimentName::ConditionMisestimation => {
            let zs = if spec.z_factors.is_empty() { vec![1.0] } else { spec.z_factors.clone() };
            for &a in &spec.algorithms {
                for &z in &zs {
                    let variant = format!("z={z}");
                    match a {
                        Algorithm::GldSearch => push(a.name(), variant, plain.clone(), Solver::Search { latent: false }),
                        Algorithm::GldFast => push(
                            a.name(),
                            variant,
                            plain.clone(),
                            Solver::Fast {
                                condition_bound: misestimated_condition_bound(ctx.q(), z),
                                latent: false,
                            },
                        ),
                        Algorithm::Ars => {
                            for kind in MisestimationKind::ALL {
                                let (alpha_hat, beta_hat) =
                                    apply_misestimation(ctx.alpha, ctx.beta, MisestimationVariant { kind, z })?;
                                push(kind.name(), variant.clone(), plain.clone(), Solver::Ars { alpha_hat, beta_hat });
                            }
                        }
                    }
                }
            }
        }
        ExperimentName::LowRank => {
            let problem = Problem::LowRank {
                latent_dim: spec.latent_dim.expect("validated"),
                delta: spec.delta.unwrap_or(0.0),
            };
            for &a in &spec.algorithms {
                match a {
                    Algorithm::Ars => push(a.name(), "full-rank".into(), problem.clone(), base_solver(a, ctx, false)),
                    _ => {
                        push(a.name(), "full-rank".into(), problem.clone(), base_solver(a, ctx, false));
                        push(a.name(), "latent-search".into(), problem.clone(), base_solver(a, ctx, true));
                    }
                }
            }
        }
        ExperimentName::BenchmarkSuite => {
            let kinds = if spec.functions.is_empty() {
                BenchmarkKind::ALL.to_vec()
            } else {
                spec.functions.clone()
            };
            for &a in &spec.algorithms {
                for &kind in &kinds {
                    push(a.name(), kind.name().into(), Problem::Benchmark(kind), base_solver(a, ctx, false));
                }
            }
        }
        ExperimentName::DescentProbability | ExperimentName::GeometryGrid | ExperimentName::LowerBoundProbe => {
            unreachable!("geometric experiments have no optimizer runs")
        }
    }
    Ok(plans)
}

/// Objective plus, for low-rank problems, the composite used to report the
/// projected gap.
fn build_problem(plan: &RunPlan, ctx: &RunContext) -> Result<(Box<dyn Objective>, Option<LowRankComposite>)> {
    let n = plan.dim;
    Ok(match &plan.problem {
        Problem::Quadratic(t) => {
            let f = build_quadratic(ctx.alpha, ctx.beta, n)?;
            match t {
                TransformId::Identity => (Box::new(f), None),
                other => (Box::new(wrap_monotone(f, *other)), None),
            }
        }
        Problem::LowRank { latent_dim, delta } => {
            let inner = build_quadratic(ctx.alpha, ctx.beta, *latent_dim)?;
            let f = build_low_rank(n, *latent_dim, inner, *delta, plan.seed)?;
            let projector = (*delta > 0.0).then(|| f.clone());
            (Box::new(f), projector)
        }
        Problem::Benchmark(kind) => (Box::new(BenchmarkFunction::new(*kind, n)?), None),
    })
}

fn execute(plan: &RunPlan, ctx: &RunContext) -> Result<(RunTrace, Option<LowRankComposite>)> {
    let (objective, projector) = build_problem(plan, ctx)?;
    let n = plan.dim;
    let q = ctx.q();
    let diameter = standard_diameter(q);
    let x0 = standard_start(n);
    let transform = match plan.problem {
        Problem::Quadratic(t) => t,
        _ => TransformId::Identity,
    };
    let control = RunControl {
        target_gap: ctx.target_gap.map(|t| gap_equivalent_target(transform, t)),
        keep_iterates: projector.is_some(),
    };
    let mut oracle = ObjectiveOracle::new(objective).with_budget(ctx.max_evals);
    let mut rng = SeededRng::new(plan.seed);
    let max_iterations = ctx.max_evals;
    // latent-search runs know the latent rank k; GLD-Fast uses it for H
    let latent_rank = match plan.problem {
        Problem::LowRank { latent_dim, .. } => Some(latent_dim),
        _ => None,
    };
    let trace = match plan.solver {
        Solver::Search { latent } => {
            let mut cfg = GldSearchConfig::new(max_iterations, diameter, diameter * ctx.min_radius_ratio);
            cfg.sampler = ctx.sampler;
            cfg.latent_search = latent;
            cfg.control = control;
            gld_search_run(&mut oracle, &cfg, &x0, &mut rng)?
        }
        Solver::Fast { condition_bound, latent } => {
            let mut cfg = GldFastConfig::new(max_iterations, diameter, condition_bound);
            cfg.sampler = ctx.sampler;
            cfg.latent_search = latent;
            if latent {
                cfg.effective_dim = latent_rank;
            }
            cfg.control = control;
            gld_fast_run(&mut oracle, &cfg, &x0, &mut rng)?
        }
        Solver::Ars { alpha_hat, beta_hat } => {
            let mut cfg = ArsConfig::new(alpha_hat, beta_hat, diameter, n, max_iterations / 2);
            cfg.control = control;
            ars_run(&mut oracle, &cfg, &x0, &mut rng)?
        }
    };
    Ok((trace, projector))
}

fn status_of(trace: &RunTrace) -> &'static str {
    if trace.reached_target {
        "target"
    } else if trace.truncated {
        "truncated"
    } else {
        "ok"
    }
}

type Outcome = Result<(RunTrace, Option<LowRankComposite>)>;

fn timed_execute(plan: &RunPlan, ctx: &RunContext) -> (Outcome, f64) {
    let started = Instant::now();
    let outcome = execute(plan, ctx);
    (outcome, started.elapsed().as_secs_f64() * 1e3)
}

fn run_rows(plan: &RunPlan, ctx: &RunContext) -> Vec<TraceRow> {
    let (outcome, wall_time_ms) = timed_execute(plan, ctx);
    rows_from_outcome(plan, ctx, outcome, wall_time_ms)
}

fn rows_from_outcome(plan: &RunPlan, ctx: &RunContext, outcome: Outcome, wall_time_ms: f64) -> Vec<TraceRow> {
    let row = |iteration, evaluations, best_value, optimality_gap, status: String| TraceRow {
        experiment: ctx.experiment.clone(),
        algorithm: plan.algorithm.clone(),
        variant: plan.variant.clone(),
        dim: plan.dim,
        q: ctx.q(),
        seed: plan.seed,
        iteration,
        evaluations,
        best_value,
        optimality_gap,
        status,
        wall_time_ms,
    };
    match outcome {
        Err(e) => vec![row(0, 0, f64::NAN, None, format!("error: {e}"))],
        Ok((trace, projector)) => {
            let status = status_of(&trace).to_string();
            let last = trace.records.len().saturating_sub(1);
            let mut rows = Vec::new();
            for (i, rec) in trace.records.iter().enumerate() {
                if (i as u64 + 1) % ctx.record_every != 0 && i != last {
                    continue;
                }
                let gap = match (&projector, &trace.iterates) {
                    // iterates[0] is x0, so record i pairs with iterates[i + 1]
                    (Some(p), Some(its)) => Some(p.projected_gap(&its[i + 1])),
                    _ => rec.gap,
                };
                rows.push(row(rec.iteration, rec.evaluations, rec.best_value, gap, status.clone()));
            }
            if rows.is_empty() {
                let value = trace.final_value.unwrap_or(f64::NAN);
                rows.push(row(0, trace.evaluations(), value, None, status));
            }
            rows
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub output: PathBuf,
    pub summary: Option<PathBuf>,
    pub runs: usize,
    pub failed_runs: usize,
    pub rows: usize,
}

/// `<stem>.summary.csv` next to `output`.
pub fn summary_path(output: &Path) -> PathBuf {
    let stem = output.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    output.with_file_name(format!("{stem}.summary.csv"))
}

/// Run every cell of `spec`, writing traces (or geometry rows) to
/// `spec.output` and, for optimizer experiments, a per-cell summary next to
/// it. The output file is created before the first run.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    if spec.name.is_geometric() {
        return run_geometric(spec);
    }
    let ctx = RunContext {
        experiment: spec.name.to_string(),
        alpha: spec.alpha(),
        beta: spec.beta(),
        max_evals: spec.max_evals,
        target_gap: spec.target_gap,
        sampler: spec.sampler,
        min_radius_ratio: spec.min_radius_ratio.unwrap_or(DEFAULT_MIN_RADIUS_RATIO),
        record_every: spec.record_every.unwrap_or(1),
    };
    let plans = plan_runs(spec, &ctx)?;
    let mut sink = CsvSink::create(&spec.output, &TRACE_COLUMNS)?;
    let mut all_rows = Vec::new();
    let mut failed_runs = 0;
    let mut emit = |rows: Vec<TraceRow>, sink: &mut CsvSink| -> Result<()> {
        if rows.iter().any(|r| r.status.starts_with("error")) {
            failed_runs += 1;
        }
        sink.write_batch(&rows)?;
        all_rows.extend(rows);
        Ok(())
    };
    if spec.jobs <= 1 {
        for plan in &plans {
            emit(run_rows(plan, &ctx), &mut sink)?;
        }
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.jobs)
            .build()
            .map_err(|e| Error::param(format!("cannot start {} workers: {e}", spec.jobs)))?;
        // collect keeps plan order, so output matches --jobs 1
        let batches: Vec<Vec<TraceRow>> = pool.install(|| plans.par_iter().map(|p| run_rows(p, &ctx)).collect());
        for rows in batches {
            emit(rows, &mut sink)?;
        }
    }
    sink.finish()?;
    let summary = summary_path(&spec.output);
    let cells = summarize_rows(&all_rows, spec.target_gap);
    super::rows::write_csv(&summary, &SUMMARY_COLUMNS, &cells)?;
    Ok(ExperimentReport {
        output: spec.output.clone(),
        summary: Some(summary),
        runs: plans.len(),
        failed_runs,
        rows: all_rows.len(),
    })
}

fn run_geometric(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    let mut sink = CsvSink::create(&spec.output, &GEOMETRY_COLUMNS)?;
    let experiment = spec.name.to_string();
    let mut rows: Vec<GeometryRow> = Vec::new();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| Error::param(format!("cannot start {} workers: {e}", spec.jobs)))?;
    pool.install(|| -> Result<()> {
        for &seed in &spec.seeds {
            match spec.name {
                ExperimentName::GeometryGrid => {
                    let samples = spec.samples.unwrap_or(DEFAULT_GEOMETRY_SAMPLES);
                    rows.extend(grids::verify_geometry(samples, seed)?);
                }
                ExperimentName::DescentProbability => {
                    let samples = spec.samples.unwrap_or(DEFAULT_DESCENT_SAMPLES);
                    let qs = match (spec.q, spec.beta) {
                        (None, None) => vec![1.0, 8.0],
                        _ => vec![spec.condition_number()],
                    };
                    rows.extend(grids::descent_rows(&experiment, &spec.dims, &qs, spec.sampler, samples, seed)?);
                }
                ExperimentName::LowerBoundProbe => {
                    let samples = spec.samples.unwrap_or(DEFAULT_DESCENT_SAMPLES);
                    let q = spec.q.unwrap_or(10.0);
                    rows.extend(grids::lower_bound_rows(&experiment, &spec.dims, q, spec.rung, samples, seed)?);
                }
                _ => unreachable!("optimizer experiments are handled by run_experiment"),
            }
        }
        Ok(())
    })?;
    sink.write_batch(&rows)?;
    sink.finish()?;
    Ok(ExperimentReport {
        output: spec.output.clone(),
        summary: None,
        runs: spec.seeds.len(),
        failed_runs: 0,
        rows: rows.len(),
    })
}

/// A single optimizer run, as issued by the `run` subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRequest {
    pub algorithm: Algorithm,
    pub dim: usize,
    pub alpha: f64,
    pub beta: f64,
    pub seed: u64,
    pub max_evals: u64,
    pub target_gap: Option<f64>,
    pub transform: TransformId,
    pub sampler: SamplerKind,
    pub output: PathBuf,
}

impl RunRequest {
    pub fn validate(&self) -> Result<()> {
        if self.dim < 1 {
            return Err(Error::param("dim must be at least 1"));
        }
        if !(self.alpha > 0.0) {
            return Err(Error::param(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.alpha <= self.beta) {
            return Err(Error::param(format!(
                "alpha <= beta required (got alpha={}, beta={})",
                self.alpha, self.beta
            )));
        }
        if self.max_evals < 1 {
            return Err(Error::param("max_evals must be at least 1"));
        }
        if self.transform == TransformId::Custom {
            return Err(Error::param("custom transforms are library-only"));
        }
        Ok(())
    }
}

/// Run one optimizer on `f_{α,β,n}` (optionally transformed) and write its
/// trace. Returns the rows written.
pub fn run_single(req: &RunRequest) -> Result<Vec<TraceRow>> {
    req.validate()?;
    let mut sink = CsvSink::create(&req.output, &TRACE_COLUMNS)?;
    let ctx = RunContext {
        experiment: "run".into(),
        alpha: req.alpha,
        beta: req.beta,
        max_evals: req.max_evals,
        target_gap: req.target_gap,
        sampler: req.sampler,
        min_radius_ratio: DEFAULT_MIN_RADIUS_RATIO,
        record_every: 1,
    };
    let plan = RunPlan {
        algorithm: req.algorithm.name().into(),
        variant: match req.transform {
            TransformId::Identity => "base".into(),
            _ => "transformed".into(),
        },
        dim: req.dim,
        seed: req.seed,
        problem: Problem::Quadratic(req.transform),
        solver: base_solver(req.algorithm, &ctx, false),
    };
    // parameter problems surface as errors rather than a failed-run row
    let (outcome, wall_time_ms) = timed_execute(&plan, &ctx);
    let outcome = Ok(outcome?);
    let rows = rows_from_outcome(&plan, &ctx, outcome, wall_time_ms);
    sink.write_batch(&rows)?;
    sink.finish()?;
    Ok(rows)
}
