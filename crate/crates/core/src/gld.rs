//! Gradientless descent with binary search over sampling radii.
//!
//! Both variants share one step: sample one candidate per ladder rung
//! around the incumbent and move to the best of the incumbent and the
//! candidates. Only comparisons of objective values are used, so iterates
//! are unchanged under any strictly increasing transform of the objective.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::objectives::{Objective, ObjectiveOracle};
use crate::sampling::{
    build_ladder_fast, build_ladder_search, low_rank_ladder_extension, RadiusLadder, SamplerKind,
    SamplerSpec, SeededRng,
};

/// Stopping and recording options shared by all runners.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunControl {
    /// Stop after the first iteration whose optimality gap is at most this.
    pub target_gap: Option<f64>,
    /// Keep every iterate `x_0, ..., x_T` in the trace.
    pub keep_iterates: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GldSearchConfig {
    pub max_iterations: u64,
    /// `R`, the largest rung.
    pub max_radius: f64,
    /// `r`, the smallest rung.
    pub min_radius: f64,
    pub sampler: SamplerKind,
    /// Defaults to the ambient dimension.
    pub effective_dim: Option<usize>,
    /// Sweep candidate latent dimensions on every rung.
    pub latent_search: bool,
    pub control: RunControl,
}

impl GldSearchConfig {
    pub fn new(max_iterations: u64, max_radius: f64, min_radius: f64) -> Self {
        Self {
            max_iterations,
            max_radius,
            min_radius,
            sampler: SamplerKind::UniformBall,
            effective_dim: None,
            latent_search: false,
            control: RunControl::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min_radius > 0.0 && self.min_radius <= self.max_radius) {
            return Err(Error::param(format!(
                "search radii must satisfy 0 < r <= R (got r={}, R={})",
                self.min_radius, self.max_radius
            )));
        }
        if self.effective_dim == Some(0) {
            return Err(Error::param("effective_dim must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GldFastConfig {
    pub max_iterations: u64,
    /// Starting `R`, the diameter of the search space.
    pub initial_radius: f64,
    /// Upper bound `Q` on the condition number.
    pub condition_bound: f64,
    /// `H`; defaults to [`default_halving_period`] of the effective
    /// dimension.
    pub halving_period: Option<u64>,
    pub sampler: SamplerKind,
    pub effective_dim: Option<usize>,
    pub latent_search: bool,
    pub control: RunControl,
}

impl GldFastConfig {
    pub fn new(max_iterations: u64, initial_radius: f64, condition_bound: f64) -> Self {
        Self {
            max_iterations,
            initial_radius,
            condition_bound,
            halving_period: None,
            sampler: SamplerKind::UniformBall,
            effective_dim: None,
            latent_search: false,
            control: RunControl::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.initial_radius > 0.0) || !self.initial_radius.is_finite() {
            return Err(Error::param(format!(
                "initial radius must be positive, got {}",
                self.initial_radius
            )));
        }
        if !(self.condition_bound >= 1.0) || !self.condition_bound.is_finite() {
            return Err(Error::param(format!(
                "condition number bound must satisfy Q >= 1, got {}",
                self.condition_bound
            )));
        }
        if self.halving_period == Some(0) {
            return Err(Error::param("halving period must be at least 1"));
        }
        if self.effective_dim == Some(0) {
            return Err(Error::param("effective_dim must be at least 1"));
        }
        Ok(())
    }
}

/// `H = max(1, ceil(n Q log2(max(Q, 2))))`.
pub fn default_halving_period(n: usize, condition_bound: f64) -> u64 {
    let h = (n as f64 * condition_bound * condition_bound.max(2.0).log2()).ceil();
    (h as u64).max(1)
}

/// One iteration's summary.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub iteration: u64,
    /// Cumulative evaluations after this iteration.
    pub evaluations: u64,
    pub best_value: f64,
    /// Present only when the objective's optimum is known.
    pub gap: Option<f64>,
    /// Rung of the accepted candidate; `None` when the incumbent stayed.
    pub accepted_radius: Option<f64>,
    /// Candidates whose value was NaN or infinite.
    pub nonfinite: u32,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunTrace {
    pub records: Vec<TraceRecord>,
    pub final_point: Vec<f64>,
    /// `None` when nothing was evaluated.
    pub final_value: Option<f64>,
    /// The evaluation budget ran out before `max_iterations`.
    pub truncated: bool,
    pub reached_target: bool,
    pub iterates: Option<Vec<Vec<f64>>>,
    /// Free-form run settings, e.g. internal constants of a baseline.
    pub metadata: BTreeMap<String, String>,
}

impl RunTrace {
    pub fn evaluations(&self) -> u64 {
        self.records.last().map_or(0, |r| r.evaluations)
    }

    /// Cumulative evaluations at the first record with gap `<= target`.
    pub fn evaluations_to_gap(&self, target: f64) -> Option<u64> {
        self.records
            .iter()
            .find(|r| r.gap.is_some_and(|g| g <= target))
            .map(|r| r.evaluations)
    }

    pub fn final_gap(&self) -> Option<f64> {
        self.records.last().and_then(|r| r.gap)
    }
}

/// Result of one GLD step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub point: Vec<f64>,
    pub value: f64,
    pub evaluations: u64,
    pub accepted_radius: Option<f64>,
    pub nonfinite: u32,
}

/// NaN sorts above everything.
fn rank(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Evaluate `candidates` in order and keep the best of them and the
/// incumbent. Ties go to the incumbent, then to earlier candidates.
pub fn select_candidates<O, I>(
    oracle: &mut ObjectiveOracle<O>,
    x: &[f64],
    fx: f64,
    candidates: I,
) -> Result<StepOutcome>
where
    O: Objective,
    I: IntoIterator<Item = (f64, Vec<f64>)>,
{
    let mut best: Option<(Vec<f64>, f64, f64)> = None;
    let mut best_rank = rank(fx);
    let mut evaluations = 0;
    let mut nonfinite = 0;
    for (rung, y) in candidates {
        let fy = oracle.evaluate(&y)?;
        evaluations += 1;
        if !fy.is_finite() {
            nonfinite += 1;
            continue;
        }
        if fy < best_rank {
            best_rank = fy;
            best = Some((y, fy, rung));
        }
    }
    Ok(match best {
        Some((point, value, rung)) => StepOutcome {
            point,
            value,
            evaluations,
            accepted_radius: Some(rung),
            nonfinite,
        },
        None => StepOutcome {
            point: x.to_vec(),
            value: fx,
            evaluations,
            accepted_radius: None,
            nonfinite,
        },
    })
}

/// One GLD iteration: one candidate per ladder probe, then argmin.
pub fn gld_step<O: Objective>(
    oracle: &mut ObjectiveOracle<O>,
    x: &[f64],
    fx: f64,
    ladder: &RadiusLadder,
    sampler: &SamplerSpec,
    effective_dim: usize,
    rng: &mut SeededRng,
) -> Result<StepOutcome> {
    if ladder.is_empty() {
        return Err(Error::param("radius ladder is empty"));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::param("incumbent point must be finite"));
    }
    let probes = ladder.probes(effective_dim);
    let mut candidates = Vec::with_capacity(probes.len());
    for (rung, dim) in probes {
        candidates.push((rung, sampler.propose(rng, x, rung, dim)?));
    }
    select_candidates(oracle, x, fx, candidates)
}

struct Runner<'a, O> {
    oracle: &'a mut ObjectiveOracle<O>,
    sampler: SamplerSpec,
    effective_dim: usize,
    control: &'a RunControl,
}

impl<O: Objective> Runner<'_, O> {
    fn run(
        self,
        x0: &[f64],
        max_iterations: u64,
        rng: &mut SeededRng,
        mut ladder_at: impl FnMut(u64) -> Result<RadiusLadder>,
    ) -> Result<RunTrace> {
        let n = self.oracle.dim();
        if x0.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x0.len(),
            });
        }
        let mut trace = RunTrace {
            final_point: x0.to_vec(),
            iterates: self.control.keep_iterates.then(|| vec![x0.to_vec()]),
            ..RunTrace::default()
        };
        let mut x = x0.to_vec();
        let mut fx: Option<f64> = None;
        let start_evals = self.oracle.eval_count();
        for t in 1..=max_iterations {
            let ladder = ladder_at(t)?;
            let needed = ladder.len() as u64 + u64::from(fx.is_none());
            if self.oracle.remaining() < needed {
                trace.truncated = true;
                break;
            }
            let current = match fx {
                Some(v) => v,
                None => self.oracle.evaluate(&x)?,
            };
            let step = gld_step(
                self.oracle,
                &x,
                current,
                &ladder,
                &self.sampler,
                self.effective_dim,
                rng,
            )?;
            x = step.point;
            fx = Some(step.value);
            let gap = self.oracle.gap(step.value);
            trace.records.push(TraceRecord {
                iteration: t,
                evaluations: self.oracle.eval_count() - start_evals,
                best_value: step.value,
                gap,
                accepted_radius: step.accepted_radius,
                nonfinite: step.nonfinite,
            });
            if let Some(it) = trace.iterates.as_mut() {
                it.push(x.clone());
            }
            if let (Some(target), Some(g)) = (self.control.target_gap, gap) {
                if g <= target {
                    trace.reached_target = true;
                    break;
                }
            }
        }
        trace.final_point = x;
        trace.final_value = fx;
        Ok(trace)
    }
}

fn resolve_effective_dim(configured: Option<usize>, n: usize) -> usize {
    configured.unwrap_or(n)
}

/// GLD-Search: a fixed ladder from `R` down to `r`, swept every iteration.
pub fn gld_search_run<O: Objective>(
    oracle: &mut ObjectiveOracle<O>,
    config: &GldSearchConfig,
    x0: &[f64],
    rng: &mut SeededRng,
) -> Result<RunTrace> {
    config.validate()?;
    let n = oracle.dim();
    let mut ladder = build_ladder_search(config.max_radius, config.min_radius)?;
    if config.latent_search {
        ladder = low_rank_ladder_extension(&ladder, n)?;
    }
    let runner = Runner {
        sampler: SamplerSpec::new(config.sampler, n),
        effective_dim: resolve_effective_dim(config.effective_dim, n),
        control: &config.control,
        oracle,
    };
    let mut trace = runner.run(x0, config.max_iterations, rng, |_| Ok(ladder.clone()))?;
    trace.metadata.insert("ladder_size".into(), ladder.len().to_string());
    Ok(trace)
}

/// GLD-Fast: a ladder of half-width `K = ceil(log2(4 sqrt(Q)))` around a
/// radius that halves every `H` iterations.
pub fn gld_fast_run<O: Objective>(
    oracle: &mut ObjectiveOracle<O>,
    config: &GldFastConfig,
    x0: &[f64],
    rng: &mut SeededRng,
) -> Result<RunTrace> {
    config.validate()?;
    let n = oracle.dim();
    let period = config
        .halving_period
        .unwrap_or_else(|| {
            default_halving_period(resolve_effective_dim(config.effective_dim, n), config.condition_bound)
        });
    let q = config.condition_bound;
    let latent_search = config.latent_search;
    let mut radius = config.initial_radius;
    let runner = Runner {
        sampler: SamplerSpec::new(config.sampler, n),
        effective_dim: resolve_effective_dim(config.effective_dim, n),
        control: &config.control,
        oracle,
    };
    let mut trace = runner.run(x0, config.max_iterations, rng, |t| {
        if t % period == 0 {
            radius /= 2.0;
        }
        let ladder = build_ladder_fast(radius, q)?;
        if latent_search {
            low_rank_ladder_extension(&ladder, n)
        } else {
            Ok(ladder)
        }
    })?;
    trace.metadata.insert("halving_period".into(), period.to_string());
    Ok(trace)
}
