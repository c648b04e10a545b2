//! Accelerated random search (ARS) comparator.
//!
//! This is the accelerated random gradient-free scheme of Nesterov and
//! Spokoiny: a forward-difference directional derivative along a Gaussian
//! direction drives a Nesterov momentum sequence built from the assumed
//! strong convexity `alpha_hat` and smoothness `beta_hat`. Unlike GLD it
//! consumes function differences, so its path changes under monotone
//! transforms of the objective.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gld::{RunControl, RunTrace, TraceRecord};
use crate::objectives::{Objective, ObjectiveOracle};
use crate::sampling::SeededRng;

#[derive(Debug, Clone, PartialEq)]
pub struct ArsConfig {
    pub alpha_hat: f64,
    pub beta_hat: f64,
    /// Finite-difference step `mu`.
    pub smoothing: f64,
    pub max_iterations: u64,
    pub control: RunControl,
}

impl ArsConfig {
    /// Default smoothing `mu = 1e-6 * R / sqrt(n)` for a search region of
    /// diameter `diameter`.
    pub fn new(alpha_hat: f64, beta_hat: f64, diameter: f64, dim: usize, max_iterations: u64) -> Self {
        Self {
            alpha_hat,
            beta_hat,
            smoothing: default_smoothing(diameter, dim),
            max_iterations,
            control: RunControl::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_hat > 0.0) || !self.alpha_hat.is_finite() {
            return Err(Error::param(format!("alpha_hat must be positive, got {}", self.alpha_hat)));
        }
        if !(self.beta_hat >= self.alpha_hat) || !self.beta_hat.is_finite() {
            return Err(Error::param(format!(
                "alpha_hat <= beta_hat required (got {}, {})",
                self.alpha_hat, self.beta_hat
            )));
        }
        if !(self.smoothing > 0.0) || !self.smoothing.is_finite() {
            return Err(Error::param(format!("smoothing must be positive, got {}", self.smoothing)));
        }
        Ok(())
    }
}

pub fn default_smoothing(diameter: f64, dim: usize) -> f64 {
    1e-6 * diameter / (dim.max(1) as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MisestimationKind {
    ArsAlpha,
    ArsBeta,
    ArsEven,
}

impl MisestimationKind {
    pub const ALL: [MisestimationKind; 3] = [
        MisestimationKind::ArsAlpha,
        MisestimationKind::ArsBeta,
        MisestimationKind::ArsEven,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MisestimationKind::ArsAlpha => "ars-alpha",
            MisestimationKind::ArsBeta => "ars-beta",
            MisestimationKind::ArsEven => "ars-even",
        }
    }
}

/// How the curvature constants handed to ARS are wrong, by factor `z >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MisestimationVariant {
    pub kind: MisestimationKind,
    pub z: f64,
}

/// `ArsAlpha -> (α/z, β)`, `ArsBeta -> (α, zβ)`, `ArsEven -> (α/√z, √z β)`.
pub fn apply_misestimation(alpha: f64, beta: f64, variant: MisestimationVariant) -> Result<(f64, f64)> {
    let z = variant.z;
    if !(z >= 1.0) || !z.is_finite() {
        return Err(Error::param(format!("approximation factor must satisfy z >= 1, got {z}")));
    }
    Ok(match variant.kind {
        MisestimationKind::ArsAlpha => (alpha / z, beta),
        MisestimationKind::ArsBeta => (alpha, z * beta),
        MisestimationKind::ArsEven => (alpha / z.sqrt(), z.sqrt() * beta),
    })
}

/// Condition bound handed to GLD-Fast at approximation factor `z`.
pub fn misestimated_condition_bound(q: f64, z: f64) -> f64 {
    q * z
}

/// Positive root of `a² = θ((1 - a)γ + aτ)`.
fn momentum_weight(theta: f64, gamma: f64, tau: f64) -> f64 {
    let b = theta * (gamma - tau);
    0.5 * (-b + (b * b + 4.0 * theta * gamma).sqrt())
}

/// Run ARS for up to `max_iterations` iterations of two evaluations each,
/// `f(y_k)` and `f(y_k + mu u_k)`. The trace reports the best value seen.
pub fn ars_run<O: Objective>(
    oracle: &mut ObjectiveOracle<O>,
    config: &ArsConfig,
    x0: &[f64],
    rng: &mut SeededRng,
) -> Result<RunTrace> {
    config.validate()?;
    let n = oracle.dim();
    if x0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x0.len() });
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::param("starting point must be finite"));
    }
    let nf = n as f64;
    let lipschitz = config.beta_hat;
    let tau = config.alpha_hat;
    let mu = config.smoothing;
    let step = 1.0 / (4.0 * (nf + 4.0) * lipschitz);
    let theta = step / (4.0 * (nf + 4.0));

    let mut trace = RunTrace {
        final_point: x0.to_vec(),
        iterates: config.control.keep_iterates.then(|| vec![x0.to_vec()]),
        ..RunTrace::default()
    };
    for (k, v) in [
        ("ars_step", step),
        ("ars_theta", theta),
        ("ars_smoothing", mu),
        ("ars_gamma0", lipschitz),
    ] {
        trace.metadata.insert(k.into(), format!("{v:e}"));
    }

    let mut x = x0.to_vec();
    let mut v = x0.to_vec();
    let mut gamma = lipschitz;
    let mut best_value = f64::INFINITY;
    let mut best_point = x0.to_vec();
    let mut y = vec![0.0; n];
    let mut probe = vec![0.0; n];
    let mut u = vec![0.0; n];
    let start_evals = oracle.eval_count();

    for t in 1..=config.max_iterations {
        if oracle.remaining() < 2 {
            trace.truncated = true;
            break;
        }
        let a = momentum_weight(theta, gamma, tau);
        let gamma_next = (1.0 - a) * gamma + a * tau;
        let lambda = a * tau / gamma_next;
        let denom = gamma + a * tau;
        for i in 0..n {
            y[i] = (a * gamma * v[i] + gamma_next * x[i]) / denom;
        }
        u.iter_mut().for_each(|ui| *ui = rng.standard_normal());
        for i in 0..n {
            probe[i] = y[i] + mu * u[i];
        }

        // a diverged iterate is rejected without spending evaluations
        let (fy, fp) = if y.iter().chain(&probe).all(|c| c.is_finite()) {
            (oracle.evaluate(&y)?, oracle.evaluate(&probe)?)
        } else {
            (f64::NAN, f64::NAN)
        };
        let nonfinite = u32::from(!fy.is_finite()) + u32::from(!fp.is_finite());
        for (val, pt) in [(fy, &y), (fp, &probe)] {
            if val.is_finite() && val < best_value {
                best_value = val;
                best_point.copy_from_slice(pt);
            }
        }
        if fy.is_finite() && fp.is_finite() {
            let slope = (fp - fy) / mu;
            for i in 0..n {
                let g = slope * u[i];
                x[i] = y[i] - step * g;
                v[i] = (1.0 - lambda) * v[i] + lambda * y[i] - (theta / a) * g;
            }
            gamma = gamma_next;
        }

        let gap = if best_value.is_finite() { oracle.gap(best_value) } else { None };
        trace.records.push(TraceRecord {
            iteration: t,
            evaluations: oracle.eval_count() - start_evals,
            best_value,
            gap,
            accepted_radius: None,
            nonfinite,
        });
        if let Some(it) = trace.iterates.as_mut() {
            it.push(x.clone());
        }
        if let (Some(target), Some(g)) = (config.control.target_gap, gap) {
            if g <= target {
                trace.reached_target = true;
                break;
            }
        }
    }
    trace.final_value = best_value.is_finite().then_some(best_value);
    trace.final_point = best_point;
    Ok(trace)
}
