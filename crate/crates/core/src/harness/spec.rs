use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::BenchmarkKind;
use crate::sampling::SamplerKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExperimentName {
    ConvergenceByDim,
    MonotoneTransform,
    ConditionMisestimation,
    LowRank,
    DescentProbability,
    GeometryGrid,
    LowerBoundProbe,
    BenchmarkSuite,
}

impl ExperimentName {
    /// Experiments that emit geometry-report rows instead of traces.
    pub fn is_geometric(self) -> bool {
        matches!(
            self,
            ExperimentName::DescentProbability
                | ExperimentName::GeometryGrid
                | ExperimentName::LowerBoundProbe
        )
    }
}

impl fmt::Display for ExperimentName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    GldSearch,
    GldFast,
    Ars,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::GldSearch => "gld-search",
            Algorithm::GldFast => "gld-fast",
            Algorithm::Ars => "ars",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gld-search" => Ok(Algorithm::GldSearch),
            "gld-fast" => Ok(Algorithm::GldFast),
            "ars" => Ok(Algorithm::Ars),
            other => Err(Error::param(format!(
                "unknown algorithm `{other}` (expected gld-search, gld-fast or ars)"
            ))),
        }
    }
}

fn default_jobs() -> usize {
    1
}

fn default_sampler() -> SamplerKind {
    SamplerKind::UniformBall
}

/// One experiment grid, as read from a JSON config.
///
/// Runs are the product `algorithms × dims × seeds`, expanded further by
/// experiment-specific axes (approximation factors, transform on/off,
/// full-rank versus latent-dimension search).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: ExperimentName,
    pub dims: Vec<usize>,
    /// Strong convexity of the quadratic family; default 1.
    #[serde(default)]
    pub alpha: Option<f64>,
    /// Smoothness; defaults to `alpha * q`, or 8 when `q` is absent too.
    #[serde(default)]
    pub beta: Option<f64>,
    /// Condition number; used when `beta` is absent.
    #[serde(default)]
    pub q: Option<f64>,
    #[serde(default)]
    pub algorithms: Vec<Algorithm>,
    pub seeds: Vec<u64>,
    pub max_evals: u64,
    #[serde(default)]
    pub target_gap: Option<f64>,
    pub output: PathBuf,
    #[serde(default = "default_jobs")]
    pub jobs: usize,
    #[serde(default = "default_sampler")]
    pub sampler: SamplerKind,
    /// GLD-Search smallest rung as a fraction of `R`; default 1e-4.
    #[serde(default)]
    pub min_radius_ratio: Option<f64>,
    /// Approximation factors `z` for `ConditionMisestimation`.
    #[serde(default)]
    pub z_factors: Vec<f64>,
    /// Latent rank `k` for `LowRank`.
    #[serde(default)]
    pub latent_dim: Option<usize>,
    /// Perturbation amplitude for `LowRank`.
    #[serde(default)]
    pub delta: Option<f64>,
    /// Functions for `BenchmarkSuite`; empty means all.
    #[serde(default)]
    pub functions: Vec<BenchmarkKind>,
    /// Monte Carlo samples for the geometric experiments.
    #[serde(default)]
    pub samples: Option<u64>,
    /// Rung for `LowerBoundProbe`; the default sweeps the large-rung and
    /// small-rung regimes.
    #[serde(default)]
    pub rung: Option<f64>,
    /// Write every k-th trace record (the last one is always written).
    #[serde(default)]
    pub record_every: Option<u64>,
}

impl ExperimentSpec {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let spec: ExperimentSpec = serde_json::from_str(&text)?;
        spec.validate()?;
        Ok(spec)
    }

    /// A spec with the given grid and defaults elsewhere.
    pub fn new(name: ExperimentName, dims: Vec<usize>, seeds: Vec<u64>, max_evals: u64, output: PathBuf) -> Self {
        Self {
            name,
            dims,
            alpha: None,
            beta: None,
            q: None,
            algorithms: vec![Algorithm::GldSearch, Algorithm::GldFast, Algorithm::Ars],
            seeds,
            max_evals,
            target_gap: None,
            output,
            jobs: 1,
            sampler: SamplerKind::UniformBall,
            min_radius_ratio: None,
            z_factors: Vec::new(),
            latent_dim: None,
            delta: None,
            functions: Vec::new(),
            samples: None,
            rung: None,
            record_every: None,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(1.0)
    }

    pub fn beta(&self) -> f64 {
        match (self.beta, self.q) {
            (Some(b), _) => b,
            (None, Some(q)) => self.alpha() * q,
            (None, None) => 8.0,
        }
    }

    pub fn condition_number(&self) -> f64 {
        self.beta() / self.alpha()
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(Error::param("dims must be a nonempty list of positive integers"));
        }
        if self.seeds.is_empty() {
            return Err(Error::param("seeds must be nonempty"));
        }
        if self.max_evals < 1 {
            return Err(Error::param("max_evals must be at least 1"));
        }
        if self.jobs < 1 {
            return Err(Error::param("jobs must be at least 1"));
        }
        if !self.name.is_geometric() && self.algorithms.is_empty() {
            return Err(Error::param("algorithms must be nonempty"));
        }
        let (a, b) = (self.alpha(), self.beta());
        if !(a > 0.0) {
            return Err(Error::param(format!("alpha must be positive, got {a}")));
        }
        if !(b >= a) {
            return Err(Error::param(format!("alpha <= beta required (got alpha={a}, beta={b})")));
        }
        if let Some(t) = self.target_gap {
            if !(t > 0.0) {
                return Err(Error::param(format!("target_gap must be positive, got {t}")));
            }
        }
        if let Some(r) = self.min_radius_ratio {
            if !(r > 0.0 && r <= 1.0) {
                return Err(Error::param(format!("min_radius_ratio must lie in (0, 1], got {r}")));
            }
        }
        if self.z_factors.iter().any(|z| !(*z >= 1.0)) {
            return Err(Error::param("approximation factors must satisfy z >= 1"));
        }
        if self.record_every == Some(0) {
            return Err(Error::param("record_every must be at least 1"));
        }
        if self.name == ExperimentName::LowRank {
            let k = self.latent_dim.unwrap_or(0);
            if k < 1 || self.dims.iter().any(|&n| k >= n) {
                return Err(Error::param(format!(
                    "LowRank needs 1 <= latent_dim < every dim (got latent_dim={k})"
                )));
            }
            if self.delta.is_some_and(|d| !(d >= 0.0)) {
                return Err(Error::param("delta must be >= 0"));
            }
        }
        if self.name == ExperimentName::LowerBoundProbe && self.dims.iter().any(|&n| n < 2) {
            return Err(Error::param("LowerBoundProbe needs every dim >= 2"));
        }
        Ok(())
    }
}
