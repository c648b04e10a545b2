//! Raw analytic forms of common black-box benchmark functions.
//!
//! No rotations or instance transforms are applied; each function is only
//! translated so that its minimizer sits at `optimum_shift`. Every kind has
//! minimum value 0.

use std::f64::consts::TAU;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{Objective, Optimum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BenchmarkKind {
    Rastrigin,
    BentCigar,
    DifferentPowers,
    Discus,
    Ellipsoidal,
    SharpRidge,
    SchaffersF7,
    Katsuura,
    Weierstrass,
}

impl BenchmarkKind {
    pub const ALL: [BenchmarkKind; 9] = [
        BenchmarkKind::Rastrigin,
        BenchmarkKind::BentCigar,
        BenchmarkKind::DifferentPowers,
        BenchmarkKind::Discus,
        BenchmarkKind::Ellipsoidal,
        BenchmarkKind::SharpRidge,
        BenchmarkKind::SchaffersF7,
        BenchmarkKind::Katsuura,
        BenchmarkKind::Weierstrass,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchmarkKind::Rastrigin => "rastrigin",
            BenchmarkKind::BentCigar => "bent-cigar",
            BenchmarkKind::DifferentPowers => "different-powers",
            BenchmarkKind::Discus => "discus",
            BenchmarkKind::Ellipsoidal => "ellipsoidal",
            BenchmarkKind::SharpRidge => "sharp-ridge",
            BenchmarkKind::SchaffersF7 => "schaffers-f7",
            BenchmarkKind::Katsuura => "katsuura",
            BenchmarkKind::Weierstrass => "weierstrass",
        }
    }
}

impl FromStr for BenchmarkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BenchmarkKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s) || format!("{k:?}").eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::param(format!("unknown benchmark function `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkFunction {
    kind: BenchmarkKind,
    optimum_shift: Vec<f64>,
}

/// `i / (n - 1)`, or 0 when `n == 1`.
fn frac(i: usize, n: usize) -> f64 {
    if n <= 1 {
        0.0
    } else {
        i as f64 / (n - 1) as f64
    }
}

const WEIERSTRASS_TERMS: i32 = 12;

/// Inner Weierstrass sum for one coordinate. Its minimum over `z` is
/// attained at `z = 0`, so `term(z) - term(0) >= 0`.
fn weierstrass_term(z: f64) -> f64 {
    (0..WEIERSTRASS_TERMS)
        .map(|k| 0.5f64.powi(k) * (TAU * (3f64.powi(k) * (z + 0.5))).cos())
        .sum()
}

impl BenchmarkFunction {
    pub fn new(kind: BenchmarkKind, dim: usize) -> Result<Self> {
        Self::with_shift(kind, vec![0.0; dim])
    }

    pub fn with_shift(kind: BenchmarkKind, optimum_shift: Vec<f64>) -> Result<Self> {
        if optimum_shift.is_empty() {
            return Err(Error::param("benchmark dimension must be at least 1"));
        }
        if optimum_shift.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("optimum shift must be finite"));
        }
        Ok(Self { kind, optimum_shift })
    }

    pub fn kind(&self) -> BenchmarkKind {
        self.kind
    }

    pub fn optimum_shift(&self) -> &[f64] {
        &self.optimum_shift
    }

    /// Checked evaluation.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.optimum_shift.len() {
            return Err(Error::DimensionMismatch {
                expected: self.optimum_shift.len(),
                got: x.len(),
            });
        }
        Ok(self.value(x))
    }

    fn raw(&self, z: &[f64]) -> f64 {
        let n = z.len();
        match self.kind {
            BenchmarkKind::Rastrigin => {
                10.0 * n as f64
                    + z.iter()
                        .map(|v| v * v - 10.0 * (TAU * v).cos())
                        .sum::<f64>()
            }
            BenchmarkKind::BentCigar => {
                z[0] * z[0] + 1e6 * z[1..].iter().map(|v| v * v).sum::<f64>()
            }
            BenchmarkKind::DifferentPowers => z
                .iter()
                .enumerate()
                .map(|(i, v)| v.abs().powf(2.0 + 4.0 * frac(i, n)))
                .sum::<f64>()
                .sqrt(),
            BenchmarkKind::Discus => 1e6 * z[0] * z[0] + z[1..].iter().map(|v| v * v).sum::<f64>(),
            BenchmarkKind::Ellipsoidal => z
                .iter()
                .enumerate()
                .map(|(i, v)| 10f64.powf(6.0 * frac(i, n)) * v * v)
                .sum(),
            BenchmarkKind::SharpRidge => {
                z[0] * z[0] + 100.0 * z[1..].iter().map(|v| v * v).sum::<f64>().sqrt()
            }
            BenchmarkKind::SchaffersF7 => {
                let s: Vec<f64> = if n == 1 {
                    vec![z[0].abs()]
                } else {
                    z.windows(2).map(|w| (w[0] * w[0] + w[1] * w[1]).sqrt()).collect()
                };
                let m = s.len() as f64;
                let mean = s
                    .iter()
                    .map(|&si| {
                        let r = si.sqrt();
                        r + r * (50.0 * si.powf(0.2)).sin().powi(2)
                    })
                    .sum::<f64>()
                    / m;
                mean * mean
            }
            BenchmarkKind::Katsuura => {
                let nf = n as f64;
                let exponent = 10.0 / nf.powf(1.2);
                let prod = z
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| {
                        let inner: f64 = (1..=32)
                            .map(|j| {
                                let p = 2f64.powi(j);
                                (p * v - (p * v).round()).abs() / p
                            })
                            .sum();
                        (1.0 + (i + 1) as f64 * inner).powf(exponent)
                    })
                    .product::<f64>();
                10.0 / (nf * nf) * prod - 10.0 / (nf * nf)
            }
            BenchmarkKind::Weierstrass => {
                let base = weierstrass_term(0.0);
                let mean = z.iter().map(|&v| weierstrass_term(v) - base).sum::<f64>() / n as f64;
                10.0 * mean.powi(3)
            }
        }
    }
}

impl Objective for BenchmarkFunction {
    fn dim(&self) -> usize {
        self.optimum_shift.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let z: Vec<f64> = x.iter().zip(&self.optimum_shift).map(|(a, b)| a - b).collect();
        self.raw(&z)
    }

    fn optimum(&self) -> Option<Optimum> {
        Some(Optimum {
            point: self.optimum_shift.clone(),
            value: 0.0,
        })
    }
}
