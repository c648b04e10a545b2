//! Sampling distributions and radius ladders shared by the GLD variants.
//!
//! All randomness flows through [`SeededRng`], a ChaCha8 stream keyed by a
//! 64-bit seed. ChaCha output is specified at the byte level, so a seed
//! reproduces the same sample sequence on every platform.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reproducible random stream.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
}

/// Serializable position of a [`SeededRng`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngState {
    pub seed: u64,
    pub word_pos: u128,
}

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent child stream for parallel work item `index`.
    ///
    /// The child seed is `seed ^ mix64(index)`, where `mix64` is the
    /// SplitMix64 finalizer. It depends only on the parent seed, never on
    /// how much of the parent stream has been consumed.
    pub fn split(&self, index: u64) -> SeededRng {
        SeededRng::new(self.seed ^ mix64(index))
    }

    pub fn state(&self) -> RngState {
        RngState {
            seed: self.seed,
            word_pos: self.inner.get_word_pos(),
        }
    }

    pub fn from_state(state: RngState) -> Self {
        let mut rng = Self::new(state.seed);
        rng.inner.set_word_pos(state.word_pos);
        rng
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }
}

fn check_center(center: &[f64]) -> Result<()> {
    if center.is_empty() {
        return Err(Error::param("sampling center must have at least one coordinate"));
    }
    Ok(())
}

/// Uniform sample from the ball `B(center, radius)`.
///
/// Direction is a normalized standard Gaussian vector and the length is
/// `radius * U^(1/n)`.
pub fn sample_uniform_ball(rng: &mut SeededRng, center: &[f64], radius: f64) -> Result<Vec<f64>> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::param(format!("ball radius must be positive and finite, got {radius}")));
    }
    check_center(center)?;
    let n = center.len();
    let mut dir: Vec<f64> = (0..n).map(|_| rng.standard_normal()).collect();
    let mut norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
    // A zero Gaussian vector has probability zero, but guard against it.
    while norm == 0.0 {
        dir.iter_mut().for_each(|v| *v = rng.standard_normal());
        norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
    }
    let length = radius * rng.uniform().powf(1.0 / n as f64);
    let scale = length / norm;
    let mut offset: Vec<f64> = dir.iter().map(|v| v * scale).collect();
    let actual = offset.iter().map(|v| v * v).sum::<f64>().sqrt();
    if actual > radius {
        let shrink = radius / actual;
        offset.iter_mut().for_each(|v| *v *= shrink);
    }
    Ok(center.iter().zip(&offset).map(|(c, v)| c + v).collect())
}

/// Sample from `N(center, radius^2 / effective_dim * I)`.
pub fn sample_gaussian(
    rng: &mut SeededRng,
    center: &[f64],
    radius: f64,
    effective_dim: usize,
) -> Result<Vec<f64>> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::param(format!("gaussian radius must be positive and finite, got {radius}")));
    }
    if effective_dim == 0 {
        return Err(Error::param("effective_dim must be at least 1"));
    }
    check_center(center)?;
    let sd = radius / (effective_dim as f64).sqrt();
    Ok(center.iter().map(|c| c + sd * rng.standard_normal()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerKind {
    UniformBall,
    Gaussian,
}

/// Sampling distribution `D` together with the ambient dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerSpec {
    pub kind: SamplerKind,
    pub dim: usize,
}

impl SamplerSpec {
    pub fn new(kind: SamplerKind, dim: usize) -> Self {
        Self { kind, dim }
    }

    /// Draw one GLD candidate around `center` for ladder rung `rung`.
    ///
    /// Uniform mode samples the ball of radius `rung / sqrt(effective_dim)`;
    /// Gaussian mode uses per-coordinate variance `rung^2 / effective_dim`.
    pub fn propose(
        &self,
        rng: &mut SeededRng,
        center: &[f64],
        rung: f64,
        effective_dim: usize,
    ) -> Result<Vec<f64>> {
        if center.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: center.len(),
            });
        }
        match self.kind {
            SamplerKind::UniformBall => {
                if effective_dim == 0 {
                    return Err(Error::param("effective_dim must be at least 1"));
                }
                sample_uniform_ball(rng, center, rung / (effective_dim as f64).sqrt())
            }
            SamplerKind::Gaussian => sample_gaussian(rng, center, rung, effective_dim),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LadderMode {
    Search,
    Fast,
}

/// Geometric set of sampling radii tried in one GLD iteration.
///
/// `latent_dims` is empty for an ordinary ladder. After
/// [`low_rank_ladder_extension`] it lists the candidate latent dimensions
/// and every rung is sampled once per entry.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusLadder {
    radii: Vec<f64>,
    depth: u32,
    mode: LadderMode,
    latent_dims: Vec<usize>,
}

/// Smallest `k >= 0` with `2^k >= ratio`, tolerant of rounding in `ratio`.
fn ceil_log2(ratio: f64) -> u32 {
    let mut k = 0u32;
    let mut pow = 1.0f64;
    while pow < ratio * (1.0 - 1e-12) {
        pow *= 2.0;
        k += 1;
    }
    k
}

impl RadiusLadder {
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// `K` of the construction: the search depth for `Search` ladders and
    /// the half-width for `Fast` ladders.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn mode(&self) -> LadderMode {
        self.mode
    }

    pub fn latent_dims(&self) -> &[usize] {
        &self.latent_dims
    }

    /// Candidates sampled per iteration.
    pub fn len(&self) -> usize {
        self.radii.len() * self.latent_dims.len().max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn largest(&self) -> f64 {
        self.radii[0]
    }

    pub fn smallest(&self) -> f64 {
        *self.radii.last().expect("ladders are nonempty")
    }

    /// `(rung, effective_dim)` pairs in sampling order: rung-major, latent
    /// dimension ascending. `default_dim` applies when no latent dimensions
    /// are attached.
    pub fn probes(&self, default_dim: usize) -> Vec<(f64, usize)> {
        if self.latent_dims.is_empty() {
            self.radii.iter().map(|&r| (r, default_dim)).collect()
        } else {
            self.radii
                .iter()
                .flat_map(|&r| self.latent_dims.iter().map(move |&d| (r, d)))
                .collect()
        }
    }
}

/// Radii `R, R/2, ..., R/2^K` with `K = ceil(log2(R/r))`.
pub fn build_ladder_search(max_radius: f64, min_radius: f64) -> Result<RadiusLadder> {
    if !(min_radius > 0.0) || !max_radius.is_finite() {
        return Err(Error::param(format!(
            "search radii must satisfy 0 < r <= R (got r={min_radius}, R={max_radius})"
        )));
    }
    if min_radius > max_radius {
        return Err(Error::param(format!(
            "minimum radius r={min_radius} exceeds maximum radius R={max_radius}"
        )));
    }
    let depth = ceil_log2(max_radius / min_radius);
    let radii = (0..=depth as i32).map(|k| max_radius * 2f64.powi(-k)).collect();
    Ok(RadiusLadder {
        radii,
        depth,
        mode: LadderMode::Search,
        latent_dims: Vec::new(),
    })
}

/// Radii `2^K R, ..., R, ..., 2^-K R` with `K = ceil(log2(4 sqrt(Q)))`.
pub fn build_ladder_fast(radius: f64, condition_bound: f64) -> Result<RadiusLadder> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::param(format!("radius must be positive and finite, got {radius}")));
    }
    if !(condition_bound >= 1.0) || !condition_bound.is_finite() {
        return Err(Error::param(format!(
            "condition number bound must satisfy Q >= 1, got {condition_bound}"
        )));
    }
    let depth = ceil_log2(4.0 * condition_bound.sqrt());
    let k = depth as i32;
    let radii = (-k..=k).map(|j| radius * 2f64.powi(-j)).collect();
    Ok(RadiusLadder {
        radii,
        depth,
        mode: LadderMode::Fast,
        latent_dims: Vec::new(),
    })
}

/// Candidate latent dimensions `{1, 2, 4, ...} ∪ {n}` below `n`.
pub fn latent_dim_candidates(n: usize) -> Vec<usize> {
    let mut dims = Vec::new();
    let mut d = 1usize;
    while d < n {
        dims.push(d);
        d *= 2;
    }
    dims.push(n.max(1));
    dims
}

/// Extend every rung with a sweep over candidate latent dimensions, for
/// objectives whose latent rank is unknown.
pub fn low_rank_ladder_extension(ladder: &RadiusLadder, n: usize) -> Result<RadiusLadder> {
    if n == 0 {
        return Err(Error::param("ambient dimension must be at least 1"));
    }
    if ladder.is_empty() {
        return Err(Error::param("cannot extend an empty ladder"));
    }
    Ok(RadiusLadder {
        latent_dims: latent_dim_candidates(n),
        ..ladder.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq_norm_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
    }

    #[test]
    fn search_ladder_examples() {
        let l = build_ladder_search(1.0, 0.125).unwrap();
        assert_eq!(l.radii(), &[1.0, 0.5, 0.25, 0.125]);
        assert_eq!(l.depth(), 3);

        let l = build_ladder_search(1.0, 1.0).unwrap();
        assert_eq!(l.radii(), &[1.0]);
        assert_eq!(l.depth(), 0);

        let l = build_ladder_search(10.0, 0.7).unwrap();
        assert_eq!(l.depth(), 4);
        assert_eq!(l.radii(), &[10.0, 5.0, 2.5, 1.25, 0.625]);

        assert!(build_ladder_search(1.0, 2.0).is_err());
        assert!(build_ladder_search(1.0, 0.0).is_err());
    }

    #[test]
    fn fast_ladder_examples() {
        let l = build_ladder_fast(1.0, 16.0).unwrap();
        assert_eq!(l.depth(), 4);
        assert_eq!(l.radii().len(), 9);
        assert_eq!(l.largest(), 16.0);
        assert_eq!(l.smallest(), 1.0 / 16.0);

        let l = build_ladder_fast(1.0, 1.0).unwrap();
        assert_eq!(l.depth(), 2);
        assert_eq!(l.radii(), &[4.0, 2.0, 1.0, 0.5, 0.25]);

        let l = build_ladder_fast(3.7, 8.0).unwrap();
        for w in l.radii().windows(2) {
            assert_eq!(w[0] / w[1], 2.0);
        }
        assert!(build_ladder_fast(1.0, 0.5).is_err());
    }

    #[test]
    fn latent_extension_counts() {
        assert_eq!(latent_dim_candidates(8), vec![1, 2, 4, 8]);
        assert_eq!(latent_dim_candidates(1), vec![1]);
        assert_eq!(latent_dim_candidates(100), vec![1, 2, 4, 8, 16, 32, 64, 100]);

        let base = build_ladder_search(16.0, 1.0).unwrap();
        assert_eq!(base.len(), 5);
        let ext = low_rank_ladder_extension(&base, 100).unwrap();
        assert_eq!(ext.len(), 40);
        assert_eq!(ext.probes(100).len(), 40);
        assert_eq!(ext.probes(100)[..8].iter().map(|p| p.1).collect::<Vec<_>>(), ext.latent_dims());
        assert_eq!(base.probes(7), base.radii().iter().map(|&r| (r, 7)).collect::<Vec<_>>());
    }

    #[test]
    fn tiny_ball_stays_at_center() {
        let mut rng = SeededRng::new(1);
        let c = [0.3, -2.0, 5.0];
        let y = sample_uniform_ball(&mut rng, &c, 1e-300).unwrap();
        assert!(sq_norm_diff(&y, &c).sqrt() <= 1e-299);
    }

    #[test]
    fn ball_support_and_second_moment() {
        let mut rng = SeededRng::new(11);
        let c = [0.0, 0.0];
        let n = 100_000;
        let mut sum = 0.0;
        for i in 0..n {
            let y = sample_uniform_ball(&mut rng, &c, 1.0).unwrap();
            let d2 = sq_norm_diff(&y, &c);
            if i < 10_000 {
                assert!(d2 <= 1.0);
            }
            sum += d2;
        }
        // E||y||^2 = n/(n+2) = 1/2 in two dimensions; sd of ||y||^2 is 1/sqrt(12).
        let mean = sum / n as f64;
        let se = (1.0f64 / 12.0).sqrt() / (n as f64).sqrt();
        assert!((mean - 0.5).abs() < 4.0 * se, "mean {mean}");
    }

    #[test]
    fn ball_support_with_offset_center() {
        let mut rng = SeededRng::new(5);
        let c = [1.5, -0.25, 3.0, 0.0, 7.0];
        for _ in 0..10_000 {
            let y = sample_uniform_ball(&mut rng, &c, 0.75).unwrap();
            assert!(sq_norm_diff(&y, &c).sqrt() <= 0.75 * (1.0 + 1e-12));
        }
    }

    #[test]
    fn gaussian_moments() {
        let mut rng = SeededRng::new(3);
        let n = 100_000;
        let xs: Vec<f64> = (0..n)
            .map(|_| sample_gaussian(&mut rng, &[0.0], 2.0, 4).unwrap()[0])
            .collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
        assert!((var - 1.0).abs() < 0.02, "var {var}");
        assert!(mean.abs() < 3.0 / (n as f64).sqrt(), "mean {mean}");
    }

    #[test]
    fn full_rank_gaussian_scaling() {
        // effective_dim = n gives per-coordinate variance r^2/n
        let mut rng = SeededRng::new(8);
        let dim = 10;
        let r = 3.0;
        let samples = 20_000;
        let mut acc = 0.0;
        for _ in 0..samples {
            let y = sample_gaussian(&mut rng, &vec![0.0; dim], r, dim).unwrap();
            acc += y.iter().map(|v| v * v).sum::<f64>();
        }
        let per_coord = acc / (samples * dim) as f64;
        assert!((per_coord - r * r / dim as f64).abs() < 0.02 * r * r / dim as f64);
    }

    #[test]
    fn sampler_errors() {
        let mut rng = SeededRng::new(0);
        assert!(sample_uniform_ball(&mut rng, &[0.0], 0.0).is_err());
        assert!(sample_uniform_ball(&mut rng, &[0.0], -1.0).is_err());
        assert!(sample_gaussian(&mut rng, &[0.0], 1.0, 0).is_err());
        assert!(sample_gaussian(&mut rng, &[0.0], f64::NAN, 1).is_err());
        let spec = SamplerSpec::new(SamplerKind::Gaussian, 3);
        assert!(matches!(
            spec.propose(&mut rng, &[0.0; 2], 1.0, 3),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn state_round_trip_and_split() {
        let mut a = SeededRng::new(42);
        for _ in 0..17 {
            a.standard_normal();
        }
        let mut b = SeededRng::from_state(a.state());
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let p = SeededRng::new(42);
        assert_eq!(p.split(3).seed(), SeededRng::new(42).split(3).seed());
        assert_ne!(p.split(3).seed(), p.split(4).seed());
    }

    #[test]
    fn determinism_first_million() {
        let mut a = SeededRng::new(2024);
        let mut b = SeededRng::new(2024);
        for _ in 0..1_000_000 {
            assert_eq!(a.standard_normal().to_bits(), b.standard_normal().to_bits());
        }
    }

    fn covariance_check(kind: SamplerKind) {
        let dim = 3;
        let spec = SamplerSpec::new(kind, dim);
        let mut rng = SeededRng::new(99);
        let n = 100_000;
        let mut cov = [[0.0f64; 3]; 3];
        for _ in 0..n {
            let y = spec.propose(&mut rng, &[0.0; 3], 1.0, dim).unwrap();
            for i in 0..dim {
                for j in 0..dim {
                    cov[i][j] += y[i] * y[j];
                }
            }
        }
        let diag_mean = (0..dim).map(|i| cov[i][i]).sum::<f64>() / dim as f64;
        for i in 0..dim {
            assert!((cov[i][i] / diag_mean - 1.0).abs() < 0.05);
            for j in 0..dim {
                if i != j {
                    assert!(cov[i][j].abs() < 0.02 * diag_mean);
                }
            }
        }
    }

    #[test]
    fn rotation_invariance_uniform() {
        covariance_check(SamplerKind::UniformBall);
    }

    #[test]
    fn rotation_invariance_gaussian() {
        covariance_check(SamplerKind::Gaussian);
    }
}
