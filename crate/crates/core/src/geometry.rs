//! Ball-intersection geometry behind the descent guarantees, with exact
//! cap volumes and Monte Carlo estimators to check them against.
//!
//! Throughout, `B1` is centered at the origin and `B2` at `ell * e1`.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::objectives::{Objective, Optimum};
use crate::sampling::{sample_uniform_ball, SamplerSpec, SeededRng};

const CF_MAX_ITER: usize = 10_000;
const CF_EPS: f64 = 1e-16;
const CF_TINY: f64 = 1e-300;

/// Modified Lentz evaluation of the incomplete beta continued fraction.
fn beta_continued_fraction(x: f64, a: f64, b: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let clamp = |v: f64| if v.abs() < CF_TINY { CF_TINY } else { v };
    let mut c = 1.0;
    let mut d = 1.0 / clamp(1.0 - qab * x / qap);
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / clamp(1.0 + aa * d);
        c = clamp(1.0 + aa / c);
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / clamp(1.0 + aa * d);
        c = clamp(1.0 + aa / c);
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::param(format!("incomplete beta needs 0 <= x <= 1, got {x}")));
    }
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::param(format!(
            "incomplete beta needs a, b > 0 (got a={a}, b={b})"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (-x).ln_1p();
    let front = ln_front.exp();
    let value = if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(x, a, b) / a
    } else {
        1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b
    };
    Ok(value.clamp(0.0, 1.0))
}

/// Two balls in `R^n`: radii `r1`, `r2`, centers `ell` apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallPair {
    pub r1: f64,
    pub r2: f64,
    pub ell: f64,
    pub dim: usize,
}

impl BallPair {
    pub fn new(r1: f64, r2: f64, ell: f64, dim: usize) -> Result<Self> {
        for (name, v) in [("r1", r1), ("r2", r2), ("ell", ell)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::param(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if dim == 0 {
            return Err(Error::param("dimension must be at least 1"));
        }
        Ok(Self { r1, r2, ell, dim })
    }

    /// Boundaries of the two balls cross.
    pub fn spheres_intersect(&self) -> bool {
        (self.r1 - self.r2).abs() <= self.ell && self.ell <= self.r1 + self.r2
    }

    pub fn disjoint(&self) -> bool {
        self.ell > self.r1 + self.r2
    }

    /// `B1 ⊆ B2`.
    pub fn first_inside_second(&self) -> bool {
        self.r2 >= self.ell + self.r1
    }

    pub fn cap_params(&self) -> CapParams {
        let c1 = (self.ell * self.ell + self.r1 * self.r1 - self.r2 * self.r2) / (2.0 * self.ell);
        let ratio = (c1 / self.r1).clamp(-1.0, 1.0);
        CapParams {
            c1,
            beta_x: 1.0 - ratio * ratio,
            a: (self.dim as f64 + 1.0) / 2.0,
            b: 0.5,
        }
    }
}

/// Arguments of the cap-volume formula for `B1`'s cap beyond the radical
/// hyperplane `y1 = c1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapParams {
    pub c1: f64,
    pub beta_x: f64,
    pub a: f64,
    pub b: f64,
}

/// Which branch of the cap formula produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapRegime {
    /// `0 <= c1 < r1`: at most a hemisphere, `½ I_x((n+1)/2, ½)`.
    Minor,
    /// `-r1 < c1 < 0`: more than a hemisphere, via the complement.
    Major,
    /// `c1 >= r1`: the cap is empty.
    Empty,
    /// `c1 <= -r1`: the cap is all of `B1`.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapFraction {
    pub fraction: f64,
    pub regime: CapRegime,
}

/// `vol(C1) / vol(B1)` for the cap `C1 = {y in B1 : y1 >= c1}`.
pub fn cap_fraction_exact(pair: &BallPair) -> Result<CapFraction> {
    let p = pair.cap_params();
    let (fraction, regime) = if p.c1 >= pair.r1 {
        (0.0, CapRegime::Empty)
    } else if p.c1 <= -pair.r1 {
        (1.0, CapRegime::Full)
    } else {
        let half = 0.5 * regularized_incomplete_beta(p.beta_x, p.a, p.b)?;
        if p.c1 >= 0.0 {
            (half, CapRegime::Minor)
        } else {
            (1.0 - half, CapRegime::Major)
        }
    };
    Ok(CapFraction { fraction, regime })
}

/// Exact `vol(B1 ∩ B2) / vol(B1)`: `B1`'s cap plus `B2`'s cap on the other
/// side of the radical hyperplane, rescaled by `(r2/r1)^n`.
pub fn intersection_fraction_exact(pair: &BallPair) -> Result<f64> {
    if pair.disjoint() {
        return Ok(0.0);
    }
    if pair.first_inside_second() {
        return Ok(1.0);
    }
    if pair.r1 >= pair.ell + pair.r2 {
        return Ok((pair.r2 / pair.r1).powi(pair.dim as i32));
    }
    let own = cap_fraction_exact(pair)?.fraction;
    let mirrored = BallPair {
        r1: pair.r2,
        r2: pair.r1,
        ..*pair
    };
    let other = cap_fraction_exact(&mirrored)?.fraction;
    Ok(own + other * (pair.r2 / pair.r1).powi(pair.dim as i32))
}

/// `I_{1 - 9/(16n)}((n+1)/2, ½)`, the cap bound used for the intersection
/// lemma; equals ¼ at `n = 1`.
pub fn lemma_cap_bound(n: usize) -> Result<f64> {
    let n = n as f64;
    regularized_incomplete_beta(1.0 - 9.0 / (16.0 * n), (n + 1.0) / 2.0, 0.5)
}

/// Monte Carlo probability with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: u64,
    pub hits: u64,
}

impl Estimate {
    pub fn from_counts(hits: u64, samples: u64) -> Self {
        let p = hits as f64 / samples as f64;
        Self {
            value: p,
            stderr: (p * (1.0 - p) / samples as f64).sqrt(),
            samples,
            hits,
        }
    }

    /// `|value - expected| <= k * se`, where `se` is the larger of the
    /// observed standard error and the one implied by `expected`.
    pub fn agrees_with(&self, expected: f64, k: f64) -> bool {
        let null_se = (expected * (1.0 - expected) / self.samples as f64).sqrt();
        (self.value - expected).abs() <= k * self.stderr.max(null_se)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntersectionEstimate {
    /// Fraction of `B1` inside `B2`.
    pub intersection: Estimate,
    /// Fraction of `B1` inside its own cap `y1 >= c1`.
    pub cap: Estimate,
}

fn require_samples(samples: u64, min: u64) -> Result<()> {
    if samples < min {
        return Err(Error::param(format!("need at least {min} samples, got {samples}")));
    }
    Ok(())
}

/// Sample `B1` uniformly and count landings in `B2` and in `B1`'s cap.
pub fn intersection_fraction_mc(
    pair: &BallPair,
    samples: u64,
    rng: &mut SeededRng,
) -> Result<IntersectionEstimate> {
    require_samples(samples, 1_000)?;
    let c1 = pair.cap_params().c1;
    let origin = vec![0.0; pair.dim];
    let r2_sq = pair.r2 * pair.r2;
    let (mut in_b2, mut in_cap) = (0u64, 0u64);
    if pair.first_inside_second() {
        in_b2 = samples;
    }
    for _ in 0..samples {
        let y = sample_uniform_ball(rng, &origin, pair.r1)?;
        if !pair.first_inside_second() && !pair.disjoint() {
            let d_sq = (y[0] - pair.ell).powi(2) + y[1..].iter().map(|v| v * v).sum::<f64>();
            if d_sq <= r2_sq {
                in_b2 += 1;
            }
        }
        if y[0] >= c1 {
            in_cap += 1;
        }
    }
    Ok(IntersectionEstimate {
        intersection: Estimate::from_counts(in_b2, samples),
        cap: Estimate::from_counts(in_cap, samples),
    })
}

/// How strictly `r2` is bounded below in the Gaussian intersection check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaussianHypothesis {
    /// `r2 >= ell - ell/n`.
    Loose,
    /// `r2 >= ell - ell/(4n)`.
    Tight,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianIntersection {
    pub probability: Estimate,
    /// The pair satisfied `r1 ∈ [ell/(2√n), ell/√n]` and the `r2` bound.
    pub hypothesis_ok: bool,
    pub exceeds_floor: bool,
}

/// `P(X ∈ B2)` for `X ~ N(center of B1, r1²/n I)`.
pub fn gaussian_intersection_mc(
    pair: &BallPair,
    samples: u64,
    rng: &mut SeededRng,
    hypothesis: GaussianHypothesis,
    floor: f64,
) -> Result<GaussianIntersection> {
    require_samples(samples, 1)?;
    let n = pair.dim as f64;
    let ell = pair.ell;
    let r2_min = match hypothesis {
        GaussianHypothesis::Loose => ell - ell / n,
        GaussianHypothesis::Tight => ell - ell / (4.0 * n),
    };
    let hypothesis_ok =
        pair.r1 >= ell / (2.0 * n.sqrt()) && pair.r1 <= ell / n.sqrt() && pair.r2 >= r2_min;
    let sd = pair.r1 / n.sqrt();
    let r2_sq = pair.r2 * pair.r2;
    let mut hits = 0u64;
    for _ in 0..samples {
        let x0 = sd * rng.standard_normal();
        let mut d_sq = (x0 - ell).powi(2);
        for _ in 1..pair.dim {
            let v = sd * rng.standard_normal();
            d_sq += v * v;
        }
        if d_sq <= r2_sq {
            hits += 1;
        }
    }
    let probability = Estimate::from_counts(hits, samples);
    Ok(GaussianIntersection {
        probability,
        hypothesis_ok,
        exceeds_floor: probability.value > floor,
    })
}

/// Fraction of one-rung samples around `x` that shrink the gap to at most
/// `(f(x) - f*)(1 - 1/(5 n Q))`.
///
/// Callers sweep the rungs of a ladder and take the best.
#[allow(clippy::too_many_arguments)]
pub fn descent_probability_mc<O: Objective + ?Sized>(
    objective: &O,
    optimum: &Optimum,
    x: &[f64],
    rung: f64,
    sampler: &SamplerSpec,
    condition: f64,
    samples: u64,
    rng: &mut SeededRng,
) -> Result<Estimate> {
    require_samples(samples, 1)?;
    let n = objective.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.len() });
    }
    let dist = x
        .iter()
        .zip(&optimum.point)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    if dist < 1e-12 {
        return Err(Error::param("start point coincides with the optimum"));
    }
    let gap = objective.value(x) - optimum.value;
    let target = gap * (1.0 - 1.0 / (5.0 * n as f64 * condition));
    let mut hits = 0u64;
    for _ in 0..samples {
        let y = sampler.propose(rng, x, rung, n)?;
        if objective.value(&y) - optimum.value <= target {
            hits += 1;
        }
    }
    Ok(Estimate::from_counts(hits, samples))
}

/// Decrease factor `1 - sqrt(5 ln(nQ)) / (nQ)` of the lower-bound probe.
pub fn lower_bound_factor(n: usize, q: f64) -> f64 {
    let nq = n as f64 * q;
    1.0 - (5.0 * nq.ln()).sqrt() / nq
}

/// Small rung `sqrt(ln(nQ)) / (nQ)` of the regime where the lower-bound
/// construction still allows progress.
pub fn lower_bound_control_rung(n: usize, q: f64) -> f64 {
    let nq = n as f64 * q;
    nq.ln().sqrt() / nq
}

/// Probability that `y = x + rung * v`, `v ~ N(0, I)`, shrinks
/// `f(x) = x1² + Q Σ_{i>1} xi²` by [`lower_bound_factor`], with a fresh
/// start `x` per sample drawn uniformly from
/// `{x1 ∈ [0.9, 1], |xi| <= 0.1/(Q√n)}`.
pub fn lower_bound_probe(
    n: usize,
    q: f64,
    rung: f64,
    samples: u64,
    rng: &mut SeededRng,
) -> Result<Estimate> {
    if n < 2 {
        return Err(Error::param(format!("lower-bound probe needs n >= 2, got {n}")));
    }
    if !(q >= 1.0) || !q.is_finite() {
        return Err(Error::param(format!("condition number must satisfy Q >= 1, got {q}")));
    }
    if !(rung >= 0.0) || !rung.is_finite() {
        return Err(Error::param(format!("rung must be >= 0, got {rung}")));
    }
    require_samples(samples, 1)?;
    let factor = lower_bound_factor(n, q);
    let side = 0.1 / (q * (n as f64).sqrt());
    let ellipsoid = |x: &[f64]| x[0] * x[0] + q * x[1..].iter().map(|v| v * v).sum::<f64>();
    let mut x = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut hits = 0u64;
    for _ in 0..samples {
        x[0] = 0.9 + 0.1 * rng.uniform();
        for xi in x[1..].iter_mut() {
            *xi = side * (2.0 * rng.uniform() - 1.0);
        }
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi = xi + rung * rng.standard_normal();
        }
        if ellipsoid(&y) <= ellipsoid(&x) * factor {
            hits += 1;
        }
    }
    Ok(Estimate::from_counts(hits, samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::build_quadratic;
    use crate::sampling::SamplerKind;
    use proptest::prelude::*;

    #[test]
    fn beta_endpoints_and_closed_forms() {
        assert_eq!(regularized_incomplete_beta(0.0, 2.5, 0.5).unwrap(), 0.0);
        assert_eq!(regularized_incomplete_beta(1.0, 2.5, 0.5).unwrap(), 1.0);
        assert!((regularized_incomplete_beta(0.37, 1.0, 1.0).unwrap() - 0.37).abs() < 1e-12);
        // I_x(1, b) = 1 - (1 - x)^b
        assert!((regularized_incomplete_beta(0.75, 1.0, 0.5).unwrap() - 0.5).abs() < 1e-12);
        // I_x(a, 1) = x^a
        let v = regularized_incomplete_beta(0.3, 3.5, 1.0).unwrap();
        assert!((v - 0.3f64.powf(3.5)).abs() < 1e-12);
    }

    #[test]
    fn beta_argument_errors() {
        assert!(regularized_incomplete_beta(-0.1, 1.0, 1.0).is_err());
        assert!(regularized_incomplete_beta(1.1, 1.0, 1.0).is_err());
        assert!(regularized_incomplete_beta(0.5, 0.0, 1.0).is_err());
        assert!(regularized_incomplete_beta(0.5, 1.0, -2.0).is_err());
        assert!(regularized_incomplete_beta(f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn beta_matches_statrs_reference() {
        let mut rng = SeededRng::new(31);
        for _ in 0..500 {
            let x = rng.uniform();
            let a = 0.1 + 60.0 * rng.uniform();
            let b = 0.1 + 10.0 * rng.uniform();
            let ours = regularized_incomplete_beta(x, a, b).unwrap();
            let reference = statrs::function::beta::beta_reg(a, b, x);
            assert!((ours - reference).abs() < 1e-10, "x={x} a={a} b={b}: {ours} vs {reference}");
        }
    }

    #[test]
    fn lemma_bound_at_one() {
        assert!((lemma_cap_bound(1).unwrap() - 0.25).abs() < 1e-12);
        let mut prev = 0.0;
        for n in 1..200 {
            let v = lemma_cap_bound(n).unwrap();
            assert!(v >= prev - 1e-12);
            prev = v;
        }
    }

    #[test]
    fn one_dimensional_cap_and_intersection() {
        let pair = BallPair::new(0.5, 0.75, 1.0, 1).unwrap();
        let cap = cap_fraction_exact(&pair).unwrap();
        assert_eq!(cap.regime, CapRegime::Minor);
        assert!((cap.fraction - 0.15625).abs() < 1e-12);
        assert!((intersection_fraction_exact(&pair).unwrap() - 0.25).abs() < 1e-12);

        let mut rng = SeededRng::new(2);
        let est = intersection_fraction_mc(&pair, 100_000, &mut rng).unwrap();
        assert!(est.intersection.agrees_with(0.25, 3.0), "{:?}", est.intersection);
        assert!(est.cap.agrees_with(0.15625, 3.0), "{:?}", est.cap);
    }

    #[test]
    fn containment_limits() {
        let pair = BallPair::new(0.5, 1.5, 1.0, 3).unwrap();
        let cap = cap_fraction_exact(&pair).unwrap();
        assert_eq!(cap.regime, CapRegime::Full);
        assert_eq!(cap.fraction, 1.0);
        let inside = BallPair::new(0.5, 2.0, 1.0, 4).unwrap();
        let est = intersection_fraction_mc(&inside, 1_000, &mut SeededRng::new(1)).unwrap();
        assert_eq!(est.intersection.value, 1.0);
        let apart = BallPair::new(0.5, 0.4, 1.0, 4).unwrap();
        let est = intersection_fraction_mc(&apart, 1_000, &mut SeededRng::new(1)).unwrap();
        assert_eq!(est.intersection.value, 0.0);
        assert_eq!(cap_fraction_exact(&apart).unwrap().regime, CapRegime::Empty);
        assert!(intersection_fraction_mc(&apart, 999, &mut SeededRng::new(1)).is_err());
    }

    #[test]
    fn major_cap_uses_complement() {
        // c1 < 0: B2's center is inside B1's half toward it
        let pair = BallPair::new(1.0, 1.2, 0.5, 3).unwrap();
        assert!(pair.cap_params().c1 < 0.0);
        let cap = cap_fraction_exact(&pair).unwrap();
        assert_eq!(cap.regime, CapRegime::Major);
        assert!(cap.fraction > 0.5);
        let est = intersection_fraction_mc(&pair, 50_000, &mut SeededRng::new(9)).unwrap();
        assert!(est.cap.agrees_with(cap.fraction, 4.0));
        let exact = intersection_fraction_exact(&pair).unwrap();
        assert!(est.intersection.agrees_with(exact, 4.0), "{exact} {:?}", est.intersection);
    }

    #[test]
    fn gaussian_intersection_examples() {
        let mut rng = SeededRng::new(4);
        let huge = BallPair::new(0.3, 1e6, 1.0, 10).unwrap();
        let res = gaussian_intersection_mc(&huge, 10_000, &mut rng, GaussianHypothesis::Loose, 0.05).unwrap();
        assert_eq!(res.probability.value, 1.0);

        let n = 10.0f64;
        let pair = BallPair::new(1.0 / n.sqrt(), 1.0 - 1.0 / n, 1.0, 10).unwrap();
        let res = gaussian_intersection_mc(&pair, 100_000, &mut rng, GaussianHypothesis::Loose, 0.05).unwrap();
        assert!(res.hypothesis_ok);
        assert!(res.exceeds_floor, "{:?}", res.probability);

        let tight = gaussian_intersection_mc(&pair, 1_000, &mut rng, GaussianHypothesis::Tight, 0.05).unwrap();
        assert!(!tight.hypothesis_ok);
    }

    #[test]
    fn gaussian_intersection_is_dimension_free() {
        let mut rng = SeededRng::new(5);
        let mut probs = Vec::new();
        for n in [100usize, 1000] {
            let nf = n as f64;
            let pair = BallPair::new(1.0 / nf.sqrt(), 1.0 - 1.0 / nf, 1.0, n).unwrap();
            let res = gaussian_intersection_mc(&pair, 20_000, &mut rng, GaussianHypothesis::Loose, 0.0).unwrap();
            probs.push(res.probability.value);
        }
        let ratio = probs[0] / probs[1];
        assert!((1.0 / 3.0..=3.0).contains(&ratio), "{probs:?}");
    }

    #[test]
    fn descent_probability_examples() {
        let sphere = build_quadratic(2.0, 2.0, 2).unwrap(); // ||x||^2
        let opt = sphere.optimum().unwrap();
        let spec = SamplerSpec::new(SamplerKind::UniformBall, 2);
        let x = [1.0, 0.0];
        let mut rng = SeededRng::new(6);
        let best = [1.0, 0.5, 0.25, 0.125]
            .iter()
            .map(|&r| descent_probability_mc(&sphere, &opt, &x, r, &spec, 1.0, 10_000, &mut rng).unwrap().value)
            .fold(0.0, f64::max);
        assert!(best >= 0.20, "{best}");

        let huge = descent_probability_mc(&sphere, &opt, &x, 1e6, &spec, 1.0, 10_000, &mut rng).unwrap();
        assert!(huge.value < 0.01);

        assert!(descent_probability_mc(&sphere, &opt, &[1e-13, 0.0], 1.0, &spec, 1.0, 10, &mut rng).is_err());
    }

    #[test]
    fn lower_bound_probe_examples() {
        let mut rng = SeededRng::new(7);
        let large = lower_bound_probe(100, 10.0, 1.0, 10_000, &mut rng).unwrap();
        assert!(large.value <= 0.01);
        let null = lower_bound_probe(100, 10.0, 0.0, 1_000, &mut rng).unwrap();
        assert_eq!(null.value, 0.0);
        assert!(lower_bound_probe(1, 10.0, 1.0, 10, &mut rng).is_err());
        assert!(lower_bound_probe(10, 0.5, 1.0, 10, &mut rng).is_err());
    }

    #[test]
    fn control_rung_beats_large_rung() {
        let rung = lower_bound_control_rung(100, 10.0);
        assert!((rung - (1000f64).ln().sqrt() / 1000.0).abs() < 1e-15);
        let mut rng = SeededRng::new(8);
        let large = lower_bound_probe(100, 10.0, 1.0, 10_000, &mut rng).unwrap();
        let small = lower_bound_probe(100, 10.0, rung, 10_000, &mut rng).unwrap();
        assert!(small.value > large.value, "{small:?} vs {large:?}");
        assert!(small.hits >= 20);
    }

    proptest! {
        #[test]
        fn beta_symmetry(x in 0.0f64..=1.0, a in 0.05f64..80.0, b in 0.05f64..80.0) {
            let lhs = regularized_incomplete_beta(x, a, b).unwrap();
            let rhs = regularized_incomplete_beta(1.0 - x, b, a).unwrap();
            prop_assert!((lhs + rhs - 1.0).abs() < 1e-10);
        }

        #[test]
        fn beta_monotone_in_x(mut xs in prop::collection::vec(0.0f64..=1.0, 2..20), a in 0.1f64..50.0, b in 0.1f64..50.0) {
            xs.sort_by(f64::total_cmp);
            let vals: Vec<f64> = xs.iter().map(|&x| regularized_incomplete_beta(x, a, b).unwrap()).collect();
            for w in vals.windows(2) {
                prop_assert!(w[1] >= w[0] - 1e-12);
            }
        }
    }
}
