use crate::error::{Error, Result};

use super::{Objective, Optimum};

/// Diagonal quadratic `f(x) = ½ xᵀ H x` whose diagonal is evenly spaced
/// from `alpha` to `beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticSpec {
    alpha: f64,
    beta: f64,
    diag: Vec<f64>,
}

pub fn build_quadratic(alpha: f64, beta: f64, dim: usize) -> Result<QuadraticSpec> {
    QuadraticSpec::new(alpha, beta, dim)
}

impl QuadraticSpec {
    pub fn new(alpha: f64, beta: f64, dim: usize) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::param(format!("alpha must be positive, got {alpha}")));
        }
        if !(beta >= alpha) || !beta.is_finite() {
            return Err(Error::param(format!(
                "alpha <= beta required (got alpha={alpha}, beta={beta})"
            )));
        }
        if dim < 1 {
            return Err(Error::param("dimension must be at least 1"));
        }
        let diag = if dim == 1 {
            vec![alpha]
        } else {
            let span = (dim - 1) as f64;
            (0..dim)
                .map(|i| {
                    if i == dim - 1 {
                        beta
                    } else {
                        alpha + (beta - alpha) * i as f64 / span
                    }
                })
                .collect()
        };
        Ok(Self { alpha, beta, diag })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// `Q = beta / alpha`.
    pub fn condition_number(&self) -> f64 {
        self.beta / self.alpha
    }

    pub(crate) fn eval(&self, x: &[f64]) -> f64 {
        0.5 * self.diag.iter().zip(x).map(|(d, v)| d * v * v).sum::<f64>()
    }
}

impl Objective for QuadraticSpec {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.eval(x)
    }

    fn optimum(&self) -> Option<Optimum> {
        Some(Optimum {
            point: vec![0.0; self.diag.len()],
            value: 0.0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn diagonal_examples() {
        assert_eq!(build_quadratic(1.0, 8.0, 2).unwrap().diag(), &[1.0, 8.0]);
        assert_eq!(build_quadratic(3.0, 3.0, 5).unwrap().diag(), &[3.0; 5]);
        let d = build_quadratic(1.0, 8.0, 4).unwrap();
        let expect = [1.0, 10.0 / 3.0, 17.0 / 3.0, 8.0];
        for (a, b) in d.diag().iter().zip(expect) {
            assert_relative_eq!(*a, b, max_relative = 1e-15);
        }
        assert_eq!(build_quadratic(2.0, 9.0, 1).unwrap().diag(), &[2.0]);
    }

    #[test]
    fn parameter_errors() {
        assert!(build_quadratic(0.0, 1.0, 2).is_err());
        assert!(build_quadratic(-1.0, 1.0, 2).is_err());
        let err = build_quadratic(8.0, 1.0, 2).unwrap_err().to_string();
        assert!(err.contains("alpha <= beta"), "{err}");
        assert!(build_quadratic(1.0, 2.0, 0).is_err());
    }

    #[test]
    fn evaluation() {
        let q = build_quadratic(1.0, 8.0, 2).unwrap();
        assert_eq!(q.value(&[0.0, 0.0]), 0.0);
        assert_eq!(q.value(&[1.0, 1.0]), 4.5);
    }

    proptest! {
        #[test]
        fn diag_invariants(alpha in 1e-3f64..10.0, ratio in 1.0f64..1e4, dim in 1usize..200) {
            let beta = alpha * ratio;
            let q = build_quadratic(alpha, beta, dim).unwrap();
            let d = q.diag();
            prop_assert_eq!(d.len(), dim);
            prop_assert_eq!(d[0], alpha);
            if dim >= 2 {
                prop_assert_eq!(d[dim - 1], beta);
                prop_assert_eq!(d[dim - 1] / d[0], beta / alpha);
            }
            for w in d.windows(2) {
                prop_assert!(w[0] <= w[1]);
            }
            prop_assert!(q.condition_number() >= 1.0);
        }
    }
}
