use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::sampling::SeededRng;

use super::{Objective, Optimum, QuadraticSpec};

const ORTHONORMAL_TOL: f64 = 1e-10;

/// `f(x) = g(Aᵀx) + δ·sin(Σ xᵢ)` with orthonormal `A ∈ R^{n×k}`.
///
/// `g(Aᵀx)` equals `g` applied to the latent coordinates of the projection
/// `AAᵀx`, so motion orthogonal to the column space of `A` only moves the
/// bounded perturbation.
#[derive(Debug, Clone)]
pub struct LowRankComposite {
    basis: DMatrix<f64>,
    inner: QuadraticSpec,
    delta: f64,
}

/// Build a composite whose basis is the Q factor of a seeded `n×k`
/// standard-Gaussian matrix.
pub fn build_low_rank(
    dim: usize,
    latent_dim: usize,
    inner: QuadraticSpec,
    delta: f64,
    seed: u64,
) -> Result<LowRankComposite> {
    if latent_dim < 1 || latent_dim >= dim {
        return Err(Error::param(format!(
            "latent dimension must satisfy 1 <= k < n (got k={latent_dim}, n={dim})"
        )));
    }
    let mut rng = SeededRng::new(seed);
    let gaussian = DMatrix::from_fn(dim, latent_dim, |_, _| rng.standard_normal());
    let mut basis = gaussian.qr().q();
    if orthonormality_error(&basis) > ORTHONORMAL_TOL {
        basis = basis.qr().q();
    }
    LowRankComposite::with_basis(basis, inner, delta)
}

fn orthonormality_error(basis: &DMatrix<f64>) -> f64 {
    let gram = basis.transpose() * basis;
    let k = gram.nrows();
    let mut worst = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - target).abs());
        }
    }
    worst
}

impl LowRankComposite {
    /// Use an explicit basis. Columns must be orthonormal to 1e-10.
    pub fn with_basis(basis: DMatrix<f64>, inner: QuadraticSpec, delta: f64) -> Result<Self> {
        let (n, k) = basis.shape();
        if k < 1 || k >= n {
            return Err(Error::param(format!(
                "latent dimension must satisfy 1 <= k < n (got k={k}, n={n})"
            )));
        }
        if inner.dim() != k {
            return Err(Error::param(format!(
                "inner objective has dimension {} but the basis has {k} columns",
                inner.dim()
            )));
        }
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(Error::param(format!("perturbation bound must be >= 0, got {delta}")));
        }
        let err = orthonormality_error(&basis);
        if err > ORTHONORMAL_TOL {
            return Err(Error::param(format!("basis is not orthonormal (max |AᵀA - I| = {err:e})")));
        }
        Ok(Self { basis, inner, delta })
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn inner(&self) -> &QuadraticSpec {
        &self.inner
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn latent_dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Projected condition number `Q_g(A)`.
    pub fn projected_condition_number(&self) -> f64 {
        self.inner.condition_number()
    }

    /// `Aᵀx`.
    pub fn latent_coords(&self, x: &[f64]) -> Vec<f64> {
        let (n, k) = self.basis.shape();
        (0..k)
            .map(|j| (0..n).map(|i| self.basis[(i, j)] * x[i]).sum())
            .collect()
    }

    /// `g(P_A x)`, the low-rank part without perturbation.
    pub fn projected_value(&self, x: &[f64]) -> f64 {
        self.inner.eval(&self.latent_coords(x))
    }

    /// `g(P_A x) - min g`; the optimality gap of the low-rank part.
    pub fn projected_gap(&self, x: &[f64]) -> f64 {
        self.projected_value(x)
    }

    pub fn perturbation(&self, x: &[f64]) -> f64 {
        if self.delta == 0.0 {
            0.0
        } else {
            self.delta * x.iter().sum::<f64>().sin()
        }
    }
}

impl Objective for LowRankComposite {
    fn dim(&self) -> usize {
        self.basis.nrows()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.projected_value(x) + self.perturbation(x)
    }

    /// Known only for the unperturbed composite.
    fn optimum(&self) -> Option<Optimum> {
        (self.delta == 0.0).then(|| Optimum {
            point: vec![0.0; self.dim()],
            value: 0.0,
        })
    }
}
