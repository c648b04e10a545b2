//! Objective functions and the counted evaluation oracle.

mod benchmark;
mod low_rank;
mod monotone;
mod quadratic;

pub use benchmark::{BenchmarkFunction, BenchmarkKind};
pub use low_rank::{build_low_rank, LowRankComposite};
pub use monotone::{wrap_monotone, MonotoneWrap, Transform, TransformId};
pub use quadratic::{build_quadratic, QuadraticSpec};

use crate::error::{Error, Result};

/// Minimizer and minimum value of an objective.
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub point: Vec<f64>,
    pub value: f64,
}

/// A black-box function `R^n -> R`.
///
/// Implementations are pure; evaluation counting lives in
/// [`ObjectiveOracle`].
pub trait Objective {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    fn optimum(&self) -> Option<Optimum> {
        None
    }
}

impl<T: Objective + ?Sized> Objective for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }

    fn optimum(&self) -> Option<Optimum> {
        (**self).optimum()
    }
}

impl<T: Objective + ?Sized> Objective for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }

    fn optimum(&self) -> Option<Optimum> {
        (**self).optimum()
    }
}

/// Counted evaluator; the single source of truth for evaluation budgets.
///
/// One oracle per run: the counter is not shared.
#[derive(Debug)]
pub struct ObjectiveOracle<O> {
    objective: O,
    eval_count: u64,
    budget: Option<u64>,
    optimum: Option<Optimum>,
}

impl<O: Objective> ObjectiveOracle<O> {
    pub fn new(objective: O) -> Self {
        let optimum = objective.optimum();
        Self {
            objective,
            eval_count: 0,
            budget: None,
            optimum,
        }
    }

    /// Cap the number of evaluations; further calls fail with
    /// [`Error::BudgetExhausted`].
    pub fn with_budget(mut self, max_evals: u64) -> Self {
        self.budget = Some(max_evals);
        self
    }

    pub fn dim(&self) -> usize {
        self.objective.dim()
    }

    pub fn eval_count(&self) -> u64 {
        self.eval_count
    }

    pub fn budget(&self) -> Option<u64> {
        self.budget
    }

    /// Evaluations left before the budget is hit (`u64::MAX` if unbounded).
    pub fn remaining(&self) -> u64 {
        self.budget
            .map_or(u64::MAX, |b| b.saturating_sub(self.eval_count))
    }

    pub fn known_optimum(&self) -> Option<&Optimum> {
        self.optimum.as_ref()
    }

    pub fn objective(&self) -> &O {
        &self.objective
    }

    pub fn into_inner(self) -> O {
        self.objective
    }

    /// `f(x)`, counting one evaluation.
    pub fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        let n = self.objective.dim();
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.len(),
            });
        }
        if let Some(i) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::param(format!(
                "non-finite coordinate {} at index {i}",
                x[i]
            )));
        }
        if let Some(budget) = self.budget {
            if self.eval_count >= budget {
                return Err(Error::BudgetExhausted { budget });
            }
        }
        self.eval_count += 1;
        Ok(self.objective.value(x))
    }

    /// `value - f(x*)`, clamped at zero, when the optimum is known.
    pub fn gap(&self, value: f64) -> Option<f64> {
        self.optimum.as_ref().map(|o| (value - o.value).max(0.0))
    }
}
