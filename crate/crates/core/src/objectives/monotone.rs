use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{Objective, Optimum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformId {
    Identity,
    /// `g(y) = -exp(-sqrt(y))`, defined for `y >= 0`.
    NegExpNegSqrt,
    Custom,
}

/// A strictly increasing scalar map.
#[derive(Clone)]
pub enum Transform {
    Identity,
    NegExpNegSqrt,
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transform::Identity => f.write_str("Identity"),
            Transform::NegExpNegSqrt => f.write_str("NegExpNegSqrt"),
            Transform::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl Transform {
    pub fn id(&self) -> TransformId {
        match self {
            Transform::Identity => TransformId::Identity,
            Transform::NegExpNegSqrt => TransformId::NegExpNegSqrt,
            Transform::Custom(_) => TransformId::Custom,
        }
    }

    pub fn apply(&self, y: f64) -> Result<f64> {
        match self {
            Transform::Identity => Ok(y),
            Transform::NegExpNegSqrt => {
                if y < 0.0 {
                    Err(Error::Domain(format!(
                        "-exp(-sqrt(y)) is undefined for negative y={y}"
                    )))
                } else {
                    Ok(-(-y.sqrt()).exp())
                }
            }
            Transform::Custom(g) => Ok(g(y)),
        }
    }
}

impl From<TransformId> for Transform {
    /// `Custom` has no canonical map and falls back to the identity.
    fn from(id: TransformId) -> Self {
        match id {
            TransformId::Identity | TransformId::Custom => Transform::Identity,
            TransformId::NegExpNegSqrt => Transform::NegExpNegSqrt,
        }
    }
}

/// `g ∘ f` for a strictly increasing `g`.
#[derive(Debug, Clone)]
pub struct MonotoneWrap<O> {
    inner: O,
    transform: Transform,
}

pub fn wrap_monotone<O: Objective>(inner: O, transform_id: TransformId) -> MonotoneWrap<O> {
    MonotoneWrap::new(inner, transform_id.into())
}

impl<O: Objective> MonotoneWrap<O> {
    pub fn new(inner: O, transform: Transform) -> Self {
        Self { inner, transform }
    }

    pub fn transform_id(&self) -> TransformId {
        self.transform.id()
    }

    pub fn transform(&self) -> &Transform {
        &self.transform
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }

    /// Wrapped value, surfacing domain errors that [`Objective::value`]
    /// reports as NaN.
    pub fn try_value(&self, x: &[f64]) -> Result<f64> {
        self.transform.apply(self.inner.value(x))
    }
}

impl<O: Objective> Objective for MonotoneWrap<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.try_value(x).unwrap_or(f64::NAN)
    }

    fn optimum(&self) -> Option<Optimum> {
        let opt = self.inner.optimum()?;
        let value = self.transform.apply(opt.value).ok()?;
        Some(Optimum {
            point: opt.point,
            value,
        })
    }
}
