//! Gradientless descent (GLD): zeroth-order optimizers that move only by
//! comparing objective values at points sampled on a geometric ladder of
//! radii.
//!
//! * [`gld`]: GLD-Search and GLD-Fast runners and their traces.
//! * [`objectives`]: test objectives behind a counted evaluation oracle.
//! * [`sampling`]: reproducible RNG, ball and Gaussian samplers, radius ladders.
//! * [`geometry`]: exact and Monte Carlo checks of the ball-intersection
//!   and descent-probability bounds.
//! * [`baselines`]: accelerated random search for comparison.
//! * [`harness`]: experiment specs, CSV traces and summaries.

pub mod baselines;
pub mod error;
pub mod geometry;
pub mod gld;
pub mod harness;
pub mod objectives;
pub mod sampling;

pub use error::{Error, Result};
pub use gld::{
    gld_fast_run, gld_search_run, gld_step, GldFastConfig, GldSearchConfig, RunControl, RunTrace,
    TraceRecord,
};
pub use objectives::{Objective, ObjectiveOracle, Optimum};
pub use sampling::{RadiusLadder, SamplerKind, SamplerSpec, SeededRng};
