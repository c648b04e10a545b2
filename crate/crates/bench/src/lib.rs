//! Shared fixtures for the criterion benchmarks.

use gld::objectives::{build_quadratic, QuadraticSpec};

/// `f_{1,Q,n}` with the standard start `(1/√n)(1, ..., 1)`.
pub fn quadratic_fixture(n: usize, q: f64) -> (QuadraticSpec, Vec<f64>) {
    let f = build_quadratic(1.0, q, n).expect("valid quadratic");
    (f, vec![1.0 / (n as f64).sqrt(); n])
}
