//! The three-state grounded path system and its one-parameter family of
//! two-dimensional interface-invariant projections.
//!
//! `Σ(s) = (s² + 3s + 1) / (s³ + 5s² + 6s + 1)` with
//! `P(α) = [e₁, (0, α, β)ᵀ]`, `Q(α) = (0, −β, α)ᵀ`, `β = √(1 − α²)`.

use faer::Mat;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lti::{self, StateSpace, DEFAULT_RTOL};
use crate::projection::{self, Projection};

pub fn system() -> StateSpace {
    let a = [[-2.0, 1.0, 0.0], [1.0, -2.0, 1.0], [0.0, 1.0, -1.0]];
    StateSpace::new(
        Mat::from_fn(3, 3, |i, j| a[i][j]),
        Mat::from_fn(3, 1, |i, _| if i == 0 { 1.0 } else { 0.0 }),
        Mat::from_fn(1, 3, |_, j| if j == 0 { 1.0 } else { 0.0 }),
        Mat::zeros(1, 1),
    )
    .expect("static example is well formed")
}

pub fn beta(alpha: f64) -> f64 {
    (1.0 - alpha * alpha).max(0.0).sqrt()
}

pub fn projection(alpha: f64) -> Result<Projection> {
    if !(-1.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} outside [-1, 1]")));
    }
    let b = beta(alpha);
    let p = Mat::from_fn(3, 2, |i, j| match (i, j) {
        (0, 0) => 1.0,
        (1, 1) => alpha,
        (2, 1) => b,
        _ => 0.0,
    });
    let q = Mat::from_fn(3, 1, |i, _| [0.0, -b, alpha][i]);
    Projection::with_complement(p, q)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub alpha: f64,
    pub error: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub points: Vec<SweepPoint>,
    pub min_error: SweepPoint,
    pub min_bound: SweepPoint,
}

/// `α = −1, −1 + step, …, 1`, evaluating the true error and the product bound.
pub fn sweep(step: f64) -> Result<Sweep> {
    if !(step > 0.0 && step <= 2.0) {
        return Err(Error::InvalidParameter(format!("step = {step} must lie in (0, 2]")));
    }
    let sys = system();
    let count = (2.0 / step).round() as usize;
    let points = (0..=count)
        .map(|i| {
            let alpha = (-1.0 + i as f64 * step).clamp(-1.0, 1.0);
            let proj = projection(alpha)?;
            let reduced = projection::build_prom(&sys, &proj)?;
            let error = lti::hinf_norm(&lti::subtract(&reduced, &sys)?, DEFAULT_RTOL)?.value;
            let bound = projection::error_bound(&sys, &proj)?.bound;
            Ok(SweepPoint { alpha, error, bound })
        })
        .collect::<Result<Vec<_>>>()?;
    let argmin = |key: fn(&SweepPoint) -> f64| {
        *points
            .iter()
            .min_by(|x, y| key(x).total_cmp(&key(y)))
            .expect("sweep has at least two points")
    };
    Ok(Sweep { min_error: argmin(|p| p.error), min_bound: argmin(|p| p.bound), points })
}
