//! Seeded random instances: stable systems and orthonormal bases.

use faer::Mat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg;
use crate::lti::StateSpace;

/// Deterministic stream `stream` of the generator seeded with `seed`.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn gaussian(rng: &mut impl Rng, nrows: usize, ncols: usize) -> Mat<f64> {
    Mat::from_fn(nrows, ncols, |_, _| rng.sample(StandardNormal))
}

/// Haar-like random `n × r` column-orthonormal matrix.
pub fn orthonormal(rng: &mut impl Rng, n: usize, r: usize) -> Result<Mat<f64>> {
    linalg::orthonormalize(gaussian(rng, n, r).as_ref())
}

/// Random system with a well-damped spectrum: `A` is shifted until every
/// eigenvalue satisfies `Re λ ≤ −(|Im λ| + margin)`.
pub fn stable_system(rng: &mut impl Rng, n: usize, m: usize, p: usize, margin: f64) -> Result<StateSpace> {
    let mut a = gaussian(rng, n, n);
    let scale = 1.0 / (n.max(1) as f64).sqrt();
    for j in 0..n {
        for i in 0..n {
            a[(i, j)] *= scale;
        }
    }
    let ev = linalg::spectrum(a.as_ref(), "A")?;
    let max_re = ev.iter().fold(f64::NEG_INFINITY, |s, l| s.max(l.re));
    let max_im = ev.iter().fold(0.0_f64, |s, l| s.max(l.im.abs()));
    let shift = max_re + max_im + margin;
    for i in 0..n {
        a[(i, i)] -= shift;
    }
    let b = gaussian(rng, n, m);
    let c = gaussian(rng, p, n);
    let d = Mat::from_fn(p, m, |_, _| 0.2 * rng.sample::<f64, _>(StandardNormal));
    StateSpace::new(a, b, c, d)
}

/// Random system with symmetric negative definite `A`, eigenvalues in `[−hi, −lo]`.
pub fn symmetric_stable_system(rng: &mut impl Rng, n: usize, m: usize, p: usize, lo: f64, hi: f64) -> Result<StateSpace> {
    let u = orthonormal(rng, n, n)?;
    let lambda: Vec<f64> = (0..n).map(|_| -rng.random_range(lo..hi)).collect();
    let a = Mat::from_fn(n, n, |i, j| (0..n).map(|k| u[(i, k)] * lambda[k] * u[(j, k)]).sum::<f64>());
    let a = Mat::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]));
    StateSpace::new(a, gaussian(rng, n, m), gaussian(rng, p, n), Mat::zeros(p, m))
}
