//! The box quasi-norm, Monte Carlo ball volumes and translation Jacobians.

use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

use super::path::RealPoint;
use crate::error::{Error, Result};
use crate::exec::{stream_rng, Strategy};
use crate::heisenberg::HeisenbergPoint;

/// `|x| + |y| + |t|^{1/2}` with Euclidean norms on `x` and `y`.
pub fn box_quasinorm(p: &RealPoint) -> f64 {
    let norm = |v: &[f64]| v.iter().map(|c| c * c).sum::<f64>().sqrt();
    norm(p.x()) + norm(p.y()) + p.t().abs().sqrt()
}

#[derive(Clone, Debug, Serialize)]
pub struct VolumeEstimate {
    pub n: usize,
    pub rho: f64,
    pub samples: u64,
    pub seed: u64,
    pub volume_rho: f64,
    pub volume_2rho: f64,
    pub exponent: f64,
    pub expected_exponent: u32,
}

const CHUNK: u64 = 10_000;

/// Volume of `{N <= rho}` by sampling `(x, y)` in `[-rho, rho]^{2n}`.
///
/// The `t`-section over a fixed `(x, y)` is an interval of length
/// `2 (rho - |x| - |y|)_+^2`, so only the horizontal part is sampled.
fn ball_volume(n: usize, rho: f64, samples: u64, seed: u64, stream: u64, strategy: Strategy) -> f64 {
    let chunks = samples.div_ceil(CHUNK);
    let sums = strategy.map(chunks, |c| {
        let mut rng = stream_rng(seed, stream + c);
        let here = CHUNK.min(samples - c * CHUNK);
        let mut acc = 0.0;
        for _ in 0..here {
            let mut nx = 0.0;
            let mut ny = 0.0;
            for _ in 0..n {
                nx += rng.random_range(-rho..rho).powi(2);
                ny += rng.random_range(-rho..rho).powi(2);
            }
            let gap = rho - nx.sqrt() - ny.sqrt();
            if gap > 0.0 {
                acc += 2.0 * gap * gap;
            }
        }
        acc
    });
    let mean = sums.iter().sum::<f64>() / samples as f64;
    mean * (2.0 * rho).powi(2 * n as i32)
}

/// `log_2(V(2 rho) / V(rho))` from independent Monte Carlo volumes.
pub fn ball_volume_scaling(n: usize, rho: f64, samples: u64, seed: u64, strategy: Strategy) -> Result<VolumeEstimate> {
    if n == 0 || rho.is_nan() || rho <= 0.0 || samples == 0 {
        return Err(Error::Incompatible("need n >= 1, rho > 0 and samples >= 1".into()));
    }
    let volume_rho = ball_volume(n, rho, samples, seed, 0, strategy);
    let volume_2rho = ball_volume(n, 2.0 * rho, samples, seed, 1 << 32, strategy);
    Ok(VolumeEstimate {
        n,
        rho,
        samples,
        seed,
        volume_rho,
        volume_2rho,
        exponent: (volume_2rho / volume_rho).log2(),
        expected_exponent: 2 * n as u32 + 2,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

fn flatten(p: &RealPoint) -> Vec<f64> {
    p.coords().copied().collect()
}

fn unflatten(n: usize, v: &[f64]) -> RealPoint {
    HeisenbergPoint::new(v[..n].to_vec(), v[n..2 * n].to_vec(), v[2 * n]).expect("n >= 1")
}

/// Central-difference Jacobian determinant of `p -> h p` or `p -> p h`.
pub fn translation_jacobian(h: &RealPoint, side: Side, at: &RealPoint) -> Result<f64> {
    if h.n() != at.n() {
        return Err(Error::Incompatible("points of different dimension".into()));
    }
    let n = h.n();
    let d = 2 * n + 1;
    let base = flatten(at);
    let apply = |v: &[f64]| {
        let p = unflatten(n, v);
        let q = match side {
            Side::Left => h.compose_unchecked(&p),
            Side::Right => p.compose_unchecked(h),
        };
        flatten(&q)
    };
    let mut jac = DMatrix::zeros(d, d);
    for col in 0..d {
        let step = 1e-4 * (1.0 + base[col].abs());
        let mut plus = base.clone();
        let mut minus = base.clone();
        plus[col] += step;
        minus[col] -= step;
        let (fp, fm) = (apply(&plus), apply(&minus));
        for row in 0..d {
            jac[(row, col)] = (fp[row] - fm[row]) / (plus[col] - minus[col]);
        }
    }
    Ok(jac.determinant())
}

/// Largest `|det - 1|` over `probes` random base points.
pub fn translation_jacobian_check(h: &RealPoint, side: Side, probes: usize, seed: u64) -> Result<f64> {
    let mut rng = stream_rng(seed, 0);
    let n = h.n();
    let mut worst = 0.0f64;
    for _ in 0..probes.max(1) {
        let v: Vec<f64> = (0..2 * n + 1).map(|_| rng.random_range(-10.0..10.0)).collect();
        let det = translation_jacobian(h, side, &unflatten(n, &v))?;
        worst = worst.max((det - 1.0).abs());
    }
    Ok(worst)
}
