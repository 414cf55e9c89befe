//! Upper estimates of the Carnot-Caratheodory distance from the identity.
//!
//! The point is first rescaled by `delta_{1/N(p)}` so that every problem
//! has unit size; distances scale back by `N(p)`. For each restart the
//! energy `h sum |u_i|^2` of a piecewise-constant control is minimized
//! subject to hitting the target, with an augmented Lagrangian outer loop
//! and L-BFGS inner solves. Energy minimizers travel at constant speed, so
//! the path length of the result is the estimate.

use std::f64::consts::PI;

use argmin::core::{CostFunction, Executor, Gradient, State};
use argmin::solver::linesearch::MoreThuenteLineSearch;
use argmin::solver::quasinewton::LBFGS;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use super::path::{HorizontalPath, RealPoint};
use super::volume::box_quasinorm;
use crate::error::{Error, Result};
use crate::exec::{stream_rng, Strategy};
use crate::heisenberg::{Dilation, HeisenbergPoint};

/// Endpoint tolerance relative to the quasi-norm of the target.
pub const RELATIVE_TOLERANCE: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CcOptions {
    pub m: usize,
    pub restarts: usize,
    pub seed: u64,
    #[serde(skip)]
    pub strategy: Strategy,
}

impl Default for CcOptions {
    fn default() -> Self {
        CcOptions { m: 64, restarts: 20, seed: 0, strategy: Strategy::default() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CcEstimate {
    pub distance: f64,
    /// `|dx| + |dy| + |dt|^{1/2}` between the path endpoint and the target.
    pub endpoint_error: f64,
    pub tolerance: f64,
    pub best_restart: usize,
    pub feasible_restarts: usize,
    pub options: CcOptions,
    #[serde(skip)]
    pub path: HorizontalPath,
}

/// Homogeneous endpoint mismatch `|dx| + |dy| + |dt|^{1/2}`.
pub fn endpoint_error(a: &RealPoint, b: &RealPoint) -> f64 {
    let n = a.n();
    let dx: f64 = (0..n).map(|j| (a.x()[j] - b.x()[j]).powi(2)).sum::<f64>().sqrt();
    let dy: f64 = (0..n).map(|j| (a.y()[j] - b.y()[j]).powi(2)).sum::<f64>().sqrt();
    dx + dy + (a.t() - b.t()).abs().sqrt()
}

/// Augmented Lagrangian for reaching `target` from the identity.
#[derive(Clone)]
struct Penalized {
    n: usize,
    m: usize,
    target: Vec<f64>,
    lambda: Vec<f64>,
    mu: f64,
}

impl Penalized {
    fn h(&self) -> f64 {
        1.0 / self.m as f64
    }

    /// Endpoint from the identity, flattened as `(x, y, t)`.
    fn endpoint(&self, u: &[f64]) -> Vec<f64> {
        let (n, h) = (self.n, self.h());
        let mut out = vec![0.0; 2 * n + 1];
        for c in u.chunks(2 * n) {
            for j in 0..n {
                out[2 * n] += h * c[j] * out[n + j] + 0.5 * h * h * c[j] * c[n + j];
            }
            for j in 0..2 * n {
                out[j] += h * c[j];
            }
        }
        out
    }

    fn residual(&self, u: &[f64]) -> Vec<f64> {
        self.endpoint(u).iter().zip(&self.target).map(|(a, b)| a - b).collect()
    }

    fn value(&self, u: &[f64]) -> f64 {
        let energy: f64 = self.h() * u.iter().map(|v| v * v).sum::<f64>();
        let c = self.residual(u);
        let lin: f64 = c.iter().zip(&self.lambda).map(|(a, b)| a * b).sum();
        let sq: f64 = c.iter().map(|v| v * v).sum();
        energy + lin + 0.5 * self.mu * sq
    }

    fn gradient_of(&self, u: &[f64]) -> Vec<f64> {
        let (n, m, h) = (self.n, self.m, self.h());
        let c = self.residual(u);
        let w: Vec<f64> = c.iter().zip(&self.lambda).map(|(ci, li)| li + self.mu * ci).collect();
        let wt = w[2 * n];
        let mut g: Vec<f64> = u.iter().map(|v| 2.0 * h * v).collect();
        // y before each step for dt/dx', x' summed after each step for dt/dy'
        let mut y_before = vec![0.0; n];
        let mut x_after = vec![0.0; n];
        for i in 0..m {
            for j in 0..n {
                let (xd, yd) = (u[i * 2 * n + j], u[i * 2 * n + n + j]);
                g[i * 2 * n + j] += h * w[j] + wt * (h * y_before[j] + 0.5 * h * h * yd);
                g[i * 2 * n + n + j] += h * w[n + j] + wt * 0.5 * h * h * xd;
                y_before[j] += h * yd;
            }
        }
        for i in (0..m).rev() {
            for j in 0..n {
                g[i * 2 * n + n + j] += wt * h * h * x_after[j];
                x_after[j] += u[i * 2 * n + j];
            }
        }
        g
    }
}

impl CostFunction for Penalized {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, u: &Vec<f64>) -> std::result::Result<f64, argmin::core::Error> {
        Ok(self.value(u))
    }
}

impl Gradient for Penalized {
    type Param = Vec<f64>;
    type Gradient = Vec<f64>;

    fn gradient(&self, u: &Vec<f64>) -> std::result::Result<Vec<f64>, argmin::core::Error> {
        Ok(self.gradient_of(u))
    }
}

fn inner_solve(problem: &Penalized, init: Vec<f64>) -> Vec<f64> {
    let solver = LBFGS::new(MoreThuenteLineSearch::new(), 10)
        .with_tolerance_grad(1e-12)
        .and_then(|s| s.with_tolerance_cost(1e-15))
        .expect("valid tolerances");
    // a failed line search leaves the previous iterate in place
    match Executor::new(problem.clone(), solver).configure(|s| s.param(init.clone()).max_iters(500)).run() {
        Ok(res) => res.state().get_best_param().cloned().unwrap_or(init),
        Err(_) => init,
    }
}

/// Smooth random loop plus the straight drift to the horizontal target.
fn initial_controls<R: Rng>(rng: &mut R, n: usize, m: usize, target: &[f64]) -> Vec<f64> {
    const HARMONICS: usize = 3;
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let coeffs: Vec<[f64; 2]> =
        (0..2 * n * HARMONICS).map(|_| [normal.sample(rng), normal.sample(rng)]).collect();
    let mut u = Vec::with_capacity(2 * n * m);
    for i in 0..m {
        let s = (i as f64 + 0.5) / m as f64;
        for d in 0..2 * n {
            let mut v = target[d];
            for k in 0..HARMONICS {
                let [a, b] = coeffs[d * HARMONICS + k];
                let f = 2.0 * PI * (k + 1) as f64 * s;
                v += 2.0 * (a * f.cos() + b * f.sin()) / (k + 1) as f64;
            }
            u.push(v);
        }
    }
    u
}

/// One restart on a unit-size target; returns controls and endpoint error.
fn solve_restart(target: &RealPoint, m: usize, seed: u64, restart: u64) -> (Vec<f64>, f64) {
    let n = target.n();
    let flat: Vec<f64> = target.coords().copied().collect();
    let mut rng = stream_rng(seed, restart);
    let mut u = initial_controls(&mut rng, n, m, &flat);
    let mut problem = Penalized { n, m, target: flat, lambda: vec![0.0; 2 * n + 1], mu: 10.0 };
    let mut previous = f64::INFINITY;
    for _ in 0..60 {
        u = inner_solve(&problem, u);
        let c = problem.residual(&u);
        let size = c.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if size < 1e-12 {
            break;
        }
        for (l, ci) in problem.lambda.iter_mut().zip(&c) {
            *l += problem.mu * ci;
        }
        if size > 0.25 * previous {
            problem.mu = (problem.mu * 10.0).min(1e10);
        }
        previous = size;
    }
    let end = problem.endpoint(&u);
    let reached = HeisenbergPoint::new(end[..n].to_vec(), end[n..2 * n].to_vec(), end[2 * n]).expect("n >= 1");
    (u, endpoint_error(&reached, target))
}

/// Upper estimate of the distance from the identity to `p`.
pub fn cc_distance_estimate(p: &RealPoint, opts: &CcOptions) -> Result<CcEstimate> {
    if opts.m == 0 || opts.restarts == 0 {
        return Err(Error::Incompatible("need m >= 1 and at least one restart".into()));
    }
    if p.coords().any(|c| !c.is_finite()) {
        return Err(Error::Incompatible("coordinates must be finite".into()));
    }
    let size = box_quasinorm(p);
    let origin = HeisenbergPoint::identity(p.n(), &0.0);
    if size == 0.0 {
        return Ok(CcEstimate {
            distance: 0.0,
            endpoint_error: 0.0,
            tolerance: 0.0,
            best_restart: 0,
            feasible_restarts: opts.restarts,
            options: *opts,
            path: HorizontalPath::zeros(origin, opts.m)?,
        });
    }
    let unit = p.dilate(&Dilation::new(1.0 / size))?;
    let runs = opts.strategy.map(opts.restarts as u64, |i| solve_restart(&unit, opts.m, opts.seed, i));
    let tolerance = RELATIVE_TOLERANCE * size;
    let mut best: Option<(usize, HorizontalPath, f64)> = None;
    let mut feasible = 0;
    let mut closest = f64::INFINITY;
    for (i, (u, err)) in runs.into_iter().enumerate() {
        closest = closest.min(err * size);
        if err > RELATIVE_TOLERANCE {
            continue;
        }
        feasible += 1;
        let scaled: Vec<f64> = u.iter().map(|v| v * size).collect();
        let path = HorizontalPath::from_flat(origin.clone(), &scaled)?;
        if best.as_ref().is_none_or(|(_, b, _)| path.length() < b.length()) {
            best = Some((i, path, err * size));
        }
    }
    let (best_restart, path, err) = best.ok_or(Error::NoFeasiblePath { penalty: closest })?;
    Ok(CcEstimate {
        distance: path.length(),
        endpoint_error: err,
        tolerance,
        best_restart,
        feasible_restarts: feasible,
        options: *opts,
        path,
    })
}

/// Distance between two points, through right translation by `g^{-1}`.
pub fn cc_distance_between(g: &RealPoint, h: &RealPoint, opts: &CcOptions) -> Result<CcEstimate> {
    cc_distance_estimate(&h.compose(&g.inverse())?, opts)
}

/// `(d(delta_s p), |s| d(p))`.
pub fn dilation_scaling_check(p: &RealPoint, s: f64, opts: &CcOptions) -> Result<(f64, f64)> {
    let scaled = cc_distance_estimate(&p.dilate(&Dilation::new(s))?, opts)?.distance;
    let base = cc_distance_estimate(p, opts)?.distance;
    Ok((scaled, s.abs() * base))
}

/// Length of the projection to the horizontal coordinates; a lower bound
/// for the distance from the identity.
pub fn planar_lower_bound(p: &RealPoint) -> f64 {
    p.x().iter().chain(p.y()).map(|v| v * v).sum::<f64>().sqrt()
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparabilityBand {
    pub samples: usize,
    pub min: f64,
    pub max: f64,
}

impl ComparabilityBand {
    pub fn ratio(&self) -> f64 {
        self.max / self.min
    }
}

/// Range of distance estimates over random points with `N(p) = 1`.
pub fn comparability_band(n: usize, samples: usize, opts: &CcOptions) -> Result<ComparabilityBand> {
    let mut rng = stream_rng(opts.seed, u64::MAX);
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let mut min = f64::INFINITY;
    let mut max = 0.0f64;
    for _ in 0..samples {
        let raw: Vec<f64> = (0..2 * n + 1).map(|_| normal.sample(&mut rng)).collect();
        let g = HeisenbergPoint::new(raw[..n].to_vec(), raw[n..2 * n].to_vec(), raw[2 * n])?;
        let p = g.dilate(&Dilation::new(1.0 / box_quasinorm(&g)))?;
        let d = cc_distance_estimate(&p, opts)?.distance;
        min = min.min(d);
        max = max.max(d);
    }
    Ok(ComparabilityBand { samples, min, max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Strategy;
    use proptest::prelude::*;

    fn pt(x: &[f64], y: &[f64], t: f64) -> RealPoint {
        HeisenbergPoint::new(x.to_vec(), y.to_vec(), t).unwrap()
    }

    fn quick() -> CcOptions {
        CcOptions { m: 32, restarts: 4, seed: 11, strategy: Strategy::default() }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let n = 2;
        let m = 7;
        let mut rng = stream_rng(5, 0);
        let target = vec![0.3, -0.2, 0.5, 0.1, 0.7];
        let u = initial_controls(&mut rng, n, m, &target);
        let p = Penalized { n, m, target, lambda: vec![0.4, -0.1, 0.2, 0.3, -0.7], mu: 3.0 };
        let g = p.gradient_of(&u);
        for k in 0..u.len() {
            let mut a = u.clone();
            let mut b = u.clone();
            a[k] += 1e-6;
            b[k] -= 1e-6;
            let fd = (p.value(&a) - p.value(&b)) / 2e-6;
            assert!((fd - g[k]).abs() < 1e-5 * (1.0 + fd.abs()), "component {k}: {fd} vs {}", g[k]);
        }
    }

    #[test]
    fn straight_segments_are_found() {
        let d = cc_distance_estimate(&pt(&[1.0], &[0.0], 0.0), &quick()).unwrap();
        assert!((d.distance - 1.0).abs() < 0.01, "{}", d.distance);
        assert!(d.endpoint_error <= d.tolerance);
        let d = cc_distance_estimate(&pt(&[0.0], &[-2.0], 0.0), &quick()).unwrap();
        assert!((d.distance - 2.0).abs() < 0.02, "{}", d.distance);
    }

    #[test]
    fn vertical_point_needs_the_isoperimetric_length() {
        let d = cc_distance_estimate(&pt(&[0.0], &[0.0], 1.0), &quick()).unwrap();
        let dido = 2.0 * std::f64::consts::PI.sqrt();
        assert!((d.distance / dido - 1.0).abs() < 0.02, "{}", d.distance);
        let reached = d.path.endpoint();
        assert!(endpoint_error(&reached, &pt(&[0.0], &[0.0], 1.0)) <= d.tolerance);
    }

    #[test]
    fn zero_and_bad_inputs() {
        let zero = pt(&[0.0, 0.0], &[0.0, 0.0], 0.0);
        assert_eq!(cc_distance_estimate(&zero, &quick()).unwrap().distance, 0.0);
        let bad = CcOptions { restarts: 0, ..quick() };
        assert!(cc_distance_estimate(&zero, &bad).is_err());
        assert!(cc_distance_estimate(&pt(&[f64::NAN], &[0.0], 0.0), &quick()).is_err());
    }

    #[test]
    fn more_restarts_never_hurt() {
        let p = pt(&[0.4], &[-0.3], 0.8);
        let few = cc_distance_estimate(&p, &CcOptions { restarts: 2, ..quick() }).unwrap();
        let many = cc_distance_estimate(&p, &CcOptions { restarts: 6, ..quick() }).unwrap();
        assert!(many.distance <= few.distance);
    }

    #[test]
    fn strategies_agree() {
        let p = pt(&[0.2], &[0.5], -0.6);
        let a = cc_distance_estimate(&p, &CcOptions { strategy: Strategy::Sequential, ..quick() }).unwrap();
        let b = cc_distance_estimate(&p, &CcOptions { strategy: Strategy::Parallel, ..quick() }).unwrap();
        assert_eq!(a.distance, b.distance);
    }

    #[test]
    fn dilation_examples() {
        let (a, b) = dilation_scaling_check(&pt(&[1.0], &[0.0], 0.0), 3.0, &quick()).unwrap();
        assert!((a - 3.0).abs() < 0.03 && (b - 3.0).abs() < 0.03);
        let (a, b) = dilation_scaling_check(&pt(&[0.3], &[0.1], 0.4), 1.0, &quick()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn general_pairs_are_right_invariant() {
        let g = pt(&[1.0], &[2.0], -1.0);
        let h = pt(&[1.5], &[2.0], 0.5);
        let k = pt(&[-3.0], &[0.7], 2.0);
        let d1 = cc_distance_between(&g, &h, &quick()).unwrap().distance;
        let d2 = cc_distance_between(&g.compose(&k).unwrap(), &h.compose(&k).unwrap(), &quick()).unwrap().distance;
        assert!((d1 - d2).abs() < 1e-6 * (1.0 + d1));
    }

    #[test]
    fn comparability_band_is_narrow() {
        let band = comparability_band(1, 8, &quick()).unwrap();
        assert!(band.min > 0.0 && band.ratio() <= 10.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn estimates_dominate_the_planar_projection(v in prop::collection::vec(-2.0f64..2.0, 3)) {
            let p = pt(&v[..1], &v[1..2], v[2]);
            let d = cc_distance_estimate(&p, &quick()).unwrap();
            prop_assert!(d.distance >= 0.0);
            prop_assert!(d.distance >= planar_lower_bound(&p) - d.tolerance);
        }
    }
}
