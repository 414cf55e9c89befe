//! Horizontal paths with piecewise-constant controls.
//!
//! Right translations preserve the horizontal distribution, so the frame is
//! `X_j = d/dx_j + y_j d/dt`, `Y_j = d/dy_j` and a horizontal curve obeys
//! `t' = x'.y`. On a step of length `h` with constant velocity `(u, v)` this
//! integrates exactly to `(h u, h v, h u.y_0 + h^2/2 u.v)`, which is the
//! left factor `(h u, h v, h^2/2 u.v)` applied to the current point.

use crate::error::{Error, Result};
use crate::heisenberg::HeisenbergPoint;

pub type RealPoint = HeisenbergPoint<f64>;

/// `m` steps of length `1/m`; step `i` moves with velocity
/// `controls[i] = (x'_1..x'_n, y'_1..y'_n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HorizontalPath {
    start: RealPoint,
    controls: Vec<Vec<f64>>,
}

impl HorizontalPath {
    pub fn new(start: RealPoint, controls: Vec<Vec<f64>>) -> Result<Self> {
        let n = start.n();
        if controls.is_empty() {
            return Err(Error::Incompatible("a path needs at least one step".into()));
        }
        if let Some(c) = controls.iter().find(|c| c.len() != 2 * n) {
            return Err(Error::Incompatible(format!("control of length {} for n = {n}", c.len())));
        }
        Ok(HorizontalPath { start, controls })
    }

    /// Builds a path from a flat control vector of length `2 n m`.
    pub fn from_flat(start: RealPoint, flat: &[f64]) -> Result<Self> {
        let w = 2 * start.n();
        if flat.is_empty() || !flat.len().is_multiple_of(w) {
            return Err(Error::Incompatible(format!("{} controls is not a multiple of {w}", flat.len())));
        }
        HorizontalPath::new(start, flat.chunks(w).map(<[f64]>::to_vec).collect())
    }

    pub fn zeros(start: RealPoint, m: usize) -> Result<Self> {
        let n = start.n();
        HorizontalPath::new(start, vec![vec![0.0; 2 * n]; m])
    }

    pub fn m(&self) -> usize {
        self.controls.len()
    }

    pub fn step(&self) -> f64 {
        1.0 / self.m() as f64
    }

    pub fn n(&self) -> usize {
        self.start.n()
    }

    pub fn start(&self) -> &RealPoint {
        &self.start
    }

    pub fn controls(&self) -> &[Vec<f64>] {
        &self.controls
    }

    /// Length in the metric making `X_j, Y_j` orthonormal.
    pub fn length(&self) -> f64 {
        let h = self.step();
        self.controls.iter().map(|c| h * c.iter().map(|v| v * v).sum::<f64>().sqrt()).sum()
    }

    /// `h sum |u_i|^2`; bounds the squared length from above.
    pub fn energy(&self) -> f64 {
        let h = self.step();
        self.controls.iter().map(|c| h * c.iter().map(|v| v * v).sum::<f64>()).sum()
    }

    pub fn endpoint(&self) -> RealPoint {
        integrate(&self.start, &self.controls)
    }

    /// Endpoint of the same controls started at the identity.
    pub fn increment(&self) -> RealPoint {
        integrate(&HeisenbergPoint::identity(self.n(), &0.0), &self.controls)
    }

    /// Runs `self` and then `next` on the unit interval, rescaling controls
    /// so each part keeps its shape and length.
    pub fn concat(&self, next: &HorizontalPath) -> Result<HorizontalPath> {
        if next.n() != self.n() {
            return Err(Error::Incompatible("paths of different dimension".into()));
        }
        let total = (self.m() + next.m()) as f64;
        let scaled = |p: &HorizontalPath| {
            let f = total / p.m() as f64;
            p.controls.iter().map(|c| c.iter().map(|v| v * f).collect::<Vec<f64>>()).collect::<Vec<_>>()
        };
        let mut controls = scaled(self);
        controls.extend(scaled(next));
        HorizontalPath::new(self.start.clone(), controls)
    }
}

fn integrate(start: &RealPoint, controls: &[Vec<f64>]) -> RealPoint {
    let n = start.n();
    let h = 1.0 / controls.len() as f64;
    let (mut x, mut y, mut t) = start.clone().into_parts();
    for c in controls {
        let (u, v) = c.split_at(n);
        for j in 0..n {
            t += h * u[j] * y[j] + 0.5 * h * h * u[j] * v[j];
        }
        for j in 0..n {
            x[j] += h * u[j];
            y[j] += h * v[j];
        }
    }
    HeisenbergPoint::new(x, y, t).expect("dimensions preserved")
}
