//! Truncated solenoids over exact rational coordinates.
//!
//! A point of the depth-`L` Heisenberg solenoid is a left coset
//! `g H_n(r^L Z)` of `H_n(Q)`, stored by its canonical representative.
//! Shallower levels are derived by re-reducing the same representative.
//!
//! Canonical form, with `M = r^L`: right-multiply by `(M a, M b, 0)` to bring
//! every `x_i, y_i` into `[0, M)`, which shifts `t` by `M x.b`, then
//! right-multiply by `(0, 0, M c)` to bring `t` into `[0, M)`. The order of
//! the two steps is part of the wire format.

mod circle;
mod dilated;

pub use circle::{pi0, tilde_q_embed, CircleSolenoidPoint};
pub use dilated::{dilated_reduce, dilated_to_standard, psi_embed, standard_to_dilated, DilatedSolenoidPoint};

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};

use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::heisenberg::{Dilation, HeisenbergPoint};
use crate::ring::radic::check_radix;

pub type RationalPoint = HeisenbergPoint<BigRational>;

/// Splits `v = rem + q m` with `q = floor(v / m)` and `0 <= rem < m`.
pub(crate) fn div_floor(v: &BigRational, m: &BigInt) -> (BigRational, BigInt) {
    let m = BigRational::from_integer(m.clone());
    let q = (v / &m).floor().to_integer();
    let rem = v - &m * BigRational::from_integer(q.clone());
    (rem, q)
}

pub(crate) fn power(r: &BigInt, l: u32) -> BigInt {
    Pow::pow(r, l)
}

/// Reduces `x` and `y` into `[0, m)` by a right lattice translation and
/// returns the adjusted `t` before its final reduction.
pub(crate) fn reduce_horizontal(g: &RationalPoint, m: &BigInt) -> (Vec<BigRational>, Vec<BigRational>, BigRational) {
    let x: Vec<BigRational> = g.x().iter().map(|v| div_floor(v, m).0).collect();
    let mut t = g.t().clone();
    let mr = BigRational::from_integer(m.clone());
    let y = g
        .x()
        .iter()
        .zip(g.y())
        .map(|(xi, yi)| {
            let (rem, q) = div_floor(yi, m);
            // right factor (.., M b, ..) with b = -q
            t -= xi * &mr * BigRational::from_integer(q);
            rem
        })
        .collect();
    (x, y, t)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SolenoidPoint {
    r: BigInt,
    depth: u32,
    rep: RationalPoint,
}

impl SolenoidPoint {
    pub fn radix(&self) -> &BigInt {
        &self.r
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn n(&self) -> usize {
        self.rep.n()
    }

    /// The canonical representative.
    pub fn rep(&self) -> &RationalPoint {
        &self.rep
    }

    /// Accepts `rep` only if it is already canonical.
    pub fn from_canonical(rep: RationalPoint, r: impl Into<BigInt>, depth: u32) -> Result<Self> {
        let p = canonical_reduce(&rep, r, depth)?;
        if p.rep != rep {
            return Err(Error::Incompatible("representative is not in the canonical box".into()));
        }
        Ok(p)
    }

    pub fn zero(n: usize, r: impl Into<BigInt>, depth: u32) -> Result<Self> {
        canonical_reduce(&HeisenbergPoint::identity(n, &BigRational::zero()), r, depth)
    }

    /// The modulus `r^depth` of the lattice.
    pub fn modulus(&self) -> BigInt {
        power(&self.r, self.depth)
    }
}

/// Canonical representative of `g H_n(r^L Z)`.
pub fn canonical_reduce(g: &RationalPoint, r: impl Into<BigInt>, depth: u32) -> Result<SolenoidPoint> {
    let r = r.into();
    check_radix(&r)?;
    let m = power(&r, depth);
    let (x, y, t) = reduce_horizontal(g, &m);
    let t = div_floor(&t, &m).0;
    Ok(SolenoidPoint { r, depth, rep: HeisenbergPoint::new(x, y, t)? })
}

/// Whether `g^{-1} h` lies in `H_n(r^L Z)`.
pub fn same_coset(g: &RationalPoint, h: &RationalPoint, r: impl Into<BigInt>, depth: u32) -> Result<bool> {
    let r = r.into();
    check_radix(&r)?;
    let m = BigRational::from_integer(power(&r, depth));
    let d = g.inverse().compose(h)?;
    let inside = d.coords().all(|c| (c / &m).is_integer());
    Ok(inside)
}

/// Same question as [`same_coset`], answered by comparing canonical forms.
pub fn same_coset_canonical(g: &RationalPoint, h: &RationalPoint, r: impl Into<BigInt>, depth: u32) -> Result<bool> {
    let r = r.into();
    Ok(canonical_reduce(g, r.clone(), depth)? == canonical_reduce(h, r, depth)?)
}

/// The image of `p` at level `l <= depth`.
pub fn project_level(p: &SolenoidPoint, l: u32) -> Result<SolenoidPoint> {
    if l > p.depth {
        return Err(Error::Level { level: l, depth: p.depth });
    }
    canonical_reduce(&p.rep, p.r.clone(), l)
}

/// The embedding of `H_n(R)`, realized on rational points.
pub fn embed_phi_tilde(g: &RationalPoint, r: impl Into<BigInt>, depth: u32) -> Result<SolenoidPoint> {
    canonical_reduce(g, r, depth)
}

/// `h . (g H) = (h g) H`.
pub fn left_action(h: &RationalPoint, p: &SolenoidPoint) -> Result<SolenoidPoint> {
    canonical_reduce(&h.compose(&p.rep)?, p.r.clone(), p.depth)
}

/// `(x mod r^l, y mod r^l)`, the base point under the bundle projection.
pub fn base_projection(p: &SolenoidPoint, l: u32) -> Result<(Vec<BigRational>, Vec<BigRational>)> {
    if l > p.depth {
        return Err(Error::Level { level: l, depth: p.depth });
    }
    let m = power(&p.r, l);
    let red = |v: &[BigRational]| v.iter().map(|c| div_floor(c, &m).0).collect();
    Ok((red(p.rep.x()), red(p.rep.y())))
}

fn dilation_by(r: &BigInt) -> Dilation<BigRational> {
    Dilation::new(BigRational::from_integer(r.clone()))
}

/// The self-map induced by `delta_r`, at fixed depth.
pub fn shift_map(p: &SolenoidPoint) -> Result<SolenoidPoint> {
    canonical_reduce(&p.rep.dilate(&dilation_by(&p.r))?, p.r.clone(), p.depth)
}

/// Every `p` at the depth of `q` with `shift_map(p) = q`.
///
/// Solutions are `delta_{1/r}(q) (M a / r, M b / r, M c / r^2)` with
/// `a, b in [0, r)^n` and `c in [0, r^2)`: coset representatives of
/// `H_n(M Z)` inside `delta_{1/r}(H_n(M Z))`. There are `r^{2n+2}`.
pub fn preimages(q: &SolenoidPoint) -> Result<Vec<SolenoidPoint>> {
    let r = &q.r;
    let n = q.n();
    let ru = u64::try_from(r).map_err(|_| Error::TooLarge { order: u128::MAX, cap: u64::MAX })?;
    let count = ru
        .checked_pow(2 * n as u32 + 2)
        .filter(|&c| c <= 10_000_000)
        .ok_or(Error::TooLarge { order: (ru as u128).saturating_pow(2 * n as u32 + 2), cap: 10_000_000 })?;
    let inv = dilation_by(r).inverse()?;
    let base = q.rep.dilate(&inv)?;
    let m = BigRational::from_integer(q.modulus());
    let rr = BigRational::from_integer(r.clone());
    let step = &m / &rr;
    let step_t = &m / (&rr * &rr);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mut idx in 0..count {
        let mut digit = |base: u64| {
            let d = idx % base;
            idx /= base;
            BigRational::from_integer(BigInt::from(d))
        };
        let x: Vec<BigRational> = (0..n).map(|_| &step * digit(ru)).collect();
        let y: Vec<BigRational> = (0..n).map(|_| &step * digit(ru)).collect();
        let t = &step_t * digit(ru * ru);
        let cand = canonical_reduce(&base.compose(&HeisenbergPoint::new(x, y, t)?)?, r.clone(), q.depth)?;
        if shift_map(&cand)? != *q {
            return Err(Error::Incompatible("preimage candidate does not map back".into()));
        }
        if seen.insert(cand.clone()) {
            out.push(cand);
        }
    }
    Ok(out)
}

/// Iterates the shift map on several starting points; orbits are
/// independent and are evaluated under `strategy`.
pub fn shift_orbits(starts: &[SolenoidPoint], steps: usize, strategy: Strategy) -> Result<Vec<Vec<SolenoidPoint>>> {
    strategy
        .map(starts.len() as u64, |i| {
            let mut orbit = vec![starts[i as usize].clone()];
            for _ in 0..steps {
                let next = shift_map(orbit.last().expect("nonempty"))?;
                orbit.push(next);
            }
            Ok(orbit)
        })
        .into_iter()
        .collect()
}

/// Whether the orbit of `p` returns to `p` within `max_steps` steps, and if
/// so the least period.
pub fn shift_period(p: &SolenoidPoint, max_steps: usize) -> Result<Option<usize>> {
    let mut cur = p.clone();
    for k in 1..=max_steps {
        cur = shift_map(&cur)?;
        if cur == *p {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

#[cfg(test)]
pub(crate) mod testing {
    use super::RationalPoint;
    use crate::heisenberg::HeisenbergPoint;
    use num_rational::BigRational;
    use proptest::prelude::*;

    pub fn q(num: i64, den: i64) -> BigRational {
        BigRational::new(num.into(), den.into())
    }

    pub fn arb_rational() -> impl Strategy<Value = BigRational> {
        (-60i64..60, 1i64..7).prop_map(|(a, b)| q(a, b))
    }

    pub fn arb_point(n: usize) -> impl Strategy<Value = RationalPoint> {
        (
            prop::collection::vec(arb_rational(), n),
            prop::collection::vec(arb_rational(), n),
            arb_rational(),
        )
            .prop_map(|(x, y, t)| HeisenbergPoint::new(x, y, t).unwrap())
    }

    /// `(M a, M b, M c)` for small integers.
    pub fn arb_lattice(n: usize, m: i64) -> impl Strategy<Value = RationalPoint> {
        (prop::collection::vec(-4i64..5, 2 * n + 1)).prop_map(move |v| {
            let f = |c: &i64| q(c * m, 1);
            HeisenbergPoint::new(v[..n].iter().map(f).collect(), v[n..2 * n].iter().map(f).collect(), f(&v[2 * n]))
                .unwrap()
        })
    }
}
