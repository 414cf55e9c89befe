//! Coherent sequences in `prod_l H_n(Z / r^l Z)` and their identification
//! with `H_n(Z_r)`.
//!
//! A [`GroupProductElement`] holds levels `1..=L` and need not be coherent.
//! Coherence is checked, not enforced, so the full product and its coherent
//! subgroup live in the same type.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::heisenberg::HeisenbergPoint;
use crate::ring::radic::check_radix;
use crate::ring::{RAdicInt, Residue};

/// A point of `H_n(Z_r)` truncated at a common precision.
pub type ProfinitePoint = HeisenbergPoint<RAdicInt>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupProductElement {
    radix: BigInt,
    levels: Vec<HeisenbergPoint<Residue>>,
}

impl GroupProductElement {
    /// Entry `l - 1` of `levels` must be a point of `H_n(Z / r^l Z)`.
    pub fn new(radix: impl Into<BigInt>, levels: Vec<HeisenbergPoint<Residue>>) -> Result<Self> {
        let radix = radix.into();
        check_radix(&radix)?;
        let n = levels.first().ok_or(Error::Level { level: 0, depth: 0 })?.n();
        let mut modulus = BigInt::from(1);
        for (i, p) in levels.iter().enumerate() {
            modulus *= &radix;
            if p.n() != n || p.t().modulus() != &modulus {
                return Err(Error::Incompatible(format!(
                    "level {} must be a point of H_{n}(Z/{modulus}Z)",
                    i + 1
                )));
            }
        }
        Ok(GroupProductElement { radix, levels })
    }

    /// Builds levels from integer coordinates, reducing entry `l - 1` mod `r^l`.
    pub fn from_integer_levels(radix: impl Into<BigInt>, levels: &[HeisenbergPoint<BigInt>]) -> Result<Self> {
        let radix = radix.into();
        check_radix(&radix)?;
        let mut modulus = BigInt::from(1);
        let mut out = Vec::with_capacity(levels.len());
        for g in levels {
            modulus *= &radix;
            let like = Residue::new(0, modulus.clone())?;
            out.push(HeisenbergPoint::from_integer_point(g, &like));
        }
        GroupProductElement::new(radix, out)
    }

    pub fn radix(&self) -> &BigInt {
        &self.radix
    }

    pub fn depth(&self) -> u32 {
        self.levels.len() as u32
    }

    pub fn n(&self) -> usize {
        self.levels[0].n()
    }

    pub fn levels(&self) -> &[HeisenbergPoint<Residue>] {
        &self.levels
    }

    /// The level-`l` entry, `1 <= l <= L`.
    pub fn level(&self, l: u32) -> Result<&HeisenbergPoint<Residue>> {
        if l == 0 || l > self.depth() {
            return Err(Error::Level { level: l, depth: self.depth() });
        }
        Ok(&self.levels[l as usize - 1])
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.radix != other.radix || self.depth() != other.depth() || self.n() != other.n() {
            return Err(Error::Incompatible(format!(
                "(r, L, n) = ({}, {}, {}) vs ({}, {}, {})",
                self.radix,
                self.depth(),
                self.n(),
                other.radix,
                other.depth(),
                other.n()
            )));
        }
        Ok(())
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let levels = self.levels.iter().zip(&other.levels).map(|(a, b)| a.compose_unchecked(b)).collect();
        Ok(GroupProductElement { radix: self.radix.clone(), levels })
    }

    pub fn inverse(&self) -> Self {
        GroupProductElement { radix: self.radix.clone(), levels: self.levels.iter().map(|p| p.inverse()).collect() }
    }
}

/// The image of an integer point: level `l` is `g` reduced mod `r^l`.
pub fn phi_embed(g: &HeisenbergPoint<BigInt>, r: impl Into<BigInt>, depth: u32) -> Result<GroupProductElement> {
    if depth == 0 {
        return Err(Error::Level { level: 0, depth });
    }
    GroupProductElement::from_integer_levels(r, &vec![g.clone(); depth as usize])
}

/// Whether each level is the reduction of the next one.
pub fn group_coherence_check(w: &GroupProductElement) -> bool {
    w.levels.windows(2).all(|pair| {
        let m = pair[0].t().modulus();
        pair[1].coords().zip(pair[0].coords()).all(|(deep, shallow)| &deep.value().mod_floor(m) == shallow.value())
    })
}

pub fn to_profinite(w: &GroupProductElement) -> Result<ProfinitePoint> {
    if !group_coherence_check(w) {
        return Err(Error::NotCoherent);
    }
    let deepest = w.levels.last().expect("depth >= 1");
    let depth = w.depth();
    let lift = |c: &Residue| RAdicInt::new(c.value().clone(), w.radix.clone(), depth).expect("valid radix");
    Ok(deepest.map(lift))
}

pub fn from_profinite(p: &ProfinitePoint) -> Result<GroupProductElement> {
    let radix = p.t().radix().clone();
    let depth = p.coords().map(|c| c.precision()).min().expect("nonempty");
    let levels = (1..=depth)
        .map(|l| {
            let x = p.x().iter().map(|c| c.level(l)).collect::<Result<Vec<_>>>()?;
            let y = p.y().iter().map(|c| c.level(l)).collect::<Result<Vec<_>>>()?;
            HeisenbergPoint::new(x, y, p.t().level(l)?)
        })
        .collect::<Result<Vec<_>>>()?;
    GroupProductElement::new(radix, levels)
}

/// An integer point whose embedding agrees with `w` at every stored level:
/// the deepest level lifted to coordinates in `[0, r^L)`.
pub fn v_density_witness(w: &GroupProductElement) -> Result<HeisenbergPoint<BigInt>> {
    if !group_coherence_check(w) {
        return Err(Error::NotCoherent);
    }
    Ok(w.levels.last().expect("depth >= 1").map(|c| c.value().clone()))
}

/// Enumeration cap for [`count_coherent`].
pub const COUNT_CAP: u64 = 50_000_000;

/// Counts coherent elements of `prod_{l=1}^{L} H_n(Z / r^l Z)` by visiting
/// every element of the product.
pub fn count_coherent(n: usize, r: u64, depth: u32, strategy: Strategy) -> Result<u64> {
    check_radix(&BigInt::from(r))?;
    if n == 0 || depth == 0 {
        return Err(Error::Level { level: depth, depth });
    }
    let coords = 2 * n as u32 + 1;
    let exponent: u32 = coords * depth * (depth + 1) / 2;
    let total = (r as u128).checked_pow(exponent).unwrap_or(u128::MAX);
    if total > COUNT_CAP as u128 {
        return Err(Error::TooLarge { order: total, cap: COUNT_CAP });
    }
    let sizes: Vec<u64> = (1..=depth).map(|l| r.pow(l)).collect();
    Ok(strategy.count(total as u64, |mut idx| {
        let mut prev: Vec<u64> = Vec::new();
        for &m in &sizes {
            let mut cur = Vec::with_capacity(coords as usize);
            for _ in 0..coords {
                cur.push(idx % m);
                idx /= m;
            }
            if !prev.is_empty() && prev.iter().zip(&cur).any(|(&p, &c)| c % (m / r) != p) {
                return false;
            }
            prev = cur;
        }
        true
    }))
}

/// Exact value of [`count_coherent`]: the deepest level determines the rest.
pub fn coherent_count_formula(n: usize, r: u64, depth: u32) -> u128 {
    (r as u128).pow(depth * (2 * n as u32 + 1))
}
