//! The circle solenoid: coherent sequences in `prod_l R / r^l Z`, stored
//! by the deepest component in `[0, r^L)`. Level 0 is `R / Z`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{div_floor, power};
use crate::error::{Error, Result};
use crate::ring::radic::check_radix;
use crate::ring::RAdicInt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CircleSolenoidPoint {
    r: BigInt,
    depth: u32,
    rep: BigRational,
}

/// The image of `a` under the diagonal embedding of `R`.
pub fn tilde_q_embed(a: &BigRational, r: impl Into<BigInt>, depth: u32) -> Result<CircleSolenoidPoint> {
    let r = r.into();
    check_radix(&r)?;
    let rep = div_floor(a, &power(&r, depth)).0;
    Ok(CircleSolenoidPoint { r, depth, rep })
}

/// The level-0 component, in `[0, 1)`.
pub fn pi0(p: &CircleSolenoidPoint) -> BigRational {
    p.level(0).expect("level 0 always exists")
}

impl CircleSolenoidPoint {
    pub fn radix(&self) -> &BigInt {
        &self.r
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn rep(&self) -> &BigRational {
        &self.rep
    }

    /// The level-`l` component `rep mod r^l`.
    pub fn level(&self, l: u32) -> Result<BigRational> {
        if l > self.depth {
            return Err(Error::Level { level: l, depth: self.depth });
        }
        Ok(div_floor(&self.rep, &power(&self.r, l)).0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.r != other.r || self.depth != other.depth {
            return Err(Error::Incompatible(format!(
                "(r, L) = ({}, {}) vs ({}, {})",
                self.r, self.depth, other.r, other.depth
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        tilde_q_embed(&(&self.rep + &other.rep), self.r.clone(), self.depth)
    }

    pub fn neg(&self) -> Self {
        tilde_q_embed(&-&self.rep, self.r.clone(), self.depth).expect("radix already checked")
    }

    /// Whether the point lies in the kernel of [`pi0`].
    pub fn in_kernel(&self) -> bool {
        self.rep.is_integer()
    }

    /// The kernel element as an r-adic integer; needs `depth >= 1`.
    pub fn to_radic(&self) -> Result<RAdicInt> {
        if !self.in_kernel() {
            return Err(Error::NotCoherent);
        }
        RAdicInt::new(self.rep.to_integer(), self.r.clone(), self.depth)
    }

    pub fn from_radic(a: &RAdicInt) -> Self {
        CircleSolenoidPoint {
            r: a.radix().clone(),
            depth: a.precision(),
            rep: BigRational::from_integer(a.digit().clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}
