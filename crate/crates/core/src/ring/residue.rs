use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Coefficient;
use crate::error::{Error, Result};

/// An element of `Z / mZ`, stored as its representative in `[0, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    value: BigInt,
    modulus: BigInt,
}

impl Residue {
    /// Reduces `value` into `[0, modulus)`. Negative inputs are accepted.
    pub fn new(value: impl Into<BigInt>, modulus: impl Into<BigInt>) -> Result<Self> {
        let modulus = modulus.into();
        if modulus < BigInt::from(2) {
            return Err(Error::InvalidModulus(modulus.to_string()));
        }
        let value = value.into().mod_floor(&modulus);
        Ok(Residue { value, modulus })
    }

    pub(crate) fn new_unchecked(value: BigInt, modulus: BigInt) -> Self {
        debug_assert!(value >= BigInt::zero() && value < modulus);
        Residue { value, modulus }
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    /// Image under the natural map `Z/mZ -> Z/m'Z`; requires `m' | m`.
    pub fn reduce_to(&self, modulus: &BigInt) -> Result<Residue> {
        if !self.modulus.is_multiple_of(modulus) {
            return Err(Error::Incompatible(format!(
                "cannot reduce mod {} to mod {}",
                self.modulus, modulus
            )));
        }
        Residue::new(self.value.clone(), modulus.clone())
    }

    fn check(&self, other: &Residue) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::Incompatible(format!(
                "moduli {} and {} differ",
                self.modulus, other.modulus
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Residue) -> Result<Residue> {
        self.check(other)?;
        Ok(Coefficient::add(self, other))
    }

    pub fn try_mul(&self, other: &Residue) -> Result<Residue> {
        self.check(other)?;
        Ok(Coefficient::mul(self, other))
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }
}

impl Coefficient for Residue {
    fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.modulus, other.modulus);
        let mut v = &self.value + &other.value;
        if v >= self.modulus {
            v -= &self.modulus;
        }
        Residue::new_unchecked(v, self.modulus.clone())
    }
    fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.modulus, other.modulus);
        Residue::new_unchecked((&self.value * &other.value) % &self.modulus, self.modulus.clone())
    }
    fn neg(&self) -> Self {
        if self.value.is_zero() {
            self.clone()
        } else {
            Residue::new_unchecked(&self.modulus - &self.value, self.modulus.clone())
        }
    }
    fn zero_like(&self) -> Self {
        Residue::new_unchecked(BigInt::zero(), self.modulus.clone())
    }
    fn is_additive_zero(&self) -> bool {
        self.value.is_zero()
    }
    fn embed_int(&self, value: &BigInt) -> Self {
        Residue::new_unchecked(value.mod_floor(&self.modulus), self.modulus.clone())
    }
    fn same_ring(&self, other: &Self) -> bool {
        self.modulus == other.modulus
    }
    fn ring_name(&self) -> String {
        format!("Z/{}Z", self.modulus)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}
