use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use super::{Coefficient, ProductElement, Residue};
use crate::error::{Error, Result};

pub(crate) fn check_radix(r: &BigInt) -> Result<()> {
    if *r < BigInt::from(2) {
        return Err(Error::InvalidRadix(r.to_string()));
    }
    Ok(())
}

/// Largest `l` with `r^l | a`, or `None` for `a = 0`.
pub fn valuation(a: &BigInt, r: &BigInt) -> Result<Option<u64>> {
    check_radix(r)?;
    if a.is_zero() {
        return Ok(None);
    }
    let mut a = a.clone();
    let mut l = 0;
    loop {
        let (q, rem) = a.div_rem(r);
        if !rem.is_zero() {
            return Ok(Some(l));
        }
        a = q;
        l += 1;
    }
}

/// The r-adic absolute value `|a|_r = r^{-l}`, with `|0|_r = 0`.
pub fn radic_abs(a: &BigInt, r: &BigInt) -> Result<BigRational> {
    Ok(match valuation(a, r)? {
        None => BigRational::zero(),
        Some(l) => BigRational::new(BigInt::one(), Pow::pow(r, l)),
    })
}

pub fn radic_dist(a: &BigInt, b: &BigInt, r: &BigInt) -> Result<BigRational> {
    radic_abs(&(a - b), r)
}

/// An r-adic integer known to precision `L`: the residue mod `r^L` of a
/// coherent sequence. Lower levels are recovered by reduction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RAdicInt {
    radix: BigInt,
    precision: u32,
    modulus: BigInt,
    digit: BigInt,
}

impl RAdicInt {
    /// The image of the integer `value` in `Z_r`, truncated at precision `L`.
    pub fn new(value: impl Into<BigInt>, radix: impl Into<BigInt>, precision: u32) -> Result<Self> {
        let radix = radix.into();
        check_radix(&radix)?;
        if precision == 0 {
            return Err(Error::Level { level: 0, depth: 0 });
        }
        let modulus = Pow::pow(&radix, precision);
        let digit = value.into().mod_floor(&modulus);
        Ok(RAdicInt { radix, precision, modulus, digit })
    }

    pub fn radix(&self) -> &BigInt {
        &self.radix
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// The level-`L` residue in `[0, r^L)`.
    pub fn digit(&self) -> &BigInt {
        &self.digit
    }

    /// `r^L`.
    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    /// The level-`l` component `digit mod r^l`, for `1 <= l <= L`.
    pub fn level(&self, l: u32) -> Result<Residue> {
        if l == 0 || l > self.precision {
            return Err(Error::Level { level: l, depth: self.precision });
        }
        let m = Pow::pow(&self.radix, l);
        Ok(Residue::new_unchecked(self.digit.mod_floor(&m), m))
    }

    /// Drops precision to `l <= L`.
    pub fn truncate(&self, l: u32) -> Result<RAdicInt> {
        if l == 0 || l > self.precision {
            return Err(Error::Level { level: l, depth: self.precision });
        }
        RAdicInt::new(self.digit.clone(), self.radix.clone(), l)
    }

    /// The coherent sequence of all levels `1..=L`.
    pub fn to_product(&self) -> ProductElement {
        let residues = (1..=self.precision).map(|l| self.level(l).expect("level in range")).collect();
        ProductElement::from_parts_unchecked(self.radix.clone(), residues)
    }

    /// Identifies a coherent element of the product with an r-adic integer.
    pub fn from_product(x: &ProductElement) -> Result<RAdicInt> {
        if !x.is_coherent() {
            return Err(Error::NotCoherent);
        }
        let deepest = x.residues().last().ok_or(Error::NotCoherent)?;
        RAdicInt::new(deepest.value().clone(), x.radix().clone(), x.depth())
    }

    fn check(&self, other: &RAdicInt) -> Result<()> {
        if self.radix != other.radix {
            return Err(Error::Incompatible(format!(
                "radices {} and {} differ",
                self.radix, other.radix
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &RAdicInt) -> Result<RAdicInt> {
        self.check(other)?;
        Ok(Coefficient::add(self, other))
    }

    pub fn try_mul(&self, other: &RAdicInt) -> Result<RAdicInt> {
        self.check(other)?;
        Ok(Coefficient::mul(self, other))
    }

    fn combine(&self, other: &RAdicInt, value: BigInt) -> RAdicInt {
        let (precision, modulus) = if self.precision <= other.precision {
            (self.precision, self.modulus.clone())
        } else {
            (other.precision, other.modulus.clone())
        };
        RAdicInt { radix: self.radix.clone(), precision, digit: value.mod_floor(&modulus), modulus }
    }
}

impl Coefficient for RAdicInt {
    fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.radix, other.radix);
        self.combine(other, &self.digit + &other.digit)
    }
    fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.radix, other.radix);
        self.combine(other, &self.digit * &other.digit)
    }
    fn neg(&self) -> Self {
        RAdicInt {
            digit: (-&self.digit).mod_floor(&self.modulus),
            ..self.clone()
        }
    }
    fn zero_like(&self) -> Self {
        RAdicInt { digit: BigInt::zero(), ..self.clone() }
    }
    fn is_additive_zero(&self) -> bool {
        self.digit.is_zero()
    }
    fn embed_int(&self, value: &BigInt) -> Self {
        RAdicInt { digit: value.mod_floor(&self.modulus), ..self.clone() }
    }
    fn same_ring(&self, other: &Self) -> bool {
        self.radix == other.radix
    }
    fn ring_name(&self) -> String {
        format!("Z_{} (precision {})", self.radix, self.precision)
    }
}

impl fmt::Display for RAdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", self.digit, self.radix, self.precision)
    }
}

/// The r-adic limit of an integer sequence whose last two terms agree
/// modulo `r^L`.
pub fn radic_from_cauchy(seq: &[BigInt], radix: &BigInt, precision: u32) -> Result<RAdicInt> {
    check_radix(radix)?;
    let modulus: BigInt = Pow::pow(radix, precision);
    match seq {
        [.., a, b] if (a - b).is_multiple_of(&modulus) => {
            RAdicInt::new(b.clone(), radix.clone(), precision)
        }
        _ => Err(Error::NotCauchy { precision }),
    }
}
