use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use super::radic::check_radix;
use super::{Coefficient, Residue};
use crate::error::{Error, Result};

/// A truncated element of `prod_{l>=1} Z / r^l Z`. Entry `l` (1-based) is a
/// residue mod `r^l`; the entries need not be coherent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductElement {
    radix: BigInt,
    residues: Vec<Residue>,
}

impl ProductElement {
    pub fn new(radix: impl Into<BigInt>, residues: Vec<Residue>) -> Result<Self> {
        let radix = radix.into();
        check_radix(&radix)?;
        if residues.is_empty() {
            return Err(Error::Level { level: 0, depth: 0 });
        }
        let mut m = BigInt::one();
        for (i, res) in residues.iter().enumerate() {
            m *= &radix;
            if res.modulus() != &m {
                return Err(Error::Incompatible(format!(
                    "entry {} has modulus {}, expected {}",
                    i + 1,
                    res.modulus(),
                    m
                )));
            }
        }
        Ok(ProductElement { radix, residues })
    }

    pub(crate) fn from_parts_unchecked(radix: BigInt, residues: Vec<Residue>) -> Self {
        ProductElement { radix, residues }
    }

    /// Builds an element from raw values; entry `l` is reduced mod `r^l`.
    pub fn from_values(radix: impl Into<BigInt>, values: &[BigInt]) -> Result<Self> {
        let radix = radix.into();
        check_radix(&radix)?;
        let residues = values
            .iter()
            .enumerate()
            .map(|(i, v)| Residue::new(v.clone(), Pow::pow(&radix, i as u32 + 1)))
            .collect::<Result<Vec<_>>>()?;
        ProductElement::new(radix, residues)
    }

    pub fn radix(&self) -> &BigInt {
        &self.radix
    }

    pub fn depth(&self) -> u32 {
        self.residues.len() as u32
    }

    pub fn residues(&self) -> &[Residue] {
        &self.residues
    }

    /// Entry `l`, 1-based.
    pub fn level(&self, l: u32) -> Result<&Residue> {
        if l == 0 || l > self.depth() {
            return Err(Error::Level { level: l, depth: self.depth() });
        }
        Ok(&self.residues[l as usize - 1])
    }

    /// Every entry is the reduction of the next one.
    pub fn is_coherent(&self) -> bool {
        self.residues.windows(2).all(|w| {
            w[1].reduce_to(w[0].modulus()).map(|r| r == w[0]).unwrap_or(false)
        })
    }

    /// Smallest level at which `self` and `other` differ.
    pub fn first_difference(&self, other: &ProductElement) -> Result<Option<u32>> {
        self.check(other)?;
        Ok(self
            .residues
            .iter()
            .zip(&other.residues)
            .position(|(a, b)| a != b)
            .map(|i| i as u32 + 1))
    }

    fn check(&self, other: &ProductElement) -> Result<()> {
        if self.radix != other.radix || self.depth() != other.depth() {
            return Err(Error::Incompatible(format!(
                "product elements over r={} depth {} and r={} depth {}",
                self.radix,
                self.depth(),
                other.radix,
                other.depth()
            )));
        }
        Ok(())
    }

    fn zip_with(&self, other: &ProductElement, f: impl Fn(&Residue, &Residue) -> Residue) -> Result<Self> {
        self.check(other)?;
        let residues = self.residues.iter().zip(&other.residues).map(|(a, b)| f(a, b)).collect();
        Ok(ProductElement { radix: self.radix.clone(), residues })
    }

    pub fn add(&self, other: &ProductElement) -> Result<Self> {
        self.zip_with(other, Coefficient::add)
    }

    pub fn mul(&self, other: &ProductElement) -> Result<Self> {
        self.zip_with(other, Coefficient::mul)
    }

    pub fn neg(&self) -> Self {
        ProductElement {
            radix: self.radix.clone(),
            residues: self.residues.iter().map(Coefficient::neg).collect(),
        }
    }
}

/// `q(a)` truncated at depth `L`: entry `l` is `a mod r^l`.
pub fn embed_q(a: &BigInt, radix: &BigInt, depth: u32) -> Result<ProductElement> {
    check_radix(radix)?;
    if depth == 0 {
        return Err(Error::Level { level: 0, depth: 0 });
    }
    let residues = (1..=depth)
        .map(|l| Residue::new(a.clone(), Pow::pow(radix, l)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProductElement { radix: radix.clone(), residues })
}

/// `rho(x, y) = r^{1 - l(x, y)}` where `l(x, y)` is the first level at which
/// the two differ; zero when they agree at every stored level.
pub fn ultrametric_rho(x: &ProductElement, y: &ProductElement) -> Result<BigRational> {
    Ok(match x.first_difference(y)? {
        None => BigRational::zero(),
        Some(l) => BigRational::new(BigInt::one(), Pow::pow(&x.radix, l - 1)),
    })
}
