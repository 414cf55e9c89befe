//! Coefficient rings: residues, r-adic integers, the truncated product
//! space with its ultrametric, and the common [`Coefficient`] interface the
//! group law is written against.

mod product;
pub(crate) mod radic;
mod residue;

pub use product::{embed_q, ultrametric_rho, ProductElement};
pub use radic::{radic_abs, radic_dist, radic_from_cauchy, valuation, RAdicInt};
pub use residue::Residue;

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// A commutative ring element carrying whatever parameters (modulus,
/// radix, precision) identify its ring.
pub trait Coefficient: Clone + PartialEq + Debug + Send + Sync {
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// The zero of the ring `self` lives in.
    fn zero_like(&self) -> Self;
    fn is_additive_zero(&self) -> bool;
    /// The image of an ordinary integer in the ring `self` lives in.
    fn embed_int(&self, value: &BigInt) -> Self;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Whether `self` and `other` may be combined.
    fn same_ring(&self, _other: &Self) -> bool {
        true
    }

    /// Short description used in error messages and on the wire.
    fn ring_name(&self) -> String;
}

impl Coefficient for BigInt {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn is_additive_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn embed_int(&self, value: &BigInt) -> Self {
        value.clone()
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn ring_name(&self) -> String {
        "Z".into()
    }
}

impl Coefficient for BigRational {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn is_additive_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn embed_int(&self, value: &BigInt) -> Self {
        BigRational::from_integer(value.clone())
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn ring_name(&self) -> String {
        "Q".into()
    }
}

impl Coefficient for f64 {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn zero_like(&self) -> Self {
        0.0
    }
    fn is_additive_zero(&self) -> bool {
        *self == 0.0
    }
    fn embed_int(&self, value: &BigInt) -> Self {
        value.to_f64().unwrap_or(f64::NAN)
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn ring_name(&self) -> String {
        "R".into()
    }
}
