//! The Heisenberg group law, generic over a coefficient ring.
//!
//! Elements are triples `(x, y, t)` with `x, y` of length `n` and
//! `(x, y, t)(x', y', t') = (x + x', y + y', t + t' + x.y')`.
//!
//! Conjugation is `h g h^{-1}`, which for `g = (x, y, t)`, `h = (x', y', t')`
//! equals `(x, y, t + x'.y - x.y')`. The opposite convention flips the sign
//! of the correction term.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::Coefficient;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HeisenbergPoint<A> {
    x: Vec<A>,
    y: Vec<A>,
    t: A,
}

pub(crate) fn dot<A: Coefficient>(a: &[A], b: &[A], zero: &A) -> A {
    a.iter().zip(b).fold(zero.clone(), |acc, (u, v)| acc.add(&u.mul(v)))
}

impl<A: Coefficient> HeisenbergPoint<A> {
    pub fn new(x: Vec<A>, y: Vec<A>, t: A) -> Result<Self> {
        if x.is_empty() || x.len() != y.len() {
            return Err(Error::Incompatible(format!(
                "x has length {}, y has length {}; both must equal n >= 1",
                x.len(),
                y.len()
            )));
        }
        if let Some(bad) = x.iter().chain(&y).find(|c| !c.same_ring(&t)) {
            return Err(Error::Incompatible(format!(
                "coordinates over {} and {}",
                bad.ring_name(),
                t.ring_name()
            )));
        }
        Ok(HeisenbergPoint { x, y, t })
    }

    /// The identity `(0, 0, 0)` of `H_n` over the ring of `like`.
    pub fn identity(n: usize, like: &A) -> Self {
        assert!(n >= 1, "dimension must be at least 1");
        let z = like.zero_like();
        HeisenbergPoint { x: vec![z.clone(); n], y: vec![z.clone(); n], t: z }
    }

    /// Reduces an integer point into the ring of `like`.
    pub fn from_integer_point(g: &HeisenbergPoint<BigInt>, like: &A) -> Self {
        g.map(|c| like.embed_int(c))
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[A] {
        &self.x
    }

    pub fn y(&self) -> &[A] {
        &self.y
    }

    pub fn t(&self) -> &A {
        &self.t
    }

    pub fn into_parts(self) -> (Vec<A>, Vec<A>, A) {
        (self.x, self.y, self.t)
    }

    pub fn coords(&self) -> impl Iterator<Item = &A> {
        self.x.iter().chain(&self.y).chain(std::iter::once(&self.t))
    }

    /// Applies `f` to every coordinate.
    pub fn map<B, F: Fn(&A) -> B>(&self, f: F) -> HeisenbergPoint<B> {
        HeisenbergPoint {
            x: self.x.iter().map(&f).collect(),
            y: self.y.iter().map(&f).collect(),
            t: f(&self.t),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.coords().all(Coefficient::is_additive_zero)
    }

    pub fn is_compatible(&self, other: &Self) -> bool {
        self.n() == other.n() && self.t.same_ring(&other.t)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::Incompatible(format!("dimensions {} and {}", self.n(), other.n())));
        }
        if !self.t.same_ring(&other.t) {
            return Err(Error::Incompatible(format!(
                "rings {} and {}",
                self.t.ring_name(),
                other.t.ring_name()
            )));
        }
        Ok(())
    }

    pub(crate) fn compose_unchecked(&self, other: &Self) -> Self {
        let zero = self.t.zero_like();
        let cross = dot(&self.x, &other.y, &zero);
        HeisenbergPoint {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a.add(b)).collect(),
            y: self.y.iter().zip(&other.y).map(|(a, b)| a.add(b)).collect(),
            t: self.t.add(&other.t).add(&cross),
        }
    }

    /// The group product `self * other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.compose_unchecked(other))
    }

    /// `(-x, -y, -t + x.y)`.
    pub fn inverse(&self) -> Self {
        let xy = dot(&self.x, &self.y, &self.t.zero_like());
        HeisenbergPoint {
            x: self.x.iter().map(Coefficient::neg).collect(),
            y: self.y.iter().map(Coefficient::neg).collect(),
            t: self.t.neg().add(&xy),
        }
    }

    /// `h * self * h^{-1}` in closed form.
    pub fn conjugate(&self, h: &Self) -> Result<Self> {
        self.check(h)?;
        let zero = self.t.zero_like();
        let shift = dot(&h.x, &self.y, &zero).sub(&dot(&self.x, &h.y, &zero));
        Ok(HeisenbergPoint { x: self.x.clone(), y: self.y.clone(), t: self.t.add(&shift) })
    }

    /// `self * h * self^{-1} * h^{-1}`; always central, with t-part `x.y' - x'.y`.
    pub fn commutator(&self, h: &Self) -> Result<Self> {
        self.check(h)?;
        Ok(self
            .compose_unchecked(h)
            .compose_unchecked(&self.inverse())
            .compose_unchecked(&h.inverse()))
    }

    /// `(s x, s y, s^2 t)`.
    pub fn dilate(&self, d: &Dilation<A>) -> Result<Self> {
        if !d.factor.same_ring(&self.t) {
            return Err(Error::Incompatible(format!(
                "dilation factor in {} applied over {}",
                d.factor.ring_name(),
                self.t.ring_name()
            )));
        }
        let s = &d.factor;
        let s2 = s.mul(s);
        Ok(HeisenbergPoint {
            x: self.x.iter().map(|c| c.mul(s)).collect(),
            y: self.y.iter().map(|c| c.mul(s)).collect(),
            t: self.t.mul(&s2),
        })
    }

    /// Dilation by an integer factor embedded in the coefficient ring.
    pub fn dilate_int(&self, factor: i64) -> Self {
        let d = Dilation::new(self.t.embed_int(&BigInt::from(factor)));
        self.dilate(&d).expect("embedded factor shares the ring")
    }

    /// `pi(x, y, t) = (x, y)`.
    pub fn project_pi(&self) -> (Vec<A>, Vec<A>) {
        (self.x.clone(), self.y.clone())
    }

    /// Whether `self` commutes with every probe. Exhaustive probes over a
    /// finite ring decide centrality exactly.
    pub fn is_central<'a, I>(&self, probes: I) -> Result<bool>
    where
        I: IntoIterator<Item = &'a Self>,
        A: 'a,
    {
        let mut seen = false;
        for p in probes {
            seen = true;
            self.check(p)?;
            if self.compose_unchecked(p) != p.compose_unchecked(self) {
                return Ok(false);
            }
        }
        if !seen {
            return Err(Error::Incompatible("centrality needs at least one probe".into()));
        }
        Ok(true)
    }
}

impl HeisenbergPoint<BigInt> {
    /// Convenience constructor for integer points.
    pub fn int(x: &[i64], y: &[i64], t: i64) -> Result<Self> {
        Self::new(
            x.iter().map(|&v| BigInt::from(v)).collect(),
            y.iter().map(|&v| BigInt::from(v)).collect(),
            BigInt::from(t),
        )
    }

    /// Membership in `H_n(kZ)`: `k` divides every coordinate.
    pub fn in_scaled_subgroup(&self, k: &BigInt) -> bool {
        self.coords().all(|c| c.is_multiple_of(k))
    }

    /// Membership in `delta_r(H_n(Z))`: `r | x_i, y_i` and `r^2 | t`.
    pub fn in_dilated_image(&self, r: &BigInt) -> bool {
        self.x.iter().chain(&self.y).all(|c| c.is_multiple_of(r)) && self.t.is_multiple_of(&(r * r))
    }

    /// The `g` with `delta_r(g) = self`, when `self` lies in the image.
    pub fn dilation_preimage(&self, r: &BigInt) -> Option<Self> {
        if r.is_zero() || !self.in_dilated_image(r) {
            return None;
        }
        let r2 = r * r;
        Some(HeisenbergPoint {
            x: self.x.iter().map(|c| c / r).collect(),
            y: self.y.iter().map(|c| c / r).collect(),
            t: &self.t / &r2,
        })
    }
}

impl HeisenbergPoint<BigRational> {
    /// Integer point viewed over the rationals.
    pub fn from_ints(g: &HeisenbergPoint<BigInt>) -> Self {
        g.map(|c| BigRational::from_integer(c.clone()))
    }
}

/// The dilation `delta_s(x, y, t) = (s x, s y, s^2 t)`; a group endomorphism
/// with `delta_s o delta_s' = delta_{s s'}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dilation<A> {
    factor: A,
}

impl<A: Coefficient> Dilation<A> {
    pub fn new(factor: A) -> Self {
        Dilation { factor }
    }

    pub fn factor(&self) -> &A {
        &self.factor
    }

    /// `delta_s o delta_s'`.
    pub fn then(&self, other: &Dilation<A>) -> Dilation<A> {
        Dilation { factor: self.factor.mul(&other.factor) }
    }

    pub fn is_invertible(&self) -> bool {
        !self.factor.is_additive_zero()
    }
}

impl Dilation<BigRational> {
    pub fn inverse(&self) -> Result<Self> {
        if self.factor.is_zero() {
            return Err(Error::NonInvertible);
        }
        Ok(Dilation { factor: BigRational::one() / &self.factor })
    }
}

impl Dilation<f64> {
    pub fn inverse(&self) -> Result<Self> {
        if self.factor == 0.0 {
            return Err(Error::NonInvertible);
        }
        Ok(Dilation { factor: 1.0 / self.factor })
    }
}
