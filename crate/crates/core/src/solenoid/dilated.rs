//! The solenoid built on the dilated lattices `delta_{r^l}(H_n(Z))`.
//!
//! With `R = r^L` the level-`L` lattice is `{(R a, R b, R^2 c)}`, so the
//! canonical box is `[0, R)` in `x, y` and `[0, R^2)` in `t`. The chain
//! `H_n(R^2 Z) <= delta_R(H_n(Z)) <= H_n(R Z)` gives maps in both directions
//! between this tower and the standard one.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{canonical_reduce, div_floor, power, reduce_horizontal, RationalPoint, SolenoidPoint};
use crate::error::{Error, Result};
use crate::heisenberg::{Dilation, HeisenbergPoint};
use crate::ring::radic::check_radix;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DilatedSolenoidPoint {
    r: BigInt,
    depth: u32,
    rep: RationalPoint,
}

/// Canonical representative of `g delta_{r^L}(H_n(Z))`.
pub fn dilated_reduce(g: &RationalPoint, r: impl Into<BigInt>, depth: u32) -> Result<DilatedSolenoidPoint> {
    let r = r.into();
    check_radix(&r)?;
    let m = power(&r, depth);
    let (x, y, t) = reduce_horizontal(g, &m);
    let t = div_floor(&t, &(&m * &m)).0;
    Ok(DilatedSolenoidPoint { r, depth, rep: HeisenbergPoint::new(x, y, t)? })
}

/// The embedding of `H_n(R)` into the dilated tower.
pub fn psi_embed(g: &RationalPoint, r: impl Into<BigInt>, depth: u32) -> Result<DilatedSolenoidPoint> {
    dilated_reduce(g, r, depth)
}

/// Level `l <= L` of the standard tower, using `delta_{r^l}(H_n(Z)) <= H_n(r^l Z)`.
pub fn dilated_to_standard(u: &DilatedSolenoidPoint, l: u32) -> Result<SolenoidPoint> {
    if l > u.depth {
        return Err(Error::Level { level: l, depth: u.depth });
    }
    canonical_reduce(&u.rep, u.r.clone(), l)
}

/// Level `l` of the dilated tower from a standard point of depth at least
/// `2 l`, using `H_n(r^{2l} Z) <= delta_{r^l}(H_n(Z))`.
pub fn standard_to_dilated(p: &SolenoidPoint, l: u32) -> Result<DilatedSolenoidPoint> {
    if 2 * l > p.depth() {
        return Err(Error::Level { level: 2 * l, depth: p.depth() });
    }
    dilated_reduce(p.rep(), p.radix().clone(), l)
}

impl DilatedSolenoidPoint {
    pub fn radix(&self) -> &BigInt {
        &self.r
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn n(&self) -> usize {
        self.rep.n()
    }

    pub fn rep(&self) -> &RationalPoint {
        &self.rep
    }

    pub fn project_level(&self, l: u32) -> Result<DilatedSolenoidPoint> {
        if l > self.depth {
            return Err(Error::Level { level: l, depth: self.depth });
        }
        dilated_reduce(&self.rep, self.r.clone(), l)
    }

    pub fn left_action(&self, h: &RationalPoint) -> Result<DilatedSolenoidPoint> {
        dilated_reduce(&h.compose(&self.rep)?, self.r.clone(), self.depth)
    }

    /// Level `l` transported to `H_n(R) / H_n(Z)` by `delta_{r^{-l}}`.
    ///
    /// Under these charts the projection from level `l + 1` to level `l`
    /// becomes the shift map.
    pub fn level_chart(&self, l: u32) -> Result<SolenoidPoint> {
        let below = self.project_level(l)?;
        let scale = Dilation::new(BigRational::new(1.into(), power(&self.r, l)));
        canonical_reduce(&below.rep.dilate(&scale)?, self.r.clone(), 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solenoid::testing::{arb_point, q};
    use crate::solenoid::{embed_phi_tilde, left_action, shift_map};
    use proptest::prelude::*;

    #[test]
    fn zero_maps_to_zero() {
        let zero = psi_embed(&HeisenbergPoint::identity(2, &q(0, 1)), 3, 2).unwrap();
        assert!(zero.rep().is_identity());
        assert!(dilated_to_standard(&zero, 2).unwrap().rep().is_identity());
        let s = SolenoidPoint::zero(2, 3, 4).unwrap();
        assert_eq!(standard_to_dilated(&s, 2).unwrap(), zero);
        assert!(standard_to_dilated(&s, 3).is_err());
        assert!(dilated_to_standard(&zero, 3).is_err());
    }

    #[test]
    fn canonical_box() {
        let g = HeisenbergPoint::new(vec![q(9, 2)], vec![q(-1, 3)], q(37, 5)).unwrap();
        let u = dilated_reduce(&g, 2, 1).unwrap();
        assert!(u.rep().x()[0] < q(2, 1) && u.rep().y()[0] < q(2, 1) && *u.rep().t() < q(4, 1));
        // (2, 0, 4) is in the lattice but (0, 0, 2) is not
        let l1 = HeisenbergPoint::new(vec![q(2, 1)], vec![q(0, 1)], q(4, 1)).unwrap();
        let l2 = HeisenbergPoint::new(vec![q(0, 1)], vec![q(0, 1)], q(2, 1)).unwrap();
        assert_eq!(dilated_reduce(&g.compose(&l1).unwrap(), 2, 1).unwrap(), u);
        assert_ne!(dilated_reduce(&g.compose(&l2).unwrap(), 2, 1).unwrap(), u);
    }

    proptest! {
        #[test]
        fn embeddings_agree(g in arb_point(1), depth in 0u32..3) {
            let u = psi_embed(&g, 2, depth).unwrap();
            prop_assert_eq!(dilated_to_standard(&u, depth).unwrap(), embed_phi_tilde(&g, 2, depth).unwrap());
            let p = embed_phi_tilde(&g, 2, 2 * depth).unwrap();
            prop_assert_eq!(standard_to_dilated(&p, depth).unwrap(), u);
        }

        #[test]
        fn round_trips_lose_only_depth(g in arb_point(2), depth in 0u32..3) {
            let p = embed_phi_tilde(&g, 3, 2 * depth).unwrap();
            let u = standard_to_dilated(&p, depth).unwrap();
            let back = dilated_to_standard(&u, depth).unwrap();
            prop_assert_eq!(back, crate::solenoid::project_level(&p, depth).unwrap());
            let u2 = psi_embed(&g, 3, depth).unwrap();
            let up = embed_phi_tilde(&g, 3, 2 * depth).unwrap();
            prop_assert_eq!(standard_to_dilated(&up, depth).unwrap(), u2);
        }

        #[test]
        fn actions_agree(h in arb_point(1), g in arb_point(1), depth in 0u32..3) {
            let u = psi_embed(&g, 2, depth).unwrap();
            let moved = u.left_action(&h).unwrap();
            prop_assert_eq!(
                dilated_to_standard(&moved, depth).unwrap(),
                left_action(&h, &dilated_to_standard(&u, depth).unwrap()).unwrap()
            );
            let p = embed_phi_tilde(&g, 2, 2 * depth).unwrap();
            prop_assert_eq!(
                standard_to_dilated(&left_action(&h, &p).unwrap(), depth).unwrap(),
                standard_to_dilated(&p, depth).unwrap().left_action(&h).unwrap()
            );
        }

        #[test]
        fn projection_is_the_shift_in_charts(g in arb_point(1), l in 0u32..3) {
            let u = psi_embed(&g, 2, 3).unwrap();
            prop_assert_eq!(u.level_chart(l).unwrap(), shift_map(&u.level_chart(l + 1).unwrap()).unwrap());
        }

        #[test]
        fn dilated_towers_are_coherent(g in arb_point(1), hi in 0u32..4, lo in 0u32..4) {
            let u = psi_embed(&g, 3, hi).unwrap();
            let lo = lo.min(hi);
            let mid = (lo + hi) / 2;
            prop_assert_eq!(u.project_level(mid).unwrap().project_level(lo).unwrap(), u.project_level(lo).unwrap());
        }
    }
}
