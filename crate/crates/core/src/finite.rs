//! Brute-force structure of the finite Heisenberg groups `H_n(Z/kZ)`.
//!
//! Elements are addressed by a mixed-radix index: the coordinates
//! `x_1..x_n, y_1..y_n, t`, each in `[0, k)`, are the digits of the index
//! in base `k`, least significant first. Iteration order is index order.
//!
//! Statements about the infinite groups `H_n(Z)`, `H_n(kZ)` and
//! `delta_r(H_n(Z))` are checked through their images in `H_n(Z/k^d Z)`.
//! Whenever the kernel `H_n(k^d Z)` lies inside the subgroups involved, the
//! finite indices and normality results equal the infinite ones.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::heisenberg::HeisenbergPoint;
use crate::ring::Residue;

pub const DEFAULT_CAP: u64 = 1_000_000;

/// `k^{2n+1} <= cap` forces `2n + 1 <= 19` whenever the cap is `10^6`.
const MAX_COORDS: usize = 41;

type Coords = [u64; MAX_COORDS];

/// Fixed-width arithmetic in `H_n(Z/mZ)` without enumerating the group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Arith {
    n: usize,
    m: u64,
}

impl Arith {
    fn len(&self) -> usize {
        2 * self.n + 1
    }

    fn compose(&self, a: &Coords, b: &Coords) -> Coords {
        let n = self.n;
        let m = self.m as u128;
        let mut c = [0u64; MAX_COORDS];
        let mut cross: u128 = 0;
        for i in 0..n {
            c[i] = ((a[i] as u128 + b[i] as u128) % m) as u64;
            c[n + i] = ((a[n + i] as u128 + b[n + i] as u128) % m) as u64;
            cross += a[i] as u128 * b[n + i] as u128 % m;
        }
        c[2 * n] = ((a[2 * n] as u128 + b[2 * n] as u128 + cross) % m) as u64;
        c
    }

    fn inverse(&self, a: &Coords) -> Coords {
        let n = self.n;
        let m = self.m as u128;
        let mut c = [0u64; MAX_COORDS];
        let mut xy: u128 = 0;
        for i in 0..n {
            c[i] = ((m - a[i] as u128) % m) as u64;
            c[n + i] = ((m - a[n + i] as u128) % m) as u64;
            xy += a[i] as u128 * a[n + i] as u128 % m;
        }
        c[2 * n] = ((m - a[2 * n] as u128 + xy) % m) as u64;
        c
    }

    fn commutes(&self, a: &Coords, b: &Coords) -> bool {
        let n = self.n;
        let m = self.m as u128;
        // x.y' - x'.y = 0 mod m
        let mut lhs: u128 = 0;
        let mut rhs: u128 = 0;
        for i in 0..n {
            lhs += a[i] as u128 * b[n + i] as u128 % m;
            rhs += b[i] as u128 * a[n + i] as u128 % m;
        }
        lhs % m == rhs % m
    }
}

/// The fully indexed group `H_n(Z/kZ)`.
#[derive(Clone, Debug)]
pub struct FiniteHeisenberg {
    arith: Arith,
    order: u64,
    strategy: Strategy,
}

/// A subgroup of a [`FiniteHeisenberg`], stored as a membership bitmap plus
/// the sorted member list and, when known, a generating set. Equality
/// compares members only.
#[derive(Clone, Debug)]
pub struct Subgroup {
    n: usize,
    k: u64,
    member: Vec<bool>,
    members: Vec<u64>,
    generators: Option<Vec<u64>>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.k == other.k && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn order(&self) -> u64 {
        self.members.len() as u64
    }

    pub fn contains(&self, idx: u64) -> bool {
        self.member.get(idx as usize).copied().unwrap_or(false)
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn generators(&self) -> Option<&[u64]> {
        self.generators.as_deref()
    }

    /// Generators if known, otherwise every member.
    fn generating_set(&self) -> &[u64] {
        self.generators.as_deref().unwrap_or(&self.members)
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&i| other.contains(i))
    }
}

/// Enumerates `H_n(Z/kZ)` under the default size cap.
pub fn enumerate_group(n: usize, k: u64) -> Result<FiniteHeisenberg> {
    FiniteHeisenberg::with_cap(n, k, DEFAULT_CAP)
}

impl FiniteHeisenberg {
    pub fn with_cap(n: usize, k: u64, cap: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidModulus(k.to_string()));
        }
        if n == 0 {
            return Err(Error::Incompatible("dimension must be at least 1".into()));
        }
        let order = (k as u128).checked_pow(2 * n as u32 + 1).unwrap_or(u128::MAX);
        if order > cap as u128 || 2 * n + 1 > MAX_COORDS {
            return Err(Error::TooLarge { order, cap });
        }
        Ok(FiniteHeisenberg { arith: Arith { n, m: k }, order: order as u64, strategy: Strategy::default() })
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn n(&self) -> usize {
        self.arith.n
    }

    pub fn k(&self) -> u64 {
        self.arith.m
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn identity(&self) -> u64 {
        0
    }

    fn decode(&self, mut idx: u64) -> Coords {
        let mut c = [0u64; MAX_COORDS];
        for slot in c.iter_mut().take(self.arith.len()) {
            *slot = idx % self.arith.m;
            idx /= self.arith.m;
        }
        c
    }

    fn encode(&self, c: &Coords) -> u64 {
        c[..self.arith.len()].iter().rev().fold(0, |acc, &d| acc * self.arith.m + d)
    }

    /// Index of the element with the given coordinates (reduced mod k).
    pub fn index_of_coords(&self, x: &[i64], y: &[i64], t: i64) -> Result<u64> {
        let n = self.n();
        if x.len() != n || y.len() != n {
            return Err(Error::Incompatible(format!("expected {n} coordinates in x and y")));
        }
        let k = self.k() as i64;
        let mut c = [0u64; MAX_COORDS];
        for i in 0..n {
            c[i] = x[i].rem_euclid(k) as u64;
            c[n + i] = y[i].rem_euclid(k) as u64;
        }
        c[2 * n] = t.rem_euclid(k) as u64;
        Ok(self.encode(&c))
    }

    /// Coordinates `(x, y, t)` of an index.
    pub fn coords(&self, idx: u64) -> (Vec<u64>, Vec<u64>, u64) {
        let c = self.decode(idx);
        let n = self.n();
        (c[..n].to_vec(), c[n..2 * n].to_vec(), c[2 * n])
    }

    pub fn point(&self, idx: u64) -> HeisenbergPoint<Residue> {
        let (x, y, t) = self.coords(idx);
        let r = |v: u64| Residue::new(v, self.k()).expect("k >= 2");
        HeisenbergPoint::new(x.into_iter().map(r).collect(), y.into_iter().map(r).collect(), r(t))
            .expect("well-formed point")
    }

    pub fn index_of(&self, g: &HeisenbergPoint<Residue>) -> Result<u64> {
        if g.n() != self.n() || g.t().modulus() != &BigInt::from(self.k()) {
            return Err(Error::Incompatible(format!(
                "point over {} with n = {} in H_{}(Z/{}Z)",
                g.t().modulus(),
                g.n(),
                self.n(),
                self.k()
            )));
        }
        let mut c = [0u64; MAX_COORDS];
        for (slot, v) in c.iter_mut().zip(g.coords()) {
            *slot = v.value().to_u64().expect("reduced residue");
        }
        Ok(self.encode(&c))
    }

    pub fn compose(&self, a: u64, b: u64) -> u64 {
        self.encode(&self.arith.compose(&self.decode(a), &self.decode(b)))
    }

    pub fn inverse(&self, a: u64) -> u64 {
        self.encode(&self.arith.inverse(&self.decode(a)))
    }

    /// `h g h^{-1}`.
    pub fn conjugate(&self, g: u64, h: u64) -> u64 {
        self.compose(self.compose(h, g), self.inverse(h))
    }

    pub fn commutator(&self, a: u64, b: u64) -> u64 {
        let ab = self.compose(a, b);
        self.compose(self.compose(ab, self.inverse(a)), self.inverse(b))
    }

    pub fn commutes(&self, a: u64, b: u64) -> bool {
        self.arith.commutes(&self.decode(a), &self.decode(b))
    }

    /// The unit vectors `e_i`, `f_i` and the central unit `(0, 0, 1)`.
    pub fn standard_generators(&self) -> Vec<u64> {
        self.scaled_generators(1, 1)
    }

    fn scaled_generators(&self, s: u64, s_t: u64) -> Vec<u64> {
        let len = self.arith.len();
        (0..len)
            .map(|j| {
                let mut c = [0u64; MAX_COORDS];
                let scale = if j == len - 1 { s_t } else { s };
                c[j] = scale % self.k();
                self.encode(&c)
            })
            .collect()
    }

    fn check(&self, h: &Subgroup) -> Result<()> {
        if h.n != self.n() || h.k != self.k() {
            return Err(Error::InvalidSubgroup(format!(
                "subgroup of H_{}(Z/{}Z) used with H_{}(Z/{}Z)",
                h.n,
                h.k,
                self.n(),
                self.k()
            )));
        }
        Ok(())
    }

    fn subgroup_of(&self, member: Vec<bool>, generators: Option<Vec<u64>>) -> Subgroup {
        let members = member.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect();
        Subgroup { n: self.n(), k: self.k(), member, members, generators }
    }

    /// The subgroup generated by `gens`, by breadth-first closure.
    pub fn generated_by(&self, gens: &[u64]) -> Subgroup {
        let gens: Vec<u64> = gens.iter().copied().filter(|&g| g < self.order).collect();
        let mut member = vec![false; self.order as usize];
        member[0] = true;
        let mut frontier = vec![0u64];
        while let Some(a) = frontier.pop() {
            for &g in &gens {
                let b = self.compose(a, g);
                if !member[b as usize] {
                    member[b as usize] = true;
                    frontier.push(b);
                }
            }
        }
        self.subgroup_of(member, Some(gens))
    }

    /// Validates an explicit member set: identity, products and inverses.
    pub fn subgroup_from_members(&self, members: &[u64]) -> Result<Subgroup> {
        let mut member = vec![false; self.order as usize];
        for &m in members {
            if m >= self.order {
                return Err(Error::InvalidSubgroup(format!("index {m} out of range")));
            }
            member[m as usize] = true;
        }
        let h = self.subgroup_of(member, None);
        if !h.contains(0) {
            return Err(Error::InvalidSubgroup("missing identity".into()));
        }
        let list = &h.members;
        let closed = self.strategy.all(list.len() as u64, |i| {
            let a = list[i as usize];
            h.contains(self.inverse(a)) && list.iter().all(|&b| h.contains(self.compose(a, b)))
        });
        if !closed {
            return Err(Error::InvalidSubgroup("not closed under the group law".into()));
        }
        Ok(h)
    }

    pub fn whole(&self) -> Subgroup {
        let member = vec![true; self.order as usize];
        self.subgroup_of(member, Some(self.standard_generators()))
    }

    pub fn trivial(&self) -> Subgroup {
        self.generated_by(&[])
    }

    /// Image of `H_n(mZ)`.
    pub fn scaled_image(&self, m: u64) -> Subgroup {
        self.generated_by(&self.scaled_generators(m, m))
    }

    /// Image of `delta_r(H_n(Z))`, i.e. of `{(r a, r b, r^2 c)}`.
    pub fn dilated_image(&self, r: u64) -> Subgroup {
        self.generated_by(&self.scaled_generators(r, r * r))
    }

    /// Members of `h` commuting with every generator of `k`.
    pub fn centralizer_in(&self, h: &Subgroup, k: &Subgroup) -> Result<Subgroup> {
        self.check(h)?;
        self.check(k)?;
        let probes = k.generating_set();
        let keep = self.strategy.map(h.order(), |i| {
            let a = h.members[i as usize];
            probes.iter().all(|&p| self.commutes(a, p))
        });
        let mut member = vec![false; self.order as usize];
        for (&a, keep) in h.members.iter().zip(keep) {
            member[a as usize] = keep;
        }
        Ok(self.subgroup_of(member, None))
    }

    /// Center of a subgroup.
    pub fn subgroup_center(&self, h: &Subgroup) -> Result<Subgroup> {
        self.centralizer_in(h, h)
    }

    /// Center of each subgroup by testing every pair of members.
    pub fn subgroup_center_exhaustive(&self, h: &Subgroup) -> Result<Subgroup> {
        self.check(h)?;
        let list = &h.members;
        let keep = self.strategy.map(h.order(), |i| {
            let a = list[i as usize];
            list.iter().all(|&b| self.commutes(a, b))
        });
        let mut member = vec![false; self.order as usize];
        for (&a, keep) in list.iter().zip(keep) {
            member[a as usize] = keep;
        }
        Ok(self.subgroup_of(member, None))
    }

    /// Subgroup generated by all commutators of `h`. With known generators
    /// this is the normal closure in `h` of their pairwise commutators.
    pub fn subgroup_commutator(&self, h: &Subgroup) -> Result<Subgroup> {
        self.check(h)?;
        match h.generators() {
            Some(gens) => {
                let mut seeds = Vec::new();
                for (i, &a) in gens.iter().enumerate() {
                    for &b in &gens[i + 1..] {
                        seeds.push(self.commutator(a, b));
                    }
                }
                let seed = self.generated_by(&seeds);
                self.normal_closure_in(h, &seed)
            }
            None => self.subgroup_commutator_exhaustive(h),
        }
    }

    /// Closure of `{[a, b] : a, b in h}` over every pair of members.
    pub fn subgroup_commutator_exhaustive(&self, h: &Subgroup) -> Result<Subgroup> {
        self.check(h)?;
        let list = &h.members;
        let rows = self.strategy.map(h.order(), |i| {
            let a = list[i as usize];
            let mut vals: Vec<u64> = list.iter().map(|&b| self.commutator(a, b)).collect();
            vals.sort_unstable();
            vals.dedup();
            vals
        });
        let mut seeds: Vec<u64> = rows.into_iter().flatten().collect();
        seeds.sort_unstable();
        seeds.dedup();
        Ok(self.generated_by(&seeds))
    }

    /// Number of distinct left cosets `g h` of `h` inside `k`.
    pub fn left_coset_count_in(&self, k: &Subgroup, h: &Subgroup) -> Result<u64> {
        self.check(k)?;
        self.check(h)?;
        if !h.is_subset_of(k) {
            return Err(Error::InvalidSubgroup("not contained in the ambient subgroup".into()));
        }
        let mut seen = vec![false; self.order as usize];
        let mut cosets = 0;
        for &g in &k.members {
            if seen[g as usize] {
                continue;
            }
            cosets += 1;
            for &x in &h.members {
                seen[self.compose(g, x) as usize] = true;
            }
        }
        Ok(cosets)
    }

    /// `[k : h]`, cross-checked against an explicit left-coset count.
    pub fn index_in(&self, k: &Subgroup, h: &Subgroup) -> Result<u64> {
        let cosets = self.left_coset_count_in(k, h)?;
        if !k.order().is_multiple_of(h.order()) || k.order() / h.order() != cosets {
            return Err(Error::InvalidSubgroup(format!(
                "order ratio {}/{} disagrees with {} cosets",
                k.order(),
                h.order(),
                cosets
            )));
        }
        Ok(cosets)
    }

    /// Whether `h` is normal in `k`, by conjugating every member of `h` by
    /// every member of `k`.
    pub fn is_normal_in(&self, k: &Subgroup, h: &Subgroup) -> Result<bool> {
        self.check(k)?;
        self.check(h)?;
        if !h.is_subset_of(k) {
            return Err(Error::InvalidSubgroup("not contained in the ambient subgroup".into()));
        }
        let kl = &k.members;
        Ok(self.strategy.all(k.order(), |i| {
            let g = kl[i as usize];
            let gi = self.inverse(g);
            h.members.iter().all(|&x| h.contains(self.compose(self.compose(g, x), gi)))
        }))
    }

    /// Smallest subgroup of `k` that contains `h` and is normal in `k`.
    pub fn normal_closure_in(&self, k: &Subgroup, h: &Subgroup) -> Result<Subgroup> {
        self.check(k)?;
        self.check(h)?;
        if !h.is_subset_of(k) {
            return Err(Error::InvalidSubgroup("not contained in the ambient subgroup".into()));
        }
        let outer = k.generating_set().to_vec();
        let mut gens = h.generating_set().to_vec();
        let mut current = self.generated_by(&gens);
        loop {
            let mut fresh = Vec::new();
            for &g in &outer {
                let gi = self.inverse(g);
                for &x in &gens {
                    let c = self.compose(self.compose(g, x), gi);
                    if !current.contains(c) && !fresh.contains(&c) {
                        fresh.push(c);
                    }
                }
            }
            if fresh.is_empty() {
                return Ok(current);
            }
            gens.extend(fresh);
            current = self.generated_by(&gens);
        }
    }

    pub fn center_of(&self) -> Subgroup {
        self.subgroup_center(&self.whole()).expect("same group")
    }

    pub fn commutator_subgroup(&self) -> Subgroup {
        self.subgroup_commutator(&self.whole()).expect("same group")
    }

    pub fn subgroup_index(&self, h: &Subgroup) -> Result<u64> {
        self.index_in(&self.whole(), h)
    }

    pub fn is_normal(&self, h: &Subgroup) -> Result<bool> {
        self.is_normal_in(&self.whole(), h)
    }

    pub fn normal_closure(&self, h: &Subgroup) -> Result<Subgroup> {
        self.normal_closure_in(&self.whole(), h)
    }

    /// Members of `h` (inside this group, taken as `H_n(Z/k^d Z)`) having a
    /// lift to `H_n(Z/k^{d+1} Z)` that commutes with `lift_gens` there.
    fn stable_central(&self, h: &Subgroup, base: u64, lift_gens: &[Coords]) -> Subgroup {
        let lifted = Arith { n: self.n(), m: self.k() * base };
        let n = self.n();
        let lifts = base.pow(2 * n as u32);
        let keep = self.strategy.map(h.order(), |i| {
            let c = self.decode(h.members[i as usize]);
            (0..lifts).any(|mut j| {
                let mut l = c;
                for slot in l.iter_mut().take(2 * n) {
                    *slot += (j % base) * self.k();
                    j /= base;
                }
                lift_gens.iter().all(|g| lifted.commutes(&l, g))
            })
        });
        let mut member = vec![false; self.order as usize];
        for (&a, keep) in h.members.iter().zip(keep) {
            member[a as usize] = keep;
        }
        self.subgroup_of(member, None)
    }
}

/// Orders in the computation of `Z(H_n(kZ)) / [H_n(kZ), H_n(kZ)]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CenterQuotient {
    pub n: usize,
    pub k: u64,
    pub depth: u32,
    pub subgroup_order: u64,
    pub center_order: u64,
    pub commutator_order: u64,
    pub quotient_order: u64,
}

/// Order of the center of `H_n(kZ)` modulo its commutator subgroup, computed
/// inside `H_n(Z/k^depth Z)`.
///
/// Truncation makes elements with `x, y` in `k^{depth-1} Z` look central in
/// the finite image; they are discarded by keeping only elements with a lift
/// one level deeper that is still central. That is the image of the true
/// center `{0} x {0} x kZ`.
pub fn quotient_center_by_commutator(n: usize, k: u64, depth: u32) -> Result<u64> {
    center_quotient_detail(n, k, depth).map(|d| d.quotient_order)
}

pub fn center_quotient_detail(n: usize, k: u64, depth: u32) -> Result<CenterQuotient> {
    if depth < 3 {
        return Err(Error::InsufficientResolution(depth));
    }
    let modulus = k
        .checked_pow(depth)
        .ok_or(Error::TooLarge { order: u128::MAX, cap: DEFAULT_CAP })?;
    let g = enumerate_group(n, modulus)?;
    let h = g.scaled_image(k);
    let deeper = Arith { n, m: modulus * k };
    let lift_gens: Vec<Coords> = (0..deeper.len())
        .map(|j| {
            let mut c = [0u64; MAX_COORDS];
            c[j] = k;
            c
        })
        .collect();
    let center = g.stable_central(&h, k, &lift_gens);
    let commutator = g.subgroup_commutator(&h)?;
    if !commutator.is_subset_of(&center) {
        return Err(Error::InvalidSubgroup("commutator subgroup escapes the center".into()));
    }
    Ok(CenterQuotient {
        n,
        k,
        depth,
        subgroup_order: h.order(),
        center_order: center.order(),
        commutator_order: commutator.order(),
        quotient_order: center.order() / commutator.order(),
    })
}

/// Summary of the structure of one group, as emitted by the command line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupReport {
    pub group: GroupId,
    pub order: u64,
    pub center_order: u64,
    pub commutator_order: u64,
    pub indices: BTreeMap<String, u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GroupId {
    pub n: usize,
    pub k: u64,
}

impl FiniteHeisenberg {
    /// Orders of the center and commutator subgroup, with the indices of the
    /// images of `H_n(rZ)` and `delta_r(H_n(Z))` for each `r` in `radices`.
    pub fn report(&self, radices: &[u64]) -> Result<GroupReport> {
        let mut indices = BTreeMap::new();
        for &r in radices {
            indices.insert(format!("scaled_{r}"), self.subgroup_index(&self.scaled_image(r))?);
            indices.insert(format!("dilated_{r}"), self.subgroup_index(&self.dilated_image(r))?);
        }
        Ok(GroupReport {
            group: GroupId { n: self.n(), k: self.k() },
            order: self.order(),
            center_order: self.center_of().order(),
            commutator_order: self.commutator_subgroup().order(),
            indices,
        })
    }
}
