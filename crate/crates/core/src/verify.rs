//! A self-contained verification suite over every module, used by the
//! `verify` subcommand. Each check runs seeded random cases (or an exact
//! enumeration) and reports the first counterexample it meets.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{stream_rng, Strategy};
use crate::finite::{enumerate_group, quotient_center_by_commutator};
use crate::heisenberg::{Dilation, HeisenbergPoint};
use crate::profinite::{count_coherent, group_coherence_check, phi_embed, to_profinite, v_density_witness};
use crate::ring::{embed_q, radic_abs, radic_dist, ultrametric_rho, Coefficient, RAdicInt, Residue};
use crate::solenoid::{
    canonical_reduce, dilated_to_standard, embed_phi_tilde, left_action, pi0, preimages, project_level, psi_embed,
    same_coset, standard_to_dilated, tilde_q_embed,
};
use crate::subriemannian::{
    ball_volume_scaling, box_quasinorm, cc_distance_estimate, dilation_scaling_check, translation_jacobian_check,
    CcOptions, HorizontalPath, Side,
};

pub const SCOPES: [&str; 7] =
    ["all", "ring_core", "heisenberg_core", "finite_groups", "profinite", "solenoid", "subriemannian"];

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub module: &'static str,
    pub name: &'static str,
    pub statement: &'static str,
    pub cases: u64,
    pub passed: bool,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub scope: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

struct Suite {
    seed: u64,
    module: &'static str,
    checks: Vec<Check>,
}

impl Suite {
    /// Runs `f` on `cases` independent random streams.
    fn random<F>(&mut self, name: &'static str, statement: &'static str, cases: u64, f: F)
    where
        F: Fn(&mut ChaCha8Rng) -> std::result::Result<(), String> + Sync + Send,
    {
        let tag = self.checks.len() as u64 + 1;
        let failures = Strategy::default().map(cases, |i| f(&mut stream_rng(self.seed ^ (tag << 48), i)).err());
        let counterexample = failures.into_iter().flatten().next();
        self.checks.push(Check {
            module: self.module,
            name,
            statement,
            cases,
            passed: counterexample.is_none(),
            counterexample,
        });
    }

    /// Records a deterministic check.
    fn exact(&mut self, name: &'static str, statement: &'static str, cases: u64, outcome: std::result::Result<(), String>) {
        self.checks.push(Check {
            module: self.module,
            name,
            statement,
            cases,
            passed: outcome.is_ok(),
            counterexample: outcome.err(),
        });
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T, E: Debug>(r: std::result::Result<T, E>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

fn rand_int_point(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> HeisenbergPoint<BigInt> {
    let mut c = || BigInt::from(rng.random_range(-bound..=bound));
    let x = (0..n).map(|_| c()).collect();
    let y = (0..n).map(|_| c()).collect();
    HeisenbergPoint::new(x, y, c()).expect("n >= 1")
}

fn rand_rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(rng.random_range(-60i64..=60).into(), rng.random_range(1i64..=8).into())
}

fn rand_rational_point(rng: &mut ChaCha8Rng, n: usize) -> HeisenbergPoint<BigRational> {
    let x = (0..n).map(|_| rand_rational(rng)).collect();
    let y = (0..n).map(|_| rand_rational(rng)).collect();
    HeisenbergPoint::new(x, y, rand_rational(rng)).expect("n >= 1")
}

fn axioms<A: Coefficient>(g: &HeisenbergPoint<A>, h: &HeisenbergPoint<A>, k: &HeisenbergPoint<A>) -> std::result::Result<(), String> {
    let e = HeisenbergPoint::identity(g.n(), g.t());
    let gh_k = lift(lift(g.compose(h))?.compose(k))?;
    let g_hk = lift(g.compose(&lift(h.compose(k))?))?;
    ensure(gh_k == g_hk, || format!("associativity fails at {g:?}, {h:?}, {k:?}"))?;
    ensure(lift(g.compose(&e))? == *g && lift(e.compose(g))? == *g, || format!("identity fails at {g:?}"))?;
    ensure(lift(g.compose(&g.inverse()))?.is_identity(), || format!("inverse fails at {g:?}"))
}

fn ring_core(s: &mut Suite) {
    s.random("residue_ring_axioms", "Z/kZ is a commutative ring", 2000, |rng| {
        let k = rng.random_range(2i64..=30);
        let mut r = || Residue::new(rng.random_range(-100i64..100), k).expect("k >= 2");
        let (a, b, c) = (r(), r(), r());
        ensure(a.mul(&b.add(&c)) == a.mul(&b).add(&a.mul(&c)), || format!("distributivity fails mod {k}"))?;
        ensure(a.add(&b) == b.add(&a) && a.mul(&b) == b.mul(&a), || format!("commutativity fails mod {k}"))
    });
    s.random("ultrametric", "|a - c|_r <= max(|a - b|_r, |b - c|_r)", 5000, |rng| {
        let r = BigInt::from(rng.random_range(2i64..=12));
        let mut v = || BigInt::from(rng.random_range(-5000i64..5000));
        let (a, b, c) = (v(), v(), v());
        let lhs = lift(radic_dist(&a, &c, &r))?;
        let rhs = lift(radic_dist(&a, &b, &r))?.max(lift(radic_dist(&b, &c, &r))?);
        ensure(lhs <= rhs, || format!("a={a} b={b} c={c} r={r}"))
    });
    s.random("submultiplicative", "|ab|_r <= |a|_r |b|_r", 5000, |rng| {
        let r = BigInt::from(rng.random_range(2i64..=12));
        let a = BigInt::from(rng.random_range(-5000i64..5000));
        let b = BigInt::from(rng.random_range(-5000i64..5000));
        let lhs = lift(radic_abs(&(&a * &b), &r))?;
        ensure(lhs <= lift(radic_abs(&a, &r))? * lift(radic_abs(&b, &r))?, || format!("a={a} b={b} r={r}"))
    });
    s.random("isometry", "rho(q(a), q(b)) = |a - b|_r when |a - b| < r^L", 5000, |rng| {
        let r = rng.random_range(2i64..=6);
        let depth = rng.random_range(1u32..=6);
        let bound = r.pow(depth);
        let a = rng.random_range(-1000i64..1000);
        let b = a + rng.random_range(-(bound - 1)..bound);
        let rb = BigInt::from(r);
        let rho = lift(ultrametric_rho(&lift(embed_q(&a.into(), &rb, depth))?, &lift(embed_q(&b.into(), &rb, depth))?))?;
        ensure(rho == lift(radic_dist(&a.into(), &b.into(), &rb))?, || format!("a={a} b={b} r={r} L={depth}"))
    });
    s.random("coherent_roundtrip", "r-adic integers are coherent sequences", 2000, |rng| {
        let r = rng.random_range(2i64..=7);
        let depth = rng.random_range(1u32..=6);
        let a = lift(RAdicInt::new(rng.random_range(-10_000i64..10_000), r, depth))?;
        let p = a.to_product();
        ensure(p.is_coherent() && lift(RAdicInt::from_product(&p))? == a, || format!("{a}"))
    });
}

fn heisenberg_core(s: &mut Suite) {
    s.random("axioms_integers", "group axioms over Z", 2000, |rng| {
        let n = rng.random_range(1..=3);
        axioms(&rand_int_point(rng, n, 50), &rand_int_point(rng, n, 50), &rand_int_point(rng, n, 50))
    });
    s.random("axioms_residues", "group axioms over Z/kZ", 2000, |rng| {
        let like = Residue::new(0, rng.random_range(2i64..=8)).expect("k >= 2");
        let n = rng.random_range(1..=2);
        let mut p = || HeisenbergPoint::from_integer_point(&rand_int_point(rng, n, 50), &like);
        let (g, h, k) = (p(), p(), p());
        axioms(&g, &h, &k)
    });
    s.random("axioms_radic", "group axioms over Z_r", 2000, |rng| {
        let like = RAdicInt::new(0, rng.random_range(2i64..=3), rng.random_range(1u32..=4)).expect("valid radix");
        let mut p = || HeisenbergPoint::from_integer_point(&rand_int_point(rng, 1, 500), &like);
        let (g, h, k) = (p(), p(), p());
        axioms(&g, &h, &k)
    });
    s.random("axioms_rationals", "group axioms over Q", 2000, |rng| {
        axioms(&rand_rational_point(rng, 2), &rand_rational_point(rng, 2), &rand_rational_point(rng, 2))
    });
    s.random("conjugation", "h g h^-1 = (x, y, t + x'.y - x.y')", 2000, |rng| {
        let (g, h) = (rand_int_point(rng, 2, 50), rand_int_point(rng, 2, 50));
        let direct = lift(lift(h.compose(&g))?.compose(&h.inverse()))?;
        ensure(lift(g.conjugate(&h))? == direct, || format!("g={g:?} h={h:?}"))
    });
    s.random("commutators_central", "[g, h] lies on the t-axis", 2000, |rng| {
        let (g, h) = (rand_int_point(rng, 2, 50), rand_int_point(rng, 2, 50));
        let c = lift(g.commutator(&h))?;
        ensure(c.x().iter().chain(c.y()).all(Zero::is_zero), || format!("g={g:?} h={h:?}"))
    });
    s.random("dilation_automorphism", "delta_s(g h) = delta_s(g) delta_s(h)", 2000, |rng| {
        let d = Dilation::new(rand_rational(rng));
        let (g, h) = (rand_rational_point(rng, 1), rand_rational_point(rng, 1));
        let lhs = lift(lift(g.compose(&h))?.dilate(&d))?;
        ensure(lhs == lift(lift(g.dilate(&d))?.compose(&lift(h.dilate(&d))?))?, || format!("g={g:?} h={h:?}"))
    });
}

fn finite_groups(s: &mut Suite) {
    let mut orders = Ok(());
    for n in 1..=2 {
        for k in 2u64..=8 {
            match enumerate_group(n, k) {
                Ok(g) if g.order() != k.pow(2 * n as u32 + 1) => orders = Err(format!("n={n} k={k}: {}", g.order())),
                Err(e) => orders = Err(format!("n={n} k={k}: {e}")),
                _ => {}
            }
        }
    }
    s.exact("orders", "|H_n(Z/kZ)| = k^{2n+1}", 14, orders);

    let structure = (|| {
        for (n, k) in [(1, 2), (1, 3), (1, 4), (1, 6), (2, 2), (2, 3)] {
            let g = lift(enumerate_group(n, k))?;
            let z = g.center_of();
            ensure(z.order() == k, || format!("center of n={n} k={k} has {} elements", z.order()))?;
            ensure(g.commutator_subgroup() == z.clone(), || format!("commutator differs from center for n={n} k={k}"))?;
        }
        Ok(())
    })();
    s.exact("center_and_commutator", "center = commutator subgroup = t-axis, of order k", 6, structure);

    let indices = (|| {
        for (n, r) in [(1usize, 2u64), (1, 3), (2, 2)] {
            let g = lift(enumerate_group(n, r.pow(3)))?;
            let d = lift(g.subgroup_index(&g.dilated_image(r)))?;
            let h = lift(g.subgroup_index(&g.scaled_image(r)))?;
            ensure(d == r.pow(2 * n as u32 + 2), || format!("dilated index {d} for n={n} r={r}"))?;
            ensure(h == r.pow(2 * n as u32 + 1), || format!("scaled index {h} for n={n} r={r}"))?;
        }
        Ok(())
    })();
    s.exact("indices", "[H : delta_r H] = r^{2n+2} and [H : H(rZ)] = r^{2n+1}", 3, indices);

    let normality = (|| {
        for (n, r) in [(1usize, 2u64), (1, 3), (2, 2)] {
            let g = lift(enumerate_group(n, r.pow(3)))?;
            let (scaled, dilated) = (g.scaled_image(r), g.dilated_image(r));
            ensure(lift(g.is_normal(&scaled))?, || format!("H(rZ) not normal, n={n} r={r}"))?;
            ensure(!lift(g.is_normal(&dilated))?, || format!("delta_r H normal, n={n} r={r}"))?;
            ensure(lift(g.is_normal_in(&scaled, &dilated))?, || format!("delta_r H not normal in H(rZ), n={n} r={r}"))?;
        }
        Ok(())
    })();
    s.exact("normality", "H(kZ) is normal; delta_r H is normal only inside H(rZ)", 3, normality);

    let quotient = (|| {
        for k in 2..=4 {
            let q = lift(quotient_center_by_commutator(1, k, 3))?;
            ensure(q == k, || format!("k={k}: {q}"))?;
        }
        Ok(())
    })();
    s.exact("center_over_commutator", "|Z(H(kZ)) / [H(kZ), H(kZ)]| = k", 3, quotient);
}

fn profinite(s: &mut Suite) {
    s.random("phi_homomorphism", "phi(g h) = phi(g) phi(h), coherently", 2000, |rng| {
        let (r, depth) = (rng.random_range(2u32..=3), rng.random_range(1u32..=4));
        let (g, h) = (rand_int_point(rng, 2, 1000), rand_int_point(rng, 2, 1000));
        let gh = lift(phi_embed(&lift(g.compose(&h))?, r, depth))?;
        let prod = lift(lift(phi_embed(&g, r, depth))?.compose(&lift(phi_embed(&h, r, depth))?))?;
        ensure(gh == prod && group_coherence_check(&gh), || format!("g={g:?} h={h:?} r={r} L={depth}"))
    });
    s.random("identification", "levelwise arithmetic equals H_n(Z_r) arithmetic", 2000, |rng| {
        let (r, depth) = (rng.random_range(2u32..=3), rng.random_range(1u32..=4));
        let n = rng.random_range(1..=2);
        let (g, h) = (rand_int_point(rng, n, 1000), rand_int_point(rng, n, 1000));
        let (wg, wh) = (lift(phi_embed(&g, r, depth))?, lift(phi_embed(&h, r, depth))?);
        let lhs = lift(to_profinite(&lift(wg.compose(&wh))?))?;
        let rhs = lift(lift(to_profinite(&wg))?.compose(&lift(to_profinite(&wh))?))?;
        ensure(lhs == rhs, || format!("g={g:?} h={h:?} r={r} L={depth}"))
    });
    s.random("density_witness", "every coherent element has an integer preimage", 2000, |rng| {
        let (r, depth) = (rng.random_range(2u32..=5), rng.random_range(1u32..=5));
        let w = lift(phi_embed(&rand_int_point(rng, 1, 100_000), r, depth))?;
        let g = lift(v_density_witness(&w))?;
        ensure(lift(phi_embed(&g, r, depth))? == w, || format!("{w:?}"))
    });
    let counts = (|| {
        for depth in 1..=3u32 {
            let c = lift(count_coherent(1, 2, depth, Strategy::default()))?;
            ensure(c == 2u64.pow(3 * depth), || format!("depth {depth}: {c}"))?;
        }
        Ok(())
    })();
    s.exact("coherent_count", "depth-L coherent elements number r^{L(2n+1)}", 3, counts);
}

fn solenoid(s: &mut Suite) {
    s.random("coset_well_defined", "same coset iff same canonical form", 1000, |rng| {
        let (g, h) = (rand_rational_point(rng, 1), rand_rational_point(rng, 1));
        let m = rng.random_range(-3i64..=3) * 4;
        let lattice = HeisenbergPoint::int(&[m], &[-m], 2 * m).map_err(|e| e.to_string())?;
        let gl = lift(g.compose(&HeisenbergPoint::from_ints(&lattice)))?;
        let same = lift(canonical_reduce(&g, 2, 2))? == lift(canonical_reduce(&gl, 2, 2))?;
        let other = lift(canonical_reduce(&g, 2, 2))? == lift(canonical_reduce(&h, 2, 2))?;
        ensure(same && other == lift(same_coset(&g, &h, 2, 2))?, || format!("g={g:?} h={h:?}"))
    });
    s.random("tower_and_action", "projection is coherent and commutes with the action", 1000, |rng| {
        let depth = rng.random_range(0u32..=3);
        let l = rng.random_range(0..=depth);
        let (g, h) = (rand_rational_point(rng, 1), rand_rational_point(rng, 1));
        let p = lift(embed_phi_tilde(&g, 3, depth))?;
        let a = lift(project_level(&lift(left_action(&h, &p))?, l))?;
        let b = lift(left_action(&h, &lift(project_level(&p, l))?))?;
        ensure(a == b, || format!("g={g:?} h={h:?} L={depth} l={l}"))?;
        let intertwined = lift(embed_phi_tilde(&lift(h.compose(&g))?, 3, depth))? == lift(left_action(&h, &p))?;
        ensure(intertwined, || format!("embedding does not intertwine at g={g:?} h={h:?}"))
    });
    s.random("dilated_identification", "standard and dilated towers identify", 1000, |rng| {
        let depth = rng.random_range(0u32..=2);
        let g = rand_rational_point(rng, 1);
        let u = lift(psi_embed(&g, 2, depth))?;
        ensure(lift(dilated_to_standard(&u, depth))? == lift(embed_phi_tilde(&g, 2, depth))?, || format!("{g:?}"))?;
        let p = lift(embed_phi_tilde(&g, 2, 2 * depth))?;
        ensure(lift(standard_to_dilated(&p, depth))? == u, || format!("{g:?}"))
    });
    s.random("circle_pi0", "pi0 is additive with kernel the r-adic integers", 1000, |rng| {
        let (a, b) = (rand_rational(rng), rand_rational(rng));
        let pa = lift(tilde_q_embed(&a, 2, 3))?;
        let pb = lift(tilde_q_embed(&b, 2, 3))?;
        let sum = pi0(&lift(pa.add(&pb))?);
        let direct = pi0(&lift(tilde_q_embed(&(pi0(&pa) + pi0(&pb)), 2, 0))?);
        ensure(sum == direct && (pi0(&pa).is_zero() == pa.in_kernel()), || format!("a={a} b={b}"))
    });
    let shift = (|| {
        for (n, r, expected) in [(1usize, 2i64, 16usize), (1, 3, 81)] {
            let zero = lift(crate::solenoid::SolenoidPoint::zero(n, r, 0))?;
            let c = lift(preimages(&zero))?.len();
            ensure(c == expected, || format!("n={n} r={r}: {c} preimages"))?;
        }
        Ok(())
    })();
    s.exact("shift_degree", "the shift map has r^{2n+2} preimages", 2, shift);
}

fn subriemannian(s: &mut Suite) {
    s.random("quasinorm_homogeneous", "N(delta_s p) = |s| N(p)", 2000, |rng| {
        let p = HeisenbergPoint::new(vec![rng.random_range(-5.0..5.0)], vec![rng.random_range(-5.0..5.0)], rng.random_range(-5.0..5.0))
            .map_err(|e| e.to_string())?;
        let sc: f64 = rng.random_range(-4.0..4.0);
        let lhs = box_quasinorm(&lift(p.dilate(&Dilation::new(sc)))?);
        ensure((lhs - sc.abs() * box_quasinorm(&p)).abs() < 1e-9 * (1.0 + lhs), || format!("p={p:?} s={sc}"))
    });
    s.random("path_concatenation", "endpoint of a concatenation composes increments", 500, |rng| {
        let mut controls = |m: usize| -> Vec<f64> { (0..2 * m).map(|_| rng.random_range(-3.0..3.0)).collect() };
        let origin = HeisenbergPoint::identity(1, &0.0);
        let a = lift(HorizontalPath::from_flat(origin.clone(), &controls(5)))?;
        let b = lift(HorizontalPath::from_flat(origin, &controls(9)))?;
        let joined = lift(a.concat(&b))?.endpoint();
        let expect = lift(b.increment().compose(&a.endpoint()))?;
        let close = joined.coords().zip(expect.coords()).all(|(u, v)| (u - v).abs() < 1e-9);
        ensure(close, || format!("{joined:?} vs {expect:?}"))
    });
    let opts = CcOptions { m: 32, restarts: 6, seed: s.seed, strategy: Strategy::default() };
    let estimates = (|| {
        let seg = lift(cc_distance_estimate(&lift(HeisenbergPoint::new(vec![1.0], vec![0.0], 0.0))?, &opts))?.distance;
        ensure((seg - 1.0).abs() <= 0.01, || format!("segment estimate {seg}"))?;
        let vert = lift(cc_distance_estimate(&lift(HeisenbergPoint::new(vec![0.0], vec![0.0], 1.0))?, &opts))?.distance;
        let dido = 2.0 * std::f64::consts::PI.sqrt();
        ensure((vert / dido - 1.0).abs() <= 0.02, || format!("vertical estimate {vert}"))
    })();
    s.exact("cc_oracles", "d(e, (1,0,0)) = 1 and d(e, (0,0,1)) = 2 sqrt(pi)", 2, estimates);
    let scaling = (|| {
        let p = lift(HeisenbergPoint::new(vec![0.3], vec![-0.4], 0.5))?;
        let (a, b) = lift(dilation_scaling_check(&p, 2.0, &opts))?;
        ensure((a - b).abs() <= 0.03 * b, || format!("{a} vs {b}"))
    })();
    s.exact("cc_dilation", "d(delta_s p) = |s| d(p)", 1, scaling);
    let volume = (|| {
        for n in 1..=2 {
            let e = lift(ball_volume_scaling(n, 1.0, 200_000, s.seed, Strategy::default()))?;
            ensure((e.exponent - (2 * n + 2) as f64).abs() <= 0.1, || format!("n={n}: exponent {}", e.exponent))?;
        }
        Ok(())
    })();
    s.exact("volume_growth", "balls grow like rho^{2n+2}", 2, volume);
    s.random("translation_jacobian", "translations preserve Lebesgue measure", 100, |rng| {
        let h = HeisenbergPoint::new(vec![rng.random_range(-10.0..10.0)], vec![rng.random_range(-10.0..10.0)], rng.random_range(-10.0..10.0))
            .map_err(|e| e.to_string())?;
        let seed = rng.random();
        let worst = lift(translation_jacobian_check(&h, Side::Left, 3, seed))?
            .max(lift(translation_jacobian_check(&h, Side::Right, 3, seed))?);
        ensure(worst < 1e-6, || format!("h={h:?}: |det - 1| = {worst:e}"))
    });
}

/// Runs every check in `scope` (`"all"` or a module name).
pub fn run_verify_suite(scope: &str, seed: u64) -> Result<VerifyReport> {
    type Runner = (&'static str, fn(&mut Suite));
    let runners: [Runner; 6] = [
        ("ring_core", ring_core),
        ("heisenberg_core", heisenberg_core),
        ("finite_groups", finite_groups),
        ("profinite", profinite),
        ("solenoid", solenoid),
        ("subriemannian", subriemannian),
    ];
    if !SCOPES.contains(&scope) {
        return Err(Error::Parse(format!("unknown scope {scope:?}; expected one of {}", SCOPES.join(", "))));
    }
    let mut checks = Vec::new();
    for (module, run) in runners {
        if scope == "all" || scope == module {
            let mut suite = Suite { seed, module, checks: Vec::new() };
            run(&mut suite);
            checks.extend(suite.checks);
        }
    }
    Ok(VerifyReport { scope: scope.to_string(), seed, passed: checks.iter().all(|c| c.passed), checks })
}
