//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use hsol_core::exec::stream_rng;
use hsol_core::finite::{enumerate_group, quotient_center_by_commutator};
use hsol_core::profinite::{count_coherent, from_profinite, phi_embed, to_profinite, ProfinitePoint};
use hsol_core::ring::{embed_q, radic_abs, radic_dist, ultrametric_rho, Coefficient, RAdicInt, Residue};
use hsol_core::solenoid::{
    canonical_reduce, dilated_to_standard, embed_phi_tilde, left_action, preimages, project_level, psi_embed,
    same_coset, shift_map, standard_to_dilated, SolenoidPoint,
};
use hsol_core::subriemannian::{
    cc_distance_estimate, dilation_scaling_check, translation_jacobian_check, ball_volume_scaling, CcOptions, Side,
};
use hsol_core::{HeisenbergPoint, Strategy};

type Outcome = Result<String, String>;

const SEED: u64 = 20_251_016;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn point<A: Coefficient>(n: usize, mut c: impl FnMut() -> A) -> HeisenbergPoint<A> {
    let x = (0..n).map(|_| c()).collect();
    let y = (0..n).map(|_| c()).collect();
    HeisenbergPoint::new(x, y, c()).expect("n >= 1")
}

fn int_point(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> HeisenbergPoint<BigInt> {
    point(n, || BigInt::from(rng.random_range(-bound..=bound)))
}

fn rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(rng.random_range(-200i64..=200).into(), rng.random_range(1i64..=12).into())
}

fn rational_point(rng: &mut ChaCha8Rng, n: usize) -> HeisenbergPoint<BigRational> {
    point(n, || rational(rng))
}

fn real_point(rng: &mut ChaCha8Rng, n: usize, bound: f64) -> HeisenbergPoint<f64> {
    point(n, || rng.random_range(-bound..bound))
}

fn axioms<A: Coefficient>(g: &HeisenbergPoint<A>, h: &HeisenbergPoint<A>, k: &HeisenbergPoint<A>) -> Result<(), String> {
    let e = HeisenbergPoint::identity(g.n(), g.t());
    let left = lift(lift(g.compose(h))?.compose(k))?;
    let right = lift(g.compose(&lift(h.compose(k))?))?;
    ensure(left == right, || format!("associativity fails at {g:?}, {h:?}, {k:?}"))?;
    ensure(lift(g.compose(&e))? == *g && lift(e.compose(g))? == *g, || format!("identity fails at {g:?}"))?;
    ensure(lift(g.compose(&g.inverse()))?.is_identity(), || format!("right inverse fails at {g:?}"))?;
    ensure(lift(g.inverse().compose(g))?.is_identity(), || format!("left inverse fails at {g:?}"))
}

fn conjugation<A: Coefficient>(g: &HeisenbergPoint<A>, h: &HeisenbergPoint<A>) -> Result<(), String> {
    let direct = lift(lift(h.compose(g))?.compose(&h.inverse()))?;
    ensure(lift(g.conjugate(h))? == direct, || format!("closed form differs at g={g:?}, h={h:?}"))
}

const CASES: u64 = 10_000;

fn criterion_1() -> Outcome {
    let mut rng = stream_rng(SEED, 1);
    for _ in 0..CASES {
        let n = rng.random_range(1..=3);
        let [a, b, c] = [0; 3].map(|_| int_point(&mut rng, n, 1 << 40));
        axioms(&a, &b, &c)?;
    }
    for _ in 0..CASES {
        let (n, k) = (rng.random_range(1..=2), rng.random_range(2i64..=8));
        let [a, b, c] = [0; 3].map(|_| point(n, || Residue::new(rng.random_range(0..k), k).unwrap()));
        axioms(&a, &b, &c)?;
    }
    for _ in 0..CASES {
        let (n, r, l) = (rng.random_range(1..=2), rng.random_range(2i64..=3), rng.random_range(1u32..=4));
        let [a, b, c] = [0; 3].map(|_| point(n, || RAdicInt::new(rng.random_range(-1000..1000), r, l).unwrap()));
        axioms(&a, &b, &c)?;
    }
    for _ in 0..CASES {
        let n = rng.random_range(1..=2);
        let [a, b, c] = [0; 3].map(|_| rational_point(&mut rng, n));
        axioms(&a, &b, &c)?;
    }
    Ok(format!("{CASES} triples each over Z, Z/kZ (k=2..8), Z_r (r=2,3, L<=4), Q"))
}

fn criterion_2() -> Outcome {
    let mut rng = stream_rng(SEED, 2);
    for _ in 0..CASES {
        let n = rng.random_range(1..=3);
        conjugation(&int_point(&mut rng, n, 1 << 30), &int_point(&mut rng, n, 1 << 30))?;
        conjugation(&rational_point(&mut rng, n), &rational_point(&mut rng, n))?;
        let k = rng.random_range(2i64..=8);
        let mut res = || point(n, || Residue::new(rng.random_range(0..k), k).unwrap());
        conjugation(&res(), &res())?;
    }
    Ok(format!("{CASES} pairs each over Z, Q, Z/kZ"))
}

fn criterion_3() -> Outcome {
    for n in 1..=2usize {
        for k in 2..=8u64 {
            let order = lift(enumerate_group(n, k))?.order();
            let expected = k.pow(2 * n as u32 + 1);
            ensure(order == expected, || format!("n={n} k={k}: order {order}, expected {expected}"))?;
        }
    }
    Ok("all 14 groups have order k^(2n+1)".into())
}

fn criterion_4() -> Outcome {
    for (n, r) in [(1usize, 2u64), (1, 3), (2, 2)] {
        let g = lift(enumerate_group(n, r.pow(3)))?;
        let dilated = lift(g.subgroup_index(&g.dilated_image(r)))?;
        let scaled = lift(g.subgroup_index(&g.scaled_image(r)))?;
        let (ed, es) = (r.pow(2 * n as u32 + 2), r.pow(2 * n as u32 + 1));
        ensure(dilated == ed, || format!("n={n} r={r}: dilated index {dilated}, expected {ed}"))?;
        ensure(scaled == es, || format!("n={n} r={r}: scaled index {scaled}, expected {es}"))?;
    }
    Ok("dilated index r^(2n+2), scaled index r^(2n+1) for (n,r) = (1,2), (1,3), (2,2)".into())
}

fn criterion_5() -> Outcome {
    for n in 1..=2usize {
        for k in 2..=8u64 {
            let g = lift(enumerate_group(n, k))?;
            let z = g.center_of();
            ensure(z.order() == k, || format!("n={n} k={k}: center of order {}", z.order()))?;
            ensure(g.commutator_subgroup() == z, || format!("n={n} k={k}: commutator subgroup is not the center"))?;
            if n == 1 {
                // Cross-check the generator-based center against brute force.
                let brute = lift(g.subgroup_center_exhaustive(&g.whole()))?;
                ensure(brute == z, || format!("k={k}: exhaustive center differs"))?;
            }
        }
    }
    for k in 2..=4u64 {
        let q = lift(quotient_center_by_commutator(1, k, 3))?;
        ensure(q == k, || format!("k={k}: quotient {q}"))?;
    }
    Ok("center order k and [G,G] = Z(G) on all 14 groups; quotient = k for k = 2, 3, 4".into())
}

fn criterion_6() -> Outcome {
    for (n, r) in [(1usize, 2u64), (1, 3), (2, 2)] {
        let g = lift(enumerate_group(n, r.pow(3)))?;
        let (scaled, dilated) = (g.scaled_image(r), g.dilated_image(r));
        ensure(lift(g.is_normal(&scaled))?, || format!("n={n} r={r}: scaled image not normal"))?;
        ensure(!lift(g.is_normal(&dilated))?, || format!("n={n} r={r}: dilated image normal in G"))?;
        ensure(lift(g.is_normal_in(&scaled, &dilated))?, || format!("n={n} r={r}: dilated image not normal in scaled image"))?;
    }
    Ok("normal / non-normal / normal-in-scaled for (n,r) = (1,2), (1,3), (2,2)".into())
}

fn criterion_7() -> Outcome {
    let radices = [2i64, 3, 4, 5, 6, 10];
    let depth = 12u32;
    let mut rng = stream_rng(SEED, 7);
    for &r in &radices {
        let rb = BigInt::from(r);
        let span: i64 = Pow::pow(&rb, depth).try_into().expect("fits");
        for _ in 0..CASES {
            let a = BigInt::from(rng.random_range(-1_000_000_000i64..=1_000_000_000));
            let b = BigInt::from(rng.random_range(-1_000_000_000i64..=1_000_000_000));
            let (aa, ab) = (lift(radic_abs(&a, &rb))?, lift(radic_abs(&b, &rb))?);
            let sum = lift(radic_abs(&(&a + &b), &rb))?;
            ensure(sum <= aa.clone().max(ab.clone()), || format!("ultrametric fails: r={r} a={a} b={b}"))?;
            let prod = lift(radic_abs(&(&a * &b), &rb))?;
            ensure(prod <= &aa * &ab, || format!("submultiplicativity fails: r={r} a={a} b={b}"))?;
            let c = &a + BigInt::from(rng.random_range(-span + 1..span));
            let rho = lift(ultrametric_rho(&lift(embed_q(&a, &rb, depth))?, &lift(embed_q(&c, &rb, depth))?))?;
            ensure(rho == lift(radic_dist(&a, &c, &rb))?, || format!("isometry fails: r={r} a={a} b={c}"))?;
        }
    }
    Ok(format!("{CASES} pairs per radix {radices:?}, isometry at L={depth}"))
}

fn radic_point(rng: &mut ChaCha8Rng, n: usize, r: i64, depth: u32) -> ProfinitePoint {
    point(n, || RAdicInt::new(rng.random_range(-1_000_000i64..=1_000_000), r, depth).unwrap())
}

fn criterion_8() -> Outcome {
    let mut rng = stream_rng(SEED, 8);
    for n in 1..=2usize {
        for r in 2..=3i64 {
            for depth in 1..=4u32 {
                for _ in 0..CASES {
                    let (g, h) = (int_point(&mut rng, n, 1_000_000), int_point(&mut rng, n, 1_000_000));
                    let (wg, wh) = (lift(phi_embed(&g, r, depth))?, lift(phi_embed(&h, r, depth))?);
                    let levelwise = lift(to_profinite(&lift(wg.compose(&wh))?))?;
                    let coordinate = lift(lift(to_profinite(&wg))?.compose(&lift(to_profinite(&wh))?))?;
                    ensure(levelwise == coordinate, || format!("n={n} r={r} L={depth}: g={g:?} h={h:?}"))?;

                    let (p, q) = (radic_point(&mut rng, n, r, depth), radic_point(&mut rng, n, r, depth));
                    let lhs = lift(from_profinite(&lift(p.compose(&q))?))?;
                    let rhs = lift(lift(from_profinite(&p))?.compose(&lift(from_profinite(&q))?))?;
                    ensure(lhs == rhs, || format!("n={n} r={r} L={depth}: p={p:?} q={q:?}"))?;
                }
            }
        }
    }
    for depth in 1..=3u32 {
        let c = lift(count_coherent(1, 2, depth, Strategy::default()))?;
        ensure(c == 8u64.pow(depth), || format!("depth {depth}: {c} coherent elements"))?;
    }
    Ok(format!("{CASES} pairs per (n,r,L) in {{1,2}}x{{2,3}}x{{1..4}}; coherent counts 8, 64, 512"))
}

fn criterion_9() -> Outcome {
    let mut rng = stream_rng(SEED, 9);
    for _ in 0..1000 {
        let (n, r, depth) = (rng.random_range(1..=2usize), rng.random_range(2i64..=3), rng.random_range(0u32..=3));
        let m = r.pow(depth);
        let (g, h) = (rational_point(&mut rng, n), rational_point(&mut rng, n));
        let lattice = point(n, || BigRational::from_integer(BigInt::from(m * rng.random_range(-20i64..=20))));
        let gl = lift(g.compose(&lattice))?;
        let cg = lift(canonical_reduce(&g, r, depth))?;
        ensure(cg == lift(canonical_reduce(&gl, r, depth))?, || format!("coset rep changes class: g={g:?}"))?;
        ensure(lift(same_coset(&g, &gl, r, depth))?, || format!("same_coset misses g={g:?} r={r} L={depth}"))?;
        let ch = lift(canonical_reduce(&h, r, depth))?;
        ensure((cg == ch) == lift(same_coset(&g, &h, r, depth))?, || format!("same_coset disagrees at g={g:?} h={h:?}"))?;

        let l = rng.random_range(0..=depth);
        ensure(lift(project_level(&cg, l))? == lift(canonical_reduce(&g, r, l))?, || format!("tower breaks at g={g:?}"))?;
        let a = lift(project_level(&lift(left_action(&h, &cg))?, l))?;
        let b = lift(left_action(&h, &lift(project_level(&cg, l))?))?;
        ensure(a == b, || format!("action and projection disagree at g={g:?} h={h:?}"))?;
        let intertwined = lift(embed_phi_tilde(&lift(h.compose(&g))?, r, depth))? == lift(left_action(&h, &cg))?;
        ensure(intertwined, || format!("embedding does not intertwine at g={g:?} h={h:?}"))?;

        let half = rng.random_range(0u32..=2);
        let u = lift(psi_embed(&g, r, half))?;
        ensure(lift(dilated_to_standard(&u, half))? == lift(embed_phi_tilde(&g, r, half))?, || format!("dilated chart at {g:?}"))?;
        let deep = lift(embed_phi_tilde(&g, r, 2 * half))?;
        ensure(lift(standard_to_dilated(&deep, half))? == u, || format!("standard chart at {g:?}"))?;
    }
    for (n, r, expected) in [(1usize, 2i64, 16usize), (1, 3, 81)] {
        let base = lift(SolenoidPoint::zero(n, r, 0))?;
        let pre = lift(preimages(&base))?;
        ensure(pre.len() == expected, || format!("n={n} r={r}: {} preimages", pre.len()))?;
        for p in &pre {
            ensure(lift(shift_map(p))? == base, || format!("{p:?} is not a preimage"))?;
        }
    }
    Ok("1000 random cases; preimage counts 16 and 81".into())
}

fn cc_options() -> CcOptions {
    CcOptions { m: 64, restarts: 20, seed: SEED, strategy: Strategy::default() }
}

fn criterion_10() -> Outcome {
    let opts = cc_options();
    let seg = lift(cc_distance_estimate(&lift(HeisenbergPoint::new(vec![1.0], vec![0.0], 0.0))?, &opts))?.distance;
    ensure((0.99..=1.01).contains(&seg), || format!("d(e, (1,0,0)) estimated as {seg}"))?;
    let vert = lift(cc_distance_estimate(&lift(HeisenbergPoint::new(vec![0.0], vec![0.0], 1.0))?, &opts))?.distance;
    let dido = 2.0 * std::f64::consts::PI.sqrt();
    ensure((0.98 * dido..=1.02 * dido).contains(&vert), || format!("d(e, (0,0,1)) estimated as {vert}"))?;
    Ok(format!("d(e,(1,0,0)) = {seg:.5}, d(e,(0,0,1)) = {vert:.5} vs {dido:.5}"))
}

fn criterion_11() -> Outcome {
    let opts = cc_options();
    let mut rng = stream_rng(SEED, 11);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let n = rng.random_range(1..=2);
        let p = real_point(&mut rng, n, 1.0);
        let s = rng.random_range(0.25..4.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let (scaled, expected) = lift(dilation_scaling_check(&p, s, &opts))?;
        let rel = (scaled - expected).abs() / expected;
        worst = worst.max(rel);
        ensure(rel <= 0.03, || format!("p={p:?} s={s}: {scaled} vs {expected}"))?;
    }
    Ok(format!("20 points, worst relative error {worst:.2e}"))
}

fn criterion_12() -> Outcome {
    let mut found = Vec::new();
    for n in 1..=2usize {
        let e = lift(ball_volume_scaling(n, 1.0, 1_000_000, SEED, Strategy::default()))?;
        let expected = (2 * n + 2) as f64;
        ensure((e.exponent - expected).abs() <= 0.1, || format!("n={n}: exponent {}", e.exponent))?;
        found.push(format!("n={n}: {:.4}", e.exponent));
    }
    Ok(found.join(", "))
}

fn criterion_13() -> Outcome {
    let mut rng = stream_rng(SEED, 13);
    let mut worst = 0.0f64;
    for i in 0..100u64 {
        let h = real_point(&mut rng, 1 + (i % 2) as usize, 10.0);
        for side in [Side::Left, Side::Right] {
            worst = worst.max(lift(translation_jacobian_check(&h, side, 3, SEED + i))?);
        }
    }
    ensure(worst < 1e-6, || format!("max |det - 1| = {worst:e}"))?;
    Ok(format!("max |det - 1| = {worst:.2e}"))
}

fn main() {
    // (id, check, time limit in seconds)
    type Criterion = (u32, fn() -> Outcome, Option<u64>);
    let criteria: [Criterion; 13] = [
        (1, criterion_1, Some(10)),
        (2, criterion_2, None),
        (3, criterion_3, Some(5)),
        (4, criterion_4, Some(30)),
        (5, criterion_5, None),
        (6, criterion_6, None),
        (7, criterion_7, None),
        (8, criterion_8, None),
        (9, criterion_9, Some(10)),
        (10, criterion_10, Some(60)),
        (11, criterion_11, Some(120)),
        (12, criterion_12, Some(60)),
        (13, criterion_13, None),
    ];
    let mut failures = 0;
    for (id, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let late = limit.filter(|&s| elapsed > Duration::from_secs(s));
        let line = match (&outcome, late) {
            (Ok(detail), None) => format!("criterion {id}: PASS {detail}"),
            (Ok(detail), Some(s)) => format!("criterion {id}: FAIL over the {s} s limit; {detail}"),
            (Err(why), _) => format!("criterion {id}: FAIL {why}"),
        };
        if outcome.is_err() || late.is_some() {
            failures += 1;
        }
        println!("{line} [{:.2} s]", elapsed.as_secs_f64());
    }
    println!("acceptance: {} of 13 criteria passed", 13 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}

