use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use hsol_core::finite::{center_quotient_detail, enumerate_group};
use hsol_core::heisenberg::{Dilation, HeisenbergPoint};
use hsol_core::profinite::{from_profinite, group_coherence_check, phi_embed, to_profinite, v_density_witness};
use hsol_core::ring::{embed_q, radic_abs, radic_dist, ProductElement, RAdicInt, Residue};
use hsol_core::solenoid::{
    canonical_reduce, dilated_to_standard, left_action, preimages, project_level, psi_embed, shift_map,
    standard_to_dilated,
};
use hsol_core::subriemannian::{
    ball_volume_scaling, box_quasinorm, cc_distance_between, planar_lower_bound, CcOptions,
};
use hsol_core::verify::run_verify_suite;
use hsol_core::wire::{
    dilated_to_json, group_product_from_json, group_product_to_json, parse_int, parse_rational, point_to_json,
    product_to_json, rational_json, solenoid_to_json, WireCoefficient,
};
use hsol_core::{Error, Result, Strategy};

use crate::{
    CcArgs, Command, GroupArgs, GroupOp, HeisArgs, HeisOp, Outcome, ProfiniteArgs, ProfiniteOp, RadicArgs, RadicOp,
    RingKind, SolenoidArgs, SolenoidOp, VerifyArgs, VolumeArgs,
};

pub fn name(c: &Command) -> String {
    let op = |v: &dyn std::fmt::Debug| format!("{v:?}").to_lowercase();
    match c {
        Command::Group(a) => format!("group {}", op(&a.op)),
        Command::Heis(a) => format!("heis {}", op(&a.op)),
        Command::Radic(a) => format!("radic {}", op(&a.op)),
        Command::Profinite(a) => format!("profinite {}", op(&a.op)),
        Command::Solenoid(a) => format!("solenoid {}", op(&a.op)),
        Command::Ccdist(_) => "ccdist".into(),
        Command::Volume(_) => "volume".into(),
        Command::Verify(_) => "verify".into(),
    }
}

pub fn run(c: &Command) -> Result<Outcome> {
    match c {
        Command::Group(a) => group(a),
        Command::Heis(a) => heis(a),
        Command::Radic(a) => radic(a),
        Command::Profinite(a) => profinite(a),
        Command::Solenoid(a) => solenoid(a),
        Command::Ccdist(a) => ccdist(a),
        Command::Volume(a) => volume(a),
        Command::Verify(a) => verify(a),
    }
}

fn exact(inputs: Value, result: Value, summary: String, holds: bool) -> Result<Outcome> {
    Ok(Outcome { inputs, result, summary, holds, seed: None, numerical: false })
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn need<'a, T>(v: &'a Option<T>, flag: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| usage(format!("missing --{flag}")))
}

/// Splits `x_1..x_n,y_1..y_n,t` and parses each entry.
fn parse_point<A, F>(s: &str, parse: F) -> Result<HeisenbergPoint<A>>
where
    A: hsol_core::ring::Coefficient,
    F: Fn(&str) -> Result<A>,
{
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() < 3 || parts.len().is_multiple_of(2) {
        return Err(usage(format!("a point needs 2n + 1 comma-separated coordinates, got {:?}", s)));
    }
    let n = (parts.len() - 1) / 2;
    let c = parts.iter().map(|p| parse(p)).collect::<Result<Vec<A>>>()?;
    HeisenbergPoint::new(c[..n].to_vec(), c[n..2 * n].to_vec(), c[2 * n].clone())
}

fn parse_real(s: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| usage(format!("not a real number: {s:?}")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(usage(format!("not a finite number: {s:?}")))
    }
}

/// The `d` with `r^d = k`, if any.
fn radix_power(k: u64, r: u64) -> Option<u32> {
    let mut m = 1u64;
    for d in 0..64 {
        if m == k {
            return Some(d);
        }
        m = m.checked_mul(r)?;
    }
    None
}

fn group(a: &GroupArgs) -> Result<Outcome> {
    let mut out = group_op(a)?;
    let k = out.inputs["k"].clone();
    out.result["group"] = json!({"n": a.n, "k": k});
    Ok(out)
}

fn group_op(a: &GroupArgs) -> Result<Outcome> {
    let n = a.n;
    if let (GroupOp::Center, Some(depth)) = (a.op, a.depth) {
        let k = *need(&a.k, "k")?;
        let d = center_quotient_detail(n, k, depth)?;
        let inputs = json!({"n": n, "k": k, "depth": depth});
        let holds = d.quotient_order == k;
        let summary = format!("|Z / [H, H]| for H_{n}({k}Z) is {}", d.quotient_order);
        return exact(inputs, serde_json::to_value(&d).expect("serializable"), summary, holds);
    }
    let k = match (a.k, a.r) {
        (Some(k), _) => k,
        (None, Some(r)) => r
            .checked_pow(a.depth.unwrap_or(3))
            .ok_or_else(|| usage("r^depth overflows"))?,
        (None, None) => return Err(usage("missing --k (or --r with --depth)")),
    };
    let g = enumerate_group(n, k)?;
    let inputs = json!({"n": n, "k": k, "r": a.r});
    let depth_of = |r: u64| radix_power(k, r);
    match a.op {
        GroupOp::Order => {
            let expected = (k as u128).pow(2 * n as u32 + 1);
            let holds = g.order() as u128 == expected;
            exact(inputs, json!({"order": g.order(), "expected": expected}), format!("order {}", g.order()), holds)
        }
        GroupOp::Center => {
            let z = g.center_of();
            let t_axis = z.members().iter().all(|&i| {
                let (x, y, _) = g.coords(i);
                x.iter().chain(&y).all(|&c| c == 0)
            });
            let holds = z.order() == k && t_axis;
            exact(inputs, json!({"center_order": z.order(), "t_axis": t_axis}), format!("center of order {}", z.order()), holds)
        }
        GroupOp::Commutator => {
            let c = g.commutator_subgroup();
            let equals_center = c == g.center_of();
            let summary = format!("commutator subgroup of order {}", c.order());
            exact(inputs, json!({"commutator_order": c.order(), "equals_center": equals_center}), summary, equals_center)
        }
        GroupOp::Index => {
            let r = *need(&a.r, "r")?;
            let scaled = g.subgroup_index(&g.scaled_image(r))?;
            let dilated = g.subgroup_index(&g.dilated_image(r))?;
            let (expected, holds) = match depth_of(r) {
                Some(d) if d >= 2 => {
                    let e = json!({"scaled": r.pow(2 * n as u32 + 1), "dilated": r.pow(2 * n as u32 + 2)});
                    (e, scaled == r.pow(2 * n as u32 + 1) && dilated == r.pow(2 * n as u32 + 2))
                }
                _ => (Value::Null, true),
            };
            let result = json!({"indices": {"scaled": scaled, "dilated": dilated}, "expected": expected});
            exact(inputs, result, format!("indices {scaled} (H(rZ)) and {dilated} (delta_r H)"), holds)
        }
        GroupOp::Normal => {
            let r = *need(&a.r, "r")?;
            let (scaled, dilated) = (g.scaled_image(r), g.dilated_image(r));
            let s = g.is_normal(&scaled)?;
            let d = g.is_normal(&dilated)?;
            let inside = g.is_normal_in(&scaled, &dilated)?;
            let holds = match depth_of(r) {
                Some(depth) if depth >= 2 => s && !d && inside,
                _ => true,
            };
            let result = json!({"scaled_normal": s, "dilated_normal": d, "dilated_normal_in_scaled": inside});
            exact(inputs, result, format!("H(rZ) normal: {s}, delta_r H normal: {d}, normal in H(rZ): {inside}"), holds)
        }
        GroupOp::Closure => {
            let r = *need(&a.r, "r")?;
            let closure = g.normal_closure(&g.dilated_image(r))?;
            let scaled = g.scaled_image(r);
            let equal = closure == scaled;
            let holds = depth_of(r).is_none_or(|_| equal);
            let result = json!({"order": closure.order(), "scaled_order": scaled.order(), "equals_scaled_image": equal});
            exact(inputs, result, format!("normal closure of order {}", closure.order()), holds)
        }
    }
}

fn heis_with<A, F>(a: &HeisArgs, parse: F) -> Result<Value>
where
    A: WireCoefficient,
    F: Fn(&str) -> Result<A>,
{
    let g = parse_point(&a.point, &parse)?;
    let other = || -> Result<HeisenbergPoint<A>> { parse_point(need(&a.other, "other")?, &parse) };
    let out = match a.op {
        HeisOp::Compose => g.compose(&other()?)?,
        HeisOp::Inverse => g.inverse(),
        HeisOp::Conjugate => g.conjugate(&other()?)?,
        HeisOp::Commutator => g.commutator(&other()?)?,
        HeisOp::Dilate => g.dilate(&Dilation::new(parse(need(&a.factor, "factor")?)?))?,
    };
    Ok(point_to_json(&out))
}

fn heis(a: &HeisArgs) -> Result<Outcome> {
    let result = match a.ring {
        RingKind::Integer => heis_with(a, parse_int)?,
        RingKind::Rational => heis_with(a, parse_rational)?,
        RingKind::Real => heis_with(a, parse_real)?,
        RingKind::Residue => {
            let k = parse_int(need(&a.k, "k")?)?;
            heis_with(a, |s| Residue::new(parse_int(s)?, k.clone()))?
        }
        RingKind::Radic => {
            let r = parse_int(need(&a.r, "r")?)?;
            let l = *need(&a.l, "L")?;
            heis_with(a, |s| RAdicInt::new(parse_int(s)?, r.clone(), l))?
        }
    };
    let inputs = json!({
        "point": a.point, "other": a.other, "ring": format!("{:?}", a.ring).to_lowercase(),
        "k": a.k, "r": a.r, "L": a.l, "factor": a.factor,
    });
    exact(inputs, json!({"point": result}), "done".into(), true)
}

fn radic(a: &RadicArgs) -> Result<Outcome> {
    let r = parse_int(&a.r)?;
    let num = |v: &Option<String>, flag: &str| -> Result<BigInt> { parse_int(need(v, flag)?) };
    let inputs = json!({"a": a.a, "b": a.b, "r": a.r, "L": a.l, "values": a.values});
    let (result, summary) = match a.op {
        RadicOp::Abs => {
            let v = radic_abs(&num(&a.a, "a")?, &r)?;
            (json!({"abs": rational_json(&v)}), format!("|a|_r = {v}"))
        }
        RadicOp::Dist => {
            let v = radic_dist(&num(&a.a, "a")?, &num(&a.b, "b")?, &r)?;
            (json!({"dist": rational_json(&v)}), format!("|a - b|_r = {v}"))
        }
        RadicOp::Add | RadicOp::Mul => {
            let l = *need(&a.l, "L")?;
            let x = RAdicInt::new(num(&a.a, "a")?, r.clone(), l)?;
            let y = RAdicInt::new(num(&a.b, "b")?, r.clone(), l)?;
            let z = if a.op == RadicOp::Add { x.try_add(&y)? } else { x.try_mul(&y)? };
            let result = json!({
                "digit": z.digit().to_string(),
                "modulus": z.modulus().to_string(),
                "levels": product_to_json(&z.to_product()),
            });
            (result, format!("{z}"))
        }
        RadicOp::Embed => {
            let l = *need(&a.l, "L")?;
            let p = embed_q(&num(&a.a, "a")?, &r, l)?;
            (json!({"levels": product_to_json(&p), "coherent": p.is_coherent()}), "embedded".into())
        }
        RadicOp::Coherent => {
            let values = need(&a.values, "values")?
                .split(',')
                .map(parse_int)
                .collect::<Result<Vec<_>>>()?;
            let p = ProductElement::from_values(r.clone(), &values)?;
            let c = p.is_coherent();
            (json!({"levels": product_to_json(&p), "coherent": c}), format!("coherent: {c}"))
        }
    };
    exact(inputs, result, summary, true)
}

fn profinite(a: &ProfiniteArgs) -> Result<Outcome> {
    let inputs = json!({"point": a.point, "input": a.input, "r": a.r, "L": a.l});
    let read_input = || -> Result<_> {
        let text = need(&a.input, "input")?;
        let v: Value = serde_json::from_str(text).map_err(|e| usage(format!("--input is not JSON: {e}")))?;
        group_product_from_json(&v)
    };
    match a.op {
        ProfiniteOp::Embed => {
            let g = parse_point(need(&a.point, "point")?, parse_int)?;
            let r = parse_int(need(&a.r, "r")?)?;
            let w = phi_embed(&g, r, *need(&a.l, "L")?)?;
            let c = group_coherence_check(&w);
            exact(inputs, json!({"element": group_product_to_json(&w), "coherent": c}), format!("coherent: {c}"), c)
        }
        ProfiniteOp::Check => {
            let c = group_coherence_check(&read_input()?);
            exact(inputs, json!({"coherent": c}), format!("coherent: {c}"), true)
        }
        ProfiniteOp::Convert => {
            let w = read_input()?;
            let p = to_profinite(&w)?;
            let back = from_profinite(&p)? == w;
            let witness = v_density_witness(&w)?;
            let result = json!({"point": point_to_json(&p), "witness": point_to_json(&witness), "round_trip": back});
            exact(inputs, result, format!("round trip: {back}"), back)
        }
    }
}

fn solenoid(a: &SolenoidArgs) -> Result<Outcome> {
    let r = parse_int(&a.r)?;
    let g = match &a.point {
        Some(s) => parse_point(s, parse_rational)?,
        None => {
            if a.n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            HeisenbergPoint::identity(a.n, &BigRational::from_integer(BigInt::from(0)))
        }
    };
    let inputs = json!({"n": g.n(), "r": a.r, "L": a.l, "point": a.point, "by": a.by, "level": a.level});
    let p = canonical_reduce(&g, r.clone(), a.l)?;
    let base = solenoid_to_json(&p);
    match a.op {
        SolenoidOp::Reduce => exact(inputs, json!({"point": base}), "reduced".into(), true),
        SolenoidOp::Project => {
            let q = project_level(&p, *need(&a.level, "level")?)?;
            exact(inputs, json!({"point": base, "projected": solenoid_to_json(&q)}), "projected".into(), true)
        }
        SolenoidOp::Act => {
            let h = parse_point(need(&a.by, "by")?, parse_rational)?;
            let q = left_action(&h, &p)?;
            exact(inputs, json!({"point": base, "acted": solenoid_to_json(&q)}), "acted".into(), true)
        }
        SolenoidOp::Shift => {
            let q = shift_map(&p)?;
            exact(inputs, json!({"point": base, "shifted": solenoid_to_json(&q)}), "shifted".into(), true)
        }
        SolenoidOp::Preimages => {
            let pre = preimages(&p)?;
            let rr = u64::try_from(&r).map_err(|_| usage("radix too large"))?;
            let expected = (rr as u128).pow(2 * g.n() as u32 + 2);
            let holds = pre.len() as u128 == expected;
            let result = json!({
                "point": base,
                "count": pre.len(),
                "expected": expected,
                "preimages": pre.iter().map(solenoid_to_json).collect::<Vec<_>>(),
            });
            exact(inputs, result, format!("{} preimages", pre.len()), holds)
        }
        SolenoidOp::Identify => {
            let u = psi_embed(&g, r.clone(), a.l)?;
            let standard = dilated_to_standard(&u, a.l)?;
            let deep = canonical_reduce(&g, r, 2 * a.l)?;
            let consistent = standard == p && standard_to_dilated(&deep, a.l)? == u;
            let result = json!({
                "dilated": dilated_to_json(&u),
                "standard": solenoid_to_json(&standard),
                "standard_at_double_depth": solenoid_to_json(&deep),
                "consistent": consistent,
            });
            exact(inputs, result, format!("consistent: {consistent}"), consistent)
        }
    }
}

fn ccdist(a: &CcArgs) -> Result<Outcome> {
    let p = parse_point(&a.point, parse_real)?;
    let from = match &a.from {
        Some(s) => parse_point(s, parse_real)?,
        None => HeisenbergPoint::identity(p.n(), &0.0),
    };
    let opts = CcOptions { m: a.m, restarts: a.restarts, seed: a.seed, strategy: Strategy::default() };
    let est = cc_distance_between(&from, &p, &opts)?;
    let target = p.compose(&from.inverse())?;
    let result = json!({
        "distance": est.distance,
        "endpoint_error": est.endpoint_error,
        "tolerance": est.tolerance,
        "best_restart": est.best_restart,
        "feasible_restarts": est.feasible_restarts,
        "planar_lower_bound": planar_lower_bound(&target),
        "quasinorm": box_quasinorm(&target),
    });
    let inputs = json!({"point": a.point, "from": a.from, "m": a.m, "restarts": a.restarts, "seed": a.seed});
    let summary = format!("distance estimate {:.6}", est.distance);
    Ok(Outcome { inputs, result, summary, holds: true, seed: Some(a.seed), numerical: true })
}

fn volume(a: &VolumeArgs) -> Result<Outcome> {
    let e = ball_volume_scaling(a.n, a.rho, a.samples, a.seed, Strategy::default())?;
    let holds = (e.exponent - e.expected_exponent as f64).abs() <= a.tolerance;
    let inputs = json!({"n": a.n, "rho": a.rho, "samples": a.samples, "seed": a.seed, "tolerance": a.tolerance});
    let summary = format!("exponent {:.4} (expected {})", e.exponent, e.expected_exponent);
    let result = serde_json::to_value(&e).expect("serializable");
    Ok(Outcome { inputs, result, summary, holds, seed: Some(a.seed), numerical: true })
}

fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let report = run_verify_suite(&a.scope, a.seed)?;
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    let summary = format!("{} checks, {} failed", report.checks.len(), failed);
    let holds = report.passed;
    let inputs = json!({"scope": a.scope, "seed": a.seed});
    let result = serde_json::to_value(&report).expect("serializable");
    Ok(Outcome { inputs, result, summary, holds, seed: Some(a.seed), numerical: true })
}
