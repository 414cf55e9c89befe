//! JSON encoding shared by the command line and reports.
//!
//! Exact numbers travel as decimal strings (`"12"`, `"-7/3"`) so no
//! precision is lost; reals travel as JSON numbers. A point is
//! `{"n", "ring": {"kind", ...}, "x": [...], "y": [...], "t"}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::heisenberg::HeisenbergPoint;
use crate::profinite::GroupProductElement;
use crate::ring::{ProductElement, RAdicInt, Residue};
use crate::solenoid::{canonical_reduce, dilated_reduce, CircleSolenoidPoint, DilatedSolenoidPoint, SolenoidPoint};

pub fn parse_int(s: &str) -> Result<BigInt> {
    s.trim().parse().map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
}

/// Accepts `a`, `a/b` and finite decimals such as `-2.75`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let den = parse_int(den).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(parse_int(num).map_err(|_| bad())?, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole = if whole.is_empty() || whole == "-" { BigInt::zero() } else { parse_int(whole).map_err(|_| bad())? };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac = BigRational::new(parse_int(frac).map_err(|_| bad())?, scale);
        let whole = BigRational::from_integer(whole);
        return Ok(if negative { whole - frac } else { whole + frac });
    }
    Ok(BigRational::from_integer(parse_int(s).map_err(|_| bad())?))
}

fn str_field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

fn as_text(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(Error::Parse(format!("expected a number or string, got {v}"))),
    }
}

fn int_field(v: &Value, key: &str) -> Result<BigInt> {
    parse_int(&as_text(str_field(v, key)?)?)
}

fn u32_field(v: &Value, key: &str) -> Result<u32> {
    let text = as_text(str_field(v, key)?)?;
    text.parse().map_err(|_| Error::Parse(format!("field {key:?} must be a small non-negative integer")))
}

/// Coefficient types with a JSON form.
pub trait WireCoefficient: crate::ring::Coefficient {
    fn ring_json(&self) -> Value;
    fn coord_json(&self) -> Value;
    fn coord_from_json(ring: &Value, v: &Value) -> Result<Self>;
}

impl WireCoefficient for BigInt {
    fn ring_json(&self) -> Value {
        json!({"kind": "integer"})
    }
    fn coord_json(&self) -> Value {
        Value::String(self.to_string())
    }
    fn coord_from_json(_ring: &Value, v: &Value) -> Result<Self> {
        parse_int(&as_text(v)?)
    }
}

impl WireCoefficient for BigRational {
    fn ring_json(&self) -> Value {
        json!({"kind": "rational"})
    }
    fn coord_json(&self) -> Value {
        Value::String(self.to_string())
    }
    fn coord_from_json(_ring: &Value, v: &Value) -> Result<Self> {
        parse_rational(&as_text(v)?)
    }
}

impl WireCoefficient for Residue {
    fn ring_json(&self) -> Value {
        json!({"kind": "residue", "modulus": self.modulus().to_string()})
    }
    fn coord_json(&self) -> Value {
        Value::String(self.value().to_string())
    }
    fn coord_from_json(ring: &Value, v: &Value) -> Result<Self> {
        Residue::new(parse_int(&as_text(v)?)?, int_field(ring, "modulus")?)
    }
}

impl WireCoefficient for RAdicInt {
    fn ring_json(&self) -> Value {
        json!({"kind": "radic", "radix": self.radix().to_string(), "precision": self.precision()})
    }
    fn coord_json(&self) -> Value {
        Value::String(self.digit().to_string())
    }
    fn coord_from_json(ring: &Value, v: &Value) -> Result<Self> {
        RAdicInt::new(parse_int(&as_text(v)?)?, int_field(ring, "radix")?, u32_field(ring, "precision")?)
    }
}

impl WireCoefficient for f64 {
    fn ring_json(&self) -> Value {
        json!({"kind": "real"})
    }
    fn coord_json(&self) -> Value {
        json!(self)
    }
    fn coord_from_json(_ring: &Value, v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(format!("bad real {n}"))),
            Value::String(s) => s.trim().parse().map_err(|_| Error::Parse(format!("bad real {s:?}"))),
            _ => Err(Error::Parse(format!("expected a real, got {v}"))),
        }
    }
}

pub fn point_to_json<A: WireCoefficient>(p: &HeisenbergPoint<A>) -> Value {
    json!({
        "n": p.n(),
        "ring": p.t().ring_json(),
        "x": p.x().iter().map(A::coord_json).collect::<Vec<_>>(),
        "y": p.y().iter().map(A::coord_json).collect::<Vec<_>>(),
        "t": p.t().coord_json(),
    })
}

pub fn point_from_json<A: WireCoefficient>(v: &Value) -> Result<HeisenbergPoint<A>> {
    let ring = v.get("ring").cloned().unwrap_or(Value::Null);
    let list = |key: &str| -> Result<Vec<A>> {
        str_field(v, key)?
            .as_array()
            .ok_or_else(|| Error::Parse(format!("field {key:?} must be an array")))?
            .iter()
            .map(|c| A::coord_from_json(&ring, c))
            .collect()
    };
    let p = HeisenbergPoint::new(list("x")?, list("y")?, A::coord_from_json(&ring, str_field(v, "t")?)?)?;
    if let Some(n) = v.get("n") {
        if n.as_u64() != Some(p.n() as u64) {
            return Err(Error::Parse(format!("declared n = {n} but coordinates have length {}", p.n())));
        }
    }
    Ok(p)
}

pub fn product_to_json(p: &ProductElement) -> Value {
    Value::Array(
        p.residues()
            .iter()
            .map(|r| json!({"value": r.value().to_string(), "modulus": r.modulus().to_string()}))
            .collect(),
    )
}

/// Reads an array of `{"value", "modulus"}`; the radix is `modulus` of
/// the first entry.
pub fn product_from_json(v: &Value) -> Result<ProductElement> {
    let items = v.as_array().ok_or_else(|| Error::Parse("expected an array of residues".into()))?;
    let residues = items
        .iter()
        .map(|item| Residue::new(int_field(item, "value")?, int_field(item, "modulus")?))
        .collect::<Result<Vec<_>>>()?;
    let radix = residues.first().map(|r| r.modulus().clone()).ok_or_else(|| Error::Parse("empty product".into()))?;
    ProductElement::new(radix, residues)
}

pub fn group_product_to_json(w: &GroupProductElement) -> Value {
    json!({
        "r": w.radix().to_string(),
        "L": w.depth(),
        "levels": w.levels().iter().map(point_to_json).collect::<Vec<_>>(),
    })
}

pub fn group_product_from_json(v: &Value) -> Result<GroupProductElement> {
    let r = int_field(v, "r")?;
    let levels = str_field(v, "levels")?
        .as_array()
        .ok_or_else(|| Error::Parse("levels must be an array".into()))?
        .iter()
        .map(point_from_json::<Residue>)
        .collect::<Result<Vec<_>>>()?;
    if let Some(depth) = v.get("L") {
        if depth.as_u64() != Some(levels.len() as u64) {
            return Err(Error::Parse(format!("declared L = {depth} but {} levels given", levels.len())));
        }
    }
    GroupProductElement::new(r, levels)
}

pub fn solenoid_to_json(p: &SolenoidPoint) -> Value {
    json!({"r": p.radix().to_string(), "L": p.depth(), "n": p.n(), "rep": point_to_json(p.rep())})
}

/// Reads a solenoid point, re-reducing the representative.
pub fn solenoid_from_json(v: &Value) -> Result<SolenoidPoint> {
    let rep = point_from_json::<BigRational>(str_field(v, "rep")?)?;
    canonical_reduce(&rep, int_field(v, "r")?, u32_field(v, "L")?)
}

pub fn dilated_to_json(p: &DilatedSolenoidPoint) -> Value {
    json!({
        "r": p.radix().to_string(),
        "L": p.depth(),
        "n": p.n(),
        "lattice": "dilated",
        "rep": point_to_json(p.rep()),
    })
}

pub fn dilated_from_json(v: &Value) -> Result<DilatedSolenoidPoint> {
    let rep = point_from_json::<BigRational>(str_field(v, "rep")?)?;
    dilated_reduce(&rep, int_field(v, "r")?, u32_field(v, "L")?)
}

pub fn circle_to_json(p: &CircleSolenoidPoint) -> Value {
    json!({"r": p.radix().to_string(), "L": p.depth(), "rep": p.rep().to_string()})
}

/// Rationals print as `"p/q"`, integers as `"p"`.
pub fn rational_json(q: &BigRational) -> Value {
    Value::String(q.to_string())
}

pub fn rationals_json(v: &[BigRational]) -> Value {
    Value::Array(v.iter().map(rational_json).collect())
}

/// Builds `{"key": value, ...}` preserving insertion order of `pairs`.
pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}
