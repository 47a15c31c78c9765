//! JSON encodings of polytopes, fans, polynomials and polytope bases.
//!
//! Integers are JSON numbers of any size. Rationals are strings `"p/q"`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Map, Number, Value};
use tropkit_core::algebra::{monomial_name, HomogeneousPolynomial};
use tropkit_core::fan::{Cone, Fan, WeightedFan};
use tropkit_core::lattice::{Int, IntVector, Rat};
use tropkit_core::polytope::LatticePolytope;
use tropkit_core::tropical::{Coefficient, LaurentPolynomial};
use tropkit_core::{Error, Result};

/// Parses JSON text, reporting syntax errors at their byte offset.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        let offset: usize = text
            .split_inclusive('\n')
            .take(e.line().saturating_sub(1))
            .map(str::len)
            .sum::<usize>()
            + e.column().saturating_sub(1);
        Error::parse(offset, format!("invalid JSON: {e}"))
    })
}

/// Indented JSON in which arrays of scalars stay on one line.
pub fn to_pretty(v: &Value) -> String {
    let mut out = String::new();
    write_pretty(v, 0, &mut out);
    out.push('\n');
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_pretty(v: &Value, indent: usize, out: &mut String) {
    let pad = |k: usize| "  ".repeat(k);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            let inner: Vec<String> = items.iter().map(Value::to_string).collect();
            out.push('[');
            out.push_str(&inner.join(", "));
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_pretty(item, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_pretty(item, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

fn schema(msg: impl Into<String>) -> Error {
    Error::parse(0, msg)
}

pub fn int_to_json(v: &Int) -> Value {
    Value::Number(
        v.to_string()
            .parse::<Number>()
            .expect("decimal integer is a JSON number"),
    )
}

pub fn int_from_json(v: &Value) -> Result<Int> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse::<BigInt>()
            .map_err(|_| schema(format!("expected an integer, found {n}"))),
        other => Err(schema(format!("expected an integer, found {other}"))),
    }
}

pub fn rat_to_json(v: &Rat) -> Value {
    Value::String(v.to_string())
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || schema(format!("expected a rational \"p/q\", found {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(schema(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(p, q))
}

pub fn rat_from_json(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat(s),
        Value::Number(_) => Ok(Rat::from_integer(int_from_json(v)?)),
        other => Err(schema(format!("expected a rational, found {other}"))),
    }
}

pub fn vector_to_json(v: &IntVector) -> Value {
    Value::Array(v.iter().map(int_to_json).collect())
}

fn vector_from_json(v: &Value, n: usize) -> Result<IntVector> {
    let items = v
        .as_array()
        .ok_or_else(|| schema(format!("expected an integer vector, found {v}")))?;
    if items.len() != n {
        return Err(schema(format!(
            "expected a vector of length {n}, found {v}"
        )));
    }
    Ok(IntVector::new(
        items.iter().map(int_from_json).collect::<Result<_>>()?,
    ))
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| schema(format!("missing field \"{key}\"")))
}

fn dim_field(obj: &Value) -> Result<usize> {
    field(obj, "dim")?
        .as_u64()
        .and_then(|d| usize::try_from(d).ok())
        .ok_or_else(|| schema("\"dim\" must be a nonnegative integer"))
}

fn array_field<'a>(obj: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    field(obj, key)?
        .as_array()
        .ok_or_else(|| schema(format!("\"{key}\" must be a list")))
}

pub fn polytope_to_json(p: &LatticePolytope) -> Value {
    json!({
        "dim": p.ambient_dim(),
        "vertices": p.vertices().iter().map(vector_to_json).collect::<Vec<_>>(),
    })
}

pub fn polytope_from_json(v: &Value) -> Result<LatticePolytope> {
    let n = dim_field(v)?;
    let pts = array_field(v, "vertices")?
        .iter()
        .map(|p| vector_from_json(p, n))
        .collect::<Result<Vec<_>>>()?;
    LatticePolytope::convex_hull(&pts)
}

pub fn basis_from_json(v: &Value) -> Result<Vec<LatticePolytope>> {
    v.as_array()
        .ok_or_else(|| schema("a basis is a list of polytopes"))?
        .iter()
        .map(polytope_from_json)
        .collect()
}

fn cone_json(c: &Cone, weight: Option<&Rat>) -> Value {
    let mut obj = Map::new();
    obj.insert(
        "generators".into(),
        Value::Array(c.rays().iter().map(vector_to_json).collect()),
    );
    if let Some(w) = weight {
        obj.insert("weight".into(), rat_to_json(w));
    }
    Value::Object(obj)
}

/// Maximal cones of an unweighted fan.
pub fn fan_to_json(fan: &Fan) -> Value {
    json!({
        "dim": fan.ambient_dim(),
        "cones": fan.maximal_cones().iter().map(|c| cone_json(c, None)).collect::<Vec<_>>(),
    })
}

/// Top cones of nonzero weight.
pub fn weighted_fan_to_json(fan: &WeightedFan) -> Value {
    json!({
        "dim": fan.ambient_dim(),
        "cones": fan.support_cones().map(|(c, w)| cone_json(c, Some(w))).collect::<Vec<_>>(),
    })
}

/// Reads a weighted fan; a missing weight means 1. All listed cones must have
/// the same dimension, and a fan without cones is taken to be of codimension 1.
pub fn weighted_fan_from_json(v: &Value) -> Result<WeightedFan> {
    let n = dim_field(v)?;
    let mut cones = Vec::new();
    for c in array_field(v, "cones")? {
        let gens = array_field(c, "generators")?
            .iter()
            .map(|g| vector_from_json(g, n))
            .collect::<Result<Vec<_>>>()?;
        let weight = match c.get("weight") {
            Some(w) => rat_from_json(w)?,
            None => Rat::one(),
        };
        cones.push((Cone::new(n, &gens)?, weight));
    }
    let Some(d) = cones.first().map(|(c, _)| c.dim()) else {
        return Ok(WeightedFan::zero(n, n.saturating_sub(1)));
    };
    if let Some((c, _)) = cones.iter().find(|(c, _)| c.dim() != d) {
        return Err(Error::domain(format!(
            "a weighted fan lists cones of one dimension; found {c} of dimension {} next to dimension {d}",
            c.dim()
        )));
    }
    WeightedFan::from_cones(n, d, cones)
}

fn coefficient_to_json(c: &Coefficient) -> Value {
    match c {
        Coefficient::Generic => Value::String("generic".into()),
        Coefficient::Rational(r) => rat_to_json(r),
    }
}

pub fn polynomial_to_json(f: &LaurentPolynomial) -> Value {
    json!({
        "n": f.num_vars(),
        "terms": f
            .terms()
            .iter()
            .map(|(e, c)| json!({ "exp": vector_to_json(e), "coef": coefficient_to_json(c) }))
            .collect::<Vec<_>>(),
    })
}

pub fn polynomial_from_json(v: &Value) -> Result<LaurentPolynomial> {
    let n = field(v, "n")?
        .as_u64()
        .and_then(|d| usize::try_from(d).ok())
        .ok_or_else(|| schema("\"n\" must be a nonnegative integer"))?;
    let mut terms: BTreeMap<IntVector, Coefficient> = BTreeMap::new();
    for t in array_field(v, "terms")? {
        let e = vector_from_json(field(t, "exp")?, n)?;
        let c = match field(t, "coef")? {
            Value::String(s) if s == "generic" => Coefficient::Generic,
            other => Coefficient::Rational(rat_from_json(other)?),
        };
        let merged = match terms.remove(&e) {
            Some(prev) => prev.add(&c),
            None => c,
        };
        terms.insert(e, merged);
    }
    LaurentPolynomial::new(n, terms)
}

/// `{"x1^2": "1", "x1*x2": "2", …}`, zero coefficients omitted.
pub fn homogeneous_to_json(p: &HomogeneousPolynomial) -> Value {
    Value::Object(
        p.coefficients()
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (monomial_name(e), rat_to_json(c)))
            .collect(),
    )
}
