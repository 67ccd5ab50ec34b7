//! Input file formats.
//!
//! Structures, weights and elements are JSON documents; sequences are CSV rows
//! `index,numerator,denominator`. Rationals are always strings `"p/q"` (or
//! `"p"`), never JSON numbers, so no value passes through floating point.

use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};
use waug_core::rational::{format_rational, parse_rational};
use waug_core::sequences::PrefixSequence;
use waug_core::structures::{Family, TableMonoid};
use waug_core::{Element, FinElement, Rational, Scalar, Structure, WeightSpec};

use crate::CliError;

/// Raw file bytes, kept for digesting.
pub struct Loaded<T> {
    pub value: T,
    pub bytes: Vec<u8>,
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<(Value, Vec<u8>), CliError> {
    let bytes = read(path)?;
    let v = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Input(format!("{}: line {} column {}: {e}", path.display(), e.line(), e.column())))?;
    Ok((v, bytes))
}

fn ctx(path: &Path, field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{}: field `{field}`: {msg}", path.display()))
}

fn rational_field(v: &Value, path: &Path, field: &str) -> Result<Rational, CliError> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| ctx(path, field, e)),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().expect("checked").into())),
        other => Err(ctx(path, field, format!("expected a \"p/q\" string, found {other}"))),
    }
}

fn usize_field(params: &Value, path: &Path, field: &str) -> Result<usize, CliError> {
    params
        .get(field)
        .and_then(Value::as_u64)
        .map(|n| n as usize)
        .ok_or_else(|| ctx(path, field, "expected a non-negative integer"))
}

fn family_from(v: &Value, path: &Path) -> Result<Family, CliError> {
    let name = v.get("family").and_then(Value::as_str).ok_or_else(|| ctx(path, "family", "missing"))?;
    let params = v.get("params").cloned().unwrap_or(Value::Object(Map::new()));
    Ok(match name {
        "Z" => Family::Integers,
        "Zplus" => Family::NonNeg,
        "Zd" => Family::Lattice { dim: usize_field(&params, path, "dim")? },
        "free" => Family::Free {
            rank: usize_field(&params, path, "rank")?,
            monoid: params.get("monoid").and_then(Value::as_bool).unwrap_or(false),
        },
        "table" => {
            let rows = params
                .get("table")
                .and_then(Value::as_array)
                .ok_or_else(|| ctx(path, "params.table", "expected an array of rows"))?;
            let rows = rows
                .iter()
                .map(|r| {
                    r.as_array()
                        .and_then(|r| r.iter().map(|x| x.as_u64().map(|x| x as usize)).collect::<Option<Vec<_>>>())
                        .ok_or_else(|| ctx(path, "params.table", "rows must be arrays of indices"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Family::Table(TableMonoid::new(rows).map_err(|e| ctx(path, "params.table", e))?)
        }
        "zero_adjoined" => {
            let base = params.get("base").ok_or_else(|| ctx(path, "params.base", "missing"))?;
            Family::ZeroAdjoined(Box::new(family_from(base, path)?))
        }
        other => return Err(ctx(path, "family", format!("unknown family `{other}`"))),
    })
}

fn default_generators(f: &Family) -> Vec<Element> {
    match f {
        Family::Integers => Structure::integers().generators().to_vec(),
        Family::NonNeg => Structure::nonneg().generators().to_vec(),
        Family::Lattice { dim } => Structure::lattice(*dim).generators().to_vec(),
        Family::Free { rank, monoid: false } => Structure::free_group(*rank).generators().to_vec(),
        Family::Free { rank, monoid: true } => Structure::free_monoid(*rank).generators().to_vec(),
        Family::Table(t) => (1..t.size()).map(Element::Table).collect(),
        Family::ZeroAdjoined(b) => {
            let mut g = default_generators(b);
            g.push(Element::Theta);
            g
        }
    }
}

fn free_reduce(word: Vec<i32>) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(word.len());
    for l in word {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Decodes an element in the encoding of `family`.
pub fn decode_element(family: &Family, v: &Value) -> Result<Element, String> {
    let int_of = |x: &Value| x.as_i64().ok_or_else(|| format!("expected an integer, found {x}"));
    match family {
        Family::Integers | Family::NonNeg => Ok(Element::Int(int_of(v)?)),
        Family::Lattice { .. } => {
            let a = v.as_array().ok_or_else(|| format!("expected an integer array, found {v}"))?;
            Ok(Element::Vec(a.iter().map(int_of).collect::<Result<_, _>>()?))
        }
        Family::Free { monoid, .. } => {
            let a = v.as_array().ok_or_else(|| format!("expected a generator-word array, found {v}"))?;
            let w = a
                .iter()
                .map(|x| int_of(x).and_then(|l| i32::try_from(l).map_err(|_| format!("letter {l} out of range"))))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Element::Word(if *monoid { w } else { free_reduce(w) }))
        }
        Family::Table(_) => {
            let i = v.as_u64().ok_or_else(|| format!("expected a table index, found {v}"))?;
            Ok(Element::Table(i as usize))
        }
        Family::ZeroAdjoined(b) => match v {
            Value::String(s) if s == "theta" => Ok(Element::Theta),
            _ => decode_element(b, v),
        },
    }
}

pub fn encode_element(u: &Element) -> Value {
    match u {
        Element::Int(n) => json!(n),
        Element::Vec(v) => json!(v),
        Element::Word(w) => json!(w),
        Element::Table(i) => json!(i),
        Element::Theta => json!("theta"),
    }
}

pub fn load_structure(path: &Path) -> Result<Loaded<Structure>, CliError> {
    let (v, bytes) = read_json(path)?;
    let family = family_from(&v, path)?;
    let generators = match v.get("generators") {
        None => default_generators(&family),
        Some(Value::Array(a)) => a
            .iter()
            .enumerate()
            .map(|(i, g)| decode_element(&family, g).map_err(|e| ctx(path, &format!("generators[{i}]"), e)))
            .collect::<Result<_, _>>()?,
        Some(other) => return Err(ctx(path, "generators", format!("expected an array, found {other}"))),
    };
    let value = Structure::new(family, generators).map_err(|e| ctx(path, "generators", e))?;
    Ok(Loaded { value, bytes })
}

pub fn load_weight(path: &Path, s: &Structure) -> Result<Loaded<WeightSpec>, CliError> {
    let (v, bytes) = read_json(path)?;
    let name = v.get("family").and_then(Value::as_str).ok_or_else(|| ctx(path, "family", "missing"))?;
    let params = v.get("params").cloned().unwrap_or(Value::Object(Map::new()));
    let rat = |field: &str| {
        params
            .get(field)
            .ok_or_else(|| ctx(path, &format!("params.{field}"), "missing"))
            .and_then(|x| rational_field(x, path, &format!("params.{field}")))
    };
    let value = match name {
        "trivial" => WeightSpec::Trivial,
        "radial_poly" => WeightSpec::RadialPoly { alpha: rat("alpha")? },
        "radial_exp" => WeightSpec::RadialExp {
            c: rat("c")?,
            beta: match params.get("beta") {
                Some(b) => rational_field(b, path, "params.beta")?,
                None => Rational::from_integer(1.into()),
            },
        },
        "lemma74" => WeightSpec::Lemma74 { rho: rat("rho")?, blocks: usize_field(&params, path, "blocks")? },
        "lemma76" => WeightSpec::Lemma76 { rho: rat("rho")?, depth: usize_field(&params, path, "depth")? },
        "table" => {
            let mut values = Vec::new();
            if let Some(a) = params.get("values").and_then(Value::as_array) {
                for (i, entry) in a.iter().enumerate() {
                    let field = format!("params.values[{i}]");
                    let elem = entry.get("elem").ok_or_else(|| ctx(path, &field, "missing `elem`"))?;
                    let u = decode_element(s.family(), elem).map_err(|e| ctx(path, &field, e))?;
                    let val = entry.get("value").ok_or_else(|| ctx(path, &field, "missing `value`"))?;
                    values.push((u, rational_field(val, path, &field)?));
                }
            }
            let radial = match params.get("radial").and_then(Value::as_array) {
                Some(a) => a
                    .iter()
                    .enumerate()
                    .map(|(i, x)| rational_field(x, path, &format!("params.radial[{i}]")))
                    .collect::<Result<_, _>>()?,
                None => Vec::new(),
            };
            WeightSpec::ExplicitTable { values, radial }
        }
        other => return Err(ctx(path, "family", format!("unknown weight family `{other}`"))),
    };
    Ok(Loaded { value, bytes })
}

pub fn load_element(path: &Path, s: &Structure) -> Result<Loaded<FinElement>, CliError> {
    let (v, bytes) = read_json(path)?;
    let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| ctx(path, "terms", "expected an array"))?;
    let mut f = FinElement::zero();
    for (i, t) in terms.iter().enumerate() {
        let field = format!("terms[{i}]");
        let elem = t.get("elem").ok_or_else(|| ctx(path, &field, "missing `elem`"))?;
        let u = decode_element(s.family(), elem).map_err(|e| ctx(path, &field, e))?;
        s.validate(&u).map_err(|e| ctx(path, &field, e))?;
        let part = |key: &str| match t.get(key) {
            Some(x) => rational_field(x, path, &format!("{field}.{key}")),
            None => Ok(Rational::from_integer(0.into())),
        };
        f.add_term(u, &Scalar::new(part("re")?, part("im")?));
    }
    Ok(Loaded { value: f, bytes })
}

/// Rows `index,numerator,denominator` with indices `1..=N` in order; a header
/// row is allowed.
pub fn load_sequence(path: &Path) -> Result<Loaded<PrefixSequence>, CliError> {
    let bytes = read(path)?;
    let values = parse_sequence(&bytes).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let value = PrefixSequence::new(values).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(Loaded { value, bytes })
}

/// Same row format as [`load_sequence`], with zero entries allowed.
pub fn load_vector(path: &Path) -> Result<Loaded<Vec<Rational>>, CliError> {
    let bytes = read(path)?;
    let value = parse_sequence(&bytes).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(Loaded { value, bytes })
}

pub fn parse_sequence(bytes: &[u8]) -> Result<Vec<Rational>, String> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(bytes);
    let mut values = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| format!("line {}: {e}", line + 1))?;
        if line == 0 && rec.get(0).is_some_and(|c| c.parse::<i64>().is_err()) {
            continue;
        }
        if rec.len() != 3 {
            return Err(format!("line {}: expected 3 fields, found {}", line + 1, rec.len()));
        }
        let index: usize = rec[0].parse().map_err(|_| format!("line {}: bad index `{}`", line + 1, &rec[0]))?;
        if index != values.len() + 1 {
            return Err(format!("line {}: index {index} out of order, expected {}", line + 1, values.len() + 1));
        }
        let r = parse_rational(&format!("{}/{}", &rec[1], &rec[2])).map_err(|e| format!("line {}: {e}", line + 1))?;
        values.push(r);
    }
    Ok(values)
}

pub fn rat(r: &Rational) -> Value {
    Value::String(format_rational(r))
}
