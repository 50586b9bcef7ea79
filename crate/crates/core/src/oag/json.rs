//! JSON forms of elements and automorphisms. Integers are written as
//! decimal strings; plain JSON integers are accepted on input.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::{HalfElement, LinearHom, OagAutomorphism, OagDescriptor, OagElement};
use crate::error::{Error, Result};

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn parse_bigint(v: &Value) -> Result<BigInt> {
    match v {
        Value::String(s) => {
            BigInt::from_str(s.trim()).map_err(|_| perr(format!("bad integer `{s}`")))
        }
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| perr(format!("bad integer {n}"))),
        other => Err(perr(format!("expected integer, got {other}"))),
    }
}

pub fn parse_rational_str(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| perr(format!("bad rational `{s}`")))?;
    let d = BigInt::from_str(d).map_err(|_| perr(format!("bad rational `{s}`")))?;
    if d.is_zero() {
        return Err(perr(format!("zero denominator in `{s}`")));
    }
    Ok(BigRational::new(n, d))
}

pub fn parse_rational(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational_str(s),
        Value::Number(_) => Ok(BigRational::from_integer(parse_bigint(v)?)),
        other => Err(perr(format!("expected rational, got {other}"))),
    }
}

fn int_row(row: &[BigInt]) -> Value {
    Value::Array(row.iter().map(|x| Value::String(x.to_string())).collect())
}

/// Payload of an element (without its descriptor).
pub fn element_to_value(x: &OagElement) -> Value {
    match x {
        OagElement::IntLex(v) => int_row(v),
        OagElement::Localized { value, .. } => Value::String(value.to_string()),
        OagElement::Laurent(m) => {
            let mut obj = Map::new();
            for (d, c) in m {
                obj.insert(d.to_string(), Value::String(c.to_string()));
            }
            Value::Object(obj)
        }
        OagElement::LexPair(p) => json!({
            "left": element_to_value(&p.0),
            "right": element_to_value(&p.1),
        }),
    }
}

/// Parse a payload against a descriptor, enforcing canonical membership.
pub fn element_from_value(desc: &OagDescriptor, v: &Value) -> Result<OagElement> {
    match desc {
        OagDescriptor::IntLex { rank } => {
            let arr = v
                .as_array()
                .ok_or_else(|| perr("int_lex payload must be an array"))?;
            if arr.len() != *rank {
                return Err(perr(format!(
                    "expected {rank} coordinates, got {}",
                    arr.len()
                )));
            }
            Ok(OagElement::IntLex(
                arr.iter().map(parse_bigint).collect::<Result<_>>()?,
            ))
        }
        OagDescriptor::Localized { base } => OagElement::localized_value(*base, parse_rational(v)?),
        OagDescriptor::Laurent => {
            let obj = v
                .as_object()
                .ok_or_else(|| perr("laurent payload must be an object"))?;
            let mut m = BTreeMap::new();
            for (k, c) in obj {
                let d: i64 = k
                    .trim()
                    .parse()
                    .map_err(|_| perr(format!("bad degree `{k}`")))?;
                let c = parse_bigint(c)?;
                if !c.is_zero() {
                    m.insert(d, c);
                }
            }
            Ok(OagElement::Laurent(m))
        }
        OagDescriptor::LexPair { left, right } => {
            let obj = v
                .as_object()
                .ok_or_else(|| perr("lex_pair payload must be an object"))?;
            let l = obj
                .get("left")
                .ok_or_else(|| perr("lex_pair payload missing `left`"))?;
            let r = obj
                .get("right")
                .ok_or_else(|| perr("lex_pair payload missing `right`"))?;
            Ok(OagElement::pair(
                element_from_value(left, l)?,
                element_from_value(right, r)?,
            ))
        }
    }
}

/// An element together with its descriptor.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementJson {
    pub descriptor: OagDescriptor,
    pub value: Value,
}

pub fn element_to_json(x: &OagElement) -> String {
    serde_json::to_string(&ElementJson {
        descriptor: x.descriptor(),
        value: element_to_value(x),
    })
    .expect("element serializes")
}

pub fn element_from_json(s: &str) -> Result<OagElement> {
    let e: ElementJson = serde_json::from_str(s)?;
    e.descriptor.validate()?;
    element_from_value(&e.descriptor, &e.value)
}

pub fn half_to_value(h: &HalfElement) -> Value {
    json!({ "value": element_to_value(&h.numerator()), "halved": h.is_halved() })
}

pub fn half_from_value(desc: &OagDescriptor, v: &Value) -> Result<HalfElement> {
    let obj = v
        .as_object()
        .ok_or_else(|| perr("half element must be an object"))?;
    let num = element_from_value(
        desc,
        obj.get("value").ok_or_else(|| perr("missing `value`"))?,
    )?;
    let halved = obj.get("halved").and_then(Value::as_bool).unwrap_or(false);
    let h = if halved {
        HalfElement::half_of(num)
    } else {
        HalfElement::from_element(&num)
    };
    if h.is_halved() != halved {
        return Err(perr("half element is not in canonical form"));
    }
    Ok(h)
}

/// Wire form of an automorphism (the descriptor travels separately).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AutWire {
    Unipotent(Vec<Vec<Value>>),
    Scale(Value),
    Shift(i64),
    Triangular {
        left: Box<AutWire>,
        right: Box<AutWire>,
        hom: HomWire,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum HomWire {
    Zero,
    IntMatrix(Vec<Vec<Value>>),
    Scalar(Value),
}

fn int_matrix_to_wire(m: &[Vec<BigInt>]) -> Vec<Vec<Value>> {
    m.iter()
        .map(|r| r.iter().map(|x| Value::String(x.to_string())).collect())
        .collect()
}

fn int_matrix_from_wire(m: &[Vec<Value>]) -> Result<Vec<Vec<BigInt>>> {
    m.iter()
        .map(|r| r.iter().map(parse_bigint).collect::<Result<Vec<_>>>())
        .collect()
}

pub fn aut_to_wire(a: &OagAutomorphism) -> AutWire {
    match a {
        OagAutomorphism::UnipotentInt(m) => AutWire::Unipotent(int_matrix_to_wire(m)),
        OagAutomorphism::PositiveScale { factor, .. } => {
            AutWire::Scale(Value::String(factor.to_string()))
        }
        OagAutomorphism::MonomialShift(k) => AutWire::Shift(*k),
        OagAutomorphism::Triangular(t) => AutWire::Triangular {
            left: Box::new(aut_to_wire(&t.left)),
            right: Box::new(aut_to_wire(&t.right)),
            hom: match &t.hom {
                LinearHom::Zero => HomWire::Zero,
                LinearHom::IntMatrix(m) => HomWire::IntMatrix(int_matrix_to_wire(m)),
                LinearHom::Scalar(q) => HomWire::Scalar(Value::String(q.to_string())),
            },
        },
    }
}

pub fn aut_from_wire(w: &AutWire, desc: &OagDescriptor) -> Result<OagAutomorphism> {
    let wrong = || {
        perr(format!(
            "automorphism form does not match descriptor {desc}"
        ))
    };
    match (w, desc) {
        (AutWire::Unipotent(m), OagDescriptor::IntLex { rank }) => {
            let m = int_matrix_from_wire(m)?;
            if m.len() != *rank {
                return Err(wrong());
            }
            OagAutomorphism::unipotent(m)
        }
        (AutWire::Scale(q), OagDescriptor::Localized { base }) => {
            OagAutomorphism::scale(*base, parse_rational(q)?)
        }
        (AutWire::Shift(k), OagDescriptor::Laurent) => Ok(OagAutomorphism::shift(*k)),
        (
            AutWire::Triangular { left, right, hom },
            OagDescriptor::LexPair {
                left: dl,
                right: dr,
            },
        ) => {
            let hom = match hom {
                HomWire::Zero => LinearHom::Zero,
                HomWire::IntMatrix(m) => LinearHom::IntMatrix(int_matrix_from_wire(m)?),
                HomWire::Scalar(q) => LinearHom::Scalar(parse_rational(q)?),
            };
            OagAutomorphism::triangular(aut_from_wire(left, dl)?, aut_from_wire(right, dr)?, hom)
        }
        _ => Err(wrong()),
    }
}

pub fn aut_to_value(a: &OagAutomorphism) -> Value {
    serde_json::to_value(aut_to_wire(a)).expect("automorphism serializes")
}

pub fn aut_from_value(desc: &OagDescriptor, v: &Value) -> Result<OagAutomorphism> {
    let w: AutWire = serde_json::from_value(v.clone())?;
    aut_from_wire(&w, desc)
}

/// An automorphism together with its descriptor.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomorphismJson {
    pub descriptor: OagDescriptor,
    pub auto: AutWire,
}

pub fn aut_to_json(a: &OagAutomorphism) -> String {
    serde_json::to_string(&AutomorphismJson {
        descriptor: a.descriptor(),
        auto: aut_to_wire(a),
    })
    .expect("automorphism serializes")
}

pub fn aut_from_json(s: &str) -> Result<OagAutomorphism> {
    let a: AutomorphismJson = serde_json::from_str(s)?;
    a.descriptor.validate()?;
    aut_from_wire(&a.auto, &a.descriptor)
}
