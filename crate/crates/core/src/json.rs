//! JSON encodings shared by the CLI and the Python bindings.
//!
//! | object | encoding |
//! |---|---|
//! | p-adic number | `{"valuation", "unit", "precision"}` or `{"zero": true}` |
//! | Schwartz function | `{"prime", "terms": [{"ball": {"center", "radius"}, "coeff": [re, im]}]}` |
//! | base test data | Schwartz function plus `"window": [lo, hi]` or `null` |
//! | sym-square data | `{"prime", "terms": [{"r": ball, "s": ball, "coeff"}]}` |
//! | kernel | `{"type": "G" \| "T" \| "symsq", "d", "d_prime", "eta", "lambda"}` |
//! | character | `{"kind": "trivial" \| "unramified_quadratic" \| "ramified_quadratic" \| "abs_power", "s": [re, im]}` |

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::local_field::{FieldParams, MultiplicativeCharacter, PAdicNumber};
use crate::schwartz::{Ball, SchwartzFunction};
use crate::transfer::{SymSqKernel, SymSqTestData, TransferKernelG, TransferKernelT, XTestData};

fn bad(msg: impl Into<String>) -> Error {
    Error::Json(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field `{key}`")))
}

fn int(v: &Value, key: &str) -> Result<i64> {
    field(v, key)?.as_i64().ok_or_else(|| bad(format!("`{key}` must be an integer")))
}

/// Emits integral floats as JSON integers so exact results print exactly.
pub fn number(x: f64) -> Value {
    if x.fract() == 0.0 && x.abs() < 9.0e15 {
        json!(x as i64)
    } else {
        json!(x)
    }
}

pub fn complex(z: Complex64) -> Value {
    json!([number(z.re), number(z.im)])
}

pub fn complex_from(v: &Value) -> Result<Complex64> {
    match v {
        Value::Array(a) if a.len() == 2 => {
            let re = a[0].as_f64().ok_or_else(|| bad("complex parts must be numbers"))?;
            let im = a[1].as_f64().ok_or_else(|| bad("complex parts must be numbers"))?;
            Ok(Complex64::new(re, im))
        }
        Value::Number(n) => Ok(Complex64::new(n.as_f64().unwrap(), 0.0)),
        _ => Err(bad("complex numbers are [re, im]")),
    }
}

pub fn padic(x: &PAdicNumber) -> Value {
    match x.valuation() {
        None => json!({"zero": true}),
        Some(v) => json!({"valuation": v, "unit": x.unit(), "precision": x.precision()}),
    }
}

pub fn padic_from(params: FieldParams, v: &Value) -> Result<PAdicNumber> {
    if v.get("zero").and_then(Value::as_bool) == Some(true) {
        return Ok(PAdicNumber::zero(params));
    }
    let unit = field(v, "unit")?.as_u64().ok_or_else(|| bad("`unit` must be a nonnegative integer"))?;
    let precision = match v.get("precision") {
        Some(p) => p.as_u64().ok_or_else(|| bad("`precision` must be a nonnegative integer"))? as u32,
        None => params.precision(),
    };
    PAdicNumber::from_parts(params, int(v, "valuation")?, unit, precision)
}

pub fn ball(b: &Ball) -> Value {
    json!({"center": padic(b.center()), "radius": b.radius()})
}

pub fn ball_from(params: FieldParams, v: &Value) -> Result<Ball> {
    Ball::new(padic_from(params, field(v, "center")?)?, int(v, "radius")?)
}

/// Reads `"prime"` and checks it against an explicit `--prime`, if any.
pub fn params_from(v: &Value, prime: Option<u64>, precision: u32) -> Result<FieldParams> {
    let p = match (v.get("prime").and_then(Value::as_u64), prime) {
        (Some(a), Some(b)) if a != b => {
            return Err(Error::InvalidParameter(format!("input prime {a} disagrees with --prime {b}")))
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => return Err(bad("missing field `prime`")),
    };
    FieldParams::new(p, precision)
}

pub fn schwartz(f: &SchwartzFunction) -> Value {
    let terms: Vec<Value> = f.terms().iter().map(|(b, c)| json!({"ball": ball(b), "coeff": complex(*c)})).collect();
    json!({"prime": f.params().p(), "terms": terms})
}

pub fn schwartz_from(params: FieldParams, v: &Value) -> Result<SchwartzFunction> {
    let terms = field(v, "terms")?.as_array().ok_or_else(|| bad("`terms` must be an array"))?;
    let parsed = terms
        .iter()
        .map(|t| Ok((ball_from(params, field(t, "ball")?)?, complex_from(field(t, "coeff")?)?)))
        .collect::<Result<Vec<_>>>()?;
    SchwartzFunction::new(params, parsed)
}

pub fn x_data(x: &XTestData) -> Value {
    let mut out = schwartz(&x.f);
    out["window"] = match x.window {
        Some((lo, hi)) => json!([lo, hi]),
        None => Value::Null,
    };
    out
}

pub fn x_data_from(params: FieldParams, v: &Value) -> Result<XTestData> {
    let f = schwartz_from(params, v)?;
    let window = match v.get("window") {
        None | Some(Value::Null) => None,
        Some(Value::Array(w)) if w.len() == 2 => {
            let lo = w[0].as_i64().ok_or_else(|| bad("window bounds must be integers"))?;
            let hi = w[1].as_i64().ok_or_else(|| bad("window bounds must be integers"))?;
            Some((lo, hi))
        }
        _ => return Err(bad("`window` is [lo, hi] or null")),
    };
    Ok(XTestData { f, window })
}

pub fn symsq_data(d: &SymSqTestData) -> Value {
    let terms: Vec<Value> =
        d.terms.iter().map(|(r, s, c)| json!({"r": ball(r), "s": ball(s), "coeff": complex(*c)})).collect();
    json!({"prime": d.params.p(), "terms": terms})
}

pub fn symsq_data_from(params: FieldParams, v: &Value) -> Result<SymSqTestData> {
    let terms = field(v, "terms")?.as_array().ok_or_else(|| bad("`terms` must be an array"))?;
    let terms = terms
        .iter()
        .map(|t| {
            Ok((
                ball_from(params, field(t, "r")?)?,
                ball_from(params, field(t, "s")?)?,
                complex_from(field(t, "coeff")?)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SymSqTestData { params, terms })
}

pub fn character_from(params: FieldParams, v: &Value) -> Result<MultiplicativeCharacter> {
    let kind = field(v, "kind")?.as_str().ok_or_else(|| bad("`kind` must be a string"))?;
    Ok(match kind {
        "trivial" => MultiplicativeCharacter::trivial(params),
        "unramified_quadratic" => MultiplicativeCharacter::unramified_quadratic(params),
        "ramified_quadratic" => MultiplicativeCharacter::ramified_quadratic(params),
        "abs_power" => MultiplicativeCharacter::abs_power(params, complex_from(field(v, "s")?)?),
        other => return Err(bad(format!("unknown character kind `{other}`"))),
    })
}

/// A transfer kernel read from JSON.
#[derive(Debug, Clone, PartialEq)]
pub enum Kernel {
    G(TransferKernelG),
    T(TransferKernelT),
    SymSq(SymSqKernel),
}

pub fn kernel_from(params: FieldParams, v: &Value) -> Result<Kernel> {
    let kind = field(v, "type")?.as_str().ok_or_else(|| bad("kernel `type` must be a string"))?;
    let d = || -> Result<u32> { Ok(int(v, "d")? as u32) };
    Ok(match kind {
        "G" => Kernel::G(TransferKernelG::new(d()?)?),
        "T" => Kernel::T(TransferKernelT::new(d()?, int(v, "d_prime")? as u32)?),
        "symsq" => {
            let eta = match v.get("eta") {
                Some(e) => character_from(params, e)?,
                None => MultiplicativeCharacter::unramified_quadratic(params),
            };
            let lambda = v.get("lambda").map(complex_from).transpose()?;
            Kernel::SymSq(SymSqKernel::new(eta, lambda)?)
        }
        other => return Err(bad(format!("unknown kernel type `{other}`"))),
    })
}

pub fn kernel(k: &Kernel) -> Value {
    match k {
        Kernel::G(g) => json!({"type": "G", "d": g.d()}),
        Kernel::T(t) => json!({"type": "T", "d": t.d(), "d_prime": t.d_prime()}),
        Kernel::SymSq(s) => {
            let mut m = Map::new();
            m.insert("type".into(), json!("symsq"));
            m.insert("eta_level".into(), json!(s.eta.level()));
            m.insert("eta_uniformizer".into(), complex(s.eta.uniformizer_value()));
            if let Some(l) = s.lambda {
                m.insert("lambda".into(), complex(l));
            }
            Value::Object(m)
        }
    }
}
