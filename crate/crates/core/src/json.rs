//! JSON encodings of fields, ideals, instances and certificates.
//!
//! Rationals are always `"p/q"` strings in lowest terms (`"0/1"`, `"3/1"`).
//! Integers are JSON numbers when they fit in `i64` and decimal strings
//! otherwise; the parsers accept either form. Objects come out with sorted
//! keys, so encodings are byte-stable.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::bounds::{BoundCertificate, BoundConfig, LevelMajorant, TailBound};
use crate::bounds::certified::f64_to_rational;
use crate::distortion::{MomentReport, NonCoverCertificate};
use crate::ring::{FieldSpec, Ideal, IdealFactorization, PrimeIdeal, RingElement, RingError};
use crate::system::{CongruenceClass, CoveringInstance};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

fn schema<T>(msg: impl Into<String>) -> Result<T, JsonError> {
    Err(JsonError::Schema(msg.into()))
}

fn field_of<'a>(v: &'a Value, key: &str) -> Result<&'a Value, JsonError> {
    v.get(key).ok_or_else(|| JsonError::Schema(format!("missing key \"{key}\"")))
}

// ---- scalars ----

pub fn int_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(k) => Value::from(k),
        None => Value::String(n.to_string()),
    }
}

pub fn parse_int(v: &Value) -> Result<BigInt, JsonError> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(k) => Ok(BigInt::from(k)),
            None => match n.as_u64() {
                Some(k) => Ok(BigInt::from(k)),
                None => schema(format!("not an integer: {n}")),
            },
        },
        Value::String(s) => s.trim().parse().map_err(|_| JsonError::Schema(format!("not an integer: {s:?}"))),
        other => schema(format!("expected an integer, got {other}")),
    }
}

pub fn rational_to_json(x: &BigRational) -> Value {
    Value::String(format!("{}/{}", x.numer(), x.denom()))
}

/// Parse `"p/q"`, `"p"` or an integer.
pub fn parse_rational(v: &Value) -> Result<BigRational, JsonError> {
    match v {
        Value::String(s) => parse_rational_str(s),
        _ => Ok(BigRational::from_integer(parse_int(v)?)),
    }
}

pub fn parse_rational_str(s: &str) -> Result<BigRational, JsonError> {
    let bad = || JsonError::Schema(format!("not a rational: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

// ---- ring objects ----

pub fn field_to_json(field: &FieldSpec) -> Value {
    Value::String(field.to_string())
}

/// `"rational"`, `"quadratic:d"` or `{"quadratic": d}`.
pub fn parse_field(v: &Value) -> Result<FieldSpec, JsonError> {
    match v {
        Value::String(s) => parse_field_str(s),
        Value::Object(m) if m.len() == 1 && m.contains_key("quadratic") => {
            let d = parse_int(&m["quadratic"])?;
            let d = d.to_i64().ok_or_else(|| JsonError::Schema(format!("d = {d} out of range")))?;
            Ok(FieldSpec::quadratic(d)?)
        }
        other => schema(format!("unknown field {other}")),
    }
}

pub fn parse_field_str(s: &str) -> Result<FieldSpec, JsonError> {
    let s = s.trim();
    if s == "rational" || s == "Q" {
        return Ok(FieldSpec::rational());
    }
    if let Some(d) = s.strip_prefix("quadratic:") {
        let d: i64 = d.trim().parse().map_err(|_| JsonError::Schema(format!("bad d in {s:?}")))?;
        return Ok(FieldSpec::quadratic(d)?);
    }
    schema(format!("unknown field {s:?} (expected rational or quadratic:d)"))
}

pub fn element_to_json(field: &FieldSpec, x: &RingElement) -> Value {
    if field.is_rational() {
        int_to_json(&x.a)
    } else {
        json!([int_to_json(&x.a), int_to_json(&x.b)])
    }
}

/// An integer, or `[a, b]` for `a + b·ω`.
pub fn parse_element(field: &FieldSpec, v: &Value) -> Result<RingElement, JsonError> {
    let x = match v {
        Value::Array(ab) if ab.len() == 2 => RingElement::new(parse_int(&ab[0])?, parse_int(&ab[1])?),
        Value::Array(_) => return schema("elements are [a, b]"),
        _ => RingElement::int(parse_int(v)?),
    };
    if field.is_rational() && !x.b.is_zero() {
        return schema("rational-field elements have b = 0");
    }
    Ok(x)
}

pub fn ideal_to_json(ideal: &Ideal) -> Value {
    json!({ "hnf": [int_to_json(ideal.u()), int_to_json(ideal.v()), int_to_json(ideal.w())] })
}

/// `{"hnf": [u, v, w]}`, `{"gens": [x, ...]}`, `{"principal": x}` or a bare
/// integer `n` meaning `(n)`.
pub fn parse_ideal(field: &FieldSpec, v: &Value) -> Result<Ideal, JsonError> {
    match v {
        Value::Object(m) => {
            if let Some(h) = m.get("hnf") {
                let Some(t) = h.as_array().filter(|t| t.len() == 3) else {
                    return schema("hnf must be [u, v, w]");
                };
                Ok(field.ideal_from_hnf(parse_int(&t[0])?, parse_int(&t[1])?, parse_int(&t[2])?)?)
            } else if let Some(g) = m.get("gens") {
                let Some(g) = g.as_array() else { return schema("gens must be a list") };
                let gens = g.iter().map(|x| parse_element(field, x)).collect::<Result<Vec<_>, _>>()?;
                Ok(field.ideal_from_generators(&gens)?)
            } else if let Some(x) = m.get("principal") {
                Ok(field.principal(&parse_element(field, x)?)?)
            } else {
                schema("ideal objects use \"hnf\", \"gens\" or \"principal\"")
            }
        }
        _ => Ok(field.ideal_of_integer(parse_int(v)?)?),
    }
}

pub fn prime_to_json(p: &PrimeIdeal) -> Value {
    json!({
        "ideal": ideal_to_json(&p.ideal),
        "norm": int_to_json(&p.norm()),
        "over": p.under,
        "splitting": p.splitting.as_str(),
    })
}

pub fn factorization_to_json(f: &IdealFactorization) -> Value {
    Value::Array(
        f.factors
            .iter()
            .map(|(p, e)| json!({ "exponent": e, "prime": prime_to_json(p) }))
            .collect(),
    )
}

// ---- instance files ----

/// `{"field": …, "classes": [{"residue": x, "modulus": I}, …]}`.
pub fn parse_instance(v: &Value) -> Result<(FieldSpec, Vec<CongruenceClass>), JsonError> {
    let field = parse_field(field_of(v, "field")?)?;
    let Some(list) = field_of(v, "classes")?.as_array() else { return schema("classes must be a list") };
    let mut classes = Vec::with_capacity(list.len());
    for c in list {
        let residue = parse_element(&field, field_of(c, "residue")?)?;
        let modulus = parse_ideal(&field, field_of(c, "modulus")?)?;
        classes.push(CongruenceClass::new(residue, modulus));
    }
    Ok((field, classes))
}

/// `{"field": …, "moduli": [I, …], "s": k}` with `s` optional.
pub fn parse_moduli(v: &Value) -> Result<(FieldSpec, Vec<Ideal>, Option<usize>), JsonError> {
    let field = parse_field(field_of(v, "field")?)?;
    let Some(list) = field_of(v, "moduli")?.as_array() else { return schema("moduli must be a list") };
    let moduli = list.iter().map(|m| parse_ideal(&field, m)).collect::<Result<Vec<_>, _>>()?;
    let s = match v.get("s") {
        None | Some(Value::Null) => None,
        Some(s) => Some(s.as_u64().and_then(|k| usize::try_from(k).ok()).ok_or_else(|| {
            JsonError::Schema("s must be a non-negative integer".into())
        })?),
    };
    Ok((field, moduli, s))
}

pub fn instance_to_json(inst: &CoveringInstance) -> Value {
    let field = inst.field();
    let classes: Vec<Value> = inst
        .classes()
        .iter()
        .map(|c| json!({ "modulus": ideal_to_json(&c.modulus), "residue": element_to_json(field, &c.residue) }))
        .collect();
    json!({ "classes": classes, "field": field_to_json(field) })
}

/// The ordered primes `𝔭_1, …, 𝔭_J` with exponents in `Q`.
pub fn prime_order_to_json(inst: &CoveringInstance) -> Value {
    Value::Array(
        inst.primes()
            .iter()
            .enumerate()
            .map(|(i, (p, e))| json!({ "exponent": e, "j": i + 1, "prime": prime_to_json(p) }))
            .collect(),
    )
}

// ---- reports ----

pub fn moment_table_to_json(inst: &CoveringInstance, reports: &[MomentReport]) -> Value {
    Value::Array(
        reports
            .iter()
            .map(|r| {
                json!({
                    "contribution": rational_to_json(&r.contribution),
                    "delta": rational_to_json(&r.delta),
                    "j": r.j,
                    "m1": rational_to_json(&r.m1),
                    "m2": rational_to_json(&r.m2),
                    "norm": int_to_json(&inst.prime(r.j).norm()),
                })
            })
            .collect(),
    )
}

pub fn noncover_to_json(inst: &CoveringInstance, cert: &NonCoverCertificate) -> Value {
    json!({
        "eta": rational_to_json(&cert.eta),
        "final_uncovered_mass": rational_to_json(&cert.final_uncovered_mass),
        "levels": moment_table_to_json(inst, &cert.reports),
        "witness": element_to_json(inst.field(), &inst.residue_at(cert.witness)),
    })
}

pub fn majorant_table_to_json(rows: &[LevelMajorant]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                let mut m = Map::new();
                m.insert("contribution".into(), rational_to_json(&r.contribution));
                m.insert("delta".into(), rational_to_json(&r.delta));
                m.insert("has_targets".into(), Value::Bool(r.has_targets));
                m.insert("j".into(), Value::from(r.j));
                m.insert("m2_major".into(), rational_to_json(&r.m2));
                m.insert("norm".into(), int_to_json(&r.norm));
                if let Some(m1) = &r.m1 {
                    m.insert("m1_major".into(), rational_to_json(&m1.best));
                }
                Value::Object(m)
            })
            .collect(),
    )
}

// ---- bound certificates ----

fn f64_json(x: f64) -> Value {
    rational_to_json(&f64_to_rational(x))
}

fn parse_f64_exact(v: &Value) -> Result<f64, JsonError> {
    let r = parse_rational(v)?;
    match r.to_f64() {
        Some(x) if x.is_finite() && f64_to_rational(x) == r => Ok(x),
        _ => schema(format!("{v} is not an exact binary64 value")),
    }
}

pub fn bound_certificate_to_json(c: &BoundCertificate) -> Value {
    let t = &c.tail;
    json!({
        "config": { "max_y_log2": c.config.max_y_log2, "y_min_log2": c.config.y_min_log2 },
        "eta1_major": rational_to_json(&c.eta1_major),
        "eta2_major": rational_to_json(&c.eta2_major),
        "field": field_to_json(&c.field),
        "prime_count": c.prime_count,
        "s": c.s,
        "sqrt_x_log2": c.sqrt_x_log2,
        "summary": c.summary(),
        "tail": {
            "beta": f64_json(t.beta),
            "c": t.c,
            "g": f64_json(t.g),
            "iota": f64_json(t.iota),
            "k0": f64_json(t.k0),
            "kappa": f64_json(t.kappa),
            "log_z_low": f64_json(t.log_z_low),
            "t": f64_json(t.t),
            "x_term": f64_json(t.x_term),
            "z_log2": t.z_log2,
        },
        "g_major": rational_to_json(&c.g_major),
        "t_major": rational_to_json(&c.t_major),
        "w_major": rational_to_json(&c.w_major),
        "x": int_to_json(&c.x),
        "y": c.y,
    })
}

fn as_u64(v: &Value, key: &str) -> Result<u64, JsonError> {
    field_of(v, key)?.as_u64().ok_or_else(|| JsonError::Schema(format!("{key} must be a non-negative integer")))
}

fn as_u32(v: &Value, key: &str) -> Result<u32, JsonError> {
    u32::try_from(as_u64(v, key)?).map_err(|_| JsonError::Schema(format!("{key} out of range")))
}

pub fn parse_bound_certificate(v: &Value) -> Result<BoundCertificate, JsonError> {
    let t = field_of(v, "tail")?;
    let cfg = field_of(v, "config")?;
    let r = |k: &str| field_of(v, k).and_then(parse_rational);
    let tf = |k: &str| field_of(t, k).and_then(parse_f64_exact);
    Ok(BoundCertificate {
        field: parse_field(field_of(v, "field")?)?,
        s: as_u64(v, "s")? as usize,
        y: as_u64(v, "y")?,
        config: BoundConfig { y_min_log2: as_u32(cfg, "y_min_log2")?, max_y_log2: as_u32(cfg, "max_y_log2")? },
        tail: TailBound {
            z_log2: as_u32(t, "z_log2")?,
            c: as_u32(t, "c")?,
            g: tf("g")?,
            log_z_low: tf("log_z_low")?,
            kappa: tf("kappa")?,
            beta: tf("beta")?,
            iota: tf("iota")?,
            x_term: tf("x_term")?,
            k0: tf("k0")?,
            t: tf("t")?,
        },
        g_major: r("g_major")?,
        t_major: r("t_major")?,
        eta2_major: r("eta2_major")?,
        w_major: r("w_major")?,
        prime_count: as_u64(v, "prime_count")?,
        sqrt_x_log2: as_u64(v, "sqrt_x_log2")?,
        x: parse_int(field_of(v, "x")?)?,
        eta1_major: r("eta1_major")?,
    })
}

/// Pretty-printed, key-sorted serialization with a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}
