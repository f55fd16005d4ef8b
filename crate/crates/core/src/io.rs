//! JSON and text formats for matrices, elements and functionals.
//!
//! A ring element is written as its digit list, least significant first,
//! each digit a residue-field element packed base `p`. On input an element
//! may also be given as an integer (its image in `R`) or as a string of
//! digits separated by commas or spaces.

use serde_json::{json, Value};

use crate::arith::{RElem, RingCtx, TElem};
use crate::duality::DualElem;
use crate::error::{Error, Result};
use crate::fingen::{InvariantFactors, ModElem, PresMatrix};
use crate::flood::ZDualFunctional;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_digit_string(s: &str) -> Result<Vec<u32>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u32>()
                .map_err(|_| parse_err(format!("bad digit `{t}` in \"{s}\"")))
        })
        .collect()
}

fn digits_from_value(v: &Value) -> Result<Option<Vec<u32>>> {
    match v {
        Value::Array(items) => items
            .iter()
            .map(|d| {
                d.as_u64()
                    .and_then(|d| u32::try_from(d).ok())
                    .ok_or_else(|| {
                        parse_err(format!("digit {d} is not a small non-negative integer"))
                    })
            })
            .collect::<Result<Vec<u32>>>()
            .map(Some),
        Value::String(s) => parse_digit_string(s).map(Some),
        _ => Ok(None),
    }
}

/// Reads a ring element at the given precision. Integers are reduced, digit
/// lists are padded with zeros or cut to `precision` digits.
pub fn relem_from_json(ctx: &RingCtx, v: &Value, precision: usize) -> Result<RElem> {
    if let Some(n) = v.as_i64() {
        return Ok(ctx.r_from_int(n, precision));
    }
    match digits_from_value(v)? {
        Some(mut digits) => {
            digits.resize(precision, 0);
            ctx.r_from_digits(digits)
        }
        None => Err(parse_err(format!(
            "expected an integer, digit list or digit string, got {v}"
        ))),
    }
}

pub fn relem_to_json(a: &RElem) -> Value {
    json!(a.digits())
}

pub fn telem_from_json(ctx: &RingCtx, v: &Value) -> Result<TElem> {
    let n = v
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_err(format!("T element needs an integer \"n\": {v}")))?
        as usize;
    let num = v
        .get("num")
        .ok_or_else(|| parse_err(format!("T element needs \"num\": {v}")))?;
    let num = relem_from_json(ctx, num, n)?;
    ctx.t_from_parts(n, num.digits().to_vec())
}

pub fn telem_to_json(t: &TElem) -> Value {
    json!({ "n": t.level(), "num": t.numerator() })
}

/// `{ "ring": "<ring spec>", "rows": [[entry, ...], ...] }`.
pub fn parse_matrix(text: &str) -> Result<(RingCtx, PresMatrix)> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| parse_err(format!("matrix file: {e}")))?;
    let ring = v
        .get("ring")
        .and_then(Value::as_str)
        .ok_or_else(|| parse_err("matrix file needs a \"ring\" string"))?;
    let ctx: RingCtx = ring.parse()?;
    let rows = v
        .get("rows")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("matrix file needs a \"rows\" array"))?;
    let m = matrix_from_rows(&ctx, rows)?;
    Ok((ctx, m))
}

fn matrix_from_rows(ctx: &RingCtx, rows: &[Value]) -> Result<PresMatrix> {
    let prec = ctx.precision();
    let rows = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| parse_err(format!("row {row} is not an array")))?
                .iter()
                .map(|x| relem_from_json(ctx, x, prec))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(parse_err(
            "matrix has no rows; use a module spec for a free module",
        ));
    }
    PresMatrix::new(rows)
}

pub fn matrix_to_json(ctx: &RingCtx, m: &PresMatrix) -> Value {
    let rows: Vec<Vec<Value>> = m
        .rows()
        .iter()
        .map(|r| r.iter().map(relem_to_json).collect())
        .collect();
    json!({ "ring": ctx.spec_string(), "rows": rows })
}

/// `{ "torsion": [...], "free": [...] }`; torsion coordinates are reduced
/// modulo their exponent, free ones are read at `free_precision`.
pub fn modelem_from_json(
    ctx: &RingCtx,
    m: &InvariantFactors,
    v: &Value,
    free_precision: usize,
) -> Result<ModElem> {
    let list = |key: &str| -> Result<Vec<Value>> {
        match v.get(key) {
            None => Ok(Vec::new()),
            Some(Value::Array(a)) => Ok(a.clone()),
            Some(other) => Err(parse_err(format!(
                "\"{key}\" must be an array, got {other}"
            ))),
        }
    };
    let torsion = list("torsion")?;
    let free = list("free")?;
    if torsion.len() != m.torsion_exps().len() || free.len() != m.free_rank() {
        return Err(Error::DimensionMismatch {
            expected: m.ncomponents(),
            got: torsion.len() + free.len(),
        });
    }
    let torsion = torsion
        .iter()
        .zip(m.torsion_exps())
        .map(|(x, &e)| relem_from_json(ctx, x, e))
        .collect::<Result<Vec<_>>>()?;
    let free = free
        .iter()
        .map(|x| relem_from_json(ctx, x, free_precision))
        .collect::<Result<Vec<_>>>()?;
    Ok(ModElem { torsion, free })
}

pub fn modelem_to_json(x: &ModElem) -> Value {
    json!({
        "torsion": x.torsion.iter().map(relem_to_json).collect::<Vec<_>>(),
        "free": x.free.iter().map(relem_to_json).collect::<Vec<_>>(),
    })
}

/// `{ "torsion": [b_i, ...], "t": [{"n": n, "num": digits}, ...] }`.
pub fn dualelem_from_json(ctx: &RingCtx, m: &InvariantFactors, v: &Value) -> Result<DualElem> {
    let torsion = match v.get("torsion") {
        None => Vec::new(),
        Some(Value::Array(a)) => a.clone(),
        Some(other) => {
            return Err(parse_err(format!(
                "\"torsion\" must be an array, got {other}"
            )))
        }
    };
    let t = match v.get("t") {
        None => Vec::new(),
        Some(Value::Array(a)) => a.clone(),
        Some(other) => return Err(parse_err(format!("\"t\" must be an array, got {other}"))),
    };
    if torsion.len() != m.torsion_exps().len() || t.len() != m.free_rank() {
        return Err(Error::DimensionMismatch {
            expected: m.ncomponents(),
            got: torsion.len() + t.len(),
        });
    }
    let torsion = torsion
        .iter()
        .zip(m.torsion_exps())
        .map(|(x, &e)| relem_from_json(ctx, x, e))
        .collect::<Result<Vec<_>>>()?;
    let t = t
        .iter()
        .map(|x| telem_from_json(ctx, x))
        .collect::<Result<Vec<_>>>()?;
    ctx.dual_normalize(m, &DualElem { torsion, t })
}

pub fn dualelem_to_json(phi: &DualElem) -> Value {
    json!({
        "torsion": phi.torsion.iter().map(relem_to_json).collect::<Vec<_>>(),
        "t": phi.t.iter().map(telem_to_json).collect::<Vec<_>>(),
    })
}

/// `{ "coeffs": [c_0, c_1, ...] }` with each `c_n` a packed residue.
pub fn zdual_from_json(ctx: &RingCtx, v: &Value) -> Result<ZDualFunctional> {
    let coeffs = v
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err(format!("functional needs a \"coeffs\" array: {v}")))?;
    let coeffs = coeffs
        .iter()
        .map(|c| {
            let d = c
                .as_u64()
                .and_then(|d| u32::try_from(d).ok())
                .ok_or_else(|| parse_err(format!("coefficient {c} is not a packed residue")))?;
            if d >= ctx.q() {
                return Err(Error::DigitOutOfRange {
                    digit: d,
                    q: ctx.q(),
                });
            }
            Ok(ctx.unpack(d))
        })
        .collect::<Result<Vec<_>>>()?;
    ZDualFunctional::new(ctx, coeffs)
}

pub fn zdual_to_json(ctx: &RingCtx, phi: &ZDualFunctional) -> Result<Value> {
    let coeffs = phi
        .coeffs()
        .iter()
        .map(|c| ctx.pack(c))
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({ "coeffs": coeffs }))
}

/// Parses a JSON document given inline, or read from a file when the text
/// starts with `@`.
pub fn load_json(arg: &str) -> Result<Value> {
    let text = match arg.strip_prefix('@') {
        Some(path) => {
            std::fs::read_to_string(path).map_err(|e| parse_err(format!("{path}: {e}")))?
        }
        None => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| parse_err(format!("invalid JSON: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let text = r#"{"ring": "mode=mixed,p=2,e=1,prec=4", "rows": [[2, 0], [0, "0,0,1"]]}"#;
        let (ctx, m) = parse_matrix(text).unwrap();
        assert_eq!(m.get(0, 0), &ctx.r_from_int(2, 4));
        assert_eq!(m.get(1, 1), &ctx.r_from_int(4, 4));
        let back = matrix_to_json(&ctx, &m);
        let (_, again) = parse_matrix(&back.to_string()).unwrap();
        assert_eq!(again, m);
        assert!(
            parse_matrix(r#"{"ring": "mode=mixed,p=2,e=1,prec=4", "rows": [[1, 2], [3]]}"#)
                .is_err()
        );
        assert!(parse_matrix("[1, 2]").is_err());
    }

    #[test]
    fn elements_round_trip() {
        let ctx = RingCtx::equal(2, vec![1, 1, 1], 4).unwrap();
        let m: InvariantFactors = "[1,2];f=1".parse().unwrap();
        let v = load_json(r#"{"torsion": [[3], "1 2"], "free": [[0, 1]]}"#).unwrap();
        let x = modelem_from_json(&ctx, &m, &v, 4).unwrap();
        assert_eq!(x.free[0].precision(), 4);
        assert_eq!(
            modelem_from_json(&ctx, &m, &modelem_to_json(&x), 4).unwrap(),
            x
        );

        let v = load_json(r#"{"torsion": [1, [0, 2]], "t": [{"n": 2, "num": [1, 3]}]}"#).unwrap();
        let phi = dualelem_from_json(&ctx, &m, &v).unwrap();
        assert_eq!(phi.t[0].level(), 2);
        assert_eq!(
            dualelem_from_json(&ctx, &m, &dualelem_to_json(&phi)).unwrap(),
            phi
        );
    }

    #[test]
    fn functional_round_trip() {
        let ctx = RingCtx::equal(2, vec![1, 1, 1], 4).unwrap();
        let phi =
            zdual_from_json(&ctx, &load_json(r#"{"coeffs": [2, 0, 3, 0, 0]}"#).unwrap()).unwrap();
        assert_eq!(phi.support_bound(), 3);
        assert_eq!(
            zdual_to_json(&ctx, &phi).unwrap(),
            json!({"coeffs": [2, 0, 3]})
        );
        assert!(zdual_from_json(&ctx, &json!({"coeffs": [4]})).is_err());
    }
}
