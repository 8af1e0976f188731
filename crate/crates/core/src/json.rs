//! JSON input parsing and report encoding. Rationals travel as `"a/b"`
//! strings (plain integers are accepted on input).

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::kernel::matrix::Matrix;
use crate::kernel::polygon::LowerPolygon;
use crate::kernel::poly::{qpoly, Poly};
use crate::kernel::rat::{fmt_rat, parse_rat, rat, Rat};
use crate::kernel::ring::Ring;
use crate::padic::{default_precision, standard_unram_poly, Involution, Layer, LayerElem, PadicTower, TowerElem};
use crate::qform::{CheckItem, HodgeNumbers, QuadraticFormQ};

pub const TOOL: &str = "cmhk";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn parse_document(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| perr(format!("invalid JSON: {e}")))
}

pub fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| perr(format!("missing field \"{key}\"")))
}

pub fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| perr(format!("{what} must be a nonnegative integer")))
}

pub fn as_i64(v: &Value, what: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| perr(format!("{what} must be an integer")))
}

pub fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| perr(format!("{what} must be an array")))
}

pub fn parse_rat_value(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat(s),
        Value::Number(n) => n
            .as_i64()
            .map(rat)
            .ok_or_else(|| perr(format!("number {n} is not an integer; write rationals as \"a/b\""))),
        _ => Err(perr(format!("expected a rational, got {v}"))),
    }
}

pub fn parse_rat_list(v: &Value) -> Result<Vec<Rat>> {
    as_array(v, "rational list")?.iter().map(parse_rat_value).collect()
}

pub fn parse_rat_matrix(v: &Value) -> Result<Matrix<Rat>> {
    let rows = as_array(v, "matrix")?
        .iter()
        .map(parse_rat_list)
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows)
}

/// Coefficient list, constant term first.
pub fn parse_poly(v: &Value) -> Result<Poly<Rat>> {
    Ok(qpoly().from_coeffs(parse_rat_list(v)?))
}

pub fn parse_qform(v: &Value) -> Result<QuadraticFormQ> {
    if let Some(d) = v.get("diagonal") {
        return QuadraticFormQ::diagonal(&parse_rat_list(d)?);
    }
    if let Some(g) = v.get("gram") {
        return QuadraticFormQ::new(parse_rat_matrix(g)?);
    }
    Err(perr("a form needs \"gram\" or \"diagonal\""))
}

/// `{"1": 1, "-1": 1, "0": 2}` or `[[1, 1], [-1, 1], [0, 2]]`.
pub fn parse_hodge(v: &Value) -> Result<HodgeNumbers> {
    let mut pairs = Vec::new();
    match v {
        Value::Object(m) => {
            for (k, h) in m {
                let i: i64 = k.trim().parse().map_err(|_| perr(format!("bad Hodge index {k}")))?;
                pairs.push((i, as_u64(h, "Hodge number")?));
            }
        }
        Value::Array(a) => {
            for e in a {
                let pr = as_array(e, "Hodge pair")?;
                if pr.len() != 2 {
                    return Err(perr("Hodge pairs are [index, number]"));
                }
                pairs.push((as_i64(&pr[0], "Hodge index")?, as_u64(&pr[1], "Hodge number")?));
            }
        }
        _ => return Err(perr("Hodge numbers must be an object or a list of pairs")),
    }
    Ok(HodgeNumbers::from_pairs(&pairs))
}

fn precision_of(v: &Value) -> Result<u32> {
    match v.get("precision") {
        Some(n) => Ok(as_u64(n, "precision")? as u32),
        None => Ok(default_precision()),
    }
}

/// `{"p", "f"}` (standard polynomial) or `{"p", "poly": [..]}`, optional
/// `"precision"`.
pub fn parse_layer(v: &Value) -> Result<Layer> {
    let p = as_u64(get(v, "p")?, "p")?;
    let prec = precision_of(v)?;
    let g = match v.get("poly") {
        Some(g) => parse_poly(g)?,
        None => {
            let f = v.get("f").map(|x| as_u64(x, "f")).transpose()?.unwrap_or(1) as usize;
            standard_unram_poly(p, f)?
        }
    };
    Layer::new(p, g, prec)
}

/// A rational, or a list of `f` rationals on the powers of the generator.
pub fn parse_layer_elem(layer: &Layer, v: &Value) -> Result<LayerElem> {
    match v {
        Value::Array(_) => {
            let c = parse_rat_list(v)?;
            if c.len() > layer.f() {
                return Err(perr(format!("layer element has {} > f = {} coordinates", c.len(), layer.f())));
            }
            Ok(layer.exact(c))
        }
        _ => Ok(layer.from_rat(parse_rat_value(v)?)),
    }
}

/// `{"p", "f", "e"}` builds `y^e - p` over the standard layer; otherwise
/// `"unram_poly"` (or `"f"`) and `"eisenstein"`: coefficient list, constant
/// first, each coefficient a layer element.
pub fn parse_tower(v: &Value) -> Result<PadicTower> {
    let p = as_u64(get(v, "p")?, "p")?;
    let prec = precision_of(v)?;
    let layer = match v.get("unram_poly") {
        Some(g) => Layer::new(p, parse_poly(g)?, prec)?,
        None => {
            let f = v.get("f").map(|x| as_u64(x, "f")).transpose()?.unwrap_or(1) as usize;
            Layer::new(p, standard_unram_poly(p, f)?, prec)?
        }
    };
    match v.get("eisenstein") {
        Some(eis) => {
            let coeffs = as_array(eis, "eisenstein")?
                .iter()
                .map(|c| parse_layer_elem(&layer, c))
                .collect::<Result<Vec<_>>>()?;
            PadicTower::with_layer(layer, coeffs)
        }
        None => {
            let e = v.get("e").map(|x| as_u64(x, "e")).transpose()?.unwrap_or(1) as usize;
            let mut coeffs = vec![layer.from_i64(-(p as i64))];
            coeffs.extend((1..e).map(|_| layer.zero()));
            coeffs.push(layer.one());
            PadicTower::with_layer(layer, coeffs)
        }
    }
}

/// A rational, a flat list of `d` coordinates (index `j f + i` for
/// `zeta^i pi^j`), or a list of `e` layer elements.
pub fn parse_tower_elem(tower: &PadicTower, v: &Value) -> Result<TowerElem> {
    match v {
        Value::Array(items) if items.iter().any(|x| x.is_array()) => {
            if items.len() > tower.e() {
                return Err(perr(format!("element has {} > e = {} layer blocks", items.len(), tower.e())));
            }
            let cs = items
                .iter()
                .map(|x| parse_layer_elem(tower.layer(), x))
                .collect::<Result<Vec<_>>>()?;
            Ok(tower.from_layer_coeffs(&cs))
        }
        Value::Array(_) => {
            let c = parse_rat_list(v)?;
            if c.len() > tower.d() {
                return Err(perr(format!("element has {} > d = {} coordinates", c.len(), tower.d())));
            }
            Ok(tower.elem(c))
        }
        _ => Ok(tower.from_rat(parse_rat_value(v)?)),
    }
}

/// `"negate_pi"`, `"frobenius"` (the order-two Frobenius power, even `f`,
/// `e = 1`), or `{"zeta_image": .., "pi_image": ..}`.
pub fn parse_star(tower: &PadicTower, v: &Value) -> Result<Involution> {
    match v {
        Value::String(s) if s == "negate_pi" => Involution::negate_pi(tower),
        Value::String(s) if s == "frobenius" => {
            let f = tower.f();
            if !f.is_multiple_of(2) {
                return Err(Error::Domain("the Frobenius involution needs even f".into()));
            }
            let z = tower.layer().frobenius_pow(&tower.layer().generator(), f / 2);
            if !z.is_exact() {
                return Err(Error::Unsupported("Frobenius of this layer is not an exact polynomial map".into()));
            }
            Involution::new(tower, tower.from_layer(&z), tower.uniformizer())
        }
        Value::Object(_) => {
            let z = match v.get("zeta_image") {
                Some(z) => parse_tower_elem(tower, z)?,
                None => tower.zeta(),
            };
            let pi = match v.get("pi_image") {
                Some(x) => parse_tower_elem(tower, x)?,
                None => tower.uniformizer(),
            };
            Involution::new(tower, z, pi)
        }
        _ => Err(perr("star must be \"negate_pi\", \"frobenius\" or {zeta_image, pi_image}")),
    }
}

pub fn rat_json(r: &Rat) -> Value {
    Value::String(fmt_rat(r))
}

pub fn rats_json(rs: &[Rat]) -> Value {
    Value::Array(rs.iter().map(rat_json).collect())
}

pub fn matrix_json(m: &Matrix<Rat>) -> Value {
    Value::Array(m.to_rows().iter().map(|r| rats_json(r)).collect())
}

pub fn layer_matrix_json(m: &Matrix<LayerElem>) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(|x| rats_json(x.coords())).collect()))
            .collect(),
    )
}

pub fn poly_json(p: &Poly<Rat>) -> Value {
    rats_json(p.coeffs())
}

pub fn polygon_json(p: &LowerPolygon) -> Value {
    Value::Array(
        p.vertices()
            .iter()
            .map(|(x, y)| json!([x.to_string(), fmt_rat(y)]))
            .collect(),
    )
}

pub fn checks_json(items: &[CheckItem]) -> Value {
    Value::Array(
        items
            .iter()
            .map(|i| {
                json!({
                    "name": i.name,
                    "pass": i.pass,
                    "informational": i.informational,
                    "detail": i.detail,
                })
            })
            .collect(),
    )
}

pub fn tower_json(t: &PadicTower) -> Value {
    json!({
        "p": t.p(),
        "e": t.e(),
        "f": t.f(),
        "d": t.d(),
        "precision": t.precision(),
        "unram_poly": poly_json(t.layer().poly()),
        "eisenstein": Value::Array(t.eisenstein_poly().iter().map(|c| rats_json(c.coords())).collect()),
        "frobenius_exact": t.layer().frobenius_is_exact(),
    })
}

pub fn hodge_json(h: &HodgeNumbers) -> Value {
    let m: Map<String, Value> = h.map().iter().map(|(i, v)| (i.to_string(), json!(v))).collect();
    Value::Object(m)
}

/// Wraps a command report with the tool identity and the seed.
pub fn envelope(command: &str, seed: u64, pass: bool, body: Value) -> Value {
    let mut m = BTreeMap::new();
    m.insert("tool".to_string(), json!(TOOL));
    m.insert("version".to_string(), json!(VERSION));
    m.insert("seed".to_string(), json!(seed));
    m.insert("command".to_string(), json!(command));
    m.insert("pass".to_string(), json!(pass));
    m.insert("report".to_string(), body);
    json!(m)
}
