//! JSON encodings. Scalars are always strings in the [`MuScalar`] text form.
//! Index words of base forms are 1-based, matching `x1, dx1, ...`.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::braided::InvTensor;
use crate::bundle::{ClassicalCocycle, DiscreteBase};
use crate::calculus::{GammaInv, Key};
use crate::error::{QpbError, Result};
use crate::forms::{parse_poly, poly_to_text, BaseForm};
use crate::gauge::TensorialForm;
use crate::hopf::{Elem, Mono, Tensor2};
use crate::scalar::MuScalar;

fn bad(what: &str, v: &Value) -> QpbError {
    QpbError::Json(format!("expected {}, found {}", what, v))
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| QpbError::Json(e.to_string()))
}

pub fn scalar_to_json(c: &MuScalar) -> Value {
    Value::String(c.to_text())
}

pub fn scalar_from_json(v: &Value) -> Result<MuScalar> {
    MuScalar::parse(v.as_str().ok_or_else(|| bad("a scalar string", v))?)
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(what, v))
}

fn int(v: &Value) -> Result<i64> {
    v.as_i64().ok_or_else(|| bad("an integer", v))
}

pub fn mono_to_json(m: Mono) -> Value {
    json!([m.n, m.k, m.r])
}

pub fn mono_from_json(v: &Value) -> Result<Mono> {
    let a = array(v, "a monomial [n,k,r]")?;
    match a.as_slice() {
        [n, k, r] => {
            let (n, k, r) = (int(n)?, int(k)?, int(r)?);
            if k < 0 || r < 0 {
                return Err(bad("nonnegative k and r", v));
            }
            Ok(Mono::new(n as i32, k as u32, r as u32))
        }
        _ => Err(bad("a monomial [n,k,r]", v)),
    }
}

pub fn elem_to_json(e: &Elem) -> Value {
    Value::Array(e.iter().map(|(m, c)| json!([mono_to_json(*m), scalar_to_json(c)])).collect())
}

pub fn elem_from_json(v: &Value) -> Result<Elem> {
    let mut out = Elem::zero();
    for t in array(v, "a list of terms")? {
        match array(t, "a term")?.as_slice() {
            [m, c] => out.add_term(mono_from_json(m)?, scalar_from_json(c)?),
            _ => return Err(bad("[[n,k,r], scalar]", t)),
        }
    }
    Ok(out)
}

pub fn tensor_to_json(t: &Tensor2) -> Value {
    Value::Array(t.iter().map(|((a, b), c)| json!([mono_to_json(*a), mono_to_json(*b), scalar_to_json(c)])).collect())
}

pub fn tensor_from_json(v: &Value) -> Result<Tensor2> {
    let mut out = Tensor2::zero();
    for t in array(v, "a list of terms")? {
        match array(t, "a term")?.as_slice() {
            [a, b, c] => out.add_term((mono_from_json(a)?, mono_from_json(b)?), scalar_from_json(c)?),
            _ => return Err(bad("[[mono],[mono],scalar]", t)),
        }
    }
    Ok(out)
}

pub fn key_to_json(k: Key) -> Value {
    match k {
        Key::Xi(n, k) => json!([n, k]),
        Key::Std(m) => mono_to_json(m),
        k => Value::String(k.to_text(false)),
    }
}

pub fn key_from_json(v: &Value) -> Result<Key> {
    if let Some(s) = v.as_str() {
        return Key::parse(s).ok_or_else(|| bad("a basis key", v));
    }
    let a = array(v, "a basis key")?;
    match a.as_slice() {
        [n, k] => {
            let k = int(k)?;
            if k < 0 {
                return Err(bad("a nonnegative k", v));
            }
            Ok(Key::Xi(int(n)? as i32, k as u32))
        }
        [_, _, _] => Ok(Key::Std(mono_from_json(v)?)),
        _ => Err(bad("a basis key", v)),
    }
}

pub fn gamma_to_json(tag: &str, x: &GammaInv) -> Value {
    json!({
        "calculus": tag,
        "terms": x.iter().map(|(k, c)| json!([key_to_json(*k), scalar_to_json(c)])).collect::<Vec<_>>(),
    })
}

pub fn gamma_from_json(v: &Value) -> Result<(String, GammaInv)> {
    let tag = v["calculus"].as_str().ok_or_else(|| bad("a calculus tag", &v["calculus"]))?;
    let mut out = GammaInv::zero();
    for t in array(&v["terms"], "a list of terms")? {
        match array(t, "a term")?.as_slice() {
            [k, c] => out.add_term(key_from_json(k)?, scalar_from_json(c)?),
            _ => return Err(bad("[key, scalar]", t)),
        }
    }
    Ok((tag.to_string(), out))
}

pub fn inv_tensor_to_json(x: &InvTensor) -> Value {
    Value::Array(
        x.iter()
            .map(|(w, c)| json!([w.iter().map(|k| key_to_json(*k)).collect::<Vec<_>>(), scalar_to_json(c)]))
            .collect(),
    )
}

pub fn base_form_to_json(f: &BaseForm) -> Value {
    let terms: Vec<Value> = f
        .components()
        .into_iter()
        .map(|(w, p)| json!([w.iter().map(|i| i + 1).collect::<Vec<_>>(), poly_to_text(&p)]))
        .collect();
    json!({ "n": f.chart_dim(), "terms": terms })
}

pub fn base_form_from_json(v: &Value) -> Result<BaseForm> {
    let n = v["n"].as_u64().ok_or_else(|| bad("a chart dimension", &v["n"]))? as usize;
    let mut out = BaseForm::zero(n);
    for t in array(&v["terms"], "a list of terms")? {
        let [w, p] = array(t, "a term")?.as_slice() else { return Err(bad("[[indices], poly]", t)) };
        let mut word = Vec::new();
        for i in array(w, "an index word")? {
            let i = int(i)?;
            if i < 1 || i as usize > n {
                return Err(bad(&format!("an index in 1..={}", n), w));
            }
            word.push((i - 1) as u8);
        }
        let p = parse_poly(p.as_str().ok_or_else(|| bad("a polynomial string", p))?, n)?;
        out = out.add(&BaseForm::from_word(n, &word, &p))?;
    }
    Ok(out)
}

/// `{"calculus": tag, "chart_dim": n, "entries": [[key, base-form]]}`.
pub fn potential_from_json(v: &Value) -> Result<(String, TensorialForm)> {
    let tag = v["calculus"].as_str().ok_or_else(|| bad("a calculus tag", &v["calculus"]))?;
    let n = v["chart_dim"].as_u64().ok_or_else(|| bad("a chart dimension", &v["chart_dim"]))? as usize;
    let mut out = TensorialForm::zero(n, 1);
    for e in array(&v["entries"], "a list of entries")? {
        let [k, f] = array(e, "an entry")?.as_slice() else { return Err(bad("[key, base-form]", e)) };
        let key = key_from_json(k)?;
        let f = base_form_from_json(f)?;
        out.set(key, out.get(key).add(&f)?)?;
    }
    Ok((tag.to_string(), out))
}

pub fn tensorial_to_json(tag: &str, f: &TensorialForm) -> Value {
    let entries: Vec<Value> = f.table().iter().map(|(k, v)| json!([key_to_json(*k), base_form_to_json(v)])).collect();
    json!({ "calculus": tag, "chart_dim": f.chart_dim(), "degree": f.degree(), "entries": entries })
}

/// `{"points": [...], "cover": {name: [points]}, "transitions": [[U,V,point,"z"]]}`.
pub fn cocycle_from_json(v: &Value) -> Result<(DiscreteBase, ClassicalCocycle)> {
    let string = |x: &Value| x.as_str().map(String::from).ok_or_else(|| bad("a string", x));
    let points = array(&v["points"], "a list of points")?.iter().map(string).collect::<Result<Vec<_>>>()?;
    let mut cover = BTreeMap::new();
    for (name, set) in v["cover"].as_object().ok_or_else(|| bad("a cover object", &v["cover"]))? {
        let s = array(set, "a list of points")?.iter().map(string).collect::<Result<BTreeSet<_>>>()?;
        cover.insert(name.clone(), s);
    }
    let base = DiscreteBase::new(points, cover)?;
    let mut entries = Vec::new();
    for t in array(&v["transitions"], "a list of transitions")? {
        let [u, w, x, z] = array(t, "a transition")?.as_slice() else { return Err(bad("[U, V, point, z]", t)) };
        let z = scalar_from_json(z)?;
        let z = z.as_constant().ok_or_else(|| QpbError::NotUnit(z.to_text()))?;
        entries.push((string(u)?, string(w)?, string(x)?, z));
    }
    Ok((base, ClassicalCocycle::new(entries)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_form_round_trip() {
        let f = BaseForm::from_word(3, &[0, 2], &parse_poly("x1*x2 - mu/2", 3).unwrap());
        let v = base_form_to_json(&f);
        assert_eq!(v["terms"][0][0], json!([1, 3]));
        assert_eq!(base_form_from_json(&v).unwrap(), f);
    }
}
