use std::sync::Arc;

use qpb_core::braided::{tensor_to_text, Braided, InvTensor};
use qpb_core::calculus::{calculus_by_tag, gamma_to_text, Calculus, GammaInv, Key};
use qpb_core::gauge::Gauge;
use qpb_core::hopf::{elem_to_text, Elem, Mono};
use qpb_core::json::{base_form_to_json, elem_to_json, gamma_to_json, inv_tensor_to_json, key_to_json, scalar_to_json};
use qpb_core::qspecial::{jacobi_p, zeta};
use qpb_core::verify::{four_d_s2_display, indeterminate_potential};
use qpb_core::{QpbError, Result};
use serde_json::{json, Value};

pub const KINDS: [&str; 6] = ["sigma", "s2inv", "circ", "curvature", "jacobi", "zeta"];

pub struct TableArgs {
    pub calculus: String,
    pub k: Option<usize>,
    pub m: Option<i64>,
    pub unicode: bool,
}

/// A table as JSON together with its aligned text rendering.
pub struct Table {
    pub json: Value,
    pub rows: Vec<(String, String)>,
}

impl Table {
    pub fn text(&self) -> String {
        let width = self.rows.iter().map(|(l, _)| l.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for (l, r) in &self.rows {
            let pad = width - l.chars().count();
            out.push_str(&format!("{}{}  {}\n", l, " ".repeat(pad), r));
        }
        out
    }
}

fn finite_braided(tag: &str, kind: &str) -> Result<Braided> {
    let c = calculus_by_tag(tag)?;
    if c.basis().is_none() {
        return Err(QpbError::Unsupported { calculus: tag.into(), what: format!("table {}", kind) });
    }
    Braided::new(Arc::new(c))
}

pub fn emit(kind: &str, args: &TableArgs) -> Result<Table> {
    let u = args.unicode;
    let tag = args.calculus.as_str();
    match kind {
        "sigma" => {
            let b = finite_braided(tag, kind)?;
            let words = b.degree2_words()?;
            let images: Vec<InvTensor> = words.iter().map(|w| b.sigma(&InvTensor::basis(w.clone()))).collect::<Result<_>>()?;
            let matrix: Vec<Value> = words
                .iter()
                .map(|row| Value::Array(images.iter().map(|img| scalar_to_json(&img.coeff(row))).collect()))
                .collect();
            let basis: Vec<Value> = words.iter().map(|w| json!(w.iter().map(|k| key_to_json(*k)).collect::<Vec<_>>())).collect();
            let rows = words
                .iter()
                .zip(&images)
                .map(|(w, img)| (format!("sigma({})", word_text(w, u)), tensor_to_text(img, u)))
                .collect();
            Ok(Table { json: json!({"calculus": tag, "basis": basis, "matrix": matrix}), rows })
        }
        "s2inv" => {
            let b = Braided::new(Arc::new(calculus_by_tag(tag)?))?;
            let elems: Vec<InvTensor> = if tag == "4d" { four_d_s2_display() } else { b.s2_basis().to_vec() };
            let rows = elems.iter().enumerate().map(|(i, x)| (format!("s{}", i + 1), tensor_to_text(x, u))).collect();
            let js: Vec<Value> = elems.iter().map(inv_tensor_to_json).collect();
            Ok(Table { json: json!({"calculus": tag, "dimension": elems.len(), "elements": js}), rows })
        }
        "circ" => {
            let c = calculus_by_tag(tag)?;
            let keys: Vec<Key> = match c.basis() {
                Some(k) => k.to_vec(),
                None => (-3..=3).flat_map(|n| (0..=3u32).map(move |k| Key::Xi(n, k))).collect(),
            };
            let mut entries = Vec::new();
            let mut rows = Vec::new();
            for k in keys {
                for g in [Mono::A, Mono::AS, Mono::G, Mono::GS] {
                    let x = c.circ(&GammaInv::basis(k), &Elem::basis(g))?;
                    rows.push((format!("{} o {}", k.to_text(u), g.to_text(u)), gamma_to_text(&x, u)));
                    entries.push(json!([key_to_json(k), g.to_text(false), gamma_to_json(tag, &x)["terms"]]));
                }
            }
            Ok(Table { json: json!({"calculus": tag, "entries": entries}), rows })
        }
        "curvature" => {
            let b = finite_braided(tag, kind)?;
            let keys = b.calculus().basis().expect("finite").to_vec();
            let a = indeterminate_potential(&keys)?;
            let f = Gauge::new(&b).curvature(&a)?;
            let mut rows = Vec::new();
            let mut comps = Vec::new();
            for (j, k) in keys.iter().enumerate() {
                rows.push((format!("A({})", k.to_text(u)), format!("x{} dx1 + x{} dx2", 3 + 2 * j, 4 + 2 * j)));
                comps.push(json!([key_to_json(*k), base_form_to_json(&f.get(*k))]));
            }
            for k in &keys {
                rows.push((format!("F({})", k.to_text(u)), f.get(*k).to_string()));
            }
            let pot: Vec<Value> = keys.iter().map(|k| json!([key_to_json(*k), base_form_to_json(&a.get(*k))])).collect();
            Ok(Table {
                json: json!({"calculus": tag, "chart_dim": a.chart_dim(), "potential": pot, "curvature": comps}),
                rows,
            })
        }
        "jacobi" => {
            let k = args.k.ok_or_else(|| QpbError::Invalid("table jacobi needs --k".into()))?;
            let (p, n) = jacobi_p(k);
            let rows = vec![(format!("p{}", k), p.to_text()), ("norm_sq".into(), n.to_text())];
            let coeffs: Vec<Value> = p.coeffs().iter().map(scalar_to_json).collect();
            Ok(Table { json: json!({"k": k, "coefficients": coeffs, "norm_sq": scalar_to_json(&n)}), rows })
        }
        "zeta" => {
            let k = args.k.ok_or_else(|| QpbError::Invalid("table zeta needs --k".into()))?;
            if tag != "minimal" {
                return Err(QpbError::Unsupported { calculus: tag.into(), what: "table zeta".into() });
            }
            let c = Calculus::minimal();
            let ms: Vec<i64> = match args.m {
                Some(m) => vec![m],
                None => (-(k as i64)..=k as i64).collect(),
            };
            let mut rows = Vec::new();
            let mut out = Vec::new();
            for m in ms {
                let z = zeta(&c, k, m)?;
                let q = c.rho(&z.element)?;
                rows.push((format!("zeta({},{})", k, m), gamma_to_text(&z.element, u)));
                rows.push((format!("Q({},{})", k, m), elem_to_text(&q, u)));
                out.push(json!({
                    "k": k,
                    "m": m,
                    "terms": gamma_to_json(tag, &z.element)["terms"],
                    "q_expansion": elem_to_json(&q),
                    "norm_sq": scalar_to_json(&z.norm_sq),
                }));
            }
            Ok(Table { json: Value::Array(out), rows })
        }
        other => Err(QpbError::Invalid(format!("unknown table kind '{}' (expected one of {})", other, KINDS.join(", ")))),
    }
}

fn word_text(w: &[Key], unicode: bool) -> String {
    let sep = if unicode { " ⊗ " } else { " (x) " };
    w.iter().map(|k| k.to_text(unicode)).collect::<Vec<_>>().join(sep)
}
