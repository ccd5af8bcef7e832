//! Polynomial differential forms on a formal coordinate chart, and forms on
//! the trivial bundle `Ω(M) ⊗ A ⊗ Γ^∧_inv`.

use crate::braided::{Braided, InvTensor};
use crate::calculus::{Calculus, GammaInv, Key};
use crate::error::{QpbError, Result};
use crate::hopf::{format_sum, Elem, Mono};
use crate::lin::Lin;
use crate::scalar::MuScalar;

/// Exponent vector of a monomial in the chart coordinates.
pub type Exps = Vec<u32>;

/// Polynomial in `x1..xn` with `MuScalar` coefficients.
pub type Poly = Lin<Exps>;

pub fn poly_const(n: usize, c: MuScalar) -> Poly {
    Poly::single(vec![0; n], c)
}

pub fn poly_var(n: usize, i: usize) -> Poly {
    let mut e = vec![0; n];
    e[i] = 1;
    Poly::basis(e)
}

pub fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::zero();
    for (ea, ca) in a.iter() {
        for (eb, cb) in b.iter() {
            out.add_term(ea.iter().zip(eb).map(|(x, y)| x + y).collect(), ca * cb);
        }
    }
    out
}

/// `∂f/∂x_i`.
pub fn poly_diff(p: &Poly, i: usize) -> Poly {
    let mut out = Poly::zero();
    for (e, c) in p.iter() {
        if e[i] > 0 {
            let mut ne = e.clone();
            ne[i] -= 1;
            out.add_term(ne, c * &MuScalar::from_int(e[i] as i64));
        }
    }
    out
}

fn mono_label(e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, k)| **k > 0)
        .map(|(i, k)| if *k == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, k) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

pub fn poly_to_text(p: &Poly) -> String {
    format_sum(p.iter().rev().map(|(e, c)| (c.clone(), mono_label(e))))
}

/// Parses a polynomial in `x1..xn` over `mu` and `i`; division is allowed by constants only.
pub fn parse_poly(text: &str, n: usize) -> Result<Poly> {
    let mut p = PolyParser { src: text.as_bytes(), pos: 0, n };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

struct PolyParser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

impl PolyParser<'_> {
    fn err(&self, msg: &str) -> QpbError {
        QpbError::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = poly_mul(&acc, &self.unary()?);
                }
                b'/' => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    let c = self.constant_of(&d).ok_or(QpbError::Parse { pos: at, msg: "division by a non-constant".into() })?;
                    let inv = c.inv().map_err(|_| QpbError::Parse { pos: at, msg: "division by zero".into() })?;
                    acc = acc.scale(&inv);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn constant_of(&self, p: &Poly) -> Option<MuScalar> {
        if p.is_zero() {
            return Some(MuScalar::zero());
        }
        if p.len() == 1 {
            let (e, c) = p.leading()?;
            if e.iter().all(|k| *k == 0) {
                return Some(c.clone());
            }
        }
        None
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let neg = self.src.get(self.pos) == Some(&b'-');
        if neg {
            self.pos += 1;
        }
        let e = self.integer()? as i64;
        if neg {
            let c = self.constant_of(&base).ok_or_else(|| self.err("negative power of a non-constant"))?;
            let v = c.pow(-e).map_err(|_| self.err("division by zero"))?;
            return Ok(poly_const(self.n, v));
        }
        let mut acc = poly_const(self.n, MuScalar::one());
        for _ in 0..e {
            acc = poly_mul(&acc, &base);
        }
        Ok(acc)
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().map_err(|_| self.err("integer too large"))
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                Ok(poly_const(self.n, MuScalar::from_int(v as i64)))
            }
            Some(b'x') => {
                self.pos += 1;
                let at = self.pos;
                let i = self.integer()? as usize;
                if i == 0 || i > self.n {
                    return Err(QpbError::Parse { pos: at, msg: format!("coordinate x{} outside a chart of dimension {}", i, self.n) });
                }
                Ok(poly_var(self.n, i - 1))
            }
            Some(b'm') if self.src[self.pos..].starts_with(b"mu") => {
                self.pos += 2;
                Ok(poly_const(self.n, MuScalar::mu()))
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(poly_const(self.n, MuScalar::i()))
            }
            _ => Err(self.err("unexpected character")),
        }
    }
}

/// Strictly increasing list of coordinate indices `dx_{i1}…dx_{ip}`.
pub type Word = Vec<u8>;

/// Sorts a word of differentials; `None` when an index repeats.
fn normalize_word(w: &[u8]) -> Option<(Word, bool)> {
    let mut v = w.to_vec();
    let mut odd = false;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                odd = !odd;
            }
        }
    }
    if v.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((v, odd))
}

/// Differential form on an n-coordinate chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseForm {
    n: usize,
    terms: Lin<(Word, Exps)>,
}

impl BaseForm {
    pub fn zero(n: usize) -> BaseForm {
        BaseForm { n, terms: Lin::zero() }
    }

    pub fn function(n: usize, p: &Poly) -> BaseForm {
        BaseForm::from_word(n, &[], p)
    }

    pub fn one(n: usize) -> BaseForm {
        BaseForm::function(n, &poly_const(n, MuScalar::one()))
    }

    /// `dx_i`, with `i` counted from 0.
    pub fn dx(n: usize, i: usize) -> BaseForm {
        BaseForm::from_word(n, &[i as u8], &poly_const(n, MuScalar::one()))
    }

    /// `p · dx_{w1}…dx_{wp}` for any index order.
    pub fn from_word(n: usize, w: &[u8], p: &Poly) -> BaseForm {
        let mut out = BaseForm::zero(n);
        if let Some((word, odd)) = normalize_word(w) {
            for (e, c) in p.iter() {
                out.terms.add_term((word.clone(), e.clone()), if odd { -c } else { c.clone() });
            }
        }
        out
    }

    pub fn chart_dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &Lin<(Word, Exps)> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    /// Table word → coefficient polynomial.
    pub fn components(&self) -> Vec<(Word, Poly)> {
        let mut out: std::collections::BTreeMap<Word, Poly> = Default::default();
        for ((w, e), c) in self.terms.iter() {
            out.entry(w.clone()).or_default().add_term(e.clone(), c.clone());
        }
        out.into_iter().collect()
    }

    /// Degree of a homogeneous form; `None` for zero or mixed degree.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|(w, _)| w.len());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn degree_part(&self, p: usize) -> BaseForm {
        BaseForm {
            n: self.n,
            terms: self.terms.iter().filter(|((w, _), _)| w.len() == p).map(|(k, c)| (k.clone(), c.clone())).collect(),
        }
    }

    fn same_chart(&self, o: &BaseForm) -> Result<()> {
        if self.n != o.n {
            return Err(QpbError::ChartMismatch(self.n, o.n));
        }
        Ok(())
    }

    pub fn add(&self, o: &BaseForm) -> Result<BaseForm> {
        self.same_chart(o)?;
        Ok(BaseForm { n: self.n, terms: self.terms.add(&o.terms) })
    }

    pub fn sub(&self, o: &BaseForm) -> Result<BaseForm> {
        self.same_chart(o)?;
        Ok(BaseForm { n: self.n, terms: self.terms.sub(&o.terms) })
    }

    pub fn add_scaled(&mut self, o: &BaseForm, c: &MuScalar) -> Result<()> {
        self.same_chart(o)?;
        self.terms.add_scaled(&o.terms, c);
        Ok(())
    }

    pub fn scale(&self, c: &MuScalar) -> BaseForm {
        BaseForm { n: self.n, terms: self.terms.scale(c) }
    }

    pub fn neg(&self) -> BaseForm {
        BaseForm { n: self.n, terms: self.terms.neg() }
    }

    /// Wedge product.
    pub fn mul(&self, o: &BaseForm) -> Result<BaseForm> {
        self.same_chart(o)?;
        let mut out = BaseForm::zero(self.n);
        for ((wa, ea), ca) in self.terms.iter() {
            for ((wb, eb), cb) in o.terms.iter() {
                let joined = [wa.as_slice(), wb.as_slice()].concat();
                if let Some((w, odd)) = normalize_word(&joined) {
                    let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                    let c = ca * cb;
                    out.terms.add_term((w, e), if odd { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative.
    pub fn d(&self) -> BaseForm {
        let mut out = BaseForm::zero(self.n);
        for ((w, e), c) in self.terms.iter() {
            for i in 0..self.n {
                if e[i] == 0 {
                    continue;
                }
                let mut de = e.clone();
                de[i] -= 1;
                let mut word = vec![i as u8];
                word.extend_from_slice(w);
                if let Some((nw, odd)) = normalize_word(&word) {
                    let k = c * &MuScalar::from_int(e[i] as i64);
                    out.terms.add_term((nw, de), if odd { -k } else { k });
                }
            }
        }
        out
    }

    /// Complex conjugation of coefficients; coordinates are real.
    pub fn conj(&self) -> BaseForm {
        BaseForm { n: self.n, terms: self.terms.conj() }
    }

    pub fn to_text(&self) -> String {
        format_sum(self.terms.iter().map(|((w, e), c)| {
            let mut parts = Vec::new();
            let m = mono_label(e);
            if m != "1" {
                parts.push(m);
            }
            parts.extend(w.iter().map(|i| format!("dx{}", i + 1)));
            let label = if parts.is_empty() { "1".to_string() } else { parts.join(" ") };
            (c.clone(), label)
        }))
    }
}

impl std::fmt::Display for BaseForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Key of a form on the trivial bundle: base part, function on the group, invariant word.
pub type MixedKey = (Word, Exps, Mono, Vec<Key>);

/// Element of `Ω(M) ⊗ A ⊗ Γ^∧_inv`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedForm {
    n: usize,
    terms: Lin<MixedKey>,
}

fn base_of(n: usize, w: &Word, e: &Exps, c: &MuScalar) -> BaseForm {
    BaseForm { n, terms: Lin::single((w.clone(), e.clone()), c.clone()) }
}

impl MixedForm {
    pub fn zero(n: usize) -> MixedForm {
        MixedForm { n, terms: Lin::zero() }
    }

    /// `f ⊗ a ⊗ u`.
    pub fn product(f: &BaseForm, a: &Elem, u: &InvTensor) -> MixedForm {
        let mut out = MixedForm::zero(f.n);
        for ((w, e), cf) in f.terms.iter() {
            for (m, ca) in a.iter() {
                for (word, cu) in u.iter() {
                    out.terms.add_term((w.clone(), e.clone(), *m, word.clone()), &(cf * ca) * cu);
                }
            }
        }
        out
    }

    pub fn base(f: &BaseForm) -> MixedForm {
        MixedForm::product(f, &Elem::basis(Mono::ONE), &InvTensor::basis(vec![]))
    }

    pub fn invariant(n: usize, u: &InvTensor) -> MixedForm {
        MixedForm::product(&BaseForm::one(n), &Elem::basis(Mono::ONE), u)
    }

    pub fn chart_dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &Lin<MixedKey> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn add(&self, o: &MixedForm) -> Result<MixedForm> {
        if self.n != o.n {
            return Err(QpbError::ChartMismatch(self.n, o.n));
        }
        Ok(MixedForm { n: self.n, terms: self.terms.add(&o.terms) })
    }

    pub fn sub(&self, o: &MixedForm) -> Result<MixedForm> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> MixedForm {
        MixedForm { n: self.n, terms: self.terms.neg() }
    }

    pub fn scale(&self, c: &MuScalar) -> MixedForm {
        MixedForm { n: self.n, terms: self.terms.scale(c) }
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(|(w, _, _, u)| w.len() + u.len()).max().unwrap_or(0)
    }

    pub fn to_text(&self, unicode: bool) -> String {
        let sep = if unicode { " ⊗ " } else { " (x) " };
        format_sum(self.terms.iter().map(|((w, e, m, u), c)| {
            let b = base_of(self.n, w, e, &MuScalar::one()).to_text();
            let inv: Vec<String> = u.iter().map(|k| k.to_text(unicode)).collect();
            let inv = if inv.is_empty() { "1".to_string() } else { inv.join(if unicode { " ∧ " } else { " ^ " }) };
            (c.clone(), format!("[{}{}{}{}{}]", b, sep, m.to_text(unicode), sep, inv))
        }))
    }
}

/// Trivial bundle over an n-dimensional chart with the braided envelope of a calculus.
pub struct TrivialBundle<'a> {
    pub braided: &'a Braided,
    pub n: usize,
}

impl<'a> TrivialBundle<'a> {
    pub fn new(braided: &'a Braided, n: usize) -> Self {
        TrivialBundle { braided, n }
    }

    fn calc(&self) -> &Calculus {
        self.braided.calculus()
    }

    /// `u ∘ a` on a word of invariant forms, legwise through iterated φ.
    pub fn circ_word(&self, w: &[Key], a: &Elem) -> Result<InvTensor> {
        let su = self.calc().su();
        if w.is_empty() {
            return Ok(InvTensor::single(vec![], su.counit(a)));
        }
        let mut out = InvTensor::zero();
        for ((l, r), c) in su.comult(a).iter() {
            let head = self.calc().circ(&GammaInv::basis(w[0]), &Elem::basis(*l))?;
            if head.is_zero() {
                continue;
            }
            let tail = self.circ_word(&w[1..], &Elem::basis(*r))?;
            for (k, ck) in head.iter() {
                for (tw, ct) in tail.iter() {
                    let mut nw = vec![*k];
                    nw.extend_from_slice(tw);
                    out.add_term(nw, &(c * ck) * ct);
                }
            }
        }
        Ok(out)
    }

    /// `u · b = b⁽¹⁾ ⊗ (u ∘ b⁽²⁾)`.
    fn word_times(&self, w: &[Key], b: Mono) -> Result<Lin<(Mono, Vec<Key>)>> {
        let mut out = Lin::zero();
        for ((l, r), c) in self.calc().su().comult_mono(b).iter() {
            for (nw, cw) in self.circ_word(w, &Elem::basis(*r))?.iter() {
                out.add_term((*l, nw.clone()), c * cw);
            }
        }
        Ok(out)
    }

    fn check(&self, u: &MixedForm) -> Result<()> {
        if u.n != self.n {
            return Err(QpbError::ChartMismatch(self.n, u.n));
        }
        Ok(())
    }

    /// Product with Koszul signs.
    pub fn mul(&self, u: &MixedForm, v: &MixedForm) -> Result<MixedForm> {
        self.check(u)?;
        self.check(v)?;
        let su = self.calc().su();
        let mut out = MixedForm::zero(self.n);
        for ((wf, ef, ma, ua), cu) in u.terms.iter() {
            for ((wg, eg, mb, ub), cv) in v.terms.iter() {
                let fg = base_of(self.n, wf, ef, cu).mul(&base_of(self.n, wg, eg, cv))?;
                if fg.is_zero() {
                    continue;
                }
                let sign = if (ua.len() * wg.len()) % 2 == 1 { -MuScalar::one() } else { MuScalar::one() };
                for ((b1, uw), c) in self.word_times(ua, *mb)?.iter() {
                    let c = c * &sign;
                    let prod = su.mul_mono(*ma, *b1);
                    for (m, cm) in prod.iter() {
                        let word = [uw.as_slice(), ub.as_slice()].concat();
                        for ((w, e), cf) in fg.terms.iter() {
                            out.terms.add_term((w.clone(), e.clone(), *m, word.clone()), &(cf * &c) * cm);
                        }
                    }
                }
            }
        }
        self.reduce(&out)
    }

    /// Reduces the invariant legs modulo the quadratic ideal.
    pub fn reduce(&self, u: &MixedForm) -> Result<MixedForm> {
        let mut groups: std::collections::BTreeMap<(Word, Exps, Mono), InvTensor> = Default::default();
        for ((w, e, m, word), c) in u.terms.iter() {
            groups.entry((w.clone(), e.clone(), *m)).or_default().add_term(word.clone(), c.clone());
        }
        let mut out = MixedForm::zero(u.n);
        for ((w, e, m), t) in groups {
            for (word, c) in self.braided.wedge_reduce(&t)?.iter() {
                out.terms.add_term((w.clone(), e.clone(), m, word.clone()), c.clone());
            }
        }
        Ok(out)
    }

    /// Total differential `d⊗1 + (−1)^{deg}⊗d`, with `d(a) = a⁽¹⁾π(a⁽²⁾)` and `d_inv` on invariant words.
    pub fn d(&self, u: &MixedForm) -> Result<MixedForm> {
        self.check(u)?;
        let calc = self.calc();
        let su = calc.su();
        let mut out = MixedForm::zero(self.n);
        for ((w, e, m, word), c) in u.terms.iter() {
            let f = base_of(self.n, w, e, c);
            let df = f.d();
            for ((dw, de), dc) in df.terms.iter() {
                out.terms.add_term((dw.clone(), de.clone(), *m, word.clone()), dc.clone());
            }
            let sign = if w.len() % 2 == 1 { -c.clone() } else { c.clone() };
            for ((l, r), cc) in su.comult_mono(*m).iter() {
                for (k, ck) in calc.pi_mono(*r)?.iter() {
                    let mut nw = vec![*k];
                    nw.extend_from_slice(word);
                    out.terms.add_term((w.clone(), e.clone(), *l, nw), &(&sign * cc) * ck);
                }
            }
            if !word.is_empty() {
                let dv = self.braided.d_inv(&InvTensor::basis(word.clone()))?;
                for (nw, cv) in dv.iter() {
                    out.terms.add_term((w.clone(), e.clone(), *m, nw.clone()), &sign * cv);
                }
            }
        }
        self.reduce(&out)
    }
}
