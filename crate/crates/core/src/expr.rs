//! Expression language over the generators `a, a*, g, g*` (also `as`, `gs`,
//! `α`, `γ`), scalars `mu`, `i` and integers, with `+ - * / ^`, juxtaposition
//! as product, `(x)` or `⊗` as tensor product, and the functions `phi`,
//! `eps`, `kappa`, `ad`, `pi@calculus`, `circ`, `varpi`.
//!
//! A `*` directly after an operand is the involution when no operand follows
//! it, so `a*` is α* while `g*a` is γα.

use std::collections::HashMap;
use std::sync::Arc;

use crate::calculus::{calculus_by_tag, gamma_to_text, Calculus, GammaInv, InvTimesA, Key};
use crate::error::{QpbError, Result};
use crate::hopf::{elem_to_text, format_sum, tensor_to_text, Elem, MuParam, Su2, Tensor2};
use crate::scalar::MuScalar;

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Scalar(MuScalar),
    Alg(Elem),
    Tensor(Tensor2),
    Inv(String, GammaInv),
    InvA(String, InvTimesA),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Alg(_) => "algebra element",
            Value::Tensor(_) => "tensor",
            Value::Inv(..) => "invariant form",
            Value::InvA(..) => "invariant form tensor algebra element",
        }
    }

    pub fn to_text(&self, unicode: bool) -> String {
        match self {
            Value::Scalar(c) => c.to_text(),
            Value::Alg(e) => elem_to_text(e, unicode),
            Value::Tensor(t) => tensor_to_text(t, unicode),
            Value::Inv(_, x) => gamma_to_text(x, unicode),
            Value::InvA(_, x) => {
                let sep = if unicode { " ⊗ " } else { " (x) " };
                format_sum(x.iter().map(|((k, m), c)| (c.clone(), format!("{}{}{}", k.to_text(unicode), sep, m.to_text(unicode)))))
            }
        }
    }
}

pub struct Evaluator {
    su: Su2,
    default_calculus: String,
    calculi: HashMap<String, Arc<Calculus>>,
}

impl Evaluator {
    pub fn new(param: MuParam, default_calculus: &str) -> Evaluator {
        Evaluator { su: Su2::new(param), default_calculus: default_calculus.to_string(), calculi: HashMap::new() }
    }

    pub fn su(&self) -> &Su2 {
        &self.su
    }

    pub fn calculus(&mut self, tag: &str) -> Result<Arc<Calculus>> {
        let tag = canonical_tag(tag);
        if let Some(c) = self.calculi.get(tag) {
            return Ok(c.clone());
        }
        if self.su.param() == MuParam::MinusOne && tag != "mu-minus-one" {
            return Err(QpbError::Unsupported { calculus: tag.into(), what: "evaluation at mu = -1".into() });
        }
        let c = Arc::new(calculus_by_tag(tag)?);
        self.calculi.insert(tag.to_string(), c.clone());
        Ok(c)
    }

    pub fn eval(&mut self, text: &str) -> Result<Value> {
        let mut p = Parser { src: text.chars().collect(), pos: 0, ev: self };
        let v = p.expr()?;
        p.ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected input"));
        }
        Ok(v)
    }
}

fn canonical_tag(tag: &str) -> &str {
    match tag {
        "minimal-mu-minus-one" => "mu-minus-one",
        t => t,
    }
}

struct Parser<'a> {
    src: Vec<char>,
    pos: usize,
    ev: &'a mut Evaluator,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> QpbError {
        QpbError::Parse { pos: self.pos, msg: msg.into() }
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.src.get(self.pos).copied()
    }

    fn at_tensor_op(&mut self) -> bool {
        self.ws();
        let rest: String = self.src[self.pos..].iter().take(3).collect();
        rest == "(x)" || rest.starts_with('⊗')
    }

    fn eat_tensor_op(&mut self) {
        if self.src[self.pos] == '⊗' {
            self.pos += 1;
        } else {
            self.pos += 3;
        }
    }

    fn starts_operand(&mut self) -> bool {
        if self.at_tensor_op() {
            return false;
        }
        matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '(' || is_ident_start(c))
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = self.tensor_term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    let r = self.tensor_term()?;
                    acc = self.add(acc, r, false)?;
                }
                Some('-') => {
                    self.pos += 1;
                    let r = self.tensor_term()?;
                    acc = self.add(acc, r, true)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn tensor_term(&mut self) -> Result<Value> {
        let mut acc = self.term()?;
        while self.at_tensor_op() {
            let at = self.pos;
            self.eat_tensor_op();
            let r = self.term()?;
            acc = match (self.to_alg(acc), self.to_alg(r)) {
                (Some(x), Some(y)) => Value::Tensor(self.ev.su.tensor_product(&x, &y)),
                _ => return Err(QpbError::Parse { pos: at, msg: "tensor product needs algebra elements".into() }),
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    let r = self.unary()?;
                    acc = self.mul(acc, r)?;
                }
                Some('/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let r = self.unary()?;
                    let Value::Scalar(c) = r else {
                        return Err(QpbError::Parse { pos: at, msg: "division by a non-scalar".into() });
                    };
                    acc = self.mul(acc, Value::Scalar(c.inv()?))?;
                }
                _ if self.starts_operand() => {
                    let r = self.unary()?;
                    acc = self.mul(acc, r)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Value> {
        if self.peek() == Some('-') {
            self.pos += 1;
            let v = self.unary()?;
            return self.mul(Value::Scalar(MuScalar::from_int(-1)), v);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value> {
        let mut base = self.postfix()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let at = self.pos;
            let e = self.int()?;
            base = match base {
                Value::Scalar(c) => Value::Scalar(c.pow(e)?),
                Value::Alg(x) if e >= 0 => Value::Alg(self.ev.su.pow(&x, e as u32)),
                other => {
                    return Err(QpbError::Parse { pos: at, msg: format!("cannot raise {} to power {}", other.kind(), e) })
                }
            };
        }
        Ok(base)
    }

    fn postfix(&mut self) -> Result<Value> {
        let mut v = self.primary()?;
        loop {
            let save = self.pos;
            if self.peek() != Some('*') {
                return Ok(v);
            }
            self.pos += 1;
            if self.starts_operand() {
                self.pos = save;
                return Ok(v);
            }
            v = self.star(v)?;
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&'-') {
            self.pos += 1;
        }
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.src[start..self.pos].iter().collect();
        s.parse().map_err(|_| QpbError::Parse { pos: start, msg: "expected an integer".into() })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c)))
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|c| c.is_alphanumeric() || *c == '_') {
            self.pos += 1;
        }
        self.src[start..self.pos].iter().collect()
    }

    fn primary(&mut self) -> Result<Value> {
        let start = match self.peek() {
            None => return Err(self.err("unexpected end of input")),
            Some(_) => self.pos,
        };
        let c = self.src[self.pos];
        if c == '(' {
            self.pos += 1;
            let v = self.expr()?;
            self.expect(')')?;
            return Ok(v);
        }
        if c.is_ascii_digit() {
            let n = self.int()?;
            return Ok(Value::Scalar(MuScalar::from_int(n)));
        }
        if c == '⊗' {
            return Err(self.err("missing left operand"));
        }
        if !is_ident_start(c) {
            return Err(self.err(&format!("unexpected character '{}'", c)));
        }
        let name = self.ident();
        let su = &self.ev.su;
        let v = match name.as_str() {
            "a" | "α" => Value::Alg(su.alpha()),
            "as" => Value::Alg(su.alpha_star()),
            "g" | "γ" => Value::Alg(su.gamma()),
            "gs" => Value::Alg(su.gamma_star()),
            "mu" | "μ" => Value::Scalar(su.mu()),
            "i" => Value::Scalar(MuScalar::i()),
            "tau" | "τ" => self.key(Key::Tau)?,
            "eta3" | "η₃" => self.key(Key::Eta3)?,
            "eta" | "η" => match self.src.get(self.pos) {
                Some('+') | Some('₊') => {
                    self.pos += 1;
                    self.key(Key::EtaPlus)?
                }
                Some('-') | Some('₋') => {
                    self.pos += 1;
                    self.key(Key::EtaMinus)?
                }
                _ => return Err(QpbError::Parse { pos: start, msg: "expected eta+, eta3 or eta-".into() }),
            },
            "xi" | "ξ" => {
                self.expect('[')?;
                let n = self.int()?;
                self.expect(',')?;
                let k = self.int()?;
                self.expect(']')?;
                if k < 0 {
                    return Err(QpbError::Parse { pos: start, msg: "xi index k must be nonnegative".into() });
                }
                self.key(Key::Xi(n as i32, k as u32))?
            }
            "phi" | "eps" | "kappa" | "ad" | "pi" | "circ" | "varpi" => return self.call(&name, start),
            _ => return Err(QpbError::Parse { pos: start, msg: format!("unknown identifier '{}'", name) }),
        };
        Ok(v)
    }

    fn key(&mut self, k: Key) -> Result<Value> {
        let tag = self.ev.default_calculus.clone();
        let calc = self.ev.calculus(&tag)?;
        let x = GammaInv::basis(k);
        calc.check(&x)?;
        Ok(Value::Inv(canonical_tag(&tag).to_string(), x))
    }

    fn call(&mut self, name: &str, start: usize) -> Result<Value> {
        let mut tag = None;
        if name == "pi" && self.src.get(self.pos) == Some(&'@') {
            self.pos += 1;
            let s = self.pos;
            while self.src.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == '-') {
                self.pos += 1;
            }
            tag = Some(self.src[s..self.pos].iter().collect::<String>());
        }
        self.expect('(')?;
        let arg = self.expr()?;
        let second = if name == "circ" {
            self.expect(',')?;
            Some(self.expr()?)
        } else {
            None
        };
        self.expect(')')?;
        let bad = |what: &str| QpbError::Parse { pos: start, msg: format!("{} expects {}", name, what) };
        match name {
            "phi" | "eps" | "kappa" | "ad" | "pi" => {
                let x = self.to_alg(arg).ok_or_else(|| bad("an algebra element"))?;
                let su = &self.ev.su;
                Ok(match name {
                    "phi" => Value::Tensor(su.comult(&x)),
                    "eps" => Value::Scalar(su.counit(&x)),
                    "kappa" => Value::Alg(su.antipode(&x)),
                    "ad" => Value::Tensor(su.ad(&x)),
                    _ => {
                        let tag = tag.unwrap_or_else(|| self.ev.default_calculus.clone());
                        let calc = self.ev.calculus(&tag)?;
                        let x = calc.su().fix_elem(&x)?;
                        Value::Inv(canonical_tag(&tag).to_string(), calc.pi(&x)?)
                    }
                })
            }
            "circ" => {
                let Value::Inv(tag, th) = arg else { return Err(bad("an invariant form and an algebra element")) };
                let a = self.to_alg(second.expect("second argument")).ok_or_else(|| bad("an algebra element second"))?;
                let calc = self.ev.calculus(&tag)?;
                let a = calc.su().fix_elem(&a)?;
                Ok(Value::Inv(tag, calc.circ(&th, &a)?))
            }
            _ => {
                let Value::Inv(tag, th) = arg else { return Err(bad("an invariant form")) };
                let calc = self.ev.calculus(&tag)?;
                Ok(Value::InvA(tag, calc.varpi(&th)?))
            }
        }
    }

    fn to_alg(&self, v: Value) -> Option<Elem> {
        match v {
            Value::Scalar(c) => Some(self.ev.su.scalar(c)),
            Value::Alg(e) => Some(e),
            _ => None,
        }
    }

    fn star(&mut self, v: Value) -> Result<Value> {
        let su = &self.ev.su;
        Ok(match v {
            Value::Scalar(c) => Value::Scalar(c.conj()),
            Value::Alg(e) => Value::Alg(su.star(&e)),
            Value::Tensor(t) => Value::Tensor(su.tensor_map(&t, |m| su.star_mono(m), |m| su.star_mono(m))),
            Value::Inv(tag, x) => {
                let calc = self.ev.calculus(&tag)?;
                Value::Inv(tag, calc.star(&x)?)
            }
            Value::InvA(..) => return Err(self.err("no involution on this value")),
        })
    }

    fn add(&mut self, a: Value, b: Value, minus: bool) -> Result<Value> {
        let b = if minus { self.mul(Value::Scalar(MuScalar::from_int(-1)), b)? } else { b };
        Ok(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x + &y),
            (Value::Tensor(x), Value::Tensor(y)) => Value::Tensor(x.add(&y)),
            (Value::Inv(s, x), Value::Inv(t, y)) if s == t => Value::Inv(s, x.add(&y)),
            (Value::InvA(s, x), Value::InvA(t, y)) if s == t => Value::InvA(s, x.add(&y)),
            (a, b) => match (self.to_alg(a.clone()), self.to_alg(b.clone())) {
                (Some(x), Some(y)) => Value::Alg(x.add(&y)),
                _ => return Err(self.err(&format!("cannot add {} and {}", a.kind(), b.kind()))),
            },
        })
    }

    fn mul(&mut self, a: Value, b: Value) -> Result<Value> {
        Ok(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x * &y),
            (Value::Scalar(c), v) | (v, Value::Scalar(c)) => match v {
                Value::Alg(e) => Value::Alg(e.scale(&c)),
                Value::Tensor(t) => Value::Tensor(t.scale(&c)),
                Value::Inv(s, x) => Value::Inv(s, x.scale(&c)),
                Value::InvA(s, x) => Value::InvA(s, x.scale(&c)),
                Value::Scalar(_) => unreachable!(),
            },
            (Value::Alg(x), Value::Alg(y)) => Value::Alg(self.ev.su.mul(&x, &y)),
            (Value::Tensor(x), Value::Tensor(y)) => Value::Tensor(self.ev.su.mul2(&x, &y)),
            (a, b) => return Err(self.err(&format!("cannot multiply {} by {}", a.kind(), b.kind()))),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(t: &str) -> String {
        Evaluator::new(MuParam::Generic, "4d").eval(t).unwrap().to_text(false)
    }

    #[test]
    fn star_versus_product() {
        assert_eq!(ev("g*a"), "mu^-1 * a g");
        assert_eq!(ev("a*"), "as");
        assert_eq!(ev("kappa(g)"), "-mu * g");
        assert_eq!(ev("pi@4d(a - a*)"), "eta3");
    }
}
