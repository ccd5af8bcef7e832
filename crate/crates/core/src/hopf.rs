//! The polynomial Hopf *-algebra of quantum SU(2).
//!
//! Elements are kept in the PBW basis `α^n γ^k γ*^r` (with `α^{-n} = α*^n`).
//! All structure maps live on [`Su2`], which also carries the value of the
//! deformation parameter and the memo tables for products and coproducts.
//!
//! Antipode on generators (derived from `m(κ⊗id)φ = 1ε`, see the tests):
//!
//! | x   | κ(x)      |
//! |-----|-----------|
//! | α   | α*        |
//! | α*  | α         |
//! | γ   | −μ γ      |
//! | γ*  | −μ⁻¹ γ*   |

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use crate::error::{QpbError, Result};
use crate::lin::Lin;
use crate::scalar::{q_int_number, GaussRational, MuScalar};

/// PBW monomial `α^n γ^k γ*^r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mono {
    pub n: i32,
    pub k: u32,
    pub r: u32,
}

impl Mono {
    pub const ONE: Mono = Mono { n: 0, k: 0, r: 0 };
    pub const A: Mono = Mono { n: 1, k: 0, r: 0 };
    pub const AS: Mono = Mono { n: -1, k: 0, r: 0 };
    pub const G: Mono = Mono { n: 0, k: 1, r: 0 };
    pub const GS: Mono = Mono { n: 0, k: 0, r: 1 };

    pub fn new(n: i32, k: u32, r: u32) -> Mono {
        Mono { n, k, r }
    }

    /// Generator length `|n| + k + r`.
    pub fn degree(&self) -> u32 {
        self.n.unsigned_abs() + self.k + self.r
    }

    /// Weight of the left U(1) action: `n − k + r`.
    pub fn left_weight(&self) -> i64 {
        self.n as i64 - self.k as i64 + self.r as i64
    }

    pub fn is_one(&self) -> bool {
        *self == Mono::ONE
    }

    /// The monomial as a word in generators, `(letter, power)` pairs.
    fn letters(&self, unicode: bool) -> Vec<(&'static str, u32)> {
        let (a, a_s, g, g_s) = if unicode { ("α", "α*", "γ", "γ*") } else { ("a", "as", "g", "gs") };
        let mut out = Vec::new();
        if self.n > 0 {
            out.push((a, self.n as u32));
        } else if self.n < 0 {
            out.push((a_s, self.n.unsigned_abs()));
        }
        if self.k > 0 {
            out.push((g, self.k));
        }
        if self.r > 0 {
            out.push((g_s, self.r));
        }
        out
    }

    pub fn to_text(&self, unicode: bool) -> String {
        if self.is_one() {
            return "1".into();
        }
        self.letters(unicode)
            .into_iter()
            .map(|(l, p)| if p == 1 { l.to_string() } else { format!("{}^{}", l, p) })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Last PBW letter and the remaining prefix.
    pub fn split_last(&self) -> Option<(Mono, Mono)> {
        if self.r > 0 {
            Some((Mono::new(self.n, self.k, self.r - 1), Mono::GS))
        } else if self.k > 0 {
            Some((Mono::new(self.n, self.k - 1, 0), Mono::G))
        } else if self.n > 0 {
            Some((Mono::new(self.n - 1, 0, 0), Mono::A))
        } else if self.n < 0 {
            Some((Mono::new(self.n + 1, 0, 0), Mono::AS))
        } else {
            None
        }
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Mono) -> Ordering {
        (self.degree(), self.n, self.k, self.r).cmp(&(o.degree(), o.n, o.k, o.r))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Mono) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(false))
    }
}

/// An element of the algebra: a finite combination of PBW monomials.
pub type Elem = Lin<Mono>;
/// Degree-two tensors `A ⊗ A`.
pub type Tensor2 = Lin<(Mono, Mono)>;
/// Degree-three tensors `A ⊗ A ⊗ A`.
pub type Tensor3 = Lin<(Mono, Mono, Mono)>;

/// How the deformation parameter is treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MuParam {
    /// μ is a transcendental indeterminate.
    Generic,
    /// μ is specialized to −1.
    MinusOne,
}

/// Structure maps of the Hopf *-algebra for a fixed treatment of μ.
#[derive(Debug)]
pub struct Su2 {
    param: MuParam,
    mul_memo: Mutex<HashMap<(Mono, Mono), Elem>>,
    phi_memo: Mutex<HashMap<Mono, Tensor2>>,
    ad_memo: Mutex<HashMap<Mono, Tensor2>>,
}

/// Formats `coefficient * word` sums, e.g. `1 - mu^2 * g gs`.
pub fn format_sum<I: IntoIterator<Item = (MuScalar, String)>>(terms: I) -> String {
    let mut out = String::new();
    for (c, word) in terms {
        let piece = if word == "1" {
            c.to_text()
        } else if c.is_one() {
            word
        } else if (-&c).is_one() {
            format!("-{}", word)
        } else if c.is_compound() {
            let t = c.to_text();
            if t.starts_with('-') && !(-&c).is_compound() {
                format!("{} * {}", t, word)
            } else {
                format!("({}) * {}", t, word)
            }
        } else {
            format!("{} * {}", c.to_text(), word)
        };
        if out.is_empty() {
            out = piece;
        } else if let Some(rest) = piece.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&piece);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

pub fn elem_to_text(e: &Elem, unicode: bool) -> String {
    format_sum(e.iter().map(|(m, c)| (c.clone(), m.to_text(unicode))))
}

pub fn tensor_to_text(t: &Tensor2, unicode: bool) -> String {
    let sep = if unicode { " ⊗ " } else { " (x) " };
    format_sum(t.iter().map(|((a, b), c)| (c.clone(), format!("{}{}{}", a.to_text(unicode), sep, b.to_text(unicode)))))
}

impl Su2 {
    pub fn new(param: MuParam) -> Su2 {
        Su2 {
            param,
            mul_memo: Mutex::new(HashMap::new()),
            phi_memo: Mutex::new(HashMap::new()),
            ad_memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn generic() -> Su2 {
        Su2::new(MuParam::Generic)
    }

    pub fn minus_one() -> Su2 {
        Su2::new(MuParam::MinusOne)
    }

    pub fn param(&self) -> MuParam {
        self.param
    }

    /// μ^e in the active coefficient field.
    pub fn mu_pow(&self, e: i64) -> MuScalar {
        match self.param {
            MuParam::Generic => MuScalar::mu_pow(e),
            MuParam::MinusOne => MuScalar::from_int(if e.rem_euclid(2) == 0 { 1 } else { -1 }),
        }
    }

    pub fn mu(&self) -> MuScalar {
        self.mu_pow(1)
    }

    /// Brings a scalar into the active field (specializes μ when needed).
    pub fn fix(&self, c: &MuScalar) -> Result<MuScalar> {
        match self.param {
            MuParam::Generic => Ok(c.clone()),
            MuParam::MinusOne => c.specialize_scalar(&GaussRational::from_int(-1)),
        }
    }

    pub fn fix_elem(&self, e: &Elem) -> Result<Elem> {
        let mut out = Elem::zero();
        for (m, c) in e.iter() {
            out.add_term(*m, self.fix(c)?);
        }
        Ok(out)
    }

    /// q-integer n_μ in the active field.
    pub fn q_number(&self, n: u32) -> MuScalar {
        self.fix(&q_int_number(n)).expect("q-integers are polynomial")
    }

    pub fn one(&self) -> Elem {
        Elem::basis(Mono::ONE)
    }

    pub fn scalar(&self, c: MuScalar) -> Elem {
        Elem::single(Mono::ONE, c)
    }

    pub fn mono(&self, n: i32, k: u32, r: u32) -> Elem {
        Elem::basis(Mono::new(n, k, r))
    }

    pub fn alpha(&self) -> Elem {
        Elem::basis(Mono::A)
    }

    pub fn alpha_star(&self) -> Elem {
        Elem::basis(Mono::AS)
    }

    pub fn gamma(&self) -> Elem {
        Elem::basis(Mono::G)
    }

    pub fn gamma_star(&self) -> Elem {
        Elem::basis(Mono::GS)
    }

    /// `α^p α^q` as `α^{p+q}·Σ_j c_j x^j` with `x = γγ*` to the right.
    fn alpha_product(&self, p: i32, q: i32) -> (i32, Vec<MuScalar>) {
        if p >= 0 && q >= 0 || p <= 0 && q <= 0 {
            return (p + q, vec![MuScalar::one()]);
        }
        let mut poly = vec![MuScalar::one()];
        let mut mul_factor = |c: MuScalar| {
            // poly *= (1 - c x)
            let mut next = vec![MuScalar::zero(); poly.len() + 1];
            for (j, pj) in poly.iter().enumerate() {
                next[j] = &next[j] + pj;
                next[j + 1] = &next[j + 1] - &(pj * &c);
            }
            poly = next;
        };
        if p > 0 {
            let (a, b) = (p as i64, -q as i64);
            for i in 0..a.min(b) {
                mul_factor(self.mu_pow(2 * (b - i)));
            }
        } else {
            let (a, b) = (-p as i64, q as i64);
            for i in 0..a.min(b) {
                mul_factor(self.mu_pow(-2 * (b - 1 - i)));
            }
        }
        (p + q, poly)
    }

    pub fn mul_mono(&self, a: Mono, b: Mono) -> Elem {
        if a.is_one() {
            return Elem::basis(b);
        }
        if b.is_one() {
            return Elem::basis(a);
        }
        if let Some(v) = self.mul_memo.lock().unwrap().get(&(a, b)) {
            return v.clone();
        }
        // γ^k γ*^r α^n = μ^{-(k+r)n} α^n γ^k γ*^r
        let swap = self.mu_pow(-((a.k + a.r) as i64) * b.n as i64);
        let (n, poly) = self.alpha_product(a.n, b.n);
        let mut out = Elem::zero();
        for (j, c) in poly.into_iter().enumerate() {
            let j = j as u32;
            out.add_term(Mono::new(n, a.k + b.k + j, a.r + b.r + j), &c * &swap);
        }
        self.mul_memo.lock().unwrap().insert((a, b), out.clone());
        out
    }

    pub fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        let mut out = Elem::zero();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                out.add_scaled(&self.mul_mono(*a, *b), &(ca * cb));
            }
        }
        out
    }

    pub fn mul_all(&self, xs: &[Elem]) -> Elem {
        xs.iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    pub fn pow(&self, x: &Elem, e: u32) -> Elem {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, x))
    }

    pub fn star_mono(&self, m: Mono) -> Elem {
        // (α^n γ^k γ*^r)* = γ^r γ*^k α^{-n}
        self.mul_mono(Mono::new(0, m.r, m.k), Mono::new(-m.n, 0, 0))
    }

    pub fn star(&self, x: &Elem) -> Elem {
        let mut out = Elem::zero();
        for (m, c) in x.iter() {
            out.add_scaled(&self.star_mono(*m), &c.conj());
        }
        out
    }

    pub fn counit_mono(&self, m: Mono) -> MuScalar {
        if m.k == 0 && m.r == 0 {
            MuScalar::one()
        } else {
            MuScalar::zero()
        }
    }

    pub fn counit(&self, x: &Elem) -> MuScalar {
        x.iter()
            .filter(|(m, _)| m.k == 0 && m.r == 0)
            .fold(MuScalar::zero(), |acc, (_, c)| &acc + c)
    }

    /// Coproduct on generators, read off from the fundamental matrix
    /// `u = [[α, −μγ*], [γ, α*]]` via `φ(u_ij) = Σ_k u_ik ⊗ u_kj`.
    fn comult_generator(&self, g: Mono) -> Tensor2 {
        let mu = self.mu();
        match g {
            Mono::A => Tensor2::from_terms([((Mono::A, Mono::A), MuScalar::one()), ((Mono::GS, Mono::G), -&mu)]),
            Mono::G => Tensor2::from_terms([((Mono::G, Mono::A), MuScalar::one()), ((Mono::AS, Mono::G), MuScalar::one())]),
            Mono::GS => Tensor2::from_terms([((Mono::A, Mono::GS), MuScalar::one()), ((Mono::GS, Mono::AS), MuScalar::one())]),
            Mono::AS => Tensor2::from_terms([((Mono::AS, Mono::AS), MuScalar::one()), ((Mono::G, Mono::GS), -&mu)]),
            _ => unreachable!("not a generator"),
        }
    }

    pub fn mul2(&self, x: &Tensor2, y: &Tensor2) -> Tensor2 {
        let mut out = Tensor2::zero();
        for ((a1, a2), ca) in x.iter() {
            for ((b1, b2), cb) in y.iter() {
                let l = self.mul_mono(*a1, *b1);
                let r = self.mul_mono(*a2, *b2);
                let c = ca * cb;
                for (m1, c1) in l.iter() {
                    let c1 = &c * c1;
                    for (m2, c2) in r.iter() {
                        out.add_term((*m1, *m2), &c1 * c2);
                    }
                }
            }
        }
        out
    }

    pub fn comult_mono(&self, m: Mono) -> Tensor2 {
        if m.is_one() {
            return Tensor2::basis((Mono::ONE, Mono::ONE));
        }
        if let Some(v) = self.phi_memo.lock().unwrap().get(&m) {
            return v.clone();
        }
        let (prefix, g) = m.split_last().unwrap();
        let out = self.mul2(&self.comult_mono(prefix), &self.comult_generator(g));
        self.phi_memo.lock().unwrap().insert(m, out.clone());
        out
    }

    pub fn comult(&self, x: &Elem) -> Tensor2 {
        x.map_lin(|m| self.comult_mono(*m))
    }

    /// `(id⊗φ)φ`.
    pub fn comult2(&self, x: &Elem) -> Tensor3 {
        let mut out = Tensor3::zero();
        for ((a, b), c) in self.comult(x).iter() {
            for ((b1, b2), c2) in self.comult_mono(*b).iter() {
                out.add_term((*a, *b1, *b2), c * c2);
            }
        }
        out
    }

    /// Antipode on a monomial: `κ(γ*)^r κ(γ)^k κ(α)^n`.
    pub fn antipode_mono(&self, m: Mono) -> Elem {
        let kg = self.gamma().scale(&(-&self.mu()));
        let kgs = self.gamma_star().scale(&(-&self.mu_pow(-1)));
        let ka = Elem::basis(Mono::new(-m.n, 0, 0));
        let mut out = self.pow(&kgs, m.r);
        out = self.mul(&out, &self.pow(&kg, m.k));
        self.mul(&out, &ka)
    }

    pub fn antipode(&self, x: &Elem) -> Elem {
        x.map_lin(|m| self.antipode_mono(*m))
    }

    /// `ad(a) = a⁽²⁾ ⊗ κ(a⁽¹⁾) a⁽³⁾`.
    pub fn ad_mono(&self, m: Mono) -> Tensor2 {
        if let Some(v) = self.ad_memo.lock().unwrap().get(&m) {
            return v.clone();
        }
        let mut out = Tensor2::zero();
        for ((a1, a2, a3), c) in self.comult2(&Elem::basis(m)).iter() {
            let right = self.mul(&self.antipode_mono(*a1), &Elem::basis(*a3));
            for (mr, cr) in right.iter() {
                out.add_term((*a2, *mr), c * cr);
            }
        }
        self.ad_memo.lock().unwrap().insert(m, out.clone());
        out
    }

    pub fn ad(&self, x: &Elem) -> Tensor2 {
        x.map_lin(|m| self.ad_mono(*m))
    }

    /// Value of the Lie functional X: `n/2` on `α^n`, zero on monomials with γ-factors.
    pub fn x_mono(&self, m: Mono) -> MuScalar {
        if m.k == 0 && m.r == 0 {
            MuScalar::from_frac(m.n as i64, 2)
        } else {
            MuScalar::zero()
        }
    }

    pub fn x_eval(&self, x: &Elem) -> MuScalar {
        x.iter().fold(MuScalar::zero(), |acc, (m, c)| &acc + &(c * &self.x_mono(*m)))
    }

    /// `ℓ_X = −(X⊗id)φ`.
    pub fn ell_x(&self, x: &Elem) -> Elem {
        let mut out = Elem::zero();
        for ((a, b), c) in self.comult(x).iter() {
            out.add_term(*b, -(c * &self.x_mono(*a)));
        }
        out
    }

    /// Evaluation of the character with `g(α) = z` as a Laurent polynomial in z.
    pub fn char_eval_formal(&self, x: &Elem) -> Lin<i64> {
        Lin::from_terms(x.iter().filter(|(m, _)| m.k == 0 && m.r == 0).map(|(m, c)| (m.n as i64, c.clone())))
    }

    pub fn char_eval(&self, z: &Character, x: &Elem) -> Result<MuScalar> {
        let l = self.char_eval_formal(x);
        match &z.z {
            UnitZ::Formal => match l.len() {
                0 => Ok(MuScalar::zero()),
                1 if l.keys().next() == Some(&0) => Ok(l.coeff(&0)),
                _ => Err(QpbError::Invalid("formal character value is not a scalar".into())),
            },
            UnitZ::Concrete(v) => {
                let mut acc = MuScalar::zero();
                for (e, c) in l.iter() {
                    acc = &acc + &(c * &MuScalar::constant(v.pow(*e)?));
                }
                Ok(acc)
            }
        }
    }

    /// Evaluates `(g⊗f)` on a tensor.
    pub fn char_eval2(&self, g: &Character, f: &Character, t: &Tensor2) -> Result<MuScalar> {
        let mut acc = MuScalar::zero();
        for ((a, b), c) in t.iter() {
            let va = self.char_eval(g, &Elem::basis(*a))?;
            if va.is_zero() {
                continue;
            }
            acc = &acc + &(&(c * &va) * &self.char_eval(f, &Elem::basis(*b))?);
        }
        Ok(acc)
    }

    /// Convolution product `gf = (g⊗f)φ`, determined by its value on α.
    pub fn char_mul(&self, g: &Character, f: &Character) -> Result<Character> {
        let v = self.char_eval2(g, f, &self.comult(&self.alpha()))?;
        Character::from_scalar(&v)
    }

    /// Inverse `g⁻¹ = gκ`.
    pub fn char_inv(&self, g: &Character) -> Result<Character> {
        let v = self.char_eval(g, &self.antipode(&self.alpha()))?;
        Character::from_scalar(&v)
    }

    /// Haar integral restricted to the U(1)-invariant subalgebra: only
    /// `(γγ*)^k` contributes, with value `1/(k+1)_μ`.
    pub fn q_int_lift(&self, x: &Elem) -> Result<MuScalar> {
        let mut acc = MuScalar::zero();
        for (m, c) in x.iter() {
            if m.left_weight() != 0 {
                return Err(QpbError::Invalid(format!("monomial {} has nonzero left weight", m)));
            }
            if m.n == 0 {
                acc = &acc + &c.div(&self.q_number(m.k + 1))?;
            }
        }
        Ok(acc)
    }

    /// `∫ Σ c_j x^j = Σ c_j/(j+1)_μ`.
    pub fn q_int_poly(&self, coeffs: &[MuScalar]) -> Result<MuScalar> {
        let mut acc = MuScalar::zero();
        for (j, c) in coeffs.iter().enumerate() {
            acc = &acc + &c.div(&self.q_number(j as u32 + 1))?;
        }
        Ok(acc)
    }

    /// Elements of the tensor square as pairs for applying maps leg-wise.
    pub fn tensor_map<F, G>(&self, t: &Tensor2, f: F, g: G) -> Tensor2
    where
        F: Fn(Mono) -> Elem,
        G: Fn(Mono) -> Elem,
    {
        let mut out = Tensor2::zero();
        for ((a, b), c) in t.iter() {
            let fa = f(*a);
            let gb = g(*b);
            for (x, cx) in fa.iter() {
                for (y, cy) in gb.iter() {
                    out.add_term((*x, *y), &(c * cx) * cy);
                }
            }
        }
        out
    }

    pub fn tensor_product(&self, x: &Elem, y: &Elem) -> Tensor2 {
        let mut out = Tensor2::zero();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                out.add_term((*a, *b), ca * cb);
            }
        }
        out
    }

    /// Multiplication map `A⊗A → A`.
    pub fn multiply_legs(&self, t: &Tensor2) -> Elem {
        let mut out = Elem::zero();
        for ((a, b), c) in t.iter() {
            out.add_scaled(&self.mul_mono(*a, *b), c);
        }
        out
    }
}

/// Unit parameter of a U(1) character.
pub use crate::scalar::UnitZ;

/// A classical point: the *-character with `g(α) = z`, `g(γ) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    pub z: UnitZ,
}

impl Character {
    pub fn formal() -> Character {
        Character { z: UnitZ::Formal }
    }

    /// The counit.
    pub fn identity() -> Character {
        Character { z: UnitZ::Concrete(GaussRational::one()) }
    }

    pub fn concrete(z: GaussRational) -> Result<Character> {
        Ok(Character { z: UnitZ::concrete(z)? })
    }

    pub fn from_scalar(v: &MuScalar) -> Result<Character> {
        let c = v.as_constant().ok_or_else(|| QpbError::NotUnit(v.to_text()))?;
        Character::concrete(c)
    }

    pub fn value(&self) -> Option<&GaussRational> {
        match &self.z {
            UnitZ::Formal => None,
            UnitZ::Concrete(v) => Some(v),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> MuScalar {
        MuScalar::parse(t).unwrap()
    }

    #[test]
    fn relations() {
        let h = Su2::generic();
        let ga = h.mul(&h.gamma(), &h.alpha());
        assert_eq!(ga, Elem::single(Mono::new(1, 1, 0), s("mu^-1")));
        let aas = h.mul(&h.alpha(), &h.alpha_star());
        assert_eq!(aas, Elem::from_terms([(Mono::ONE, s("1")), (Mono::new(0, 1, 1), s("-mu^2"))]));
        let asa = h.mul(&h.alpha_star(), &h.alpha());
        assert_eq!(asa, Elem::from_terms([(Mono::ONE, s("1")), (Mono::new(0, 1, 1), s("-1"))]));
    }

    #[test]
    fn star_examples() {
        let h = Su2::generic();
        let ag = h.mono(1, 1, 0);
        assert_eq!(h.star(&ag), Elem::single(Mono::new(-1, 0, 1), s("mu")));
        assert_eq!(h.star(&h.one()), h.one());
    }

    #[test]
    fn coproduct_examples() {
        let h = Su2::generic();
        let pa = h.comult(&h.alpha());
        assert_eq!(pa, Tensor2::from_terms([((Mono::A, Mono::A), s("1")), ((Mono::GS, Mono::G), s("-mu"))]));
        assert_eq!(h.comult(&h.one()), Tensor2::basis((Mono::ONE, Mono::ONE)));
        assert_eq!(h.counit(&h.mono(1, 1, 1)), MuScalar::zero());
    }

    #[test]
    fn antipode_examples() {
        let h = Su2::generic();
        assert_eq!(h.antipode(&h.gamma()), h.gamma().scale(&s("-mu")));
        let k2 = h.antipode(&h.antipode(&h.gamma()));
        assert_eq!(k2, h.gamma().scale(&s("mu^2")));
        assert_eq!(h.antipode(&h.one()), h.one());
    }

    #[test]
    fn ad_examples() {
        let h = Su2::generic();
        assert_eq!(h.ad(&h.one()), Tensor2::basis((Mono::ONE, Mono::ONE)));
        let inv = h.alpha().scale(&s("mu^2")).add(&h.alpha_star());
        assert_eq!(h.ad(&inv), h.tensor_product(&inv, &h.one()));
        let expect = Tensor2::from_terms([
            ((Mono::G, Mono::new(2, 0, 0)), s("1")),
            ((Mono::AS, Mono::new(1, 1, 0)), s("1")),
            ((Mono::A, Mono::new(1, 1, 0)), s("-1")),
            ((Mono::GS, Mono::new(0, 2, 0)), s("mu^2")),
        ]);
        assert_eq!(h.ad(&h.gamma()), expect);
    }

    #[test]
    fn characters() {
        let h = Su2::generic();
        let z = Character::concrete(GaussRational::from_parts((3, 5), (4, 5))).unwrap();
        let w = Character::concrete(GaussRational::i()).unwrap();
        assert!(h.char_eval(&z, &h.mono(1, 1, 0)).unwrap().is_zero());
        let zz = h.char_eval(&z, &h.mono(-2, 0, 0)).unwrap();
        assert_eq!(zz, MuScalar::constant(GaussRational::from_parts((3, 5), (4, 5)).conj().pow(2).unwrap()));
        let zw = h.char_mul(&z, &w).unwrap();
        assert_eq!(zw.value().unwrap(), &(GaussRational::from_parts((3, 5), (4, 5)) * GaussRational::i()));
        let zi = h.char_inv(&z).unwrap();
        assert_eq!(zi.value().unwrap(), &GaussRational::from_parts((3, 5), (-4, 5)));
        assert_eq!(h.char_mul(&Character::identity(), &z).unwrap(), z);
        assert_eq!(h.char_eval_formal(&h.mono(-2, 0, 0)), Lin::basis(-2i64));
    }

    #[test]
    fn lie_functional() {
        let h = Su2::generic();
        assert_eq!(h.x_eval(&h.mono(2, 0, 0)), s("1"));
        assert!(h.x_eval(&h.mono(0, 1, 1)).is_zero());
        assert_eq!(h.ell_x(&h.gamma()), h.gamma().scale(&s("1/2")));
    }

    #[test]
    fn weights_and_integral() {
        let h = Su2::generic();
        assert_eq!(Mono::new(1, 1, 0).left_weight(), 0);
        assert_eq!(Mono::G.left_weight(), -1);
        assert_eq!(h.q_int_poly(&[s("1")]).unwrap(), s("1"));
        assert_eq!(h.q_int_poly(&[s("0"), s("1")]).unwrap(), s("1/(1+mu^2)"));
        assert!(h.q_int_lift(&h.mono(1, 1, 0)).unwrap().is_zero());
        assert!(h.q_int_lift(&h.gamma()).is_err());
    }

    #[test]
    fn minus_one_specialization() {
        let h = Su2::minus_one();
        // at μ = −1, αγ = −γα, so γα = −αγ
        assert_eq!(h.mul(&h.gamma(), &h.alpha()), h.mono(1, 1, 0).scale(&s("-1")));
    }

    #[test]
    fn printing() {
        let h = Su2::generic();
        let ga = h.mul(&h.gamma(), &h.alpha());
        assert_eq!(elem_to_text(&ga, false), "mu^-1 * a g");
        assert_eq!(elem_to_text(&h.antipode(&h.gamma()), false), "-mu * g");
        let aas = h.mul(&h.alpha(), &h.alpha_star());
        assert_eq!(elem_to_text(&aas, false), "1 - mu^2 * g gs");
    }
}
