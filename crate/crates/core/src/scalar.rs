//! Exact coefficient arithmetic.
//!
//! Three layers: [`GaussRational`] (the field ℚ(i)), [`UPoly`] (univariate
//! polynomials in μ over ℚ(i)) and [`MuScalar`] (the rational function field
//! ℚ(i)(μ), kept in reduced canonical form so that structural equality is
//! field equality).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{QpbError, Result};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A Gaussian rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRational { re, im }
    }

    pub fn zero() -> Self {
        GaussRational::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        GaussRational::from_int(1)
    }

    pub fn i() -> Self {
        GaussRational::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        GaussRational::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        GaussRational::new(rat(n, d), BigRational::zero())
    }

    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        GaussRational::new(rat(re.0, re.1), rat(im.0, im.1))
    }

    pub fn from_rational(r: BigRational) -> Self {
        GaussRational::new(r, BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRational::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(QpbError::DivisionByZero);
        }
        let n = self.norm_sq();
        Ok(GaussRational::new(&self.re / &n, -&self.im / &n))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = GaussRational::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Canonical text form, e.g. `-1/2`, `i`, `(3+4*i)/5`.
    pub fn to_text(&self) -> String {
        if self.im.is_zero() {
            return fmt_rat(&self.re);
        }
        if self.re.is_zero() {
            let im = &self.im;
            if im.is_one() {
                return "i".into();
            }
            if (-im.clone()).is_one() {
                return "-i".into();
            }
            if im.denom().is_one() {
                return format!("{}*i", im.numer());
            }
            return format!("{}*i/{}", im.numer(), im.denom());
        }
        let l = self.re.denom().lcm(self.im.denom());
        let a = (&self.re * BigRational::from_integer(l.clone())).to_integer();
        let b = (&self.im * BigRational::from_integer(l.clone())).to_integer();
        let ib = if b.is_one() {
            "+i".to_string()
        } else if (-b.clone()).is_one() {
            "-i".to_string()
        } else if b.is_negative() {
            format!("{}*i", b)
        } else {
            format!("+{}*i", b)
        };
        if l.is_one() {
            format!("({}{})", a, ib)
        } else {
            format!("({}{})/{}", a, ib, l)
        }
    }

    /// Whether the printed form needs parentheses when used as a factor.
    fn is_compound(&self) -> bool {
        !self.re.is_zero() && !self.im.is_zero()
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<'a> Add<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn add(self, o: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn sub(self, o: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn mul(self, o: &GaussRational) -> GaussRational {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRational::from_rational(&self.re * &o.re);
        }
        GaussRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational::new(-self.re.clone(), -self.im.clone())
    }
}

/// Univariate polynomial in μ over ℚ(i); `coeffs[j]` multiplies μ^j.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly {
    coeffs: Vec<GaussRational>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: GaussRational) -> Self {
        UPoly::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        UPoly::constant(GaussRational::one())
    }

    pub fn monomial(c: GaussRational, deg: usize) -> Self {
        let mut coeffs = vec![GaussRational::zero(); deg + 1];
        coeffs[deg] = c;
        UPoly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<GaussRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[GaussRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn lead(&self) -> GaussRational {
        self.coeffs.last().cloned().unwrap_or_else(GaussRational::zero)
    }

    /// `Some(k)` when the polynomial is `c·μ^k`.
    pub fn as_monomial(&self) -> Option<usize> {
        let o = self.order()?;
        (o + 1 == self.coeffs.len()).then_some(o)
    }

    pub fn scale(&self, c: &GaussRational) -> UPoly {
        if c.is_zero() {
            return UPoly::zero();
        }
        UPoly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn shift_down(&self, k: usize) -> UPoly {
        UPoly::from_coeffs(self.coeffs[k.min(self.coeffs.len())..].to_vec())
    }

    pub fn shift_up(&self, k: usize) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![GaussRational::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        UPoly { coeffs: v }
    }

    pub fn conj(&self) -> UPoly {
        UPoly::from_coeffs(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    pub fn eval(&self, x: &GaussRational) -> GaussRational {
        let mut acc = GaussRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor (callers check).
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv_lead = d.lead().inv().expect("nonzero lead");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut quot = vec![GaussRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &inv_lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let t = &c * dc;
                rem[i + j] = &rem[i + j] - &t;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (UPoly::from_coeffs(quot), UPoly::from_coeffs(rem))
    }

    pub fn make_monic(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let inv = self.lead().inv().expect("nonzero");
        self.scale(&inv)
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &UPoly, b: &UPoly) -> UPoly {
        if a.is_zero() {
            return b.make_monic();
        }
        if b.is_zero() {
            return a.make_monic();
        }
        if let Some(k) = a.as_monomial() {
            return UPoly::monomial(GaussRational::one(), k.min(b.order().unwrap()));
        }
        if let Some(k) = b.as_monomial() {
            return UPoly::monomial(GaussRational::one(), k.min(a.order().unwrap()));
        }
        // pull out the common power of μ first; the remaining parts are coprime to μ
        let k = a.order().unwrap().min(b.order().unwrap());
        let mut x = a.shift_down(a.order().unwrap()).make_monic();
        let mut y = b.shift_down(b.order().unwrap()).make_monic();
        if x.degree() < y.degree() {
            std::mem::swap(&mut x, &mut y);
        }
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r.make_monic();
        }
        x.make_monic().shift_up(k)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }
}

impl<'a> Add<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn add(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = GaussRational::zero();
        UPoly::from_coeffs(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).unwrap_or(&z);
                    let b = o.coeffs.get(i).unwrap_or(&z);
                    a + b
                })
                .collect(),
        )
    }
}

impl<'a> Sub<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn sub(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = GaussRational::zero();
        UPoly::from_coeffs(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).unwrap_or(&z);
                    let b = o.coeffs.get(i).unwrap_or(&z);
                    a - b
                })
                .collect(),
        )
    }
}

impl<'a> Mul<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn mul(self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![GaussRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = a * b;
                out[i + j] = &out[i + j] + &t;
            }
        }
        UPoly::from_coeffs(out)
    }
}

/// An element of ℚ(i)(μ) in canonical form: coprime numerator and monic
/// denominator, zero stored as `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MuScalar {
    num: UPoly,
    den: UPoly,
}

impl Default for MuScalar {
    fn default() -> Self {
        MuScalar::zero()
    }
}

impl MuScalar {
    pub fn zero() -> Self {
        MuScalar { num: UPoly::zero(), den: UPoly::one() }
    }

    pub fn one() -> Self {
        MuScalar::constant(GaussRational::one())
    }

    pub fn i() -> Self {
        MuScalar::constant(GaussRational::i())
    }

    pub fn mu() -> Self {
        MuScalar::mu_pow(1)
    }

    pub fn constant(c: GaussRational) -> Self {
        MuScalar { num: UPoly::constant(c), den: UPoly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        MuScalar::constant(GaussRational::from_int(n))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        MuScalar::constant(GaussRational::from_frac(n, d))
    }

    /// μ^e for any integer e.
    pub fn mu_pow(e: i64) -> Self {
        let one = GaussRational::one();
        if e >= 0 {
            MuScalar { num: UPoly::monomial(one, e as usize), den: UPoly::one() }
        } else {
            MuScalar { num: UPoly::one(), den: UPoly::monomial(one, (-e) as usize) }
        }
    }

    pub fn poly(p: UPoly) -> Self {
        MuScalar { num: p, den: UPoly::one() }
    }

    /// Builds `num/den`, reducing to canonical form.
    pub fn ratio(num: UPoly, den: UPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(QpbError::DivisionByZero);
        }
        Ok(MuScalar::normalized(num, den))
    }

    fn normalized(num: UPoly, den: UPoly) -> Self {
        if num.is_zero() {
            return MuScalar::zero();
        }
        if den.is_one() {
            return MuScalar { num, den };
        }
        let g = UPoly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lc = den.lead();
        if lc.is_one() {
            MuScalar { num, den }
        } else {
            let inv = lc.inv().expect("nonzero");
            MuScalar { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn numer(&self) -> &UPoly {
        &self.num
    }

    pub fn denom(&self) -> &UPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Whether the value does not depend on μ.
    pub fn as_constant(&self) -> Option<GaussRational> {
        if self.is_zero() {
            return Some(GaussRational::zero());
        }
        (self.num.is_constant() && self.den.is_one()).then(|| self.num.coeffs()[0].clone())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(QpbError::DivisionByZero);
        }
        Ok(MuScalar::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &MuScalar) -> Result<Self> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = MuScalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Complex conjugation: i ↦ −i, μ fixed.
    pub fn conj(&self) -> Self {
        MuScalar { num: self.num.conj(), den: self.den.conj() }
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        if c.is_zero() {
            return MuScalar::zero();
        }
        MuScalar { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Exact evaluation at μ = v.
    pub fn specialize(&self, v: &GaussRational) -> Result<GaussRational> {
        let d = self.den.eval(v);
        if d.is_zero() {
            return Err(QpbError::Pole(format!("{} at mu = {}", self, v)));
        }
        self.num.eval(v).div(&d)
    }

    /// Total specialization that stays in the `MuScalar` type.
    pub fn specialize_scalar(&self, v: &GaussRational) -> Result<MuScalar> {
        Ok(MuScalar::constant(self.specialize(v)?))
    }

    /// Sign of the value for small positive μ: the sign of the lowest-order
    /// real coefficients of numerator and denominator. `None` for non-real values.
    pub fn sign_near_zero(&self) -> Option<Ordering> {
        if self.is_zero() {
            return Some(Ordering::Equal);
        }
        let nc = &self.num.coeffs()[self.num.order()?];
        let dc = &self.den.coeffs()[self.den.order()?];
        if !self.num.coeffs().iter().all(|c| c.is_real()) || !self.den.coeffs().iter().all(|c| c.is_real()) {
            return None;
        }
        let s = nc.re.signum() * dc.re.signum();
        Some(if s.is_positive() { Ordering::Greater } else { Ordering::Less })
    }

    /// Canonical text; parses back to the same value.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        if let Some(k) = self.den.as_monomial() {
            // Laurent polynomial
            let terms: Vec<(i64, GaussRational)> = self
                .num
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (j as i64 - k as i64, c.clone()))
                .collect();
            return fmt_laurent(&terms);
        }
        let n = fmt_laurent(&poly_terms(&self.num));
        let d = fmt_laurent(&poly_terms(&self.den));
        let n = if self.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
            format!("({})", n)
        } else {
            n
        };
        format!("{}/({})", n, d)
    }

    /// Whether the printed form is a sum (needs parentheses as a factor).
    pub fn is_compound(&self) -> bool {
        let t = self.to_text();
        let body = t.strip_prefix('-').unwrap_or(&t);
        body.contains(" + ") || body.contains(" - ") || body.contains('/') && !self.den.is_constant()
    }
}

fn poly_terms(p: &UPoly) -> Vec<(i64, GaussRational)> {
    p.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (j as i64, c.clone()))
        .collect()
}

fn fmt_mu(e: i64) -> String {
    if e == 1 {
        "mu".into()
    } else {
        format!("mu^{}", e)
    }
}

fn fmt_laurent(terms: &[(i64, GaussRational)]) -> String {
    let mut out = String::new();
    for (idx, (e, c)) in terms.iter().enumerate() {
        let neg = c.is_real() && c.re.is_negative();
        let cabs = if neg { -c } else { c.clone() };
        let body = if *e == 0 {
            cabs.to_text()
        } else if cabs.is_one() {
            fmt_mu(*e)
        } else if cabs.is_compound() {
            format!("{}*{}", cabs.to_text(), fmt_mu(*e))
        } else {
            format!("{}*{}", cabs.to_text(), fmt_mu(*e))
        };
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

impl fmt::Display for MuScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<'a> Add<&'a MuScalar> for &'a MuScalar {
    type Output = MuScalar;
    fn add(self, o: &MuScalar) -> MuScalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return MuScalar::normalized(&self.num + &o.num, self.den.clone());
        }
        if let (Some(a), Some(b)) = (self.den.as_monomial(), o.den.as_monomial()) {
            // both denominators are powers of μ
            let k = a.max(b);
            let n = &self.num.shift_up(k - a) + &o.num.shift_up(k - b);
            return MuScalar::normalized(n, UPoly::monomial(GaussRational::one(), k));
        }
        let n = &(&self.num * &o.den) + &(&o.num * &self.den);
        MuScalar::normalized(n, &self.den * &o.den)
    }
}

impl<'a> Sub<&'a MuScalar> for &'a MuScalar {
    type Output = MuScalar;
    fn sub(self, o: &MuScalar) -> MuScalar {
        self + &(-o)
    }
}

impl<'a> Mul<&'a MuScalar> for &'a MuScalar {
    type Output = MuScalar;
    fn mul(self, o: &MuScalar) -> MuScalar {
        if self.is_zero() || o.is_zero() {
            return MuScalar::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return MuScalar { num: &self.num * &o.num, den: UPoly::one() };
        }
        if let (Some(a), Some(b)) = (self.den.as_monomial(), o.den.as_monomial()) {
            return MuScalar::normalized(
                &self.num * &o.num,
                UPoly::monomial(GaussRational::one(), a + b),
            );
        }
        let g1 = UPoly::gcd(&self.num, &o.den);
        let g2 = UPoly::gcd(&o.num, &self.den);
        let a = self.num.div_rem(&g1).0;
        let d = o.den.div_rem(&g1).0;
        let c = o.num.div_rem(&g2).0;
        let b = self.den.div_rem(&g2).0;
        let num = &a * &c;
        let den = &b * &d;
        let lc = den.lead();
        if lc.is_one() {
            MuScalar { num, den }
        } else {
            let inv = lc.inv().expect("nonzero");
            MuScalar { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }
}

impl Neg for &MuScalar {
    type Output = MuScalar;
    fn neg(self) -> MuScalar {
        MuScalar { num: self.num.scale(&GaussRational::from_int(-1)), den: self.den.clone() }
    }
}

impl Neg for MuScalar {
    type Output = MuScalar;
    fn neg(self) -> MuScalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, o: &'a $t) -> $t {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(MuScalar, Add, add);
forward_owned!(MuScalar, Sub, sub);
forward_owned!(MuScalar, Mul, mul);
forward_owned!(GaussRational, Add, add);
forward_owned!(GaussRational, Sub, sub);
forward_owned!(GaussRational, Mul, mul);

/// q-integer n_μ = (1 − μ^{2n})/(1 − μ²) = 1 + μ² + … + μ^{2(n−1)}.
pub fn q_int_number(n: u32) -> MuScalar {
    let mut c = vec![GaussRational::zero(); 2 * n as usize];
    for j in 0..n as usize {
        c[2 * j] = GaussRational::one();
    }
    MuScalar::poly(UPoly::from_coeffs(c))
}

/// q-factorial n_μ! = 1_μ 2_μ … n_μ.
pub fn q_factorial(n: u32) -> MuScalar {
    (1..=n).fold(MuScalar::one(), |acc, j| &acc * &q_int_number(j))
}

/// Unit parameter of a U(1) character: the formal symbol z or a concrete
/// Gaussian rational of modulus one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum UnitZ {
    Formal,
    Concrete(GaussRational),
}

impl UnitZ {
    pub fn concrete(c: GaussRational) -> Result<Self> {
        if !c.norm_sq().is_one() {
            return Err(QpbError::NotUnit(c.to_text()));
        }
        Ok(UnitZ::Concrete(c))
    }
}

impl std::str::FromStr for MuScalar {
    type Err = QpbError;
    fn from_str(s: &str) -> Result<MuScalar> {
        MuScalar::parse(s)
    }
}

impl MuScalar {
    /// Parses the text produced by [`MuScalar::to_text`] and ordinary
    /// arithmetic over `mu`, `i`, integers, `+ - * / ^` and parentheses.
    pub fn parse(s: &str) -> Result<MuScalar> {
        let mut p = ScalarParser { src: s.as_bytes(), pos: 0 };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(v)
    }
}

struct ScalarParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl ScalarParser<'_> {
    fn err(&self, msg: &str) -> QpbError {
        QpbError::Parse { pos: self.pos, msg: msg.to_string() }
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

    fn expr(&mut self) -> Result<MuScalar> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MuScalar> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                b'/' => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    acc = acc.div(&d).map_err(|_| QpbError::Parse { pos: at, msg: "division by zero".into() })?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MuScalar> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MuScalar> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = self.integer()?;
            let e = if neg { -e } else { e };
            return base.pow(e).map_err(|_| self.err("zero to a negative power"));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer out of range"))
    }

    fn atom(&mut self) -> Result<MuScalar> {
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
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap();
                Ok(MuScalar::constant(GaussRational::from_rational(BigRational::from_integer(n))))
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(MuScalar::i())
            }
            _ => {
                let rest = &self.src[self.pos..];
                if rest.starts_with(b"mu") {
                    self.pos += 2;
                    Ok(MuScalar::mu())
                } else if rest.starts_with("\u{3bc}".as_bytes()) {
                    self.pos += "\u{3bc}".len();
                    Ok(MuScalar::mu())
                } else {
                    Err(self.err("expected number, 'i', 'mu' or '('"))
                }
            }
        }
    }
}
