//! q-analysis on the invariant subalgebra Q of the minimal calculus: the
//! twisted functionals X±, the ladder operators K₃, K±, χ_ϖ, one-variable
//! q-calculus, the orthogonal polynomials p_k and unnormalized q-spherical
//! harmonics.
//!
//! Square roots never appear. Harmonic vectors are kept unnormalized and
//! carry their squared norm.

use std::cmp::Ordering;
use std::fmt;

use crate::calculus::{Calculus, GammaInv, Key};
use crate::error::{QpbError, Result};
use crate::hopf::{Elem, Mono, Su2};
use crate::scalar::{q_int_number, MuScalar};

/// Polynomial in one variable with coefficients in ℚ(i)(μ), lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QPoly {
    coeffs: Vec<MuScalar>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<MuScalar>) -> QPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> QPoly {
        QPoly::default()
    }

    pub fn constant(c: MuScalar) -> QPoly {
        QPoly::new(vec![c])
    }

    pub fn one() -> QPoly {
        QPoly::constant(MuScalar::one())
    }

    /// `c·xⁿ`.
    pub fn monomial(c: MuScalar, n: usize) -> QPoly {
        let mut v = vec![MuScalar::zero(); n + 1];
        v[n] = c;
        QPoly::new(v)
    }

    pub fn x() -> QPoly {
        QPoly::monomial(MuScalar::one(), 1)
    }

    pub fn coeffs(&self) -> &[MuScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> MuScalar {
        self.coeffs.get(n).cloned().unwrap_or_else(MuScalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> MuScalar {
        self.coeffs.last().cloned().unwrap_or_else(MuScalar::zero)
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.scale(&MuScalar::from_int(-1)))
    }

    pub fn scale(&self, c: &MuScalar) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut v = vec![MuScalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = &v[i + j] + &(a * b);
            }
        }
        QPoly::new(v)
    }

    /// Coefficientwise complex conjugate (μ is real).
    pub fn conj(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// `p(c·x)`.
    pub fn dilate(&self, c: &MuScalar) -> QPoly {
        let mut f = MuScalar::one();
        let mut v = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            v.push(a * &f);
            f = &f * c;
        }
        QPoly::new(v)
    }

    pub fn eval(&self, x: &MuScalar) -> MuScalar {
        self.coeffs.iter().rev().fold(MuScalar::zero(), |acc, c| &(&acc * x) + c)
    }

    /// The q-derivative `∂xⁿ = n_μ xⁿ⁻¹`.
    pub fn q_diff(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(n, c)| c * &q_int_number(n as u32)).collect())
    }

    pub fn q_diff_n(&self, n: usize) -> QPoly {
        (0..n).fold(self.clone(), |p, _| p.q_diff())
    }

    /// `∫xⁿ = 1/(n+1)_μ`.
    pub fn integrate(&self) -> MuScalar {
        self.coeffs.iter().enumerate().fold(MuScalar::zero(), |acc, (n, c)| {
            &acc + &c.div(&q_int_number(n as u32 + 1)).expect("q-numbers are nonzero")
        })
    }

    /// `(p, q) = ∫p*q`.
    pub fn pair(&self, o: &QPoly) -> MuScalar {
        self.conj().mul(o).integrate()
    }

    /// `p(γγ*)` inside A.
    pub fn at_gamma_gamma_star(&self) -> Elem {
        self.coeffs.iter().enumerate().map(|(n, c)| (Mono::new(0, n as u32, n as u32), c.clone())).collect()
    }

    pub fn to_text(&self) -> String {
        let terms = self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(n, c)| {
            let var = match n {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{}", n),
            };
            (c.clone(), var)
        });
        crate::hopf::format_sum(terms)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// The character χ with χ(α)=1/μ, χ(α*)=μ, χ(γ)=χ(γ*)=0.
pub fn chi_mono(su: &Su2, m: Mono) -> MuScalar {
    if m.k + m.r > 0 {
        MuScalar::zero()
    } else {
        su.mu_pow(-(m.n as i64))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    Plus,
    Minus,
}

/// `X±` on a PBW monomial, from the twisted Leibniz rule.
pub fn x_pm_mono(su: &Su2, which: Ladder, m: Mono) -> MuScalar {
    let Some((w, g)) = m.split_last() else { return MuScalar::zero() };
    let on_gen = match (which, g) {
        (Ladder::Plus, Mono::GS) => -&su.mu_pow(-1),
        (Ladder::Minus, Mono::G) => MuScalar::one(),
        _ => MuScalar::zero(),
    };
    if w.is_one() {
        return on_gen;
    }
    &(&x_pm_mono(su, which, w) * &chi_mono(su, g)) + &(&su.counit_mono(w) * &on_gen)
}

pub fn x_pm(su: &Su2, which: Ladder, a: &Elem) -> MuScalar {
    a.iter().fold(MuScalar::zero(), |acc, (m, c)| &acc + &(c * &x_pm_mono(su, which, *m)))
}

pub fn chi(su: &Su2, a: &Elem) -> MuScalar {
    a.iter().fold(MuScalar::zero(), |acc, (m, c)| &acc + &(c * &chi_mono(su, *m)))
}

/// Ladder operators acting on the minimal calculus.
pub struct Ladders<'a> {
    pub calculus: &'a Calculus,
}

impl<'a> Ladders<'a> {
    pub fn new(calculus: &'a Calculus) -> Result<Ladders<'a>> {
        if !calculus.is_minimal_generic() {
            return Err(QpbError::Unsupported {
                calculus: calculus.tag().into(),
                what: "ladder operators".into(),
            });
        }
        Ok(Ladders { calculus })
    }

    fn apply<F: Fn(Mono) -> MuScalar>(&self, x: &GammaInv, f: F) -> Result<GammaInv> {
        let mut out = GammaInv::zero();
        for ((k, m), c) in self.calculus.varpi(x)?.iter() {
            let v = f(*m);
            if !v.is_zero() {
                out.add_term(*k, c * &v);
            }
        }
        Ok(out)
    }

    pub fn k3(&self, x: &GammaInv) -> Result<GammaInv> {
        let su = self.calculus.su();
        self.apply(x, |m| su.x_mono(m))
    }

    pub fn k_plus(&self, x: &GammaInv) -> Result<GammaInv> {
        let su = self.calculus.su();
        self.apply(x, |m| x_pm_mono(su, Ladder::Plus, m))
    }

    pub fn k_minus(&self, x: &GammaInv) -> Result<GammaInv> {
        let su = self.calculus.su();
        self.apply(x, |m| x_pm_mono(su, Ladder::Minus, m))
    }

    pub fn chi_varpi(&self, x: &GammaInv) -> Result<GammaInv> {
        let su = self.calculus.su();
        self.apply(x, |m| chi_mono(su, m))
    }

    /// Product in Q transported to Γ_inv.
    pub fn product(&self, x: &GammaInv, y: &GammaInv) -> Result<GammaInv> {
        let c = self.calculus;
        c.q_to_xi(&c.su().mul(&c.rho(x)?, &c.rho(y)?))
    }
}

/// `p_k` with positive leading coefficient (for small μ > 0) and its squared norm.
pub fn jacobi_p(k: usize) -> (QPoly, MuScalar) {
    let mut base = QPoly::monomial(MuScalar::one(), k);
    for j in 1..=k as i64 {
        let f = QPoly::new(vec![MuScalar::one(), -&MuScalar::mu_pow(2 * (1 - j))]);
        base = base.mul(&f);
    }
    let mut p = base.q_diff_n(k);
    if k % 2 == 1 {
        p = p.scale(&MuScalar::from_int(-1));
    }
    if p.leading().sign_near_zero() == Some(Ordering::Less) {
        p = p.scale(&MuScalar::from_int(-1));
    }
    let n = p.pair(&p);
    (p, n)
}

/// An unnormalized harmonic vector `ζ'(k, m)` with its squared norm.
#[derive(Clone, Debug)]
pub struct HarmonicVector {
    pub element: GammaInv,
    pub k: usize,
    pub m: i64,
    pub norm_sq: MuScalar,
}

/// `ζ'(k, m)`: the harmonic with the square-root factor and `c_k` removed.
pub fn zeta(c: &Calculus, k: usize, m: i64) -> Result<HarmonicVector> {
    if m.unsigned_abs() as usize > k {
        return Err(QpbError::Invalid(format!("|m| = {} exceeds k = {}", m.abs(), k)));
    }
    if !c.is_minimal_generic() {
        return Err(QpbError::Unsupported { calculus: c.tag().into(), what: "harmonic vectors".into() });
    }
    let su = c.su();
    let (p, _) = jacobi_p(k);
    let a = m.unsigned_abs() as u32;
    let dp = p.q_diff_n(a as usize).at_gamma_gamma_star();
    let ki = k as i64;
    let q = if m >= 0 {
        let sign = MuScalar::from_int(if a % 2 == 0 { 1 } else { -1 });
        let pref = &sign * &su.mu_pow(ki * m - m);
        su.mul(&dp, &su.mul(&su.pow(&su.gamma(), a), &su.pow(&su.alpha(), a))).scale(&pref)
    } else {
        let am = a as i64;
        let left = su.mul(&su.pow(&su.alpha_star(), a), &su.pow(&su.gamma_star(), a));
        su.mul(&left, &dp).scale(&su.mu_pow(ki * am))
    };
    let element = c.q_to_xi(&q)?;
    let norm_sq = c.inner_product(&element, &element)?;
    Ok(HarmonicVector { element, k, m, norm_sq })
}

/// `v²_{k,m} = μ^{2−2m−2k}(k+m)_μ(k−m+1)_μ`.
pub fn ladder_coefficient_sq(k: i64, m: i64) -> MuScalar {
    let qn = |n: i64| if n <= 0 { MuScalar::zero() } else { q_int_number(n as u32) };
    &(&MuScalar::mu_pow(2 - 2 * m - 2 * k) * &qn(k + m)) * &qn(k - m + 1)
}

/// Right side of the partial integration rule for `∫ q ∂ⁿp`.
pub fn partial_integration_rhs(p: &QPoly, q: &QPoly, n: usize) -> MuScalar {
    let one = MuScalar::one();
    let zero = MuScalar::zero();
    let mut acc = MuScalar::zero();
    for k in 1..=n {
        let kk = k as i64;
        let a = p.q_diff_n(n - k).dilate(&MuScalar::mu_pow(2 * kk - 2));
        let b = q.q_diff_n(k - 1);
        let boundary = &(&a.eval(&one) * &b.eval(&one)) - &(&a.eval(&zero) * &b.eval(&zero));
        let sign = MuScalar::from_int(if k % 2 == 1 { 1 } else { -1 });
        acc = &acc + &(&(&sign * &MuScalar::mu_pow(-kk * (kk - 1))) * &boundary);
    }
    let nn = n as i64;
    let sign = MuScalar::from_int(if n % 2 == 0 { 1 } else { -1 });
    let last = q.q_diff_n(n).mul(&p.dilate(&MuScalar::mu_pow(2 * nn))).integrate();
    &acc + &(&(&sign * &MuScalar::mu_pow(-nn * (nn - 1))) * &last)
}

/// Key helper for tests and tables.
pub fn xi(n: i32, k: u32) -> GammaInv {
    GammaInv::basis(Key::Xi(n, k))
}
