//! Connections on trivial bundles through their local potentials: brackets,
//! curvature, covariant derivative, `q_ω`, the classical part of a connection,
//! the multiplicativity obstruction `r_ω`, structure equation and Bianchi identity.

use std::collections::{BTreeMap, BTreeSet};

use crate::braided::{Braided, InvTensor};
use crate::calculus::{Calculus, CalculusKind, GammaInv, Key};
use crate::error::{QpbError, Result};
use crate::forms::{BaseForm, MixedForm, TrivialBundle};
use crate::hopf::{Elem, Mono};
use crate::scalar::MuScalar;

/// Linear map `Γ_inv → Ω^p(chart)` given on finitely many basis keys; other keys map to 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorialForm {
    degree: usize,
    n: usize,
    table: BTreeMap<Key, BaseForm>,
}

impl TensorialForm {
    pub fn zero(n: usize, degree: usize) -> TensorialForm {
        TensorialForm { degree, n, table: BTreeMap::new() }
    }

    pub fn new(n: usize, degree: usize, entries: impl IntoIterator<Item = (Key, BaseForm)>) -> Result<TensorialForm> {
        let mut out = TensorialForm::zero(n, degree);
        for (k, f) in entries {
            out.set(k, f)?;
        }
        Ok(out)
    }

    pub fn set(&mut self, k: Key, f: BaseForm) -> Result<()> {
        if f.chart_dim() != self.n {
            return Err(QpbError::ChartMismatch(self.n, f.chart_dim()));
        }
        if !f.is_zero() && f.degree() != Some(self.degree) {
            return Err(QpbError::Invalid(format!("value on {} is not a {}-form", k, self.degree)));
        }
        if f.is_zero() {
            self.table.remove(&k);
        } else {
            self.table.insert(k, f);
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn chart_dim(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &BTreeMap<Key, BaseForm> {
        &self.table
    }

    pub fn get(&self, k: Key) -> BaseForm {
        self.table.get(&k).cloned().unwrap_or_else(|| BaseForm::zero(self.n))
    }

    pub fn eval(&self, x: &GammaInv) -> BaseForm {
        let mut out = BaseForm::zero(self.n);
        for (k, c) in x.iter() {
            if let Some(f) = self.table.get(k) {
                out.add_scaled(f, c).expect("same chart");
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    pub fn add(&self, o: &TensorialForm) -> Result<TensorialForm> {
        if self.degree != o.degree {
            return Err(QpbError::Invalid("adding tensorial forms of different degrees".into()));
        }
        let mut out = self.clone();
        for (k, f) in &o.table {
            let v = out.get(*k).add(f)?;
            out.set(*k, v)?;
        }
        Ok(out)
    }

    pub fn sub(&self, o: &TensorialForm) -> Result<TensorialForm> {
        self.add(&o.scale(&-MuScalar::one()))
    }

    pub fn scale(&self, c: &MuScalar) -> TensorialForm {
        let mut out = TensorialForm::zero(self.n, self.degree);
        if !c.is_zero() {
            out.table = self.table.iter().map(|(k, f)| (*k, f.scale(c))).collect();
        }
        out
    }

    /// Entrywise exterior derivative.
    pub fn d(&self) -> TensorialForm {
        let mut out = TensorialForm::zero(self.n, self.degree + 1);
        for (k, f) in &self.table {
            let df = f.d();
            if !df.is_zero() {
                out.table.insert(*k, df);
            }
        }
        out
    }

    /// `φ†(θ) = φ(θ*)*`.
    pub fn adjoint(&self, calc: &Calculus) -> Result<TensorialForm> {
        let mut out = TensorialForm::zero(self.n, self.degree);
        for k in self.star_closure(calc)? {
            let v = self.eval(&calc.star(&GammaInv::basis(k))?).conj();
            out.set(k, v)?;
        }
        Ok(out)
    }

    fn star_closure(&self, calc: &Calculus) -> Result<BTreeSet<Key>> {
        let mut keys: BTreeSet<Key> = self.table.keys().cloned().collect();
        for k in self.table.keys() {
            keys.extend(calc.star(&GammaInv::basis(*k))?.keys().cloned());
        }
        Ok(keys)
    }

    /// `(φ + φ†)/2`.
    pub fn hermitian_part(&self, calc: &Calculus) -> Result<TensorialForm> {
        Ok(self.add(&self.adjoint(calc)?)?.scale(&MuScalar::from_frac(1, 2)))
    }

    pub fn is_hermitian(&self, calc: &Calculus) -> Result<bool> {
        Ok(self.adjoint(calc)?.sub(self)?.is_zero())
    }
}

/// Hermitian degree-1 tensorial form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugePotential(TensorialForm);

impl GaugePotential {
    pub fn new(calc: &Calculus, form: TensorialForm) -> Result<GaugePotential> {
        if form.degree() != 1 {
            return Err(QpbError::Invalid("a gauge potential takes values in 1-forms".into()));
        }
        if !form.is_hermitian(calc)? {
            return Err(QpbError::Invalid("gauge potential is not hermitian".into()));
        }
        Ok(GaugePotential(form))
    }

    pub fn form(&self) -> &TensorialForm {
        &self.0
    }
}

fn parity(p: usize) -> MuScalar {
    if p % 2 == 0 {
        MuScalar::one()
    } else {
        -MuScalar::one()
    }
}

/// Local gauge theory over a braided envelope.
pub struct Gauge<'a> {
    pub braided: &'a Braided,
}

impl<'a> Gauge<'a> {
    pub fn new(braided: &'a Braided) -> Self {
        Gauge { braided }
    }

    pub fn calculus(&self) -> &Calculus {
        self.braided.calculus()
    }

    /// Keys on which results are tabulated: the whole basis, or the support of the inputs for the minimal calculus.
    pub fn domain(&self, forms: &[&TensorialForm]) -> Vec<Key> {
        match self.calculus().basis() {
            Some(b) => b.to_vec(),
            None => {
                let set: BTreeSet<Key> = forms.iter().flat_map(|f| f.table.keys().cloned()).collect();
                set.into_iter().collect()
            }
        }
    }

    /// `Σ α(θ′)β(θ″)` over a degree-2 tensor.
    pub fn pair(&self, a: &TensorialForm, b: &TensorialForm, t: &InvTensor) -> Result<BaseForm> {
        let mut out = BaseForm::zero(a.n);
        for (w, c) in t.iter() {
            if w.len() != 2 {
                return Err(QpbError::Invalid("pairing needs a degree-2 tensor".into()));
            }
            let (x, y) = (a.get(w[0]), b.get(w[1]));
            if x.is_zero() || y.is_zero() {
                continue;
            }
            out.add_scaled(&x.mul(&y)?, c)?;
        }
        Ok(out)
    }

    fn tabulate<F: Fn(Key) -> Result<BaseForm>>(&self, n: usize, degree: usize, keys: &[Key], f: F) -> Result<TensorialForm> {
        let mut out = TensorialForm::zero(n, degree);
        for k in keys {
            out.set(*k, f(*k)?)?;
        }
        Ok(out)
    }

    /// `⟨α,β⟩` on the given keys.
    pub fn bracket_delta_on(&self, a: &TensorialForm, b: &TensorialForm, keys: &[Key]) -> Result<TensorialForm> {
        self.tabulate(a.n, a.degree + b.degree, keys, |k| {
            self.pair(a, b, &self.braided.delta(&GammaInv::basis(k))?)
        })
    }

    pub fn bracket_delta(&self, a: &TensorialForm, b: &TensorialForm) -> Result<TensorialForm> {
        self.bracket_delta_on(a, b, &self.domain(&[a, b]))
    }

    /// `[α,β]` on the given keys.
    pub fn bracket_ctop_on(&self, a: &TensorialForm, b: &TensorialForm, keys: &[Key]) -> Result<TensorialForm> {
        self.tabulate(a.n, a.degree + b.degree, keys, |k| {
            self.pair(a, b, &self.braided.c_top(&GammaInv::basis(k))?)
        })
    }

    pub fn bracket_ctop(&self, a: &TensorialForm, b: &TensorialForm) -> Result<TensorialForm> {
        self.bracket_ctop_on(a, b, &self.domain(&[a, b]))
    }

    /// `F = dA − ⟨A,A⟩`.
    pub fn curvature(&self, a: &TensorialForm) -> Result<TensorialForm> {
        a.d().sub(&self.bracket_delta(a, a)?)
    }

    /// `Dφ = dφ − (−1)^{∂φ}[φ,A]`.
    pub fn cov_deriv(&self, phi: &TensorialForm, a: &TensorialForm) -> Result<TensorialForm> {
        let keys = self.domain(&[phi, a]);
        let br = self.bracket_ctop_on(phi, a, &keys)?;
        restrict(&phi.d(), &keys).sub(&br.scale(&parity(phi.degree)))
    }

    /// `q_ω(φ) = ⟨A,φ⟩ − (−1)^{∂φ}⟨φ,A⟩ − (−1)^{∂φ}[φ,A]`.
    pub fn q_omega(&self, phi: &TensorialForm, a: &TensorialForm) -> Result<TensorialForm> {
        let keys = self.domain(&[phi, a]);
        let s = parity(phi.degree);
        let first = self.bracket_delta_on(a, phi, &keys)?;
        let second = self.bracket_delta_on(phi, a, &keys)?;
        let third = self.bracket_ctop_on(phi, a, &keys)?;
        first.sub(&second.scale(&s))?.sub(&third.scale(&s))
    }

    /// The basis key spanning the classical directions, with `ν` equal to 1 on it after scaling.
    fn classical_key(&self) -> Result<(Key, MuScalar)> {
        let calc = self.calculus();
        match calc.kind() {
            CalculusKind::MinimalGeneric => Ok((Key::Xi(0, 0), MuScalar::one())),
            CalculusKind::MinimalMuMinusOne => {
                let mut found = None;
                for k in calc.basis().unwrap_or(&[]) {
                    let v = calc.nu(&GammaInv::basis(*k))?;
                    if !v.is_zero() {
                        if found.is_some() {
                            return Err(QpbError::Invalid("restriction map is not supported on one key".into()));
                        }
                        found = Some((*k, v));
                    }
                }
                found.ok_or_else(|| QpbError::Invalid("restriction map vanishes".into()))
            }
            _ => Err(QpbError::Unsupported {
                calculus: calc.tag().into(),
                what: "classical connections".into(),
            }),
        }
    }

    /// `(A_cl, A⊥)` with `A_cl(θ) = ν(θ)·A(θ₀)`.
    pub fn decompose(&self, a: &TensorialForm) -> Result<(TensorialForm, TensorialForm)> {
        // ν vanishes off k₀, so A_cl(k₀) = ν(k₀)·A(k₀/ν(k₀)) = A(k₀)
        let (k0, _) = self.classical_key()?;
        let mut cl = TensorialForm::zero(a.n, a.degree);
        cl.set(k0, a.get(k0))?;
        let perp = a.sub(&cl)?;
        Ok((cl, perp))
    }

    fn classical_probes(&self, phi: &TensorialForm) -> Vec<Key> {
        if let Some(b) = self.calculus().basis() {
            return b.to_vec();
        }
        let mut set = BTreeSet::new();
        for k in phi.table.keys() {
            if let Key::Xi(n, m) = k {
                for dn in -1..=1 {
                    for dk in 0..=2u32 {
                        if *m >= dk {
                            set.insert(Key::Xi(n + dn, m - dk));
                        }
                    }
                }
            }
        }
        set.into_iter().collect()
    }

    /// Whether `φ(θ∘a) = ε(a)φ(θ)` for the generators `a`.
    pub fn is_classical(&self, phi: &TensorialForm) -> Result<bool> {
        let calc = self.calculus();
        let su = calc.su();
        for k in self.classical_probes(phi) {
            let x = GammaInv::basis(k);
            for g in [Mono::A, Mono::AS, Mono::G, Mono::GS] {
                let lhs = phi.eval(&calc.circ(&x, &Elem::basis(g))?);
                let rhs = phi.get(k).scale(&su.counit_mono(g));
                if !lhs.sub(&rhs)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `r_ω(a) = Σ A⊥π(a⁽¹⁾)·A⊥π(a⁽²⁾)` for `a` in the ideal.
    pub fn r_omega(&self, a: &TensorialForm, x: &Elem) -> Result<BaseForm> {
        let calc = self.calculus();
        if !calc.in_ideal(x)? {
            return Err(QpbError::NotInIdeal(crate::hopf::elem_to_text(x, false)));
        }
        let (_, perp) = self.decompose(a)?;
        let mut out = BaseForm::zero(a.n);
        for ((l, r), c) in calc.su().comult(x).iter() {
            let left = perp.eval(&calc.pi_mono(*l)?);
            if left.is_zero() {
                continue;
            }
            let right = perp.eval(&calc.pi_mono(*r)?);
            out.add_scaled(&left.mul(&right)?, c)?;
        }
        Ok(out)
    }

    /// `ω(θ) = (A⊗id)ϖ(θ) + 1⊗θ`.
    pub fn omega(&self, a: &TensorialForm, x: &GammaInv) -> Result<MixedForm> {
        let calc = self.calculus();
        let mut out = MixedForm::invariant(a.n, &crate::braided::tensor_of(x));
        for ((k, m), c) in calc.varpi(x)?.iter() {
            let f = a.get(*k);
            if f.is_zero() {
                continue;
            }
            out = out.add(&MixedForm::product(&f.scale(c), &Elem::basis(*m), &InvTensor::basis(vec![])))?;
        }
        Ok(out)
    }

    /// `(φ⊗id)ϖ(θ)`, the form on the bundle attached to a tensorial form.
    pub fn lift(&self, phi: &TensorialForm, x: &GammaInv) -> Result<MixedForm> {
        let mut out = MixedForm::zero(phi.n);
        for ((k, m), c) in self.calculus().varpi(x)?.iter() {
            let f = phi.get(*k);
            if f.is_zero() {
                continue;
            }
            out = out.add(&MixedForm::product(&f.scale(c), &Elem::basis(*m), &InvTensor::basis(vec![])))?;
        }
        Ok(out)
    }

    /// `dω − ⟨ω,ω⟩ = (F⊗id)ϖ` on every basis element, in the trivial-bundle forms.
    pub fn structure_check(&self, a: &TensorialForm) -> Result<bool> {
        let keys = self.calculus().basis().ok_or_else(|| QpbError::Unsupported {
            calculus: self.calculus().tag().into(),
            what: "the envelope-level structure equation".into(),
        })?;
        let bundle = TrivialBundle::new(self.braided, a.n);
        let f = self.curvature(a)?;
        for k in keys {
            let x = GammaInv::basis(*k);
            let mut lhs = bundle.d(&self.omega(a, &x)?)?;
            for (w, c) in self.braided.delta(&x)?.iter() {
                let p = bundle.mul(&self.omega(a, &GammaInv::basis(w[0]))?, &self.omega(a, &GammaInv::basis(w[1]))?)?;
                lhs = lhs.sub(&p.scale(c))?;
            }
            let rhs = bundle.reduce(&self.lift(&f, &x)?)?;
            if !bundle.reduce(&lhs)?.sub(&rhs)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The potential entering the right side of the Bianchi identity.
    pub fn bianchi_potential(&self, a: &TensorialForm) -> Result<TensorialForm> {
        match self.calculus().kind() {
            CalculusKind::MinimalGeneric | CalculusKind::MinimalMuMinusOne => Ok(self.decompose(a)?.1),
            _ => Ok(a.clone()),
        }
    }

    /// Both sides of `D R − q_ω(R) = ⟨A′,⟨A′,A′⟩⟩ − ⟨⟨A′,A′⟩,A′⟩`.
    pub fn bianchi_sides(&self, a: &TensorialForm) -> Result<(TensorialForm, TensorialForm)> {
        let f = self.curvature(a)?;
        let lhs = self.cov_deriv(&f, a)?.sub(&self.q_omega(&f, a)?)?;
        let ap = self.bianchi_potential(a)?;
        let aa = self.bracket_delta(&ap, &ap)?;
        let keys = self.domain(&[&ap, a, &f]);
        let rhs = self.bracket_delta_on(&ap, &aa, &keys)?.sub(&self.bracket_delta_on(&aa, &ap, &keys)?)?;
        Ok((restrict(&lhs, &keys), rhs))
    }

    pub fn bianchi_check(&self, a: &TensorialForm) -> Result<bool> {
        let (l, r) = self.bianchi_sides(a)?;
        Ok(l.sub(&r)?.is_zero())
    }
}

fn restrict(f: &TensorialForm, keys: &[Key]) -> TensorialForm {
    let mut out = TensorialForm::zero(f.n, f.degree);
    for k in keys {
        if let Some(v) = f.table.get(k) {
            out.table.insert(*k, v.clone());
        }
    }
    out
}

/// Random polynomial of total degree ≤ 2 with small Gaussian-integer coefficients.
pub fn random_poly<R: rand::Rng>(n: usize, rng: &mut R) -> crate::forms::Poly {
    let mut p = crate::forms::Poly::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let mut e = vec![0u32; n];
        for _ in 0..rng.gen_range(0..=2) {
            e[rng.gen_range(0..n)] += 1;
        }
        let re = MuScalar::from_int(rng.gen_range(-3..=3));
        let im = &MuScalar::from_int(rng.gen_range(-2..=2)) * &MuScalar::i();
        p.add_term(e, &re + &im);
    }
    p
}

/// Random hermitian potential supported on `keys`.
pub fn random_potential<R: rand::Rng>(calc: &Calculus, keys: &[Key], n: usize, rng: &mut R) -> Result<TensorialForm> {
    let mut raw = TensorialForm::zero(n, 1);
    for k in keys {
        let mut f = BaseForm::zero(n);
        for i in 0..n {
            if rng.gen_bool(0.7) {
                f = f.add(&BaseForm::from_word(n, &[i as u8], &random_poly(n, rng)))?;
            }
        }
        raw.set(*k, f)?;
    }
    raw.hermitian_part(calc)
}
