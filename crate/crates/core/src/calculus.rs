//! Left-covariant first-order differential calculi over quantum SU(2).
//!
//! A calculus is described by its space of left-invariant forms `Γ_inv`
//! together with the projection `π: A → Γ_inv`, the right module action `∘`,
//! the adjoint coaction `ϖ` and the *-structure.
//!
//! * The minimal admissible calculus for generic μ is represented through the
//!   embedding `ρ: Γ_inv → Q` onto the U(1)-invariant subalgebra, in the basis
//!   `ξ_{n,k}`.
//! * The finite calculi (4D bicovariant, minimal at μ = −1 and calculi given by
//!   arbitrary ideal generators) are computed as quotients `ker ε / R` by exact
//!   row reduction on a bounded span of the right ideal.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{QpbError, Result};
use crate::hopf::{format_sum, Elem, Mono, MuParam, Su2, Tensor2};
use crate::lin::Lin;
use crate::linalg::{self, Echelon};
use crate::scalar::MuScalar;

/// Basis labels of `Γ_inv`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Key {
    Tau,
    EtaPlus,
    Eta3,
    EtaMinus,
    /// `ξ_{n,k}` of the minimal calculus.
    Xi(i32, u32),
    /// Class of `m − ε(m)1` for a standard monomial `m` of a generic quotient.
    Std(Mono),
}

impl Key {
    pub fn to_text(&self, unicode: bool) -> String {
        match (self, unicode) {
            (Key::Tau, false) => "tau".into(),
            (Key::EtaPlus, false) => "eta+".into(),
            (Key::Eta3, false) => "eta3".into(),
            (Key::EtaMinus, false) => "eta-".into(),
            (Key::Tau, true) => "τ".into(),
            (Key::EtaPlus, true) => "η₊".into(),
            (Key::Eta3, true) => "η₃".into(),
            (Key::EtaMinus, true) => "η₋".into(),
            (Key::Xi(n, k), false) => format!("xi[{},{}]", n, k),
            (Key::Xi(n, k), true) => format!("ξ[{},{}]", n, k),
            (Key::Std(m), u) => format!("[{}]", m.to_text(u)),
        }
    }

    pub fn parse(s: &str) -> Option<Key> {
        match s {
            "tau" | "τ" => Some(Key::Tau),
            "eta+" | "η₊" => Some(Key::EtaPlus),
            "eta3" | "η₃" => Some(Key::Eta3),
            "eta-" | "η₋" => Some(Key::EtaMinus),
            _ => {
                let inner = s.strip_prefix("xi[").or_else(|| s.strip_prefix("ξ["))?.strip_suffix(']')?;
                let (n, k) = inner.split_once(',')?;
                Some(Key::Xi(n.trim().parse().ok()?, k.trim().parse().ok()?))
            }
        }
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(false))
    }
}

/// An element of `Γ_inv`.
pub type GammaInv = Lin<Key>;
/// Elements of `Γ_inv ⊗ A` (values of `ϖ`).
pub type InvTimesA = Lin<(Key, Mono)>;
/// Elements of `Γ = A ⊗ Γ_inv` in the free left-module presentation.
pub type GammaElem = Lin<(Mono, Key)>;

pub fn gamma_to_text(x: &GammaInv, unicode: bool) -> String {
    format_sum(x.iter().map(|(k, c)| (c.clone(), k.to_text(unicode))))
}

/// Which calculus an instance realizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CalculusKind {
    MinimalGeneric,
    MinimalMuMinusOne,
    FourD,
    GenericIdeal { gens: Vec<Elem>, bound: usize },
}

impl CalculusKind {
    pub fn tag(&self) -> &'static str {
        match self {
            CalculusKind::MinimalGeneric => "minimal",
            CalculusKind::MinimalMuMinusOne => "mu-minus-one",
            CalculusKind::FourD => "4d",
            CalculusKind::GenericIdeal { .. } => "ideal",
        }
    }
}

/// Right ideal of `A` truncated to `{g·w : deg w ≤ bound}` and row reduced
/// with the unit coefficient dropped (elements of `ker ε` are determined by
/// their non-constant part).
#[derive(Debug, Clone)]
pub struct IdealQuotient {
    pub gens: Vec<Elem>,
    pub bound: usize,
    ech: Echelon<Mono>,
    max_degree: u32,
}

pub fn monomials_up_to(deg: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    for d in 0..=deg {
        for k in 0..=d {
            for r in 0..=(d - k) {
                let a = (d - k - r) as i32;
                out.push(Mono::new(a, k, r));
                if a != 0 {
                    out.push(Mono::new(-a, k, r));
                }
            }
        }
    }
    out.sort();
    out
}

fn elem_degree(e: &Elem) -> u32 {
    e.keys().map(|m| m.degree()).max().unwrap_or(0)
}

fn drop_unit(e: &Elem) -> Elem {
    let mut e = e.clone();
    e.remove(&Mono::ONE);
    e
}

impl IdealQuotient {
    pub fn new(su: &Su2, gens: &[Elem], bound: usize) -> Result<IdealQuotient> {
        let mut ech = Echelon::new();
        let mut max_degree = 0;
        for g in gens {
            if !su.counit(g).is_zero() {
                return Err(QpbError::Invalid("ideal generator outside ker(eps)".into()));
            }
            max_degree = max_degree.max(elem_degree(g));
            for w in monomials_up_to(bound as u32) {
                ech.insert(&drop_unit(&su.mul(g, &Elem::basis(w))));
            }
        }
        Ok(IdealQuotient { gens: gens.to_vec(), bound, ech, max_degree })
    }

    /// Degree up to which normal forms are exact.
    pub fn trusted_degree(&self) -> u32 {
        self.bound as u32
    }

    /// Normal form of `a − ε(a)1` modulo the ideal.
    pub fn normal_form(&self, a: &Elem) -> Result<Elem> {
        let d = elem_degree(a);
        if d > self.trusted_degree() {
            return Err(QpbError::Truncation { bound: self.bound, what: format!("element of degree {}", d) });
        }
        Ok(self.ech.reduce(&drop_unit(a)))
    }

    pub fn contains(&self, a: &Elem) -> Result<bool> {
        Ok(self.normal_form(a)?.is_zero())
    }

    /// Non-pivot monomials of positive degree ≤ `deg`.
    pub fn standard_monomials(&self, deg: u32) -> Vec<Mono> {
        monomials_up_to(deg).into_iter().filter(|m| !m.is_one() && !self.ech.is_pivot(m)).collect()
    }

    pub fn generator_degree(&self) -> u32 {
        self.max_degree
    }
}

/// Result of the admissibility test.
#[derive(Clone, Debug)]
pub struct Admissibility {
    pub admissible: bool,
    /// `(generator index, monomial w, (X⊗id)ad(g·w))` for the first failure.
    pub witness: Option<(usize, Mono, Elem)>,
}

/// Checks `(X⊗id)ad(g·w) = 0` for all generators and monomials `w` of length ≤ bound.
pub fn is_admissible(su: &Su2, gens: &[Elem], bound: usize) -> Admissibility {
    for (i, g) in gens.iter().enumerate() {
        for w in monomials_up_to(bound as u32) {
            let v = x_ad(su, &su.mul(g, &Elem::basis(w)));
            if !v.is_zero() {
                return Admissibility { admissible: false, witness: Some((i, w, v)) };
            }
        }
    }
    Admissibility { admissible: true, witness: None }
}

/// `(X⊗id)ad`.
pub fn x_ad(su: &Su2, a: &Elem) -> Elem {
    let mut out = Elem::zero();
    for ((l, r), c) in su.ad(a).iter() {
        out.add_term(*r, c * &su.x_mono(*l));
    }
    out
}

/// Generators `xy` of `ker(ε)²`, x, y ∈ {α−1, α*−1, γ, γ*}.
pub fn ker_eps_squared_generators(su: &Su2) -> Vec<Elem> {
    let base = [
        su.alpha().sub(&su.one()),
        su.alpha_star().sub(&su.one()),
        su.gamma(),
        su.gamma_star(),
    ];
    let mut out = Vec::new();
    for x in &base {
        for y in &base {
            out.push(su.mul(x, y));
        }
    }
    out
}

/// Generators of the minimal ideal: the singlet times generators of `ker ε`.
pub fn minimal_ideal_generators(su: &Su2) -> Vec<Elem> {
    let s = singlet(su);
    [su.alpha().sub(&su.one()), su.alpha_star().sub(&su.one()), su.gamma(), su.gamma_star()]
        .iter()
        .map(|x| su.mul(&s, x))
        .collect()
}

/// `μ²α + α* − (1+μ²)1`.
pub fn singlet(su: &Su2) -> Elem {
    su.alpha()
        .scale(&su.mu_pow(2))
        .add(&su.alpha_star())
        .sub(&su.one().scale(&(&MuScalar::one() + &su.mu_pow(2))))
}

#[derive(Debug)]
struct FiniteData {
    basis: Vec<Key>,
    reps: HashMap<Key, Elem>,
    pi_gen: HashMap<Mono, GammaInv>,
    circ_gen: HashMap<(Key, Mono), GammaInv>,
    quotient: Option<IdealQuotient>,
}

/// A concrete left-covariant calculus.
#[derive(Debug)]
pub struct Calculus {
    kind: CalculusKind,
    su: Arc<Su2>,
    finite: Option<FiniteData>,
    pi_memo: Mutex<HashMap<Mono, GammaInv>>,
    circ_memo: Mutex<HashMap<(Key, Mono), GammaInv>>,
    varpi_memo: Mutex<HashMap<Key, InvTimesA>>,
}

const GENERATORS: [Mono; 4] = [Mono::A, Mono::AS, Mono::G, Mono::GS];

impl Calculus {
    pub fn minimal() -> Calculus {
        Calculus::bare(CalculusKind::MinimalGeneric, Arc::new(Su2::generic()), None)
    }

    fn bare(kind: CalculusKind, su: Arc<Su2>, finite: Option<FiniteData>) -> Calculus {
        Calculus {
            kind,
            su,
            finite,
            pi_memo: Mutex::new(HashMap::new()),
            circ_memo: Mutex::new(HashMap::new()),
            varpi_memo: Mutex::new(HashMap::new()),
        }
    }

    /// The 4-dimensional bicovariant calculus.
    pub fn four_d() -> Result<Calculus> {
        let su = Arc::new(Su2::generic());
        let h = &*su;
        let mu = h.mu();
        let a = h
            .alpha()
            .scale(&h.mu_pow(2))
            .add(&h.alpha_star())
            .sub(&h.one().scale(&(&h.mu_pow(3) + &h.mu_pow(-1))));
        let a_minus_as = h.alpha().sub(&h.alpha_star());
        let one_mu2 = &MuScalar::one() + &h.mu_pow(2);
        let quintet_mid = h
            .pow(&h.alpha_star(), 2)
            .scale(&h.mu_pow(2))
            .sub(&h.mul(&h.alpha(), &h.alpha_star()).sub(&h.mul(&h.gamma(), &h.gamma_star())).scale(&one_mu2))
            .add(&h.pow(&h.alpha(), 2));
        let gens = vec![
            h.mul(&a, &singlet(h)),
            h.mul(&a, &h.gamma()),
            h.mul(&a, &a_minus_as),
            h.mul(&a, &h.gamma_star()),
            h.pow(&h.gamma(), 2),
            h.mul(&h.gamma(), &a_minus_as),
            quintet_mid,
            h.mul(&h.gamma_star(), &a_minus_as),
            h.pow(&h.gamma_star(), 2),
        ];
        let _ = mu;
        let reps = vec![
            (Key::Tau, singlet(h)),
            (Key::EtaPlus, h.gamma()),
            (Key::Eta3, a_minus_as),
            (Key::EtaMinus, h.gamma_star()),
        ];
        Calculus::finite_from_ideal(CalculusKind::FourD, su.clone(), gens, 3, reps)
    }

    /// The minimal admissible calculus at μ = −1. Its ideal is the kernel of
    /// `(X⊗id)ad` on `ker ε`, so classes are computed through that map.
    pub fn minimal_mu_minus_one() -> Result<Calculus> {
        let su = Arc::new(Su2::minus_one());
        let h = &*su;
        let reps = vec![
            (Key::EtaPlus, h.gamma()),
            (Key::Eta3, h.alpha().sub(&h.alpha_star())),
            (Key::EtaMinus, h.gamma_star()),
        ];
        let images: Vec<Elem> = reps.iter().map(|(_, r)| x_ad(h, r)).collect();
        let coords = |a: &Elem| coordinates(&images, &x_ad(h, a), 0);
        Calculus::finite_with(CalculusKind::MinimalMuMinusOne, su.clone(), reps, coords)
    }

    /// Calculus of the right ideal generated by `gens`, truncated at `bound`.
    /// Basis: standard monomials of degree ≤ bound − 1.
    pub fn generic_ideal(su: Arc<Su2>, gens: Vec<Elem>, bound: usize) -> Result<Calculus> {
        let q = IdealQuotient::new(&su, &gens, bound)?;
        let top = (bound as u32).saturating_sub(1).max(1);
        let reps: Vec<(Key, Elem)> = q
            .standard_monomials(top)
            .into_iter()
            .map(|m| (Key::Std(m), Elem::basis(m).sub(&su.scalar(su.counit_mono(m)))))
            .collect();
        Calculus::finite_from_quotient(CalculusKind::GenericIdeal { gens, bound }, su, q, reps)
    }

    fn finite_from_ideal(
        kind: CalculusKind,
        su: Arc<Su2>,
        gens: Vec<Elem>,
        bound: usize,
        reps: Vec<(Key, Elem)>,
    ) -> Result<Calculus> {
        let q = IdealQuotient::new(&su, &gens, bound)?;
        Calculus::finite_from_quotient(kind, su, q, reps)
    }

    fn finite_from_quotient(
        kind: CalculusKind,
        su: Arc<Su2>,
        q: IdealQuotient,
        reps: Vec<(Key, Elem)>,
    ) -> Result<Calculus> {
        let rep_nf: Vec<Elem> = reps.iter().map(|(_, r)| q.normal_form(r)).collect::<Result<_>>()?;
        let mut c = Calculus::finite_with(kind, su, reps, |a| coordinates(&rep_nf, &q.normal_form(a)?, q.bound))?;
        if let Some(f) = c.finite.as_mut() {
            f.quotient = Some(q);
        }
        Ok(c)
    }

    fn finite_with<F: Fn(&Elem) -> Result<Vec<MuScalar>>>(
        kind: CalculusKind,
        su: Arc<Su2>,
        reps: Vec<(Key, Elem)>,
        raw: F,
    ) -> Result<Calculus> {
        let basis: Vec<Key> = reps.iter().map(|(k, _)| *k).collect();
        let coords = |a: &Elem| -> Result<GammaInv> {
            Ok(basis.iter().zip(raw(a)?).map(|(k, c)| (*k, c)).collect())
        };
        for (i, (_, r)) in reps.iter().enumerate() {
            let v = coords(r)?;
            if v != GammaInv::basis(basis[i]) {
                return Err(QpbError::Invalid("calculus representatives are linearly dependent".into()));
            }
        }
        let mut pi_gen = HashMap::new();
        for g in GENERATORS {
            let e = Elem::basis(g).sub(&su.scalar(su.counit_mono(g)));
            pi_gen.insert(g, coords(&e)?);
        }
        let mut circ_gen = HashMap::new();
        for (k, r) in &reps {
            for g in GENERATORS {
                // π(r)∘g = π(rg − ε(r)g) and ε(r) = 0
                let e = su.mul(r, &Elem::basis(g));
                circ_gen.insert((*k, g), coords(&e)?);
            }
        }
        let reps = reps.into_iter().collect();
        Ok(Calculus::bare(kind, su, Some(FiniteData { basis, reps, pi_gen, circ_gen, quotient: None })))
    }

    pub fn kind(&self) -> &CalculusKind {
        &self.kind
    }

    pub fn tag(&self) -> &'static str {
        self.kind.tag()
    }

    pub fn su(&self) -> &Su2 {
        &self.su
    }

    pub fn su_arc(&self) -> Arc<Su2> {
        self.su.clone()
    }

    pub fn is_minimal_generic(&self) -> bool {
        self.kind == CalculusKind::MinimalGeneric
    }

    /// Whether `ν` and `ρ` exist (admissible calculi).
    pub fn has_nu(&self) -> bool {
        matches!(self.kind, CalculusKind::MinimalGeneric | CalculusKind::MinimalMuMinusOne)
    }

    /// Finite basis, or `None` for the infinite-dimensional minimal calculus.
    pub fn basis(&self) -> Option<&[Key]> {
        self.finite.as_ref().map(|f| f.basis.as_slice())
    }

    /// Representative `r` with `π(r)` equal to the basis element.
    pub fn representative(&self, k: Key) -> Option<&Elem> {
        self.finite.as_ref().and_then(|f| f.reps.get(&k))
    }

    pub fn quotient(&self) -> Option<&IdealQuotient> {
        self.finite.as_ref().and_then(|f| f.quotient.as_ref())
    }

    fn unsupported(&self, what: &str) -> QpbError {
        QpbError::Unsupported { calculus: self.tag().into(), what: what.into() }
    }

    fn check_key(&self, k: &Key) -> Result<()> {
        let ok = match &self.finite {
            None => matches!(k, Key::Xi(..)),
            Some(f) => f.basis.contains(k),
        };
        if ok {
            Ok(())
        } else {
            Err(QpbError::Invalid(format!("basis key {} does not belong to calculus {}", k, self.tag())))
        }
    }

    pub fn check(&self, x: &GammaInv) -> Result<()> {
        x.keys().try_for_each(|k| self.check_key(k))
    }

    // ----- the minimal calculus through Q -----

    /// `ρ(ξ_{n,k})` as a single monomial of Q.
    pub fn xi_to_q(&self, n: i32, k: u32) -> Elem {
        if n >= 0 {
            let c = &self.su.mu_pow(n as i64) * &MuScalar::from_int(if n % 2 == 0 { 1 } else { -1 });
            let c = &c * &self.su.mu_pow(-(n as i64) * (n as i64 + 2 * k as i64));
            Elem::single(Mono::new(n, n as u32 + k, k), c)
        } else {
            let m = (-n) as u32;
            Elem::basis(Mono::new(n, k, m + k))
        }
    }

    /// Inverse of [`Calculus::xi_to_q`] on the weight-zero subalgebra.
    pub fn q_to_xi(&self, q: &Elem) -> Result<GammaInv> {
        let mut out = GammaInv::zero();
        for (m, c) in q.iter() {
            if m.left_weight() != 0 {
                return Err(QpbError::Invalid(format!("{} is not in the invariant subalgebra Q", m)));
            }
            let (n, k) = if m.n >= 0 { (m.n, m.r) } else { (m.n, m.k) };
            let norm = self.xi_to_q(n, k).coeff(m);
            out.add_term(Key::Xi(n, k), c.div(&norm)?);
        }
        Ok(out)
    }

    fn rho_minimal(&self, x: &GammaInv) -> Elem {
        x.map_lin(|k| match k {
            Key::Xi(n, kk) => self.xi_to_q(*n, *kk),
            _ => unreachable!("checked key"),
        })
    }

    // ----- public structure maps -----

    pub fn pi(&self, a: &Elem) -> Result<GammaInv> {
        a.try_map_lin(|m| self.pi_mono(*m))
    }

    pub fn pi_mono(&self, m: Mono) -> Result<GammaInv> {
        if m.is_one() {
            return Ok(GammaInv::zero());
        }
        if let Some(v) = self.pi_memo.lock().unwrap().get(&m) {
            return Ok(v.clone());
        }
        let out = match &self.finite {
            None => self.q_to_xi(&x_ad(&self.su, &Elem::basis(m)))?,
            Some(f) => {
                if let CalculusKind::GenericIdeal { bound, .. } = &self.kind {
                    if m.degree() as usize > *bound {
                        return Err(QpbError::Truncation { bound: *bound, what: format!("pi({})", m) });
                    }
                }
                let (prefix, g) = m.split_last().unwrap();
                // π(wg) = π(w)∘g + ε(w)π(g)
                let mut v = self.circ_mono(&self.pi_mono(prefix)?, g)?;
                v.add_scaled(&f.pi_gen[&g], &self.su.counit_mono(prefix));
                v
            }
        };
        self.pi_memo.lock().unwrap().insert(m, out.clone());
        Ok(out)
    }

    fn circ_key_mono(&self, k: Key, m: Mono) -> Result<GammaInv> {
        if m.is_one() {
            return Ok(GammaInv::basis(k));
        }
        if let Some(v) = self.circ_memo.lock().unwrap().get(&(k, m)) {
            return Ok(v.clone());
        }
        let out = match &self.finite {
            None => {
                let Key::Xi(n, kk) = k else { unreachable!() };
                let xi = self.xi_to_q(n, kk);
                let mut acc = Elem::zero();
                for ((a1, a2), c) in self.su.comult_mono(m).iter() {
                    let t = self.su.mul(&self.su.mul(&self.su.antipode_mono(*a1), &xi), &Elem::basis(*a2));
                    acc.add_scaled(&t, c);
                }
                self.q_to_xi(&acc)?
            }
            Some(f) => {
                let (prefix, g) = m.split_last().unwrap();
                let first = self.circ_key_mono(k, prefix)?;
                first.try_map_lin(|kk| {
                    f.circ_gen.get(&(*kk, g)).cloned().ok_or_else(|| QpbError::Invalid("missing circ entry".into()))
                })?
            }
        };
        self.circ_memo.lock().unwrap().insert((k, m), out.clone());
        Ok(out)
    }

    fn circ_mono(&self, x: &GammaInv, m: Mono) -> Result<GammaInv> {
        x.try_map_lin(|k| self.circ_key_mono(*k, m))
    }

    /// Right module action `θ∘a`.
    pub fn circ(&self, x: &GammaInv, a: &Elem) -> Result<GammaInv> {
        self.check(x)?;
        let mut out = GammaInv::zero();
        for (m, c) in a.iter() {
            out.add_scaled(&self.circ_mono(x, *m)?, c);
        }
        Ok(out)
    }

    fn varpi_key(&self, k: Key) -> Result<InvTimesA> {
        if let Some(v) = self.varpi_memo.lock().unwrap().get(&k) {
            return Ok(v.clone());
        }
        let out = match &self.finite {
            None => {
                let Key::Xi(n, kk) = k else { unreachable!() };
                let phi = self.su.comult(&self.xi_to_q(n, kk));
                // group first legs by second leg, then convert to ξ coordinates
                let mut by_right: std::collections::BTreeMap<Mono, Elem> = Default::default();
                for ((l, r), c) in phi.iter() {
                    by_right.entry(*r).or_default().add_term(*l, c.clone());
                }
                let mut out = InvTimesA::zero();
                for (r, left) in by_right {
                    for (kk, c) in self.q_to_xi(&left)?.iter() {
                        out.add_term((*kk, r), c.clone());
                    }
                }
                out
            }
            Some(f) => self.pi_left(&self.su.ad(&f.reps[&k]))?,
        };
        self.varpi_memo.lock().unwrap().insert(k, out.clone());
        Ok(out)
    }

    /// `(π⊗id)` on a tensor.
    pub fn pi_left(&self, t: &Tensor2) -> Result<InvTimesA> {
        let mut out = InvTimesA::zero();
        for ((l, r), c) in t.iter() {
            for (k, ck) in self.pi_mono(*l)?.iter() {
                out.add_term((*k, *r), c * ck);
            }
        }
        Ok(out)
    }

    /// Adjoint coaction `ϖ`.
    pub fn varpi(&self, x: &GammaInv) -> Result<InvTimesA> {
        self.check(x)?;
        let mut out = InvTimesA::zero();
        for (k, c) in x.iter() {
            out.add_scaled(&self.varpi_key(*k)?, c);
        }
        Ok(out)
    }

    /// The *-structure on `Γ_inv` (antilinear).
    pub fn star(&self, x: &GammaInv) -> Result<GammaInv> {
        self.check(x)?;
        let mut out = GammaInv::zero();
        for (k, c) in x.iter() {
            let v = match &self.finite {
                // the *-structure of Q transported by ρ, with π(a)* = −π(κ(a)*)
                None => self.q_to_xi(&self.su.star(&self.rho_minimal(&GammaInv::basis(*k))))?.neg(),
                Some(f) => self.pi(&self.su.star(&self.su.antipode(&f.reps[k])))?.neg(),
            };
            out.add_scaled(&v, &c.conj());
        }
        Ok(out)
    }

    /// `ϰπ(a) = π(κ²(a))`.
    pub fn varkappa(&self, x: &GammaInv) -> Result<GammaInv> {
        self.check(x)?;
        x.try_map_lin(|k| match &self.finite {
            None => {
                let q = self.rho_minimal(&GammaInv::basis(*k));
                self.q_to_xi(&self.su.antipode(&self.su.antipode(&q)))
            }
            Some(f) => self.pi(&self.su.antipode(&self.su.antipode(&f.reps[k]))),
        })
    }

    /// Inverse of `ϰ`.
    pub fn varkappa_inv(&self, x: &GammaInv) -> Result<GammaInv> {
        self.check(x)?;
        match &self.finite {
            None => x.try_map_lin(|k| {
                let Key::Xi(n, _) = k else { unreachable!() };
                Ok(GammaInv::single(*k, self.su.mu_pow(-2 * *n as i64)))
            }),
            Some(f) => {
                let cols: Vec<GammaInv> = f.basis.iter().map(|k| self.varkappa(&GammaInv::basis(*k))).collect::<Result<_>>()?;
                let m: linalg::Matrix = f.basis.iter().map(|r| cols.iter().map(|c| c.coeff(r)).collect()).collect();
                let b: Vec<MuScalar> = f.basis.iter().map(|r| x.coeff(r)).collect();
                let sol = linalg::solve(&m, &b)?;
                Ok(f.basis.iter().zip(sol).map(|(k, c)| (*k, c)).collect())
            }
        }
    }

    /// `ν = ν_X`; only for admissible calculi.
    pub fn nu(&self, x: &GammaInv) -> Result<MuScalar> {
        self.check(x)?;
        match &self.kind {
            CalculusKind::MinimalGeneric => Ok(self.su.counit(&self.rho_minimal(x))),
            CalculusKind::MinimalMuMinusOne => {
                let f = self.finite.as_ref().unwrap();
                Ok(x.iter().fold(MuScalar::zero(), |acc, (k, c)| &acc + &(c * &self.su.x_eval(&f.reps[k]))))
            }
            _ => Err(self.unsupported("the restriction map nu")),
        }
    }

    /// `ρ = (ν⊗id)ϖ`, the embedding into Q.
    pub fn rho(&self, x: &GammaInv) -> Result<Elem> {
        self.check(x)?;
        match &self.kind {
            CalculusKind::MinimalGeneric => Ok(self.rho_minimal(x)),
            CalculusKind::MinimalMuMinusOne => {
                let mut out = Elem::zero();
                for ((k, m), c) in self.varpi(x)?.iter() {
                    out.add_term(*m, c * &self.nu(&GammaInv::basis(*k))?);
                }
                Ok(out)
            }
            _ => Err(self.unsupported("the embedding rho")),
        }
    }

    /// Invariant scalar product, antilinear in the first argument.
    pub fn inner_product(&self, x: &GammaInv, y: &GammaInv) -> Result<MuScalar> {
        match &self.kind {
            CalculusKind::MinimalGeneric | CalculusKind::MinimalMuMinusOne => {
                let p = self.su.mul(&self.su.star(&self.rho(x)?), &self.rho(y)?);
                self.su.q_int_lift(&p)
            }
            CalculusKind::FourD => {
                let mut acc = MuScalar::zero();
                for (k, c) in x.iter() {
                    acc = &acc + &(&(&c.conj() * &y.coeff(k)) * &four_d_norm(*k));
                }
                Ok(acc)
            }
            CalculusKind::GenericIdeal { .. } => Err(self.unsupported("inner product")),
        }
    }

    /// Gram matrix on a finite basis.
    pub fn gram(&self) -> Result<linalg::Matrix> {
        let basis = self.basis().ok_or_else(|| self.unsupported("finite Gram matrix"))?;
        basis
            .iter()
            .map(|a| {
                basis
                    .iter()
                    .map(|b| self.inner_product(&GammaInv::basis(*a), &GammaInv::basis(*b)))
                    .collect()
            })
            .collect()
    }

    /// `d(a) = a⁽¹⁾ ⊗ π(a⁽²⁾)`.
    pub fn differential(&self, a: &Elem) -> Result<GammaElem> {
        let mut out = GammaElem::zero();
        for ((l, r), c) in self.su.comult(a).iter() {
            for (k, ck) in self.pi_mono(*r)?.iter() {
                out.add_term((*l, *k), c * ck);
            }
        }
        Ok(out)
    }

    /// Product in `Γ`: `(a⊗θ)·b = a b⁽¹⁾ ⊗ θ∘b⁽²⁾`.
    pub fn gamma_times(&self, x: &GammaElem, b: &Elem) -> Result<GammaElem> {
        let mut out = GammaElem::zero();
        let phi = self.su.comult(b);
        for ((a, k), c) in x.iter() {
            for ((b1, b2), cb) in phi.iter() {
                let left = self.su.mul_mono(*a, *b1);
                let right = self.circ_key_mono(*k, *b2)?;
                for (m, cm) in left.iter() {
                    for (kk, ck) in right.iter() {
                        out.add_term((*m, *kk), &(&(c * cb) * cm) * ck);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Left multiplication `a·(b⊗θ) = ab⊗θ`.
    pub fn times_gamma(&self, a: &Elem, x: &GammaElem) -> GammaElem {
        let mut out = GammaElem::zero();
        for (m, c) in a.iter() {
            for ((b, k), cb) in x.iter() {
                for (p, cp) in self.su.mul_mono(*m, *b).iter() {
                    out.add_term((*p, *k), &(c * cb) * cp);
                }
            }
        }
        out
    }

    /// Whether `a` lies in the right ideal of the calculus.
    pub fn in_ideal(&self, a: &Elem) -> Result<bool> {
        if !self.su.counit(a).is_zero() {
            return Ok(false);
        }
        match self.quotient() {
            None => Ok(self.pi(a)?.is_zero()),
            Some(q) => q.contains(a),
        }
    }
}

/// Solves `v = Σ xᵢ imagesᵢ`; the images must be independent.
fn coordinates(images: &[Elem], v: &Elem, bound: usize) -> Result<Vec<MuScalar>> {
    let mut cols: Vec<Mono> = images.iter().flat_map(|e| e.keys().cloned().collect::<Vec<_>>()).collect();
    cols.sort();
    cols.dedup();
    let outside = || QpbError::Truncation { bound, what: "class outside the span of the basis representatives".into() };
    if v.keys().any(|m| !cols.contains(m)) {
        return Err(outside());
    }
    let m: linalg::Matrix = cols.iter().map(|c| images.iter().map(|r| r.coeff(c)).collect()).collect();
    if linalg::rank(&m) != images.len() {
        return Err(QpbError::Invalid("calculus representatives are linearly dependent".into()));
    }
    let b: Vec<MuScalar> = cols.iter().map(|c| v.coeff(c)).collect();
    linalg::solve(&m, &b).map_err(|_| outside())
}

/// Scalar product of the 4D calculus on basis elements.
pub fn four_d_norm(k: Key) -> MuScalar {
    let p = |t: &str| MuScalar::parse(t).expect("constant");
    match k {
        Key::Tau => p("-(1-mu^3)^2*(1+mu^2)/(1+mu)^2"),
        Key::EtaPlus => p("mu^2"),
        Key::Eta3 => p("1+mu^2"),
        Key::EtaMinus => p("mu^-2"),
        _ => MuScalar::zero(),
    }
}

/// The calculus selected by a CLI-style tag.
pub fn calculus_by_tag(tag: &str) -> Result<Calculus> {
    match tag {
        "minimal" => Ok(Calculus::minimal()),
        "4d" => Calculus::four_d(),
        "mu-minus-one" | "minimal-mu-minus-one" => Calculus::minimal_mu_minus_one(),
        other => Err(QpbError::Invalid(format!("unknown calculus '{}'", other))),
    }
}

impl Calculus {
    pub fn param(&self) -> MuParam {
        self.su.param()
    }
}
