//! Tensor algebra over `Γ_inv`, the quadratic ideal `S²_inv`, the braid
//! operator σ, the embedded differential δ, the transposed commutator `c⊤`
//! and the differential of the invariant envelope `Γ^∧_inv`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::calculus::{singlet, Calculus, CalculusKind, GammaInv, Key};
use crate::error::{QpbError, Result};
use crate::hopf::{Elem, Mono};
use crate::lin::Lin;
use crate::linalg::{self, Echelon, Matrix};
use crate::scalar::MuScalar;

/// Graded element of the tensor algebra over `Γ_inv`; a word of length p is a p-tensor.
pub type InvTensor = Lin<Vec<Key>>;

pub fn tensor_of(x: &GammaInv) -> InvTensor {
    x.iter().map(|(k, c)| (vec![*k], c.clone())).collect()
}

/// `x ⊗ y` in the tensor algebra.
pub fn tensor_mul(x: &InvTensor, y: &InvTensor) -> InvTensor {
    let mut out = InvTensor::zero();
    for (a, ca) in x.iter() {
        for (b, cb) in y.iter() {
            out.add_term([a.as_slice(), b.as_slice()].concat(), ca * cb);
        }
    }
    out
}

pub fn pair_tensor(x: &GammaInv, y: &GammaInv) -> InvTensor {
    tensor_mul(&tensor_of(x), &tensor_of(y))
}

pub fn degree_part(x: &InvTensor, p: usize) -> InvTensor {
    x.iter().filter(|(w, _)| w.len() == p).map(|(w, c)| (w.clone(), c.clone())).collect()
}

pub fn max_degree(x: &InvTensor) -> usize {
    x.keys().map(|w| w.len()).max().unwrap_or(0)
}

pub fn tensor_to_text(x: &InvTensor, unicode: bool) -> String {
    let sep = if unicode { " ⊗ " } else { " (x) " };
    crate::hopf::format_sum(x.iter().map(|(w, c)| {
        let s: Vec<String> = w.iter().map(|k| k.to_text(unicode)).collect();
        (c.clone(), s.join(sep))
    }))
}

/// Braided structure attached to a calculus.
pub struct Braided {
    calc: Arc<Calculus>,
    s2: Vec<InvTensor>,
    s2_gram_inv: Option<Matrix>,
    s2_echelon: Echelon<Vec<Key>>,
    deg3: Mutex<Option<Echelon<Vec<Key>>>>,
    complement: Vec<(Elem, GammaInv)>,
    sigma_memo: Mutex<HashMap<(Key, Key), InvTensor>>,
    delta_memo: Mutex<HashMap<Key, InvTensor>>,
    inner_memo: Mutex<HashMap<(Key, Key), MuScalar>>,
    pub dmax: usize,
}

impl Braided {
    /// Default construction: ideal data from words of length ≤ 2, complement with K = 2.
    pub fn new(calc: Arc<Calculus>) -> Result<Braided> {
        Braided::with_params(calc, 2, 2)
    }

    pub fn with_params(calc: Arc<Calculus>, ideal_degree: u32, k_complement: u32) -> Result<Braided> {
        let s2 = s2_spanning_set(&calc, ideal_degree)?;
        let mut ech = Echelon::new();
        let mut basis = Vec::new();
        for t in s2 {
            if ech.insert(&t) {
                basis.push(t);
            }
        }
        let complement = build_complement(&calc, k_complement)?;
        let mut b = Braided {
            calc,
            s2: basis,
            s2_gram_inv: None,
            s2_echelon: ech,
            deg3: Mutex::new(None),
            complement,
            sigma_memo: Mutex::new(HashMap::new()),
            delta_memo: Mutex::new(HashMap::new()),
            inner_memo: Mutex::new(HashMap::new()),
            dmax: 3,
        };
        if matches!(b.calc.kind(), CalculusKind::FourD | CalculusKind::MinimalMuMinusOne) {
            let g: Matrix = b
                .s2
                .iter()
                .map(|x| b.s2.iter().map(|y| b.inner2(x, y)).collect::<Result<Vec<_>>>())
                .collect::<Result<_>>()?;
            b.s2_gram_inv = Some(linalg::inverse(&g)?);
        }
        Ok(b)
    }

    pub fn calculus(&self) -> &Calculus {
        &self.calc
    }

    pub fn calculus_arc(&self) -> Arc<Calculus> {
        self.calc.clone()
    }

    /// Spanning basis of the computed part of `S²_inv`.
    pub fn s2_basis(&self) -> &[InvTensor] {
        &self.s2
    }

    /// `q = π(a⁽¹⁾)⊗π(a⁽²⁾)` for `a` in the ideal.
    pub fn s_inv2_from_ideal(&self, a: &Elem) -> Result<InvTensor> {
        s_inv2_from_ideal(&self.calc, a)
    }

    /// `c⊤ = (id⊗π)ϖ`.
    pub fn c_top(&self, x: &GammaInv) -> Result<InvTensor> {
        let mut out = InvTensor::zero();
        for ((k, m), c) in self.calc.varpi(x)?.iter() {
            for (kk, ck) in self.calc.pi_mono(*m)?.iter() {
                out.add_term(vec![*k, *kk], c * ck);
            }
        }
        Ok(out)
    }

    fn sigma_pair(&self, a: Key, b: Key) -> Result<InvTensor> {
        if let Some(v) = self.sigma_memo.lock().unwrap().get(&(a, b)) {
            return Ok(v.clone());
        }
        // σ(η⊗θ) = Σ θ_k ⊗ η∘c_k with ϖ(θ) = Σ θ_k ⊗ c_k
        let mut out = InvTensor::zero();
        let eta = GammaInv::basis(a);
        for ((k, m), c) in self.calc.varpi(&GammaInv::basis(b))?.iter() {
            for (kk, ck) in self.calc.circ(&eta, &Elem::basis(*m))?.iter() {
                out.add_term(vec![*k, *kk], c * ck);
            }
        }
        self.sigma_memo.lock().unwrap().insert((a, b), out.clone());
        Ok(out)
    }

    /// σ on a degree-2 tensor.
    pub fn sigma(&self, t: &InvTensor) -> Result<InvTensor> {
        let mut out = InvTensor::zero();
        for (w, c) in t.iter() {
            if w.len() != 2 {
                return Err(QpbError::Invalid("sigma acts on degree-2 tensors".into()));
            }
            out.add_scaled(&self.sigma_pair(w[0], w[1])?, c);
        }
        Ok(out)
    }

    /// σ acting on legs `i, i+1` of a homogeneous tensor.
    pub fn sigma_at(&self, t: &InvTensor, i: usize) -> Result<InvTensor> {
        let mut out = InvTensor::zero();
        for (w, c) in t.iter() {
            if w.len() < i + 2 {
                return Err(QpbError::Invalid("tensor degree too small for sigma".into()));
            }
            for (pair, cp) in self.sigma_pair(w[i], w[i + 1])?.iter() {
                let mut nw = w.clone();
                nw[i] = pair[0];
                nw[i + 1] = pair[1];
                out.add_term(nw, c * cp);
            }
        }
        Ok(out)
    }

    /// Solves `π(ℓ) = x` for ℓ in the complement 𝓛.
    pub fn lift_to_complement(&self, x: &GammaInv) -> Result<Elem> {
        let mut keys: Vec<Key> = self.complement.iter().flat_map(|(_, p)| p.keys().cloned().collect::<Vec<_>>()).collect();
        keys.extend(x.keys().cloned());
        keys.sort();
        keys.dedup();
        let m: Matrix = keys.iter().map(|k| self.complement.iter().map(|(_, p)| p.coeff(k)).collect()).collect();
        let b: Vec<MuScalar> = keys.iter().map(|k| x.coeff(k)).collect();
        let sol = linalg::solve(&m, &b).map_err(|_| {
            QpbError::OutOfComplement(crate::calculus::gamma_to_text(x, false))
        })?;
        let mut out = Elem::zero();
        for ((l, _), c) in self.complement.iter().zip(sol) {
            out.add_scaled(l, &c);
        }
        Ok(out)
    }

    /// The embedded differential `δ = −(π⊗π)φ(π↾𝓛)⁻¹`.
    pub fn delta(&self, x: &GammaInv) -> Result<InvTensor> {
        self.calc.check(x)?;
        let mut out = InvTensor::zero();
        for (k, c) in x.iter() {
            let cached = self.delta_memo.lock().unwrap().get(k).cloned();
            let v = match cached {
                Some(v) => v,
                None => {
                    let l = self.lift_to_complement(&GammaInv::basis(*k))?;
                    let v = pi_pi_phi(&self.calc, &l)?.neg();
                    self.delta_memo.lock().unwrap().insert(*k, v.clone());
                    v
                }
            };
            out.add_scaled(&v, c);
        }
        Ok(out)
    }

    fn inner_key(&self, p: Key, q: Key) -> Result<MuScalar> {
        if let Some(v) = self.inner_memo.lock().unwrap().get(&(p, q)) {
            return Ok(v.clone());
        }
        let v = self.calc.inner_product(&GammaInv::basis(p), &GammaInv::basis(q))?;
        self.inner_memo.lock().unwrap().insert((p, q), v.clone());
        Ok(v)
    }

    /// Scalar product on degree-2 tensors induced from `Γ_inv`.
    pub fn inner2(&self, x: &InvTensor, y: &InvTensor) -> Result<MuScalar> {
        let mut acc = MuScalar::zero();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                let mut f = &ca.conj() * cb;
                for (p, q) in a.iter().zip(b.iter()) {
                    f = &f * &self.inner_key(*p, *q)?;
                    if f.is_zero() {
                        break;
                    }
                }
                acc = &acc + &f;
            }
        }
        Ok(acc)
    }

    fn reduce2(&self, t: &InvTensor) -> Result<InvTensor> {
        let Some(ginv) = &self.s2_gram_inv else { return Ok(self.s2_echelon.reduce(t)) };
        // orthogonal projection onto the complement of S²_inv
        let rhs: Vec<MuScalar> = self.s2.iter().map(|s| self.inner2(s, t)).collect::<Result<_>>()?;
        let mut out = t.clone();
        for (i, row) in ginv.iter().enumerate() {
            let c = row.iter().zip(&rhs).fold(MuScalar::zero(), |acc, (g, r)| &acc + &(g * r));
            out.add_scaled(&self.s2[i], &-&c);
        }
        Ok(out)
    }

    fn deg3_echelon(&self) -> Result<Echelon<Vec<Key>>> {
        if let Some(e) = self.deg3.lock().unwrap().as_ref() {
            return Ok(e.clone());
        }
        let basis = self.calc.basis().ok_or_else(|| QpbError::Unsupported {
            calculus: self.calc.tag().into(),
            what: "degree-3 wedge reduction".into(),
        })?;
        let mut e = Echelon::new();
        for s in &self.s2 {
            for k in basis {
                let kt = InvTensor::basis(vec![*k]);
                e.insert(&tensor_mul(s, &kt));
                e.insert(&tensor_mul(&kt, s));
            }
        }
        *self.deg3.lock().unwrap() = Some(e.clone());
        Ok(e)
    }

    /// Canonical representative modulo the ideal generated by `S²_inv`.
    pub fn wedge_reduce(&self, t: &InvTensor) -> Result<InvTensor> {
        let top = max_degree(t);
        if top > self.dmax {
            return Err(QpbError::Truncation { bound: self.dmax, what: format!("tensor of degree {}", top) });
        }
        let mut out = InvTensor::zero();
        for p in 0..=top {
            let part = degree_part(t, p);
            if part.is_zero() {
                continue;
            }
            let r = match p {
                0 | 1 => part,
                2 => self.reduce2(&part)?,
                _ => self.deg3_echelon()?.reduce(&part),
            };
            out.add_assign(&r);
        }
        Ok(out)
    }

    /// Differential on `Γ^∧_inv`, computed from δ and the graded Leibniz rule.
    pub fn d_inv(&self, t: &InvTensor) -> Result<InvTensor> {
        let top = max_degree(t);
        if top + 1 > self.dmax {
            return Err(QpbError::Truncation { bound: self.dmax, what: format!("d of degree {}", top) });
        }
        let mut out = InvTensor::zero();
        for (w, c) in t.iter() {
            for i in 0..w.len() {
                let sign = MuScalar::from_int(if i % 2 == 0 { 1 } else { -1 });
                let left = InvTensor::basis(w[..i].to_vec());
                let right = InvTensor::basis(w[i + 1..].to_vec());
                let mid = self.delta(&GammaInv::basis(w[i]))?;
                out.add_scaled(&tensor_mul(&tensor_mul(&left, &mid), &right), &(c * &sign));
            }
        }
        self.wedge_reduce(&out)
    }

    /// σ as a matrix on the ordered basis of degree-2 tensors (row-major, column j = σ(e_j)).
    pub fn sigma_matrix(&self) -> Result<(Vec<Vec<Key>>, Matrix)> {
        let words = self.degree2_words()?;
        let mut m = linalg::zeros(words.len(), words.len());
        for (j, w) in words.iter().enumerate() {
            let img = self.sigma(&InvTensor::basis(w.clone()))?;
            for (i, v) in words.iter().enumerate() {
                m[i][j] = img.coeff(v);
            }
        }
        Ok((words, m))
    }

    pub fn degree2_words(&self) -> Result<Vec<Vec<Key>>> {
        let basis = self.calc.basis().ok_or_else(|| QpbError::Unsupported {
            calculus: self.calc.tag().into(),
            what: "finite tensor basis".into(),
        })?;
        Ok(basis.iter().flat_map(|a| basis.iter().map(move |b| vec![*a, *b])).collect())
    }

    /// Eigenspaces of σ for the given eigenvalues.
    pub fn sigma_eigenspaces(&self, values: &[MuScalar]) -> Result<Vec<(MuScalar, Vec<InvTensor>)>> {
        let (words, m) = self.sigma_matrix()?;
        let n = words.len();
        let mut out = Vec::new();
        for v in values {
            let mut a = m.clone();
            for (i, row) in a.iter_mut().enumerate() {
                row[i] = &row[i] - v;
            }
            let ns = linalg::nullspace(&a, n);
            let vecs = ns
                .into_iter()
                .map(|x| words.iter().cloned().zip(x).collect::<InvTensor>())
                .collect();
            out.push((v.clone(), vecs));
        }
        Ok(out)
    }
}

/// `(π⊗π)φ(a)`.
pub fn pi_pi_phi(calc: &Calculus, a: &Elem) -> Result<InvTensor> {
    let mut out = InvTensor::zero();
    for ((l, r), c) in calc.su().comult(a).iter() {
        let pl = calc.pi_mono(*l)?;
        if pl.is_zero() {
            continue;
        }
        let pr = calc.pi_mono(*r)?;
        for (kl, cl) in pl.iter() {
            for (kr, cr) in pr.iter() {
                out.add_term(vec![*kl, *kr], &(c * cl) * cr);
            }
        }
    }
    Ok(out)
}

pub fn s_inv2_from_ideal(calc: &Calculus, a: &Elem) -> Result<InvTensor> {
    if !calc.in_ideal(a)? {
        return Err(QpbError::NotInIdeal(crate::hopf::elem_to_text(a, false)));
    }
    pi_pi_phi(calc, a)
}

/// Ideal elements of bounded degree: the minimal ideal from its generators,
/// otherwise the kernel of π on `{m − ε(m)}`.
fn ideal_elements(calc: &Calculus, degree: u32) -> Result<Vec<Elem>> {
    let su = calc.su();
    let monos: Vec<Mono> =
        crate::calculus::monomials_up_to(degree).into_iter().filter(|m| !m.is_one()).collect();
    if calc.is_minimal_generic() {
        let s = singlet(su);
        return Ok(monos
            .iter()
            .map(|m| su.mul(&s, &Elem::basis(*m).sub(&su.scalar(su.counit_mono(*m)))))
            .collect());
    }
    let images: Vec<GammaInv> = monos.iter().map(|m| calc.pi_mono(*m)).collect::<Result<_>>()?;
    let basis = calc.basis().unwrap_or(&[]).to_vec();
    let mat: Matrix = basis.iter().map(|k| images.iter().map(|v| v.coeff(k)).collect()).collect();
    let ns = linalg::nullspace(&mat, monos.len());
    Ok(ns
        .into_iter()
        .map(|x| {
            let mut e = Elem::zero();
            for (m, c) in monos.iter().zip(x) {
                e.add_scaled(&Elem::basis(*m).sub(&su.scalar(su.counit_mono(*m))), &c);
            }
            e
        })
        .collect())
}

fn s2_spanning_set(calc: &Calculus, degree: u32) -> Result<Vec<InvTensor>> {
    ideal_elements(calc, degree)?.iter().map(|a| pi_pi_phi(calc, a)).collect()
}

/// Complement 𝓛 with `π(𝓛)` as a list of pairs `(ℓ, π(ℓ))`.
fn build_complement(calc: &Calculus, k_max: u32) -> Result<Vec<(Elem, GammaInv)>> {
    let su = calc.su();
    let one = su.one();
    let raw: Vec<Elem> = match calc.kind() {
        CalculusKind::FourD => vec![su.gamma(), su.gamma_star(), su.alpha().sub(&one), su.alpha_star().sub(&one)],
        CalculusKind::MinimalMuMinusOne => {
            vec![su.gamma(), su.alpha().sub(&su.alpha_star()), su.gamma_star()]
        }
        CalculusKind::MinimalGeneric => {
            let mut v = vec![singlet(su)];
            for k in 1..=k_max {
                for g in [su.gamma(), su.gamma_star()] {
                    v.extend(first_legs(su, &su.pow(&g, k)));
                }
            }
            v
        }
        CalculusKind::GenericIdeal { .. } => calc
            .basis()
            .unwrap_or(&[])
            .iter()
            .filter_map(|k| calc.representative(*k).cloned())
            .collect(),
    };
    let mut out: Vec<(Elem, GammaInv)> = Vec::new();
    let mut ech = Echelon::new();
    for l in raw {
        let p = calc.pi(&l)?;
        if ech.insert(&p) {
            out.push((l, p));
        }
    }
    Ok(out)
}

/// Span of the first legs of `ad(a)`, one element per second-leg monomial.
fn first_legs(su: &crate::hopf::Su2, a: &Elem) -> Vec<Elem> {
    let mut by_right: std::collections::BTreeMap<Mono, Elem> = Default::default();
    for ((l, r), c) in su.ad(a).iter() {
        by_right.entry(*r).or_default().add_term(*l, c.clone());
    }
    by_right.into_values().collect()
}
