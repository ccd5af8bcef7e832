//! Verification suites with machine-readable reports.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::braided::{tensor_to_text, Braided, InvTensor};
use crate::bundle::{validate_cocycle, ClassicalCocycle, DiscreteBase, FixedPointBundle, GluedBundle, GluedElement};
use crate::calculus::{
    calculus_by_tag, gamma_to_text, is_admissible, ker_eps_squared_generators, minimal_ideal_generators, monomials_up_to,
    singlet, Calculus, GammaInv, Key,
};
use crate::error::{QpbError, Result};
use crate::forms::{poly_var, BaseForm};
use crate::gauge::{random_potential, Gauge, GaugePotential, TensorialForm};
use crate::hopf::{elem_to_text, Elem, Mono, MuParam, Su2, Tensor3};
use crate::linalg::{self, Echelon};
use crate::qspecial::{jacobi_p, ladder_coefficient_sq, partial_integration_rhs, zeta, Ladders, QPoly};
use crate::scalar::{GaussRational, MuScalar};

pub const SUITES: [&str; 7] = ["hopf", "calculus", "qspecial", "braid", "gauge", "bundle", "all"];

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub id: String,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({"id": c.id, "status": if c.passed { "pass" } else { "fail" }, "witness": c.witness}))
            .collect();
        json!({"suite": self.suite, "passed": self.passed(), "checks": checks})
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
        for c in &self.checks {
            let status = if c.passed { "pass" } else { "FAIL" };
            out.push_str(&format!("{:<width$}  {}", c.id, status, width = width));
            if let Some(w) = &c.witness {
                out.push_str(&format!("  {}", w));
            }
            out.push('\n');
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        out.push_str(&format!("{}: {} checks, {} failed\n", self.suite, self.checks.len(), failed));
        out
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Calculus for the braid and gauge suites; `None` runs the default set.
    pub calculus: Option<String>,
    pub mu_minus_one: bool,
    pub seed: u64,
    /// Random potentials per chart dimension in the gauge suite.
    pub potentials: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { calculus: None, mu_minus_one: false, seed: 1, potentials: 20 }
    }
}

type Outcome = Result<Option<String>>;

fn check(id: String, f: impl FnOnce() -> Outcome) -> CheckResult {
    match f() {
        Ok(None) => CheckResult { id, passed: true, witness: None },
        Ok(Some(w)) => CheckResult { id, passed: false, witness: Some(w) },
        Err(e) => CheckResult { id, passed: false, witness: Some(format!("error: {}", e)) },
    }
}

fn fail_if(cond: bool, w: impl FnOnce() -> String) -> Outcome {
    Ok(if cond { Some(w()) } else { None })
}

fn s(t: &str) -> MuScalar {
    MuScalar::parse(t).expect("fixture scalar")
}

fn mu(e: i64) -> MuScalar {
    MuScalar::mu_pow(e)
}

pub fn run_suite(name: &str, opts: &VerifyOptions) -> Result<SuiteReport> {
    let checks = match name {
        "hopf" => hopf_suite(opts),
        "calculus" => calculus_suite(opts),
        "qspecial" => qspecial_suite(opts),
        "braid" => braid_suite(opts)?,
        "gauge" => gauge_suite(opts)?,
        "bundle" => bundle_suite(opts),
        "all" => {
            let mut v = Vec::new();
            for s in &SUITES[..6] {
                v.extend(run_suite(s, opts)?.checks);
            }
            v
        }
        other => return Err(QpbError::Invalid(format!("unknown suite '{}'", other))),
    };
    Ok(SuiteReport { suite: name.to_string(), checks })
}

fn calculus_tags(opts: &VerifyOptions, all: &[&str]) -> Result<Vec<String>> {
    match (&opts.calculus, opts.mu_minus_one) {
        (Some(t), false) => {
            calculus_by_tag(t).map(|_| ())?;
            Ok(vec![t.clone()])
        }
        (Some(t), true) if t == "mu-minus-one" => Ok(vec![t.clone()]),
        (Some(t), true) => {
            Err(QpbError::Unsupported { calculus: t.clone(), what: "the mu = -1 specialization".into() })
        }
        (None, true) => Ok(vec!["mu-minus-one".into()]),
        (None, false) => Ok(all.iter().map(|t| t.to_string()).collect()),
    }
}

// ---------------------------------------------------------------- hopf

pub fn hopf_suite(opts: &VerifyOptions) -> Vec<CheckResult> {
    let h = Su2::new(if opts.mu_minus_one { MuParam::MinusOne } else { MuParam::Generic });
    let words: Vec<Elem> = monomials_up_to(4).into_iter().map(Elem::basis).collect();
    let show = |x: &Elem| elem_to_text(x, false);
    let mut out = Vec::new();
    out.push(check("hopf.coassociativity".into(), || {
        for x in &words {
            let mut left = Tensor3::zero();
            for ((a, b), c) in h.comult(x).iter() {
                for ((a1, a2), c1) in h.comult_mono(*a).iter() {
                    left.add_term((*a1, *a2, *b), c * c1);
                }
            }
            let mut right = Tensor3::zero();
            for ((a, b), c) in h.comult(x).iter() {
                for ((b1, b2), c1) in h.comult_mono(*b).iter() {
                    right.add_term((*a, *b1, *b2), c * c1);
                }
            }
            if left != right {
                return Ok(Some(show(x)));
            }
        }
        Ok(None)
    }));
    out.push(check("hopf.counit".into(), || {
        for x in &words {
            let (mut l, mut r) = (Elem::zero(), Elem::zero());
            for ((a, b), c) in h.comult(x).iter() {
                l.add_term(*b, c * &h.counit_mono(*a));
                r.add_term(*a, c * &h.counit_mono(*b));
            }
            if &l != x || &r != x {
                return Ok(Some(show(x)));
            }
        }
        Ok(None)
    }));
    out.push(check("hopf.antipode".into(), || {
        for x in &words {
            let phi = h.comult(x);
            let eps = h.scalar(h.counit(x));
            let k1 = h.multiply_legs(&h.tensor_map(&phi, |m| h.antipode_mono(m), Elem::basis));
            let k2 = h.multiply_legs(&h.tensor_map(&phi, Elem::basis, |m| h.antipode_mono(m)));
            if k1 != eps || k2 != eps {
                return Ok(Some(show(x)));
            }
        }
        Ok(None)
    }));
    out.push(check("hopf.star_compatibility".into(), || {
        for x in &words {
            let lhs = h.comult(&h.star(x));
            let rhs = h.tensor_map(&h.comult(x), |m| h.star_mono(m), |m| h.star_mono(m));
            if lhs != rhs || h.star(&h.star(x)) != *x {
                return Ok(Some(show(x)));
            }
            if h.antipode(&h.star(&h.antipode(&h.star(x)))) != *x {
                return Ok(Some(format!("kappa and * on {}", show(x))));
            }
        }
        Ok(None)
    }));
    out.push(check("hopf.star_antimultiplicative".into(), || {
        let short: Vec<&Elem> = words.iter().filter(|e| e.keys().all(|m| m.degree() <= 2)).collect();
        for x in &short {
            for y in &short {
                if h.star(&h.mul(x, y)) != h.mul(&h.star(y), &h.star(x)) {
                    return Ok(Some(format!("{} , {}", show(x), show(y))));
                }
            }
        }
        Ok(None)
    }));
    out
}

// ---------------------------------------------------------------- calculus

fn gamma_diff(label: &str, got: &GammaInv, want: &GammaInv) -> Option<String> {
    let diff = got.sub(want);
    if diff.is_zero() {
        return None;
    }
    let parts: Vec<String> = diff
        .keys()
        .map(|k| format!("{}: computed {} table {}", k, got.coeff(k).to_text(), want.coeff(k).to_text()))
        .collect();
    Some(format!("erratum {}: {}", label, parts.join("; ")))
}

/// Right action `ξ_{n,k} ∘ a` on the generators.
pub fn module_table(n: i32, k: u32, g: Mono) -> Option<GammaInv> {
    let a = n.unsigned_abs() as i64;
    let k64 = k as i64;
    let one = MuScalar::one();
    let t = |c: MuScalar, n: i32, k: u32| GammaInv::single(Key::Xi(n, k), c);
    match g {
        Mono::A => Some(t(mu(-2 * k64 - a), n, k).add(&t(&mu(a) - &mu(-2 * k64 - a), n, k + 1))),
        Mono::AS => Some(t(mu(2 * k64 + a), n, k).add(&t(&mu(2) * &(&mu(a) - &mu(2 * k64 + 3 * a)), n, k + 1))),
        Mono::G if n >= 0 => Some(t(&one - &mu(2 * (k64 + n as i64)), n + 1, k)),
        Mono::GS if n <= 0 => Some(t(&one - &mu(2 * (k64 - n as i64)), n - 1, k)),
        Mono::G => Some(
            t(&one - &mu(-2 * k64), n + 1, k + 1).add(&t(&mu(-2 * k64) * &(&one - &mu(2 * (k64 - n as i64))), n + 1, k + 2)),
        ),
        Mono::GS => Some(
            t(&one - &mu(-2 * k64), n - 1, k + 1).add(&t(&mu(-2 * k64) * &(&one - &mu(2 * (k64 + n as i64))), n - 1, k + 2)),
        ),
        _ => None,
    }
}

pub fn calculus_suite(opts: &VerifyOptions) -> Vec<CheckResult> {
    let mut out = Vec::new();
    if !opts.mu_minus_one {
        let c = Calculus::minimal();
        let h = c.su();
        out.push(check("calculus.projection_of_generators".into(), || {
            let cases = [
                (h.alpha(), Elem::from_terms([(Mono::ONE, s("1/2")), (Mono::new(0, 1, 1), s("-1"))])),
                (h.alpha_star(), Elem::from_terms([(Mono::ONE, s("-1/2")), (Mono::new(0, 1, 1), mu(2))])),
                (h.gamma(), Elem::single(Mono::new(1, 1, 0), s("-1"))),
                (h.gamma_star(), Elem::basis(Mono::new(-1, 0, 1))),
            ];
            for (a, q) in cases {
                let got = c.rho(&c.pi(&a)?)?;
                if got != q {
                    return Ok(Some(format!("rho pi({}) = {}", elem_to_text(&a, false), elem_to_text(&got, false))));
                }
            }
            Ok(None)
        }));
        out.push(check("calculus.module_structure".into(), || {
            let mut errata = Vec::new();
            for n in -3..=3 {
                for k in 0..=3u32 {
                    for g in [Mono::A, Mono::AS, Mono::G, Mono::GS] {
                        let got = c.circ(&GammaInv::basis(Key::Xi(n, k)), &Elem::basis(g))?;
                        let want = module_table(n, k, g).expect("generator");
                        if let Some(d) = gamma_diff(&format!("xi[{},{}] o {}", n, k, g), &got, &want) {
                            errata.push(d);
                        }
                    }
                }
            }
            Ok(if errata.is_empty() { None } else { Some(errata.join("\n")) })
        }));
        out.push(check("calculus.minimal_ideal_admissible".into(), || {
            let r = is_admissible(h, &minimal_ideal_generators(h), 3);
            fail_if(!r.admissible, || format!("{:?}", r.witness.map(|w| elem_to_text(&w.2, false))))
        }));
        out.push(check("calculus.singlet_alone_not_in_ideal".into(), || {
            fail_if(is_admissible(h, &[singlet(h)], 0).admissible, || "singlet admissible".into())
        }));
        out.push(check("calculus.ker_eps_squared_generic_not_admissible".into(), || {
            let r = is_admissible(h, &ker_eps_squared_generators(h), 2);
            match (r.admissible, r.witness) {
                (false, Some((_, _, v))) if !v.is_zero() => Ok(None),
                _ => Ok(Some("no witness".into())),
            }
        }));
    }
    let h1 = Su2::minus_one();
    // at μ = −1, (α−1)γ + γ(α−1) = −2γ lies in ker(ε)² while π(γ) ≠ 0
    out.push(check("calculus.ker_eps_squared_mu_minus_one_witness".into(), || {
        let one = h1.one();
        let am1 = h1.alpha().sub(&one);
        let w = h1.mul(&am1, &h1.gamma()).add(&h1.mul(&h1.gamma(), &am1));
        let c = Calculus::minimal_mu_minus_one()?;
        let r = is_admissible(&h1, &ker_eps_squared_generators(&h1), 2);
        fail_if(
            w != h1.gamma().scale(&s("-2")) || c.pi(&h1.gamma())?.is_zero() || r.admissible,
            || format!("(a-1)g + g(a-1) = {}", elem_to_text(&w, false)),
        )
    }));
    out.push(check("calculus.mu_minus_one_projection".into(), || {
        let c = Calculus::minimal_mu_minus_one()?;
        let h = c.su();
        let want = [
            (h.gamma(), GammaInv::basis(Key::EtaPlus)),
            (h.alpha().sub(&h.alpha_star()), GammaInv::basis(Key::Eta3)),
            (h.gamma_star(), GammaInv::basis(Key::EtaMinus)),
        ];
        for (a, x) in want {
            let got = c.pi(&a)?;
            if got != x {
                return Ok(Some(format!("pi({}) = {}", elem_to_text(&a, false), gamma_to_text(&got, false))));
            }
        }
        Ok(None)
    }));
    out
}

// ---------------------------------------------------------------- qspecial

pub fn qspecial_suite(opts: &VerifyOptions) -> Vec<CheckResult> {
    let seed = opts.seed;
    let c = Calculus::minimal();
    let mut out = Vec::new();
    let span: Vec<(i32, u32)> = (-2..=2).flat_map(|n| (0..=2u32).map(move |k| (n, k))).collect();
    let xi = |n: i32, k: u32| GammaInv::basis(Key::Xi(n, k));
    let ladders = Ladders::new(&c);
    let l = match &ladders {
        Ok(l) => l,
        Err(e) => return vec![check("qspecial.ladders".into(), || Err(e.clone()))],
    };
    out.push(check("qspecial.k3_commutators".into(), || {
        for &(n, k) in &span {
            let x = xi(n, k);
            let kp = l.k_plus(&x)?;
            let km = l.k_minus(&x)?;
            if l.k3(&kp)?.sub(&l.k_plus(&l.k3(&x)?)?) != kp || l.k3(&km)?.sub(&l.k_minus(&l.k3(&x)?)?) != km.neg() {
                return Ok(Some(format!("xi[{},{}]", n, k)));
            }
        }
        Ok(None)
    }));
    out.push(check("qspecial.ladder_commutator".into(), || {
        for &(n, k) in &span {
            let x = xi(n, k);
            let lhs = l.k_plus(&l.k_minus(&x)?)?.sub(&l.k_minus(&l.k_plus(&x)?)?.scale(&mu(2)));
            let spectral = (&MuScalar::one() - &mu(-4 * n as i64)).div(&(&MuScalar::one() - &mu(-2)))?;
            if lhs != x.scale(&spectral) {
                return Ok(Some(format!("xi[{},{}]", n, k)));
            }
        }
        Ok(None)
    }));
    out.push(check("qspecial.twisted_leibniz".into(), || {
        for &(n1, k1) in &span {
            for &(n2, k2) in &span {
                let (a, b) = (xi(n1, k1), xi(n2, k2));
                let ab = l.product(&a, &b)?;
                let k3 = l.product(&l.k3(&a)?, &b)?.add(&l.product(&a, &l.k3(&b)?)?);
                if l.k3(&ab)? != k3 {
                    return Ok(Some(format!("K3 on xi[{},{}] xi[{},{}]", n1, k1, n2, k2)));
                }
                for name in ["K+", "K-"] {
                    let op = |x: &GammaInv| if name == "K+" { l.k_plus(x) } else { l.k_minus(x) };
                    let rhs = l.product(&op(&a)?, &l.chi_varpi(&b)?)?.add(&l.product(&a, &op(&b)?)?);
                    if op(&ab)? != rhs {
                        return Ok(Some(format!("{} on xi[{},{}] xi[{},{}]", name, n1, k1, n2, k2)));
                    }
                }
            }
        }
        Ok(None)
    }));
    out.push(check("qspecial.orthogonality".into(), || {
        let ps: Vec<QPoly> = (0..=5).map(|k| jacobi_p(k).0).collect();
        for j in 0..=5 {
            for k in (j + 1)..=5 {
                if !ps[j].pair(&ps[k]).is_zero() {
                    return Ok(Some(format!("<p{}, p{}> = {}", j, k, ps[j].pair(&ps[k]).to_text())));
                }
            }
        }
        Ok(None)
    }));
    out.push(check("qspecial.harmonic_ladders".into(), || {
        for k in 0..=3usize {
            let ki = k as i64;
            for m in -ki..=ki {
                let z = zeta(&c, k, m)?;
                if l.k3(&z.element)? != z.element.scale(&MuScalar::from_int(m)) {
                    return Ok(Some(format!("K3 on zeta({},{})", k, m)));
                }
                if m == ki {
                    continue;
                }
                let up = zeta(&c, k, m + 1)?;
                let kz = l.k_plus(&z.element)?;
                let proportional = match up.element.leading() {
                    Some((key, cf)) => kz == up.element.scale(&kz.coeff(key).div(cf)?),
                    None => false,
                };
                let ratio = c.inner_product(&kz, &kz)?.div(&z.norm_sq)?;
                if !proportional || ratio != ladder_coefficient_sq(ki, m + 1) {
                    return Ok(Some(format!("k={} m={}: norm ratio {}", k, m, ratio.to_text())));
                }
            }
        }
        Ok(None)
    }));
    out.push(check("qspecial.harmonic_star_symmetry".into(), || {
        let h = c.su();
        for k in 0..=3usize {
            for m in 0..=k as i64 {
                let neg = c.rho(&zeta(&c, k, -m)?.element)?;
                let pos = c.rho(&zeta(&c, k, m)?.element)?;
                if h.star(&neg) != pos.scale(&(-&mu(1)).pow(m)?) {
                    return Ok(Some(format!("k={} m={}", k, m)));
                }
            }
        }
        Ok(None)
    }));
    out.push(check("qspecial.partial_integration".into(), || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut polys: Vec<QPoly> = (0..=3).map(|k| jacobi_p(k).0).collect();
        for _ in 0..6 {
            let len = rng.gen_range(1..=5);
            polys.push(QPoly::new(
                (0..len).map(|_| &MuScalar::from_int(rng.gen_range(-3..=3)) * &mu(rng.gen_range(-2..=2))).collect(),
            ));
        }
        for p in &polys {
            for q in &polys {
                for n in 1..=3 {
                    if q.mul(&p.q_diff_n(n)).integrate() != partial_integration_rhs(p, q, n) {
                        return Ok(Some(format!("p = {} q = {} n = {}", p.to_text(), q.to_text(), n)));
                    }
                }
            }
        }
        Ok(None)
    }));
    out
}

// ---------------------------------------------------------------- braid

fn t2(terms: &[(&str, Key, Key)]) -> InvTensor {
    terms.iter().map(|(c, a, b)| (vec![*a, *b], s(c))).collect()
}

fn tensor_diff(label: &str, got: &InvTensor, want: &InvTensor) -> Option<String> {
    if got == want {
        None
    } else {
        Some(format!("{}: computed {} expected {}", label, tensor_to_text(got, false), tensor_to_text(want, false)))
    }
}

fn kappa_triplet(j: Key) -> InvTensor {
    use Key::{Eta3 as E3, EtaMinus as EM, EtaPlus as EP};
    match j {
        EP => t2(&[("1", EP, E3), ("-mu^2", E3, EP)]),
        EM => t2(&[("1", E3, EM), ("-mu^2", EM, E3)]),
        _ => t2(&[("1-mu^2", E3, E3), ("mu*(1+mu^2)", EP, EM), ("-mu*(1+mu^2)", EM, EP)]),
    }
}

/// The braiding of the 4D calculus on basis pairs. The `η₃⊗τ` coefficient of
/// `σ(η₃⊗η₃)` is the one forced by σ-invariance of the singlet.
pub fn four_d_sigma_table() -> Vec<((Key, Key), InvTensor)> {
    use Key::{Eta3 as E3, EtaMinus as EM, EtaPlus as EP, Tau as T};
    let c1 = "(1+mu^6)/(mu^2*(1+mu^2))";
    let ck = s("(1-mu)*(1-mu^3)/mu^2");
    let with_kappa = |j: Key| {
        let mut x = t2(&[(c1, j, T)]);
        x.add_scaled(&kappa_triplet(j), &ck);
        x
    };
    let s33 = t2(&[
        ("3-mu^2-mu^-2", E3, E3),
        ("(1-mu^4)/mu", EM, EP),
        ("-(1-mu^4)/mu", EP, EM),
        ("-(1+mu)^2*(1-mu^2)/(mu^2*(1+mu+mu^2))", E3, T),
    ]);
    vec![
        ((EP, EP), t2(&[("1", EP, EP)])),
        ((EM, EM), t2(&[("1", EM, EM)])),
        ((T, T), t2(&[("1", T, T)])),
        ((EP, T), t2(&[("1", T, EP)])),
        ((E3, T), t2(&[("1", T, E3)])),
        ((EM, T), t2(&[("1", T, EM)])),
        ((T, EM), with_kappa(EM)),
        ((T, E3), with_kappa(E3)),
        ((T, EP), with_kappa(EP)),
        ((E3, E3), s33),
        ((EP, E3), t2(&[("1", E3, EP), ("-(1+mu)*(1-mu^2)/(mu^2*(1-mu^3))", EP, T), ("1-mu^-2", EP, E3)])),
        ((EM, E3), t2(&[("1", E3, EM), ("(1+mu)*(1-mu^2)/(1-mu^3)", EM, T), ("1-mu^2", EM, E3)])),
        ((E3, EP), t2(&[("1", EP, E3), ("(1+mu)*(1-mu^2)/(1-mu^3)", EP, T), ("1-mu^2", E3, EP)])),
        ((E3, EM), t2(&[("1", EM, E3), ("-(1+mu)*(1-mu^2)/(mu^2*(1-mu^3))", EM, T), ("1-mu^-2", E3, EM)])),
        (
            (EP, EM),
            t2(&[
                ("1", EM, EP),
                ("-(1-mu^2)/(mu*(1+mu^2))", E3, E3),
                ("-(1+mu)*(1-mu^2)/(mu*(1+mu^2)*(1-mu^3))", E3, T),
            ]),
        ),
        (
            (EM, EP),
            t2(&[
                ("1", EP, EM),
                ("(1-mu^2)/(mu*(1+mu^2))", E3, E3),
                ("(1+mu)*(1-mu^2)/(mu*(1+mu^2)*(1-mu^3))", E3, T),
            ]),
        ),
    ]
}

/// The nine generators of the quadratic ideal of the 4D calculus.
pub fn four_d_s2_display() -> Vec<InvTensor> {
    use Key::{Eta3 as E3, EtaMinus as EM, EtaPlus as EP, Tau as T};
    let mut v = vec![
        t2(&[("1", EP, EP)]),
        t2(&[("mu", E3, E3), ("mu^4", EP, EM), ("1", EM, EP)]),
        t2(&[("1", EM, EM)]),
        t2(&[("mu^2", EP, E3), ("1", E3, EP)]),
        t2(&[("1", EM, E3), ("mu^2", E3, EM)]),
    ];
    for j in [EP, E3, EM] {
        let mut x = t2(&[("1", T, j), ("1", j, T)]).scale(&s("(1+mu^4)/(1-mu^3)"));
        x.add_scaled(&kappa_triplet(j), &s("1-mu"));
        v.push(x);
    }
    v.push(t2(&[
        ("(1+mu)*(1+mu^3)/(mu*(1-mu)*(1-mu^3))", T, T),
        ("mu", E3, E3),
        ("-(1+mu^2)", EP, EM),
        ("-mu^2*(1+mu^2)", EM, EP),
    ]));
    v
}

fn braided_for(tag: &str) -> Result<Braided> {
    Braided::new(Arc::new(calculus_by_tag(tag)?))
}

/// Probes of the minimal calculus: the images of `γ, γ*, α−1, α*−1`.
fn minimal_probes(c: &Calculus) -> Result<Vec<GammaInv>> {
    let su = c.su();
    let one = su.one();
    [su.gamma(), su.gamma_star(), su.alpha().sub(&one), su.alpha_star().sub(&one)].iter().map(|a| c.pi(a)).collect()
}

fn probes(b: &Braided) -> Result<Vec<GammaInv>> {
    match b.calculus().basis() {
        Some(keys) => Ok(keys.iter().map(|k| GammaInv::basis(*k)).collect()),
        None => minimal_probes(b.calculus()),
    }
}

pub fn braid_suite(opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for tag in calculus_tags(opts, &["4d", "mu-minus-one", "minimal"])? {
        let b = match braided_for(&tag) {
            Ok(b) => b,
            Err(e) => {
                out.push(check(format!("braid.{}.construction", tag), || Err(e)));
                continue;
            }
        };
        out.extend(braid_checks(&tag, &b));
    }
    Ok(out)
}

fn braid_checks(tag: &str, b: &Braided) -> Vec<CheckResult> {
    let id = |n: &str| format!("braid.{}.{}", tag, n);
    let mut out = Vec::new();
    let finite = b.calculus().basis().map(|k| k.to_vec());
    if tag == "4d" {
        out.push(check(id("sigma_table"), || {
            let mut errs = Vec::new();
            for ((a, c), want) in four_d_sigma_table() {
                let got = b.sigma(&InvTensor::basis(vec![a, c]))?;
                if let Some(d) = tensor_diff(&format!("sigma({} (x) {})", a, c), &got, &want) {
                    errs.push(d);
                }
            }
            Ok(if errs.is_empty() { None } else { Some(errs.join("\n")) })
        }));
        out.push(check(id("spectrum"), || {
            let spaces = b.sigma_eigenspaces(&[s("1"), s("-mu^2"), s("-mu^-2")])?;
            let dims: Vec<usize> = spaces.iter().map(|(_, v)| v.len()).collect();
            fail_if(dims != [10, 3, 3], || format!("multiplicities {:?}", dims))
        }));
        out.push(check(id("quadratic_ideal"), || {
            let display = four_d_s2_display();
            let mut e = Echelon::new();
            for v in b.s2_basis() {
                e.insert(v);
            }
            if b.s2_basis().len() != 9 || linalg::rank_of(&display) != 9 {
                return Ok(Some(format!("dimension {}", b.s2_basis().len())));
            }
            for x in &display {
                if !e.contains(x) || b.sigma(x)? != *x {
                    return Ok(Some(tensor_to_text(x, false)));
                }
            }
            let spaces = b.sigma_eigenspaces(&[s("1")])?;
            let mut fixed = b.s2_basis().to_vec();
            fixed.push(InvTensor::basis(vec![Key::Tau, Key::Tau]));
            let mut fe = Echelon::new();
            for v in &fixed {
                fe.insert(v);
            }
            for v in &spaces[0].1 {
                if !fe.contains(v) {
                    return Ok(Some(format!("fixed vector outside the ideal and tau tau: {}", tensor_to_text(v, false))));
                }
            }
            Ok(None)
        }));
        out.push(check(id("unitarity"), || {
            let words = b.degree2_words()?;
            for x in &words {
                let sx = b.sigma(&InvTensor::basis(x.clone()))?;
                for y in &words {
                    let sy = b.sigma(&InvTensor::basis(y.clone()))?;
                    if b.inner2(&sx, &sy)? != b.inner2(&InvTensor::basis(x.clone()), &InvTensor::basis(y.clone()))? {
                        return Ok(Some(format!("{:?} {:?}", x, y)));
                    }
                }
            }
            Ok(None)
        }));
    }
    if tag == "mu-minus-one" {
        out.push(check(id("flip"), || {
            let keys = finite.clone().unwrap_or_default();
            for a in &keys {
                for c in &keys {
                    let got = b.sigma(&InvTensor::basis(vec![*a, *c]))?;
                    if let Some(d) = tensor_diff("flip", &got, &InvTensor::basis(vec![*c, *a])) {
                        return Ok(Some(d));
                    }
                }
            }
            fail_if(b.s2_basis().len() != 6, || format!("dimension {}", b.s2_basis().len()))
        }));
    }
    out.push(check(id("ideal_sigma_fixed"), || {
        for x in b.s2_basis() {
            if let Some(d) = tensor_diff("sigma-fixed", &b.sigma(x)?, x) {
                return Ok(Some(d));
            }
        }
        Ok(None)
    }));
    if let Some(keys) = &finite {
        out.push(check(id("braid_equation"), || {
            for a in keys {
                for c in keys {
                    for d in keys {
                        let t = InvTensor::basis(vec![*a, *c, *d]);
                        let lhs = b.sigma_at(&b.sigma_at(&b.sigma_at(&t, 0)?, 1)?, 0)?;
                        let rhs = b.sigma_at(&b.sigma_at(&b.sigma_at(&t, 1)?, 0)?, 1)?;
                        if let Some(w) = tensor_diff(&format!("{} {} {}", a, c, d), &lhs, &rhs) {
                            return Ok(Some(w));
                        }
                    }
                }
            }
            Ok(None)
        }));
        out.push(check(id("differential_squares_to_zero"), || {
            for k in keys {
                let d1 = b.d_inv(&InvTensor::basis(vec![*k]))?;
                let d2 = b.d_inv(&d1)?;
                if !d2.is_zero() {
                    return Ok(Some(format!("d d {} = {}", k, tensor_to_text(&d2, false))));
                }
            }
            Ok(None)
        }));
    }
    out.push(check(id("commutator_identity"), || {
        for x in probes(b)? {
            let d = b.delta(&x)?;
            let rhs = b.sigma(&d)?.sub(&d);
            if let Some(w) = tensor_diff(&gamma_to_text(&x, false), &b.c_top(&x)?, &rhs) {
                return Ok(Some(w));
            }
        }
        Ok(None)
    }));
    if b.calculus().has_nu() {
        out.push(check(id("restriction_identity"), || {
            let c = b.calculus();
            let su = c.su();
            let mut ps = probes(b)?;
            if finite.is_none() {
                ps.push(c.pi(&singlet(su))?);
            }
            for x in ps {
                let d = b.delta(&x)?;
                let mut lhs = GammaInv::zero();
                for (w, coef) in d.iter() {
                    lhs.add_term(w[1], coef * &c.nu(&GammaInv::basis(w[0]))?);
                    lhs.add_term(w[0], -(coef * &c.nu(&GammaInv::basis(w[1]))?));
                }
                let mut rhs = GammaInv::zero();
                for ((k, m), coef) in c.varpi(&x)?.iter() {
                    rhs.add_term(*k, coef * &su.x_mono(*m));
                }
                if lhs != rhs {
                    return Ok(Some(format!("{} vs {}", gamma_to_text(&lhs, false), gamma_to_text(&rhs, false))));
                }
            }
            Ok(None)
        }));
    }
    out
}

// ---------------------------------------------------------------- gauge

/// A potential whose coefficients are independent coordinates `x3, x4, …`.
pub fn indeterminate_potential(keys: &[Key]) -> Result<TensorialForm> {
    let n = 2 + 2 * keys.len();
    let mut a = TensorialForm::zero(n, 1);
    for (j, k) in keys.iter().enumerate() {
        let f = BaseForm::from_word(n, &[0], &poly_var(n, 2 + 2 * j)).add(&BaseForm::from_word(n, &[1], &poly_var(n, 3 + 2 * j)))?;
        a.set(*k, f)?;
    }
    Ok(a)
}

/// The curvature of the 4D calculus written out in components.
pub fn four_d_curvature_formula(a: &TensorialForm) -> Result<Vec<(Key, BaseForm)>> {
    use Key::{Eta3 as E3, EtaMinus as EM, EtaPlus as EP, Tau as T};
    let da = a.d();
    let prod = |x: Key, y: Key| a.get(x).mul(&a.get(y));
    Ok(vec![
        (T, da.get(T).add(&prod(EM, EP)?.scale(&s("mu*(1-mu^2)")))?),
        (E3, da.get(E3).add(&prod(EP, EM)?.scale(&s("2*mu")))?),
        (EM, da.get(EM).add(&prod(E3, EM)?)?),
        (EP, da.get(EP).add(&prod(EP, E3)?)?),
    ])
}

pub fn gauge_suite(opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for tag in calculus_tags(opts, &["4d", "mu-minus-one", "minimal"])? {
        let b = match braided_for(&tag) {
            Ok(b) => b,
            Err(e) => {
                out.push(check(format!("gauge.{}.construction", tag), || Err(e)));
                continue;
            }
        };
        out.extend(gauge_checks(&tag, &b, opts));
    }
    Ok(out)
}

fn gauge_checks(tag: &str, b: &Braided, opts: &VerifyOptions) -> Vec<CheckResult> {
    let id = |n: &str| format!("gauge.{}.{}", tag, n);
    let g = Gauge::new(b);
    let c = b.calculus();
    let mut out = Vec::new();
    if tag == "4d" {
        out.push(check(id("curvature_components"), || {
            let a = indeterminate_potential(&[Key::Tau, Key::EtaPlus, Key::Eta3, Key::EtaMinus])?;
            let f = g.curvature(&a)?;
            for (k, want) in four_d_curvature_formula(&a)? {
                if f.get(k) != want {
                    return Ok(Some(format!("F({}) = {}", k, f.get(k))));
                }
            }
            Ok(None)
        }));
    }
    if let Some(keys) = c.basis().map(|k| k.to_vec()) {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut pots = Vec::new();
        let mut build_err = None;
        for n in [2usize, 3] {
            for _ in 0..opts.potentials {
                match random_potential(c, &keys, n, &mut rng).and_then(|a| GaugePotential::new(c, a)) {
                    Ok(p) => pots.push(p),
                    Err(e) => build_err = Some(e),
                }
            }
        }
        if let Some(e) = build_err {
            out.push(check(id("random_potentials"), || Err(e)));
            return out;
        }
        out.push(check(id("structure_equation"), || {
            for (i, p) in pots.iter().enumerate() {
                if !g.structure_check(p.form())? {
                    return Ok(Some(format!("potential {}", i)));
                }
            }
            Ok(None)
        }));
        let mut rhs_zero = true;
        out.push(check(id("bianchi_identity"), || {
            for (i, p) in pots.iter().enumerate() {
                let (l, r) = g.bianchi_sides(p.form())?;
                rhs_zero &= r.is_zero();
                if l != r {
                    return Ok(Some(format!("potential {}", i)));
                }
            }
            Ok(None)
        }));
        if tag == "mu-minus-one" {
            out.push(check(id("bianchi_right_side_vanishes"), || fail_if(!rhs_zero, || "nonzero right side".into())));
            out.push(check(id("q_omega_vanishes"), || {
                for (i, p) in pots.iter().enumerate() {
                    let a = p.form();
                    let phi = pots
                        .iter()
                        .cycle()
                        .skip(i + 1)
                        .map(|q| q.form())
                        .find(|q| q.chart_dim() == a.chart_dim())
                        .expect("same chart");
                    if !g.q_omega(phi, a)?.is_zero() || !g.q_omega(&g.curvature(a)?, a)?.is_zero() {
                        return Ok(Some(format!("potential {}", i)));
                    }
                }
                Ok(None)
            }));
            out.push(check(id("r_omega_vanishes"), || {
                let su = c.su();
                let one = su.one();
                let kers = [su.gamma(), su.gamma_star(), su.alpha().sub(&one), su.alpha_star().sub(&one)];
                let mut ideal = Vec::new();
                for x in &kers {
                    for y in &kers {
                        let p = su.mul(x, y);
                        if c.in_ideal(&p)? {
                            ideal.push(p);
                        }
                    }
                }
                if ideal.is_empty() {
                    return Ok(Some("no ideal probes".into()));
                }
                for p in pots.iter().take(5) {
                    for x in &ideal {
                        if !g.r_omega(p.form(), x)?.is_zero() {
                            return Ok(Some(elem_to_text(x, false)));
                        }
                    }
                }
                Ok(None)
            }));
        }
    } else {
        out.extend(minimal_gauge_checks(tag, &g, opts));
    }
    out
}

fn minimal_ideal_probes(c: &Calculus) -> Vec<Elem> {
    let su = c.su();
    let sg = singlet(su);
    let one = su.one();
    let mut out = Vec::new();
    for w in [su.gamma(), su.gamma_star(), su.alpha().sub(&one), su.alpha_star().sub(&one)] {
        let a = su.mul(&sg, &w);
        out.push(a.clone());
        for g in [su.gamma(), su.gamma_star(), su.alpha()] {
            out.push(su.mul(&a, &g));
        }
    }
    out
}

fn minimal_gauge_checks(tag: &str, g: &Gauge, opts: &VerifyOptions) -> Vec<CheckResult> {
    let id = |n: &str| format!("gauge.{}.{}", tag, n);
    let c = g.calculus();
    let n = 2;
    let keys = [Key::Xi(0, 0), Key::Xi(0, 1), Key::Xi(1, 0), Key::Xi(-1, 0), Key::Xi(1, 1)];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let pots: Result<Vec<TensorialForm>> = (0..5).map(|_| random_potential(c, &keys, n, &mut rng)).collect();
    let pots = match pots {
        Ok(p) => p,
        Err(e) => return vec![check(id("random_potentials"), || Err(e))],
    };
    let mut out = Vec::new();
    out.push(check(id("decomposition"), || {
        for a in &pots {
            let (cl, perp) = g.decompose(a)?;
            if cl.add(&perp)? != *a || !g.is_classical(&cl)? || !cl.is_hermitian(c)? || !perp.is_hermitian(c)? {
                return Ok(Some("existence".into()));
            }
            let (cl2, z) = g.decompose(&cl)?;
            let (z2, perp2) = g.decompose(&perp)?;
            if cl2 != cl || !z.is_zero() || !z2.is_zero() || perp2 != perp {
                return Ok(Some("idempotence".into()));
            }
            // any other splitting into a classical part and a part vanishing on the classical key agrees
            let k0 = Key::Xi(0, 0);
            if !perp.get(k0).is_zero() || cl.table().keys().any(|k| *k != k0) {
                return Ok(Some("uniqueness".into()));
            }
        }
        Ok(None)
    }));
    let probes = minimal_ideal_probes(c);
    out.push(check(id("r_omega_classical"), || {
        let mut classical = TensorialForm::zero(n, 1);
        classical.set(Key::Xi(0, 0), BaseForm::from_word(n, &[0], &crate::forms::parse_poly("i*x1*x2", n)?))?;
        for a in &probes {
            if !g.r_omega(&classical, a)?.is_zero() {
                return Ok(Some(elem_to_text(a, false)));
            }
        }
        for a in &pots {
            let (cl, _) = g.decompose(a)?;
            for x in &probes {
                if !g.r_omega(&cl, x)?.is_zero() {
                    return Ok(Some(elem_to_text(x, false)));
                }
            }
        }
        Ok(None)
    }));
    out.push(check(id("r_omega_witness"), || {
        for a in &pots {
            for x in &probes {
                if !g.r_omega(a, x)?.is_zero() {
                    return Ok(None);
                }
            }
        }
        Ok(Some("r_omega vanished on every probe".into()))
    }));
    out
}

// ---------------------------------------------------------------- bundle

/// A four point base with a three set cover and a cocycle valued in the
/// fourth roots of unity and `(3+4i)/5`.
pub fn sample_bundle_data() -> (DiscreteBase, ClassicalCocycle) {
    let sets: [(&str, [&str; 3]); 3] = [("U", ["p1", "p2", "p3"]), ("V", ["p2", "p3", "p4"]), ("W", ["p1", "p3", "p4"])];
    let cover: BTreeMap<String, BTreeSet<String>> =
        sets.iter().map(|(n, ps)| (n.to_string(), ps.iter().map(|p| p.to_string()).collect())).collect();
    let base = DiscreteBase::new(["p1", "p2", "p3", "p4"].iter().map(|p| p.to_string()).collect(), cover).expect("cover");
    let i = GaussRational::i();
    let py = GaussRational::from_parts((3, 5), (4, 5));
    let phase = |u: &str, x: &str| match (u, x) {
        ("U", "p1") => i.clone(),
        ("U", "p2") => py.clone(),
        ("U", "p3") => GaussRational::from_int(-1),
        ("V", "p2") => -&i,
        ("V", "p3") => py.clone(),
        ("V", "p4") => i.clone(),
        ("W", "p1") => py.conj(),
        ("W", "p3") => i.clone(),
        _ => GaussRational::one(),
    };
    let mut entries = Vec::new();
    for (u, su) in base.cover() {
        for (v, sv) in base.cover() {
            if u < v {
                for x in su.intersection(sv) {
                    entries.push((u.clone(), v.clone(), x.clone(), &phase(u, x) * &phase(v, x).conj()));
                }
            }
        }
    }
    (base, ClassicalCocycle::new(entries).expect("unit values"))
}

fn random_glued(bundle: &GluedBundle, rng: &mut ChaCha8Rng, monos: &[Mono]) -> Result<GluedElement> {
    let b = bundle.base();
    let mut acc = bundle.zero();
    for x in b.points() {
        let sets: Vec<&String> = b.sets_at(x).collect();
        let u = sets[rng.gen_range(0..sets.len())];
        let mut e = Elem::zero();
        for _ in 0..3 {
            let c = &MuScalar::from_int(rng.gen_range(-3..=3)) * &mu(rng.gen_range(-1..=1));
            e.add_term(monos[rng.gen_range(0..monos.len())], c);
        }
        acc = bundle.add(&acc, &bundle.glue_from(u, &[(x.clone(), e)].into_iter().collect())?);
    }
    Ok(acc)
}

pub fn bundle_suite(opts: &VerifyOptions) -> Vec<CheckResult> {
    let su = Su2::new(if opts.mu_minus_one { MuParam::MinusOne } else { MuParam::Generic });
    let (base, cocycle) = sample_bundle_data();
    let mut out = Vec::new();
    out.push(check("bundle.cocycle_valid".into(), || {
        let r = validate_cocycle(&base, &cocycle);
        fail_if(!r.is_valid() || cocycle.entries().all(|(_, z)| z.is_one()), || r.violations.join("; "))
    }));
    out.push(check("bundle.cocycle_violation_detected".into(), || {
        let broken: Vec<_> = cocycle
            .entries()
            .filter(|((u, v, x), _)| !(u == "W" && v == "U" && x == "p3"))
            .map(|((u, v, x), z)| {
                let z = if u == "U" && v == "W" && x == "p3" { z * &GaussRational::i() } else { z.clone() };
                (u.clone(), v.clone(), x.clone(), z)
            })
            .collect();
        let c = ClassicalCocycle::new(broken)?;
        let r = validate_cocycle(&base, &c);
        let rejected = matches!(GluedBundle::build(&su, base.clone(), c), Err(QpbError::InvalidCocycle(_)));
        fail_if(r.is_valid() || !rejected, || "broken cocycle accepted".into())
    }));
    let bundle = match GluedBundle::build(&su, base.clone(), cocycle.clone()) {
        Ok(b) => b,
        Err(e) => {
            out.push(check("bundle.build".into(), || Err(e)));
            return out;
        }
    };
    let monos: Vec<Mono> = monomials_up_to(2);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let samples: Result<Vec<GluedElement>> = (0..12).map(|_| random_glued(&bundle, &mut rng, &monos)).collect();
    let samples = match samples {
        Ok(s) => s,
        Err(e) => {
            out.push(check("bundle.samples".into(), || Err(e)));
            return out;
        }
    };
    out.push(check("bundle.closure".into(), || {
        for (i, x) in samples.iter().enumerate() {
            let y = &samples[(i + 1) % samples.len()];
            let xy = bundle.mul(x, y);
            if !bundle.is_member(x)? || !bundle.is_member(&xy)? || !bundle.is_member(&bundle.star(x))? {
                return Ok(Some(format!("sample {}", i)));
            }
            if bundle.star(&xy) != bundle.mul(&bundle.star(y), &bundle.star(x)) || bundle.mul(&bundle.one(), x) != *x {
                return Ok(Some(format!("*-algebra laws on sample {}", i)));
            }
        }
        Ok(None)
    }));
    out.push(check("bundle.base_is_central".into(), || {
        let f: BTreeMap<String, MuScalar> =
            base.points().iter().enumerate().map(|(j, x)| (x.clone(), MuScalar::from_int(j as i64 + 2))).collect();
        let i_f = bundle.embed_i(&f);
        for x in &samples {
            if bundle.mul(&i_f, x) != bundle.mul(x, &i_f) {
                return Ok(Some("i(f) does not commute".into()));
            }
        }
        Ok(None)
    }));
    out.push(check("bundle.coaction_laws".into(), || {
        for (i, x) in samples.iter().enumerate() {
            let (l, r) = bundle.coassociativity_sides(x);
            if l != r || bundle.counit_side(x) != *x || !bundle.is_member_tensor(&bundle.coaction_f(x))? {
                return Ok(Some(format!("sample {}", i)));
            }
        }
        Ok(None)
    }));
    out.push(check("bundle.coinvariants_are_base".into(), || {
        let mut gens = Vec::new();
        for x in base.points() {
            gens.push(bundle.embed_i(&[(x.clone(), MuScalar::one())].into_iter().collect()));
            for u in base.sets_at(x) {
                for m in &monos {
                    gens.push(bundle.glue_from(u, &[(x.clone(), Elem::basis(*m))].into_iter().collect())?);
                }
            }
        }
        let mut products = Vec::new();
        for g in &gens {
            for h in gens.iter().step_by(5) {
                products.push(bundle.mul(g, h));
            }
        }
        let mut bases = 0;
        for g in gens.iter().chain(products.iter()) {
            if bundle.is_base(g) != bundle.in_image_of_i(g) {
                return Ok(Some(format!("mismatch on {:?}", g.parts)));
            }
            bases += bundle.is_base(g) as usize;
        }
        fail_if(bases < base.points().len(), || "no base elements found".into())
    }));
    out.push(check("bundle.fixed_point_isomorphism".into(), || {
        let fixed = FixedPointBundle::reconstruct(&su, base.clone(), cocycle.clone())?;
        for (i, x) in samples.iter().enumerate() {
            let y = &samples[(i + 1) % samples.len()];
            let (px, py) = (fixed.from_glued(x), fixed.from_glued(y));
            if !fixed.is_member(&px)? || fixed.to_glued(&px) != *x {
                return Ok(Some(format!("sample {}", i)));
            }
            if fixed.to_glued(&fixed.mul(&px, &py)) != bundle.mul(x, y) || fixed.to_glued(&fixed.star(&px)) != bundle.star(x) {
                return Ok(Some(format!("products on sample {}", i)));
            }
        }
        Ok(None)
    }));
    out
}
