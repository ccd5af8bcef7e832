use qpb_core::calculus::{
    is_admissible, ker_eps_squared_generators, minimal_ideal_generators, singlet, Calculus, GammaInv, InvTimesA, Key,
};
use qpb_core::hopf::{Elem, Mono, Su2};
use qpb_core::MuScalar;

fn s(t: &str) -> MuScalar {
    MuScalar::parse(t).unwrap()
}

fn mu(e: i64) -> MuScalar {
    MuScalar::mu_pow(e)
}

fn xi(n: i32, k: u32) -> GammaInv {
    GammaInv::basis(Key::Xi(n, k))
}

/// Prints every differing coefficient and returns whether the two sides agree.
fn report(label: &str, computed: &GammaInv, table: &GammaInv) -> bool {
    let diff = computed.sub(table);
    for (k, c) in diff.iter() {
        println!(
            "erratum {}: coefficient of {} computed {} table {} (difference {})",
            label,
            k,
            computed.coeff(k).to_text(),
            table.coeff(k).to_text(),
            c.to_text()
        );
    }
    diff.is_zero()
}

fn module_table(n: i32, k: u32, g: Mono) -> Option<GammaInv> {
    let a = n.unsigned_abs() as i64;
    let k64 = k as i64;
    let one = MuScalar::one();
    let t = |c: MuScalar, n: i32, k: u32| GammaInv::single(Key::Xi(n, k), c);
    match g {
        Mono::A => Some(t(mu(-2 * k64 - a), n, k).add(&t(&mu(a) - &mu(-2 * k64 - a), n, k + 1))),
        Mono::AS => Some(
            t(mu(2 * k64 + a), n, k).add(&t(&mu(2) * &(&mu(a) - &mu(2 * k64 + 3 * a)), n, k + 1)),
        ),
        Mono::G if n >= 0 => Some(t(&one - &mu(2 * (k64 + n as i64)), n + 1, k)),
        Mono::GS if n <= 0 => Some(t(&one - &mu(2 * (k64 - n as i64)), n - 1, k)),
        Mono::G => Some(
            t(&one - &mu(-2 * k64), n + 1, k + 1)
                .add(&t(&mu(-2 * k64) * &(&one - &mu(2 * (k64 - n as i64))), n + 1, k + 2)),
        ),
        Mono::GS => Some(
            t(&one - &mu(-2 * k64), n - 1, k + 1)
                .add(&t(&mu(-2 * k64) * &(&one - &mu(2 * (k64 + n as i64))), n - 1, k + 2)),
        ),
        _ => None,
    }
}

#[test]
fn minimal_module_structure_matches_tables() {
    let c = Calculus::minimal();
    let mut ok = true;
    for n in -3..=3 {
        for k in 0..=3u32 {
            for g in [Mono::A, Mono::AS, Mono::G, Mono::GS] {
                let got = c.circ(&xi(n, k), &Elem::basis(g)).unwrap();
                let want = module_table(n, k, g).unwrap();
                ok &= report(&format!("xi[{},{}] o {}", n, k, g), &got, &want);
            }
        }
    }
    assert!(ok);
}

#[test]
fn minimal_projection_matches_q_images() {
    let c = Calculus::minimal();
    let h = c.su();
    let cases = [
        (h.alpha(), Elem::from_terms([(Mono::ONE, s("1/2")), (Mono::new(0, 1, 1), s("-1"))])),
        (h.alpha_star(), Elem::from_terms([(Mono::ONE, s("-1/2")), (Mono::new(0, 1, 1), mu(2))])),
        (h.gamma_star(), Elem::basis(Mono::new(-1, 0, 1))),
        (h.gamma(), Elem::single(Mono::new(1, 1, 0), s("-1"))),
    ];
    for (a, q) in cases {
        assert_eq!(c.rho(&c.pi(&a).unwrap()).unwrap(), q);
    }
}

/// ρπ(a) recomputed as X(a⁽²⁾)κ(a⁽¹⁾)a⁽³⁾ from the triple coproduct.
#[test]
fn rho_agrees_with_lie_functional_formula() {
    let c = Calculus::minimal();
    let h = c.su();
    for m in qpb_core::calculus::monomials_up_to(3) {
        let a = Elem::basis(m);
        let mut oracle = Elem::zero();
        for ((a1, a2, a3), cf) in h.comult2(&a).iter() {
            let x = h.x_mono(*a2);
            if x.is_zero() {
                continue;
            }
            let t = h.mul(&h.antipode_mono(*a1), &Elem::basis(*a3));
            oracle.add_scaled(&t, &(cf * &x));
        }
        assert_eq!(c.rho(&c.pi(&a).unwrap()).unwrap(), oracle, "monomial {}", m);
    }
}

#[test]
fn minimal_basic_values() {
    let c = Calculus::minimal();
    let h = c.su();
    assert!(c.pi(&h.mul(&singlet(h), &h.gamma())).unwrap().is_zero());
    assert!(c.pi(&h.one()).unwrap().is_zero());
    let xi00 = xi(0, 0);
    for g in [Mono::A, Mono::AS, Mono::G, Mono::GS] {
        let e = Elem::basis(g);
        assert_eq!(c.circ(&xi00, &e).unwrap(), xi00.scale(&h.counit(&e)));
    }
    assert_eq!(c.nu(&c.pi(&h.alpha()).unwrap()).unwrap(), s("1/2"));
    assert!(c.nu(&c.pi(&h.gamma()).unwrap()).unwrap().is_zero());
    assert!(c.nu(&xi(0, 1)).unwrap().is_zero());
    assert_eq!(c.inner_product(&xi00, &xi(0, 1)).unwrap(), s("1/(1+mu^2)"));
    let v = c.varpi(&xi00).unwrap();
    assert_eq!(v, InvTimesA::basis((Key::Xi(0, 0), Mono::ONE)));
    let pa = c.pi(&h.alpha()).unwrap();
    assert_eq!(c.star(&pa).unwrap(), pa.neg());
}

#[test]
fn four_d_module_structure_matches_table() {
    let c = Calculus::four_d().unwrap();
    let tau = GammaInv::basis(Key::Tau);
    let ep = GammaInv::basis(Key::EtaPlus);
    let e3 = GammaInv::basis(Key::Eta3);
    let em = GammaInv::basis(Key::EtaMinus);
    let lin2 = |a: &str, x: &GammaInv, b: &str, y: &GammaInv| x.scale(&s(a)).add(&y.scale(&s(b)));
    let f = "(1-mu)*(1-mu^3)/mu";
    let pm = "-(1+mu)*(1-mu^2)/(mu*(1+mu^2)*(1-mu^3))";
    let rows: Vec<(GammaInv, Mono, GammaInv)> = vec![
        (tau.clone(), Mono::G, ep.scale(&s(f))),
        (tau.clone(), Mono::GS, em.scale(&s(f))),
        (
            tau.clone(),
            Mono::AS,
            lin2("(1+mu^4)/(mu*(1+mu^2))", &tau, "-mu*(1-mu)*(1-mu^3)/(1+mu^2)", &e3),
        ),
        (
            tau.clone(),
            Mono::A,
            lin2("(1+mu^4)/(mu*(1+mu^2))", &tau, "(1-mu)*(1-mu^3)/(mu*(1+mu^2))", &e3),
        ),
        (ep.clone(), Mono::GS, lin2(pm, &tau, "-(1-mu^2)/(mu*(1+mu^2))", &e3)),
        (em.clone(), Mono::G, lin2(pm, &tau, "-(1-mu^2)/(mu*(1+mu^2))", &e3)),
        (e3.clone(), Mono::G, ep.scale(&s("-(1-mu^2)/mu"))),
        (ep.clone(), Mono::G, GammaInv::zero()),
        (em.clone(), Mono::GS, GammaInv::zero()),
        (e3.clone(), Mono::GS, em.scale(&s("-(1-mu^2)/mu"))),
        (
            e3.clone(),
            Mono::AS,
            lin2("(1+mu)*(1-mu^2)/(mu*(1+mu^2)*(1-mu^3))", &tau, "-2*mu/(1+mu^2)", &e3).neg(),
        ),
        (
            e3.clone(),
            Mono::A,
            lin2("mu*(1+mu)*(1-mu^2)/((1+mu^2)*(1-mu^3))", &tau, "2*mu/(1+mu^2)", &e3),
        ),
        (ep.clone(), Mono::A, ep.clone()),
        (ep.clone(), Mono::AS, ep.clone()),
        (em.clone(), Mono::A, em.clone()),
        (em.clone(), Mono::AS, em.clone()),
    ];
    let mut ok = true;
    for (theta, g, want) in rows {
        let got = c.circ(&theta, &Elem::basis(g)).unwrap();
        ok &= report(&format!("{} o {}", theta.keys().next().unwrap(), g), &got, &want);
    }
    assert!(ok);
}

#[test]
fn four_d_coaction_and_star_match_table() {
    let c = Calculus::four_d().unwrap();
    let t = |k: Key, m: Mono, x: &str| ((k, m), s(x));
    assert_eq!(c.varpi(&GammaInv::basis(Key::Tau)).unwrap(), InvTimesA::basis((Key::Tau, Mono::ONE)));
    let want_plus = InvTimesA::from_terms([
        t(Key::EtaPlus, Mono::new(2, 0, 0), "1"),
        t(Key::Eta3, Mono::new(1, 1, 0), "-1"),
        t(Key::EtaMinus, Mono::new(0, 2, 0), "mu^2"),
    ]);
    assert_eq!(c.varpi(&GammaInv::basis(Key::EtaPlus)).unwrap(), want_plus);
    let want_minus = InvTimesA::from_terms([
        t(Key::EtaPlus, Mono::new(0, 0, 2), "1"),
        t(Key::Eta3, Mono::new(-1, 0, 1), "1"),
        t(Key::EtaMinus, Mono::new(-2, 0, 0), "1"),
    ]);
    assert_eq!(c.varpi(&GammaInv::basis(Key::EtaMinus)).unwrap(), want_minus);
    // ϖ(η₃) = (1+μ²)η₊⊗γ*α + η₃⊗(αα*−γγ*) − (1+μ²)η₋⊗γα*, reordered into PBW form
    let h = c.su();
    let mut want3 = InvTimesA::zero();
    let legs = [
        (Key::EtaPlus, h.mul(&h.gamma_star(), &h.alpha()), s("1+mu^2")),
        (
            Key::Eta3,
            h.mul(&h.alpha(), &h.alpha_star()).sub(&h.mul(&h.gamma(), &h.gamma_star())),
            s("1"),
        ),
        (Key::EtaMinus, h.mul(&h.gamma(), &h.alpha_star()), s("-1-mu^2")),
    ];
    for (k, e, cf) in legs {
        for (m, cm) in e.iter() {
            want3.add_term((k, *m), &cf * cm);
        }
    }
    assert_eq!(c.varpi(&GammaInv::basis(Key::Eta3)).unwrap(), want3);

    let star = |k: Key| c.star(&GammaInv::basis(k)).unwrap();
    assert_eq!(star(Key::EtaPlus), GammaInv::single(Key::EtaMinus, s("mu")));
    assert_eq!(star(Key::Eta3), GammaInv::single(Key::Eta3, s("-1")));
    assert_eq!(star(Key::EtaMinus).scale(&s("mu")), GammaInv::basis(Key::EtaPlus));
    assert_eq!(star(Key::Tau), GammaInv::single(Key::Tau, s("-1")));
    assert!(matches!(c.rho(&GammaInv::basis(Key::Tau)), Err(qpb_core::QpbError::Unsupported { .. })));
}

#[test]
fn four_d_varkappa_values() {
    let c = Calculus::four_d().unwrap();
    let k = |key: Key| c.varkappa(&GammaInv::basis(key)).unwrap();
    assert_eq!(k(Key::EtaPlus), GammaInv::single(Key::EtaPlus, s("mu^2")));
    assert_eq!(k(Key::Tau), GammaInv::basis(Key::Tau));
    assert_eq!(k(Key::Eta3), GammaInv::basis(Key::Eta3));
}

#[test]
fn four_d_scalar_product_is_invariant() {
    let c = Calculus::four_d().unwrap();
    let h = c.su();
    let basis = c.basis().unwrap().to_vec();
    assert_eq!(
        c.inner_product(&GammaInv::basis(Key::EtaPlus), &GammaInv::basis(Key::EtaPlus)).unwrap(),
        s("mu^2")
    );
    assert!(c.inner_product(&GammaInv::basis(Key::Tau), &GammaInv::basis(Key::Eta3)).unwrap().is_zero());
    for a in &basis {
        for b in &basis {
            for g in [Mono::A, Mono::AS, Mono::G, Mono::GS] {
                let e = Elem::basis(g);
                let th = GammaInv::basis(*a);
                let et = GammaInv::basis(*b);
                let lhs = c.inner_product(&c.circ(&th, &e).unwrap(), &et).unwrap();
                let twisted = h.star(&h.antipode(&h.antipode(&e)));
                let rhs = c.inner_product(&th, &c.circ(&et, &twisted).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "({} o {}, {})", a, g, b);
            }
        }
    }
}

fn words(max_len: u32) -> Vec<Elem> {
    qpb_core::calculus::monomials_up_to(max_len).into_iter().map(Elem::basis).collect()
}

#[test]
fn projection_is_compatible_with_the_module_structure() {
    for c in [Calculus::minimal(), Calculus::four_d().unwrap(), Calculus::minimal_mu_minus_one().unwrap()] {
        let h = c.su();
        let ws = words(2);
        for a in &ws {
            for b in &ws {
                let lhs = c.pi(&h.mul(a, b)).unwrap();
                let mut rhs = c.circ(&c.pi(a).unwrap(), b).unwrap();
                rhs.add_scaled(&c.pi(b).unwrap(), &h.counit(a));
                assert_eq!(lhs, rhs, "{}", c.tag());
            }
        }
    }
}

#[test]
fn right_action_is_a_module_and_star_compatible() {
    for c in [Calculus::minimal(), Calculus::four_d().unwrap(), Calculus::minimal_mu_minus_one().unwrap()] {
        let h = c.su();
        let thetas: Vec<GammaInv> = match c.basis() {
            Some(b) => b.iter().map(|k| GammaInv::basis(*k)).collect(),
            None => vec![xi(0, 1), xi(1, 0), xi(-1, 1), xi(2, 0)],
        };
        let ws = words(1);
        for th in &thetas {
            for a in &ws {
                let lhs = c.star(&c.circ(th, a).unwrap()).unwrap();
                let rhs = c.circ(&c.star(th).unwrap(), &h.star(&h.antipode(a))).unwrap();
                assert_eq!(lhs, rhs);
                for b in &ws {
                    let l = c.circ(th, &h.mul(a, b)).unwrap();
                    let r = c.circ(&c.circ(th, a).unwrap(), b).unwrap();
                    assert_eq!(l, r);
                }
            }
            assert_eq!(&c.star(&c.star(th).unwrap()).unwrap(), th);
        }
    }
}

#[test]
fn varkappa_identities() {
    for c in [Calculus::minimal(), Calculus::four_d().unwrap(), Calculus::minimal_mu_minus_one().unwrap()] {
        let h = c.su();
        let thetas: Vec<GammaInv> = match c.basis() {
            Some(b) => b.iter().map(|k| GammaInv::basis(*k)).collect(),
            None => vec![xi(0, 0), xi(0, 1), xi(1, 0), xi(-2, 1)],
        };
        for th in &thetas {
            let kth = c.varkappa(th).unwrap();
            if c.has_nu() {
                assert_eq!(c.nu(&kth).unwrap(), c.nu(th).unwrap());
            }
            assert_eq!(c.star(&kth).unwrap(), c.varkappa_inv(&c.star(th).unwrap()).unwrap());
            let lhs = c.varpi(&kth).unwrap();
            let mut rhs = InvTimesA::zero();
            for ((k, m), cf) in c.varpi(th).unwrap().iter() {
                let left = c.varkappa(&GammaInv::basis(*k)).unwrap();
                let right = h.antipode(&h.antipode_mono(*m));
                for (kk, ck) in left.iter() {
                    for (mm, cm) in right.iter() {
                        rhs.add_term((*kk, *mm), &(cf * ck) * cm);
                    }
                }
            }
            assert_eq!(lhs, rhs);
        }
    }
}

/// ρ(θ∘a) = κ(a⁽¹⁾)ρ(θ)a⁽²⁾ where ρ is computed from ν and ϖ.
#[test]
fn rho_transports_the_right_action_at_minus_one() {
    let c = Calculus::minimal_mu_minus_one().unwrap();
    let h = c.su();
    let eta = |k: Key| GammaInv::basis(k);
    assert_eq!(c.rho(&eta(Key::EtaPlus)).unwrap(), h.mul(&h.gamma(), &h.alpha()));
    assert_eq!(c.rho(&eta(Key::EtaMinus)).unwrap(), h.mul(&h.alpha_star(), &h.gamma_star()));
    for k in c.basis().unwrap().to_vec() {
        for a in words(2) {
            let lhs = c.rho(&c.circ(&eta(k), &a).unwrap()).unwrap();
            let mut rhs = Elem::zero();
            for ((a1, a2), cf) in h.comult(&a).iter() {
                let t = h.mul(&h.mul(&h.antipode_mono(*a1), &c.rho(&eta(k)).unwrap()), &Elem::basis(*a2));
                rhs.add_scaled(&t, cf);
            }
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn minus_one_module_structure() {
    let c = Calculus::minimal_mu_minus_one().unwrap();
    let h = c.su();
    let ep = GammaInv::basis(Key::EtaPlus);
    let em = GammaInv::basis(Key::EtaMinus);
    for a in [h.alpha(), h.alpha_star()] {
        assert_eq!(c.circ(&ep, &a).unwrap(), ep.neg());
        assert_eq!(c.circ(&em, &a).unwrap(), em.neg());
    }
    for th in [&ep, &em] {
        for g in [h.gamma(), h.gamma_star()] {
            assert!(c.circ(th, &g).unwrap().is_zero());
        }
    }
    let pa = c.pi(&h.alpha()).unwrap();
    for a in words(2) {
        assert_eq!(c.circ(&pa, &a).unwrap(), pa.scale(&h.counit(&a)));
    }
    assert_eq!(pa.scale(&s("-1")), c.pi(&h.alpha_star()).unwrap());
}

#[test]
fn admissibility() {
    let h = Su2::generic();
    let r = is_admissible(&h, &minimal_ideal_generators(&h), 3);
    assert!(r.admissible);
    // the singlet alone is not in the minimal ideal
    assert!(!is_admissible(&h, &[singlet(&h)], 0).admissible);
    let r = is_admissible(&h, &ker_eps_squared_generators(&h), 2);
    assert!(!r.admissible);
    let (_, _, v) = r.witness.unwrap();
    assert!(!v.is_zero());
    // at μ = −1, (α−1)γ + γ(α−1) = −2γ lies in ker(ε)² while π(γ) ≠ 0
    let h1 = Su2::minus_one();
    let r = is_admissible(&h1, &ker_eps_squared_generators(&h1), 2);
    assert!(!r.admissible);
    let two_gamma = h1.mul(&h1.alpha().sub(&h1.one()), &h1.gamma()).add(&h1.mul(&h1.gamma(), &h1.alpha().sub(&h1.one())));
    assert_eq!(two_gamma, h1.gamma().scale(&s("-2")));
}

/// The minimal ideal is stable under a ↦ κ(a)*.
#[test]
fn minimal_ideal_closure() {
    let c = Calculus::minimal();
    let h = c.su();
    for w in words(2) {
        let r = h.mul(&singlet(h), &w.sub(&h.scalar(h.counit(&w))));
        assert!(c.in_ideal(&r).unwrap());
        assert!(c.pi(&h.star(&h.antipode(&r))).unwrap().is_zero());
    }
}

#[test]
fn differential_is_a_derivation() {
    for c in [Calculus::minimal(), Calculus::four_d().unwrap()] {
        let h = c.su();
        let da = c.differential(&h.alpha()).unwrap();
        let mut want = qpb_core::calculus::GammaElem::zero();
        for (k, cf) in c.pi(&h.alpha()).unwrap().iter() {
            want.add_term((Mono::A, *k), cf.clone());
        }
        for (k, cf) in c.pi(&h.gamma()).unwrap().iter() {
            want.add_term((Mono::GS, *k), &-&h.mu() * cf);
        }
        assert_eq!(da, want);
        assert!(c.differential(&h.one()).unwrap().is_zero());
        let ws = words(2);
        for a in &ws {
            for b in &ws {
                let lhs = c.differential(&h.mul(a, b)).unwrap();
                let rhs = c
                    .gamma_times(&c.differential(a).unwrap(), b)
                    .unwrap()
                    .add(&c.times_gamma(a, &c.differential(b).unwrap()));
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn generic_ideal_truncation() {
    let h = std::sync::Arc::new(Su2::generic());
    let c = Calculus::generic_ideal(h.clone(), ker_eps_squared_generators(&h), 2).unwrap();
    // generically (α−1)γ − μγ(α−1) = (μ−1)γ, so only the class of α* survives
    assert_eq!(c.basis().unwrap(), &[Key::Std(Mono::AS)]);
    let big = h.pow(&h.gamma(), 4);
    assert!(matches!(c.pi(&big), Err(qpb_core::QpbError::Truncation { .. })));
}
