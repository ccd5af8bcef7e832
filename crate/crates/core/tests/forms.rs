use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use qpb_core::braided::{Braided, InvTensor};
use qpb_core::calculus::{Calculus, Key};
use qpb_core::forms::{parse_poly, poly_to_text, BaseForm, MixedForm, Poly, TrivialBundle};
use qpb_core::hopf::{Elem, Mono};
use qpb_core::{MuScalar, QpbError};

fn poly(t: &str, n: usize) -> Poly {
    parse_poly(t, n).unwrap()
}

fn four_d() -> &'static Braided {
    static B: OnceLock<Braided> = OnceLock::new();
    B.get_or_init(|| Braided::new(Arc::new(Calculus::four_d().unwrap())).unwrap())
}

fn minus_one() -> &'static Braided {
    static B: OnceLock<Braided> = OnceLock::new();
    B.get_or_init(|| Braided::new(Arc::new(Calculus::minimal_mu_minus_one().unwrap())).unwrap())
}

#[test]
fn differentials_anticommute() {
    let n = 2;
    let a = BaseForm::dx(n, 0).mul(&BaseForm::dx(n, 1)).unwrap();
    let b = BaseForm::dx(n, 1).mul(&BaseForm::dx(n, 0)).unwrap();
    assert_eq!(a, b.neg());
    assert_eq!(BaseForm::from_word(n, &[1, 0], &poly("1", n)), b);
    assert!(BaseForm::dx(n, 0).mul(&BaseForm::dx(n, 0)).unwrap().is_zero());
}

#[test]
fn exterior_derivative_values() {
    let n = 2;
    let f = BaseForm::from_word(n, &[0], &poly("x1*x2", n));
    assert_eq!(f.d(), BaseForm::from_word(n, &[0, 1], &poly("-x1", n)));
    let g = BaseForm::function(n, &poly("x1^2*x2", n));
    assert!(g.d().d().is_zero());
    assert!(matches!(f.mul(&BaseForm::one(3)), Err(QpbError::ChartMismatch(2, 3))));
}

#[test]
fn polynomial_text_round_trips() {
    let n = 3;
    for t in ["x1*x2 - 3*x3^2 + 1/2", "(1 + mu)*x1 - mu^-2*x2", "i*x1^3 + (2 - 3*i)/5*x2*x3"] {
        let p = poly(t, n);
        assert_eq!(poly(&poly_to_text(&p), n), p, "{}", poly_to_text(&p));
    }
    assert!(matches!(parse_poly("x4", 3), Err(QpbError::Parse { .. })));
    assert!(matches!(parse_poly("1/x1", 3), Err(QpbError::Parse { .. })));
}

#[test]
fn koszul_sign_on_products() {
    let b = four_d();
    let n = 2;
    let bundle = TrivialBundle::new(b, n);
    let tau = MixedForm::invariant(n, &InvTensor::basis(vec![Key::Tau]));
    let f = BaseForm::from_word(n, &[0], &poly("x1 + x2", n));
    let fd = MixedForm::base(&f);
    let got = bundle.mul(&tau, &fd).unwrap();
    let expected = MixedForm::product(&f, &Elem::basis(Mono::ONE), &InvTensor::basis(vec![Key::Tau])).neg();
    assert_eq!(got, expected);
}

#[test]
fn mixed_differential_values() {
    let b = minus_one();
    let n = 2;
    let bundle = TrivialBundle::new(b, n);
    let e3 = MixedForm::invariant(n, &InvTensor::basis(vec![Key::Eta3]));
    let expected = MixedForm::invariant(n, &b.d_inv(&InvTensor::basis(vec![Key::Eta3])).unwrap());
    assert_eq!(bundle.d(&e3).unwrap(), expected);
    let f = BaseForm::function(n, &poly("x1^2*x2", n));
    assert_eq!(bundle.d(&MixedForm::base(&f)).unwrap(), MixedForm::base(&f.d()));
}

fn small() -> impl Strategy<Value = MuScalar> {
    (-2i64..=2, -1i64..=1).prop_map(|(a, e)| &MuScalar::from_int(a) * &MuScalar::mu_pow(e))
}

fn random_base(n: usize, max_deg: usize) -> impl Strategy<Value = BaseForm> {
    proptest::collection::vec(
        (proptest::collection::btree_set(0u8..n as u8, 0..=max_deg), proptest::collection::vec(0u32..3, n), small()),
        1..4,
    )
    .prop_map(move |terms| {
        let mut out = BaseForm::zero(n);
        for (w, e, c) in terms {
            let w: Vec<u8> = w.into_iter().collect();
            out = out.add(&BaseForm::from_word(n, &w, &Poly::single(e, c))).unwrap();
        }
        out
    })
}

fn homogeneous(n: usize, p: usize) -> impl Strategy<Value = BaseForm> {
    random_base(n, n).prop_map(move |f| f.degree_part(p))
}

fn random_mixed(keys: Vec<Key>, n: usize, total: usize) -> impl Strategy<Value = MixedForm> {
    let k = keys.len();
    proptest::collection::vec(
        (0..=total, homogeneous(n, 0), homogeneous(n, 1), 0usize..5, proptest::collection::vec(0..k, 0..=total)),
        1..3,
    )
    .prop_map(move |terms| {
        let monos = [Mono::ONE, Mono::A, Mono::AS, Mono::G, Mono::GS];
        let mut out = MixedForm::zero(n);
        for (base_deg, f0, f1, m, w) in terms {
            let inv_deg = total.saturating_sub(base_deg.min(1)).min(w.len());
            let f = if base_deg >= 1 { f1 } else { f0 };
            let word: Vec<Key> = w[..inv_deg].iter().map(|i| keys[*i]).collect();
            let term = MixedForm::product(&f, &Elem::basis(monos[m]), &InvTensor::basis(word));
            out = out.add(&term).unwrap();
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn base_forms_graded_commutative(a in random_base(3, 2), b in random_base(3, 2)) {
        for p in 0..=2 {
            for q in 0..=2 {
                let (x, y) = (a.degree_part(p), b.degree_part(q));
                let sign = if p * q % 2 == 1 { -MuScalar::one() } else { MuScalar::one() };
                prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap().scale(&sign));
            }
        }
    }

    #[test]
    fn base_d_squares_to_zero_and_is_leibniz(a in random_base(3, 1), b in random_base(3, 2)) {
        prop_assert!(a.d().d().is_zero());
        for p in 0..=1 {
            let x = a.degree_part(p);
            let sign = if p % 2 == 1 { -MuScalar::one() } else { MuScalar::one() };
            let lhs = x.mul(&b).unwrap().d();
            let rhs = x.d().mul(&b).unwrap().add(&x.mul(&b.d()).unwrap().scale(&sign)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn mixed_d_squares_to_zero_four_d(u in random_mixed(vec![Key::Tau, Key::EtaPlus, Key::Eta3, Key::EtaMinus], 2, 1)) {
        let bundle = TrivialBundle::new(four_d(), 2);
        prop_assert!(bundle.d(&bundle.d(&u).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn mixed_d_squares_to_zero_mu_minus_one(u in random_mixed(vec![Key::EtaPlus, Key::Eta3, Key::EtaMinus], 2, 1)) {
        let bundle = TrivialBundle::new(minus_one(), 2);
        prop_assert!(bundle.d(&bundle.d(&u).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn mixed_product_is_associative(
        u in random_mixed(vec![Key::EtaPlus, Key::Eta3, Key::EtaMinus], 2, 1),
        v in random_mixed(vec![Key::EtaPlus, Key::Eta3, Key::EtaMinus], 2, 1),
        w in random_mixed(vec![Key::EtaPlus, Key::Eta3, Key::EtaMinus], 2, 1),
    ) {
        let bundle = TrivialBundle::new(minus_one(), 2);
        let left = bundle.mul(&bundle.mul(&u, &v).unwrap(), &w);
        let right = bundle.mul(&u, &bundle.mul(&v, &w).unwrap());
        match (left, right) {
            (Ok(l), Ok(r)) => prop_assert_eq!(l, r),
            (Err(QpbError::Truncation { .. }), Err(QpbError::Truncation { .. })) => {}
            (l, r) => prop_assert!(false, "{:?} {:?}", l.err(), r.err()),
        }
    }

    #[test]
    fn mixed_d_is_leibniz(
        u in random_mixed(vec![Key::Tau, Key::EtaPlus, Key::Eta3, Key::EtaMinus], 2, 1),
        v in random_mixed(vec![Key::Tau, Key::EtaPlus, Key::Eta3, Key::EtaMinus], 2, 0),
    ) {
        let bundle = TrivialBundle::new(four_d(), 2);
        for (deg_u, part) in split_by_degree(&u) {
            let sign = if deg_u % 2 == 1 { -MuScalar::one() } else { MuScalar::one() };
            let lhs = bundle.d(&bundle.mul(&part, &v).unwrap()).unwrap();
            let rhs = bundle
                .mul(&bundle.d(&part).unwrap(), &v)
                .unwrap()
                .add(&bundle.mul(&part, &bundle.d(&v).unwrap()).unwrap().scale(&sign))
                .unwrap();
            prop_assert_eq!(lhs, bundle.reduce(&rhs).unwrap());
        }
    }
}

fn split_by_degree(u: &MixedForm) -> Vec<(usize, MixedForm)> {
    let mut out: std::collections::BTreeMap<usize, MixedForm> = Default::default();
    for ((w, e, m, word), c) in u.terms().iter() {
        let f = BaseForm::from_word(u.chart_dim(), w, &Poly::single(e.clone(), c.clone()));
        let t = MixedForm::product(&f, &Elem::basis(*m), &InvTensor::basis(word.clone()));
        let entry = out.entry(w.len() + word.len()).or_insert_with(|| MixedForm::zero(u.chart_dim()));
        *entry = entry.add(&t).unwrap();
    }
    out.into_iter().collect()
}
