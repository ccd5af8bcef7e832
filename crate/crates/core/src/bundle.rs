//! Quantum principal bundles over a finite discrete base, glued from
//! classical U(1)-cocycles.
//!
//! Transition maps evaluate the character on the first leg of the
//! coproduct, `ψ_g(a) = g(a⁽¹⁾) a⁽²⁾`. On a PBW monomial this is
//! multiplication by `z^w` with `w` the left weight, so `ψ_g ψ_f = ψ_{gf}`.
//! A glued element is a family `p_U(x)` with `p_V(x) = ψ_{g_VU(x)} p_U(x)`.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{QpbError, Result};
use crate::hopf::{Character, Elem, Mono, Su2, Tensor2, Tensor3};
use crate::lin::Lin;
use crate::scalar::{GaussRational, MuScalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteBase {
    points: Vec<String>,
    cover: BTreeMap<String, BTreeSet<String>>,
}

impl DiscreteBase {
    pub fn new(points: Vec<String>, cover: BTreeMap<String, BTreeSet<String>>) -> Result<DiscreteBase> {
        let all: BTreeSet<&String> = points.iter().collect();
        if all.len() != points.len() {
            return Err(QpbError::Invalid("repeated base point".into()));
        }
        let mut covered = BTreeSet::new();
        for (name, set) in &cover {
            for x in set {
                if !all.contains(x) {
                    return Err(QpbError::Invalid(format!("cover set {} contains unknown point {}", name, x)));
                }
                covered.insert(x);
            }
        }
        if covered.len() != all.len() {
            let missing: Vec<&str> = points.iter().filter(|x| !covered.contains(x)).map(|s| s.as_str()).collect();
            return Err(QpbError::Invalid(format!("cover misses points {}", missing.join(", "))));
        }
        Ok(DiscreteBase { points, cover })
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn cover(&self) -> &BTreeMap<String, BTreeSet<String>> {
        &self.cover
    }

    pub fn sets(&self) -> impl Iterator<Item = &String> {
        self.cover.keys()
    }

    pub fn contains(&self, set: &str, x: &str) -> bool {
        self.cover.get(set).is_some_and(|s| s.contains(x))
    }

    /// Cover sets containing `x`.
    pub fn sets_at<'a>(&'a self, x: &'a str) -> impl Iterator<Item = &'a String> + 'a {
        self.cover.iter().filter(move |(_, s)| s.contains(x)).map(|(n, _)| n)
    }
}

/// Transition characters `g_UV(x)`, given by their value `z = g(α)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalCocycle {
    table: BTreeMap<(String, String, String), GaussRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleReport {
    pub violations: Vec<String>,
}

impl CocycleReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl ClassicalCocycle {
    /// Entries `(U, V, x, z)`. Missing `g_UU` default to 1; a missing `g_VU`
    /// is filled with the inverse of `g_UV`.
    pub fn new<I>(entries: I) -> Result<ClassicalCocycle>
    where
        I: IntoIterator<Item = (String, String, String, GaussRational)>,
    {
        let mut table = BTreeMap::new();
        for (u, v, x, z) in entries {
            if !num_traits::One::is_one(&z.norm_sq()) {
                return Err(QpbError::NotUnit(z.to_text()));
            }
            if let Some(old) = table.insert((u.clone(), v.clone(), x.clone()), z.clone()) {
                if old != z {
                    return Err(QpbError::InvalidCocycle(format!("conflicting entries for g_{}{}({})", u, v, x)));
                }
            }
        }
        let given: Vec<_> = table.iter().map(|(k, z)| (k.clone(), z.clone())).collect();
        for ((u, v, x), z) in given {
            table.entry((v, u, x)).or_insert_with(|| z.conj());
        }
        Ok(ClassicalCocycle { table })
    }

    /// The cocycle with every transition equal to the counit.
    pub fn trivial(base: &DiscreteBase) -> ClassicalCocycle {
        let mut table = BTreeMap::new();
        for (u, su) in base.cover() {
            for (v, sv) in base.cover() {
                for x in su.intersection(sv) {
                    table.insert((u.clone(), v.clone(), x.clone()), GaussRational::one());
                }
            }
        }
        ClassicalCocycle { table }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(String, String, String), &GaussRational)> {
        self.table.iter()
    }

    pub fn value(&self, u: &str, v: &str, x: &str) -> Option<GaussRational> {
        if u == v {
            return Some(self.table.get(&(u.into(), v.into(), x.into())).cloned().unwrap_or_else(GaussRational::one));
        }
        self.table.get(&(u.into(), v.into(), x.into())).cloned()
    }

    pub fn character(&self, u: &str, v: &str, x: &str) -> Result<Character> {
        let z = self
            .value(u, v, x)
            .ok_or_else(|| QpbError::InvalidCocycle(format!("missing g_{}{}({})", u, v, x)))?;
        Character::concrete(z)
    }
}

/// Checks `g_UU = 1`, `g_VU = g_UV⁻¹` and `g_UV g_VW = g_UW` at every point of
/// every overlap, and that no entry lies outside its overlap.
pub fn validate_cocycle(base: &DiscreteBase, c: &ClassicalCocycle) -> CocycleReport {
    let mut violations = Vec::new();
    for ((u, v, x), _) in c.entries() {
        if !base.contains(u, x) || !base.contains(v, x) {
            violations.push(format!("g_{}{}({}) is outside the overlap", u, v, x));
        }
    }
    let sets: Vec<&String> = base.sets().collect();
    for x in base.points() {
        let here: Vec<&&String> = sets.iter().filter(|s| base.contains(s, x)).collect();
        for u in &here {
            if c.value(u, u, x) != Some(GaussRational::one()) {
                violations.push(format!("g_{}{}({}) is not 1", u, u, x));
            }
            for v in &here {
                let (Some(a), Some(b)) = (c.value(u, v, x), c.value(v, u, x)) else {
                    violations.push(format!("g_{}{}({}) is missing", u, v, x));
                    continue;
                };
                if !(&a * &b).is_one() {
                    violations.push(format!("g_{}{}({}) g_{}{}({}) != 1", u, v, x, v, u, x));
                }
                for w in &here {
                    if let (Some(gvw), Some(guw)) = (c.value(v, w, x), c.value(u, w, x)) {
                        if &a * &gvw != guw {
                            violations.push(format!(
                                "g_{u}{v}({x}) g_{v}{w}({x}) = {} but g_{u}{w}({x}) = {}",
                                (&a * &gvw).to_text(),
                                guw.to_text()
                            ));
                        }
                    }
                }
            }
        }
    }
    violations.dedup();
    CocycleReport { violations }
}

/// `ψ_g(a) = g(a⁽¹⁾) a⁽²⁾`.
pub fn psi_apply(su2: &Su2, g: &Character, a: &Elem) -> Result<Elem> {
    let mut out = Elem::zero();
    for ((m1, m2), c) in su2.comult(a).iter() {
        let v = su2.char_eval(g, &Elem::basis(*m1))?;
        if !v.is_zero() {
            out.add_term(*m2, c * &v);
        }
    }
    Ok(out)
}

/// `(ψ_g ⊗ id)` on the first leg.
fn psi_apply2(su2: &Su2, g: &Character, t: &Tensor2) -> Result<Tensor2> {
    let mut out = Tensor2::zero();
    for ((a, b), c) in t.iter() {
        for (m, cm) in psi_apply(su2, g, &Elem::basis(*a))?.iter() {
            out.add_term((*m, *b), c * cm);
        }
    }
    Ok(out)
}

/// Per cover set, per point, a local value.
pub type Local<T> = BTreeMap<String, BTreeMap<String, T>>;

/// An element of the glued algebra, stored through all of its local
/// trivializations `p_U`.
#[derive(Clone, Debug, PartialEq)]
pub struct GluedElement {
    pub parts: Local<Elem>,
}

impl GluedElement {
    pub fn at(&self, set: &str, x: &str) -> Elem {
        self.parts.get(set).and_then(|t| t.get(x)).cloned().unwrap_or_else(Elem::zero)
    }
}

/// `F(b)` through its trivializations `(p_U ⊗ id)F = (id ⊗ φ)p_U`.
#[derive(Clone, Debug, PartialEq)]
pub struct GluedTensor {
    pub parts: Local<Tensor2>,
}

pub struct GluedBundle<'a> {
    su2: &'a Su2,
    base: DiscreteBase,
    cocycle: ClassicalCocycle,
}

impl<'a> GluedBundle<'a> {
    pub fn build(su2: &'a Su2, base: DiscreteBase, cocycle: ClassicalCocycle) -> Result<GluedBundle<'a>> {
        let report = validate_cocycle(&base, &cocycle);
        if !report.is_valid() {
            return Err(QpbError::InvalidCocycle(report.violations.join("; ")));
        }
        Ok(GluedBundle { su2, base, cocycle })
    }

    pub fn base(&self) -> &DiscreteBase {
        &self.base
    }

    pub fn cocycle(&self) -> &ClassicalCocycle {
        &self.cocycle
    }

    fn pointwise<F>(&self, f: F) -> Result<GluedElement>
    where
        F: Fn(&str, &str) -> Result<Elem>,
    {
        let mut parts = Local::new();
        for (u, set) in self.base.cover() {
            let mut t = BTreeMap::new();
            for x in set {
                let v = f(u, x)?;
                if !v.is_zero() {
                    t.insert(x.clone(), v);
                }
            }
            parts.insert(u.clone(), t);
        }
        Ok(GluedElement { parts })
    }

    /// The element equal to `values[x]` in the chart `set`, transported to
    /// the other charts and zero away from `values`.
    pub fn glue_from(&self, set: &str, values: &BTreeMap<String, Elem>) -> Result<GluedElement> {
        for x in values.keys() {
            if !self.base.contains(set, x) {
                return Err(QpbError::Invalid(format!("point {} is not in {}", x, set)));
            }
        }
        self.pointwise(|v, x| match values.get(x) {
            Some(a) => psi_apply(self.su2, &self.cocycle.character(v, set, x)?, a),
            None => Ok(Elem::zero()),
        })
    }

    /// Gluing condition at every shared point.
    pub fn is_member(&self, b: &GluedElement) -> Result<bool> {
        for (u, t) in &b.parts {
            for x in t.keys() {
                if !self.base.contains(u, x) {
                    return Ok(false);
                }
            }
        }
        for x in self.base.points() {
            let sets: Vec<&String> = self.base.sets_at(x).collect();
            let u = sets[0];
            let pu = b.at(u, x);
            for v in &sets[1..] {
                if psi_apply(self.su2, &self.cocycle.character(v, u, x)?, &pu)? != b.at(v, x) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn one(&self) -> GluedElement {
        self.pointwise(|_, _| Ok(self.su2.one())).expect("unit")
    }

    pub fn zero(&self) -> GluedElement {
        self.pointwise(|_, _| Ok(Elem::zero())).expect("zero")
    }

    pub fn add(&self, a: &GluedElement, b: &GluedElement) -> GluedElement {
        self.pointwise(|u, x| Ok(a.at(u, x).add(&b.at(u, x)))).expect("sum")
    }

    pub fn scale(&self, a: &GluedElement, c: &MuScalar) -> GluedElement {
        self.pointwise(|u, x| Ok(a.at(u, x).scale(c))).expect("scale")
    }

    pub fn mul(&self, a: &GluedElement, b: &GluedElement) -> GluedElement {
        self.pointwise(|u, x| Ok(self.su2.mul(&a.at(u, x), &b.at(u, x)))).expect("product")
    }

    pub fn star(&self, a: &GluedElement) -> GluedElement {
        self.pointwise(|u, x| Ok(self.su2.star(&a.at(u, x)))).expect("star")
    }

    /// `i(f)` with `p_U i(f) = f|_U ⊗ 1`.
    pub fn embed_i(&self, f: &BTreeMap<String, MuScalar>) -> GluedElement {
        self.pointwise(|_, x| Ok(self.su2.scalar(f.get(x).cloned().unwrap_or_else(MuScalar::zero)))).expect("embedding")
    }

    pub fn coaction_f(&self, b: &GluedElement) -> GluedTensor {
        let mut parts = Local::new();
        for (u, set) in self.base.cover() {
            let mut t = BTreeMap::new();
            for x in set {
                let v = self.su2.comult(&b.at(u, x));
                if !v.is_zero() {
                    t.insert(x.clone(), v);
                }
            }
            parts.insert(u.clone(), t);
        }
        GluedTensor { parts }
    }

    /// `b ⊗ 1` as a glued tensor.
    pub fn tensor_one(&self, b: &GluedElement) -> GluedTensor {
        let one = self.su2.one();
        let parts = b
            .parts
            .iter()
            .map(|(u, t)| (u.clone(), t.iter().map(|(x, a)| (x.clone(), self.su2.tensor_product(a, &one))).collect()))
            .collect();
        GluedTensor { parts }
    }

    /// Gluing on the first leg: `p_V = (ψ_{g_VU} ⊗ id) p_U`.
    pub fn is_member_tensor(&self, t: &GluedTensor) -> Result<bool> {
        let get = |u: &str, x: &str| t.parts.get(u).and_then(|m| m.get(x)).cloned().unwrap_or_else(Tensor2::zero);
        for x in self.base.points() {
            let sets: Vec<&String> = self.base.sets_at(x).collect();
            let pu = get(sets[0], x);
            for v in &sets[1..] {
                if psi_apply2(self.su2, &self.cocycle.character(v, sets[0], x)?, &pu)? != get(v, x) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `(F ⊗ id)F` and `(id ⊗ φ)F`, chart by chart.
    pub fn coassociativity_sides(&self, b: &GluedElement) -> (Local<Tensor3>, Local<Tensor3>) {
        let mut left = Local::new();
        let mut right = Local::new();
        for (u, t) in &self.coaction_f(b).parts {
            let (mut l, mut r) = (BTreeMap::new(), BTreeMap::new());
            for (x, f) in t {
                let mut a = Tensor3::zero();
                let mut c = Tensor3::zero();
                for ((m1, m2), k) in f.iter() {
                    for ((p, q), kp) in self.su2.comult_mono(*m1).iter() {
                        a.add_term((*p, *q, *m2), k * kp);
                    }
                    for ((p, q), kq) in self.su2.comult_mono(*m2).iter() {
                        c.add_term((*m1, *p, *q), k * kq);
                    }
                }
                l.insert(x.clone(), a);
                r.insert(x.clone(), c);
            }
            left.insert(u.clone(), l);
            right.insert(u.clone(), r);
        }
        (left, right)
    }

    /// `(id ⊗ ε)F(b)`.
    pub fn counit_side(&self, b: &GluedElement) -> GluedElement {
        let f = self.coaction_f(b);
        self.pointwise(|u, x| {
            let mut out = Elem::zero();
            if let Some(t) = f.parts.get(u).and_then(|m| m.get(x)) {
                for ((m1, m2), c) in t.iter() {
                    out.add_term(*m1, c * &self.su2.counit_mono(*m2));
                }
            }
            Ok(out)
        })
        .expect("counit")
    }

    /// `F(b) = b ⊗ 1`.
    pub fn is_base(&self, b: &GluedElement) -> bool {
        self.coaction_f(b) == self.tensor_one(b)
    }

    /// Explicit membership in the image of `i`: every local value is a
    /// scalar, and the scalars agree across charts.
    pub fn in_image_of_i(&self, b: &GluedElement) -> bool {
        for x in self.base.points() {
            let mut seen: Option<MuScalar> = None;
            for u in self.base.sets_at(x) {
                let v = b.at(u, x);
                if v.keys().any(|m| !m.is_one()) {
                    return false;
                }
                let c = v.coeff(&Mono::ONE);
                match &seen {
                    Some(s) if *s != c => return false,
                    _ => seen = Some(c),
                }
            }
        }
        true
    }
}

/// A function on the classical bundle tensored with `A`, in chart `U`:
/// terms `z^w ⊗ m`.
pub type ZElem = Lin<(i64, Mono)>;

/// `z^w ⊗ m` lies in the fixed-point algebra iff `w` is the left weight of `m`.
pub fn weight_matches(w: i64, m: Mono) -> bool {
    w == m.left_weight()
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointElement {
    pub parts: Local<ZElem>,
}

impl FixedPointElement {
    pub fn at(&self, set: &str, x: &str) -> ZElem {
        self.parts.get(set).and_then(|t| t.get(x)).cloned().unwrap_or_else(ZElem::zero)
    }
}

/// The weight-matching subalgebra of `functions(P_cl) ⊗ A`. Points `(x, z)`
/// of chart `U` and `(x, z')` of chart `V` are identified when
/// `z = g_VU(x) z'`, so a local coefficient of `z^w` in `V` is `g_VU(x)^w`
/// times the one in `U`.
pub struct FixedPointBundle<'a> {
    su2: &'a Su2,
    base: DiscreteBase,
    cocycle: ClassicalCocycle,
}

impl<'a> FixedPointBundle<'a> {
    pub fn reconstruct(su2: &'a Su2, base: DiscreteBase, cocycle: ClassicalCocycle) -> Result<FixedPointBundle<'a>> {
        let report = validate_cocycle(&base, &cocycle);
        if !report.is_valid() {
            return Err(QpbError::InvalidCocycle(report.violations.join("; ")));
        }
        Ok(FixedPointBundle { su2, base, cocycle })
    }

    fn pointwise<F>(&self, f: F) -> Result<FixedPointElement>
    where
        F: Fn(&str, &str) -> Result<ZElem>,
    {
        let mut parts = Local::new();
        for (u, set) in self.base.cover() {
            let mut t = BTreeMap::new();
            for x in set {
                let v = f(u, x)?;
                if !v.is_zero() {
                    t.insert(x.clone(), v);
                }
            }
            parts.insert(u.clone(), t);
        }
        Ok(FixedPointElement { parts })
    }

    fn transport(&self, v: &str, u: &str, x: &str, e: &ZElem) -> Result<ZElem> {
        let g = self.cocycle.value(v, u, x).ok_or_else(|| QpbError::InvalidCocycle(format!("missing g_{}{}({})", v, u, x)))?;
        let mut out = ZElem::zero();
        for ((w, m), c) in e.iter() {
            out.add_term((*w, *m), c * &MuScalar::constant(g.pow(*w)?));
        }
        Ok(out)
    }

    pub fn is_member(&self, p: &FixedPointElement) -> Result<bool> {
        for (u, t) in &p.parts {
            for (x, e) in t {
                if !self.base.contains(u, x) || e.keys().any(|(w, m)| !weight_matches(*w, *m)) {
                    return Ok(false);
                }
            }
        }
        for x in self.base.points() {
            let sets: Vec<&String> = self.base.sets_at(x).collect();
            let pu = p.at(sets[0], x);
            for v in &sets[1..] {
                if self.transport(v, sets[0], x, &pu)? != p.at(v, x) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn mul(&self, a: &FixedPointElement, b: &FixedPointElement) -> FixedPointElement {
        self.pointwise(|u, x| {
            let mut out = ZElem::zero();
            for ((w1, m1), c1) in a.at(u, x).iter() {
                for ((w2, m2), c2) in b.at(u, x).iter() {
                    for (m, c) in self.su2.mul_mono(*m1, *m2).iter() {
                        out.add_term((w1 + w2, *m), &(c1 * c2) * c);
                    }
                }
            }
            Ok(out)
        })
        .expect("product")
    }

    /// `z̄ = z⁻¹` on the unit circle.
    pub fn star(&self, a: &FixedPointElement) -> FixedPointElement {
        self.pointwise(|u, x| {
            let mut out = ZElem::zero();
            for ((w, m), c) in a.at(u, x).iter() {
                for (m2, c2) in self.su2.star_mono(*m).iter() {
                    out.add_term((-w, *m2), &c.conj() * c2);
                }
            }
            Ok(out)
        })
        .expect("star")
    }

    pub fn add(&self, a: &FixedPointElement, b: &FixedPointElement) -> FixedPointElement {
        self.pointwise(|u, x| Ok(a.at(u, x).add(&b.at(u, x)))).expect("sum")
    }

    /// The isomorphism onto the glued algebra: evaluation at `z = 1` in
    /// every chart.
    pub fn to_glued(&self, p: &FixedPointElement) -> GluedElement {
        let mut parts = Local::new();
        for (u, set) in self.base.cover() {
            let mut t = BTreeMap::new();
            for x in set {
                let mut e = Elem::zero();
                for ((_, m), c) in p.at(u, x).iter() {
                    e.add_term(*m, c.clone());
                }
                if !e.is_zero() {
                    t.insert(x.clone(), e);
                }
            }
            parts.insert(u.clone(), t);
        }
        GluedElement { parts }
    }

    /// Inverse of [`FixedPointBundle::to_glued`]: each monomial gets the
    /// power of `z` matching its weight.
    pub fn from_glued(&self, b: &GluedElement) -> FixedPointElement {
        self.pointwise(|u, x| {
            let mut out = ZElem::zero();
            for (m, c) in b.at(u, x).iter() {
                out.add_term((m.left_weight(), *m), c.clone());
            }
            Ok(out)
        })
        .expect("lift")
    }
}
