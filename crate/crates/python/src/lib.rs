//! Python module `qpb`.

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use qpb_core::braided::{tensor_to_text, Braided as CoreBraided, InvTensor};
use qpb_core::bundle::validate_cocycle as core_validate_cocycle;
use qpb_core::calculus::{calculus_by_tag, gamma_to_text, Calculus as CoreCalculus, GammaInv, Key};
use qpb_core::expr::{Evaluator, Value};
use qpb_core::gauge::{Gauge, GaugePotential};
use qpb_core::hopf::{elem_to_text, Elem};
use qpb_core::json::{cocycle_from_json, gamma_to_json, parse_json, potential_from_json, tensorial_to_json};
use qpb_core::qspecial::jacobi_p;
use qpb_core::verify::{run_suite, VerifyOptions};
use qpb_core::{MuParam, MuScalar, QpbError, Su2 as CoreSu2};

fn err(e: QpbError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn loads(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    Ok(py.import("json")?.call_method1("loads", (v.to_string(),))?.unbind())
}

fn param(mu_minus_one: bool) -> MuParam {
    if mu_minus_one {
        MuParam::MinusOne
    } else {
        MuParam::Generic
    }
}

/// The Hopf *-algebra of SU_mu(2).
#[pyclass(frozen)]
struct Su2 {
    su: Arc<CoreSu2>,
}

#[pymethods]
impl Su2 {
    #[new]
    #[pyo3(signature = (mu_minus_one = false))]
    fn new(mu_minus_one: bool) -> Self {
        Su2 { su: Arc::new(CoreSu2::new(param(mu_minus_one))) }
    }

    fn one(&self) -> Element {
        self.wrap(self.su.one())
    }

    fn alpha(&self) -> Element {
        self.wrap(self.su.alpha())
    }

    fn alpha_star(&self) -> Element {
        self.wrap(self.su.alpha_star())
    }

    fn gamma(&self) -> Element {
        self.wrap(self.su.gamma())
    }

    fn gamma_star(&self) -> Element {
        self.wrap(self.su.gamma_star())
    }

    /// Parse an algebra expression such as `"g*a + 2 a*"`.
    fn parse(&self, text: &str) -> PyResult<Element> {
        let mut ev = Evaluator::new(self.su.param(), "minimal");
        match ev.eval(text).map_err(err)? {
            Value::Alg(e) => Ok(self.wrap(e)),
            Value::Scalar(c) => Ok(self.wrap(self.su.scalar(c))),
            v => Err(PyValueError::new_err(format!("expected an algebra element, got a {}", v.kind()))),
        }
    }
}

impl Su2 {
    fn wrap(&self, e: Elem) -> Element {
        Element { su: self.su.clone(), e }
    }
}

/// An element of the polynomial algebra in PBW normal form.
#[pyclass(frozen)]
struct Element {
    su: Arc<CoreSu2>,
    e: Elem,
}

impl Element {
    fn with(&self, e: Elem) -> Element {
        Element { su: self.su.clone(), e }
    }

    fn same(&self, o: &Element) -> PyResult<()> {
        if self.su.param() == o.su.param() {
            Ok(())
        } else {
            Err(PyValueError::new_err("elements over different specializations"))
        }
    }
}

#[pymethods]
impl Element {
    fn __str__(&self) -> String {
        elem_to_text(&self.e, false)
    }

    fn __repr__(&self) -> String {
        format!("Element({})", elem_to_text(&self.e, false))
    }

    fn __eq__(&self, o: &Element) -> bool {
        self.su.param() == o.su.param() && self.e == o.e
    }

    fn __add__(&self, o: &Element) -> PyResult<Element> {
        self.same(o)?;
        Ok(self.with(self.e.add(&o.e)))
    }

    fn __sub__(&self, o: &Element) -> PyResult<Element> {
        self.same(o)?;
        Ok(self.with(self.e.sub(&o.e)))
    }

    fn __mul__(&self, o: &Element) -> PyResult<Element> {
        self.same(o)?;
        Ok(self.with(self.su.mul(&self.e, &o.e)))
    }

    fn __neg__(&self) -> Element {
        self.with(self.e.neg())
    }

    /// Multiply by a scalar given in text form, e.g. `"mu^2 - 1"`.
    fn scale(&self, c: &str) -> PyResult<Element> {
        let c = MuScalar::parse(c).map_err(err)?;
        Ok(self.with(self.su.fix_elem(&self.e.scale(&c)).map_err(err)?))
    }

    fn star(&self) -> Element {
        self.with(self.su.star(&self.e))
    }

    fn antipode(&self) -> Element {
        self.with(self.su.antipode(&self.e))
    }

    fn counit(&self) -> String {
        self.su.counit(&self.e).to_text()
    }

    /// Terms `(coefficient, left, right)` of the coproduct.
    fn comult(&self) -> Vec<(String, String, String)> {
        self.su
            .comult(&self.e)
            .iter()
            .map(|((a, b), c)| (c.to_text(), a.to_text(false), b.to_text(false)))
            .collect()
    }

    fn is_zero(&self) -> bool {
        self.e.is_zero()
    }
}

/// A left-covariant first order calculus: `minimal`, `4d` or `mu-minus-one`.
#[pyclass(frozen)]
struct Calculus {
    c: Arc<CoreCalculus>,
}

#[pymethods]
impl Calculus {
    #[new]
    fn new(tag: &str) -> PyResult<Self> {
        Ok(Calculus { c: Arc::new(calculus_by_tag(tag).map_err(err)?) })
    }

    #[getter]
    fn tag(&self) -> &'static str {
        self.c.tag()
    }

    fn su2(&self) -> Su2 {
        Su2::new(self.c.param() == MuParam::MinusOne)
    }

    /// Basis key names, or `None` for the infinite-dimensional minimal calculus.
    fn basis(&self) -> Option<Vec<String>> {
        self.c.basis().map(|ks| ks.iter().map(|k| k.to_text(false)).collect())
    }

    fn pi(&self, a: &Element) -> PyResult<InvForm> {
        if a.su.param() != self.c.param() {
            return Err(PyValueError::new_err("element and calculus use different specializations"));
        }
        Ok(InvForm { c: self.c.clone(), x: self.c.pi(&a.e).map_err(err)? })
    }

    /// The basis form with the given key, e.g. `"eta3"` or `"xi[1,0]"`.
    fn form(&self, key: &str) -> PyResult<InvForm> {
        let k = Key::parse(key).ok_or_else(|| PyValueError::new_err(format!("unknown key '{}'", key)))?;
        Ok(InvForm { c: self.c.clone(), x: GammaInv::basis(k) })
    }
}

/// A left-invariant 1-form.
#[pyclass(frozen)]
struct InvForm {
    c: Arc<CoreCalculus>,
    x: GammaInv,
}

#[pymethods]
impl InvForm {
    fn __str__(&self) -> String {
        gamma_to_text(&self.x, false)
    }

    fn __repr__(&self) -> String {
        format!("InvForm({})", gamma_to_text(&self.x, false))
    }

    fn __eq__(&self, o: &InvForm) -> bool {
        self.c.tag() == o.c.tag() && self.x == o.x
    }

    fn __add__(&self, o: &InvForm) -> PyResult<InvForm> {
        if self.c.tag() != o.c.tag() {
            return Err(PyValueError::new_err("forms of different calculi"));
        }
        Ok(InvForm { c: self.c.clone(), x: self.x.add(&o.x) })
    }

    /// Right action `x ∘ a`.
    fn circ(&self, a: &Element) -> PyResult<InvForm> {
        Ok(InvForm { c: self.c.clone(), x: self.c.circ(&self.x, &a.e).map_err(err)? })
    }

    /// The quantum germs representative of the form.
    fn rho(&self) -> PyResult<Element> {
        let e = self.c.rho(&self.x).map_err(err)?;
        Ok(Element { su: Arc::new(CoreSu2::new(self.c.param())), e })
    }

    fn to_json(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        loads(py, &gamma_to_json(self.c.tag(), &self.x))
    }
}

/// Braid operator of a finite calculus.
#[pyclass(frozen)]
struct Braided {
    b: CoreBraided,
}

#[pymethods]
impl Braided {
    #[new]
    fn new(tag: &str) -> PyResult<Self> {
        let c = calculus_by_tag(tag).map_err(err)?;
        Ok(Braided { b: CoreBraided::new(Arc::new(c)).map_err(err)? })
    }

    /// `σ(x ⊗ y)` on basis keys.
    fn sigma(&self, x: &str, y: &str) -> PyResult<String> {
        let key = |s: &str| Key::parse(s).ok_or_else(|| PyValueError::new_err(format!("unknown key '{}'", s)));
        let t = InvTensor::basis(vec![key(x)?, key(y)?]);
        Ok(tensor_to_text(&self.b.sigma(&t).map_err(err)?, false))
    }

    /// Basis of the quadratic ideal as printed tensors.
    fn s2_basis(&self) -> Vec<String> {
        self.b.s2_basis().iter().map(|t| tensor_to_text(t, false)).collect()
    }
}

/// Evaluate an expression in the CLI grammar and return its printed form.
#[pyfunction]
#[pyo3(signature = (text, mu_minus_one = false, calculus = "minimal", unicode = false))]
fn evaluate(text: &str, mu_minus_one: bool, calculus: &str, unicode: bool) -> PyResult<String> {
    let mut ev = Evaluator::new(param(mu_minus_one), calculus);
    Ok(ev.eval(text).map_err(err)?.to_text(unicode))
}

/// Run a verification suite and return its report as a dict.
#[pyfunction]
#[pyo3(signature = (suite, calculus = None, mu_minus_one = false, seed = 1, potentials = 20))]
fn verify(
    py: Python<'_>,
    suite: &str,
    calculus: Option<String>,
    mu_minus_one: bool,
    seed: u64,
    potentials: usize,
) -> PyResult<Py<PyAny>> {
    let opts = VerifyOptions { calculus, mu_minus_one, seed, potentials };
    let report = py.detach(|| run_suite(suite, &opts)).map_err(err)?;
    loads(py, &report.to_json())
}

/// Curvature of a potential given as a JSON document.
#[pyfunction]
fn curvature(py: Python<'_>, potential: &str) -> PyResult<Py<PyAny>> {
    let (tag, a) = potential_from_json(&parse_json(potential).map_err(err)?).map_err(err)?;
    let c = Arc::new(calculus_by_tag(&tag).map_err(err)?);
    let pot = GaugePotential::new(&c, a).map_err(err)?;
    let b = CoreBraided::new(c).map_err(err)?;
    let f = Gauge::new(&b).curvature(pot.form()).map_err(err)?;
    loads(py, &tensorial_to_json(&tag, &f))
}

/// Violations of the cocycle condition for a JSON cocycle document.
#[pyfunction]
fn validate_cocycle(doc: &str) -> PyResult<Vec<String>> {
    let (base, c) = cocycle_from_json(&parse_json(doc).map_err(err)?).map_err(err)?;
    Ok(core_validate_cocycle(&base, &c).violations)
}

/// Coefficients of the little q-Jacobi polynomial `p_k`, constant term first.
#[pyfunction]
fn jacobi(k: usize) -> Vec<String> {
    jacobi_p(k).0.coeffs().iter().map(|c| c.to_text()).collect()
}

#[pymodule]
fn qpb(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Su2>()?;
    m.add_class::<Element>()?;
    m.add_class::<Calculus>()?;
    m.add_class::<InvForm>()?;
    m.add_class::<Braided>()?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(curvature, m)?)?;
    m.add_function(wrap_pyfunction!(validate_cocycle, m)?)?;
    m.add_function(wrap_pyfunction!(jacobi, m)?)?;
    Ok(())
}
