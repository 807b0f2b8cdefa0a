//! Python bindings. Values cross the boundary as plain Python objects shaped like the JSON
//! documents of the command line tool; integers of any size stay Python ints.

use std::sync::Arc;

use cyclonic::burnside::{burnside_mul, burnside_table, compose_h, BurnsideElement, HMorphism};
use cyclonic::cyclotomic::{
    recollement_check, twisted_audit as audit, verify_cyclotomic, witt_cyclotomic,
};
use cyclonic::dga::dga_mul;
use cyclonic::json::*;
use cyclonic::mackey::{burnside_mackey, eval_h, validate_mackey, MackeyData};
use cyclonic::supernat::Supernatural as CoreSupernatural;
use cyclonic::witt::{
    frobenius, ghost, restriction, universal_polys as polys, verschiebung, witt_add, witt_mackey,
    witt_mul, witt_neg, Integers, IntegersMod, Polynomials, Rationals, RingTag, WittOp,
    WittVector as CoreWitt,
};
use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyTypeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyFloat, PyInt, PyList, PyString, PyTuple};
use serde_json::{Map, Number, Value};

create_exception!(cyclonic_py, CyclonicError, PyValueError);

fn err(e: cyclonic::Error) -> PyErr {
    CyclonicError::new_err(e.to_string())
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for cyclonic::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(err)
    }
}

fn to_value(obj: &Bound<'_, PyAny>) -> PyResult<Value> {
    if obj.is_none() {
        return Ok(Value::Null);
    }
    if let Ok(b) = obj.cast::<PyBool>() {
        return Ok(Value::Bool(b.is_true()));
    }
    if let Ok(i) = obj.cast::<PyInt>() {
        return Ok(match i.extract::<i64>() {
            Ok(n) => Value::Number(n.into()),
            Err(_) => Value::String(i.extract::<BigInt>()?.to_string()),
        });
    }
    if obj.cast::<PyFloat>().is_ok() {
        return Err(PyTypeError::new_err(
            "floats are not exact; use an int or a string such as \"1/3\"",
        ));
    }
    if let Ok(s) = obj.cast::<PyString>() {
        return Ok(Value::String(s.to_str()?.to_owned()));
    }
    if let Ok(d) = obj.cast::<PyDict>() {
        let mut m = Map::new();
        for (k, v) in d.iter() {
            m.insert(k.str()?.to_str()?.to_owned(), to_value(&v)?);
        }
        return Ok(Value::Object(m));
    }
    if let Ok(l) = obj.cast::<PyList>() {
        return l
            .iter()
            .map(|x| to_value(&x))
            .collect::<PyResult<_>>()
            .map(Value::Array);
    }
    if let Ok(t) = obj.cast::<PyTuple>() {
        return t
            .iter()
            .map(|x| to_value(&x))
            .collect::<PyResult<_>>()
            .map(Value::Array);
    }
    Err(PyTypeError::new_err(format!(
        "cannot convert {} to a cyclonic value",
        obj.get_type().name()?
    )))
}

fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any().unbind(),
        Value::Number(n) => number_to_py(py, n)?,
        Value::String(s) => match s.parse::<BigInt>() {
            // big integers travel as decimal strings
            Ok(n) => n.into_pyobject(py)?.into_any().unbind(),
            Err(_) => PyString::new(py, s).into_any().unbind(),
        },
        Value::Array(a) => {
            let items = a
                .iter()
                .map(|x| to_py(py, x))
                .collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_any().unbind()
        }
        Value::Object(m) => {
            let d = PyDict::new(py);
            for (k, x) in m {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any().unbind()
        }
    })
}

fn number_to_py(py: Python<'_>, n: &Number) -> PyResult<Py<PyAny>> {
    if let Some(i) = n.as_i64() {
        Ok(i.into_pyobject(py)?.into_any().unbind())
    } else if let Some(u) = n.as_u64() {
        Ok(u.into_pyobject(py)?.into_any().unbind())
    } else {
        Err(PyValueError::new_err(format!("non-integral number {n}")))
    }
}

fn ring_tag(ring: &str) -> PyResult<RingTag> {
    ring.parse().py()
}

/// A supernatural number such as `12`, `"2^inf*3"` or `"inf"`.
#[pyclass(module = "cyclonic_py", eq, frozen, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct Supernatural {
    inner: CoreSupernatural,
}

#[pymethods]
impl Supernatural {
    #[new]
    fn new(value: &Bound<'_, PyAny>) -> PyResult<Self> {
        let text = match to_value(value)? {
            Value::String(s) => s,
            Value::Number(n) => n.to_string(),
            _ => return Err(PyTypeError::new_err("expected an int or a string")),
        };
        Ok(Supernatural {
            inner: text.parse().py()?,
        })
    }

    fn gcd(&self, other: &Supernatural) -> Supernatural {
        Supernatural {
            inner: self.inner.meet(&other.inner),
        }
    }

    fn lcm(&self, other: &Supernatural) -> Supernatural {
        Supernatural {
            inner: self.inner.join(&other.inner),
        }
    }

    fn divides(&self, other: &Supernatural) -> bool {
        self.inner.divides(&other.inner)
    }

    fn is_finite(&self) -> bool {
        self.inner.is_finite()
    }

    /// Finite divisors up to `bound`.
    fn nest(&self, bound: u64) -> Vec<u64> {
        self.inner.nest(bound)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Supernatural('{}')", self.inner)
    }
}

enum AnyWitt {
    Z(CoreWitt<Integers>),
    Zmod(CoreWitt<IntegersMod>),
    Q(CoreWitt<Rationals>),
    PolyZ(CoreWitt<Polynomials<Integers>>),
    PolyQ(CoreWitt<Polynomials<Rationals>>),
}

macro_rules! each {
    ($w:expr, |$x:ident| $body:expr) => {
        match $w {
            AnyWitt::Z($x) => AnyWitt::Z($body),
            AnyWitt::Zmod($x) => AnyWitt::Zmod($body),
            AnyWitt::Q($x) => AnyWitt::Q($body),
            AnyWitt::PolyZ($x) => AnyWitt::PolyZ($body),
            AnyWitt::PolyQ($x) => AnyWitt::PolyQ($body),
        }
    };
}

macro_rules! each_value {
    ($w:expr, |$x:ident| $body:expr) => {
        match $w {
            AnyWitt::Z($x) => $body,
            AnyWitt::Zmod($x) => $body,
            AnyWitt::Q($x) => $body,
            AnyWitt::PolyZ($x) => $body,
            AnyWitt::PolyQ($x) => $body,
        }
    };
}

macro_rules! each_pair {
    ($a:expr, $b:expr, |$x:ident, $y:ident| $body:expr) => {
        match ($a, $b) {
            (AnyWitt::Z($x), AnyWitt::Z($y)) => AnyWitt::Z($body),
            (AnyWitt::Zmod($x), AnyWitt::Zmod($y)) => AnyWitt::Zmod($body),
            (AnyWitt::Q($x), AnyWitt::Q($y)) => AnyWitt::Q($body),
            (AnyWitt::PolyZ($x), AnyWitt::PolyZ($y)) => AnyWitt::PolyZ($body),
            (AnyWitt::PolyQ($x), AnyWitt::PolyQ($y)) => AnyWitt::PolyQ($body),
            _ => return Err(CyclonicError::new_err("Witt vectors over different rings")),
        }
    };
}

/// A truncated big Witt vector over `Z`, `Q`, `Zmod:N`, `PolyZ:x,y` or `PolyQ:x,y`.
#[pyclass(module = "cyclonic_py", frozen, skip_from_py_object)]
struct WittVector {
    inner: AnyWitt,
}

impl WittVector {
    fn wrap(inner: AnyWitt) -> Self {
        WittVector { inner }
    }

    fn doc(&self) -> Value {
        each_value!(&self.inner, |w| witt_to_json(w))
    }
}

#[pymethods]
impl WittVector {
    /// Components are listed by the divisors of `level` in increasing order, or given as a
    /// dict keyed by divisor.
    #[new]
    #[pyo3(signature = (level, components, ring = "Z"))]
    fn new(level: u64, components: &Bound<'_, PyAny>, ring: &str) -> PyResult<Self> {
        let v = to_value(components)?;
        let inner = match ring_tag(ring)? {
            RingTag::Z => AnyWitt::Z(witt_from_json_at(&Integers, level, &v).py()?),
            RingTag::Zmod(n) => {
                AnyWitt::Zmod(witt_from_json_at(&IntegersMod::new(n).py()?, level, &v).py()?)
            }
            RingTag::Q => AnyWitt::Q(witt_from_json_at(&Rationals, level, &v).py()?),
            RingTag::PolyZ(vars) => AnyWitt::PolyZ(
                witt_from_json_at(&Polynomials::new(Integers, vars), level, &v).py()?,
            ),
            RingTag::PolyQ(vars) => AnyWitt::PolyQ(
                witt_from_json_at(&Polynomials::new(Rationals, vars), level, &v).py()?,
            ),
        };
        Ok(WittVector { inner })
    }

    #[getter]
    fn level(&self) -> u64 {
        each_value!(&self.inner, |w| w.level())
    }

    #[getter]
    fn ring(&self) -> String {
        self.doc()["ring"].as_str().unwrap_or_default().to_owned()
    }

    /// Components keyed by divisor.
    #[getter]
    fn components(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.doc()["components"])
    }

    /// Ghost components keyed by divisor.
    fn ghost(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let v = each_value!(&self.inner, |w| ghost_to_json(&ghost(w)));
        to_py(py, &v["ghost"])
    }

    /// Result lives at `level`.
    fn frobenius(&self, level: u64) -> PyResult<Self> {
        Ok(Self::wrap(each!(&self.inner, |w| frobenius(w, level).py()?)))
    }

    /// Result lives at `level`.
    fn verschiebung(&self, level: u64) -> PyResult<Self> {
        Ok(Self::wrap(
            each!(&self.inner, |w| verschiebung(w, level).py()?)
        ))
    }

    /// Result lives at `level`.
    fn restriction(&self, level: u64) -> PyResult<Self> {
        Ok(Self::wrap(
            each!(&self.inner, |w| restriction(w, level).py()?)
        ))
    }

    fn __add__(&self, other: &WittVector) -> PyResult<Self> {
        Ok(Self::wrap(each_pair!(&self.inner, &other.inner, |x, y| {
            witt_add(x, y).py()?
        })))
    }

    fn __mul__(&self, other: &WittVector) -> PyResult<Self> {
        Ok(Self::wrap(each_pair!(&self.inner, &other.inner, |x, y| {
            witt_mul(x, y).py()?
        })))
    }

    fn __neg__(&self) -> PyResult<Self> {
        Ok(Self::wrap(each!(&self.inner, |w| witt_neg(w).py()?)))
    }

    fn __eq__(&self, other: &WittVector) -> bool {
        self.doc() == other.doc()
    }

    fn to_json(&self) -> String {
        self.doc().to_string()
    }

    fn __repr__(&self) -> String {
        format!("WittVector({})", self.doc())
    }
}

/// An element of the Burnside ring `A(C_m)`, coefficients keyed by orbit level.
#[pyclass(module = "cyclonic_py", frozen, skip_from_py_object)]
struct Burnside {
    inner: BurnsideElement,
}

#[pymethods]
impl Burnside {
    /// `coeffs` is a dict `{k: c}`, a list over the divisors of `level`, or a string like `"2[1] - [3]"`.
    #[new]
    fn new(level: u64, coeffs: &Bound<'_, PyAny>) -> PyResult<Self> {
        let inner = match to_value(coeffs)? {
            Value::String(s) => burnside_from_str(level, &s).py()?,
            v => burnside_from_json(&serde_json::json!({ "level": level, "coeffs": v })).py()?,
        };
        Ok(Burnside { inner })
    }

    #[getter]
    fn level(&self) -> u64 {
        self.inner.level()
    }

    #[getter]
    fn coeffs(&self) -> Vec<(u64, BigInt)> {
        self.inner.terms().map(|(k, c)| (k, c.clone())).collect()
    }

    /// Number of points fixed by the subgroup of order `d`.
    fn marks(&self, d: u64) -> BigInt {
        self.inner.fixed_points(d)
    }

    fn __add__(&self, other: &Burnside) -> PyResult<Self> {
        Ok(Burnside {
            inner: self.inner.add(&other.inner).py()?,
        })
    }

    fn __mul__(&self, other: &Burnside) -> PyResult<Self> {
        Ok(Burnside {
            inner: burnside_mul(&self.inner, &other.inner).py()?,
        })
    }

    fn __eq__(&self, other: &Burnside) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Burnside({})", burnside_to_json(&self.inner))
    }
}

/// A morphism `<source> -> <target>` of the homotopy Burnside category.
#[pyclass(module = "cyclonic_py", frozen, skip_from_py_object)]
struct Span {
    inner: HMorphism,
}

#[pymethods]
impl Span {
    #[new]
    fn new(source: u64, target: u64, coeffs: &Bound<'_, PyAny>) -> PyResult<Self> {
        let v = serde_json::json!({ "src": source, "tgt": target, "coeffs": to_value(coeffs)? });
        Ok(Span {
            inner: hmorphism_from_json(&v).py()?,
        })
    }

    #[staticmethod]
    fn identity(m: u64) -> Self {
        Span {
            inner: HMorphism::identity(m),
        }
    }

    #[getter]
    fn source(&self) -> u64 {
        self.inner.source()
    }

    #[getter]
    fn target(&self) -> u64 {
        self.inner.target()
    }

    #[getter]
    fn coeffs(&self) -> Vec<(u64, BigInt)> {
        self.inner.terms().map(|(k, c)| (k, c.clone())).collect()
    }

    /// `self` followed by `then`.
    fn then(&self, then: &Span) -> PyResult<Self> {
        Ok(Span {
            inner: compose_h(&self.inner, &then.inner).py()?,
        })
    }

    fn __add__(&self, other: &Span) -> PyResult<Self> {
        Ok(Span {
            inner: self.inner.add(&other.inner).py()?,
        })
    }

    fn __eq__(&self, other: &Span) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Span({})", self.inner)
    }
}

/// Mackey functor data truncated at a bound.
#[pyclass(module = "cyclonic_py", frozen, skip_from_py_object)]
struct Mackey {
    inner: Arc<MackeyData>,
}

#[pymethods]
impl Mackey {
    #[staticmethod]
    fn burnside(bound: u64) -> Self {
        Mackey {
            inner: Arc::new(burnside_mackey(bound)),
        }
    }

    #[staticmethod]
    #[pyo3(signature = (bound, ring = "Z"))]
    fn witt(bound: u64, ring: &str) -> PyResult<Self> {
        Ok(Mackey {
            inner: Arc::new(witt_mackey(&ring_tag(ring)?, bound).py()?),
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Mackey {
            inner: Arc::new(mackey_from_json(&v).py()?),
        })
    }

    fn to_json(&self) -> String {
        mackey_to_json(&self.inner).to_string()
    }

    #[getter]
    fn bound(&self) -> u64 {
        self.inner.bound()
    }

    /// The validation report, with `valid` and a list of `violations`.
    fn validate(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &mackey_report_to_json(&validate_mackey(&self.inner)))
    }

    /// The homomorphism induced by a span, as a dict with source, target and matrix.
    fn evaluate(&self, py: Python<'_>, span: &Span) -> PyResult<Py<PyAny>> {
        to_py(
            py,
            &morphism_to_json(&eval_h(self.inner.as_ref(), &span.inner).py()?),
        )
    }

    fn recollement(&self, py: Python<'_>, p: u64) -> PyResult<Py<PyAny>> {
        to_py(
            py,
            &check_report_to_json(&recollement_check(&self.inner, p).py()?),
        )
    }
}

/// Checks the cyclotomic structure on the Witt Mackey functor up to `bound`.
#[pyfunction]
#[pyo3(signature = (primes, bound, ring = "Z"))]
fn verify_witt_cyclotomic(
    py: Python<'_>,
    primes: Vec<u64>,
    bound: u64,
    ring: &str,
) -> PyResult<Py<PyAny>> {
    let c = witt_cyclotomic(&ring_tag(ring)?, &primes).py()?;
    to_py(py, &check_report_to_json(&verify_cyclotomic(&c, bound)))
}

/// Associativity audit of the offset conventions for the twisted orbit category.
#[pyfunction]
#[pyo3(signature = (bound = 24))]
fn twisted_audit(py: Python<'_>, bound: u64) -> PyResult<Py<PyAny>> {
    to_py(py, &twisted_audit_to_json(&audit(bound)))
}

/// Universal Witt polynomials for `op` in `"sum"`, `"product"`, `"negation"`.
#[pyfunction]
#[pyo3(signature = (level, op = "sum"))]
fn universal_polys(py: Python<'_>, level: u64, op: &str) -> PyResult<Py<PyAny>> {
    let op = match op {
        "sum" => WittOp::Sum,
        "product" => WittOp::Product,
        "negation" => WittOp::Negation,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown operation {other:?}"
            )))
        }
    };
    let p = polys(level, op).map_err(err)?;
    to_py(py, &polys_to_json(&p))
}

/// Rows `(k, l, coefficient, orbit)` of the multiplication table of `A(C_m)`.
#[pyfunction]
fn burnside_products(m: u64) -> Vec<(u64, u64, u64, u64)> {
    burnside_table(m)
}

/// Product `x·y` (x after y) in the graded algebra of generators, over `ring`.
#[pyfunction]
#[pyo3(signature = (bound, x, y, ring = "Z"))]
fn dga_product(
    py: Python<'_>,
    bound: u64,
    x: &Bound<'_, PyAny>,
    y: &Bound<'_, PyAny>,
    ring: &str,
) -> PyResult<Py<PyAny>> {
    let (x, y) = (to_value(x)?, to_value(y)?);
    macro_rules! go {
        ($r:expr) => {{
            let r = $r;
            let a = dga_from_json(&r, bound, &x).py()?;
            let b = dga_from_json(&r, bound, &y).py()?;
            dga_to_json(&dga_mul(&a, &b).py()?)
        }};
    }
    let v = match ring_tag(ring)? {
        RingTag::Z => go!(Integers),
        RingTag::Zmod(n) => go!(IntegersMod::new(n).py()?),
        RingTag::Q => go!(Rationals),
        RingTag::PolyZ(vars) => go!(Polynomials::new(Integers, vars)),
        RingTag::PolyQ(vars) => go!(Polynomials::new(Rationals, vars)),
    };
    to_py(py, &v)
}

#[pymodule]
fn cyclonic_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CyclonicError", m.py().get_type::<CyclonicError>())?;
    m.add_class::<Supernatural>()?;
    m.add_class::<WittVector>()?;
    m.add_class::<Burnside>()?;
    m.add_class::<Span>()?;
    m.add_class::<Mackey>()?;
    m.add_function(wrap_pyfunction!(verify_witt_cyclotomic, m)?)?;
    m.add_function(wrap_pyfunction!(twisted_audit, m)?)?;
    m.add_function(wrap_pyfunction!(universal_polys, m)?)?;
    m.add_function(wrap_pyfunction!(burnside_products, m)?)?;
    m.add_function(wrap_pyfunction!(dga_product, m)?)?;
    Ok(())
}
