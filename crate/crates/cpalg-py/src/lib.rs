//! Python module `cpalg`.
//!
//! Structured results (verdicts, certificates) come back as plain dicts built
//! from the library's JSON form; integers are Python ints of any size.

use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;

use ::cpalg::exotic::{self, CPWitnessTable};
use ::cpalg::finalg::{self, ClosureKind, Partition};
use ::cpalg::fryingpan;
use ::cpalg::latgen::{self, GeneratedFamily, Signature};
use ::cpalg::natint::{self, Domain};
use ::cpalg::padic::{self, PAdicApprox, Valuation};
use ::cpalg::recsets::{self, UPSetN, UPSetZ};

create_exception!(cpalg, CpalgError, PyValueError);

fn err(e: ::cpalg::Error) -> PyErr {
    CpalgError::new_err(e.to_string())
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for ::cpalg::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(err)
    }
}

fn to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn kind(s: &str) -> PyResult<ClosureKind> {
    match s {
        "lattice" => Ok(ClosureKind::Lattice),
        "boolean" => Ok(ClosureKind::Boolean),
        _ => Err(CpalgError::new_err(format!("kind must be 'lattice' or 'boolean', got {s:?}"))),
    }
}

fn domain(s: &str) -> PyResult<Domain> {
    match s {
        "N" => Ok(Domain::N),
        "Z" => Ok(Domain::Z),
        "Nx" => Ok(Domain::Nx),
        _ => Err(CpalgError::new_err(format!("domain must be 'N', 'Z' or 'Nx', got {s:?}"))),
    }
}

/// The monoid ℕ/~_{a,k}: tail `0..a`, cycle of length `k`.
#[pyclass(name = "FryingPan", module = "cpalg", frozen)]
struct PyFryingPan(fryingpan::FryingPan);

#[pymethods]
impl PyFryingPan {
    #[new]
    fn new(a: usize, k: usize) -> PyResult<Self> {
        Ok(Self(fryingpan::FryingPan::new(a, k).py()?))
    }
    #[getter]
    fn a(&self) -> usize {
        self.0.a()
    }
    #[getter]
    fn k(&self) -> usize {
        self.0.k()
    }
    #[getter]
    fn size(&self) -> usize {
        self.0.size()
    }
    fn phi(&self, x: BigInt) -> PyResult<usize> {
        self.0.phi(&x).py()
    }
    fn suc(&self, x: usize) -> PyResult<usize> {
        self.0.op(fryingpan::Op::Suc, &[x]).py()
    }
    fn add(&self, x: usize, y: usize) -> PyResult<usize> {
        self.0.op(fryingpan::Op::Add, &[x, y]).py()
    }
    fn mul(&self, x: usize, y: usize) -> PyResult<usize> {
        self.0.op(fryingpan::Op::Mul, &[x, y]).py()
    }
    fn generators(&self) -> Vec<usize> {
        self.0.generators().into_iter().collect()
    }
    fn surjective_morphism_count(&self) -> BigInt {
        self.0.surjective_morphism_count()
    }
    /// `None` when (+, ×) satisfy the semiring axioms, else the failing axiom.
    fn semiring_failure(&self) -> Option<String> {
        self.0.semiring_check().map(|f| format!("{}: {:?}", f.axiom, f.elements))
    }
    fn to_dot(&self) -> String {
        self.0.to_dot()
    }
    fn __repr__(&self) -> String {
        format!("FryingPan(a={}, k={})", self.0.a(), self.0.k())
    }
}

/// Values of `f` on the window `lo..=hi`.
#[pyclass(name = "FnTable", module = "cpalg", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFnTable(natint::FnTable);

#[pymethods]
impl PyFnTable {
    #[new]
    #[pyo3(signature = (values, lo = 0, domain = "N"))]
    fn new(values: Vec<BigInt>, lo: i64, domain: &str) -> PyResult<Self> {
        let d = self::domain(domain)?;
        Ok(Self(natint::FnTable::new(d, lo, values).py()?))
    }
    #[getter]
    fn lo(&self) -> i64 {
        self.0.lo()
    }
    #[getter]
    fn hi(&self) -> i64 {
        self.0.hi()
    }
    #[getter]
    fn values(&self) -> Vec<BigInt> {
        self.0.values().to_vec()
    }
    fn __len__(&self) -> usize {
        self.0.len()
    }
    fn __getitem__(&self, x: i64) -> PyResult<BigInt> {
        self.0.get(x).cloned().ok_or_else(|| pyo3::exceptions::PyIndexError::new_err(x))
    }
    /// Divisibility test: `(x - y) | (f(x) - f(y))` on the window.
    fn check_cp<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &serde_json::to_value(natint::check_cp_additive(&self.0)).unwrap())
    }
    fn check_spp<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &serde_json::to_value(natint::check_spp_additive(&self.0)).unwrap())
    }
    fn check_monomial<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let v = natint::check_cp_multiplicative(&self.0).py()?;
        to_py(py, &serde_json::to_value(v).unwrap())
    }
    fn __repr__(&self) -> String {
        format!("FnTable({:?}, {}..={})", self.0.domain(), self.0.lo(), self.0.hi())
    }
}

/// Recognizable subset of ℕ or ℤ.
#[pyclass(name = "RecSet", module = "cpalg", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyRecSet(recsets::RecSet);

#[pymethods]
impl PyRecSet {
    /// `F ∪ {a + r + k·m : r ∈ R, m ≥ 0}` with `F ⊆ 0..a` and `R ⊆ 0..k`.
    #[staticmethod]
    #[pyo3(signature = (k, a = 0, finite = vec![], periodic = vec![]))]
    fn naturals(k: usize, a: usize, finite: Vec<u64>, periodic: Vec<u64>) -> PyResult<Self> {
        Ok(Self(recsets::RecSet::N(UPSetN::from_lists(a, k, &finite, &periodic).py()?)))
    }
    /// Union of the residue classes `residues + kℤ`.
    #[staticmethod]
    fn integers(k: usize, residues: Vec<i64>) -> PyResult<Self> {
        Ok(Self(recsets::RecSet::Z(UPSetZ::residues(k, &residues).py()?)))
    }
    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| CpalgError::new_err(e.to_string()))?;
        Ok(Self(recsets::RecSet::from_json(&v, None).py()?))
    }
    fn to_json(&self) -> String {
        self.0.to_json().to_string()
    }
    #[getter]
    fn carrier(&self) -> &'static str {
        match self.0.carrier() {
            recsets::Carrier::N => "N",
            recsets::Carrier::Z => "Z",
        }
    }
    fn __contains__(&self, x: BigInt) -> PyResult<bool> {
        self.0.member(&x).py()
    }
    fn union(&self, other: &Self) -> PyResult<Self> {
        Ok(Self(self.0.union(&other.0).py()?))
    }
    fn inter(&self, other: &Self) -> PyResult<Self> {
        Ok(Self(self.0.inter(&other.0).py()?))
    }
    fn complement(&self) -> Self {
        Self(self.0.complement())
    }
    /// `{x : x + n ∈ L}`
    fn translate_preimage(&self, n: BigInt) -> PyResult<Self> {
        Ok(Self(self.0.translate_preimage(&n).py()?))
    }
    /// `{x : n·x ∈ L}`
    fn division_preimage(&self, n: BigInt) -> PyResult<Self> {
        Ok(Self(self.0.division_preimage(&n).py()?))
    }
    fn __eq__(&self, other: &Self) -> bool {
        self.0.equals(&other.0).unwrap_or(false)
    }
    fn __str__(&self) -> String {
        self.0.to_string()
    }
    fn __repr__(&self) -> String {
        format!("RecSet({})", self.0.to_json())
    }
}

/// A generated DUO lattice or Boolean algebra.
#[pyclass(name = "Family", module = "cpalg", frozen)]
struct PyFamily(GeneratedFamily);

#[pymethods]
impl PyFamily {
    fn __len__(&self) -> usize {
        self.0.len()
    }
    fn members(&self) -> Vec<PyRecSet> {
        self.0.members().into_iter().map(PyRecSet).collect()
    }
    fn __contains__(&self, x: &PyRecSet) -> PyResult<bool> {
        self.0.contains(&x.0).py()
    }
    /// Union-of-intersections of generator preimages expressing `x`, if any.
    fn expression(&self, x: &PyRecSet) -> PyResult<Option<String>> {
        Ok(self.0.member_of(&x.0).py()?.map(|d| d.to_string()))
    }
    fn check_finv<'py>(&self, py: Python<'py>, f: &PyFnTable) -> PyResult<Bound<'py, PyAny>> {
        let v = self.0.check_finv_in(&f.0).py()?;
        to_py(py, &serde_json::to_value(v).unwrap())
    }
    fn is_closed(&self) -> bool {
        self.0.is_closed()
    }
    fn to_dot(&self) -> String {
        self.0.to_dot()
    }
    fn to_json(&self) -> String {
        self.0.to_json().to_string()
    }
}

/// Family of DUO preimages of `base` closed under ∪, ∩ (and complement).
#[pyfunction]
#[pyo3(signature = (base, carrier = "N", signature = "+", kind = "lattice"))]
fn lattice(base: &PyRecSet, carrier: &str, signature: &str, kind: &str) -> PyResult<PyFamily> {
    let sig: Signature = signature.parse().py()?;
    let fam = latgen::generate(&base.0, domain(carrier)?, sig, self::kind(kind)?).py()?;
    Ok(PyFamily(fam))
}

/// Finite algebra given by operation tables.
#[pyclass(name = "FiniteAlgebra", module = "cpalg", frozen)]
struct PyFiniteAlgebra(finalg::FiniteAlgebra);

fn mask(alg: &finalg::FiniteAlgebra, elems: &[usize]) -> PyResult<Vec<bool>> {
    if elems.iter().any(|&e| e >= alg.size()) {
        return Err(CpalgError::new_err("element outside the carrier"));
    }
    Ok(finalg::subset(alg.size(), elems))
}

fn elems(m: &[bool]) -> Vec<usize> {
    (0..m.len()).filter(|&x| m[x]).collect()
}

#[pymethods]
impl PyFiniteAlgebra {
    /// `ops` is a list of `(arity, table)` with row-major tables.
    #[new]
    fn new(n: usize, ops: Vec<(usize, Vec<usize>)>) -> PyResult<Self> {
        let mut alg = finalg::FiniteAlgebra::new(n);
        for (arity, table) in ops {
            alg.push_op(arity, table).py()?;
        }
        Ok(Self(alg))
    }
    #[staticmethod]
    fn cyclic_add(n: usize) -> Self {
        Self(finalg::FiniteAlgebra::cyclic_add(n))
    }
    #[getter]
    fn size(&self) -> usize {
        self.0.size()
    }
    fn congruences(&self) -> Vec<Vec<Vec<usize>>> {
        self.0.all_congruences().iter().map(Partition::blocks).collect()
    }
    fn syntactic_congruence(&self, subset: Vec<usize>) -> PyResult<Vec<Vec<usize>>> {
        Ok(self.0.syntactic_congruence(&mask(&self.0, &subset)?).py()?.blocks())
    }
    fn syntactic_preorder(&self, subset: Vec<usize>) -> PyResult<Vec<(usize, usize)>> {
        Ok(self.0.syntactic_preorder(&mask(&self.0, &subset)?).py()?.pairs())
    }
    #[pyo3(signature = (subset, kind = "lattice"))]
    fn closure(&self, subset: Vec<usize>, kind: &str) -> PyResult<Vec<Vec<usize>>> {
        let fam = self.0.lattice_closure(&mask(&self.0, &subset)?, self::kind(kind)?).py()?;
        Ok(fam.iter().map(|m| elems(m)).collect())
    }
    fn preserves_all_congruences(&self, f: Vec<usize>) -> PyResult<bool> {
        self.0.preserves_all_congruences(&f).py()
    }
}

/// Element of ℤ_p known modulo pⁿ.
#[pyclass(name = "PAdic", module = "cpalg", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPAdic(PAdicApprox);

#[pymethods]
impl PyPAdic {
    #[new]
    fn new(p: u64, n: u32, value: BigInt) -> PyResult<Self> {
        Ok(Self(PAdicApprox::new(p, n, &value).py()?))
    }
    #[staticmethod]
    fn minus_one(p: u64, n: u32) -> PyResult<Self> {
        Ok(Self(padic::minus_one(p, n).py()?))
    }
    #[getter]
    fn p(&self) -> u64 {
        self.0.p()
    }
    #[getter]
    fn n(&self) -> u32 {
        self.0.precision()
    }
    #[getter]
    fn value(&self) -> BigInt {
        self.0.value().clone()
    }
    /// Least significant first.
    fn digits(&self) -> Vec<u64> {
        self.0.digits()
    }
    fn reduce(&self, m: u32) -> PyResult<Self> {
        Ok(Self(self.0.reduce(m).py()?))
    }
    fn __add__(&self, o: &Self) -> PyResult<Self> {
        Ok(Self(self.0.add(&o.0).py()?))
    }
    fn __sub__(&self, o: &Self) -> PyResult<Self> {
        Ok(Self(self.0.sub(&o.0).py()?))
    }
    fn __mul__(&self, o: &Self) -> PyResult<Self> {
        Ok(Self(self.0.mul(&o.0).py()?))
    }
    fn __neg__(&self) -> Self {
        Self(self.0.neg())
    }
    fn __pow__(&self, e: u32, _modulo: Option<&Bound<'_, PyAny>>) -> Self {
        Self(padic::pow(&self.0, e))
    }
    fn __eq__(&self, o: &Self) -> bool {
        self.0 == o.0
    }
    /// `(v, exact)`: exact valuation, or a lower bound when the value is 0 mod pⁿ.
    fn valuation(&self) -> (u32, bool) {
        match self.0.valuation() {
            Valuation::Exact(v) => (v, true),
            Valuation::AtLeast(v) => (v, false),
        }
    }
    fn is_unit(&self) -> bool {
        self.0.is_unit()
    }
    fn inverse(&self) -> PyResult<Self> {
        Ok(Self(self.0.inverse().py()?))
    }
    fn __repr__(&self) -> String {
        format!("PAdic({}, {}, {})", self.0.p(), self.0.precision(), self.0.value())
    }
    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// Certified CP table: values plus certificate.
#[pyclass(name = "Witness", module = "cpalg", frozen)]
struct PyWitness(CPWitnessTable);

#[pymethods]
impl PyWitness {
    #[getter]
    fn table(&self) -> PyFnTable {
        PyFnTable(self.0.table.clone())
    }
    #[getter]
    fn values(&self) -> Vec<BigInt> {
        self.0.values().to_vec()
    }
    #[getter]
    fn verified(&self) -> bool {
        self.0.divisibility_verified
    }
    fn certificate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0.to_json()["certificate"])
    }
    /// Value of the extension to ℤ_p at `x`.
    fn extend(&self, x: &PyPAdic) -> PyResult<PyPAdic> {
        Ok(PyPAdic(padic::cp_extend(&self.0, &x.0).py()?))
    }
}

/// `"e-factorial"`, `"zigzag"`, `"appendix-F"`, or `"window-lift"` (needs `target`).
#[pyfunction]
#[pyo3(signature = (which, max, target = None))]
fn construct(which: &str, max: u64, target: Option<&PyFnTable>) -> PyResult<PyWitness> {
    let hi = i64::try_from(max).map_err(|_| CpalgError::new_err("max too large"))?;
    let w = match which {
        "e-factorial" => {
            exotic::certify_table(natint::FnTable::from_fn(Domain::N, 0, hi, |x| exotic::floor_e_factorial(x as u64)).py()?)
        }
        "zigzag" => {
            let t = natint::FnTable::from_fn(Domain::N, 0, hi, |x| exotic::zigzag_f(x as u64)).py()?;
            exotic::cp_window_lift(&t).py()?
        }
        "appendix-F" => exotic::appendix_f(max).py()?,
        "window-lift" => {
            let t = target.ok_or_else(|| CpalgError::new_err("window-lift needs a target"))?;
            exotic::cp_window_lift(&t.0).py()?
        }
        other => return Err(CpalgError::new_err(format!("unknown construction {other:?}"))),
    };
    Ok(PyWitness(w))
}

/// Wrap a table as certified after an exhaustive pairwise check.
#[pyfunction]
fn certify(table: &PyFnTable) -> PyWitness {
    PyWitness(exotic::certify_table(table.0.clone()))
}

/// CP test for a function on ℤ/pⁿ given by its residue table.
#[pyfunction]
fn check_cp_zp<'py>(py: Python<'py>, p: u64, n: u32, values: Vec<u64>) -> PyResult<Bound<'py, PyAny>> {
    let v = padic::check_cp_zp(p, n, &values).py()?;
    to_py(py, &serde_json::to_value(v).unwrap())
}

/// Run one acceptance criterion; returns its report line and outcome.
#[pyfunction]
fn verify<'py>(py: Python<'py>, id: u8) -> PyResult<Bound<'py, PyAny>> {
    if !(1..=11).contains(&id) {
        return Err(CpalgError::new_err(format!("no criterion {id}")));
    }
    let o = py.detach(|| cpalg_acceptance::run(id));
    let mut v = serde_json::to_value(&o).unwrap();
    v["line"] = o.line().into();
    to_py(py, &v)
}

#[pymodule(name = "cpalg")]
fn cpalg_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CpalgError", m.py().get_type::<CpalgError>())?;
    m.add_class::<PyFryingPan>()?;
    m.add_class::<PyFnTable>()?;
    m.add_class::<PyRecSet>()?;
    m.add_class::<PyFamily>()?;
    m.add_class::<PyFiniteAlgebra>()?;
    m.add_class::<PyPAdic>()?;
    m.add_class::<PyWitness>()?;
    m.add_function(wrap_pyfunction!(lattice, m)?)?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(check_cp_zp, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
