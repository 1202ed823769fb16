//! Python bindings: moduli, function tables, clonoids, clones, bounds and
//! verification suites. Structured results are exchanged as JSON strings.

use clonecalc::bounds;
use clonecalc::clone::{self, CloneRep};
use clonecalc::clonoid::{self, ClonoidSig, LinClonoid};
use clonecalc::verify;
use clonecalc::{json, FnTable, SquarefreeModulus};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::json;

fn err(e: clonecalc::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_json<T: serde::Serialize>(v: &T) -> PyResult<String> {
    serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn parse(text: &str) -> PyResult<serde_json::Value> {
    json::parse(text, "input").map_err(err)
}

/// A squarefree modulus `s`.
#[pyclass(name = "Modulus", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyModulus(SquarefreeModulus);

#[pymethods]
impl PyModulus {
    #[new]
    fn new(s: u64) -> PyResult<Self> {
        SquarefreeModulus::new(s).map(PyModulus).map_err(err)
    }

    #[getter]
    fn s(&self) -> u32 {
        self.0.s()
    }

    #[getter]
    fn primes(&self) -> Vec<u32> {
        self.0.primes().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("Modulus({})", self.0.s())
    }
}

/// A function `Z_s^n -> Z_s` stored per component.
#[pyclass(name = "FnTable", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyFnTable(FnTable);

#[pymethods]
impl PyFnTable {
    /// Builds a table from `Z_s` values listed in block-lexicographic point order.
    #[staticmethod]
    fn from_zs(modulus: &PyModulus, arity: usize, values: Vec<u32>) -> PyResult<Self> {
        let v = json!({ "modulus": modulus.0.primes(), "arity": arity, "encoding": "zs", "values": values });
        json::table_from_value(&v, "$").map(PyFnTable).map_err(err)
    }

    /// Builds a table from a callable on `Z_s` arguments.
    #[staticmethod]
    fn from_callable(modulus: &PyModulus, arity: usize, f: &Bound<'_, PyAny>) -> PyResult<Self> {
        let failure = std::cell::RefCell::new(None);
        let t = FnTable::from_fn_zs(modulus.0.clone(), arity, |x| match f.call1((x.to_vec(),)).and_then(|r| r.extract::<u32>()) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0
            }
        })
        .map_err(err)?;
        match failure.into_inner() {
            Some(e) => Err(e),
            None => Ok(PyFnTable(t)),
        }
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        json::table_from_value(&parse(text)?, "$").map(PyFnTable).map_err(err)
    }

    fn to_json(&self) -> String {
        json::to_string(&json::table_to_value(&self.0))
    }

    #[getter]
    fn arity(&self) -> usize {
        self.0.arity()
    }

    #[getter]
    fn modulus(&self) -> PyModulus {
        PyModulus(self.0.modulus().clone())
    }

    /// `Z_s` values in block-lexicographic point order.
    fn values_zs(&self) -> Vec<u32> {
        self.0.values_zs()
    }

    fn compose(&self, args: Vec<PyFnTable>) -> PyResult<Self> {
        let args: Vec<FnTable> = args.into_iter().map(|a| a.0).collect();
        self.0.compose(&args).map(PyFnTable).map_err(err)
    }

    fn __add__(&self, other: &PyFnTable) -> PyResult<Self> {
        self.0.add(&other.0).map(PyFnTable).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("FnTable(s={}, arity={})", self.0.modulus().s(), self.0.arity())
    }
}

/// A linearly closed clonoid materialized up to an arity cap.
#[pyclass(name = "Clonoid", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyClonoid(LinClonoid);

#[pymethods]
impl PyClonoid {
    /// Closure of coefficient-function tables; `gens` holds `(arity, values)` pairs.
    #[staticmethod]
    #[pyo3(signature = (p, others, gens, cap = 2))]
    fn closure(p: u32, others: Vec<u32>, gens: Vec<(usize, Vec<u8>)>, cap: usize) -> PyResult<Self> {
        let sig = ClonoidSig::new(p, others).map_err(err)?;
        let gens = gens
            .into_iter()
            .map(|(k, v)| clonecalc::CoeffFn::new(sig.coeff_sig(k), v))
            .collect::<clonecalc::Result<Vec<_>>>()
            .map_err(err)?;
        clonoid::cig_closure(&sig, &gens, cap).map(PyClonoid).map_err(err)
    }

    fn dims(&self) -> Vec<usize> {
        self.0.dims()
    }

    fn unary_elements(&self) -> Vec<Vec<u8>> {
        self.0.unary_elements()
    }

    fn member(&self, arity: usize, values: Vec<u8>) -> PyResult<bool> {
        let f = clonecalc::CoeffFn::new(self.0.sig().coeff_sig(arity), values).map_err(err)?;
        self.0.member(&f).map_err(err)
    }

    fn leq(&self, other: &PyClonoid) -> PyResult<bool> {
        self.0.leq(&other.0).map_err(err)
    }

    fn meet(&self, other: &PyClonoid) -> PyResult<Self> {
        self.0.meet(&other.0).map(PyClonoid).map_err(err)
    }

    fn join(&self, other: &PyClonoid) -> PyResult<Self> {
        self.0.join(&other.0).map(PyClonoid).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Clonoid(p={}, others={:?}, dims={:?})", self.0.sig().p, self.0.sig().sources, self.0.dims())
    }
}

/// A clone on `Z_s` containing the linear clone.
#[pyclass(name = "Clone", frozen)]
struct PyClone(CloneRep);

#[pymethods]
impl PyClone {
    #[staticmethod]
    #[pyo3(signature = (modulus, gens, cap = 2))]
    fn from_generators(modulus: &PyModulus, gens: Vec<PyFnTable>, cap: usize) -> PyResult<Self> {
        let gens: Vec<FnTable> = gens.into_iter().map(|g| g.0).collect();
        clone::from_generators(&modulus.0, &gens, cap).map(PyClone).map_err(err)
    }

    /// `γ_i(C)` for a clonoid of component `i`.
    #[staticmethod]
    #[pyo3(signature = (i, clonoid, modulus, cap = 2))]
    fn gamma(i: usize, clonoid: &PyClonoid, modulus: &PyModulus, cap: usize) -> PyResult<Self> {
        let cfg = clone::CloneConfig { cap, ..clone::CloneConfig::default() };
        clone::gamma(i, &clonoid.0, &modulus.0, &cfg).map(PyClone).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        json::clone_rep_from_value(&parse(text)?, "$").map(PyClone).map_err(err)
    }

    fn to_json(&self) -> String {
        json::to_string(&json::clone_rep_to_value(&self.0))
    }

    /// Unary ranks of every grade, per component.
    fn ranks(&self) -> Vec<Vec<usize>> {
        self.0.key().iter().map(|gs| gs.iter().map(|g| g.rank()).collect()).collect()
    }

    fn contains(&self, f: &PyFnTable) -> PyResult<bool> {
        self.0.contains(&f.0).map_err(err)
    }

    /// Membership verdict with a replay-checked certificate as JSON.
    fn member(&self, f: &PyFnTable) -> PyResult<(bool, Option<String>)> {
        let (yes, cert) = self.0.member(&f.0).map_err(err)?;
        match cert {
            Some(c) => {
                c.verify(&f.0).map_err(err)?;
                Ok((yes, Some(json::to_string(&json::clone_certificate_to_value(&c)))))
            }
            None => Ok((yes, None)),
        }
    }

    fn extract_generators(&self) -> PyResult<Vec<PyFnTable>> {
        Ok(self.0.extract_generators().map_err(err)?.into_iter().map(PyFnTable).collect())
    }

    /// `ρ` as nested lists of clonoids, indexed by component and grade.
    fn rho(&self) -> PyResult<Vec<Vec<PyClonoid>>> {
        Ok(self.0.rho().map_err(err)?.into_iter().map(|gs| gs.into_iter().map(PyClonoid).collect()).collect())
    }

    fn leq(&self, other: &PyClone) -> PyResult<bool> {
        self.0.leq(&other.0).map_err(err)
    }

    fn equal(&self, other: &PyClone) -> PyResult<bool> {
        self.0.equal(&other.0).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Clone(s={}, ranks={:?})", self.0.modulus().s(), self.ranks())
    }
}

/// Every clonoid of the signature, sorted by unary part.
#[pyfunction]
#[pyo3(signature = (p, others, cap = 2))]
fn enumerate_clonoids(p: u32, others: Vec<u32>, cap: usize) -> PyResult<Vec<PyClonoid>> {
    let sig = ClonoidSig::new(p, others).map_err(err)?;
    Ok(clonoid::enumerate_clonoids(&sig, cap).map_err(err)?.into_iter().map(PyClonoid).collect())
}

/// Clones generated by subsets of the γ-image pool on `modulus`.
#[pyfunction]
#[pyo3(signature = (modulus, pool = "gamma"))]
fn enumerate_clones(modulus: &PyModulus, pool: &str) -> PyResult<Vec<PyClone>> {
    let pool = match pool {
        "gamma" => clone::Pool::Gamma,
        "monomials" => clone::Pool::Monomials,
        other => return Err(PyValueError::new_err(format!("unknown pool {other}"))),
    };
    let cfg = clone::EnumConfig::default();
    let items = clone::generator_pool(&modulus.0, pool, 2).map_err(err)?;
    Ok(clone::enumerate_clones(&modulus.0, &items, &cfg).map_err(err)?.into_iter().map(PyClone).collect())
}

/// Clone-count bounds as a JSON report.
#[pyfunction]
#[pyo3(signature = (s, enumerated = None))]
fn clone_count_bounds(s: u64, enumerated: Option<Vec<u64>>) -> PyResult<String> {
    let md = SquarefreeModulus::new(s).map_err(err)?;
    to_json(&bounds::bounds_report(&md, enumerated.as_deref()).map_err(err)?)
}

#[pyfunction]
fn pq_bounds(p: u32, q: u32) -> PyResult<String> {
    to_json(&bounds::pq_bounds(p, q).map_err(err)?)
}

/// Runs a named verification suite and returns its JSON report.
#[pyfunction]
#[pyo3(signature = (suite, seed = 0))]
fn run_suite(suite: &str, seed: u64) -> PyResult<String> {
    to_json(&verify::run_suite(suite, seed).map_err(err)?)
}

#[pymodule]
fn clonecalc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModulus>()?;
    m.add_class::<PyFnTable>()?;
    m.add_class::<PyClonoid>()?;
    m.add_class::<PyClone>()?;
    m.add_function(wrap_pyfunction!(enumerate_clonoids, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_clones, m)?)?;
    m.add_function(wrap_pyfunction!(clone_count_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(pq_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add("SUITES", verify::SUITES.to_vec())?;
    Ok(())
}
