//! Python bindings. Field elements of GF(2^16) cross the boundary as
//! integers below 65536, polynomials as text in the usual grammar.

use std::collections::BTreeMap;

use char2::algebra::text::{parse_poly, parse_system};
use char2::algebra::{Gf2k, GfElem, Jet, Poly, Vars};
use char2::chern::{self, IntegralTable};
use char2::discriminant::{run_trial, DataFile, TrialOptions};
use char2::groebner::{buchberger, MonomialOrder, OrderKind};
use char2::pfaffian::{self as pf, AlternatingMatrix as Alt};
use char2::singularity::{self as sing, SingularJet as Jet0};
use char2::suite::{self, TrialCounts};
use char2::Error;
use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

const SECTION_STREAM: u32 = 100;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn field() -> Gf2k {
    Gf2k::default()
}

fn elem(f: &Gf2k, v: u64) -> PyResult<GfElem> {
    f.elem(v).map_err(err)
}

/// Serialize through JSON and hand the result to `json.loads`.
fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (s,))
}

#[pyclass(name = "Polynomial", module = "char2py", frozen)]
struct PyPolynomial {
    inner: Poly,
}

#[pymethods]
impl PyPolynomial {
    #[new]
    fn new(text: &str, vars: Vec<String>) -> PyResult<Self> {
        let f = field();
        let inner = parse_poly(text, &f, &Vars::new(vars)).map_err(err)?;
        Ok(PyPolynomial { inner })
    }

    #[getter]
    fn vars(&self) -> Vec<String> {
        (0..self.inner.nvars()).map(|i| self.inner.vars().name(i).to_string()).collect()
    }

    fn eval(&self, point: Vec<u64>) -> PyResult<u64> {
        if point.len() != self.inner.nvars() {
            return Err(PyIndexError::new_err(format!("expected {} coordinates", self.inner.nvars())));
        }
        let f = field();
        let p = point.into_iter().map(|v| elem(&f, v)).collect::<PyResult<Vec<_>>>()?;
        Ok(self.inner.eval(&p).bits())
    }

    fn derivative(&self, i: usize) -> PyResult<Self> {
        if i >= self.inner.nvars() {
            return Err(PyIndexError::new_err("variable index out of range"));
        }
        Ok(PyPolynomial { inner: self.inner.derivative(i) })
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.same_vars(other)?;
        Ok(PyPolynomial { inner: &self.inner + &other.inner })
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.same_vars(other)?;
        Ok(PyPolynomial { inner: &self.inner * &other.inner })
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Polynomial('{}', vars=[{}])", self.inner, self.inner.vars())
    }
}

impl PyPolynomial {
    fn same_vars(&self, other: &Self) -> PyResult<()> {
        if self.inner.vars() != other.inner.vars() {
            return Err(err(Error::VariableMismatch {
                left: self.inner.vars().to_string(),
                right: other.inner.vars().to_string(),
            }));
        }
        Ok(())
    }
}

/// Alternating matrix over GF(2^16) built from its strict upper triangle.
#[pyclass(name = "AlternatingMatrix", module = "char2py", frozen)]
struct PyAlternatingMatrix {
    inner: Alt<Gf2k>,
}

#[pymethods]
impl PyAlternatingMatrix {
    #[new]
    fn new(upper: Vec<Vec<u64>>) -> PyResult<Self> {
        let f = field();
        let rows = upper
            .into_iter()
            .map(|r| r.into_iter().map(|v| elem(&f, v)).collect::<PyResult<Vec<_>>>())
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PyAlternatingMatrix { inner: Alt::from_upper_rows(&f, rows).map_err(err)? })
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    fn entry(&self, i: usize, j: usize) -> PyResult<u64> {
        let n = self.inner.size();
        if i >= n || j >= n {
            return Err(PyIndexError::new_err("index out of range"));
        }
        Ok(self.inner.get(i, j).bits())
    }

    fn pfaffian(&self) -> PyResult<u64> {
        Ok(pf::pfaffian(&self.inner).map_err(err)?.bits())
    }

    fn det(&self) -> PyResult<u64> {
        Ok(self.inner.to_matrix().det().map_err(err)?.bits())
    }

    fn rank(&self) -> usize {
        pf::alt_rank(&self.inner)
    }

    /// `(T, r)` with `T^t A T` the standard form of rank `2r`.
    fn normal_form(&self) -> (Vec<Vec<u64>>, usize) {
        let (t, r) = pf::alt_normal_form(&self.inner);
        let rows = (0..t.rows()).map(|i| t.row(i).iter().map(|e| e.bits()).collect()).collect();
        (rows, r)
    }
}

/// A jet `phi` with vanishing constant and linear part.
#[pyclass(name = "SingularJet", module = "char2py", frozen)]
struct PySingularJet {
    inner: Jet0,
    aux: Vec<Jet<Gf2k>>,
}

#[pymethods]
impl PySingularJet {
    /// `text` is a `vars:` header followed by `phi` and optional auxiliary
    /// series.
    #[new]
    #[pyo3(signature = (text, order = 4))]
    fn new(text: &str, order: u32) -> PyResult<Self> {
        let f = field();
        let (_, polys) = parse_system(text, &f).map_err(err)?;
        let Some((phi, aux)) = polys.split_first() else {
            return Err(PyValueError::new_err("no polynomial after the header"));
        };
        let inner = Jet0::from_poly(phi.clone(), order).map_err(err)?;
        let aux = aux.iter().map(|p| Jet::new(p.clone(), order)).collect();
        Ok(PySingularJet { inner, aux })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn order(&self) -> u32 {
        self.inner.order()
    }

    fn hessian_rank(&self) -> usize {
        pf::alt_rank(&sing::hessian(&self.inner))
    }

    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &sing::classify(&self.inner, &self.aux).map_err(err)?)
    }

    /// Local-ring verdict computed directly from the colengths.
    #[pyo3(signature = (order = 6))]
    fn oracle<'py>(&self, py: Python<'py>, order: u32) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &sing::oracle_verdict(&self.inner, order).map_err(err)?)
    }

    fn __str__(&self) -> String {
        self.inner.phi().poly().to_string()
    }
}

/// `(vars, generators)` of the Gamma ideal.
#[pyfunction]
#[pyo3(signature = (extra_vars = 0))]
fn gamma_generators(extra_vars: usize) -> PyResult<(Vec<String>, Vec<String>)> {
    let (vars, gens) = char2::gamma::gamma_ideal(extra_vars).map_err(err)?;
    let names = (0..vars.len()).map(|i| vars.name(i).to_string()).collect();
    Ok((names, gens.iter().map(|g| g.to_string()).collect()))
}

#[pyfunction]
#[pyo3(signature = (text, order = "grevlex", priority = None))]
fn groebner_basis(text: &str, order: &str, priority: Option<Vec<String>>) -> PyResult<Vec<String>> {
    let f = field();
    let (vars, polys) = parse_system(text, &f).map_err(err)?;
    let kind: OrderKind = order.parse().map_err(err)?;
    let ord = match priority {
        Some(p) => {
            let names: Vec<&str> = p.iter().map(String::as_str).collect();
            MonomialOrder::with_names(kind, &vars, &names).map_err(err)?
        }
        None => MonomialOrder::natural(kind, vars.len()),
    };
    Ok(buchberger(&polys, &ord).map_err(err)?.iter().map(|g| g.to_string()).collect())
}

fn table(n: usize, integrals: BTreeMap<String, i64>) -> PyResult<IntegralTable> {
    IntegralTable::from_map(n, integrals.iter().map(|(k, v)| (k.as_str(), (*v).into()))).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, integrals, lam = None))]
fn deg_r<'py>(py: Python<'py>, n: usize, integrals: BTreeMap<String, i64>, lam: Option<i64>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &chern::deg_r(n, &table(n, integrals)?, lam).map_err(err)?)
}

#[pyfunction]
fn divisibility_check<'py>(py: Python<'py>, n: usize, integrals: BTreeMap<String, i64>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &chern::divisibility_check(n, &table(n, integrals)?).map_err(err)?)
}

/// The `h^2` coefficient of the degree class, as text.
#[pyfunction]
fn degree_class(n: usize) -> PyResult<String> {
    Ok(chern::degree_class(n).map_err(err)?.to_string())
}

/// Trial records for one point of R given as the JSON data file.
#[pyfunction]
#[pyo3(signature = (data, trials = 10, seed = 0))]
fn section_trials<'py>(py: Python<'py>, data: &str, trials: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let file: DataFile = serde_json::from_str(data).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let d = file.to_data(&field()).map_err(err)?;
    let opts = TrialOptions::default();
    let recs = py.detach(|| {
        (0..trials)
            .map(|i| run_trial(i, &d, &mut suite::trial_rng(seed, SECTION_STREAM, i), &opts))
            .collect::<char2::Result<Vec<_>>>()
    });
    to_py(py, &recs.map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (seed = 2024, trials = None))]
fn selftest<'py>(py: Python<'py>, seed: u64, trials: Option<usize>) -> PyResult<Bound<'py, PyAny>> {
    let counts = trials.map_or_else(TrialCounts::default, TrialCounts::uniform);
    let report = py.detach(|| suite::run_all(seed, &counts, None)).map_err(err)?;
    to_py(py, &report)
}

#[pymodule]
pub fn char2py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolynomial>()?;
    m.add_class::<PyAlternatingMatrix>()?;
    m.add_class::<PySingularJet>()?;
    m.add_function(wrap_pyfunction!(gamma_generators, m)?)?;
    m.add_function(wrap_pyfunction!(groebner_basis, m)?)?;
    m.add_function(wrap_pyfunction!(deg_r, m)?)?;
    m.add_function(wrap_pyfunction!(divisibility_check, m)?)?;
    m.add_function(wrap_pyfunction!(degree_class, m)?)?;
    m.add_function(wrap_pyfunction!(section_trials, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    Ok(())
}
