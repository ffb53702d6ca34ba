//! Python bindings: fixed points, compasses, subgroups, ML-degrees and the
//! reference formulas. Exact values come back as `int` and
//! `fractions.Fraction`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use mldegree_core as core;
use mldegree_core::{Error, Parallelism};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Internal(_) | Error::ResourceExhausted(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parallelism(threads: Option<usize>) -> Parallelism {
    Parallelism { threads }
}

/// A torus-fixed point: an ordered partition of {1..n} into blocks of size 1 or 2.
#[pyclass(name = "FixedPoint", module = "mldegree", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PyFixedPoint {
    inner: core::FixedPoint,
}

#[pymethods]
impl PyFixedPoint {
    #[new]
    fn new(n: u32, blocks: Vec<Vec<u32>>) -> PyResult<Self> {
        core::FixedPoint::from_index_sets(n, &blocks)
            .map(|inner| PyFixedPoint { inner })
            .map_err(to_py_err)
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn blocks(&self) -> Vec<Vec<u32>> {
        self.inner.index_sets()
    }

    /// Prefix unions I_0 ⊂ I_1 ⊂ ... ⊂ I_r.
    fn chain(&self) -> Vec<Vec<u32>> {
        self.inner.chain()
    }

    /// Tangent characters as coefficient lists.
    fn compass(&self) -> PyResult<Vec<Vec<i32>>> {
        let chars = core::compass(&self.inner).map_err(to_py_err)?;
        Ok(chars.into_iter().map(|c| c.coeffs().to_vec()).collect())
    }

    fn reversed(&self) -> Self {
        PyFixedPoint {
            inner: self.inner.reversed(),
        }
    }

    fn to_json(&self) -> String {
        self.inner.to_json_line()
    }

    fn __repr__(&self) -> String {
        format!("FixedPoint(n={}, blocks={:?})", self.inner.n(), self.inner.index_sets())
    }
}

#[pyclass(name = "FixedPointIter", module = "mldegree")]
pub struct PyFixedPointIter {
    inner: core::FixedPoints,
}

#[pymethods]
impl PyFixedPointIter {
    fn __iter__(slf: PyRef<'_, Self>) -> PyRef<'_, Self> {
        slf
    }

    fn __next__(mut slf: PyRefMut<'_, Self>) -> Option<PyFixedPoint> {
        slf.inner.next().map(|inner| PyFixedPoint { inner })
    }
}

/// A one-parameter subgroup ε_i ↦ w_i.
#[pyclass(name = "Subgroup", module = "mldegree", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq, Eq)]
pub struct PySubgroup {
    inner: core::Subgroup,
}

#[pymethods]
impl PySubgroup {
    #[new]
    fn new(weights: Vec<BigInt>) -> PyResult<Self> {
        core::Subgroup::new(weights)
            .map(|inner| PySubgroup { inner })
            .map_err(to_py_err)
    }

    /// w_i = 2^i.
    #[staticmethod]
    fn default(n: u32) -> PyResult<Self> {
        core::default_subgroup(n)
            .map(|inner| PySubgroup { inner })
            .map_err(to_py_err)
    }

    #[staticmethod]
    #[pyo3(signature = (n, seed, bound = 1 << 20))]
    fn random(n: u32, seed: u64, bound: u64) -> PyResult<Self> {
        core::random_subgroup(n, seed, bound)
            .map(|inner| PySubgroup { inner })
            .map_err(to_py_err)
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn weights(&self) -> Vec<BigInt> {
        self.inner.weights().to_vec()
    }

    fn is_generic(&self) -> bool {
        self.inner.is_generic()
    }

    fn __repr__(&self) -> String {
        format!("Subgroup{}", self.inner)
    }
}

#[pyfunction]
fn kappa(n: u32) -> BigUint {
    core::kappa(n)
}

/// Streams fixed points in canonical order.
#[pyfunction]
fn fixed_points(n: u32) -> PyResult<PyFixedPointIter> {
    core::enumerate_fixed_points(n)
        .map(|inner| PyFixedPointIter { inner })
        .map_err(to_py_err)
}

#[pyfunction]
fn validate_subgroup(subgroup: &PySubgroup) -> bool {
    core::validate_subgroup(&subgroup.inner)
}

#[pyfunction]
fn limit_ratio(numerator: Vec<BigInt>, denominator: Vec<BigInt>) -> PyResult<BigRational> {
    core::limit_ratio(&numerator, &denominator).map_err(to_py_err)
}

/// Exact contribution of one fixed point for exponents (a, b).
#[pyfunction]
fn contribution(
    point: &PyFixedPoint,
    a: u32,
    b: u32,
    subgroup: &PySubgroup,
) -> PyResult<BigRational> {
    core::contribution(&point.inner, a, b, &subgroup.inner)
        .map(|c| c.into_inner())
        .map_err(to_py_err)
}

/// φ(n, a). Releases the GIL while summing.
#[pyfunction]
#[pyo3(signature = (n, a, subgroup = None, threads = None))]
fn ml_degree(
    py: Python<'_>,
    n: u32,
    a: u32,
    subgroup: Option<PySubgroup>,
    threads: Option<usize>,
) -> PyResult<BigUint> {
    py.detach(|| {
        core::ml_degree_with(n, a, subgroup.as_ref().map(|s| &s.inner), parallelism(threads))
    })
    .map_err(to_py_err)
}

/// [φ(n, 1), ..., φ(n, C(n+1, 2))].
#[pyfunction]
#[pyo3(signature = (n, subgroup = None, threads = None))]
fn ml_degree_row(
    py: Python<'_>,
    n: u32,
    subgroup: Option<PySubgroup>,
    threads: Option<usize>,
) -> PyResult<Vec<BigUint>> {
    py.detach(|| core::ml_degree_row(n, subgroup.as_ref().map(|s| &s.inner), parallelism(threads)))
        .map_err(to_py_err)
}

#[pyfunction]
fn phi_closed_form(n: i64, a: u32) -> PyResult<BigRational> {
    core::phi_closed_form(n, a).map_err(to_py_err)
}

#[pyfunction]
fn beta_diagonal(n: u32, a: u32) -> BigUint {
    core::beta_diagonal(n, a)
}

/// Coefficients (lowest degree first) of the polynomial through `samples`.
#[pyfunction]
fn interpolate_phi(a: u32, samples: Vec<(i64, BigInt)>) -> PyResult<Vec<BigRational>> {
    core::interpolate_phi(a, &samples)
        .map(|p| p.coeffs().to_vec())
        .map_err(to_py_err)
}

#[pymodule]
fn mldegree(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFixedPoint>()?;
    m.add_class::<PyFixedPointIter>()?;
    m.add_class::<PySubgroup>()?;
    m.add_function(wrap_pyfunction!(kappa, m)?)?;
    m.add_function(wrap_pyfunction!(fixed_points, m)?)?;
    m.add_function(wrap_pyfunction!(validate_subgroup, m)?)?;
    m.add_function(wrap_pyfunction!(limit_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(contribution, m)?)?;
    m.add_function(wrap_pyfunction!(ml_degree, m)?)?;
    m.add_function(wrap_pyfunction!(ml_degree_row, m)?)?;
    m.add_function(wrap_pyfunction!(phi_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(beta_diagonal, m)?)?;
    m.add_function(wrap_pyfunction!(interpolate_phi, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_map_to_python_exception_types() {
        Python::initialize();
        Python::attach(|py| {
            let e = to_py_err(Error::InvalidArgument("x".into()));
            assert!(e.is_instance_of::<PyValueError>(py));
            let e = to_py_err(Error::Internal("x".into()));
            assert!(e.is_instance_of::<PyRuntimeError>(py));
        });
    }

    #[test]
    fn module_functions_round_trip() {
        Python::initialize();
        Python::attach(|py| {
            let module = PyModule::new(py, "mldegree").unwrap();
            mldegree(&module).unwrap();
            let phi: u64 = module
                .getattr("ml_degree")
                .unwrap()
                .call1((4u32, 4u32))
                .unwrap()
                .extract()
                .unwrap();
            assert_eq!(phi, 17);
            let frac = module
                .getattr("phi_closed_form")
                .unwrap()
                .call1((0i64, 4u32))
                .unwrap();
            assert_eq!(frac.str().unwrap().to_string(), "-1");
        });
    }
}
