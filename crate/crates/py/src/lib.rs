//! Python bindings: SAT instances, facility instances, the reductions,
//! local search, audits and embeddings.
//!
//! Exact rational values cross the boundary as `p/q` strings; floating
//! point views are provided where Python callers usually want numbers.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use swaplab_core::embed::{self, DistanceMatrix, SchoenbergResult};
use swaplab_core::facility::Solution;
use swaplab_core::rational::{parse_rat, rat_str, rat_to_f64};
use swaplab_core::reduce;
use swaplab_core::satcore::{Assignment, Mode};
use swaplab_core::search::{self, FacilitySwap, Pivot, SatFlip};
use swaplab_core::verify::{self, VerifyOptions};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_pivot(s: &str) -> PyResult<Pivot> {
    s.parse().map_err(value_err)
}

fn parse_bits(s: &str) -> PyResult<Assignment> {
    s.parse().map_err(value_err)
}

/// Weighted 2-CNF instance, standard or NAE-positive.
#[pyclass(name = "SatInstance", from_py_object)]
#[derive(Clone)]
struct PySatInstance {
    inner: swaplab_core::SatInstance,
}

#[pymethods]
impl PySatInstance {
    /// Builds an instance from signed 1-based literals,
    /// e.g. `SatInstance(2, [(1, 2, 1)], "std")`.
    #[new]
    fn new(num_vars: usize, clauses: Vec<(i64, i64, u64)>, mode: &str) -> PyResult<Self> {
        let mode: Mode = mode.parse().map_err(value_err)?;
        let inner =
            swaplab_core::SatInstance::from_signed(num_vars, &clauses, mode).map_err(value_err)?;
        Ok(PySatInstance { inner })
    }

    #[staticmethod]
    fn parse_wsat2(text: &str) -> PyResult<Self> {
        Ok(PySatInstance {
            inner: swaplab_core::SatInstance::parse_wsat2(text).map_err(value_err)?,
        })
    }

    fn to_wsat2(&self) -> String {
        self.inner.to_wsat2()
    }

    #[getter]
    fn num_vars(&self) -> usize {
        self.inner.num_vars()
    }

    #[getter]
    fn num_clauses(&self) -> usize {
        self.inner.num_clauses()
    }

    #[getter]
    fn mode(&self) -> String {
        self.inner.mode().to_string()
    }

    #[getter]
    fn weights(&self) -> Vec<u64> {
        self.inner.weights().to_vec()
    }

    fn sat_cost(&self, bits: &str) -> PyResult<u64> {
        self.inner.sat_cost(&parse_bits(bits)?).map_err(value_err)
    }

    fn nae_cost(&self, bits: &str) -> PyResult<u64> {
        self.inner.nae_cost(&parse_bits(bits)?).map_err(value_err)
    }

    /// Mode-appropriate cost.
    fn cost(&self, bits: &str) -> PyResult<u64> {
        self.inner.cost(&parse_bits(bits)?).map_err(value_err)
    }

    fn flip_neighbors(&self, bits: &str) -> PyResult<Vec<String>> {
        Ok(parse_bits(bits)?
            .flip_neighbors()
            .iter()
            .map(|t| t.to_string())
            .collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "SatInstance(N={}, M={}, mode={})",
            self.inner.num_vars(),
            self.inner.num_clauses(),
            self.inner.mode()
        )
    }
}

/// MUFL / DKM / DFKM instance.
#[pyclass(name = "Instance", from_py_object)]
#[derive(Clone)]
struct PyInstance {
    inner: swaplab_core::LocationInstance,
}

#[pymethods]
impl PyInstance {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyInstance {
            inner: swaplab_core::LocationInstance::from_json(text).map_err(value_err)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn kind(&self) -> String {
        self.inner.kind().to_string()
    }

    #[getter]
    fn n_points(&self) -> usize {
        self.inner.n_points()
    }

    #[getter]
    fn k(&self) -> Option<usize> {
        self.inner.k()
    }

    #[getter]
    fn weights(&self) -> Vec<u64> {
        self.inner.weights().to_vec()
    }

    #[getter]
    fn labels(&self) -> Option<Vec<String>> {
        self.inner
            .labels()
            .map(|ls| ls.iter().map(|l| l.to_string()).collect())
    }

    /// Exact distance entry as a `p/q` string.
    fn distance(&self, i: usize, j: usize) -> PyResult<String> {
        let n = self.inner.n_points();
        if i >= n || j >= n {
            return Err(value_err(format!("index out of range for {n} points")));
        }
        Ok(rat_str(self.inner.dist().get(i, j)))
    }

    /// Objective value as a float.
    fn cost(&self, open: Vec<usize>) -> PyResult<f64> {
        let sol = Solution::new(open);
        Ok(rat_to_f64(&self.inner.cost(&sol).map_err(value_err)?))
    }

    /// Objective value as an exact `p/q` string.
    fn cost_exact(&self, open: Vec<usize>) -> PyResult<String> {
        let sol = Solution::new(open);
        Ok(rat_str(&self.inner.cost(&sol).map_err(value_err)?))
    }

    fn swap_neighbors(&self, open: Vec<usize>) -> PyResult<Vec<Vec<usize>>> {
        let sol = Solution::new(open);
        Ok(self
            .inner
            .swap_neighbors(&sol)
            .map_err(value_err)?
            .iter()
            .map(|s| s.open().to_vec())
            .collect())
    }

    fn is_reasonable(&self, open: Vec<usize>) -> PyResult<bool> {
        self.inner
            .is_reasonable(&Solution::new(open))
            .map_err(value_err)
    }

    /// Row-stochastic optimal memberships of every client to the open
    /// centers.
    fn memberships(&self, open: Vec<usize>) -> PyResult<Vec<Vec<f64>>> {
        Ok(self
            .inner
            .optimal_memberships(&Solution::new(open))
            .map_err(value_err)?
            .rows()
            .to_vec())
    }

    /// Float view of the full distance matrix.
    fn distance_rows(&self) -> Vec<Vec<f64>> {
        self.inner.dist().to_f64_rows()
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(kind={}, n_points={})",
            self.inner.kind(),
            self.inner.n_points()
        )
    }
}

/// A reduction artifact: source SAT instance, target instance, constants
/// and the label map.
#[pyclass(name = "Artifact", from_py_object)]
#[derive(Clone)]
struct PyArtifact {
    inner: reduce::ReductionArtifact,
}

#[pymethods]
impl PyArtifact {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyArtifact {
            inner: reduce::ReductionArtifact::from_json(text).map_err(value_err)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn source(&self) -> PySatInstance {
        PySatInstance {
            inner: self.inner.source.clone(),
        }
    }

    #[getter]
    fn instance(&self) -> PyInstance {
        PyInstance {
            inner: self.inner.target.clone(),
        }
    }

    /// The reduction constants as a dict: W, and where applicable f, K,
    /// epsilon and c (rationals as `p/q` strings).
    #[getter]
    fn constants<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        d.set_item("W", self.inner.constants.w)?;
        if let Some(f) = &self.inner.constants.opening_cost {
            d.set_item("f", rat_str(f))?;
        }
        if let Some(k) = self.inner.constants.k {
            d.set_item("K", k)?;
        }
        if let Some(eps) = &self.inner.constants.epsilon {
            d.set_item("epsilon", rat_str(eps))?;
        }
        if let Some(c) = &self.inner.constants.c {
            d.set_item("c", rat_str(c))?;
        }
        Ok(d)
    }

    /// Open-point set of an assignment (`lift`): `x_n` where true, `!x_n`
    /// where false.
    fn lift(&self, bits: &str) -> PyResult<Vec<usize>> {
        let t = parse_bits(bits)?;
        Ok(reduce::lift_assignment(&self.inner, &t)
            .map_err(value_err)?
            .open()
            .to_vec())
    }

    /// Assignment of a solution (`psi`): variable true iff its positive
    /// point is open.
    fn assignment_of(&self, open: Vec<usize>) -> String {
        reduce::map_solution_back(&self.inner, &Solution::new(open)).to_string()
    }

    /// Runs every applicable audit check; returns the report as a JSON
    /// string (parse with `json.loads`).
    #[pyo3(signature = (guard = 1 << 20, seed = 0, membership_samples = 10_000, gamma_samples = 10_000))]
    fn verify(
        &self,
        guard: u64,
        seed: u64,
        membership_samples: usize,
        gamma_samples: usize,
    ) -> String {
        let opts = VerifyOptions {
            guard: guard as u128,
            membership_samples,
            gamma_samples,
            seed,
            ..VerifyOptions::default()
        };
        verify::run_all_checks(&self.inner, &opts).to_json()
    }

    fn __repr__(&self) -> String {
        format!(
            "Artifact(target={}, W={})",
            self.inner.target.kind(),
            self.inner.constants.w
        )
    }
}

#[pyfunction]
fn reduce_to_mufl(sat: &PySatInstance) -> PyResult<PyArtifact> {
    Ok(PyArtifact {
        inner: reduce::reduce_sat_to_mufl(&sat.inner).map_err(value_err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (sat, c = "3/2"))]
fn reduce_to_dkm(sat: &PySatInstance, c: &str) -> PyResult<PyArtifact> {
    let c = parse_rat(c).map_err(value_err)?;
    Ok(PyArtifact {
        inner: reduce::reduce_sat_to_dkm(&sat.inner, &c).map_err(value_err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (sat, c = "3/2"))]
fn reduce_to_dfkm(sat: &PySatInstance, c: &str) -> PyResult<PyArtifact> {
    let c = parse_rat(c).map_err(value_err)?;
    Ok(PyArtifact {
        inner: reduce::reduce_pnaesat_to_dfkm(&sat.inner, &c).map_err(value_err)?,
    })
}

#[pyfunction]
fn double_clauses(sat: &PySatInstance) -> PyResult<PySatInstance> {
    Ok(PySatInstance {
        inner: reduce::double_clauses(&sat.inner).map_err(value_err)?,
    })
}

/// Flip local search on a SAT instance; returns
/// `(final_bits, [(move, cost), ...])`.
#[pyfunction]
#[pyo3(signature = (sat, init_bits, pivot = "best"))]
fn local_search_sat(
    sat: &PySatInstance,
    init_bits: &str,
    pivot: &str,
) -> PyResult<(String, Vec<(String, u64)>)> {
    let pivot = parse_pivot(pivot)?;
    let init = parse_bits(init_bits)?;
    let problem = SatFlip::new(&sat.inner);
    let (end, trace) = search::local_search(&problem, init, pivot).map_err(value_err)?;
    let steps = trace
        .steps
        .iter()
        .map(|s| (s.mv.to_string(), s.cost))
        .collect();
    Ok((end.to_string(), steps))
}

/// Accepted moves with their exact costs, as printable strings.
type SearchSteps = Vec<(String, String)>;

/// Single-swap local search on a facility instance; returns
/// `(final_open, [(move, exact_cost), ...])`.
#[pyfunction]
#[pyo3(signature = (inst, init_open, pivot = "best"))]
fn local_search_instance(
    inst: &PyInstance,
    init_open: Vec<usize>,
    pivot: &str,
) -> PyResult<(Vec<usize>, SearchSteps)> {
    let pivot = parse_pivot(pivot)?;
    let problem = FacilitySwap::new(&inst.inner);
    let (end, trace) =
        search::local_search(&problem, Solution::new(init_open), pivot).map_err(value_err)?;
    let steps = trace
        .steps
        .iter()
        .map(|s| (s.mv.to_string(), rat_str(&s.cost)))
        .collect();
    Ok((end.open().to_vec(), steps))
}

/// All local optima of an instance under single swaps.
#[pyfunction]
#[pyo3(signature = (inst, guard = 1 << 20))]
fn enumerate_local_optima(inst: &PyInstance, guard: u64) -> PyResult<Vec<Vec<usize>>> {
    let problem = FacilitySwap::new(&inst.inner);
    let optima = search::enumerate_local_optima(&problem, guard as u128).map_err(value_err)?;
    Ok(optima.iter().map(|s| s.open().to_vec()).collect())
}

fn matrix_from_rows(rows: Vec<Vec<f64>>) -> PyResult<DistanceMatrix> {
    DistanceMatrix::from_rows(&rows).map_err(value_err)
}

/// Embeddability test; returns a dict with `embeddable`, `min_eigenvalue`
/// and, on failure, `witness` and `quadratic_form`.
#[pyfunction]
#[pyo3(signature = (rows, tol = 1e-9))]
fn schoenberg_check<'py>(
    py: Python<'py>,
    rows: Vec<Vec<f64>>,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let m = matrix_from_rows(rows)?;
    let d = PyDict::new(py);
    match embed::schoenberg_check(&m, tol) {
        SchoenbergResult::Embeddable { min_eigenvalue } => {
            d.set_item("embeddable", true)?;
            d.set_item("min_eigenvalue", min_eigenvalue)?;
        }
        SchoenbergResult::NotEmbeddable {
            min_eigenvalue,
            witness,
            quadratic_form,
        } => {
            d.set_item("embeddable", false)?;
            d.set_item("min_eigenvalue", min_eigenvalue)?;
            d.set_item("witness", PyList::new(py, witness)?)?;
            d.set_item("quadratic_form", quadratic_form)?;
        }
    }
    Ok(d)
}

/// Classical multidimensional scaling; returns
/// `(points, dim, max_abs_error)`.
#[pyfunction]
#[pyo3(signature = (rows, tol = 1e-9))]
fn classical_mds(rows: Vec<Vec<f64>>, tol: f64) -> PyResult<(Vec<Vec<f64>>, usize, f64)> {
    let m = matrix_from_rows(rows)?;
    let emb = embed::classical_mds(&m, tol).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok((emb.points, emb.dim, emb.max_abs_error))
}

#[pymodule]
fn swaplab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySatInstance>()?;
    m.add_class::<PyInstance>()?;
    m.add_class::<PyArtifact>()?;
    m.add_function(wrap_pyfunction!(reduce_to_mufl, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_to_dkm, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_to_dfkm, m)?)?;
    m.add_function(wrap_pyfunction!(double_clauses, m)?)?;
    m.add_function(wrap_pyfunction!(local_search_sat, m)?)?;
    m.add_function(wrap_pyfunction!(local_search_instance, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_local_optima, m)?)?;
    m.add_function(wrap_pyfunction!(schoenberg_check, m)?)?;
    m.add_function(wrap_pyfunction!(classical_mds, m)?)?;
    Ok(())
}
