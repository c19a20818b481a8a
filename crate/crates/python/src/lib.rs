//! Python bindings: manifolds, abelian groups, cup forms, verdicts and the
//! Smith normal form.

use graphfold::cli::{self, build_report};
use graphfold::cupring::{self, CupForm as CoreCupForm};
use graphfold::homology;
use graphfold::intlat::{self, CoefficientRing, FgAbelianGroup, IntMatrix};
use graphfold::manifold::{self, ManifoldExpr};
use graphfold::roundmap::{self, Verdict};
use graphfold::selftest;
use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

pub fn parse_ring(coeff: &str) -> Result<CoefficientRing, String> {
    coeff.parse().map_err(|e: cli::CliError| e.to_string())
}

/// Finitely generated abelian group `Z^rank ⊕ Z/t₁ ⊕ … ⊕ Z/tₖ`, `t₁ | … | tₖ`.
#[pyclass(name = "Group", module = "graphfold", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyGroup(FgAbelianGroup);

#[pymethods]
impl PyGroup {
    #[new]
    #[pyo3(signature = (rank, orders = Vec::new()))]
    fn new(rank: usize, orders: Vec<BigInt>) -> Self {
        Self(FgAbelianGroup::from_cyclic(rank, orders))
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    #[getter]
    fn torsion(&self) -> Vec<BigInt> {
        self.0.torsion().to_vec()
    }

    fn is_trivial(&self) -> bool {
        self.0.is_trivial()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Group({})", self.0)
    }
}

/// A closed graph manifold: a circle bundle, a connected sum or a plumbing.
#[pyclass(name = "Manifold", module = "graphfold", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyManifold(ManifoldExpr);

#[pymethods]
impl PyManifold {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        manifold::parse(text).map(Self).map_err(value_error)
    }

    #[staticmethod]
    fn bundle(genus: u32, euler: i64) -> Self {
        Self(ManifoldExpr::bundle(genus, euler))
    }

    #[staticmethod]
    fn sum(parts: Vec<PyManifold>) -> PyResult<Self> {
        ManifoldExpr::sum(parts.into_iter().map(|p| p.0).collect())
            .map(Self)
            .map_err(value_error)
    }

    /// The same manifold written as an explicit plumbing (bundles only).
    fn lower(&self) -> PyResult<Self> {
        let (g, e) = self
            .0
            .euler_of_bundle()
            .ok_or_else(|| value_error("only circle bundles can be lowered"))?;
        Ok(Self(manifold::lower_bundle(g, e)))
    }

    /// Integral homology `[H0, H1, H2, H3]`.
    fn homology(&self) -> Vec<PyGroup> {
        homology::homology(&self.0)
            .groups
            .into_iter()
            .map(PyGroup)
            .collect()
    }

    /// Integral cohomology `[H^0, H^1, H^2, H^3]`.
    fn cohomology(&self) -> Vec<PyGroup> {
        homology::derived_groups(&homology::homology(&self.0))
            .into_iter()
            .map(PyGroup)
            .collect()
    }

    /// Degree-one cup products over `z`, `q` or `mod:<p>`.
    #[pyo3(signature = (coeff = "z"))]
    fn cup_form(&self, coeff: &str) -> PyResult<PyCupForm> {
        let ring = parse_ring(coeff).map_err(value_error)?;
        cupring::cup_form(&self.0, ring)
            .map(PyCupForm)
            .map_err(value_error)
    }

    fn classify(&self) -> PyVerdict {
        PyVerdict(roundmap::classify(&self.0))
    }

    /// Full report as a JSON string.
    #[pyo3(signature = (coeff = "z"))]
    fn report_json(&self, coeff: &str) -> PyResult<String> {
        let ring = parse_ring(coeff).map_err(value_error)?;
        serde_json::to_string(&build_report(&self.0, ring)).map_err(value_error)
    }

    fn render(&self) -> String {
        self.0.render()
    }

    fn __str__(&self) -> String {
        self.0.render()
    }

    fn __repr__(&self) -> String {
        format!("Manifold('{}')", self.0.render())
    }
}

#[pyclass(name = "CupForm", module = "graphfold", frozen)]
pub struct PyCupForm(CoreCupForm);

#[pymethods]
impl PyCupForm {
    #[getter]
    fn basis(&self) -> Vec<String> {
        self.0.basis.clone()
    }

    /// The group `H^2` products land in.
    #[getter]
    fn ambient(&self) -> PyGroup {
        PyGroup(self.0.ambient.clone())
    }

    /// Coordinates of `x ∪ y` in `ambient`, free part first.
    fn product(&self, x: &str, y: &str) -> PyResult<Vec<BigInt>> {
        let index = |l: &str| {
            self.0
                .index_of(l)
                .ok_or_else(|| value_error(format!("no basis class {l}")))
        };
        Ok(self.0.get(index(x)?, index(y)?).coordinates())
    }

    /// Subgroup of `H^2` generated by all products.
    fn image(&self) -> PyGroup {
        PyGroup(cupring::cup_image(&self.0))
    }

    fn is_zero(&self) -> bool {
        self.0.nonzero_pair().is_none()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyclass(name = "Verdict", module = "graphfold", frozen)]
pub struct PyVerdict(Verdict);

#[pymethods]
impl PyVerdict {
    /// `"admits_directed"`, `"no_directed"` or `"unknown"`.
    #[getter]
    fn kind(&self) -> &'static str {
        match self.0 {
            Verdict::AdmitsDirected { .. } => "admits_directed",
            Verdict::NoDirected { .. } => "no_directed",
            Verdict::Unknown => "unknown",
        }
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(value_error)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// Smith normal form of an integer matrix: `(U, D, V)` with `U·A·V = D`.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn snf(rows: Vec<Vec<BigInt>>) -> PyResult<(Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, Vec<Vec<BigInt>>)> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    let a = IntMatrix::new(r, c, rows.into_iter().flatten().collect()).map_err(value_error)?;
    let dec = intlat::snf(&a);
    let nested = |m: &IntMatrix| (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    Ok((nested(&dec.u), nested(&dec.d), nested(&dec.v)))
}

/// The comparison pair for index `k` as a JSON report.
#[pyfunction]
fn family_json(k: i64) -> PyResult<String> {
    let r = cli::family(k).map_err(value_error)?;
    serde_json::to_string(&r).map_err(value_error)
}

/// Runs the built-in suites; returns `(passed, lines)`.
#[pyfunction]
#[pyo3(signature = (quick = true, seed = selftest::DEFAULT_SEED))]
fn run_selftest(quick: bool, seed: u64) -> (bool, Vec<String>) {
    let results = selftest::run(seed, quick);
    (
        results.iter().all(|r| r.passed),
        results.iter().map(|r| r.to_string()).collect(),
    )
}

#[pymodule]
#[pyo3(name = "graphfold")]
fn graphfold_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_class::<PyManifold>()?;
    m.add_class::<PyCupForm>()?;
    m.add_class::<PyVerdict>()?;
    m.add_function(wrap_pyfunction!(snf, m)?)?;
    m.add_function(wrap_pyfunction!(family_json, m)?)?;
    m.add_function(wrap_pyfunction!(run_selftest, m)?)?;
    Ok(())
}
