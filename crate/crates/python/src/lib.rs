//! Python bindings for `gamma_mirror`.
//!
//! Exact values cross the boundary as strings (`"5"`, `"-40*zeta3"`,
//! `"3/2"`) so nothing is rounded on the way.

use std::collections::BTreeMap;
use std::path::PathBuf;

use gamma_mirror::gammaseq::{gamma_mult_seq, gamma_seq_calabi_yau, MultSeqPolynomial};
use gamma_mirror::input::PolytopeInput;
use gamma_mirror::periods::{derivative_at_origin, exponent_vectors, gamma_coeff_series, period_coefficient};
use gamma_mirror::toric::{LatticePolytope, ToricModel};
use gamma_mirror::verify::{grassmannian_ratio_check, integral_by_key, VerificationReport, Verifier};
use gamma_mirror::Error;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(_) => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn key(m: &[u32]) -> String {
    m.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

/// Smooth Fano toric variety with its anticanonical Calabi-Yau hypersurface.
#[pyclass(module = "gamma_mirror_py", frozen)]
struct Model {
    inner: ToricModel,
    input: Option<PolytopeInput>,
    name: String,
}

#[pymethods]
impl Model {
    /// Builds a model from polytope vertices, optionally fixing the Mori basis.
    #[new]
    #[pyo3(signature = (vertices, mori_basis=None, name=None))]
    fn new(vertices: Vec<Vec<i64>>, mori_basis: Option<Vec<Vec<i64>>>, name: Option<String>) -> PyResult<Self> {
        let dim = vertices.first().map_or(0, Vec::len);
        let polytope = LatticePolytope::new(dim, vertices).map_err(to_py)?;
        let inner = ToricModel::from_polytope(polytope, None, mori_basis.as_deref()).map_err(to_py)?;
        Ok(Self { inner, input: None, name: name.unwrap_or_else(|| "polytope".into()) })
    }

    /// Reads a TOML or JSON polytope file, keeping its stored expected values.
    #[staticmethod]
    fn from_file(path: PathBuf) -> PyResult<Self> {
        let input = PolytopeInput::read(&path).map_err(to_py)?;
        let inner = input.model().map_err(to_py)?;
        let name = input.name.clone().unwrap_or_else(|| path.display().to_string());
        Ok(Self { inner, input: Some(input), name })
    }

    #[staticmethod]
    fn projective_space(d: usize) -> PyResult<Self> {
        let inner = ToricModel::projective_space(d).map_err(to_py)?;
        Ok(Self { inner, input: None, name: format!("P^{d}") })
    }

    #[getter]
    fn name(&self) -> &str {
        &self.name
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn cy_dim(&self) -> usize {
        self.inner.cy_dim()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn mori_basis(&self) -> Vec<Vec<i64>> {
        self.inner.mori().vectors().to_vec()
    }

    fn betti_numbers(&self) -> Vec<usize> {
        self.inner.ring().betti_numbers()
    }

    /// `c_1..c_d` of the hypersurface as strings in the divisors `D1..Dp`.
    fn chern_classes(&self) -> Vec<String> {
        self.inner.chern().classes().iter().map(|c| self.inner.ring().reduce(c).to_string()).collect()
    }

    /// `int_V J_{i1} ... J_{in}` with 1-based indices.
    fn coupling(&self, indices: Vec<usize>) -> PyResult<String> {
        Ok(self.inner.coupling(&indices).map_err(to_py)?.to_string())
    }

    fn couplings(&self) -> PyResult<BTreeMap<String, String>> {
        let t = self.inner.coupling_tensor().map_err(to_py)?;
        Ok(t.into_iter().map(|(k, v)| (k, v.to_string())).collect())
    }

    /// `int_V` of a product such as `"c2*J1"` or `"c2^2"`.
    fn integral(&self, key: &str) -> PyResult<String> {
        Ok(integral_by_key(&self.inner, key).map_err(to_py)?.to_string())
    }

    /// Period coefficients for `|m| <= order`, keyed by `"m1,m2,..."`.
    fn period_coefficients(&self, order: u32) -> BTreeMap<String, String> {
        let mb = self.inner.mori();
        exponent_vectors(mb.rank(), order)
            .into_iter()
            .map(|m| (key(&m), period_coefficient(mb, &m).to_string()))
            .filter(|(_, v)| v != "0")
            .collect()
    }

    /// Nonzero coefficients of the Gamma-coefficient series through `order`.
    fn gamma_coefficients(&self, order: u32) -> PyResult<BTreeMap<String, String>> {
        let g = gamma_coeff_series(self.inner.mori(), order).map_err(to_py)?;
        Ok(g.series().terms().map(|(e, c)| (key(&e.0), c.to_string())).collect())
    }

    /// `d^k c / d rho_{j1} ... d rho_{jk}` at the origin, 1-based indices.
    #[pyo3(signature = (indices, order=None))]
    fn derivative(&self, indices: Vec<usize>, order: Option<u32>) -> PyResult<String> {
        let order = order.unwrap_or(indices.len() as u32);
        let g = gamma_coeff_series(self.inner.mori(), order).map_err(to_py)?;
        Ok(derivative_at_origin(&g, &indices).map_err(to_py)?.to_string())
    }

    /// Runs every exact check; stored expected values are included when the
    /// model came from a file.
    #[pyo3(signature = (order=None, digits=30))]
    fn verify(&self, order: Option<u32>, digits: u32) -> PyResult<Report> {
        let order = order.unwrap_or(self.inner.dim() as u32 + 2);
        let mut v = Verifier::new(&self.inner, order, digits).map_err(to_py)?;
        let expected = self.input.as_ref().map(|i| &i.expected).filter(|e| !e.is_empty());
        let report = v.run_all(&self.name, expected).map_err(to_py)?;
        Ok(Report { inner: report })
    }

    fn __repr__(&self) -> String {
        format!("Model({:?}, dim={}, rank={})", self.name, self.inner.dim(), self.inner.rank())
    }
}

#[pyclass(module = "gamma_mirror_py", frozen)]
struct Report {
    inner: VerificationReport,
}

#[pymethods]
impl Report {
    #[getter]
    fn all_exact(&self) -> bool {
        self.inner.all_exact
    }

    /// `(id, lhs, rhs, exact_match)` for each check.
    #[getter]
    fn entries(&self) -> Vec<(String, String, String, bool)> {
        self.inner.entries.iter().map(|e| (e.id.clone(), e.lhs.clone(), e.rhs.clone(), e.exact_match)).collect()
    }

    fn failures(&self) -> Vec<String> {
        self.inner.failures().iter().map(|e| e.id.clone()).collect()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn to_table(&self) -> String {
        self.inner.to_table()
    }

    fn __len__(&self) -> usize {
        self.inner.entries.len()
    }
}

/// `Q_1..Q_d` of the Gamma sequence (or `Q_2..Q_d` with `c_1 = 0`).
#[pyfunction]
#[pyo3(signature = (d, calabi_yau=false))]
fn gamma_polynomials(d: usize, calabi_yau: bool) -> PyResult<Vec<String>> {
    let start = if calabi_yau { 2 } else { 1 };
    (start..=d)
        .map(|k| if calabi_yau { gamma_seq_calabi_yau(k) } else { gamma_mult_seq(k) })
        .map(|q| q.map(|q: MultSeqPolynomial| q.to_string()))
        .collect::<Result<_, _>>()
        .map_err(to_py)
}

/// Rows `(m, ratio, matches_squared_candidate)` of the Grassmannian comparison.
#[pyfunction]
#[pyo3(signature = (n=10))]
fn grassmannian(n: u32) -> PyResult<Vec<(u32, String, bool)>> {
    let rep = grassmannian_ratio_check(n).map_err(to_py)?;
    Ok(rep.rows.into_iter().map(|r| (r.m, r.ratio, r.matches_squared)).collect())
}

#[pymodule]
fn gamma_mirror_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Model>()?;
    m.add_class::<Report>()?;
    m.add_function(wrap_pyfunction!(gamma_polynomials, m)?)?;
    m.add_function(wrap_pyfunction!(grassmannian, m)?)?;
    Ok(())
}
