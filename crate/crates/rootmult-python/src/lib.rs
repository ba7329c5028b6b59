//! Python bindings for the `rootmult` library.
//!
//! The module mirrors the main library surface: compositions, closed posets
//! of forbidden root patterns, the (co)homology tables of their complements,
//! and the named numerical invariants. The compiled `cdylib` is importable as
//! `rootmult_py` once renamed from `librootmult_py.so` — see
//! `python/smoke_test.py` at the workspace root for a worked example.
//!
//! Error mapping: parse, argument, and validation errors raise `ValueError`;
//! internal integrity violations raise `RuntimeError`.

use std::collections::BTreeMap;
use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use rootmult::poset::PosetSpec;
use rootmult::{self as core, Parity};

fn to_py_err(e: core::Error) -> PyErr {
    match e {
        core::Error::Integrity(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// A real-root multiplicity pattern: an ordered tuple of positive integers.
#[pyclass(name = "Composition", frozen, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyComposition {
    inner: core::Composition,
}

#[pymethods]
impl PyComposition {
    /// Parse from comma-separated text, e.g. `"1,2,1"`; `""` is the empty
    /// pattern.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(|inner| Self { inner }).map_err(to_py_err)
    }

    /// Build from a list of entries, e.g. `[1, 2, 1]`.
    #[staticmethod]
    fn from_entries(entries: Vec<u32>) -> PyResult<Self> {
        core::Composition::new(entries)
            .map(|inner| Self { inner })
            .map_err(to_py_err)
    }

    fn entries(&self) -> Vec<u32> {
        self.inner.entries().to_vec()
    }

    /// Sum of the entries.
    fn norm(&self) -> u64 {
        self.inner.norm()
    }

    /// Sum of (entry - 1) over the entries.
    fn reduced_norm(&self) -> u64 {
        self.inner.reduced_norm()
    }

    /// Number of entries.
    fn support(&self) -> usize {
        self.inner.support()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Composition(\"{}\")", self.inner)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        let mut hasher = DefaultHasher::new();
        self.inner.hash(&mut hasher);
        hasher.finish()
    }
}

/// A finite closed poset of forbidden patterns at a fixed cap degree.
#[pyclass(name = "ClosedPoset", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyClosedPoset {
    inner: core::ClosedPoset,
}

#[pymethods]
impl PyClosedPoset {
    /// Materialize a spec such as `"gen:4"`, `"gen:1,2,1"`, `"redge:3,1"`,
    /// `"maxge:3"`, or `"free2"` at cap degree `d`.
    #[new]
    fn new(spec: &str, d: u64) -> PyResult<Self> {
        let spec: PosetSpec = spec.parse().map_err(to_py_err)?;
        core::ClosedPoset::from_spec(&spec, d)
            .map(|inner| Self { inner })
            .map_err(to_py_err)
    }

    /// Cap degree the poset was materialized at.
    fn d(&self) -> u64 {
        self.inner.d()
    }

    /// Canonical textual form of the defining spec.
    fn spec(&self) -> String {
        self.inner.spec().to_string()
    }

    /// All elements in canonical order.
    fn elements(&self) -> Vec<PyComposition> {
        self.inner
            .elements()
            .map(|w| PyComposition { inner: w.clone() })
            .collect()
    }

    /// Maximal elements under the merge/insert order.
    fn maximal_elements(&self) -> PyResult<Vec<PyComposition>> {
        Ok(self
            .inner
            .maximal_elements()
            .map_err(to_py_err)?
            .into_iter()
            .map(|inner| PyComposition { inner })
            .collect())
    }

    /// Basis of the complement: every same-parity pattern of norm at most
    /// `d` that is neither in the poset nor the basepoint.
    fn complement_basis(&self) -> Vec<PyComposition> {
        self.inner
            .complement_basis()
            .into_iter()
            .map(|inner| PyComposition { inner })
            .collect()
    }

    fn contains(&self, w: &PyComposition) -> bool {
        self.inner.contains(&w.inner)
    }

    /// Re-materialize the same spec at a higher cap of the same parity.
    fn extend_to_degree(&self, d: u64) -> PyResult<Self> {
        self.inner
            .extend_to_degree(d)
            .map(|inner| Self { inner })
            .map_err(to_py_err)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("ClosedPoset(\"{}\", {})", self.inner.spec(), self.inner.d())
    }
}

/// Graded (co)homology groups of a complement space, keyed by degree.
#[pyclass(name = "HomologyTable", frozen)]
struct PyHomologyTable {
    inner: core::HomologyTable,
}

#[pymethods]
impl PyHomologyTable {
    /// `"trivial"`, `"S^k"`, or `"general"`.
    fn classification(&self) -> String {
        self.inner.classification().to_string()
    }

    /// `(rank, torsion)` of the group in one degree (trivial if absent).
    fn group(&self, degree: u64) -> (usize, Vec<BigInt>) {
        let g = self.inner.group(degree);
        (g.rank, g.torsion)
    }

    /// `(degree, rank, torsion)` for every nontrivial degree, ascending.
    fn nontrivial(&self) -> Vec<(u64, usize, Vec<BigInt>)> {
        self.inner
            .nontrivial()
            .map(|(degree, g)| (degree, g.rank, g.torsion.clone()))
            .collect()
    }

    fn is_trivial(&self) -> bool {
        self.inner.is_trivial()
    }

    fn has_torsion(&self) -> bool {
        self.inner.has_torsion()
    }

    /// JSON report, identical to the CLI's `--format json` output.
    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn __str__(&self) -> String {
        self.inner.to_table_string()
    }

    fn __repr__(&self) -> String {
        format!("<HomologyTable {}>", self.inner.classification())
    }
}

/// Stabilization quantities and the verified degree range for one spec.
#[pyclass(name = "StabilityReport", frozen)]
struct PyStabilityReport {
    inner: core::StabilityReport,
}

#[pymethods]
impl PyStabilityReport {
    fn theta(&self) -> String {
        self.inner.theta.clone()
    }

    fn d(&self) -> u64 {
        self.inner.d
    }

    fn eta(&self) -> i64 {
        self.inner.eta
    }

    fn psi(&self) -> i64 {
        self.inner.psi
    }

    fn xi(&self) -> i64 {
        self.inner.xi
    }

    fn maximal(&self) -> Vec<PyComposition> {
        self.inner
            .maximal
            .iter()
            .map(|w| PyComposition { inner: w.clone() })
            .collect()
    }

    /// Degrees whose groups were compared between caps `d` and `d + 2`.
    fn verified_range(&self) -> Vec<u64> {
        self.inner.verified_range.clone()
    }

    /// `(degree, group at d, group at d + 2)` for every disagreement.
    fn failures(&self) -> Vec<(u64, String, String)> {
        self.inner
            .failures
            .iter()
            .map(|f| (f.degree, f.at_d.to_string(), f.at_d2.to_string()))
            .collect()
    }

    fn passes(&self) -> bool {
        self.inner.pass()
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "<StabilityReport {} d={} {}>",
            self.inner.theta,
            self.inner.d,
            if self.inner.pass() { "pass" } else { "fail" }
        )
    }
}

/// All same-parity compositions of norm at most `d`, in canonical order.
#[pyfunction]
#[pyo3(signature = (d, exclude_basepoint = false))]
fn enumerate_compositions(d: u64, exclude_basepoint: bool) -> Vec<PyComposition> {
    core::enumerate(d, Parity::of(d), exclude_basepoint)
        .into_iter()
        .map(|inner| PyComposition { inner })
        .collect()
}

/// Reduced integer cohomology of the complement of the poset's strata.
#[pyfunction]
fn reduced_cohomology_of_complement(theta: &PyClosedPoset) -> PyResult<PyHomologyTable> {
    core::reduced_cohomology_of_complement(&theta.inner)
        .map(|inner| PyHomologyTable { inner })
        .map_err(to_py_err)
}

/// Reduced integer homology of the complement of the poset's strata.
#[pyfunction]
fn reduced_homology_of_complement(theta: &PyClosedPoset) -> PyResult<PyHomologyTable> {
    core::reduced_homology_of_complement(&theta.inner)
        .map(|inner| PyHomologyTable { inner })
        .map_err(to_py_err)
}

/// The skeleton-stratum invariant `A(d, k, q)`. See the library
/// documentation for the parity caveat relating it to computed ranks.
#[pyfunction]
#[pyo3(signature = (d, k, q = 0))]
fn bouquet_count(d: u64, k: u64, q: u64) -> PyResult<u64> {
    core::bouquet_count(d, k, q).map_err(to_py_err)
}

/// Rank of the first homology of the two-equal-roots complement.
#[pyfunction]
fn kappa(d: u64) -> PyResult<u64> {
    core::kappa(d).map_err(to_py_err)
}

/// Expected complement cohomology ranks `{degree: rank}` for the
/// multiplicity-at-least-`k` stratum.
#[pyfunction]
fn vassiliev_ranks(d: u64, k: u64) -> PyResult<BTreeMap<u64, u64>> {
    core::vassiliev_ranks(d, k).map_err(to_py_err)
}

/// Compare complement homology at caps `d` and `d + 2` over the stable range.
#[pyfunction]
fn stability_check(spec: &str, d: u64) -> PyResult<PyStabilityReport> {
    let spec: PosetSpec = spec.parse().map_err(to_py_err)?;
    core::stability_check(&spec, d)
        .map(|inner| PyStabilityReport { inner })
        .map_err(to_py_err)
}

/// Verify the embedded sphere table up to `max_d`, with negative controls up
/// to `negative_to`. Returns `(pass, positive_rows, negative_rows)`.
#[pyfunction]
#[pyo3(signature = (max_d = 11, negative_to = 8))]
fn verify_appendix(max_d: u64, negative_to: u64) -> PyResult<(bool, usize, usize)> {
    let report =
        core::verify_appendix(core::golden_table(), max_d, negative_to).map_err(to_py_err)?;
    Ok((
        report.all_pass(),
        report.positive_count(),
        report.negative_count(),
    ))
}

#[pymodule]
fn rootmult_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyComposition>()?;
    m.add_class::<PyClosedPoset>()?;
    m.add_class::<PyHomologyTable>()?;
    m.add_class::<PyStabilityReport>()?;
    m.add_function(wrap_pyfunction!(enumerate_compositions, m)?)?;
    m.add_function(wrap_pyfunction!(reduced_cohomology_of_complement, m)?)?;
    m.add_function(wrap_pyfunction!(reduced_homology_of_complement, m)?)?;
    m.add_function(wrap_pyfunction!(bouquet_count, m)?)?;
    m.add_function(wrap_pyfunction!(kappa, m)?)?;
    m.add_function(wrap_pyfunction!(vassiliev_ranks, m)?)?;
    m.add_function(wrap_pyfunction!(stability_check, m)?)?;
    m.add_function(wrap_pyfunction!(verify_appendix, m)?)?;
    Ok(())
}
