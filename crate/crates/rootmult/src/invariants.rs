//! Numerical invariants of constrained root-multiplicity strata: bouquet
//! counts, stability quantities, and closed-form rank formulas.
//!
//! Everything in this module reduces to the combinatorial machinery of
//! [`crate::poset`], [`crate::complex`], and [`crate::homology`]; the
//! functions here package those computations into the named invariants
//! exposed by the CLI.

use std::collections::BTreeMap;
use std::fmt;

use crate::complex::GradedComplex;
use crate::composition::{enumerate, Composition, Parity};
use crate::error::{Error, Result};
use crate::homology::{reduced_homology_of_complement, AbelianGroup};
use crate::poset::{ClosedPoset, PosetSpec};

/// The poset slice `{ω : |ω|' ≥ k, q ≤ |ω| ≤ cap}` for the bouquet count.
///
/// The slice at cap `m` keeps only compositions whose norm has the parity of
/// `m`, so a lower bound `q` of the opposite parity is effectively `q + 1`.
/// The filter below applies `|ω| ≥ q` verbatim, which has the same effect.
/// The result is operation-closed: merges preserve the norm, inserts raise it
/// by two, and both raise the reduced norm, so no operation leaves the slice.
fn skeleton_slice(k: u64, q: u64, cap: u64) -> Result<ClosedPoset> {
    let parity = Parity::of(cap);
    let elements: Vec<Composition> = enumerate(cap, parity, true)
        .into_iter()
        .filter(|w| w.reduced_norm() >= k && w.norm() >= q)
        .collect();
    ClosedPoset::from_elements(cap, elements, PosetSpec::ReducedNormAtLeast { k, q })
}

/// The skeleton-stratum invariant `A(d, k, q)`: the absolute Euler number of
/// the reduced-norm slice taken over *both* norm-parity classes up to `d`.
///
/// The value is computed as the absolute difference of the Euler numbers of
/// the two cap slices at `d` and `d - 1`; the caps contribute with opposite
/// grading signs, which the subtraction absorbs. Preconditions: `1 ≤ k < d`,
/// `q ≤ d`, and a positive `q` must have the parity of `d`.
///
/// Caveat: the computed complement cohomology of the materialized
/// (single-parity) slice is concentrated in degree `k - 1` with rank equal to
/// that slice's own absolute Euler number, so `A` exceeds the computed rank
/// whenever the opposite parity class contributes a nonzero Euler number
/// (first at `d = 5`, `k = 3`, where `A = 4` against rank 3). The two agree
/// whenever `q ≥ d - 1` or `k = d - 1`.
pub fn bouquet_count(d: u64, k: u64, q: u64) -> Result<u64> {
    if k == 0 || k >= d {
        return Err(Error::InvalidArgument(format!(
            "bouquet count requires 1 <= k < d; got k = {k}, d = {d}"
        )));
    }
    if q > d {
        return Err(Error::InvalidArgument(format!(
            "bouquet count requires q <= d; got q = {q}, d = {d}"
        )));
    }
    if q > 0 && Parity::of(q) != Parity::of(d) {
        return Err(Error::InvalidArgument(format!(
            "bouquet count requires a positive q to have the parity of d; got q = {q}, d = {d}"
        )));
    }
    let chi = |cap: u64| -> Result<i64> {
        let slice = skeleton_slice(k, q, cap)?;
        if slice.is_empty() {
            return Ok(0);
        }
        Ok(GradedComplex::theta_complex(&slice)?.euler_number())
    };
    let a = chi(d)? - chi(d - 1)?;
    Ok(a.unsigned_abs())
}

/// A single degree where the homology tables at `d` and `d + 2` disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityFailure {
    /// Reduced homology degree at which the tables differ.
    pub degree: u64,
    /// Group computed at degree-`d` cap.
    pub at_d: AbelianGroup,
    /// Group computed at degree-`d + 2` cap.
    pub at_d2: AbelianGroup,
}

/// Stability quantities of a closed poset together with the outcome of the
/// range-clamped comparison of complement homology at `d` and `d + 2`.
#[derive(Clone, Debug)]
pub struct StabilityReport {
    /// Textual form of the defining spec.
    pub theta: String,
    /// Cap degree the report was computed at.
    pub d: u64,
    /// Maximal elements of the poset at cap `d`, in canonical order.
    pub maximal: Vec<Composition>,
    /// `η = max over maximal ω of (|ω| - 2|ω|')` at cap `d`.
    pub eta: i64,
    /// `ψ = (d + η) / 2` at cap `d`.
    pub psi: i64,
    /// `ξ = (d + 2) - ψ(d + 2)`, computed from the cap-`(d + 2)` poset.
    pub xi: i64,
    /// Degrees actually compared: `0 ..= min(ξ, c_d - 2, c_{d+2} - 2)` where
    /// `c_m` is the least reduced norm in the cap-`m` poset. Empty when that
    /// bound is negative.
    pub verified_range: Vec<u64>,
    /// Degrees in `verified_range` where the two tables disagree.
    pub failures: Vec<StabilityFailure>,
}

impl StabilityReport {
    /// True when no compared degree disagreed.
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let failures: Vec<serde_json::Value> = self
            .failures
            .iter()
            .map(|f| {
                serde_json::json!({
                    "degree": f.degree,
                    "atD": f.at_d.to_json(),
                    "atD2": f.at_d2.to_json(),
                })
            })
            .collect();
        serde_json::json!({
            "theta": self.theta,
            "d": self.d,
            "maximal": self.maximal.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "eta": self.eta,
            "psi": self.psi,
            "xi": self.xi,
            "verifiedRange": self.verified_range,
            "failures": failures,
            "pass": self.pass(),
        })
    }
}

impl fmt::Display for StabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "theta: {}", self.theta)?;
        writeln!(f, "d: {}", self.d)?;
        let maximal: Vec<String> = self.maximal.iter().map(|w| w.to_string()).collect();
        writeln!(f, "maximal: {}", maximal.join("  "))?;
        writeln!(f, "eta: {}", self.eta)?;
        writeln!(f, "psi: {}", self.psi)?;
        writeln!(f, "xi(d+2): {}", self.xi)?;
        match (self.verified_range.first(), self.verified_range.last()) {
            (Some(lo), Some(hi)) => writeln!(f, "verified range: {lo}..={hi}")?,
            _ => writeln!(f, "verified range: empty")?,
        }
        if self.failures.is_empty() {
            write!(f, "failures: none")?;
        } else {
            write!(f, "failures:")?;
            for failure in &self.failures {
                write!(
                    f,
                    "\n  degree {}: {} at d, {} at d+2",
                    failure.degree, failure.at_d, failure.at_d2
                )?;
            }
        }
        Ok(())
    }
}

fn eta_of(maximal: &[Composition]) -> i64 {
    maximal
        .iter()
        .map(|w| w.norm() as i64 - 2 * w.reduced_norm() as i64)
        .max()
        .expect("eta over a nonempty maximal set")
}

/// `η`, `ψ`, and `ξ` of a nonempty closed poset.
///
/// `η` and `ψ` are computed at the poset's own cap; `ξ` is computed at cap
/// `d + 2` from the extended poset. The top chamber forces `ψ = d` whenever
/// `(1^d)` belongs to the poset, in which case the stable range is void and
/// this function reports a validation error.
pub fn eta_psi_xi(theta: &ClosedPoset) -> Result<(i64, i64, i64)> {
    let maximal = theta.maximal_elements()?;
    let eta = eta_of(&maximal);
    let d = theta.d() as i64;
    debug_assert_eq!((d + eta).rem_euclid(2), 0);
    let psi = (d + eta) / 2;
    if psi >= d {
        return Err(Error::Validation(format!(
            "psi = {psi} is not below d = {d}; the poset reaches the top chamber and has no stable range"
        )));
    }
    let extended = theta.extend_to_degree(theta.d() + 2)?;
    let maximal2 = extended.maximal_elements()?;
    let psi2 = (d + 2 + eta_of(&maximal2)) / 2;
    Ok((eta, psi, d + 2 - psi2))
}

fn min_reduced_norm(theta: &ClosedPoset) -> i64 {
    theta
        .elements()
        .map(|w| w.reduced_norm() as i64)
        .min()
        .expect("minimum over a nonempty poset")
}

/// Compare reduced complement homology at caps `d` and `d + 2` on the
/// degree range where agreement is guaranteed.
///
/// The poset at cap `d + 2` is rebuilt from the spec: for a pure-generator
/// spec this coincides with [`ClosedPoset::extend_to_degree`], while predicate
/// specs re-materialize and may acquire new elements. The compared range is
/// clamped by the connectivity bounds `c_m - 2` of both caps on top of the
/// printed bound `ξ`; degrees outside it are not compared.
pub fn stability_check(spec: &PosetSpec, d: u64) -> Result<StabilityReport> {
    spec.validate()?;
    let theta_d = ClosedPoset::from_spec(spec, d)?;
    let theta_d2 = ClosedPoset::from_spec(spec, d + 2)?;
    if theta_d.is_empty() || theta_d2.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "stability check requires nonempty posets at degrees {d} and {}; got sizes {} and {}",
            d + 2,
            theta_d.len(),
            theta_d2.len()
        )));
    }

    let maximal = theta_d.maximal_elements()?;
    let eta = eta_of(&maximal);
    let psi = (d as i64 + eta) / 2;
    let maximal2 = theta_d2.maximal_elements()?;
    let psi2 = (d as i64 + 2 + eta_of(&maximal2)) / 2;
    let xi = d as i64 + 2 - psi2;

    let upper = xi.min(min_reduced_norm(&theta_d) - 2).min(min_reduced_norm(&theta_d2) - 2);
    let verified_range: Vec<u64> = if upper < 0 { Vec::new() } else { (0..=upper as u64).collect() };

    let mut failures = Vec::new();
    if !verified_range.is_empty() {
        let table_d = reduced_homology_of_complement(&theta_d)?;
        let table_d2 = reduced_homology_of_complement(&theta_d2)?;
        for &j in &verified_range {
            let at_d = table_d.group(j);
            let at_d2 = table_d2.group(j);
            if at_d != at_d2 {
                failures.push(StabilityFailure { degree: j, at_d, at_d2 });
            }
        }
    }

    Ok(StabilityReport {
        theta: spec.to_string(),
        d,
        maximal,
        eta,
        psi,
        xi,
        verified_range,
        failures,
    })
}

/// Grading comparison of the two cap complexes themselves across `d` and
/// `d + 2`, experimental.
///
/// Unlike [`stability_check`], which compares complement homology, this
/// compares the raw graded homology of the defining complexes, matching
/// grading `g` at cap `d` with `g + 2` at cap `d + 2` (equal reduced norm).
/// The translation between this grading and the geometric one is unverified,
/// so the report is informational and carries no pass/fail verdict.
#[derive(Clone, Debug)]
pub struct ThetaShiftReport {
    /// Textual form of the defining spec.
    pub theta: String,
    /// Cap degree of the smaller complex.
    pub d: u64,
    /// Threshold `ψ(d + 2) - 1` suggested by the conjectural range.
    pub threshold: i64,
    /// Per-grading comparison: `(g, group at d, group at d + 2, equal)`.
    pub rows: Vec<(u64, AbelianGroup, AbelianGroup, bool)>,
}

impl ThetaShiftReport {
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|(g, at_d, at_d2, equal)| {
                serde_json::json!({
                    "grading": g,
                    "atD": at_d.to_json(),
                    "atD2": at_d2.to_json(),
                    "equal": equal,
                })
            })
            .collect();
        serde_json::json!({
            "theta": self.theta,
            "d": self.d,
            "threshold": self.threshold,
            "rows": rows,
            "experimental": true,
        })
    }
}

impl fmt::Display for ThetaShiftReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "experimental shift comparison for {} at d = {} (conjectural from grading {}):",
            self.theta, self.d, self.threshold
        )?;
        for (g, at_d, at_d2, equal) in &self.rows {
            let mark = if *equal { "=" } else { "!" };
            writeln!(f, "  g={g}: {at_d} vs {at_d2} [{mark}]")?;
        }
        write!(f, "note: the grading dictionary is unverified; no verdict is implied")
    }
}

/// Compare `H_g` of the cap-`d` complex with `H_{g+2}` of the cap-`(d + 2)`
/// complex, for all gradings `g ≤ d`. Experimental; see [`ThetaShiftReport`].
pub fn theta_shift_comparison(spec: &PosetSpec, d: u64) -> Result<ThetaShiftReport> {
    spec.validate()?;
    let theta_d = ClosedPoset::from_spec(spec, d)?;
    let theta_d2 = ClosedPoset::from_spec(spec, d + 2)?;
    if theta_d.is_empty() || theta_d2.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "shift comparison requires nonempty posets at degrees {d} and {}",
            d + 2
        )));
    }
    let groups_d = crate::homology::homology(&GradedComplex::theta_complex(&theta_d)?)?;
    let groups_d2 = crate::homology::homology(&GradedComplex::theta_complex(&theta_d2)?)?;
    let maximal2 = theta_d2.maximal_elements()?;
    let threshold = (d as i64 + 2 + eta_of(&maximal2)) / 2 - 1;
    let rows = (0..=d)
        .map(|g| {
            let at_d = groups_d.get(g as usize).cloned().unwrap_or_default();
            let at_d2 = groups_d2.get(g as usize + 2).cloned().unwrap_or_default();
            let equal = at_d == at_d2;
            (g, at_d, at_d2, equal)
        })
        .collect();
    Ok(ThetaShiftReport { theta: spec.to_string(), d, threshold, rows })
}

/// Rank of the first reduced complement homology group of the free-square
/// stratum complement: `κ(d) = d(d - 2)/4` for even `d`, `(d - 1)²/4` for
/// odd `d`. Requires `d ≥ 3`.
pub fn kappa(d: u64) -> Result<u64> {
    if d < 3 {
        return Err(Error::InvalidArgument(format!("kappa requires d >= 3; got d = {d}")));
    }
    Ok(if d % 2 == 0 { d * (d - 2) / 4 } else { (d - 1) * (d - 1) / 4 })
}

/// Degrees and ranks of the reduced complement homology of the stratum of
/// polynomials with a root of multiplicity at least `k`: rank one in each
/// degree `(k - 2)·m` for `m = 1, ..., ⌊d/k⌋`, and zero elsewhere.
///
/// Requires `k ≥ 3` (the boundary cases `k ≤ 2` follow different formulas
/// and are unsupported here) and `d ≥ k`.
pub fn vassiliev_ranks(d: u64, k: u64) -> Result<BTreeMap<u64, u64>> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!(
            "vassiliev ranks require k >= 3; got k = {k}"
        )));
    }
    if d < k {
        return Err(Error::InvalidArgument(format!(
            "vassiliev ranks require d >= k; got d = {d}, k = {k}"
        )));
    }
    Ok((1..=d / k).map(|m| ((k - 2) * m, 1)).collect())
}
