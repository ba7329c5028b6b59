//! The reference table of homologically nontrivial single-generator strata
//! complements for 4 ≤ d ≤ 13, and a verifier that recomputes every row.
//!
//! Each table row records that `P_d^{c⟨ω⟩}` is an integer homology sphere of
//! the stated degree (with a flag for the rows known to be homotopy spheres;
//! homology cannot distinguish the refinement, so the verifier checks the
//! sphere degree only). The verifier also runs a negative control: in low
//! degrees, every single-generator poset *not* listed must have a trivial
//! complement.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use once_cell::sync::Lazy;
use rayon::prelude::*;
use serde::Deserialize;

use crate::composition::{enumerate, Composition, Parity};
use crate::error::{Error, Result};
use crate::homology::{reduced_cohomology_of_complement, Classification, HomologyTable};
use crate::poset::{ClosedPoset, PosetSpec};

/// One row of the reference table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppendixEntry {
    /// Polynomial degree the row is stated at.
    pub d: u64,
    /// Generator of the forbidden poset `⟨ω⟩`.
    pub omega: Composition,
    /// The complement is an integer homology sphere of this degree.
    pub sphere_degree: u64,
    /// True when the row is moreover known to be a homotopy sphere.
    pub homotopy_refined: bool,
}

const TABLE_JSON: &str = include_str!("../data/appendix_table.json");

static GOLDEN: Lazy<Vec<AppendixEntry>> =
    Lazy::new(|| parse_table(TABLE_JSON).expect("embedded reference table is valid"));

/// The embedded reference table, all 158 rows.
pub fn golden_table() -> &'static [AppendixEntry] {
    &GOLDEN
}

/// Parse and validate a reference table from its JSON form: an array of
/// objects with fields `d`, `omega`, `sphereDegree`, `homotopyRefined`.
pub fn parse_table(json: &str) -> Result<Vec<AppendixEntry>> {
    #[derive(Deserialize)]
    #[serde(rename_all = "camelCase", deny_unknown_fields)]
    struct Raw {
        d: u64,
        omega: String,
        sphere_degree: u64,
        homotopy_refined: bool,
    }

    let raws: Vec<Raw> = serde_json::from_str(json)
        .map_err(|e| Error::Parse(format!("reference table: {e}")))?;
    let mut entries = Vec::with_capacity(raws.len());
    let mut seen = BTreeSet::new();
    for raw in raws {
        let omega: Composition = raw.omega.parse()?;
        if !(4..=13).contains(&raw.d) {
            return Err(Error::Validation(format!(
                "reference table row ({omega}): d = {} outside 4..=13",
                raw.d
            )));
        }
        if raw.sphere_degree >= raw.d {
            return Err(Error::Validation(format!(
                "reference table row (d = {}, {omega}): sphere degree {} not below d",
                raw.d, raw.sphere_degree
            )));
        }
        if omega.norm() > raw.d || Parity::of(omega.norm()) != Parity::of(raw.d) {
            return Err(Error::Validation(format!(
                "reference table row (d = {}, {omega}): norm {} invalid at that degree",
                raw.d,
                omega.norm()
            )));
        }
        if omega.is_basepoint(Parity::of(raw.d)) {
            return Err(Error::Validation(format!(
                "reference table row (d = {}, {omega}): basepoint pattern is not a generator",
                raw.d
            )));
        }
        if !seen.insert((raw.d, omega.clone())) {
            return Err(Error::Validation(format!(
                "reference table row (d = {}, {omega}): duplicate",
                raw.d
            )));
        }
        entries.push(AppendixEntry {
            d: raw.d,
            omega,
            sphere_degree: raw.sphere_degree,
            homotopy_refined: raw.homotopy_refined,
        });
    }
    Ok(entries)
}

/// Expected outcome and computed result for one verified (d, ω) pair.
#[derive(Clone, Debug)]
pub struct VerificationRow {
    pub d: u64,
    pub omega: Composition,
    /// Expected sphere degree; `None` for negative-control rows, which must
    /// come out trivial.
    pub expected: Option<u64>,
    /// Homotopy-refinement flag carried over from the table (informational).
    pub homotopy_refined: Option<bool>,
    pub computed: Classification,
    pub pass: bool,
    /// The full computed table, retained only when the row fails.
    pub table: Option<HomologyTable>,
}

impl VerificationRow {
    fn expected_label(&self) -> String {
        match (self.expected, self.homotopy_refined) {
            (Some(k), Some(true)) => format!("S^{k}*"),
            (Some(k), _) => format!("S^{k}"),
            (None, _) => "trivial".to_string(),
        }
    }
}

/// Outcome of verifying the reference table up to a degree bound.
#[derive(Clone, Debug)]
pub struct AppendixReport {
    pub max_d: u64,
    /// Highest degree the negative control ran at.
    pub negative_to: u64,
    /// All verified rows, sorted by (d, ω).
    pub rows: Vec<VerificationRow>,
}

impl AppendixReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|row| row.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerificationRow> {
        self.rows.iter().filter(|row| !row.pass)
    }

    pub fn positive_count(&self) -> usize {
        self.rows.iter().filter(|row| row.expected.is_some()).count()
    }

    pub fn negative_count(&self) -> usize {
        self.rows.iter().filter(|row| row.expected.is_none()).count()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut value = serde_json::json!({
                    "d": row.d,
                    "omega": row.omega.to_string(),
                    "expected": row.expected,
                    "homotopyRefined": row.homotopy_refined,
                    "computed": row.computed.to_string(),
                    "pass": row.pass,
                });
                if let Some(table) = &row.table {
                    value["table"] = table.to_json();
                }
                value
            })
            .collect();
        serde_json::json!({
            "maxD": self.max_d,
            "negativeTo": self.negative_to,
            "positiveRows": self.positive_count(),
            "negativeRows": self.negative_count(),
            "pass": self.all_pass(),
            "rows": rows,
        })
    }

    /// CSV rows (no header): d, omega, expected, computed, status.
    pub fn to_csv_rows(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|row| {
                let omega = row.omega.to_string();
                let quoted = if omega.contains(',') { format!("\"{omega}\"") } else { omega };
                format!(
                    "{},{quoted},{},{},{}",
                    row.d,
                    row.expected_label(),
                    row.computed,
                    if row.pass { "PASS" } else { "FAIL" }
                )
            })
            .collect()
    }

    /// Human-readable verification table. Failed rows carry the computed
    /// homology below them.
    pub fn to_table_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "reference table verification, d <= {} (negative control to d = {})",
            self.max_d, self.negative_to
        );
        let _ = writeln!(out, "{:>3}  {:<24} {:<10} {:<10} {}", "d", "omega", "expected", "computed", "status");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{:>3}  {:<24} {:<10} {:<10} {}",
                row.d,
                row.omega.to_string(),
                row.expected_label(),
                row.computed.to_string(),
                if row.pass { "PASS" } else { "FAIL" }
            );
            if let Some(table) = &row.table {
                for line in table.to_table_string().lines() {
                    let _ = writeln!(out, "       {line}");
                }
            }
        }
        let _ = writeln!(
            out,
            "{} positive rows, {} negative-control rows",
            self.positive_count(),
            self.negative_count()
        );
        let _ = write!(out, "result: {}", if self.all_pass() { "PASS" } else { "FAIL" });
        out
    }
}

/// Recompute every table row with `d ≤ max_d` and run the negative control
/// for `d ≤ min(max_d, negative_to)`.
///
/// Positive rows pass when the computed classification is a sphere of the
/// stated degree; negative rows (single-generator posets absent from the
/// table) pass when the complement is homologically trivial. Rows are
/// verified independently (and in parallel when a rayon pool is configured)
/// and reported sorted by (d, ω). Requires `4 ≤ max_d ≤ 13`.
pub fn verify_appendix(
    table: &[AppendixEntry],
    max_d: u64,
    negative_to: u64,
) -> Result<AppendixReport> {
    if !(4..=13).contains(&max_d) {
        return Err(Error::InvalidArgument(format!(
            "appendix verification requires 4 <= max_d <= 13; got {max_d}"
        )));
    }
    let negative_to = negative_to.min(max_d);

    let mut expected: BTreeMap<(u64, Composition), (u64, bool)> = BTreeMap::new();
    for entry in table {
        if expected
            .insert((entry.d, entry.omega.clone()), (entry.sphere_degree, entry.homotopy_refined))
            .is_some()
        {
            return Err(Error::Validation(format!(
                "reference table row (d = {}, {}): duplicate",
                entry.d, entry.omega
            )));
        }
    }

    // Jobs: (d, omega, expectation). BTreeMap iteration makes them sorted.
    let mut jobs: Vec<(u64, Composition, Option<(u64, bool)>)> = Vec::new();
    for ((d, omega), &(degree, refined)) in &expected {
        if *d <= max_d {
            jobs.push((*d, omega.clone(), Some((degree, refined))));
        }
    }
    for d in 4..=negative_to {
        for omega in enumerate(d, Parity::of(d), true) {
            if !expected.contains_key(&(d, omega.clone())) {
                jobs.push((d, omega, None));
            }
        }
    }
    jobs.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));

    let rows: Result<Vec<VerificationRow>> = jobs
        .into_par_iter()
        .map(|(d, omega, expectation)| {
            let spec = PosetSpec::Generators(vec![omega.clone()]);
            let theta = ClosedPoset::from_spec(&spec, d)?;
            let table = reduced_cohomology_of_complement(&theta)?;
            let computed = table.classification();
            let pass = match expectation {
                Some((degree, _)) => computed == Classification::Sphere(degree),
                None => computed == Classification::Trivial,
            };
            Ok(VerificationRow {
                d,
                omega,
                expected: expectation.map(|(degree, _)| degree),
                homotopy_refined: expectation.map(|(_, refined)| refined),
                computed,
                pass,
                table: if pass { None } else { Some(table) },
            })
        })
        .collect();

    Ok(AppendixReport { max_d, negative_to, rows: rows? })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_table_shape() {
        let table = golden_table();
        assert_eq!(table.len(), 158);
        let mut per_degree = BTreeMap::new();
        for entry in table {
            *per_degree.entry(entry.d).or_insert(0usize) += 1;
        }
        let expected: BTreeMap<u64, usize> = BTreeMap::from([
            (4, 3),
            (5, 2),
            (6, 4),
            (7, 3),
            (8, 9),
            (9, 9),
            (10, 13),
            (11, 18),
            (12, 41),
            (13, 56),
        ]);
        assert_eq!(per_degree, expected);
    }

    #[test]
    fn refinement_tracks_large_reduced_norm() {
        // Every row with reduced norm at least three is homotopy-refined and
        // no row below that is; a transcription slip would likely break this.
        for entry in golden_table() {
            assert_eq!(
                entry.homotopy_refined,
                entry.omega.reduced_norm() >= 3,
                "d = {}, omega = {}",
                entry.d,
                entry.omega
            );
        }
    }

    #[test]
    fn parse_rejects_bad_rows() {
        let bad_degree = r#"[{"d": 3, "omega": "1,1", "sphereDegree": 0, "homotopyRefined": false}]"#;
        assert!(matches!(parse_table(bad_degree), Err(Error::Validation(_))));

        let bad_sphere = r#"[{"d": 4, "omega": "1,1", "sphereDegree": 4, "homotopyRefined": false}]"#;
        assert!(matches!(parse_table(bad_sphere), Err(Error::Validation(_))));

        let bad_parity = r#"[{"d": 4, "omega": "1,1,1", "sphereDegree": 0, "homotopyRefined": false}]"#;
        assert!(matches!(parse_table(bad_parity), Err(Error::Validation(_))));

        let duplicate = r#"[
            {"d": 4, "omega": "1,1", "sphereDegree": 0, "homotopyRefined": false},
            {"d": 4, "omega": "1,1", "sphereDegree": 0, "homotopyRefined": false}
        ]"#;
        assert!(matches!(parse_table(duplicate), Err(Error::Validation(_))));

        let not_json = "[{";
        assert!(matches!(parse_table(not_json), Err(Error::Parse(_))));
    }

    #[test]
    fn verify_low_degrees() {
        let report = verify_appendix(golden_table(), 5, 8).unwrap();
        assert!(report.all_pass(), "{}", report.to_table_string());
        assert_eq!(report.positive_count(), 5);
        // Negative control at d = 4: seven unlisted generators; at d = 5:
        // eighteen.
        assert_eq!(report.negative_count(), 25);
        assert!(report.rows.windows(2).all(|w| (w[0].d, &w[0].omega) < (w[1].d, &w[1].omega)));
    }

    #[test]
    fn verify_detects_a_wrong_row() {
        let mut table = vec![AppendixEntry {
            d: 4,
            omega: "4".parse().unwrap(),
            sphere_degree: 1,
            homotopy_refined: true,
        }];
        let report = verify_appendix(&table, 4, 0).unwrap();
        assert!(!report.all_pass());
        let failure = report.failures().next().unwrap();
        assert_eq!(failure.computed, Classification::Sphere(2));
        assert!(failure.table.is_some());

        table[0].sphere_degree = 2;
        let report = verify_appendix(&table, 4, 0).unwrap();
        assert!(report.all_pass());
    }

    #[test]
    fn negative_control_catches_spurious_nontriviality() {
        // An empty expected table turns every generator into a negative row;
        // the listed generators then fail, proving the control has teeth.
        let report = verify_appendix(&[], 4, 4).unwrap();
        assert_eq!(report.negative_count(), 10);
        let failing: Vec<String> =
            report.failures().map(|row| row.omega.to_string()).collect();
        assert_eq!(failing, vec!["1,1", "2", "4"]);
    }

    #[test]
    fn max_d_bounds() {
        assert!(matches!(
            verify_appendix(golden_table(), 3, 8),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            verify_appendix(golden_table(), 14, 8),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn report_formats() {
        let report = verify_appendix(golden_table(), 4, 4).unwrap();
        let text = report.to_table_string();
        assert!(text.contains("PASS"));
        assert!(!text.contains("FAIL\n"));
        let json = report.to_json();
        assert_eq!(json["maxD"], 4);
        assert_eq!(json["pass"], true);
        assert_eq!(json["rows"].as_array().unwrap().len(), 10);
        let csv = report.to_csv_rows();
        assert_eq!(csv.len(), 10);
        assert!(csv.iter().any(|row| row == "4,4,S^2*,S^2,PASS"));
        assert!(csv.iter().any(|row| row.starts_with("4,\"1,1\",S^0,S^0,PASS")));
    }
}
