//! Exact integer homology of a graded complex, and its translation into the
//! (co)homology of the polynomial space P_d^{cΘ}.
//!
//! At grading g the group is ker(map out of g) / im(map into g); its free
//! rank is dim C_g − rank(out) − rank(in) and its torsion divisors are the
//! invariant factors > 1 of the incoming map. The complement space's reduced
//! cohomology in degree j is the homology of the quotient complex at grading
//! g = d − j; its reduced homology is the same for the dual complex.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::complex::{Direction, GradedComplex};
use crate::error::{Error, Result};
use crate::poset::ClosedPoset;
use crate::snf::{smith_normal_form, SnfResult};

/// A finitely generated abelian group: Z^rank ⊕ Z/t_1 ⊕ … with the torsion
/// divisors t_i > 1 in divisibility order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rank": self.rank,
            "torsion": self.torsion.iter().map(json_int).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Homology of every grading of `c`, indexed 0..=d. Grading 0 is always
/// trivial (the modules live in gradings 1..=d).
pub fn homology(c: &GradedComplex) -> Result<Vec<AbelianGroup>> {
    let d = c.d() as usize;
    // One Smith reduction per stored map; each map is consulted twice (as
    // the out-map of one grading and the in-map of a neighbor).
    let snfs: Vec<Option<SnfResult>> = c
        .stored_maps()
        .iter()
        .enumerate()
        .map(|(g, m)| (g >= 1).then(|| smith_normal_form(m, false)))
        .collect();
    let at = |idx: usize| -> Option<&SnfResult> { snfs.get(idx).and_then(Option::as_ref) };

    let mut groups = Vec::with_capacity(d + 1);
    for g in 0..=d {
        let (out_idx, in_idx) = match c.direction() {
            Direction::Lowering => (g, g + 1),
            Direction::Raising => (g + 1, g),
        };
        let rank_out = at(out_idx).map_or(0, |s| s.rank);
        let (rank_in, torsion) = at(in_idx).map_or((0, Vec::new()), |s| (s.rank, s.torsion()));
        let rank = c
            .dim(g as u64)
            .checked_sub(rank_out + rank_in)
            .ok_or_else(|| {
                Error::Integrity(format!(
                    "rank bookkeeping failed at grading {g}: the maps do not compose to zero"
                ))
            })?;
        groups.push(AbelianGroup { rank, torsion });
    }
    Ok(groups)
}

/// How the degrees of a `HomologyTable` are to be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Indexing {
    /// Degree j holds H̃^j(P_d^{cΘ}; Z) = H_{d−j} of the quotient complex.
    ReducedCohomologyOfComplement,
    /// Degree j holds H̃_j(P_d^{cΘ}; Z) = H_{d−j} of the dual quotient complex.
    ReducedHomologyOfComplement,
    /// Degree g holds the homology of the complex at its own grading g.
    RawGraded,
}

impl fmt::Display for Indexing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Indexing::ReducedCohomologyOfComplement => "reducedCohomologyOfComplement",
            Indexing::ReducedHomologyOfComplement => "reducedHomologyOfComplement",
            Indexing::RawGraded => "rawGraded",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Trivial,
    Sphere(u64),
    General,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Trivial => write!(f, "trivial"),
            Classification::Sphere(k) => write!(f, "S^{k}"),
            Classification::General => write!(f, "general"),
        }
    }
}

/// Per-degree homology data for one (d, Θ) pair. Trivial degrees are not
/// stored but read back as zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyTable {
    pub d: u64,
    /// The spec string of the poset this table describes.
    pub theta: String,
    pub indexing: Indexing,
    groups: BTreeMap<u64, AbelianGroup>,
}

impl HomologyTable {
    pub fn new(
        d: u64,
        theta: String,
        indexing: Indexing,
        groups: impl IntoIterator<Item = (u64, AbelianGroup)>,
    ) -> Self {
        let groups = groups
            .into_iter()
            .filter(|(_, grp)| !grp.is_trivial())
            .collect();
        HomologyTable {
            d,
            theta,
            indexing,
            groups,
        }
    }

    /// The group in one degree; absent degrees are trivial.
    pub fn group(&self, degree: u64) -> AbelianGroup {
        self.groups.get(&degree).cloned().unwrap_or_default()
    }

    /// The nontrivial degrees in ascending order.
    pub fn nontrivial(&self) -> impl Iterator<Item = (u64, &AbelianGroup)> {
        self.groups.iter().map(|(j, g)| (*j, g))
    }

    pub fn is_trivial(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn has_torsion(&self) -> bool {
        self.groups.values().any(|g| !g.torsion.is_empty())
    }

    /// Homology-type classification: trivial, a single Z in one degree
    /// (a homology sphere S^k), or anything else. Meant to be read on
    /// cohomology-indexed tables.
    pub fn classification(&self) -> Classification {
        if self.groups.is_empty() {
            return Classification::Trivial;
        }
        if self.groups.len() == 1 {
            let (degree, group) = self.groups.iter().next().expect("len checked");
            if group.rank == 1 && group.torsion.is_empty() {
                return Classification::Sphere(*degree);
            }
        }
        Classification::General
    }

    pub fn to_json(&self) -> serde_json::Value {
        let groups: Vec<serde_json::Value> = self
            .nontrivial()
            .map(|(degree, group)| {
                serde_json::json!({
                    "degree": degree,
                    "rank": group.rank,
                    "torsion": group.torsion.iter().map(json_int).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "d": self.d,
            "theta": self.theta,
            "indexing": self.indexing.to_string(),
            "groups": groups,
            "classification": self.classification().to_string(),
        })
    }

    /// CSV rows (no header): d, theta, degree, rank, torsion
    /// (semicolon-joined), classification.
    pub fn to_csv_rows(&self) -> Vec<String> {
        let class = self.classification().to_string();
        self.nontrivial()
            .map(|(degree, group)| {
                let torsion = group
                    .torsion
                    .iter()
                    .map(BigInt::to_string)
                    .collect::<Vec<_>>()
                    .join(";");
                format!(
                    "{},{},{degree},{},{torsion},{class}",
                    self.d,
                    csv_field(&self.theta),
                    group.rank
                )
            })
            .collect()
    }

    /// Human-readable block for terminal output.
    pub fn to_table_string(&self) -> String {
        let mut out = format!(
            "d = {}, theta = {}, indexing = {}\n",
            self.d, self.theta, self.indexing
        );
        if self.is_trivial() {
            out.push_str("  (all degrees trivial)\n");
        } else {
            for (degree, group) in self.nontrivial() {
                let symbol = match self.indexing {
                    Indexing::ReducedCohomologyOfComplement => format!("H~^{degree}"),
                    Indexing::ReducedHomologyOfComplement => format!("H~_{degree}"),
                    Indexing::RawGraded => format!("H[g={degree}]"),
                };
                out.push_str(&format!("  {symbol} = {group}\n"));
            }
        }
        out.push_str(&format!("classification: {}\n", self.classification()));
        out
    }
}

fn json_int(v: &BigInt) -> serde_json::Value {
    match i64::try_from(v) {
        Ok(n) => serde_json::Value::from(n),
        // Torsion beyond i64 has never been observed; keep it lossless.
        Err(_) => serde_json::Value::from(v.to_string()),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains(' ') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// H̃^j(P_d^{cΘ}; Z) for all j, via the quotient complex at grading d − j.
pub fn reduced_cohomology_of_complement(theta: &ClosedPoset) -> Result<HomologyTable> {
    if theta.is_empty() {
        return Err(Error::Validation(
            "empty Θ is unsupported: the ambient complex's homology is not interpreted".into(),
        ));
    }
    let complex = GradedComplex::quotient_complex(theta)?;
    let groups = homology(&complex)?;
    Ok(reindex(theta, Indexing::ReducedCohomologyOfComplement, groups))
}

/// H̃_j(P_d^{cΘ}; Z) for all j, via the dual quotient complex.
pub fn reduced_homology_of_complement(theta: &ClosedPoset) -> Result<HomologyTable> {
    if theta.is_empty() {
        return Err(Error::Validation(
            "empty Θ is unsupported: the ambient complex's homology is not interpreted".into(),
        ));
    }
    let complex = GradedComplex::quotient_complex(theta)?.dual();
    let groups = homology(&complex)?;
    Ok(reindex(theta, Indexing::ReducedHomologyOfComplement, groups))
}

fn reindex(theta: &ClosedPoset, indexing: Indexing, groups: Vec<AbelianGroup>) -> HomologyTable {
    let d = theta.d();
    let entries = groups
        .into_iter()
        .enumerate()
        .filter(|(g, _)| *g >= 1)
        .map(|(g, group)| (d - g as u64, group));
    HomologyTable::new(d, theta.spec().to_string(), indexing, entries)
}

/// The homology of a complex presented at its own gradings.
pub fn raw_graded_table(c: &GradedComplex, theta: String) -> Result<HomologyTable> {
    let groups = homology(c)?;
    Ok(HomologyTable::new(
        c.d(),
        theta,
        Indexing::RawGraded,
        groups
            .into_iter()
            .enumerate()
            .map(|(g, group)| (g as u64, group)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composition::Composition;
    use crate::snf::{bareiss_rank, rank_mod_p};

    fn c(s: &str) -> Composition {
        s.parse().unwrap()
    }

    fn closure(gens: &[&str], d: u64) -> ClosedPoset {
        let gens: Vec<Composition> = gens.iter().map(|s| c(s)).collect();
        ClosedPoset::closure(&gens, d).unwrap()
    }

    /// Free ranks recomputed with the independent fraction-free oracle, and
    /// torsion-freeness probed over small prime fields.
    fn oracle_check(complex: &GradedComplex, groups: &[AbelianGroup]) {
        for g in 0..=complex.d() {
            let rank_out = complex.map_out_of(g).map_or(0, bareiss_rank);
            let rank_in = complex.map_into(g).map_or(0, bareiss_rank);
            let free = complex.dim(g) - rank_out - rank_in;
            assert_eq!(groups[g as usize].rank, free, "free rank at g={g}");
            if groups[g as usize].torsion.is_empty() {
                if let Some(m) = complex.map_into(g) {
                    for p in [2, 3, 5, 7, 11, 13] {
                        assert_eq!(
                            rank_mod_p(m, p),
                            bareiss_rank(m),
                            "unexpected p-torsion at g={g}, p={p}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn quotient_homology_calibration() {
        // ⟨(4)⟩ at d=4: a homology S² (Z at grading 2 ⇒ degree 2).
        let theta = closure(&["4"], 4);
        let complex = GradedComplex::quotient_complex(&theta).unwrap();
        let groups = homology(&complex).unwrap();
        let ranks: Vec<usize> = groups.iter().map(|g| g.rank).collect();
        assert_eq!(ranks, vec![0, 0, 1, 0, 0]);
        assert!(groups.iter().all(|g| g.torsion.is_empty()));
        oracle_check(&complex, &groups);

        // ⟨(1,1)⟩ at d=4: single generator, zero differential ⇒ Z at g=4.
        let theta = closure(&["1,1"], 4);
        let complex = GradedComplex::quotient_complex(&theta).unwrap();
        let groups = homology(&complex).unwrap();
        let ranks: Vec<usize> = groups.iter().map(|g| g.rank).collect();
        assert_eq!(ranks, vec![0, 0, 0, 0, 1]);
        oracle_check(&complex, &groups);
    }

    #[test]
    fn cohomology_tables_frozen() {
        let t = reduced_cohomology_of_complement(&closure(&["4"], 4)).unwrap();
        assert_eq!(t.classification(), Classification::Sphere(2));
        assert_eq!(t.group(2), AbelianGroup { rank: 1, torsion: vec![] });
        assert_eq!(t.nontrivial().count(), 1);

        let t = reduced_cohomology_of_complement(&closure(&["1,1"], 4)).unwrap();
        assert_eq!(t.classification(), Classification::Sphere(0));

        let t = reduced_cohomology_of_complement(&closure(&["1,1,1"], 5)).unwrap();
        assert_eq!(t.classification(), Classification::Sphere(0));

        let t = reduced_cohomology_of_complement(&closure(&["1,2,1"], 8)).unwrap();
        assert_eq!(t.classification(), Classification::Sphere(4));

        // A trivial complement: ⟨(2,1,1)⟩ at d=4 is not in the sphere table.
        let t = reduced_cohomology_of_complement(&closure(&["2,1,1"], 4)).unwrap();
        assert_eq!(t.classification(), Classification::Trivial);
        assert!(t.is_trivial());
    }

    #[test]
    fn homology_route_agrees_with_cohomology_route() {
        for (gens, d) in [
            (vec!["4"], 4u64),
            (vec!["1,1"], 4),
            (vec!["2"], 6),
            (vec!["1,2,1"], 8),
            (vec!["2,2"], 6),
            (vec!["3,1"], 6),
        ] {
            let gens: Vec<Composition> = gens.iter().map(|s| c(s)).collect();
            let theta = ClosedPoset::closure(&gens, d).unwrap();
            let co = reduced_cohomology_of_complement(&theta).unwrap();
            let ho = reduced_homology_of_complement(&theta).unwrap();
            for j in 0..=d {
                assert_eq!(
                    co.group(j).rank,
                    ho.group(j).rank,
                    "rank mismatch at j={j} for {theta:?}"
                );
            }
            // Universal coefficients: cohomology torsion in degree j+1 is
            // homology torsion in degree j.
            for j in 0..=d {
                assert_eq!(co.group(j + 1).torsion, ho.group(j).torsion);
            }
        }
    }

    #[test]
    fn homology_route_frozen_examples() {
        let t = reduced_homology_of_complement(&closure(&["4"], 4)).unwrap();
        assert_eq!(t.group(2), AbelianGroup { rank: 1, torsion: vec![] });
        assert_eq!(t.nontrivial().count(), 1);

        let t = reduced_homology_of_complement(&closure(&["1,1"], 4)).unwrap();
        assert_eq!(t.group(0), AbelianGroup { rank: 1, torsion: vec![] });
        assert_eq!(t.nontrivial().count(), 1);
    }

    #[test]
    fn ambient_complex_is_acyclic() {
        for d in 2..=7u64 {
            let a = GradedComplex::ambient(d).unwrap();
            let groups = homology(&a).unwrap();
            assert!(
                groups.iter().all(AbelianGroup::is_trivial),
                "ambient homology nonzero at d={d}"
            );
            let dual_groups = homology(&a.dual()).unwrap();
            assert!(dual_groups.iter().all(AbelianGroup::is_trivial));
        }
    }

    #[test]
    fn zero_differential_complex_has_full_homology() {
        // Θ = ⟨(1,1)⟩ at d=4 leaves one generator and no maps.
        let theta = closure(&["1,1"], 4);
        let q = GradedComplex::quotient_complex(&theta).unwrap();
        let groups = homology(&q).unwrap();
        for g in 0..=4u64 {
            assert_eq!(groups[g as usize].rank, q.dim(g));
        }
    }

    #[test]
    fn empty_theta_is_rejected() {
        let spec = crate::poset::PosetSpec::ReducedNormAtLeast { k: 9, q: 0 };
        let empty = ClosedPoset::from_spec(&spec, 4).unwrap();
        assert!(reduced_cohomology_of_complement(&empty).is_err());
        assert!(reduced_homology_of_complement(&empty).is_err());
    }

    #[test]
    fn classification_rules() {
        let sphere = HomologyTable::new(
            4,
            "gen:4".into(),
            Indexing::ReducedCohomologyOfComplement,
            [(2u64, AbelianGroup { rank: 1, torsion: vec![] })],
        );
        assert_eq!(sphere.classification(), Classification::Sphere(2));

        let empty = HomologyTable::new(
            4,
            "gen:4".into(),
            Indexing::ReducedCohomologyOfComplement,
            [],
        );
        assert_eq!(empty.classification(), Classification::Trivial);

        let wide = HomologyTable::new(
            6,
            "free2".into(),
            Indexing::ReducedCohomologyOfComplement,
            [(1u64, AbelianGroup { rank: 6, torsion: vec![] })],
        );
        assert_eq!(wide.classification(), Classification::General);

        let torn = HomologyTable::new(
            5,
            "gen:5".into(),
            Indexing::ReducedCohomologyOfComplement,
            [(2u64, AbelianGroup { rank: 1, torsion: vec![BigInt::from(2)] })],
        );
        assert_eq!(torn.classification(), Classification::General);

        // Trivial groups passed in are dropped but read back as zero.
        let padded = HomologyTable::new(
            4,
            "gen:4".into(),
            Indexing::ReducedCohomologyOfComplement,
            [
                (0u64, AbelianGroup::default()),
                (2, AbelianGroup { rank: 1, torsion: vec![] }),
            ],
        );
        assert_eq!(padded.nontrivial().count(), 1);
        assert_eq!(padded.group(0), AbelianGroup::default());
    }

    #[test]
    fn json_and_csv_shapes() {
        let t = reduced_cohomology_of_complement(&closure(&["4"], 4)).unwrap();
        let json = t.to_json();
        assert_eq!(json["d"], 4);
        assert_eq!(json["theta"], "gen:4");
        assert_eq!(json["indexing"], "reducedCohomologyOfComplement");
        assert_eq!(json["classification"], "S^2");
        assert_eq!(json["groups"][0]["degree"], 2);
        assert_eq!(json["groups"][0]["rank"], 1);
        assert_eq!(json["groups"][0]["torsion"].as_array().unwrap().len(), 0);

        let rows = t.to_csv_rows();
        assert_eq!(rows, vec!["4,gen:4,2,1,,S^2"]);

        let t2 = reduced_cohomology_of_complement(&closure(&["1,2,1"], 8)).unwrap();
        let rows = t2.to_csv_rows();
        assert_eq!(rows, vec!["8,\"gen:1,2,1\",4,1,,S^4"]);

        let body = t.to_table_string();
        assert!(body.contains("H~^2 = Z"), "got: {body}");
        assert!(body.contains("classification: S^2"));
    }

    #[test]
    fn display_of_groups() {
        assert_eq!(AbelianGroup::default().to_string(), "0");
        assert_eq!(
            AbelianGroup { rank: 1, torsion: vec![] }.to_string(),
            "Z"
        );
        assert_eq!(
            AbelianGroup {
                rank: 2,
                torsion: vec![BigInt::from(2), BigInt::from(4)]
            }
            .to_string(),
            "Z^2 + Z/2 + Z/4"
        );
    }
}
