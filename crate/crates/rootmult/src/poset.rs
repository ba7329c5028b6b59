//! Closed subposets Θ of the composition poset, capped at a degree d.
//!
//! A set Θ of compositions is *closed* (within the cap) when it contains
//! every merge of each of its elements and every insert whose result still
//! has norm ≤ d. Closed posets encode forbidden tangency patterns: the space
//! P_d^{cΘ} consists of the monic degree-d polynomials whose real-root
//! pattern avoids all of Θ.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::composition::{enumerate, Composition, Parity};
use crate::error::{Error, Result};

/// A recipe for a closed poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PosetSpec {
    /// The smallest closed poset containing the given generators: ⟨g_1,…,g_r⟩.
    Generators(Vec<Composition>),
    /// All patterns whose maximal entry is ≥ k.
    MaxEntryAtLeast { k: u32 },
    /// All patterns with reduced norm ≥ k and norm ≥ q (a skeleton poset).
    ReducedNormAtLeast { k: u64, q: u64 },
    /// The complement of the free-group chamber family: all patterns except
    /// those whose entries lie in {1,2} with at most a single 2.
    FreeTwoComplementForbidden,
    /// Union of sub-recipes, validated for closedness after materialization.
    Union(Vec<PosetSpec>),
}

impl PosetSpec {
    /// Degree-independent semantic validation: thresholds in range,
    /// generator lists nonempty, generators parity-coherent and never the
    /// basepoint pattern of their own parity class.
    pub fn validate(&self) -> Result<()> {
        self.validate_inner()?;
        let mut parities = BTreeSet::new();
        self.collect_generator_parities(&mut parities);
        if parities.len() > 1 {
            return Err(Error::Validation(
                "generators of mixed norm parity in one spec".into(),
            ));
        }
        Ok(())
    }

    fn validate_inner(&self) -> Result<()> {
        match self {
            PosetSpec::Generators(gens) => {
                if gens.is_empty() {
                    return Err(Error::Validation("generator list is empty".into()));
                }
                for g in gens {
                    let parity = Parity::of(g.norm());
                    if g.is_basepoint(parity) {
                        return Err(Error::Validation(format!(
                            "generator {g} is the basepoint pattern of its parity class"
                        )));
                    }
                }
                Ok(())
            }
            PosetSpec::MaxEntryAtLeast { k } => {
                if *k < 1 {
                    return Err(Error::Validation("maxge threshold k must be ≥ 1".into()));
                }
                Ok(())
            }
            PosetSpec::ReducedNormAtLeast { k, .. } => {
                if *k < 1 {
                    return Err(Error::Validation("redge threshold k must be ≥ 1".into()));
                }
                Ok(())
            }
            PosetSpec::FreeTwoComplementForbidden => Ok(()),
            PosetSpec::Union(parts) => {
                if parts.is_empty() {
                    return Err(Error::Validation("union spec has no terms".into()));
                }
                parts.iter().try_for_each(PosetSpec::validate_inner)
            }
        }
    }

    fn collect_generator_parities(&self, out: &mut BTreeSet<bool>) {
        match self {
            PosetSpec::Generators(gens) => {
                out.extend(gens.iter().map(|g| g.norm() % 2 == 0));
            }
            PosetSpec::Union(parts) => {
                for p in parts {
                    p.collect_generator_parities(out);
                }
            }
            _ => {}
        }
    }

    fn contains_predicate_term(&self) -> bool {
        match self {
            PosetSpec::Generators(_) => false,
            PosetSpec::Union(parts) => parts.iter().any(PosetSpec::contains_predicate_term),
            _ => true,
        }
    }
}

impl fmt::Display for PosetSpec {
    /// Canonical spec string; round-trips through `FromStr`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PosetSpec::Generators(gens) => {
                write!(f, "gen:")?;
                for (i, g) in gens.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{g}")?;
                }
                Ok(())
            }
            PosetSpec::MaxEntryAtLeast { k } => write!(f, "maxge:{k}"),
            PosetSpec::ReducedNormAtLeast { k, q } => {
                if *q == 0 {
                    write!(f, "redge:{k}")
                } else {
                    write!(f, "redge:{k},{q}")
                }
            }
            PosetSpec::FreeTwoComplementForbidden => write!(f, "free2"),
            PosetSpec::Union(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for PosetSpec {
    type Err = Error;

    /// Grammar: `spec := term ('|' term)*`;
    /// `term := 'gen:' comp (';' comp)* | 'maxge:' INT | 'redge:' INT [',' INT] | 'free2'`.
    fn from_str(s: &str) -> Result<PosetSpec> {
        fn parse_term(term: &str) -> Result<PosetSpec> {
            let term = term.trim();
            if term == "free2" {
                return Ok(PosetSpec::FreeTwoComplementForbidden);
            }
            if let Some(rest) = term.strip_prefix("gen:") {
                let gens = rest
                    .split(';')
                    .map(|g| g.trim().parse())
                    .collect::<Result<Vec<Composition>>>()?;
                return Ok(PosetSpec::Generators(gens));
            }
            if let Some(rest) = term.strip_prefix("maxge:") {
                let k = rest
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad maxge threshold {rest:?}")))?;
                return Ok(PosetSpec::MaxEntryAtLeast { k });
            }
            if let Some(rest) = term.strip_prefix("redge:") {
                let mut it = rest.split(',');
                let k_str = it.next().unwrap_or("").trim();
                let k = k_str
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad redge threshold {k_str:?}")))?;
                let q = match it.next() {
                    Some(q_str) => q_str
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad redge norm bound {q_str:?}")))?,
                    None => 0,
                };
                if let Some(extra) = it.next() {
                    return Err(Error::Parse(format!(
                        "unexpected trailing {extra:?} in redge term"
                    )));
                }
                return Ok(PosetSpec::ReducedNormAtLeast { k, q });
            }
            Err(Error::Parse(format!("unrecognized poset spec term {term:?}")))
        }

        let terms = s
            .split('|')
            .map(parse_term)
            .collect::<Result<Vec<PosetSpec>>>()?;
        match terms.len() {
            0 => Err(Error::Parse("empty poset spec".into())),
            1 => Ok(terms.into_iter().next().unwrap()),
            _ => Ok(PosetSpec::Union(terms)),
        }
    }
}

/// Verdict of the profiniteness query: asserted only where the theory forces
/// it (finitely generated posets and their unions).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProfiniteVerdict {
    Profinite,
    Indeterminate { note: String },
}

impl ProfiniteVerdict {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            ProfiniteVerdict::Profinite => Some(true),
            ProfiniteVerdict::Indeterminate { .. } => None,
        }
    }

    pub fn note(&self) -> Option<&str> {
        match self {
            ProfiniteVerdict::Profinite => None,
            ProfiniteVerdict::Indeterminate { note } => Some(note),
        }
    }
}

/// Whether the poset described by `spec` is profinite (every reduced-norm
/// level below any bound is finite). Finitely generated closed posets are;
/// for predicate-defined posets no claim is made and the verdict is
/// explicitly indeterminate.
pub fn is_profinite(spec: &PosetSpec) -> ProfiniteVerdict {
    if spec.contains_predicate_term() {
        ProfiniteVerdict::Indeterminate {
            note: "profiniteness is asserted only for finitely generated closed posets; \
                   predicate-defined posets are reported as indeterminate"
                .into(),
        }
    } else {
        ProfiniteVerdict::Profinite
    }
}

/// A finite, operation-closed set of compositions inside the norm-≤-d,
/// parity-matching slice of the composition poset, together with the spec it
/// was materialized from. Immutable after construction; construction
/// validates every invariant eagerly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedPoset {
    d: u64,
    elements: BTreeSet<Composition>,
    spec: PosetSpec,
}

impl ClosedPoset {
    /// The smallest closed poset containing `generators`, capped at norm d.
    pub fn closure(generators: &[Composition], d: u64) -> Result<ClosedPoset> {
        let spec = PosetSpec::Generators(generators.to_vec());
        spec.validate()?;
        let parity = Parity::of(d);
        for g in generators {
            if g.norm() > d {
                return Err(Error::Validation(format!(
                    "generator {g} has norm {} above the cap {d}",
                    g.norm()
                )));
            }
            if Parity::of(g.norm()) != parity {
                return Err(Error::Validation(format!(
                    "generator {g} has norm parity different from d = {d}"
                )));
            }
        }
        let mut elements: BTreeSet<Composition> = BTreeSet::new();
        let mut queue: VecDeque<Composition> = VecDeque::new();
        for g in generators {
            if elements.insert(g.clone()) {
                queue.push_back(g.clone());
            }
        }
        while let Some(cur) = queue.pop_front() {
            for next in cur.all_operation_results(d) {
                if !elements.contains(&next) {
                    elements.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
        ClosedPoset::from_elements(d, elements, spec)
    }

    /// Materializes a spec as an explicit element set at cap d.
    pub fn from_spec(spec: &PosetSpec, d: u64) -> Result<ClosedPoset> {
        spec.validate()?;
        let elements = Self::materialize(spec, d)?;
        ClosedPoset::from_elements(d, elements, spec.clone())
    }

    fn materialize(spec: &PosetSpec, d: u64) -> Result<BTreeSet<Composition>> {
        let parity = Parity::of(d);
        let all = || enumerate(d, parity, false);
        Ok(match spec {
            PosetSpec::Generators(gens) => ClosedPoset::closure(gens, d)?.elements,
            PosetSpec::MaxEntryAtLeast { k } => all()
                .into_iter()
                .filter(|w| w.entries().iter().any(|&e| u64::from(e) >= u64::from(*k)))
                .collect(),
            PosetSpec::ReducedNormAtLeast { k, q } => {
                if *q > d {
                    return Err(Error::Validation(format!(
                        "redge norm bound q = {q} exceeds the cap d = {d}"
                    )));
                }
                if *q > 0 && q % 2 != d % 2 {
                    return Err(Error::Validation(format!(
                        "redge norm bound q = {q} has parity different from d = {d}"
                    )));
                }
                all()
                    .into_iter()
                    .filter(|w| w.reduced_norm() >= *k && w.norm() >= *q)
                    .collect()
            }
            PosetSpec::FreeTwoComplementForbidden => all()
                .into_iter()
                .filter(|w| {
                    let twos = w.entries().iter().filter(|&&e| e == 2).count();
                    let small = w.entries().iter().all(|&e| e <= 2);
                    !(small && twos <= 1)
                })
                .collect(),
            PosetSpec::Union(parts) => {
                let mut union = BTreeSet::new();
                for p in parts {
                    union.extend(Self::materialize(p, d)?);
                }
                union
            }
        })
    }

    /// Adopts an explicit element set, validating every `ClosedPoset`
    /// invariant: norms ≤ d of matching parity, no basepoint pattern, and
    /// operation-closedness (with a witness named on violation).
    pub fn from_elements(
        d: u64,
        elements: impl IntoIterator<Item = Composition>,
        spec: PosetSpec,
    ) -> Result<ClosedPoset> {
        let parity = Parity::of(d);
        let elements: BTreeSet<Composition> = elements.into_iter().collect();
        for w in &elements {
            if w.norm() > d {
                return Err(Error::Validation(format!(
                    "element {w} has norm {} above the cap {d}",
                    w.norm()
                )));
            }
            if Parity::of(w.norm()) != parity {
                return Err(Error::Validation(format!(
                    "element {w} has norm parity different from d = {d}"
                )));
            }
            if w.is_basepoint(parity) {
                return Err(Error::Validation(format!(
                    "the basepoint pattern {w} may not belong to a closed poset"
                )));
            }
        }
        for w in &elements {
            for j in 1..w.support() {
                let m = w.merge(j).expect("j in range");
                if !elements.contains(&m) {
                    return Err(Error::Validation(format!(
                        "set is not operation-closed: merge({w}, {j}) = {m} is missing"
                    )));
                }
            }
            if w.norm() + 2 <= d {
                for k in 0..=w.support() {
                    let i = w.insert(k).expect("k in range");
                    if !elements.contains(&i) {
                        return Err(Error::Validation(format!(
                            "set is not operation-closed: insert({w}, {k}) = {i} is missing"
                        )));
                    }
                }
            }
        }
        Ok(ClosedPoset { d, elements, spec })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.d)
    }

    pub fn spec(&self) -> &PosetSpec {
        &self.spec
    }

    pub fn elements(&self) -> impl Iterator<Item = &Composition> {
        self.elements.iter()
    }

    pub fn contains(&self, w: &Composition) -> bool {
        self.elements.contains(w)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The complement basis cΘ: the full parity slice (basepoint excluded)
    /// minus this poset, in canonical order.
    pub fn complement_basis(&self) -> Vec<Composition> {
        enumerate(self.d, self.parity(), true)
            .into_iter()
            .filter(|w| !self.elements.contains(w))
            .collect()
    }

    /// The elements of Θ that are not proper successors of any other element
    /// of Θ. Equivalently (by closedness): the elements none of whose
    /// immediate predecessors lies in Θ. Errors on an empty poset.
    pub fn maximal_elements(&self) -> Result<Vec<Composition>> {
        if self.elements.is_empty() {
            return Err(Error::InvalidArgument(
                "maximal elements of an empty poset are undefined".into(),
            ));
        }
        Ok(self
            .elements
            .iter()
            .filter(|w| {
                !w.immediate_predecessors()
                    .iter()
                    .any(|p| self.elements.contains(p))
            })
            .cloned()
            .collect())
    }

    /// The hat-extension: the smallest closed poset at cap d' ≥ d (same
    /// parity) containing this one.
    pub fn extend_to_degree(&self, d_new: u64) -> Result<ClosedPoset> {
        if d_new < self.d {
            return Err(Error::InvalidArgument(format!(
                "extension degree {d_new} is below the current cap {}",
                self.d
            )));
        }
        if d_new % 2 != self.d % 2 {
            return Err(Error::InvalidArgument(format!(
                "extension degree {d_new} has parity different from {}",
                self.d
            )));
        }
        if d_new == self.d {
            return Ok(self.clone());
        }
        let mut elements: BTreeSet<Composition> = self.elements.clone();
        let mut queue: VecDeque<Composition> = self.elements.iter().cloned().collect();
        while let Some(cur) = queue.pop_front() {
            for next in cur.all_operation_results(d_new) {
                if !elements.contains(&next) {
                    elements.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
        ClosedPoset::from_elements(d_new, elements, self.spec.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Composition {
        s.parse().unwrap()
    }

    fn set(items: &[&str]) -> BTreeSet<Composition> {
        items.iter().map(|s| c(s)).collect()
    }

    /// Independent closure oracle: naive fixpoint iteration over the full
    /// set (no queue), recomputing operation images until nothing new shows.
    fn closure_fixpoint_oracle(gens: &[Composition], d: u64) -> BTreeSet<Composition> {
        let mut cur: BTreeSet<Composition> = gens.iter().cloned().collect();
        loop {
            let mut next = cur.clone();
            for w in &cur {
                for j in 1..w.support() {
                    next.insert(w.merge(j).unwrap());
                }
                if w.norm() + 2 <= d {
                    for k in 0..=w.support() {
                        next.insert(w.insert(k).unwrap());
                    }
                }
            }
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Independent maximality oracle: the definition itself, via pairwise
    /// reachability tests.
    fn maximal_pairwise_oracle(theta: &ClosedPoset) -> Vec<Composition> {
        theta
            .elements()
            .filter(|w| {
                !theta
                    .elements()
                    .any(|s| s != *w && s.succeeds(w, theta.d()).unwrap())
            })
            .cloned()
            .collect()
    }

    #[test]
    fn closure_examples() {
        let t = ClosedPoset::closure(&[c("2")], 4).unwrap();
        assert_eq!(t.elements.clone(), set(&["2", "2,2", "4"]));

        let t = ClosedPoset::closure(&[c("1,1")], 4).unwrap();
        assert_eq!(
            t.elements.clone(),
            set(&["1,1", "2", "2,1,1", "1,2,1", "1,1,2", "3,1", "1,3", "2,2", "4"])
        );

        let t = ClosedPoset::closure(&[c("4")], 4).unwrap();
        assert_eq!(t.elements.clone(), set(&["4"]));
    }

    #[test]
    fn closure_matches_fixpoint_oracle() {
        for (gens, d) in [
            (vec![c("2")], 8),
            (vec![c("1,1")], 6),
            (vec![c("1,2,1")], 8),
            (vec![c("3"), c("1,1,1")], 7),
            (vec![c("1,1,1")], 9),
        ] {
            let t = ClosedPoset::closure(&gens, d).unwrap();
            let oracle = closure_fixpoint_oracle(&gens, d);
            assert_eq!(t.elements.clone(), oracle, "gens {gens:?} d={d}");
        }
    }

    #[test]
    fn closure_validation_errors() {
        // Parity mismatch.
        assert!(ClosedPoset::closure(&[c("3")], 4).is_err());
        // Basepoint generator.
        assert!(ClosedPoset::closure(&[c("1")], 5).is_err());
        assert!(ClosedPoset::closure(&[Composition::empty()], 4).is_err());
        // Norm above cap.
        assert!(ClosedPoset::closure(&[c("6")], 4).is_err());
        // Empty generator list.
        assert!(ClosedPoset::closure(&[], 4).is_err());
    }

    #[test]
    fn from_spec_redge_frozen() {
        let spec = PosetSpec::ReducedNormAtLeast { k: 3, q: 0 };
        let t = ClosedPoset::from_spec(&spec, 6).unwrap();
        assert_eq!(
            t.elements.clone(),
            set(&[
                "4", "5,1", "1,5", "4,2", "2,4", "3,3", "6", "4,1,1", "1,4,1", "1,1,4", "3,2,1",
                "3,1,2", "2,3,1", "1,3,2", "2,1,3", "1,2,3", "2,2,2"
            ])
        );
        assert_eq!(t.len(), 17);
    }

    #[test]
    fn from_spec_maxge_frozen() {
        let spec = PosetSpec::MaxEntryAtLeast { k: 4 };
        let t = ClosedPoset::from_spec(&spec, 4).unwrap();
        assert_eq!(t.elements.clone(), set(&["4"]));
    }

    #[test]
    fn from_spec_free2_frozen() {
        let spec = PosetSpec::FreeTwoComplementForbidden;
        let t = ClosedPoset::from_spec(&spec, 4).unwrap();
        assert_eq!(t.elements.clone(), set(&["3,1", "1,3", "2,2", "4"]));
    }

    #[test]
    fn from_spec_rejects_basepoint_bearing_predicates() {
        // maxge:1 would contain the odd basepoint (1): an error, not a drop.
        assert!(ClosedPoset::from_spec(&PosetSpec::MaxEntryAtLeast { k: 1 }, 3).is_err());
        // At even d the same predicate is fine: (∅) has no entries, so
        // maxge:1 never picks up the even basepoint.
        assert!(ClosedPoset::from_spec(&PosetSpec::MaxEntryAtLeast { k: 1 }, 4).is_ok());
    }

    #[test]
    fn complement_basis_examples() {
        let t = ClosedPoset::closure(&[c("1,1")], 4).unwrap();
        assert_eq!(t.complement_basis(), vec![c("1,1,1,1")]);

        let t = ClosedPoset::closure(&[c("4")], 4).unwrap();
        let cb = t.complement_basis();
        assert_eq!(
            cb.iter().cloned().collect::<BTreeSet<_>>(),
            set(&["1,1", "2", "2,1,1", "1,2,1", "1,1,2", "3,1", "1,3", "2,2", "1,1,1,1"])
        );
        // Deterministic canonical order.
        let mut sorted = cb.clone();
        sorted.sort();
        assert_eq!(cb, sorted);

        let t = ClosedPoset::from_spec(&PosetSpec::MaxEntryAtLeast { k: 2 }, 2).unwrap();
        assert_eq!(t.complement_basis(), vec![c("1,1")]);
    }

    #[test]
    fn complement_partitions_the_slice() {
        let t = ClosedPoset::closure(&[c("1,2,1")], 8).unwrap();
        let comp = t.complement_basis();
        let all = enumerate(8, Parity::Even, true);
        assert_eq!(comp.len() + t.len(), all.len());
        for w in &all {
            assert!(t.contains(w) ^ comp.contains(w));
        }
    }

    #[test]
    fn maximal_elements_examples() {
        let t = ClosedPoset::closure(&[c("4")], 4).unwrap();
        assert_eq!(t.maximal_elements().unwrap(), vec![c("4")]);

        let t = ClosedPoset::closure(&[c("1,1")], 4).unwrap();
        assert_eq!(t.maximal_elements().unwrap(), vec![c("1,1")]);

        let t =
            ClosedPoset::from_spec(&PosetSpec::ReducedNormAtLeast { k: 3, q: 0 }, 6).unwrap();
        let max = t.maximal_elements().unwrap();
        assert_eq!(max, maximal_pairwise_oracle(&t));
        // Every maximal element here has reduced norm exactly 3.
        assert!(max.iter().all(|w| w.reduced_norm() == 3));
    }

    #[test]
    fn maximal_matches_pairwise_oracle() {
        for (spec, d) in [
            (PosetSpec::MaxEntryAtLeast { k: 3 }, 7),
            (PosetSpec::FreeTwoComplementForbidden, 6),
            (PosetSpec::Generators(vec![c("2,2"), c("1,3")]), 8),
        ] {
            let t = ClosedPoset::from_spec(&spec, d).unwrap();
            assert_eq!(
                t.maximal_elements().unwrap(),
                maximal_pairwise_oracle(&t),
                "{spec:?} at d={d}"
            );
        }
    }

    #[test]
    fn maximal_regenerates_closure() {
        for (spec, d) in [
            (PosetSpec::Generators(vec![c("1,1")]), 6),
            (PosetSpec::MaxEntryAtLeast { k: 3 }, 7),
            (PosetSpec::ReducedNormAtLeast { k: 2, q: 0 }, 6),
            (PosetSpec::FreeTwoComplementForbidden, 5),
        ] {
            let t = ClosedPoset::from_spec(&spec, d).unwrap();
            let max = t.maximal_elements().unwrap();
            let regen = ClosedPoset::closure(&max, d).unwrap();
            assert_eq!(regen.elements.clone(), t.elements.clone(), "{spec:?} d={d}");
        }
    }

    #[test]
    fn closure_is_idempotent() {
        let t = ClosedPoset::closure(&[c("1,1")], 6).unwrap();
        let elems: Vec<Composition> = t.elements().cloned().collect();
        let again = ClosedPoset::closure(&elems, 6).unwrap();
        assert_eq!(again.elements.clone(), t.elements.clone());
    }

    #[test]
    fn extend_to_degree_examples() {
        let t = ClosedPoset::closure(&[c("2")], 2).unwrap();
        let e = t.extend_to_degree(4).unwrap();
        assert_eq!(e.elements.clone(), set(&["2", "2,2", "4"]));

        let t = ClosedPoset::closure(&[c("4")], 4).unwrap();
        assert_eq!(t.extend_to_degree(4).unwrap(), t);
        let e = t.extend_to_degree(6).unwrap();
        assert_eq!(e.elements.clone(), set(&["4", "2,4", "4,2", "6"]));
        assert_eq!(
            e.elements.clone(),
            closure_fixpoint_oracle(&[c("4")], 6)
        );

        // Parity mismatch.
        assert!(t.extend_to_degree(7).is_err());
        // Towers compose.
        let t = ClosedPoset::closure(&[c("1,2,1")], 4).unwrap();
        let via6 = t.extend_to_degree(6).unwrap().extend_to_degree(8).unwrap();
        let direct = t.extend_to_degree(8).unwrap();
        assert_eq!(via6.elements.clone(), direct.elements.clone());
    }

    #[test]
    fn closedness_witness_is_reported() {
        let err = ClosedPoset::from_elements(
            4,
            [c("1,1")],
            PosetSpec::Generators(vec![c("1,1")]),
        )
        .unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("not operation-closed"), "got: {msg}");
        assert!(msg.contains("merge(1,1, 1) = 2") || msg.contains("insert"), "got: {msg}");
    }

    #[test]
    fn spec_string_round_trip() {
        for s in [
            "gen:1,2,1",
            "gen:1,1;2,2",
            "maxge:3",
            "redge:3",
            "redge:3,2",
            "free2",
            "gen:4 | maxge:5",
            "gen:2 | gen:1,1,1,1 | free2",
        ] {
            let spec: PosetSpec = s.parse().unwrap();
            let printed = spec.to_string();
            let reparsed: PosetSpec = printed.parse().unwrap();
            assert_eq!(reparsed, spec, "round trip of {s:?} via {printed:?}");
        }
        // The q=0 form normalizes away.
        assert_eq!("redge:3,0".parse::<PosetSpec>().unwrap().to_string(), "redge:3");
        assert!("nope:3".parse::<PosetSpec>().is_err());
        assert!("gen:".parse::<PosetSpec>().is_err());
        assert!("maxge:x".parse::<PosetSpec>().is_err());
        assert!("redge:1,2,3".parse::<PosetSpec>().is_err());
    }

    #[test]
    fn union_of_generator_specs_materializes_and_validates() {
        let spec: PosetSpec = "gen:4 | gen:2,2".parse().unwrap();
        let t = ClosedPoset::from_spec(&spec, 6).unwrap();
        let a = ClosedPoset::closure(&[c("4")], 6).unwrap();
        let b = ClosedPoset::closure(&[c("2,2")], 6).unwrap();
        let expected: BTreeSet<Composition> =
            a.elements().chain(b.elements()).cloned().collect();
        assert_eq!(t.elements.clone(), expected);
    }

    #[test]
    fn mixed_parity_specs_are_rejected() {
        let spec: PosetSpec = "gen:2 | gen:3".parse().unwrap();
        assert!(spec.validate().is_err());
        assert!(ClosedPoset::from_spec(&spec, 6).is_err());
    }

    #[test]
    fn profinite_verdicts() {
        let gen: PosetSpec = "gen:4".parse().unwrap();
        assert_eq!(is_profinite(&gen).as_bool(), Some(true));
        let union: PosetSpec = "gen:4 | gen:2,2".parse().unwrap();
        assert_eq!(is_profinite(&union).as_bool(), Some(true));
        let redge: PosetSpec = "redge:3".parse().unwrap();
        assert_eq!(is_profinite(&redge).as_bool(), None);
        assert!(is_profinite(&redge).note().is_some());
        let mixed: PosetSpec = "gen:4 | maxge:3".parse().unwrap();
        assert_eq!(is_profinite(&mixed).as_bool(), None);
    }

    #[test]
    fn redge_parameter_validation() {
        // q above the cap.
        let spec = PosetSpec::ReducedNormAtLeast { k: 3, q: 8 };
        assert!(ClosedPoset::from_spec(&spec, 6).is_err());
        // Positive q of the wrong parity.
        let spec = PosetSpec::ReducedNormAtLeast { k: 3, q: 3 };
        assert!(ClosedPoset::from_spec(&spec, 6).is_err());
        // q = 0 is admissible for any parity.
        let spec = PosetSpec::ReducedNormAtLeast { k: 3, q: 0 };
        assert!(ClosedPoset::from_spec(&spec, 7).is_ok());
        // Predicate posets may be empty.
        let t = ClosedPoset::from_spec(&PosetSpec::ReducedNormAtLeast { k: 9, q: 0 }, 4).unwrap();
        assert!(t.is_empty());
        assert!(t.maximal_elements().is_err());
    }
}
