//! Multiplicity patterns (integer compositions) and their elementary
//! operations.
//!
//! A *composition* ω = (ω_1, …, ω_ℓ) is an ordered tuple of positive
//! integers. It records the multiplicities of the real roots of a monic
//! polynomial, ordered by root magnitude; the empty tuple (∅) is the pattern
//! of a polynomial with no real roots. Two elementary operations generate a
//! partial order on compositions:
//!
//! * the **merge** M_j replaces the adjacent entries ω_j, ω_{j+1} by their
//!   sum (two root clusters collide);
//! * the **insert** I_k places a new entry 2 after position k (a pair of
//!   simple roots is born at a tangency).
//!
//! Both operations raise the reduced norm |ω|' = Σ(ω_i − 1) by exactly one;
//! merges preserve the norm |ω| = Σω_i, inserts raise it by 2.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Norm parity selector for enumeration and basepoint bookkeeping.
///
/// Spaces of degree-d polynomials only realize patterns with |ω| ≡ d (mod 2),
/// so every pipeline works inside one parity class at a time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// The parity class of a degree (or of a norm).
    pub fn of(n: u64) -> Parity {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Smallest admissible norm in this class: 0 for even, 1 for odd.
    pub fn min_norm(self) -> u64 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

/// An ordered tuple of positive integer multiplicities; may be empty.
///
/// Value-semantic: two compositions are equal iff their entry sequences are.
/// The `Ord` instance is the canonical enumeration order used everywhere for
/// deterministic output: ascending norm, then lexicographic on the *reversed*
/// entry sequence (so (2,1) sorts before (1,2)).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Composition {
    entries: Vec<u32>,
}

impl Composition {
    /// Builds a composition, validating that every entry is ≥ 1.
    pub fn new(entries: Vec<u32>) -> Result<Composition> {
        if entries.iter().any(|&e| e == 0) {
            return Err(Error::InvalidArgument(
                "composition entries must be ≥ 1".into(),
            ));
        }
        Ok(Composition { entries })
    }

    /// The empty pattern (∅).
    pub fn empty() -> Composition {
        Composition::default()
    }

    /// The basepoint-chamber pattern of a parity class: (∅) for even, (1)
    /// for odd. This pattern is excluded from every complex basis and is
    /// never allowed inside a closed poset.
    pub fn basepoint(parity: Parity) -> Composition {
        match parity {
            Parity::Even => Composition::empty(),
            Parity::Odd => Composition { entries: vec![1] },
        }
    }

    pub fn is_basepoint(&self, parity: Parity) -> bool {
        *self == Composition::basepoint(parity)
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Norm |ω| = Σ ω_i.
    pub fn norm(&self) -> u64 {
        self.entries.iter().map(|&e| u64::from(e)).sum()
    }

    /// Reduced norm |ω|' = Σ (ω_i − 1).
    pub fn reduced_norm(&self) -> u64 {
        self.norm() - self.support() as u64
    }

    /// Support s_ω: the number of entries.
    pub fn support(&self) -> usize {
        self.entries.len()
    }

    /// The triple (|ω|, |ω|', s_ω). Always satisfies |ω| − |ω|' = s_ω.
    pub fn norms(&self) -> (u64, u64, usize) {
        (self.norm(), self.reduced_norm(), self.support())
    }

    /// Merge operator M_j for j ≥ 1: replaces entries j and j+1 by their
    /// sum. For j ≥ s_ω the operator is the identity; j = 0 is rejected.
    pub fn merge(&self, j: usize) -> Result<Composition> {
        if j == 0 {
            return Err(Error::InvalidArgument("merge index must be ≥ 1".into()));
        }
        if j >= self.support() {
            return Ok(self.clone());
        }
        let mut entries = self.entries.clone();
        entries[j - 1] += entries[j];
        entries.remove(j);
        Ok(Composition { entries })
    }

    /// Insert operator I_k for 0 ≤ k ≤ s_ω: places a new entry 2 after
    /// position k (k = 0 prepends, k = s_ω appends). Out-of-range k is an
    /// error rather than the identity.
    pub fn insert(&self, k: usize) -> Result<Composition> {
        if k > self.support() {
            return Err(Error::InvalidArgument(format!(
                "insert index {k} out of range 0..={}",
                self.support()
            )));
        }
        let mut entries = self.entries.clone();
        entries.insert(k, 2);
        Ok(Composition { entries })
    }

    /// All compositions that reach `self` by a single operation: the
    /// reverse-merges (split one entry ≥ 2 into two positive parts) and the
    /// reverse-inserts (delete one entry equal to 2).
    pub fn immediate_predecessors(&self) -> Vec<Composition> {
        let mut preds = Vec::new();
        for (i, &e) in self.entries.iter().enumerate() {
            if e >= 2 {
                for a in 1..e {
                    let mut entries = self.entries.clone();
                    entries[i] = a;
                    entries.insert(i + 1, e - a);
                    preds.push(Composition { entries });
                }
            }
            if e == 2 {
                let mut entries = self.entries.clone();
                entries.remove(i);
                preds.push(Composition { entries });
            }
        }
        preds
    }

    /// Whether `target` is obtainable from `self` by a (possibly empty)
    /// sequence of merges and inserts in which every intermediate composition
    /// has norm ≤ `norm_cap`. Reflexive.
    ///
    /// Every operation raises |·|' by exactly 1 and never lowers |·|, which
    /// bounds the search: a witnessing word has length exactly
    /// |target|' − |self|'.
    pub fn succeeds(&self, target: &Composition, norm_cap: u64) -> Result<bool> {
        if norm_cap < target.norm() {
            return Err(Error::InvalidArgument(format!(
                "norm cap {norm_cap} is below |target| = {}; target unreachable by construction",
                target.norm()
            )));
        }
        if self.norm() > target.norm()
            || self.reduced_norm() > target.reduced_norm()
            || self.norm() % 2 != target.norm() % 2
        {
            return Ok(self == target);
        }
        let mut seen: HashSet<Composition> = HashSet::new();
        let mut queue: VecDeque<Composition> = VecDeque::new();
        seen.insert(self.clone());
        queue.push_back(self.clone());
        while let Some(cur) = queue.pop_front() {
            if &cur == target {
                return Ok(true);
            }
            for next in cur.all_operation_results(norm_cap) {
                if next.norm() <= target.norm()
                    && next.reduced_norm() <= target.reduced_norm()
                    && !seen.contains(&next)
                {
                    seen.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
        Ok(false)
    }

    /// All distinct results of one merge or one norm-capped insert.
    pub(crate) fn all_operation_results(&self, norm_cap: u64) -> Vec<Composition> {
        let s = self.support();
        let mut out = Vec::with_capacity(2 * s + 1);
        for j in 1..s {
            out.push(self.merge(j).expect("j in range"));
        }
        if self.norm() + 2 <= norm_cap {
            for k in 0..=s {
                out.push(self.insert(k).expect("k in range"));
            }
        }
        out
    }
}

/// All compositions with |ω| ≤ d and |ω| in the given parity class, in the
/// canonical order (ascending norm, then lexicographic on reversed entries).
///
/// With `exclude_basepoint` set, the basepoint pattern of the class ((∅) for
/// even, (1) for odd) is omitted.
pub fn enumerate(d: u64, parity: Parity, exclude_basepoint: bool) -> Vec<Composition> {
    let mut out = Vec::new();
    let mut m = parity.min_norm();
    while m <= d {
        compositions_of(m, &mut out);
        m += 2;
    }
    if exclude_basepoint {
        let bp = Composition::basepoint(parity);
        out.retain(|c| *c != bp);
    }
    out.sort();
    out
}

/// Appends all compositions of `m` (in no particular order) to `out`.
///
/// Compositions of m correspond to subsets of the m−1 gaps between m unit
/// blocks (stars and bars).
fn compositions_of(m: u64, out: &mut Vec<Composition>) {
    if m == 0 {
        out.push(Composition::empty());
        return;
    }
    let gaps = (m - 1) as u32;
    for mask in 0u64..(1u64 << gaps) {
        let mut entries = Vec::new();
        let mut run = 1u32;
        for g in 0..gaps {
            if mask & (1 << g) != 0 {
                entries.push(run);
                run = 1;
            } else {
                run += 1;
            }
        }
        entries.push(run);
        out.push(Composition { entries });
    }
}

impl Ord for Composition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.norm()
            .cmp(&other.norm())
            .then_with(|| self.entries.iter().rev().cmp(other.entries.iter().rev()))
    }
}

impl PartialOrd for Composition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Composition {
    /// Canonical text form: comma-separated entries, `()` for the empty
    /// pattern. Round-trips through `FromStr`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "()");
        }
        let mut first = true;
        for e in &self.entries {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Composition {
    type Err = Error;

    /// Parses the text form: comma-separated entries with optional power
    /// shorthand (`1^3,2` = (1,1,1,2)); `()` denotes the empty pattern.
    /// A single pair of surrounding parentheses is tolerated.
    fn from_str(s: &str) -> Result<Composition> {
        let mut t = s.trim();
        if t.starts_with('(') && t.ends_with(')') {
            t = t[1..t.len() - 1].trim();
        }
        if t.is_empty() {
            if s.trim().is_empty() {
                return Err(Error::Parse("empty composition string; use \"()\"".into()));
            }
            return Ok(Composition::empty());
        }
        let mut entries = Vec::new();
        for term in t.split(',') {
            let term = term.trim();
            let (base, count) = match term.split_once('^') {
                Some((b, c)) => (b.trim(), c.trim()),
                None => (term, "1"),
            };
            let value: u32 = base
                .parse()
                .map_err(|_| Error::Parse(format!("bad composition entry {term:?}")))?;
            let count: u32 = count
                .parse()
                .map_err(|_| Error::Parse(format!("bad power in composition entry {term:?}")))?;
            if value == 0 || count == 0 {
                return Err(Error::Parse(format!(
                    "composition entries and powers must be ≥ 1, got {term:?}"
                )));
            }
            entries.extend(std::iter::repeat(value).take(count as usize));
        }
        Ok(Composition { entries })
    }
}

impl Serialize for Composition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Composition {
    fn deserialize<D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Composition, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(|e| D::Error::custom(format!("{e}")))
    }
}
