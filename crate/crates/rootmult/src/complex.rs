//! The graded integer differential complexes attached to a degree cap d:
//! the ambient complex on all patterns of matching parity, the subcomplex
//! spanned by a closed poset Θ, the quotient complex on the complement, and
//! their duals.
//!
//! The grading of a basis pattern ω is g = d − |ω|'; the boundary operator
//! ∂ = ∂_M + ∂_I raises |ω|' by one and therefore lowers g by one. ∂_I is
//! switched off on patterns of full norm (an insert would overshoot the cap).

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;

use crate::composition::{enumerate, Composition, Parity};
use crate::error::{Error, Result};
use crate::matrix::SparseIntMatrix;
use crate::poset::ClosedPoset;

/// A formal integer combination of compositions, with like terms collected
/// and zero coefficients dropped. Coefficients stay tiny (bounded by the
/// number of coincident operation results), so i64 is ample.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Chain {
    terms: BTreeMap<Composition, i64>,
}

impl Chain {
    pub fn zero() -> Self {
        Chain::default()
    }

    pub fn term(w: Composition, coeff: i64) -> Self {
        let mut chain = Chain::zero();
        chain.add(w, coeff);
        chain
    }

    pub fn add(&mut self, w: Composition, coeff: i64) {
        if coeff == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn add_chain(&mut self, other: &Chain) {
        for (w, c) in &other.terms {
            self.add(w.clone(), *c);
        }
    }

    pub fn coeff(&self, w: &Composition) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Composition, i64)> {
        self.terms.iter().map(|(w, c)| (w, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Linear extension of a composition-level operator.
    pub fn apply(&self, op: impl Fn(&Composition) -> Chain) -> Chain {
        let mut out = Chain::zero();
        for (w, c) in &self.terms {
            for (w2, c2) in op(w).terms {
                out.add(w2, c * c2);
            }
        }
        out
    }
}

impl fmt::Display for Chain {
    /// Signed term list in canonical order, e.g. `+1*(2) -1*(1,2,1)`;
    /// the zero chain prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let sign = if *c < 0 { '-' } else { '+' };
            write!(f, "{sign}{}*({w})", c.abs())?;
        }
        Ok(())
    }
}

/// The merge part of the boundary: ∂_M(ω) = −Σ_{k=1}^{s_ω−1} (−1)^k M_k(ω).
pub fn partial_m(w: &Composition) -> Chain {
    let mut out = Chain::zero();
    let s = w.support();
    for k in 1..s {
        let sign = if k % 2 == 0 { -1 } else { 1 }; // −(−1)^k
        out.add(w.merge(k).expect("k < s"), sign);
    }
    out
}

/// The insert part of the boundary, capped: ∂_I(ω) = Σ_{k=0}^{s_ω} (−1)^k I_k(ω)
/// when |ω| + 2 ≤ cap, and 0 otherwise.
pub fn partial_i(w: &Composition, cap: u64) -> Chain {
    let mut out = Chain::zero();
    if w.norm() + 2 > cap {
        return out;
    }
    for k in 0..=w.support() {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        out.add(w.insert(k).expect("k ≤ s"), sign);
    }
    out
}

/// The full boundary ∂(ω) = ∂_M(ω) + ∂_I(ω) at cap d, with like terms
/// collected. Requires |ω| ≤ d of matching parity, ω not the basepoint.
pub fn boundary_of(w: &Composition, d: u64) -> Result<Chain> {
    if w.norm() > d {
        return Err(Error::InvalidArgument(format!(
            "pattern {w} has norm {} above the cap {d}",
            w.norm()
        )));
    }
    if w.norm() % 2 != d % 2 {
        return Err(Error::InvalidArgument(format!(
            "pattern {w} has norm parity different from d = {d}"
        )));
    }
    if w.is_basepoint(Parity::of(d)) {
        return Err(Error::InvalidArgument(format!(
            "the basepoint pattern {w} has no boundary in the complex"
        )));
    }
    let mut out = partial_m(w);
    out.add_chain(&partial_i(w, d));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexLabel {
    Ambient,
    Theta,
    Quotient,
    DualQuotient,
}

impl fmt::Display for ComplexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ComplexLabel::Ambient => "ambient",
            ComplexLabel::Theta => "theta",
            ComplexLabel::Quotient => "quotient",
            ComplexLabel::DualQuotient => "dualQuotient",
        };
        write!(f, "{s}")
    }
}

/// Whether the stored maps lower the grading (boundary complexes) or raise
/// it (dual complexes).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Lowering,
    Raising,
}

/// A finite family of free Z-modules C_1, …, C_d with one structure map per
/// adjacent pair of gradings. Immutable after construction; construction
/// verifies the grading of every basis element and that adjacent maps
/// compose to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedComplex {
    d: u64,
    label: ComplexLabel,
    direction: Direction,
    /// `bases[g]` for g in 0..=d (index 0 always empty), canonical order.
    bases: Vec<Vec<Composition>>,
    /// `mats[g]` for g in 1..=d: for `Lowering` the map C_g → C_{g−1}, for
    /// `Raising` the map C_{g−1} → C_g. `mats[0]` is a 0×0 placeholder.
    mats: Vec<SparseIntMatrix>,
}

/// How an assembly routine treats a boundary term.
enum TermFate {
    Keep,
    Drop,
}

impl GradedComplex {
    /// The complex on every pattern of matching parity and norm ≤ d, with
    /// the basepoint excluded.
    pub fn ambient(d: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!(
                "the ambient complex needs d ≥ 2, got {d}"
            )));
        }
        let elems = enumerate(d, Parity::of(d), true);
        Self::assemble(d, ComplexLabel::Ambient, elems, |_| TermFate::Keep)
    }

    /// The subcomplex spanned by Θ itself. Closedness of Θ guarantees the
    /// boundary stays inside; assembly re-asserts this.
    pub fn theta_complex(theta: &ClosedPoset) -> Result<Self> {
        let elems: Vec<Composition> = theta.elements().cloned().collect();
        Self::assemble(theta.d(), ComplexLabel::Theta, elems, |_| TermFate::Keep)
    }

    /// The quotient complex on the complement basis: the boundary with all
    /// terms lying in Θ deleted.
    pub fn quotient_complex(theta: &ClosedPoset) -> Result<Self> {
        let elems = theta.complement_basis();
        Self::assemble(theta.d(), ComplexLabel::Quotient, elems, |w| {
            if theta.contains(w) {
                TermFate::Drop
            } else {
                TermFate::Keep
            }
        })
    }

    fn assemble(
        d: u64,
        label: ComplexLabel,
        elems: Vec<Composition>,
        fate: impl Fn(&Composition) -> TermFate,
    ) -> Result<Self> {
        let gradings = d as usize + 1;
        let mut bases: Vec<Vec<Composition>> = vec![Vec::new(); gradings];
        for w in elems {
            let g = (d - w.reduced_norm()) as usize;
            bases[g].push(w);
        }
        for b in &mut bases {
            b.sort();
        }
        let index: Vec<HashMap<&Composition, usize>> = bases
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, w)| (w, i)).collect())
            .collect();

        let mut mats = vec![SparseIntMatrix::zero(0, 0)];
        for g in 1..gradings {
            let mut entries: Vec<(usize, usize, BigInt)> = Vec::new();
            for (col, w) in bases[g].iter().enumerate() {
                for (t, c) in boundary_of(w, d)?.terms() {
                    match fate(t) {
                        TermFate::Drop => continue,
                        TermFate::Keep => match index[g - 1].get(t) {
                            Some(row) => entries.push((*row, col, BigInt::from(c))),
                            None => {
                                return Err(Error::Integrity(format!(
                                    "boundary term {t} of {w} escapes the {label} basis"
                                )))
                            }
                        },
                    }
                }
            }
            mats.push(SparseIntMatrix::from_entries(
                bases[g - 1].len(),
                bases[g].len(),
                entries,
            )?);
        }

        let complex = GradedComplex {
            d,
            label,
            direction: Direction::Lowering,
            bases,
            mats,
        };
        complex.validate()?;
        Ok(complex)
    }

    /// The dual complex: same bases, every map transposed, arrows reversed.
    pub fn dual(&self) -> GradedComplex {
        let complex = GradedComplex {
            d: self.d,
            label: ComplexLabel::DualQuotient,
            direction: match self.direction {
                Direction::Lowering => Direction::Raising,
                Direction::Raising => Direction::Lowering,
            },
            bases: self.bases.clone(),
            mats: self.mats.iter().map(SparseIntMatrix::transpose).collect(),
        };
        complex
            .validate()
            .expect("the dual of a valid complex is valid");
        complex
    }

    fn validate(&self) -> Result<()> {
        for g in 1..=self.d as usize {
            let (expect_rows, expect_cols) = match self.direction {
                Direction::Lowering => (self.bases[g - 1].len(), self.bases[g].len()),
                Direction::Raising => (self.bases[g].len(), self.bases[g - 1].len()),
            };
            if self.mats[g].rows() != expect_rows || self.mats[g].cols() != expect_cols {
                return Err(Error::Integrity(format!(
                    "structure map at grading {g} has shape {}×{}, expected {expect_rows}×{expect_cols}",
                    self.mats[g].rows(),
                    self.mats[g].cols()
                )));
            }
        }
        for (g, basis) in self.bases.iter().enumerate() {
            for w in basis {
                if (self.d - w.reduced_norm()) as usize != g {
                    return Err(Error::Integrity(format!(
                        "basis element {w} filed under grading {g}, but d − |ω|' = {}",
                        self.d - w.reduced_norm()
                    )));
                }
            }
        }
        for g in 2..=self.d as usize {
            let composite = match self.direction {
                Direction::Lowering => self.mats[g - 1].mul(&self.mats[g])?,
                Direction::Raising => self.mats[g].mul(&self.mats[g - 1])?,
            };
            if !composite.is_zero() {
                return Err(Error::Integrity(format!(
                    "maps at gradings {g} and {} do not compose to zero",
                    g - 1
                )));
            }
        }
        Ok(())
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn label(&self) -> ComplexLabel {
        self.label
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn dim(&self, g: u64) -> usize {
        self.bases.get(g as usize).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.bases.iter().map(Vec::len).sum()
    }

    pub fn basis(&self, g: u64) -> &[Composition] {
        self.bases
            .get(g as usize)
            .map_or(&[], Vec::as_slice)
    }

    /// The stored maps, indexed 1..=d (index 0 is a placeholder). Each map
    /// serves as the out-map of one grading and the in-map of its neighbor,
    /// which lets homology run one Smith reduction per matrix.
    pub(crate) fn stored_maps(&self) -> &[SparseIntMatrix] {
        &self.mats
    }

    /// The structure map leaving grading g (towards g−1 when lowering,
    /// towards g+1 when raising); `None` is the zero map.
    pub fn map_out_of(&self, g: u64) -> Option<&SparseIntMatrix> {
        match self.direction {
            Direction::Lowering => {
                if (1..=self.d).contains(&g) {
                    Some(&self.mats[g as usize])
                } else {
                    None
                }
            }
            Direction::Raising => {
                if g + 1 <= self.d {
                    Some(&self.mats[(g + 1) as usize])
                } else {
                    None
                }
            }
        }
    }

    /// The structure map entering grading g; `None` is the zero map.
    pub fn map_into(&self, g: u64) -> Option<&SparseIntMatrix> {
        match self.direction {
            Direction::Lowering => {
                if g + 1 <= self.d {
                    Some(&self.mats[(g + 1) as usize])
                } else {
                    None
                }
            }
            Direction::Raising => {
                if (1..=self.d).contains(&g) {
                    Some(&self.mats[g as usize])
                } else {
                    None
                }
            }
        }
    }

    /// Σ_g (−1)^g dim C_g (signed; callers interested in bouquet counts take
    /// absolute values of combinations).
    pub fn euler_number(&self) -> i64 {
        self.bases
            .iter()
            .enumerate()
            .map(|(g, b)| {
                let sign = if g % 2 == 0 { 1 } else { -1 };
                sign * b.len() as i64
            })
            .sum()
    }

    /// Golden-test dump: per grading (top down), one line per basis element
    /// `g=<int> (<composition>) -> <signed term list>` showing its image
    /// under the map out of that grading.
    pub fn debug_dump(&self) -> String {
        let mut out = String::new();
        for g in (1..=self.d).rev() {
            let target: &[Composition] = match self.direction {
                Direction::Lowering => self.basis(g - 1),
                Direction::Raising => self.basis(g + 1),
            };
            for (i, w) in self.basis(g).iter().enumerate() {
                let mut image = Chain::zero();
                if let Some(m) = self.map_out_of(g) {
                    for (row, v) in m.column(i) {
                        let coeff = i64::try_from(v).expect("assembly coefficients are small");
                        image.add(target[*row].clone(), coeff);
                    }
                }
                out.push_str(&format!("g={g} ({w}) -> {image}\n"));
            }
        }
        out
    }
}
