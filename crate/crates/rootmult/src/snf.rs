//! Smith normal form over the integers, exact at every step.
//!
//! The boundary matrices this crate produces are extremely sparse with ±1
//! entries, so the default path first runs a sparse sweep that eliminates
//! unit pivots (each contributes an invariant factor 1), then finishes the
//! small residual densely with minimal-absolute-value pivoting and a
//! divisibility fix-up. When unimodular transforms are requested the whole
//! reduction runs densely so the row/column operations can be mirrored.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::matrix::SparseIntMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfTransforms {
    /// Unimodular row transform (rows × rows).
    pub u: SparseIntMatrix,
    /// Unimodular column transform (cols × cols).
    pub v: SparseIntMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    /// The nonzero invariant factors d_1 | d_2 | …, all positive.
    pub diagonal: Vec<BigInt>,
    /// Number of nonzero invariant factors = rational rank of the input.
    pub rank: usize,
    /// Present when requested: u · input · v equals the embedded diagonal.
    pub transforms: Option<SnfTransforms>,
}

impl SnfResult {
    /// Torsion divisors: the invariant factors > 1, in divisibility order.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }

    /// The diagonal embedded in a rows × cols matrix, for reconstruction
    /// checks.
    pub fn embedded_diagonal(&self, rows: usize, cols: usize) -> SparseIntMatrix {
        SparseIntMatrix::from_entries(
            rows,
            cols,
            self.diagonal
                .iter()
                .enumerate()
                .map(|(i, d)| (i, i, d.clone())),
        )
        .expect("rank never exceeds either dimension")
    }
}

pub fn smith_normal_form(m: &SparseIntMatrix, want_transforms: bool) -> SnfResult {
    if want_transforms {
        let mut a = m.to_dense();
        let mut u = dense_identity(m.rows());
        let mut v = dense_identity(m.cols());
        let diagonal = dense_snf(&mut a, Some(&mut u), Some(&mut v));
        let rank = diagonal.len();
        SnfResult {
            diagonal,
            rank,
            transforms: Some(SnfTransforms {
                u: from_dense_big(&u),
                v: from_dense_big(&v),
            }),
        }
    } else {
        let (units, mut residual) = sparse_unit_sweep(m);
        let rest = dense_snf(&mut residual, None, None);
        let mut diagonal = vec![BigInt::one(); units];
        diagonal.extend(rest);
        let rank = diagonal.len();
        SnfResult {
            diagonal,
            rank,
            transforms: None,
        }
    }
}

/// Rational rank via Smith reduction (the default exact path).
pub fn rank(m: &SparseIntMatrix) -> usize {
    smith_normal_form(m, false).rank
}

/// Independent rank oracle: fraction-free (Bareiss) Gaussian elimination
/// with full pivoting. Shares no code with the Smith reduction.
pub fn bareiss_rank(m: &SparseIntMatrix) -> usize {
    let mut a = m.to_dense();
    let rows = m.rows();
    let cols = m.cols();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pivot_row) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pivot_row);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                debug_assert!(
                    (&num % &prev).is_zero(),
                    "fraction-free elimination produced an inexact division"
                );
                a[i][j] = num / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Rank over the prime field GF(p), by plain dense elimination; another
/// independent oracle. A matrix has p-torsion in its cokernel exactly when
/// this drops below the rational rank.
pub fn rank_mod_p(m: &SparseIntMatrix, p: u64) -> usize {
    assert!(p >= 2, "modulus must be a prime ≥ 2");
    let p = i128::from(p);
    let reduce = |v: &BigInt| -> i128 {
        let r: BigInt = v % p;
        let mut r = i128::try_from(&r).expect("|r| < p fits");
        if r < 0 {
            r += p;
        }
        r
    };
    let mut a: Vec<Vec<i128>> = m
        .to_dense()
        .iter()
        .map(|row| row.iter().map(reduce).collect())
        .collect();
    let rows = m.rows();
    let cols = m.cols();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pivot_row) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pivot_row);
        let inv = mod_inverse(a[r][c], p);
        for i in r + 1..rows {
            if a[i][c] != 0 {
                let factor = a[i][c] * inv % p;
                for j in c..cols {
                    a[i][j] = ((a[i][j] - factor * a[r][j]) % p + p) % p;
                }
            }
        }
        r += 1;
    }
    r
}

fn mod_inverse(x: i128, p: i128) -> i128 {
    // Fermat: x^(p−2) mod p, p prime.
    let mut base = x % p;
    let mut exp = p - 2;
    let mut acc = 1i128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Eliminates ±1 pivots with sparse column operations, returning the number
/// of eliminated pivots and the dense residual submatrix (which contains no
/// unit entries).
fn sparse_unit_sweep(m: &SparseIntMatrix) -> (usize, Vec<Vec<BigInt>>) {
    use std::collections::{BTreeMap, BTreeSet};

    let mut cols: Vec<BTreeMap<usize, BigInt>> = (0..m.cols())
        .map(|c| m.column(c).iter().cloned().collect())
        .collect();
    let mut row_to_cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.rows()];
    for (c, col) in cols.iter().enumerate() {
        for r in col.keys() {
            row_to_cols[*r].insert(c);
        }
    }
    let mut active_cols: BTreeSet<usize> = (0..m.cols()).collect();
    let mut units = 0;

    loop {
        // Markowitz-style pivot choice: among unit entries, minimize the
        // fill bound (row degree − 1) · (column degree − 1).
        let mut best: Option<(usize, usize, usize)> = None; // (score, r, c)
        for &c in &active_cols {
            let col_deg = cols[c].len();
            for (r, v) in &cols[c] {
                if v.magnitude().is_one() {
                    let score = (row_to_cols[*r].len() - 1) * (col_deg - 1);
                    if best.map_or(true, |(s, _, _)| score < s) {
                        best = Some((score, *r, c));
                    }
                }
            }
        }
        let Some((_, pr, pc)) = best else { break };

        let pivot = cols[pc][&pr].clone(); // ±1
        let pivot_col: Vec<(usize, BigInt)> = cols[pc]
            .iter()
            .filter(|(r, _)| **r != pr)
            .map(|(r, v)| (*r, v.clone()))
            .collect();
        // Clear row pr from every other column (column operations). The
        // factor is entry/pivot, which for a ±1 pivot is entry · pivot.
        let touching: Vec<usize> = row_to_cols[pr].iter().copied().filter(|c| *c != pc).collect();
        for c2 in touching {
            let f = cols[c2].remove(&pr).expect("indexed by row_to_cols") * &pivot;
            row_to_cols[pr].remove(&c2);
            for (r2, w) in &pivot_col {
                let slot = cols[c2].entry(*r2).or_insert_with(BigInt::zero);
                *slot -= &f * w;
                if slot.is_zero() {
                    cols[c2].remove(r2);
                    row_to_cols[*r2].remove(&c2);
                } else {
                    row_to_cols[*r2].insert(c2);
                }
            }
        }
        // Row pr is now zero outside the pivot column, so clearing the rest
        // of the pivot column with row operations touches nothing else.
        for (r2, _) in &pivot_col {
            row_to_cols[*r2].remove(&pc);
        }
        cols[pc].clear();
        row_to_cols[pr].clear();
        active_cols.remove(&pc);
        units += 1;
    }

    // Collect the residual into a dense matrix over the surviving rows.
    let live_rows: Vec<usize> = (0..m.rows())
        .filter(|r| !row_to_cols[*r].is_empty())
        .collect();
    let row_pos: BTreeMap<usize, usize> =
        live_rows.iter().enumerate().map(|(i, r)| (*r, i)).collect();
    let live_cols: Vec<usize> = active_cols.iter().copied().filter(|c| !cols[*c].is_empty()).collect();
    let mut residual = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
    for (j, c) in live_cols.iter().enumerate() {
        for (r, v) in &cols[*c] {
            residual[row_pos[r]][j] = v.clone();
        }
    }
    (units, residual)
}

fn dense_identity(n: usize) -> Vec<Vec<BigInt>> {
    let mut id = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in id.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    id
}

fn from_dense_big(a: &[Vec<BigInt>]) -> SparseIntMatrix {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    SparseIntMatrix::from_entries(
        rows,
        cols,
        a.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(move |(j, v)| (i, j, v.clone()))
        }),
    )
    .expect("dimensions derived from the data")
}

/// In-place dense Smith reduction. Row operations are mirrored on `u`
/// (tracking U with U·M·V = D) and column operations on `v`. Returns the
/// nonzero invariant factors, positive and in divisibility order.
fn dense_snf(
    a: &mut Vec<Vec<BigInt>>,
    mut u: Option<&mut Vec<Vec<BigInt>>>,
    mut v: Option<&mut Vec<Vec<BigInt>>>,
) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let bound = rows.min(cols);
    let mut t = 0;

    while t < bound {
        // Global minimal-|value| pivot over the active block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && pivot
                        .map(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(a, &mut u, t, pi);
        swap_cols(a, &mut v, t, pj);

        loop {
            // Clear column t below the pivot.
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = &a[i][t] / &a[t][t];
                    if !q.is_zero() {
                        row_axpy(a, &mut u, i, t, &q);
                    }
                }
            }
            if let Some(i) = (t + 1..rows).find(|&i| !a[i][t].is_zero()) {
                // A remainder strictly smaller than the pivot surfaced.
                swap_rows(a, &mut u, t, i);
                continue;
            }
            // Clear row t right of the pivot.
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = &a[t][j] / &a[t][t];
                    if !q.is_zero() {
                        col_axpy(a, &mut v, j, t, &q);
                    }
                }
            }
            if let Some(j) = (t + 1..cols).find(|&j| !a[t][j].is_zero()) {
                swap_cols(a, &mut v, t, j);
                continue;
            }
            // Divisibility fix-up: the pivot must divide the whole residual
            // block; folding an offending row into row t drives the pivot
            // toward the gcd.
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match offender {
                Some(i) => {
                    let minus_one = BigInt::from(-1);
                    row_axpy(a, &mut u, t, i, &minus_one); // row t += row i
                }
                None => break,
            }
        }
        t += 1;
    }

    let mut diagonal = Vec::new();
    for i in 0..t {
        if a[i][i].is_negative() {
            negate_row(a, &mut u, i);
        }
        if !a[i][i].is_zero() {
            diagonal.push(a[i][i].clone());
        }
    }
    diagonal
}

fn swap_rows(a: &mut [Vec<BigInt>], u: &mut Option<&mut Vec<Vec<BigInt>>>, i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    if let Some(u) = u {
        u.swap(i, j);
    }
}

fn swap_cols(a: &mut [Vec<BigInt>], v: &mut Option<&mut Vec<Vec<BigInt>>>, i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in a.iter_mut() {
        row.swap(i, j);
    }
    if let Some(v) = v {
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    }
}

/// row_i -= q · row_t (on the matrix and mirrored on u).
fn row_axpy(
    a: &mut [Vec<BigInt>],
    u: &mut Option<&mut Vec<Vec<BigInt>>>,
    i: usize,
    t: usize,
    q: &BigInt,
) {
    let (src, dst) = twin_rows(a, t, i);
    for (d, s) in dst.iter_mut().zip(src.iter()) {
        *d -= q * s;
    }
    if let Some(u) = u {
        let (src, dst) = twin_rows(u, t, i);
        for (d, s) in dst.iter_mut().zip(src.iter()) {
            *d -= q * s;
        }
    }
}

/// col_j -= q · col_t (on the matrix and mirrored on v).
fn col_axpy(
    a: &mut [Vec<BigInt>],
    v: &mut Option<&mut Vec<Vec<BigInt>>>,
    j: usize,
    t: usize,
    q: &BigInt,
) {
    for row in a.iter_mut() {
        let delta = q * &row[t];
        row[j] -= delta;
    }
    if let Some(v) = v {
        for row in v.iter_mut() {
            let delta = q * &row[t];
            row[j] -= delta;
        }
    }
}

fn negate_row(a: &mut [Vec<BigInt>], u: &mut Option<&mut Vec<Vec<BigInt>>>, i: usize) {
    for x in a[i].iter_mut() {
        *x = -std::mem::take(x);
    }
    if let Some(u) = u {
        for x in u[i].iter_mut() {
            *x = -std::mem::take(x);
        }
    }
}

/// Disjoint mutable/shared access to rows t (source) and i (destination).
fn twin_rows(a: &mut [Vec<BigInt>], t: usize, i: usize) -> (&[BigInt], &mut Vec<BigInt>) {
    assert_ne!(t, i);
    if t < i {
        let (lo, hi) = a.split_at_mut(i);
        (&lo[t], &mut hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(t);
        (&hi[0], &mut lo[i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn snf_of(rows: &[Vec<i64>], transforms: bool) -> SnfResult {
        smith_normal_form(&SparseIntMatrix::from_dense_i64(rows), transforms)
    }

    fn diag_i64(r: &SnfResult) -> Vec<i64> {
        r.diagonal
            .iter()
            .map(|d| i64::try_from(d).expect("small in tests"))
            .collect()
    }

    #[test]
    fn frozen_examples() {
        let r = snf_of(&[vec![2, 4], vec![6, 8]], false);
        assert_eq!(diag_i64(&r), vec![2, 4]);
        assert_eq!(r.rank, 2);

        let r = snf_of(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], false);
        assert_eq!(diag_i64(&r), vec![1, 1, 1]);

        let r = snf_of(&[vec![0, 0], vec![0, 0]], false);
        assert_eq!(diag_i64(&r), Vec::<i64>::new());
        assert_eq!(r.rank, 0);

        // Diagonal input is still normalized into a divisibility chain.
        let r = snf_of(&[vec![4, 0], vec![0, 6]], false);
        assert_eq!(diag_i64(&r), vec![2, 12]);

        let r = snf_of(&[vec![2, 0], vec![0, -3]], false);
        assert_eq!(diag_i64(&r), vec![1, 6]);
    }

    #[test]
    fn torsion_filter_and_embedding() {
        let r = snf_of(&[vec![1, 0], vec![0, 4]], false);
        assert_eq!(diag_i64(&r), vec![1, 4]);
        assert_eq!(r.torsion(), vec![BigInt::from(4)]);
        let d = r.embedded_diagonal(2, 3);
        assert_eq!(d.get(1, 1), BigInt::from(4));
        assert_eq!(d.get(1, 2), BigInt::from(0));
    }

    fn random_dense(rng: &mut ChaCha8Rng, rows: usize, cols: usize, span: i64) -> Vec<Vec<i64>> {
        (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-span..=span)).collect())
            .collect()
    }

    #[test]
    fn random_matrices_validate_against_oracles() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..200 {
            let rows = rng.gen_range(1..=6);
            let cols = rng.gen_range(1..=6);
            let dense = random_dense(&mut rng, rows, cols, 9);
            let m = SparseIntMatrix::from_dense_i64(&dense);

            let plain = smith_normal_form(&m, false);
            let with_t = smith_normal_form(&m, true);
            // Hybrid and dense paths agree.
            assert_eq!(plain.diagonal, with_t.diagonal, "input {dense:?}");

            // Divisibility chain.
            for w in plain.diagonal.windows(2) {
                assert!((&w[1] % &w[0]).is_zero(), "chain broken on {dense:?}");
            }
            assert!(plain.diagonal.iter().all(|d| d > &BigInt::from(0)));

            // Rank against the independent fraction-free oracle.
            assert_eq!(plain.rank, bareiss_rank(&m), "rank mismatch on {dense:?}");

            // Transpose invariance of the invariant factors.
            let t = smith_normal_form(&m.transpose(), false);
            assert_eq!(plain.diagonal, t.diagonal);

            // U · m · V reconstructs the embedded diagonal.
            let tr = with_t.transforms.as_ref().unwrap();
            let product = tr.u.mul(&m).unwrap().mul(&tr.v).unwrap();
            assert_eq!(product, with_t.embedded_diagonal(rows, cols), "on {dense:?}");

            // rank over GF(p) counts the invariant factors coprime to p.
            for p in [2u64, 3, 5, 7] {
                let expected = plain
                    .diagonal
                    .iter()
                    .filter(|f| !(*f % p).is_zero())
                    .count();
                assert_eq!(rank_mod_p(&m, p), expected, "mod {p} on {dense:?}");
            }
        }
    }

    #[test]
    fn sparse_sweep_path_matches_dense_on_unit_heavy_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xfeed);
        for _ in 0..100 {
            let rows = rng.gen_range(1..=12);
            let cols = rng.gen_range(1..=12);
            // Boundary-matrix-like inputs: mostly zero, entries in {−1, 1},
            // with an occasional larger value.
            let dense: Vec<Vec<i64>> = (0..rows)
                .map(|_| {
                    (0..cols)
                        .map(|_| match rng.gen_range(0..10) {
                            0..=2 => [-1i64, 1][rng.gen_range(0..2)],
                            3 => rng.gen_range(-4..=4),
                            _ => 0,
                        })
                        .collect()
                })
                .collect();
            let m = SparseIntMatrix::from_dense_i64(&dense);
            let hybrid = smith_normal_form(&m, false);
            let dense_only = smith_normal_form(&m, true);
            assert_eq!(hybrid.diagonal, dense_only.diagonal, "on {dense:?}");
            assert_eq!(hybrid.rank, bareiss_rank(&m));
        }
    }

    #[test]
    fn bareiss_handles_rank_deficiency() {
        // Rank 1: second row is a multiple of the first.
        let m = SparseIntMatrix::from_dense_i64(&[vec![2, 4, 6], vec![3, 6, 9]]);
        assert_eq!(bareiss_rank(&m), 1);
        assert_eq!(rank(&m), 1);
        // A zero column in the middle.
        let m = SparseIntMatrix::from_dense_i64(&[vec![1, 0, 2], vec![5, 0, 11]]);
        assert_eq!(bareiss_rank(&m), 2);
        assert_eq!(rank(&m), 2);
        assert_eq!(bareiss_rank(&SparseIntMatrix::zero(3, 4)), 0);
    }
}
