//! Sparse integer matrices with arbitrary-precision entries.
//!
//! Columns are stored as sorted lists of (row, coefficient) pairs. All
//! coefficients are `BigInt` from the start: Smith-normal-form intermediates
//! can grow far beyond the ±1 entries of the boundary matrices, and a
//! fixed-width overflow would corrupt results silently.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    /// `columns[c]` is sorted by row index and holds only nonzero entries.
    columns: Vec<Vec<(usize, BigInt)>>,
}

impl SparseIntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseIntMatrix::zero(n, n);
        for (i, col) in m.columns.iter_mut().enumerate() {
            col.push((i, BigInt::from(1)));
        }
        m
    }

    /// Builds from (row, col, value) triplets; duplicate positions are
    /// summed and exact zeros dropped.
    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, BigInt)>,
    ) -> Result<Self> {
        let mut maps: Vec<std::collections::BTreeMap<usize, BigInt>> = vec![Default::default(); cols];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(Error::InvalidArgument(format!(
                    "entry ({r}, {c}) outside a {rows}×{cols} matrix"
                )));
            }
            *maps[c].entry(r).or_insert_with(BigInt::zero) += v;
        }
        let columns = maps
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Ok(SparseIntMatrix { rows, cols, columns })
    }

    /// Dense construction helper, mainly for tests and small examples.
    pub fn from_dense_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged dense matrix");
        let entries = rows.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, v)| **v != 0)
                .map(move |(j, v)| (i, j, BigInt::from(*v)))
        });
        SparseIntMatrix::from_entries(r, c, entries).expect("in-bounds by construction")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn column(&self, c: usize) -> &[(usize, BigInt)] {
        &self.columns[c]
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        match self.columns[c].binary_search_by_key(&r, |(row, _)| *row) {
            Ok(idx) => self.columns[c][idx].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut cols: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                cols[*r].push((c, v.clone()));
            }
        }
        // Walking columns in order yields each transposed column sorted.
        SparseIntMatrix {
            rows: self.cols,
            cols: self.rows,
            columns: cols,
        }
    }

    /// Matrix product self · rhs.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::InvalidArgument(format!(
                "cannot multiply {}×{} by {}×{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut columns = Vec::with_capacity(rhs.cols);
        for rc in &rhs.columns {
            let mut acc: std::collections::BTreeMap<usize, BigInt> = Default::default();
            for (k, w) in rc {
                for (r, v) in &self.columns[*k] {
                    let e = acc.entry(*r).or_insert_with(BigInt::zero);
                    *e += v * w;
                }
            }
            columns.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        Ok(SparseIntMatrix {
            rows: self.rows,
            cols: rhs.cols,
            columns,
        })
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut dense = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                dense[*r][c] = v.clone();
            }
        }
        dense
    }
}
