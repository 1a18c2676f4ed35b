//! Matrix storage.
//!
//! * [`DenseMatrix`]: row-major, used for raw module data and the oracle.
//! * [`SparseCol`]: sorted `(row, value)` lists, used by every column reduction.
//! * [`BiSparse`]: a sparse matrix indexed both ways, so that the row *and*
//!   column additions issued by the streaming algorithms cost time
//!   proportional to the entries they touch.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

/// Row-major dense matrix of residues.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "{:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<Vec<u32>>) -> Result<Self> {
        if data.len() != rows {
            return Err(Error::shape("matrix rows", rows, data.len()));
        }
        let mut flat = Vec::with_capacity(rows * cols);
        for (i, r) in data.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::shape(format!("matrix row {i}"), cols, r.len()));
            }
            flat.extend(r);
        }
        Ok(DenseMatrix {
            rows,
            cols,
            data: flat,
        })
    }

    /// Convenience for literals in tests and examples; infers the width.
    pub fn from_vecs(data: &[Vec<u32>]) -> Self {
        let cols = data.first().map_or(0, Vec::len);
        DenseMatrix::from_rows(data.len(), cols, data.to_vec()).expect("ragged matrix literal")
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// `self * other`; panics on inner-dimension mismatch.
    pub fn mul(&self, k: Field, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(r, t);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(t, c);
                    if b != 0 {
                        let v = k.add(out.get(r, c), k.mul(a, b));
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, k: Field, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| k.add(acc, k.mul(a, b)))
            })
            .collect()
    }

    pub fn scaled(&self, k: Field, s: u32) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| k.mul(v, s)).collect(),
        }
    }

    pub fn sparse_columns(&self) -> Vec<SparseCol> {
        (0..self.cols)
            .map(|c| {
                (0..self.rows)
                    .filter_map(|r| {
                        let v = self.get(r, c);
                        (v != 0).then_some((r, v))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn from_sparse_columns(rows: usize, cols: &[SparseCol]) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(rows, cols.len());
        for (c, col) in cols.iter().enumerate() {
            for &(r, v) in col {
                m.set(r, c, v);
            }
        }
        m
    }

    /// Fails if some entry is not a residue modulo `k.p()`.
    pub fn check_residues(&self, k: Field, context: &str) -> Result<()> {
        for (i, &v) in self.data.iter().enumerate() {
            k.residue(v as u64, || {
                format!("{context} entry ({}, {})", i / self.cols.max(1), i % self.cols.max(1))
            })?;
        }
        Ok(())
    }
}

/// A sparse column: `(row, value)` pairs sorted by row, values nonzero.
pub type SparseCol = Vec<(usize, u32)>;

/// `target + mu * source` for sorted sparse columns.
pub fn add_scaled(k: Field, target: &[(usize, u32)], mu: u32, source: &[(usize, u32)]) -> SparseCol {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < source.len() {
        if j == source.len() || (i < target.len() && target[i].0 < source[j].0) {
            out.push(target[i]);
            i += 1;
        } else if i == target.len() || source[j].0 < target[i].0 {
            out.push((source[j].0, k.mul(mu, source[j].1)));
            j += 1;
        } else {
            let v = k.add(target[i].1, k.mul(mu, source[j].1));
            if v != 0 {
                out.push((target[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Lowest (largest-row) nonzero entry.
#[inline]
pub fn lowest(col: &[(usize, u32)]) -> Option<(usize, u32)> {
    col.last().copied()
}

/// Outcome of [`reduce_columns`].
#[derive(Clone, Debug, Default)]
pub struct Reduction {
    /// `pivot[c]` is the lowest row of reduced column `c`, if nonzero.
    pub pivot: Vec<Option<usize>>,
    /// `pivot_col[r]` is the column whose pivot is row `r`.
    pub pivot_col: BTreeMap<usize, usize>,
}

/// Left-to-right column reduction with lowest-nonzero pivots.
///
/// Every elimination `col_t += mu * col_s` is reported to `on_op(t, s, mu)`
/// in execution order, so callers can mirror it onto other matrices.
pub fn reduce_columns(
    k: Field,
    cols: &mut [SparseCol],
    mut on_op: impl FnMut(usize, usize, u32),
) -> Reduction {
    let mut red = Reduction {
        pivot: vec![None; cols.len()],
        pivot_col: BTreeMap::new(),
    };
    for t in 0..cols.len() {
        while let Some((r, v)) = lowest(&cols[t]) {
            match red.pivot_col.get(&r) {
                Some(&s) => {
                    let w = lowest(&cols[s]).expect("pivot column is nonzero").1;
                    let mu = k.neg(k.div(v, w));
                    let updated = add_scaled(k, &cols[t], mu, &cols[s]);
                    cols[t] = updated;
                    on_op(t, s, mu);
                }
                None => {
                    red.pivot[t] = Some(r);
                    red.pivot_col.insert(r, t);
                    break;
                }
            }
        }
    }
    red
}

/// Sparse matrix with column maps plus per-row supports.
#[derive(Clone, Debug)]
pub struct BiSparse {
    k: Field,
    cols: Vec<BTreeMap<usize, u32>>,
    rows: Vec<BTreeSet<usize>>,
    ops: u64,
}

impl BiSparse {
    pub fn new(k: Field) -> Self {
        BiSparse {
            k,
            cols: Vec::new(),
            rows: Vec::new(),
            ops: 0,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    /// Number of entry updates performed by row and column additions.
    pub fn ops(&self) -> u64 {
        self.ops
    }

    pub fn push_row(&mut self) -> usize {
        self.rows.push(BTreeSet::new());
        self.rows.len() - 1
    }

    /// Appends a column; entries must reference existing rows.
    pub fn push_col(&mut self, entries: impl IntoIterator<Item = (usize, u32)>) -> usize {
        let c = self.cols.len();
        self.cols.push(BTreeMap::new());
        for (r, v) in entries {
            self.set(r, c, v);
        }
        c
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.cols[c].get(&r).copied().unwrap_or(0)
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        let v = v % self.k.p();
        if v == 0 {
            if self.cols[c].remove(&r).is_some() {
                self.rows[r].remove(&c);
            }
        } else {
            self.cols[c].insert(r, v);
            self.rows[r].insert(c);
        }
    }

    #[inline]
    fn add_at(&mut self, r: usize, c: usize, delta: u32) {
        let v = self.k.add(self.get(r, c), delta);
        self.set(r, c, v);
        self.ops += 1;
    }

    /// `col_t += mu * col_s`.
    pub fn col_axpy(&mut self, t: usize, mu: u32, s: usize) {
        if mu == 0 || t == s {
            assert!(t != s || mu == 0, "column added to itself");
            return;
        }
        let src: Vec<(usize, u32)> = self.cols[s].iter().map(|(&r, &v)| (r, v)).collect();
        for (r, v) in src {
            self.add_at(r, t, self.k.mul(mu, v));
        }
    }

    /// `row_t += mu * row_s`.
    pub fn row_axpy(&mut self, t: usize, mu: u32, s: usize) {
        if mu == 0 || t == s {
            assert!(t != s || mu == 0, "row added to itself");
            return;
        }
        let support: Vec<usize> = self.rows[s].iter().copied().collect();
        for c in support {
            let v = self.get(s, c);
            self.add_at(t, c, self.k.mul(mu, v));
        }
    }

    pub fn column(&self, c: usize) -> SparseCol {
        self.cols[c].iter().map(|(&r, &v)| (r, v)).collect()
    }

    pub fn row_support(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[r].iter().copied()
    }

    pub fn columns(&self) -> Vec<SparseCol> {
        (0..self.cols.len()).map(|c| self.column(c)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_scaled_cancels() {
        let k = Field::new(3).unwrap();
        let a = vec![(0, 1), (2, 2)];
        let b = vec![(2, 1), (3, 1)];
        assert_eq!(add_scaled(k, &a, 1, &b), vec![(0, 1), (3, 1)]);
        assert_eq!(add_scaled(k, &a, 2, &b), vec![(0, 1), (2, 1), (3, 2)]);
    }

    #[test]
    fn reduction_reports_operations() {
        let k = Field::Z2;
        let mut cols = vec![vec![(0, 1), (1, 1)], vec![(1, 1)], vec![(0, 1)]];
        let mut log = Vec::new();
        let red = reduce_columns(k, &mut cols, |t, s, mu| log.push((t, s, mu)));
        assert_eq!(red.pivot, vec![Some(1), Some(0), None]);
        assert_eq!(log, vec![(1, 0, 1), (2, 1, 1)]);
        assert!(cols[2].is_empty());
    }

    #[test]
    fn bisparse_row_and_column_additions() {
        let k = Field::new(5).unwrap();
        let mut m = BiSparse::new(k);
        for _ in 0..3 {
            m.push_row();
        }
        m.push_col([(0, 1), (2, 3)]);
        m.push_col([(1, 2), (2, 1)]);
        m.col_axpy(1, 2, 0);
        assert_eq!(m.column(1), vec![(0, 2), (1, 2), (2, 2)]);
        m.row_axpy(0, 4, 2);
        assert_eq!(m.get(0, 0), (1 + 4 * 3) % 5);
        assert_eq!(m.get(0, 1), 0);
        assert_eq!(m.row_support(0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(m.row_support(2).collect::<Vec<_>>(), vec![0, 1]);
        assert!(m.ops() > 0);
    }

    #[test]
    fn dense_product_and_transpose() {
        let k = Field::Z2;
        let a = DenseMatrix::from_vecs(&[vec![1, 1], vec![0, 1]]);
        let b = DenseMatrix::from_vecs(&[vec![1, 0], vec![1, 1]]);
        assert_eq!(a.mul(k, &b), DenseMatrix::from_vecs(&[vec![0, 1], vec![1, 1]]));
        assert_eq!(a.transpose().transpose(), a);
        let cols = a.sparse_columns();
        assert_eq!(DenseMatrix::from_sparse_columns(2, &cols), a);
    }
}
