//! Exact linear algebra over prime fields `F_l`.
//!
//! Vectors are dense `Vec<u32>` with entries reduced mod `l`. Matrices handed to
//! the homology code are sparse and column-oriented; rank is computed either by
//! dense row reduction (small matrices) or by sparse column reduction.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// The prime field `Z/l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    l: u32,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(l: u32) -> Result<Self> {
        // products are formed in u64, so any u32 prime works; keep it sane
        if !is_prime(l) || l > (1 << 20) {
            return Err(Error::NotPrime(l));
        }
        Ok(Self { l })
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.l
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.l as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.l {
            s - self.l
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.l - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.l - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.l as u64) as u32
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut r = 1 % self.l;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.l), "inverse of zero in F_{}", self.l);
        self.pow(a, self.l as u64 - 2)
    }

    /// `(-1)^k` as a field element.
    pub fn sign(self, odd: bool) -> u32 {
        if odd {
            self.neg(1)
        } else {
            1 % self.l
        }
    }

    /// `y += c * x`.
    pub fn axpy(self, y: &mut [u32], c: u32, x: &[u32]) {
        if c == 0 {
            return;
        }
        for (yi, &xi) in y.iter_mut().zip(x) {
            if xi != 0 {
                *yi = self.add(*yi, self.mul(c, xi));
            }
        }
    }

    pub fn dot(self, a: &[u32], b: &[u32]) -> u32 {
        let l = self.l as u64;
        let mut acc = 0u64;
        for (&x, &y) in a.iter().zip(b) {
            acc = (acc + x as u64 * y as u64) % l;
        }
        acc as u32
    }

    pub fn scale(self, v: &mut [u32], c: u32) {
        for x in v.iter_mut() {
            *x = self.mul(*x, c);
        }
    }
}

/// Sparse vector: strictly increasing indices, nonzero values.
pub type SparseVec = Vec<(u32, u32)>;

/// Sparse matrix over `F_l`, stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

/// Size (rows and cols) at or below which `rank` uses dense elimination.
pub const DEFAULT_DENSE_THRESHOLD: usize = 64;

impl SparseMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Values are reduced mod `l`,
    /// repeated positions are summed and zeros dropped.
    pub fn from_triplets(
        field: PrimeField,
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Result<Self> {
        let mut acc: Vec<HashMap<u32, u32>> = vec![HashMap::new(); cols];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(Error::IndexOutOfRange {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            let e = acc[c].entry(r as u32).or_insert(0);
            *e = field.add(*e, field.reduce(v));
        }
        let columns = acc
            .into_iter()
            .map(|m| {
                let mut v: SparseVec = m.into_iter().filter(|&(_, x)| x != 0).collect();
                v.sort_unstable();
                v
            })
            .collect();
        Ok(Self {
            field,
            rows,
            cols,
            columns,
        })
    }

    pub fn from_dense_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut trip = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            for (j, &x) in r.iter().enumerate() {
                trip.push((i, j, x));
            }
        }
        Self::from_triplets(field, rows.len(), cols, trip)
    }

    /// Columns must already be normalized sparse vectors with indices `< rows`.
    pub fn from_columns(field: PrimeField, rows: usize, columns: Vec<SparseVec>) -> Self {
        debug_assert!(columns.iter().all(|c| {
            c.windows(2).all(|w| w[0].0 < w[1].0)
                && c.iter()
                    .all(|&(r, v)| (r as usize) < rows && v != 0 && v < field.l)
        }));
        Self {
            field,
            rows,
            cols: columns.len(),
            columns,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }
    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<u32>> {
        let mut out = vec![vec![0u32; self.cols]; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                out[r as usize][c] = v;
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                cols[r as usize].push((c as u32, v));
            }
        }
        Self {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            columns: cols,
        }
    }

    /// `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let f = self.field;
        let mut acc = vec![0u32; self.rows];
        let mut touched: Vec<u32> = Vec::new();
        let mut out = Vec::with_capacity(other.cols);
        for col in &other.columns {
            for &(k, v) in col {
                for &(r, w) in &self.columns[k as usize] {
                    if acc[r as usize] == 0 {
                        touched.push(r);
                    }
                    acc[r as usize] = f.add(acc[r as usize], f.mul(v, w));
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let mut c = SparseVec::new();
            for &r in &touched {
                let x = acc[r as usize];
                if x != 0 {
                    c.push((r, x));
                }
                acc[r as usize] = 0;
            }
            touched.clear();
            out.push(c);
        }
        Ok(SparseMatrix::from_columns(f, self.rows, out))
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    /// Rank over `F_l`, dense below [`DEFAULT_DENSE_THRESHOLD`].
    pub fn rank(&self) -> usize {
        self.rank_with_threshold(DEFAULT_DENSE_THRESHOLD)
    }

    pub fn rank_with_threshold(&self, threshold: usize) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        if self.rows <= threshold && self.cols <= threshold {
            dense_rank(self.field, self.to_dense_rows())
        } else {
            sparse_rank(self.field, self.rows, self.columns.clone())
        }
    }

    /// Basis of `{x : M x = 0}`; `cols - rank` vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        kernel_basis_dense(self.field, &self.to_dense_rows(), self.cols)
    }

    /// Whether `v` is in the span of the rows.
    pub fn in_row_space(&self, v: &[u32]) -> Result<bool> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        let mut basis = RowBasis::new(self.field, self.cols);
        for row in self.to_dense_rows() {
            basis.insert(row);
        }
        Ok(basis.contains(v))
    }
}

/// Rank by dense row reduction; consumes the rows.
pub fn dense_rank(field: PrimeField, mut m: Vec<Vec<u32>>) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    rref_in_place(field, &mut m, cols).len()
}

/// Reduced row echelon form in place; returns pivot columns, rows `0..pivots.len()` hold the basis.
pub fn rref_in_place(field: PrimeField, m: &mut [Vec<u32>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        let inv = field.inv(m[r][c]);
        field.scale(&mut m[r], inv);
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = field.neg(row[c]);
                field.axpy(row, f, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn kernel_basis_dense(field: PrimeField, rows: &[Vec<u32>], cols: usize) -> Vec<Vec<u32>> {
    let mut m: Vec<Vec<u32>> = rows.to_vec();
    let pivots = rref_in_place(field, &mut m, cols);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u32; cols];
        v[free] = 1;
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = field.neg(m[i][free]);
        }
        out.push(v);
    }
    out
}

/// Rank via column reduction keyed on the lowest (largest-index) nonzero entry.
pub fn sparse_rank(field: PrimeField, rows: usize, mut columns: Vec<SparseVec>) -> usize {
    columns.sort_by_key(Vec::len);
    let mut pivot_of: Vec<u32> = vec![u32::MAX; rows];
    let mut reduced: Vec<SparseVec> = Vec::new();
    let mut scratch = SparseVec::new();
    for mut col in columns {
        while let Some(&(low, val)) = col.last() {
            let p = pivot_of[low as usize];
            if p == u32::MAX {
                let inv = field.inv(val);
                for e in col.iter_mut() {
                    e.1 = field.mul(e.1, inv);
                }
                pivot_of[low as usize] = reduced.len() as u32;
                reduced.push(col);
                break;
            }
            // pivot columns are normalized: their low entry is 1
            sparse_axpy(field, &col, field.neg(val), &reduced[p as usize], &mut scratch);
            std::mem::swap(&mut col, &mut scratch);
        }
    }
    reduced.len()
}

/// `out = a + c*b` for sorted sparse vectors.
pub fn sparse_axpy(field: PrimeField, a: &SparseVec, c: u32, b: &SparseVec, out: &mut SparseVec) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            let v = field.mul(c, b[j].1);
            if v != 0 {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = field.add(a[i].1, field.mul(c, b[j].1));
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
}

/// Incrementally grown row space with membership and coordinate queries.
///
/// Every stored row remembers which combination of the inserted vectors produced
/// it, so [`RowBasis::solve`] can express a vector in terms of the independent
/// inserted vectors.
#[derive(Clone, Debug)]
pub struct RowBasis {
    field: PrimeField,
    dim: usize,
    rows: Vec<(usize, Vec<u32>, Vec<u32>)>,
}

impl RowBasis {
    pub fn new(field: PrimeField, dim: usize) -> Self {
        Self {
            field,
            dim,
            rows: Vec::new(),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn ambient_dim(&self) -> usize {
        self.dim
    }
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce_tracked(&self, v: &mut [u32], coef: &mut Vec<u32>) {
        let f = self.field;
        for (p, row, combo) in &self.rows {
            let c = v[*p];
            if c != 0 {
                f.axpy(v, f.neg(c), row);
                if coef.len() < combo.len() {
                    coef.resize(combo.len(), 0);
                }
                f.axpy(&mut coef[..combo.len()], c, combo);
            }
        }
    }

    /// Reduces `v` against the basis (the residue is zero iff `v` is in the span).
    pub fn reduce(&self, v: &mut [u32]) {
        let f = self.field;
        for (p, row, _) in &self.rows {
            let c = v[*p];
            if c != 0 {
                f.axpy(v, f.neg(c), row);
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Inserts `v`; returns `true` if it was independent of the current span.
    /// Independent inserts are numbered `0, 1, ...` for [`RowBasis::solve`].
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let idx = self.rows.len();
        let mut coef = Vec::new();
        self.reduce_tracked(&mut v, &mut coef);
        let Some(p) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let f = self.field;
        // combo expresses the reduced row through independent inserts
        let mut combo = vec![0u32; idx + 1];
        for (k, c) in coef.iter().enumerate() {
            combo[k] = f.neg(*c);
        }
        combo[idx] = 1;
        let inv = f.inv(v[p]);
        f.scale(&mut v, inv);
        f.scale(&mut combo, inv);
        self.rows.push((p, v, combo));
        true
    }

    /// Coordinates of `v` in terms of the independent inserted vectors, if in the span.
    pub fn solve(&self, v: &[u32]) -> Option<Vec<u32>> {
        let mut w = v.to_vec();
        let mut coef = Vec::new();
        self.reduce_tracked(&mut w, &mut coef);
        if w.iter().any(|&x| x != 0) {
            return None;
        }
        coef.resize(self.rows.len(), 0);
        Some(coef)
    }

    /// Pivot (first nonzero) position of each stored row, in insertion order.
    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|(p, _, _)| *p)
    }

    /// The reduced (echelon) rows.
    pub fn echelon_rows(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.rows.iter().map(|(_, r, _)| r)
    }
}

/// Rank of a list of dense vectors of common length `dim`.
pub fn rank_of(field: PrimeField, dim: usize, vectors: &[Vec<u32>]) -> usize {
    let mut b = RowBasis::new(field, dim);
    for v in vectors {
        b.insert(v.clone());
    }
    b.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(l: u32) -> PrimeField {
        PrimeField::new(l).unwrap()
    }

    #[test]
    fn rejects_composite_modulus() {
        assert_eq!(PrimeField::new(4), Err(Error::NotPrime(4)));
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(2).is_ok());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(SparseMatrix::zeros(f(2), 0, 0).rank(), 0);
        let m = SparseMatrix::from_dense_rows(f(2), &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(m.rank(), 1);
        let m = SparseMatrix::from_dense_rows(f(5), &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let id = SparseMatrix::from_dense_rows(f(3), &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert!(id.kernel_basis().is_empty());
        let z = SparseMatrix::zeros(f(2), 2, 3);
        assert_eq!(z.kernel_basis().len(), 3);
        let m = SparseMatrix::from_dense_rows(f(2), &[vec![1, 1]]).unwrap();
        assert_eq!(m.kernel_basis(), vec![vec![1, 1]]);
    }

    #[test]
    fn row_space_examples() {
        let m = SparseMatrix::from_dense_rows(f(2), &[vec![1, 0]]).unwrap();
        assert!(m.in_row_space(&[0, 0]).unwrap());
        assert!(!m.in_row_space(&[0, 1]).unwrap());
        let m = SparseMatrix::from_dense_rows(f(2), &[vec![1, 1], vec![0, 1]]).unwrap();
        assert!(m.in_row_space(&[1, 0]).unwrap());
        assert!(matches!(
            m.in_row_space(&[1, 0, 0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn triplets_validate_and_merge() {
        assert!(SparseMatrix::from_triplets(f(3), 2, 2, [(2, 0, 1)]).is_err());
        let m = SparseMatrix::from_triplets(f(3), 2, 2, [(0, 0, 1), (0, 0, 2), (1, 1, -1)]).unwrap();
        assert_eq!(m.to_dense_rows(), vec![vec![0, 0], vec![0, 2]]);
        assert_eq!(m.nnz(), 1);
    }

    #[test]
    fn row_basis_solves_coordinates() {
        let fl = f(5);
        let mut b = RowBasis::new(fl, 3);
        assert!(b.insert(vec![1, 2, 0]));
        assert!(b.insert(vec![0, 1, 1]));
        assert!(!b.insert(vec![2, 0, 1])); // 2*(1,2,0) + (0,1,1)
        let c = b.solve(&[3, 0, 4]).unwrap();
        let mut v = vec![0u32; 3];
        fl.axpy(&mut v, c[0], &[1, 2, 0]);
        fl.axpy(&mut v, c[1], &[0, 1, 1]);
        assert_eq!(v, vec![3, 0, 4]);
        assert!(b.solve(&[0, 0, 1]).is_none());
    }

    fn arb_matrix() -> impl Strategy<Value = (u32, Vec<Vec<i64>>)> {
        (prop::sample::select(vec![2u32, 3, 5]), 1usize..30, 1usize..30).prop_flat_map(|(l, r, c)| {
            (
                Just(l),
                prop::collection::vec(
                    prop::collection::vec(prop_oneof![3 => Just(0i64), 1 => 0i64..5], c),
                    r,
                ),
            )
        })
    }

    proptest! {
        #[test]
        fn sparse_and_dense_rank_agree((l, rows) in arb_matrix()) {
            let m = SparseMatrix::from_dense_rows(f(l), &rows).unwrap();
            let dense = m.rank_with_threshold(usize::MAX);
            let sparse = m.rank_with_threshold(0);
            prop_assert_eq!(dense, sparse);
        }

        #[test]
        fn rank_nullity_of_transpose((l, rows) in arb_matrix()) {
            let m = SparseMatrix::from_dense_rows(f(l), &rows).unwrap();
            let t = m.transpose();
            prop_assert_eq!(m.rank(), m.rows() - t.kernel_basis().len());
            for v in m.kernel_basis() {
                for row in m.to_dense_rows() {
                    prop_assert_eq!(f(l).dot(&row, &v), 0);
                }
            }
            prop_assert_eq!(m.kernel_basis().len(), m.cols() - m.rank());
        }
    }
}
