//! Dense exact linear algebra over a [`Field`].
//!
//! Besides determinants, rank and solving, this module carries the two
//! structured families the code constructions are assembled from (Cauchy and
//! Vandermonde) together with exhaustive MDS / superregularity predicates.

use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("index set is not strictly increasing")]
    NotSorted,
    #[error("sample points are not pairwise distinct")]
    RepeatedPoint,
    #[error("{rows} rows requested but only {cols} points/columns available")]
    TooManyRows { rows: usize, cols: usize },
    #[error("operands live in different fields")]
    FieldMismatch,
}

/// Outcome of solving `A * X = B`.
#[derive(Debug, Clone, PartialEq)]
pub enum Solution<F: Field> {
    /// No right-hand side was supplied.
    NotRequested,
    Unique(Matrix<F>),
    /// Consistent, but the solution space has positive dimension.
    Underdetermined,
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankSolve<F: Field> {
    pub rank: usize,
    pub solution: Solution<F>,
}

/// Row-major dense matrix tied to its field.
#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?} [", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl<F: Field> Matrix<F> {
    pub fn new(field: F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { field, rows, cols, data })
    }

    pub fn from_fn(field: F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { field, rows, cols, data }
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(field, r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let z = field.zero();
        Matrix { data: vec![z; rows * cols], field, rows, cols }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let (z, o) = (field.zero(), field.one());
        Matrix::from_fn(field, n, n, |i, j| if i == j { o.clone() } else { z.clone() })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        assert!(i < self.rows && j < self.cols, "({i},{j}) outside {}x{}", self.rows, self.cols);
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        assert!(i < self.rows && j < self.cols, "({i},{j}) outside {}x{}", self.rows, self.cols);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.field.clone(), self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Entry-wise image in another field (e.g. a subfield embedding).
    pub fn map_into<G: Field>(&self, target: G, f: impl Fn(&F::Elem) -> G::Elem) -> Matrix<G> {
        Matrix {
            data: self.data.iter().map(f).collect(),
            field: target,
            rows: self.rows,
            cols: self.cols,
        }
    }

    fn check_field(&self, other: &Self) -> Result<(), MatrixError> {
        if self.field.same_field(&other.field) {
            Ok(())
        } else {
            Err(MatrixError::FieldMismatch)
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(i, t);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = f.mul(a, other.get(t, j));
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &prod);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_field(other)?;
        if self.shape() != other.shape() {
            return Err(MatrixError::DimensionMismatch("addition of unequal shapes".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.field.add(a, b)).collect();
        Ok(Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let data = self.data.iter().map(|a| self.field.mul(a, c)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Row vector times matrix: `v * self`.
    pub fn left_mul_vec(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>, MatrixError> {
        if v.len() != self.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let f = &self.field;
        let mut out = vec![f.zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if f.is_zero(vi) {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = f.add(o, &f.mul(vi, self.get(i, j)));
            }
        }
        Ok(out)
    }

    /// Block placement: copies `block` so that its (0,0) lands on `(r0, c0)`.
    pub fn put_block(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block does not fit");
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn hstack(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(MatrixError::DimensionMismatch("hstack with unequal row counts".into()));
        }
        let mut out = Matrix::zeros(self.field.clone(), self.rows, self.cols + other.cols);
        out.put_block(0, 0, self);
        out.put_block(0, self.cols, other);
        Ok(out)
    }

    pub fn vstack(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(MatrixError::DimensionMismatch("vstack with unequal column counts".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data })
    }

    fn check_index_set(set: &[usize], bound: usize) -> Result<(), MatrixError> {
        if let Some(&bad) = set.iter().find(|&&i| i >= bound) {
            return Err(MatrixError::IndexOutOfRange { index: bad, bound });
        }
        if set.windows(2).any(|w| w[0] >= w[1]) {
            return Err(MatrixError::NotSorted);
        }
        Ok(())
    }

    /// Submatrix on strictly increasing row and column index sets.
    pub fn submatrix(&self, rowset: &[usize], colset: &[usize]) -> Result<Self, MatrixError> {
        Self::check_index_set(rowset, self.rows)?;
        Self::check_index_set(colset, self.cols)?;
        Ok(self.select_unchecked(rowset, colset))
    }

    /// All rows, the given (strictly increasing) columns.
    pub fn select_columns(&self, colset: &[usize]) -> Result<Self, MatrixError> {
        Self::check_index_set(colset, self.cols)?;
        Ok(Matrix::from_fn(self.field.clone(), self.rows, colset.len(), |i, j| {
            self.get(i, colset[j]).clone()
        }))
    }

    fn select_unchecked(&self, rowset: &[usize], colset: &[usize]) -> Self {
        Matrix::from_fn(self.field.clone(), rowset.len(), colset.len(), |i, j| {
            self.get(rowset[i], colset[j]).clone()
        })
    }

    pub fn minor(&self, rowset: &[usize], colset: &[usize]) -> Result<F::Elem, MatrixError> {
        self.submatrix(rowset, colset)?.det()
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> Result<F::Elem, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let f = &self.field;
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = f.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !f.is_zero(&a[r * n + c])) else {
                return Ok(f.zero());
            };
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                }
                det = f.neg(&det);
            }
            let pivot = a[c * n + c].clone();
            det = f.mul(&det, &pivot);
            let pinv = f.inv(&pivot).expect("nonzero pivot");
            for r in (c + 1)..n {
                let factor = f.mul(&a[r * n + c], &pinv);
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..n {
                    let t = f.mul(&factor, &a[c * n + j]);
                    a[r * n + j] = f.sub(&a[r * n + j], &t);
                }
            }
        }
        Ok(det)
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let f = &self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !f.is_zero(a.get(i, c))) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    a.data.swap(p * cols + j, r * cols + j);
                }
            }
            let pinv = f.inv(a.get(r, c)).expect("nonzero pivot");
            for j in c..cols {
                let v = f.mul(a.get(r, j), &pinv);
                a.set(r, j, v);
            }
            for i in 0..rows {
                if i == r || f.is_zero(a.get(i, c)) {
                    continue;
                }
                let factor = a.get(i, c).clone();
                for j in c..cols {
                    let t = f.mul(&factor, a.get(r, j));
                    let v = f.sub(a.get(i, j), &t);
                    a.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{x : A x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let free = (0..self.cols).filter(|c| !pivots.contains(c));
        free.map(|fc| {
            let mut v = vec![f.zero(); self.cols];
            v[fc] = f.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(row, fc));
            }
            v
        })
        .collect()
    }

    /// Rank of `self`, and the solution of `self * X = rhs` when `rhs` is given.
    pub fn rank_and_solve(&self, rhs: Option<&Self>) -> Result<RankSolve<F>, MatrixError> {
        let Some(b) = rhs else {
            return Ok(RankSolve { rank: self.rank(), solution: Solution::NotRequested });
        };
        self.check_field(b)?;
        if b.rows != self.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "rhs has {} rows, matrix has {}",
                b.rows, self.rows
            )));
        }
        let aug = self.hstack(b)?;
        let (red, pivots) = aug.rref();
        let rank = pivots.iter().filter(|&&c| c < self.cols).count();
        let solution = if pivots.iter().any(|&c| c >= self.cols) {
            Solution::Inconsistent
        } else if rank < self.cols {
            Solution::Underdetermined
        } else {
            // Pivot row i sits on column i.
            Solution::Unique(Matrix::from_fn(self.field.clone(), self.cols, b.cols, |i, j| {
                red.get(i, self.cols + j).clone()
            }))
        };
        Ok(RankSolve { rank, solution })
    }

    /// Every `rows x rows` minor is nonzero.
    pub fn is_mds(&self) -> Result<bool, MatrixError> {
        if self.rows > self.cols {
            return Err(MatrixError::TooManyRows { rows: self.rows, cols: self.cols });
        }
        let all_rows: Vec<usize> = (0..self.rows).collect();
        for cols in (0..self.cols).combinations(self.rows) {
            if self.field.is_zero(&self.select_unchecked(&all_rows, &cols).det()?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every square minor of every order is nonzero.
    pub fn is_superregular(&self) -> bool {
        if self.data.iter().any(|x| self.field.is_zero(x)) {
            return false;
        }
        for order in 2..=self.rows.min(self.cols) {
            for rs in (0..self.rows).combinations(order) {
                for cs in (0..self.cols).combinations(order) {
                    let d = self.select_unchecked(&rs, &cs).det().expect("square");
                    if self.field.is_zero(&d) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn ensure_distinct<F: Field>(points: &[&F::Elem]) -> Result<(), MatrixError> {
    for (i, a) in points.iter().enumerate() {
        if points[i + 1..].contains(a) {
            return Err(MatrixError::RepeatedPoint);
        }
    }
    Ok(())
}

/// Cauchy matrix with entries `(x_i - y_j)^-1`.
pub fn cauchy<F: Field>(field: &F, xs: &[F::Elem], ys: &[F::Elem]) -> Result<Matrix<F>, MatrixError> {
    let all: Vec<&F::Elem> = xs.iter().chain(ys).collect();
    ensure_distinct::<F>(&all)?;
    Ok(Matrix::from_fn(field.clone(), xs.len(), ys.len(), |i, j| {
        field.inv(&field.sub(&xs[i], &ys[j])).expect("distinct points")
    }))
}

/// `k x n` Vandermonde matrix with entries `points[j]^i`.
pub fn vandermonde<F: Field>(field: &F, points: &[F::Elem], k: usize) -> Result<Matrix<F>, MatrixError> {
    if k > points.len() {
        return Err(MatrixError::TooManyRows { rows: k, cols: points.len() });
    }
    let refs: Vec<&F::Elem> = points.iter().collect();
    ensure_distinct::<F>(&refs)?;
    let mut m = Matrix::zeros(field.clone(), k, points.len());
    for (j, x) in points.iter().enumerate() {
        let mut acc = field.one();
        for i in 0..k {
            m.set(i, j, acc.clone());
            acc = field.mul(&acc, x);
        }
    }
    Ok(m)
}
