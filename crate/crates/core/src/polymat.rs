//! Matrices over `F[z]`, used for generator matrices `G(z) = sum G_i z^i`.

use itertools::Itertools;

use crate::field::Field;
use crate::matrix::Matrix;
use crate::poly::{Poly, PolyRing};

#[derive(Clone, Debug)]
pub struct PolyMatrix<F: Field> {
    ring: PolyRing<F>,
    rows: usize,
    cols: usize,
    data: Vec<Poly<F::Elem>>,
}

impl<F: Field> PolyMatrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let ring = PolyRing::new(field);
        PolyMatrix { data: vec![ring.zero(); rows * cols], ring, rows, cols }
    }

    /// `sum_i coeffs[i] * z^i`; all coefficient matrices must share a shape.
    pub fn from_coefficients(coeffs: &[Matrix<F>]) -> Self {
        let first = coeffs.first().expect("at least one coefficient matrix");
        let (rows, cols) = first.shape();
        let ring = PolyRing::new(first.field().clone());
        let data = (0..rows * cols)
            .map(|idx| {
                let (i, j) = (idx / cols, idx % cols);
                ring.from_coeffs(
                    coeffs
                        .iter()
                        .map(|c| {
                            assert_eq!(c.shape(), (rows, cols), "coefficient shapes differ");
                            c.get(i, j).clone()
                        })
                        .collect(),
                )
            })
            .collect();
        PolyMatrix { ring, rows, cols, data }
    }

    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly<F::Elem> {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Poly<F::Elem>) {
        self.data[i * self.cols + j] = v;
    }

    /// Largest entry degree, `None` for the zero matrix.
    pub fn degree(&self) -> Option<usize> {
        self.data.iter().filter_map(Poly::degree).max()
    }

    /// Coefficient matrices `C_0 .. C_deg`.
    pub fn coefficients(&self) -> Vec<Matrix<F>> {
        let f = self.ring.field();
        let top = self.degree().map_or(0, |d| d + 1);
        (0..top)
            .map(|t| {
                Matrix::from_fn(f.clone(), self.rows, self.cols, |i, j| {
                    self.get(i, j).coeff(t).cloned().unwrap_or_else(|| f.zero())
                })
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = PolyMatrix::zeros(self.ring.field().clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let r = &self.ring;
        let mut out = PolyMatrix::zeros(r.field().clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let acc = (0..self.cols).fold(r.zero(), |acc, t| {
                    r.add(&acc, &r.mul(self.get(i, t), other.get(t, j)))
                });
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn eval(&self, x: &F::Elem) -> Matrix<F> {
        Matrix::from_fn(self.ring.field().clone(), self.rows, self.cols, |i, j| {
            self.ring.eval(self.get(i, j), x)
        })
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = PolyMatrix::zeros(self.ring.field().clone(), self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination over `F[z]`.
    pub fn det(&self) -> Poly<F::Elem> {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let r = &self.ring;
        if n == 0 {
            return r.one();
        }
        let mut a = self.data.clone();
        let mut negate = false;
        let mut prev = r.one();
        for k in 0..n.saturating_sub(1) {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                    return r.zero();
                };
                for j in 0..n {
                    a.swap(p * n + j, k * n + j);
                }
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = r.sub(
                        &r.mul(&a[i * n + j], &a[k * n + k]),
                        &r.mul(&a[i * n + k], &a[k * n + j]),
                    );
                    a[i * n + j] = r.exact_div(&num, &prev).expect("Bareiss division is exact");
                }
            }
            prev = a[k * n + k].clone();
        }
        let d = a[n * n - 1].clone();
        if negate {
            r.neg(&d)
        } else {
            d
        }
    }

    /// Rank over the rational function field `F(z)`.
    pub fn rank(&self) -> usize {
        let r = &self.ring;
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let mut rank = 0;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&i| !a[i * cols + c].is_zero()) else {
                continue;
            };
            for j in 0..cols {
                a.swap(p * cols + j, rank * cols + j);
            }
            let pivot = a[rank * cols + c].clone();
            for i in rank + 1..rows {
                let factor = a[i * cols + c].clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..cols {
                    a[i * cols + j] = r.sub(
                        &r.mul(&a[i * cols + j], &pivot),
                        &r.mul(&factor, &a[rank * cols + j]),
                    );
                }
            }
            rank += 1;
        }
        rank
    }

    /// All `rows x rows` minors, keyed by their column set in lexicographic order.
    pub fn full_size_minors(&self) -> Vec<(Vec<usize>, Poly<F::Elem>)> {
        (0..self.cols)
            .combinations(self.rows)
            .map(|cs| {
                let d = self.select_columns(&cs).det();
                (cs, d)
            })
            .collect()
    }
}
