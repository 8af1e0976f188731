//! Dense matrices over a [`Ring`], with exact elimination over fields and a
//! division-free characteristic polynomial.

use super::poly::{Poly, PolyRing};
use super::ring::{Field, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Domain("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<F: Clone>(&self, f: impl Fn(&E) -> F) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }
}

/// Matrix operations over a ring.
pub struct MatOps<'a, R: Ring> {
    pub ring: &'a R,
}

pub fn ops<R: Ring>(ring: &R) -> MatOps<'_, R> {
    MatOps { ring }
}

impl<'a, R: Ring> MatOps<'a, R> {
    pub fn zeros(&self, rows: usize, cols: usize) -> Matrix<R::Elem> {
        Matrix::from_fn(rows, cols, |_, _| self.ring.zero())
    }

    pub fn identity(&self, n: usize) -> Matrix<R::Elem> {
        Matrix::from_fn(n, n, |i, j| if i == j { self.ring.one() } else { self.ring.zero() })
    }

    pub fn diag(&self, entries: &[R::Elem]) -> Matrix<R::Elem> {
        let n = entries.len();
        Matrix::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { self.ring.zero() })
    }

    /// Block-diagonal assembly of square blocks.
    pub fn block_diag(&self, blocks: &[Matrix<R::Elem>]) -> Matrix<R::Elem> {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = self.zeros(n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(off + i, off + j, b.get(i, j).clone());
                }
            }
            off += b.rows;
        }
        out
    }

    pub fn add(&self, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
        assert_eq!((a.rows, a.cols), (b.rows, b.cols));
        Matrix::from_fn(a.rows, a.cols, |i, j| self.ring.add(a.get(i, j), b.get(i, j)))
    }

    pub fn sub(&self, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
        assert_eq!((a.rows, a.cols), (b.rows, b.cols));
        Matrix::from_fn(a.rows, a.cols, |i, j| self.ring.sub(a.get(i, j), b.get(i, j)))
    }

    pub fn scale(&self, a: &Matrix<R::Elem>, c: &R::Elem) -> Matrix<R::Elem> {
        a.map(|x| self.ring.mul(x, c))
    }

    pub fn mul(&self, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
        assert_eq!(a.cols, b.rows, "matrix shape mismatch");
        let mut out = self.zeros(a.rows, b.cols);
        for i in 0..a.rows {
            for k in 0..a.cols {
                let x = a.get(i, k);
                if self.ring.is_zero(x) {
                    continue;
                }
                for j in 0..b.cols {
                    let y = b.get(k, j);
                    if self.ring.is_zero(y) {
                        continue;
                    }
                    let v = self.ring.add(out.get(i, j), &self.ring.mul(x, y));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, a: &Matrix<R::Elem>, v: &[R::Elem]) -> Vec<R::Elem> {
        assert_eq!(a.cols, v.len());
        (0..a.rows)
            .map(|i| {
                let mut acc = self.ring.zero();
                for (j, x) in v.iter().enumerate() {
                    acc = self.ring.add(&acc, &self.ring.mul(a.get(i, j), x));
                }
                acc
            })
            .collect()
    }

    pub fn equal(&self, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> bool {
        (a.rows, a.cols) == (b.rows, b.cols)
            && a.data.iter().zip(&b.data).all(|(x, y)| self.ring.equal(x, y))
    }

    pub fn is_symmetric(&self, a: &Matrix<R::Elem>) -> bool {
        a.is_square() && self.equal(a, &a.transpose())
    }

    pub fn trace(&self, a: &Matrix<R::Elem>) -> R::Elem {
        let mut acc = self.ring.zero();
        for i in 0..a.rows.min(a.cols) {
            acc = self.ring.add(&acc, a.get(i, i));
        }
        acc
    }

    /// Characteristic polynomial `det(x I - A)` by Berkowitz's division-free
    /// recurrence; valid over any commutative ring.
    pub fn char_poly(&self, a: &Matrix<R::Elem>) -> Result<Poly<R::Elem>>
    where
        R: Clone,
    {
        if !a.is_square() {
            return Err(Error::Domain(format!(
                "characteristic polynomial of a {}x{} matrix",
                a.rows, a.cols
            )));
        }
        let ring = self.ring;
        let n = a.rows;
        // coefficients of the char poly of the leading r x r block, constant term first
        let mut c: Vec<R::Elem> = vec![ring.one()];
        for r in 0..n {
            // q_k = R_row * A_r^k * C_col for k < r
            let mut q = Vec::with_capacity(r);
            let mut w: Vec<R::Elem> = (0..r).map(|i| a.get(i, r).clone()).collect();
            for _ in 0..r {
                let mut s = ring.zero();
                for (j, wj) in w.iter().enumerate() {
                    s = ring.add(&s, &ring.mul(a.get(r, j), wj));
                }
                q.push(s);
                w = (0..r)
                    .map(|i| {
                        let mut acc = ring.zero();
                        for (j, wj) in w.iter().enumerate() {
                            acc = ring.add(&acc, &ring.mul(a.get(i, j), wj));
                        }
                        acc
                    })
                    .collect();
            }
            let arr = a.get(r, r);
            let mut next = vec![ring.zero(); r + 2];
            for (m, cm) in c.iter().enumerate() {
                next[m + 1] = ring.add(&next[m + 1], cm);
                next[m] = ring.sub(&next[m], &ring.mul(arr, cm));
            }
            // subtract sum_i x^i sum_k c_{i+k+1} q_k
            for i in 0..r {
                let mut s = ring.zero();
                for (k, qk) in q.iter().enumerate().take(r - i) {
                    s = ring.add(&s, &ring.mul(&c[i + k + 1], qk));
                }
                next[i] = ring.sub(&next[i], &s);
            }
            c = next;
        }
        Ok(PolyRing::new(ring.clone()).from_coeffs(c))
    }

    /// Determinant via the characteristic polynomial (division-free).
    pub fn det_ring(&self, a: &Matrix<R::Elem>) -> Result<R::Elem>
    where
        R: Clone,
    {
        let cp = self.char_poly(a)?;
        let c0 = cp.coeff(0).cloned().unwrap_or_else(|| self.ring.zero());
        Ok(if a.rows % 2 == 1 { self.ring.neg(&c0) } else { c0 })
    }
}

/// Result of Gaussian elimination: reduced row echelon form and pivot columns.
pub struct Echelon<E> {
    pub rref: Matrix<E>,
    pub pivots: Vec<usize>,
}

impl<'a, R: Field> MatOps<'a, R> {
    pub fn rref(&self, a: &Matrix<R::Elem>) -> Echelon<R::Elem> {
        let ring = self.ring;
        let mut m = a.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&i| !ring.is_zero(m.get(i, col))) else {
                continue;
            };
            if pr != row {
                for j in 0..m.cols {
                    let t = m.get(pr, j).clone();
                    let u = m.get(row, j).clone();
                    m.set(pr, j, u);
                    m.set(row, j, t);
                }
            }
            let inv = ring.inv(m.get(row, col)).unwrap();
            for j in 0..m.cols {
                let v = ring.mul(m.get(row, j), &inv);
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                if i == row {
                    continue;
                }
                let factor = m.get(i, col).clone();
                if ring.is_zero(&factor) {
                    continue;
                }
                for j in 0..m.cols {
                    let v = ring.sub(m.get(i, j), &ring.mul(&factor, m.get(row, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { rref: m, pivots }
    }

    pub fn rank(&self, a: &Matrix<R::Elem>) -> usize {
        self.rref(a).pivots.len()
    }

    /// Basis of the right kernel `{v : A v = 0}`.
    pub fn kernel(&self, a: &Matrix<R::Elem>) -> Vec<Vec<R::Elem>> {
        let ring = self.ring;
        let Echelon { rref, pivots } = self.rref(a);
        let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![ring.zero(); a.cols];
                v[fc] = ring.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = ring.neg(rref.get(r, fc));
                }
                v
            })
            .collect()
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self, a: &Matrix<R::Elem>) -> Result<R::Elem> {
        if !a.is_square() {
            return Err(Error::Domain("determinant of a non-square matrix".into()));
        }
        let ring = self.ring;
        let mut m = a.clone();
        let n = m.rows;
        let mut det = ring.one();
        for col in 0..n {
            let Some(pr) = (col..n).find(|&i| !ring.is_zero(m.get(i, col))) else {
                return Ok(ring.zero());
            };
            if pr != col {
                for j in 0..n {
                    let t = m.get(pr, j).clone();
                    let u = m.get(col, j).clone();
                    m.set(pr, j, u);
                    m.set(col, j, t);
                }
                det = ring.neg(&det);
            }
            let piv = m.get(col, col).clone();
            det = ring.mul(&det, &piv);
            let inv = ring.inv(&piv).unwrap();
            for i in col + 1..n {
                let factor = ring.mul(m.get(i, col), &inv);
                if ring.is_zero(&factor) {
                    continue;
                }
                for j in col..n {
                    let v = ring.sub(m.get(i, j), &ring.mul(&factor, m.get(col, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Solves `A x = b` for square invertible `A`.
    pub fn solve(&self, a: &Matrix<R::Elem>, b: &[R::Elem]) -> Result<Vec<R::Elem>> {
        let n = a.rows;
        if !a.is_square() || b.len() != n {
            return Err(Error::Domain("solve needs a square system".into()));
        }
        let aug = Matrix::from_fn(n, n + 1, |i, j| if j < n { a.get(i, j).clone() } else { b[i].clone() });
        let Echelon { rref, pivots } = self.rref(&aug);
        if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
            return Err(Error::Degenerate("singular linear system".into()));
        }
        Ok((0..n).map(|i| rref.get(i, n).clone()).collect())
    }

    pub fn inverse(&self, a: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
        let n = a.rows;
        if !a.is_square() {
            return Err(Error::Domain("inverse of a non-square matrix".into()));
        }
        let aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                a.get(i, j).clone()
            } else if j - n == i {
                self.ring.one()
            } else {
                self.ring.zero()
            }
        });
        let Echelon { rref, pivots } = self.rref(&aug);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Degenerate("singular matrix".into()));
        }
        Ok(rref.submatrix(0, n, n, n))
    }
}
