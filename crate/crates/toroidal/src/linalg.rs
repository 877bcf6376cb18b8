//! Dense exact-rational matrices with row reduction, rank, kernel and solve.
//!
//! The matrices that appear here are small (dozens of rows), so a dense
//! representation with textbook Gauss-Jordan elimination is the right tool;
//! exactness matters, asymptotics do not.

use std::fmt;

use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>, // row-major
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        QMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> QMatrix {
        QMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in multiply");
        QMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols)
                .map(|k| self.get(i, k) * rhs.get(k, j))
                .sum()
        })
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn add(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + rhs.get(i, j))
    }

    pub fn sub(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - rhs.get(i, j))
    }

    pub fn scale(&self, c: &Scalar) -> QMatrix {
        QMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * c)
    }

    /// Stacks `below` underneath `self`.
    pub fn vstack(&self, below: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, below.cols);
        let mut data = self.data.clone();
        data.extend(below.data.iter().cloned());
        QMatrix {
            rows: self.rows + below.rows,
            cols: self.cols,
            data,
        }
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).recip();
            for j in c..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && !self.get(i, c).is_zero() {
                    let factor = self.get(i, c).clone();
                    for j in c..self.cols {
                        let v = self.get(i, j) - &(self.get(r, j) * &factor);
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// A basis of the right kernel, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = Some(row);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![Scalar::zero(); self.cols];
            vec[free] = Scalar::one();
            for (col, rowopt) in pivot_set.iter().enumerate() {
                if let Some(row) = rowopt {
                    vec[col] = -m.get(*row, free);
                }
            }
            basis.push(vec);
        }
        basis
    }

    /// Solves `self * x = b` if consistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = QMatrix::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the constant column: inconsistent
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = aug.get(row, self.cols).clone();
        }
        Some(x)
    }

    /// Exact inverse of a square matrix, if nonsingular.
    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = QMatrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        let pivots = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        Some(QMatrix::from_fn(n, n, |i, j| aug.get(i, j + n).clone()))
    }

    pub fn determinant(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Scalar::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            det = det * m.get(c, c);
            let inv = m.get(c, c).recip();
            for i in (c + 1)..n {
                if !m.get(i, c).is_zero() {
                    let factor = m.get(i, c) * &inv;
                    for j in c..n {
                        let v = m.get(i, j) - &(m.get(c, j) * &factor);
                        m.set(i, j, v);
                    }
                }
            }
        }
        det
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Incremental row-space tracker: feed vectors, it keeps a reduced basis and
/// reports whether each new vector was independent of what came before.
pub struct SpanBuilder {
    cols: usize,
    rows: Vec<Vec<Scalar>>, // kept in echelon form
    pivots: Vec<usize>,
}

impl SpanBuilder {
    pub fn new(cols: usize) -> Self {
        SpanBuilder {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current basis. Returns true if it extended
    /// the span (and was absorbed), false if it was already in the span.
    pub fn insert(&mut self, mut v: Vec<Scalar>) -> bool {
        assert_eq!(v.len(), self.cols);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let factor = v[p].clone();
                for (vj, rj) in v.iter_mut().zip(row) {
                    *vj = vj.clone() - &(rj * &factor);
                }
            }
        }
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[pivot].recip();
        for x in v.iter_mut() {
            *x = x.clone() * &inv;
        }
        self.rows.push(v);
        self.pivots.push(pivot);
        true
    }

    /// True if `v` lies in the current span (without inserting it).
    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let factor = v[p].clone();
                for (vj, rj) in v.iter_mut().zip(row) {
                    *vj = vj.clone() - &(rj * &factor);
                }
            }
        }
        v.iter().all(Scalar::is_zero)
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    /// Pivot column of each basis row, parallel to [`Self::basis`].
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn rank_and_kernel() {
        // rows: (1,2,3), (2,4,6), (0,1,1) -> rank 2, kernel dim 1
        let m = QMatrix::from_rows(vec![
            vec![s(1), s(2), s(3)],
            vec![s(2), s(4), s(6)],
            vec![s(0), s(1), s(1)],
        ]);
        assert_eq!(m.rank(), 2);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 1);
        for v in &ker {
            assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = QMatrix::from_rows(vec![
            vec![s(2), s(1), s(0)],
            vec![s(1), s(1), s(1)],
            vec![s(0), s(3), s(1)],
        ]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMatrix::identity(3));
        assert_eq!(m.determinant(), s(-5));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = QMatrix::from_rows(vec![vec![s(1), s(2)], vec![s(2), s(4)]]);
        assert!(m.solve(&[s(3), s(6)]).is_some());
        assert!(m.solve(&[s(3), s(7)]).is_none());
    }

    #[test]
    fn span_builder_tracks_rank() {
        let mut sp = SpanBuilder::new(3);
        assert!(sp.insert(vec![s(1), s(2), s(3)]));
        assert!(!sp.insert(vec![s(2), s(4), s(6)]));
        assert!(sp.insert(vec![s(0), s(1), s(1)]));
        assert_eq!(sp.dim(), 2);
        assert!(sp.contains(&[s(1), s(3), s(4)]));
        assert!(!sp.contains(&[s(0), s(0), s(1)]));
    }
}
