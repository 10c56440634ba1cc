//! Dense exact linear algebra over a [`Field`].

use std::fmt;

use num_traits::{One, Zero};

use crate::scalar::{Field, GQ, Q};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type QMatrix = Matrix<Q>;
pub type GMatrix = Matrix<GQ>;

impl<T: Field> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<T>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].fadd(&a.fmul(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "shape mismatch in product");
        (0..self.rows)
            .map(|i| {
                let mut s = T::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s = s.fadd(&a.fmul(b));
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.fadd(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.fsub(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.fneg())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.fmul(s))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    /// Copies the `[r0, r0+h) × [c0, c0+w)` window.
    pub fn submatrix(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        let mut m = Self::zeros(h, w);
        for i in 0..h {
            for j in 0..w {
                m[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    /// Reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].finv().expect("nonzero pivot");
            for j in c..self.cols {
                self[(r, j)] = self[(r, j)].fmul(&inv);
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in c..self.cols {
                        let t = f.fmul(&self[(r, j)]);
                        if !t.is_zero() {
                            self[(i, j)] = self[(i, j)].fsub(&t);
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right null space.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![T::zero(); self.cols];
                v[f] = T::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = m[(r, f)].fneg();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Self::identity(n));
        let piv = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        Some(aug.submatrix(0, n, n, n))
    }

    /// Solves `self · x = b`, returning one solution if consistent.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        aug.set_block(0, 0, self);
        for (i, x) in b.iter().enumerate() {
            aug[(i, self.cols)] = x.clone();
        }
        let piv = aug.rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![T::zero(); self.cols];
        for (r, &p) in piv.iter().enumerate() {
            x[p] = aug[(r, self.cols)].clone();
        }
        Some(x)
    }
}

impl QMatrix {
    pub fn to_gaussian(&self) -> GMatrix {
        self.map(|x| GQ::real(x.clone()))
    }

    /// Symmetric positive-definiteness via pivots of an unpivoted elimination.
    /// Each pivot is a ratio of consecutive leading principal minors, so all
    /// pivots are positive exactly when all leading minors are.
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_square() || *self != self.transpose() {
            return false;
        }
        self.leading_minors().iter().all(crate::scalar::is_positive)
    }

    pub fn leading_minors(&self) -> Vec<Q> {
        let n = self.rows;
        let mut m = self.clone();
        let mut out = Vec::with_capacity(n);
        let mut det = Q::one();
        for k in 0..n {
            let p = m[(k, k)].clone();
            det = &det * &p;
            out.push(det.clone());
            if Zero::is_zero(&p) {
                // Remaining minors need a fresh computation.
                for j in k + 1..n {
                    out.push(m.submatrix(0, 0, j + 1, j + 1).determinant());
                }
                return out;
            }
            for i in k + 1..n {
                let f = &m[(i, k)] / &p;
                if Zero::is_zero(&f) {
                    continue;
                }
                for j in k..n {
                    let t = &f * &m[(k, j)];
                    m[(i, j)] = &m[(i, j)] - &t;
                }
            }
        }
        out
    }

    pub fn determinant(&self) -> Q {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !Zero::is_zero(&m[(i, c)])) else {
                return Q::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = &det * &piv;
            for i in c + 1..n {
                let f = &m[(i, c)] / &piv;
                if Zero::is_zero(&f) {
                    continue;
                }
                for j in c..n {
                    let t = &f * &m[(c, j)];
                    m[(i, j)] = &m[(i, j)] - &t;
                }
            }
        }
        det
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> =
                (0..self.cols).map(|j| self.data[i * self.cols + j].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// The split form `[[0, I], [I, 0]]` on a space of dimension `2n`.
pub fn split_form(n: usize) -> QMatrix {
    let mut q = QMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        q[(i, n + i)] = Q::one();
        q[(n + i, i)] = Q::one();
    }
    q
}

/// `Jᵀ Q J = Q` for the split form.
pub fn is_split_orthogonal(j: &QMatrix) -> bool {
    if !j.is_square() || j.rows() % 2 != 0 {
        return false;
    }
    let q = split_form(j.rows() / 2);
    j.transpose().mul(&q).mul(j) == q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qf};

    fn qm(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    #[test]
    fn inverse_and_solve() {
        let a = qm(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        let x = a.solve(&[q(1), q(2), q(3)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![q(1), q(2), q(3)]);
        assert!(qm(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn nullspace_dimension() {
        let a = qm(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(a.mul_vec(&v).iter().all(|x| Zero::is_zero(x)));
        }
        assert_eq!(a.rank(), 1);
    }

    #[test]
    fn inconsistent_system() {
        let a = qm(&[&[1, 1], &[1, 1]]);
        assert!(a.solve(&[q(1), q(2)]).is_none());
    }

    #[test]
    fn minors_decide_definiteness() {
        assert!(qm(&[&[2, -1], &[-1, 2]]).is_positive_definite());
        assert!(!qm(&[&[1, 2], &[2, 1]]).is_positive_definite());
        assert!(!qm(&[&[0, 1], &[1, 0]]).is_positive_definite());
        let m = qm(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        assert_eq!(m.leading_minors(), vec![q(0), q(-1), q(-1)]);
    }

    #[test]
    fn determinant_matches_minors() {
        let a = QMatrix::from_rows(vec![
            vec![qf(1, 2), q(3), q(0)],
            vec![q(1), q(-2), qf(2, 3)],
            vec![q(0), q(5), q(1)],
        ]);
        assert_eq!(a.leading_minors()[2], a.determinant());
    }
}
