//! Dense row-major matrices over any [`Scalar`] kind.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::{Lift, Scalar};

/// Dense matrix with `entries.len() == rows * cols`, stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    entries: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn new(rows: usize, cols: usize, entries: Vec<S>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {}x{} matrix", entries.len(), rows, cols)));
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    /// Builds from integer rows; panics on ragged input (intended for literals).
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let v = rows.iter().map(|r| r.iter().map(|&x| S::from_i64(x)).collect()).collect();
        Self::from_rows(v).expect("rectangular literal")
    }

    pub fn diag(d: &[S]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { S::zero() })
    }

    pub fn scalar(n: usize, s: S) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { s.clone() } else { S::zero() })
    }

    /// 1 at `(i, j)`, 0 elsewhere.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m[(i, j)] = S::one();
        m
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn lift<T: Scalar>(&self) -> Matrix<T>
    where
        S: Lift<T>,
    {
        self.map(|x| x.lift())
    }

    pub fn to_c64(&self) -> Matrix<Complex64> {
        self.map(|x| x.to_c64())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn conj(&self) -> Self {
        self.map(|x| x.conj())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn trace(&self) -> S {
        let mut t = S::zero();
        for i in 0..self.rows.min(self.cols) {
            t = t + self[(i, i)].clone();
        }
        t
    }

    /// `self·rhs − rhs·self`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        &(self * rhs) - &(rhs * self)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|x| {
                let m = x.modulus();
                m * m
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|x| x.modulus()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.entries.iter().all(|x| x.is_negligible(tol))
    }

    /// Entrywise comparison; exact kinds ignore `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.shape() == other.shape()
            && self.entries.iter().zip(&other.entries).all(|(a, b)| (a.clone() - b.clone()).is_negligible(tol))
    }

    /// Largest entrywise deviation (as a double).
    pub fn max_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "max_diff shape mismatch");
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a.clone() - b.clone()).modulus()).fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.is_square() && self.approx_eq(&self.transpose(), tol)
    }

    pub fn is_skew(&self, tol: f64) -> bool {
        self.is_square() && self.approx_eq(&-&self.transpose(), tol)
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    pub fn add_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                let v = self[(r0 + i, c0 + j)].clone() + b[(i, j)].clone();
                self[(r0 + i, c0 + j)] = v;
            }
        }
    }

    pub fn hstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "hstack row mismatch");
        Self::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                rhs[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.cols, "vstack column mismatch");
        Self::from_fn(self.rows + rhs.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                rhs[(i - self.rows, j)].clone()
            }
        })
    }

    /// `[[a, b], [c, d]]` from four blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        a.hstack(b).vstack(&c.hstack(d))
    }

    pub fn block_diag(blocks: &[&Self]) -> Self {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(r, c);
        let (mut i, mut j) = (0, 0);
        for b in blocks {
            m.set_block(i, j, b);
            i += b.rows;
            j += b.cols;
        }
        m
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Entries flattened row-major as a column vector.
    pub fn vectorize(&self) -> Vec<S> {
        self.entries.clone()
    }

    /// Gaussian elimination to reduced row echelon form. Returns the pivot columns.
    fn rref_in_place(&mut self, tol: f64) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let candidate = if S::EXACT {
                (r..self.rows).find(|&i| !self[(i, c)].is_negligible(tol))
            } else {
                (r..self.rows).filter(|&i| !self[(i, c)].is_negligible(tol)).max_by(|&a, &b| {
                    self[(a, c)].modulus().partial_cmp(&self[(b, c)].modulus()).unwrap_or(std::cmp::Ordering::Equal)
                })
            };
            let Some(p) = candidate else {
                if !S::EXACT {
                    for i in r..self.rows {
                        self[(i, c)] = S::zero();
                    }
                }
                continue;
            };
            self.swap_rows(p, r);
            let inv = S::one() / self[(r, c)].clone();
            for j in c..self.cols {
                let v = self[(r, j)].clone() * inv.clone();
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_negligible(0.0) {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    if self[(r, j)].is_negligible(0.0) {
                        continue;
                    }
                    let v = self[(i, j)].clone() - f.clone() * self[(r, j)].clone();
                    self[(i, j)] = v;
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
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rref(&self, tol: f64) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place(tol);
        (m, p)
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.rref(tol).1.len()
    }

    /// Basis of the right null space `{v : self·v = 0}`.
    pub fn null_space(&self, tol: f64) -> Vec<Vec<S>> {
        let (r, pivots) = self.rref(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Solves `self·x = b` for every column of `b`. Returns one particular solution
    /// (free variables set to zero) or an error if the system is inconsistent.
    pub fn solve(&self, b: &Self, tol: f64) -> Result<Self> {
        if b.rows != self.rows {
            return Err(Error::Shape("solve: row mismatch".into()));
        }
        let aug = self.hstack(b);
        let (r, pivots) = aug.rref(tol);
        if pivots.iter().any(|&p| p >= self.cols) {
            return Err(Error::Domain("linear system is inconsistent".into()));
        }
        let mut x = Self::zeros(self.cols, b.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(pc, j)] = r[(row, self.cols + j)].clone();
            }
        }
        Ok(x)
    }

    pub fn inverse(&self, tol: f64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(&Self::identity(n)).rref(tol);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(r.block(0, n, n, n))
    }

    /// Determinant by elimination with partial pivoting.
    pub fn det(&self) -> S {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = S::one();
        for c in 0..n {
            let p = if S::EXACT {
                (c..n).find(|&i| !m[(i, c)].is_negligible(0.0))
            } else {
                (c..n).max_by(|&a, &b| {
                    m[(a, c)].modulus().partial_cmp(&m[(b, c)].modulus()).unwrap_or(std::cmp::Ordering::Equal)
                })
            };
            let Some(p) = p else { return S::zero() };
            if m[(p, c)].is_negligible(0.0) {
                return S::zero();
            }
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det * piv.clone();
            for i in c + 1..n {
                if m[(i, c)].is_negligible(0.0) {
                    continue;
                }
                let f = m[(i, c)].clone() / piv.clone();
                for j in c..n {
                    let v = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                    m[(i, j)] = v;
                }
            }
        }
        det
    }
}

impl Matrix<f64> {
    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &self.entries)
    }

    pub fn from_nalgebra(m: &nalgebra::DMatrix<f64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    /// Symmetric part `(A + ᵗA)/2`.
    pub fn symmetrized(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| 0.5 * (self[(i, j)] + self[(j, i)]))
    }

    /// Induced 2-norm (largest singular value).
    pub fn norm2(&self) -> f64 {
        if self.rows == 0 || self.cols == 0 {
            return 0.0;
        }
        self.to_nalgebra().singular_values().max()
    }
}

impl Matrix<Complex64> {
    pub fn re(&self) -> Matrix<f64> {
        self.map(|z| z.re)
    }

    pub fn im(&self) -> Matrix<f64> {
        self.map(|z| z.im)
    }

    pub fn from_parts(re: &Matrix<f64>, im: &Matrix<f64>) -> Self {
        assert_eq!(re.shape(), im.shape(), "complex parts shape mismatch");
        Self::from_fn(re.rows, re.cols, |i, j| Complex64::new(re[(i, j)], im[(i, j)]))
    }

    pub fn symmetrized(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)]) * 0.5)
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.entries[i * self.cols + j]
    }
}

impl<S: Scalar> Add for &Matrix<S> {
    type Output = Matrix<S>;

    fn add(self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.shape(), rhs.shape(), "add shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<S: Scalar> Sub for &Matrix<S> {
    type Output = Matrix<S>;

    fn sub(self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.shape(), rhs.shape(), "sub shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<S: Scalar> Neg for &Matrix<S> {
    type Output = Matrix<S>;

    fn neg(self) -> Matrix<S> {
        self.map(|x| -x.clone())
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;

    /// Skips zero entries of the left factor; generator matrices are very sparse.
    fn mul(self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, rhs.rows, "mul shape mismatch");
        let mut out: Matrix<S> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.entries[i * self.cols + k];
                if a.is_negligible(0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs.entries[k * rhs.cols + j];
                    if b.is_negligible(0.0) {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.entries[idx] = out.entries[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<S: Scalar> $tr for Matrix<S> {
            type Output = Matrix<S>;
            fn $m(self, rhs: Matrix<S>) -> Matrix<S> {
                (&self).$m(&rhs)
            }
        }
        impl<S: Scalar> $tr<&Matrix<S>> for Matrix<S> {
            type Output = Matrix<S>;
            fn $m(self, rhs: &Matrix<S>) -> Matrix<S> {
                (&self).$m(rhs)
            }
        }
        impl<S: Scalar> $tr<Matrix<S>> for &Matrix<S> {
            type Output = Matrix<S>;
            fn $m(self, rhs: Matrix<S>) -> Matrix<S> {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<S: Scalar> Neg for Matrix<S> {
    type Output = Matrix<S>;

    fn neg(self) -> Matrix<S> {
        -&self
    }
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// `[[0, E_n], [−E_n, 0]]`.
pub fn j_matrix<S: Scalar>(n: usize) -> Matrix<S> {
    let mut j = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = S::one();
        j[(n + i, i)] = -S::one();
    }
    j
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ri, Rat};

    #[test]
    fn exact_inverse_and_det() {
        let a: Matrix<Rat> = Matrix::from_i64_rows(&[&[2, 1], &[7, 4]]);
        assert_eq!(a.det(), ri(1));
        let inv = a.inverse(0.0).unwrap();
        assert_eq!(&a * &inv, Matrix::identity(2));
        let b: Matrix<Rat> = Matrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert!(matches!(b.inverse(0.0), Err(Error::Singular)));
    }

    #[test]
    fn null_space_spans_kernel() {
        let a: Matrix<Rat> = Matrix::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = a.null_space(0.0);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let col = Matrix::new(3, 1, v).unwrap();
            assert!((&a * &col).is_zero(0.0));
        }
        assert_eq!(a.rank(0.0), 1);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a: Matrix<Rat> = Matrix::from_i64_rows(&[&[1, 1], &[1, 1]]);
        let b: Matrix<Rat> = Matrix::from_i64_rows(&[&[1], &[2]]);
        assert!(a.solve(&b, 0.0).is_err());
        let b2: Matrix<Rat> = Matrix::from_i64_rows(&[&[3], &[3]]);
        let x = a.solve(&b2, 0.0).unwrap();
        assert_eq!(&a * &x, b2);
    }

    #[test]
    fn float_det_matches_exact() {
        let a: Matrix<f64> = Matrix::from_i64_rows(&[&[4, 3, 2], &[1, 5, 7], &[2, 8, 1]]);
        let e: Matrix<Rat> = Matrix::from_i64_rows(&[&[4, 3, 2], &[1, 5, 7], &[2, 8, 1]]);
        assert_eq!(e.det(), ri(-169));
        assert!((a.det() + 169.0).abs() < 1e-12);
        assert_eq!(e.scale(&rat(1, 2)).det(), rat(-169, 8));
    }

    #[test]
    fn j_is_symplectic_form() {
        let j: Matrix<Rat> = j_matrix(2);
        assert_eq!(&j * &j, -Matrix::<Rat>::identity(4));
        assert!(j.is_skew(0.0));
    }
}
