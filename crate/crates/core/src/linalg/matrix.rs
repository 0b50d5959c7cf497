use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::field::{Field, Scalar};
use crate::Error;

/// Dense row-major matrix over an exact field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Echelon data of a matrix.
#[derive(Clone, Debug)]
pub struct RankData {
    pub rank: usize,
    pub pivots: Vec<usize>,
    /// Kernel basis vectors (each of length `cols`).
    pub kernel: Vec<Vec<Scalar>>,
    /// Image basis: the original columns at the pivot positions.
    pub image: Vec<Vec<Scalar>>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// Builds a matrix from rows, checking shape and field.
    pub fn from_rows(field: &Field, rows: Vec<Vec<Scalar>>) -> Result<Matrix, Error> {
        let cols = rows.first().map_or(0, |r| r.len());
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for x in r {
                if x.field() != *field {
                    return Err(Error::InvalidInput("matrix entries from mixed fields".into()));
                }
                data.push(x);
            }
        }
        Ok(Matrix { field: field.clone(), rows: n, cols, data })
    }

    /// Small-integer constructor, mainly for tests and fixtures.
    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Matrix {
        let rows = rows.iter().map(|r| r.iter().map(|&x| field.int(x)).collect()).collect();
        Matrix::from_rows(field, rows).unwrap()
    }

    /// Builds an `rows × cols.len()` matrix whose columns are the given vectors.
    pub fn from_columns(field: &Field, rows: usize, cols: &[Vec<Scalar>]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
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

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        debug_assert_eq!(x.field(), self.field);
        self.data[i * self.cols + j] = x;
    }

    pub fn add_to(&mut self, i: usize, j: usize, x: &Scalar) {
        let e = &mut self.data[i * self.cols + j];
        *e = &*e + x;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        let mut out = vec![self.field.zero(); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            for (a, b) in self.row(i).iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    *o += &(a * b);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert!(self.rows == other.rows && self.cols == other.cols, "matrix sum shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert!(self.rows == other.rows && self.cols == other.cols, "matrix difference shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| a * c).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Matrix {
        let data = self.data.iter().map(|a| -a).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// `-self` if `odd`.
    pub fn signed(self, odd: bool) -> Matrix {
        if odd {
            self.neg()
        } else {
            self
        }
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = block.get(i, j).clone();
            }
        }
    }

    pub fn block(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Matrix {
        let mut m = Matrix::zeros(&self.field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = self.get(r0 + i, c0 + j).clone();
            }
        }
        m
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(&self.field, self.rows, idx.len());
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                m.data[i * idx.len() + jj] = self.get(i, j).clone();
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(&self.field, idx.len(), self.cols);
        for (ii, &i) in idx.iter().enumerate() {
            m.data[ii * self.cols..(ii + 1) * self.cols].clone_from_slice(self.row(i));
        }
        m
    }

    pub fn hstack(field: &Field, rows: usize, parts: &[&Matrix]) -> Matrix {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Matrix::zeros(field, rows, cols);
        let mut c = 0;
        for p in parts {
            m.set_block(0, c, p);
            c += p.cols;
        }
        m
    }

    pub fn vstack(field: &Field, cols: usize, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut m = Matrix::zeros(field, rows, cols);
        let mut r = 0;
        for p in parts {
            m.set_block(r, 0, p);
            r += p.rows;
        }
        m
    }

    pub fn block_diag(field: &Field, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Matrix::zeros(field, rows, cols);
        let (mut r, mut c) = (0, 0);
        for p in parts {
            m.set_block(r, c, p);
            r += p.rows;
            c += p.cols;
        }
        m
    }

    /// Reduced row echelon form of `self`, applying the same row operations to `companion`.
    fn rref_with(&mut self, mut companion: Option<&mut Matrix>) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            if let Some(m) = companion.as_deref_mut() {
                m.swap_rows(r, p);
            }
            let inv = self.get(r, c).inv().unwrap();
            self.scale_row(r, &inv);
            if let Some(m) = companion.as_deref_mut() {
                m.scale_row(r, &inv);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                self.axpy_row(i, r, &f, c);
                if let Some(m) = companion.as_deref_mut() {
                    m.axpy_row(i, r, &f, 0);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn scale_row(&mut self, r: usize, f: &Scalar) {
        for j in 0..self.cols {
            let e = &mut self.data[r * self.cols + j];
            if !e.is_zero() {
                *e = &*e * f;
            }
        }
    }

    /// row_i -= f * row_r, for columns from `from` on.
    fn axpy_row(&mut self, i: usize, r: usize, f: &Scalar, from: usize) {
        for j in from..self.cols {
            let x = &self.data[r * self.cols + j];
            if x.is_zero() {
                continue;
            }
            let t = f * x;
            let e = &mut self.data[i * self.cols + j];
            *e = &*e - &t;
        }
    }

    /// Rank, pivots, kernel and image bases. Kernel vectors are checked against `self` in debug builds.
    pub fn row_reduce(&self) -> RankData {
        let mut r = self.clone();
        let pivots = r.rref_with(None);
        let rank = pivots.len();
        let mut is_pivot = vec![None; self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(row);
        }
        let mut kernel = Vec::new();
        for f in 0..self.cols {
            if is_pivot[f].is_some() {
                continue;
            }
            let mut v = vec![self.field.zero(); self.cols];
            v[f] = self.field.one();
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = -r.get(row, f);
            }
            debug_assert!(self.mul_vec(&v).iter().all(Scalar::is_zero));
            kernel.push(v);
        }
        let image = pivots.iter().map(|&c| self.column(c)).collect();
        RankData { rank, pivots, kernel, image }
    }

    pub fn rank(&self) -> usize {
        let mut r = self.clone();
        r.rref_with(None).len()
    }

    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        self.row_reduce().kernel
    }

    /// Some x with `self · x = rhs`, or `None`.
    pub fn solve(&self, rhs: &[Scalar]) -> Result<Option<Vec<Scalar>>, Error> {
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch(alloc::format!(
                "{} rows but right-hand side of length {}",
                self.rows,
                rhs.len()
            )));
        }
        Ok(Solver::new(self).solve(rhs))
    }

    /// Basis of the union of the kernels of the powers of a square matrix.
    pub fn stable_kernel(&self) -> Result<Vec<Vec<Scalar>>, Error> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("stable kernel of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut power = self.clone();
        let mut dim = n - power.rank();
        for _ in 1..n.max(1) {
            let next = power.mul(self);
            let d = n - next.rank();
            power = next;
            if d == dim {
                break;
            }
            dim = d;
        }
        Ok(power.kernel())
    }

    /// Column space of the `N`-th power for `N` large (complement to the stable kernel).
    pub fn stable_image(&self) -> Vec<Vec<Scalar>> {
        let n = self.rows;
        let mut power = self.clone();
        let mut rank = power.rank();
        for _ in 1..n.max(1) {
            let next = power.mul(self);
            let r = next.rank();
            power = next;
            if r == rank {
                break;
            }
            rank = r;
        }
        power.row_reduce().image
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let mut a = self.clone();
        let mut inv = Matrix::identity(&self.field, self.rows);
        let pivots = a.rref_with(Some(&mut inv));
        (pivots.len() == self.rows).then_some(inv)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}x{} over {}](", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, ")")
    }
}

/// Precomputed elimination of a fixed matrix, for repeated solves.
#[derive(Clone, Debug)]
pub struct Solver {
    field: Field,
    transform: Matrix,
    pivots: Vec<usize>,
    cols: usize,
}

impl Solver {
    pub fn new(m: &Matrix) -> Solver {
        let mut a = m.clone();
        let mut t = Matrix::identity(&m.field, m.rows);
        let pivots = a.rref_with(Some(&mut t));
        Solver { field: m.field.clone(), transform: t, pivots, cols: m.cols }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn solve(&self, rhs: &[Scalar]) -> Option<Vec<Scalar>> {
        let y = self.transform.mul_vec(rhs);
        if y[self.pivots.len()..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (r, &c) in self.pivots.iter().enumerate() {
            x[c] = y[r].clone();
        }
        Some(x)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let y = self.transform.mul_vec(v);
        y[self.pivots.len()..].iter().all(Scalar::is_zero)
    }
}

pub fn zero_vec(field: &Field, n: usize) -> Vec<Scalar> {
    vec![field.zero(); n]
}

pub fn unit_vec(field: &Field, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = zero_vec(field, n);
    v[i] = field.one();
    v
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// `acc += c · v`.
pub fn axpy(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += &(c * x);
        }
    }
}

pub fn scale_vec(c: &Scalar, v: &[Scalar]) -> Vec<Scalar> {
    v.iter().map(|x| c * x).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_full_rank() {
        let f = Field::prime(5).unwrap();
        let r = Matrix::identity(&f, 2).row_reduce();
        assert_eq!(r.rank, 2);
        assert!(r.kernel.is_empty());
    }

    #[test]
    fn zero_matrix_kernel() {
        let r = Matrix::zeros(&Field::Rational, 3, 4).row_reduce();
        assert_eq!(r.rank, 0);
        assert_eq!(r.kernel.len(), 4);
    }

    #[test]
    fn rational_rank_one_kernel() {
        let q = Field::Rational;
        let r = Matrix::from_ints(&q, &[&[1, 2], &[2, 4]]).row_reduce();
        assert_eq!(r.rank, 1);
        assert_eq!(r.kernel, vec![vec![q.int(-2), q.int(1)]]);
        assert_eq!(r.image, vec![vec![q.int(1), q.int(2)]]);
    }

    #[test]
    fn solve_identity_and_zero() {
        let f = Field::prime(5).unwrap();
        let e1 = unit_vec(&f, 2, 0);
        assert_eq!(Matrix::identity(&f, 2).solve(&e1).unwrap(), Some(e1.clone()));
        assert_eq!(Matrix::zeros(&f, 2, 2).solve(&e1).unwrap(), None);
    }

    #[test]
    fn solve_by_back_substitution() {
        let f = Field::prime(5).unwrap();
        let m = Matrix::from_ints(&f, &[&[1, 1], &[0, 2]]);
        let x = m.solve(&[f.int(3), f.int(4)]).unwrap().unwrap();
        assert_eq!(x, vec![f.int(1), f.int(2)]);
    }

    #[test]
    fn solve_rejects_bad_shape() {
        let f = Field::Rational;
        assert!(Matrix::identity(&f, 2).solve(&[f.one()]).is_err());
    }

    #[test]
    fn stable_kernel_examples() {
        let f = Field::prime(2).unwrap();
        // multiplication by x on GF(2)[x]/(x^2 - x), basis (1, x): 1 -> x, x -> x
        let mx = Matrix::from_ints(&f, &[&[0, 0], &[1, 1]]);
        let k = mx.stable_kernel().unwrap();
        assert_eq!(k, vec![vec![f.one(), f.one()]]);
        assert!(Matrix::identity(&f, 3).stable_kernel().unwrap().is_empty());
        let nil = Matrix::from_ints(&f, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert_eq!(nil.stable_kernel().unwrap().len(), 3);
    }

    #[test]
    fn inverse_round_trip() {
        let q = Field::Rational;
        let m = Matrix::from_ints(&q, &[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(&q, 2));
        assert!(Matrix::from_ints(&q, &[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn mixed_field_rows_rejected() {
        let q = Field::Rational;
        let rows = vec![vec![q.one(), Field::Prime(3).one()]];
        assert!(Matrix::from_rows(&q, rows).is_err());
    }
}
