//! Constant vectors and matrices over the Gaussian rationals.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, Rational};

type Gq = GaussianRational;

/// Column vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Vector(pub Vec<Gq>);

impl Vector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![Gq::zero(); n])
    }

    /// The `k`-th standard basis vector of length `n`.
    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[k] = Gq::one();
        v
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        Self(xs.iter().map(|&x| Gq::from_int(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Gq::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(Gq::is_real)
    }

    pub fn is_imaginary(&self) -> bool {
        self.0.iter().all(Gq::is_imaginary)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Gq> {
        self.0.iter()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: &Gq) -> Self {
        Self(self.0.iter().map(|a| a * c).collect())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.iter().map(Gq::conj).collect())
    }

    /// Applies `D = diag{-1, 1, ..., 1}`.
    pub fn apply_d(&self) -> Self {
        let mut out = self.clone();
        if let Some(first) = out.0.first_mut() {
            *first = -&*first;
        }
        out
    }

    /// Hermitian product `self* · rhs` (conjugate-linear in `self`).
    pub fn inner(&self, rhs: &Self) -> Gq {
        self.0.iter().zip(&rhs.0).map(|(a, b)| a.conj() * b).sum()
    }

    /// Indefinite product `self* · D · rhs`.
    pub fn d_inner(&self, rhs: &Self) -> Gq {
        let mut acc = self.inner(rhs);
        if let (Some(a), Some(b)) = (self.0.first(), rhs.0.first()) {
            let t = a.conj() * b;
            acc -= &t;
            acc -= &t;
        }
        acc
    }

    /// `self* · self` as a rational.
    pub fn norm2(&self) -> Rational {
        self.0.iter().map(Gq::abs2).sum()
    }

    /// Dyad `self · rhs*`.
    pub fn outer(&self, rhs: &Self) -> Matrix {
        let rc: Vec<Gq> = rhs.0.iter().map(Gq::conj).collect();
        let mut m = Matrix::zeros(self.len(), rhs.len());
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rc.iter().enumerate() {
                m[(i, j)] = a * b;
            }
        }
        m
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        self.0.iter().position(|x| !x.is_zero())
    }
}

impl Index<usize> for Vector {
    type Output = Gq;
    fn index(&self, k: usize) -> &Gq {
        &self.0[k]
    }
}

impl IndexMut<usize> for Vector {
    fn index_mut(&mut self, k: usize) -> &mut Gq {
        &mut self.0[k]
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

/// If `b = λ·a` for some scalar `λ`, returns `λ`.
///
/// For `a = 0` the only representable case is `b = 0`, reported as `λ = 0`.
pub fn is_parallel(a: &Vector, b: &Vector) -> Option<Gq> {
    if a.len() != b.len() {
        return None;
    }
    let Some(k) = a.first_nonzero() else {
        return b.is_zero().then(Gq::zero);
    };
    let lambda = b[k].checked_div(&a[k]).ok()?;
    (a.scale(&lambda) == *b).then_some(lambda)
}

/// Like [`is_parallel`], but the coefficient must be real.
pub fn is_real_parallel(a: &Vector, b: &Vector) -> Option<Rational> {
    is_parallel(a, b).filter(Gq::is_real).map(|l| l.re)
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Gq>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Gq::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = Gq::one();
        }
        m
    }

    /// The metric `D = diag{-1, 1, ..., 1}`.
    pub fn metric(n: usize) -> Self {
        let mut m = Self::identity(n);
        if n > 0 {
            m[(0, 0)] = Gq::from_int(-1);
        }
        m
    }

    /// Row-major entries; `data.len()` must equal `rows * cols`.
    pub(crate) fn from_data(rows: usize, cols: usize, data: Vec<Gq>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Gq>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor for tests and examples. Panics on ragged input.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Gq::from_int(x)).collect())
                .collect(),
        )
        .expect("rectangular")
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

    pub fn row(&self, i: usize) -> Vector {
        Vector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn col(&self, j: usize) -> Vector {
        Vector((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn to_rows(&self) -> Vec<Vec<Gq>> {
        (0..self.rows).map(|i| self.row(i).0).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Gq> {
        self.data.iter()
    }

    pub fn entries_mut(&mut self) -> impl Iterator<Item = &mut Gq> {
        self.data.iter_mut()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Gq::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rows)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(Gq::is_real)
    }

    pub fn is_imaginary(&self) -> bool {
        self.data.iter().all(Gq::is_imaginary)
    }

    fn same_shape(&self, rhs: &Self) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs)?;
        Ok(self.zip_with(rhs, |a, b| a + b))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs)?;
        Ok(self.zip_with(rhs, |a, b| a - b))
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&Gq, &Gq) -> Gq) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// Adds `rhs` in place; shapes must agree.
    pub(crate) fn add_assign(&mut self, rhs: &Self) {
        debug_assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        self.mul_acc_into(rhs, &mut out);
        Ok(out)
    }

    /// `out += self · rhs`, skipping zero entries. Shapes must be conformable.
    pub(crate) fn mul_acc_into(&self, rhs: &Self, out: &mut Self) {
        debug_assert_eq!(self.cols, rhs.rows);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
    }

    pub fn mul_vec(&self, v: &Vector) -> Result<Vector> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch("matrix-vector".into()));
        }
        Ok(Vector(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
                .collect(),
        ))
    }

    /// Returns the row vector `y*·self`, stored as a column.
    pub fn row_mul(&self, y: &Vector) -> Result<Vector> {
        if self.rows != y.len() {
            return Err(Error::DimensionMismatch("vector-matrix".into()));
        }
        Ok(Vector(
            (0..self.cols)
                .map(|j| (0..self.rows).map(|i| y[i].conj() * &self[(i, j)]).sum())
                .collect(),
        ))
    }

    pub fn scale(&self, c: &Gq) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&Gq::from_int(-1))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    /// `D·self`: negates the first row.
    pub fn d_left(&self) -> Self {
        let mut m = self.clone();
        for j in 0..m.cols {
            m[(0, j)] = -&m[(0, j)];
        }
        m
    }

    /// `self·D`: negates the first column.
    pub fn d_right(&self) -> Self {
        let mut m = self.clone();
        for i in 0..m.rows {
            m[(i, 0)] = -&m[(i, 0)];
        }
        m
    }

    /// Exact inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !a[(r, c)].is_zero())?;
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            let pivot = a[(c, c)].recip().ok()?;
            a.scale_row(c, &pivot);
            inv.scale_row(c, &pivot);
            for r in 0..n {
                if r != c && !a[(r, c)].is_zero() {
                    let f = a[(r, c)].clone();
                    a.sub_row_multiple(r, c, &f);
                    inv.sub_row_multiple(r, c, &f);
                }
            }
        }
        Some(inv)
    }

    /// Basis of the right nullspace `{x | self·x = 0}`, from the reduced
    /// row echelon form (one vector per free column, that column set to 1).
    pub fn nullspace(&self) -> Vec<Vector> {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for c in 0..a.cols {
            if row == a.rows {
                break;
            }
            let Some(p) = (row..a.rows).find(|&r| !a[(r, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(p, row);
            let inv = a[(row, c)].recip().expect("nonzero pivot");
            a.scale_row(row, &inv);
            for r in 0..a.rows {
                if r != row && !a[(r, c)].is_zero() {
                    let f = a[(r, c)].clone();
                    a.sub_row_multiple(r, row, &f);
                }
            }
            pivots.push(c);
            row += 1;
        }
        (0..a.cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = Vector::unit(a.cols, free);
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&a[(r, free)];
                }
                v
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn scale_row(&mut self, r: usize, c: &Gq) {
        for j in 0..self.cols {
            self[(r, j)] = &self[(r, j)] * c;
        }
    }

    /// row[target] -= f · row[source]
    fn sub_row_multiple(&mut self, target: usize, source: usize, f: &Gq) {
        for j in 0..self.cols {
            let t = f * &self[(source, j)];
            self[(target, j)] -= &t;
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Gq;
    fn index(&self, (i, j): (usize, usize)) -> &Gq {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Gq {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn gi(re: i64, im: i64) -> Gq {
        Gq::new(rat(re, 1), rat(im, 1))
    }

    #[test]
    fn parallel_examples() {
        let a = Vector::from_ints(&[1, 1]);
        let b = Vector::from_ints(&[2, 2]);
        assert_eq!(is_parallel(&a, &b), Some(Gq::from_int(2)));
        assert_eq!(
            is_parallel(&Vector::from_ints(&[1, 0]), &Vector::from_ints(&[0, 1])),
            None
        );

        let a = Vector(vec![gi(1, 0), gi(0, 1)]);
        let b = Vector(vec![gi(0, 1), gi(-1, 0)]);
        assert_eq!(is_parallel(&a, &b), Some(Gq::i()));
        assert_eq!(is_real_parallel(&a, &b), None);
        // dyadic symmetry agrees: a b* != b a*
        assert_ne!(a.outer(&b), b.outer(&a));
    }

    #[test]
    fn zero_vector_parallel() {
        let z = Vector::zeros(2);
        assert_eq!(is_parallel(&z, &z), Some(Gq::zero()));
        assert_eq!(is_parallel(&z, &Vector::from_ints(&[1, 0])), None);
    }

    #[test]
    fn inner_products() {
        let z = Vector(vec![gi(1, 0), Gq::new(rat(3, 5), rat(4, 5))]);
        assert!(z.d_inner(&z).is_zero());
        assert_eq!(z.norm2(), rat(2, 1));
        assert_eq!(z.inner(&z), Gq::from_int(2));
    }

    #[test]
    fn inverse_and_nullspace() {
        let m = Matrix::from_int_rows(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert!(m.checked_mul(&inv).unwrap().is_identity());
        assert!(Matrix::from_int_rows(&[&[1, 2], &[2, 4]])
            .inverse()
            .is_none());

        let a = Matrix::from_int_rows(&[&[1, 1, 0, 0], &[0, 0, 1, 0]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.mul_vec(v).unwrap().is_zero());
        }
    }

    #[test]
    fn multiply_dimension_mismatch() {
        let a = Matrix::zeros(2, 3);
        assert!(matches!(
            a.checked_mul(&a),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn d_helpers() {
        let m = Matrix::from_int_rows(&[&[1, 2], &[3, 4]]);
        let d = Matrix::metric(2);
        assert_eq!(m.d_left(), d.checked_mul(&m).unwrap());
        assert_eq!(m.d_right(), m.checked_mul(&d).unwrap());
        let y = Vector::from_ints(&[1, -1]);
        assert_eq!(
            m.row_mul(&y).unwrap(),
            m.adjoint().mul_vec(&y).unwrap().conj()
        );
    }
}
