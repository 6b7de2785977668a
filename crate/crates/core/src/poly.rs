//! Scalar, vector and matrix polynomials in one variable `ω`.
//!
//! Coefficients are stored densely in ascending powers with trailing zeros
//! trimmed. The involution `star` conjugates coefficients (and transposes,
//! for matrices) while keeping `ω` fixed, i.e. `ω` is treated as real.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, Vector};
use crate::scalar::{GaussianRational, Rational};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

type Gq = GaussianRational;

/// Polynomial degree; the zero polynomial has degree `NegInfinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }

    fn of_len(len: usize) -> Self {
        match len {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }
}

impl PartialOrd for Degree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Degree {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Degree::NegInfinity, Degree::NegInfinity) => Ordering::Equal,
            (Degree::NegInfinity, _) => Ordering::Less,
            (_, Degree::NegInfinity) => Ordering::Greater,
            (Degree::Finite(a), Degree::Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInfinity,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

fn trim_by<T>(coeffs: &mut Vec<T>, is_zero: impl Fn(&T) -> bool) {
    while coeffs.last().is_some_and(&is_zero) {
        coeffs.pop();
    }
}

/// Scalar polynomial `Σ c_k ω^k`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ScalarPoly {
    coeffs: Vec<Gq>,
}

impl ScalarPoly {
    pub fn new(mut coeffs: Vec<Gq>) -> Self {
        trim_by(&mut coeffs, Gq::is_zero);
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Gq) -> Self {
        Self::new(vec![c])
    }

    /// `c·ω^k`.
    pub fn monomial(c: Gq, k: usize) -> Self {
        let mut coeffs = vec![Gq::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Gq] {
        &self.coeffs
    }

    pub fn coefficient(&self, k: usize) -> Gq {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Degree {
        Degree::of_len(self.coeffs.len())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new(
            (0..n)
                .map(|k| self.coefficient(k) + rhs.coefficient(k))
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &Gq) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Gq::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(out)
    }

    /// Conjugates every coefficient; powers of `ω` are unchanged.
    pub fn star(&self) -> Self {
        Self::new(self.coeffs.iter().map(Gq::conj).collect())
    }

    pub fn eval(&self, at: &Gq) -> Gq {
        self.coeffs
            .iter()
            .rev()
            .fold(Gq::zero(), |acc, c| acc * at + c)
    }
}

impl fmt::Debug for ScalarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

/// Vector polynomial `Σ v_k ω^k` with vectors of a fixed length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VectorPoly {
    dim: usize,
    coeffs: Vec<Vector>,
}

impl VectorPoly {
    pub fn new(dim: usize, mut coeffs: Vec<Vector>) -> Result<Self> {
        if coeffs.iter().any(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "vector polynomial coefficients must have length {dim}"
            )));
        }
        trim_by(&mut coeffs, Vector::is_zero);
        Ok(Self { dim, coeffs })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            coeffs: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[Vector] {
        &self.coeffs
    }

    pub fn coefficient(&self, k: usize) -> Vector {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| Vector::zeros(self.dim))
    }

    pub fn degree(&self) -> Degree {
        Degree::of_len(self.coeffs.len())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new(
            self.dim,
            (0..n)
                .map(|k| self.coefficient(k).add(&rhs.coefficient(k)))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(Vector::neg).collect(),
        }
    }

    /// Hermitian product `self* · rhs` as a scalar polynomial.
    pub fn inner(&self, rhs: &Self) -> ScalarPoly {
        if self.is_zero() || rhs.is_zero() {
            return ScalarPoly::zero();
        }
        let mut out = vec![Gq::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a.inner(b);
            }
        }
        ScalarPoly::new(out)
    }
}

impl fmt::Debug for VectorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

/// Matrix polynomial `U(ω) = U_0 + U_1 ω + ... + U_κ ω^κ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixPoly {
    rows: usize,
    cols: usize,
    coeffs: Vec<Matrix>,
}

impl MatrixPoly {
    pub fn new(rows: usize, cols: usize, mut coeffs: Vec<Matrix>) -> Result<Self> {
        if let Some(bad) = coeffs.iter().find(|m| m.rows() != rows || m.cols() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "coefficient is {}x{}, expected {rows}x{cols}",
                bad.rows(),
                bad.cols()
            )));
        }
        trim_by(&mut coeffs, Matrix::is_zero);
        Ok(Self { rows, cols, coeffs })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(m: Matrix) -> Self {
        let (r, c) = (m.rows(), m.cols());
        Self::new(r, c, vec![m]).expect("shape taken from the matrix")
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(Matrix::identity(n))
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

    pub fn coeffs(&self) -> &[Matrix] {
        &self.coeffs
    }

    pub fn degree(&self) -> Degree {
        Degree::of_len(self.coeffs.len())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_identity()
    }

    /// Coefficient of `ω^k`; zero beyond the degree.
    pub fn coefficient(&self, k: usize) -> Matrix {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.rows, self.cols))
    }

    /// `(degree, leading coefficient)`, or `None` for the zero polynomial.
    pub fn leading(&self) -> Option<(usize, &Matrix)> {
        self.coeffs.last().map(|m| (self.coeffs.len() - 1, m))
    }

    pub fn eval(&self, at: &Gq) -> Matrix {
        self.coeffs
            .iter()
            .rev()
            .fold(Matrix::zeros(self.rows, self.cols), |acc, c| {
                let mut next = acc.scale(at);
                next.add_assign(c);
                next
            })
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch("matrix polynomial sum".into()));
        }
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new(
            self.rows,
            self.cols,
            (0..n)
                .map(|k| {
                    let mut c = self.coefficient(k);
                    c.add_assign(&rhs.coefficient(k));
                    c
                })
                .collect(),
        )
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.checked_add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            coeffs: self.coeffs.iter().map(Matrix::neg).collect(),
        }
    }

    /// Exact product by coefficient convolution.
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{} matrix polynomials",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        if self.is_zero() || rhs.is_zero() {
            return Ok(Self::zero(self.rows, rhs.cols));
        }
        let (a, da) = IntPoly::clear(self);
        let (b, db) = IntPoly::clear(rhs);
        Ok(a.mul(&b).restore(&(da * db)))
    }

    /// Conjugate-transposes each coefficient, keeping powers of `ω`.
    pub fn star(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            coeffs: self.coeffs.iter().map(Matrix::adjoint).collect(),
        }
    }

    /// Applies `f` to every coefficient (with its power) and re-trims.
    pub fn map_coeffs(&self, f: impl Fn(usize, &Matrix) -> Matrix) -> Result<Self> {
        let coeffs: Vec<Matrix> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, m)| f(k, m))
            .collect();
        let (rows, cols) = coeffs
            .first()
            .map_or((self.rows, self.cols), |m| (m.rows(), m.cols()));
        Self::new(rows, cols, coeffs)
    }

    /// `D·self`.
    pub fn d_left(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            coeffs: self.coeffs.iter().map(Matrix::d_left).collect(),
        }
    }

    /// `self·D`.
    pub fn d_right(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            coeffs: self.coeffs.iter().map(Matrix::d_right).collect(),
        }
    }
}

impl fmt::Debug for MatrixPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatrixPoly")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

/// Matrix polynomial over the Gaussian integers, entries as `(re, im)`.
///
/// Products of rational matrix polynomials run here after clearing
/// denominators, so the inner loop never reduces fractions.
struct IntPoly {
    rows: usize,
    cols: usize,
    coeffs: Vec<Vec<(BigInt, BigInt)>>,
}

impl IntPoly {
    fn clear(p: &MatrixPoly) -> (Self, BigInt) {
        let mut den = BigInt::one();
        for c in &p.coeffs {
            for e in c.entries() {
                den = den.lcm(e.re.denom()).lcm(e.im.denom());
            }
        }
        let scale = |r: &Rational| r.numer() * (&den / r.denom());
        let coeffs = p
            .coeffs
            .iter()
            .map(|c| c.entries().map(|e| (scale(&e.re), scale(&e.im))).collect())
            .collect();
        (
            Self {
                rows: p.rows,
                cols: p.cols,
                coeffs,
            },
            den,
        )
    }

    fn mul(&self, rhs: &Self) -> Self {
        let (n, m, q) = (self.rows, self.cols, rhs.cols);
        let zero = (BigInt::zero(), BigInt::zero());
        let mut out = vec![vec![zero; n * q]; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let acc = &mut out[i + j];
                for r in 0..n {
                    for k in 0..m {
                        let (ar, ai) = &a[r * m + k];
                        if ar.is_zero() && ai.is_zero() {
                            continue;
                        }
                        for c in 0..q {
                            let (br, bi) = &b[k * q + c];
                            if br.is_zero() && bi.is_zero() {
                                continue;
                            }
                            let slot = &mut acc[r * q + c];
                            slot.0 += ar * br - ai * bi;
                            slot.1 += ar * bi + ai * br;
                        }
                    }
                }
            }
        }
        Self {
            rows: n,
            cols: q,
            coeffs: out,
        }
    }

    fn restore(self, den: &BigInt) -> MatrixPoly {
        let coeffs = self
            .coeffs
            .into_iter()
            .map(|c| {
                let data = c
                    .into_iter()
                    .map(|(re, im)| {
                        Gq::new(
                            Rational::new(re, den.clone()),
                            Rational::new(im, den.clone()),
                        )
                    })
                    .collect();
                Matrix::from_data(self.rows, self.cols, data)
            })
            .collect();
        MatrixPoly::new(self.rows, self.cols, coeffs).expect("shapes agree")
    }
}
