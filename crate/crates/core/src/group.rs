//! Elementary J-unitary factors and the groups they generate.
//!
//! A factor is parametrized by an isotropic direction `z` (first entry 1,
//! `z*Dz = 0`), a phase `φ = i·Σ ρ_k ω^k` with rational `ρ_k`, and a
//! tangent polynomial `g = Σ g_k ω^k` (`k ≥ 1`) whose coefficients satisfy
//! `g_k*z = g_k*Dz = 0`. The factor itself is
//!
//! ```text
//! G_z(φ, g) = D·[z·(φ − ½·g*g)·z* + (z·g* − g·z*)] + I.
//! ```
//!
//! Factors sharing the same `z` form a group under the composition law
//! implemented by [`GeneratorParams::compose`]; a [`Word`] is a product of
//! factors in which adjacent directions differ.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, Vector};
use crate::poly::{Degree, MatrixPoly, ScalarPoly, VectorPoly};
use crate::scalar::{GaussianRational, Rational};

type Gq = GaussianRational;

/// Coefficient regime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    /// Gaussian-rational coefficients.
    #[default]
    Complex,
    /// Real coefficients in `ω`.
    RealOmega,
    /// Real coefficients in `λ = iω`: real at even powers of `ω`,
    /// imaginary at odd powers.
    RealLambda,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Complex, Mode::RealOmega, Mode::RealLambda];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Complex => "complex",
            Mode::RealOmega => "real-omega",
            Mode::RealLambda => "real-lambda",
        }
    }

    /// Whether `c` may appear as a coefficient of `ω^power`.
    pub fn admits(self, c: &Gq, power: usize) -> bool {
        match self {
            Mode::Complex => true,
            Mode::RealOmega => c.is_real(),
            Mode::RealLambda if power.is_multiple_of(2) => c.is_real(),
            Mode::RealLambda => c.is_imaginary(),
        }
    }

    pub fn admits_vector(self, v: &Vector, power: usize) -> bool {
        v.iter().all(|c| self.admits(c, power))
    }

    pub fn admits_matrix(self, m: &Matrix, power: usize) -> bool {
        m.entries().all(|c| self.admits(c, power))
    }

    /// Checks every coefficient of a matrix polynomial.
    pub fn check_matrix_poly(self, u: &MatrixPoly) -> Result<()> {
        match u
            .coeffs()
            .iter()
            .enumerate()
            .find(|(k, m)| !self.admits_matrix(m, *k))
        {
            Some((k, _)) => Err(self.violation(format!("coefficient of ω^{k}"))),
            None => Ok(()),
        }
    }

    pub(crate) fn violation(self, detail: impl Into<String>) -> Error {
        Error::ModeViolation {
            mode: self.as_str().to_string(),
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complex" => Ok(Mode::Complex),
            "real-omega" | "real" => Ok(Mode::RealOmega),
            "real-lambda" => Ok(Mode::RealLambda),
            other => Err(Error::Parse(format!("unknown mode `{other}`"))),
        }
    }
}

/// A normalized isotropic vector: first entry 1 and `z*Dz = 0`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsotropicDirection(Vector);

/// Validates `z` as a normalized isotropic direction admitted by `mode`.
pub fn validate_xi(z: Vector, mode: Mode) -> Result<IsotropicDirection> {
    if z.len() < 2 {
        return Err(Error::InvalidDirection(
            "dimension must be at least 2".into(),
        ));
    }
    if !z[0].is_one() {
        return Err(Error::InvalidDirection(format!(
            "first component is {}, expected 1",
            z[0]
        )));
    }
    let q = z.d_inner(&z);
    if !q.is_zero() {
        return Err(Error::InvalidDirection(format!("z*Dz = {q}, expected 0")));
    }
    if !mode.admits_vector(&z, 0) {
        return Err(mode.violation("direction entries must be real"));
    }
    Ok(IsotropicDirection(z))
}

impl IsotropicDirection {
    /// Validates without mode restrictions.
    pub fn new(z: Vector) -> Result<Self> {
        validate_xi(z, Mode::Complex)
    }

    /// Normalizes a nonzero isotropic vector to first component 1.
    pub fn from_generatrix(x: &Vector) -> Result<Self> {
        if x.is_empty() || x[0].is_zero() {
            return Err(Error::InvalidDirection(
                "generatrix has zero first component".into(),
            ));
        }
        let inv = x[0].recip()?;
        Self::new(x.scale(&inv))
    }

    pub fn as_vector(&self) -> &Vector {
        &self.0
    }

    pub fn into_vector(self) -> Vector {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `D·z·z*`, the shape of every leading coefficient in this direction.
    pub fn dyad(&self) -> Matrix {
        self.0.apply_d().outer(&self.0)
    }

    /// `−D·z`, the direction of the starred factor.
    pub fn reflected(&self) -> Self {
        IsotropicDirection(self.0.apply_d().neg())
    }
}

impl fmt::Debug for IsotropicDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

/// Exact basis of `{d | d*z = 0, d*Dz = 0}`; `ν − 2` vectors, empty for `ν = 2`.
pub fn delta_basis(z: &IsotropicDirection) -> Vec<Vector> {
    let zv = z.as_vector();
    let constraints = Matrix::from_rows(vec![zv.conj().0, zv.apply_d().conj().0])
        .expect("two rows of equal length");
    let basis = constraints.nullspace();
    debug_assert!(basis.iter().all(|d| is_tangent_vector(d, z)));
    basis
}

/// Membership in `Δ_z⁰`, checked in both equivalent forms.
fn is_tangent_vector(d: &Vector, z: &IsotropicDirection) -> bool {
    let zv = z.as_vector();
    let defining = d.inner(zv).is_zero() && d.inner(&zv.apply_d()).is_zero();
    let structural = d[0].is_zero() && d.apply_d() == *d;
    debug_assert!(!defining || structural);
    defining && structural
}

/// Phase `φ(ω) = i·Σ_{k≥1} ρ_k ω^k` with rational `ρ_k`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PhasePoly {
    /// `rhos[k]` is the coefficient `ρ_{k+1}`.
    rhos: Vec<Rational>,
}

impl PhasePoly {
    pub fn new(mut rhos: Vec<Rational>) -> Self {
        while rhos.last().is_some_and(Zero::is_zero) {
            rhos.pop();
        }
        Self { rhos }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// `i·ρ·ω^power`.
    pub fn monomial(rho: Rational, power: usize) -> Result<Self> {
        if power == 0 {
            return Err(Error::InvalidPhase("phase must vanish at ω = 0".into()));
        }
        let mut rhos = vec![Rational::zero(); power];
        rhos[power - 1] = rho;
        Ok(Self::new(rhos))
    }

    /// Accepts a scalar polynomial with `φ(0) = 0` and `φ* = −φ`.
    pub fn from_poly(p: &ScalarPoly) -> Result<Self> {
        if !p.coefficient(0).is_zero() {
            return Err(Error::InvalidPhase("φ(0) must be 0".into()));
        }
        if let Some(k) = p.coeffs().iter().position(|c| !c.is_imaginary()) {
            return Err(Error::InvalidPhase(format!(
                "coefficient of ω^{k} is not purely imaginary"
            )));
        }
        Ok(Self::new(
            p.coeffs().iter().skip(1).map(|c| c.im.clone()).collect(),
        ))
    }

    pub fn rhos(&self) -> &[Rational] {
        &self.rhos
    }

    pub fn is_zero(&self) -> bool {
        self.rhos.is_empty()
    }

    pub fn to_poly(&self) -> ScalarPoly {
        let mut coeffs = vec![Gq::zero()];
        coeffs.extend(self.rhos.iter().cloned().map(Gq::imag));
        ScalarPoly::new(coeffs)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.rhos.len().max(rhs.rhos.len());
        let get = |v: &[Rational], k: usize| v.get(k).cloned().unwrap_or_else(Rational::zero);
        Self::new(
            (0..n)
                .map(|k| get(&self.rhos, k) + get(&rhs.rhos, k))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.rhos.iter().map(|r| -r).collect())
    }

    pub fn check_mode(&self, mode: Mode) -> Result<()> {
        let bad = self
            .rhos
            .iter()
            .enumerate()
            .find(|(k, r)| !r.is_zero() && !mode.admits(&Gq::imag((*r).clone()), k + 1));
        match bad {
            Some((k, _)) => Err(mode.violation(format!("phase coefficient of ω^{}", k + 1))),
            None => Ok(()),
        }
    }
}

impl fmt::Debug for PhasePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.rhos.iter().map(crate::scalar::format_rational))
            .finish()
    }
}

/// Tangent polynomial `g = Σ_{k≥1} g_k ω^k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TangentPoly {
    dim: usize,
    /// `coeffs[k]` is `g_{k+1}`.
    coeffs: Vec<Vector>,
}

impl TangentPoly {
    pub fn new(dim: usize, mut coeffs: Vec<Vector>) -> Result<Self> {
        if coeffs.iter().any(|v| v.len() != dim) {
            return Err(Error::InvalidTangent(format!(
                "coefficients must have length {dim}"
            )));
        }
        while coeffs.last().is_some_and(Vector::is_zero) {
            coeffs.pop();
        }
        Ok(Self { dim, coeffs })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            coeffs: Vec::new(),
        }
    }

    /// `d·ω^power`.
    pub fn monomial(d: Vector, power: usize) -> Result<Self> {
        if power == 0 {
            return Err(Error::InvalidTangent("tangent must vanish at ω = 0".into()));
        }
        let dim = d.len();
        let mut coeffs = vec![Vector::zeros(dim); power];
        coeffs[power - 1] = d;
        Self::new(dim, coeffs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[Vector] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn to_poly(&self) -> VectorPoly {
        let mut coeffs = vec![Vector::zeros(self.dim)];
        coeffs.extend(self.coeffs.iter().cloned());
        VectorPoly::new(self.dim, coeffs).expect("lengths checked on construction")
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get =
            |v: &[Vector], k: usize| v.get(k).cloned().unwrap_or_else(|| Vector::zeros(self.dim));
        Self::new(
            self.dim,
            (0..n)
                .map(|k| get(&self.coeffs, k).add(&get(&rhs.coeffs, k)))
                .collect(),
        )
        .expect("same dimension")
    }

    pub fn neg(&self) -> Self {
        Self {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(Vector::neg).collect(),
        }
    }

    /// Applies a constant matrix to every coefficient.
    pub fn transform(&self, m: &Matrix) -> Result<Self> {
        Self::new(
            m.rows(),
            self.coeffs
                .iter()
                .map(|v| m.mul_vec(v))
                .collect::<Result<_>>()?,
        )
    }

    /// Checks that every coefficient lies in `Δ_z⁰`.
    pub fn check_direction(&self, z: &IsotropicDirection) -> Result<()> {
        if self.dim != z.dim() {
            return Err(Error::InvalidTangent(format!(
                "dimension {} does not match direction dimension {}",
                self.dim,
                z.dim()
            )));
        }
        match self.coeffs.iter().position(|d| !is_tangent_vector(d, z)) {
            Some(k) => Err(Error::InvalidTangent(format!(
                "coefficient of ω^{} is not orthogonal to z and Dz",
                k + 1
            ))),
            None => Ok(()),
        }
    }

    pub fn check_mode(&self, mode: Mode) -> Result<()> {
        match self
            .coeffs
            .iter()
            .enumerate()
            .find(|(k, v)| !mode.admits_vector(v, k + 1))
        {
            Some((k, _)) => Err(mode.violation(format!("tangent coefficient of ω^{}", k + 1))),
            None => Ok(()),
        }
    }
}

impl fmt::Debug for TangentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

/// Parameters `(z, φ, g)` of one elementary factor `G_z(φ, g)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GeneratorParams {
    z: IsotropicDirection,
    phi: PhasePoly,
    g: TangentPoly,
}

impl GeneratorParams {
    pub fn new(z: IsotropicDirection, phi: PhasePoly, g: TangentPoly) -> Result<Self> {
        g.check_direction(&z)?;
        Ok(Self { z, phi, g })
    }

    /// `(z, 0, 0)`, whose matrix is `I`.
    pub fn identity(z: IsotropicDirection) -> Self {
        let dim = z.dim();
        Self {
            z,
            phi: PhasePoly::zero(),
            g: TangentPoly::zero(dim),
        }
    }

    pub fn z(&self) -> &IsotropicDirection {
        &self.z
    }

    pub fn phi(&self) -> &PhasePoly {
        &self.phi
    }

    pub fn g(&self) -> &TangentPoly {
        &self.g
    }

    pub fn dim(&self) -> usize {
        self.z.dim()
    }

    pub fn is_identity(&self) -> bool {
        self.phi.is_zero() && self.g.is_zero()
    }

    pub fn check_mode(&self, mode: Mode) -> Result<()> {
        if !mode.admits_vector(self.z.as_vector(), 0) {
            return Err(mode.violation("direction entries must be real"));
        }
        self.phi.check_mode(mode)?;
        self.g.check_mode(mode)
    }

    /// `g*g` as a scalar polynomial (real coefficients).
    pub fn tangent_norm(&self) -> ScalarPoly {
        let g = self.g.to_poly();
        g.inner(&g)
    }

    /// `deg(φ − g*g)`, which is also the degree of the built matrix; 0 for the identity.
    pub fn degree(&self) -> usize {
        match self.phi.to_poly().sub(&self.tangent_norm()).degree() {
            Degree::NegInfinity => 0,
            Degree::Finite(d) => d,
        }
    }

    /// Expands `G_z(φ, g)` into a matrix polynomial.
    pub fn build(&self) -> MatrixPoly {
        let n = self.dim();
        let z = self.z.as_vector();
        let dz = z.apply_d();
        let dyad = self.z.dyad();
        let half = Gq::from(Rational::new(1.into(), 2.into()));
        let amplitude = self.phi.to_poly().sub(&self.tangent_norm().scale(&half));
        let top = amplitude.coeffs().len().max(self.g.coeffs.len() + 1);
        let coeffs = (0..top)
            .map(|k| {
                let mut c = if k == 0 {
                    Matrix::identity(n)
                } else {
                    Matrix::zeros(n, n)
                };
                let a = amplitude.coefficient(k);
                if !a.is_zero() {
                    c.add_assign(&dyad.scale(&a));
                }
                if k >= 1 {
                    if let Some(gk) = self.g.coeffs.get(k - 1) {
                        // D(z g* − g z*)
                        c.add_assign(&dz.outer(gk));
                        c.add_assign(&gk.apply_d().outer(z).neg());
                    }
                }
                c
            })
            .collect();
        MatrixPoly::new(n, n, coeffs).expect("square coefficients")
    }

    /// Group law within one direction:
    /// `(φ, g)∘(ψ, h) = (φ + ψ + ½(h*g − g*h), g + h)`.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if self.z != rhs.z {
            return Err(Error::MismatchedDirection);
        }
        let g = self.g.to_poly();
        let h = rhs.g.to_poly();
        let correction = h.inner(&g).sub(&g.inner(&h));
        let half = Gq::from(Rational::new(1.into(), 2.into()));
        let correction = PhasePoly::from_poly(&correction.scale(&half))?;
        Ok(Self {
            z: self.z.clone(),
            phi: self.phi.add(&rhs.phi).add(&correction),
            g: self.g.add(&rhs.g),
        })
    }

    pub fn inverse(&self) -> Self {
        Self {
            z: self.z.clone(),
            phi: self.phi.neg(),
            g: self.g.neg(),
        }
    }

    /// `a·b·a⁻¹·b⁻¹`; always central, i.e. of the form `(h*g − g*h, 0)`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        let c = self
            .compose(rhs)?
            .compose(&self.inverse())?
            .compose(&rhs.inverse())?;
        debug_assert!(c.g.is_zero());
        Ok(c)
    }

    /// `W·G_z(φ, g)·W⁻¹ = G_{Wz}(φ, W·g)`.
    pub fn conjugate_by(&self, w: &ConstantUnitary) -> Result<Self> {
        let wz = IsotropicDirection::new(w.matrix().mul_vec(self.z.as_vector())?)?;
        let wg = self.g.transform(w.matrix())?;
        Self::new(wz, self.phi.clone(), wg)
    }

    /// Parameters of `star(G_z(φ, g)) = G_{−Dz}(−φ, g)`.
    pub fn star(&self) -> Self {
        Self {
            z: self.z.reflected(),
            phi: self.phi.neg(),
            g: self.g.clone(),
        }
    }
}

impl fmt::Debug for GeneratorParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("G")
            .field("z", &self.z)
            .field("phi", &self.phi)
            .field("g", &self.g)
            .finish()
    }
}

/// A product of elementary factors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    dim: usize,
    factors: Vec<GeneratorParams>,
}

impl Word {
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            factors: Vec::new(),
        }
    }

    /// Keeps the sequence as given, without merging.
    pub fn from_factors(dim: usize, factors: Vec<GeneratorParams>) -> Result<Self> {
        if factors.iter().any(|f| f.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "all factors must have dimension {dim}"
            )));
        }
        Ok(Self { dim, factors })
    }

    /// Merges adjacent factors with equal direction and drops identities
    /// until no further change is possible.
    pub fn reduce(dim: usize, factors: impl IntoIterator<Item = GeneratorParams>) -> Result<Self> {
        let mut stack: Vec<GeneratorParams> = Vec::new();
        for f in factors {
            if f.dim() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "all factors must have dimension {dim}"
                )));
            }
            if f.is_identity() {
                continue;
            }
            match stack.last() {
                Some(top) if top.z == f.z => {
                    let merged = top.compose(&f)?;
                    stack.pop();
                    if !merged.is_identity() {
                        stack.push(merged);
                    }
                }
                _ => stack.push(f),
            }
        }
        Ok(Self {
            dim,
            factors: stack,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn factors(&self) -> &[GeneratorParams] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// No identity factors and adjacent directions distinct.
    pub fn is_reduced(&self) -> bool {
        self.factors.iter().all(|f| !f.is_identity())
            && self.factors.windows(2).all(|p| p[0].z != p[1].z)
    }

    pub fn to_matrix(&self) -> MatrixPoly {
        self.factors
            .iter()
            .fold(MatrixPoly::identity(self.dim), |acc, f| {
                acc.checked_mul(&f.build())
                    .expect("square factors of equal size")
            })
    }

    /// Sum of factor degrees; equals the matrix degree for reduced words.
    pub fn degree(&self) -> usize {
        self.factors.iter().map(GeneratorParams::degree).sum()
    }

    pub fn inverse(&self) -> Self {
        Self {
            dim: self.dim,
            factors: self
                .factors
                .iter()
                .rev()
                .map(GeneratorParams::inverse)
                .collect(),
        }
    }

    pub fn conjugate_by(&self, w: &ConstantUnitary) -> Result<Self> {
        Ok(Self {
            dim: self.dim,
            factors: self
                .factors
                .iter()
                .map(|f| f.conjugate_by(w))
                .collect::<Result<_>>()?,
        })
    }

    pub fn check_mode(&self, mode: Mode) -> Result<()> {
        self.factors.iter().try_for_each(|f| f.check_mode(mode))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.factors).finish()
    }
}

/// Constant matrix `diag{1, L}` with `L*L = I`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ConstantUnitary(Matrix);

impl ConstantUnitary {
    pub fn new(w: Matrix) -> Result<Self> {
        if !w.is_square() || w.rows() < 2 {
            return Err(Error::NotBlockUnitary("must be square of size ≥ 2".into()));
        }
        let n = w.rows();
        if !w[(0, 0)].is_one() || (1..n).any(|k| !w[(0, k)].is_zero() || !w[(k, 0)].is_zero()) {
            return Err(Error::NotBlockUnitary("first row/column must be e₁".into()));
        }
        if !w.adjoint().checked_mul(&w)?.is_identity() {
            return Err(Error::NotBlockUnitary("L*L ≠ I".into()));
        }
        Ok(Self(w))
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.adjoint())
    }
}
