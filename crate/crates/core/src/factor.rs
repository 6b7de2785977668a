//! Factorization of J-unitary matrix polynomials into the normal form
//! `U = G_{z_1}(φ_1, g_1)···G_{z_η}(φ_η, g_η)·V`.
//!
//! The engine repeatedly lowers the degree of a normalized member by
//! multiplying it on the right (or the left) with one elementary factor,
//! records each step, and finally reassembles the inverse factors into a
//! reduced [`Word`]. Every intermediate quantity is an exact field element.
//!
//! Inside this module coefficients are addressed leading-first:
//! `X_k` is the coefficient of `ω^{κ−k}`, so `X_0` is the leading one.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::{
    delta_basis, GeneratorParams, IsotropicDirection, Mode, PhasePoly, TangentPoly, Word,
};
use crate::matrix::{is_parallel, Matrix, Vector};
use crate::poly::{Degree, MatrixPoly};
use crate::sampling::{SampleConfig, Sampler};
use crate::scalar::{GaussianRational, Rational};

type Gq = GaussianRational;

/// Degree-zero member: `V·D·V* = D`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ConstantJUnitary(Matrix);

impl ConstantJUnitary {
    pub fn new(v: Matrix) -> Result<Self> {
        if !v.is_square() || v.rows() < 2 {
            return Err(Error::DimensionMismatch(
                "constant J-unitary matrix must be square of size ≥ 2".into(),
            ));
        }
        let lhs = v.d_right().checked_mul(&v.adjoint())?;
        if lhs != Matrix::metric(v.rows()) {
            return Err(Error::NotJUnitary("V·D·V* ≠ D".into()));
        }
        Ok(Self(v))
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    /// `V⁻¹ = D·V*·D`.
    pub fn inverse(&self) -> Self {
        Self(self.0.adjoint().d_left().d_right())
    }
}

fn require_square(u: &MatrixPoly) -> Result<usize> {
    if !u.is_square() || u.rows() < 2 {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix of size ≥ 2, got {}x{}",
            u.rows(),
            u.cols()
        )));
    }
    Ok(u.rows())
}

fn preserves_metric(u: &MatrixPoly) -> Result<bool> {
    let n = require_square(u)?;
    let d = MatrixPoly::constant(Matrix::metric(n));
    Ok(u.d_right().checked_mul(&u.star())? == d)
}

/// `U·D·U* = D`, exactly.
pub fn is_j_unitary(u: &MatrixPoly) -> Result<bool> {
    let forward = preserves_metric(u)?;
    if forward {
        // over a field U·D·U* = D forces U*·D·U = D as well
        let d = MatrixPoly::constant(Matrix::metric(u.rows()));
        let backward = u.star().d_right().checked_mul(u)? == d;
        assert!(backward, "U·D·U* = D holds but U*·D·U ≠ D");
    }
    Ok(forward)
}

/// Member of the normalized subgroup: J-unitary with `U(0) = I`.
pub fn is_normalized_member(u: &MatrixPoly) -> Result<bool> {
    Ok(is_j_unitary(u)? && u.coefficient(0).is_identity())
}

/// Splits `U = U₀·V` with `V = U(0)` and `U₀(0) = I`.
pub fn split_constant(u: &MatrixPoly) -> Result<(MatrixPoly, ConstantJUnitary)> {
    if !is_j_unitary(u)? {
        return Err(Error::NotJUnitary("U·D·U* ≠ D".into()));
    }
    split_member(u)
}

fn split_member(u: &MatrixPoly) -> Result<(MatrixPoly, ConstantJUnitary)> {
    let v = ConstantJUnitary::new(u.coefficient(0))?;
    if v.matrix().is_identity() {
        return Ok((u.clone(), v));
    }
    let u0 = u.checked_mul(&MatrixPoly::constant(v.inverse().0))?;
    debug_assert!(u0.coefficient(0).is_identity());
    Ok((u0, v))
}

/// `X = α·D·y·z*` with normalized isotropic `y`, `z`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Dyad {
    pub alpha: Gq,
    pub y: IsotropicDirection,
    pub z: IsotropicDirection,
}

impl Dyad {
    pub fn to_matrix(&self) -> Matrix {
        dyad_shape(&self.y, &self.z).scale(&self.alpha)
    }
}

/// `D·y·z*`.
fn dyad_shape(y: &IsotropicDirection, z: &IsotropicDirection) -> Matrix {
    y.as_vector().apply_d().outer(z.as_vector())
}

/// If `x = α·D·y·z*`, returns `α`. The (0,0) entry of `D·y·z*` is −1.
fn dyad_multiple(x: &Matrix, shape: &Matrix) -> Option<Gq> {
    let alpha = -&x[(0, 0)];
    (shape.scale(&alpha) == *x).then_some(alpha)
}

/// Writes a nonzero `X` with `X·D·X* = X*·D·X = 0` as `α·D·y·z*`.
pub fn dyad_extract(x: &Matrix) -> Result<Dyad> {
    if !x.is_square() || x.rows() < 2 {
        return Err(Error::DimensionMismatch(
            "dyad extraction needs a square matrix".into(),
        ));
    }
    if x.is_zero() {
        return Err(Error::Precondition(
            "cannot extract a dyad from the zero matrix".into(),
        ));
    }
    // X·D·X* = X*·D·X = 0 exactly when X is a multiple of D·y·z* with
    // isotropic y, z, which is what gets checked below
    let n = x.rows();
    let col = (0..n)
        .map(|j| x.col(j))
        .find(|c| !c.is_zero())
        .expect("nonzero matrix");
    let row = (0..n)
        .map(|i| x.row(i))
        .find(|r| !r.is_zero())
        .expect("nonzero matrix");
    let y = IsotropicDirection::from_generatrix(&col.apply_d())
        .map_err(|e| Error::Precondition(format!("column space is not isotropic: {e}")))?;
    let z = IsotropicDirection::from_generatrix(&row.conj())
        .map_err(|e| Error::Precondition(format!("row space is not isotropic: {e}")))?;
    let alpha = dyad_multiple(x, &dyad_shape(&y, &z))
        .ok_or_else(|| Error::Precondition("X·D·X* and X*·D·X must both vanish".into()))?;
    Ok(Dyad { alpha, y, z })
}

/// Leading-first scan indices of a matrix polynomial relative to `(y, z)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ScanIndices {
    /// Number of leading coefficients that are multiples of `D·y·z*`.
    pub tau: usize,
    /// First index `≥ τ` with `X·D·z ≠ 0`.
    pub mu: usize,
    /// First index `≥ τ` with `y*·X ≠ 0`.
    pub xi: usize,
}

/// Leading-first coefficient view.
struct LeadingFirst<'a> {
    u: &'a MatrixPoly,
    kappa: usize,
}

impl<'a> LeadingFirst<'a> {
    fn new(u: &'a MatrixPoly) -> Result<Self> {
        match u.degree() {
            Degree::Finite(kappa) => Ok(Self { u, kappa }),
            Degree::NegInfinity => Err(Error::Precondition("zero matrix polynomial".into())),
        }
    }

    /// `X_k`, the coefficient of `ω^{κ−k}`; zero for `k > κ`.
    fn get(&self, k: usize) -> Matrix {
        match self.kappa.checked_sub(k) {
            Some(power) => self.u.coefficient(power),
            None => Matrix::zeros(self.u.rows(), self.u.cols()),
        }
    }
}

pub fn scan_indices(
    u: &MatrixPoly,
    y: &IsotropicDirection,
    z: &IsotropicDirection,
) -> Result<ScanIndices> {
    let x = LeadingFirst::new(u)?;
    let shape = dyad_shape(y, z);
    let tau = (0..x.kappa)
        .take_while(|&k| dyad_multiple(&x.get(k), &shape).is_some())
        .count();
    if tau == 0 {
        return Err(Error::Precondition(
            "leading coefficient is not a multiple of D·y·z*".into(),
        ));
    }
    let dz = z.as_vector().apply_d();
    let mu = (tau..=x.kappa)
        .find(|&k| !x.get(k).mul_vec(&dz).map(|v| v.is_zero()).unwrap_or(true))
        .ok_or_else(|| Error::NotNormalized("no coefficient moves D·z".into()))?;
    let xi = (tau..=x.kappa)
        .find(|&k| {
            !x.get(k)
                .row_mul(y.as_vector())
                .map(|v| v.is_zero())
                .unwrap_or(true)
        })
        .ok_or_else(|| Error::NotNormalized("no coefficient moves y*".into()))?;
    Ok(ScanIndices { tau, mu, xi })
}

/// `X = D·(r·z* − y·s* + α·y·z*)` with `s ∈ Δ_z⁰`, `r ∈ Δ_y⁰`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TangentSplit {
    pub r: Vector,
    pub s: Vector,
    pub alpha: Gq,
}

fn in_delta(d: &Vector, z: &IsotropicDirection) -> bool {
    let zv = z.as_vector();
    d.inner(zv).is_zero() && d.inner(&zv.apply_d()).is_zero()
}

/// Recovers `(r, s, α)` from `X = D·(r·z* − y·s* + α·y·z*)` and checks
/// the reassembly exactly.
pub fn tangent_decompose(
    x: &Matrix,
    y: &IsotropicDirection,
    z: &IsotropicDirection,
) -> Result<TangentSplit> {
    let (yv, zv) = (y.as_vector(), z.as_vector());
    let yy = Gq::from(yv.norm2());
    let zz = Gq::from(zv.norm2());
    let dxz = x.mul_vec(zv)?.apply_d();
    let alpha = yv.inner(&dxz).checked_div(&(&yy * &zz))?;
    // (y*·D·X)ᵀ, entrywise
    let ydx = x.row_mul(&yv.apply_d())?;
    let s = zv.scale(&alpha.conj()).sub(&ydx.conj().scale(&yy.recip()?));
    let r = dxz.scale(&zz.recip()?).sub(&yv.scale(&alpha));
    if !in_delta(&s, z) || !in_delta(&r, y) {
        return Err(Error::Precondition(
            "coefficient does not split into tangent dyads".into(),
        ));
    }
    let rebuilt = r
        .outer(zv)
        .checked_sub(&yv.outer(&s))?
        .checked_add(&yv.outer(zv).scale(&alpha))?
        .d_left();
    if rebuilt != *x {
        return Err(Error::Precondition(
            "coefficient does not split into tangent dyads".into(),
        ));
    }
    Ok(TangentSplit { r, s, alpha })
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Branch {
    /// `μ < 2τ` (or `ξ < 2τ`): a pure phase monomial `iρω^μ` cancels the
    /// leading coefficient.
    Case1,
    /// `μ, ξ ≥ 2τ`: phase `iρω^{2τ}` together with tangent `d·ω^τ`.
    Case2,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Case1 => "case1",
            Branch::Case2 => "case2",
        })
    }
}

/// One degree-lowering multiplication.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReductionStep {
    pub side: Side,
    /// The factor that was multiplied in (its inverse belongs to the result).
    pub params: GeneratorParams,
    pub branch: Branch,
    pub indices: ScanIndices,
    pub degree_before: usize,
    pub degree_after: usize,
}

struct Analysis<'a> {
    coeffs: LeadingFirst<'a>,
    dyad: Dyad,
    indices: ScanIndices,
}

fn analyze(u: &MatrixPoly) -> Result<Analysis<'_>> {
    let coeffs = LeadingFirst::new(u)?;
    let dyad = dyad_extract(&coeffs.get(0))
        .map_err(|e| Error::NotNormalized(format!("leading coefficient: {e}")))?;
    let indices = scan_indices(u, &dyad.y, &dyad.z)?;
    Ok(Analysis {
        coeffs,
        dyad,
        indices,
    })
}

/// Factor `G_z(φ, g)` with `deg(U·G) < deg U` for the requested branch.
fn right_factor(an: &Analysis<'_>, branch: Branch) -> Result<GeneratorParams> {
    let Dyad { alpha, y, z } = &an.dyad;
    let dy = y.as_vector().apply_d();
    let dz = z.as_vector().apply_d();
    let ScanIndices { tau, mu, .. } = an.indices;
    match branch {
        Branch::Case1 => {
            // α₀·D·y + iρ·X_μ·D·z = 0 with X_μ·D·z = c·D·y, so ρ = i·α₀/c
            let w = an.coeffs.get(mu).mul_vec(&dz)?;
            let c = is_parallel(&dy, &w).ok_or_else(|| {
                Error::NotNormalized(format!("X_{mu}·D·z is not parallel to D·y"))
            })?;
            let rho = alpha.mul_i().checked_div(&c)?;
            if !rho.is_real() {
                return Err(Error::NotNormalized(format!(
                    "phase coefficient {rho} is not real"
                )));
            }
            GeneratorParams::new(
                z.clone(),
                PhasePoly::monomial(rho.re, mu)?,
                TangentPoly::zero(z.dim()),
            )
        }
        Branch::Case2 => {
            let split = tangent_decompose(&an.coeffs.get(tau), y, z)
                .map_err(|e| Error::NotNormalized(format!("X_{tau}: {e}")))?;
            if split.s.is_zero() {
                return Err(Error::NotNormalized(
                    "right reduction needs a nonzero s component".into(),
                ));
            }
            let s0 = split.s.scale(&alpha.conj().recip()?);
            let p = dy.scale(alpha);
            let w = an.coeffs.get(2 * tau).mul_vec(&dz)?;
            let lambda = is_parallel(&p, &w).ok_or_else(|| {
                Error::NotNormalized(format!("X_{}·D·z is not parallel to α₀·D·y", 2 * tau))
            })?;
            let (sigma0, rho0) = (lambda.re, lambda.im);
            let half_norm = s0.norm2() / Rational::from_integer(2.into());
            if sigma0 != -half_norm.clone() {
                return Err(Error::NotNormalized(format!(
                    "σ₀ = {} but −|s₀|²/2 = {}",
                    crate::scalar::format_rational(&sigma0),
                    crate::scalar::format_rational(&-half_norm)
                )));
            }
            // a = iρ₀ − |s₀|²/2; θ = 1/conj(a) and ρ = ρ₀/|a|² make ε vanish
            let a = Gq::new(-half_norm, rho0.clone());
            let theta = a.conj().recip()?;
            let rho = rho0 / a.abs2();
            let d = s0.scale(&theta);
            let phi = if rho.is_zero() {
                PhasePoly::zero()
            } else {
                PhasePoly::monomial(rho, 2 * tau)?
            };
            GeneratorParams::new(z.clone(), phi, TangentPoly::monomial(d, tau)?)
        }
    }
}

/// Multiplies `U` by one elementary factor so that the degree drops.
///
/// On the right branch `U' = U·G`; on the left branch `U' = G·U`, computed
/// by reducing `star(U)` on the right and starring the factor back.
pub fn reduce_once(u: &MatrixPoly, mode: Mode) -> Result<(MatrixPoly, ReductionStep)> {
    let kappa = match u.degree() {
        Degree::Finite(k) if k > 0 => k,
        _ => {
            return Err(Error::Precondition(
                "degree reduction needs a matrix of positive degree".into(),
            ))
        }
    };
    let an = analyze(u)?;
    let ScanIndices { tau, mu, xi } = an.indices;
    let (side, branch) = if mu < 2 * tau {
        (Side::Right, Branch::Case1)
    } else if xi < 2 * tau {
        (Side::Left, Branch::Case1)
    } else {
        let split = tangent_decompose(&an.coeffs.get(tau), &an.dyad.y, &an.dyad.z)
            .map_err(|e| Error::NotNormalized(format!("X_{tau}: {e}")))?;
        if !split.s.is_zero() {
            (Side::Right, Branch::Case2)
        } else if !split.r.is_zero() {
            (Side::Left, Branch::Case2)
        } else {
            return Err(Error::NotNormalized(format!(
                "X_{tau} is a pure dyad although τ = {tau} is maximal"
            )));
        }
    };
    let (params, reduced) = match side {
        Side::Right => {
            let params = right_factor(&an, branch)?;
            let reduced = u.checked_mul(&params.build())?;
            (params, reduced)
        }
        Side::Left => {
            let starred = u.star();
            let params = right_factor(&analyze(&starred)?, branch)?.star();
            let reduced = params.build().checked_mul(u)?;
            (params, reduced)
        }
    };
    let degree_after = match reduced.degree() {
        Degree::Finite(d) if d < kappa => d,
        other => {
            return Err(Error::NotNormalized(format!(
                "{branch} {side} step did not lower the degree ({kappa} → {other})"
            )))
        }
    };
    params
        .check_mode(mode)
        .map_err(|e| Error::NotNormalized(format!("{branch} {side} step left the mode: {e}")))?;
    Ok((
        reduced,
        ReductionStep {
            side,
            params,
            branch,
            indices: an.indices,
            degree_before: kappa,
            degree_after,
        },
    ))
}

/// Normal form `U = word·tail`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FactorizationResult {
    pub word: Word,
    pub tail: ConstantJUnitary,
    pub trace: Vec<ReductionStep>,
}

#[derive(Clone, Copy, Debug)]
pub struct FactorOptions {
    /// Re-multiply the result and compare with the input.
    pub verify: bool,
}

impl Default for FactorOptions {
    fn default() -> Self {
        Self { verify: true }
    }
}

/// Factors `U` into its unique reduced word and constant tail, verified.
pub fn factor(u: &MatrixPoly, mode: Mode) -> Result<FactorizationResult> {
    factor_with(u, mode, FactorOptions::default())
}

pub fn factor_with(u: &MatrixPoly, mode: Mode, opts: FactorOptions) -> Result<FactorizationResult> {
    let n = require_square(u)?;
    mode.check_matrix_poly(u)?;
    // the final reconstruction check covers U*·D·U = D
    if !preserves_metric(u)? {
        return Err(Error::NotJUnitary("U·D·U* ≠ D".into()));
    }
    let (u0, tail) = split_member(u)?;
    let start = u0.degree().finite().unwrap_or(0);

    let mut current = u0;
    let mut trace = Vec::new();
    while current.degree() > Degree::Finite(0) {
        if trace.len() >= start {
            return Err(Error::NotNormalized(format!(
                "no termination after {start} reductions"
            )));
        }
        let (next, step) = reduce_once(&current, mode)?;
        current = next;
        trace.push(step);
    }
    if !current.is_identity() {
        return Err(Error::NotNormalized(
            "degree-zero residue is not the identity".into(),
        ));
    }

    // U₀ = L₁⁻¹···L_k⁻¹ · R_m⁻¹···R₁⁻¹
    let lefts = trace
        .iter()
        .filter(|s| s.side == Side::Left)
        .map(|s| s.params.inverse());
    let rights = trace
        .iter()
        .rev()
        .filter(|s| s.side == Side::Right)
        .map(|s| s.params.inverse());
    let word = Word::reduce(n, lefts.chain(rights))?;

    if opts.verify {
        verify(u, &word, &tail, start, mode)?;
    }
    Ok(FactorizationResult { word, tail, trace })
}

fn verify(
    u: &MatrixPoly,
    word: &Word,
    tail: &ConstantJUnitary,
    degree: usize,
    mode: Mode,
) -> Result<()> {
    if !word.is_reduced() {
        return Err(Error::NotNormalized("result word is not reduced".into()));
    }
    let rebuilt = word
        .to_matrix()
        .checked_mul(&MatrixPoly::constant(tail.matrix().clone()))?;
    if rebuilt != *u {
        return Err(Error::NotNormalized(
            "reconstruction differs from input".into(),
        ));
    }
    if word.degree() != degree {
        return Err(Error::NotNormalized(format!(
            "factor degrees sum to {} but the matrix has degree {degree}",
            word.degree()
        )));
    }
    word.check_mode(mode)
}

/// Outcome of the structural checks for real coefficients in `ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealOmegaReport {
    pub nu: usize,
    /// No non-identity normalized member exists.
    pub trivial: bool,
    pub max_tangent_dim: usize,
    pub phase_space_empty: bool,
    pub directions_sampled: usize,
    pub pairs_tested: usize,
    pub pairs_commuting: usize,
    /// A pair over distinct directions whose products differ.
    pub noncommuting_example: Option<(GeneratorParams, GeneratorParams)>,
}

impl RealOmegaReport {
    pub fn passed(&self) -> bool {
        let structure = if self.nu == 2 {
            self.trivial && self.max_tangent_dim == 0
        } else {
            !self.trivial && self.noncommuting_example.is_some()
        };
        structure && self.phase_space_empty && self.pairs_commuting == self.pairs_tested
    }
}

/// Samples real directions and factors and checks that the same-direction
/// subgroups are commutative (and trivial for `ν = 2`).
pub fn real_omega_report(nu: usize, pairs: usize, seed: u64) -> Result<RealOmegaReport> {
    let mut sampler = Sampler::new(SampleConfig {
        nu,
        mode: Mode::RealOmega,
        seed,
        ..SampleConfig::default()
    })?;
    let phase_space_empty = PhasePoly::monomial(Rational::one(), 1)?
        .check_mode(Mode::RealOmega)
        .is_err();
    let mut max_tangent_dim = 0;
    let mut directions_sampled = 0;
    let mut any_generator = false;
    for _ in 0..pairs.max(1) {
        let z = sampler.sample_xi();
        directions_sampled += 1;
        max_tangent_dim = max_tangent_dim.max(delta_basis(&z).len());
        any_generator |= sampler.sample_params(&z).is_ok();
    }
    let mut report = RealOmegaReport {
        nu,
        trivial: !any_generator,
        max_tangent_dim,
        phase_space_empty,
        directions_sampled,
        pairs_tested: 0,
        pairs_commuting: 0,
        noncommuting_example: None,
    };
    if report.trivial {
        return Ok(report);
    }
    for _ in 0..pairs {
        let z = sampler.sample_xi();
        let a = sampler.sample_params(&z)?;
        let b = sampler.sample_params(&z)?;
        let (ma, mb) = (a.build(), b.build());
        report.pairs_tested += 1;
        if ma.checked_mul(&mb)? == mb.checked_mul(&ma)? {
            report.pairs_commuting += 1;
        }
    }
    for _ in 0..MAX_EXAMPLE_ATTEMPTS {
        let (za, zb) = (sampler.sample_xi(), sampler.sample_xi());
        if za == zb {
            continue;
        }
        let a = sampler.sample_params(&za)?;
        let b = sampler.sample_params(&zb)?;
        let (ma, mb) = (a.build(), b.build());
        if ma.checked_mul(&mb)? != mb.checked_mul(&ma)? {
            report.noncommuting_example = Some((a, b));
            break;
        }
    }
    Ok(report)
}

const MAX_EXAMPLE_ATTEMPTS: usize = 100;
