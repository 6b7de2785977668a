//! Seeded, exact random generation of directions, factors, words and
//! constant unitaries.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{
    delta_basis, ConstantUnitary, GeneratorParams, IsotropicDirection, Mode, PhasePoly,
    TangentPoly, Word,
};
use crate::matrix::{Matrix, Vector};
use crate::scalar::{GaussianRational, Rational};

type Gq = GaussianRational;

const MAX_ATTEMPTS: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub nu: usize,
    pub mode: Mode,
    pub max_factors: usize,
    pub max_phase_degree: usize,
    pub max_tangent_degree: usize,
    /// Bound on numerators and denominators of drawn coefficients.
    pub coefficient_height: u64,
    pub seed: u64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            nu: 3,
            mode: Mode::Complex,
            max_factors: 6,
            max_phase_degree: 3,
            max_tangent_degree: 3,
            coefficient_height: 1000,
            seed: 0,
        }
    }
}

pub struct Sampler {
    cfg: SampleConfig,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(cfg: SampleConfig) -> Result<Self> {
        if cfg.nu < 2 {
            return Err(Error::Sampling("nu must be at least 2".into()));
        }
        if cfg.coefficient_height == 0 {
            return Err(Error::Sampling(
                "coefficient height must be positive".into(),
            ));
        }
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Ok(Self { cfg, rng })
    }

    pub fn config(&self) -> &SampleConfig {
        &self.cfg
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn rational(&mut self, height: u64) -> Rational {
        let h = height as i64;
        let num = self.rng.gen_range(-h..=h);
        let den = self.rng.gen_range(1..=h);
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn nonzero_rational(&mut self, height: u64) -> Rational {
        loop {
            let r = self.rational(height);
            if !r.is_zero() {
                return r;
            }
        }
    }

    /// A scalar admitted by the mode at the given power of `ω`.
    fn scalar_for_power(&mut self, power: usize, height: u64) -> Gq {
        match self.cfg.mode {
            Mode::Complex => Gq::new(self.rational(height), self.rational(height)),
            Mode::RealOmega => Gq::from(self.rational(height)),
            Mode::RealLambda if power.is_multiple_of(2) => Gq::from(self.rational(height)),
            Mode::RealLambda => Gq::imag(self.rational(height)),
        }
    }

    fn within_height(&self, v: &Vector) -> bool {
        let bound = BigInt::from(self.cfg.coefficient_height);
        v.iter().all(|c| c.height() <= bound)
    }

    /// Direction drawn by stereographic projection of a small rational point.
    ///
    /// Complex mode uses the unit sphere in `R^{2(ν−1)}` and pairs real
    /// coordinates into Gaussian entries; the real modes use `R^{ν−1}`.
    pub fn sample_xi(&mut self) -> IsotropicDirection {
        let nu = self.cfg.nu;
        let real = self.cfg.mode != Mode::Complex;
        let sphere_dim = if real { nu - 1 } else { 2 * (nu - 1) };
        for _ in 0..MAX_ATTEMPTS {
            let x: Vec<Rational> = (0..sphere_dim - 1)
                .map(|_| {
                    if self.rng.gen_bool(1.0 / 3.0) {
                        Rational::zero()
                    } else {
                        self.nonzero_rational(4)
                    }
                })
                .collect();
            let mut p = stereographic(&x);
            if self.rng.gen_bool(0.5) {
                let last = p.len() - 1;
                p[last] = -&p[last];
            }
            let tail: Vec<Gq> = if real {
                p.into_iter().map(Gq::from).collect()
            } else {
                p.chunks(2)
                    .map(|c| Gq::new(c[0].clone(), c[1].clone()))
                    .collect()
            };
            let mut entries = vec![Gq::one()];
            entries.extend(tail);
            let z = Vector(entries);
            if self.within_height(&z) {
                return IsotropicDirection::new(z).expect("stereographic points are isotropic");
            }
        }
        // (1, 1, 0, ..., 0) is always representable
        let mut z = Vector::unit(nu, 0);
        z[1] = Gq::one();
        IsotropicDirection::new(z).expect("isotropic")
    }

    /// Rational combination of `Δ_z⁰` basis vectors at each power, admitted by the mode.
    pub fn sample_tangent(&mut self, z: &IsotropicDirection) -> TangentPoly {
        let basis = delta_basis(z);
        if basis.is_empty() || self.cfg.max_tangent_degree == 0 {
            return TangentPoly::zero(z.dim());
        }
        let degree = self.rng.gen_range(0..=self.cfg.max_tangent_degree);
        let coeffs = (1..=degree)
            .map(|power| {
                let must_be_nonzero = power == degree;
                self.tangent_coefficient(&basis, power, must_be_nonzero)
            })
            .collect();
        TangentPoly::new(z.dim(), coeffs).expect("basis vectors share the dimension")
    }

    fn tangent_coefficient(&mut self, basis: &[Vector], power: usize, nonzero: bool) -> Vector {
        let dim = basis[0].len();
        if !nonzero && self.rng.gen_bool(0.25) {
            return Vector::zeros(dim);
        }
        let height = self.cfg.coefficient_height;
        for _ in 0..MAX_ATTEMPTS {
            let mut v = Vector::zeros(dim);
            for b in basis {
                let c = self.scalar_for_power(power, height);
                v = v.add(&b.scale(&c));
            }
            if !v.is_zero() && self.within_height(&v) {
                return v;
            }
        }
        // smallest admitted nonzero multiple of one basis vector
        let unit = match self.cfg.mode {
            Mode::RealLambda if power % 2 == 1 => Gq::i(),
            _ => Gq::one(),
        };
        basis[self.rng.gen_range(0..basis.len())].scale(&unit)
    }

    /// Phase polynomial admitted by the mode (always zero in `RealOmega`).
    pub fn sample_phase(&mut self) -> PhasePoly {
        let degree = self.rng.gen_range(0..=self.cfg.max_phase_degree);
        let height = self.cfg.coefficient_height;
        let rhos = (1..=degree)
            .map(|power| {
                let admitted = match self.cfg.mode {
                    Mode::Complex => true,
                    Mode::RealOmega => false,
                    Mode::RealLambda => power % 2 == 1,
                };
                if !admitted {
                    Rational::zero()
                } else if power == degree {
                    self.nonzero_rational(height)
                } else {
                    self.rational(height)
                }
            })
            .collect();
        PhasePoly::new(rhos)
    }

    /// Non-identity factor with the given direction.
    pub fn sample_params(&mut self, z: &IsotropicDirection) -> Result<GeneratorParams> {
        for _ in 0..MAX_ATTEMPTS {
            let phi = self.sample_phase();
            let g = self.sample_tangent(z);
            let p = GeneratorParams::new(z.clone(), phi, g)?;
            if !p.is_identity() {
                return Ok(p);
            }
        }
        Err(Error::Sampling(format!(
            "no non-identity factor exists for nu = {} in mode {}",
            self.cfg.nu, self.cfg.mode
        )))
    }

    /// Reduced word with between 1 and `max_factors` factors; empty when
    /// the mode admits no non-identity factor (`ν = 2`, real `ω`).
    pub fn sample_word(&mut self) -> Word {
        let nu = self.cfg.nu;
        if self.cfg.max_factors == 0 || (nu == 2 && self.cfg.mode == Mode::RealOmega) {
            return Word::empty(nu);
        }
        let len = self.rng.gen_range(1..=self.cfg.max_factors);
        let mut factors: Vec<GeneratorParams> = Vec::with_capacity(len);
        while factors.len() < len {
            let z = self.sample_xi();
            if factors.last().is_some_and(|f| f.z() == &z) {
                continue;
            }
            let p = self
                .sample_params(&z)
                .expect("non-identity factors exist here");
            factors.push(p);
        }
        let w = Word::from_factors(nu, factors).expect("uniform dimension");
        debug_assert!(w.is_reduced());
        w
    }

    /// `diag{1, L}` with `L` the Cayley transform of a small random
    /// skew-Hermitian matrix (real skew-symmetric in the real modes).
    pub fn sample_upsilon(&mut self) -> Result<ConstantUnitary> {
        let n = self.cfg.nu - 1;
        for _ in 0..MAX_ATTEMPTS {
            let mut s = Matrix::zeros(n, n);
            for i in 0..n {
                if self.cfg.mode == Mode::Complex {
                    s[(i, i)] = Gq::imag(self.rational(3));
                }
                for j in i + 1..n {
                    let c = if self.cfg.mode == Mode::Complex {
                        Gq::new(self.rational(3), self.rational(3))
                    } else {
                        Gq::from(self.rational(3))
                    };
                    s[(j, i)] = -c.conj();
                    s[(i, j)] = c;
                }
            }
            if let Ok(l) = cayley(&s) {
                return ConstantUnitary::new(block_diag_one(&l));
            }
        }
        Err(Error::Sampling(format!(
            "Cayley transform failed {MAX_ATTEMPTS} times"
        )))
    }
}

/// Inverse stereographic projection `x ↦ (2x, |x|² − 1)/(|x|² + 1)`.
pub fn stereographic(x: &[Rational]) -> Vec<Rational> {
    let n2: Rational = x.iter().map(|c| c * c).sum();
    let den = &n2 + Rational::one();
    let two = Rational::from_integer(2.into());
    let mut p: Vec<Rational> = x.iter().map(|c| &two * c / &den).collect();
    p.push((n2 - Rational::one()) / den);
    p
}

/// `L = (I − S)(I + S)⁻¹`; unitary whenever `S* = −S`.
pub fn cayley(s: &Matrix) -> Result<Matrix> {
    let n = s.rows();
    let id = Matrix::identity(n);
    let inv = id
        .checked_add(s)?
        .inverse()
        .ok_or_else(|| Error::Sampling("I + S is singular".into()))?;
    id.checked_sub(s)?.checked_mul(&inv)
}

/// `diag{1, L}`.
pub fn block_diag_one(l: &Matrix) -> Matrix {
    let n = l.rows() + 1;
    let mut w = Matrix::identity(n);
    for i in 0..l.rows() {
        for j in 0..l.cols() {
            w[(i + 1, j + 1)] = l[(i, j)].clone();
        }
    }
    w
}
