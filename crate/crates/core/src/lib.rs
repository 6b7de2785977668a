//! Exact arithmetic for polynomial matrices that preserve an indefinite
//! metric of index one, with unique factorization into elementary factors.

pub mod error;
pub mod factor;
pub mod group;
pub mod matrix;
pub mod poly;
pub mod sampling;
pub mod scalar;

pub use error::{Error, Result};
pub use factor::{
    dyad_extract, factor, factor_with, is_j_unitary, is_normalized_member, real_omega_report,
    reduce_once, scan_indices, split_constant, tangent_decompose, Branch, ConstantJUnitary, Dyad,
    FactorOptions, FactorizationResult, RealOmegaReport, ReductionStep, ScanIndices, Side,
    TangentSplit,
};
pub use group::{
    delta_basis, validate_xi, ConstantUnitary, GeneratorParams, IsotropicDirection, Mode,
    PhasePoly, TangentPoly, Word,
};
pub use matrix::{is_parallel, is_real_parallel, Matrix, Vector};
pub use poly::{Degree, MatrixPoly, ScalarPoly, VectorPoly};
pub use sampling::{cayley, SampleConfig, Sampler};
pub use scalar::{format_rational, parse_rational, rat, GaussianRational, Rational};
