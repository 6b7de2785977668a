//! JSON interchange documents.
//!
//! Internally everything is a polynomial in `ω`. Documents may instead be
//! written in `λ = iω`; conversion happens here, on load and on output.
//! Scalars are `{"re": "p/q", "im": "p/q"}` with exact rational strings.

use std::fmt;
use std::str::FromStr;

use jumat_core::{
    format_rational, parse_rational, validate_xi, ConstantJUnitary, Error, GaussianRational,
    GeneratorParams, Matrix, MatrixPoly, Mode, PhasePoly, Rational, ReductionStep, Result,
    TangentPoly, Vector, Word,
};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

type Gq = GaussianRational;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    #[default]
    Omega,
    Lambda,
}

impl Var {
    /// `(i)^k` for `λ` documents, `1` for `ω` documents: the factor taking
    /// the coefficient of `var^k` to the coefficient of `ω^k`.
    fn var_to_omega(self, k: usize) -> Gq {
        match self {
            Var::Omega => Gq::one(),
            Var::Lambda => i_pow(k),
        }
    }

    fn omega_to_var(self, k: usize) -> Gq {
        match self {
            Var::Omega => Gq::one(),
            Var::Lambda => i_pow(k).conj(),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::Omega => "omega",
            Var::Lambda => "lambda",
        })
    }
}

impl FromStr for Var {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "omega" => Ok(Var::Omega),
            "lambda" => Ok(Var::Lambda),
            other => Err(format!(
                "unknown variable `{other}` (expected omega or lambda)"
            )),
        }
    }
}

fn i_pow(k: usize) -> Gq {
    match k % 4 {
        0 => Gq::one(),
        1 => Gq::i(),
        2 => -Gq::one(),
        _ => -Gq::i(),
    }
}

mod mode_str {
    use super::*;

    pub fn serialize<S: Serializer>(m: &Mode, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(m.as_str())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Mode, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalarDoc {
    pub re: String,
    pub im: String,
}

impl ScalarDoc {
    pub fn encode(c: &Gq) -> Self {
        Self {
            re: format_rational(&c.re),
            im: format_rational(&c.im),
        }
    }

    pub fn decode(&self) -> Result<Gq> {
        Ok(Gq::new(
            parse_rational(&self.re)?,
            parse_rational(&self.im)?,
        ))
    }
}

pub type VectorDoc = Vec<ScalarDoc>;
pub type RowsDoc = Vec<Vec<ScalarDoc>>;

fn encode_vector(v: &Vector) -> VectorDoc {
    v.iter().map(ScalarDoc::encode).collect()
}

fn decode_vector(v: &VectorDoc) -> Result<Vector> {
    v.iter()
        .map(ScalarDoc::decode)
        .collect::<Result<_>>()
        .map(Vector)
}

fn encode_matrix(m: &Matrix) -> RowsDoc {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(ScalarDoc::encode).collect())
        .collect()
}

fn decode_matrix(rows: &RowsDoc, nu: usize) -> Result<Matrix> {
    if rows.len() != nu || rows.iter().any(|r| r.len() != nu) {
        return Err(Error::DimensionMismatch(format!(
            "coefficient is not {nu}x{nu}"
        )));
    }
    let rows = rows
        .iter()
        .map(|r| r.iter().map(ScalarDoc::decode).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub var: Var,
    pub nu: usize,
    #[serde(with = "mode_str")]
    pub mode: Mode,
    /// Coefficient matrices in ascending powers of `var`.
    pub coeffs: Vec<RowsDoc>,
}

impl MatrixDoc {
    pub fn encode(u: &MatrixPoly, var: Var, mode: Mode) -> Self {
        let coeffs = u
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| encode_matrix(&c.scale(&var.omega_to_var(k))))
            .collect();
        Self {
            var,
            nu: u.rows(),
            mode,
            coeffs,
        }
    }

    /// The matrix polynomial in `ω`.
    pub fn decode(&self) -> Result<MatrixPoly> {
        check_nu(self.nu)?;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, rows)| Ok(decode_matrix(rows, self.nu)?.scale(&self.var.var_to_omega(k))))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.is_empty() {
            return Err(Error::Parse("matrix document has no coefficients".into()));
        }
        MatrixPoly::new(self.nu, self.nu, coeffs)
    }
}

fn check_nu(nu: usize) -> Result<()> {
    if nu < 2 {
        return Err(Error::DimensionMismatch(format!(
            "nu must be at least 2, got {nu}"
        )));
    }
    Ok(())
}

/// One factor `G_z(φ, g)`.
///
/// In `ω` documents `phi[k-1]` is `ρ_k` of `φ = i·Σ ρ_k ω^k` and `g[k-1]` is
/// the coefficient of `ω^k`. In `λ` documents `phi[k-1]` is the real
/// coefficient of `λ^k` in `φ` (zero for even `k`) and `g[k-1]` the
/// coefficient of `λ^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorDoc {
    pub z: VectorDoc,
    pub phi: Vec<String>,
    pub g: Vec<VectorDoc>,
}

impl FactorDoc {
    pub fn encode(p: &GeneratorParams, var: Var) -> Result<Self> {
        let phi = p
            .phi()
            .rhos()
            .iter()
            .enumerate()
            .map(|(idx, rho)| {
                let k = idx + 1;
                match var {
                    Var::Omega => Ok(format_rational(rho)),
                    Var::Lambda if k % 2 == 1 => {
                        // c_k = ρ_k · i^{1-k} = ρ_k · (−1)^{(k−1)/2}
                        let c = if (k / 2) % 2 == 0 { rho.clone() } else { -rho };
                        Ok(format_rational(&c))
                    }
                    Var::Lambda if rho == &Rational::from_integer(0.into()) => Ok("0".into()),
                    Var::Lambda => Err(Error::InvalidPhase(format!(
                        "the ω^{k} phase term has no real λ coefficient"
                    ))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let g = p
            .g()
            .coeffs()
            .iter()
            .enumerate()
            .map(|(idx, v)| encode_vector(&v.scale(&var.omega_to_var(idx + 1))))
            .collect();
        Ok(Self {
            z: encode_vector(p.z().as_vector()),
            phi,
            g,
        })
    }

    pub fn decode(&self, nu: usize, var: Var, mode: Mode) -> Result<GeneratorParams> {
        let z = decode_vector(&self.z)?;
        if z.len() != nu {
            return Err(Error::DimensionMismatch(format!(
                "direction has {} entries, expected {nu}",
                z.len()
            )));
        }
        let z = validate_xi(z, mode)?;
        let rhos = self
            .phi
            .iter()
            .enumerate()
            .map(|(idx, s)| {
                let k = idx + 1;
                let c = parse_rational(s)?;
                match var {
                    Var::Omega => Ok(c),
                    Var::Lambda if k % 2 == 0 && c != Rational::from_integer(0.into()) => Err(
                        Error::InvalidPhase(format!("λ^{k} has even power; phases are odd in λ")),
                    ),
                    Var::Lambda if (k / 2) % 2 == 1 => Ok(-c),
                    Var::Lambda => Ok(c),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let g = self
            .g
            .iter()
            .enumerate()
            .map(|(idx, v)| {
                let v = decode_vector(v)?;
                if v.len() != nu {
                    return Err(Error::DimensionMismatch(format!(
                        "tangent coefficient has {} entries, expected {nu}",
                        v.len()
                    )));
                }
                Ok(v.scale(&var.var_to_omega(idx + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        let params = GeneratorParams::new(z, PhasePoly::new(rhos), TangentPoly::new(nu, g)?)?;
        params.check_mode(mode)?;
        Ok(params)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepDoc {
    pub side: String,
    pub branch: String,
    pub tau: usize,
    pub mu: usize,
    pub xi: usize,
    pub degree_before: usize,
    pub degree_after: usize,
    pub factor: FactorDoc,
}

impl StepDoc {
    pub fn encode(step: &ReductionStep, var: Var) -> Result<Self> {
        Ok(Self {
            side: step.side.to_string(),
            branch: step.branch.to_string(),
            tau: step.indices.tau,
            mu: step.indices.mu,
            xi: step.indices.xi,
            degree_before: step.degree_before,
            degree_after: step.degree_after,
            factor: FactorDoc::encode(&step.params, var)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordDoc {
    pub var: Var,
    pub nu: usize,
    #[serde(with = "mode_str")]
    pub mode: Mode,
    pub factors: Vec<FactorDoc>,
    /// Constant right factor; the identity for words in the normalized group.
    pub tail: RowsDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<StepDoc>>,
}

impl WordDoc {
    pub fn encode(word: &Word, tail: &Matrix, var: Var, mode: Mode) -> Result<Self> {
        Ok(Self {
            var,
            nu: word.dim(),
            mode,
            factors: word
                .factors()
                .iter()
                .map(|p| FactorDoc::encode(p, var))
                .collect::<Result<_>>()?,
            tail: encode_matrix(tail),
            trace: None,
        })
    }

    /// The word, which must be reduced, and its constant tail.
    pub fn decode(&self) -> Result<(Word, ConstantJUnitary)> {
        check_nu(self.nu)?;
        let factors = self
            .factors
            .iter()
            .map(|f| f.decode(self.nu, self.var, self.mode))
            .collect::<Result<Vec<_>>>()?;
        let word = Word::from_factors(self.nu, factors)?;
        if !word.is_reduced() {
            return Err(Error::Parse(
                "word is not reduced: identity factor or repeated adjacent direction".into(),
            ));
        }
        let tail = ConstantJUnitary::new(decode_matrix(&self.tail, self.nu)?)?;
        Ok((word, tail))
    }

    /// `word · tail` as a matrix polynomial in `ω`.
    pub fn expand(&self) -> Result<MatrixPoly> {
        let (word, tail) = self.decode()?;
        word.to_matrix()
            .checked_mul(&MatrixPoly::constant(tail.matrix().clone()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDoc {
    pub var: Var,
    pub nu: usize,
    #[serde(with = "mode_str")]
    pub mode: Mode,
    pub report: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Document {
    Matrix(MatrixDoc),
    Word(WordDoc),
    Report(ReportDoc),
}

impl Document {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Canonical text: pretty-printed JSON with a trailing newline.
    pub fn print(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Document::Matrix(_) => "matrix",
            Document::Word(_) => "word",
            Document::Report(_) => "report",
        }
    }

    pub fn var(&self) -> Var {
        match self {
            Document::Matrix(d) => d.var,
            Document::Word(d) => d.var,
            Document::Report(d) => d.var,
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Document::Matrix(d) => d.mode,
            Document::Word(d) => d.mode,
            Document::Report(d) => d.mode,
        }
    }

    /// Matrix polynomial in `ω` for matrix and word documents.
    pub fn to_matrix(&self) -> Result<MatrixPoly> {
        match self {
            Document::Matrix(d) => d.decode(),
            Document::Word(d) => d.expand(),
            Document::Report(_) => Err(Error::Parse(
                "expected a matrix or word document, got a report".into(),
            )),
        }
    }
}
