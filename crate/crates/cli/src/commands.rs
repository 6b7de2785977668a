use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use jumat_core::{
    factor_with, is_j_unitary, real_omega_report, ConstantUnitary, Error, FactorOptions,
    GaussianRational, GeneratorParams, Matrix, MatrixPoly, Mode, SampleConfig, Sampler, Word,
};
use rayon::prelude::*;
use serde_json::json;

use crate::document::{
    Document, FactorDoc, MatrixDoc, ReportDoc, ScalarDoc, StepDoc, Var, WordDoc,
};
use crate::{Cli, Command, GlobalOpts, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE};

/// Everything a command produced; `main` forwards it to the process.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn doc(doc: &Document) -> Self {
        Self {
            code: EXIT_OK,
            stdout: doc.print(),
            stderr: String::new(),
        }
    }

    fn fail(code: u8, msg: impl AsRef<str>) -> Self {
        Self {
            code,
            stdout: String::new(),
            stderr: format!("jumat: {}\n", msg.as_ref()),
        }
    }

    fn merge(parts: Vec<Outcome>) -> Self {
        parts.into_iter().fold(Self::default(), |mut acc, o| {
            acc.code = acc.code.max(o.code);
            acc.stdout.push_str(&o.stdout);
            acc.stderr.push_str(&o.stderr);
            acc
        })
    }
}

/// Error tagged with the exit status it maps to.
struct Failure {
    code: u8,
    msg: String,
}

type Step<T> = std::result::Result<T, Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure {
        code: EXIT_USAGE,
        msg: e.to_string(),
    }
}

/// Algorithmic errors on well-formed input are negative answers; the rest
/// are malformed input.
fn semantic(e: Error) -> Failure {
    let code = match e {
        Error::NotJUnitary(_)
        | Error::NotNormalized(_)
        | Error::ModeViolation { .. }
        | Error::DivisionByZero => EXIT_NEGATIVE,
        _ => EXIT_USAGE,
    };
    Failure {
        code,
        msg: e.to_string(),
    }
}

fn finish(name: &str, r: Step<Document>) -> Outcome {
    match r {
        Ok(doc) => Outcome::doc(&doc),
        Err(f) if name.is_empty() => Outcome::fail(f.code, f.msg),
        Err(f) => Outcome::fail(f.code, format!("{name}: {}", f.msg)),
    }
}

struct Input {
    name: String,
    text: String,
}

impl Input {
    fn parse(&self) -> Step<Document> {
        Document::parse(&self.text).map_err(usage)
    }
}

fn read_inputs(files: &[PathBuf], stdin: &mut dyn Read) -> Step<Vec<Input>> {
    let stdin_path = Path::new("-");
    if files.iter().filter(|p| p.as_path() == stdin_path).count() > 1 {
        return Err(usage("standard input can be read only once"));
    }
    let read_stdin = |stdin: &mut dyn Read| {
        let mut text = String::new();
        stdin
            .read_to_string(&mut text)
            .map_err(|e| usage(format!("reading standard input: {e}")))?;
        Ok(Input {
            name: "<stdin>".into(),
            text,
        })
    };
    if files.is_empty() {
        return Ok(vec![read_stdin(stdin)?]);
    }
    files
        .iter()
        .map(|p| {
            if p.as_path() == stdin_path {
                read_stdin(stdin)
            } else {
                fs::read_to_string(p)
                    .map(|text| Input {
                        name: p.display().to_string(),
                        text,
                    })
                    .map_err(|e| usage(format!("{}: {e}", p.display())))
            }
        })
        .collect()
}

fn read_one(file: &Option<PathBuf>, stdin: &mut dyn Read) -> Step<Input> {
    let files: Vec<PathBuf> = file.iter().cloned().collect();
    Ok(read_inputs(&files, stdin)?.remove(0))
}

/// Runs `f` over independent inputs, on `jobs` threads when `jobs > 1`,
/// keeping input order in the output.
fn batch(jobs: usize, inputs: &[Input], f: impl Fn(&Input) -> Outcome + Sync) -> Outcome {
    if jobs <= 1 || inputs.len() <= 1 {
        return Outcome::merge(inputs.iter().map(&f).collect());
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool,
        Err(e) => return Outcome::fail(EXIT_USAGE, format!("thread pool: {e}")),
    };
    Outcome::merge(pool.install(|| inputs.par_iter().map(&f).collect()))
}

pub fn run(cli: &Cli, stdin: &mut dyn Read) -> Outcome {
    let g = &cli.global;
    let single = |r: Step<Document>| finish("", r);
    match &cli.command {
        Command::Check { files, normalized } => match read_inputs(files, stdin) {
            Ok(inputs) => batch(g.jobs, &inputs, |i| check(g, i, *normalized)),
            Err(f) => Outcome::fail(f.code, f.msg),
        },
        Command::Factor {
            files, no_verify, ..
        } => match read_inputs(files, stdin) {
            Ok(inputs) => batch(g.jobs, &inputs, |i| factor(g, i, !no_verify)),
            Err(f) => Outcome::fail(f.code, f.msg),
        },
        Command::Mul { files } => single(read_inputs(files, stdin).and_then(|i| mul(g, &i))),
        Command::Inv { file } => single(read_one(file, stdin).and_then(|i| inv(g, &i))),
        Command::Gen {
            z,
            phi,
            g: tangent,
            word,
        } => single(gen(g, z, phi, tangent, *word)),
        Command::Rand {
            nu,
            count,
            max_factors,
            height,
            matrix,
        } => rand(g, *nu, *count, *max_factors, *height, *matrix),
        Command::Conj { file, by, random } => {
            single(read_one(file, stdin).and_then(|i| conj(g, &i, by.as_deref(), *random)))
        }
        Command::Selftest { cases } => selftest(g, *cases),
    }
}

fn check(g: &GlobalOpts, input: &Input, normalized: bool) -> Outcome {
    let r = (|| {
        let Document::Matrix(doc) = input.parse()? else {
            return Err(usage("check expects a matrix document"));
        };
        let u = doc.decode().map_err(usage)?;
        let mode = g.mode.unwrap_or(doc.mode);
        let member = is_j_unitary(&u).map_err(usage)?;
        let is_normalized = member && u.coefficient(0).is_identity();
        let mode_violation = mode.check_matrix_poly(&u).err().map(|e| e.to_string());
        let accepted = member && mode_violation.is_none() && (is_normalized || !normalized);
        let report = json!({
            "degree": u.degree().finite(),
            "member": member,
            "normalized": is_normalized,
            "mode_member": mode_violation.is_none(),
            "mode_detail": mode_violation,
            "requested": if normalized { "normalized" } else { "group" },
            "accepted": accepted,
        });
        let doc = Document::Report(ReportDoc {
            var: g.var.unwrap_or(doc.var),
            nu: doc.nu,
            mode,
            report,
        });
        Ok((doc, accepted))
    })();
    match r {
        Ok((doc, accepted)) => Outcome {
            code: if accepted { EXIT_OK } else { EXIT_NEGATIVE },
            ..Outcome::doc(&doc)
        },
        Err(f) => finish(&input.name, Err(f)),
    }
}

fn factor(g: &GlobalOpts, input: &Input, verify: bool) -> Outcome {
    let r = (|| {
        let doc = input.parse()?;
        if matches!(doc, Document::Report(_)) {
            return Err(usage("factor expects a matrix or word document"));
        }
        let u = doc.to_matrix().map_err(usage)?;
        if let (Some(max), Some(deg)) = (g.max_degree, u.degree().finite()) {
            if deg > max {
                return Err(usage(format!("degree {deg} exceeds --max-degree {max}")));
            }
        }
        let mode = g.mode.unwrap_or(doc.mode());
        let var = g.var.unwrap_or(doc.var());
        let res = factor_with(&u, mode, FactorOptions { verify }).map_err(semantic)?;
        let mut out = WordDoc::encode(&res.word, res.tail.matrix(), var, mode).map_err(usage)?;
        if g.trace {
            out.trace = Some(
                res.trace
                    .iter()
                    .map(|s| StepDoc::encode(s, var))
                    .collect::<jumat_core::Result<_>>()
                    .map_err(usage)?,
            );
        }
        Ok(Document::Word(out))
    })();
    finish(&input.name, r)
}

fn mul(g: &GlobalOpts, inputs: &[Input]) -> Step<Document> {
    let docs = inputs.iter().map(Input::parse).collect::<Step<Vec<_>>>()?;
    let first = &docs[0];
    let mut product: Option<MatrixPoly> = None;
    for d in &docs {
        let m = d.to_matrix().map_err(usage)?;
        product = Some(match product {
            None => m,
            Some(p) => p.checked_mul(&m).map_err(usage)?,
        });
    }
    let product = product.expect("at least one input");
    Ok(Document::Matrix(MatrixDoc::encode(
        &product,
        g.var.unwrap_or(first.var()),
        g.mode.unwrap_or(first.mode()),
    )))
}

fn inv(g: &GlobalOpts, input: &Input) -> Step<Document> {
    let doc = input.parse()?;
    let var = g.var.unwrap_or(doc.var());
    let mode = g.mode.unwrap_or(doc.mode());
    match &doc {
        Document::Word(w) => {
            let (word, tail) = w.decode().map_err(usage)?;
            if tail.matrix().is_identity() {
                let out = WordDoc::encode(&word.inverse(), tail.matrix(), var, mode);
                return out.map(Document::Word).map_err(usage);
            }
            // (w·V)⁻¹ = V⁻¹·w⁻¹ is refactored into word·tail form
            let u = w.expand().map_err(usage)?;
            let res = factor_with(&inverse_member(&u)?, mode, FactorOptions::default())
                .map_err(semantic)?;
            WordDoc::encode(&res.word, res.tail.matrix(), var, mode)
                .map(Document::Word)
                .map_err(usage)
        }
        Document::Matrix(m) => {
            let u = m.decode().map_err(usage)?;
            Ok(Document::Matrix(MatrixDoc::encode(
                &inverse_member(&u)?,
                var,
                mode,
            )))
        }
        Document::Report(_) => Err(usage("inv expects a matrix or word document")),
    }
}

/// `U⁻¹ = D·U*·D`, valid for members only.
fn inverse_member(u: &MatrixPoly) -> Step<MatrixPoly> {
    if !is_j_unitary(u).map_err(usage)? {
        return Err(Failure {
            code: EXIT_NEGATIVE,
            msg: "matrix is not J-unitary, so D·U*·D is not its inverse".into(),
        });
    }
    Ok(u.star().d_left().d_right())
}

fn parse_scalars(s: &str) -> Step<Vec<ScalarDoc>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<GaussianRational>()
                .map(|c| ScalarDoc::encode(&c))
                .map_err(usage)
        })
        .collect()
}

fn gen(g: &GlobalOpts, z: &str, phi: &str, tangent: &str, as_word: bool) -> Step<Document> {
    let var = g.var.unwrap_or_default();
    let mode = g.mode.unwrap_or_default();
    let z = parse_scalars(z)?;
    let nu = z.len();
    if nu < 2 {
        return Err(usage("direction needs at least two entries"));
    }
    let phi: Vec<String> = if phi.trim().is_empty() {
        Vec::new()
    } else {
        phi.split(',').map(|t| t.trim().to_string()).collect()
    };
    let tangent = if tangent.trim().is_empty() {
        Vec::new()
    } else {
        tangent
            .split(';')
            .map(parse_scalars)
            .collect::<Step<Vec<_>>>()?
    };
    let doc = FactorDoc { z, phi, g: tangent };
    let params = doc.decode(nu, var, mode).map_err(usage)?;
    if as_word {
        let word = Word::reduce(nu, [params]).map_err(usage)?;
        WordDoc::encode(&word, &Matrix::identity(nu), var, mode)
            .map(Document::Word)
            .map_err(usage)
    } else {
        Ok(Document::Matrix(MatrixDoc::encode(
            &params.build(),
            var,
            mode,
        )))
    }
}

fn rand(
    g: &GlobalOpts,
    nu: usize,
    count: usize,
    max_factors: usize,
    height: u64,
    matrix: bool,
) -> Outcome {
    let mode = g.mode.unwrap_or_default();
    let var = g.var.unwrap_or_default();
    let degree = g.max_degree.unwrap_or(3);
    let cfg = SampleConfig {
        nu,
        mode,
        max_factors,
        max_phase_degree: degree,
        max_tangent_degree: degree,
        coefficient_height: height,
        seed: g.seed,
    };
    let mut sampler = match Sampler::new(cfg) {
        Ok(s) => s,
        Err(e) => return Outcome::fail(EXIT_USAGE, e.to_string()),
    };
    let outs = (0..count)
        .map(|_| {
            let w = sampler.sample_word();
            let doc = if matrix {
                Ok(Document::Matrix(MatrixDoc::encode(
                    &w.to_matrix(),
                    var,
                    mode,
                )))
            } else {
                WordDoc::encode(&w, &Matrix::identity(nu), var, mode)
                    .map(Document::Word)
                    .map_err(usage)
            };
            finish("", doc)
        })
        .collect();
    Outcome::merge(outs)
}

fn conj(g: &GlobalOpts, input: &Input, by: Option<&Path>, random: bool) -> Step<Document> {
    let doc = input.parse()?;
    let mode = g.mode.unwrap_or(doc.mode());
    let var = g.var.unwrap_or(doc.var());
    let nu = match &doc {
        Document::Matrix(m) => m.nu,
        Document::Word(w) => w.nu,
        Document::Report(_) => return Err(usage("conj expects a matrix or word document")),
    };
    let w = match (by, random) {
        (Some(path), _) => {
            let text =
                fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let m = Document::parse(&text)
                .map_err(usage)?
                .to_matrix()
                .map_err(usage)?;
            if m.degree().finite().unwrap_or(0) != 0 || m.rows() != nu {
                return Err(usage(format!("--by must be a constant {nu}x{nu} matrix")));
            }
            ConstantUnitary::new(m.coefficient(0)).map_err(usage)?
        }
        (None, true) => Sampler::new(SampleConfig {
            nu,
            mode,
            seed: g.seed,
            ..SampleConfig::default()
        })
        .and_then(|mut s| s.sample_upsilon())
        .map_err(usage)?,
        (None, false) => return Err(usage("conj needs --by FILE or --random")),
    };
    let wm = MatrixPoly::constant(w.matrix().clone());
    let winv = MatrixPoly::constant(w.inverse().matrix().clone());
    match &doc {
        Document::Word(d) => {
            let (word, tail) = d.decode().map_err(usage)?;
            let word = word.conjugate_by(&w).map_err(usage)?;
            let tail = w
                .matrix()
                .checked_mul(tail.matrix())
                .and_then(|t| t.checked_mul(w.inverse().matrix()))
                .map_err(usage)?;
            WordDoc::encode(&word, &tail, var, mode)
                .map(Document::Word)
                .map_err(usage)
        }
        _ => {
            let u = doc.to_matrix().map_err(usage)?;
            let out = wm
                .checked_mul(&u)
                .and_then(|x| x.checked_mul(&winv))
                .map_err(usage)?;
            Ok(Document::Matrix(MatrixDoc::encode(&out, var, mode)))
        }
    }
}

/// Per-configuration battery: round trips, membership, the group law on a
/// shared direction and conjugation by a constant unitary.
fn selftest(g: &GlobalOpts, cases: usize) -> Outcome {
    let modes: Vec<Mode> = match g.mode {
        Some(m) => vec![m],
        None => Mode::ALL.to_vec(),
    };
    let mut outs = Vec::new();
    for mode in modes {
        for nu in 2..=4 {
            let r = selftest_config(mode, nu, cases, g.seed);
            let passed = r.values().all(|v| v.as_bool() != Some(false));
            let doc = Document::Report(ReportDoc {
                var: Var::Omega,
                nu,
                mode,
                report: serde_json::Value::Object(r),
            });
            outs.push(Outcome {
                code: if passed { EXIT_OK } else { EXIT_NEGATIVE },
                ..Outcome::doc(&doc)
            });
        }
    }
    Outcome::merge(outs)
}

fn selftest_config(
    mode: Mode,
    nu: usize,
    cases: usize,
    seed: u64,
) -> serde_json::Map<String, serde_json::Value> {
    let mut sampler = Sampler::new(SampleConfig {
        nu,
        mode,
        max_factors: 4,
        max_phase_degree: 2,
        max_tangent_degree: 2,
        coefficient_height: 100,
        seed,
    })
    .expect("valid configuration");
    let (mut round_trip, mut member, mut group_law, mut conjugation) = (true, true, true, true);
    for _ in 0..cases {
        let w = sampler.sample_word();
        let u = w.to_matrix();
        member &= is_j_unitary(&u).unwrap_or(false);
        round_trip &= factor_with(&u, mode, FactorOptions::default())
            .is_ok_and(|r| r.word == w && r.tail.matrix().is_identity());

        let z = sampler.sample_xi();
        if let (Ok(a), Ok(b)) = (sampler.sample_params(&z), sampler.sample_params(&z)) {
            group_law &= law_holds(&a, &b);
            if let Ok(wu) = sampler.sample_upsilon() {
                conjugation &= conjugation_holds(&a, &wu);
            }
        }
    }
    let mut m = serde_json::Map::new();
    m.insert("cases".into(), json!(cases));
    m.insert("round_trip".into(), json!(round_trip));
    m.insert("membership".into(), json!(member));
    m.insert("group_law".into(), json!(group_law));
    m.insert("conjugation".into(), json!(conjugation));
    if mode == Mode::RealOmega {
        let ok = real_omega_report(nu, cases, seed).is_ok_and(|r| r.passed());
        m.insert("real_omega_structure".into(), json!(ok));
    }
    m
}

fn law_holds(a: &GeneratorParams, b: &GeneratorParams) -> bool {
    match (a.compose(b), a.build().checked_mul(&b.build())) {
        (Ok(c), Ok(prod)) => c.build() == prod,
        _ => false,
    }
}

fn conjugation_holds(p: &GeneratorParams, w: &ConstantUnitary) -> bool {
    let Ok(q) = p.conjugate_by(w) else {
        return false;
    };
    let lhs = MatrixPoly::constant(w.matrix().clone())
        .checked_mul(&p.build())
        .and_then(|x| x.checked_mul(&MatrixPoly::constant(w.inverse().matrix().clone())));
    lhs.is_ok_and(|l| l == q.build())
}
