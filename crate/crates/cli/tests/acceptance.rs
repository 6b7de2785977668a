//! Acceptance suite. Every check is exact; the only numeric tolerances are the
//! wall-clock budgets below. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::Parser;
use jumat_cli::{run, Cli, Document, MatrixDoc, ScalarDoc, Var};
use jumat_core::{
    factor, format_rational, is_j_unitary, rat, real_omega_report, validate_xi, Degree,
    GaussianRational, GeneratorParams, IsotropicDirection, Matrix, MatrixPoly, Mode, PhasePoly,
    Rational, SampleConfig, Sampler, TangentPoly, Vector, Word,
};

/// Total budget for the round-trip corpus.
const ROUND_TRIP_BUDGET: Duration = Duration::from_secs(300);
/// Budget for factoring one degree-20 word with `ν = 4`.
const DEGREE_20_BUDGET: Duration = Duration::from_secs(10);

const ROUND_TRIP_WORDS: usize = 500;
const MEMBERSHIP_CASES: usize = 1000;
const PERTURBED_MATRICES: usize = 100;
const GROUP_LAW_PAIRS: usize = 500;
const CONJUGATION_CASES: usize = 200;
const CENTER_CASES: usize = 200;
const CENTER_WITNESSES: usize = 20;
const REAL_OMEGA_PAIRS: usize = 100;
const ALTERNATION_SEQUENCES: usize = 200;

const CONFIGS: [(usize, Mode); 9] = [
    (2, Mode::Complex),
    (3, Mode::Complex),
    (4, Mode::Complex),
    (2, Mode::RealOmega),
    (3, Mode::RealOmega),
    (4, Mode::RealOmega),
    (2, Mode::RealLambda),
    (3, Mode::RealLambda),
    (4, Mode::RealLambda),
];

/// Configurations with non-identity factors.
fn nontrivial() -> impl Iterator<Item = (usize, Mode)> {
    CONFIGS
        .into_iter()
        .filter(|&(nu, mode)| !(nu == 2 && mode == Mode::RealOmega))
}

type Verdict = Result<String, String>;

fn sampler(nu: usize, mode: Mode, seed: u64, factors: usize, degree: usize) -> Sampler {
    Sampler::new(SampleConfig {
        nu,
        mode,
        max_factors: factors,
        max_phase_degree: degree,
        max_tangent_degree: degree,
        coefficient_height: 1000,
        seed,
    })
    .expect("valid sampler configuration")
}

fn mul(a: &MatrixPoly, b: &MatrixPoly) -> MatrixPoly {
    a.checked_mul(b).expect("square factors of equal size")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Words from criterion 1 and their factorizations, reused by criterion 4.
struct RoundTrip {
    matrix: MatrixPoly,
    recovered: Word,
}

fn round_trip(corpus: &mut Vec<RoundTrip>) -> Verdict {
    let start = Instant::now();
    let mut counts = Vec::new();
    for (i, &(nu, mode)) in CONFIGS.iter().enumerate() {
        let mut s = sampler(nu, mode, 1000 + i as u64, 6, 3);
        let mut passed = 0;
        for case in 0..ROUND_TRIP_WORDS {
            let w = s.sample_word();
            let u = w.to_matrix();
            let res = factor(&u, mode)
                .map_err(|e| format!("{mode} nu={nu} case {case}: factor failed: {e}"))?;
            ensure(res.word == w, || {
                format!("{mode} nu={nu} case {case}: word differs")
            })?;
            ensure(res.tail.matrix().is_identity(), || {
                format!("{mode} nu={nu} case {case}: tail is not I")
            })?;
            passed += 1;
            corpus.push(RoundTrip {
                matrix: u,
                recovered: res.word,
            });
        }
        counts.push(format!("{mode}/{nu}:{passed}"));
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= ROUND_TRIP_BUDGET, || {
        format!("took {elapsed:.1?}, budget {ROUND_TRIP_BUDGET:?}")
    })?;
    Ok(format!(
        "{} words, 100% exact [{}]",
        corpus.len(),
        counts.join(" ")
    ))
}

fn perturbation(k: usize) -> GaussianRational {
    let r = rat((k % 7) as i64 + 1, (k % 5) as i64 + 1);
    let r = if k.is_multiple_of(3) { -r } else { r };
    if k.is_multiple_of(2) {
        GaussianRational::from(r)
    } else {
        GaussianRational::imag(r)
    }
}

fn membership() -> Verdict {
    let configs: Vec<_> = nontrivial().collect();
    let mut matrices = Vec::with_capacity(MEMBERSHIP_CASES);
    let mut samplers: Vec<_> = configs
        .iter()
        .enumerate()
        .map(|(i, &(nu, mode))| sampler(nu, mode, 2000 + i as u64, 3, 2))
        .collect();
    for case in 0..MEMBERSHIP_CASES {
        let s = &mut samplers[case % configs.len()];
        let u = if case % 2 == 0 {
            let z = s.sample_xi();
            s.sample_params(&z).map_err(|e| e.to_string())?.build()
        } else {
            s.sample_word().to_matrix()
        };
        ensure(is_j_unitary(&u).map_err(|e| e.to_string())?, || {
            format!("case {case} is not a member")
        })?;
        matrices.push(u);
    }
    let mut perturbed = 0;
    for (m, u) in matrices.iter().take(PERTURBED_MATRICES).enumerate() {
        let nu = u.rows();
        let top = u.degree().finite().unwrap_or(0) + 1;
        for power in 0..=top {
            for entry in 0..nu * nu {
                let mut coeffs: Vec<Matrix> = (0..=top).map(|k| u.coefficient(k)).collect();
                coeffs[power][(entry / nu, entry % nu)] += &perturbation(m + power + entry);
                let p = MatrixPoly::new(nu, nu, coeffs).map_err(|e| e.to_string())?;
                ensure(!is_j_unitary(&p).map_err(|e| e.to_string())?, || {
                    format!("matrix {m}: perturbing power {power} entry {entry} kept membership")
                })?;
                perturbed += 1;
            }
        }
    }
    Ok(format!(
        "{MEMBERSHIP_CASES} generators and words are members; {perturbed} single-entry perturbations of {PERTURBED_MATRICES} matrices all rejected"
    ))
}

fn group_law() -> Verdict {
    let mut detail = Vec::new();
    for mode in Mode::ALL {
        let configs: Vec<_> = nontrivial().filter(|c| c.1 == mode).collect();
        let mut samplers: Vec<_> = configs
            .iter()
            .enumerate()
            .map(|(i, &(nu, mode))| sampler(nu, mode, 3000 + i as u64 * 10 + mode as u64, 6, 3))
            .collect();
        for case in 0..GROUP_LAW_PAIRS {
            let s = &mut samplers[case % configs.len()];
            let z = s.sample_xi();
            let a = s.sample_params(&z).map_err(|e| e.to_string())?;
            let b = s.sample_params(&z).map_err(|e| e.to_string())?;
            let ab = a.compose(&b).map_err(|e| e.to_string())?;
            ensure(ab.build() == mul(&a.build(), &b.build()), || {
                format!("{mode} pair {case}: build(compose) differs from the product")
            })?;
            ensure(ab.check_mode(mode).is_ok(), || {
                format!("{mode} pair {case}: composition left the mode")
            })?;
        }
        detail.push(format!("{mode}:{GROUP_LAW_PAIRS}"));
    }
    Ok(format!("same-direction pairs exact [{}]", detail.join(" ")))
}

fn degree_additivity(corpus: &[RoundTrip]) -> Verdict {
    let mut generators = 0;
    for (case, rt) in corpus.iter().enumerate() {
        let mut total = 0;
        for p in rt.recovered.factors() {
            let g = p.g().to_poly();
            let amplitude = p.phi().to_poly().sub(&g.inner(&g));
            let d = amplitude.degree().finite().unwrap_or(0);
            total += d;
            let u = p.build();
            ensure(u.degree() == Degree::Finite(d), || {
                format!(
                    "case {case}: factor degree {d} but matrix degree {:?}",
                    u.degree()
                )
            })?;
            let (_, lead) = u.leading().ok_or("zero generator")?;
            // (D·z·z*)[0][0] = −1 because z₁ = 1
            let c = -lead[(0, 0)].clone();
            ensure(!c.is_zero() && *lead == p.z().dyad().scale(&c), || {
                format!("case {case}: leading coefficient is not a multiple of D·z·z*")
            })?;
            generators += 1;
        }
        let deg = rt.matrix.degree().finite().unwrap_or(0);
        ensure(deg == total, || {
            format!("case {case}: matrix degree {deg}, sum of factor degrees {total}")
        })?;
    }
    Ok(format!(
        "{} matrices: degree is additive; {generators} generators have leading coefficient in span(D·z·z*)",
        corpus.len()
    ))
}

fn conjugation() -> Verdict {
    let configs: Vec<_> = nontrivial().collect();
    let mut samplers: Vec<_> = configs
        .iter()
        .enumerate()
        .map(|(i, &(nu, mode))| sampler(nu, mode, 5000 + i as u64, 6, 3))
        .collect();
    for case in 0..CONJUGATION_CASES {
        let (_, mode) = configs[case % configs.len()];
        let s = &mut samplers[case % configs.len()];
        let z = s.sample_xi();
        let p = s.sample_params(&z).map_err(|e| e.to_string())?;
        let w = s.sample_upsilon().map_err(|e| e.to_string())?;
        let wz = validate_xi(
            w.matrix()
                .mul_vec(z.as_vector())
                .map_err(|e| e.to_string())?,
            mode,
        )
        .map_err(|e| format!("case {case}: Wz rejected: {e}"))?;
        let wg = p.g().transform(w.matrix()).map_err(|e| e.to_string())?;
        wg.check_direction(&wz)
            .map_err(|e| format!("case {case}: Wg not tangent at Wz: {e}"))?;
        wg.check_mode(mode)
            .map_err(|e| format!("case {case}: Wg left the mode: {e}"))?;
        let q = GeneratorParams::new(wz, p.phi().clone(), wg).map_err(|e| e.to_string())?;
        let wm = MatrixPoly::constant(w.matrix().clone());
        let winv = MatrixPoly::constant(w.inverse().matrix().clone());
        ensure(mul(&mul(&wm, &p.build()), &winv) == q.build(), || {
            format!("case {case}: W·G·W⁻¹ differs from G_Wz(φ, Wg)")
        })?;
    }
    Ok(format!(
        "{CONJUGATION_CASES} Cayley-sampled (W, G) pairs exact"
    ))
}

fn center() -> Verdict {
    let configs: Vec<_> = nontrivial().collect();
    let mut samplers: Vec<_> = configs
        .iter()
        .enumerate()
        .map(|(i, &(nu, mode))| sampler(nu, mode, 6000 + i as u64, 6, 3))
        .collect();
    let (mut abelian, mut central) = (0, 0);
    for case in 0..CENTER_CASES {
        let (nu, _) = configs[case % configs.len()];
        let s = &mut samplers[case % configs.len()];
        let z = s.sample_xi();
        let x = s.sample_params(&z).map_err(|e| e.to_string())?;
        let y = s.sample_params(&z).map_err(|e| e.to_string())?;
        let (xm, ym) = (x.build(), y.build());
        if nu == 2 {
            ensure(mul(&xm, &ym) == mul(&ym, &xm), || {
                format!("case {case}: ν = 2 pair does not commute")
            })?;
            abelian += 1;
            continue;
        }
        let c = x.commutator(&y).map_err(|e| e.to_string())?;
        ensure(c.g().is_zero(), || {
            format!("case {case}: commutator has g ≠ 0")
        })?;
        let cm = c.build();
        let direct = mul(
            &mul(&xm, &ym),
            &mul(&x.inverse().build(), &y.inverse().build()),
        );
        ensure(cm == direct, || {
            format!("case {case}: commutator parameters disagree with the matrices")
        })?;
        for k in 0..CENTER_WITNESSES {
            let e = s.sample_params(&z).map_err(|e| e.to_string())?.build();
            ensure(mul(&cm, &e) == mul(&e, &cm), || {
                format!("case {case}: commutator fails to commute with witness {k}")
            })?;
        }
        central += 1;
    }
    Ok(format!(
        "{abelian} ν=2 pairs commute; {central} commutators are G_z(φ, 0) and central against {CENTER_WITNESSES} witnesses each"
    ))
}

/// The two printed `λ`-polynomial matrices, entry by entry as `[λ⁰, λ¹, λ²]`.
fn printed(alpha: &Rational, beta: &Rational, second: bool) -> [[[Rational; 3]; 2]; 2] {
    let two = rat(2, 1);
    let ab = &two * alpha * beta;
    let (s, d) = (alpha + beta, alpha - beta);
    let (one, zero) = (rat(1, 1), rat(0, 1));
    let diag0 = [one.clone(), -s.clone(), -ab.clone()];
    let diag1 = [one, s, -ab.clone()];
    if second {
        [
            [diag0, [zero.clone(), d.clone(), -ab.clone()]],
            [[zero, -d, -ab], diag1],
        ]
    } else {
        [
            [diag0, [zero.clone(), -d.clone(), ab.clone()]],
            [[zero, d, ab], diag1],
        ]
    }
}

fn printed_doc(entries: &[[[Rational; 3]; 2]; 2]) -> MatrixDoc {
    let coeffs = (0..3)
        .map(|k| {
            entries
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|e| ScalarDoc::encode(&GaussianRational::from(e[k].clone())))
                        .collect()
                })
                .collect()
        })
        .collect();
    MatrixDoc {
        var: Var::Lambda,
        nu: 2,
        mode: Mode::RealLambda,
        coeffs,
    }
}

/// `G_z(cλ)`: with `λ = iω` the phase `cλ` has `ρ₁ = c`.
fn monomial(z: &IsotropicDirection, c: &Rational) -> GeneratorParams {
    GeneratorParams::new(
        z.clone(),
        PhasePoly::new(vec![c.clone()]),
        TangentPoly::zero(2),
    )
    .expect("phase-only factor")
}

/// Runs `factor` through the command layer on a `λ` matrix document.
fn cmd_factor(doc: &MatrixDoc) -> Result<Word, String> {
    let cli = Cli::parse_from([
        "jumat",
        "factor",
        "--mode",
        "real-lambda",
        "--var",
        "lambda",
    ]);
    let text = Document::Matrix(doc.clone()).print();
    let out = run(&cli, &mut text.as_bytes());
    if out.code != 0 {
        return Err(out.stderr.trim().to_string());
    }
    match Document::parse(&out.stdout).map_err(|e| e.to_string())? {
        Document::Word(w) => {
            let (word, tail) = w.decode().map_err(|e| e.to_string())?;
            if !tail.matrix().is_identity() {
                return Err("non-identity tail".into());
            }
            Ok(word)
        }
        other => Err(format!("unexpected {} document", other.kind())),
    }
}

fn golden_vectors() -> Verdict {
    let z1 = IsotropicDirection::new(Vector::from_ints(&[1, 1])).map_err(|e| e.to_string())?;
    let z2 = IsotropicDirection::new(Vector::from_ints(&[1, -1])).map_err(|e| e.to_string())?;
    let cases = [
        (rat(1, 1), rat(2, 1)),
        (rat(-1, 2), rat(3, 1)),
        (rat(0, 1), rat(1, 1)),
    ];
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for (alpha, beta) in &cases {
        for second in [false, true] {
            let (first, last) = if second { (&z2, &z1) } else { (&z1, &z2) };
            let tag = format!(
                "(α,β)=({},{}) case {}",
                format_rational(alpha),
                format_rational(beta),
                if second { 2 } else { 1 }
            );
            let word = Word::reduce(2, [monomial(first, alpha), monomial(last, beta)])
                .map_err(|e| e.to_string())?;
            let built = word.to_matrix();
            let doc = printed_doc(&printed(alpha, beta, second));
            let expected = doc.decode().map_err(|e| e.to_string())?;
            if expected != built {
                let diff = expected.checked_sub(&built).map_err(|e| e.to_string())?;
                let deg = diff.degree().finite().unwrap_or(0);
                failures.push(format!(
                    "{tag}: printed matrix ≠ built product (differs at λ^{deg}; printed is J-unitary: {})",
                    is_j_unitary(&expected).unwrap_or(false)
                ));
            }
            match cmd_factor(&doc) {
                Ok(w) if w == word => {}
                Ok(w) => failures.push(format!(
                    "{tag}: factor of printed matrix gave {} factors, not the constructing word",
                    w.len()
                )),
                Err(e) => failures.push(format!("{tag}: factor of printed matrix failed: {e}")),
            }
            let exact = MatrixDoc::encode(&built, Var::Lambda, Mode::RealLambda);
            match cmd_factor(&exact) {
                Ok(w) if w == word => notes.push(format!(
                    "{tag}: built product factors back to its {}-factor word",
                    w.len()
                )),
                Ok(_) => failures.push(format!("{tag}: built product factors to a different word")),
                Err(e) => failures.push(format!("{tag}: built product failed to factor: {e}")),
            }
        }
    }
    if failures.is_empty() {
        Ok(format!(
            "6 printed matrices reproduced and factored; {}",
            notes.join("; ")
        ))
    } else {
        Err(format!(
            "{}\n      info: {}",
            failures.join("\n      "),
            notes.join("\n      info: ")
        ))
    }
}

fn real_omega() -> Verdict {
    let two = real_omega_report(2, REAL_OMEGA_PAIRS, 8000).map_err(|e| e.to_string())?;
    ensure(
        two.passed() && two.trivial && two.max_tangent_dim == 0 && two.phase_space_empty,
        || format!("ν=2 report: {two:?}"),
    )?;
    let three = real_omega_report(3, REAL_OMEGA_PAIRS, 8001).map_err(|e| e.to_string())?;
    ensure(
        three.passed() && three.pairs_tested == REAL_OMEGA_PAIRS,
        || format!("ν=3 report: {three:?}"),
    )?;
    Ok(format!(
        "ν=2 trivial (Δ and Φ empty); ν=3 {}/{} same-direction pairs commute",
        three.pairs_commuting, three.pairs_tested
    ))
}

fn alternation() -> Verdict {
    let mut samplers: Vec<_> = CONFIGS
        .iter()
        .enumerate()
        .map(|(i, &(nu, mode))| sampler(nu, mode, 9000 + i as u64, 6, 3))
        .collect();
    let (mut zero, mut nonzero) = (0, 0);
    for case in 0..ALTERNATION_SEQUENCES {
        let s = &mut samplers[case % CONFIGS.len()];
        let len = 2 + case % 5;
        let repeat_at = if case % 2 == 0 {
            Some(1 + (case / 2) % (len - 1))
        } else {
            None
        };
        let mut zs: Vec<IsotropicDirection> = Vec::with_capacity(len);
        for k in 0..len {
            let z = match zs.last() {
                Some(prev) if repeat_at == Some(k) => prev.clone(),
                _ => s.sample_xi(),
            };
            zs.push(z);
        }
        let product = zs
            .iter()
            .map(IsotropicDirection::dyad)
            .reduce(|acc, d| acc.checked_mul(&d).expect("square"))
            .expect("non-empty");
        let repeats = zs.windows(2).any(|w| w[0] == w[1]);
        ensure(product.is_zero() == repeats, || {
            format!(
                "sequence {case}: product zero = {}, adjacent repeat = {repeats}",
                product.is_zero()
            )
        })?;
        if repeats {
            zero += 1;
        } else {
            nonzero += 1;
        }
    }
    Ok(format!(
        "{zero} sequences with a repeat vanish, {nonzero} without do not"
    ))
}

fn performance() -> Verdict {
    let mut s = sampler(4, Mode::Complex, 10_000, 6, 3);
    let w = loop {
        let w = s.sample_word();
        if w.to_matrix().degree() == Degree::Finite(20) {
            break w;
        }
    };
    let u = w.to_matrix();
    let start = Instant::now();
    let res = factor(&u, Mode::Complex).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(res.word == w, || "degree-20 word did not round trip".into())?;
    ensure(elapsed <= DEGREE_20_BUDGET, || {
        format!("took {elapsed:.2?}, budget {DEGREE_20_BUDGET:?}")
    })?;
    Ok(format!(
        "{} factors, degree 20, factored in {elapsed:.2?} (budget {DEGREE_20_BUDGET:?})",
        w.len()
    ))
}

fn judge(id: usize, name: &str, f: impl FnOnce() -> Verdict) -> bool {
    let start = Instant::now();
    let verdict =
        panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".to_string()));
    let secs = start.elapsed().as_secs_f64();
    let (tag, detail) = match &verdict {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!("{tag} criterion {id:>2} {name}: {detail} [{secs:.1} s]");
    verdict.is_ok()
}

fn main() -> ExitCode {
    let mut corpus = Vec::new();
    let results = [
        judge(1, "round trip", || round_trip(&mut corpus)),
        judge(2, "membership", membership),
        judge(3, "group law", group_law),
        judge(4, "degree additivity", || {
            if corpus.is_empty() {
                Err("no round-trip corpus".into())
            } else {
                degree_additivity(&corpus)
            }
        }),
        judge(5, "conjugation", conjugation),
        judge(6, "center and commutant", center),
        judge(7, "golden vectors", golden_vectors),
        judge(8, "real-omega structure", real_omega),
        judge(9, "dyad alternation", alternation),
        judge(10, "performance", performance),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
