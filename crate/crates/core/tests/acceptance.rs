//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::time::Instant;

use clap::Parser;
use num_traits::{One, Zero};
use orbitlie::characters::{
    c_coefficients, irr_character, orbit_irr, orbit_verma, twining_irr, twining_verma,
    twining_verma_product, weyl_invariance_check,
};
use orbitlie::cli::{run, RunConfig};
use orbitlie::cyclotomic::Cyclotomic;
use orbitlie::fold::FoldedDatum;
use orbitlie::genauto::{
    lifted_eval, phases_with_inverses, transform_twining, PhaseValue, DEFAULT_MAX_TAIL, EVAL_TOL,
};
use orbitlie::oracle::{
    oracle_irr, oracle_twining_irr, oracle_twining_verma, symmetric_contents, twining_trace_irr,
    GramOracle, VermaOracle,
};
use orbitlie::rational::{fmt_q, q, Q};
use orbitlie::series::FormalCharacter;
use orbitlie::specfile::{parse_spec, AlgebraSpec};
use orbitlie::verify::{verify, Diagnostic, VerifyConfig};
use orbitlie::weyl::{coxeter_relations_check, random_symmetric_weights, theta_check};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const A2: &str = "rank 2\n2 -1\n-1 2\nomega 2 1\nweight 1 1\n";
const A3: &str = "rank 3\n2 -1 0\n-1 2 -1\n0 -1 2\nomega 3 2 1\nweight 1 1 1\nweight 1 0 1\n";
const D4: &str =
    "rank 4\n2 -1 0 0\n-1 2 -1 -1\n0 -1 2 0\n0 -1 0 2\nomega 3 2 4 1\nweight 1 1 1 1\n";
const GKM3: &str = "rank 3\n0 0 -1\n0 0 -1\n-1 -1 2\nomega 2 1 3\nweight 0 0 2\n";
const A1A1: &str = "rank 2\n2 0\n0 2\nomega 2 1\nweight 1 1\n";
const AFFINE: &str = "rank 2\n2 -2\n-2 2\nomega 2 1\nweight 1 1\n";

const ORACLE_DEPTH: i64 = 5;
const IRR_DEPTH: i64 = 8;
const VERMA_DEPTH: i64 = 10;

struct Case {
    name: &'static str,
    text: &'static str,
    spec: AlgebraSpec,
    fd: FoldedDatum,
}

fn case(name: &'static str, text: &'static str) -> Case {
    let spec = parse_spec(text).expect("spec parses");
    let fd = FoldedDatum::new(&spec.cartan, &spec.automorphism).expect("folds");
    Case {
        name,
        text,
        spec,
        fd,
    }
}

fn all_cases() -> Vec<Case> {
    vec![
        case("A2+swap", A2),
        case("A3+swap", A3),
        case("D4+triality", D4),
        case("GKM3+(1 2)", GKM3),
        case("A1xA1+swap", A1A1),
        case("A1^(1)+swap", AFFINE),
    ]
}

/// The algebra/weight pairs of the irreducible and Verma comparisons.
fn theorem_cases() -> Vec<(Case, Vec<Q>)> {
    let mut out = Vec::new();
    for c in all_cases() {
        if matches!(c.name, "A1xA1+swap" | "A1^(1)+swap") {
            continue;
        }
        for w in c.spec.weights.clone() {
            out.push((case(c.name, c.text), w));
        }
    }
    out
}

fn label(name: &str, w: &[Q]) -> String {
    format!(
        "{name} Λ=({})",
        w.iter().map(fmt_q).collect::<Vec<_>>().join(",")
    )
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn same(what: &str, a: &FormalCharacter, b: &FormalCharacter) -> Result<(), String> {
    match a.first_difference(b) {
        None => Ok(()),
        Some((k, x, y)) => Err(format!("{what}: k={k:?} {} vs {}", fmt_q(&x), fmt_q(&y))),
    }
}

fn matrix_rows(fd: &FoldedDatum) -> Vec<Vec<Q>> {
    let m = fd.breve_matrix();
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

fn ints(rows: &[&[i64]]) -> Vec<Vec<Q>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| q(x)).collect())
        .collect()
}

fn criterion1() -> Result<String, String> {
    let expected: [(&str, &str, Vec<Vec<Q>>); 5] = [
        ("A3+swap", A3, ints(&[&[2, -1], &[-2, 2]])),
        ("A2+swap", A2, ints(&[&[2]])),
        ("D4+triality", D4, ints(&[&[2, -1], &[-3, 2]])),
        ("A1^(1)+swap", AFFINE, vec![]),
        ("GKM3+(1 2)", GKM3, ints(&[&[0, -1], &[-2, 2]])),
    ];
    for (name, text, rows) in expected {
        let c = case(name, text);
        ensure(matrix_rows(&c.fd) == rows, || {
            format!("{name}: orbit matrix {:?}", matrix_rows(&c.fd))
        })?;
        let d = c.fd.breve_symmetrizer();
        let sym: Vec<Vec<Q>> = rows
            .iter()
            .zip(&d)
            .map(|(r, di)| r.iter().map(|x| x * di).collect())
            .collect();
        for i in 0..sym.len() {
            for j in 0..sym.len() {
                ensure(sym[i][j] == sym[j][i], || {
                    format!("{name}: D̂Ă not symmetric")
                })?;
            }
        }
    }
    let a2 = case("A2+swap", A2);
    ensure(a2.fd.s(0) == 2, || "A2+swap: s_1 != 2".into())?;
    ensure(
        case("A1^(1)+swap", AFFINE).fd.breve_indices().is_empty(),
        || "A1^(1)+swap: admissible set not empty".into(),
    )?;
    Ok("five golden orbit matrices, D̂Ă symmetric".into())
}

fn criterion2() -> Result<String, String> {
    let mut n = 0;
    for (c, w) in theorem_cases() {
        let l = label(c.name, &w);
        let tw = twining_irr(&c.fd, &w, IRR_DEPTH).map_err(|e| format!("{l}: {e}"))?;
        let orbit = orbit_irr(&c.fd, &w, IRR_DEPTH).map_err(|e| format!("{l}: {e}"))?;
        same(&format!("{l} twining vs orbit"), &tw, &orbit)?;
        let oracle =
            oracle_twining_irr(&c.fd, &w, ORACLE_DEPTH, 20_000).map_err(|e| format!("{l}: {e}"))?;
        same(
            &format!("{l} twining vs oracle"),
            &tw.truncate(ORACLE_DEPTH),
            &oracle,
        )?;
        n += 1;
    }
    Ok(format!(
        "{n} cases, formula depth {IRR_DEPTH}, oracle depth {ORACLE_DEPTH}"
    ))
}

fn criterion3() -> Result<String, String> {
    let mut n = 0;
    for (c, w) in theorem_cases() {
        let l = label(c.name, &w);
        let tw = twining_verma(&c.fd, &w, VERMA_DEPTH).map_err(|e| format!("{l}: {e}"))?;
        let orbit = orbit_verma(&c.fd, &w, VERMA_DEPTH).map_err(|e| format!("{l}: {e}"))?;
        same(&format!("{l} twining vs orbit"), &tw, &orbit)?;
        let prod =
            twining_verma_product(&c.fd, &w, VERMA_DEPTH).map_err(|e| format!("{l}: {e}"))?;
        same(&format!("{l} twining vs product"), &tw, &prod)?;
        let rng = ChaCha8Rng::seed_from_u64(11);
        let oracle = oracle_twining_verma(&c.fd, &w, ORACLE_DEPTH, rng, 20_000)
            .map_err(|e| format!("{l}: {e}"))?;
        same(
            &format!("{l} twining vs oracle"),
            &tw.truncate(ORACLE_DEPTH),
            &oracle,
        )?;
        n += 1;
    }
    Ok(format!(
        "{n} cases, formula depth {VERMA_DEPTH}, oracle depth {ORACLE_DEPTH}"
    ))
}

fn criterion4() -> Result<String, String> {
    let expect = |name: &str, text: &'static str, values: [i64; 5]| -> Result<(), String> {
        let c = case("", text);
        let mut v = VermaOracle::new(
            &c.spec.cartan,
            &c.spec.automorphism,
            ChaCha8Rng::seed_from_u64(5),
            20_000,
        );
        for (n, want) in values.iter().enumerate() {
            let n = n as i64;
            let t: Q = v
                .twining_trace(&[n, n], None)
                .map_err(|e| format!("{name}: {e}"))?;
            ensure(t == q(*want), || {
                format!("{name}: trace at ({n},{n}) is {}", fmt_q(&t))
            })?;
        }
        Ok(())
    };
    expect("A2+swap", A2, [1, 0, 1, 0, 1])?;
    expect("A1xA1+swap", A1A1, [1, 1, 1, 1, 1])?;
    Ok("A2+swap 1,0,1,0,1 and A1xA1+swap all 1 for n=0..4".into())
}

fn criterion5() -> Result<String, String> {
    for c in all_cases() {
        let n = c.spec.cartan.rank();
        let zero = vec![Q::zero(); n];
        let one = FormalCharacter::one(zero.clone(), IRR_DEPTH);
        let irr = irr_character(&c.spec.cartan, &zero, IRR_DEPTH)
            .map_err(|e| format!("{}: {e}", c.name))?;
        same(&format!("{} irr(0)", c.name), &irr, &one)?;
        let tw = twining_irr(&c.fd, &zero, IRR_DEPTH).map_err(|e| format!("{}: {e}", c.name))?;
        same(&format!("{} twining_irr(0)", c.name), &tw, &one)?;
        let oracle = oracle_irr(&c.spec.cartan, &zero, ORACLE_DEPTH, 20_000)
            .map_err(|e| format!("{}: {e}", c.name))?;
        same(
            &format!("{} oracle L(0)", c.name),
            &oracle,
            &one.truncate(ORACLE_DEPTH),
        )?;
    }
    Ok(format!(
        "{} algebras, formula depth {IRR_DEPTH}, oracle L(0) trivial to depth {ORACLE_DEPTH}",
        all_cases().len()
    ))
}

fn criterion6() -> Result<String, String> {
    let mut words = 0;
    for c in all_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let weights = random_symmetric_weights(&c.fd, 20, &mut rng);
        if let Some((i, j, _)) =
            coxeter_relations_check(&c.fd, &weights).map_err(|e| e.to_string())?
        {
            return Err(format!(
                "{}: relation fails for ({}, {})",
                c.name,
                i + 1,
                j + 1
            ));
        }
        let real = c.fd.breve_real();
        for &i in &real {
            for word in std::iter::once(vec![i]).chain(real.iter().map(|&j| vec![i, j])) {
                let ok = theta_check(&c.fd, &word, &weights).map_err(|e| e.to_string())?;
                ensure(ok, || {
                    format!("{}: transport equivariance fails for {word:?}", c.name)
                })?;
                words += 1;
            }
        }
    }
    Ok(format!(
        "20 weights per algebra, {words} folded words checked against the orbit Weyl group"
    ))
}

fn criterion7() -> Result<String, String> {
    let mut n = 0;
    for (c, w) in theorem_cases() {
        let l = label(c.name, &w);
        let chi = twining_irr(&c.fd, &w, IRR_DEPTH).map_err(|e| format!("{l}: {e}"))?;
        if let Some(m) = weyl_invariance_check(&c.fd, &chi).map_err(|e| format!("{l}: {e}"))? {
            return Err(format!("{l}: {m}"));
        }
        n += 1;
    }
    Ok(format!("{n} cases, depth {IRR_DEPTH}"))
}

fn criterion8() -> Result<String, String> {
    let c = case("GKM3+(1 2)", GKM3);
    let d = c_coefficients(&c.fd, &[q(0), q(0), q(2)], IRR_DEPTH).map_err(|e| e.to_string())?;
    ensure(d.c(&[0, 0, 0]) == Q::one(), || {
        format!("c_Λ = {}", fmt_q(&d.c(&[0, 0, 0])))
    })?;
    let beta1 = c.fd.beta(0);
    ensure(d.c(&beta1) == -Q::one(), || {
        format!("c_(Λ−β1) = {}", fmt_q(&d.c(&beta1)))
    })?;
    Ok(format!("c_Λ = 1, c_(Λ−β1) = -1 at β1 = {beta1:?}"))
}

fn criterion9() -> Result<String, String> {
    // ξ = (c, 1/c) on A2+swap, for a root of unity and for a rational c
    let a2 = case("A2+swap", A2);
    let chi = twining_irr(&a2.fd, &[q(1), q(1)], IRR_DEPTH).map_err(|e| e.to_string())?;
    for xi in [
        vec![
            PhaseValue::root_of_unity(5, 2),
            PhaseValue::root_of_unity(5, 3),
        ],
        vec![
            PhaseValue::Exact(Cyclotomic::rational(q(3))),
            PhaseValue::Exact(Cyclotomic::rational(orbitlie::rational::frac(1, 3))),
        ],
    ] {
        let pd = phases_with_inverses(&a2.spec.cartan, &a2.spec.automorphism, xi)
            .map_err(|e| e.to_string())?;
        let t = transform_twining(&pd, &a2.spec.automorphism, &chi);
        ensure(t.coeffs.len() == chi.len(), || "A2: support changed".into())?;
        for (k, v) in &t.coeffs {
            let PhaseValue::Exact(x) = v else {
                return Err("A2: inexact coefficient".into());
            };
            ensure(x.as_rational() == Some(chi.coeff(k)), || {
                format!("A2: coefficient changed at {k:?}")
            })?;
        }
    }

    // A3 with ξ = (i, 1, i): transformed formula against phased oracle traces
    let a3 = case("A3+swap", A3);
    let (cd, da) = (&a3.spec.cartan, &a3.spec.automorphism);
    let lam = vec![q(1), q(0), q(1)];
    let i4 = Cyclotomic::root_of_unity(4, 1);
    let exact = vec![i4.clone(), Cyclotomic::one(), i4.clone()];
    let pd = phases_with_inverses(
        cd,
        da,
        exact.iter().cloned().map(PhaseValue::Exact).collect(),
    )
    .map_err(|e| e.to_string())?;
    let plain = twining_irr(&a3.fd, &lam, IRR_DEPTH).map_err(|e| e.to_string())?;
    let transformed = transform_twining(&pd, da, &plain);
    let mut oracle = GramOracle::with_cap(cd, lam.clone(), 20_000);
    let mut checked = 0;
    for k in symmetric_contents(da, ORACLE_DEPTH) {
        let t: Cyclotomic =
            twining_trace_irr(&mut oracle, da, &k, Some(&exact)).map_err(|e| e.to_string())?;
        let f = match transformed.coeffs.get(&k) {
            Some(PhaseValue::Exact(x)) => x.clone(),
            Some(PhaseValue::Approx(_)) => return Err("A3: inexact coefficient".into()),
            None => Cyclotomic::zero(),
        };
        ensure(t == f, || {
            format!("A3 phased trace at {k:?}: oracle {t} formula {f}")
        })?;
        checked += 1;
    }

    let (points, results) =
        lifted_eval(&pd, &transformed, &plain, 3, DEFAULT_MAX_TAIL).map_err(|e| e.to_string())?;
    ensure(points.len() == 3, || "expected 3 sample points".into())?;
    let mut worst: f64 = 0.0;
    for r in &results {
        let diff = (r.lhs - r.rhs).norm();
        ensure(diff <= EVAL_TOL + r.tail, || {
            format!("evaluation differs by {diff:e} (tail {:e})", r.tail)
        })?;
        worst = worst.max(diff);
    }
    Ok(format!(
        "identity for (c,1/c); {checked} phased oracle traces exact; 3 points within 1e-9 + tail (max diff {worst:.1e})"
    ))
}

fn write_spec(name: &str, text: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("orbitlie-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("{name}.spec"));
    std::fs::write(&path, text).unwrap();
    path
}

fn run_verify(path: &std::path::Path, weight: &[Q], extra: &[String]) -> (i32, String) {
    let w = weight.iter().map(fmt_q).collect::<Vec<_>>().join(",");
    let mut args: Vec<String> = [
        "orbitlie",
        "verify",
        path.to_str().unwrap(),
        "--depth",
        "6",
        "--oracle-depth",
        "6",
        "--weight",
        &w,
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    args.extend(extra.iter().cloned());
    let cfg = RunConfig::try_parse_from(args).expect("arguments parse");
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&cfg, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

/// The diagnostic line after `# FAILED`, which must name an exponent vector.
fn localized(out: &str) -> bool {
    let mut lines = out.lines().skip_while(|l| !l.starts_with("# FAILED"));
    lines.next().is_some() && lines.next().is_some_and(|l| l.starts_with("MISMATCH k=("))
}

/// True when every row of `b` is a positive multiple of the same row of `a`,
/// so `b` defines the same algebra with the simple coroots rescaled.
fn is_row_rescaling(a: &[Vec<Q>], b: &[Vec<Q>]) -> bool {
    a.iter().zip(b).all(|(ra, rb)| {
        let Some(p) = ra.iter().position(|x| !x.is_zero()) else {
            return rb.iter().all(Zero::is_zero);
        };
        let c = &rb[p] / &ra[p];
        c > Q::zero() && ra.iter().zip(rb).all(|(x, y)| x * &c == *y)
    })
}

fn criterion10() -> Result<String, String> {
    let mut detected = 0;
    let mut isomorphic = Vec::new();
    for c in all_cases() {
        let path = write_spec(
            c.name.replace(['+', '(', ')', '^', ' '], "_").as_str(),
            c.text,
        );
        let w = c.spec.weights[0].clone();
        let (code, out) = run_verify(&path, &w, &[]);
        ensure(code == 0, || {
            format!("{}: unperturbed verify exits {code}\n{out}", c.name)
        })?;
        let n = c.spec.cartan.rank();
        let a: Vec<Vec<Q>> = (0..n)
            .map(|i| (0..n).map(|j| c.spec.cartan.entry(i, j).clone()).collect())
            .collect();
        for i in 0..n {
            for j in 0..n {
                for delta in [1i64, -1] {
                    let flag = format!("cartan:{},{},{delta}", i + 1, j + 1);
                    let (code, out) = run_verify(&path, &w, &["--perturb".into(), flag.clone()]);
                    if code == 1 && localized(&out) {
                        detected += 1;
                        continue;
                    }
                    let mut b = a.clone();
                    b[i][j] += q(delta);
                    if code == 0 && is_row_rescaling(&a, &b) {
                        isomorphic.push(format!("{} {flag}", c.name));
                        continue;
                    }
                    return Err(format!("{} {flag}: exit {code}\n{out}", c.name));
                }
            }
        }
    }

    // every coefficient of the twining Verma series on A2+swap up to depth 4
    let path = write_spec("A2_coeff", A2);
    for k1 in 0..=4i64 {
        for k2 in 0..=(4 - k1) {
            for delta in ["1", "-1/2"] {
                let flag = format!("coeff:{k1},{k2}:{delta}");
                let (code, out) =
                    run_verify(&path, &[q(1), q(1)], &["--perturb".into(), flag.clone()]);
                let key = format!("MISMATCH k=({k1},{k2})");
                ensure(code == 1 && out.contains(&key), || {
                    format!("A2 {flag}: exit {code}\n{out}")
                })?;
                detected += 1;
            }
        }
    }

    // every phase of ξ = (i, 1, i) on A3+swap, replaced by each other 4th root of unity
    let a3 = case("A3+swap", A3);
    let lam = [q(1), q(0), q(1)];
    let base = vec![
        PhaseValue::root_of_unity(4, 1),
        PhaseValue::one(),
        PhaseValue::root_of_unity(4, 1),
    ];
    let clean = VerifyConfig {
        depth: 6,
        oracle_depth: ORACLE_DEPTH,
        phases: Some(base.clone()),
        ..VerifyConfig::default()
    };
    let r = verify(&a3.fd, &lam, &clean).map_err(|e| e.to_string())?;
    ensure(r.passed(), || {
        format!("A3 phased verify fails: {:?}", r.failure())
    })?;
    let exps = [1i64, 0, 1];
    for idx in 0..3 {
        for e in 0..4 {
            if e == exps[idx] {
                continue;
            }
            let flag = format!("phase:{}:z4^{e}", idx + 1);
            let cfg = VerifyConfig {
                perturbations: vec![
                    orbitlie::verify::parse_perturbation(&flag).map_err(|e| e.to_string())?
                ],
                ..clean.clone()
            };
            let r = verify(&a3.fd, &lam, &cfg).map_err(|e| e.to_string())?;
            match r.failure() {
                Some((_, Diagnostic::Mismatch { .. })) => detected += 1,
                other => return Err(format!("A3 {flag}: {other:?}")),
            }
        }
    }
    Ok(format!(
        "{detected} perturbations detected with a located mismatch; not detected: {} (each a positive row rescaling, i.e. the same algebra)",
        if isomorphic.is_empty() { "none".to_string() } else { isomorphic.join(", ") }
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Result<String, String>); 10] = [
        ("folding table", criterion1),
        ("irreducible twining = orbit character = oracle", criterion2),
        (
            "Verma twining = orbit character = product = oracle",
            criterion3,
        ),
        ("Verma parity traces", criterion4),
        ("denominator identities", criterion5),
        ("folded Weyl group", criterion6),
        ("invariance under the folded Weyl group", criterion7),
        ("decomposition signs", criterion8),
        ("phased automorphisms", criterion9),
        ("negative controls", criterion10),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({secs:.1}s): {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.1}s): {why}", n + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
