//! The `orbitlie` command line: one subcommand per capability, a spec file,
//! and TSV output with `#` header lines.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a mismatch, 2 on parse,
//! validation or computation errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use num_complex::Complex64;

use crate::characters::{irr_character, twining_irr, twining_verma, verma_character};
use crate::error::{Error, Result};
use crate::fold::FoldedDatum;
use crate::genauto::{
    lifted_eval, parse_phase, phases_with_inverses, shifted_eval, transform_twining, EvalResult,
    PhaseValue, SamplePoint, DEFAULT_MAX_TAIL,
};
use crate::oracle::{oracle_twining_irr, oracle_twining_verma, DEFAULT_WORD_CAP};
use crate::rational::{fmt_q, parse_q, Q};
use crate::specfile::{parse_spec, AlgebraSpec};
use crate::verify::{parse_perturbation, verify, Outcome, VerifyConfig};
use crate::weight::Weight;
use crate::weyl::{hat_orbit, DEFAULT_NODE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Subcommand {
    /// Orbit data and the orbit Cartan matrix, as a spec file
    Fold,
    /// Ordinary character of L(Λ), or of M(Λ) with --verma
    Char,
    /// Twining character of L(Λ), or of M(Λ) with --verma
    Twine,
    /// Twining traces from the contravariant-form oracle
    Oracle,
    /// Run the comparator suite
    Verify,
    /// Twining character under a phased automorphism, with evaluation
    Genauto,
    /// Shifted Weyl orbit of Λ+ρ under the folded generators
    Orbit,
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "orbitlie",
    version,
    about = "Orbit Lie algebras and twining characters"
)]
pub struct RunConfig {
    #[arg(value_enum)]
    pub subcommand: Subcommand,
    /// Algebra description file
    pub spec: PathBuf,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(i64).range(0..))]
    pub depth: i64,
    /// Pairings (Λ, α_i), comma separated; defaults to the first `weight`
    /// line of the spec, then to zero
    #[arg(long, allow_hyphen_values = true)]
    pub weight: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Word budget for the oracle and node budget for orbit enumeration
    #[arg(long)]
    pub cap: Option<usize>,
    /// Phases ξ_i, comma separated: `zN^E`, `i`, rationals or `a+bi`
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<String>,
    /// Sample point `re,im;re,im;...` giving α_i(h), optionally followed by
    /// Λ(h); repeatable
    #[arg(long, allow_hyphen_values = true)]
    pub eval: Vec<String>,
    /// Verma module instead of the irreducible quotient
    #[arg(long)]
    pub verma: bool,
    /// Inject a fault: `cartan:I,J,D`, `coeff:K1,..,Kn:D` or `phase:I:V`
    #[arg(long, allow_hyphen_values = true)]
    pub perturb: Vec<String>,
    /// Depth for oracle comparisons in `verify`
    #[arg(long, default_value_t = 4)]
    pub oracle_depth: i64,
}

enum Failure {
    Verify,
    Error(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure::Error(Error::Invalid(e.to_string()))
}

/// Runs one subcommand, writing results to `out` and errors to `err`, and
/// returns the exit code.
pub fn run(cfg: &RunConfig, out: &mut impl Write, err: &mut impl Write) -> i32 {
    match dispatch(cfg, out) {
        Ok(()) => 0,
        Err(Failure::Verify) => 1,
        Err(Failure::Error(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(cfg: &RunConfig, out: &mut impl Write) -> std::result::Result<(), Failure> {
    let text = std::fs::read_to_string(&cfg.spec)
        .map_err(|e| Error::Invalid(format!("{}: {e}", cfg.spec.display())))?;
    let spec = parse_spec(&text)?;
    let fd = FoldedDatum::new(&spec.cartan, &spec.automorphism)?;
    let weight = resolve_weight(cfg, &spec)?;
    match cfg.subcommand {
        Subcommand::Fold => fold(&fd, &weight, out),
        Subcommand::Char => {
            let chi = if cfg.verma {
                verma_character(&spec.cartan, &weight, cfg.depth)?
            } else {
                irr_character(&spec.cartan, &weight, cfg.depth)?
            };
            header(out, "char", cfg, &weight)?;
            out.write_all(chi.to_tsv().as_bytes()).map_err(io)
        }
        Subcommand::Twine => {
            let chi = if cfg.verma {
                twining_verma(&fd, &weight, cfg.depth)?
            } else {
                twining_irr(&fd, &weight, cfg.depth)?
            };
            header(out, "twine", cfg, &weight)?;
            out.write_all(chi.to_tsv().as_bytes()).map_err(io)
        }
        Subcommand::Oracle => {
            let cap = cfg.cap.unwrap_or(DEFAULT_WORD_CAP);
            let chi = if cfg.verma {
                let rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(cfg.seed);
                oracle_twining_verma(&fd, &weight, cfg.depth, rng, cap)?
            } else {
                oracle_twining_irr(&fd, &weight, cfg.depth, cap)?
            };
            header(out, "oracle", cfg, &weight)?;
            out.write_all(chi.to_tsv().as_bytes()).map_err(io)
        }
        Subcommand::Verify => run_verify(cfg, &fd, &weight, out),
        Subcommand::Genauto => genauto(cfg, &fd, &weight, out),
        Subcommand::Orbit => {
            let rho = spec.cartan.rho_pairings();
            let start = Weight::anchored(weight.iter().zip(&rho).map(|(a, b)| a + b).collect());
            let points = hat_orbit(&fd, &start, cfg.depth, cfg.cap.unwrap_or(DEFAULT_NODE_CAP))?;
            header(out, "orbit", cfg, &weight)?;
            for p in points {
                let key: Vec<String> = p.weight.exponents().iter().map(i64::to_string).collect();
                writeln!(out, "{}\t{}", key.join(" "), p.parity).map_err(io)?;
            }
            Ok(())
        }
    }
}

fn parse_list(s: &str) -> Vec<&str> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect()
}

fn resolve_weight(cfg: &RunConfig, spec: &AlgebraSpec) -> Result<Vec<Q>> {
    let n = spec.cartan.rank();
    let w = match &cfg.weight {
        Some(s) => parse_list(s)
            .into_iter()
            .map(|t| parse_q(t).ok_or_else(|| Error::Invalid(format!("bad weight entry `{t}`"))))
            .collect::<Result<Vec<_>>>()?,
        None => spec
            .weights
            .first()
            .cloned()
            .unwrap_or_else(|| vec![Q::from_integer(0.into()); n]),
    };
    if w.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: w.len(),
        });
    }
    Ok(w)
}

fn fmt_list(v: &[Q]) -> String {
    v.iter().map(fmt_q).collect::<Vec<_>>().join(" ")
}

fn header(
    out: &mut impl Write,
    what: &str,
    cfg: &RunConfig,
    weight: &[Q],
) -> std::result::Result<(), Failure> {
    let kind = if cfg.verma { "verma" } else { "irr" };
    let kind = if matches!(cfg.subcommand, Subcommand::Orbit) {
        "shifted"
    } else {
        kind
    };
    writeln!(
        out,
        "# {what} {kind} depth {} weight {}",
        cfg.depth,
        fmt_list(weight)
    )
    .map_err(io)
}

fn fold(fd: &FoldedDatum, weight: &[Q], out: &mut impl Write) -> std::result::Result<(), Failure> {
    let da = fd.automorphism();
    let one_based = |v: &[usize]| {
        v.iter()
            .map(|i| (i + 1).to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut s = String::new();
    s.push_str(&format!("# hat {}\n", one_based(fd.hat_indices())));
    s.push_str(&format!("# breve {}\n", one_based(fd.breve_indices())));
    let svals: Vec<String> = fd
        .breve_indices()
        .iter()
        .map(|&i| fd.s(i).to_string())
        .collect();
    s.push_str(&format!("# s {}\n", svals.join(" ")));
    let lens: Vec<String> = fd
        .breve_indices()
        .iter()
        .map(|&i| da.orbit_len(i).to_string())
        .collect();
    s.push_str(&format!("# orbit-lengths {}\n", lens.join(" ")));
    let m = fd.breve_indices().len();
    if m == 0 {
        s.push_str("# the orbit algebra is trivial\n");
        return out.write_all(s.as_bytes()).map_err(io);
    }
    s.push_str(&format!("rank {m}\n"));
    let a = fd.breve_matrix();
    for r in 0..m {
        s.push_str(&fmt_list(a.row(r)));
        s.push('\n');
    }
    s.push_str(&format!(
        "symmetrizer {}\n",
        fmt_list(&fd.breve_symmetrizer())
    ));
    if da.is_invariant(weight) {
        s.push_str(&format!(
            "weight {}\n",
            fmt_list(&fd.transport_anchor(weight))
        ));
    }
    out.write_all(s.as_bytes()).map_err(io)
}

fn run_verify(
    cfg: &RunConfig,
    fd: &FoldedDatum,
    weight: &[Q],
    out: &mut impl Write,
) -> std::result::Result<(), Failure> {
    let vcfg = VerifyConfig {
        depth: cfg.depth,
        oracle_depth: cfg.oracle_depth,
        seed: cfg.seed,
        cap: cfg.cap.unwrap_or(DEFAULT_WORD_CAP),
        phases: cfg.xi.as_deref().map(parse_phases).transpose()?,
        eval_points: 3,
        perturbations: cfg
            .perturb
            .iter()
            .map(|p| parse_perturbation(p))
            .collect::<Result<Vec<_>>>()?,
    };
    let report = verify(fd, weight, &vcfg)?;
    writeln!(
        out,
        "# verify depth {} weight {}",
        cfg.depth,
        fmt_list(weight)
    )
    .map_err(io)?;
    for c in &report.checks {
        match &c.outcome {
            Outcome::Passed => writeln!(out, "# pass {}", c.name),
            Outcome::Skipped(why) => writeln!(out, "# skip {} ({why})", c.name),
            Outcome::Failed(d) => writeln!(out, "# FAILED {}\n{d}", c.name),
        }
        .map_err(io)?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn parse_phases(s: &str) -> Result<Vec<PhaseValue>> {
    parse_list(s)
        .into_iter()
        .map(|t| parse_phase(t).ok_or_else(|| Error::Invalid(format!("bad phase `{t}`"))))
        .collect()
}

fn parse_point(s: &str, n: usize) -> Result<SamplePoint> {
    let bad = || Error::Invalid(format!("bad sample point `{s}`"));
    let values = s
        .split(';')
        .map(|pair| {
            let (re, im) = pair.split_once(',').ok_or_else(bad)?;
            let re: f64 = re.trim().parse().map_err(|_| bad())?;
            let im: f64 = im.trim().parse().map_err(|_| bad())?;
            Ok(Complex64::new(re, im))
        })
        .collect::<Result<Vec<_>>>()?;
    match values.len() {
        l if l == n => Ok(SamplePoint {
            alpha: values,
            lambda: Complex64::new(0.0, 0.0),
        }),
        l if l == n + 1 => Ok(SamplePoint {
            lambda: values[n],
            alpha: values[..n].to_vec(),
        }),
        _ => Err(bad()),
    }
}

fn genauto(
    cfg: &RunConfig,
    fd: &FoldedDatum,
    weight: &[Q],
    out: &mut impl Write,
) -> std::result::Result<(), Failure> {
    let cd = fd.cartan();
    let da = fd.automorphism();
    let xi = cfg
        .xi
        .as_deref()
        .ok_or_else(|| Error::Invalid("genauto needs --xi".into()))?;
    let pd = phases_with_inverses(cd, da, parse_phases(xi)?)?;
    let plain = if cfg.verma {
        twining_verma(fd, weight, cfg.depth)?
    } else {
        twining_irr(fd, weight, cfg.depth)?
    };
    let transformed = transform_twining(&pd, da, &plain);
    let (points, results): (Vec<SamplePoint>, Vec<EvalResult>) = if cfg.eval.is_empty() {
        lifted_eval(&pd, &transformed, &plain, 3, DEFAULT_MAX_TAIL)?
    } else {
        let points = cfg
            .eval
            .iter()
            .map(|s| parse_point(s, cd.rank()))
            .collect::<Result<Vec<_>>>()?;
        let results = shifted_eval(&pd, &transformed, &plain, &points, DEFAULT_MAX_TAIL)?;
        (points, results)
    };
    header(out, "genauto", cfg, weight)?;
    let phases: Vec<String> = pd.xi().iter().map(ToString::to_string).collect();
    writeln!(out, "# xi {}", phases.join(" ")).map_err(io)?;
    out.write_all(transformed.to_tsv().as_bytes()).map_err(io)?;
    writeln!(out, "# eval\tpoint\tre_alpha1\tlhs\trhs\ttail\tstatus").map_err(io)?;
    for (idx, (p, r)) in points.iter().zip(&results).enumerate() {
        writeln!(
            out,
            "# eval\t{}\t{:.3}\t{:.12e}\t{:.12e}\t{:.3e}\t{}",
            idx + 1,
            p.alpha.first().map_or(0.0, |a| a.re),
            r.lhs,
            r.rhs,
            r.tail,
            if r.passed { "pass" } else { "FAIL" }
        )
        .map_err(io)?;
    }
    if results.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}
