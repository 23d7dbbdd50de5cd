//! The comparator suite behind `orbitlie verify`: formula-side identities,
//! the orbit-algebra comparison, and agreement with the module oracle.
//!
//! Perturbations inject a single fault on one side of a comparison so that a
//! run can demonstrate that the suite actually detects it.

use std::fmt;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cartan::CartanDatum;
use crate::characters::{
    c_coefficients, compare, denominator_sign_check, irr_character, orbit_irr, orbit_root_mults,
    orbit_verma, peterson_check, root_multiplicities, twining_irr, twining_verma,
    twining_verma_product, weyl_invariance_check, Mismatch,
};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::fold::FoldedDatum;
use crate::genauto::{
    lifted_eval, parse_phase, phases_with_inverses, transform_twining, PhaseValue, PhasedCharacter,
    DEFAULT_MAX_TAIL,
};
use crate::oracle::{
    form_defect, oracle_irr, symmetric_contents, twining_trace_irr, GramOracle, VermaOracle,
    DEFAULT_WORD_CAP,
};
use crate::rational::{fmt_q, parse_q, Q};
use crate::series::FormalCharacter;
use crate::weyl::{coxeter_relations_check, random_symmetric_weights, theta_check};

/// A single injected fault. Indices are 0-based.
#[derive(Debug, Clone)]
pub enum Perturbation {
    /// Shifts `a_ij` in the matrix handed to the module oracle.
    Cartan { i: usize, j: usize, delta: Q },
    /// Adds `delta` to the twining coefficient at `key` before comparing it
    /// with the orbit side.
    Coefficient { key: Vec<i64>, delta: Q },
    /// Replaces `ξ_i` on the transformed side of the phase checks.
    Phase { i: usize, value: PhaseValue },
}

/// Parses `cartan:I,J,DELTA`, `coeff:K1,...,Kn:DELTA` or `phase:I:VALUE`,
/// with 1-based indices.
pub fn parse_perturbation(s: &str) -> Result<Perturbation> {
    let bad = || Error::Invalid(format!("bad perturbation `{s}`"));
    let index = |t: &str| -> Result<usize> {
        match t.trim().parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(bad()),
        }
    };
    let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
    match kind {
        "cartan" => {
            let f: Vec<&str> = rest.split(',').collect();
            if f.len() != 3 {
                return Err(bad());
            }
            Ok(Perturbation::Cartan {
                i: index(f[0])?,
                j: index(f[1])?,
                delta: parse_q(f[2].trim()).ok_or_else(bad)?,
            })
        }
        "coeff" => {
            let (key, delta) = rest.split_once(':').ok_or_else(bad)?;
            let key = key
                .split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            Ok(Perturbation::Coefficient {
                key,
                delta: parse_q(delta.trim()).ok_or_else(bad)?,
            })
        }
        "phase" => {
            let (i, value) = rest.split_once(':').ok_or_else(bad)?;
            Ok(Perturbation::Phase {
                i: index(i)?,
                value: parse_phase(value.trim()).ok_or_else(bad)?,
            })
        }
        _ => Err(bad()),
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub depth: i64,
    /// Depth for the module oracle, capped at `depth`.
    pub oracle_depth: i64,
    pub seed: u64,
    pub cap: usize,
    pub phases: Option<Vec<PhaseValue>>,
    pub eval_points: usize,
    pub perturbations: Vec<Perturbation>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            depth: 4,
            oracle_depth: 4,
            seed: 0,
            cap: DEFAULT_WORD_CAP,
            phases: None,
            eval_points: 3,
            perturbations: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    Mismatch {
        key: Vec<i64>,
        lhs: String,
        rhs: String,
    },
    Message(String),
}

impl From<Mismatch> for Diagnostic {
    fn from(m: Mismatch) -> Self {
        Diagnostic::Mismatch {
            key: m.key,
            lhs: fmt_q(&m.lhs),
            rhs: fmt_q(&m.rhs),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::Mismatch { key, lhs, rhs } => {
                let key: Vec<String> = key.iter().map(i64::to_string).collect();
                write!(f, "MISMATCH k=({}) lhs={lhs} rhs={rhs}", key.join(","))
            }
            Diagnostic::Message(m) => write!(f, "ERROR {m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Passed,
    Skipped(String),
    Failed(Diagnostic),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failure().is_none()
    }

    pub fn failure(&self) -> Option<(&'static str, &Diagnostic)> {
        self.checks.iter().find_map(|c| match &c.outcome {
            Outcome::Failed(d) => Some((c.name, d)),
            _ => None,
        })
    }
}

type Check<'a> = (&'static str, Box<dyn FnOnce() -> Result<Outcome> + 'a>);

fn mismatch(m: Option<Mismatch>) -> Outcome {
    match m {
        None => Outcome::Passed,
        Some(m) => Outcome::Failed(m.into()),
    }
}

fn message(s: impl Into<String>) -> Outcome {
    Outcome::Failed(Diagnostic::Message(s.into()))
}

struct Prepared {
    oracle_cd: CartanDatum,
    coeff_faults: Vec<(Vec<i64>, Q)>,
    base_phases: Vec<PhaseValue>,
    transform_phases: Vec<PhaseValue>,
    phased: bool,
}

fn prepare(fd: &FoldedDatum, cfg: &VerifyConfig) -> Result<Prepared> {
    let cd = fd.cartan();
    let n = cd.rank();
    let mut oracle_cd = cd.clone();
    let mut coeff_faults = Vec::new();
    let base_phases = match &cfg.phases {
        Some(p) if p.len() != n => {
            return Err(Error::LengthMismatch {
                expected: n,
                got: p.len(),
            })
        }
        Some(p) => p.clone(),
        None => vec![PhaseValue::one(); n],
    };
    let mut transform_phases = base_phases.clone();
    let mut phased = cfg.phases.is_some();
    for p in &cfg.perturbations {
        match p {
            Perturbation::Cartan { i, j, delta } => {
                if *i >= n || *j >= n {
                    return Err(Error::Invalid(format!(
                        "cartan index out of range (rank {n})"
                    )));
                }
                oracle_cd = oracle_cd.with_entry_shifted(*i, *j, delta);
            }
            Perturbation::Coefficient { key, delta } => {
                if key.len() != n || key.iter().any(|&x| x < 0) {
                    return Err(Error::Invalid(format!(
                        "coefficient key must have {n} nonnegative entries"
                    )));
                }
                coeff_faults.push((key.clone(), delta.clone()));
            }
            Perturbation::Phase { i, value } => {
                if *i >= n {
                    return Err(Error::Invalid(format!(
                        "phase index out of range (rank {n})"
                    )));
                }
                transform_phases[*i] = value.clone();
                phased = true;
            }
        }
    }
    Ok(Prepared {
        oracle_cd,
        coeff_faults,
        base_phases,
        transform_phases,
        phased,
    })
}

fn apply_faults(mut chi: FormalCharacter, faults: &[(Vec<i64>, Q)]) -> FormalCharacter {
    for (k, d) in faults {
        chi.add_term(k.clone(), d.clone());
    }
    chi
}

/// Runs the suite, stopping at the first failed check. Input problems (a
/// weight that is not `ω`-symmetric, malformed perturbations) are returned as
/// errors; errors raised while a check runs count as failures of that check.
pub fn verify(fd: &FoldedDatum, pairings: &[Q], cfg: &VerifyConfig) -> Result<VerifyReport> {
    let cd = fd.cartan();
    let da = fd.automorphism();
    let n = cd.rank();
    if pairings.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: pairings.len(),
        });
    }
    if !da.is_invariant(pairings) {
        return Err(Error::NotSymmetricWeight);
    }
    let prep = prepare(fd, cfg)?;
    let depth = cfg.depth;
    let odepth = cfg.oracle_depth.min(depth);
    let integrable = cd.is_integrable(pairings);
    let zero = vec![Q::zero(); n];

    let mut checks: Vec<Check<'_>> = vec![
        (
            "rho-transport",
            Box::new(|| {
                let breve = fd.breve_indices();
                for (i, d) in fd.rho_transport_defects() {
                    if breve.contains(&i) != d.is_zero() {
                        return Ok(message(format!(
                            "rho transport defect {} at index {}",
                            fmt_q(&d),
                            i + 1
                        )));
                    }
                }
                Ok(Outcome::Passed)
            }),
        ),
        (
            "coxeter",
            Box::new(|| {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                let weights = random_symmetric_weights(fd, 20, &mut rng);
                if let Some((i, j, _)) = coxeter_relations_check(fd, &weights)? {
                    return Ok(message(format!(
                        "folded reflections {} and {} violate the Coxeter relation",
                        i + 1,
                        j + 1
                    )));
                }
                let real = fd.breve_real();
                for &i in &real {
                    for word in std::iter::once(vec![i]).chain(real.iter().map(|&j| vec![i, j])) {
                        if !theta_check(fd, &word, &weights)? {
                            let w: Vec<String> = word.iter().map(|x| (x + 1).to_string()).collect();
                            return Ok(message(format!(
                                "folded word ({}) disagrees with the orbit Weyl group",
                                w.join(",")
                            )));
                        }
                    }
                }
                Ok(Outcome::Passed)
            }),
        ),
        (
            "denominator",
            Box::new(|| {
                let one = FormalCharacter::one(zero.clone(), depth);
                if let Some(m) = compare(&irr_character(cd, &zero, depth)?, &one) {
                    return Ok(mismatch(Some(m)));
                }
                if let Some(m) = compare(&twining_irr(fd, &zero, depth)?, &one) {
                    return Ok(mismatch(Some(m)));
                }
                let mults = root_multiplicities(cd, depth)?;
                if cd.imaginary_indices().is_empty() {
                    if let Some(beta) = peterson_check(cd, &mults, depth) {
                        return Ok(message(format!("Peterson recursion fails at {beta:?}")));
                    }
                }
                orbit_root_mults(fd, depth)?;
                let oracle_one = FormalCharacter::one(zero.clone(), odepth);
                Ok(mismatch(compare(
                    &oracle_irr(&prep.oracle_cd, &zero, odepth, cfg.cap)?,
                    &oracle_one,
                )))
            }),
        ),
        (
            "orbit-verma",
            Box::new(|| {
                let lhs = apply_faults(twining_verma(fd, pairings, depth)?, &prep.coeff_faults);
                Ok(mismatch(compare(&lhs, &orbit_verma(fd, pairings, depth)?)))
            }),
        ),
        (
            "product-formula",
            Box::new(|| {
                Ok(mismatch(compare(
                    &twining_verma(fd, pairings, depth)?,
                    &twining_verma_product(fd, pairings, depth)?,
                )))
            }),
        ),
        (
            "denominator-sign",
            Box::new(|| Ok(mismatch(denominator_sign_check(fd, depth)?))),
        ),
    ];

    if integrable {
        checks.push((
            "orbit-irr",
            Box::new(|| {
                let lhs = apply_faults(twining_irr(fd, pairings, depth)?, &prep.coeff_faults);
                Ok(mismatch(compare(&lhs, &orbit_irr(fd, pairings, depth)?)))
            }),
        ));
        checks.push((
            "integrality",
            Box::new(|| {
                let chi = irr_character(cd, pairings, depth)?;
                let bad = chi.iter().find(|(_, c)| !c.is_integer() || *c < &Q::zero());
                Ok(match bad {
                    Some((k, c)) => {
                        message(format!("irreducible multiplicity {} at {k:?}", fmt_q(c)))
                    }
                    None => Outcome::Passed,
                })
            }),
        ));
        checks.push((
            "weyl-invariance",
            Box::new(|| {
                Ok(mismatch(weyl_invariance_check(
                    fd,
                    &twining_irr(fd, pairings, depth)?,
                )?))
            }),
        ));
        checks.push((
            "decomposition-signs",
            Box::new(|| {
                let d = c_coefficients(fd, pairings, depth)?;
                if !d.leading_is_one() {
                    return Ok(message("leading decomposition coefficient is not 1"));
                }
                Ok(match d.first_sign_violation() {
                    Some((k, e, f)) => mismatch(Some(Mismatch {
                        key: k.clone(),
                        lhs: f.clone(),
                        rhs: e.clone(),
                    })),
                    None => Outcome::Passed,
                })
            }),
        ));
        checks.push((
            "oracle-ranks",
            Box::new(|| {
                Ok(mismatch(compare(
                    &oracle_irr(&prep.oracle_cd, pairings, odepth, cfg.cap)?,
                    &irr_character(cd, pairings, odepth)?,
                )))
            }),
        ));
        checks.push((
            "oracle-twining-irr",
            Box::new(|| {
                let traces =
                    oracle_traces_irr::<Q>(&prep.oracle_cd, fd, pairings, odepth, cfg.cap, None)?;
                Ok(mismatch(compare(
                    &traces,
                    &twining_irr(fd, pairings, odepth)?,
                )))
            }),
        ));
    }
    checks.push((
        "oracle-twining-verma",
        Box::new(|| {
            let traces =
                oracle_traces_verma::<Q>(&prep.oracle_cd, fd, pairings, odepth, cfg, None)?;
            Ok(mismatch(compare(
                &traces,
                &twining_verma(fd, pairings, odepth)?,
            )))
        }),
    ));

    checks.push((
        "oracle-form",
        Box::new(|| {
            Ok(mismatch(form_defect(
                &prep.oracle_cd,
                da,
                pairings,
                odepth,
                cfg.cap,
            )?))
        }),
    ));

    if prep.phased {
        checks.push((
            "genauto-oracle",
            Box::new(|| genauto_oracle(fd, pairings, odepth, cfg, &prep, integrable)),
        ));
        checks.push((
            "genauto-eval",
            Box::new(|| genauto_eval(fd, pairings, depth, cfg, &prep, integrable)),
        ));
    }

    let mut report = VerifyReport::default();
    for (name, check) in checks {
        let outcome = check().unwrap_or_else(|e| message(e.to_string()));
        let failed = matches!(outcome, Outcome::Failed(_));
        report.checks.push(CheckResult { name, outcome });
        if failed {
            break;
        }
    }
    Ok(report)
}

/// Exact rationals or cyclotomic phases can both be fed to the oracle; the
/// resulting traces are compared after conversion to phase values.
trait TraceValue: crate::oracle::Scalar {
    fn into_phase(self) -> PhaseValue;
}

impl TraceValue for Q {
    fn into_phase(self) -> PhaseValue {
        PhaseValue::Exact(Cyclotomic::rational(self))
    }
}

impl TraceValue for Cyclotomic {
    fn into_phase(self) -> PhaseValue {
        PhaseValue::Exact(self)
    }
}

fn oracle_traces_irr<S: TraceValue>(
    oracle_cd: &CartanDatum,
    fd: &FoldedDatum,
    pairings: &[Q],
    depth: i64,
    cap: usize,
    phases: Option<&[S]>,
) -> Result<FormalCharacter> {
    let traces = phased_traces_irr(oracle_cd, fd, pairings, depth, cap, phases)?;
    rational_series(traces)
}

fn oracle_traces_verma<S: TraceValue>(
    oracle_cd: &CartanDatum,
    fd: &FoldedDatum,
    pairings: &[Q],
    depth: i64,
    cfg: &VerifyConfig,
    phases: Option<&[S]>,
) -> Result<FormalCharacter> {
    let traces = phased_traces_verma(oracle_cd, fd, pairings, depth, cfg, phases)?;
    rational_series(traces)
}

fn rational_series(chi: PhasedCharacter) -> Result<FormalCharacter> {
    let mut out = FormalCharacter::zero(chi.anchor, chi.depth);
    for (k, v) in chi.coeffs {
        let x = match &v {
            PhaseValue::Exact(c) => c.as_rational(),
            PhaseValue::Approx(_) => None,
        }
        .ok_or_else(|| Error::Invalid(format!("non-rational trace {v} at {k:?}")))?;
        out.add_term(k, x);
    }
    Ok(out)
}

fn phased_traces_irr<S: TraceValue>(
    oracle_cd: &CartanDatum,
    fd: &FoldedDatum,
    pairings: &[Q],
    depth: i64,
    cap: usize,
    phases: Option<&[S]>,
) -> Result<PhasedCharacter> {
    let da = fd.automorphism();
    let mut oracle = GramOracle::with_cap(oracle_cd, pairings.to_vec(), cap);
    let mut coeffs = std::collections::BTreeMap::new();
    for k in symmetric_contents(da, depth) {
        let t: S = twining_trace_irr(&mut oracle, da, &k, phases)?;
        if !t.is_zero() {
            coeffs.insert(k, t.into_phase());
        }
    }
    Ok(PhasedCharacter {
        anchor: pairings.to_vec(),
        depth,
        coeffs,
    })
}

fn phased_traces_verma<S: TraceValue>(
    oracle_cd: &CartanDatum,
    fd: &FoldedDatum,
    pairings: &[Q],
    depth: i64,
    cfg: &VerifyConfig,
    phases: Option<&[S]>,
) -> Result<PhasedCharacter> {
    let da = fd.automorphism();
    let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut verma = VermaOracle::new(oracle_cd, da, rng, cfg.cap);
    let mut coeffs = std::collections::BTreeMap::new();
    for k in symmetric_contents(da, depth) {
        let t: S = verma.twining_trace(&k, phases)?;
        if !t.is_zero() {
            coeffs.insert(k, t.into_phase());
        }
    }
    Ok(PhasedCharacter {
        anchor: pairings.to_vec(),
        depth,
        coeffs,
    })
}

fn twining_series(
    fd: &FoldedDatum,
    pairings: &[Q],
    depth: i64,
    irr: bool,
) -> Result<FormalCharacter> {
    if irr {
        twining_irr(fd, pairings, depth)
    } else {
        twining_verma(fd, pairings, depth)
    }
}

/// The transformed formula series against oracle traces of the phased
/// automorphism, exactly.
fn genauto_oracle(
    fd: &FoldedDatum,
    pairings: &[Q],
    depth: i64,
    cfg: &VerifyConfig,
    prep: &Prepared,
    irr: bool,
) -> Result<Outcome> {
    let cd = fd.cartan();
    let da = fd.automorphism();
    let Some(exact) = prep
        .base_phases
        .iter()
        .map(|p| match p {
            PhaseValue::Exact(c) => Some(c.clone()),
            PhaseValue::Approx(_) => None,
        })
        .collect::<Option<Vec<Cyclotomic>>>()
    else {
        return Ok(Outcome::Skipped("phases are not exact".into()));
    };
    let pd = phases_with_inverses(cd, da, prep.transform_phases.clone())?;
    let formula = transform_twining(&pd, da, &twining_series(fd, pairings, depth, irr)?);
    let oracle = if irr {
        phased_traces_irr(&prep.oracle_cd, fd, pairings, depth, cfg.cap, Some(&exact))?
    } else {
        phased_traces_verma(&prep.oracle_cd, fd, pairings, depth, cfg, Some(&exact))?
    };
    let keys: std::collections::BTreeSet<&Vec<i64>> =
        formula.coeffs.keys().chain(oracle.coeffs.keys()).collect();
    let zero = PhaseValue::Exact(Cyclotomic::zero());
    for k in keys {
        let a = formula.coeffs.get(k).unwrap_or(&zero);
        let b = oracle.coeffs.get(k).unwrap_or(&zero);
        let equal = match (a, b) {
            (PhaseValue::Exact(x), PhaseValue::Exact(y)) => x == y,
            _ => a.approx_eq(b),
        };
        if !equal {
            return Ok(Outcome::Failed(Diagnostic::Mismatch {
                key: k.clone(),
                lhs: a.to_string(),
                rhs: b.to_string(),
            }));
        }
    }
    Ok(Outcome::Passed)
}

/// Shifted evaluation at sample points with a certified truncation tail.
fn genauto_eval(
    fd: &FoldedDatum,
    pairings: &[Q],
    depth: i64,
    cfg: &VerifyConfig,
    prep: &Prepared,
    irr: bool,
) -> Result<Outcome> {
    let cd = fd.cartan();
    let da = fd.automorphism();
    let base = phases_with_inverses(cd, da, prep.base_phases.clone())?;
    let shifted = phases_with_inverses(cd, da, prep.transform_phases.clone())?;
    let plain = twining_series(fd, pairings, depth, irr)?;
    let transformed = transform_twining(&shifted, da, &plain);
    let (_, results) = lifted_eval(
        &base,
        &transformed,
        &plain,
        cfg.eval_points,
        DEFAULT_MAX_TAIL,
    )?;
    for (idx, r) in results.iter().enumerate() {
        if !r.passed {
            return Ok(message(format!(
                "sample point {}: lhs={:.12} rhs={:.12} tail={:.3e}",
                idx + 1,
                r.lhs,
                r.rhs,
                r.tail
            )));
        }
    }
    Ok(Outcome::Passed)
}
