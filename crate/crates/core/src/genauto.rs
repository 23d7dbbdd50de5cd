//! Diagram automorphisms twisted by phases: `e_i ↦ ξ_i e_{ω̇i}`,
//! `f_i ↦ ξ'_i f_{ω̇i}`. The twining character picks up the orbit products
//! `Ξ_i = Π_l ξ_{ω̇^l i}`, which is the same as evaluating the untwisted
//! twining character at a shifted argument.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::automorphism::DiagramAutomorphism;
use crate::cartan::CartanDatum;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::rational::{parse_q, to_f64, Q};
use crate::series::FormalCharacter;

const APPROX_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_TAIL: f64 = 1e-6;
pub const EVAL_TOL: f64 = 1e-9;

/// A phase: exact when it is a rational multiple of a root of unity,
/// floating complex otherwise.
#[derive(Debug, Clone)]
pub enum PhaseValue {
    Exact(Cyclotomic),
    Approx(Complex64),
}

impl PhaseValue {
    pub fn one() -> Self {
        Self::Exact(Cyclotomic::one())
    }

    pub fn root_of_unity(n: u64, e: i64) -> Self {
        Self::Exact(Cyclotomic::root_of_unity(n, e))
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Self::Exact(c) => c.to_complex(),
            Self::Approx(z) => *z,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Exact(c) => c.is_zero(),
            Self::Approx(z) => z.norm() == 0.0,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Self::Exact(a), Self::Exact(b)) => Self::Exact(a.mul(b)),
            _ => Self::Approx(self.to_complex() * other.to_complex()),
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        match self {
            Self::Exact(c) => Self::Exact(c.pow(e)),
            Self::Approx(z) => Self::Approx(z.powu(e as u32)),
        }
    }

    pub fn scale(&self, x: &Q) -> Self {
        match self {
            Self::Exact(c) => Self::Exact(c.mul(&Cyclotomic::rational(x.clone()))),
            Self::Approx(z) => Self::Approx(z * to_f64(x)),
        }
    }

    /// Exact equality when both sides are exact, otherwise within `1e-12`.
    pub fn approx_eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Self::Exact(a), Self::Exact(b)) => a == b,
            _ => (self.to_complex() - other.to_complex()).norm() <= APPROX_TOL,
        }
    }

    pub fn is_one(&self) -> bool {
        self.approx_eq(&Self::one())
    }
}

impl fmt::Display for PhaseValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exact(c) => write!(f, "{c}"),
            Self::Approx(z) => {
                if z.im < 0.0 {
                    write!(f, "{}-{}i", z.re, -z.im)
                } else {
                    write!(f, "{}+{}i", z.re, z.im)
                }
            }
        }
    }
}

/// Parses `zN^E` (the root of unity `exp(2πiE/N)`), `i`, `-i`, a rational,
/// or a complex literal `a+bi` / `a-bi` with decimal parts.
pub fn parse_phase(s: &str) -> Option<PhaseValue> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix('z') {
        let (n, e) = rest.split_once('^').unwrap_or((rest, "1"));
        let n: u64 = n.parse().ok()?;
        let e: i64 = e.parse().ok()?;
        if n == 0 {
            return None;
        }
        return Some(PhaseValue::root_of_unity(n, e));
    }
    match s {
        "i" | "+i" => return Some(PhaseValue::root_of_unity(4, 1)),
        "-i" => return Some(PhaseValue::root_of_unity(4, 3)),
        _ => {}
    }
    if let Some(x) = parse_q(s) {
        return Some(PhaseValue::Exact(Cyclotomic::rational(x)));
    }
    let body = s.strip_suffix('i')?;
    // split at the last sign that is not a leading sign or part of an exponent
    let bytes = body.as_bytes();
    let cut = (1..bytes.len()).rev().find(|&p| {
        (bytes[p] == b'+' || bytes[p] == b'-') && bytes[p - 1] != b'e' && bytes[p - 1] != b'E'
    })?;
    let re: f64 = body[..cut].parse().ok()?;
    let im_str = &body[cut..];
    let im: f64 = match im_str {
        "+" => 1.0,
        "-" => -1.0,
        _ => im_str.parse().ok()?,
    };
    Some(PhaseValue::Approx(Complex64::new(re, im)))
}

#[derive(Debug, Clone)]
pub struct PhaseData {
    xi: Vec<PhaseValue>,
    xi_prime: Vec<PhaseValue>,
    /// `Ξ_i`, stored per index (constant on orbits).
    orbit_products: Vec<PhaseValue>,
    /// `(α_i, σ) = Log(Ξ_i) / N_i`.
    sigma: Vec<Complex64>,
}

impl PhaseData {
    pub fn xi(&self) -> &[PhaseValue] {
        &self.xi
    }

    pub fn xi_prime(&self) -> &[PhaseValue] {
        &self.xi_prime
    }

    pub fn orbit_products(&self) -> &[PhaseValue] {
        &self.orbit_products
    }

    pub fn sigma_pairings(&self) -> &[Complex64] {
        &self.sigma
    }

    pub fn is_exact(&self) -> bool {
        self.xi.iter().all(PhaseValue::is_exact)
    }

    /// Exact phases as cyclotomic numbers, if every phase is exact.
    pub fn exact_xi(&self) -> Option<Vec<Cyclotomic>> {
        self.xi
            .iter()
            .map(|p| match p {
                PhaseValue::Exact(c) => Some(c.clone()),
                PhaseValue::Approx(_) => None,
            })
            .collect()
    }

    /// `Π_j ξ_j^{k_j}`, the factor picked up at a symmetric exponent `k`.
    pub fn multiplier(&self, da: &DiagramAutomorphism, k: &[i64]) -> PhaseValue {
        da.orbits().iter().fold(PhaseValue::one(), |acc, orbit| {
            let e = k[orbit[0]];
            acc.mul(&self.orbit_products[orbit[0]].pow(e as u64))
        })
    }
}

/// Checks nonzero phases and `ξ'_i = ξ_i⁻¹` for every `i`, and derives orbit
/// products and `σ`-pairings. A violation is reported at `i` together with
/// an index `j` where `a_ij ≠ 0`, preferring `j ≠ i`.
pub fn validate_phases(
    cd: &CartanDatum,
    da: &DiagramAutomorphism,
    xi: Vec<PhaseValue>,
    xi_prime: Vec<PhaseValue>,
) -> Result<PhaseData> {
    let n = cd.rank();
    for v in [&xi, &xi_prime] {
        if v.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: v.len(),
            });
        }
    }
    for (i, (a, b)) in xi.iter().zip(&xi_prime).enumerate() {
        if a.is_zero() || b.is_zero() {
            return Err(Error::ZeroPhase(i + 1));
        }
    }
    for i in 0..n {
        if !xi[i].mul(&xi_prime[i]).is_one() {
            let off = (0..n).find(|&j| j != i && !cd.entry(i, j).is_zero());
            let j = off.or_else(|| (!cd.entry(i, i).is_zero()).then_some(i));
            return Err(Error::InverseConstraintViolated {
                i: i + 1,
                j: j.map(|j| j + 1),
            });
        }
    }
    let mut orbit_products = vec![PhaseValue::one(); n];
    let mut sigma = vec![Complex64::zero(); n];
    for orbit in da.orbits() {
        let prod = orbit
            .iter()
            .fold(PhaseValue::one(), |acc, &j| acc.mul(&xi[j]));
        let s = prod.to_complex().ln() / orbit.len() as f64;
        for &j in orbit {
            orbit_products[j] = prod.clone();
            sigma[j] = s;
        }
    }
    Ok(PhaseData {
        xi,
        xi_prime,
        orbit_products,
        sigma,
    })
}

/// Same as [`validate_phases`] with `ξ' = ξ⁻¹` implied; exact phases must be
/// roots of unity or rationals so the inverse stays exact.
pub fn phases_with_inverses(
    cd: &CartanDatum,
    da: &DiagramAutomorphism,
    xi: Vec<PhaseValue>,
) -> Result<PhaseData> {
    let mut inv = Vec::with_capacity(xi.len());
    for (i, p) in xi.iter().enumerate() {
        if p.is_zero() {
            return Err(Error::ZeroPhase(i + 1));
        }
        inv.push(match p {
            PhaseValue::Exact(c) => match c.as_rational() {
                Some(x) => PhaseValue::Exact(Cyclotomic::rational(x.recip())),
                None => {
                    // a root of unity has finite multiplicative order
                    let order = c.order();
                    let candidate = c.pow(2 * order - 1);
                    if c.mul(&candidate) == Cyclotomic::one() {
                        PhaseValue::Exact(candidate)
                    } else {
                        PhaseValue::Approx(Complex64::one() / c.to_complex())
                    }
                }
            },
            PhaseValue::Approx(z) => PhaseValue::Approx(Complex64::one() / z),
        });
    }
    validate_phases(cd, da, xi, inv)
}

/// A depth-truncated series with phase-valued coefficients.
#[derive(Debug, Clone)]
pub struct PhasedCharacter {
    pub anchor: Vec<Q>,
    pub depth: i64,
    pub coeffs: BTreeMap<Vec<i64>, PhaseValue>,
}

impl PhasedCharacter {
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.coeffs {
            let key: Vec<String> = k.iter().map(i64::to_string).collect();
            s.push_str(&format!("{}\t{}\n", key.join(" "), v));
        }
        s
    }
}

/// Multiplies the coefficient at `k` by `Π_orbits Ξ^{k_orbit}`.
pub fn transform_twining(
    pd: &PhaseData,
    da: &DiagramAutomorphism,
    chi: &FormalCharacter,
) -> PhasedCharacter {
    let coeffs = chi
        .iter()
        .map(|(k, c)| (k.clone(), pd.multiplier(da, k).scale(c)))
        .collect();
    PhasedCharacter {
        anchor: chi.anchor().to_vec(),
        depth: chi.depth(),
        coeffs,
    }
}

/// A point `h` given by `α_i(h)` and `Λ(h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePoint {
    pub alpha: Vec<Complex64>,
    pub lambda: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub tail: f64,
    pub passed: bool,
}

/// `Σ_{ht > d} q^h` with `q < 1`.
fn geometric_tail(q: f64, depth: i64) -> f64 {
    q.powi((depth + 1) as i32) / (1.0 - q)
}

/// Compares `Ψ^ω̃_Λ(h)`, evaluated from the transformed coefficients, with
/// `e^{Λ(h_σ)} Ψ^ω_Λ(h − h_σ)` evaluated from the untransformed ones, where
/// `α_i(h_σ) = (α_i, σ)`. The `Λ(h_σ)` factor cancels against the shift of
/// the anchor, so both sides carry `e^{Λ(h)}`. The truncation error is
/// bounded using `|m_k| ≤ #words(k)`, which sums to `q^h` at height `h`.
pub fn shifted_eval(
    pd: &PhaseData,
    transformed: &PhasedCharacter,
    plain: &FormalCharacter,
    points: &[SamplePoint],
    max_tail: f64,
) -> Result<Vec<EvalResult>> {
    let depth = plain.depth();
    let sigma = pd.sigma_pairings();
    let mut out = Vec::with_capacity(points.len());
    for (idx, pt) in points.iter().enumerate() {
        if pt.alpha.len() != sigma.len() {
            return Err(Error::LengthMismatch {
                expected: sigma.len(),
                got: pt.alpha.len(),
            });
        }
        let q_lhs: f64 = pt
            .alpha
            .iter()
            .zip(pd.xi())
            .map(|(a, x)| x.to_complex().norm() * (-a.re).exp())
            .sum();
        let q_rhs: f64 = pt
            .alpha
            .iter()
            .zip(sigma)
            .map(|(a, s)| (s.re - a.re).exp())
            .sum();
        if q_lhs >= 1.0 || q_rhs >= 1.0 {
            return Err(Error::TailBoundTooLarge(idx + 1));
        }
        let scale = pt.lambda.exp();
        let tail = scale.norm() * (geometric_tail(q_lhs, depth) + geometric_tail(q_rhs, depth));
        if tail > max_tail {
            return Err(Error::TailBoundTooLarge(idx + 1));
        }
        let mut lhs = Complex64::zero();
        for (k, c) in &transformed.coeffs {
            let e: Complex64 = k.iter().zip(&pt.alpha).map(|(&ki, a)| a * ki as f64).sum();
            lhs += c.to_complex() * (-e).exp();
        }
        let mut rhs = Complex64::zero();
        for (k, c) in plain.iter() {
            let e: Complex64 = k
                .iter()
                .zip(pt.alpha.iter().zip(sigma))
                .map(|(&ki, (a, s))| (a - s) * ki as f64)
                .sum();
            rhs += (-e).exp() * to_f64(c);
        }
        let lhs = lhs * scale;
        let rhs = rhs * scale;
        let passed = (lhs - rhs).norm() <= EVAL_TOL + tail;
        out.push(EvalResult {
            lhs,
            rhs,
            tail,
            passed,
        });
    }
    Ok(out)
}

/// Sample points with `Re α_i(h)` near 3 and small distinct imaginary parts.
pub fn default_sample_points(n: usize, count: usize) -> Vec<SamplePoint> {
    (0..count)
        .map(|p| SamplePoint {
            alpha: (0..n)
                .map(|i| {
                    Complex64::new(
                        3.0 + 0.25 * p as f64,
                        0.1 * (i as f64 + 1.0) + 0.3 * p as f64,
                    )
                })
                .collect(),
            lambda: Complex64::new(0.5, -0.2 * p as f64),
        })
        .collect()
}

/// [`default_sample_points`] with every `Re α_i(h)` raised in steps of 1/2
/// until the certified tail fits under `max_tail`, then evaluated.
pub fn lifted_eval(
    pd: &PhaseData,
    transformed: &PhasedCharacter,
    plain: &FormalCharacter,
    count: usize,
    max_tail: f64,
) -> Result<(Vec<SamplePoint>, Vec<EvalResult>)> {
    let n = pd.sigma_pairings().len();
    let mut lift = 0.0;
    loop {
        let points: Vec<SamplePoint> = default_sample_points(n, count)
            .into_iter()
            .map(|mut p| {
                for a in &mut p.alpha {
                    a.re += lift;
                }
                p
            })
            .collect();
        match shifted_eval(pd, transformed, plain, &points, max_tail) {
            Ok(results) => return Ok((points, results)),
            Err(Error::TailBoundTooLarge(_)) if lift < 40.0 => lift += 0.5,
            Err(e) => return Err(e),
        }
    }
}
