//! Ordinary and twining characters of Verma and irreducible modules, computed
//! from truncated Weyl-Kac-Borcherds numerator sums, plus the structural
//! checks that relate the twining side to the orbit Lie algebra.
//!
//! Every series here is keyed by exponent vectors `k ≥ 0` relative to its
//! anchor, so a coefficient at `k` belongs to the weight `anchor − Σ k_i α_i`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::cartan::CartanDatum;
use crate::error::{Error, Result};
use crate::fold::FoldedDatum;
use crate::rational::{binomial, fmt_q, Q};
use crate::series::{height, FormalCharacter};
use crate::weight::Weight;
use crate::weyl::{folded_reflect, hat_orbit, weyl_orbit, DEFAULT_NODE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Ordinary,
    Twining,
}

/// `S_Λ` or its twining analogue: exponent vector of `β` (on the index set of
/// `G`) mapped to `ε(β)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectionSum {
    pub flavor: Flavor,
    pub terms: BTreeMap<Vec<i64>, i8>,
}

/// First coefficientwise disagreement between two series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub key: Vec<i64>,
    pub lhs: Q,
    pub rhs: Q,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let key: Vec<String> = self.key.iter().map(i64::to_string).collect();
        write!(
            f,
            "MISMATCH k=({}) lhs={} rhs={}",
            key.join(","),
            fmt_q(&self.lhs),
            fmt_q(&self.rhs)
        )
    }
}

pub fn compare(lhs: &FormalCharacter, rhs: &FormalCharacter) -> Option<Mismatch> {
    lhs.first_difference(rhs)
        .map(|(key, lhs, rhs)| Mismatch { key, lhs, rhs })
}

fn check_rank(n: usize, pairings: &[Q]) -> Result<()> {
    if pairings.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: pairings.len(),
        });
    }
    Ok(())
}

fn check_symmetric(fd: &FoldedDatum, pairings: &[Q]) -> Result<()> {
    check_rank(fd.cartan().rank(), pairings)?;
    if !fd.automorphism().is_invariant(pairings) {
        return Err(Error::NotSymmetricWeight);
    }
    Ok(())
}

/// All subsets of `candidates` that are pairwise orthogonal under `orth`,
/// with their summed exponent vector, kept when the height fits.
fn orthogonal_subsets(
    candidates: &[usize],
    orth: impl Fn(usize, usize) -> bool,
    vector: impl Fn(usize) -> Vec<i64>,
    n: usize,
    depth: i64,
) -> BTreeMap<Vec<i64>, i8> {
    fn go(
        start: usize,
        chosen: &mut Vec<usize>,
        candidates: &[usize],
        orth: &dyn Fn(usize, usize) -> bool,
        vector: &dyn Fn(usize) -> Vec<i64>,
        acc: Vec<i64>,
        depth: i64,
        out: &mut BTreeMap<Vec<i64>, i8>,
    ) {
        let sign = if chosen.len().is_multiple_of(2) {
            1
        } else {
            -1
        };
        out.insert(acc.clone(), sign);
        for t in start..candidates.len() {
            let c = candidates[t];
            if !chosen.iter().all(|&x| orth(x, c)) {
                continue;
            }
            let next: Vec<i64> = acc.iter().zip(vector(c)).map(|(a, b)| a + b).collect();
            if height(&next) > depth {
                continue;
            }
            chosen.push(c);
            go(t + 1, chosen, candidates, orth, vector, next, depth, out);
            chosen.pop();
        }
    }
    let mut out = BTreeMap::new();
    go(
        0,
        &mut Vec::new(),
        candidates,
        &orth,
        &vector,
        vec![0; n],
        depth,
        &mut out,
    );
    out
}

/// `S_Λ`: distinct pairwise orthogonal imaginary simple roots orthogonal to
/// `Λ`, with sign `(−1)^m`.
pub fn correction_sum(cd: &CartanDatum, pairings: &[Q], depth: i64) -> Result<CorrectionSum> {
    check_rank(cd.rank(), pairings)?;
    let n = cd.rank();
    let candidates: Vec<usize> = cd
        .imaginary_indices()
        .into_iter()
        .filter(|&i| pairings[i].is_zero())
        .collect();
    let terms = orthogonal_subsets(
        &candidates,
        |i, j| cd.entry(i, j).is_zero(),
        |i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        },
        n,
        depth,
    );
    Ok(CorrectionSum {
        flavor: Flavor::Ordinary,
        terms,
    })
}

/// `S^ω_Λ`: sums of orbit indicators `β_i` over `S ⊆ Ĭ` with `α̂_i`
/// imaginary, pairwise orthogonal and orthogonal to `Λ`, sign `(−1)^|S|`.
pub fn twining_correction_sum(
    fd: &FoldedDatum,
    pairings: &[Q],
    depth: i64,
) -> Result<CorrectionSum> {
    check_symmetric(fd, pairings)?;
    let n = fd.cartan().rank();
    let breve = fd.breve_indices();
    let a = fd.breve_matrix();
    let candidates: Vec<usize> = (0..breve.len())
        .filter(|&p| !a[(p, p)].is_positive() && pairings[breve[p]].is_zero())
        .collect();
    let terms = orthogonal_subsets(
        &candidates,
        |p, r| a[(p, r)].is_zero(),
        |p| fd.beta(breve[p]),
        n,
        depth,
    );
    Ok(CorrectionSum {
        flavor: Flavor::Twining,
        terms,
    })
}

fn shifted_anchor(pairings: &[Q], rho: &[Q]) -> Vec<Q> {
    pairings.iter().zip(rho).map(|(p, r)| p + r).collect()
}

/// `Σ_w ε(w) Σ_β ε(β) e(w(Λ+ρ−β))`, anchored at `Λ+ρ`.
pub fn numerator(cd: &CartanDatum, pairings: &[Q], depth: i64) -> Result<FormalCharacter> {
    let sum = correction_sum(cd, pairings, depth)?;
    let anchor = shifted_anchor(pairings, &cd.rho_pairings());
    let mut out = FormalCharacter::zero(anchor.clone(), depth);
    for (b, &sign) in &sum.terms {
        let start = Weight::new(anchor.clone(), b.clone())?;
        for p in weyl_orbit(cd, &start, depth - height(b), DEFAULT_NODE_CAP)? {
            out.add_term(
                p.weight.exponents().to_vec(),
                Q::from_integer((sign * p.parity).into()),
            );
        }
    }
    Ok(out)
}

/// `Σ_{w∈Ŵ} ε̂(w) Σ_β ε̂(β) e(w(Λ+ρ−β))`, anchored at `Λ+ρ`.
pub fn twining_numerator(fd: &FoldedDatum, pairings: &[Q], depth: i64) -> Result<FormalCharacter> {
    let sum = twining_correction_sum(fd, pairings, depth)?;
    let anchor = shifted_anchor(pairings, &fd.cartan().rho_pairings());
    let mut out = FormalCharacter::zero(anchor.clone(), depth);
    for (b, &sign) in &sum.terms {
        let start = Weight::new(anchor.clone(), b.clone())?;
        for p in hat_orbit(fd, &start, depth - height(b), DEFAULT_NODE_CAP)? {
            out.add_term(
                p.weight.exponents().to_vec(),
                Q::from_integer((sign * p.parity).into()),
            );
        }
    }
    Ok(out)
}

pub fn irr_character(cd: &CartanDatum, pairings: &[Q], depth: i64) -> Result<FormalCharacter> {
    check_rank(cd.rank(), pairings)?;
    if !cd.is_integrable(pairings) {
        return Err(Error::NotIntegrable);
    }
    let zero = vec![Q::zero(); cd.rank()];
    let num = numerator(cd, pairings, depth)?;
    let den = numerator(cd, &zero, depth)?;
    num.mul(&den.invert()?)
}

pub fn verma_character(cd: &CartanDatum, pairings: &[Q], depth: i64) -> Result<FormalCharacter> {
    check_rank(cd.rank(), pairings)?;
    let zero = vec![Q::zero(); cd.rank()];
    Ok(numerator(cd, &zero, depth)?
        .invert()?
        .with_anchor(pairings.to_vec()))
}

pub fn twining_irr(fd: &FoldedDatum, pairings: &[Q], depth: i64) -> Result<FormalCharacter> {
    check_symmetric(fd, pairings)?;
    if !fd.cartan().is_integrable(pairings) {
        return Err(Error::NotIntegrable);
    }
    let zero = vec![Q::zero(); fd.cartan().rank()];
    let num = twining_numerator(fd, pairings, depth)?;
    let den = twining_numerator(fd, &zero, depth)?;
    num.mul(&den.invert()?)
}

pub fn twining_verma(fd: &FoldedDatum, pairings: &[Q], depth: i64) -> Result<FormalCharacter> {
    check_symmetric(fd, pairings)?;
    let zero = vec![Q::zero(); fd.cartan().rank()];
    Ok(twining_numerator(fd, &zero, depth)?
        .invert()?
        .with_anchor(pairings.to_vec()))
}

/// Re-keys an orbit-algebra series over `G` via `k = pullback(m)`, keeping
/// keys whose `G`-height fits in `depth`.
pub fn pullback_series(
    fd: &FoldedDatum,
    orbit_series: &FormalCharacter,
    anchor: Vec<Q>,
    depth: i64,
) -> FormalCharacter {
    let mut out = FormalCharacter::zero(anchor, depth);
    for (m, c) in orbit_series.iter() {
        if fd.pullback_height(m) <= depth {
            out.add_term(fd.pullback_exponents(m), c.clone());
        }
    }
    out
}

/// The orbit-algebra character of the transported weight, pulled back to
/// `G` keys. With `Ĭ = ∅` the orbit side is `e(0)`.
fn orbit_side(
    fd: &FoldedDatum,
    pairings: &[Q],
    depth: i64,
    f: fn(&CartanDatum, &[Q], i64) -> Result<FormalCharacter>,
) -> Result<FormalCharacter> {
    check_symmetric(fd, pairings)?;
    match fd.orbit_algebra() {
        None => Ok(FormalCharacter::one(pairings.to_vec(), depth)),
        Some(orbit) => {
            let transported = fd.transport_anchor(pairings);
            let psi = f(orbit, &transported, depth)?;
            Ok(pullback_series(fd, &psi, pairings.to_vec(), depth))
        }
    }
}

/// `Ψ̆` of the transported highest weight, over `G` keys.
pub fn orbit_irr(fd: &FoldedDatum, pairings: &[Q], depth: i64) -> Result<FormalCharacter> {
    orbit_side(fd, pairings, depth, irr_character)
}

/// `𝒱̆` of the transported highest weight, over `G` keys.
pub fn orbit_verma(fd: &FoldedDatum, pairings: &[Q], depth: i64) -> Result<FormalCharacter> {
    orbit_side(fd, pairings, depth, verma_character)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitCheckReport {
    pub depth: i64,
    pub verma: Option<Mismatch>,
    /// `None` when the irreducible half was skipped (weight not integrable).
    pub irr: Option<Option<Mismatch>>,
}

impl OrbitCheckReport {
    pub fn passed(&self) -> bool {
        self.verma.is_none() && !matches!(self.irr, Some(Some(_)))
    }
}

/// Twining characters over `G` against orbit-algebra characters of the
/// transported weight, coefficientwise up to `depth`. A nonzero twining
/// coefficient off the transport image shows up as a mismatch with `rhs = 0`.
pub fn orbit_character_check(
    fd: &FoldedDatum,
    pairings: &[Q],
    depth: i64,
) -> Result<OrbitCheckReport> {
    check_symmetric(fd, pairings)?;
    let verma = compare(
        &twining_verma(fd, pairings, depth)?,
        &orbit_verma(fd, pairings, depth)?,
    );
    let irr = if fd.cartan().is_integrable(pairings) {
        Some(compare(
            &twining_irr(fd, pairings, depth)?,
            &orbit_irr(fd, pairings, depth)?,
        ))
    } else {
        None
    };
    Ok(OrbitCheckReport { depth, verma, irr })
}

fn power_series_factor(
    n: usize,
    root: &[i64],
    exponent: i64,
    depth: i64,
    anchor: Vec<Q>,
) -> FormalCharacter {
    // (1 − e(−root))^exponent, truncated
    let mut out = FormalCharacter::one(anchor, depth);
    let h = height(root);
    if h == 0 {
        return out;
    }
    let mut t = 1i64;
    while t * h <= depth {
        let c: BigInt = if exponent >= 0 {
            let b = binomial(exponent as u64, t as u64);
            if t % 2 == 0 {
                b
            } else {
                -b
            }
        } else {
            binomial((-exponent + t - 1) as u64, t as u64)
        };
        if c.is_zero() && exponent >= 0 {
            break;
        }
        let key: Vec<i64> = root.iter().map(|x| x * t).collect();
        debug_assert_eq!(key.len(), n);
        out.add_term(key, Q::from_integer(c));
        t += 1;
    }
    out
}

/// Positive roots and multiplicities up to height `depth`, read off the
/// denominator `Σ_w ε(w) Σ_β ε(β) e(w(ρ−β) − ρ) = Π (1−e(−α))^{mult α}` one
/// height at a time.
pub fn root_multiplicities(cd: &CartanDatum, depth: i64) -> Result<BTreeMap<Vec<i64>, u64>> {
    let n = cd.rank();
    let zero = vec![Q::zero(); n];
    let den = numerator(cd, &zero, depth)?.with_anchor(zero.clone());
    let mut partial = FormalCharacter::one(zero.clone(), depth);
    let mut mults = BTreeMap::new();
    for h in 1..=depth {
        let mut level: Vec<(Vec<i64>, i64)> = Vec::new();
        let keys: std::collections::BTreeSet<Vec<i64>> = partial
            .iter()
            .chain(den.iter())
            .filter(|(k, _)| height(k) == h)
            .map(|(k, _)| k.clone())
            .collect();
        for k in keys {
            let m = partial.coeff(&k) - den.coeff(&k);
            if m.is_zero() {
                continue;
            }
            if m.is_negative() || !m.is_integer() {
                let key: Vec<String> = k.iter().map(i64::to_string).collect();
                return Err(Error::NegativeMultiplicity(format!(
                    "({}) = {}",
                    key.join(","),
                    fmt_q(&m)
                )));
            }
            let m = crate::rational::to_i64(&m).expect("integer multiplicity");
            level.push((k, m));
        }
        for (k, m) in level {
            let factor = power_series_factor(n, &k, m, depth, zero.clone());
            partial = partial.mul(&factor)?;
            mults.insert(k, m as u64);
        }
    }
    if let Some(m) = compare(&partial, &den) {
        return Err(Error::NegativeMultiplicity(format!(
            "product does not reproduce the denominator: {m}"
        )));
    }
    Ok(mults)
}

/// Checks `(β|β−2ρ) c_β = Σ_{β'+β''=β} (β'|β'') c_β' c_β''` with
/// `c_β = Σ_{n|β} mult(β/n)/n`, for every `β` up to `depth`. Only valid when
/// every simple root is real. Returns the first failing `β`.
pub fn peterson_check(
    cd: &CartanDatum,
    mults: &BTreeMap<Vec<i64>, u64>,
    depth: i64,
) -> Option<Vec<i64>> {
    let mut c: BTreeMap<Vec<i64>, Q> = BTreeMap::new();
    for (root, &m) in mults {
        let mut t = 1i64;
        while t * height(root) <= depth {
            let key: Vec<i64> = root.iter().map(|x| x * t).collect();
            *c.entry(key).or_insert_with(Q::zero) += Q::new(BigInt::from(m), BigInt::from(t));
            t += 1;
        }
    }
    let mut targets: std::collections::BTreeSet<Vec<i64>> = c.keys().cloned().collect();
    for a in c.keys() {
        for b in c.keys() {
            let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            if height(&s) <= depth {
                targets.insert(s);
            }
        }
    }
    let two_rho: Vec<Q> = (0..cd.rank()).map(|i| cd.entry(i, i).clone()).collect();
    for beta in targets {
        let mut rho_term = Q::zero();
        for (i, &b) in beta.iter().enumerate() {
            rho_term += &two_rho[i] * Q::from_integer(b.into());
        }
        let lhs =
            (cd.form(&beta, &beta) - rho_term) * c.get(&beta).cloned().unwrap_or_else(Q::zero);
        let mut rhs = Q::zero();
        for (b1, c1) in &c {
            let b2: Vec<i64> = beta.iter().zip(b1).map(|(x, y)| x - y).collect();
            if b2.iter().any(|&x| x < 0) || height(&b2) == 0 {
                continue;
            }
            if let Some(c2) = c.get(&b2) {
                rhs += cd.form(b1, &b2) * c1 * c2;
            }
        }
        if lhs != rhs {
            return Some(beta);
        }
    }
    None
}

/// Positive roots of the orbit algebra with multiplicities, keyed by orbit
/// exponents over `Ĭ`. When every orbit index is real the result is also
/// cross-checked against the Peterson recursion.
pub fn orbit_root_mults(fd: &FoldedDatum, depth: i64) -> Result<BTreeMap<Vec<i64>, u64>> {
    let Some(orbit) = fd.orbit_algebra() else {
        return Ok(BTreeMap::new());
    };
    let mults = root_multiplicities(orbit, depth)?;
    if orbit.imaginary_indices().is_empty() {
        if let Some(beta) = peterson_check(orbit, &mults, depth) {
            return Err(Error::Invalid(format!(
                "Peterson recursion disagrees with the denominator at {beta:?}"
            )));
        }
    }
    Ok(mults)
}

/// `e(Λ) Π_{α̂∈Δ̆⁺} (1 − e(−P*(α̂)))^{−mult α̂}` over `G` keys.
pub fn twining_verma_product(
    fd: &FoldedDatum,
    pairings: &[Q],
    depth: i64,
) -> Result<FormalCharacter> {
    check_symmetric(fd, pairings)?;
    let n = fd.cartan().rank();
    let anchor = pairings.to_vec();
    let mut out = FormalCharacter::one(anchor.clone(), depth);
    let zero = vec![Q::zero(); n];
    for (m, &mult) in &orbit_root_mults(fd, depth)? {
        if fd.pullback_height(m) > depth {
            continue;
        }
        let root = fd.pullback_exponents(m);
        let factor = power_series_factor(n, &root, -(mult as i64), depth, zero.clone());
        out = out.mul(&factor)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// `c_λ` keyed by the exponents of `Λ − λ`.
    pub coeffs: BTreeMap<Vec<i64>, Q>,
    /// `(key, expected, found)` for each qualifying orthogonal-imaginary
    /// orbit sum `Λ − λ`, where `expected = (−1)^{brevht}`.
    pub sign_checks: Vec<(Vec<i64>, Q, Q)>,
}

impl Decomposition {
    pub fn c(&self, key: &[i64]) -> Q {
        self.coeffs.get(key).cloned().unwrap_or_else(Q::zero)
    }

    pub fn leading_is_one(&self) -> bool {
        self.coeffs
            .keys()
            .next()
            .is_some_and(|k| k.iter().all(|&x| x == 0))
            && self.c(&vec![0; self.coeffs.keys().next().unwrap().len()]) == Q::one()
    }

    pub fn first_sign_violation(&self) -> Option<&(Vec<i64>, Q, Q)> {
        self.sign_checks.iter().find(|(_, e, f)| e != f)
    }
}

/// Solves `Ψ^ω_Λ = Σ_λ c_λ 𝒱^ω_λ` by increasing height. Every nonzero `c_λ`
/// must satisfy `|λ+ρ|² = |Λ+ρ|²`.
pub fn c_coefficients(fd: &FoldedDatum, pairings: &[Q], depth: i64) -> Result<Decomposition> {
    let cd = fd.cartan();
    let psi = twining_irr(fd, pairings, depth)?;
    let verma = twining_verma(fd, pairings, depth)?;
    let mut residual = psi.clone();
    let mut coeffs = BTreeMap::new();
    for h in 0..=depth {
        let level: Vec<(Vec<i64>, Q)> = residual
            .iter()
            .filter(|(k, _)| height(k) == h)
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        for (kappa, c) in level {
            let w = Weight::new(pairings.to_vec(), kappa.clone())?;
            if !w.norm_shift_difference(cd).is_zero() {
                let key: Vec<String> = kappa.iter().map(i64::to_string).collect();
                return Err(Error::DecompositionResidual(format!("({})", key.join(","))));
            }
            for (v, vc) in verma.iter() {
                let k: Vec<i64> = kappa.iter().zip(v).map(|(a, b)| a + b).collect();
                if height(&k) <= depth {
                    residual.add_term(k, -(&c * vc));
                }
            }
            coeffs.insert(kappa, c);
        }
    }
    let sum = twining_correction_sum(fd, pairings, depth)?;
    let breve_len = |k: &Vec<i64>| -> i64 { fd.breve_indices().iter().map(|&i| k[i]).sum::<i64>() };
    let sign_checks = sum
        .terms
        .keys()
        .map(|k| {
            let expected = if breve_len(k) % 2 == 0 {
                Q::one()
            } else {
                -Q::one()
            };
            let found = coeffs.get(k).cloned().unwrap_or_else(Q::zero);
            (k.clone(), expected, found)
        })
        .collect();
    Ok(Decomposition {
        coeffs,
        sign_checks,
    })
}

/// Checks that the coefficient function of `chi` (a twining irreducible
/// character) is constant along `Ŵ`-orbits: `coeff(k) = coeff(k')` whenever
/// `k'` comes from a folded reflection of `Λ − k` and fits in the depth.
/// Images above the highest weight count as coefficient zero.
pub fn weyl_invariance_check(fd: &FoldedDatum, chi: &FormalCharacter) -> Result<Option<Mismatch>> {
    let depth = chi.depth();
    for (k, c) in chi.iter() {
        let w = Weight::new(chi.anchor().to_vec(), k.clone())?;
        for i in fd.breve_real() {
            let image = folded_reflect(fd, i, &w)?;
            let k2 = image.exponents();
            let other = if k2.iter().any(|&x| x < 0) {
                Q::zero()
            } else if height(k2) <= depth {
                chi.coeff(k2)
            } else {
                continue;
            };
            if &other != c {
                return Ok(Some(Mismatch {
                    key: k.clone(),
                    lhs: c.clone(),
                    rhs: other,
                }));
            }
        }
    }
    Ok(None)
}

/// Anti-invariance of the twining Verma denominator: with `D` the inverse of
/// the product-form twining Verma series, read as a series anchored at `ρ`,
/// `D(k') = −D(k)` whenever `ρ − k'` is a folded reflection of `ρ − k`.
pub fn denominator_sign_check(fd: &FoldedDatum, depth: i64) -> Result<Option<Mismatch>> {
    let cd = fd.cartan();
    let zero = vec![Q::zero(); cd.rank()];
    let den = twining_verma_product(fd, &zero, depth)?.invert()?;
    let rho = cd.rho_pairings();
    for (k, c) in den.iter() {
        let w = Weight::new(rho.clone(), k.clone())?;
        for i in fd.breve_real() {
            let image = folded_reflect(fd, i, &w)?;
            let k2 = image.exponents();
            let other = if k2.iter().any(|&x| x < 0) {
                Q::zero()
            } else if height(k2) <= depth {
                den.coeff(k2)
            } else {
                continue;
            };
            if other != -c {
                return Ok(Some(Mismatch {
                    key: k.clone(),
                    lhs: c.clone(),
                    rhs: other,
                }));
            }
        }
    }
    Ok(None)
}
