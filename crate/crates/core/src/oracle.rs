//! Brute-force module-level oracle. Weight spaces of a highest-weight module
//! are spanned by words in the lowering operators applied to the highest
//! weight vector; the contravariant form on words is computed from
//! `[e_i, f_j] = δ_ij h_i` alone, and the irreducible quotient is the word
//! span modulo the radical of that form. Twining traces are traces of the
//! letter-relabeling map on that quotient.

use std::collections::HashMap;
use std::fmt::Debug;
use std::ops::{Mul, Sub};
use std::rc::Rc;

use num_traits::{One, Zero};
use rand::Rng;

use crate::automorphism::DiagramAutomorphism;
use crate::cartan::CartanDatum;
use crate::characters::Mismatch;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::fold::FoldedDatum;
use crate::linalg::Matrix;
use crate::rational::{binomial, Q};
use crate::series::{height, FormalCharacter};

pub const DEFAULT_WORD_CAP: usize = 5000;
pub const GENERIC_ATTEMPTS: usize = 5;
const GENERIC_BASE: i64 = 1_000_003;

/// Coefficient ring for traces: rationals, or cyclotomic numbers when the
/// relabeling carries phases.
pub trait Scalar:
    Clone + PartialEq + Debug + Zero + One + Sub<Output = Self> + Mul<Output = Self>
{
    fn from_q(x: &Q) -> Self;
}

impl Scalar for Q {
    fn from_q(x: &Q) -> Self {
        x.clone()
    }
}

impl Scalar for Cyclotomic {
    fn from_q(x: &Q) -> Self {
        Cyclotomic::rational(x.clone())
    }
}

/// All distinct words with the given content, in lexicographic order.
pub fn words_with_content(content: &[i64], cap: usize) -> Result<Vec<Vec<usize>>> {
    let total = height(content);
    // multinomial count up front, so oversized spaces fail fast
    let mut count = num_bigint::BigInt::one();
    let mut left = total as u64;
    for &c in content {
        count *= binomial(left, c as u64);
        left -= c as u64;
    }
    if count > num_bigint::BigInt::from(cap) {
        return Err(Error::BudgetExceeded(cap));
    }
    fn go(rem: &mut [i64], word: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, total: usize) {
        if word.len() == total {
            out.push(word.clone());
            return;
        }
        for i in 0..rem.len() {
            if rem[i] > 0 {
                rem[i] -= 1;
                word.push(i);
                go(rem, word, out, total);
                word.pop();
                rem[i] += 1;
            }
        }
    }
    let mut out = Vec::new();
    go(
        &mut content.to_vec(),
        &mut Vec::new(),
        &mut out,
        total as usize,
    );
    Ok(out)
}

/// Words of one content together with the contravariant form on them.
#[derive(Debug, Clone)]
pub struct WordSpace {
    pub content: Vec<i64>,
    pub words: Vec<Vec<usize>>,
    pub gram: Matrix,
    index: HashMap<Vec<usize>, usize>,
}

impl WordSpace {
    pub fn position(&self, word: &[usize]) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn rank(&self) -> usize {
        self.gram.rank()
    }
}

/// Memoized Gram matrices for the highest-weight module with the given
/// anchor pairings `(Λ, α_i)`.
pub struct GramOracle<'a> {
    cd: &'a CartanDatum,
    pairings: Vec<Q>,
    cap: usize,
    cache: HashMap<Vec<i64>, Rc<WordSpace>>,
}

impl<'a> GramOracle<'a> {
    pub fn new(cd: &'a CartanDatum, pairings: Vec<Q>) -> Self {
        Self::with_cap(cd, pairings, DEFAULT_WORD_CAP)
    }

    pub fn with_cap(cd: &'a CartanDatum, pairings: Vec<Q>, cap: usize) -> Self {
        assert_eq!(pairings.len(), cd.rank());
        Self {
            cd,
            pairings,
            cap,
            cache: HashMap::new(),
        }
    }

    pub fn pairings(&self) -> &[Q] {
        &self.pairings
    }

    /// `⟨f_u v, f_w v⟩` for all words `u`, `w` of the content. Moving the
    /// leftmost letter `u_0` of `u` across as `e_{u_0}` gives
    /// `Σ_{p: w_p = u_0} c_p ⟨f_{u'} v, f_{w∖p} v⟩` with
    /// `c_p = (Λ, α_{u_0}) − Σ_{q>p} a_{u_0, w_q}`.
    pub fn word_space(&mut self, content: &[i64]) -> Result<Rc<WordSpace>> {
        if let Some(ws) = self.cache.get(content) {
            return Ok(ws.clone());
        }
        let words = words_with_content(content, self.cap)?;
        let index: HashMap<Vec<usize>, usize> = words
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, w)| (w, i))
            .collect();
        let n = words.len();
        let mut gram = Matrix::zeros(n, n);
        if height(content) == 0 {
            gram[(0, 0)] = Q::one();
        } else {
            let mut subs: HashMap<usize, Rc<WordSpace>> = HashMap::new();
            for (j, &c) in content.iter().enumerate() {
                if c > 0 {
                    let mut k = content.to_vec();
                    k[j] -= 1;
                    subs.insert(j, self.word_space(&k)?);
                }
            }
            for (a, u) in words.iter().enumerate() {
                let u0 = u[0];
                let sub = &subs[&u0];
                let ua = sub.position(&u[1..]).expect("suffix word");
                for b in a..n {
                    let w = &words[b];
                    let mut acc = Q::zero();
                    let mut c = self.pairings[u0].clone();
                    // walk right to left so c accumulates Σ_{q>p}
                    for p in (0..w.len()).rev() {
                        if w[p] == u0 {
                            let mut rest = w.clone();
                            rest.remove(p);
                            let wb = sub.position(&rest).expect("reduced word");
                            let g = &sub.gram[(ua, wb)];
                            if !g.is_zero() && !c.is_zero() {
                                acc += &c * g;
                            }
                        }
                        c -= self.cd.entry(u0, w[p]);
                    }
                    gram[(a, b)] = acc.clone();
                    gram[(b, a)] = acc;
                }
            }
        }
        let ws = Rc::new(WordSpace {
            content: content.to_vec(),
            words,
            gram,
            index,
        });
        self.cache.insert(content.to_vec(), ws.clone());
        Ok(ws)
    }

    /// `dim L(Λ)_{Λ−Σk_iα_i}` as the Gram rank.
    pub fn multiplicity(&mut self, content: &[i64]) -> Result<usize> {
        Ok(self.word_space(content)?.rank())
    }
}

/// The relabeling `τ(f_{i_1}…f_{i_m} v) = Π_t ξ_{ω̇⁻¹ i_t} f_{ω̇⁻¹ i_1}…f_{ω̇⁻¹ i_m} v`
/// as `(image index, phase)` per word, or `None` when the content is not
/// symmetric (the map then leaves the weight space and the trace is zero).
pub fn tau_matrix<S: Scalar>(
    da: &DiagramAutomorphism,
    ws: &WordSpace,
    phases: Option<&[S]>,
) -> Option<Vec<(usize, S)>> {
    if !da.is_invariant(&ws.content) {
        return None;
    }
    Some(
        ws.words
            .iter()
            .map(|w| {
                let image: Vec<usize> = w.iter().map(|&i| da.apply_inverse(i)).collect();
                let phase = match phases {
                    None => S::one(),
                    Some(xi) => image.iter().fold(S::one(), |acc, &j| acc * xi[j].clone()),
                };
                (ws.position(&image).expect("symmetric content"), phase)
            })
            .collect(),
    )
}

/// True when `gram[τu][τw] = gram[u][w]` for all words (phases ignored).
pub fn is_form_compatible(da: &DiagramAutomorphism, ws: &WordSpace) -> bool {
    let Some(tau) = tau_matrix::<Q>(da, ws, None) else {
        return true;
    };
    let n = ws.words.len();
    (0..n).all(|a| (0..n).all(|b| ws.gram[(tau[a].0, tau[b].0)] == ws.gram[(a, b)]))
}

/// First weight space up to `depth` where the Gram matrix is not symmetric
/// or, on a symmetric content, `τ` is not an isometry. The mismatch reports
/// the content together with the two entries that should agree.
pub fn form_defect(
    cd: &CartanDatum,
    da: &DiagramAutomorphism,
    pairings: &[Q],
    depth: i64,
    cap: usize,
) -> Result<Option<Mismatch>> {
    let mut oracle = GramOracle::with_cap(cd, pairings.to_vec(), cap);
    for k in contents_up_to(cd.rank(), depth) {
        let ws = oracle.word_space(&k)?;
        let g = &ws.gram;
        let n = ws.words.len();
        let tau = tau_matrix::<Q>(da, &ws, None);
        for a in 0..n {
            for b in 0..n {
                let (x, y) = match &tau {
                    _ if g[(a, b)] != g[(b, a)] => (&g[(a, b)], &g[(b, a)]),
                    Some(t) if g[(t[a].0, t[b].0)] != g[(a, b)] => {
                        (&g[(a, b)], &g[(t[a].0, t[b].0)])
                    }
                    _ => continue,
                };
                return Ok(Some(Mismatch {
                    key: k,
                    lhs: x.clone(),
                    rhs: y.clone(),
                }));
            }
        }
    }
    Ok(None)
}

/// Trace of `τ` on the word span modulo the radical of the form:
/// `tr(τ | words) − tr(τ | radical)`. Fails if `τ` does not map the radical
/// into itself.
pub fn quotient_trace<S: Scalar>(
    da: &DiagramAutomorphism,
    ws: &WordSpace,
    phases: Option<&[S]>,
) -> Result<S> {
    let Some(tau) = tau_matrix(da, ws, phases) else {
        return Ok(S::zero());
    };
    let mut total = S::zero();
    for (w, (image, phase)) in tau.iter().enumerate() {
        if *image == w {
            total = total + phase.clone();
        }
    }
    let radical = ws.gram.nullspace();
    let n = ws.words.len();
    for (t, r) in radical.basis.iter().enumerate() {
        let mut image = vec![S::zero(); n];
        for (w, x) in r.iter().enumerate() {
            if !x.is_zero() {
                let (to, phase) = &tau[w];
                image[*to] = image[*to].clone() + phase.clone() * S::from_q(x);
            }
        }
        // coordinates in the radical basis are the entries at free columns
        let mut rebuilt = vec![S::zero(); n];
        for (s, basis) in radical.basis.iter().enumerate() {
            let c = &image[radical.free[s]];
            if c.is_zero() {
                continue;
            }
            for (w, x) in basis.iter().enumerate() {
                if !x.is_zero() {
                    rebuilt[w] = rebuilt[w].clone() + c.clone() * S::from_q(x);
                }
            }
        }
        if rebuilt != image {
            return Err(Error::RadicalNotPreserved);
        }
        total = total - image[radical.free[t]].clone();
    }
    Ok(total)
}

/// `tr(τ | L(Λ)_λ)` for `λ = Λ − Σ k_i α_i`.
pub fn twining_trace_irr<S: Scalar>(
    oracle: &mut GramOracle<'_>,
    da: &DiagramAutomorphism,
    content: &[i64],
    phases: Option<&[S]>,
) -> Result<S> {
    if !da.is_invariant(oracle.pairings()) {
        return Err(Error::NotSymmetricWeight);
    }
    if !da.is_invariant(content) {
        return Ok(S::zero());
    }
    let ws = oracle.word_space(content)?;
    quotient_trace(da, &ws, phases)
}

/// A relator as its content and a linear combination of words.
type Relator = (Vec<i64>, Vec<(Vec<usize>, Q)>);

/// Words times relators times words: the spanning set of the two-sided ideal
/// generated by the Serre relations, restricted to one content.
fn relators(cd: &CartanDatum) -> Result<Vec<Relator>> {
    let n = cd.rank();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let aij = cd.entry(i, j);
            let m = if cd.is_real(i) {
                let v = Q::one() - aij * Q::from_integer(2.into()) / cd.entry(i, i);
                match crate::rational::to_i64(&v) {
                    Some(m) if m >= 1 => m,
                    _ => return Err(Error::NonIntegralQuotient { i: i + 1, j: j + 1 }),
                }
            } else if aij.is_zero() {
                1
            } else {
                continue;
            };
            // (ad f_i)^m f_j = Σ_t (−1)^t C(m,t) f_i^{m−t} f_j f_i^t
            let mut poly = Vec::new();
            for t in 0..=m {
                let mut w = vec![i; (m - t) as usize];
                w.push(j);
                w.extend(std::iter::repeat_n(i, t as usize));
                let c = Q::from_integer(binomial(m as u64, t as u64));
                poly.push((w, if t % 2 == 0 { c } else { -c }));
            }
            let mut content = vec![0; n];
            content[i] = m;
            content[j] = 1;
            out.push((content, poly));
        }
    }
    Ok(out)
}

/// `dim U(n⁻)` at the given content: words modulo the Serre ideal.
pub fn serre_dimension(cd: &CartanDatum, content: &[i64], cap: usize) -> Result<usize> {
    let words = words_with_content(content, cap)?;
    let index: HashMap<&Vec<usize>, usize> =
        words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let n = cd.rank();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for (rc, poly) in relators(cd)? {
        let rest: Vec<i64> = content.iter().zip(&rc).map(|(a, b)| a - b).collect();
        if rest.iter().any(|&x| x < 0) {
            continue;
        }
        // split the remaining letters between a left and a right word
        let mut left = vec![0i64; n];
        loop {
            let right: Vec<i64> = rest.iter().zip(&left).map(|(a, b)| a - b).collect();
            let lw = words_with_content(&left, cap)?;
            let rw = words_with_content(&right, cap)?;
            for u in &lw {
                for v in &rw {
                    let mut row = vec![Q::zero(); words.len()];
                    for (w, c) in &poly {
                        let mut full = u.clone();
                        full.extend(w);
                        full.extend(v);
                        row[index[&full]] += c;
                    }
                    rows.push(row);
                }
            }
            // next split in mixed radix
            let mut p = 0;
            while p < n {
                if left[p] < rest[p] {
                    left[p] += 1;
                    break;
                }
                left[p] = 0;
                p += 1;
            }
            if p == n {
                break;
            }
        }
    }
    if rows.is_empty() {
        return Ok(words.len());
    }
    Ok(words.len() - Matrix::from_rows(rows).rank())
}

/// Random symmetric anchor `P + q_orbit` with small distinct rationals
/// `q_orbit`.
pub fn generic_anchor<R: Rng>(da: &DiagramAutomorphism, rng: &mut R) -> Vec<Q> {
    let mut anchor = vec![Q::zero(); da.rank()];
    let mut used: Vec<Q> = Vec::new();
    for orbit in da.orbits() {
        let qv = loop {
            let v = Q::new(
                rng.gen_range(1i64..1000).into(),
                rng.gen_range(2i64..50).into(),
            );
            if !v.is_integer() && !used.contains(&v) {
                break v;
            }
        };
        used.push(qv.clone());
        for &j in orbit {
            anchor[j] = Q::from_integer(GENERIC_BASE.into()) + &qv;
        }
    }
    anchor
}

/// Twining traces on Verma modules, taken at random symmetric anchors whose
/// Gram matrix is certified to have full rank `dim U(n⁻)_k` at each content,
/// so the Verma module is irreducible there. The trace does not depend on
/// the anchor.
pub struct VermaOracle<'a, R: Rng> {
    cd: &'a CartanDatum,
    da: &'a DiagramAutomorphism,
    rng: R,
    cap: usize,
    oracle: GramOracle<'a>,
}

impl<'a, R: Rng> VermaOracle<'a, R> {
    pub fn new(cd: &'a CartanDatum, da: &'a DiagramAutomorphism, mut rng: R, cap: usize) -> Self {
        let anchor = generic_anchor(da, &mut rng);
        Self {
            cd,
            da,
            rng,
            cap,
            oracle: GramOracle::with_cap(cd, anchor, cap),
        }
    }

    pub fn anchor(&self) -> &[Q] {
        self.oracle.pairings()
    }

    /// A word space at the current anchor with certified full rank,
    /// redrawing the anchor on rank deficiency.
    pub fn certified_space(&mut self, content: &[i64]) -> Result<Rc<WordSpace>> {
        let dim = serre_dimension(self.cd, content, self.cap)?;
        for attempt in 0..GENERIC_ATTEMPTS {
            if attempt > 0 {
                let anchor = generic_anchor(self.da, &mut self.rng);
                self.oracle = GramOracle::with_cap(self.cd, anchor, self.cap);
            }
            let ws = self.oracle.word_space(content)?;
            if ws.rank() == dim {
                return Ok(ws);
            }
        }
        Err(Error::GenericityFailure(GENERIC_ATTEMPTS))
    }

    pub fn multiplicity(&mut self, content: &[i64]) -> Result<usize> {
        Ok(self.certified_space(content)?.rank())
    }

    pub fn twining_trace<S: Scalar>(&mut self, content: &[i64], phases: Option<&[S]>) -> Result<S> {
        if !self.da.is_invariant(content) {
            return Ok(S::zero());
        }
        let ws = self.certified_space(content)?;
        quotient_trace(self.da, &ws, phases)
    }
}

/// Symmetric exponent vectors (constant on orbits) up to the given height.
pub fn symmetric_contents(da: &DiagramAutomorphism, depth: i64) -> Vec<Vec<i64>> {
    let orbits = da.orbits();
    let mut out = Vec::new();
    let mut per_orbit = vec![0i64; orbits.len()];
    loop {
        let h: i64 = per_orbit
            .iter()
            .zip(orbits)
            .map(|(e, o)| e * o.len() as i64)
            .sum();
        if h <= depth {
            let mut k = vec![0; da.rank()];
            for (e, o) in per_orbit.iter().zip(orbits) {
                for &j in o {
                    k[j] = *e;
                }
            }
            out.push(k);
        }
        let mut p = 0;
        while p < orbits.len() {
            per_orbit[p] += 1;
            let h: i64 = per_orbit
                .iter()
                .zip(orbits)
                .map(|(e, o)| e * o.len() as i64)
                .sum();
            if h <= depth {
                break;
            }
            per_orbit[p] = 0;
            p += 1;
        }
        if p == orbits.len() {
            break;
        }
    }
    out.sort();
    out
}

fn contents_up_to(n: usize, depth: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut k = vec![0i64; n];
    loop {
        out.push(k.clone());
        let mut p = 0;
        while p < n {
            k[p] += 1;
            if height(&k) <= depth {
                break;
            }
            k[p] = 0;
            p += 1;
        }
        if p == n {
            break;
        }
    }
    out.sort();
    out
}

/// Ordinary irreducible character from Gram ranks.
pub fn oracle_irr(
    cd: &CartanDatum,
    pairings: &[Q],
    depth: i64,
    cap: usize,
) -> Result<FormalCharacter> {
    let mut oracle = GramOracle::with_cap(cd, pairings.to_vec(), cap);
    let mut out = FormalCharacter::zero(pairings.to_vec(), depth);
    for k in contents_up_to(cd.rank(), depth) {
        let r = oracle.multiplicity(&k)?;
        out.add_term(k, Q::from_integer(r.into()));
    }
    Ok(out)
}

/// Twining character of `L(Λ)` from oracle traces at every symmetric
/// content up to `depth`.
pub fn oracle_twining_irr(
    fd: &FoldedDatum,
    pairings: &[Q],
    depth: i64,
    cap: usize,
) -> Result<FormalCharacter> {
    let mut oracle = GramOracle::with_cap(fd.cartan(), pairings.to_vec(), cap);
    let mut out = FormalCharacter::zero(pairings.to_vec(), depth);
    for k in symmetric_contents(fd.automorphism(), depth) {
        let t: Q = twining_trace_irr(&mut oracle, fd.automorphism(), &k, None)?;
        out.add_term(k, t);
    }
    Ok(out)
}

/// Twining character of `M(Λ)` from generic-anchor oracle traces, anchored
/// at the given pairings.
pub fn oracle_twining_verma<R: Rng>(
    fd: &FoldedDatum,
    pairings: &[Q],
    depth: i64,
    rng: R,
    cap: usize,
) -> Result<FormalCharacter> {
    let mut verma = VermaOracle::new(fd.cartan(), fd.automorphism(), rng, cap);
    let mut out = FormalCharacter::zero(pairings.to_vec(), depth);
    for k in symmetric_contents(fd.automorphism(), depth) {
        let t: Q = verma.twining_trace(&k, None)?;
        out.add_term(k, t);
    }
    Ok(out)
}
