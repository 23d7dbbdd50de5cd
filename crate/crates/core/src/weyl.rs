//! Reflections, the Coxeter table, the folded generators `w_i` and bounded
//! orbit enumeration.
//!
//! Group elements are never stored; the Weyl group `W` and its folded
//! subgroup `Ŵ` are only seen through their action on weights.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::cartan::CartanDatum;
use crate::error::{Error, Result};
use crate::fold::FoldedDatum;
use crate::linalg::Matrix;
use crate::rational::{to_i64, Q};
use crate::weight::Weight;

pub const DEFAULT_NODE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoxeterOrder {
    Finite(u32),
    Infinite,
}

impl fmt::Display for CoxeterOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoxeterOrder::Finite(m) => write!(f, "{m}"),
            CoxeterOrder::Infinite => write!(f, "inf"),
        }
    }
}

/// Order of `r_i r_j` from `(2a_ij/a_ii)(2a_ji/a_jj)`:
/// 0→2, 1→3, 2→4, 3→6, ≥4→∞.
pub fn coxeter_order_from_matrix(a: &Matrix, i: usize, j: usize) -> Result<CoxeterOrder> {
    for x in [i, j] {
        if !a[(x, x)].is_positive() {
            return Err(Error::NotRealIndex(x + 1));
        }
    }
    if i == j {
        return Ok(CoxeterOrder::Finite(1));
    }
    let two = Q::from_integer(2.into());
    let product = (&two * &a[(i, j)] / &a[(i, i)]) * (&two * &a[(j, i)] / &a[(j, j)]);
    let p = to_i64(&product).ok_or_else(|| Error::NonIntegralShift(i + 1))?;
    Ok(match p {
        0 => CoxeterOrder::Finite(2),
        1 => CoxeterOrder::Finite(3),
        2 => CoxeterOrder::Finite(4),
        3 => CoxeterOrder::Finite(6),
        _ => CoxeterOrder::Infinite,
    })
}

pub fn coxeter_order(cd: &CartanDatum, i: usize, j: usize) -> Result<CoxeterOrder> {
    coxeter_order_from_matrix(cd.matrix(), i, j)
}

/// Coxeter order of `w_i w_j` read off `Ă` (representatives `i`, `j`).
pub fn folded_coxeter_order(fd: &FoldedDatum, i: usize, j: usize) -> Result<CoxeterOrder> {
    let p = fd.breve_position(i).ok_or(Error::NotFoldableIndex(i + 1))?;
    let r = fd.breve_position(j).ok_or(Error::NotFoldableIndex(j + 1))?;
    coxeter_order_from_matrix(&fd.breve_matrix(), p, r).map_err(|e| match e {
        Error::NotRealIndex(_) => Error::NotFoldableIndex(i.max(j) + 1),
        other => other,
    })
}

/// A generator acting by `ν ↦ ν − c·direction` with
/// `c = factor · 2(ν, α_index) / a_index,index`.
#[derive(Debug, Clone)]
struct Generator {
    index: usize,
    factor: i64,
    direction: Vec<i64>,
}

impl Generator {
    fn ordinary(cd: &CartanDatum, i: usize) -> Self {
        let mut direction = vec![0; cd.rank()];
        direction[i] = 1;
        Self {
            index: i,
            factor: 1,
            direction,
        }
    }

    fn folded(fd: &FoldedDatum, i: usize) -> Self {
        Self {
            index: i,
            factor: fd.s(i),
            direction: fd.beta(i),
        }
    }

    fn shift(&self, cd: &CartanDatum, w: &Weight) -> Result<Q> {
        let p = w.pairing_with_simple(cd, self.index);
        Ok(p * Q::from_integer((2 * self.factor).into()) / cd.entry(self.index, self.index))
    }

    fn apply(&self, cd: &CartanDatum, w: &Weight) -> Result<Weight> {
        let c = self.shift(cd, w)?;
        let c = to_i64(&c).ok_or(Error::NonIntegralShift(self.index + 1))?;
        let k = w
            .exponents()
            .iter()
            .zip(&self.direction)
            .map(|(k, d)| k + c * d)
            .collect();
        Ok(w.with_exponents(k))
    }
}

/// `r_i(λ) = λ − (2(λ,α_i)/a_ii) α_i`.
pub fn reflect(cd: &CartanDatum, i: usize, w: &Weight) -> Result<Weight> {
    if !cd.is_real(i) {
        return Err(Error::NotRealIndex(i + 1));
    }
    Generator::ordinary(cd, i).apply(cd, w)
}

/// `w_i(λ) = λ − (2 s_i (λ,α_i)/a_ii) β_i` for symmetric `λ`.
pub fn folded_reflect(fd: &FoldedDatum, i: usize, w: &Weight) -> Result<Weight> {
    if !w.is_symmetric(fd.automorphism()) {
        return Err(Error::NotSymmetricWeight);
    }
    let rep = fd.automorphism().representative(i);
    if !fd.breve_real().contains(&rep) {
        return Err(Error::NotFoldableIndex(i + 1));
    }
    Generator::folded(fd, rep).apply(fd.cartan(), w)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPoint {
    pub weight: Weight,
    /// `ε(w)` (or `ε̂(w)`) of the group element producing this point.
    pub parity: i8,
}

/// Downward breadth-first search from a strictly dominant start: every
/// orbit point with `ht(start − point) ≤ bound` is reached through steps that
/// each lower the weight, so pruning by height is exact.
fn orbit_bfs(
    cd: &CartanDatum,
    gens: &[Generator],
    start: &Weight,
    bound: i64,
    cap: usize,
) -> Result<Vec<OrbitPoint>> {
    for g in gens {
        if !g.shift(cd, start)?.is_positive() {
            return Err(Error::NotStrictlyDominant);
        }
    }
    let base = start.height();
    let mut seen: HashMap<Vec<i64>, i8> = HashMap::new();
    seen.insert(start.exponents().to_vec(), 1);
    let mut queue = VecDeque::from([(start.clone(), 1i8)]);
    while let Some((w, parity)) = queue.pop_front() {
        for g in gens {
            let c = g.shift(cd, &w)?;
            if !c.is_positive() {
                continue;
            }
            let next = g.apply(cd, &w)?;
            if next.height() - base > bound {
                continue;
            }
            match seen.get(next.exponents()) {
                Some(&p) if p != -parity => return Err(Error::SignInconsistent),
                Some(_) => {}
                None => {
                    if seen.len() >= cap {
                        return Err(Error::BudgetExceeded(cap));
                    }
                    seen.insert(next.exponents().to_vec(), -parity);
                    queue.push_back((next, -parity));
                }
            }
        }
    }
    let sorted: BTreeMap<Vec<i64>, i8> = seen.into_iter().collect();
    Ok(sorted
        .into_iter()
        .map(|(k, parity)| OrbitPoint {
            weight: start.with_exponents(k),
            parity,
        })
        .collect())
}

/// `W`-orbit of a weight strictly dominant on the real indices, truncated at
/// height excess `bound`.
pub fn weyl_orbit(
    cd: &CartanDatum,
    start: &Weight,
    bound: i64,
    cap: usize,
) -> Result<Vec<OrbitPoint>> {
    let gens: Vec<Generator> = cd
        .real_indices()
        .iter()
        .map(|&i| Generator::ordinary(cd, i))
        .collect();
    orbit_bfs(cd, &gens, start, bound, cap)
}

/// `Ŵ`-orbit of a symmetric weight strictly dominant on `Ĭ_r`, truncated at
/// height excess `bound`, with `ε̂` of each point.
pub fn hat_orbit(
    fd: &FoldedDatum,
    start: &Weight,
    bound: i64,
    cap: usize,
) -> Result<Vec<OrbitPoint>> {
    if !start.is_symmetric(fd.automorphism()) {
        return Err(Error::NotSymmetricWeight);
    }
    let gens: Vec<Generator> = fd
        .breve_real()
        .into_iter()
        .map(|i| Generator::folded(fd, i))
        .collect();
    orbit_bfs(fd.cartan(), &gens, start, bound, cap)
}

/// Applies the word (rightmost letter first) with folded generators on `G`
/// and with ordinary reflections on the orbit algebra after transport, and
/// checks that the two agree on every test weight.
pub fn theta_check(fd: &FoldedDatum, word: &[usize], weights: &[Weight]) -> Result<bool> {
    for w in weights {
        let mut lhs = w.clone();
        for &i in word.iter().rev() {
            lhs = folded_reflect(fd, i, &lhs)?;
        }
        if word.is_empty() {
            continue;
        }
        let orbit = fd
            .orbit_algebra()
            .ok_or(Error::NotFoldableIndex(word[0] + 1))?;
        let mut t = fd.transport(w)?;
        for &i in word.iter().rev() {
            let p = fd
                .breve_position(fd.automorphism().representative(i))
                .ok_or(Error::NotFoldableIndex(i + 1))?;
            t.weight = reflect(orbit, p, &t.weight)?;
        }
        if fd.transport_back(&t) != lhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Applies `(w_i w_j)^m` to `λ`.
pub fn folded_power(fd: &FoldedDatum, i: usize, j: usize, m: u32, w: &Weight) -> Result<Weight> {
    let mut x = w.clone();
    for _ in 0..m {
        x = folded_reflect(fd, j, &x)?;
        x = folded_reflect(fd, i, &x)?;
    }
    Ok(x)
}

/// Checks `(w_i w_j)^{m̆_ij} = id` on the given weights for every pair in
/// `Ĭ_r` of finite order, and that each `w_i` is an involution. Returns the
/// first failing `(i, j, weight)`.
pub fn coxeter_relations_check(
    fd: &FoldedDatum,
    weights: &[Weight],
) -> Result<Option<(usize, usize, Weight)>> {
    let real = fd.breve_real();
    for &i in &real {
        for &j in &real {
            let m = match folded_coxeter_order(fd, i, j)? {
                CoxeterOrder::Finite(m) => m,
                CoxeterOrder::Infinite => continue,
            };
            for w in weights {
                let image = if i == j {
                    folded_reflect(fd, i, &folded_reflect(fd, i, w)?)?
                } else {
                    folded_power(fd, i, j, m, w)?
                };
                if &image != w {
                    return Ok(Some((i, j, w.clone())));
                }
            }
        }
    }
    Ok(None)
}

/// Random symmetric weights whose exponents are divisible by the scale
/// factors and vanish off the admissible orbits, so they can be transported.
pub fn random_symmetric_weights<R: rand::Rng>(
    fd: &FoldedDatum,
    count: usize,
    rng: &mut R,
) -> Vec<Weight> {
    let da = fd.automorphism();
    let n = fd.cartan().rank();
    (0..count)
        .map(|_| {
            let mut anchor = vec![Q::zero(); n];
            let mut k = vec![0i64; n];
            for orbit in da.orbits() {
                let rep = orbit[0];
                let p = Q::new(
                    rng.gen_range(-12i64..=12).into(),
                    rng.gen_range(1i64..=4).into(),
                );
                let p = {
                    // keep reflections integral: pairings in (a_ii/2) Z on real orbits
                    let aii = fd.cartan().entry(rep, rep);
                    if aii.is_positive() {
                        aii * Q::from_integer(rng.gen_range(-6i64..=6).into())
                            / Q::from_integer(2.into())
                    } else {
                        p
                    }
                };
                let e = if fd.is_admissible(rep) {
                    fd.s(rep) * rng.gen_range(-3i64..=3)
                } else {
                    0
                };
                for &j in orbit {
                    anchor[j] = p.clone();
                    k[j] = e;
                }
            }
            Weight::new(anchor, k).expect("lengths agree")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::DiagramAutomorphism;
    use crate::rational::q;

    fn fd(rows: &[&[i64]], image: &[usize]) -> FoldedDatum {
        let cd = CartanDatum::from_ints(rows).unwrap();
        let da = DiagramAutomorphism::validate_one_based(&cd, image).unwrap();
        FoldedDatum::new(&cd, &da).unwrap()
    }

    const A2: &[&[i64]] = &[&[2, -1], &[-1, 2]];
    const A3: &[&[i64]] = &[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]];

    #[test]
    fn reflect_simple_root() {
        let cd = CartanDatum::from_ints(A2).unwrap();
        let a1 = Weight::simple_root(2, 0);
        assert_eq!(reflect(&cd, 0, &a1).unwrap().exponents(), &[1, 0]);
    }

    #[test]
    fn reflect_fixes_hyperplane() {
        let cd = CartanDatum::from_ints(A2).unwrap();
        let w = Weight::anchored(vec![q(0), q(1)]);
        assert_eq!(reflect(&cd, 0, &w).unwrap(), w);
        let lam = Weight::anchored(vec![q(1), q(1)]);
        assert_eq!(reflect(&cd, 0, &lam).unwrap().exponents(), &[1, 0]);
    }

    #[test]
    fn reflect_rejects_imaginary() {
        let cd = CartanDatum::from_ints(&[&[0, -1], &[-1, 2]]).unwrap();
        assert_eq!(
            reflect(&cd, 0, &Weight::rho(&cd)),
            Err(Error::NotRealIndex(1))
        );
    }

    #[test]
    fn coxeter_table() {
        let cd = CartanDatum::from_ints(&[&[2, 0], &[0, 2]]).unwrap();
        assert_eq!(coxeter_order(&cd, 0, 1).unwrap(), CoxeterOrder::Finite(2));
        let cd = CartanDatum::from_ints(A2).unwrap();
        assert_eq!(coxeter_order(&cd, 0, 1).unwrap(), CoxeterOrder::Finite(3));
        let f = fd(A3, &[3, 2, 1]);
        assert_eq!(
            folded_coxeter_order(&f, 0, 1).unwrap(),
            CoxeterOrder::Finite(4)
        );
        let cd = CartanDatum::from_ints(&[&[2, -2], &[-2, 2]]).unwrap();
        assert_eq!(coxeter_order(&cd, 0, 1).unwrap(), CoxeterOrder::Infinite);
    }

    #[test]
    fn folded_reflect_rho() {
        let f = fd(A2, &[2, 1]);
        let rho = Weight::rho(f.cartan());
        assert_eq!(folded_reflect(&f, 0, &rho).unwrap().exponents(), &[2, 2]);
        let f = fd(A3, &[3, 2, 1]);
        let rho = Weight::rho(f.cartan());
        assert_eq!(folded_reflect(&f, 0, &rho).unwrap().exponents(), &[1, 0, 1]);
    }

    #[test]
    fn folded_reflect_fixed_weight() {
        let f = fd(A3, &[3, 2, 1]);
        let w = Weight::anchored(vec![q(0), q(1), q(0)]);
        assert_eq!(folded_reflect(&f, 0, &w).unwrap(), w);
    }

    #[test]
    fn hat_orbit_examples() {
        let f = fd(A2, &[2, 1]);
        let rho = Weight::rho(f.cartan());
        let o = hat_orbit(&f, &rho, 0, DEFAULT_NODE_CAP).unwrap();
        assert_eq!(o.len(), 1);
        let o = hat_orbit(&f, &rho, 4, DEFAULT_NODE_CAP).unwrap();
        let pts: Vec<(Vec<i64>, i8)> = o
            .iter()
            .map(|p| (p.weight.exponents().to_vec(), p.parity))
            .collect();
        assert_eq!(pts, vec![(vec![0, 0], 1), (vec![2, 2], -1)]);

        let f = fd(A3, &[3, 2, 1]);
        let rho = Weight::rho(f.cartan());
        let o = hat_orbit(&f, &rho, 10, DEFAULT_NODE_CAP).unwrap();
        assert_eq!(o.len(), 8);
        let sum: i32 = o.iter().map(|p| p.parity as i32).sum();
        assert_eq!(sum, 0);
    }

    #[test]
    fn theta_examples() {
        let f = fd(A2, &[2, 1]);
        let rho = Weight::rho(f.cartan());
        assert!(theta_check(&f, &[], std::slice::from_ref(&rho)).unwrap());
        assert!(theta_check(&f, &[0], &[rho]).unwrap());
    }
}
