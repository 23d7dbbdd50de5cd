//! Folding a Cartan matrix along a diagram automorphism: orbit
//! representatives, the admissible subset, the scale factors `s_i`, the
//! matrices `Â` and `Ă`, and weight transport to the orbit Lie algebra.

use num_traits::{One, Signed, Zero};

use crate::automorphism::DiagramAutomorphism;
use crate::cartan::{check_gkm_conditions, CartanDatum};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{to_i64, Q};
use crate::weight::Weight;

#[derive(Debug, Clone)]
pub struct FoldedDatum {
    cd: CartanDatum,
    da: DiagramAutomorphism,
    hat_i: Vec<usize>,
    breve_i: Vec<usize>,
    s: Vec<i64>,
    hat_a: Matrix,
    hat_d: Vec<Q>,
    orbit_algebra: Option<CartanDatum>,
}

/// A weight of the orbit algebra together with the pairings against the
/// representatives outside the admissible set, which the orbit algebra does
/// not see but which are needed to invert the transport.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitWeight {
    pub weight: Weight,
    pub detached: Vec<(usize, Q)>,
}

impl FoldedDatum {
    pub fn new(cd: &CartanDatum, da: &DiagramAutomorphism) -> Result<Self> {
        if cd.rank() != da.rank() {
            return Err(Error::LengthMismatch {
                expected: cd.rank(),
                got: da.rank(),
            });
        }
        let hat_i = da.representatives();
        let mut breve_i = Vec::new();
        let mut s = Vec::with_capacity(hat_i.len());
        for &i in &hat_i {
            let sum = orbit_sum(cd, da, i, i);
            let aii = cd.entry(i, i);
            let admissible = sum.is_positive() || sum == *aii;
            let si = if admissible && !aii.is_zero() {
                let v = aii / &sum;
                to_i64(&v).ok_or_else(|| {
                    Error::Invalid(format!("non-integral scale factor at index {}", i + 1))
                })?
            } else {
                1
            };
            if admissible {
                breve_i.push(i);
            }
            s.push(si);
        }
        let m = hat_i.len();
        let mut hat_a = Matrix::zeros(m, m);
        for (p, &i) in hat_i.iter().enumerate() {
            for (r, &j) in hat_i.iter().enumerate() {
                hat_a[(p, r)] = orbit_sum(cd, da, i, j) * Q::from_integer(s[r].into());
            }
        }
        let hat_d: Vec<Q> = hat_i
            .iter()
            .zip(&s)
            .map(|(&i, &si)| Q::from_integer(((da.orbit_len(i) as i64) * si).into()))
            .collect();

        let fd_partial = Self {
            cd: cd.clone(),
            da: da.clone(),
            hat_i,
            breve_i,
            s,
            hat_a,
            hat_d,
            orbit_algebra: None,
        };
        fd_partial.check_hat_matrix()?;
        let orbit_algebra = if fd_partial.breve_i.is_empty() {
            None
        } else {
            Some(CartanDatum::validate(fd_partial.symmetrized_breve_rows())?)
        };
        Ok(Self {
            orbit_algebra,
            ..fd_partial
        })
    }

    /// Conditions (i)-(iii) on `Â` and symmetry of `D̂Â`.
    fn check_hat_matrix(&self) -> Result<()> {
        check_gkm_conditions(&self.hat_a)?;
        let m = self.hat_i.len();
        for p in 0..m {
            for r in 0..p {
                if &self.hat_d[p] * &self.hat_a[(p, r)] != &self.hat_d[r] * &self.hat_a[(r, p)] {
                    return Err(Error::Invalid(format!(
                        "D̂Â is not symmetric at ({}, {})",
                        self.hat_i[p] + 1,
                        self.hat_i[r] + 1
                    )));
                }
            }
        }
        Ok(())
    }

    fn symmetrized_breve_rows(&self) -> Vec<Vec<Q>> {
        let pos: Vec<usize> = self.breve_i.iter().map(|&i| self.hat_pos(i)).collect();
        pos.iter()
            .map(|&p| {
                pos.iter()
                    .map(|&r| &self.hat_d[p] * &self.hat_a[(p, r)])
                    .collect()
            })
            .collect()
    }

    fn hat_pos(&self, rep: usize) -> usize {
        self.hat_i
            .binary_search(&rep)
            .expect("not a representative")
    }

    pub fn cartan(&self) -> &CartanDatum {
        &self.cd
    }

    pub fn automorphism(&self) -> &DiagramAutomorphism {
        &self.da
    }

    /// Orbit representatives `Î` (0-based, increasing).
    pub fn hat_indices(&self) -> &[usize] {
        &self.hat_i
    }

    /// The admissible representatives `Ĭ`.
    pub fn breve_indices(&self) -> &[usize] {
        &self.breve_i
    }

    /// Position of a representative inside `Ĭ`.
    pub fn breve_position(&self, rep: usize) -> Option<usize> {
        self.breve_i.iter().position(|&x| x == rep)
    }

    pub fn is_admissible(&self, i: usize) -> bool {
        self.breve_position(self.da.representative(i)).is_some()
    }

    /// Scale factor of the orbit containing `i`.
    pub fn s(&self, i: usize) -> i64 {
        self.s[self.hat_pos(self.da.representative(i))]
    }

    /// Scale factors over `Î`.
    pub fn s_values(&self) -> &[i64] {
        &self.s
    }

    pub fn hat_matrix(&self) -> &Matrix {
        &self.hat_a
    }

    /// `D̂ = diag(N_i s_i)` over `Î`.
    pub fn hat_symmetrizer(&self) -> &[Q] {
        &self.hat_d
    }

    /// `D̂` restricted to `Ĭ`.
    pub fn breve_symmetrizer(&self) -> Vec<Q> {
        self.breve_i
            .iter()
            .map(|&i| self.hat_d[self.hat_pos(i)].clone())
            .collect()
    }

    /// The orbit Cartan matrix `Ă` over `Ĭ` (not symmetric in general).
    pub fn breve_matrix(&self) -> Matrix {
        let pos: Vec<usize> = self.breve_i.iter().map(|&i| self.hat_pos(i)).collect();
        Matrix::from_rows(
            pos.iter()
                .map(|&p| pos.iter().map(|&r| self.hat_a[(p, r)].clone()).collect())
                .collect(),
        )
    }

    /// The orbit Lie algebra in symmetric normalization `D̂Ă`, or `None` when
    /// `Ĭ` is empty.
    pub fn orbit_algebra(&self) -> Option<&CartanDatum> {
        self.orbit_algebra.as_ref()
    }

    /// Representatives in `Ĭ` that are real in `Ă`.
    pub fn breve_real(&self) -> Vec<usize> {
        self.breve_i
            .iter()
            .copied()
            .filter(|&i| self.hat_a[(self.hat_pos(i), self.hat_pos(i))].is_positive())
            .collect()
    }

    /// `β_i`: indicator of the orbit of `i` as root-lattice coordinates.
    pub fn beta(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.cd.rank()];
        for &j in self.da.orbit(i) {
            v[j] = 1;
        }
        v
    }

    /// Anchor pairings over the orbit algebra: `(Λ̆, α̂_i) = s_i N_i (Λ, α_i)`.
    pub fn transport_anchor(&self, anchor: &[Q]) -> Vec<Q> {
        self.breve_i
            .iter()
            .map(|&i| &anchor[i] * &self.hat_d[self.hat_pos(i)])
            .collect()
    }

    /// Orbit exponents `m_i = k_i / s_i`; fails off the image.
    pub fn transport_exponents(&self, k: &[i64]) -> Result<Vec<i64>> {
        if !self.da.is_invariant(k) {
            return Err(Error::NotSymmetricWeight);
        }
        for (p, &i) in self.hat_i.iter().enumerate() {
            let admissible = self.breve_position(i).is_some();
            if !admissible && k[i] != 0 {
                return Err(Error::NotInImage(format!(
                    "orbit of {} is outside the admissible set",
                    i + 1
                )));
            }
            if admissible && k[i] % self.s[p] != 0 {
                return Err(Error::NotInImage(format!(
                    "exponent {} at {} is not divisible by {}",
                    k[i],
                    i + 1,
                    self.s[p]
                )));
            }
        }
        Ok(self
            .breve_i
            .iter()
            .map(|&i| k[i] / self.s[self.hat_pos(i)])
            .collect())
    }

    /// Inverse of [`transport_exponents`](Self::transport_exponents):
    /// `k_{ω̇^l i} = s_i m_i`.
    pub fn pullback_exponents(&self, m: &[i64]) -> Vec<i64> {
        let mut k = vec![0; self.cd.rank()];
        for (&i, &mi) in self.breve_i.iter().zip(m) {
            let si = self.s[self.hat_pos(i)];
            for &j in self.da.orbit(i) {
                k[j] = si * mi;
            }
        }
        k
    }

    /// Height over `G` of the pullback of orbit exponents.
    pub fn pullback_height(&self, m: &[i64]) -> i64 {
        self.breve_i
            .iter()
            .zip(m)
            .map(|(&i, &mi)| mi * self.s[self.hat_pos(i)] * self.da.orbit_len(i) as i64)
            .sum()
    }

    pub fn transport(&self, w: &Weight) -> Result<OrbitWeight> {
        if !w.is_symmetric(&self.da) {
            return Err(Error::NotSymmetricWeight);
        }
        let m = self.transport_exponents(w.exponents())?;
        let anchor = self.transport_anchor(w.anchor());
        let detached = self
            .hat_i
            .iter()
            .enumerate()
            .filter(|(_, i)| self.breve_position(**i).is_none())
            .map(|(p, &i)| (i, &w.anchor()[i] * &self.hat_d[p]))
            .collect();
        Ok(OrbitWeight {
            weight: Weight::new(anchor, m)?,
            detached,
        })
    }

    pub fn transport_back(&self, ow: &OrbitWeight) -> Weight {
        let n = self.cd.rank();
        let mut anchor = vec![Q::zero(); n];
        for (&i, p) in self.breve_i.iter().zip(ow.weight.anchor()) {
            let d = &self.hat_d[self.hat_pos(i)];
            for &j in self.da.orbit(i) {
                anchor[j] = p / d;
            }
        }
        for (i, p) in &ow.detached {
            let d = &self.hat_d[self.hat_pos(*i)];
            for &j in self.da.orbit(*i) {
                anchor[j] = p / d;
            }
        }
        let k = self.pullback_exponents(ow.weight.exponents());
        Weight::new(anchor, k).expect("lengths agree")
    }

    /// `(P*⁻¹ρ, α̂_i) − (α̂_i, α̂_i)/2` for every representative in `Î`, in
    /// the normalization where `(α̂_i, α̂_j) = (D̂Â)_ij`. Zero exactly on `Ĭ`.
    pub fn rho_transport_defects(&self) -> Vec<(usize, Q)> {
        let rho = self.cd.rho_pairings();
        let half = Q::new(1.into(), 2.into());
        self.hat_i
            .iter()
            .enumerate()
            .map(|(p, &i)| {
                let transported = &rho[i] * &self.hat_d[p];
                let norm = &self.hat_d[p] * &self.hat_a[(p, p)];
                (i, transported - norm * &half)
            })
            .collect()
    }
}

/// `Σ_{l=0}^{N_j−1} a_{i, ω̇^l j}`.
pub fn orbit_sum(cd: &CartanDatum, da: &DiagramAutomorphism, i: usize, j: usize) -> Q {
    da.orbit(j)
        .iter()
        .fold(Q::zero(), |acc, &l| acc + cd.entry(i, l))
}

/// Structure of an `s_i = 2` orbit: `N_i` even and exactly one
/// `l ∈ 1..N_i` with `a_{i, ω̇^l i} ≠ 0`, namely `N_i/2`, where
/// `2 a_{i, ω̇^l i} / a_ii = −1`.
pub fn check_s2_structure(fd: &FoldedDatum, i: usize) -> bool {
    let da = fd.automorphism();
    let cd = fd.cartan();
    let n = da.orbit_len(i);
    if !n.is_multiple_of(2) {
        return false;
    }
    let linked: Vec<i64> = (1..n as i64)
        .filter(|&l| !cd.entry(i, da.power(i, l)).is_zero())
        .collect();
    linked == vec![n as i64 / 2]
        && cd.entry(i, da.power(i, n as i64 / 2)) * Q::from_integer(2.into()) / cd.entry(i, i)
            == -Q::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn folded(rows: &[&[i64]], image: &[usize]) -> FoldedDatum {
        let cd = CartanDatum::from_ints(rows).unwrap();
        let da = DiagramAutomorphism::validate_one_based(&cd, image).unwrap();
        FoldedDatum::new(&cd, &da).unwrap()
    }

    fn ints(m: &Matrix) -> Vec<Vec<i64>> {
        (0..m.rows())
            .map(|i| m.row(i).iter().map(|x| to_i64(x).unwrap()).collect())
            .collect()
    }

    #[test]
    fn a3_swap() {
        let fd = folded(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]], &[3, 2, 1]);
        assert_eq!(fd.breve_indices(), &[0, 1]);
        assert_eq!(fd.s_values(), &[1, 1]);
        assert_eq!(ints(&fd.breve_matrix()), vec![vec![2, -1], vec![-2, 2]]);
    }

    #[test]
    fn a2_swap() {
        let fd = folded(&[&[2, -1], &[-1, 2]], &[2, 1]);
        assert_eq!(fd.breve_indices(), &[0]);
        assert_eq!(fd.s_values(), &[2]);
        assert_eq!(ints(&fd.breve_matrix()), vec![vec![2]]);
        assert!(check_s2_structure(&fd, 0));
    }

    #[test]
    fn affine_a1_swap_is_empty() {
        let fd = folded(&[&[2, -2], &[-2, 2]], &[2, 1]);
        assert!(fd.breve_indices().is_empty());
        assert!(fd.orbit_algebra().is_none());
    }

    #[test]
    fn d4_triality() {
        let fd = folded(
            &[
                &[2, -1, 0, 0],
                &[-1, 2, -1, -1],
                &[0, -1, 2, 0],
                &[0, -1, 0, 2],
            ],
            &[3, 2, 4, 1],
        );
        assert_eq!(ints(&fd.breve_matrix()), vec![vec![2, -1], vec![-3, 2]]);
        assert_eq!(fd.breve_symmetrizer(), vec![q(3), q(1)]);
    }

    #[test]
    fn identity_fold_is_trivial() {
        let rows: &[&[i64]] = &[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]];
        let fd = folded(rows, &[1, 2, 3]);
        assert_eq!(fd.breve_indices(), &[0, 1, 2]);
        assert!(fd.s_values().iter().all(|&s| s == 1));
        assert_eq!(fd.orbit_algebra().unwrap(), fd.cartan());
    }

    #[test]
    fn transport_a2() {
        let fd = folded(&[&[2, -1], &[-1, 2]], &[2, 1]);
        let lam = Weight::anchored(vec![q(1), q(1)]);
        let t = fd.transport(&lam).unwrap();
        assert_eq!(t.weight.anchor(), &[q(4)]);
        assert_eq!(t.weight.exponents(), &[0]);
        let bad = Weight::new(vec![q(1), q(1)], vec![1, 1]).unwrap();
        assert!(matches!(fd.transport(&bad), Err(Error::NotInImage(_))));
        let ok = Weight::new(vec![q(1), q(1)], vec![2, 2]).unwrap();
        let t = fd.transport(&ok).unwrap();
        assert_eq!(t.weight.exponents(), &[1]);
        assert_eq!(fd.transport_back(&t), ok);
    }

    #[test]
    fn transport_rejects_asymmetric() {
        let fd = folded(&[&[2, -1], &[-1, 2]], &[2, 1]);
        let w = Weight::anchored(vec![q(1), q(2)]);
        assert_eq!(fd.transport(&w), Err(Error::NotSymmetricWeight));
    }

    #[test]
    fn rho_defect_fails_off_admissible_set() {
        let fd = folded(&[&[2, -2], &[-2, 2]], &[2, 1]);
        let defects = fd.rho_transport_defects();
        assert_eq!(defects.len(), 1);
        assert_ne!(defects[0].1, q(0));

        let fd = folded(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]], &[3, 2, 1]);
        assert!(fd.rho_transport_defects().iter().all(|(_, d)| d.is_zero()));
    }
}
