//! Weights stored as an anchor (known only through its pairings with the
//! simple roots) minus an integer combination of simple roots.

use num_traits::Zero;

use crate::automorphism::DiagramAutomorphism;
use crate::cartan::CartanDatum;
use crate::error::{Error, Result};
use crate::rational::Q;

/// `λ = anchor − Σ_j k_j α_j`.
///
/// Exponents may go negative inside reflection chains; series code only ever
/// stores nonnegative ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    anchor: Vec<Q>,
    anchor_is_zero: bool,
    k: Vec<i64>,
}

impl Weight {
    pub fn new(anchor: Vec<Q>, k: Vec<i64>) -> Result<Self> {
        if anchor.len() != k.len() {
            return Err(Error::LengthMismatch {
                expected: anchor.len(),
                got: k.len(),
            });
        }
        Ok(Self {
            anchor,
            anchor_is_zero: false,
            k,
        })
    }

    pub fn anchored(anchor: Vec<Q>) -> Self {
        let n = anchor.len();
        Self {
            anchor,
            anchor_is_zero: false,
            k: vec![0; n],
        }
    }

    /// The root-lattice element `−Σ k_j α_j` (anchor exactly zero).
    pub fn root(k: Vec<i64>) -> Self {
        Self {
            anchor: vec![Q::zero(); k.len()],
            anchor_is_zero: true,
            k,
        }
    }

    /// The simple root `α_i`.
    pub fn simple_root(n: usize, i: usize) -> Self {
        let mut k = vec![0; n];
        k[i] = -1;
        Self::root(k)
    }

    pub fn rho(cd: &CartanDatum) -> Self {
        Self::anchored(cd.rho_pairings())
    }

    /// Fundamental weight `Λ_i` with `(Λ_i, α_j) = δ_ij`.
    pub fn fundamental(n: usize, i: usize) -> Self {
        let mut p = vec![Q::zero(); n];
        p[i] = Q::from_integer(1.into());
        Self::anchored(p)
    }

    pub fn anchor(&self) -> &[Q] {
        &self.anchor
    }

    pub fn exponents(&self) -> &[i64] {
        &self.k
    }

    pub fn rank(&self) -> usize {
        self.k.len()
    }

    pub fn with_exponents(&self, k: Vec<i64>) -> Self {
        assert_eq!(k.len(), self.k.len());
        Self {
            anchor: self.anchor.clone(),
            anchor_is_zero: self.anchor_is_zero,
            k,
        }
    }

    /// `(λ, α_j) = p_j − Σ_i k_i a_ij`.
    pub fn pairing_with_simple(&self, cd: &CartanDatum, j: usize) -> Q {
        let mut v = self.anchor[j].clone();
        for (i, &ki) in self.k.iter().enumerate() {
            if ki != 0 {
                v -= cd.entry(i, j) * Q::from_integer(ki.into());
            }
        }
        v
    }

    pub fn pairings(&self, cd: &CartanDatum) -> Vec<Q> {
        (0..self.rank())
            .map(|j| self.pairing_with_simple(cd, j))
            .collect()
    }

    /// `ht(anchor − λ) = Σ k_i`.
    pub fn height(&self) -> i64 {
        self.k.iter().sum()
    }

    /// Symmetric weights: both anchor pairings and exponents are constant on
    /// orbits of the diagram automorphism.
    pub fn is_symmetric(&self, da: &DiagramAutomorphism) -> bool {
        da.is_invariant(&self.anchor) && da.is_invariant(&self.k)
    }

    /// `|λ+ρ|² − |Λ+ρ|²` with `Λ` the anchor; this needs only pairings.
    pub fn norm_shift_difference(&self, cd: &CartanDatum) -> Q {
        let two = Q::from_integer(2.into());
        let rho = cd.rho_pairings();
        let mut linear = Q::zero();
        for (i, &ki) in self.k.iter().enumerate() {
            if ki != 0 {
                linear += (&self.anchor[i] + &rho[i]) * Q::from_integer(ki.into());
            }
        }
        cd.form(&self.k, &self.k) - two * linear
    }
}

/// `(x, y)`, available when one of the two lies in the root lattice.
pub fn bilinear_pairing(cd: &CartanDatum, x: &Weight, y: &Weight) -> Result<Q> {
    let (root, other) = if x.anchor_is_zero {
        (x, y)
    } else if y.anchor_is_zero {
        (y, x)
    } else {
        return Err(Error::InsufficientData);
    };
    let mut acc = Q::zero();
    for (i, &ki) in root.k.iter().enumerate() {
        if ki != 0 {
            acc -= other.pairing_with_simple(cd, i) * Q::from_integer(ki.into());
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn a2() -> CartanDatum {
        CartanDatum::from_ints(&[&[2, -1], &[-1, 2]]).unwrap()
    }

    #[test]
    fn simple_root_pairing() {
        let cd = a2();
        let a1 = Weight::simple_root(2, 0);
        let a2w = Weight::simple_root(2, 1);
        assert_eq!(bilinear_pairing(&cd, &a1, &a2w).unwrap(), q(-1));
    }

    #[test]
    fn rho_pairs_to_half_norm() {
        let cd = CartanDatum::from_ints(&[&[0, 0, -1], &[0, 0, -1], &[-1, -1, 2]]).unwrap();
        let rho = Weight::rho(&cd);
        for i in 0..3 {
            let a = Weight::simple_root(3, i);
            let expect = cd.entry(i, i) / q(2);
            assert_eq!(bilinear_pairing(&cd, &rho, &a).unwrap(), expect);
        }
    }

    #[test]
    fn anchor_anchor_is_unavailable() {
        let cd = a2();
        let r = Weight::rho(&cd);
        assert_eq!(bilinear_pairing(&cd, &r, &r), Err(Error::InsufficientData));
    }

    #[test]
    fn norm_difference_at_anchor_is_zero() {
        let cd = a2();
        let w = Weight::anchored(vec![q(1), q(1)]);
        assert_eq!(w.norm_shift_difference(&cd), q(0));
    }

    #[test]
    fn norm_difference_matches_expansion() {
        // λ = Λ − α1: |λ+ρ|² − |Λ+ρ|² = (α1,α1) − 2(Λ+ρ, α1) = 2 − 2·2
        let cd = a2();
        let w = Weight::new(vec![q(1), q(1)], vec![1, 0]).unwrap();
        assert_eq!(w.norm_shift_difference(&cd), q(-2));
    }
}
