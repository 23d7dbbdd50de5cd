//! Diagram automorphisms: finite-order permutations of the index set that
//! preserve the Cartan matrix.

use num_integer::Integer;

use crate::cartan::CartanDatum;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramAutomorphism {
    image: Vec<usize>,
    inverse: Vec<usize>,
    order: usize,
    /// Each orbit starts at its minimum and follows the permutation.
    orbits: Vec<Vec<usize>>,
    orbit_of: Vec<usize>,
}

impl DiagramAutomorphism {
    /// `image[i]` is the 0-based image of index `i`.
    pub fn validate(cd: &CartanDatum, image: Vec<usize>) -> Result<Self> {
        let n = cd.rank();
        let da = Self::from_permutation(image, n)?;
        for i in 0..n {
            for j in 0..n {
                if cd.entry(da.image[i], da.image[j]) != cd.entry(i, j) {
                    return Err(Error::MatrixNotPreserved { i: i + 1, j: j + 1 });
                }
            }
        }
        Ok(da)
    }

    /// Same as [`validate`](Self::validate) with 1-based images.
    pub fn validate_one_based(cd: &CartanDatum, image: &[usize]) -> Result<Self> {
        if image.contains(&0) {
            return Err(Error::NotPermutation { n: cd.rank() });
        }
        Self::validate(cd, image.iter().map(|&x| x - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_permutation((0..n).collect(), n).expect("identity is a permutation")
    }

    fn from_permutation(image: Vec<usize>, n: usize) -> Result<Self> {
        if image.len() != n {
            return Err(Error::NotPermutation { n });
        }
        let mut inverse = vec![usize::MAX; n];
        for (i, &j) in image.iter().enumerate() {
            if j >= n || inverse[j] != usize::MAX {
                return Err(Error::NotPermutation { n });
            }
            inverse[j] = i;
        }
        let mut orbit_of = vec![usize::MAX; n];
        let mut orbits = Vec::new();
        for start in 0..n {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let mut orbit = vec![start];
            orbit_of[start] = orbits.len();
            let mut j = image[start];
            while j != start {
                orbit_of[j] = orbits.len();
                orbit.push(j);
                j = image[j];
            }
            orbits.push(orbit);
        }
        let order = orbits.iter().fold(1usize, |acc, o| acc.lcm(&o.len()));
        Ok(Self {
            image,
            inverse,
            order,
            orbits,
            orbit_of,
        })
    }

    pub fn rank(&self) -> usize {
        self.image.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn apply_inverse(&self, i: usize) -> usize {
        self.inverse[i]
    }

    /// `ω̇^l i`, for any integer `l`.
    pub fn power(&self, i: usize, l: i64) -> usize {
        let orbit = &self.orbits[self.orbit_of[i]];
        let pos = orbit.iter().position(|&x| x == i).unwrap() as i64;
        let len = orbit.len() as i64;
        orbit[(pos + l).rem_euclid(len) as usize]
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn orbit(&self, i: usize) -> &[usize] {
        &self.orbits[self.orbit_of[i]]
    }

    pub fn orbit_len(&self, i: usize) -> usize {
        self.orbit(i).len()
    }

    pub fn representative(&self, i: usize) -> usize {
        self.orbit(i)[0]
    }

    /// Orbit representatives (orbit minima), increasing.
    pub fn representatives(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o[0]).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.order == 1
    }

    /// True when `v` is constant on every orbit.
    pub fn is_invariant<T: PartialEq>(&self, v: &[T]) -> bool {
        v.len() == self.rank() && (0..v.len()).all(|i| v[self.image[i]] == v[i])
    }

    /// 0-based image vector.
    pub fn image(&self) -> &[usize] {
        &self.image
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3() -> CartanDatum {
        CartanDatum::from_ints(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]).unwrap()
    }

    #[test]
    fn a3_swap_orbits() {
        let da = DiagramAutomorphism::validate_one_based(&a3(), &[3, 2, 1]).unwrap();
        assert_eq!(da.orbits(), &[vec![0, 2], vec![1]]);
        assert_eq!(da.order(), 2);
        assert_eq!(da.representatives(), vec![0, 1]);
    }

    #[test]
    fn identity_has_singletons() {
        let da = DiagramAutomorphism::validate(&a3(), vec![0, 1, 2]).unwrap();
        assert_eq!(da.order(), 1);
        assert!(da.orbits().iter().all(|o| o.len() == 1));
    }

    #[test]
    fn rejects_non_invariant() {
        let cd = CartanDatum::from_ints(&[&[4, -2], &[-2, 2]]).unwrap();
        assert_eq!(
            DiagramAutomorphism::validate_one_based(&cd, &[2, 1]).unwrap_err(),
            Error::MatrixNotPreserved { i: 1, j: 1 }
        );
    }

    #[test]
    fn rejects_non_permutation() {
        assert_eq!(
            DiagramAutomorphism::validate_one_based(&a3(), &[1, 1, 2]).unwrap_err(),
            Error::NotPermutation { n: 3 }
        );
    }

    #[test]
    fn triality_power() {
        let d4 = CartanDatum::from_ints(&[
            &[2, -1, 0, 0],
            &[-1, 2, -1, -1],
            &[0, -1, 2, 0],
            &[0, -1, 0, 2],
        ])
        .unwrap();
        let da = DiagramAutomorphism::validate_one_based(&d4, &[3, 2, 4, 1]).unwrap();
        assert_eq!(da.order(), 3);
        assert_eq!(da.power(0, 1), 2);
        assert_eq!(da.power(0, -1), 3);
        assert_eq!(da.apply_inverse(0), 3);
    }
}
