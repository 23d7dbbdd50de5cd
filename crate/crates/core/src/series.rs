//! Depth-truncated formal characters `Σ_k c_k e(anchor − Σ k_i α_i)`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalCharacter {
    anchor: Vec<Q>,
    depth: i64,
    coeffs: BTreeMap<Vec<i64>, Q>,
}

pub fn height(k: &[i64]) -> i64 {
    k.iter().sum()
}

impl FormalCharacter {
    pub fn zero(anchor: Vec<Q>, depth: i64) -> Self {
        Self {
            anchor,
            depth,
            coeffs: BTreeMap::new(),
        }
    }

    /// `e(anchor)`.
    pub fn one(anchor: Vec<Q>, depth: i64) -> Self {
        let n = anchor.len();
        let mut s = Self::zero(anchor, depth);
        s.coeffs.insert(vec![0; n], Q::one());
        s
    }

    pub fn from_terms(
        anchor: Vec<Q>,
        depth: i64,
        terms: impl IntoIterator<Item = (Vec<i64>, Q)>,
    ) -> Self {
        let mut s = Self::zero(anchor, depth);
        for (k, c) in terms {
            s.add_term(k, c);
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.anchor.len()
    }

    pub fn depth(&self) -> i64 {
        self.depth
    }

    pub fn anchor(&self) -> &[Q] {
        &self.anchor
    }

    pub fn with_anchor(mut self, anchor: Vec<Q>) -> Self {
        assert_eq!(anchor.len(), self.anchor.len());
        self.anchor = anchor;
        self
    }

    /// Adds `c` at `k`; ignores keys beyond the depth and drops zeros.
    pub fn add_term(&mut self, k: Vec<i64>, c: Q) {
        debug_assert_eq!(k.len(), self.anchor.len());
        debug_assert!(k.iter().all(|&x| x >= 0), "negative exponent {k:?}");
        if height(&k) > self.depth || c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(k.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeff(&self, k: &[i64]) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn set_coeff(&mut self, k: Vec<i64>, c: Q) {
        if c.is_zero() {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, c);
        }
    }

    /// Nonzero terms in lexicographic key order.
    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, &Q)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    pub fn truncate(&self, depth: i64) -> Self {
        Self {
            anchor: self.anchor.clone(),
            depth: depth.min(self.depth),
            coeffs: self
                .coeffs
                .iter()
                .filter(|(k, _)| height(k) <= depth)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.depth != other.depth || self.rank() != other.rank() {
            return Err(Error::DepthMismatch);
        }
        Ok(())
    }

    /// Truncated product; anchors add.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let anchor = self
            .anchor
            .iter()
            .zip(&other.anchor)
            .map(|(a, b)| a + b)
            .collect();
        let mut out: BTreeMap<Vec<i64>, Q> = BTreeMap::new();
        for (ka, ca) in &self.coeffs {
            let ha = height(ka);
            for (kb, cb) in &other.coeffs {
                if ha + height(kb) > self.depth {
                    continue;
                }
                let k: Vec<i64> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
                *out.entry(k).or_insert_with(Q::zero) += ca * cb;
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(Self {
            anchor,
            depth: self.depth,
            coeffs: out,
        })
    }

    /// Truncated inverse, solved by increasing height over the monoid
    /// generated by the support. The anchor is negated.
    pub fn invert(&self) -> Result<Self> {
        let n = self.rank();
        let zero = vec![0; n];
        let c0 = self.coeff(&zero);
        if !(c0 == Q::one() || c0 == -Q::one()) {
            return Err(Error::NonUnitConstantTerm);
        }
        let inv0 = c0.recip();
        let gens: Vec<(&Vec<i64>, &Q)> = self.coeffs.iter().filter(|(k, _)| **k != zero).collect();

        // keys reachable as sums of support elements, by height
        let mut reachable: BTreeSet<(i64, Vec<i64>)> = BTreeSet::new();
        reachable.insert((0, zero.clone()));
        let mut frontier = vec![zero.clone()];
        while let Some(k) = frontier.pop() {
            for (g, _) in &gens {
                let next: Vec<i64> = k.iter().zip(g.iter()).map(|(a, b)| a + b).collect();
                let h = height(&next);
                if h <= self.depth && reachable.insert((h, next.clone())) {
                    frontier.push(next);
                }
            }
        }

        let mut out: BTreeMap<Vec<i64>, Q> = BTreeMap::new();
        for (_, k) in &reachable {
            let v = if *k == zero {
                inv0.clone()
            } else {
                let mut acc = Q::zero();
                for (g, c) in &gens {
                    let rest: Vec<i64> = k.iter().zip(g.iter()).map(|(a, b)| a - b).collect();
                    if rest.iter().any(|&x| x < 0) {
                        continue;
                    }
                    if let Some(b) = out.get(&rest) {
                        acc += *c * b;
                    }
                }
                -(acc * &inv0)
            };
            if !v.is_zero() {
                out.insert(k.clone(), v);
            }
        }
        Ok(Self {
            anchor: self.anchor.iter().map(|a| -a).collect(),
            depth: self.depth,
            coeffs: out,
        })
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut s = Self::zero(self.anchor.clone(), self.depth);
        for (k, v) in &self.coeffs {
            s.add_term(k.clone(), v * c);
        }
        s
    }

    /// First key (lexicographic) where the two series differ, with both
    /// coefficients.
    pub fn first_difference(&self, other: &Self) -> Option<(Vec<i64>, Q, Q)> {
        let keys: BTreeSet<&Vec<i64>> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.into_iter().find_map(|k| {
            let a = self.coeff(k);
            let b = other.coeff(k);
            (a != b).then(|| (k.clone(), a, b))
        })
    }

    /// TSV lines `k1 ... kn<TAB>coefficient`, keys sorted lexicographically.
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.coeffs {
            let key: Vec<String> = k.iter().map(i64::to_string).collect();
            s.push_str(&key.join(" "));
            s.push('\t');
            s.push_str(&fmt_q(v));
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn series(n: usize, depth: i64, terms: &[(&[i64], i64)]) -> FormalCharacter {
        FormalCharacter::from_terms(
            vec![Q::zero(); n],
            depth,
            terms.iter().map(|(k, c)| (k.to_vec(), q(*c))),
        )
    }

    #[test]
    fn geometric_series() {
        let a = series(1, 3, &[(&[0], 1), (&[1], -1)]);
        let inv = a.invert().unwrap();
        let expect = series(1, 3, &[(&[0], 1), (&[1], 1), (&[2], 1), (&[3], 1)]);
        assert_eq!(inv, expect);
    }

    #[test]
    fn two_variable_inverse() {
        let a = series(2, 2, &[(&[0, 0], 1), (&[1, 0], -1), (&[0, 1], -1)]);
        let inv = a.invert().unwrap();
        let expect = series(
            2,
            2,
            &[
                (&[0, 0], 1),
                (&[1, 0], 1),
                (&[0, 1], 1),
                (&[2, 0], 1),
                (&[1, 1], 2),
                (&[0, 2], 1),
            ],
        );
        assert_eq!(inv, expect);
        assert_eq!(a.mul(&inv).unwrap(), series(2, 2, &[(&[0, 0], 1)]));
    }

    #[test]
    fn multiplicative_identity() {
        let x = series(2, 3, &[(&[0, 0], 2), (&[1, 2], -5)]);
        let one = series(2, 3, &[(&[0, 0], 1)]);
        assert_eq!(x.mul(&one).unwrap(), x);
    }

    #[test]
    fn errors() {
        let a = series(1, 3, &[(&[0], 2)]);
        assert_eq!(a.invert(), Err(Error::NonUnitConstantTerm));
        let b = series(1, 2, &[(&[0], 1)]);
        assert_eq!(a.mul(&b), Err(Error::DepthMismatch));
    }

    #[test]
    fn terms_beyond_depth_are_dropped() {
        let a = series(1, 1, &[(&[0], 1), (&[2], 7)]);
        assert_eq!(a.len(), 1);
    }
}
