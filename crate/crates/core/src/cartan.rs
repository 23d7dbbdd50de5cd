//! Cartan data of generalized Kac-Moody algebras.
//!
//! Matrices are stored in symmetric form, so the invariant bilinear form on
//! the root lattice is `(alpha_i, alpha_j) = a_ij` and every weight is
//! determined by its pairings with the simple roots.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanDatum {
    a: Matrix,
    real: Vec<usize>,
}

impl CartanDatum {
    /// Checks conditions (i)-(iii) and symmetry, and records the real
    /// indices `{ i | a_ii > 0 }`.
    pub fn validate(rows: Vec<Vec<Q>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyIndexSet);
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        let a = Matrix::from_rows(rows);
        check_gkm_conditions(&a)?;
        for i in 0..n {
            for j in 0..i {
                if a[(i, j)] != a[(j, i)] {
                    return Err(Error::NotSymmetric { i: j + 1, j: i + 1 });
                }
            }
        }
        let real = (0..n).filter(|&i| a[(i, i)].is_positive()).collect();
        Ok(Self { a, real })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::validate(
            rows.iter()
                .map(|r| r.iter().map(|&x| crate::rational::q(x)).collect())
                .collect(),
        )
    }

    pub fn rank(&self) -> usize {
        self.a.rows()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Q {
        &self.a[(i, j)]
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn is_real(&self, i: usize) -> bool {
        self.a[(i, i)].is_positive()
    }

    /// Real indices, 0-based.
    pub fn real_indices(&self) -> &[usize] {
        &self.real
    }

    pub fn imaginary_indices(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| !self.is_real(i)).collect()
    }

    /// Pairings of the Weyl vector with the simple roots, `a_ii / 2`.
    pub fn rho_pairings(&self) -> Vec<Q> {
        (0..self.rank())
            .map(|i| &self.a[(i, i)] / Q::from_integer(2.into()))
            .collect()
    }

    /// `Λ` is integrable if `(Λ, α_i) ≥ 0` for all `i` and
    /// `2 (Λ, α_i) / a_ii` is an integer for every real `i`.
    pub fn is_integrable(&self, pairings: &[Q]) -> bool {
        pairings.len() == self.rank()
            && pairings.iter().all(|p| !p.is_negative())
            && self
                .real
                .iter()
                .all(|&i| (&pairings[i] * Q::from_integer(2.into()) / &self.a[(i, i)]).is_integer())
    }

    /// Copy with `a_ij` shifted by `delta` and no validation. Only the module
    /// oracle accepts such a datum, to inject faults into one side of a
    /// comparison.
    pub fn with_entry_shifted(&self, i: usize, j: usize, delta: &Q) -> Self {
        let mut a = self.a.clone();
        a[(i, j)] += delta;
        let real = (0..self.rank())
            .filter(|&k| a[(k, k)].is_positive())
            .collect();
        Self { a, real }
    }

    /// `x^T A y` on root-lattice coordinates.
    pub fn form(&self, x: &[i64], y: &[i64]) -> Q {
        let mut acc = Q::zero();
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj != 0 {
                    acc += &self.a[(i, j)] * Q::from_integer((xi * yj).into());
                }
            }
        }
        acc
    }
}

/// Conditions (i)-(iii) on an arbitrary square matrix.
pub fn check_gkm_conditions(a: &Matrix) -> Result<()> {
    let n = a.rows();
    for i in 0..n {
        for j in 0..n {
            if i != j && a[(i, j)].is_positive() {
                return Err(Error::PositiveOffDiagonal { i: i + 1, j: j + 1 });
            }
            if a[(i, j)].is_zero() && !a[(j, i)].is_zero() {
                return Err(Error::AsymmetricZeroPattern { i: i + 1, j: j + 1 });
            }
            if a[(i, i)].is_positive()
                && !(&a[(i, j)] * Q::from_integer(2.into()) / &a[(i, i)]).is_integer()
            {
                return Err(Error::NonIntegralQuotient { i: i + 1, j: j + 1 });
            }
        }
    }
    Ok(())
}

/// Finds a positive diagonal `D` with `D A` symmetric, normalized so that
/// the first index of each connected component gets weight 1.
pub fn symmetrizer(rows: &[Vec<Q>]) -> Result<Vec<Q>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::NotSquare);
    }
    let mut d: Vec<Option<Q>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(Q::one());
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let di = d[i].clone().unwrap();
            for j in 0..n {
                if i == j || rows[i][j].is_zero() {
                    continue;
                }
                if rows[j][i].is_zero() {
                    return Err(Error::AsymmetricZeroPattern { i: i + 1, j: j + 1 });
                }
                // d_i a_ij = d_j a_ji
                let dj = &di * &rows[i][j] / &rows[j][i];
                if !dj.is_positive() {
                    return Err(Error::NotSymmetrizable { i: i + 1, j: j + 1 });
                }
                match &d[j] {
                    Some(existing) if *existing != dj => {
                        return Err(Error::NotSymmetrizable { i: i + 1, j: j + 1 })
                    }
                    Some(_) => {}
                    None => {
                        d[j] = Some(dj);
                        stack.push(j);
                    }
                }
            }
        }
    }
    Ok(d.into_iter().map(Option::unwrap).collect())
}

/// Rescales a symmetrizable matrix into symmetric form `D A`.
pub fn symmetrize(rows: &[Vec<Q>]) -> Result<Vec<Vec<Q>>> {
    let d = symmetrizer(rows)?;
    Ok(scale_rows(rows, &d))
}

/// The rescaling `diag(ε')` with `ε'_i = 2 / a_ii` for real rows and 1
/// otherwise, which makes every positive diagonal entry equal to 2.
pub fn normalize_diagonal(rows: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let d: Vec<Q> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            if r[i].is_positive() {
                Q::from_integer(2.into()) / &r[i]
            } else {
                Q::one()
            }
        })
        .collect();
    scale_rows(rows, &d)
}

pub(crate) fn scale_rows(rows: &[Vec<Q>], d: &[Q]) -> Vec<Vec<Q>> {
    rows.iter()
        .zip(d)
        .map(|(r, di)| r.iter().map(|x| x * di).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn a2_is_valid() {
        let cd = CartanDatum::from_ints(&[&[2, -1], &[-1, 2]]).unwrap();
        assert_eq!(cd.real_indices(), &[0, 1]);
    }

    #[test]
    fn nonsymmetric_rejected() {
        let err = CartanDatum::from_ints(&[&[2, -1], &[-2, 2]]).unwrap_err();
        assert_eq!(err, Error::NotSymmetric { i: 1, j: 2 });
    }

    #[test]
    fn imaginary_root_allowed() {
        let cd = CartanDatum::from_ints(&[&[0, 0], &[0, 2]]).unwrap();
        assert_eq!(cd.real_indices(), &[1]);
        assert_eq!(cd.imaginary_indices(), vec![0]);
    }

    #[test]
    fn condition_violations() {
        assert_eq!(
            CartanDatum::from_ints(&[&[2, 1], &[1, 2]]).unwrap_err(),
            Error::PositiveOffDiagonal { i: 1, j: 2 }
        );
        assert_eq!(
            CartanDatum::from_ints(&[&[2, 0], &[-1, 2]]).unwrap_err(),
            Error::AsymmetricZeroPattern { i: 1, j: 2 }
        );
        assert_eq!(
            CartanDatum::from_ints(&[&[4, -1], &[-1, 2]]).unwrap_err(),
            Error::NonIntegralQuotient { i: 1, j: 2 }
        );
        assert_eq!(
            CartanDatum::validate(vec![]).unwrap_err(),
            Error::EmptyIndexSet
        );
    }

    #[test]
    fn symmetrizes_b2() {
        let rows = vec![vec![q(2), q(-1)], vec![q(-2), q(2)]];
        let d = symmetrizer(&rows).unwrap();
        assert_eq!(d, vec![q(1), crate::rational::frac(1, 2)]);
        let s = symmetrize(&rows).unwrap();
        assert_eq!(s, vec![vec![q(2), q(-1)], vec![q(-1), q(1)]]);
    }

    #[test]
    fn normalizes_diagonal() {
        let rows = vec![vec![q(4), q(-2)], vec![q(-2), q(0)]];
        let n = normalize_diagonal(&rows);
        assert_eq!(n[0], vec![q(2), q(-1)]);
        assert_eq!(n[1], vec![q(-2), q(0)]);
    }

    #[test]
    fn integrability() {
        let cd = CartanDatum::from_ints(&[&[2, -1], &[-1, 2]]).unwrap();
        assert!(cd.is_integrable(&[q(1), q(0)]));
        assert!(!cd.is_integrable(&[q(-1), q(0)]));
        assert!(!cd.is_integrable(&[crate::rational::frac(1, 2), q(0)]));
    }
}
