//! Exact elements of cyclotomic fields `Q(ζ_n)`, used for phases that are
//! roots of unity (or rational multiples of them).

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::{fmt_q, to_f64, Q};

/// `Φ_n` as coefficients, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<Q> {
    assert!(n >= 1);
    // x^n − 1
    let mut p = vec![Q::zero(); n as usize + 1];
    p[0] = -Q::one();
    p[n as usize] = Q::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = divide_exact(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

fn divide_exact(num: &[Q], den: &[Q]) -> Vec<Q> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![Q::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + dd] / &den[dd];
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

fn reduce(mut p: Vec<Q>, modulus: &[Q]) -> Vec<Q> {
    let d = modulus.len() - 1;
    while p.len() > d {
        let c = p.pop().unwrap();
        if c.is_zero() {
            continue;
        }
        let shift = p.len() - d;
        for (j, m) in modulus.iter().take(d).enumerate() {
            p[shift + j] -= &c * m;
        }
    }
    p.resize(d, Q::zero());
    p
}

/// `Σ_j c_j ζ_n^j` with `deg < φ(n)`, reduced modulo `Φ_n`.
#[derive(Debug, Clone)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<Q>,
}

impl Cyclotomic {
    pub fn rational(x: Q) -> Self {
        Self {
            order: 1,
            coeffs: vec![x],
        }
    }

    /// `ζ_n^e` with `ζ_n = exp(2πi/n)`.
    pub fn root_of_unity(n: u64, e: i64) -> Self {
        assert!(n >= 1);
        let e = e.rem_euclid(n as i64) as usize;
        let mut p = vec![Q::zero(); e + 1];
        p[e] = Q::one();
        Self::from_poly(n, p)
    }

    fn from_poly(order: u64, p: Vec<Q>) -> Self {
        let modulus = cyclotomic_polynomial(order);
        Self {
            order,
            coeffs: reduce(p, &modulus),
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// The same element written over `Q(ζ_m)` for a multiple `m` of the order.
    fn promote(&self, m: u64) -> Self {
        if m == self.order {
            return self.clone();
        }
        assert_eq!(m % self.order, 0);
        let step = (m / self.order) as usize;
        let mut p = vec![Q::zero(); step * self.coeffs.len().max(1)];
        for (j, c) in self.coeffs.iter().enumerate() {
            p[j * step] = c.clone();
        }
        Self::from_poly(m, p)
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let m = self.order.lcm(&other.order);
        (self.promote(m), other.promote(m))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Self {
            order: a.order,
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| -x).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let mut p = vec![Q::zero(); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                p[i + j] += x * y;
            }
        }
        Self::from_poly(a.order, p)
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = <Self as One>::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Q> {
        let reduced = self.simplify();
        (reduced.order == 1).then(|| reduced.coeffs[0].clone())
    }

    /// Rewrites over the smallest cyclotomic field among the divisors of the
    /// current order that contains the element.
    pub fn simplify(&self) -> Self {
        let mut divisors: Vec<u64> = (1..=self.order)
            .filter(|d| self.order.is_multiple_of(*d))
            .collect();
        divisors.sort();
        for d in divisors {
            // Q(ζ_d) ⊆ Q(ζ_n): the element lives there iff its image under
            // promotion round-trips, which we test by solving in the basis.
            if let Some(x) = self.demote(d) {
                return x;
            }
        }
        self.clone()
    }

    fn demote(&self, d: u64) -> Option<Self> {
        if d == self.order {
            return Some(self.clone());
        }
        let phi_d = cyclotomic_polynomial(d).len() - 1;
        // images of ζ_d^j for j < φ(d) are linearly independent over Q
        let images: Vec<Self> = (0..phi_d)
            .map(|j| Self::root_of_unity(d, j as i64).promote(self.order))
            .collect();
        let cols = images.len();
        let rows = self.coeffs.len();
        let mut m = crate::linalg::Matrix::zeros(rows, cols + 1);
        for (j, img) in images.iter().enumerate() {
            for i in 0..rows {
                m[(i, j)] = img.coeffs[i].clone();
            }
        }
        for i in 0..rows {
            m[(i, cols)] = self.coeffs[i].clone();
        }
        let (r, pivots) = m.rref();
        if pivots.contains(&cols) {
            return None;
        }
        let mut coeffs = vec![Q::zero(); cols];
        for (row, &p) in pivots.iter().enumerate() {
            coeffs[p] = r[(row, cols)].clone();
        }
        Some(Self { order: d, coeffs })
    }

    pub fn to_complex(&self) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .fold(Complex64::new(0.0, 0.0), |acc, (j, c)| {
                let angle = 2.0 * PI * j as f64 / self.order as f64;
                acc + Complex64::from_polar(to_f64(c), angle)
            })
    }
}

impl std::ops::Add for Cyclotomic {
    type Output = Self;
    fn add(self, other: Self) -> Self {
        Cyclotomic::add(&self, &other)
    }
}

impl std::ops::Sub for Cyclotomic {
    type Output = Self;
    fn sub(self, other: Self) -> Self {
        Cyclotomic::sub(&self, &other)
    }
}

impl std::ops::Mul for Cyclotomic {
    type Output = Self;
    fn mul(self, other: Self) -> Self {
        Cyclotomic::mul(&self, &other)
    }
}

impl std::ops::Neg for Cyclotomic {
    type Output = Self;
    fn neg(self) -> Self {
        Cyclotomic::neg(&self)
    }
}

impl Zero for Cyclotomic {
    fn zero() -> Self {
        Self::rational(Q::zero())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl One for Cyclotomic {
    fn one() -> Self {
        Self::rational(Q::one())
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl Eq for Cyclotomic {}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.simplify();
        if s.order == 1 {
            return write!(f, "{}", fmt_q(&s.coeffs[0]));
        }
        if s.order == 4 {
            // a + b i
            let (a, b) = (&s.coeffs[0], &s.coeffs[1]);
            return match (a.is_zero(), b.is_zero()) {
                (_, true) => write!(f, "{}", fmt_q(a)),
                (true, false) => write!(f, "{}i", fmt_q(b)),
                (false, false) if *b < Q::zero() => write!(f, "{}-{}i", fmt_q(a), fmt_q(&-b)),
                _ => write!(f, "{}+{}i", fmt_q(a), fmt_q(b)),
            };
        }
        let terms: Vec<String> = s
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| match j {
                0 => fmt_q(c),
                _ => format!("{}*z{}^{}", fmt_q(c), s.order, j),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn small_cyclotomic_polynomials() {
        let p = |v: &[i64]| v.iter().map(|&x| q(x)).collect::<Vec<_>>();
        assert_eq!(cyclotomic_polynomial(1), p(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(4), p(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), p(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), p(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn roots_of_unity_multiply() {
        let i = Cyclotomic::root_of_unity(4, 1);
        assert_eq!(i.mul(&i), Cyclotomic::rational(q(-1)));
        assert_eq!(i.pow(4), Cyclotomic::rational(q(1)));
        let w = Cyclotomic::root_of_unity(3, 1);
        // 1 + ω + ω² = 0
        let s = Cyclotomic::rational(q(1)).add(&w).add(&w.mul(&w));
        assert!(s.is_zero());
    }

    #[test]
    fn mixed_orders() {
        let i = Cyclotomic::root_of_unity(4, 1);
        let w = Cyclotomic::root_of_unity(3, 1);
        let z12 = Cyclotomic::root_of_unity(12, 7);
        // ζ_12^7 = ζ_4^1 ζ_3^1 ... exp(2πi(1/4 + 1/3)) = exp(2πi·7/12)
        assert_eq!(i.mul(&w), z12);
        assert_eq!(z12.as_rational(), None);
        assert_eq!(z12.pow(12).as_rational(), Some(q(1)));
    }

    #[test]
    fn complex_value() {
        let z = Cyclotomic::root_of_unity(8, 3).to_complex();
        let expect = Complex64::from_polar(1.0, 3.0 * PI / 4.0);
        assert!((z - expect).norm() < 1e-12);
    }

    #[test]
    fn display() {
        assert_eq!(Cyclotomic::root_of_unity(4, 3).to_string(), "-1i");
        assert_eq!(Cyclotomic::root_of_unity(2, 1).to_string(), "-1");
    }
}
