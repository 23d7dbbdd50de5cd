//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `7`, `-3/2` or a finite decimal such as `0.25`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Some((int, dec)) = s.split_once('.') {
        if dec.is_empty() || !dec.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = int.starts_with('-');
        let int = int.trim_start_matches(['-', '+']);
        let digits = format!("{}{}", if int.is_empty() { "0" } else { int }, dec);
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), dec.len());
        let v = Q::new(n, d);
        return Some(if neg { -v } else { v });
    }
    s.parse::<BigInt>().ok().map(Q::from_integer)
}

/// Renders as an integer or `p/q`.
pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

pub fn is_integer(x: &Q) -> bool {
    x.is_integer()
}

/// Converts an integral rational to `i64`, if it fits.
pub fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn sign(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!(parse_q("-3/2"), Some(frac(-3, 2)));
        assert_eq!(parse_q("4"), Some(q(4)));
        assert_eq!(parse_q("0.25"), Some(frac(1, 4)));
        assert_eq!(parse_q("-1.5"), Some(frac(-3, 2)));
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(parse_q("x"), None);
    }

    #[test]
    fn formats() {
        assert_eq!(fmt_q(&frac(-6, 4)), "-3/2");
        assert_eq!(fmt_q(&q(5)), "5");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 4), BigInt::zero());
    }
}
