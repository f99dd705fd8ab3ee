//! Passing between a polynomial `Z(T) = exp(sum m_n T^n / n)` and its power
//! sums `m_n`, both directions by Newton's identity `n c_n = sum m_i c_{n-i}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::poly::IntPolynomial;
use crate::error::{Error, Result};

/// The truncation to degree `d` of `exp(sum_{n>=1} m_n T^n / n)`.
pub fn series_exp_from_power_sums(m: &[BigInt], d: usize) -> Result<IntPolynomial> {
    if m.len() < d {
        return Err(Error::InvalidArgument(format!(
            "need {d} power sums, got {}",
            m.len()
        )));
    }
    let mut c: Vec<BigInt> = vec![BigInt::one()];
    for j in 1..=d {
        let s: BigInt = (1..=j).map(|i| &m[i - 1] * &c[j - i]).sum();
        let (q, r) = s.div_rem(&BigInt::from(j));
        if !r.is_zero() {
            return Err(Error::NonIntegralCoefficient { index: j });
        }
        c.push(q);
    }
    Ok(IntPolynomial::new(c))
}

/// `m_1, ..., m_{n_max}` with `m_n = -sum gamma_i^n` over the reciprocal
/// roots of `z`, which must have constant term 1.
pub fn power_sums_from_polynomial(z: &IntPolynomial, n_max: usize) -> Vec<BigInt> {
    assert!(z.coeff(0).is_one(), "constant term must be 1");
    let mut m: Vec<BigInt> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut s = z.coeff(n) * BigInt::from(n);
        for i in 1..n {
            s -= &m[i - 1] * z.coeff(n - i);
        }
        m.push(s);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn exp_examples() {
        assert_eq!(
            series_exp_from_power_sums(&big(&[-1, -1]), 2).unwrap(),
            IntPolynomial::from_i64s(&[1, -1])
        );
        assert_eq!(
            series_exp_from_power_sums(&big(&[24, -626]), 2).unwrap(),
            IntPolynomial::from_i64s(&[1, 24, -25])
        );
        assert_eq!(
            series_exp_from_power_sums(&big(&[7]), 1).unwrap(),
            IntPolynomial::from_i64s(&[1, 7])
        );
        assert_eq!(
            series_exp_from_power_sums(&big(&[1, 0]), 2),
            Err(Error::NonIntegralCoefficient { index: 2 })
        );
    }

    #[test]
    fn power_sum_examples() {
        assert_eq!(
            power_sums_from_polynomial(&IntPolynomial::from_i64s(&[1, -1]), 4),
            big(&[-1, -1, -1, -1])
        );
        assert_eq!(
            power_sums_from_polynomial(&IntPolynomial::from_i64s(&[1, 24, -25]), 2),
            big(&[24, -626])
        );
        assert_eq!(
            power_sums_from_polynomial(&IntPolynomial::one(), 3),
            big(&[0, 0, 0])
        );
    }

    proptest! {
        #[test]
        fn roundtrip(tail in prop::collection::vec(-10_000i64..10_000, 0..8)) {
            let mut c = vec![1i64];
            c.extend(tail);
            let z = IntPolynomial::from_i64s(&c);
            let d = c.len() - 1;
            let m = power_sums_from_polynomial(&z, d);
            prop_assert_eq!(series_exp_from_power_sums(&m, d).unwrap(), z);
        }
    }
}
