//! Polynomials in `T` with big-integer coefficients.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// Constant term first; the coefficient vector never carries trailing zeros,
/// so the zero polynomial has no coefficients at all.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial {
            coeffs: vec![BigInt::one()],
        }
    }

    /// `1 + c T`.
    pub fn linear(c: impl Into<BigInt>) -> Self {
        Self::new(vec![BigInt::one(), c.into()])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Power-series inverse modulo `T^{n}`; needs constant term `+-1`.
    pub fn series_inverse(&self, n: usize) -> Result<Vec<BigInt>> {
        let c0 = self.coeff(0);
        if !(c0.is_one() || (-&c0).is_one()) {
            return Err(Error::InvalidArgument(
                "series inverse needs a unit constant term".into(),
            ));
        }
        let mut inv: Vec<BigInt> = Vec::with_capacity(n);
        for j in 0..n {
            let mut s = if j == 0 { BigInt::one() } else { BigInt::zero() };
            for i in 1..=j.min(self.degree()) {
                s -= &self.coeffs[i] * &inv[j - i];
            }
            inv.push(s * &c0);
        }
        Ok(inv)
    }

    /// Exact quotient `self / divisor`, where the divisor has constant term
    /// `+-1`; fails with `InexactDivision` if there is a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        if divisor.is_zero() {
            return Err(Error::InexactDivision);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if self.degree() < divisor.degree() {
            return Err(Error::InexactDivision);
        }
        let n = self.degree() - divisor.degree() + 1;
        let inv = divisor.series_inverse(n)?;
        let mut q = vec![BigInt::zero(); n];
        for (j, slot) in q.iter_mut().enumerate() {
            for i in 0..=j {
                *slot += self.coeff(i) * &inv[j - i];
            }
        }
        let q = Self::new(q);
        if &q.mul(divisor) == self {
            Ok(q)
        } else {
            Err(Error::InexactDivision)
        }
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    /// Reciprocal roots `gamma` with `self = c_0 prod (1 - gamma T)`, found
    /// numerically after rescaling `T = U / scale` so the roots lie near the
    /// unit circle when `scale` is their expected modulus.
    pub fn reciprocal_roots(&self, scale: f64) -> Vec<Complex64> {
        let d = self.degree();
        if d == 0 {
            return Vec::new();
        }
        // Reversed polynomial: sum c_j x^{d-j} has roots gamma; rescale x = scale * y.
        let monic_lead = big_to_f64(&self.coeffs[0]);
        let coeffs: Vec<Complex64> = (0..=d)
            .map(|j| {
                // coefficient of y^{d-j}: c_j * scale^{d-j} / scale^d = c_j / scale^j
                let c = big_to_f64(&self.coeffs[j]) / scale.powi(j as i32) / monic_lead;
                Complex64::new(c, 0.0)
            })
            .collect();
        // coeffs[j] multiplies y^{d-j}; roots_of expects highest degree first.
        roots_of(&coeffs)
            .into_iter()
            .map(|y| y * scale)
            .collect()
    }
}

pub(crate) fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

/// Roots of `a_0 y^d + a_1 y^{d-1} + ... + a_d` (highest degree first) by
/// the Aberth-Ehrlich iteration, polished with a few Newton steps.
pub fn roots_of(coeffs: &[Complex64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    let lead = coeffs[0];
    let a: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in &a {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    };
    // Cauchy-type radius for the initial circle.
    let radius = 1.0 + a[1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let r0 = radius.min(
        a[1..]
            .iter()
            .enumerate()
            .map(|(i, c)| c.norm().powf(1.0 / (i + 1) as f64))
            .fold(0.0, f64::max)
            .max(1e-3)
            * 1.1,
    );
    let mut z: Vec<Complex64> = (0..d)
        .map(|i| Complex64::from_polar(r0, 2.0 * std::f64::consts::PI * (i as f64 + 0.25) / d as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("T")?,
                _ => write!(f, "T^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display() {
        let z = IntPolynomial::from_i64s(&[1, 24, -25]);
        assert_eq!(z.to_string(), "1 + 24T - 25T^2");
        assert_eq!(IntPolynomial::from_i64s(&[1, -1]).to_string(), "1 - T");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn exact_division() {
        let a = IntPolynomial::from_i64s(&[1, -1]);
        let b = IntPolynomial::from_i64s(&[1, 25]);
        let z = a.mul(&b);
        assert_eq!(z, IntPolynomial::from_i64s(&[1, 24, -25]));
        assert_eq!(z.div_exact(&a).unwrap(), b);
        assert_eq!(z.div_exact(&b).unwrap(), a);
        assert_eq!(
            z.div_exact(&IntPolynomial::from_i64s(&[1, 1])),
            Err(Error::InexactDivision)
        );
        assert_eq!(b.div_exact(&z), Err(Error::InexactDivision));
    }

    #[test]
    fn roots_of_1_plus_25t() {
        let m = IntPolynomial::from_i64s(&[1, 25]);
        let r = m.reciprocal_roots(5.0);
        assert_eq!(r.len(), 1);
        assert!((r[0] - Complex64::new(-25.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn roots_of_quartic_on_circle() {
        // (1 - 2T + 9T^2)(1 + 4T + 9T^2): all reciprocal roots of modulus 3.
        let m = IntPolynomial::from_i64s(&[1, -2, 9]).mul(&IntPolynomial::from_i64s(&[1, 4, 9]));
        for g in m.reciprocal_roots(3.0) {
            assert!((g.norm() - 3.0).abs() < 1e-10, "{g}");
        }
    }

    proptest! {
        #[test]
        fn div_exact_inverts_mul(
            a in prop::collection::vec(-50i64..50, 0..6),
            b in prop::collection::vec(-50i64..50, 0..6),
        ) {
            let mut a = a; a.insert(0, 1);
            let mut b = b; b.insert(0, -1);
            let pa = IntPolynomial::from_i64s(&a);
            let pb = IntPolynomial::from_i64s(&b);
            let prod = pa.mul(&pb);
            prop_assert_eq!(prod.div_exact(&pb).unwrap(), pa);
        }
    }
}
