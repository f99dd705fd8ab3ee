//! Exact arithmetic in `Z[zeta_p]`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// An element of `Z[zeta_p]` in the power basis `1, zeta, ..., zeta^{p-2}`.
///
/// The representation is canonical: `zeta^{p-1}` is always rewritten as
/// `-(1 + zeta + ... + zeta^{p-2})`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicInt {
    p: u64,
    coords: Vec<BigInt>,
}

impl CyclotomicInt {
    pub fn zero(p: u64) -> Self {
        CyclotomicInt {
            p,
            coords: vec![BigInt::zero(); (p - 1) as usize],
        }
    }

    pub fn from_integer(p: u64, n: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(p);
        z.coords[0] = n.into();
        z
    }

    /// `zeta^e` for any exponent, reduced modulo `p`.
    pub fn zeta_pow(p: u64, e: u64) -> Self {
        let mut full = vec![BigInt::zero(); p as usize];
        full[(e % p) as usize] = BigInt::one();
        Self::from_full(p, full)
    }

    /// Builds an element from coordinates on `1, zeta, ..., zeta^{p-2}`.
    pub fn from_coords(p: u64, coords: Vec<BigInt>) -> Self {
        assert_eq!(coords.len() as u64, p - 1, "need p - 1 coordinates");
        CyclotomicInt { p, coords }
    }

    /// `sum_c counts[c] * zeta^c` for a tally indexed by `c in 0..p`.
    pub fn from_tally(p: u64, counts: &[u64]) -> Self {
        assert_eq!(counts.len() as u64, p);
        let full = counts.iter().map(|&c| BigInt::from(c)).collect();
        Self::from_full(p, full)
    }

    /// Reduces a length-`p` vector on `1, ..., zeta^{p-1}` to canonical form.
    fn from_full(p: u64, mut full: Vec<BigInt>) -> Self {
        debug_assert_eq!(full.len() as u64, p);
        let top = full.pop().unwrap();
        if !top.is_zero() {
            for c in full.iter_mut() {
                *c -= &top;
            }
        }
        CyclotomicInt { p, coords: full }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        CyclotomicInt { p: self.p, coords }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        CyclotomicInt { p: self.p, coords }
    }

    pub fn neg(&self) -> Self {
        CyclotomicInt {
            p: self.p,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        CyclotomicInt {
            p: self.p,
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    /// Product, computed cyclically modulo `x^p - 1` and then reduced.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let p = self.p as usize;
        let mut full = vec![BigInt::zero(); p];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                full[(i + j) % p] += a * b;
            }
        }
        Self::from_full(self.p, full)
    }

    /// Applies the Galois automorphism `zeta -> zeta^c`, `c` prime to `p`.
    pub fn galois(&self, c: u64) -> Self {
        let p = self.p as usize;
        let mut full = vec![BigInt::zero(); p];
        for (i, a) in self.coords.iter().enumerate() {
            full[(i * c as usize) % p] += a;
        }
        Self::from_full(self.p, full)
    }

    /// Image under `zeta -> omega` in `F_l`.
    pub fn reduce_mod(&self, l: u64, omega: u64) -> u64 {
        use crate::arith::modular::{big_mod_u64, mul_mod};
        let mut acc = 0u64;
        let mut w = 1u64;
        for c in &self.coords {
            acc = (acc + mul_mod(big_mod_u64(c, l), w, l)) % l;
            w = mul_mod(w, omega, l);
        }
        acc
    }

    /// Approximate complex value with `zeta = exp(2 pi i / p)`.
    pub fn to_complex(&self) -> num_complex::Complex64 {
        use num_traits::ToPrimitive;
        let theta = 2.0 * std::f64::consts::PI / self.p as f64;
        self.coords
            .iter()
            .enumerate()
            .map(|(i, c)| {
                num_complex::Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), theta * i as f64)
            })
            .sum()
    }
}

/// The rational integer represented by `v`, or `NotRational` naming the
/// first offending coordinate.
pub fn cyc_reduce_to_integer(v: &CyclotomicInt) -> Result<BigInt> {
    match v.coords[1..].iter().position(|c| !c.is_zero()) {
        Some(i) => Err(Error::NotRational { index: i + 1 }),
        None => Ok(v.coords[0].clone()),
    }
}

impl fmt::Debug for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclotomicInt(p={}, {})", self.p, self)
    }
}

impl fmt::Display for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z")?,
                _ => write!(f, "{c}*z^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
