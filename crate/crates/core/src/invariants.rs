//! Local factors at ramified primes, conductors and root numbers.

use num_bigint::BigInt;

use crate::arith::modular::{factorize, jacobi, primes_up_to};
use crate::arith::IntPolynomial;
use crate::error::{Error, Result};
use crate::local_factors::{degree_m_at_2_even, is_unramified, yun_exponents};

pub use crate::local_factors::det_frobenius_check;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaSets {
    pub k: u32,
    pub p: u64,
    /// Odd `a` with `ap <= k` and `ord_p(a)` odd.
    pub theta_plus: Vec<u64>,
    /// Odd `a` with `ap <= k` and `ord_p(a)` even.
    pub theta_minus: Vec<u64>,
}

fn valuation(mut a: u64, p: u64) -> (u32, u64) {
    let mut v = 0;
    while a % p == 0 {
        a /= p;
        v += 1;
    }
    (v, a)
}

pub fn theta_sets(k: u32, p: u64) -> ThetaSets {
    let (mut plus, mut minus) = (Vec::new(), Vec::new());
    let mut a = 1u64;
    while a * p <= k as u64 {
        if valuation(a, p).0 % 2 == 1 {
            plus.push(a);
        } else {
            minus.push(a);
        }
        a += 2;
    }
    ThetaSets {
        k,
        p,
        theta_plus: plus,
        theta_minus: minus,
    }
}

/// Reciprocal of a local L-factor together with its conductor exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFactorData {
    pub k: u32,
    pub p: u64,
    pub inverse_factor: IntPolynomial,
    pub conductor_exponent: u32,
    pub conjectural: bool,
}

/// `M_k(p;T) prod_{a in Theta+} (1 - ((-1)^{(1+ap)/2} 2a' / p) p^{m+1} T)`, `k = 2m+1`.
pub fn bad_local_factor_odd_k(k: u32, p: u64, m_poly: &IntPolynomial) -> Result<LocalFactorData> {
    if k % 2 == 0 {
        return Err(Error::InvalidArgument("odd k expected".into()));
    }
    if p == 2 {
        return Ok(LocalFactorData {
            k,
            p,
            inverse_factor: m_poly.clone(),
            conductor_exponent: 0,
            conjectural: false,
        });
    }
    let theta = theta_sets(k, p);
    let m = (k - 1) / 2;
    let scale = BigInt::from(p).pow(m + 1);
    let mut inv = m_poly.clone();
    for &a in &theta.theta_plus {
        let (_, a_prime) = valuation(a, p);
        let sign: i64 = if (a * p).div_ceil(2) % 2 == 0 { 1 } else { -1 };
        let symbol = jacobi(sign * 2 * a_prime as i64, p);
        inv = inv.mul(&IntPolynomial::linear(-BigInt::from(symbol) * &scale));
    }
    Ok(LocalFactorData {
        k,
        p,
        inverse_factor: inv,
        conductor_exponent: theta.theta_minus.len() as u32,
        conjectural: false,
    })
}

/// Local factor at an odd prime for even `k`.
pub fn local_factor_even_k(k: u32, p: u64, m_poly: &IntPolynomial) -> Result<LocalFactorData> {
    if k % 2 == 1 || p == 2 {
        return Err(Error::InvalidArgument("even k and odd p expected".into()));
    }
    let k64 = k as u64;
    let h = BigInt::from(p).pow(k / 2);
    let e = (k64 / (2 * p)) as u32;
    let inv = if p % 4 == 1 {
        IntPolynomial::linear(-&h).pow(e).mul(m_poly)
    } else {
        let n = ((k64 + 2 * p) / (4 * p)) as u32;
        IntPolynomial::linear(h.clone())
            .pow(n)
            .mul(&IntPolynomial::linear(-h).pow(e - n))
            .mul(m_poly)
    };
    Ok(LocalFactorData {
        k,
        p,
        inverse_factor: inv,
        conductor_exponent: e,
        conjectural: false,
    })
}

/// Degree of the conjectural factor at 2: `(k-2)/2 - [4 | k] - floor(k/6)`.
pub fn conjectural_2_degree(k: u32) -> usize {
    ((k - 2) / 2 - u32::from(k % 4 == 0) - k / 6) as usize
}

/// `(1 - 2^{k/2} T)^{floor(k/8)} (1 + 2^{k/2} T)^{b_k} M_k(2;T)`, flagged conjectural.
pub fn conjectural_2_factor_even(k: u32, m2: &IntPolynomial) -> Result<LocalFactorData> {
    if k % 2 == 1 || k == 0 {
        return Err(Error::InvalidArgument("even k >= 2 expected".into()));
    }
    let h = BigInt::from(2u32).pow(k / 2);
    let (_, b) = yun_exponents(k);
    let inv = IntPolynomial::linear(-&h)
        .pow(k / 8)
        .mul(&IntPolynomial::linear(h).pow(b))
        .mul(m2);
    let expected = conjectural_2_degree(k);
    if inv.degree() != expected {
        return Err(Error::DegreeMismatch {
            k,
            p: 2,
            expected,
            got: inv.degree(),
        });
    }
    debug_assert_eq!(m2.degree(), degree_m_at_2_even(k));
    Ok(LocalFactorData {
        k,
        p: 2,
        inverse_factor: inv,
        conductor_exponent: k / 6,
        conjectural: true,
    })
}

/// The local factor at any prime, given `M_k(p;T)`.
pub fn local_factor(k: u32, p: u64, m_poly: &IntPolynomial) -> Result<LocalFactorData> {
    if is_unramified(k, p) {
        return Ok(LocalFactorData {
            k,
            p,
            inverse_factor: m_poly.clone(),
            conductor_exponent: 0,
            conjectural: false,
        });
    }
    match (k % 2, p) {
        (1, _) => bad_local_factor_odd_k(k, p, m_poly),
        (_, 2) => conjectural_2_factor_even(k, m_poly),
        _ => local_factor_even_k(k, p, m_poly),
    }
}

fn square_free_part(n: u64) -> u64 {
    factorize(n)
        .iter()
        .filter(|(_, e)| e % 2 == 1)
        .map(|(p, _)| p)
        .product()
}

fn odd_radical(n: u64) -> u64 {
    factorize(n)
        .iter()
        .filter(|(p, _)| *p != 2)
        .map(|(p, _)| p)
        .product()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConductorData {
    pub k: u32,
    /// Full conductor; for even `k` it carries the conjectural `2^{floor(k/6)}`.
    pub value: BigInt,
    pub odd_part: BigInt,
    pub two_exponent: u32,
    pub conjectural: bool,
}

/// Conductor, with the two closed forms compared.
pub fn conductor(k: u32) -> Result<ConductorData> {
    if k == 0 {
        return Err(Error::InvalidArgument("k >= 1".into()));
    }
    let primes: Vec<u64> = primes_up_to(k as u64).into_iter().filter(|&p| p != 2).collect();
    if k % 2 == 1 {
        let by_theta: BigInt = primes
            .iter()
            .map(|&p| BigInt::from(p).pow(theta_sets(k, p).theta_minus.len() as u32))
            .product();
        let by_squarefree: BigInt = (1..=k as u64).step_by(2).map(|j| BigInt::from(square_free_part(j))).product();
        if by_theta != by_squarefree {
            return Err(Error::CrossCheckFailed(format!(
                "k={k}: prod p^#Theta- = {by_theta}, prod of square-free parts = {by_squarefree}"
            )));
        }
        Ok(ConductorData {
            k,
            value: by_theta.clone(),
            odd_part: by_theta,
            two_exponent: 0,
            conjectural: false,
        })
    } else {
        let by_floor: BigInt = primes
            .iter()
            .map(|&p| BigInt::from(p).pow(k / (2 * p as u32)))
            .product();
        let by_radical: BigInt = (2..=k as u64).step_by(2).map(|j| BigInt::from(odd_radical(j))).product();
        if by_floor != by_radical {
            return Err(Error::CrossCheckFailed(format!(
                "k={k}: prod p^floor(k/2p) = {by_floor}, prod of odd radicals = {by_radical}"
            )));
        }
        let r = k / 6;
        Ok(ConductorData {
            k,
            value: &by_floor * BigInt::from(2u32).pow(r),
            odd_part: by_floor,
            two_exponent: r,
            conjectural: true,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonSign {
    pub k: u32,
    pub sign: i32,
    pub conjectural: bool,
    /// `t_k` for even `k`.
    pub t: Option<u32>,
    /// Proven signs `(-1)^{v_p}` of the local factors at odd `p <= k/2` (even `k`).
    pub local_signs: Vec<(u64, i32)>,
    /// `(-1)^{[8 | k]}` for even `k`.
    pub infinity: i32,
}

pub fn epsilon_sign(k: u32) -> EpsilonSign {
    if k % 2 == 1 {
        return EpsilonSign {
            k,
            sign: 1,
            conjectural: false,
            t: None,
            local_signs: Vec::new(),
            infinity: 1,
        };
    }
    let k64 = k as u64;
    let mut t = k / 8 + u32::from(k % 8 == 0);
    let mut local_signs = Vec::new();
    for p in primes_up_to(k64 / 2).into_iter().filter(|&p| p != 2) {
        let v = if p % 4 == 1 { k64 / (2 * p) } else { k64 / (4 * p) } as u32;
        t += v;
        local_signs.push((p, if v % 2 == 0 { 1 } else { -1 }));
    }
    EpsilonSign {
        k,
        sign: if t % 2 == 0 { 1 } else { -1 },
        conjectural: true,
        t: Some(t),
        local_signs,
        infinity: if k % 8 == 0 { -1 } else { 1 },
    }
}
