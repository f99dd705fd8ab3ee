//! Word-size number theory: primality, factorisation, quadratic symbols and
//! the 62-bit primes used for multi-modular reconstruction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorisation by trial division, as `(prime, exponent)` pairs in
/// increasing order. Only used on group orders of enumerable fields.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i as u64))
        .collect()
}

/// Jacobi symbol `(a / n)` for odd positive `n`.
pub fn jacobi(a: i64, n: u64) -> i32 {
    assert!(n % 2 == 1, "jacobi symbol needs an odd modulus");
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut result = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Legendre symbol `(a / p)` for an odd prime `p`.
pub fn legendre(a: i64, p: u64) -> i32 {
    jacobi(a, p)
}

/// Kronecker symbol `(d / n)` for a discriminant-like `d` and any `n >= 1`.
pub fn kronecker(d: i64, n: u64) -> i32 {
    assert!(n >= 1);
    let mut n = n;
    let mut result = 1;
    while n % 2 == 0 {
        n /= 2;
        let r = match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
        result *= r;
    }
    if n == 1 {
        result
    } else {
        result * jacobi(d, n)
    }
}

/// `p`-adic valuation of a nonzero big integer.
pub fn ord_p(x: &BigInt, p: u64) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        x = q;
        v += 1;
    }
}

/// Power `p^e` as a big integer.
pub fn big_pow(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// A 62-bit prime `l` with `l = 1 (mod p)` together with a primitive `p`-th
/// root of unity `omega` in `F_l`; `Z[zeta_p] -> F_l` sends `zeta` to `omega`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootOfUnityPrime {
    pub modulus: u64,
    pub omega: u64,
}

/// Enough primes `l = 1 (mod p)` below `2^62` that their product exceeds
/// `2 * bound`. Deterministic: scans downward from `2^62`.
pub fn crt_primes(p: u64, bound: &BigInt) -> Vec<RootOfUnityPrime> {
    let target = bound.abs() * 2 + BigInt::one();
    let mut product = BigInt::one();
    let mut out = Vec::new();
    let top: u64 = 1 << 62;
    let mut cand = top - (top - 1) % p; // largest value <= top with cand = 1 mod p
    while product <= target {
        if cand % 2 == 1 && is_prime(cand) {
            let omega = root_of_unity(p, cand);
            out.push(RootOfUnityPrime {
                modulus: cand,
                omega,
            });
            product *= cand;
        }
        cand -= p;
    }
    out
}

fn root_of_unity(p: u64, l: u64) -> u64 {
    let e = (l - 1) / p;
    (2..l)
        .map(|x| pow_mod(x, e, l))
        .find(|&w| w != 1)
        .expect("a prime l = 1 mod p has elements of order p")
}

/// Least nonnegative residue of `x` modulo `l`.
pub fn big_mod_u64(x: &BigInt, l: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(l));
    u64::try_from(&r).expect("residue fits in u64")
}

/// Reconstructs the unique integer in `(-M/2, M/2]` from residues modulo
/// pairwise-coprime moduli with product `M`.
pub fn crt_symmetric(residues: &[u64], moduli: &[u64]) -> BigInt {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (&r, &l) in residues.iter().zip(moduli) {
        // x' = x + m * ((r - x) * m^{-1} mod l)
        let x_mod = big_mod_u64(&x, l);
        let m_mod = big_mod_u64(&m, l);
        let inv = pow_mod(m_mod, l - 2, l);
        let delta = mul_mod((r + l - x_mod) % l, inv, l);
        x += &m * delta;
        m *= l;
    }
    let half = &m >> 1;
    if x > half {
        x -= m;
    }
    x
}
