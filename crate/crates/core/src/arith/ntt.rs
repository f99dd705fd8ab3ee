//! Power-of-two number-theoretic transforms over primes `l < 2^62`, with
//! Montgomery multiplication.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::modular::{is_prime, pow_mod};

/// A prime `l = 1 (mod p 2^log_len)` with roots of unity of both orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NttPrime {
    pub modulus: u64,
    pub log_len: u32,
    /// Primitive `2^log_len`-th root of unity.
    pub root: u64,
    /// Primitive `p`-th root of unity.
    pub omega: u64,
}

/// Enough primes `l = 1 (mod p 2^log_len)` below `2^62` that their product
/// exceeds `2 * bound`; deterministic.
pub fn ntt_primes(p: u64, log_len: u32, bound: &BigInt) -> Vec<NttPrime> {
    let step = p << log_len;
    let target = bound.abs() * 2 + BigInt::one();
    let top: u64 = 1 << 62;
    let mut cand = top - (top - 1) % step;
    let mut product = BigInt::one();
    let mut out = Vec::new();
    while product <= target {
        assert!(cand > step, "ran out of NTT primes");
        if is_prime(cand) {
            let non_residue = (2..cand)
                .find(|&x| pow_mod(x, (cand - 1) / 2, cand) != 1)
                .expect("odd prime has a non-residue");
            let omega = (2..cand)
                .map(|x| pow_mod(x, (cand - 1) / p, cand))
                .find(|&w| w != 1)
                .expect("l = 1 mod p has elements of order p");
            out.push(NttPrime {
                modulus: cand,
                log_len,
                root: pow_mod(non_residue, (cand - 1) >> log_len, cand),
                omega,
            });
            product *= cand;
        }
        cand -= step;
    }
    out
}

/// Montgomery arithmetic modulo an odd `l < 2^62`, `R = 2^64`.
#[derive(Clone, Copy, Debug)]
pub struct Montgomery {
    l: u64,
    neg_inv: u64,
    r2: u64,
}

impl Montgomery {
    pub fn new(l: u64) -> Self {
        assert!(l % 2 == 1 && l < 1 << 62);
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(l.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % l as u128) as u64;
        let r2 = ((r as u128 * r as u128) % l as u128) as u64;
        Montgomery {
            l,
            neg_inv: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline]
    fn reduce(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.l as u128) >> 64) as u64;
        if u >= self.l {
            u - self.l
        } else {
            u
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    pub fn to_mont(&self, x: u64) -> u64 {
        self.mul(x % self.l, self.r2)
    }

    pub fn from_mont(&self, x: u64) -> u64 {
        self.reduce(x as u128)
    }

    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.l {
            s - self.l
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.l - b
        }
    }
}

/// In-place transform of Montgomery-form data of length `2^j <= 2^log_len`.
fn transform(a: &mut [u64], prime: &NttPrime, mont: &Montgomery, inverse: bool) {
    let n = a.len();
    assert!(n.is_power_of_two() && n.trailing_zeros() <= prime.log_len);
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let l = prime.modulus;
    let mut len = 2;
    while len <= n {
        let mut w = pow_mod(prime.root, 1u64 << (prime.log_len - len.trailing_zeros()), l);
        if inverse {
            w = pow_mod(w, l - 2, l);
        }
        let w = mont.to_mont(w);
        let half = len / 2;
        let mut twiddles = Vec::with_capacity(half);
        let mut t = mont.to_mont(1);
        for _ in 0..half {
            twiddles.push(t);
            t = mont.mul(t, w);
        }
        for chunk in a.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((x, y), &tw) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                let v = mont.mul(*y, tw);
                let u = *x;
                *x = mont.add(u, v);
                *y = mont.sub(u, v);
            }
        }
        len <<= 1;
    }
    if inverse {
        let scale = mont.to_mont(pow_mod(n as u64 % l, l - 2, l));
        for x in a.iter_mut() {
            *x = mont.mul(*x, scale);
        }
    }
}

/// `h[j] = sum_i f[i] f[(j - i) mod n]` modulo `prime.modulus`, plain residues in and out.
pub fn cyclic_self_convolution(f: &[u64], prime: &NttPrime) -> Vec<u64> {
    let n = f.len();
    if n == 0 {
        return Vec::new();
    }
    let size = (2 * n - 1).next_power_of_two();
    let mont = Montgomery::new(prime.modulus);
    let mut a = vec![0u64; size];
    for (x, &v) in a.iter_mut().zip(f) {
        *x = mont.to_mont(v);
    }
    transform(&mut a, prime, &mont, false);
    for x in a.iter_mut() {
        *x = mont.mul(*x, *x);
    }
    transform(&mut a, prime, &mont, true);
    (0..n)
        .map(|j| {
            let hi = if j + n < size { a[j + n] } else { 0 };
            mont.from_mont(mont.add(a[j], hi))
        })
        .collect()
}

/// `log2` of the transform length used for a cyclic convolution of length `n`.
pub fn log_len_for(n: usize) -> u32 {
    (2 * n.max(1) - 1).next_power_of_two().trailing_zeros()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::modular::mul_mod;
    use proptest::prelude::*;

    #[test]
    fn primes_have_roots() {
        let ps = ntt_primes(7, 10, &BigInt::from(1u64 << 62));
        assert!(ps.len() >= 2);
        for pr in ps {
            let l = pr.modulus;
            assert_eq!((l - 1) % (7 << 10), 0);
            assert_eq!(pow_mod(pr.root, 1 << 10, l), 1);
            assert_eq!(pow_mod(pr.root, 1 << 9, l), l - 1);
            assert_eq!(pow_mod(pr.omega, 7, l), 1);
            assert_ne!(pr.omega, 1);
        }
    }

    proptest! {
        #[test]
        fn convolution_matches_naive(f in prop::collection::vec(0u64..1_000_000, 1..60)) {
            let pr = ntt_primes(3, log_len_for(f.len()), &BigInt::from(10)).remove(0);
            let l = pr.modulus;
            let n = f.len();
            let naive: Vec<u64> = (0..n)
                .map(|j| (0..n).fold(0, |s, i| (s + mul_mod(f[i], f[(j + n - i) % n], l)) % l))
                .collect();
            prop_assert_eq!(cyclic_self_convolution(&f, &pr), naive);
        }

        #[test]
        fn montgomery_roundtrip(x in 0u64..(1 << 61), y in 0u64..(1 << 61)) {
            let l = (1u64 << 61) - 1;
            let m = Montgomery::new(l);
            prop_assert_eq!(m.from_mont(m.mul(m.to_mont(x), m.to_mont(y))), mul_mod(x % l, y % l, l));
        }
    }
}
