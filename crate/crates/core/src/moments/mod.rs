//! Kloosterman sums `Kl_2(a; q)`, symmetric-power traces and the moments
//! `m_2^k(q) = sum_a Sym^k(a)`.

pub mod bulk;
pub mod tally;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::modular::{crt_primes, crt_symmetric, mul_mod};
use crate::arith::ntt::{cyclic_self_convolution, log_len_for, ntt_primes};
use crate::arith::{cyc_reduce_to_integer, CyclotomicInt, ExtField};
use crate::error::{Error, Result};

pub use bulk::{bulk_envelope_holds, kloosterman_all_bulk, moment_from_bulk};
pub use tally::{tallies_direct, tallies_fft, TraceTallies, DEFAULT_FFT_BUDGET};

/// Fields up to this size use the cyclotomic reference route by default.
pub const REFERENCE_LIMIT: u64 = 1 << 12;

/// A Kloosterman sum with its exact value and a float approximation.
#[derive(Clone, Debug, PartialEq)]
pub struct KloostermanValue {
    pub a: u64,
    pub exact: CyclotomicInt,
    pub float: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentRoute {
    /// Direct tallies, then `Sym^k` in `Z[zeta_p]`.
    Reference,
    /// `Kl(g^j)` as a cyclic self-convolution modulo NTT primes, then CRT.
    Convolution,
    Auto,
}

/// `sum_{x != 0} zeta^{tr(x + a/x)}` in canonical form.
pub fn kloosterman_exact(a: u64, field: &ExtField) -> Result<CyclotomicInt> {
    kloosterman_with_character(a, field, 1)
}

/// The same sum for the character `psi^c`, i.e. `zeta^{c tr(x + a/x)}`.
pub fn kloosterman_with_character(a: u64, field: &ExtField, c: u64) -> Result<CyclotomicInt> {
    let p = field.characteristic();
    if c % p == 0 {
        return Err(Error::InvalidArgument("character must be nontrivial".into()));
    }
    let j = field
        .dlog(a)
        .ok_or_else(|| Error::InvalidArgument("a must be nonzero".into()))?;
    let row = tally::tally_row(field, j);
    let mut twisted = vec![0u64; p as usize];
    for (t, &n) in row.iter().enumerate() {
        twisted[(t as u64 * c % p) as usize] += n as u64;
    }
    Ok(CyclotomicInt::from_tally(p, &twisted))
}

pub fn kloosterman_value(a: u64, field: &ExtField) -> Result<KloostermanValue> {
    let exact = kloosterman_exact(a, field)?;
    let float = exact.to_complex().re;
    Ok(KloostermanValue { a, exact, float })
}

/// `Sym^k` trace `s_k` from `s_j = t s_{j-1} - q s_{j-2}`, `s_0 = 1`, `s_{-1} = 0`.
pub fn sym_power_trace(k: u32, t: &CyclotomicInt, q: u64) -> CyclotomicInt {
    sym_power_traces(k, t, q).pop().unwrap()
}

/// `s_0, ..., s_k`.
pub fn sym_power_traces(k: u32, t: &CyclotomicInt, q: u64) -> Vec<CyclotomicInt> {
    let p = t.prime();
    let qb = BigInt::from(q);
    let mut out = vec![CyclotomicInt::from_integer(p, 1)];
    let mut prev = CyclotomicInt::zero(p);
    for _ in 0..k {
        let cur = out.last().unwrap();
        let next = t.mul(cur).sub(&prev.scale(&qb));
        prev = cur.clone();
        out.push(next);
    }
    out
}

/// `sum_{j <= k/2} (-1)^j C(k-j, j) q^j t^{k-2j}`.
pub fn sym_power_trace_closed(k: u32, t: &CyclotomicInt, q: u64) -> CyclotomicInt {
    let p = t.prime();
    let mut powers = vec![CyclotomicInt::from_integer(p, 1)];
    for i in 0..k as usize {
        powers.push(powers[i].mul(t));
    }
    let mut acc = CyclotomicInt::zero(p);
    for j in 0..=(k / 2) {
        let mut c = binomial(k - j, j) * num_traits::pow(BigInt::from(q), j as usize);
        if j % 2 == 1 {
            c = -c;
        }
        acc = acc.add(&powers[(k - 2 * j) as usize].scale(&c));
    }
    acc
}

pub(crate) fn binomial(n: u32, r: u32) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    (0..r).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `m_2^k(q)`.
pub fn moment(k: u32, field: &ExtField) -> Result<BigInt> {
    Ok(moments_upto(k, field)?.pop().unwrap())
}

/// `m_2^0(q), ..., m_2^{kmax}(q)` from a single pass over `a`.
pub fn moments_upto(kmax: u32, field: &ExtField) -> Result<Vec<BigInt>> {
    moments_upto_via(kmax, field, MomentRoute::Auto)
}

pub fn moments_upto_via(kmax: u32, field: &ExtField, route: MomentRoute) -> Result<Vec<BigInt>> {
    let route = match route {
        MomentRoute::Auto if field.order() <= REFERENCE_LIMIT => MomentRoute::Reference,
        MomentRoute::Auto => MomentRoute::Convolution,
        r => r,
    };
    match route {
        MomentRoute::Reference => moments_reference(kmax, &tallies_direct(field), 1),
        _ => Ok(moments_ntt(kmax, field)),
    }
}

/// Moments computed with the additive character `psi^c`; the answer does
/// not depend on `c`.
pub fn moments_with_character(kmax: u32, field: &ExtField, c: u64) -> Result<Vec<BigInt>> {
    if c % field.characteristic() == 0 {
        return Err(Error::InvalidArgument("character must be nontrivial".into()));
    }
    moments_reference(kmax, &tallies_direct(field), c)
}

fn moments_reference(kmax: u32, tallies: &TraceTallies, c: u64) -> Result<Vec<BigInt>> {
    let p = tallies.prime();
    let q = tallies.order();
    let zero = || vec![CyclotomicInt::zero(p); kmax as usize + 1];
    let sums = tallies
        .rows()
        .fold(zero, |mut acc, row| {
            let mut twisted = vec![0u64; p as usize];
            for (t, &n) in row.iter().enumerate() {
                twisted[(t as u64 * c % p) as usize] += n as u64;
            }
            let t = CyclotomicInt::from_tally(p, &twisted).neg();
            for (slot, s) in acc.iter_mut().zip(sym_power_traces(kmax, &t, q)) {
                *slot = slot.add(&s);
            }
            acc
        })
        .reduce(zero, |a, b| a.iter().zip(&b).map(|(x, y)| x.add(y)).collect());
    sums.iter().map(cyc_reduce_to_integer).collect()
}

/// `|m_2^k(q)| <= (q - 1)(k + 1) q^{k/2}`.
fn moment_bound(kmax: u32, q: u64) -> BigInt {
    BigInt::from(q - 1) * (kmax + 1) * num_traits::pow(BigInt::from(q), kmax.div_ceil(2) as usize)
}

/// Adds `Sym^0..Sym^kmax` of the pair with trace `t = -Kl` and norm `q` into `acc`, mod `l`.
fn accumulate_sym(acc: &mut [u64], kl: u64, qm: u64, l: u64) {
    let t = (l - kl) % l;
    let (mut prev, mut cur) = (0u64, 1u64);
    acc[0] = (acc[0] + 1) % l;
    for slot in acc.iter_mut().skip(1) {
        let next = (mul_mod(t, cur, l) + l - mul_mod(qm, prev, l)) % l;
        prev = cur;
        cur = next;
        *slot = (*slot + cur) % l;
    }
}

fn crt_combine(residues: &[Vec<u64>], moduli: &[u64], width: usize) -> Vec<BigInt> {
    (0..width)
        .map(|k| {
            let r: Vec<u64> = residues.iter().map(|v| v[k]).collect();
            crt_symmetric(&r, moduli)
        })
        .collect()
}

/// `Kl(g^j) = sum_i psi(tr g^i) psi(tr g^{j-i})` for all `j` at once, modulo
/// primes `l = 1 (mod p 2^L)` with `zeta_p -> omega`.
fn moments_ntt(kmax: u32, field: &ExtField) -> Vec<BigInt> {
    let p = field.characteristic();
    let q = field.order();
    let tr = field.trace_of_powers();
    let primes = ntt_primes(p, log_len_for(tr.len()), &moment_bound(kmax, q));
    let width = kmax as usize + 1;
    let residues: Vec<Vec<u64>> = primes
        .iter()
        .map(|pr| {
            let l = pr.modulus;
            let mut w = vec![1u64; p as usize];
            for c in 1..p as usize {
                w[c] = mul_mod(w[c - 1], pr.omega, l);
            }
            let f: Vec<u64> = tr.iter().map(|&t| w[t as usize]).collect();
            let kl = cyclic_self_convolution(&f, pr);
            let qm = q % l;
            let mut acc = vec![0u64; width];
            for &v in &kl {
                accumulate_sym(&mut acc, v, qm, l);
            }
            acc
        })
        .collect();
    let moduli: Vec<u64> = primes.iter().map(|pr| pr.modulus).collect();
    crt_combine(&residues, &moduli, width)
}

/// The same moments from trace tallies, modulo word primes.
pub fn moments_from_tallies(kmax: u32, tallies: &TraceTallies) -> Vec<BigInt> {
    let p = tallies.prime();
    let q = tallies.order();
    let primes = crt_primes(p, &moment_bound(kmax, q));
    let width = kmax as usize + 1;
    let residues: Vec<Vec<u64>> = primes
        .iter()
        .map(|rp| {
            let l = rp.modulus;
            let mut w = vec![1u64; p as usize];
            for c in 1..p as usize {
                w[c] = mul_mod(w[c - 1], rp.omega, l);
            }
            let qm = q % l;
            tallies
                .rows()
                .fold(
                    || vec![0u64; width],
                    |mut acc, row| {
                        let kl = row
                            .iter()
                            .zip(&w)
                            .fold(0u64, |s, (&n, &wc)| (s + mul_mod(n as u64, wc, l)) % l);
                        accumulate_sym(&mut acc, kl, qm, l);
                        acc
                    },
                )
                .reduce(
                    || vec![0u64; width],
                    |a, b| a.iter().zip(&b).map(|(x, y)| (x + y) % l).collect(),
                )
        })
        .collect();
    let moduli: Vec<u64> = primes.iter().map(|rp| rp.modulus).collect();
    crt_combine(&residues, &moduli, width)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{build_extension, build_extension_with_modulus};
    use crate::arith::field::greatest_irreducible;
    use proptest::prelude::*;

    fn int(p: u64, n: i64) -> CyclotomicInt {
        CyclotomicInt::from_integer(p, n)
    }

    #[test]
    fn kloosterman_examples() {
        let f2 = build_extension(2, 1).unwrap();
        assert_eq!(kloosterman_exact(1, &f2).unwrap(), int(2, 1));
        let f3 = build_extension(3, 1).unwrap();
        let k1 = kloosterman_exact(1, &f3).unwrap();
        assert_eq!(cyc_reduce_to_integer(&k1).unwrap(), BigInt::from(-1));
        assert_eq!(kloosterman_exact(2, &f3).unwrap(), int(3, 2));
        assert!(kloosterman_exact(0, &f3).is_err());
    }

    #[test]
    fn kloosterman_is_real_and_bounded() {
        // Invariance under the substitution x -> a/x gives reality: the
        // exact value equals its complex conjugate (Galois action by -1).
        for (p, n) in [(5, 1), (5, 2), (7, 2), (3, 3)] {
            let f = build_extension(p, n).unwrap();
            let q = f.order() as f64;
            for a in 1..f.order() {
                let v = kloosterman_value(a, &f).unwrap();
                assert_eq!(v.exact.galois(p - 1), v.exact);
                assert!(v.float.abs() <= 2.0 * q.sqrt() + 1e-9);
            }
        }
    }

    #[test]
    fn bulk_matches_exact() {
        for (p, n) in [(3, 1), (2, 2), (5, 2), (7, 2), (3, 4)] {
            let f = build_extension(p, n).unwrap();
            let bulk = kloosterman_all_bulk(&f).unwrap();
            for (j, &b) in bulk.iter().enumerate() {
                let e = kloosterman_value(f.exp(j as u64), &f).unwrap().float;
                assert!((b - e).abs() < 1e-9, "p={p} n={n} j={j}");
            }
        }
    }

    #[test]
    fn sym_power_examples() {
        assert_eq!(sym_power_trace(0, &int(5, 7), 5), int(5, 1));
        assert_eq!(sym_power_trace(3, &int(3, 1), 3), int(3, -5));
        assert_eq!(sym_power_trace(3, &int(3, -2), 3), int(3, 4));
        assert_eq!(sym_power_trace(6, &int(2, -1), 2), int(2, 7));
        assert_eq!(sym_power_trace_closed(6, &int(2, -1), 2), int(2, 7));
    }

    #[test]
    fn moment_examples() {
        for (p, n) in [(2, 1), (3, 1), (5, 1), (2, 3), (3, 2)] {
            let f = build_extension(p, n).unwrap();
            assert_eq!(moment(1, &f).unwrap(), BigInt::from(-1));
            assert_eq!(moment(0, &f).unwrap(), BigInt::from(f.order() - 1));
        }
        let f3 = build_extension(3, 1).unwrap();
        assert_eq!(moment(3, &f3).unwrap(), BigInt::from(-1));
        for p in [3u64, 5, 7, 11, 13] {
            let f = build_extension(p, 1).unwrap();
            assert_eq!(moment(4, &f).unwrap(), BigInt::from(-1 - (p * p) as i64));
        }
        let f2 = build_extension(2, 1).unwrap();
        assert_eq!(moment(6, &f2).unwrap(), BigInt::from(7));
    }

    #[test]
    fn routes_agree() {
        for (p, n) in [(2, 6), (3, 5), (5, 3), (7, 3), (13, 2), (2, 13), (3, 8)] {
            let f = build_extension(p, n).unwrap();
            let a = moments_upto_via(10, &f, MomentRoute::Reference).unwrap();
            let b = moments_upto_via(10, &f, MomentRoute::Convolution).unwrap();
            assert_eq!(a, b, "p={p} n={n}");
            let fft = tallies_fft(&f, DEFAULT_FFT_BUDGET).unwrap();
            assert_eq!(moments_from_tallies(10, &fft), a);
        }
    }

    #[test]
    fn bulk_moments_within_envelope() {
        for (p, n) in [(2, 10), (3, 6), (5, 4), (7, 4), (11, 3)] {
            let f = build_extension(p, n).unwrap();
            let bulk = kloosterman_all_bulk(&f).unwrap();
            let exact = moments_upto(12, &f).unwrap();
            for k in 0..=12 {
                if let Some(m) = moment_from_bulk(k, &bulk, f.order()) {
                    assert_eq!(m, exact[k as usize], "p={p} n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn independent_of_character_and_modulus() {
        for (p, n) in [(3, 3), (5, 2), (7, 2)] {
            let f = build_extension(p, n).unwrap();
            let base = moments_upto(8, &f).unwrap();
            for c in 2..p {
                assert_eq!(moments_with_character(8, &f, c).unwrap(), base);
            }
            let g = build_extension_with_modulus(p, n, greatest_irreducible(p, n as usize)).unwrap();
            assert_ne!(g.modulus(), f.modulus());
            assert_eq!(moments_upto(8, &g).unwrap(), base);
        }
    }

    proptest! {
        #[test]
        fn closed_form_matches_recurrence(
            k in 0u32..14,
            p in prop::sample::select(vec![2u64, 3, 5, 7]),
            coords in prop::collection::vec(-30i64..30, 6),
            q in 1u64..200,
        ) {
            let t = CyclotomicInt::from_coords(
                p,
                coords.iter().take((p - 1) as usize).map(|&c| BigInt::from(c)).collect(),
            );
            prop_assert_eq!(sym_power_trace(k, &t, q), sym_power_trace_closed(k, &t, q));
        }
    }
}
