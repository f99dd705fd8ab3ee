//! Finite fields `F_q = F_p[x]/(f)` small enough to enumerate.
//!
//! Elements are stored as integers `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`
//! encoding the coefficient vector of a polynomial of degree `< n`. Every
//! field carries its discrete-log tables and the trace of each power of the
//! generator, which is all the Kloosterman machinery ever needs.

use crate::arith::modular::{factorize, is_prime, pow_mod};
use crate::error::{Error, Result};

/// Default cap on the number of field elements we are willing to tabulate.
pub const DEFAULT_FIELD_BUDGET: u64 = 1 << 22;

/// An element of an [`ExtField`], encoded by its base-`p` coefficient digits.
pub type Elem = u64;

#[derive(Clone)]
pub struct ExtField {
    p: u64,
    n: u32,
    q: u64,
    /// Monic modulus, constant term first, length `n + 1`.
    modulus: Vec<u64>,
    generator: Elem,
    /// `exp[i]` is the encoding of `g^i` for `0 <= i < q - 1`.
    exp: Vec<u32>,
    /// `log[x]` is the discrete log of `x != 0`; `log[0]` is unused.
    log: Vec<u32>,
    /// `trace_pow[i] = tr(g^i)` as an integer in `0..p`.
    trace_pow: Vec<u32>,
    /// `tr(x^j)` for the power basis, `0 <= j < n`.
    basis_trace: Vec<u64>,
}

impl std::fmt::Debug for ExtField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExtField")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

/// Builds `F_{p^n}` with the lexicographically least monic irreducible
/// modulus and the smallest generator of the multiplicative group.
pub fn build_extension(p: u64, n: u32) -> Result<ExtField> {
    build_extension_with_budget(p, n, DEFAULT_FIELD_BUDGET)
}

pub fn build_extension_with_budget(p: u64, n: u32, budget: u64) -> Result<ExtField> {
    let q = check_size(p, n, budget)?;
    let modulus = least_irreducible(p, n as usize);
    ExtField::from_parts(p, n, q, modulus)
}

/// Builds `F_{p^n}` on a caller-chosen modulus, which must be monic,
/// irreducible and of degree `n`.
pub fn build_extension_with_modulus(p: u64, n: u32, modulus: Vec<u64>) -> Result<ExtField> {
    let q = check_size(p, n, DEFAULT_FIELD_BUDGET)?;
    if modulus.len() != n as usize + 1 || modulus[n as usize] != 1 {
        return Err(Error::InvalidArgument(format!(
            "modulus must be monic of degree {n}"
        )));
    }
    if modulus.iter().any(|&c| c >= p) || !is_irreducible(&modulus, p) {
        return Err(Error::InvalidArgument("modulus is not irreducible".into()));
    }
    ExtField::from_parts(p, n, q, modulus)
}

fn check_size(p: u64, n: u32, budget: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("extension degree must be >= 1".into()));
    }
    let q = (p as u128).checked_pow(n).unwrap_or(u128::MAX);
    if q > budget as u128 || q > u32::MAX as u128 {
        return Err(Error::BudgetExceeded {
            what: "field",
            size: q,
            budget: budget as u128,
        });
    }
    Ok(q as u64)
}

impl ExtField {
    fn from_parts(p: u64, n: u32, q: u64, modulus: Vec<u64>) -> Result<Self> {
        let mut field = ExtField {
            p,
            n,
            q,
            modulus,
            generator: 0,
            exp: Vec::new(),
            log: Vec::new(),
            trace_pow: Vec::new(),
            basis_trace: Vec::new(),
        };
        field.basis_trace = (0..n as usize)
            .map(|j| {
                let xj = field.encode(&monomial(j, n as usize));
                let t = field.trace_by_frobenius(xj);
                debug_assert!(t < p);
                t
            })
            .collect();
        field.generator = field.find_generator();
        let order = (q - 1) as usize;
        let mut exp = Vec::with_capacity(order);
        let mut log = vec![u32::MAX; q as usize];
        let mut x: Elem = 1;
        for i in 0..order {
            exp.push(x as u32);
            log[x as usize] = i as u32;
            x = field.mul(x, field.generator);
        }
        debug_assert_eq!(x, 1);
        field.trace_pow = exp.iter().map(|&e| field.trace(e as Elem) as u32).collect();
        field.exp = exp;
        field.log = log;
        Ok(field)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn digits(&self, x: Elem) -> Vec<u64> {
        let mut d = Vec::with_capacity(self.n as usize);
        let mut x = x;
        for _ in 0..self.n {
            d.push(x % self.p);
            x /= self.p;
        }
        d
    }

    pub fn encode(&self, digits: &[u64]) -> Elem {
        digits
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * self.p + (c % self.p))
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&sum)
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if self.n == 1 {
            return (a * b) % self.p;
        }
        let prod = poly_mul(&self.digits(a), &self.digits(b), self.p);
        self.encode(&poly_rem(prod, &self.modulus, self.p))
    }

    pub fn pow(&self, mut base: Elem, mut e: u64) -> Elem {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `g^i`, with `i` taken modulo `q - 1`.
    #[inline]
    pub fn exp(&self, i: u64) -> Elem {
        self.exp[(i % (self.q - 1)) as usize] as Elem
    }

    #[inline]
    pub fn dlog(&self, x: Elem) -> Option<u64> {
        (x != 0).then(|| self.log[x as usize] as u64)
    }

    pub fn inv(&self, x: Elem) -> Option<Elem> {
        let l = self.dlog(x)?;
        Some(self.exp((self.q - 1 - l) % (self.q - 1)))
    }

    /// Trace to `F_p` through the precomputed linear functional.
    pub fn trace(&self, x: Elem) -> u64 {
        self.digits(x)
            .iter()
            .zip(&self.basis_trace)
            .fold(0, |acc, (c, t)| (acc + c * t) % self.p)
    }

    /// Trace as the Frobenius orbit sum `x + x^p + ... + x^{p^{n-1}}`,
    /// returned as a field element; it always lies in `F_p`.
    pub fn trace_by_frobenius(&self, x: Elem) -> Elem {
        let mut acc = 0;
        let mut y = x;
        for _ in 0..self.n {
            acc = self.add(acc, y);
            y = self.pow(y, self.p);
        }
        acc
    }

    /// `tr(g^i)` for every `i` in `0..q-1`.
    #[inline]
    pub fn trace_of_powers(&self) -> &[u32] {
        &self.trace_pow
    }

    fn find_generator(&self) -> Elem {
        let order = self.q - 1;
        let factors = factorize(order);
        (1..self.q)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&(l, _)| order == 1 || self.pow(g, order / l) != 1)
            })
            .expect("F_q^x is cyclic")
    }
}

fn monomial(j: usize, n: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    v[j] = 1;
    v
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// Remainder modulo a monic polynomial.
fn poly_rem(a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a);
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - dm;
        for (j, &c) in m.iter().enumerate() {
            a[shift + j] = (a[shift + j] + p - (lead * c) % p) % p;
        }
        a = trim(a);
    }
    a.resize(dm, 0);
    a
}

fn poly_rem_general(a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    let m = trim(m.to_vec());
    let lead_inv = pow_mod(*m.last().unwrap(), p - 2, p);
    let monic: Vec<u64> = m.iter().map(|&c| c * lead_inv % p).collect();
    trim(poly_rem(a, &monic, p))
}

fn poly_gcd(a: Vec<u64>, b: Vec<u64>, p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let r = poly_rem_general(a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^{p^d} mod f`, by `d` successive `p`-th powers.
fn x_pow_p_pow(d: usize, f: &[u64], p: u64) -> Vec<u64> {
    let n = f.len() - 1;
    let mulmod = |a: &[u64], b: &[u64]| poly_rem(poly_mul(a, b, p), f, p);
    let mut x = poly_rem(vec![0, 1], f, p);
    for _ in 0..d {
        let mut acc = poly_rem(vec![1], f, p);
        let mut base = x.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base);
            }
            base = mulmod(&base, &base);
            e >>= 1;
        }
        x = acc;
    }
    x.resize(n, 0);
    x
}

/// Rabin's test: `f | x^{p^n} - x` and `gcd(f, x^{p^{n/l}} - x) = 1` for
/// every prime `l | n`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let minus_x = |mut v: Vec<u64>| {
        v[1] = (v[1] + p - 1) % p;
        v
    };
    if !trim(minus_x(x_pow_p_pow(n, f, p))).is_empty() {
        return false;
    }
    factorize(n as u64).iter().all(|&(l, _)| {
        let h = minus_x(x_pow_p_pow(n / l as usize, f, p));
        poly_gcd(f.to_vec(), h, p).len() == 1
    })
}

/// Lexicographically least monic irreducible of degree `n`, ordering
/// candidates by `(c_{n-1}, ..., c_0)`.
pub fn least_irreducible(p: u64, n: usize) -> Vec<u64> {
    all_monic(p, n)
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

/// Lexicographically greatest monic irreducible of degree `n`.
pub fn greatest_irreducible(p: u64, n: usize) -> Vec<u64> {
    let total = p.pow(n as u32);
    (0..total)
        .rev()
        .map(|code| monic_from_code(code, p, n))
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

fn all_monic(p: u64, n: usize) -> impl Iterator<Item = Vec<u64>> {
    (0..p.pow(n as u32)).map(move |code| monic_from_code(code, p, n))
}

fn monic_from_code(code: u64, p: u64, n: usize) -> Vec<u64> {
    let mut f = vec![0; n + 1];
    let mut c = code;
    for slot in f.iter_mut().take(n) {
        *slot = c % p;
        c /= p;
    }
    f[n] = 1;
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_f3() {
        let f = build_extension(3, 1).unwrap();
        assert_eq!(f.generator(), 2);
        assert_eq!(f.order(), 3);
        assert_eq!(f.modulus(), &[0, 1]);
    }

    #[test]
    fn f4_modulus() {
        let f = build_extension(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn f9_trace_is_x_plus_x_cubed() {
        let f = build_extension(3, 2).unwrap();
        for x in 0..9 {
            let frob = f.add(x, f.pow(x, 3));
            assert!(frob < 3, "x + x^3 must lie in F_3");
            assert_eq!(frob, f.trace(x));
        }
    }

    #[test]
    fn errors() {
        assert_eq!(build_extension(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(
            build_extension_with_budget(13, 7, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(build_extension_with_modulus(2, 2, vec![1, 0, 1]).is_err());
    }

    #[test]
    fn generator_has_full_order() {
        for (p, n) in [(2, 1), (2, 3), (5, 2), (7, 3), (13, 2)] {
            let f = build_extension(p, n).unwrap();
            let order = f.order() - 1;
            let mut seen = std::collections::HashSet::new();
            for i in 0..order {
                assert!(seen.insert(f.exp(i)));
            }
            assert_eq!(seen.len() as u64, order);
            for x in 1..f.order() {
                let inv = f.inv(x).unwrap();
                assert_eq!(f.mul(x, inv), 1);
            }
        }
    }

    #[test]
    fn irreducibility_counts() {
        // Number of monic irreducibles of degree n over F_p (necklace count).
        let count = |p: u64, n: usize| all_monic(p, n).filter(|f| is_irreducible(f, p)).count();
        assert_eq!(count(2, 2), 1);
        assert_eq!(count(2, 3), 2);
        assert_eq!(count(2, 4), 3);
        assert_eq!(count(3, 2), 3);
        assert_eq!(count(3, 3), 8);
        assert_eq!(count(5, 2), 10);
    }
}
