//! Euler factors at good and tame primes: `Z_k(p;T)` from moments, its
//! trivial part, the middle factor `M_k(p;T)` and their certification.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::field::{build_extension_with_budget, DEFAULT_FIELD_BUDGET};
use crate::arith::modular::{big_pow, jacobi, ord_p};
use crate::arith::{power_sums_from_polynomial, series_exp_from_power_sums, IntPolynomial};
use crate::error::{Error, Result};
use crate::moments::moments_upto;

pub use crate::polygon::{newton_polygon, Polygon};

/// Degree of `Z_k(p;T)`.
pub fn degree_z(k: u32, p: u64) -> usize {
    let (k, p) = (k as u64, p);
    let d = match (k % 2 == 1, p == 2) {
        (true, true) => k.div_ceil(2),
        (true, false) => k.div_ceil(2) - (k + p) / (2 * p),
        (false, true) => (k + 2) / 4,
        (false, false) => k / 2 - k / (2 * p),
    };
    d as usize
}

/// `(n_k(p), m_k(p)) = (floor(k/4p + 1/2), floor(k/2p) + [4 | k])` for even `k`, odd `p`.
pub fn r_exponents(k: u32, p: u64) -> (u32, u32) {
    let k = k as u64;
    let n = (k + 2 * p) / (4 * p);
    let m = k / (2 * p) + u64::from(k % 4 == 0);
    (n as u32, m as u32)
}

/// `(a_k, b_k)`, the multiplicities of `1 -+ 2^{k/2} T` in `Z_k(2;T)`.
pub fn yun_exponents(k: u32) -> (u32, u32) {
    let base = k / 24;
    let r = k % 24;
    let a = base + u32::from([0, 8, 12, 16, 18, 20].contains(&r));
    let b = base + u32::from([6, 12, 14, 18, 20, 22].contains(&r));
    (a, b)
}

fn half_weight_power(k: u32, p: u64) -> BigInt {
    big_pow(p, k / 2)
}

/// The factor of `Z_k` between `1 - T` and `M_k`: `R_k(p;T)` for even `k`
/// and odd `p`, Yun's explicit factor for even `k` at 2, and 1 otherwise.
pub fn r_factor(k: u32, p: u64) -> IntPolynomial {
    if k % 2 == 1 {
        return IntPolynomial::one();
    }
    let h = half_weight_power(k, p);
    if p == 2 {
        let (a, b) = yun_exponents(k);
        return IntPolynomial::linear(-&h)
            .pow(a)
            .mul(&IntPolynomial::linear(h).pow(b));
    }
    let (n, m) = r_exponents(k, p);
    let signed = if p % 4 == 1 { -&h } else { h.clone() };
    IntPolynomial::linear(signed)
        .pow(n)
        .mul(&IntPolynomial::linear(-h).pow(m - n))
}

/// `(1 - T) * r_factor(k, p)`.
pub fn trivial_factor(k: u32, p: u64) -> IntPolynomial {
    IntPolynomial::linear(-1).mul(&r_factor(k, p))
}

/// Predicted degree of `M_k(p;T)`.
pub fn degree_m(k: u32, p: u64) -> usize {
    degree_z(k, p) - trivial_factor(k, p).degree()
}

/// `2 floor((k+2)/12) - 2 [12 | k]`, the degree of `M_k(2;T)` for even `k`.
pub fn degree_m_at_2_even(k: u32) -> usize {
    (2 * ((k + 2) / 12) - 2 * u32::from(k % 12 == 0)) as usize
}

/// Whether `p` is a prime of good reduction for `Sym^k`.
pub fn is_unramified(k: u32, p: u64) -> bool {
    if k % 2 == 1 {
        p == 2 || p > k as u64
    } else {
        p != 2 && 2 * p > k as u64
    }
}

/// `k!! = 1 * 3 * 5 * ... * k` for odd `k`.
pub fn odd_double_factorial(k: u32) -> BigInt {
    (1..=k).step_by(2).map(BigInt::from).product()
}

/// Moments `m_2^k(p^n)` for `k <= kmax`, computed once per extension degree.
pub struct MomentTable {
    p: u64,
    kmax: u32,
    field_budget: u64,
    cache: Mutex<HashMap<u32, Arc<Vec<BigInt>>>>,
}

impl MomentTable {
    pub fn new(p: u64, kmax: u32) -> Self {
        Self::with_budget(p, kmax, DEFAULT_FIELD_BUDGET)
    }

    pub fn with_budget(p: u64, kmax: u32, field_budget: u64) -> Self {
        MomentTable {
            p,
            kmax,
            field_budget,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn field_budget(&self) -> u64 {
        self.field_budget
    }

    /// Whether `F_{p^n}` fits the field budget.
    pub fn affordable(&self, n: u32) -> bool {
        (self.p as u128)
            .checked_pow(n)
            .is_some_and(|q| q <= self.field_budget as u128)
    }

    /// `m_2^k(p^n)` for `k = 0..=kmax`.
    pub fn at(&self, n: u32) -> Result<Arc<Vec<BigInt>>> {
        let mut cache = self.cache.lock().expect("moment cache poisoned");
        if let Some(v) = cache.get(&n) {
            return Ok(v.clone());
        }
        let field = build_extension_with_budget(self.p, n, self.field_budget)?;
        let v = Arc::new(moments_upto(self.kmax, &field)?);
        cache.insert(n, v.clone());
        Ok(v)
    }

    /// `m_2^k(p^1), ..., m_2^k(p^count)`.
    pub fn power_sums(&self, k: u32, count: usize) -> Result<Vec<BigInt>> {
        if k > self.kmax {
            return Err(Error::InvalidArgument(format!(
                "table holds k <= {}, asked for {k}",
                self.kmax
            )));
        }
        (1..=count as u32)
            .map(|n| Ok(self.at(n)?[k as usize].clone()))
            .collect()
    }
}

/// `Z_k(p;T)` from `deg Z` moments, checked to have exactly that degree.
pub fn zeta_poly(k: u32, p: u64) -> Result<IntPolynomial> {
    zeta_poly_from_table(k, &MomentTable::new(p, k))
}

pub fn zeta_poly_from_table(k: u32, table: &MomentTable) -> Result<IntPolynomial> {
    let p = table.prime();
    let d = degree_z(k, p);
    let m = table.power_sums(k, d)?;
    let z = series_exp_from_power_sums(&m, d)?;
    if z.degree() != d {
        return Err(Error::DegreeMismatch {
            k,
            p,
            expected: d,
            got: z.degree(),
        });
    }
    Ok(z)
}

/// `M_k(p;T) = Z_k(p;T) / trivial_factor(k, p)`.
pub fn mid_poly(k: u32, p: u64) -> Result<IntPolynomial> {
    zeta_poly(k, p)?.div_exact(&trivial_factor(k, p))
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeilReport {
    pub degree: usize,
    /// Largest `||gamma| - p^{(k+1)/2}| / p^{(k+1)/2}` over reciprocal roots.
    pub max_relative_error: f64,
}

pub const WEIL_TOLERANCE: f64 = 1e-8;

/// Purity and reciprocity of `M`: exactly, `a_d a_{d-j} = a_j p^{(k+1)(d-j)}`
/// and `|a_d| = p^{(k+1)d/2}`; numerically, every reciprocal root has modulus
/// `p^{(k+1)/2}` to relative accuracy `1e-8`.
pub fn weil_certify(m: &IntPolynomial, k: u32, p: u64) -> Result<WeilReport> {
    if !m.coeff(0).is_one() {
        return Err(Error::check("weil", "constant term is not 1"));
    }
    let d = m.degree();
    let w = k as u64 + 1;
    let lead = m.leading();
    for j in 0..=d {
        let lhs = &lead * m.coeff(d - j);
        let rhs = m.coeff(j) * big_pow(p, (w * (d - j) as u64) as u32);
        if lhs != rhs {
            return Err(Error::check("weil-reciprocity", format!("index {j}")));
        }
    }
    if (w * d as u64) % 2 == 1 || lead.abs() != big_pow(p, (w * d as u64 / 2) as u32) {
        return Err(Error::check("weil-leading", format!("|a_{d}| = {}", lead.abs())));
    }
    let scale = (p as f64).powf(w as f64 / 2.0);
    let max_relative_error = m
        .reciprocal_roots(scale)
        .iter()
        .map(|g| (g.norm() - scale).abs() / scale)
        .fold(0.0, f64::max);
    if !(max_relative_error < WEIL_TOLERANCE) {
        return Err(Error::check(
            "weil-roots",
            format!("relative modulus error {max_relative_error:.3e}"),
        ));
    }
    Ok(WeilReport {
        degree: d,
        max_relative_error,
    })
}

/// `m_2^k(p^{d+1})` predicted from `Z` and enumerated directly.
pub fn predict_next_moment(z: &IntPolynomial, k: u32, table: &MomentTable) -> Result<(BigInt, BigInt)> {
    let p = table.prime();
    let n = z.degree() + 1;
    let predicted = power_sums_from_polynomial(z, n).pop().unwrap();
    let enumerated = table.at(n as u32)?[k as usize].clone();
    if predicted != enumerated {
        return Err(Error::Mismatch {
            k,
            p,
            n: n as u32,
            predicted: predicted.to_string(),
            enumerated: enumerated.to_string(),
        });
    }
    Ok((predicted, enumerated))
}

/// `-[T] M_k(p;T) = -m_2^k(p) - 1 - [4 | k] p^{k/2}` at unramified `p`.
pub fn trace_identity_check(k: u32, p: u64, m: &IntPolynomial, m1: &BigInt) -> Result<()> {
    if !is_unramified(k, p) {
        return Err(Error::InvalidArgument(format!("p={p} is ramified for k={k}")));
    }
    let mut tr = -m1 - 1;
    if k % 4 == 0 {
        tr -= big_pow(p, k / 2);
    }
    let lhs = -m.coeff(1);
    if lhs != tr {
        return Err(Error::check(
            "trace-identity",
            format!("k={k} p={p}: -[T]M = {lhs}, moment side {tr}"),
        ));
    }
    Ok(())
}

/// `(-1)^d a_d = (p / k!!) p^{(k^2-1)/4}` for odd `k < p`.
pub fn det_frobenius_check(k: u32, p: u64, m: &IntPolynomial) -> Result<()> {
    if k % 2 == 0 || p <= k as u64 {
        return Err(Error::InvalidArgument("needs odd k < p".into()));
    }
    let expected = determinant_for_odd(k, p);
    let d = m.degree();
    let lead = if d % 2 == 1 { -m.leading() } else { m.leading() };
    if lead != expected {
        return Err(Error::check(
            "det-frobenius",
            format!("k={k} p={p}: (-1)^d a_d = {lead}, expected {expected}"),
        ));
    }
    Ok(())
}

fn determinant_for_odd(k: u32, p: u64) -> BigInt {
    BigInt::from(determinant_sign(k, p)) * big_pow(p, (k * k - 1) / 4)
}

/// `ord_p(c_n) >= n(n-1)` for every nonzero coefficient of `Z`.
pub fn haessig_bound_holds(z: &IntPolynomial, p: u64) -> bool {
    z.coeffs()
        .iter()
        .enumerate()
        .all(|(n, c)| ord_p(c, p).map_or(true, |v| v as usize >= n * n.saturating_sub(1)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FactorRoute {
    /// All `deg Z` moments enumerated.
    Enumerated,
    /// Half the moments plus the functional equation of `M`.
    Reciprocity,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EulerFactorRecord {
    pub k: u32,
    pub p: u64,
    pub z: IntPolynomial,
    pub r: IntPolynomial,
    pub m: IntPolynomial,
    /// `m_2^k(p^n)` for `n = 1, 2, ...` as used.
    pub moments: Vec<BigInt>,
    pub route: FactorRoute,
    pub checks: BTreeMap<String, bool>,
}

#[derive(Clone, Copy, Debug)]
pub struct RecordOptions {
    /// Enumerate one extra extension and compare with the prediction.
    pub predict_next: bool,
}

impl Default for RecordOptions {
    fn default() -> Self {
        RecordOptions { predict_next: true }
    }
}

/// Full enumeration route with every applicable certificate.
pub fn euler_record(k: u32, table: &MomentTable, opts: RecordOptions) -> Result<EulerFactorRecord> {
    let p = table.prime();
    let d = degree_z(k, p);
    let moments = table.power_sums(k, d)?;
    let z = series_exp_from_power_sums(&moments, d)?;
    let mut checks = BTreeMap::new();
    if z.degree() != d {
        return Err(Error::DegreeMismatch {
            k,
            p,
            expected: d,
            got: z.degree(),
        });
    }
    checks.insert("degree".to_string(), true);
    let r = r_factor(k, p);
    let m = z.div_exact(&IntPolynomial::linear(-1).mul(&r))?;
    checks.insert("trivial-division".into(), true);
    let expected_m = if p == 2 && k % 2 == 0 {
        degree_m_at_2_even(k)
    } else {
        degree_m(k, p)
    };
    if m.degree() != expected_m {
        return Err(Error::DegreeMismatch {
            k,
            p,
            expected: expected_m,
            got: m.degree(),
        });
    }
    checks.insert("mid-degree".into(), true);
    weil_certify(&m, k, p)?;
    checks.insert("weil".into(), true);
    if is_unramified(k, p) {
        trace_identity_check(k, p, &m, &moments[0])?;
        checks.insert("trace-identity".into(), true);
    }
    if k % 2 == 1 && p > k as u64 {
        det_frobenius_check(k, p, &m)?;
        checks.insert("det-frobenius".into(), true);
    }
    if p != 2 {
        if !haessig_bound_holds(&z, p) {
            return Err(Error::check("haessig", format!("k={k} p={p}")));
        }
        checks.insert("haessig".into(), true);
    }
    if opts.predict_next && table.affordable(d as u32 + 1) {
        predict_next_moment(&z, k, table)?;
        checks.insert("next-moment".into(), true);
    }
    Ok(EulerFactorRecord {
        k,
        p,
        z,
        r,
        m,
        moments,
        route: FactorRoute::Enumerated,
        checks,
    })
}

/// Sign `epsilon` with `(-1)^d a_d = epsilon p^{(k+1)d/2}` at unramified `p`.
pub fn determinant_sign(k: u32, p: u64) -> i32 {
    if k % 2 == 1 && p != 2 {
        let kk = odd_double_factorial(k);
        let kk = u64::try_from(&kk).expect("k!! fits in u64");
        if kk == 1 {
            1
        } else {
            jacobi(p as i64 % kk as i64, kk)
        }
    } else {
        1
    }
}

/// Reconstructs `M_k(p;T)` at an unramified prime from its first
/// `max(1, ceil(d/2))` coefficients and `a_{d-j} = (-1)^d eps a_j p^{(k+1)(d-2j)/2}`.
pub fn euler_record_reciprocity(k: u32, table: &MomentTable) -> Result<EulerFactorRecord> {
    let p = table.prime();
    if !is_unramified(k, p) || p == 2 {
        return Err(Error::InvalidArgument(format!(
            "reciprocity route needs an odd unramified prime, got p={p} for k={k}"
        )));
    }
    let d = degree_m(k, p);
    let count = d.div_ceil(2).max(1);
    let moments = table.power_sums(k, count)?;
    let z_head = series_exp_from_power_sums(&moments, count)?;
    let trivial = trivial_factor(k, p);
    let inv = trivial.series_inverse(count + 1)?;
    let head: Vec<BigInt> = (0..=count)
        .map(|j| (0..=j).map(|i| z_head.coeff(i) * &inv[j - i]).sum())
        .collect();

    let eps = determinant_sign(k, p);
    let signed_eps = if d % 2 == 1 { -eps } else { eps };
    let w = k as usize + 1;
    let mut a = vec![BigInt::zero(); d + 1];
    for j in 0..=d {
        if j < head.len() && 2 * j <= d {
            a[j] = head[j].clone();
        }
    }
    for j in 0..=d / 2 {
        let e = w * (d - 2 * j);
        if e % 2 == 1 {
            return Err(Error::check("reciprocity", "odd exponent in functional equation"));
        }
        let mirrored = &a[j] * big_pow(p, (e / 2) as u32) * signed_eps;
        if 2 * j == d {
            if mirrored != a[j] {
                return Err(Error::check("reciprocity", format!("middle coefficient k={k} p={p}")));
            }
        } else {
            a[d - j] = mirrored;
        }
    }
    for (j, h) in head.iter().enumerate().take(d + 1) {
        if &a[j] != h {
            return Err(Error::check(
                "reciprocity-sign",
                format!("k={k} p={p}: coefficient {j} from moments {h}, from reciprocity {}", a[j]),
            ));
        }
    }
    for h in head.iter().skip(d + 1) {
        if !h.is_zero() {
            return Err(Error::DegreeMismatch {
                k,
                p,
                expected: d,
                got: head.len() - 1,
            });
        }
    }
    let m = IntPolynomial::new(a);
    let mut checks = BTreeMap::new();
    weil_certify(&m, k, p)?;
    checks.insert("weil".to_string(), true);
    trace_identity_check(k, p, &m, &moments[0])?;
    checks.insert("trace-identity".into(), true);
    if k % 2 == 1 {
        det_frobenius_check(k, p, &m)?;
        checks.insert("det-frobenius".into(), true);
    }
    let r = r_factor(k, p);
    let z = trivial.mul(&m);
    Ok(EulerFactorRecord {
        k,
        p,
        z,
        r,
        m,
        moments,
        route: FactorRoute::Reciprocity,
        checks,
    })
}

/// Fields up to this size are enumerated in full by [`euler_record_auto`].
pub const ENUMERATION_LIMIT: u64 = 1 << 16;

/// `M_k(p;T)` by full enumeration when affordable, otherwise by reciprocity.
pub fn euler_record_auto(k: u32, table: &MomentTable) -> Result<EulerFactorRecord> {
    euler_record_auto_with(k, table, RecordOptions { predict_next: false })
}

/// As [`euler_record_auto`], passing `opts` to the enumeration route.
pub fn euler_record_auto_with(k: u32, table: &MomentTable, opts: RecordOptions) -> Result<EulerFactorRecord> {
    let p = table.prime();
    let d = degree_z(k, p) as u32;
    let small = (p as u128)
        .checked_pow(d)
        .is_some_and(|q| q <= ENUMERATION_LIMIT as u128);
    if small || !is_unramified(k, p) || p == 2 {
        euler_record(k, table, opts)
    } else {
        euler_record_reciprocity(k, table)
    }
}

/// Re-derives every certificate listed in `record.checks` from the record
/// alone; `next-moment` enumerates `F_{p^{d+1}}` afresh. Also checks that the
/// stored moments are the power sums of `Z` and that `Z = (1 - T) R M`.
pub fn verify_record(record: &EulerFactorRecord) -> Result<()> {
    let EulerFactorRecord { k, p, z, r, m, moments, .. } = record;
    let (k, p) = (*k, *p);
    if *r != r_factor(k, p) {
        return Err(Error::check("r-factor", format!("k={k} p={p}")));
    }
    if IntPolynomial::linear(-1).mul(r).mul(m) != *z {
        return Err(Error::check("factorization", format!("k={k} p={p}")));
    }
    if moments.is_empty() || power_sums_from_polynomial(z, moments.len()) != *moments {
        return Err(Error::check("moments", format!("k={k} p={p}")));
    }
    for (name, &ok) in &record.checks {
        if !ok {
            return Err(Error::check(name.clone(), format!("recorded as failed for k={k} p={p}")));
        }
        match name.as_str() {
            "degree" => {
                if z.degree() != degree_z(k, p) {
                    return Err(Error::check("degree", format!("k={k} p={p}")));
                }
            }
            "trivial-division" => {
                z.div_exact(&trivial_factor(k, p))?;
            }
            "mid-degree" => {
                let expected = if p == 2 && k % 2 == 0 {
                    degree_m_at_2_even(k)
                } else {
                    degree_m(k, p)
                };
                if m.degree() != expected {
                    return Err(Error::check("mid-degree", format!("k={k} p={p}")));
                }
            }
            "weil" => {
                weil_certify(m, k, p)?;
            }
            "trace-identity" => trace_identity_check(k, p, m, &moments[0])?,
            "det-frobenius" => det_frobenius_check(k, p, m)?,
            "haessig" => {
                if !haessig_bound_holds(z, p) {
                    return Err(Error::check("haessig", format!("k={k} p={p}")));
                }
            }
            "next-moment" => {
                predict_next_moment(z, k, &MomentTable::new(p, k))?;
            }
            other => return Err(Error::check(other.to_string(), "unknown check")),
        }
    }
    Ok(())
}

pub fn mid_poly_auto(k: u32, p: u64) -> Result<IntPolynomial> {
    Ok(euler_record_auto(k, &MomentTable::new(p, k))?.m)
}
