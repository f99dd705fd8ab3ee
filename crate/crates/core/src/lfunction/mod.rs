//! Completed L-functions `Lambda_k(s)` from Euler data, evaluated by a
//! smoothed approximate functional equation.

mod gamma;
mod oracles;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::modular::primes_up_to;
use crate::arith::poly::big_to_f64;
use crate::arith::IntPolynomial;
use crate::error::{Error, Result};
use crate::hodge::gamma_factor;
use crate::invariants::{conductor, epsilon_sign, local_factor};
use crate::local_factors::{euler_record_auto, is_unramified, weil_certify, MomentTable};

pub use gamma::{gamma, ln_gamma};
pub use oracles::{chi3, dirichlet_l_chi3, eta_oracle_level6_weight4, hurwitz_zeta};

pub const FLAG_SIGN: &str = "sign";
pub const FLAG_CONDUCTOR_2: &str = "conductor-2-part";
pub const FLAG_FACTOR_2: &str = "local-factor-2";

#[derive(Clone, Debug, PartialEq)]
pub struct LFunctionSpec {
    pub k: u32,
    /// Motivic weight `k + 1`.
    pub weight: u32,
    /// `Lambda(s) = sign * Lambda(center_shift - s)`.
    pub center_shift: u32,
    pub conductor: BigInt,
    /// `j` in `Gamma((s - j)/2)`.
    pub gamma_shifts: Vec<u32>,
    pub sign: i32,
    /// Inverse local factors `L_p(s)^{-1}` as polynomials in `T = p^{-s}`.
    pub euler: BTreeMap<u64, IntPolynomial>,
    pub conjectural_flags: BTreeSet<String>,
}

impl LFunctionSpec {
    /// Archimedean and global data for `k`, with no Euler factors yet.
    pub fn skeleton(k: u32) -> Result<Self> {
        let cond = conductor(k)?;
        let eps = epsilon_sign(k);
        let mut flags = BTreeSet::new();
        if eps.conjectural {
            flags.insert(FLAG_SIGN.to_string());
        }
        if cond.conjectural {
            flags.insert(FLAG_CONDUCTOR_2.to_string());
        }
        Ok(LFunctionSpec {
            k,
            weight: k + 1,
            center_shift: k + 2,
            conductor: cond.value,
            gamma_shifts: gamma_factor(k)?.shifts,
            sign: eps.sign,
            euler: BTreeMap::new(),
            conjectural_flags: flags,
        })
    }

    /// [`Self::skeleton`] plus Euler factors for every prime `p <= pmax`.
    pub fn for_k(k: u32, pmax: u64) -> Result<Self> {
        let mut spec = Self::skeleton(k)?;
        spec.extend_to(pmax)?;
        Ok(spec)
    }

    /// Computes the missing Euler factors up to `pmax`, in parallel over `p`.
    pub fn extend_to(&mut self, pmax: u64) -> Result<()> {
        let k = self.k;
        let m = self.degree();
        let missing: Vec<u64> = primes_up_to(pmax)
            .into_iter()
            .filter(|p| !self.euler.contains_key(p))
            .collect();
        let factors: Vec<(u64, IntPolynomial, bool)> = missing
            .par_iter()
            .map(|&p| {
                let record = euler_record_auto(k, &MomentTable::new(p, k))?;
                if let Some((name, _)) = record.checks.iter().find(|(_, ok)| !**ok) {
                    return Err(Error::check(name.clone(), format!("k={k}, p={p}")));
                }
                if is_unramified(k, p) {
                    if record.m.degree() != m {
                        return Err(Error::DegreeMismatch {
                            k,
                            p,
                            expected: m,
                            got: record.m.degree(),
                        });
                    }
                    weil_certify(&record.m, k, p)?;
                }
                let lf = local_factor(k, p, &record.m)?;
                Ok((p, lf.inverse_factor, lf.conjectural))
            })
            .collect::<Result<_>>()?;
        for (p, f, conjectural) in factors {
            if conjectural {
                self.conjectural_flags.insert(FLAG_FACTOR_2.to_string());
            }
            self.euler.insert(p, f);
        }
        Ok(())
    }

    /// Number of gamma factors `m`.
    pub fn degree(&self) -> usize {
        self.gamma_shifts.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.gamma_shifts.is_empty() && self.conductor == BigInt::from(1)
    }

    /// `gamma(s) = (C / pi^m)^{s/2} prod_j Gamma((s - j)/2)`.
    pub fn gamma_factor(&self, s: Complex64) -> Complex64 {
        self.ln_gamma_factor(s).exp()
    }

    fn ln_gamma_factor(&self, s: Complex64) -> Complex64 {
        let c = big_to_f64(&self.conductor).ln() - self.degree() as f64 * std::f64::consts::PI.ln();
        let mut acc = s * 0.5 * c;
        for &j in &self.gamma_shifts {
            acc += ln_gamma((s - j as f64) * 0.5);
        }
        acc
    }
}

/// `a_1..a_N`, stored with `a[0] = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCoefficients {
    pub n: usize,
    pub a: Vec<BigInt>,
}

impl DirichletCoefficients {
    pub fn get(&self, n: usize) -> &BigInt {
        &self.a[n]
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.a.iter().map(big_to_f64).collect()
    }
}

/// Smallest prime factor for `2..=n`.
fn spf_sieve(n: usize) -> Vec<usize> {
    let mut spf = vec![0usize; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            for j in (i..=n).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i;
                }
            }
        }
    }
    spf
}

/// Dirichlet coefficients of `prod_p L_p(s)`, exact.
pub fn dirichlet_coefficients(spec: &LFunctionSpec, n: usize) -> Result<DirichletCoefficients> {
    let spf = spf_sieve(n);
    let mut local: BTreeMap<usize, Vec<BigInt>> = BTreeMap::new();
    for p in (2..=n).filter(|&i| spf[i] == i) {
        let f = spec
            .euler
            .get(&(p as u64))
            .ok_or(Error::MissingEulerFactor(p as u64))?;
        let mut e = 0;
        let mut pe = 1usize;
        while pe <= n / p {
            pe *= p;
            e += 1;
        }
        local.insert(p, f.series_inverse(e + 1)?);
    }
    let mut a = vec![BigInt::zero(); n + 1];
    if n >= 1 {
        a[1] = BigInt::from(1);
    }
    for i in 2..=n {
        let p = spf[i];
        let (mut rest, mut e) = (i, 0);
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        a[i] = &local[&p][e] * &a[rest];
    }
    Ok(DirichletCoefficients { n, a })
}

/// Vertical-line trapezoid parameters for [`completed_lambda`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadParams {
    pub step: f64,
    /// Test function `G(u) = e^{alpha u^2 + beta u}` on the `s` side and
    /// `G(-u)` on the dual side. A nonzero `beta` makes the functional
    /// equation a nontrivial identity between the two sides.
    pub alpha: f64,
    pub beta: f64,
    /// Minimal distance from the contour to the poles of the integrand.
    pub margin: f64,
    /// Integration over `|Im u| <= t_max`.
    pub t_max: f64,
    /// Truncation `N = ceil(a * sqrt(C) * (1 + |Im s|))`.
    pub a: f64,
    /// Relative tolerance for the tail estimate.
    pub tail_tolerance: f64,
}

impl Default for QuadParams {
    fn default() -> Self {
        QuadParams {
            step: 0.25,
            alpha: 0.0625,
            beta: 0.5,
            margin: 1.5,
            t_max: 40.0,
            a: 30.0,
            tail_tolerance: 1e-10,
        }
    }
}

impl QuadParams {
    pub fn truncation(&self, spec: &LFunctionSpec, s: Complex64) -> usize {
        let c = big_to_f64(&spec.conductor);
        (self.a * c.sqrt() * (1.0 + s.im.abs())).ceil().max(1.0) as usize
    }

    /// Largest prime that [`completed_lambda`] needs over the given points.
    pub fn prime_bound(&self, spec: &LFunctionSpec, points: &[Complex64]) -> u64 {
        points
            .iter()
            .flat_map(|&s| [s, Complex64::new(spec.center_shift as f64, 0.0) - s])
            .map(|s| self.truncation(spec, s))
            .max()
            .unwrap_or(1) as u64
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaValue {
    pub value: Complex64,
    /// Difference to the same sum at twice the step, floored by round-off.
    pub error_estimate: f64,
    pub terms: usize,
    pub tail_estimate: f64,
}

struct Smoothed {
    value: Complex64,
    coarse: Complex64,
    magnitude: f64,
    tail: f64,
}

/// `sum_{n <= N} a_n F(sigma, n)` with
/// `F(sigma, n) = (1/2 pi i) int_(c) gamma(sigma + u) n^{-sigma-u} G(u) du / u`.
fn smoothed_sum(
    spec: &LFunctionSpec,
    a: &[f64],
    sigma: Complex64,
    beta: f64,
    quad: &QuadParams,
) -> Result<Smoothed> {
    let m = spec.degree() as f64;
    let c = (m + quad.margin - sigma.re).max(quad.margin);
    let steps = (quad.t_max / quad.step).round() as i64;
    let log_n: Vec<f64> = (0..a.len()).map(|n| (n.max(1) as f64).ln()).collect();
    let last = a.len() - 1;
    let nodes: Vec<(i64, Complex64, f64, Complex64)> = (-steps..=steps)
        .into_par_iter()
        .map(|i| {
            let u = Complex64::new(c, i as f64 * quad.step);
            let w = sigma + u;
            let front = (spec.ln_gamma_factor(w) + quad.alpha * u * u + beta * u).exp() / u;
            let mut dir = Complex64::zero();
            let mut mag = 0.0;
            for n in 1..a.len() {
                if a[n] != 0.0 {
                    let t = a[n] * (-w * log_n[n]).exp();
                    dir += t;
                    mag += t.norm();
                }
            }
            let f_last = front * (-w * log_n[last]).exp();
            (i, front * dir, front.norm() * mag, f_last)
        })
        .collect();
    let mut value = Complex64::zero();
    let mut coarse = Complex64::zero();
    let mut magnitude = 0.0;
    let mut edge: f64 = 0.0;
    let mut peak: f64 = 0.0;
    let mut f_last = Complex64::zero();
    for &(i, v, mag, fl) in &nodes {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::QuadratureDiverged(format!("non-finite integrand at Im u = {}", i as f64 * quad.step)));
        }
        value += v;
        if i % 2 == 0 {
            coarse += v;
        }
        magnitude += mag;
        f_last += fl;
        peak = peak.max(v.norm());
        if i.abs() == steps {
            edge = edge.max(v.norm());
        }
    }
    if edge > 1e-14 * peak.max(f64::MIN_POSITIVE) {
        return Err(Error::QuadratureDiverged(format!(
            "integrand not negligible at |Im u| = {}",
            quad.t_max
        )));
    }
    let scale = quad.step / (2.0 * std::f64::consts::PI);
    Ok(Smoothed {
        value: value * scale,
        coarse: coarse * 2.0 * scale,
        magnitude: magnitude * scale,
        tail: tail_estimate(spec, f_last.norm() * scale, last),
    })
}

/// Heuristic size of `sum_{n > N} a_n F(sigma, n)` from `|F(sigma, N)|`,
/// with `|a_n| <~ m n^{w/2}` and `N` further terms.
fn tail_estimate(spec: &LFunctionSpec, f_last: f64, n: usize) -> f64 {
    let growth = spec.weight as f64 / 2.0 + 1.0;
    f_last * (spec.degree().max(1) as f64) * (n as f64).powf(growth)
}

/// `Lambda(s) = sum a_n F_G(s, n) + sign * sum a_n F_{G(-u)}(center_shift - s, n)`;
/// exact for any admissible `G` when the functional equation holds.
pub fn completed_lambda(spec: &LFunctionSpec, s: Complex64, quad: &QuadParams) -> Result<LambdaValue> {
    if spec.is_trivial() {
        return Ok(LambdaValue {
            value: Complex64::new(1.0, 0.0),
            error_estimate: 0.0,
            terms: 1,
            tail_estimate: 0.0,
        });
    }
    let dual = Complex64::new(spec.center_shift as f64, 0.0) - s;
    let n = quad.truncation(spec, s).max(quad.truncation(spec, dual));
    let a = dirichlet_coefficients(spec, n)?.as_f64();
    let x = smoothed_sum(spec, &a, s, quad.beta, quad)?;
    let y = smoothed_sum(spec, &a, dual, -quad.beta, quad)?;
    let eps = spec.sign as f64;
    let value = x.value + eps * y.value;
    let coarse = x.coarse + eps * y.coarse;
    let magnitude = x.magnitude + y.magnitude;
    let tail = x.tail + y.tail;
    if tail > quad.tail_tolerance * value.norm().max(1e-30) {
        return Err(Error::TruncationTooSmall {
            estimate: tail,
            tolerance: quad.tail_tolerance * value.norm().max(1e-30),
        });
    }
    Ok(LambdaValue {
        value,
        error_estimate: (value - coarse).norm().max(1e-14 * magnitude),
        terms: n,
        tail_estimate: tail,
    })
}

pub const DEFECT_FLOOR: f64 = 1e-30;

/// `|Lambda(s) - sign Lambda(center_shift - s)| / max(|Lambda(s)|, |Lambda(center_shift - s)|, floor)`.
pub fn fe_defect(spec: &LFunctionSpec, s: Complex64, quad: &QuadParams) -> Result<f64> {
    if spec.is_trivial() {
        return Ok(0.0);
    }
    let x = completed_lambda(spec, s, quad)?.value;
    let y = completed_lambda(spec, Complex64::new(spec.center_shift as f64, 0.0) - s, quad)?.value;
    let eps = spec.sign as f64;
    Ok((x - eps * y).norm() / x.norm().max(y.norm()).max(DEFECT_FLOOR))
}

/// `Lambda_3(s) = (3/pi)^{s/2} Gamma((s-1)/2) L(chi_3, s - 2)`.
pub fn lambda3_closed_form(s: Complex64) -> Complex64 {
    let pre = (s * 0.5 * (3.0 / std::f64::consts::PI).ln() + ln_gamma((s - 1.0) * 0.5)).exp();
    pre * dirichlet_l_chi3(s - 2.0)
}

/// `Lambda_k` with Euler factors to cover the given evaluation points.
pub fn spec_for_points(k: u32, points: &[Complex64], quad: &QuadParams) -> Result<LFunctionSpec> {
    let mut spec = LFunctionSpec::skeleton(k)?;
    if !spec.is_trivial() {
        let bound = quad.prime_bound(&spec, points);
        spec.extend_to(bound)?;
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn k3_coefficients() {
        let spec = LFunctionSpec::for_k(3, 10).unwrap();
        let a = dirichlet_coefficients(&spec, 10).unwrap();
        let small: Vec<i64> = a.a.iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(small, vec![0, 1, -4, 0, 16, -25, 0, 49, -64, 0, 100]);
        assert!(spec.conjectural_flags.is_empty());
        assert!(matches!(dirichlet_coefficients(&spec, 12), Err(Error::MissingEulerFactor(11))));
    }

    #[test]
    fn k1_is_trivial() {
        let spec = LFunctionSpec::for_k(1, 20).unwrap();
        let a = dirichlet_coefficients(&spec, 20).unwrap();
        assert!(a.a[2..].iter().all(|x| x.is_zero()));
        let q = QuadParams::default();
        assert_eq!(completed_lambda(&spec, c(0.3, 4.0), &q).unwrap().value, c(1.0, 0.0));
        assert_eq!(fe_defect(&spec, c(0.3, 4.0), &q).unwrap(), 0.0);
    }

    #[test]
    fn k3_matches_closed_form() {
        let q = QuadParams::default();
        let pts = [c(3.5, 0.0), c(2.5, 0.0), c(2.4, 0.7)];
        let spec = spec_for_points(3, &pts, &q).unwrap();
        for s in pts {
            let got = completed_lambda(&spec, s, &q).unwrap();
            let want = lambda3_closed_form(s);
            assert!((got.value - want).norm() < 1e-8 * want.norm(), "{s}: {} vs {want}", got.value);
            assert!(fe_defect(&spec, s, &q).unwrap() < 1e-6);
        }
    }
}
