//! Floating-point evaluation of every `Kl_2(g^j; q)` at once as the cyclic
//! self-convolution of `f(i) = psi(tr g^i)`.

use num_bigint::BigInt;
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::arith::ExtField;
use crate::error::{Error, Result};

/// Largest `q - 1` the bulk path will transform.
pub const DEFAULT_BULK_BUDGET: u64 = 1 << 22;

/// `K[j] ~ Kl_2(g^j; q)`, indexed by discrete log.
pub fn kloosterman_all_bulk(field: &ExtField) -> Result<Vec<f64>> {
    kloosterman_all_bulk_with_budget(field, DEFAULT_BULK_BUDGET)
}

pub fn kloosterman_all_bulk_with_budget(field: &ExtField, budget: u64) -> Result<Vec<f64>> {
    let n = (field.order() - 1) as usize;
    if n as u64 > budget {
        return Err(Error::BudgetExceeded {
            what: "bulk FFT",
            size: n as u128,
            budget: budget as u128,
        });
    }
    let theta = 2.0 * std::f64::consts::PI / field.characteristic() as f64;
    let mut v: Vec<Complex64> = field
        .trace_of_powers()
        .iter()
        .map(|&t| Complex64::from_polar(1.0, theta * t as f64))
        .collect();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(n).process(&mut v);
    for z in v.iter_mut() {
        *z = *z * *z;
    }
    planner.plan_fft_inverse(n).process(&mut v);
    let scale = 1.0 / n as f64;
    let imag = v.iter().map(|z| (z.im * scale).abs()).fold(0.0, f64::max);
    if imag > 1e-9 * (1.0 + field.order() as f64).sqrt() {
        return Err(Error::check("bulk-reality", format!("imaginary part {imag:.3e}")));
    }
    Ok(v.iter().map(|z| z.re * scale).collect())
}

/// Whether a float moment of order `k` over `F_q` can be rounded to the
/// exact integer: `(k+2)/2 log10 q + log10 q <= 14`.
pub fn bulk_envelope_holds(k: u32, q: u64) -> bool {
    let l = (q as f64).log10();
    (k as f64 + 2.0) / 2.0 * l + l <= 14.0
}

/// `m_2^k(q)` from bulk values, or `None` outside the precision envelope.
pub fn moment_from_bulk(k: u32, values: &[f64], q: u64) -> Option<BigInt> {
    if !bulk_envelope_holds(k, q) {
        return None;
    }
    let qf = q as f64;
    let total: f64 = values
        .iter()
        .map(|&kl| {
            let t = -kl;
            let (mut prev, mut cur) = (0.0, 1.0);
            for _ in 0..k {
                let next = t * cur - qf * prev;
                prev = cur;
                cur = next;
            }
            cur
        })
        .sum();
    Some(BigInt::from(total.round() as i64))
}
