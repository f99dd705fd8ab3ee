//! Complex log-gamma (Lanczos, g = 7, nine terms) with reflection.

use std::f64::consts::PI;

use num_complex::Complex64;

const G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `log Gamma(z)` on some branch; `exp` of it is `Gamma(z)`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        let s = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(1.0 - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn known_values() {
        assert!((gamma(c(5.0, 0.0)) - 24.0).norm() < 1e-11);
        assert!((gamma(c(0.5, 0.0)) - PI.sqrt()).norm() < 1e-13);
        assert!((gamma(c(-0.5, 0.0)) + 2.0 * PI.sqrt()).norm() < 1e-12);
        // |Gamma(i)|^2 = pi / sinh(pi)
        let g = gamma(c(0.0, 1.0));
        assert!((g.norm_sqr() - PI / PI.sinh()).abs() < 1e-13);
        // Gamma(1 + i) = 0.4980156681... - 0.1549498283... i
        let g = gamma(c(1.0, 1.0));
        assert!((g - c(0.498_015_668_118_356, -0.154_949_828_301_811)).norm() < 1e-12);
    }

    #[test]
    fn recurrence() {
        for &z in &[c(0.3, 2.0), c(3.7, -11.0), c(-2.4, 0.6), c(8.0, 30.0)] {
            let lhs = gamma(z + 1.0);
            let rhs = z * gamma(z);
            assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm(), "{z}");
        }
    }
}
