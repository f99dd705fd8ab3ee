//! Independent comparators: the level-6 weight-4 eta product and `L(chi_3, s)`.

use num_complex::Complex64;

/// `a_n` for `n <= n_max` of `(eta(t) eta(2t) eta(3t) eta(6t))^2`; index 0 is unused.
pub fn eta_oracle_level6_weight4(n_max: usize) -> Vec<i64> {
    // the product starts at q^1, so a_n is the coefficient of q^{n-1}
    let len = n_max;
    let mut series = vec![0i64; len];
    if len > 0 {
        series[0] = 1;
    }
    for m in [1usize, 2, 3, 6] {
        for step in (1..).map(|n| m * n).take_while(|&e| e < len) {
            for _ in 0..2 {
                for i in (step..len).rev() {
                    series[i] -= series[i - step];
                }
            }
        }
    }
    let mut a = vec![0i64; n_max + 1];
    a[1..].copy_from_slice(&series);
    a
}

/// The character `(n/3)`: period `(1, -1, 0)` starting at `n = 1`.
pub fn chi3(n: i64) -> i32 {
    match n.rem_euclid(3) {
        1 => 1,
        2 => -1,
        _ => 0,
    }
}

const BERNOULLI_2J: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];
const EM_TERMS: usize = 40;

/// Euler-Maclaurin for `zeta(s, a)` without the pole term `(M + a)^{1-s} / (s - 1)`.
fn hurwitz_regular(s: Complex64, a: f64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 0..EM_TERMS {
        sum += (-s * (n as f64 + a).ln()).exp();
    }
    let x = EM_TERMS as f64 + a;
    let lx = x.ln();
    sum += 0.5 * (-s * lx).exp();
    // B_{2j}/(2j)! * s(s+1)...(s+2j-2) * x^{-s-2j+1}
    let mut rising = s;
    let mut fact = 2.0;
    for (j, &b) in BERNOULLI_2J.iter().enumerate() {
        let e = 2 * j as i32 + 1;
        sum += b / fact * rising * (-(s + (e as f64)) * lx).exp();
        let (t1, t2) = (2 * j as i32 + 1, 2 * j as i32 + 2);
        rising *= (s + t1 as f64) * (s + t2 as f64);
        fact *= (2 * j + 3) as f64 * (2 * j + 4) as f64;
    }
    sum
}

/// Hurwitz `zeta(s, a)`, `0 < a <= 1`, `s != 1`.
pub fn hurwitz_zeta(s: Complex64, a: f64) -> Complex64 {
    let x = EM_TERMS as f64 + a;
    hurwitz_regular(s, a) + ((1.0 - s) * x.ln()).exp() / (s - 1.0)
}

/// `L(chi_3, s) = 3^{-s} (zeta(s, 1/3) - zeta(s, 2/3))`, entire.
pub fn dirichlet_l_chi3(s: Complex64) -> Complex64 {
    let (a, b) = (1.0 / 3.0, 2.0 / 3.0);
    let (lx, ly) = ((EM_TERMS as f64 + a).ln(), (EM_TERMS as f64 + b).ln());
    let d = s - 1.0;
    // (x^{-d} - y^{-d}) / d, with the removable singularity at d = 0
    let pole = if d.norm() < 1e-6 {
        Complex64::new(ly - lx, 0.0) + d * 0.5 * (lx * lx - ly * ly)
    } else {
        ((-d * lx).exp() - (-d * ly).exp()) / d
    };
    (-s * 3f64.ln()).exp() * (hurwitz_regular(s, a) - hurwitz_regular(s, b) + pole)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn eta_coefficients() {
        let a = eta_oracle_level6_weight4(12);
        assert_eq!(&a[1..], &[1, -2, -3, 4, 6, 6, -16, -8, 9, -12, 12, -12]);
    }

    #[test]
    fn eta_is_multiplicative() {
        let a = eta_oracle_level6_weight4(200);
        for m in 2..14usize {
            for n in 2..14usize {
                if num_integer::gcd(m, n) == 1 {
                    assert_eq!(a[m * n], a[m] * a[n], "{m} {n}");
                }
            }
        }
        // Hecke at 5: a_25 = a_5^2 - 5^3
        assert_eq!(a[25], a[5] * a[5] - 125);
    }

    #[test]
    fn chi3_values() {
        assert_eq!((1..=6).map(chi3).collect::<Vec<_>>(), vec![1, -1, 0, 1, -1, 0]);
    }

    #[test]
    fn l_chi3_values() {
        assert!((dirichlet_l_chi3(re(2.0)) - 0.781_302_412_896_486_2).norm() < 1e-13);
        assert!((dirichlet_l_chi3(re(0.0)) - 1.0 / 3.0).norm() < 1e-13);
        let pi = std::f64::consts::PI;
        assert!((dirichlet_l_chi3(re(1.0)) - pi / 27f64.sqrt()).norm() < 1e-13);
        // partial sums at s = 2
        let partial: f64 = (1..200_000i64).map(|n| chi3(n) as f64 / (n * n) as f64).sum();
        assert!((dirichlet_l_chi3(re(2.0)).re - partial).abs() < 1e-9);
        // zeta(s, 1) at s = 2
        assert!((hurwitz_zeta(re(2.0), 1.0) - pi * pi / 6.0).norm() < 1e-13);
    }

    #[test]
    fn l_chi3_functional_equation() {
        // (3/pi)^{(s+1)/2} Gamma((s+1)/2) L(s) is symmetric under s -> 1 - s
        let lam = |s: Complex64| {
            ((s + 1.0) * 0.5 * (3.0 / std::f64::consts::PI).ln()).exp()
                * super::super::gamma::gamma((s + 1.0) * 0.5)
                * dirichlet_l_chi3(s)
        };
        for s in [Complex64::new(0.3, 1.2), Complex64::new(-0.7, -2.0), Complex64::new(0.5, 5.0)] {
            let (x, y) = (lam(s), lam(1.0 - s));
            assert!((x - y).norm() < 1e-12 * x.norm().max(1e-300), "{s}");
        }
    }
}
