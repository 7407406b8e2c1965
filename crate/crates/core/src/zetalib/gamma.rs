use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
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

/// Euler's Gamma function on the complex plane.
///
/// Lanczos approximation (g = 7, 9 terms) for `Re s >= 1/2`, reflection
/// `Γ(s)Γ(1-s) = π / sin(πs)` below.
pub fn gamma_complex(s: Complex64) -> Result<Complex64> {
    if s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round() {
        return Err(Error::Pole {
            function: "Gamma",
            at: format!("{}", s.re),
        });
    }
    Ok(gamma_unchecked(s))
}

pub(crate) fn gamma_unchecked(s: Complex64) -> Complex64 {
    if s.re < 0.5 {
        let pi = Complex64::new(PI, 0.0);
        return pi / ((pi * s).sin() * lanczos(Complex64::new(1.0, 0.0) - s));
    }
    lanczos(s)
}

fn lanczos(s: Complex64) -> Complex64 {
    let z = s - 1.0;
    let mut series = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    let log = (z + 0.5) * t.ln() - t;
    (2.0 * PI).sqrt() * log.exp() * series
}

// B_{2k} / (2k (2k-1)) for k = 1..7.
const STIRLING: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
];

/// Principal branch of `log Γ(z)` for `Re z > 0`, continuous in `z`.
///
/// Shifts `z` upward by the recurrence until `|z| >= 10`, then applies the
/// Stirling series.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if z.re <= 0.0 {
        return Err(Error::domain("Re z", z.re, "Re z > 0"));
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.norm() < 10.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut tail = Complex64::new(0.0, 0.0);
    let mut power = inv;
    for c in STIRLING {
        tail += c * power;
        power *= inv2;
    }
    Ok((w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + tail - shift)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn factorials_and_half() {
        assert!(rel(gamma_complex(c(1.0, 0.0)).unwrap(), c(1.0, 0.0)) < 1e-14);
        assert!(rel(gamma_complex(c(5.0, 0.0)).unwrap(), c(24.0, 0.0)) < 1e-14);
        assert!(rel(gamma_complex(c(0.5, 0.0)).unwrap(), c(PI.sqrt(), 0.0)) < 1e-14);
        assert!(rel(gamma_complex(c(-0.5, 0.0)).unwrap(), c(-2.0 * PI.sqrt(), 0.0)) < 1e-14);
    }

    #[test]
    fn poles_are_reported() {
        for k in 0..5 {
            assert!(matches!(gamma_complex(c(-(k as f64), 0.0)), Err(Error::Pole { .. })));
        }
        assert!(gamma_complex(c(-2.0, 1e-9)).is_ok());
    }

    #[test]
    fn modulus_on_vertical_lines() {
        // |Γ(1/2 + it)|² = π / cosh(πt),  |Γ(1 + it)|² = πt / sinh(πt)
        for &t in &[0.3, 1.0, 14.134_725_141_734_694, 37.5, 80.0, 100.0] {
            let g = gamma_complex(c(0.5, t)).unwrap().norm_sqr();
            let exact = PI / (PI * t).cosh();
            assert!((g - exact).abs() / exact < 2e-12, "t = {t}");
            let g = gamma_complex(c(1.0, t)).unwrap().norm_sqr();
            let exact = PI * t / (PI * t).sinh();
            assert!((g - exact).abs() / exact < 2e-12, "t = {t}");
        }
    }

    #[test]
    fn reference_values() {
        // mpmath, 30 digits
        let cases = [
            (c(0.5, 14.134_725_141_734_694), c(-1.445_551_448_817_937_7e-10, -5.522_788_081_823_297e-10)),
            (c(-2.5, 3.0), c(4.797_884_108_418_97e-4, 2.988_557_111_448_588_7e-4)),
            (c(7.25, -40.0), c(-1.876_083_427_960_947e-17, 8.488_546_703_937_96e-17)),
        ];
        for (s, expected) in cases {
            let g = gamma_complex(s).unwrap();
            assert!(rel(g, expected) < 1e-12, "{s}: {g} vs {expected}");
        }
    }

    #[test]
    fn ln_gamma_agrees_with_gamma() {
        for &(re, im) in &[(0.25, 7.0), (0.25, 30.0), (3.0, 0.5), (0.7, -12.0)] {
            let z = c(re, im);
            let g = gamma_complex(z).unwrap();
            let lg = ln_gamma(z).unwrap();
            assert!((lg.re - g.norm().ln()).abs() < 1e-12);
            let phase = (lg.im - g.arg()) / (2.0 * PI);
            assert!((phase - phase.round()).abs() < 1e-12);
        }
        assert!(ln_gamma(c(-1.0, 2.0)).is_err());
    }

    #[test]
    fn ln_gamma_branch_is_continuous() {
        // Im log Γ(1/4 + it/2) grows like (t/2) log(t/2): no 2π jumps.
        let mut prev = ln_gamma(c(0.25, 0.0)).unwrap().im;
        let mut t = 0.05;
        while t < 120.0 {
            let cur = ln_gamma(c(0.25, t / 2.0)).unwrap().im;
            assert!((cur - prev).abs() < 0.2, "jump at t = {t}");
            prev = cur;
            t += 0.05;
        }
    }
}
