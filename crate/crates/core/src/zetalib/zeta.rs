use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use super::gamma::gamma_unchecked;
use crate::error::{Error, Result};
use crate::numeric;

/// Riemann zeta function.
///
/// The Dirichlet eta series with Borwein's Chebyshev acceleration is used
/// where `|1 - 2^{1-s}|` is bounded away from zero and `Re s` is not far
/// left; otherwise the functional equation maps the argument across the
/// critical line first.
pub fn zeta_complex(s: Complex64) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole {
            function: "zeta",
            at: "1".into(),
        });
    }
    Ok(zeta_unchecked(s))
}

pub(crate) fn zeta_unchecked(s: Complex64) -> Complex64 {
    let reflected = Complex64::new(1.0, 0.0) - s;
    if s.re >= 0.5 {
        if eta_is_stable(s) {
            eta_zeta(s)
        } else {
            functional_equation(s, eta_zeta(reflected))
        }
    } else if eta_is_stable(reflected) {
        functional_equation(s, eta_zeta(reflected))
    } else {
        eta_zeta(s)
    }
}

/// `ζ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s) ζ(1-s)`.
fn functional_equation(s: Complex64, zeta_reflected: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let factor = (s * LN_2).exp() * ((s - 1.0) * PI.ln()).exp() * (s * (PI / 2.0)).sin();
    factor * gamma_unchecked(one - s) * zeta_reflected
}

fn eta_is_stable(s: Complex64) -> bool {
    let denom = Complex64::new(1.0, 0.0) - ((Complex64::new(1.0, 0.0) - s) * LN_2).exp();
    denom.norm() >= 0.25
}

/// Zeta from the accelerated eta series alone, without routing through the
/// functional equation; an independent path for consistency checks.
pub(crate) fn eta_zeta(s: Complex64) -> Complex64 {
    let denom = Complex64::new(1.0, 0.0) - ((Complex64::new(1.0, 0.0) - s) * LN_2).exp();
    eta_borwein(s) / denom
}

/// Number of Borwein terms: the truncation error behaves like
/// `(3+√8)^{-n} e^{π|t|/2}`, so `n` grows linearly with `|Im s|`.
fn borwein_terms(s: Complex64) -> usize {
    30 + (0.95 * s.im.abs()).ceil() as usize + (2.0 * (-s.re).max(0.0)).ceil() as usize
}

/// Dirichlet eta `η(s) = Σ (-1)^{k} (k+1)^{-s}` by Borwein's algorithm 2.
pub(crate) fn eta_borwein(s: Complex64) -> Complex64 {
    let n = borwein_terms(s);
    // d_k = n Σ_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!), built from term ratios.
    let mut d = Vec::with_capacity(n + 1);
    let mut term = 1.0f64;
    let mut acc = 1.0f64;
    d.push(acc);
    let nf = n as f64;
    for i in 1..=n {
        let fi = i as f64;
        term *= 4.0 * (nf + fi - 1.0) * (nf - fi + 1.0) / ((2.0 * fi) * (2.0 * fi - 1.0));
        acc += term;
        d.push(acc);
    }
    let dn = d[n];
    let mut sum = numeric::ComplexSum::default();
    for k in 0..n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let power = (-s * ((k + 1) as f64).ln()).exp();
        sum.add(power * (sign * (d[k] - dn) / dn));
    }
    -sum.value()
}

/// `ζ'(s)` by Ridders-extrapolated central differences of [`zeta_complex`].
pub fn zeta_derivative(s: Complex64) -> Result<Complex64> {
    let distance = (s - 1.0).norm();
    if distance == 0.0 {
        return Err(Error::Pole {
            function: "zeta'",
            at: "1".into(),
        });
    }
    let h = (0.25 * distance).min(0.2);
    Ok(numeric::ridders(|dh| Ok(zeta_unchecked(s + dh)), h)?.value)
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
    fn classical_values() {
        let z = |re: f64| zeta_complex(c(re, 0.0)).unwrap();
        assert!(rel(z(2.0), c(PI * PI / 6.0, 0.0)) < 1e-14);
        assert!(rel(z(4.0), c(PI.powi(4) / 90.0, 0.0)) < 1e-14);
        assert!(rel(z(0.0), c(-0.5, 0.0)) < 1e-14);
        assert!(rel(z(-1.0), c(-1.0 / 12.0, 0.0)) < 1e-13);
        assert!(rel(z(3.0), c(1.202_056_903_159_594_3, 0.0)) < 1e-14);
        assert!(z(-2.0).norm() < 1e-15);
    }

    #[test]
    fn pole() {
        assert!(matches!(zeta_complex(c(1.0, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(zeta_derivative(c(1.0, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn reference_values_across_the_strip() {
        // mpmath at 50 digits, cross-checked through the functional equation
        let cases = [
            (c(0.5, 30.0), c(-0.120_642_287_590_043_7, -0.583_691_214_763_706_3)),
            (c(-1.5, 60.0), c(55.117_343_214_127_68, 49.703_546_420_458_413)),
            (c(-0.5, -40.0), c(0.170_607_074_557_840_74, 5.816_616_681_681_107)),
            (c(1.0, 9.064_720_283_654_388), c(1.346_579_542_836_317_1, 0.109_883_136_796_269_5)),
            (c(0.0, 18.129_440_567_308_775), c(3.074_234_949_730_233, -0.539_638_582_060_359_4)),
            (c(2.5, 55.0), c(1.157_874_297_369_570_3, -0.064_427_316_185_168_34)),
            (c(4.0, -7.5), c(1.023_837_307_839_666_3, -0.047_021_009_160_290_27)),
        ];
        for (s, expected) in cases {
            let z = zeta_complex(s).unwrap();
            assert!(rel(z, expected) < 1e-10, "{s}: {z} vs {expected}");
        }
    }

    #[test]
    fn routing_agrees_with_unrouted_series() {
        let mut worst = 0f64;
        for &re in &[-0.5, 0.25, 0.75] {
            for k in -16..=16 {
                let s = c(re, 2.5 * f64::from(k) + 0.1);
                worst = worst.max(rel(zeta_unchecked(s), eta_zeta(s)));
            }
        }
        assert!(worst < 1e-9, "{worst}");
    }

    #[test]
    fn derivative_at_minus_one() {
        let d = zeta_derivative(c(-1.0, 0.0)).unwrap();
        assert!((d.re + 0.165_421_143_700_450_93).abs() < 1e-9, "{d}");
        assert!(d.im.abs() < 1e-12);
    }

    #[test]
    fn derivative_matches_fixed_stencils() {
        let s = c(2.0, 0.0);
        let d = zeta_derivative(s).unwrap();
        let f = |x: f64| zeta_unchecked(s + x);
        let h = 1e-3;
        let four = (f(-2.0 * h) - f(-h) * 8.0 + f(h) * 8.0 - f(2.0 * h)) / (12.0 * h);
        let eight = (f(-4.0 * h) * 3.0 - f(-3.0 * h) * 32.0 + f(-2.0 * h) * 168.0 - f(-h) * 672.0 + f(h) * 672.0
            - f(2.0 * h) * 168.0
            + f(3.0 * h) * 32.0
            - f(4.0 * h) * 3.0)
            / (840.0 * h);
        assert!(rel(four, eight) < 1e-8);
        assert!(rel(d, eight) < 1e-8);
        assert!((d.re + 0.937_548_254_315_843_8).abs() < 1e-9);
    }
}
