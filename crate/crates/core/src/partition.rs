//! The diagonal log-partition function `log Z(β, β)` and its relatives.
//!
//! All diagonal sums run over levels `m = v₁ + v₂` with the level weights
//! `c_m` instead of over primitive vectors:
//!
//! ```text
//! log Z(β, β) = Σ_{m>=1} c_m · F(βm),      F(u) = -log(1 - e^{-u})
//! ```
//!
//! Every series is truncated at a level `M` for which an explicit tail
//! majorant (from `c_m <= m` and geometric bounds on `F` and its
//! derivatives) is below the requested tolerance; the bound is returned with
//! the value.

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{line_weights, Sieve};
use crate::numeric::{self, CompensatedSum, ComplexSum};
use crate::zetalib::{self, gamma_unchecked, zeta_unchecked};

/// Supported range of `β` for [`log_z`] and [`mean_total`].
pub const BETA_RANGE: (f64, f64) = (1e-4, 10.0);

/// Supported range of `β` for [`cumulant`].
pub const CUMULANT_BETA_RANGE: (f64, f64) = (1e-3, 10.0);

/// Supported range of `β` for [`i_err`].
pub const I_ERR_BETA_RANGE: (f64, f64) = (1e-3, 1.0);

/// `|Im s|` at which the remainder integral is truncated.
pub const I_ERR_HEIGHT: f64 = 60.0;

/// Relative accuracy used by the convenience wrappers.
pub const DEFAULT_REL_TOL: f64 = 1e-14;

/// A truncated series value with a certified bound on the discarded tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Truncated {
    pub value: f64,
    pub tail_bound: f64,
    /// Number of levels summed.
    pub levels: usize,
}

fn check_beta(beta: f64, (lo, hi): (f64, f64), range: &'static str) -> Result<()> {
    if beta > lo && beta <= hi {
        Ok(())
    } else {
        Err(Error::domain("beta", beta, range))
    }
}

/// `Σ_{m>M} m^j e^{-βm} / (1 - e^{-βM})²`, bounded by comparing the sum with
/// `∫_M^∞ x^j e^{-βx} dx` (valid once the summand decreases, i.e. `βM > j`).
fn tail_majorant(beta: f64, levels: usize, power: i32) -> f64 {
    let m = levels as f64;
    let rate = beta - f64::from(power) / m;
    if rate <= 0.0 {
        return f64::INFINITY;
    }
    let q = (-beta * m).exp();
    m.powi(power) * q / rate / (1.0 - q).powi(2)
}

/// Smallest level count whose tail majorant is at most `tol`.
fn truncation(beta: f64, tol: f64, power: i32) -> (usize, f64) {
    let start = (50f64.max(-(tol * beta * beta).ln()) / beta).ceil();
    let mut levels = start as usize;
    loop {
        let bound = tail_majorant(beta, levels, power);
        if bound <= tol {
            return (levels, bound);
        }
        levels = levels + levels / 4 + 1;
    }
}

/// `F^{(k)}(u)` for `F(u) = -log(1 - e^{-u})`, `k <= 2`.
fn f_derivative(order: u32, u: f64) -> f64 {
    match order {
        0 => -(-(-u).exp_m1()).ln(),
        1 => -1.0 / u.exp_m1(),
        2 => 1.0 / (u.exp_m1() * -(-u).exp_m1()),
        _ => unreachable!("orders above 2 are rejected by callers"),
    }
}

/// `Σ_{m<=M} c_m F(βm)`.
pub fn log_z(beta: f64, tol: f64) -> Result<Truncated> {
    check_beta(beta, BETA_RANGE, "1e-4 < beta <= 10")?;
    let (levels, tail_bound) = truncation(beta, tol, 1);
    let weights = line_weights(levels);
    let value = weights
        .iter()
        .map(|(m, c)| c as f64 * f_derivative(0, beta * m as f64))
        .collect::<CompensatedSum>()
        .value();
    Ok(Truncated {
        value,
        tail_bound,
        levels,
    })
}

/// `E_β[X₁ + X₂] = Σ c_m · m / (e^{βm} - 1)`, with an absolute tolerance.
pub fn mean_total_with_tol(beta: f64, tol: f64) -> Result<Truncated> {
    check_beta(beta, BETA_RANGE, "1e-4 < beta <= 10")?;
    let (levels, tail_bound) = truncation(beta, tol, 2);
    let weights = line_weights(levels);
    let value = weights
        .iter()
        .map(|(m, c)| {
            let m = m as f64;
            c as f64 * m / (beta * m).exp_m1()
        })
        .collect::<CompensatedSum>()
        .value();
    Ok(Truncated {
        value,
        tail_bound,
        levels,
    })
}

/// `E_β[X₁ + X₂] = -d/dβ log Z(β, β)`.
pub fn mean_total(beta: f64) -> Result<f64> {
    Ok(mean_total_with_tol(beta, magnitude_tol(beta, 3))?.value)
}

/// `Var_β[X₁ + X₂] = d²/dβ² log Z(β, β)`.
pub fn variance_total(beta: f64) -> Result<f64> {
    check_beta(beta, BETA_RANGE, "1e-4 < beta <= 10")?;
    let (levels, _) = truncation(beta, magnitude_tol(beta, 4), 3);
    let weights = line_weights(levels);
    Ok(weights
        .iter()
        .map(|(m, c)| {
            let m = m as f64;
            c as f64 * m * m * f_derivative(2, beta * m)
        })
        .collect::<CompensatedSum>()
        .value())
}

/// Absolute tolerance matching a relative one for a quantity of order
/// `β^{-power}`.
fn magnitude_tol(beta: f64, power: i32) -> f64 {
    DEFAULT_REL_TOL * beta.powi(-power).max(1e-10)
}

/// `Σ_{v on level m} v₁^{k1} v₂^{k2}` for `k1 + k2 <= 2`, in closed form.
///
/// For `m >= 2` the level holds `(x, m-x)` with `gcd(x, m) = 1`, and
/// `Σ x = mφ(m)/2`, `Σ x² = m²φ(m)/3 + (m/6)∏_{p|m}(1-p)`.
fn level_moment(sieve: &Sieve, m: usize, k1: u32, k2: u32) -> f64 {
    if m == 1 {
        // (1,0) and (0,1)
        return match (k1, k2) {
            (0, 0) => 2.0,
            (1, 1) => 0.0,
            _ => 1.0,
        };
    }
    let mf = m as f64;
    let phi = sieve.phi(m) as f64;
    let first = mf * phi / 2.0;
    // Exact in integers: (2m²φ + m∏(1-p)) / 6.
    let second = || {
        let prod: i128 = sieve.distinct_prime_factors(m).map(|p| 1 - i128::from(p)).product();
        let mi = m as i128;
        ((2 * mi * mi * sieve.phi(m) as i128 + mi * prod) / 6) as f64
    };
    match (k1, k2) {
        (0, 0) => phi,
        (1, 0) | (0, 1) => first,
        (2, 0) | (0, 2) => second(),
        (1, 1) => mf * first - second(),
        _ => unreachable!("orders above 2 are rejected by callers"),
    }
}

/// Mixed partial derivative `∂^{k1+k2} log Z / ∂β₁^{k1} ∂β₂^{k2}` at
/// `β₁ = β₂ = β`, for `k1 + k2 <= 2`.
pub fn cumulant(k1: u32, k2: u32, beta: f64) -> Result<f64> {
    if k1 + k2 > 2 {
        return Err(Error::domain("k1 + k2", k1 + k2, "k1 + k2 <= 2"));
    }
    check_beta(beta, CUMULANT_BETA_RANGE, "1e-3 < beta <= 10")?;
    let order = k1 + k2;
    let power = order as i32 + 1;
    let (levels, _) = truncation(beta, magnitude_tol(beta, power + 1), power);
    let sieve = Sieve::new(levels);
    Ok((1..=levels)
        .map(|m| level_moment(&sieve, m, k1, k2) * f_derivative(order, beta * m as f64))
        .collect::<CompensatedSum>()
        .value())
}

/// Covariance matrix of the endpoint `(X₁, X₂)` under `P_β`, i.e. the
/// Hessian of `log Z` on the diagonal.
pub fn endpoint_covariance(beta: f64) -> Result<[[f64; 2]; 2]> {
    let a = cumulant(2, 0, beta)?;
    let b = cumulant(1, 1, beta)?;
    Ok([[a, b], [b, a]])
}

/// Calibrated parameter for a target endpoint `(n, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CalibrationResult {
    pub n: u64,
    pub beta: f64,
    pub mean_total: f64,
    /// `mean_total - 2n`.
    pub residual: f64,
    pub variance_total: f64,
}

/// Solves `E_β[X₁ + X₂] = 2n` for `β`.
///
/// The mean is strictly decreasing in `β`; a bracket is found by doubling or
/// halving from `β = 1`, then Newton steps (derivative `-Var[X₁+X₂]`) are
/// taken whenever they stay inside the bracket, bisection otherwise.
pub fn calibrate(n: u64) -> Result<CalibrationResult> {
    if n == 0 {
        return Err(Error::domain("n", n, "n >= 1"));
    }
    let target = 2.0 * n as f64;
    let tol = 1e-10 * target.max(1.0);
    let f = |beta: f64| -> Result<f64> { Ok(mean_total(beta)? - target) };

    let (mut lo, mut hi) = (1.0, 1.0);
    if f(1.0)? > 0.0 {
        while f(hi)? > 0.0 {
            lo = hi;
            hi *= 2.0;
        }
    } else {
        while f(lo)? <= 0.0 {
            hi = lo;
            lo /= 2.0;
            if lo <= BETA_RANGE.0 {
                return Err(Error::domain("n", n, "calibrated beta must exceed 1e-4"));
            }
        }
    }
    // f(lo) > 0 >= f(hi)
    let mut beta = 0.5 * (lo + hi);
    for _ in 0..200 {
        let value = f(beta)?;
        if value.abs() <= tol {
            break;
        }
        if value > 0.0 {
            lo = beta;
        } else {
            hi = beta;
        }
        let newton = beta + value / variance_total(beta)?;
        beta = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    let mean = mean_total(beta)?;
    Ok(CalibrationResult {
        n,
        beta,
        mean_total: mean,
        residual: mean - target,
        variance_total: variance_total(beta)?,
    })
}

/// Comparison of a partial Dirichlet series with its closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirichletCheck {
    /// `Σ_{m<=M} c_m m^{-s}`.
    #[serde(with = "numeric::complex_object")]
    pub partial: Complex64,
    /// `(ζ(s-1) + ζ(s)) / ζ(s)`.
    #[serde(with = "numeric::complex_object")]
    pub target: Complex64,
    /// Majorant of `|target - partial|`: `M^{2-σ} / (σ - 2)`.
    pub gap_bound: f64,
}

impl DirichletCheck {
    pub fn gap(&self) -> f64 {
        (self.target - self.partial).norm()
    }
}

/// Checks `Σ_m c_m m^{-s} = (ζ(s-1) + ζ(s))/ζ(s)` for `Re s > 2`.
pub fn dirichlet_check(s: Complex64, levels: usize) -> Result<DirichletCheck> {
    if s.re <= 2.0 {
        return Err(Error::domain("Re s", s.re, "Re s > 2"));
    }
    if levels == 0 {
        return Err(Error::domain("M", levels, "M >= 1"));
    }
    let weights = line_weights(levels);
    let mut partial = ComplexSum::default();
    for (m, c) in weights.iter() {
        partial.add((-s * (m as f64).ln()).exp() * c as f64);
    }
    let z = zeta_unchecked(s);
    let target = (zeta_unchecked(s - 1.0) + z) / z;
    Ok(DirichletCheck {
        partial: partial.value(),
        target,
        gap_bound: (levels as f64).powf(2.0 - s.re) / (s.re - 2.0),
    })
}

/// Mellin-Barnes integrand `Γ(s)ζ(s+1)(ζ(s-1)+ζ(s)) / (ζ(s) β^s)` whose
/// integral over `Re s = 3` is `log Z(β, β)`.
pub fn mellin_integrand(s: Complex64, beta: f64) -> Complex64 {
    let z = zeta_unchecked(s);
    gamma_unchecked(s) * zeta_unchecked(s + 1.0) * (zeta_unchecked(s - 1.0) + z) / (z * (s * beta.ln()).exp())
}

/// The remainder integral along `Re s = -1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RemainderIntegral {
    pub value: f64,
    /// Quadrature error estimate on `|Im s| <= 60`.
    pub error_estimate: f64,
    /// Estimate of the neglected `|Im s| > 60` part from the Gamma decay.
    pub tail_estimate: f64,
}

/// `I_err(β) = (1/2πi) ∫_{-1/2-i∞}^{-1/2+i∞} Γ(s)ζ(s+1)(ζ(s-1)+ζ(s))/(ζ(s)β^s) ds`.
///
/// Integrates the upper half `t ∈ [0, 60]` and doubles its real part
/// (the integrand is conjugate-symmetric).
pub fn i_err(beta: f64) -> Result<RemainderIntegral> {
    check_beta(beta, I_ERR_BETA_RANGE, "1e-3 < beta <= 1")?;
    let q = numeric::integrate(
        |t| mellin_integrand(Complex64::new(-0.5, t), beta),
        0.0,
        I_ERR_HEIGHT,
        1e-12,
        1e-13,
        2000,
    )?;
    let edge = mellin_integrand(Complex64::new(-0.5, I_ERR_HEIGHT), beta).norm();
    Ok(RemainderIntegral {
        value: q.value.re / PI,
        error_estimate: q.error_estimate / PI,
        tail_estimate: edge * (2.0 / PI) / PI,
    })
}

/// The full-line contour integral `(1/2πi)∫ ... ds` over `|Im s| <= 60`
/// without using conjugate symmetry; its imaginary part measures the
/// asymmetry of the numerical integrand.
pub fn i_err_contour(beta: f64) -> Result<Complex64> {
    check_beta(beta, I_ERR_BETA_RANGE, "1e-3 < beta <= 1")?;
    let q = numeric::integrate(
        |t| mellin_integrand(Complex64::new(-0.5, t), beta),
        -I_ERR_HEIGHT,
        I_ERR_HEIGHT,
        1e-12,
        1e-13,
        4000,
    )?;
    Ok(q.value / (2.0 * PI))
}

/// `ℙ_β[X = (n₁, n₂)] = p(n₁, n₂) e^{-β(n₁+n₂)} / Z(β, β)`, from an exact count.
pub fn endpoint_probability(count: &BigUint, n1: u64, n2: u64, beta: f64) -> Result<f64> {
    let lz = log_z(beta, 1e-13)?.value;
    Ok((numeric::ln_biguint(count) - beta * (n1 + n2) as f64 - lz).exp())
}

/// Local-limit approximation `κ^{1/3} / (2π√3 n^{4/3})` of
/// `ℙ_β[X = (n, n)]` at the calibrated `β`.
pub fn local_limit_density(n: u64) -> f64 {
    let kappa = zetalib::constants().kappa;
    kappa.cbrt() / (2.0 * PI * 3f64.sqrt() * (n as f64).powf(4.0 / 3.0))
}

/// `κ/β² + (7/6)·log(1/β) + C`: the residues at `s = 2` and `s = 0`.
pub fn smooth_part(beta: f64) -> f64 {
    let k = zetalib::constants();
    k.kappa / (beta * beta) + 7.0 / 6.0 * (1.0 / beta).ln() + k.c
}
