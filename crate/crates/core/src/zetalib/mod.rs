//! Complex special functions: Gamma, Riemann zeta and its derivative, zeros
//! on the critical line, and the constants entering the asymptotics.
//!
//! Everything is double precision; the accuracy targets are relative
//! `1e-12` for Gamma with `|Im s| <= 100` and `1e-10` for zeta with
//! `Re s ∈ [-1.5, 4]`, `|Im s| <= 60`.

mod gamma;
mod zeros;
mod zeta;

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

pub use gamma::{gamma_complex, ln_gamma};
pub use zeros::{
    default_zeros, find_zeta_zeros, format_zero_cache, hardy_z, load_or_compute_zero_cache, parse_zero_cache,
    read_zero_cache, riemann_siegel_theta, write_zero_cache, ZetaZero, MAX_HEIGHT, SIMPLE_ZERO_THRESHOLD,
};
pub use zeta::{zeta_complex, zeta_derivative};

pub(crate) use gamma::gamma_unchecked;
pub(crate) use zeta::{eta_zeta, zeta_unchecked};

/// `κ = ζ(3)/ζ(2)`, `ζ'(-1)` and `C = -2ζ'(-1) - log(2π)/6`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaConstants {
    pub kappa: f64,
    pub zeta_prime_minus1: f64,
    pub c: f64,
}

impl ZetaConstants {
    /// `e^{-2ζ'(-1)}`.
    pub fn exp_minus_two_zeta_prime(&self) -> f64 {
        (-2.0 * self.zeta_prime_minus1).exp()
    }
}

/// Computes the constants from [`zeta_complex`] and [`zeta_derivative`];
/// cached after the first call.
pub fn constants() -> ZetaConstants {
    static CONSTANTS: OnceLock<ZetaConstants> = OnceLock::new();
    *CONSTANTS.get_or_init(|| {
        let z3 = zeta_unchecked(Complex64::new(3.0, 0.0)).re;
        let z2 = zeta_unchecked(Complex64::new(2.0, 0.0)).re;
        let zeta_prime_minus1 = zeta_derivative(Complex64::new(-1.0, 0.0))
            .expect("-1 is not a pole")
            .re;
        ZetaConstants {
            kappa: z3 / z2,
            zeta_prime_minus1,
            c: -2.0 * zeta_prime_minus1 - (2.0 * PI).ln() / 6.0,
        }
    })
}
