//! Asymptotic estimates for `p(n)` and `p̃(n)`, and the oscillatory
//! contribution of the zeta zeros.
//!
//! The oscillatory term is the residue sum over nontrivial zeros
//!
//! ```text
//! I_crit(β) = Σ_ρ Γ(ρ) ζ(ρ+1) ζ(ρ-1) / (ζ'(ρ) β^ρ)
//! ```
//!
//! taken over conjugate pairs, so each pair contributes `2·Re[...]`.
//! Estimates are kept in log space and returned with a
//! `(mantissa, decimal exponent)` pair.

use std::f64::consts::{LN_10, LN_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::enumerate::{count_table, CountTable};
use crate::error::{Error, Result};
use crate::numeric::{ln_biguint, scientific};
use crate::zetalib::{self, default_zeros, gamma_unchecked, zeta_unchecked, ZetaZero};

/// Number of zero pairs used when the caller does not choose.
pub const DEFAULT_ZEROS: usize = 3;

/// Supported range of `β` for [`i_crit_zero_sum`].
pub const ICRIT_BETA_RANGE: (f64, f64) = (1e-4, 1.0);

/// Published two-term approximation: cosine and sine coefficients and `γ₁`
/// to the printed precision.
pub const TWO_TERM_COS: f64 = 6.0240e-11;
pub const TWO_TERM_SIN: f64 = 9.5848e-10;
pub const TWO_TERM_GAMMA: f64 = 14.1347;

/// Value of the zero sum and the size of its last pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroSum {
    pub value: f64,
    /// `|2·Re[...]|` of the K-th pair: how much truncation could matter.
    pub last_term: f64,
}

/// Residue of the Mellin integrand at a simple zero `ρ`:
/// `Γ(ρ)ζ(ρ+1)ζ(ρ-1)/ζ'(ρ)`, without the `β^{-ρ}` factor.
pub fn zero_amplitude(rho: Complex64, zeta_prime: Complex64) -> Complex64 {
    gamma_unchecked(rho) * zeta_unchecked(rho + 1.0) * zeta_unchecked(rho - 1.0) / zeta_prime
}

/// Contribution `2·Re[A(ρ) β^{-ρ}]` of a conjugate zero pair.
pub fn pair_term(zero: &ZetaZero, beta: f64) -> f64 {
    let rho = zero.rho();
    2.0 * (zero_amplitude(rho, zero.zeta_prime) * (-rho * beta.ln()).exp()).re
}

/// `I_crit(β)` truncated to the first `pairs` conjugate zero pairs.
pub fn i_crit_zero_sum(beta: f64, pairs: usize) -> Result<ZeroSum> {
    if !(beta > ICRIT_BETA_RANGE.0 && beta <= ICRIT_BETA_RANGE.1) {
        return Err(Error::domain("beta", beta, "1e-4 < beta <= 1"));
    }
    i_crit_with_zeros(default_zeros(), beta, pairs)
}

/// [`i_crit_zero_sum`] over a caller-supplied zero list, for any `β > 0`.
pub fn i_crit_with_zeros(zeros: &[ZetaZero], beta: f64, pairs: usize) -> Result<ZeroSum> {
    if pairs == 0 || pairs > zeros.len() {
        return Err(Error::NotEnoughZeros {
            requested: pairs,
            available: zeros.len(),
        });
    }
    let terms: Vec<f64> = zeros[..pairs].iter().map(|z| pair_term(z, beta)).collect();
    Ok(ZeroSum {
        value: terms.iter().sum(),
        last_term: terms[pairs - 1].abs(),
    })
}

/// The printed two-term closed form
/// `(6.0240e-11·cos(14.1347 log β) + 9.5848e-10·sin(14.1347 log β)) / √β`.
pub fn i_crit_two_term(beta: f64) -> f64 {
    let phase = TWO_TERM_GAMMA * beta.ln();
    (TWO_TERM_COS * phase.cos() + TWO_TERM_SIN * phase.sin()) / beta.sqrt()
}

/// A number given by its natural log, with its decimal rendering.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scientific {
    pub mantissa: f64,
    pub exponent: i64,
}

impl std::fmt::Display for Scientific {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}e{}", self.mantissa, self.exponent)
    }
}

/// `log(estimate) = main_exponent + icrit_term + log_prefactor`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticEstimate {
    pub n: u64,
    pub main_exponent: f64,
    pub icrit_term: f64,
    pub log_prefactor: f64,
    pub log10_value: f64,
    pub value: Scientific,
}

impl AsymptoticEstimate {
    fn assemble(n: u64, main_exponent: f64, icrit_term: f64, log_prefactor: f64) -> Self {
        let log10_value = (main_exponent + icrit_term + log_prefactor) / LN_10;
        let (mantissa, exponent) = scientific(log10_value);
        AsymptoticEstimate {
            n,
            main_exponent,
            icrit_term,
            log_prefactor,
            log10_value,
            value: Scientific { mantissa, exponent },
        }
    }

    /// Natural log of the estimate.
    pub fn ln_value(&self) -> f64 {
        self.main_exponent + self.icrit_term + self.log_prefactor
    }
}

fn oscillation(beta: f64, pairs: usize) -> Result<f64> {
    if pairs == 0 {
        return Ok(0.0);
    }
    Ok(i_crit_with_zeros(default_zeros(), beta, pairs)?.value)
}

/// Leading-order estimate of `p(n)` with `pairs` zero pairs in the
/// oscillatory term (`pairs = 0` drops it).
///
/// ```text
/// p(n) ~ e^{-2ζ'(-1)} / ((2π)^{7/6} √3 κ^{1/18} n^{17/18})
///        · exp[3κ^{1/3} n^{2/3} + I_crit((κ/n)^{1/3})]
/// ```
pub fn estimate_p(n: u64, pairs: usize) -> Result<AsymptoticEstimate> {
    if n == 0 {
        return Err(Error::domain("n", n, "n >= 1"));
    }
    let k = zetalib::constants();
    let nf = n as f64;
    let main = 3.0 * k.kappa.cbrt() * nf.powf(2.0 / 3.0);
    let log_prefactor = -2.0 * k.zeta_prime_minus1
        - 7.0 / 6.0 * (2.0 * PI).ln()
        - 0.5 * 3f64.ln()
        - k.kappa.ln() / 18.0
        - 17.0 / 18.0 * nf.ln();
    let icrit = oscillation((k.kappa / nf).cbrt(), pairs)?;
    Ok(AsymptoticEstimate::assemble(n, main, icrit, log_prefactor))
}

/// Constant in front of the polyomino estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PolyominoPrefactor {
    /// `κ^{1/9} 2^{-5/9}`, obtained by carrying the saddle-point
    /// computation through with the polyomino weights; the exact counts
    /// converge to this one.
    #[default]
    Derived,
    /// `(κ/4)^{5/18}` as published; off by a factor `κ^{1/6}`.
    Printed,
}

impl PolyominoPrefactor {
    fn ln_constant(self, kappa: f64) -> f64 {
        match self {
            PolyominoPrefactor::Derived => kappa.ln() / 9.0 - 5.0 / 9.0 * LN_2,
            PolyominoPrefactor::Printed => 5.0 / 18.0 * (kappa / 4.0).ln(),
        }
    }
}

/// Estimate of the number of convex polyominoes with perimeter `2n`
/// (semi-perimeter `n`), using the default prefactor.
pub fn estimate_polyomino(n: u64, pairs: usize) -> Result<AsymptoticEstimate> {
    estimate_polyomino_with(n, pairs, PolyominoPrefactor::default())
}

/// ```text
/// p̃(n) ~ c · e^{-2ζ'(-1)} / (√3 π^{2/3}) · n^{-11/18}
///        · exp[3(κ/4)^{1/3} n^{2/3} + I_crit((2κ/n)^{1/3})]
/// ```
pub fn estimate_polyomino_with(n: u64, pairs: usize, prefactor: PolyominoPrefactor) -> Result<AsymptoticEstimate> {
    if n == 0 {
        return Err(Error::domain("n", n, "n >= 1"));
    }
    let k = zetalib::constants();
    let nf = n as f64;
    let main = 3.0 * (k.kappa / 4.0).cbrt() * nf.powf(2.0 / 3.0);
    let log_prefactor = prefactor.ln_constant(k.kappa) - 2.0 * k.zeta_prime_minus1
        - 0.5 * 3f64.ln()
        - 2.0 / 3.0 * PI.ln()
        - 11.0 / 18.0 * nf.ln();
    let icrit = oscillation((2.0 * k.kappa / nf).cbrt(), pairs)?;
    Ok(AsymptoticEstimate::assemble(n, main, icrit, log_prefactor))
}

/// One row of the RH-gap diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhGapRecord {
    pub n: u32,
    /// `log p(n) - 3κ^{1/3} n^{2/3}`.
    pub gap: f64,
    /// `gap - icrit_term - log_prefactor` with the default number of zeros.
    pub residual: f64,
}

/// `log p(n) - 3κ^{1/3}n^{2/3}` for `1 <= n <= max_n`.
pub fn rh_gap(max_n: u32) -> Result<Vec<RhGapRecord>> {
    let table = count_table(max_n, max_n)?;
    rh_gap_from_table(&table)
}

/// [`rh_gap`] over the diagonal of an already computed table.
pub fn rh_gap_from_table(table: &CountTable) -> Result<Vec<RhGapRecord>> {
    let max_n = table.n1().min(table.n2());
    (1..=max_n)
        .map(|n| {
            let est = estimate_p(u64::from(n), DEFAULT_ZEROS)?;
            let gap = ln_biguint(table.get(n, n)) - est.main_exponent;
            Ok(RhGapRecord {
                n,
                gap,
                residual: gap - est.icrit_term - est.log_prefactor,
            })
        })
        .collect()
}
