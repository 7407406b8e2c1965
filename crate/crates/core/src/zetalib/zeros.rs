use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gamma::ln_gamma;
use super::zeta::{zeta_derivative, zeta_unchecked};
use crate::error::{Error, Result};

/// Largest height supported by [`find_zeta_zeros`].
pub const MAX_HEIGHT: f64 = 60.0;

/// Zeros with `|ζ'(ρ)|` below this are treated as non-simple and rejected.
pub const SIMPLE_ZERO_THRESHOLD: f64 = 1e-6;

const SCAN_START: f64 = 1.0;
const SCAN_STEP: f64 = 0.05;

/// A nontrivial zero `ρ = 1/2 + iγ` with `ζ'(ρ)` attached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaZero {
    pub gamma: f64,
    #[serde(with = "crate::numeric::complex_object")]
    pub zeta_prime: Complex64,
}

impl ZetaZero {
    pub fn rho(&self) -> Complex64 {
        Complex64::new(0.5, self.gamma)
    }
}

/// Riemann–Siegel theta `θ(t) = Im log Γ(1/4 + it/2) - (t/2) log π`.
pub fn riemann_siegel_theta(t: f64) -> f64 {
    let lg = ln_gamma(Complex64::new(0.25, 0.5 * t)).expect("Re = 1/4 > 0");
    lg.im - 0.5 * t * PI.ln()
}

/// Hardy's function `Z(t) = e^{iθ(t)} ζ(1/2 + it)`, real for real `t`.
pub fn hardy_z(t: f64) -> f64 {
    let phase = Complex64::from_polar(1.0, riemann_siegel_theta(t));
    (phase * zeta_unchecked(Complex64::new(0.5, t))).re
}

/// All zeros on the critical line with `0 < γ <= height`, ascending.
///
/// Sign changes of [`hardy_z`] on a grid of step 0.05 are refined by
/// bisection until the bracket stops shrinking in double precision.
pub fn find_zeta_zeros(height: f64) -> Result<Vec<ZetaZero>> {
    if !(height > 0.0 && height <= MAX_HEIGHT) {
        return Err(Error::domain("T", height, "0 < T <= 60"));
    }
    let mut zeros = Vec::new();
    let mut lo = SCAN_START;
    let mut z_lo = hardy_z(lo);
    while lo < height {
        let hi = (lo + SCAN_STEP).min(height);
        let z_hi = hardy_z(hi);
        if z_lo * z_hi < 0.0 || z_hi == 0.0 {
            let gamma = bisect(lo, hi, z_lo);
            let zeta_prime = zeta_derivative(Complex64::new(0.5, gamma))?;
            if zeta_prime.norm() < SIMPLE_ZERO_THRESHOLD {
                return Err(Error::MultipleZero {
                    gamma,
                    derivative: zeta_prime.norm(),
                });
            }
            zeros.push(ZetaZero { gamma, zeta_prime });
        }
        lo = hi;
        z_lo = z_hi;
    }
    Ok(zeros)
}

fn bisect(mut lo: f64, mut hi: f64, mut z_lo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let z_mid = hardy_z(mid);
        if z_mid == 0.0 {
            return mid;
        }
        if (z_mid < 0.0) == (z_lo < 0.0) {
            lo = mid;
            z_lo = z_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Zeros up to height 60, computed once per process.
pub fn default_zeros() -> &'static [ZetaZero] {
    static ZEROS: OnceLock<Vec<ZetaZero>> = OnceLock::new();
    ZEROS.get_or_init(|| find_zeta_zeros(MAX_HEIGHT).expect("zeros below height 60 are simple"))
}

/// Plain-text zero cache: one `gamma zeta_prime_re zeta_prime_im` line per
/// zero, 12 significant digits.
pub fn format_zero_cache(zeros: &[ZetaZero]) -> String {
    let mut out = String::new();
    for z in zeros {
        writeln!(
            out,
            "{} {} {}",
            significant(z.gamma, 12),
            significant(z.zeta_prime.re, 12),
            significant(z.zeta_prime.im, 12)
        )
        .expect("writing to a String");
    }
    out
}

pub fn parse_zero_cache(text: &str) -> Result<Vec<ZetaZero>> {
    let bad = |line: usize, reason: &str| Error::Cache {
        path: "<zero cache>".into(),
        reason: format!("line {}: {reason}", line + 1),
    };
    let mut zeros = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<f64> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad(i, "non-numeric field"))?;
        let [gamma, re, im] = fields[..] else {
            return Err(bad(i, "expected three fields"));
        };
        if let Some(prev) = zeros.last().map(|z: &ZetaZero| z.gamma) {
            if gamma <= prev {
                return Err(bad(i, "zeros must be in increasing order"));
            }
        }
        zeros.push(ZetaZero {
            gamma,
            zeta_prime: Complex64::new(re, im),
        });
    }
    Ok(zeros)
}

pub fn write_zero_cache(path: &Path, zeros: &[ZetaZero]) -> Result<()> {
    std::fs::write(path, format_zero_cache(zeros))?;
    Ok(())
}

pub fn read_zero_cache(path: &Path) -> Result<Vec<ZetaZero>> {
    let text = std::fs::read_to_string(path)?;
    parse_zero_cache(&text).map_err(|e| match e {
        Error::Cache { reason, .. } => Error::Cache {
            path: path.to_path_buf(),
            reason,
        },
        other => other,
    })
}

/// Reads the cache if present and checks it against a fresh computation to
/// `1e-6`; otherwise computes and writes it.
pub fn load_or_compute_zero_cache(path: &Path, height: f64) -> Result<Vec<ZetaZero>> {
    let fresh = find_zeta_zeros(height)?;
    if path.exists() {
        let cached = read_zero_cache(path)?;
        let cached: Vec<_> = cached.into_iter().filter(|z| z.gamma <= height).collect();
        let consistent = cached.len() == fresh.len()
            && cached.iter().zip(&fresh).all(|(a, b)| {
                (a.gamma - b.gamma).abs() <= 1e-6 && (a.zeta_prime - b.zeta_prime).norm() <= 1e-6
            });
        if !consistent {
            return Err(Error::Cache {
                path: path.to_path_buf(),
                reason: "cached zeros disagree with recomputation beyond 1e-6".into(),
            });
        }
        return Ok(cached);
    }
    write_zero_cache(path, &fresh)?;
    Ok(fresh)
}

fn significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = digits as i32 - 1 - magnitude;
    if (0..=20).contains(&decimals) {
        format!("{:.*}", decimals as usize, x)
    } else {
        format!("{:.*e}", digits - 1, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_zeros() {
        let zeros = default_zeros();
        assert!((zeros[0].gamma - 14.1347).abs() <= 5e-4);
        assert!((zeros[1].gamma - 21.0220).abs() <= 5e-4);
        // mpmath zetazero(1..3)
        assert!((zeros[0].gamma - 14.134_725_141_734_694).abs() < 1e-9);
        assert!((zeros[1].gamma - 21.022_039_638_771_555).abs() < 1e-9);
        assert!((zeros[2].gamma - 25.010_857_580_145_69).abs() < 1e-9);
        assert_eq!(zeros.len(), 13);
        assert!((zeros[12].gamma - 59.347_044_002_602_35).abs() < 1e-9);
    }

    #[test]
    fn zero_count_below_thirty() {
        assert_eq!(find_zeta_zeros(30.0).unwrap().len(), 3);
    }

    #[test]
    fn zero_quality_and_derivatives() {
        for z in default_zeros() {
            assert!(zeta_unchecked(z.rho()).norm() <= 1e-10, "gamma = {}", z.gamma);
            assert!(z.zeta_prime.norm() > SIMPLE_ZERO_THRESHOLD);
        }
        let d1 = default_zeros()[0].zeta_prime;
        assert!(d1.norm() > 0.5 && d1.norm() < 1.5);
        // mpmath: ζ'(ρ₁) = 0.78329651186703 + 0.12469982974817i
        assert!((d1 - Complex64::new(0.783_296_511_867_031, 0.124_699_829_748_171)).norm() < 1e-8);
    }

    #[test]
    fn height_range_is_enforced() {
        assert!(find_zeta_zeros(60.5).is_err());
        assert!(find_zeta_zeros(0.0).is_err());
        assert!(find_zeta_zeros(10.0).unwrap().is_empty());
    }

    #[test]
    fn theta_matches_stirling_expansion() {
        for &t in &[20.0, 40.0, 60.0] {
            let approx = t / 2.0 * (t / (2.0 * PI)).ln() - t / 2.0 - PI / 8.0 + 1.0 / (48.0 * t)
                + 7.0 / (5760.0 * t * t * t);
            assert!((riemann_siegel_theta(t) - approx).abs() < 1e-7);
        }
    }

    #[test]
    fn cache_round_trip() {
        let zeros = find_zeta_zeros(26.0).unwrap();
        let text = format_zero_cache(&zeros);
        assert_eq!(text.lines().next().unwrap().split(' ').next().unwrap(), "14.1347251417");
        let parsed = parse_zero_cache(&text).unwrap();
        assert_eq!(parsed.len(), 3);
        for (a, b) in parsed.iter().zip(&zeros) {
            assert!((a.gamma - b.gamma).abs() < 1e-9);
            assert!((a.zeta_prime - b.zeta_prime).norm() < 1e-9);
        }
        assert!(parse_zero_cache("14.1 0.7\n").is_err());
        assert!(parse_zero_cache("21 1 1\n14 1 1\n").is_err());
    }

    #[test]
    fn cache_file_is_checked_against_recomputation() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("zeros.txt");
        let first = load_or_compute_zero_cache(&path, 30.0).unwrap();
        assert_eq!(first.len(), 3);
        let second = load_or_compute_zero_cache(&path, 30.0).unwrap();
        assert_eq!(second.len(), 3);
        std::fs::write(&path, "14.2 0.78 0.12\n21.0220396388 1.1 -0.2\n25.0108575801 1.3 0.45\n").unwrap();
        assert!(matches!(load_or_compute_zero_cache(&path, 30.0), Err(Error::Cache { .. })));
    }
}
