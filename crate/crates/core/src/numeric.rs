//! Small numerical kernels shared by the analytic modules: compensated
//! summation, adaptive Gauss–Kronrod quadrature, Ridders differentiation and
//! the logarithm of a big integer.

use num_bigint::BigUint;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Neumaier compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum of complex terms, componentwise.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let kronrod = kronrod * half;
    let gauss = gauss * half;
    (kronrod, (kronrod - gauss).norm())
}

/// Result of an adaptive quadrature.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: Complex64,
    pub error_estimate: f64,
    pub intervals: usize,
}

/// Adaptive Gauss–Kronrod integration of a complex-valued function of a real
/// variable over `[a, b]`, refining the worst interval until the summed
/// Kronrod–Gauss differences fall below `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Result<Quadrature> {
    let mut pieces = vec![{
        let (v, e) = kronrod15(&f, a, b);
        (a, b, v, e)
    }];
    loop {
        let total: Complex64 = pieces.iter().map(|p| p.2).sum();
        let error: f64 = pieces.iter().map(|p| p.3).sum();
        if error <= abs_tol.max(rel_tol * total.norm()) {
            return Ok(Quadrature {
                value: total,
                error_estimate: error,
                intervals: pieces.len(),
            });
        }
        if pieces.len() >= max_intervals {
            return Err(Error::Convergence {
                what: "adaptive Gauss-Kronrod quadrature",
                achieved: error,
            });
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .expect("at least one interval");
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = kronrod15(&f, lo, mid);
        let (v2, e2) = kronrod15(&f, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}

/// Derivative estimate with its error, from Ridders' extrapolation of
/// central differences.
#[derive(Debug, Clone, Copy)]
pub struct Derivative<T> {
    pub value: T,
    pub error: f64,
}

/// Ridders' method: central differences at steps `h, h/1.4, h/1.4², …`
/// combined in a Neville tableau; returns the entry with the smallest
/// estimated error.
pub fn ridders<F>(f: F, h: f64) -> Result<Derivative<Complex64>>
where
    F: Fn(f64) -> Result<Complex64>,
{
    const SHRINK: f64 = 1.4;
    const SHRINK2: f64 = SHRINK * SHRINK;
    const LEVELS: usize = 10;
    let mut table = [[Complex64::new(0.0, 0.0); LEVELS]; LEVELS];
    let mut step = h;
    table[0][0] = (f(step)? - f(-step)?) / (2.0 * step);
    let mut best = Derivative {
        value: table[0][0],
        error: f64::INFINITY,
    };
    for i in 1..LEVELS {
        step /= SHRINK;
        table[0][i] = (f(step)? - f(-step)?) / (2.0 * step);
        let mut factor = SHRINK2;
        for j in 1..=i {
            table[j][i] = (table[j - 1][i] * factor - table[j - 1][i - 1]) / (factor - 1.0);
            factor *= SHRINK2;
            let err = (table[j][i] - table[j - 1][i])
                .norm()
                .max((table[j][i] - table[j - 1][i - 1]).norm());
            if err <= best.error {
                best = Derivative {
                    value: table[j][i],
                    error: err,
                };
            }
        }
        if (table[i][i] - table[i - 1][i - 1]).norm() >= 2.0 * best.error {
            break;
        }
    }
    Ok(best)
}

/// Natural logarithm of a positive big integer, accurate to a few ulps.
pub fn ln_biguint(x: &BigUint) -> f64 {
    assert!(x.bits() > 0, "logarithm of zero");
    let bits = x.bits();
    if bits <= 1000 {
        let as_f64: f64 = num_traits::ToPrimitive::to_f64(x).expect("finite below 2^1000");
        return as_f64.ln();
    }
    let shift = bits - 64;
    let top: u64 = num_traits::ToPrimitive::to_u64(&(x >> shift)).expect("64 bits");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `(mantissa, exponent)` with `10^log10 = mantissa · 10^exponent`,
/// mantissa in `[1, 10)`.
pub fn scientific(log10: f64) -> (f64, i64) {
    let mut exponent = log10.floor() as i64;
    let mut mantissa = 10f64.powf(log10 - exponent as f64);
    if mantissa >= 10.0 {
        mantissa /= 10.0;
        exponent += 1;
    }
    (mantissa, exponent)
}

/// Serde adapter writing a complex number as `{"re": .., "im": ..}`.
pub mod complex_object {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct ReIm {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        ReIm { re: z.re, im: z.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let ReIm { re, im } = ReIm::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}
