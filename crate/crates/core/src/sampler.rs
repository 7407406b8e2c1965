//! Boltzmann sampling of configurations under `ℙ_β`, conditioning on the
//! endpoint by rejection, and limit-shape measurements.
//!
//! Under `ℙ_β` the multiplicities `ω(v)` are independent geometric variables
//! with ratio `q = e^{-β(v₁+v₂)}`, so all vectors on a level share `q`. The
//! sampler walks the levels and, inside each level, jumps straight to the
//! next nonzero multiplicity with a geometric skip of parameter `1 - q`; the
//! work per draw is proportional to the number of levels plus the number of
//! segments drawn, not to the number of primitive vectors.
//!
//! Randomness comes from ChaCha8 streams: a `(seed, stream)` pair fixes a
//! sample sequence, and independent streams are used for parallel work.

use std::fmt::Write as _;
use std::ops::ControlFlow;
use std::path::Path;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{config_to_chain, line_weights, primitive_vectors_on_level, ChainConfiguration, ConvexChain,
    PrimitiveVector};
use crate::partition::{self, CalibrationResult};

/// Default support cutoff on `β(v₁+v₂)`.
pub const DEFAULT_CUTOFF: f64 = 46.0;

/// Supported range of `β`.
pub const BETA_RANGE: (f64, f64) = (1e-3, 10.0);

/// Largest `n` accepted by the conditioned sampler.
pub const MAX_CONDITIONED_N: u64 = 200;

/// Levels with more than this many vectors in total are not tabulated;
/// the vector at a given index is then found by scanning the level.
const TABULATE_LIMIT: u64 = 2_000_000;

/// Samples per independent stream in [`endpoint_stats`].
const STATS_CHUNK: u64 = 4096;

/// The generator used throughout: ChaCha8 on a numbered stream.
pub fn rng_from_seed(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform on `(0, 1]`, so its log is finite.
fn open_uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

struct Level {
    m: u32,
    count: u64,
    ln_q: f64,
    /// `log(1 - q)`.
    ln_p: f64,
    vectors: Option<Vec<PrimitiveVector>>,
}

impl Level {
    fn vector(&self, index: u64) -> PrimitiveVector {
        match &self.vectors {
            Some(v) => v[index as usize],
            None => nth_on_level(self.m, index),
        }
    }
}

/// The `index`-th vector of level `m` in slope order, i.e. by descending
/// `x`; agrees with [`primitive_vectors_on_level`].
fn nth_on_level(m: u32, index: u64) -> PrimitiveVector {
    let x = (0..=m)
        .rev()
        .filter(|x| x.gcd(&m) == 1)
        .nth(index as usize)
        .expect("index below the level weight");
    PrimitiveVector::new(x, m - x).expect("coprime by construction")
}

/// Draws from `ℙ_β` restricted to the levels `β m <= cutoff`.
pub struct BoltzmannSampler {
    beta: f64,
    cutoff: f64,
    levels: Vec<Level>,
    tv_bound: f64,
}

impl BoltzmannSampler {
    pub fn new(beta: f64, cutoff: f64) -> Result<Self> {
        if !(beta > BETA_RANGE.0 && beta <= BETA_RANGE.1) {
            return Err(Error::domain("beta", beta, "1e-3 < beta <= 10"));
        }
        if !(cutoff > 0.0 && cutoff.is_finite()) {
            return Err(Error::domain("cutoff", cutoff, "cutoff > 0"));
        }
        let max_level = ((cutoff / beta).floor() as usize).max(1);
        let weights = line_weights(max_level);
        let tabulate = weights.iter().map(|(_, c)| c).sum::<u64>() <= TABULATE_LIMIT;
        let levels = weights
            .iter()
            .map(|(m, c)| {
                let m = m as u32;
                let vectors = tabulate.then(|| primitive_vectors_on_level(m));
                Level::new(beta, m, c, vectors)
            })
            .collect();
        // Σ_{m>M} c_m q^m ≤ Σ_{m>M} m x^m ≤ (M+1) x^{M+1} / (1-x)², x = e^{-β}
        let x = (-beta).exp();
        let next = (max_level + 1) as f64;
        let tv_bound = next * x.powf(next) / (1.0 - x).powi(2);
        Ok(BoltzmannSampler {
            beta,
            cutoff,
            levels,
            tv_bound,
        })
    }

    /// Sampler for the measure restricted to vectors inside `[0,n₁]×[0,n₂]`.
    ///
    /// Vectors outside the box are independent of those inside and must
    /// all vanish on the event `X = (n₁, n₂)`, so conditioning the
    /// restricted measure on the endpoint gives the same law.
    pub fn in_box(beta: f64, n1: u32, n2: u32) -> Result<Self> {
        if !(beta > BETA_RANGE.0 && beta <= BETA_RANGE.1) {
            return Err(Error::domain("beta", beta, "1e-3 < beta <= 10"));
        }
        let levels = (1..=n1 + n2)
            .filter_map(|m| {
                let vectors: Vec<_> = primitive_vectors_on_level(m)
                    .into_iter()
                    .filter(|v| v.x() <= n1 && v.y() <= n2)
                    .collect();
                (!vectors.is_empty()).then(|| Level::new(beta, m, vectors.len() as u64, Some(vectors)))
            })
            .collect();
        Ok(BoltzmannSampler {
            beta,
            cutoff: beta * f64::from(n1 + n2),
            levels,
            tv_bound: 0.0,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// Bound on the total-variation distance to the untruncated measure.
    pub fn tv_bound(&self) -> f64 {
        self.tv_bound
    }

    /// Visits the nonzero multiplicities of one draw in ascending level
    /// order; the visitor may stop the draw early.
    pub fn draw_with<R, F>(&self, rng: &mut R, mut visit: F) -> ControlFlow<()>
    where
        R: Rng + ?Sized,
        F: FnMut(PrimitiveVector, u64) -> ControlFlow<()>,
    {
        for level in &self.levels {
            let mut index = 0u64;
            loop {
                let skip = (open_uniform(rng).ln() / level.ln_p).floor();
                if skip >= (level.count - index) as f64 {
                    break;
                }
                index += skip as u64;
                let multiplicity = 1 + (open_uniform(rng).ln() / level.ln_q).floor() as u64;
                visit(level.vector(index), multiplicity)?;
                index += 1;
            }
        }
        ControlFlow::Continue(())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ChainConfiguration {
        let mut config = ChainConfiguration::new();
        let _ = self.draw_with(rng, |v, k| {
            config.set(v, k);
            ControlFlow::Continue(())
        });
        config
    }

    /// Endpoint of one draw, without building the configuration.
    pub fn sample_endpoint<R: Rng + ?Sized>(&self, rng: &mut R) -> (u64, u64) {
        let (mut x, mut y) = (0u64, 0u64);
        let _ = self.draw_with(rng, |v, k| {
            x += k * u64::from(v.x());
            y += k * u64::from(v.y());
            ControlFlow::Continue(())
        });
        (x, y)
    }

    /// Reference draw: one inverse-transform geometric per vector,
    /// `k = ⌊log U / log q⌋`.
    pub fn sample_exhaustive<R: Rng + ?Sized>(&self, rng: &mut R) -> ChainConfiguration {
        let mut config = ChainConfiguration::new();
        for level in &self.levels {
            for index in 0..level.count {
                let k = (open_uniform(rng).ln() / level.ln_q).floor() as u64;
                if k > 0 {
                    config.set(level.vector(index), k);
                }
            }
        }
        config
    }
}

impl Level {
    fn new(beta: f64, m: u32, count: u64, vectors: Option<Vec<PrimitiveVector>>) -> Self {
        let ln_q = -beta * f64::from(m);
        Level {
            m,
            count,
            ln_q,
            ln_p: (-ln_q.exp()).ln_1p(),
            vectors,
        }
    }
}

/// One draw from `ℙ_β` with the default cutoff.
pub fn sample_config<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> Result<ChainConfiguration> {
    Ok(BoltzmannSampler::new(beta, DEFAULT_CUTOFF)?.sample(rng))
}

/// Empirical endpoint statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleStats {
    pub samples: u64,
    pub mean: [f64; 2],
    /// Unbiased sample covariance.
    pub cov: [[f64; 2]; 2],
    pub hit_count: u64,
}

#[derive(Default, Clone, Copy)]
struct Moments {
    count: u64,
    hits: u64,
    sx: u128,
    sy: u128,
    sxx: u128,
    syy: u128,
    sxy: u128,
}

impl Moments {
    fn merge(self, o: Moments) -> Moments {
        Moments {
            count: self.count + o.count,
            hits: self.hits + o.hits,
            sx: self.sx + o.sx,
            sy: self.sy + o.sy,
            sxx: self.sxx + o.sxx,
            syy: self.syy + o.syy,
            sxy: self.sxy + o.sxy,
        }
    }
}

/// Endpoint mean and covariance over `samples` draws, counting exact hits
/// of `target` when given.
///
/// Draws are split into fixed streams of 4096 samples that run in
/// parallel; sums are exact integers, so the result depends only on the
/// seed.
pub fn endpoint_stats(
    sampler: &BoltzmannSampler,
    samples: u64,
    seed: u64,
    target: Option<(u64, u64)>,
) -> Result<SampleStats> {
    if samples < 1000 {
        return Err(Error::domain("samples", samples, "samples >= 1000"));
    }
    let chunks = samples.div_ceil(STATS_CHUNK);
    let m = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = rng_from_seed(seed, chunk);
            let len = STATS_CHUNK.min(samples - chunk * STATS_CHUNK);
            let mut acc = Moments::default();
            for _ in 0..len {
                let (x, y) = sampler.sample_endpoint(&mut rng);
                let (xw, yw) = (u128::from(x), u128::from(y));
                acc.count += 1;
                acc.hits += u64::from(target == Some((x, y)));
                acc.sx += xw;
                acc.sy += yw;
                acc.sxx += xw * xw;
                acc.syy += yw * yw;
                acc.sxy += xw * yw;
            }
            acc
        })
        .reduce(Moments::default, Moments::merge);
    let n = m.count as f64;
    let mean = [m.sx as f64 / n, m.sy as f64 / n];
    // Σ(x-x̄)(y-ȳ) = Σxy - Σx·Σy/N, formed in exact integers first
    let centered = |sab: u128, sa: u128, sb: u128| -> f64 {
        let num = sab as i128 * i128::from(m.count) - (sa * sb) as i128;
        num as f64 / (n * (n - 1.0))
    };
    let cxy = centered(m.sxy, m.sx, m.sy);
    Ok(SampleStats {
        samples: m.count,
        mean,
        cov: [[centered(m.sxx, m.sx, m.sx), cxy], [cxy, centered(m.syy, m.sy, m.sy)]],
        hit_count: m.hits,
    })
}

/// Local-limit estimate of the acceptance rate of the endpoint `(n, n)`.
pub fn expected_acceptance_rate(n: u64) -> f64 {
    partition::local_limit_density(n)
}

/// Rejection sampler for uniform chains ending at `(n, n)`.
pub struct ConditionedSampler {
    n: u64,
    calibration: CalibrationResult,
    sampler: BoltzmannSampler,
}

/// A uniform chain and what it cost.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionedSample {
    pub chain: ConvexChain,
    pub draws: u64,
}

impl ConditionedSampler {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 || n > MAX_CONDITIONED_N {
            return Err(Error::domain("n", n, "1 <= n <= 200"));
        }
        let calibration = partition::calibrate(n)?;
        let side = n as u32;
        let sampler = BoltzmannSampler::in_box(calibration.beta, side, side)?;
        Ok(ConditionedSampler {
            n,
            calibration,
            sampler,
        })
    }

    pub fn calibration(&self) -> &CalibrationResult {
        &self.calibration
    }

    /// One draw; `Some` when it lands on `(n, n)`. Stops as soon as a
    /// coordinate overshoots.
    pub fn attempt<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<ChainConfiguration> {
        let mut config = ChainConfiguration::new();
        let (mut x, mut y) = (0u64, 0u64);
        let flow = self.sampler.draw_with(rng, |v, k| {
            x += k * u64::from(v.x());
            y += k * u64::from(v.y());
            if x > self.n || y > self.n {
                return ControlFlow::Break(());
            }
            config.set(v, k);
            ControlFlow::Continue(())
        });
        (flow.is_continue() && x == self.n && y == self.n).then_some(config)
    }

    pub fn sample<R: Rng + ?Sized>(&self, max_draws: u64, rng: &mut R) -> Result<ConditionedSample> {
        for draws in 1..=max_draws {
            if let Some(config) = self.attempt(rng) {
                return Ok(ConditionedSample {
                    chain: config_to_chain(&config),
                    draws,
                });
            }
        }
        Err(Error::Exhausted {
            n: self.n,
            draws: max_draws,
            expected_rate: expected_acceptance_rate(self.n),
        })
    }

    /// `count` independent samples, sample `i` drawn from stream `i`.
    /// Runs in parallel; the output depends only on the seed.
    pub fn sample_many(&self, count: u64, max_draws: u64, seed: u64) -> Result<Vec<ConditionedSample>> {
        (0..count)
            .into_par_iter()
            .map(|i| self.sample(max_draws, &mut rng_from_seed(seed, i)))
            .collect()
    }
}

/// A uniformly random chain from `(0,0)` to `(n,n)`.
pub fn sample_conditioned<R: Rng + ?Sized>(n: u64, max_draws: u64, rng: &mut R) -> Result<ConditionedSample> {
    ConditionedSampler::new(n)?.sample(max_draws, rng)
}

/// The limit curve `√(1-x) + √y = 1` as `y(x) = (1 - √(1-x))²`.
pub fn limit_curve(x: f64) -> f64 {
    let r = 1.0 - (1.0 - x).max(0.0).sqrt();
    r * r
}

/// Largest vertical distance from the rescaled vertices to the limit curve.
pub fn limit_shape_deviation(chain: &ConvexChain) -> Result<f64> {
    let (a, b) = chain.endpoint();
    if a != b || a < 1 {
        return Err(Error::InvalidChain {
            index: chain.vertices().len() - 1,
            reason: format!("endpoint ({a},{b}) is not (n,n) with n >= 1"),
        });
    }
    let n = a as f64;
    Ok(chain
        .vertices()
        .iter()
        .map(|&(x, y)| (y as f64 / n - limit_curve(x as f64 / n)).abs())
        .fold(0.0, f64::max))
}

/// `x,y` per vertex with a header line.
pub fn chain_to_csv(chain: &ConvexChain) -> String {
    let mut out = String::from("x,y\n");
    for (x, y) in chain.vertices() {
        writeln!(out, "{x},{y}").expect("writing to a String");
    }
    out
}

pub fn write_chain_csv(path: &Path, chain: &ConvexChain) -> Result<()> {
    std::fs::write(path, chain_to_csv(chain))?;
    Ok(())
}

const SVG_SIZE: f64 = 1000.0;
const SVG_MARGIN: f64 = 50.0;

/// The chain scaled to a 1000×1000 viewport with the limit curve overlaid.
pub fn chain_to_svg(chain: &ConvexChain) -> String {
    let (a, b) = chain.endpoint();
    let (sx, sy) = ((a.max(1)) as f64, (b.max(1)) as f64);
    let span = SVG_SIZE - 2.0 * SVG_MARGIN;
    let map = |x: f64, y: f64| (SVG_MARGIN + x * span, SVG_SIZE - SVG_MARGIN - y * span);
    let points = |pts: &mut dyn Iterator<Item = (f64, f64)>| {
        pts.map(|(x, y)| {
            let (px, py) = map(x, y);
            format!("{px:.2},{py:.2}")
        })
        .collect::<Vec<_>>()
        .join(" ")
    };
    let curve = points(&mut (0..=200).map(|i| {
        let x = f64::from(i) / 200.0;
        (x, limit_curve(x))
    }));
    let path = points(&mut chain.vertices().iter().map(|&(x, y)| (x as f64 / sx, y as f64 / sy)));
    let (x0, _) = map(0.0, 0.0);
    let (x1, y1) = map(1.0, 1.0);
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"1000\" viewBox=\"0 0 1000 1000\">\n",
            "<rect x=\"{x0:.2}\" y=\"{y1:.2}\" width=\"{w:.2}\" height=\"{w:.2}\" fill=\"none\" stroke=\"#bbb\"/>\n",
            "<polyline points=\"{curve}\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\"/>\n",
            "<polyline points=\"{path}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"3\"/>\n",
            "</svg>\n"
        ),
        x0 = x0,
        y1 = y1,
        w = x1 - x0,
        curve = curve,
        path = path,
    )
}

pub fn write_chain_svg(path: &Path, chain: &ConvexChain) -> Result<()> {
    std::fs::write(path, chain_to_svg(chain))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{count_table, for_each_configuration};
    use std::collections::BTreeMap;

    fn as_u64((x, y): (i64, i64)) -> (u64, u64) {
        (x as u64, y as u64)
    }

    fn within_sigma(observed: f64, expected: f64, sigma: f64, k: f64) -> bool {
        (observed - expected).abs() <= k * sigma
    }

    #[test]
    fn marginal_zero_probability() {
        let s = BoltzmannSampler::new(1.0, DEFAULT_CUTOFF).unwrap();
        let mut rng = rng_from_seed(7, 0);
        let v = PrimitiveVector::new(1, 1).unwrap();
        let draws = 100_000;
        let zeros = (0..draws).filter(|_| s.sample(&mut rng).get(v) == 0).count() as f64;
        let p = 1.0 - (-2f64).exp();
        let n = draws as f64;
        assert!(within_sigma(zeros / n, p, (p * (1.0 - p) / n).sqrt(), 3.0));
    }

    #[test]
    fn marginal_geometric_mean() {
        let s = BoltzmannSampler::new(0.5, DEFAULT_CUTOFF).unwrap();
        let mut rng = rng_from_seed(8, 0);
        let draws = 100_000;
        let total: u64 = (0..draws).map(|_| s.sample(&mut rng).get(PrimitiveVector::HORIZONTAL)).sum();
        let q = (-0.5f64).exp();
        let mean = q / (1.0 - q);
        let sd = q.sqrt() / (1.0 - q);
        assert!(within_sigma(total as f64 / draws as f64, mean, sd / (draws as f64).sqrt(), 3.0));
    }

    #[test]
    fn marginal_frequencies_for_several_vectors() {
        let vs = [(1, 0), (2, 1), (1, 3), (3, 4), (5, 2)].map(|(x, y)| PrimitiveVector::new(x, y).unwrap());
        for &beta in &[0.3, 1.0] {
            let s = BoltzmannSampler::new(beta, DEFAULT_CUTOFF).unwrap();
            let mut rng = rng_from_seed(11, (beta * 10.0) as u64);
            let draws = 100_000;
            let mut hist: BTreeMap<(PrimitiveVector, u64), u64> = BTreeMap::new();
            for _ in 0..draws {
                let c = s.sample(&mut rng);
                for &v in &vs {
                    *hist.entry((v, c.get(v).min(3))).or_default() += 1;
                }
            }
            for &v in &vs {
                let q = (-beta * v.level() as f64).exp();
                for k in 0..3u64 {
                    let p = (1.0 - q) * q.powi(k as i32);
                    let f = *hist.get(&(v, k)).unwrap_or(&0) as f64 / draws as f64;
                    let sd = (p * (1.0 - p) / draws as f64).sqrt();
                    assert!(within_sigma(f, p, sd, 3.0), "beta={beta} v={v:?} k={k}: {f} vs {p}");
                }
            }
        }
    }

    #[test]
    fn skip_and_exhaustive_agree() {
        let beta = 0.3;
        let s = BoltzmannSampler::new(beta, DEFAULT_CUTOFF).unwrap();
        let mut rng = rng_from_seed(3, 0);
        let draws = 20_000;
        let (mut a, mut b) = (0u64, 0u64);
        for _ in 0..draws {
            a += s.sample(&mut rng).endpoint().0;
            b += s.sample_exhaustive(&mut rng).endpoint().0;
        }
        let mean = partition::mean_total(beta).unwrap() / 2.0;
        let var = partition::cumulant(2, 0, beta).unwrap();
        let sd = (var / draws as f64).sqrt();
        assert!(within_sigma(a as f64 / draws as f64, mean, sd, 4.0));
        assert!(within_sigma(b as f64 / draws as f64, mean, sd, 4.0));
    }

    #[test]
    fn large_beta_is_mostly_empty() {
        let s = BoltzmannSampler::new(10.0, DEFAULT_CUTOFF).unwrap();
        let mut rng = rng_from_seed(1, 0);
        let empty = (0..10_000).filter(|_| s.sample(&mut rng).is_empty()).count();
        assert!(empty >= 9_900);
    }

    #[test]
    fn untabulated_levels_match_tabulated() {
        for m in [1u32, 2, 12, 97, 360] {
            let table = primitive_vectors_on_level(m);
            for (i, v) in table.iter().enumerate() {
                assert_eq!(nth_on_level(m, i as u64), *v);
            }
        }
        // small beta falls back to scanning levels
        let s = BoltzmannSampler::new(0.002, DEFAULT_CUTOFF).unwrap();
        assert!(s.levels.iter().all(|l| l.vectors.is_none()));
        let c = s.sample(&mut rng_from_seed(0, 0));
        assert_eq!(c.endpoint(), as_u64(config_to_chain(&c).endpoint()));
    }

    #[test]
    fn tv_bound_reported() {
        let s = BoltzmannSampler::new(0.5, DEFAULT_CUTOFF).unwrap();
        assert!(s.tv_bound() <= 1e-15);
        assert!(BoltzmannSampler::new(0.01, DEFAULT_CUTOFF).unwrap().tv_bound() < 1e-12);
        assert!(BoltzmannSampler::new(0.0005, DEFAULT_CUTOFF).is_err());
    }

    #[test]
    fn deterministic_streams() {
        let s = BoltzmannSampler::new(0.4, DEFAULT_CUTOFF).unwrap();
        let a: Vec<_> = (0..50).map({
            let mut r = rng_from_seed(42, 3);
            move |_| s.sample(&mut r)
        }).collect();
        let s = BoltzmannSampler::new(0.4, DEFAULT_CUTOFF).unwrap();
        let mut r = rng_from_seed(42, 3);
        let b: Vec<_> = (0..50).map(|_| s.sample(&mut r)).collect();
        assert_eq!(a, b);
        let x = endpoint_stats(&s, 5000, 9, None).unwrap();
        let y = endpoint_stats(&s, 5000, 9, None).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn endpoint_identity() {
        let s = BoltzmannSampler::new(0.2, DEFAULT_CUTOFF).unwrap();
        let mut rng = rng_from_seed(5, 0);
        for _ in 0..500 {
            let c = s.sample(&mut rng);
            assert_eq!(c.endpoint(), as_u64(config_to_chain(&c).endpoint()));
        }
    }

    #[test]
    fn calibrated_endpoint_statistics() {
        let cal = partition::calibrate(30).unwrap();
        let s = BoltzmannSampler::new(cal.beta, DEFAULT_CUTOFF).unwrap();
        let stats = endpoint_stats(&s, 100_000, 2024, Some((30, 30))).unwrap();
        let var1 = partition::cumulant(2, 0, cal.beta).unwrap();
        let sd = (var1 / stats.samples as f64).sqrt();
        assert!(within_sigma(stats.mean[0], 30.0, sd, 3.0), "{stats:?}");
        let var_total = stats.cov[0][0] + 2.0 * stats.cov[0][1] + stats.cov[1][1];
        assert!((var_total / cal.variance_total - 1.0).abs() <= 0.1);
        let ratio = stats.cov[0][1] / stats.cov[0][0];
        assert!((0.4..=0.6).contains(&ratio), "{ratio}");
    }

    #[test]
    fn hit_frequency_matches_exact_probability() {
        let table = count_table(10, 10).unwrap();
        for n in [5u64, 10] {
            let beta = partition::calibrate(n).unwrap().beta;
            let s = BoltzmannSampler::new(beta, DEFAULT_CUTOFF).unwrap();
            let stats = endpoint_stats(&s, 100_000, 77 + n, Some((n, n))).unwrap();
            let p = partition::endpoint_probability(table.get(n as u32, n as u32), n, n, beta).unwrap();
            let draws = stats.samples as f64;
            let f = stats.hit_count as f64 / draws;
            assert!(within_sigma(f, p, (p * (1.0 - p) / draws).sqrt(), 3.0), "n={n}: {f} vs {p}");
        }
    }

    #[test]
    fn conditioned_samples_are_uniform() {
        let n = 10u32;
        let mut first: BTreeMap<PrimitiveVector, f64> = BTreeMap::new();
        let mut total = 0f64;
        for_each_configuration(n, n, |c| {
            if c.endpoint() == (u64::from(n), u64::from(n)) {
                let v = c.iter().next().unwrap().0;
                *first.entry(v).or_default() += 1.0;
                total += 1.0;
            }
        })
        .unwrap();
        let sampler = ConditionedSampler::new(u64::from(n)).unwrap();
        let samples = sampler.sample_many(4000, 1_000_000, 31).unwrap();
        let mut seen: BTreeMap<PrimitiveVector, f64> = BTreeMap::new();
        for s in &samples {
            let v = s.chain.to_config().iter().next().unwrap().0;
            *seen.entry(v).or_default() += 1.0;
        }
        let draws = samples.len() as f64;
        for (v, count) in &first {
            let p = count / total;
            let f = seen.get(v).copied().unwrap_or(0.0) / draws;
            let sd = (p * (1.0 - p) / draws).sqrt();
            assert!(within_sigma(f, p, sd, 3.5), "{v:?}: {f} vs {p}");
        }
        assert!(seen.keys().all(|v| first.contains_key(v)));
    }

    #[test]
    fn conditioned_sampler_limits() {
        assert!(ConditionedSampler::new(0).is_err());
        assert!(ConditionedSampler::new(201).is_err());
        let s = ConditionedSampler::new(50).unwrap();
        match s.sample(1, &mut rng_from_seed(0, 0)) {
            Err(Error::Exhausted { draws, expected_rate, .. }) => {
                assert_eq!(draws, 1);
                assert!(expected_rate > 0.0 && expected_rate < 1e-2);
            }
            other => panic!("expected exhaustion, got {other:?}"),
        }
        let ok = sample_conditioned(3, 1_000_000, &mut rng_from_seed(4, 0)).unwrap();
        assert_eq!(ok.chain.endpoint(), (3, 3));
    }

    #[test]
    fn limit_shape_examples() {
        let n = 16;
        let staircase = ConvexChain::new(vec![(0, 0), (n, 0), (n, n)]).unwrap();
        assert_eq!(limit_shape_deviation(&staircase).unwrap(), 1.0);
        let on_curve = ConvexChain::new(vec![(0, 0), (12, 4), (16, 16)]).unwrap();
        assert_eq!(limit_shape_deviation(&on_curve).unwrap(), 0.0);
        let diagonal = ConvexChain::new(vec![(0, 0), (5, 5)]).unwrap();
        assert_eq!(limit_shape_deviation(&diagonal).unwrap(), 0.0);
        let off = ConvexChain::new(vec![(0, 0), (3, 0), (3, 2)]).unwrap();
        assert!(limit_shape_deviation(&off).is_err());
        assert_eq!(limit_curve(0.0), 0.0);
        assert_eq!(limit_curve(1.0), 1.0);
    }

    #[test]
    fn exports() {
        let chain = ConvexChain::new(vec![(0, 0), (2, 1), (3, 3)]).unwrap();
        assert_eq!(chain_to_csv(&chain), "x,y\n0,0\n2,1\n3,3\n");
        let svg = chain_to_svg(&chain);
        assert!(svg.starts_with("<svg") && svg.contains("viewBox=\"0 0 1000 1000\""));
        assert_eq!(svg.matches("<polyline").count(), 2);
        let dir = tempfile::tempdir().unwrap();
        write_chain_svg(&dir.path().join("c.svg"), &chain).unwrap();
        write_chain_csv(&dir.path().join("c.csv"), &chain).unwrap();
        assert_eq!(std::fs::read_to_string(dir.path().join("c.csv")).unwrap(), chain_to_csv(&chain));
    }
}
