//! Primitive vectors, the totient sieve and the bijection between convex
//! chains and multiplicity configurations.
//!
//! A convex chain starting at the origin is encoded by a finite-support map
//! `ω` from primitive vectors to positive multiplicities: every segment of the
//! chain is `ω(v)·v` for the primitive direction `v` of that segment, and the
//! segments are laid down by increasing slope.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A lattice point `(x, y)`.
pub type Point = (i64, i64);

/// A nonzero vector with coprime nonnegative coordinates.
///
/// Ordered by slope: `(1,0)` is the minimum, `(0,1)` the maximum, and
/// interior vectors compare by `y/x`. Comparison uses integer
/// cross-multiplication only.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimitiveVector {
    x: u32,
    y: u32,
}

impl PrimitiveVector {
    pub const HORIZONTAL: PrimitiveVector = PrimitiveVector { x: 1, y: 0 };
    pub const VERTICAL: PrimitiveVector = PrimitiveVector { x: 0, y: 1 };

    /// Returns `None` unless `gcd(x, y) = 1`.
    pub fn new(x: u32, y: u32) -> Option<Self> {
        (x.gcd(&y) == 1).then_some(PrimitiveVector { x, y })
    }

    pub fn x(self) -> u32 {
        self.x
    }

    pub fn y(self) -> u32 {
        self.y
    }

    /// Level `x + y`; the diagonal Boltzmann weight of `v` is `β·level`.
    pub fn level(self) -> u64 {
        u64::from(self.x) + u64::from(self.y)
    }
}

impl Ord for PrimitiveVector {
    fn cmp(&self, other: &Self) -> Ordering {
        // y1/x1 < y2/x2  <=>  y1*x2 < y2*x1 for vectors in the closed first
        // quadrant; this also places (1,0) first and (0,1) last.
        let lhs = u64::from(self.y) * u64::from(other.x);
        let rhs = u64::from(other.y) * u64::from(self.x);
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for PrimitiveVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for PrimitiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl fmt::Display for PrimitiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// All primitive vectors in `[0,n1] × [0,n2]`, sorted by slope.
pub fn primitive_vectors_in_box(n1: u32, n2: u32) -> Vec<PrimitiveVector> {
    let mut out = Vec::new();
    for x in 0..=n1 {
        for y in 0..=n2 {
            if let Some(v) = PrimitiveVector::new(x, y) {
                out.push(v);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Primitive vectors on the level `x + y = m`, in slope order.
pub fn primitive_vectors_on_level(m: u32) -> Vec<PrimitiveVector> {
    // Slope y/x = (m-x)/x decreases with x, so walk x downwards.
    (0..=m)
        .rev()
        .filter_map(|x| PrimitiveVector::new(x, m - x))
        .collect()
}

/// Linear sieve of Euler's totient and smallest prime factors.
#[derive(Debug, Clone)]
pub struct Sieve {
    phi: Vec<u64>,
    spf: Vec<u32>,
}

impl Sieve {
    pub fn new(limit: usize) -> Self {
        let mut phi = vec![0u64; limit + 1];
        let mut spf = vec![0u32; limit + 1];
        let mut primes: Vec<u32> = Vec::new();
        if limit >= 1 {
            phi[1] = 1;
        }
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                phi[i] = (i - 1) as u64;
                primes.push(i as u32);
            }
            for &p in &primes {
                let ip = i * p as usize;
                if p > spf[i] || ip > limit {
                    break;
                }
                spf[ip] = p;
                phi[ip] = if p == spf[i] {
                    phi[i] * u64::from(p)
                } else {
                    phi[i] * u64::from(p - 1)
                };
            }
        }
        Sieve { phi, spf }
    }

    pub fn limit(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn phi(&self, m: usize) -> u64 {
        self.phi[m]
    }

    /// Smallest prime factor of `m >= 2`.
    pub fn smallest_prime_factor(&self, m: usize) -> u32 {
        self.spf[m]
    }

    /// Distinct prime factors of `m`, ascending.
    pub fn distinct_prime_factors(&self, mut m: usize) -> impl Iterator<Item = u32> + '_ {
        std::iter::from_fn(move || {
            if m < 2 {
                return None;
            }
            let p = self.spf[m];
            while m % p as usize == 0 {
                m /= p as usize;
            }
            Some(p)
        })
    }
}

/// Number of primitive vectors on each level `x + y = m`.
///
/// `c_1 = 2` (the two axis vectors) and `c_m = φ(m)` for `m >= 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineWeights {
    // c[0] is unused padding so that c[m] is the weight of level m.
    c: Vec<u64>,
}

impl LineWeights {
    pub fn get(&self, m: usize) -> u64 {
        self.c[m]
    }

    /// Largest level `M` covered.
    pub fn max_level(&self) -> usize {
        self.c.len() - 1
    }

    /// `(m, c_m)` for `m = 1..=M`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.c.iter().copied().enumerate().skip(1)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.c[1..]
    }
}

/// Level weights `c_1..c_M` of the full set of primitive vectors.
pub fn line_weights(max_level: usize) -> LineWeights {
    weights_with_first(max_level, 2)
}

/// Level weights with the horizontal vector `(1,0)` removed (`c̃_1 = 1`).
pub fn polyomino_line_weights(max_level: usize) -> LineWeights {
    weights_with_first(max_level, 1)
}

fn weights_with_first(max_level: usize, first: u64) -> LineWeights {
    let sieve = Sieve::new(max_level);
    let mut c: Vec<u64> = (0..=max_level).map(|m| sieve.phi(m)).collect();
    c[0] = 0;
    if max_level >= 1 {
        c[1] = first;
    }
    LineWeights { c }
}

/// Finite-support multiplicity function on primitive vectors.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChainConfiguration {
    support: BTreeMap<PrimitiveVector, u64>,
}

impl ChainConfiguration {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets `ω(v) = multiplicity`; zero removes `v` from the support.
    pub fn set(&mut self, v: PrimitiveVector, multiplicity: u64) {
        if multiplicity == 0 {
            self.support.remove(&v);
        } else {
            self.support.insert(v, multiplicity);
        }
    }

    pub fn add(&mut self, v: PrimitiveVector, multiplicity: u64) {
        if multiplicity > 0 {
            *self.support.entry(v).or_insert(0) += multiplicity;
        }
    }

    pub fn get(&self, v: PrimitiveVector) -> u64 {
        self.support.get(&v).copied().unwrap_or(0)
    }

    /// Support in slope order.
    pub fn iter(&self) -> impl Iterator<Item = (PrimitiveVector, u64)> + '_ {
        self.support.iter().map(|(&v, &k)| (v, k))
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// `Σ ω(v)·v`.
    pub fn endpoint(&self) -> (u64, u64) {
        self.iter().fold((0, 0), |(x, y), (v, k)| {
            (x + k * u64::from(v.x), y + k * u64::from(v.y))
        })
    }
}

impl FromIterator<(PrimitiveVector, u64)> for ChainConfiguration {
    fn from_iter<I: IntoIterator<Item = (PrimitiveVector, u64)>>(iter: I) -> Self {
        let mut config = ChainConfiguration::new();
        for (v, k) in iter {
            config.add(v, k);
        }
        config
    }
}

impl fmt::Debug for ChainConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.support.iter()).finish()
    }
}

/// Lattice polygonal line from the origin with strictly increasing slopes in
/// `[0, +∞]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConvexChain {
    vertices: Vec<Point>,
}

impl ConvexChain {
    /// Validates the vertex sequence.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        validate_vertices(&vertices)?;
        Ok(ConvexChain { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Number of segments.
    pub fn segments(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn endpoint(&self) -> Point {
        *self.vertices.last().expect("a chain always has its origin vertex")
    }
}

fn validate_vertices(vertices: &[Point]) -> Result<()> {
    match vertices.first() {
        None => {
            return Err(Error::InvalidChain {
                index: 0,
                reason: "empty vertex sequence".into(),
            })
        }
        Some(&p) if p != (0, 0) => {
            return Err(Error::InvalidChain {
                index: 0,
                reason: format!("chain must start at the origin, found {p:?}"),
            })
        }
        _ => {}
    }
    let mut previous: Option<Point> = None;
    for (i, pair) in vertices.windows(2).enumerate() {
        let step = (pair[1].0 - pair[0].0, pair[1].1 - pair[0].1);
        if step.0 < 0 || step.1 < 0 || step == (0, 0) {
            return Err(Error::InvalidChain {
                index: i + 1,
                reason: format!("step {step:?} is not a nonzero vector of the first quadrant"),
            });
        }
        if let Some(prev) = previous {
            // Strictly increasing slope: cross(prev, step) > 0.
            let cross = i128::from(prev.0) * i128::from(step.1) - i128::from(prev.1) * i128::from(step.0);
            if cross <= 0 {
                return Err(Error::InvalidChain {
                    index: i + 1,
                    reason: format!("slope of step {step:?} does not exceed that of {prev:?}"),
                });
            }
        }
        previous = Some(step);
    }
    Ok(())
}

/// Lays down `ω(v)·v` by increasing slope.
pub fn config_to_chain(config: &ChainConfiguration) -> ConvexChain {
    let mut vertices = Vec::with_capacity(config.len() + 1);
    let mut at: Point = (0, 0);
    vertices.push(at);
    for (v, k) in config.iter() {
        let k = k as i64;
        at = (at.0 + k * i64::from(v.x()), at.1 + k * i64::from(v.y()));
        vertices.push(at);
    }
    ConvexChain { vertices }
}

/// Inverse of [`config_to_chain`]; validates the vertices first.
pub fn chain_to_config(vertices: &[Point]) -> Result<ChainConfiguration> {
    validate_vertices(vertices)?;
    Ok(config_of_valid(vertices))
}

impl ConvexChain {
    pub fn to_config(&self) -> ChainConfiguration {
        config_of_valid(&self.vertices)
    }
}

fn config_of_valid(vertices: &[Point]) -> ChainConfiguration {
    let mut config = ChainConfiguration::new();
    for pair in vertices.windows(2) {
        let dx = (pair[1].0 - pair[0].0) as u64;
        let dy = (pair[1].1 - pair[0].1) as u64;
        let g = dx.gcd(&dy);
        let v = PrimitiveVector::new((dx / g) as u32, (dy / g) as u32)
            .expect("step divided by its gcd is primitive");
        config.set(v, g);
    }
    config
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(x: u32, y: u32) -> PrimitiveVector {
        PrimitiveVector::new(x, y).unwrap()
    }

    #[test]
    fn box_enumeration_small_cases() {
        assert_eq!(primitive_vectors_in_box(1, 1), vec![pv(1, 0), pv(1, 1), pv(0, 1)]);
        assert_eq!(
            primitive_vectors_in_box(2, 2),
            vec![pv(1, 0), pv(2, 1), pv(1, 1), pv(1, 2), pv(0, 1)]
        );
        assert_eq!(primitive_vectors_in_box(0, 5), vec![pv(0, 1)]);
        assert!(primitive_vectors_in_box(0, 0).is_empty());
    }

    #[test]
    fn non_primitive_rejected() {
        assert!(PrimitiveVector::new(0, 0).is_none());
        assert!(PrimitiveVector::new(2, 4).is_none());
        assert!(PrimitiveVector::new(0, 2).is_none());
        assert!(PrimitiveVector::new(3, 5).is_some());
    }

    #[test]
    fn level_enumeration_is_slope_sorted() {
        for m in 1..40 {
            let level = primitive_vectors_on_level(m);
            assert!(level.windows(2).all(|w| w[0] < w[1]));
            assert!(level.iter().all(|v| v.level() == u64::from(m)));
        }
    }

    #[test]
    fn line_weights_small() {
        let w = line_weights(5);
        assert_eq!(w.as_slice(), &[2, 1, 2, 2, 4]);
        assert_eq!(w.get(5), 4);
        let w = polyomino_line_weights(3);
        assert_eq!(w.as_slice(), &[1, 1, 2]);
    }

    #[test]
    fn line_weights_match_enumeration() {
        let m_max = 200u32;
        let w = line_weights(m_max as usize);
        let mut counts = vec![0u64; m_max as usize + 1];
        for v in primitive_vectors_in_box(m_max, m_max) {
            if v.level() <= u64::from(m_max) {
                counts[v.level() as usize] += 1;
            }
        }
        for m in 1..=m_max as usize {
            assert_eq!(w.get(m), counts[m], "level {m}");
        }
    }

    #[test]
    fn box_count_matches_totient_sum() {
        let sieve = Sieve::new(100);
        let mut phi_sum = 0;
        for n in 1..=100u32 {
            phi_sum += sieve.phi(n as usize);
            assert_eq!(primitive_vectors_in_box(n, n).len() as u64, 2 * phi_sum + 1, "n = {n}");
        }
    }

    #[test]
    fn sieve_prime_factors() {
        let s = Sieve::new(1000);
        assert_eq!(s.distinct_prime_factors(360).collect::<Vec<_>>(), vec![2, 3, 5]);
        assert_eq!(s.distinct_prime_factors(997).collect::<Vec<_>>(), vec![997]);
        assert_eq!(s.distinct_prime_factors(1).count(), 0);
        assert_eq!(s.phi(1), 1);
        assert_eq!(s.phi(36), 12);
    }

    #[test]
    fn config_to_chain_examples() {
        let c: ChainConfiguration = [(pv(1, 1), 1)].into_iter().collect();
        assert_eq!(config_to_chain(&c).vertices(), &[(0, 0), (1, 1)]);

        let c: ChainConfiguration = [(pv(0, 1), 1), (pv(1, 0), 1)].into_iter().collect();
        assert_eq!(config_to_chain(&c).vertices(), &[(0, 0), (1, 0), (1, 1)]);

        let c: ChainConfiguration = [(pv(1, 2), 1), (pv(1, 0), 2)].into_iter().collect();
        assert_eq!(config_to_chain(&c).vertices(), &[(0, 0), (2, 0), (3, 2)]);
    }

    #[test]
    fn chain_to_config_examples() {
        let c = chain_to_config(&[(0, 0), (2, 2)]).unwrap();
        assert_eq!(c.iter().collect::<Vec<_>>(), vec![(pv(1, 1), 2)]);
        let c = chain_to_config(&[(0, 0), (1, 1)]).unwrap();
        assert_eq!(c.iter().collect::<Vec<_>>(), vec![(pv(1, 1), 1)]);
        let c = chain_to_config(&[(0, 0), (1, 0), (1, 3)]).unwrap();
        assert_eq!(c.iter().collect::<Vec<_>>(), vec![(pv(1, 0), 1), (pv(0, 1), 3)]);
    }

    #[test]
    fn empty_chain_is_valid() {
        let c = chain_to_config(&[(0, 0)]).unwrap();
        assert!(c.is_empty());
        assert_eq!(config_to_chain(&c).vertices(), &[(0, 0)]);
    }

    #[test]
    fn invalid_chains_report_first_offending_vertex() {
        let err = |v: &[Point]| match chain_to_config(v) {
            Err(Error::InvalidChain { index, .. }) => index,
            other => panic!("expected InvalidChain, got {other:?}"),
        };
        assert_eq!(err(&[]), 0);
        assert_eq!(err(&[(1, 0), (2, 0)]), 0);
        // non-increasing slope
        assert_eq!(err(&[(0, 0), (1, 1), (2, 2)]), 2);
        assert_eq!(err(&[(0, 0), (1, 2), (3, 3), (4, 5)]), 2);
        // leaving the first quadrant
        assert_eq!(err(&[(0, 0), (1, 0), (0, 3)]), 2);
        // repeated vertex
        assert_eq!(err(&[(0, 0), (0, 0)]), 1);
        // vertical then anything
        assert_eq!(err(&[(0, 0), (0, 1), (0, 2)]), 2);
    }

    #[test]
    fn endpoint_conservation() {
        let c: ChainConfiguration = [(pv(3, 1), 2), (pv(1, 0), 5), (pv(2, 7), 1)].into_iter().collect();
        let chain = config_to_chain(&c);
        assert_eq!(c.endpoint(), (13, 9));
        assert_eq!(chain.endpoint(), (13, 9));
    }
}
