//! Exact counts of convex chains and of digitally convex polyomino paths.
//!
//! The number of chains ending at `(a, b)` is the coefficient of `x^a y^b`
//! in `∏_{v primitive} (1 - x^{v_1} y^{v_2})^{-1}`. One in-place unbounded
//! knapsack sweep per primitive vector of the box multiplies the table by a
//! single factor, so one run yields every `p(a, b)` of the box.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, ChainConfiguration, PrimitiveVector};

/// Default cap on the number of table cells (about 2 GB of small big
/// integers at the high end).
pub const DEFAULT_CELL_BUDGET: u64 = 16_000_000;

/// Largest coordinate accepted by [`brute_force_count`].
pub const BRUTE_FORCE_LIMIT: u32 = 10;

/// Largest total length accepted by [`brute_force_polyomino`].
pub const BRUTE_FORCE_POLYOMINO_LIMIT: u32 = 14;

/// `p(a, b)` for every `0 <= a <= n1`, `0 <= b <= n2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    n1: u32,
    n2: u32,
    values: Vec<BigUint>,
}

impl CountTable {
    pub fn n1(&self) -> u32 {
        self.n1
    }

    pub fn n2(&self) -> u32 {
        self.n2
    }

    /// Number of convex chains ending at `(a, b)`.
    ///
    /// # Panics
    /// If `(a, b)` lies outside the box.
    pub fn get(&self, a: u32, b: u32) -> &BigUint {
        assert!(a <= self.n1 && b <= self.n2, "({a}, {b}) outside the {}x{} box", self.n1, self.n2);
        &self.values[self.index(a, b)]
    }

    /// `p(k, k)` for `k = 0..=min(n1, n2)`.
    pub fn diagonal(&self) -> Vec<&BigUint> {
        (0..=self.n1.min(self.n2)).map(|k| self.get(k, k)).collect()
    }

    fn index(&self, a: u32, b: u32) -> usize {
        a as usize * (self.n2 as usize + 1) + b as usize
    }

    /// Cache records for every cell.
    pub fn records(&self) -> Vec<CountRecord> {
        let mut out = Vec::with_capacity(self.values.len());
        for a in 0..=self.n1 {
            for b in 0..=self.n2 {
                out.push(CountRecord {
                    kind: CountKind::Chains,
                    n1: a,
                    n2: b,
                    value: self.get(a, b).to_string(),
                });
            }
        }
        out
    }
}

/// Runs [`count_table_with_budget`] with [`DEFAULT_CELL_BUDGET`].
pub fn count_table(n1: u32, n2: u32) -> Result<CountTable> {
    count_table_with_budget(n1, n2, DEFAULT_CELL_BUDGET)
}

pub fn count_table_with_budget(n1: u32, n2: u32, max_cells: u64) -> Result<CountTable> {
    let cells = (u64::from(n1) + 1) * (u64::from(n2) + 1);
    if cells > max_cells {
        return Err(Error::Budget {
            what: "count table cells",
            requested: cells,
            limit: max_cells,
        });
    }
    let vectors = lattice::primitive_vectors_in_box(n1, n2);
    Ok(count_table_from_vectors(n1, n2, &vectors))
}

/// Knapsack sweep over an explicit vector sequence. The result does not
/// depend on the order of `vectors`; vectors outside the box are ignored.
pub fn count_table_from_vectors(n1: u32, n2: u32, vectors: &[PrimitiveVector]) -> CountTable {
    let width = n2 as usize + 1;
    let mut values = vec![BigUint::zero(); (n1 as usize + 1) * width];
    values[0] = BigUint::one();
    for v in vectors {
        let (dx, dy) = (v.x() as usize, v.y() as usize);
        if dx > n1 as usize || dy > n2 as usize {
            continue;
        }
        let offset = dx * width + dy;
        // Ascending sweep: the source cell has already absorbed this vector,
        // which accounts for every multiplicity at once.
        for x in dx..=n1 as usize {
            for y in dy..width {
                let dst = x * width + y;
                let (lo, hi) = values.split_at_mut(dst);
                hi[0] += &lo[dst - offset];
            }
        }
    }
    CountTable { n1, n2, values }
}

/// Number of chains ending at `(n1, n2)` by depth-first search over
/// configurations. Exponential; `n1, n2 <= BRUTE_FORCE_LIMIT`.
pub fn brute_force_count(n1: u32, n2: u32) -> Result<BigUint> {
    let mut count = 0u64;
    for_each_configuration(n1, n2, |_| count += 1)?;
    Ok(BigUint::from(count))
}

/// Visits every configuration with endpoint `(n1, n2)`, in lexicographic
/// slope order of the multiplicity vector.
pub fn for_each_configuration<F: FnMut(&ChainConfiguration)>(n1: u32, n2: u32, mut visit: F) -> Result<()> {
    if n1 > BRUTE_FORCE_LIMIT || n2 > BRUTE_FORCE_LIMIT {
        return Err(Error::Budget {
            what: "brute-force coordinate",
            requested: u64::from(n1.max(n2)),
            limit: u64::from(BRUTE_FORCE_LIMIT),
        });
    }
    let vectors = lattice::primitive_vectors_in_box(n1, n2);
    let mut current = ChainConfiguration::new();
    dfs(&vectors, (n1, n2), &mut current, &mut visit);
    Ok(())
}

fn dfs<F: FnMut(&ChainConfiguration)>(
    vectors: &[PrimitiveVector],
    remaining: (u32, u32),
    current: &mut ChainConfiguration,
    visit: &mut F,
) {
    if remaining == (0, 0) {
        visit(current);
        return;
    }
    let Some((&v, rest)) = vectors.split_first() else {
        return;
    };
    let mut k = 0u32;
    loop {
        let (used_x, used_y) = (k * v.x(), k * v.y());
        if used_x > remaining.0 || used_y > remaining.1 {
            break;
        }
        current.set(v, u64::from(k));
        dfs(rest, (remaining.0 - used_x, remaining.1 - used_y), current, visit);
        k += 1;
    }
    current.set(v, 0);
}

/// `p̃(0..=N)`: paths with no horizontal segment, counted by total length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyominoCounts {
    values: Vec<BigUint>,
}

impl PolyominoCounts {
    pub fn max_length(&self) -> u32 {
        (self.values.len() - 1) as u32
    }

    pub fn get(&self, n: u32) -> &BigUint {
        &self.values[n as usize]
    }

    pub fn as_slice(&self) -> &[BigUint] {
        &self.values
    }

    pub fn records(&self) -> Vec<CountRecord> {
        self.values
            .iter()
            .enumerate()
            .map(|(n, v)| CountRecord {
                kind: CountKind::Polyomino,
                n1: n as u32,
                n2: 0,
                value: v.to_string(),
            })
            .collect()
    }
}

/// Coefficients of `∏_{m>=1} (1 - t^m)^{-c̃_m}` up to `t^N`, with
/// `c̃_1 = 1` and `c̃_m = φ(m)`.
///
/// Uses the logarithmic-derivative recurrence
/// `n·p̃(n) = Σ_{k=1}^{n} b(k)·p̃(n-k)` with `b(k) = Σ_{d | k} d·c̃_d`,
/// which is quadratic in `N`.
pub fn polyomino_counts(max_length: u32) -> Result<PolyominoCounts> {
    if max_length < 1 {
        return Err(Error::domain("N", max_length, "N >= 1"));
    }
    let n_max = max_length as usize;
    let weights = lattice::polyomino_line_weights(n_max);
    let mut b = vec![0u64; n_max + 1];
    for (d, c) in weights.iter() {
        for k in (d..=n_max).step_by(d) {
            b[k] += d as u64 * c;
        }
    }
    let mut values = Vec::with_capacity(n_max + 1);
    values.push(BigUint::one());
    for n in 1..=n_max {
        let mut acc = BigUint::zero();
        for k in 1..=n {
            acc += &values[n - k] * b[k];
        }
        let (q, r) = num_integer::Integer::div_rem(&acc, &BigUint::from(n));
        debug_assert!(r.is_zero(), "Euler transform must divide exactly");
        values.push(q);
    }
    Ok(PolyominoCounts { values })
}

/// Same coefficients as [`polyomino_counts`] by one knapsack pass per
/// primitive vector; cubic in `N`, kept as an independent reference.
pub fn polyomino_counts_knapsack(max_length: u32) -> PolyominoCounts {
    let n_max = max_length as usize;
    let weights = lattice::polyomino_line_weights(n_max.max(1));
    let mut values = vec![BigUint::zero(); n_max + 1];
    values[0] = BigUint::one();
    for (m, c) in weights.iter() {
        for _ in 0..c {
            for n in m..=n_max {
                let (lo, hi) = values.split_at_mut(n);
                hi[0] += &lo[n - m];
            }
        }
    }
    PolyominoCounts { values }
}

/// `p̃(n)` by depth-first search over configurations without `(1,0)`.
pub fn brute_force_polyomino(n: u32) -> Result<BigUint> {
    if n > BRUTE_FORCE_POLYOMINO_LIMIT {
        return Err(Error::Budget {
            what: "brute-force polyomino length",
            requested: u64::from(n),
            limit: u64::from(BRUTE_FORCE_POLYOMINO_LIMIT),
        });
    }
    let vectors: Vec<PrimitiveVector> = lattice::primitive_vectors_in_box(n, n)
        .into_iter()
        .filter(|v| *v != PrimitiveVector::HORIZONTAL && v.level() <= u64::from(n))
        .collect();
    fn go(vectors: &[PrimitiveVector], remaining: u64) -> u64 {
        if remaining == 0 {
            return 1;
        }
        let Some((&v, rest)) = vectors.split_first() else {
            return 0;
        };
        let mut total = 0;
        let mut used = 0;
        while used <= remaining {
            total += go(rest, remaining - used);
            used += v.level();
        }
        total
    }
    Ok(BigUint::from(go(&vectors, u64::from(n))))
}

/// Which count a cache record holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CountKind {
    /// `p(n1, n2)`, chains ending at `(n1, n2)`.
    #[serde(rename = "p")]
    Chains,
    /// `p̃(n1)`, polyomino paths of length `n1` (`n2` is 0).
    #[serde(rename = "ptilde")]
    Polyomino,
}

/// One line of the count cache.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRecord {
    pub kind: CountKind,
    pub n1: u32,
    pub n2: u32,
    /// Decimal digits of the exact count.
    pub value: String,
}

/// Append-only JSON-lines file of exact counts.
#[derive(Debug, Clone)]
pub struct CountCache {
    path: std::path::PathBuf,
}

impl CountCache {
    pub fn new(path: impl AsRef<Path>) -> Self {
        CountCache {
            path: path.as_ref().to_path_buf(),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// All records; a missing file reads as empty.
    pub fn load(&self) -> Result<Vec<CountRecord>> {
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e.into()),
        };
        let mut out = Vec::new();
        for (lineno, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let record: CountRecord = serde_json::from_str(&line).map_err(|e| self.bad(lineno, e))?;
            if record.value.is_empty() || !record.value.bytes().all(|b| b.is_ascii_digit()) {
                return Err(self.bad(lineno, "value is not a decimal string"));
            }
            out.push(record);
        }
        Ok(out)
    }

    pub fn append(&self, records: &[CountRecord]) -> Result<()> {
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        let mut buf = String::new();
        for r in records {
            buf.push_str(&serde_json::to_string(r).expect("records serialize"));
            buf.push('\n');
        }
        file.write_all(buf.as_bytes())?;
        Ok(())
    }

    /// Recomputes every cached value and returns the records that disagree.
    pub fn verify(&self) -> Result<Vec<CountRecord>> {
        let records = self.load()?;
        let (mut a_max, mut b_max, mut n_max) = (0, 0, 0);
        for r in &records {
            match r.kind {
                CountKind::Chains => {
                    a_max = a_max.max(r.n1);
                    b_max = b_max.max(r.n2);
                }
                CountKind::Polyomino => n_max = n_max.max(r.n1),
            }
        }
        let table = count_table(a_max, b_max)?;
        let poly = polyomino_counts(n_max.max(1))?;
        Ok(records
            .into_iter()
            .filter(|r| {
                let expected = match r.kind {
                    CountKind::Chains => table.get(r.n1, r.n2),
                    CountKind::Polyomino => poly.get(r.n1),
                };
                expected.to_string() != r.value
            })
            .collect())
    }

    fn bad(&self, lineno: usize, reason: impl ToString) -> Error {
        Error::Cache {
            path: self.path.clone(),
            reason: format!("line {}: {}", lineno + 1, reason.to_string()),
        }
    }
}
