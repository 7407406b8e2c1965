//! Command-line front end.
//!
//! Every subcommand produces a [`RunReport`] written to standard output as
//! JSON (default) or CSV. Exit status: 0 success, 1 a check failed, 2 usage
//! error, 3 resource budget exceeded.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_complex::Complex64;
use serde_json::json;

use crate::asympt::{self, PolyominoPrefactor, DEFAULT_ZEROS};
use crate::enumerate::{self, CountCache, CountKind, CountRecord, DEFAULT_CELL_BUDGET};
use crate::error::Error;
use crate::lattice::{self, config_to_chain};
use crate::numeric::ln_biguint;
use crate::partition;
use crate::report::{complex, Check, RunReport};
use crate::sampler::{self, BoltzmannSampler, ConditionedSampler, DEFAULT_CUTOFF};
use crate::zetalib;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "convex-chains",
    version,
    about = "Exact counts, asymptotics and Boltzmann sampling of lattice convex chains",
    after_help = "Exit status: 0 success, 1 check failure, 2 usage error, 3 resource budget exceeded."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format of the report.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Omit the timestamp so identical runs give identical bytes.
    #[arg(long, global = true)]
    pub deterministic: bool,

    /// Maximum number of worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Exact counts against brute-force enumeration.
    Oracle,
    /// Remainder identity for log Z, Dirichlet series, functional equation.
    Identities,
    /// Sampler laws, endpoint hit rates and the limit-shape trend.
    Montecarlo,
    /// Published anchors: p(100), the n = 100 estimate, zeros, the
    /// two-term oscillation, calibration, polyomino asymptotics.
    Paper,
    /// Exact endpoint probability against the local-limit density.
    Llt,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Prefactor {
    Derived,
    Printed,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact number p(n1, n2) of convex chains ending at (n1, n2).
    Count {
        /// Shorthand for --n1 N --n2 N.
        #[arg(long, conflicts_with_all = ["n1", "n2"])]
        n: Option<u32>,
        #[arg(long, requires = "n2")]
        n1: Option<u32>,
        #[arg(long, requires = "n1")]
        n2: Option<u32>,
        /// Report every cell of the table instead of the corner.
        #[arg(long)]
        table: bool,
        /// JSON-lines count cache; hits are served from it.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Recompute every cached count and fail on disagreement.
        #[arg(long, requires = "cache")]
        verify_cache: bool,
        /// Largest table size in cells.
        #[arg(long, default_value_t = DEFAULT_CELL_BUDGET)]
        max_cells: u64,
    },
    /// Exact number of polyomino paths of total length n.
    PolyominoCount {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        table: bool,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Solve E[X1 + X2] = 2n for beta.
    Calibrate {
        #[arg(long)]
        n: u64,
    },
    /// log Z(beta, beta) with a certified truncation bound.
    Logz {
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Mixed derivative of log Z of order (k1, k2) on the diagonal.
    Cumulant {
        #[arg(long)]
        k1: u32,
        #[arg(long)]
        k2: u32,
        #[arg(long)]
        beta: f64,
    },
    /// Partial sums of the level-weight Dirichlet series against the zeta ratio.
    Dirichlet {
        /// Real part of s (> 2).
        #[arg(long, default_value_t = 3.0)]
        sigma: f64,
        /// Imaginary part of s.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t: f64,
        /// Number of terms.
        #[arg(long, default_value_t = 100_000)]
        m: usize,
    },
    /// Remainder integral along Re s = -1/2.
    Ierr {
        #[arg(long)]
        beta: f64,
    },
    /// Zeros of zeta on the critical line up to a height.
    Zeros {
        #[arg(long, default_value_t = zetalib::MAX_HEIGHT)]
        height: f64,
        /// Plain-text zero cache, checked against recomputation.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Oscillatory zero-sum term next to the published two-term form.
    Icrit {
        #[arg(long)]
        beta: f64,
        /// Number of conjugate zero pairs.
        #[arg(long, default_value_t = DEFAULT_ZEROS)]
        zeros: usize,
    },
    /// Asymptotic estimate of p(n).
    Estimate {
        #[arg(long)]
        n: u64,
        /// Zero pairs in the oscillatory term; 0 drops it.
        #[arg(long, default_value_t = DEFAULT_ZEROS)]
        zeros: usize,
        /// Also compute p(n) exactly and report exact / estimate.
        #[arg(long)]
        exact: bool,
    },
    /// Asymptotic estimate of the polyomino count.
    EstimatePolyomino {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = DEFAULT_ZEROS)]
        zeros: usize,
        #[arg(long, value_enum, default_value_t = Prefactor::Derived)]
        prefactor: Prefactor,
        #[arg(long)]
        exact: bool,
    },
    /// log p(n) - 3 kappa^(1/3) n^(2/3) and its model residual for n <= N.
    RhGap {
        #[arg(long)]
        n: u32,
    },
    /// Endpoint statistics of Boltzmann samples.
    Sample {
        /// Calibrate beta for the endpoint (n, n), count hits of it and
        /// compare with the exact hit probability.
        #[arg(long, required_unless_present = "beta", conflicts_with = "beta")]
        n: Option<u64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CUTOFF)]
        cutoff: f64,
    },
    /// A uniformly random chain ending at (n, n).
    SampleConditioned {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000_000)]
        max_draws: u64,
        /// Write the chain here; `.svg` gives a drawing, anything else CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Deviation from the limit curve over conditioned samples.
    LimitShape {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 100)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000_000)]
        max_draws: u64,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 20_240_601)]
        seed: u64,
    },
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| execute(&cli.command)),
            Err(e) => Err(Failure::Usage(format!("--threads {t}: {e}"))),
        },
        None => execute(&cli.command),
    };
    match result {
        Ok(mut report) => {
            if !cli.deterministic {
                report.stamp();
            }
            let mut stdout = match cli.format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            if !stdout.ends_with('\n') {
                stdout.push('\n');
            }
            let failed: Vec<_> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
            Outcome {
                code: if failed.is_empty() { EXIT_OK } else { EXIT_CHECK_FAILED },
                stdout,
                stderr: if failed.is_empty() {
                    String::new()
                } else {
                    format!("failed checks: {}\n", failed.join(", "))
                },
            }
        }
        Err(f) => Outcome {
            code: f.code(),
            stdout: String::new(),
            stderr: format!("error: {f}\n"),
        },
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Lib(Error),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Lib(Error::Budget { .. } | Error::Exhausted { .. }) => EXIT_BUDGET,
            Failure::Lib(Error::Domain { .. } | Error::Pole { .. } | Error::NotEnoughZeros { .. }) => EXIT_USAGE,
            Failure::Lib(_) => EXIT_CHECK_FAILED,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(msg) => f.write_str(msg),
            Failure::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcomes<T> = std::result::Result<T, Failure>;

fn execute(command: &Command) -> Outcomes<RunReport> {
    Ok(match *command {
        Command::Count {
            n,
            n1,
            n2,
            table,
            ref cache,
            verify_cache,
            max_cells,
        } => {
            let (a, b) = match (n, n1, n2) {
                (Some(n), _, _) => (n, n),
                (None, Some(a), Some(b)) => (a, b),
                _ => return Err(Failure::Usage("count needs --n or both --n1 and --n2".into())),
            };
            count(a, b, table, cache.as_deref(), verify_cache, max_cells)?
        }
        Command::PolyominoCount { n, table, ref cache } => {
            let counts = enumerate::polyomino_counts(n)?;
            if let Some(path) = cache {
                append_missing(&CountCache::new(path), counts.records())?;
            }
            let report = RunReport::new("polyomino-count").param("n", n);
            if table {
                report.results(counts.records())
            } else {
                report.results(json!({ "n": n, "value": counts.get(n).to_string() }))
            }
        }
        Command::Calibrate { n } => RunReport::new("calibrate").param("n", n).results(partition::calibrate(n)?),
        Command::Logz { beta, tol } => {
            let t = partition::log_z(beta, tol)?;
            RunReport::new("logz").param("beta", beta).param("tol", tol).results(json!({
                "value": t.value,
                "tail_bound": t.tail_bound,
                "levels": t.levels,
                "mean_total": partition::mean_total(beta)?,
                "smooth_part": partition::smooth_part(beta),
            }))
        }
        Command::Cumulant { k1, k2, beta } => RunReport::new("cumulant")
            .param("k1", k1)
            .param("k2", k2)
            .param("beta", beta)
            .results(json!({ "value": partition::cumulant(k1, k2, beta)? })),
        Command::Dirichlet { sigma, t, m } => {
            let c = partition::dirichlet_check(Complex64::new(sigma, t), m)?;
            let mut report = RunReport::new("dirichlet")
                .param("s", complex(Complex64::new(sigma, t)))
                .param("m", m)
                .results(json!({
                    "partial": complex(c.partial),
                    "target": complex(c.target),
                    "gap": c.gap(),
                    "gap_bound": c.gap_bound,
                }));
            report.check(Check::at_most("gap within majorant", c.gap(), c.gap_bound));
            report
        }
        Command::Ierr { beta } => RunReport::new("ierr").param("beta", beta).results(partition::i_err(beta)?),
        Command::Zeros { height, ref cache } => {
            let zeros = match cache {
                Some(path) => zetalib::load_or_compute_zero_cache(path, height)?,
                None => zetalib::find_zeta_zeros(height)?,
            };
            RunReport::new("zeros").param("height", height).results(zeros)
        }
        Command::Icrit { beta, zeros } => {
            let sum = asympt::i_crit_zero_sum(beta, zeros)?;
            let first = asympt::i_crit_zero_sum(beta, 1)?.value;
            let two_term = asympt::i_crit_two_term(beta);
            RunReport::new("icrit").param("beta", beta).param("zeros", zeros).results(json!({
                "value": sum.value,
                "last_term": sum.last_term,
                "first_pair": first,
                "two_term": two_term,
                "two_term_relative_difference": ((two_term - first) / first).abs(),
            }))
        }
        Command::Estimate { n, zeros, exact } => {
            let est = asympt::estimate_p(n, zeros)?;
            let mut results = serde_json::to_value(est).expect("estimates serialize");
            if exact {
                let side = u32::try_from(n).map_err(|_| Error::domain("n", n, "n fits the count table"))?;
                let p = enumerate::count_table(side, side)?.get(side, side).clone();
                add_exact(&mut results, &p, est.ln_value());
            }
            RunReport::new("estimate").param("n", n).param("zeros", zeros).results(results)
        }
        Command::EstimatePolyomino {
            n,
            zeros,
            prefactor,
            exact,
        } => {
            let pf = match prefactor {
                Prefactor::Derived => PolyominoPrefactor::Derived,
                Prefactor::Printed => PolyominoPrefactor::Printed,
            };
            let est = asympt::estimate_polyomino_with(n, zeros, pf)?;
            let mut results = serde_json::to_value(est).expect("estimates serialize");
            if exact {
                let side = u32::try_from(n).map_err(|_| Error::domain("n", n, "n fits the count table"))?;
                let p = enumerate::polyomino_counts(side)?.get(side).clone();
                add_exact(&mut results, &p, est.ln_value());
            }
            RunReport::new("estimate-polyomino")
                .param("n", n)
                .param("zeros", zeros)
                .param("prefactor", pf)
                .results(results)
        }
        Command::RhGap { n } => RunReport::new("rh-gap").param("n", n).results(asympt::rh_gap(n)?),
        Command::Sample {
            n,
            beta,
            samples,
            seed,
            cutoff,
        } => sample(n, beta, samples, seed, cutoff)?,
        Command::SampleConditioned {
            n,
            seed,
            max_draws,
            ref out,
        } => {
            let s = ConditionedSampler::new(n)?;
            let result = s.sample(max_draws, &mut sampler::rng_from_seed(seed, 0))?;
            if let Some(path) = out {
                if path.extension().is_some_and(|e| e == "svg") {
                    sampler::write_chain_svg(path, &result.chain)?;
                } else {
                    sampler::write_chain_csv(path, &result.chain)?;
                }
            }
            RunReport::new("sample-conditioned")
                .param("n", n)
                .param("seed", seed)
                .results(json!({
                    "beta": s.calibration().beta,
                    "draws": result.draws,
                    "vertices": result.chain.vertices(),
                    "deviation": sampler::limit_shape_deviation(&result.chain)?,
                }))
        }
        Command::LimitShape {
            n,
            samples,
            seed,
            max_draws,
        } => {
            let deviations = limit_shape_deviations(n, samples, seed, max_draws)?;
            RunReport::new("limit-shape")
                .param("n", n)
                .param("samples", samples)
                .param("seed", seed)
                .results(json!({
                    "median": median(&deviations),
                    "min": deviations.first(),
                    "max": deviations.last(),
                }))
        }
        Command::Verify { suite, seed } => verify(suite, seed)?,
    })
}

fn add_exact(results: &mut serde_json::Value, exact: &BigUint, ln_estimate: f64) {
    results["exact"] = json!(exact.to_string());
    results["exact_over_estimate"] = json!((ln_biguint(exact) - ln_estimate).exp());
}

fn count(a: u32, b: u32, table: bool, cache: Option<&Path>, verify_cache: bool, max_cells: u64) -> Outcomes<RunReport> {
    let mut report = RunReport::new("count").param("n1", a).param("n2", b);
    let cache = cache.map(CountCache::new);
    if let Some(c) = &cache {
        if verify_cache {
            let bad = c.verify()?;
            report.check(Check::new("cache agrees with recomputation", bad.is_empty(), bad, "no mismatched records"));
        }
        if !table {
            let hit = c
                .load()?
                .into_iter()
                .find(|r| r.kind == CountKind::Chains && r.n1 == a && r.n2 == b);
            if let Some(r) = hit {
                return Ok(report.results(json!({ "n1": a, "n2": b, "value": r.value, "source": "cache" })));
            }
        }
    }
    let counts = enumerate::count_table_with_budget(a, b, max_cells)?;
    if let Some(c) = &cache {
        append_missing(c, counts.records())?;
    }
    Ok(if table {
        report.results(counts.records())
    } else {
        report.results(json!({ "n1": a, "n2": b, "value": counts.get(a, b).to_string(), "source": "computed" }))
    })
}

fn append_missing(cache: &CountCache, records: Vec<CountRecord>) -> Outcomes<()> {
    let have = cache.load()?;
    let fresh: Vec<_> = records
        .into_iter()
        .filter(|r| !have.iter().any(|h| h.kind == r.kind && h.n1 == r.n1 && h.n2 == r.n2))
        .collect();
    cache.append(&fresh)?;
    Ok(())
}

fn sample(n: Option<u64>, beta: Option<f64>, samples: u64, seed: u64, cutoff: f64) -> Outcomes<RunReport> {
    let beta = match (n, beta) {
        (Some(n), _) => partition::calibrate(n)?.beta,
        (None, Some(b)) => b,
        (None, None) => return Err(Failure::Usage("sample needs --n or --beta".into())),
    };
    let s = BoltzmannSampler::new(beta, cutoff)?;
    let stats = sampler::endpoint_stats(&s, samples, seed, n.map(|n| (n, n)))?;
    let mut report = RunReport::new("sample")
        .param("beta", beta)
        .param("samples", samples)
        .param("seed", seed)
        .param("cutoff", cutoff);
    let mut results = json!({ "stats": stats, "tv_bound": s.tv_bound() });
    if let Some(n) = n {
        report = report.param("n", n);
        report.checks.extend(endpoint_checks(n, beta, &stats)?);
        results["hit_frequency"] = json!(stats.hit_count as f64 / stats.samples as f64);
    }
    Ok(report.results(results))
}

/// Mean of `X₁` within 3σ of `n`, and the hit frequency of `(n, n)` within
/// 3 binomial σ of the exact probability.
fn endpoint_checks(n: u64, beta: f64, stats: &sampler::SampleStats) -> Outcomes<Vec<Check>> {
    let side = u32::try_from(n).map_err(|_| Error::domain("n", n, "n fits the count table"))?;
    let table = enumerate::count_table(side, side)?;
    let p = partition::endpoint_probability(table.get(side, side), n, n, beta)?;
    let draws = stats.samples as f64;
    let sd_mean = (partition::cumulant(2, 0, beta)? / draws).sqrt();
    let sd_hit = (p * (1.0 - p) / draws).sqrt();
    Ok(vec![
        Check::abs("mean X1 within 3 sigma of n", stats.mean[0], n as f64, 3.0 * sd_mean),
        Check::abs(
            "hit frequency within 3 binomial sigma of exact",
            stats.hit_count as f64 / draws,
            p,
            3.0 * sd_hit,
        ),
    ])
}

fn limit_shape_deviations(n: u64, samples: u64, seed: u64, max_draws: u64) -> Outcomes<Vec<f64>> {
    let chains = ConditionedSampler::new(n)?.sample_many(samples, max_draws, seed)?;
    let mut d = chains
        .iter()
        .map(|c| sampler::limit_shape_deviation(&c.chain))
        .collect::<crate::Result<Vec<_>>>()?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

fn median(sorted: &[f64]) -> f64 {
    let k = sorted.len();
    if k == 0 {
        return f64::NAN;
    }
    if k % 2 == 1 {
        sorted[k / 2]
    } else {
        0.5 * (sorted[k / 2 - 1] + sorted[k / 2])
    }
}

fn verify(suite: Suite, seed: u64) -> Outcomes<RunReport> {
    let mut report = RunReport::new("verify").param("suite", format!("{suite:?}").to_lowercase()).param("seed", seed);
    let all = suite == Suite::All;
    if all || suite == Suite::Oracle {
        report.checks.extend(oracle_suite()?);
    }
    if all || suite == Suite::Identities {
        report.checks.extend(identities_suite()?);
    }
    if all || suite == Suite::Montecarlo {
        report.checks.extend(montecarlo_suite(seed)?);
    }
    if all || suite == Suite::Paper {
        report.checks.extend(paper_suite()?);
    }
    if all || suite == Suite::Llt {
        report.checks.extend(llt_suite()?);
    }
    let passed = report.checks.iter().filter(|c| c.pass).count();
    let total = report.checks.len();
    Ok(report.results(json!({ "passed": passed, "total": total })))
}

fn oracle_suite() -> Outcomes<Vec<Check>> {
    let mut checks = Vec::new();
    let table = enumerate::count_table(6, 6)?;
    let mut agree = 0;
    for a in 0..=6 {
        for b in 0..=6 {
            agree += usize::from(*table.get(a, b) == enumerate::brute_force_count(a, b)?);
        }
    }
    checks.push(Check::exact("count_table = brute force on a,b <= 6", agree, 49));

    let poly = enumerate::polyomino_counts(8)?;
    let mut agree = 0;
    for n in 0..=8 {
        agree += usize::from(*poly.get(n) == enumerate::brute_force_polyomino(n)?);
    }
    checks.push(Check::exact("polyomino counts = brute force on n <= 8", agree, 9));

    let fast = enumerate::polyomino_counts(150)?;
    let slow = enumerate::polyomino_counts_knapsack(150);
    checks.push(Check::new(
        "polyomino recurrence = knapsack passes on n <= 150",
        fast.as_slice() == slow.as_slice(),
        fast.get(150).to_string(),
        "exact",
    ));

    let mut vectors = lattice::primitive_vectors_in_box(15, 15);
    vectors.reverse();
    let reversed = enumerate::count_table_from_vectors(15, 15, &vectors);
    checks.push(Check::new(
        "count table independent of vector order (15,15)",
        reversed == enumerate::count_table(15, 15)?,
        reversed.get(15, 15).to_string(),
        "exact",
    ));

    let mut round_trips = 0u64;
    let mut total = 0u64;
    enumerate::for_each_configuration(6, 6, |c| {
        total += 1;
        let chain = config_to_chain(c);
        round_trips += u64::from(lattice::chain_to_config(chain.vertices()).is_ok_and(|back| &back == c));
    })?;
    checks.push(Check::exact("configuration -> chain -> configuration in box (6,6)", round_trips, total));
    Ok(checks)
}

fn identities_suite() -> Outcomes<Vec<Check>> {
    let mut checks = Vec::new();
    for beta in [0.05, 0.1, 0.2, 0.5] {
        let lz = partition::log_z(beta, 1e-13)?.value;
        let icrit = asympt::i_crit_zero_sum(beta, DEFAULT_ZEROS)?.value;
        let ierr = partition::i_err(beta)?.value;
        let residual = lz - partition::smooth_part(beta) - icrit - ierr;
        checks.push(Check::at_most(format!("log Z remainder identity at beta = {beta}"), residual.abs(), 1e-5));
    }

    let s3 = Complex64::new(3.0, 0.0);
    let g1 = partition::dirichlet_check(s3, 100_000)?;
    let g2 = partition::dirichlet_check(s3, 200_000)?;
    checks.push(Check::at_most("Dirichlet gap at s = 3, M = 1e5", g1.gap(), 2e-5));
    checks.push(Check::at_most("Dirichlet gap ratio M = 2e5 vs 1e5", g2.gap() / g1.gap(), 0.6));

    let mut worst = 0f64;
    for re in [-0.5, 0.25] {
        for k in -16..=16 {
            let s = Complex64::new(re, 2.5 * f64::from(k) + 0.1);
            let one = Complex64::new(1.0, 0.0);
            let rhs = (s * std::f64::consts::LN_2).exp()
                * ((s - 1.0) * std::f64::consts::PI.ln()).exp()
                * (s * std::f64::consts::FRAC_PI_2).sin()
                * zetalib::gamma_complex(one - s)?
                * zetalib::zeta_complex(one - s)?;
            // evaluated without the reflection the library uses for Re s < 1/2
            let lhs = zetalib::eta_zeta(s);
            worst = worst.max((lhs - rhs).norm() / lhs.norm());
        }
    }
    checks.push(Check::at_most("zeta functional equation, relative residual", worst, 1e-8));

    let direct: f64 = lattice::primitive_vectors_in_box(200, 200)
        .into_iter()
        .map(|v| -(-(-0.5 * f64::from(v.x() + v.y())).exp_m1()).ln())
        .sum();
    let lz = partition::log_z(0.5, 1e-10)?.value;
    checks.push(Check::abs("log Z(0.5) = product over box (200,200)", lz, direct, 1e-9));

    let raw = partition::i_err_contour(0.2)?;
    checks.push(Check::at_most("remainder contour imaginary part", raw.im.abs(), 1e-10));
    Ok(checks)
}

fn montecarlo_suite(seed: u64) -> Outcomes<Vec<Check>> {
    let mut checks = Vec::new();
    let beta = partition::calibrate(30)?.beta;
    let s = BoltzmannSampler::new(beta, DEFAULT_CUTOFF)?;
    let stats = sampler::endpoint_stats(&s, 200_000, seed, Some((30, 30)))?;
    checks.extend(endpoint_checks(30, beta, &stats)?);

    let s = BoltzmannSampler::new(1.0, DEFAULT_CUTOFF)?;
    let mut rng = sampler::rng_from_seed(seed, 1);
    let v = lattice::PrimitiveVector::new(1, 1).expect("primitive");
    let draws = 100_000u32;
    let zeros = (0..draws).filter(|_| s.sample(&mut rng).get(v) == 0).count() as f64;
    let p = 1.0 - (-2f64).exp();
    let sd = (p * (1.0 - p) / f64::from(draws)).sqrt();
    checks.push(Check::abs("P[omega(1,1) = 0] at beta = 1", zeros / f64::from(draws), p, 3.0 * sd));

    let d15 = limit_shape_deviations(15, 100, seed, 100_000_000)?;
    let d60 = limit_shape_deviations(60, 100, seed, 100_000_000)?;
    let (m15, m60) = (median(&d15), median(&d60));
    checks.push(Check::new(
        "median limit-shape deviation n = 60 below n = 15",
        m60 < m15,
        json!({ "n15": m15, "n60": m60 }),
        "strict",
    ));
    Ok(checks)
}

fn paper_suite() -> Outcomes<Vec<Check>> {
    let mut checks = Vec::new();
    let table = enumerate::count_table(100, 100)?;
    checks.push(Check::exact("p(100)", table.get(100, 100), "26878385993387721255010"));

    let est = asympt::estimate_p(100, 2)?;
    let value = est.value.mantissa * 10f64.powi(est.value.exponent as i32);
    checks.push(Check::within("estimate of p(100), two zero pairs", value, 2.2e22, 2.6e22));
    let ratio = (ln_biguint(table.get(100, 100)) - est.ln_value()).exp();
    checks.push(Check::within("p(100) / estimate", ratio, 1.05, 1.20));

    let zeros = zetalib::default_zeros();
    checks.push(Check::abs("gamma_1", zeros[0].gamma, 14.1347, 5e-4));
    checks.push(Check::abs("gamma_2", zeros[1].gamma, 21.0220, 5e-4));

    for beta in [0.01, 0.05, 0.1] {
        let sum = asympt::i_crit_zero_sum(beta, 1)?.value;
        let rel = ((asympt::i_crit_two_term(beta) - sum) / sum).abs();
        checks.push(Check::at_most(format!("two-term oscillation vs zero sum at beta = {beta}"), rel, 5e-3));
    }

    let kappa = zetalib::constants().kappa;
    for n in [100u64, 10_000, 1_000_000] {
        let c = partition::calibrate(n)?;
        checks.push(Check::at_most(format!("calibration residual n = {n}"), c.residual.abs(), 1e-9 * 2.0 * n as f64));
        if n == 10_000 {
            checks.push(Check::within("beta^3 n / kappa at n = 1e4", c.beta.powi(3) * n as f64 / kappa, 0.98, 1.02));
        }
    }

    let poly = enumerate::polyomino_counts(2000)?;
    let r = |n: u32| -> Outcomes<f64> {
        let est = asympt::estimate_polyomino(u64::from(n), DEFAULT_ZEROS)?;
        Ok((ln_biguint(poly.get(n)) - est.ln_value()).exp())
    };
    let (r200, r2000) = (r(200)?, r(2000)?);
    checks.push(Check::within("polyomino exact / estimate at n = 2000", r2000, 0.8, 1.25));
    checks.push(Check::new(
        "polyomino ratio closer to 1 at n = 2000 than at 200",
        (r2000 - 1.0).abs() < (r200 - 1.0).abs(),
        json!({ "n200": r200, "n2000": r2000 }),
        "strict",
    ));
    Ok(checks)
}

fn llt_suite() -> Outcomes<Vec<Check>> {
    let table = enumerate::count_table(200, 200)?;
    let ratio = |n: u64| -> Outcomes<f64> {
        let beta = partition::calibrate(n)?.beta;
        let p = partition::endpoint_probability(table.get(n as u32, n as u32), n, n, beta)?;
        Ok(p / partition::local_limit_density(n))
    };
    let (r50, r100, r200) = (ratio(50)?, ratio(100)?, ratio(200)?);
    Ok(vec![
        Check::within("exact P[X = (100,100)] / local limit", r100, 0.7, 1.3),
        Check::new(
            "local-limit ratio closer to 1 at n = 200 than at 50",
            (r200 - 1.0).abs() < (r50 - 1.0).abs(),
            json!({ "n50": r50, "n200": r200 }),
            "strict",
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("convex-chains").chain(args.iter().copied()))
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_args(&["frobnicate"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["count", "--n1", "3"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["logz", "--beta", "0"]).code, EXIT_USAGE);
        let help = run_args(&["--help"]);
        assert_eq!(help.code, EXIT_OK);
        assert!(help.stdout.contains("estimate-polyomino"));
    }

    #[test]
    fn budget_errors_exit_three() {
        let out = run_args(&["count", "--n", "100", "--max-cells", "100"]);
        assert_eq!(out.code, EXIT_BUDGET);
        assert!(out.stderr.contains("budget"));
        let out = run_args(&["sample-conditioned", "--n", "100", "--max-draws", "1"]);
        assert_eq!(out.code, EXIT_BUDGET);
    }

    #[test]
    fn small_count_report() {
        let out = run_args(&["count", "--n", "3", "--deterministic"]);
        assert_eq!(out.code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["results"]["value"], "13");
        assert_eq!(v["command"], "count");
        let csv = run_args(&["count", "--n1", "2", "--n2", "1", "--table", "--format", "csv"]);
        assert!(csv.stdout.starts_with("kind,n1,n2,value\n"));
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&[1.0, 2.0, 4.0]), 2.0);
        assert_eq!(median(&[1.0, 2.0, 4.0, 8.0]), 3.0);
        assert!(median(&[]).is_nan());
    }
}
