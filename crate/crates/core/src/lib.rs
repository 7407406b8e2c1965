//! Exact enumeration of planar lattice convex chains and the Boltzmann-model
//! asymptotics of their number.
//!
//! The crate is organised bottom-up:
//!
//! - [`lattice`]: primitive vectors, the totient sieve and the
//!   chain ↔ configuration bijection.
//! - [`enumerate`]: big-integer counts `p(a, b)` of chains ending at `(a, b)`,
//!   counts `p̃(n)` of digitally convex polyomino paths, brute-force oracles
//!   and a JSON-lines count cache.
//! - [`zetalib`]: complex Gamma and Riemann zeta, zeta zeros on the critical
//!   line, and the constants `κ = ζ(3)/ζ(2)`, `ζ'(-1)`, `C`.
//! - [`partition`]: the diagonal log-partition function `log Z(β, β)`, its
//!   cumulants, calibration of `β`, the Dirichlet-series check and the
//!   remainder integral along `Re s = -1/2`.
//! - [`asympt`]: the oscillatory zero sum, asymptotic estimates of `p(n)`
//!   and `p̃(n)`, and the gap diagnostic `log p(n) - 3κ^{1/3} n^{2/3}`.
//! - [`sampler`]: Boltzmann sampling of configurations, rejection sampling
//!   of uniform chains ending at `(n, n)` and limit-shape deviation.
//! - [`report`] and [`cli`]: machine-readable run reports and the
//!   command-line front end.

pub mod asympt;
pub mod cli;
pub mod enumerate;
mod error;
pub mod lattice;
pub mod numeric;
pub mod partition;
pub mod report;
pub mod sampler;
pub mod zetalib;

pub use error::{Error, Result};
