//! Transition-density estimation for SDEs with unbounded, path-dependent
//! drift.
//!
//! The library estimates p_t(x, ·), the density of X_t solving
//! dX_t = b(t, X) dt + σ(t, X_t) dW_t, by three independent routes and
//! cross-validates them against closed forms and Gaussian envelopes:
//!
//! 1. **Girsanov-weighted kernel Monte Carlo** — simulate the driftless
//!    process, reweight by the Maruyama–Girsanov martingale
//!    Z_t = exp(∫ μ dW − ½∫|μ|² ds) with μ = σ⁻¹b, and condition on the
//!    endpoint by kernel smoothing ([`girsanov`]).
//! 2. **First-order representation** — Gaussian leading term plus a time
//!    integral of the drift against the kernel gradient ([`girsanov`]).
//! 3. **Unbiased parametrix estimator** — randomize the parametrix series
//!    by a counting process, walk a coefficient-frozen Euler chain from
//!    the target point, and weight by Hermite-polynomial kernels
//!    ([`parametrix`]). No discretization bias.
//!
//! Supporting machinery: path-dependent drift functionals (running maxima,
//! delays, running integrals) in [`model`], stream-splittable deterministic
//! random numbers in [`rng`], Euler–Maruyama variants and the one-step
//! tamed scheme for super-linear coefficients in [`schemes`], closed-form
//! oracles (bang-bang, Ornstein–Uhlenbeck, Gaussian envelopes) in
//! [`closedforms`], discretization-rate experiments in [`convergence`],
//! and the CLI / reporting layer in [`harness`].
//!
//! Every estimator is deterministic given its seed, independent of worker
//! count. See the crate examples for one runnable program per capability.

pub mod closedforms;
pub mod convergence;
pub mod error;
pub mod girsanov;
pub mod harness;
pub mod linalg;
pub mod model;
pub mod parametrix;
pub mod rng;
pub mod schemes;
pub mod special;
pub mod stats;

pub use error::{PathdriftError, Result};

/// Version string recorded in every experiment report.
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");
