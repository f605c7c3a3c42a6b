//! Hard-wall partition functions of the two-dimensional Coulomb gas at β = 2.
//!
//! For a radial potential `q(r)` the partition function with a hard wall on the
//! unit circle factorises into radial moments
//!
//! ```text
//! log(Z_N / (2π)^N) = Σ_{j=0}^{N-1} log u_j,   u_j = ∫_0^1 r^{2j+1} e^{-N q(r)} dr.
//! ```
//!
//! The crate evaluates that sum exactly (adaptive quadrature, or incomplete
//! gamma functions for the solvable presets), evaluates the per-term Laplace
//! asymptotics of `u_j` in each regime, and assembles the large-N expansion
//!
//! ```text
//! c2 N² + c1log N log N + c1 N + chalf √N + clog log N + c0 + o(1)
//! ```
//!
//! for every droplet/wall configuration, together with the universal
//! constants entering the `√N` and `O(1)` terms.
//!
//! Modules, bottom up:
//!
//! - [`numerics`]: adaptive Gauss–Kronrod quadrature, log-domain integration,
//!   monotone root finding, Euler–Maclaurin summation.
//! - [`specfun`]: `erfcx`, `Φ = log(erfc/2)`, `Φ'`, log-gamma, incomplete gamma.
//! - [`potential`]: radial potentials, droplet geometry and regime classification.
//! - [`constants`]: the six universal constants α, β, γ (in/out).
//! - [`exact`]: exact `log u_j` and `log Z`.
//! - [`term_asym`]: per-term asymptotic expansions and the regime dispatcher.
//! - [`expansion`]: functionals, expansion coefficients and remainder sweeps.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod constants;
pub mod error;
pub mod exact;
pub mod expansion;
pub mod numerics;
pub mod potential;
pub mod specfun;
pub mod term_asym;

pub use constants::{compute_universal_constants, identity_residuals, UniversalConstants};
pub use error::{Error, Result};
pub use exact::{log_partition_hard, log_uj_gamma_oracle, log_uj_quadrature, Method, PartitionResult};
pub use expansion::{
    compute_functionals, expansion_coefficients, predict_log_partition, remainder_sweep,
    ExpansionCoefficients, Functionals,
};
pub use numerics::{QuadResult, QuadratureConfig};
pub use potential::{droplet_geometry, DropletGeometry, RadialPotential, Regime};
pub use term_asym::{log_uj_asymptotic, TermRegime, TermTag};
