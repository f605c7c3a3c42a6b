//! Exact `log u_j` and `log(Z_N / (2π)^N)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{log_integrate_exp_with_peak, NeumaierSum, QuadratureConfig};
use crate::potential::{critical_radius, Preset, RadialPotential};
use crate::specfun::{log_factorial, log_lower_gamma};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Quadrature,
    GammaOracle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionResult {
    pub log_z_over_2pi_pow_n: f64,
    pub per_term_logs: Vec<f64>,
    pub n: usize,
    pub method: Method,
}

fn check_index(n: usize, j: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    if j >= n {
        return Err(Error::domain(format!("j = {j} outside 0..{n}")));
    }
    Ok(())
}

/// `log u_j`, `u_j = ∫_0^1 r^{2j+1} e^{-n q(r)} dr`, by log-domain quadrature.
pub fn log_uj_quadrature(pot: &RadialPotential, n: usize, j: usize, cfg: &QuadratureConfig) -> Result<f64> {
    check_index(n, j)?;
    let nf = n as f64;
    let power = (2 * j + 1) as f64;
    let g = |r: f64| power * r.ln() - nf * pot.q(r);
    // the exponent peaks where r q'(r) = (2j+1)/n, if that lies inside the wall
    let peak = critical_radius(pot, power / (2.0 * nf)).ok().map(|r| r.min(1.0));
    log_integrate_exp_with_peak(g, 0.0, 1.0, peak, cfg)
}

/// `log u_j` from the incomplete-gamma closed forms of the solvable presets.
pub fn log_uj_gamma_oracle(pot: &RadialPotential, n: usize, j: usize) -> Result<f64> {
    check_index(n, j)?;
    let nf = n as f64;
    let jf = j as f64;
    let half = -std::f64::consts::LN_2;
    let value = match pot.preset() {
        Some(Preset::AnnulusLog { a }) => {
            let u = jf + a * nf + 1.0;
            half - u * nf.ln() + log_lower_gamma(u, nf)?
        }
        Some(Preset::Pinned { c }) => {
            let u = jf + (c - 1.0) * nf + 1.0;
            half - u * (nf * c).ln() + log_lower_gamma(u, c * nf)?
        }
        Some(Preset::GaussScaled { s }) => {
            let z = s * s * nf;
            half - (jf + 1.0) * z.ln() + log_lower_gamma(jf + 1.0, z)?
        }
        Some(Preset::Mittag { mu, a }) => {
            let tau = jf / nf;
            let m = nf * (a + tau);
            -(2.0 * (1.0 + mu)).ln() - (1.0 + m) / (1.0 + mu) * nf.ln()
                + log_lower_gamma((m - mu) / (1.0 + mu) + 1.0, nf)?
        }
        _ => {
            return Err(Error::domain(format!(
                "no incomplete-gamma closed form for {}",
                pot.descriptor()
            )))
        }
    };
    Ok(value - nf * pot.offset())
}

/// `log(Z_N^h / (2π)^N) = Σ_j log u_j`, terms evaluated in parallel and summed
/// in ascending `j` with compensation.
pub fn log_partition_hard(
    pot: &RadialPotential,
    n: usize,
    method: Method,
    cfg: &QuadratureConfig,
) -> Result<PartitionResult> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let terms: Vec<Result<f64>> = (0..n)
        .into_par_iter()
        .map(|j| match method {
            Method::Quadrature => log_uj_quadrature(pot, n, j, cfg),
            Method::GammaOracle => log_uj_gamma_oracle(pot, n, j),
        })
        .collect();
    let mut per_term_logs = Vec::with_capacity(n);
    let mut acc = NeumaierSum::new();
    for (j, t) in terms.into_iter().enumerate() {
        let v = t.map_err(|e| Error::Term {
            index: j,
            source: Box::new(e),
        })?;
        acc.add(v);
        per_term_logs.push(v);
    }
    Ok(PartitionResult {
        log_z_over_2pi_pow_n: acc.value(),
        per_term_logs,
        n,
        method,
    })
}

/// `log(Z_N^s / (2π)^N)` for `q = s² r²` without the wall:
/// `Σ_j [log j! − (j+1) log(n s²) − log 2]`.
pub fn log_partition_soft_gauss(s: f64, n: usize) -> Result<f64> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::domain(format!("soft Gaussian needs 0 < s <= 1, got {s}")));
    }
    let z = (n as f64 * s * s).ln();
    let mut acc = NeumaierSum::new();
    for j in 0..n {
        acc.add(log_factorial(j as u64) - (j + 1) as f64 * z - std::f64::consts::LN_2);
    }
    Ok(acc.value())
}

/// `log E_N(N; |z| < 1) = log Z^h − log Z^s` for the scaled Gaussian.
pub fn log_gap_probability(s: f64, n: usize) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::domain(format!("gap probability needs 0 < s < 1, got {s}")));
    }
    let pot = RadialPotential::gauss_scaled(s)?;
    let hard = log_partition_hard(&pot, n, Method::GammaOracle, &QuadratureConfig::default())?;
    Ok(hard.log_z_over_2pi_pow_n - log_partition_soft_gauss(s, n)?)
}
