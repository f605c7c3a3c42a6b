//! The universal constants α, β, γ (in and out).
//!
//! With `Φ = log(erfc/2)`:
//!
//! ```text
//! α_in  =  ∫_{-∞}^0 (x² − 2)/3 Φ'(x) dx
//! β_in  = −∫_{-∞}^0 (x² + 1)/6 Φ'(x) dx
//! γ_in  = −(1/√2) ∫_{-∞}^0 Φ(x) dx
//! α_out =  ∫_0^∞ ((1/3)[x(2x² − 3) + (x² − 2)Φ'(x)] − 1/(x + 1)) dx
//! β_out = −(1/6) ∫_0^∞ [x(2x² + 3) + (x² + 1)Φ'(x)] dx
//! γ_out = −(1/√2) ∫_0^∞ log(√π x erfcx(x)) dx
//! ```
//!
//! The outer integrands cancel to `O(1/x)` at large `x`. Beyond `x = 10` they
//! are evaluated from the asymptotic series of `S(x) = √π x erfcx(x)` in
//! `w = 1/x²`, and beyond `x = 40` integrated term by term.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2, PI};

use serde::Serialize;

use crate::error::Result;
use crate::numerics::{integrate, QuadratureConfig};
use crate::specfun::{erfcx_nonneg, log_half_erfc, phi_prime, sqrt_pi};

const SERIES_FROM: f64 = 10.0;
const TAIL_FROM: f64 = 40.0;
const INNER_CUTOFF: f64 = -40.0;
const SERIES_TERMS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantErrors {
    pub alpha_in: f64,
    pub beta_in: f64,
    pub gamma_in: f64,
    pub alpha_out: f64,
    pub beta_out: f64,
    pub gamma_out: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniversalConstants {
    pub alpha_in: f64,
    pub beta_in: f64,
    pub gamma_in: f64,
    pub alpha_out: f64,
    pub beta_out: f64,
    pub gamma_out: f64,
    pub errors: ConstantErrors,
}

/// Coefficients of `S = Σ s_k w^k`, `1/S = Σ r_k w^k` and `log S = Σ l_k w^k`.
struct OuterSeries {
    r: Vec<f64>,
    l: Vec<f64>,
}

impl OuterSeries {
    fn new() -> Self {
        let n = SERIES_TERMS + 2;
        let mut s = vec![1.0; n];
        for k in 1..n {
            s[k] = -s[k - 1] * (2 * k - 1) as f64 / 2.0;
        }
        let mut r = vec![1.0; n];
        for m in 1..n {
            r[m] = -(1..=m).map(|i| s[i] * r[m - i]).sum::<f64>();
        }
        let mut l = vec![0.0; n];
        for m in 1..n {
            let conv: f64 = (1..m).map(|i| i as f64 * l[i] * s[m - i]).sum();
            l[m] = s[m] - conv / m as f64;
        }
        OuterSeries { r, l }
    }

    /// Coefficient of `x^{1−2k}` in the α_out integrand (without `−1/(x+1)`).
    fn alpha(&self, k: usize) -> f64 {
        (4.0 * self.r[k] - 2.0 * self.r[k + 1]) / 3.0
    }

    /// Coefficient of `x^{1−2k}` in the β_out bracket.
    fn beta(&self, k: usize) -> f64 {
        -2.0 * (self.r[k] + self.r[k + 1])
    }

    /// Coefficient of `x^{1−2k}` in the β̃_out integrand.
    fn beta_tilde(&self, k: usize) -> f64 {
        2.0 * self.l[k] + (self.r[k] - 5.0 * self.r[k + 1]) / 3.0
    }

    fn odd_sum(&self, coef: impl Fn(usize) -> f64, from: usize, x: f64) -> f64 {
        let w = 1.0 / (x * x);
        let mut p = x * w.powi(from as i32);
        let mut acc = 0.0;
        for k in from..=SERIES_TERMS {
            acc += coef(k) * p;
            p *= w;
        }
        acc
    }

    /// `∫_T^∞ Σ_{k≥from} c_k x^{1−2k} dx` for `from ≥ 2`.
    fn odd_tail(&self, coef: impl Fn(usize) -> f64, from: usize, t: f64) -> f64 {
        (from..=SERIES_TERMS)
            .map(|k| coef(k) * t.powi(2 - 2 * k as i32) / (2 * k - 2) as f64)
            .sum()
    }
}

fn alpha_in_integrand(x: f64) -> f64 {
    (x * x - 2.0) / 3.0 * phi_prime(x)
}

fn beta_in_integrand(x: f64) -> f64 {
    -(x * x + 1.0) / 6.0 * phi_prime(x)
}

fn g_tilde(y: f64) -> f64 {
    2.0 * y * log_half_erfc(y) - (1.0 - 5.0 * y * y) * phi_prime(y) / 6.0
}

struct Piecewise {
    value: f64,
    error: f64,
}

impl Piecewise {
    fn new() -> Self {
        Piecewise {
            value: 0.0,
            error: 0.0,
        }
    }

    fn add<F: Fn(f64) -> f64>(&mut self, f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<()> {
        let r = integrate(f, a, b, cfg)?;
        self.value += r.value;
        self.error += r.error_estimate;
        Ok(())
    }
}

fn inner(f: fn(f64) -> f64, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let mut acc = Piecewise::new();
    acc.add(f, INNER_CUTOFF, -5.0, cfg)?;
    acc.add(f, -5.0, 0.0, cfg)?;
    Ok((acc.value, acc.error))
}

fn alpha_out(series: &OuterSeries, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let direct = |x: f64| ((x * (2.0 * x * x - 3.0) + (x * x - 2.0) * phi_prime(x)) / 3.0) - 1.0 / (x + 1.0);
    let far = |x: f64| 1.0 / x - 1.0 / (x + 1.0) + series.odd_sum(|k| series.alpha(k), 2, x);
    let mut acc = Piecewise::new();
    acc.add(direct, 0.0, 1.0, cfg)?;
    acc.add(direct, 1.0, SERIES_FROM, cfg)?;
    acc.add(far, SERIES_FROM, TAIL_FROM, cfg)?;
    acc.value += (1.0 / TAIL_FROM).ln_1p() + series.odd_tail(|k| series.alpha(k), 2, TAIL_FROM);
    Ok((acc.value, acc.error))
}

fn beta_out(series: &OuterSeries, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let direct = |x: f64| x * (2.0 * x * x + 3.0) + (x * x + 1.0) * phi_prime(x);
    let far = |x: f64| series.odd_sum(|k| series.beta(k), 2, x);
    let mut acc = Piecewise::new();
    acc.add(direct, 0.0, 1.0, cfg)?;
    acc.add(direct, 1.0, SERIES_FROM, cfg)?;
    acc.add(far, SERIES_FROM, TAIL_FROM, cfg)?;
    acc.value += series.odd_tail(|k| series.beta(k), 2, TAIL_FROM);
    Ok((-acc.value / 6.0, acc.error / 6.0))
}

fn gamma_out(series: &OuterSeries, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    // on [0, 1] the log x singularity is integrated in closed form
    let near = |x: f64| sqrt_pi().ln() + erfcx_nonneg(x).ln();
    let direct = |x: f64| (sqrt_pi() * x * erfcx_nonneg(x)).ln();
    let far = |x: f64| {
        let w = 1.0 / (x * x);
        let mut p = w;
        let mut acc = 0.0;
        for l in &series.l[1..=SERIES_TERMS] {
            acc += l * p;
            p *= w;
        }
        acc
    };
    let mut acc = Piecewise::new();
    acc.add(near, 0.0, 1.0, cfg)?;
    acc.value -= 1.0;
    acc.add(direct, 1.0, SERIES_FROM, cfg)?;
    acc.add(far, SERIES_FROM, TAIL_FROM, cfg)?;
    acc.value += (1..=SERIES_TERMS)
        .map(|k| series.l[k] * TAIL_FROM.powi(1 - 2 * k as i32) / (2 * k - 1) as f64)
        .sum::<f64>();
    Ok((-FRAC_1_SQRT_2 * acc.value, FRAC_1_SQRT_2 * acc.error))
}

/// Evaluate the six constants; the integrals run concurrently.
pub fn compute_universal_constants(cfg: &QuadratureConfig) -> Result<UniversalConstants> {
    let series = OuterSeries::new();
    let ((ai, bi), (gi, (ao, (bo, go)))) = rayon::join(
        || {
            rayon::join(
                || inner(alpha_in_integrand, cfg),
                || inner(beta_in_integrand, cfg),
            )
        },
        || {
            rayon::join(
                || inner(log_half_erfc, cfg),
                || {
                    rayon::join(
                        || alpha_out(&series, cfg),
                        || rayon::join(|| beta_out(&series, cfg), || gamma_out(&series, cfg)),
                    )
                },
            )
        },
    );
    let (ai, bi, gi, ao, bo, go) = (ai?, bi?, gi?, ao?, bo?, go?);
    let gi = (-FRAC_1_SQRT_2 * gi.0, FRAC_1_SQRT_2 * gi.1);
    Ok(UniversalConstants {
        alpha_in: ai.0,
        beta_in: bi.0,
        gamma_in: gi.0,
        alpha_out: ao.0,
        beta_out: bo.0,
        gamma_out: go.0,
        errors: ConstantErrors {
            alpha_in: ai.1,
            beta_in: bi.1,
            gamma_in: gi.1,
            alpha_out: ao.1,
            beta_out: bo.1,
            gamma_out: go.1,
        },
    })
}

/// `(β_in + α_in/2 − log(2)/2, β_out + α_out/2 − log(π)/4)`, both zero exactly.
pub fn identity_residuals(c: &UniversalConstants) -> (f64, f64) {
    (
        c.beta_in + c.alpha_in / 2.0 - LN_2 / 2.0,
        c.beta_out + c.alpha_out / 2.0 - PI.ln() / 4.0,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    In,
    Out,
}

/// The alternative integral representations `β̃_in`, `β̃_out` of `β_in`, `β_out`.
pub fn beta_tilde(side: Side, cfg: &QuadratureConfig) -> Result<f64> {
    match side {
        Side::In => Ok(inner(g_tilde, cfg)?.0),
        Side::Out => {
            let series = OuterSeries::new();
            let lin = 0.5 + 2.0 * (2.0 * sqrt_pi()).ln();
            let direct = |y: f64| {
                let ylogy = if y > 0.0 { y * y.ln() } else { 0.0 };
                g_tilde(y) + 11.0 * y * y * y / 3.0 + 2.0 * ylogy + lin * y
            };
            let far = |y: f64| series.odd_sum(|k| series.beta_tilde(k), 2, y);
            let mut acc = Piecewise::new();
            acc.add(direct, 0.0, 1.0, cfg)?;
            acc.add(direct, 1.0, SERIES_FROM, cfg)?;
            acc.add(far, SERIES_FROM, TAIL_FROM, cfg)?;
            acc.value += series.odd_tail(|k| series.beta_tilde(k), 2, TAIL_FROM);
            Ok(0.5 + acc.value)
        }
    }
}
