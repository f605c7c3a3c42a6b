//! Functionals of the equilibrium measure and the large-N expansion of
//! `log(Z_N / (2π)^N)` for every droplet/wall configuration.

use std::f64::consts::{LN_2, PI};

use num_rational::Rational64;
use serde::Serialize;

use crate::constants::UniversalConstants;
use crate::error::{Error, Result};
use crate::exact::{log_partition_hard, Method};
use crate::numerics::{integrate, QuadratureConfig};
use crate::potential::{droplet_geometry, laplacian, RadialPotential, Regime};
use crate::specfun::zeta_prime_minus_one;

/// Shift of the `log N` coefficient from an annulus droplet to a disk droplet.
pub fn disk_log_shift() -> Rational64 {
    Rational64::new(-1, 12)
}

/// Coefficient of `log N`, as an exact rational.
pub fn clog_for_regime(regime: Regime) -> Result<Rational64> {
    let quarter = Rational64::new(-1, 4);
    let zero = Rational64::from_integer(0);
    Ok(match regime {
        Regime::InOutAnnulusInterior | Regime::OutAnnulusBoundary => quarter,
        Regime::InOutAnnulusBoundary | Regime::OutAnnulusInterior => zero,
        Regime::InOutDiskInterior => quarter + disk_log_shift(),
        Regime::InOutDiskBoundary => zero + disk_log_shift(),
        Regime::NoWall => return Err(no_wall()),
    })
}

fn no_wall() -> Error {
    Error::Regime(
        "droplet lies strictly inside the wall (r1 < 1); the hard wall does not affect the \
         expansion at these orders and the soft-edge expansion is out of scope"
            .into(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Functionals {
    /// `½ ∫_{r₀}^1 u ΔQ(u) [q(u) − u q'(u) log u] du`
    pub energy_i: f64,
    /// `½ ∫_{r₀}^1 log(ΔQ/4) u ΔQ du`
    pub entropy_e: f64,
    /// Present when `r₀ > 0`.
    pub f_annulus: Option<f64>,
    /// Present when `r₀ = 0`.
    pub f_disk: Option<f64>,
}

pub fn compute_functionals(pot: &RadialPotential, cfg: &QuadratureConfig) -> Result<Functionals> {
    let geom = droplet_geometry(pot)?;
    let r0 = geom.r0;
    if r0 >= 1.0 {
        return Err(Error::Regime(format!(
            "functionals need r0 < 1, got r0 = {r0} ({})",
            geom.regime
        )));
    }
    let dq = |u: f64| laplacian(pot, u, 0).unwrap_or(f64::NAN);
    let ddq = |u: f64| laplacian(pot, u, 1).unwrap_or(f64::NAN);
    let energy = integrate(
        |u: f64| {
            let log_term = if u > 0.0 { u * pot.dq(u) * u.ln() } else { 0.0 };
            u * dq(u) * (pot.q(u) - log_term)
        },
        r0,
        1.0,
        cfg,
    )?;
    let entropy = integrate(|u: f64| (dq(u) / 4.0).ln() * u * dq(u), r0, 1.0, cfg)?;
    let slope = integrate(|r: f64| (ddq(r) / dq(r)).powi(2) * r, r0, 1.0, cfg)?.value / 24.0;
    let dq1 = laplacian(pot, 1.0, 0)?;
    let t1 = laplacian(pot, 1.0, 1)? / dq1;
    let (f_annulus, f_disk) = if r0 > 0.0 {
        let d0 = laplacian(pot, r0, 0)?;
        let t0 = r0 * laplacian(pot, r0, 1)? / d0;
        (
            Some((r0 * r0 * d0 / dq1).ln() / 12.0 - (t1 - t0) / 16.0 + slope),
            None,
        )
    } else {
        (None, Some((4.0 / dq1).ln() / 12.0 - t1 / 16.0 + slope))
    };
    Ok(Functionals {
        energy_i: 0.5 * energy.value,
        entropy_e: 0.5 * entropy.value,
        f_annulus,
        f_disk,
    })
}

/// Coefficients of `c2 N² + c1log N log N + c1 N + chalf √N + clog log N + c0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionCoefficients {
    pub c2: f64,
    pub c1log: f64,
    pub c1: f64,
    pub chalf: f64,
    pub clog: f64,
    #[serde(skip)]
    pub clog_exact: Rational64,
    pub c0: f64,
    pub regime: Regime,
    /// The intermediate sums carry `{Nτ₀}`-dependent pieces that cancel only in
    /// the total; true whenever the wall cuts the droplet.
    pub fractional_note: bool,
}

fn ratio_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn expansion_coefficients(
    pot: &RadialPotential,
    constants: &UniversalConstants,
    cfg: &QuadratureConfig,
) -> Result<ExpansionCoefficients> {
    let geom = droplet_geometry(pot)?;
    let regime = geom.regime;
    let clog_exact = clog_for_regime(regime)?;
    let eta = geom.eta;
    let dq1 = laplacian(pot, 1.0, 0)?;
    let t1 = laplacian(pot, 1.0, 1)? / dq1;
    let q1 = pot.q(1.0);
    let c = constants;

    let (c2, c1log, c1, chalf, mut c0) = match regime {
        Regime::OutAnnulusInterior => (
            -q1,
            -1.0,
            1.0 - LN_2 + (eta - 1.0) * (eta - 1.0).ln() - eta * eta.ln(),
            0.0,
            0.5 * ((eta - 1.0) / eta).ln() + dq1 / (4.0 * eta * (1.0 - eta)),
        ),
        Regime::OutAnnulusBoundary => (
            -q1,
            -1.0,
            1.0 - LN_2,
            -c.gamma_out * dq1.sqrt(),
            -c.alpha_out + c.beta_out * t1 + dq1 / 4.0 + 0.25 * (PI * dq1 / 2.0).ln(),
        ),
        Regime::InOutAnnulusInterior | Regime::InOutDiskInterior => {
            let f = compute_functionals(pot, cfg)?;
            let shape = if regime.is_disk() { f.f_disk } else { f.f_annulus };
            let shape = shape.ok_or_else(|| Error::Regime("shape functional unavailable".into()))?;
            (
                -(f.energy_i + eta * q1),
                -(1.0 + eta) / 2.0,
                -(f.entropy_e / 2.0 - (1.0 - eta) * (PI / 2.0).ln() / 2.0 + eta * ((2.0 * eta).ln() - 1.0)),
                -(c.gamma_in + c.gamma_out) * dq1.sqrt(),
                shape - (c.alpha_in + c.alpha_out) + (c.beta_in + c.beta_out) * t1 + dq1 / (4.0 * eta)
                    - 0.5 * eta.ln()
                    + 0.25 * (2.0 * PI * dq1).ln(),
            )
        }
        Regime::InOutAnnulusBoundary | Regime::InOutDiskBoundary => {
            let f = compute_functionals(pot, cfg)?;
            let shape = if regime.is_disk() { f.f_disk } else { f.f_annulus };
            let shape = shape.ok_or_else(|| Error::Regime("shape functional unavailable".into()))?;
            (
                -f.energy_i,
                -0.5,
                -(f.entropy_e / 2.0 - (PI / 2.0).ln() / 2.0),
                -c.gamma_in * dq1.sqrt(),
                shape - c.alpha_in + c.beta_in * t1 + LN_2 / 2.0,
            )
        }
        Regime::NoWall => return Err(no_wall()),
    };
    if regime.is_disk() {
        c0 += zeta_prime_minus_one();
    }
    Ok(ExpansionCoefficients {
        c2,
        c1log,
        c1,
        chalf,
        clog: ratio_f64(clog_exact),
        clog_exact,
        c0,
        regime,
        fractional_note: !matches!(regime, Regime::OutAnnulusInterior | Regime::OutAnnulusBoundary),
    })
}

/// Evaluate the expansion at `n` (remainder dropped).
pub fn predict_log_partition(coeffs: &ExpansionCoefficients, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("prediction needs n >= 2, got {n}")));
    }
    let nf = n as f64;
    let ln = nf.ln();
    Ok(coeffs.c2 * nf * nf
        + coeffs.c1log * nf * ln
        + coeffs.c1 * nf
        + coeffs.chalf * nf.sqrt()
        + coeffs.clog * ln
        + coeffs.c0)
}

/// Closed-form `(C̃₁, C̃₂, C̃₃, C̃₄)` of the hard-wall Gaussian expansion
/// `C̃₁N² + C̃₂ N log N + C̃₃ N + C̃₄ √N − (1/3) log N + O(1)`.
pub fn gap_coefficients_gauss(s: f64, constants: &UniversalConstants) -> Result<(f64, f64, f64, f64)> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::domain(format!("gap coefficients need 0 < s < 1, got {s}")));
    }
    let s2 = s * s;
    let c1 = s2 * s2 / 4.0 - s2;
    let c2 = (s2 - 2.0) / 2.0;
    let c3 = (1.0 - s2) * (1.0 - (1.0 - s2).ln()) - s2 * (s / (2.0 * PI).sqrt()).ln();
    let c4 = -2.0 * s * (constants.gamma_in + constants.gamma_out);
    Ok((c1, c2, c3, c4))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub exact: f64,
    pub predicted: f64,
    pub remainder: f64,
    /// `|remainder(n)| / |remainder(previous n)|`
    pub ratio: Option<f64>,
}

/// `exact − predicted` along a ladder of `n`.
pub fn remainder_sweep(
    pot: &RadialPotential,
    n_list: &[usize],
    constants: &UniversalConstants,
    method: Method,
    cfg: &QuadratureConfig,
) -> Result<Vec<SweepRow>> {
    let coeffs = expansion_coefficients(pot, constants, cfg)?;
    let mut rows: Vec<SweepRow> = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let exact = log_partition_hard(pot, n, method, cfg)?.log_z_over_2pi_pow_n;
        let predicted = predict_log_partition(&coeffs, n)?;
        let remainder = exact - predicted;
        let ratio = rows.last().map(|prev| remainder.abs() / prev.remainder.abs());
        rows.push(SweepRow {
            n,
            exact,
            predicted,
            remainder,
            ratio,
        });
    }
    Ok(rows)
}
