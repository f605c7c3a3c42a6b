//! Large-N asymptotics of the individual factors `u_j`.
//!
//! With `τ = j/N` the exponent `V_τ(r) = q(r) − 2τ log r` has its minimum at
//! `r_τ`, which crosses the wall at `τ = τ₀`. Outer expansions (`τ ≥ τ₀`)
//! expand about `r = 1`; inner ones about `r_τ`. Near the crossing the scaled
//! coordinate is `x = √(2N/ΔQ(1)) (τ − τ₀)`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::NeumaierSum;
use crate::potential::{critical_radius, droplet_geometry, laplacian, v_tau, RadialPotential};
use crate::specfun::{erfc, erfcx, erfcx_nonneg, log_factorial, sqrt_pi};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TermTag {
    OuterFar,
    OuterNear,
    OuterInterp,
    InnerNear,
    InnerFar,
    DiskOrigin,
}

impl TermTag {
    pub fn name(self) -> &'static str {
        match self {
            TermTag::OuterFar => "OuterFar",
            TermTag::OuterNear => "OuterNear",
            TermTag::OuterInterp => "OuterInterp",
            TermTag::InnerNear => "InnerNear",
            TermTag::InnerFar => "InnerFar",
            TermTag::DiskOrigin => "DiskOrigin",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TermRegime {
    pub tag: TermTag,
    /// Scaled distance from the wall crossing, for the near expansions.
    pub x: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelSide {
    Outer,
    Inner,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelValues {
    pub f: f64,
    pub h: f64,
    pub side: KernelSide,
}

/// `f₁(x) = (√π/2) erfcx(x)` and
/// `h₁(x) = [(x²−2) − x(2x²−3) f₁]/3 + (dlog_dq/6)[(x²+1) − x(2x²+3) f₁]`.
pub fn kernels_outer(x: f64, dlog_dq: f64) -> Result<KernelValues> {
    if !(x >= 0.0) {
        return Err(Error::domain(format!("outer kernels need x >= 0, got {x}")));
    }
    let f = 0.5 * sqrt_pi() * erfcx_nonneg(x);
    let h = ((x * x - 2.0) - x * (2.0 * x * x - 3.0) * f) / 3.0
        + dlog_dq / 6.0 * ((x * x + 1.0) - x * (2.0 * x * x + 3.0) * f);
    Ok(KernelValues {
        f,
        h,
        side: KernelSide::Outer,
    })
}

/// `f₂(x) = erfc(x)/2` and
/// `h₂(x) = e^{−x²}(x²−2)/(3√π) + dlog_dq e^{−x²}(x²+1)/(6√π)`.
pub fn kernels_inner(x: f64, dlog_dq: f64) -> Result<KernelValues> {
    if !(x <= 0.0) {
        return Err(Error::domain(format!("inner kernels need x <= 0, got {x}")));
    }
    let g = (-x * x).exp() / sqrt_pi();
    let f = 0.5 * erfc(x);
    let h = g * (x * x - 2.0) / 3.0 + dlog_dq * g * (x * x + 1.0) / 6.0;
    Ok(KernelValues {
        f,
        h,
        side: KernelSide::Inner,
    })
}

/// `𝓑(r) = −∂²ΔQ/(8ΔQ) − 19 ∂ΔQ/(24 r ΔQ²) + 5(∂ΔQ)²/(24 ΔQ³) + 1/(3 r² ΔQ)`.
pub fn b_correction(pot: &RadialPotential, r: f64) -> Result<f64> {
    let d0 = laplacian(pot, r, 0)?;
    if !(d0 > 0.0) {
        return Err(Error::Potential(format!("ΔQ({r}) = {d0} is not positive")));
    }
    let d1 = laplacian(pot, r, 1)?;
    let d2 = laplacian(pot, r, 2)?;
    Ok(-d2 / (8.0 * d0) - 19.0 * d1 / (24.0 * r * d0 * d0)
        + 5.0 * d1 * d1 / (24.0 * d0 * d0 * d0)
        + 1.0 / (3.0 * r * r * d0))
}

/// `Δ_N = δ_N = (log N)² / √N`.
pub fn window_width(n: usize) -> f64 {
    let nf = n as f64;
    nf.ln().powi(2) / nf.sqrt()
}

/// Largest `j` treated by the expansion about the origin: `j ≤ N^{1/6}`.
pub fn origin_window(n: usize) -> f64 {
    (n as f64).powf(1.0 / 6.0)
}

/// Per-term expansions for one potential, with the wall data cached.
#[derive(Debug, Clone)]
pub struct TermExpansions<'a> {
    pot: &'a RadialPotential,
    r0: f64,
    /// `q'(1)/2`, not clamped
    tau0: f64,
    dq1: f64,
    dlog_dq: f64,
}

impl<'a> TermExpansions<'a> {
    pub fn new(pot: &'a RadialPotential) -> Result<Self> {
        let geom = droplet_geometry(pot)?;
        let dq1 = laplacian(pot, 1.0, 0)?;
        Ok(TermExpansions {
            pot,
            r0: geom.r0,
            tau0: pot.dq(1.0) / 2.0,
            dq1,
            dlog_dq: laplacian(pot, 1.0, 1)? / dq1,
        })
    }

    pub fn tau0(&self) -> f64 {
        self.tau0
    }

    /// `x = √(2N/ΔQ(1)) (τ − τ₀)`.
    pub fn scaled_x(&self, n: f64, tau: f64) -> f64 {
        (2.0 * n / self.dq1).sqrt() * (tau - self.tau0)
    }

    fn wall_derivatives(&self, tau: f64) -> Result<[f64; 4]> {
        Ok([
            v_tau(self.pot, tau, 1.0, 0)?,
            v_tau(self.pot, tau, 1.0, 1)?,
            v_tau(self.pot, tau, 1.0, 2)?,
            v_tau(self.pot, tau, 1.0, 3)?,
        ])
    }

    /// Endpoint expansion valid uniformly for `τ ≥ τ₀`.
    pub fn outer_interp(&self, n: f64, tau: f64) -> Result<f64> {
        let [v0, v1, v2, v3] = self.wall_derivatives(tau)?;
        if !(v2 > 0.0) {
            return Err(Error::Potential(format!("V''_τ(1) = {v2} is not positive")));
        }
        let (n2, v12, v22) = (n * n, v1 * v1, v2 * v2);
        let poly = -2.0 * v12 * v1 * v2 * v3 * n2 + 2.0 * v12 * v22 * v3 * n2
            - 10.0 * v1 * v22 * v3 * n
            - 12.0 * v22 * v22 * n
            + 4.0 * v22 * v2 * v3 * n;
        // e^{z²} erfc(z) at z = −V'√(N/V'')/√2
        let z = -v1 * (n / v2).sqrt() / std::f64::consts::SQRT_2;
        let bracket = v12 * v1 * v3 * n2 * (v2 - v1)
            + 6.0 * v22 * v2 * n * (v2 - v1)
            + 3.0 * v1 * v2 * v3 * n * (v2 - 2.0 * v1)
            - 3.0 * v22 * v3;
        let total = poly + (2.0 * PI * v2 * n).sqrt() * erfcx(z)? * bracket;
        if !(total > 0.0) {
            return Err(Error::Regime(format!(
                "interpolating expansion is non-positive at τ = {tau}"
            )));
        }
        Ok(-n * v0 + (total / (12.0 * v22 * v22 * v2 * n2)).ln())
    }

    /// `−N V_τ(1) − log N + log(−1/V' + (V'' − V')/(N V'³))`, for `V'_τ(1) < 0`.
    pub fn outer_far(&self, n: f64, tau: f64) -> Result<f64> {
        let [v0, v1, v2, _] = self.wall_derivatives(tau)?;
        if !(v1 < 0.0) {
            return Err(Error::Regime(format!(
                "outer far expansion needs V'_τ(1) < 0, got {v1}"
            )));
        }
        let bracket = -1.0 / v1 + (v2 - v1) / (n * v1 * v1 * v1);
        if !(bracket > 0.0) {
            return Err(Error::Regime(format!(
                "outer far bracket non-positive at τ = {tau}"
            )));
        }
        Ok(-n * v0 - n.ln() + bracket.ln())
    }

    /// Near-crossing outer expansion in terms of `f₁`, `h₁`.
    pub fn outer_near(&self, n: f64, tau: f64) -> Result<f64> {
        let x = self.scaled_x(n, tau).max(0.0);
        let k = kernels_outer(x, self.dlog_dq)?;
        let bracket = k.f + (2.0 / (n * self.dq1)).sqrt() * k.h;
        if !(bracket > 0.0) {
            return Err(Error::Regime(format!(
                "outer near bracket non-positive at x = {x}"
            )));
        }
        let v0 = v_tau(self.pot, tau, 1.0, 0)?;
        Ok(-n * v0 - n.ln() + 0.5 * (2.0 * n / self.dq1).ln() + bracket.ln())
    }

    /// `log(√(2π) r_τ / √(N V''_τ(r_τ))) − N V_τ(r_τ)` and `r_τ`.
    fn laplace_prefactor(&self, n: f64, tau: f64) -> Result<(f64, f64)> {
        let r = critical_radius(self.pot, tau)?;
        if !(r > 0.0) {
            return Err(Error::Regime(format!("critical radius vanishes at τ = {tau}")));
        }
        let v2 = v_tau(self.pot, tau, r, 2)?;
        let v0 = v_tau(self.pot, tau, r, 0)?;
        Ok((0.5 * (2.0 * PI).ln() + r.ln() - 0.5 * (n * v2).ln() - n * v0, r))
    }

    /// Interior Laplace expansion with the `𝓑(r_τ)/N` correction.
    pub fn inner_far(&self, n: f64, tau: f64) -> Result<f64> {
        let (pre, r) = self.laplace_prefactor(n, tau)?;
        Ok(pre + (b_correction(self.pot, r)? / n).ln_1p())
    }

    /// Near-crossing inner expansion in terms of `f₂`, `h₂`.
    pub fn inner_near(&self, n: f64, tau: f64) -> Result<f64> {
        let (pre, _) = self.laplace_prefactor(n, tau)?;
        let x = self.scaled_x(n, tau).min(0.0);
        let k = kernels_inner(x, self.dlog_dq)?;
        let bracket = k.f + (2.0 / (n * self.dq1)).sqrt() * k.h;
        if !(bracket > 0.0) {
            return Err(Error::Regime(format!(
                "inner near bracket non-positive at x = {x}"
            )));
        }
        Ok(pre + bracket.ln())
    }

    /// `log u_j = −log 2 − N q(0) − (j+1) log(N q''(0)/2) + log j!`.
    pub fn disk_origin(&self, n: usize, j: usize) -> Result<f64> {
        let (q0, q2) = self.pot.origin_values()?;
        if !(q2 > 0.0) {
            return Err(Error::Potential(format!("q''(0) = {q2} is not positive")));
        }
        let nf = n as f64;
        Ok(
            -std::f64::consts::LN_2 - nf * q0 - (j + 1) as f64 * (nf * q2 / 2.0).ln()
                + log_factorial(j as u64),
        )
    }

    /// Regime chosen for the term `j` of `n`.
    pub fn classify(&self, n: usize, j: usize) -> TermRegime {
        let nf = n as f64;
        let tau = j as f64 / nf;
        let width = window_width(n);
        if self.r0 == 0.0 && (j as f64) <= origin_window(n) {
            return TermRegime {
                tag: TermTag::DiskOrigin,
                x: None,
            };
        }
        if self.tau0 < 0.0 {
            // droplet entirely outside the wall: every term is an endpoint term
            return TermRegime {
                tag: TermTag::OuterFar,
                x: None,
            };
        }
        let x = Some(self.scaled_x(nf, tau));
        if tau >= self.tau0 {
            if tau - self.tau0 >= width {
                TermRegime {
                    tag: TermTag::OuterFar,
                    x: None,
                }
            } else {
                TermRegime {
                    tag: TermTag::OuterNear,
                    x,
                }
            }
        } else if self.tau0 - tau >= width {
            TermRegime {
                tag: TermTag::InnerFar,
                x: None,
            }
        } else {
            TermRegime {
                tag: TermTag::InnerNear,
                x,
            }
        }
    }

    /// Evaluate one expansion for term `j` of `n`.
    pub fn evaluate(&self, tag: TermTag, n: usize, j: usize) -> Result<f64> {
        let nf = n as f64;
        let tau = j as f64 / nf;
        match tag {
            TermTag::OuterFar => self.outer_far(nf, tau),
            TermTag::OuterNear => self.outer_near(nf, tau),
            TermTag::OuterInterp => self.outer_interp(nf, tau),
            TermTag::InnerNear => self.inner_near(nf, tau),
            TermTag::InnerFar => self.inner_far(nf, tau),
            TermTag::DiskOrigin => self.disk_origin(n, j),
        }
    }

    pub fn dispatch(&self, n: usize, j: usize) -> Result<(f64, TermRegime)> {
        check_index(n, j)?;
        let regime = self.classify(n, j);
        Ok((self.evaluate(regime.tag, n, j)?, regime))
    }
}

fn check_index(n: usize, j: usize) -> Result<()> {
    if n == 0 || j >= n {
        return Err(Error::domain(format!("need 0 <= j < n, got j = {j}, n = {n}")));
    }
    Ok(())
}

fn single(pot: &RadialPotential, tag: TermTag, n: usize, j: usize) -> Result<f64> {
    check_index(n, j)?;
    TermExpansions::new(pot)?.evaluate(tag, n, j)
}

pub fn log_uj_outer_interp(pot: &RadialPotential, n: usize, j: usize) -> Result<f64> {
    single(pot, TermTag::OuterInterp, n, j)
}

pub fn log_uj_outer_far(pot: &RadialPotential, n: usize, j: usize) -> Result<f64> {
    single(pot, TermTag::OuterFar, n, j)
}

pub fn log_uj_outer_near(pot: &RadialPotential, n: usize, j: usize) -> Result<f64> {
    single(pot, TermTag::OuterNear, n, j)
}

pub fn log_uj_inner_far(pot: &RadialPotential, n: usize, j: usize) -> Result<f64> {
    single(pot, TermTag::InnerFar, n, j)
}

pub fn log_uj_inner_near(pot: &RadialPotential, n: usize, j: usize) -> Result<f64> {
    single(pot, TermTag::InnerNear, n, j)
}

pub fn log_uj_disk_origin(pot: &RadialPotential, n: usize, j: usize) -> Result<f64> {
    single(pot, TermTag::DiskOrigin, n, j)
}

/// The dispatched expansion of `log u_j` together with the regime used.
pub fn log_uj_asymptotic(pot: &RadialPotential, n: usize, j: usize) -> Result<(f64, TermRegime)> {
    TermExpansions::new(pot)?.dispatch(n, j)
}

/// `Σ_j` of the dispatched expansions, with the regime of every term.
pub fn asymptotic_partition_sum(pot: &RadialPotential, n: usize) -> Result<(f64, Vec<TermRegime>)> {
    let exp = TermExpansions::new(pot)?;
    let terms: Vec<Result<(f64, TermRegime)>> = (0..n).into_par_iter().map(|j| exp.dispatch(n, j)).collect();
    let mut acc = NeumaierSum::new();
    let mut regimes = Vec::with_capacity(n);
    for (j, t) in terms.into_iter().enumerate() {
        let (v, r) = t.map_err(|e| Error::Term {
            index: j,
            source: Box::new(e),
        })?;
        acc.add(v);
        regimes.push(r);
    }
    Ok((acc.value(), regimes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::log_uj_gamma_oracle;
    use crate::specfun::phi_prime;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).exp_m1().abs()
    }

    #[test]
    fn outer_kernel_values() {
        let k = kernels_outer(0.0, 0.0).unwrap();
        assert!((k.f - 0.886_226_925_452_758).abs() < 1e-15);
        assert!((k.h + 2.0 / 3.0).abs() < 1e-15);
        assert!((kernels_outer(0.0, 1.0).unwrap().h + 0.5).abs() < 1e-15);
        let k = kernels_outer(10.0, 0.0).unwrap();
        assert!((10.0 * k.h / k.f + 1.0).abs() < 0.1);
        assert!(kernels_outer(-1.0, 0.0).is_err());
    }

    #[test]
    fn inner_kernel_values() {
        let k = kernels_inner(0.0, 0.0).unwrap();
        assert_eq!(k.f, 0.5);
        assert!((k.h + 0.376_126_389_031_837_5).abs() < 1e-15);
        let k = kernels_inner(-30.0, 1.0).unwrap();
        assert_eq!(k.f, 1.0);
        assert!(k.h.abs() < 1e-300);
        assert!((kernels_inner(0.0, 2.0).unwrap().h + 1.0 / (3.0 * sqrt_pi())).abs() < 1e-15);
    }

    #[test]
    fn kernel_ratio_identity() {
        for dl in [0.0, 0.7] {
            for i in 0..=100 {
                let x = i as f64 / 10.0;
                let k = kernels_outer(x, dl).unwrap();
                let p = phi_prime(x);
                let ratio = -(x * (2.0 * x * x - 3.0) + (x * x - 2.0) * p) / 3.0
                    - dl / 6.0 * (x * (2.0 * x * x + 3.0) + (x * x + 1.0) * p);
                assert!((k.h / k.f - ratio).abs() < 1e-10, "x = {x}");
            }
        }
    }

    #[test]
    fn b_correction_constant_laplacian() {
        let a = RadialPotential::annulus_log(0.5).unwrap();
        for r in [0.8, 1.0, 1.3] {
            assert!((b_correction(&a, r).unwrap() - 1.0 / (12.0 * r * r)).abs() < 1e-14);
        }
        let s = RadialPotential::gauss_scaled(0.7).unwrap();
        assert!((b_correction(&s, 1.0).unwrap() - 1.0 / (12.0 * 0.49)).abs() < 1e-14);
    }

    #[test]
    fn outer_far_matches_closed_form() {
        // q = r² − 2a log r with a + τ = 1 + c: u_j ≈ e^{-N}/(2cN) (1 − (1/c² + 1/c)/N)
        let a = RadialPotential::annulus_log(0.5).unwrap();
        let n = 200;
        let j = 160; // τ = 0.8, c = 0.3
        let c: f64 = 0.3;
        let nf = n as f64;
        let closed = -nf - (2.0 * c * nf).ln() + (-(1.0 / (c * c) + 1.0 / c) / nf).ln_1p();
        assert!(rel(log_uj_outer_far(&a, n, j).unwrap(), closed) < 1e-3);
    }

    #[test]
    fn inner_far_matches_stirling() {
        let a = RadialPotential::annulus_log(0.5).unwrap();
        let (n, j) = (200, 40);
        let u = 140.0 + 1.0;
        let stirling = crate::specfun::log_gamma(u).unwrap() - std::f64::consts::LN_2 - u * (n as f64).ln();
        assert!((log_uj_inner_far(&a, n, j).unwrap() - stirling).abs() < 1e-6);
    }

    #[test]
    fn disk_origin_matches_oracle() {
        let s = RadialPotential::gauss_scaled(0.7).unwrap();
        let u0 = log_uj_disk_origin(&s, 100, 0).unwrap();
        assert!(rel(u0, (-(-49f64).exp_m1() / 98.0).ln()) < 1e-12);
        let g = RadialPotential::gauss_scaled(1.0).unwrap();
        let d = log_uj_disk_origin(&g, 50, 3).unwrap();
        assert!(rel(d, log_uj_gamma_oracle(&g, 50, 3).unwrap()) < 1e-2);
    }

    #[test]
    fn dispatcher_tags() {
        let a = RadialPotential::annulus_log(0.5).unwrap();
        let n = 1_000_000;
        assert_eq!(
            log_uj_asymptotic(&a, n, 200_000).unwrap().1.tag,
            TermTag::InnerFar
        );
        assert_eq!(
            log_uj_asymptotic(&a, n, 900_000).unwrap().1.tag,
            TermTag::OuterFar
        );
        let mid = log_uj_asymptotic(&a, n, 500_000).unwrap().1;
        assert_eq!(mid.tag, TermTag::OuterNear);
        assert_eq!(mid.x, Some(0.0));
        let s = RadialPotential::gauss_scaled(0.8).unwrap();
        assert_eq!(
            log_uj_asymptotic(&s, 10_000, 1).unwrap().1.tag,
            TermTag::DiskOrigin
        );
    }
}
