use super::quadrature::{integrate, QuadratureConfig};
use super::roots::{find_root_monotone, golden_section_max};
use crate::error::{Error, Result};

const PRESCAN_POINTS: usize = 65;
/// Below `max g - WINDOW_DROP` the integrand is e^-60 of its peak.
const WINDOW_DROP: f64 = 60.0;

/// `log ∫_a^b e^{g(x)} dx`, evaluated as `M + log ∫ e^{g - M}` with `M` the
/// located maximum of `g`.
///
/// `g` may return `-∞` (vanishing integrand) but not NaN. The maximum is found
/// from a 65-point prescan refined by golden-section search around the best
/// sample, so `g` should be unimodal on scales below `(b - a) / 64`.
pub fn log_integrate_exp<G>(g: G, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    log_integrate_exp_with_peak(g, a, b, None, cfg)
}

/// [`log_integrate_exp`] with an optional known location of the maximum.
pub fn log_integrate_exp_with_peak<G>(
    g: G,
    a: f64,
    b: f64,
    peak_hint: Option<f64>,
    cfg: &QuadratureConfig,
) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!(
            "log_integrate_exp needs finite a < b, got [{a}, {b}]"
        )));
    }
    let eval = |x: f64| -> Result<f64> {
        let v = g(x);
        if v.is_nan() {
            Err(Error::NanIntegrand { abscissa: x })
        } else {
            Ok(v)
        }
    };

    let step = (b - a) / (PRESCAN_POINTS - 1) as f64;
    let mut best_index = 0;
    let mut best = (a, eval(a)?);
    for i in 1..PRESCAN_POINTS {
        let x = if i == PRESCAN_POINTS - 1 {
            b
        } else {
            a + step * i as f64
        };
        let v = eval(x)?;
        if v > best.1 {
            best = (x, v);
            best_index = i;
        }
    }
    let lo = a + step * best_index.saturating_sub(1) as f64;
    let hi = (a + step * (best_index + 1) as f64).min(b);
    let refined = golden_section_max(&g, lo, hi);
    if refined.1 > best.1 {
        best = refined;
    }
    if let Some(p) = peak_hint.filter(|p| *p >= a && *p <= b) {
        let v = eval(p)?;
        if v > best.1 {
            best = (p, v);
        }
    }
    let (peak, shift) = best;
    if shift == f64::NEG_INFINITY || !shift.is_finite() {
        return Err(Error::Underflow { shift });
    }

    let level = shift - WINDOW_DROP;
    let crossing = |lo: f64, hi: f64| -> Result<f64> { find_root_monotone(|x| g(x) - level, lo, hi, 0.0) };
    let left = if peak > a && eval(a)? < level {
        crossing(a, peak)?
    } else {
        a
    };
    let right = if peak < b && eval(b)? < level {
        crossing(peak, b)?
    } else {
        b
    };

    let shifted = |x: f64| (g(x) - shift).exp();
    let bulk_cfg = cfg.with_abs_tol(0.0)?;
    let mut bulk = 0.0;
    for (lo, hi) in [(left, peak), (peak, right)] {
        if hi > lo {
            bulk += integrate(shifted, lo, hi, &bulk_cfg)?.value;
        }
    }
    let tail_cfg = cfg.with_abs_tol(cfg.rel_tol * bulk)?;
    let mut tails = 0.0;
    for (lo, hi) in [(a, left), (right, b)] {
        if hi > lo {
            tails += integrate(shifted, lo, hi, &tail_cfg)?.value;
        }
    }
    let total = bulk + tails;
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::Underflow { shift });
    }
    Ok(shift + total.ln())
}
