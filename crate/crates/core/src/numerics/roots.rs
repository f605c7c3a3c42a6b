use crate::error::{Error, Result};

const MAX_ITER: usize = 500;

/// Root of a continuous function with a sign change on `[lo, hi]`.
///
/// Illinois-style false position, falling back to bisection whenever the
/// bracket fails to halve; every iterate stays inside the current bracket.
/// The returned point has a sign change of `f` within `[root - tol, root + tol]`
/// (or is an exact zero, or the bracket has collapsed to adjacent floats).
pub fn find_root_monotone<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::domain(format!(
            "root bracket must be finite with lo < hi, got [{lo}, {hi}]"
        )));
    }
    let tol = tol.max(0.0);
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa.is_nan() || fb.is_nan() {
        return Err(Error::domain("root function returned NaN at the bracket ends"));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }

    // which end was retained on the previous step (Illinois weighting)
    let mut side = 0i8;
    for _ in 0..MAX_ITER {
        let width = b - a;
        if width <= 2.0 * tol {
            break;
        }
        let mut x = (a * fb - b * fa) / (fb - fa);
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        if x <= a || x >= b {
            // adjacent floats
            break;
        }
        let fx = f(x);
        if fx.is_nan() {
            return Err(Error::domain(format!("root function returned NaN at {x}")));
        }
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
        if b - a > 0.5 * width {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            let fm = f(m);
            if fm.is_nan() {
                return Err(Error::domain(format!("root function returned NaN at {m}")));
            }
            if fm == 0.0 {
                return Ok(m);
            }
            if fm.signum() == fa.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
                fb = fm;
            }
            side = 0;
        }
    }
    Ok(0.5 * (a + b))
}

/// Maximiser of a unimodal function on `[lo, hi]` by golden-section search.
pub(crate) fn golden_section_max<F>(f: F, lo: f64, hi: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= 4.0 * f64::EPSILON * (a.abs() + b.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let mut best = (c, fc);
    for x in [a, b, d] {
        let fx = f(x);
        if fx > best.1 {
            best = (x, fx);
        }
    }
    if fd > best.1 {
        best = (d, fd);
    }
    best
}
