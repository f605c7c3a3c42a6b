//! Error functions, log-gamma and the incomplete gamma function.
//!
//! `erf`/`erfc`/`erfcx` use W. J. Cody's rational Chebyshev approximations.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;
const SQRT_PI: f64 = 1.772_453_850_905_516;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

const ERF_A: [f64; 5] = [
    3.1611237438705656,
    113.864154151050156,
    377.485237685302021,
    3209.37758913846947,
    0.185777706184603153,
];
const ERF_B: [f64; 4] = [
    23.6012909523441209,
    244.024637934444173,
    1282.61652607737228,
    2844.23683343917062,
];
const ERFC_C: [f64; 9] = [
    0.564188496988670089,
    8.88314979438837594,
    66.1191906371416295,
    298.635138197400131,
    881.95222124176909,
    1712.04761263407058,
    2051.07837782607147,
    1230.33935479799725,
    2.15311535474403846e-8,
];
const ERFC_D: [f64; 8] = [
    15.7449261107098347,
    117.693950891312499,
    537.181101862009858,
    1621.38957456669019,
    3290.79923573345963,
    4362.61909014324716,
    3439.36767414372164,
    1230.33935480374942,
];
const ERFC_P: [f64; 6] = [
    0.305326634961232344,
    0.360344899949804439,
    0.125781726111229246,
    0.0160837851487422766,
    6.58749161529837803e-4,
    0.0163153871373020978,
];
const ERFC_Q: [f64; 5] = [
    2.56852019228982242,
    1.87295284992346047,
    0.527905102951428412,
    0.0605183413124413191,
    0.00233520497626869185,
];
const THRESHOLD: f64 = 0.46875;
/// Below this, `e^{x²}` overflows.
const ERFCX_OVERFLOW: f64 = -26.5;

fn erf_small(x: f64) -> f64 {
    let z = x * x;
    let num = (((ERF_A[4] * z + ERF_A[0]) * z + ERF_A[1]) * z + ERF_A[2]) * z + ERF_A[3];
    let den = (((z + ERF_B[0]) * z + ERF_B[1]) * z + ERF_B[2]) * z + ERF_B[3];
    x * num / den
}

/// `erfcx(y)` for `y > THRESHOLD`.
fn erfcx_large(y: f64) -> f64 {
    if y <= 4.0 {
        let c = &ERFC_C;
        let d = &ERFC_D;
        let mut num = c[8] * y + c[0];
        for ci in &c[1..8] {
            num = num * y + ci;
        }
        let mut den = y + d[0];
        for di in &d[1..8] {
            den = den * y + di;
        }
        num / den
    } else {
        let z = 1.0 / (y * y);
        let p = &ERFC_P;
        let q = &ERFC_Q;
        let mut num = p[5] * z + p[0];
        for pi in &p[1..5] {
            num = num * z + pi;
        }
        let mut den = z + q[0];
        for qi in &q[1..5] {
            den = den * z + qi;
        }
        (FRAC_1_SQRT_PI - z * num / den) / y
    }
}

/// `e^{-y²}` with the square split to keep the relative error at a few ulps.
fn exp_neg_square(y: f64) -> f64 {
    let t = (y * 16.0).trunc() / 16.0;
    (-t * t).exp() * (-(y - t) * (y + t)).exp()
}

fn exp_square(y: f64) -> f64 {
    let t = (y * 16.0).trunc() / 16.0;
    (t * t).exp() * ((y - t) * (y + t)).exp()
}

pub fn erf(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESHOLD {
        return erf_small(x);
    }
    let tail = if y >= 26.6 {
        0.0
    } else {
        erfcx_large(y) * exp_neg_square(y)
    };
    (1.0 - tail).copysign(x)
}

pub fn erfc(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESHOLD {
        return 1.0 - erf_small(x);
    }
    let tail = if y >= 26.6 {
        0.0
    } else {
        erfcx_large(y) * exp_neg_square(y)
    };
    if x < 0.0 {
        2.0 - tail
    } else {
        tail
    }
}

/// `erfcx` restricted to `x ≥ 0`, where it cannot overflow.
pub(crate) fn erfcx_nonneg(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x <= THRESHOLD {
        exp_square(x) * (1.0 - erf_small(x))
    } else {
        erfcx_large(x)
    }
}

/// Scaled complementary error function `e^{x²} erfc(x)`.
///
/// Fails with [`Error::Overflow`] for `x < -26.5`.
pub fn erfcx(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("erfcx of NaN"));
    }
    if x >= 0.0 {
        return Ok(erfcx_nonneg(x));
    }
    if x < ERFCX_OVERFLOW {
        return Err(Error::Overflow { x });
    }
    if x >= -THRESHOLD {
        return Ok(exp_square(x) * (1.0 - erf_small(x)));
    }
    Ok(2.0 * exp_square(x) - erfcx_large(-x))
}

/// `Φ(x) = log(erfc(x) / 2)`.
pub fn log_half_erfc(x: f64) -> f64 {
    if x >= 0.0 {
        (0.5 * erfcx_nonneg(x)).ln() - x * x
    } else {
        (-0.5 * erfc(-x)).ln_1p()
    }
}

/// `Φ'(x) = -2 e^{-x²} / (√π erfc(x))`.
pub fn phi_prime(x: f64) -> f64 {
    if x >= 0.0 {
        -2.0 / (SQRT_PI * erfcx_nonneg(x))
    } else {
        -2.0 * exp_neg_square(x) / (SQRT_PI * erfc(x))
    }
}

// B_{2k} / (2k (2k-1)) for k = 1..=8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

/// `log Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("log_gamma needs finite x > 0, got {x}")));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    let mut shift = 0.0;
    let mut y = x;
    let mut prod = 1.0;
    while y < 15.0 {
        prod *= y;
        y += 1.0;
        if prod > 1e280 {
            shift += prod.ln();
            prod = 1.0;
        }
    }
    shift += prod.ln();
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut p = inv;
    for c in STIRLING {
        series += c * p;
        p *= inv2;
    }
    Ok((y - 0.5) * y.ln() - y + LN_SQRT_2PI + series - shift)
}

/// `log n!`.
pub fn log_factorial(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    if n <= 20 {
        return (2..=n).map(|k| k as f64).product::<f64>().ln();
    }
    log_gamma(n as f64 + 1.0).expect("n + 1 > 0")
}

const GAMMA_MAX_ITER: usize = 200_000;
const GAMMA_EPS: f64 = 1e-16;

/// `log Σ_{n≥0} z^n / ((a+1)(a+2)…(a+n))`, so that `γ(a, z) = z^a e^{-z} S / a`.
fn log_lower_series(a: f64, z: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..GAMMA_MAX_ITER {
        term *= z / (a + n as f64);
        sum += term;
        if term < sum * GAMMA_EPS {
            return Ok(sum.ln());
        }
    }
    Err(Error::SeriesNonConvergence {
        what: "incomplete gamma series",
        iterations: GAMMA_MAX_ITER,
    })
}

/// Modified Lentz evaluation of the continued fraction with
/// `Γ(a, z) = z^a e^{-z} · CF`.
fn log_upper_cf(a: f64, z: f64) -> Result<f64> {
    let tiny = 1e-300;
    let mut b = z + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..GAMMA_MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < GAMMA_EPS {
            return Ok(h.ln());
        }
    }
    Err(Error::SeriesNonConvergence {
        what: "incomplete gamma continued fraction",
        iterations: GAMMA_MAX_ITER,
    })
}

fn check_gamma_args(a: f64, z: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain(format!("incomplete gamma needs a > 0, got {a}")));
    }
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::domain(format!("incomplete gamma needs z >= 0, got {z}")));
    }
    Ok(())
}

/// `(log P(a, z), log Q(a, z))` for the regularized incomplete gamma functions.
///
/// The directly computed one of the pair comes from the series (`z < a + 1`)
/// or the continued fraction; the other is its log-complement. `z = 0` gives
/// `(-∞, 0)`.
pub fn log_regularized_gamma(a: f64, z: f64) -> Result<(f64, f64)> {
    check_gamma_args(a, z)?;
    if z == 0.0 {
        return Ok((f64::NEG_INFINITY, 0.0));
    }
    let lg = log_gamma(a)?;
    if z < a + 1.0 {
        let log_p = a * z.ln() - z - a.ln() - lg + log_lower_series(a, z)?;
        Ok((log_p, log1m_exp(log_p)))
    } else {
        let log_q = a * z.ln() - z - lg + log_upper_cf(a, z)?;
        Ok((log1m_exp(log_q), log_q))
    }
}

/// `log(1 - e^x)` for `x ≤ 0`.
fn log1m_exp(x: f64) -> f64 {
    if x > -LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

/// Regularized lower incomplete gamma `P(a, z)`.
pub fn gamma_p(a: f64, z: f64) -> Result<f64> {
    Ok(log_regularized_gamma(a, z)?.0.exp())
}

/// Regularized upper incomplete gamma `Q(a, z) = 1 - P(a, z)`.
pub fn gamma_q(a: f64, z: f64) -> Result<f64> {
    Ok(log_regularized_gamma(a, z)?.1.exp())
}

/// `log γ(a; z)`, `γ(a; z) = ∫_0^z t^{a-1} e^{-t} dt`. Returns `-∞` at `z = 0`.
pub fn log_lower_gamma(a: f64, z: f64) -> Result<f64> {
    check_gamma_args(a, z)?;
    if z == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if z < a + 1.0 {
        // no Γ(a) round trip: γ = z^a e^{-z} S / a
        Ok(a * z.ln() - z - a.ln() + log_lower_series(a, z)?)
    } else {
        let lg = log_gamma(a)?;
        let log_q = a * z.ln() - z - lg + log_upper_cf(a, z)?;
        Ok(lg + log1m_exp(log_q))
    }
}

/// `ζ'(-1) = 1/12 - log A`, `A` the Glaisher–Kinkelin constant.
pub fn zeta_prime_minus_one() -> f64 {
    -0.165_421_143_700_450_93
}

pub(crate) fn sqrt_pi() -> f64 {
    SQRT_PI
}
