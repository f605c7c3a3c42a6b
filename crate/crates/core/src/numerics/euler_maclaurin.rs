use num_rational::Ratio;

use super::quadrature::{integrate, QuadratureConfig};
use crate::error::{Error, Result};

/// Largest supported order; `B_{2k}` stays exact in `i128` rationals up to here.
pub const MAX_ORDER: usize = 15;

/// Bernoulli numbers `B_0 ..= B_m` (convention `B_1 = -1/2`) as exact rationals.
pub fn bernoulli_numbers(m: usize) -> Vec<Ratio<i128>> {
    let mut b: Vec<Ratio<i128>> = Vec::with_capacity(m + 1);
    b.push(Ratio::from_integer(1));
    for n in 1..=m {
        // Σ_{i=0}^{n} C(n+1, i) B_i = 0
        let mut acc = Ratio::from_integer(0);
        let mut binom: i128 = 1;
        for (i, bi) in b.iter().enumerate() {
            acc += *bi * binom;
            binom = binom * (n as i128 + 1 - i as i128) / (i as i128 + 1);
        }
        b.push(-acc / (n as i128 + 1));
    }
    b
}

fn ratio_to_f64(r: &Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `Σ_{i=p}^{q} f(i)` via the Euler–Maclaurin formula with both endpoints included:
///
/// ```text
/// ∫_p^q f + (f(p) + f(q))/2 + Σ_{j=1}^{k} B_{2j}/(2j)! (f^{(2j-1)}(q) - f^{(2j-1)}(p))
/// ```
///
/// `odd_derivatives[j]` must be `f^{(2j+1)}`; at least `k` are required.
pub fn euler_maclaurin_sum<F>(
    f: F,
    odd_derivatives: &[&dyn Fn(f64) -> f64],
    p: i64,
    q: i64,
    k: usize,
    cfg: &QuadratureConfig,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(1..=MAX_ORDER).contains(&k) {
        return Err(Error::domain(format!(
            "Euler-Maclaurin order must be in 1..={MAX_ORDER}, got {k}"
        )));
    }
    if odd_derivatives.len() < k {
        return Err(Error::domain(format!(
            "order {k} needs {k} odd derivatives, got {}",
            odd_derivatives.len()
        )));
    }
    if p > q {
        return Err(Error::domain(format!("empty summation range {p}..={q}")));
    }
    let (a, b) = (p as f64, q as f64);
    if p == q {
        return Ok(f(a));
    }
    let integral = integrate(&f, a, b, cfg)?.value;
    let bern = bernoulli_numbers(2 * k);
    let mut correction = 0.0;
    let mut factorial = 1.0;
    for j in 1..=k {
        factorial *= ((2 * j - 1) * 2 * j) as f64;
        let d = odd_derivatives[j - 1];
        correction += ratio_to_f64(&bern[2 * j]) / factorial * (d(b) - d(a));
    }
    Ok(integral + 0.5 * (f(a) + f(b)) + correction)
}
