//! Adaptive 21-point Gauss–Kronrod quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};

/// Stopping rules for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureConfig {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || !rel_tol.is_finite() {
            return Err(Error::domain(format!("rel_tol must be positive, got {rel_tol}")));
        }
        if !(abs_tol >= 0.0) || !abs_tol.is_finite() {
            return Err(Error::domain(format!(
                "abs_tol must be non-negative, got {abs_tol}"
            )));
        }
        if max_subdivisions < 1 {
            return Err(Error::domain("max_subdivisions must be at least 1"));
        }
        Ok(QuadratureConfig {
            rel_tol,
            abs_tol,
            max_subdivisions,
        })
    }

    /// Same limits, different relative tolerance.
    pub fn with_rel_tol(self, rel_tol: f64) -> Result<Self> {
        Self::new(rel_tol, self.abs_tol, self.max_subdivisions)
    }

    pub fn with_abs_tol(self, abs_tol: f64) -> Result<Self> {
        Self::new(self.rel_tol, abs_tol, self.max_subdivisions)
    }

    pub fn with_max_subdivisions(self, max_subdivisions: usize) -> Result<Self> {
        Self::new(self.rel_tol, self.abs_tol, max_subdivisions)
    }

    fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions_used: usize,
}

// Kronrod abscissae on [-1, 1] (positive half, descending); odd indices are
// the embedded 10-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// roundoff level `50 ε ∫|f|` of the panel
    floor: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One GK21 panel on [a, b]. `map` sends a panel abscissa to the abscissa
/// reported on NaN (differs from the panel variable under a change of variables).
fn gk21<F, M>(f: &F, map: &M, a: f64, b: f64) -> Result<Segment>
where
    F: Fn(f64) -> f64,
    M: Fn(f64) -> f64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_nan() {
            Err(Error::NanIntegrand { abscissa: map(x) })
        } else {
            Ok(y)
        }
    };

    let fc = eval(center)?;
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    let mut res_abs = (fc * WGK[10]).abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for k in 0..10 {
        let dx = half * XGK[k];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[k] = f1;
        fv2[k] = f2;
        kronrod += WGK[k] * (f1 + f2);
        res_abs += WGK[k] * (f1.abs() + f2.abs());
        if k % 2 == 1 {
            gauss += WG[k / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for k in 0..10 {
        res_asc += WGK[k] * ((fv1[k] - mean).abs() + (fv2[k] - mean).abs());
    }

    let value = kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(floor);
    }
    if !value.is_finite() {
        error = f64::INFINITY;
    }
    Ok(Segment {
        a,
        b,
        value,
        error,
        floor,
    })
}

fn adaptive<F, M>(f: F, map: M, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
    M: Fn(f64) -> f64,
{
    let first = gk21(&f, &map, a, b)?;
    let mut total = first.value;
    let mut total_err = first.error;
    let mut total_floor = first.floor;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut subdivisions = 1;

    // stop at the requested tolerance or once only roundoff is left
    while !(total_err <= cfg.tolerance_for(total).max(2.0 * total_floor)) || !total.is_finite() {
        if subdivisions >= cfg.max_subdivisions || !total.is_finite() {
            return Err(Error::NonConvergence {
                partial: QuadResult {
                    value: total,
                    error_estimate: total_err,
                    subdivisions_used: subdivisions,
                },
            });
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // cannot split further in floating point
            heap.push(worst);
            return Err(Error::NonConvergence {
                partial: QuadResult {
                    value: total,
                    error_estimate: total_err,
                    subdivisions_used: subdivisions,
                },
            });
        }
        let left = gk21(&f, &map, worst.a, mid)?;
        let right = gk21(&f, &map, mid, worst.b)?;
        subdivisions += 1;

        // re-sum from scratch to keep the running totals free of drift
        heap.push(left);
        heap.push(right);
        total = heap.iter().map(|s| s.value).sum();
        total_err = heap.iter().map(|s| s.error).sum();
        total_floor = heap.iter().map(|s| s.floor).sum();
    }

    Ok(QuadResult {
        value: total,
        error_estimate: total_err,
        subdivisions_used: subdivisions,
    })
}

/// Integrate `f` over `[a, b]`.
///
/// Either limit may be infinite (`f64::NEG_INFINITY` for `a`, `f64::INFINITY`
/// for `b`). A semi-infinite range is mapped onto `[0, 1)` by
/// `x = a + t / (1 - t)` (mirrored for a lower infinite limit); a doubly
/// infinite range is split at zero.
pub fn integrate<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    integrate_dyn(&f, a, b, cfg)
}

fn integrate_dyn(f: &dyn Fn(f64) -> f64, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadResult> {
    if a.is_nan() || b.is_nan() || !(a < b) {
        return Err(Error::domain(format!(
            "integration limits must satisfy a < b, got [{a}, {b}]"
        )));
    }
    if a == f64::INFINITY || b == f64::NEG_INFINITY {
        return Err(Error::domain("invalid infinite limit"));
    }

    match (a.is_finite(), b.is_finite()) {
        (true, true) => adaptive(f, |x| x, a, b, cfg),
        (true, false) => {
            let x_of = move |t: f64| a + t / (1.0 - t);
            let g = |t: f64| {
                let s = 1.0 - t;
                f(x_of(t)) / (s * s)
            };
            adaptive(g, x_of, 0.0, 1.0, cfg)
        }
        (false, true) => {
            let x_of = move |t: f64| b - t / (1.0 - t);
            let g = |t: f64| {
                let s = 1.0 - t;
                f(x_of(t)) / (s * s)
            };
            adaptive(g, x_of, 0.0, 1.0, cfg)
        }
        (false, false) => {
            let lower = integrate_dyn(f, f64::NEG_INFINITY, 0.0, cfg)?;
            let upper = integrate_dyn(f, 0.0, f64::INFINITY, cfg)?;
            Ok(QuadResult {
                value: lower.value + upper.value,
                error_estimate: lower.error_estimate + upper.error_estimate,
                subdivisions_used: lower.subdivisions_used + upper.subdivisions_used,
            })
        }
    }
}
