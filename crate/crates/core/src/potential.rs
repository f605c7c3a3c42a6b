//! Radial potentials, droplet geometry and the exponent family `V_τ`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::find_root_monotone;

/// `|r − 1|` below this counts as touching the wall.
pub const BOUNDARY_TOL: f64 = 1e-9;
/// `r q'(r) < 2` at this radius means the droplet is unbounded.
const R1_SEARCH_LIMIT: f64 = 1e8;
const ROOT_TOL: f64 = 1e-15;

/// Named families of potentials.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Preset {
    /// `q = r² − 2a log r`
    AnnulusLog { a: f64 },
    /// `q = c r² − 2(c − 1) log r`
    Pinned { c: f64 },
    /// `q = s² r²`
    GaussScaled { s: f64 },
    /// `q = r^{2(1+μ)} − 2a log r`
    Mittag { mu: f64, a: f64 },
    /// `q = Σ_k c_k r^{2k} − 2a log r`, `coeffs[0]` multiplying `r²`
    Polylog { a: f64, coeffs: Vec<f64> },
}

type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Form {
    /// `Σ c r^p − 2 a log r` with closed-form derivatives
    Powers { terms: Vec<(f64, f64)>, log_coef: f64 },
    /// `q` and `q'` supplied by the caller; higher derivatives by finite differences of `q'`
    Custom { q: RadialFn, dq: RadialFn, name: String },
}

/// A radial potential `q(r)` (plus an optional constant offset).
#[derive(Clone)]
pub struct RadialPotential {
    preset: Option<Preset>,
    form: Form,
    offset: f64,
}

impl fmt::Debug for RadialPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RadialPotential({})", self.descriptor())
    }
}

fn parse_number(key: &str, value: &str) -> Result<f64> {
    let v: f64 = value
        .parse()
        .map_err(|_| Error::Descriptor(format!("{key}={value:?} is not a number")))?;
    if !v.is_finite() {
        return Err(Error::Descriptor(format!("{key} must be finite")));
    }
    Ok(v)
}

impl RadialPotential {
    pub fn annulus_log(a: f64) -> Result<Self> {
        Self::from_preset(Preset::AnnulusLog { a })
    }

    pub fn pinned(c: f64) -> Result<Self> {
        Self::from_preset(Preset::Pinned { c })
    }

    pub fn gauss_scaled(s: f64) -> Result<Self> {
        Self::from_preset(Preset::GaussScaled { s })
    }

    pub fn mittag(mu: f64, a: f64) -> Result<Self> {
        Self::from_preset(Preset::Mittag { mu, a })
    }

    pub fn polylog(a: f64, coeffs: Vec<f64>) -> Result<Self> {
        Self::from_preset(Preset::Polylog { a, coeffs })
    }

    pub fn from_preset(preset: Preset) -> Result<Self> {
        let bad = |msg: String| Err(Error::Potential(msg));
        let (terms, log_coef) = match &preset {
            Preset::AnnulusLog { a } => {
                if !(*a >= 0.0) {
                    return bad(format!("annulus-log needs a >= 0, got {a}"));
                }
                (vec![(1.0, 2.0)], *a)
            }
            Preset::Pinned { c } => {
                if !(*c >= 1.0) {
                    return bad(format!("pinned needs c >= 1, got {c}"));
                }
                (vec![(*c, 2.0)], c - 1.0)
            }
            Preset::GaussScaled { s } => {
                if !(*s > 0.0) {
                    return bad(format!("gauss-scaled needs s > 0, got {s}"));
                }
                (vec![(s * s, 2.0)], 0.0)
            }
            Preset::Mittag { mu, a } => {
                if !(*mu > -1.0) || !(*a >= 0.0) {
                    return bad(format!("mittag needs mu > -1 and a >= 0, got mu={mu}, a={a}"));
                }
                (vec![(1.0, 2.0 * (1.0 + mu))], *a)
            }
            Preset::Polylog { a, coeffs } => {
                if !(*a >= 0.0) {
                    return bad(format!("polylog needs a >= 0, got {a}"));
                }
                if coeffs.iter().all(|c| *c == 0.0) {
                    return bad("polylog needs at least one nonzero coefficient".into());
                }
                let terms = coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0.0)
                    .map(|(k, c)| (*c, 2.0 * (k + 1) as f64))
                    .collect();
                (terms, *a)
            }
        };
        let pot = RadialPotential {
            preset: Some(preset),
            form: Form::Powers { terms, log_coef },
            offset: 0.0,
        };
        pot.check_subharmonic()?;
        Ok(pot)
    }

    /// A potential given by `q` and `q'`; `q''…q''''` come from
    /// Richardson-extrapolated central differences of `q'`.
    pub fn custom<Q, D>(name: impl Into<String>, q: Q, dq: D) -> Result<Self>
    where
        Q: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let pot = RadialPotential {
            preset: None,
            form: Form::Custom {
                q: Arc::new(q),
                dq: Arc::new(dq),
                name: name.into(),
            },
            offset: 0.0,
        };
        pot.check_subharmonic()?;
        Ok(pot)
    }

    /// Same potential shifted by a constant.
    pub fn with_offset(mut self, offset: f64) -> Self {
        self.offset = offset;
        self
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn preset(&self) -> Option<&Preset> {
        self.preset.as_ref()
    }

    /// Parse a descriptor such as `"annulus-log a=0.5"` or
    /// `"polylog a=0.2 c1=1 c2=0.1"`. Every preset also accepts `offset=<f>`.
    pub fn parse(descriptor: &str) -> Result<Self> {
        let mut tokens = descriptor.split_whitespace();
        let kind = tokens
            .next()
            .ok_or_else(|| Error::Descriptor("empty descriptor".into()))?;
        let mut pairs: Vec<(String, f64)> = Vec::new();
        for tok in tokens {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::Descriptor(format!("expected key=value, got {tok:?}")))?;
            if pairs.iter().any(|(seen, _)| seen == k) {
                return Err(Error::Descriptor(format!("duplicate key {k:?}")));
            }
            pairs.push((k.to_string(), parse_number(k, v)?));
        }
        let mut take = |key: &str| -> Option<f64> {
            let i = pairs.iter().position(|(k, _)| k == key)?;
            Some(pairs.remove(i).1)
        };
        let offset = take("offset").unwrap_or(0.0);
        let need = |v: Option<f64>, key: &str| {
            v.ok_or_else(|| Error::Descriptor(format!("{kind} requires {key}=<value>")))
        };
        let preset = match kind {
            "annulus-log" => Preset::AnnulusLog {
                a: need(take("a"), "a")?,
            },
            "pinned" => Preset::Pinned {
                c: need(take("c"), "c")?,
            },
            "gauss-scaled" => Preset::GaussScaled {
                s: need(take("s"), "s")?,
            },
            "mittag" => {
                let mu = need(take("mu"), "mu")?;
                Preset::Mittag {
                    mu,
                    a: need(take("a"), "a")?,
                }
            }
            "polylog" => {
                let a = take("a").unwrap_or(0.0);
                let mut coeffs = Vec::new();
                let mut k = 1;
                while let Some(c) = take(&format!("c{k}")) {
                    coeffs.push(c);
                    k += 1;
                }
                Preset::Polylog { a, coeffs }
            }
            other => return Err(Error::Descriptor(format!("unknown preset {other:?}"))),
        };
        if let Some((k, _)) = pairs.first() {
            return Err(Error::Descriptor(format!("unexpected key {k:?} for {kind}")));
        }
        Ok(Self::from_preset(preset)?.with_offset(offset))
    }

    /// Canonical descriptor string, accepted back by [`RadialPotential::parse`].
    pub fn descriptor(&self) -> String {
        let mut s = match (&self.preset, &self.form) {
            (Some(Preset::AnnulusLog { a }), _) => format!("annulus-log a={a}"),
            (Some(Preset::Pinned { c }), _) => format!("pinned c={c}"),
            (Some(Preset::GaussScaled { s }), _) => format!("gauss-scaled s={s}"),
            (Some(Preset::Mittag { mu, a }), _) => format!("mittag mu={mu} a={a}"),
            (Some(Preset::Polylog { a, coeffs }), _) => {
                let mut s = format!("polylog a={a}");
                for (k, c) in coeffs.iter().enumerate() {
                    s.push_str(&format!(" c{}={c}", k + 1));
                }
                s
            }
            (None, Form::Custom { name, .. }) => format!("custom {name}"),
            (None, Form::Powers { .. }) => unreachable!("power forms always carry a preset"),
        };
        if self.offset != 0.0 {
            s.push_str(&format!(" offset={}", self.offset));
        }
        s
    }

    /// `q^{(order)}(r)` for `order ≤ 4`, `r > 0`.
    pub fn derivative(&self, r: f64, order: usize) -> f64 {
        match &self.form {
            Form::Powers { terms, log_coef } => {
                let mut v = if order == 0 { self.offset } else { 0.0 };
                for &(c, p) in terms {
                    let mut fall = 1.0;
                    for i in 0..order {
                        fall *= p - i as f64;
                    }
                    if fall != 0.0 {
                        v += c * fall * r.powf(p - order as f64);
                    }
                }
                if *log_coef != 0.0 {
                    v += -2.0
                        * log_coef
                        * match order {
                            0 => r.ln(),
                            1 => 1.0 / r,
                            2 => -1.0 / (r * r),
                            3 => 2.0 / (r * r * r),
                            4 => -6.0 / (r * r * r * r),
                            _ => unreachable!(),
                        };
                }
                v
            }
            Form::Custom { q, dq, .. } => match order {
                0 => q(r) + self.offset,
                1 => dq(r),
                _ => finite_difference(dq.as_ref(), r, order - 1),
            },
        }
    }

    pub fn q(&self, r: f64) -> f64 {
        self.derivative(r, 0)
    }

    pub fn dq(&self, r: f64) -> f64 {
        self.derivative(r, 1)
    }

    /// `q(0)` and `q''(0)`, defined when `q` is smooth at the origin.
    pub fn origin_values(&self) -> Result<(f64, f64)> {
        match &self.form {
            Form::Powers { terms, log_coef } => {
                if *log_coef != 0.0 {
                    return Err(Error::Potential("q has a logarithmic singularity at 0".into()));
                }
                let mut q2 = 0.0;
                for &(c, p) in terms {
                    if p < 2.0 {
                        return Err(Error::Potential(format!("q''(0) diverges (power r^{p})")));
                    }
                    if p == 2.0 {
                        q2 += 2.0 * c;
                    }
                }
                Ok((self.offset, q2))
            }
            Form::Custom { .. } => {
                let r = 1e-6;
                Ok((self.q(r), self.derivative(r, 2)))
            }
        }
    }

    fn check_subharmonic(&self) -> Result<()> {
        let lo = match self.inner_radius()? {
            r if r > 0.0 => r,
            _ => 1e-6,
        };
        let hi = match self.outer_radius(lo)? {
            r if r.is_finite() => r.clamp(1.0, 1e3),
            _ => 10.0,
        };
        let hi = hi.max(lo * 1.0001);
        for i in 0..=256 {
            let r = lo * (hi / lo).powf(i as f64 / 256.0);
            let dq = laplacian(self, r, 0)?;
            if !(dq > 0.0) {
                return Err(Error::Potential(format!(
                    "{} is not strictly subharmonic: ΔQ({r}) = {dq}",
                    self.descriptor()
                )));
            }
        }
        Ok(())
    }

    /// Smallest non-negative root of `q'`.
    fn inner_radius(&self) -> Result<f64> {
        let h = |r: f64| r * self.dq(r);
        let tiny = 1e-12;
        if h(tiny) >= -1e-14 {
            return Ok(0.0);
        }
        let hi = grow_until(h, 0.0, 1.0)?;
        find_root_monotone(h, tiny, hi, ROOT_TOL)
    }

    /// Root of `r q'(r) = 2` above `lo`, or `+∞`.
    fn outer_radius(&self, lo: f64) -> Result<f64> {
        let h = |r: f64| r * self.dq(r) - 2.0;
        if h(R1_SEARCH_LIMIT) < 0.0 {
            return Ok(f64::INFINITY);
        }
        let lo = lo.max(1e-12);
        if h(lo) >= 0.0 {
            return Ok(lo);
        }
        let hi = grow_until(h, 0.0, lo.max(1.0))?;
        find_root_monotone(h, lo, hi, ROOT_TOL)
    }
}

fn grow_until<H: Fn(f64) -> f64>(h: H, level: f64, start: f64) -> Result<f64> {
    let mut hi = start;
    while h(hi) <= level {
        hi *= 2.0;
        if hi > R1_SEARCH_LIMIT * 2.0 {
            return Err(Error::NoSignChange { lo: start, hi });
        }
    }
    Ok(hi)
}

/// Derivative of order `k ∈ {1, 2, 3}` of `g` by Richardson-extrapolated
/// central differences.
fn finite_difference(g: &(dyn Fn(f64) -> f64 + Send + Sync), r: f64, k: usize) -> f64 {
    let scale = r.max(1.0);
    let h0 = match k {
        1 => 1e-4,
        2 => 1e-3,
        _ => 1e-2,
    } * scale;
    let h0 = h0.min(r / 4.0);
    let stencil = |h: f64| match k {
        1 => (g(r + h) - g(r - h)) / (2.0 * h),
        2 => (g(r + h) - 2.0 * g(r) + g(r - h)) / (h * h),
        _ => (g(r + 2.0 * h) - 2.0 * g(r + h) + 2.0 * g(r - h) - g(r - 2.0 * h)) / (2.0 * h * h * h),
    };
    (4.0 * stencil(h0 / 2.0) - stencil(h0)) / 3.0
}

/// `ΔQ = q'' + q'/r` (order 0) and its first two radial derivatives.
pub fn laplacian(pot: &RadialPotential, r: f64, order: usize) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::domain(format!("laplacian needs r > 0, got {r}")));
    }
    let d = |k| pot.derivative(r, k);
    Ok(match order {
        0 => d(2) + d(1) / r,
        1 => d(3) + d(2) / r - d(1) / (r * r),
        2 => d(4) + d(3) / r - 2.0 * d(2) / (r * r) + 2.0 * d(1) / (r * r * r),
        _ => {
            return Err(Error::domain(format!(
                "laplacian order must be 0, 1 or 2, got {order}"
            )))
        }
    })
}

/// Which configuration of droplet and wall applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    #[serde(rename = "InOutAnnulus_Interior")]
    InOutAnnulusInterior,
    #[serde(rename = "InOutAnnulus_Boundary")]
    InOutAnnulusBoundary,
    #[serde(rename = "InOutDisk_Interior")]
    InOutDiskInterior,
    #[serde(rename = "InOutDisk_Boundary")]
    InOutDiskBoundary,
    #[serde(rename = "OutAnnulus_Interior")]
    OutAnnulusInterior,
    #[serde(rename = "OutAnnulus_Boundary")]
    OutAnnulusBoundary,
    NoWall,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::InOutAnnulusInterior => "InOutAnnulus_Interior",
            Regime::InOutAnnulusBoundary => "InOutAnnulus_Boundary",
            Regime::InOutDiskInterior => "InOutDisk_Interior",
            Regime::InOutDiskBoundary => "InOutDisk_Boundary",
            Regime::OutAnnulusInterior => "OutAnnulus_Interior",
            Regime::OutAnnulusBoundary => "OutAnnulus_Boundary",
            Regime::NoWall => "NoWall",
        }
    }

    pub fn is_disk(self) -> bool {
        matches!(self, Regime::InOutDiskInterior | Regime::InOutDiskBoundary)
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DropletGeometry {
    pub r0: f64,
    /// `+∞` for a non-confining potential.
    pub r1: f64,
    /// `q'(1)/2` clamped to `[0, 1]`.
    pub tau0: f64,
    pub eta: f64,
    pub regime: Regime,
}

pub fn droplet_geometry(pot: &RadialPotential) -> Result<DropletGeometry> {
    let r0 = pot.inner_radius()?;
    let r1 = pot.outer_radius(r0)?;
    let half_slope = pot.dq(1.0) / 2.0;
    let eta = 1.0 - half_slope;
    let tau0 = half_slope.clamp(0.0, 1.0);

    let regime = if r1 < 1.0 - BOUNDARY_TOL {
        Regime::NoWall
    } else if r0 > 1.0 + BOUNDARY_TOL {
        Regime::OutAnnulusInterior
    } else if (r0 - 1.0).abs() <= BOUNDARY_TOL {
        Regime::OutAnnulusBoundary
    } else {
        let boundary = (r1 - 1.0).abs() <= BOUNDARY_TOL;
        match (r0 == 0.0, boundary) {
            (true, true) => Regime::InOutDiskBoundary,
            (true, false) => Regime::InOutDiskInterior,
            (false, true) => Regime::InOutAnnulusBoundary,
            (false, false) => Regime::InOutAnnulusInterior,
        }
    };
    // r q' is increasing, so η > 1 exactly when the droplet lies outside the wall
    let out = matches!(regime, Regime::OutAnnulusInterior | Regime::OutAnnulusBoundary);
    if out != (eta >= 1.0 - 1e-8) {
        return Err(Error::Potential(format!(
            "inconsistent geometry: r0 = {r0}, eta = {eta} for {}",
            pot.descriptor()
        )));
    }
    Ok(DropletGeometry {
        r0,
        r1,
        tau0,
        eta,
        regime,
    })
}

/// `r_τ` solving `r q'(r) = 2τ`. At `τ = 0` this is `r₀`.
pub fn critical_radius(pot: &RadialPotential, tau: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::domain(format!(
            "critical_radius needs 0 <= tau <= 1, got {tau}"
        )));
    }
    let r0 = pot.inner_radius()?;
    if tau == 0.0 {
        return Ok(r0);
    }
    let h = |r: f64| r * pot.dq(r) - 2.0 * tau;
    let lo = r0.max(1e-300);
    let hi = grow_until(h, 0.0, r0.max(1.0))?;
    find_root_monotone(h, lo, hi, ROOT_TOL)
}

/// `V_τ(r) = q(r) − 2τ log r` and its derivatives up to order 4.
///
/// Orders 2–4 go through `ΔQ` and its radial derivatives.
pub fn v_tau(pot: &RadialPotential, tau: f64, r: f64, order: usize) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::domain(format!("v_tau needs r > 0, got {r}")));
    }
    let v1 = pot.dq(r) - 2.0 * tau / r;
    Ok(match order {
        0 => pot.q(r) - 2.0 * tau * r.ln(),
        1 => v1,
        2 => laplacian(pot, r, 0)? - v1 / r,
        3 => laplacian(pot, r, 1)? - laplacian(pot, r, 0)? / r + 2.0 * v1 / (r * r),
        4 => {
            laplacian(pot, r, 2)? + 3.0 * laplacian(pot, r, 0)? / (r * r)
                - laplacian(pot, r, 1)? / r
                - 6.0 * v1 / (r * r * r)
        }
        _ => {
            return Err(Error::domain(format!(
                "v_tau order must be at most 4, got {order}"
            )))
        }
    })
}
