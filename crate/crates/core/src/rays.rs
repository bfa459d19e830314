//! Periodic dynamic rays of `f_λ`: external addresses, the ray model
//! `F(t) = e^t − 1`, tracing by inverse branches, fundamental segments and
//! the `diam*` upper bounds.
//!
//! Addresses are 0-based: the ray `g_s` satisfies `g_s(t) ≈ t − Log λ + 2πi s₀`
//! for large `t` and `f(g_s(t)) = g_{σs}(F(t))`, so
//! `g_s(t) = L_{s₀}(g_{σs}(F(t)))`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bounds::BoundarySamples;
use crate::error::{Error, Result};
use crate::expfield::{ExpMap, MAX_EXPONENT};
use crate::output::{complex, format_sig15};
use crate::quad::{adaptive_simpson, LENGTH_REL_TOL};
use crate::Point;

/// Potentials above this are never pushed forward by `F`.
pub const POTENTIAL_CEILING: f64 = 700.0;

/// Default cap on the number of inverse-branch levels in a trace.
pub const DEFAULT_MAX_DEPTH: usize = 10_000_000;

/// Environment variable overriding [`DEFAULT_MAX_DEPTH`].
pub const MAX_DEPTH_ENV: &str = "RAYLANDER_MAX_DEPTH";

/// Default agreement required between depth `N` and `N + 1` traces,
/// relative to `max(1, |z|)`.
pub const DEFAULT_TRACE_TOL: f64 = 1e-12;

/// Midpoint deviation, relative to the chord, that triggers a split.
pub const SPLIT_DEVIATION: f64 = 1e-3;

/// Chords longer than this fraction of `max(1, |z|)` are split.
pub const SPLIT_STEP: f64 = 0.25;

/// Hard cap on the number of samples in one fundamental segment.
pub const MAX_SEGMENT_SAMPLES: usize = 4096;

const TWO_PI: f64 = 2.0 * PI;

/// A periodic integer sequence `s₀ s₁ …` stored over one period.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct ExternalAddress {
    entries: Vec<i64>,
}

impl ExternalAddress {
    /// Address with the given entries, repeated to fill `period`.
    pub fn new(entries: Vec<i64>, period: usize) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Invalid("address needs at least one entry".into()));
        }
        if period == 0 {
            return Err(Error::Invalid("period must be >= 1".into()));
        }
        if !period.is_multiple_of(entries.len()) {
            return Err(Error::Invalid(format!(
                "period {period} is not a multiple of the {} given entries",
                entries.len()
            )));
        }
        let reps = period / entries.len();
        let entries = entries.iter().copied().cycle().take(entries.len() * reps).collect();
        Ok(ExternalAddress { entries })
    }

    pub fn constant(s: i64) -> Self {
        ExternalAddress { entries: vec![s] }
    }

    /// Parses comma-separated integers, e.g. `"0,1"`.
    pub fn parse(text: &str, period: usize) -> Result<Self> {
        let entries = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Invalid(format!("bad address entry {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries, period)
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    /// `s_n`, 0-based.
    pub fn entry(&self, n: usize) -> i64 {
        self.entries[n % self.entries.len()]
    }

    pub fn period(&self) -> usize {
        self.entries.len()
    }

    pub fn bound(&self) -> u64 {
        self.entries.iter().map(|s| s.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn minimal_period(&self) -> usize {
        let k = self.period();
        (1..=k)
            .find(|&p| k.is_multiple_of(p) && (0..k).all(|i| self.entries[i] == self.entries[i % p]))
            .unwrap_or(k)
    }

    /// The address `(−s_j)`, whose ray is the mirror image for real `λ`.
    pub fn conjugate(&self) -> Self {
        ExternalAddress {
            entries: self.entries.iter().map(|s| -s).collect(),
        }
    }
}

impl TryFrom<Vec<i64>> for ExternalAddress {
    type Error = Error;

    fn try_from(entries: Vec<i64>) -> Result<Self> {
        let k = entries.len();
        Self::new(entries, k)
    }
}

impl From<ExternalAddress> for Vec<i64> {
    fn from(a: ExternalAddress) -> Vec<i64> {
        a.entries
    }
}

impl fmt::Display for ExternalAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The ray model `F(t) = e^t − 1` on `[0, ∞)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RayModel;

impl RayModel {
    pub fn forward(t: f64) -> Result<f64> {
        if t > MAX_EXPONENT {
            return Err(Error::Overflow(format!("F({t}) is not representable")));
        }
        Ok(t.exp_m1())
    }

    pub fn inverse(t: f64) -> f64 {
        t.ln_1p()
    }

    /// `F^n(t)`; negative `n` applies `log(1 + t)` `|n|` times.
    pub fn iterate(t: f64, n: i64) -> Result<f64> {
        if !(t >= 0.0) || t.is_infinite() {
            return Err(Error::Domain(format!("potential t = {t} must be finite and >= 0")));
        }
        let mut s = t;
        if n >= 0 {
            for _ in 0..n {
                s = Self::forward(s)?;
            }
        } else {
            for _ in 0..n.unsigned_abs() {
                s = Self::inverse(s);
            }
        }
        Ok(s)
    }
}

/// `F^n(t)`; see [`RayModel::iterate`].
pub fn ray_model(t: f64, n: i64) -> Result<f64> {
    RayModel::iterate(t, n)
}

/// Level cap from [`MAX_DEPTH_ENV`], or [`DEFAULT_MAX_DEPTH`].
pub fn depth_cap() -> Result<usize> {
    match std::env::var(MAX_DEPTH_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Invalid(format!("{MAX_DEPTH_ENV}={v:?} is not a level count"))),
        Err(_) => Ok(DEFAULT_MAX_DEPTH),
    }
}

/// Largest `N <= cap` with `F^N(t) <= POTENTIAL_CEILING` (0 when `t` is
/// already above the ceiling), together with the potentials `F^n(t)`.
fn potentials_to_ceiling(t: f64, cap: usize) -> Vec<f64> {
    let mut ts = vec![t];
    let mut cur = t;
    while ts.len() <= cap {
        let next = cur.exp_m1();
        if !(next <= POTENTIAL_CEILING) || next == cur {
            break;
        }
        ts.push(next);
        cur = next;
    }
    ts
}

/// Number of levels `trace_ray` uses by default for potential `t`.
pub fn auto_depth(t: f64) -> Result<usize> {
    check_potential(t)?;
    Ok(potentials_to_ceiling(t, depth_cap()?).len() - 1)
}

fn check_potential(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("potential t = {t} must be finite and > 0")));
    }
    Ok(())
}

/// `g_{σ^level s}(T)` evaluated through one inverse branch in log space:
/// `T + Log((1 + e^{−T}(−1 − Log λ + 2πi s_{level+1}))/λ) + 2πi s_level`.
fn reference_point(m: &ExpMap, addr: &ExternalAddress, level: usize, t_level: f64) -> Point {
    let c = Point::new(-1.0, TWO_PI * addr.entry(level + 1) as f64) - m.log_lambda();
    let x = (Point::new(1.0, 0.0) + c * (-t_level).exp()) / m.lambda();
    Point::new(t_level, TWO_PI * addr.entry(level) as f64) + x.ln()
}

fn descend(m: &ExpMap, addr: &ExternalAddress, mut z: Point, from_level: usize) -> Result<Point> {
    for n in (0..from_level).rev() {
        z = m.inverse_branch(z, addr.entry(n))?;
    }
    Ok(z)
}

/// A traced ray point with its accuracy report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    #[serde(with = "complex")]
    pub z: Point,
    pub depth: usize,
    /// `|g_N(t) − g_{N+1}(t)|`.
    pub change: f64,
}

/// `g_s(t)` for the ray with address `addr`; see [`trace_ray_report`].
pub fn trace_ray(
    m: &ExpMap,
    addr: &ExternalAddress,
    t: f64,
    depth: Option<usize>,
    tol: f64,
) -> Result<Point> {
    trace_ray_report(m, addr, t, depth, tol).map(|tr| tr.z)
}

/// Traces `g_s(t)` from the reference point at level `depth` (default: as
/// deep as the potential ceiling allows) and checks it against the trace
/// from level `depth + 1`.
pub fn trace_ray_report(
    m: &ExpMap,
    addr: &ExternalAddress,
    t: f64,
    depth: Option<usize>,
    tol: f64,
) -> Result<Trace> {
    check_potential(t)?;
    if !(tol > 0.0) {
        return Err(Error::Invalid(format!("tolerance {tol} must be > 0")));
    }
    let ts = match depth {
        None => potentials_to_ceiling(t, depth_cap()?),
        Some(n) => {
            let ts = potentials_to_ceiling(t, n);
            if ts.len() <= n {
                return Err(Error::Overflow(format!(
                    "F^{n}({t}) exceeds the potential ceiling {POTENTIAL_CEILING}; use a smaller depth"
                )));
            }
            ts
        }
    };
    let n = ts.len() - 1;
    let z = descend(m, addr, reference_point(m, addr, n, ts[n]), n)?;
    let next = ts[n].exp_m1();
    // beyond e^709 the neglected term is below e^{-e^709}
    let change = if next.is_finite() {
        let z_deeper = descend(m, addr, reference_point(m, addr, n + 1, next), n + 1)?;
        (z - z_deeper).norm()
    } else {
        0.0
    };
    if !(change <= tol * z.norm().max(1.0)) {
        return Err(Error::NonConvergence(format!(
            "ray trace at t = {t} changed by {change:e} between depths {n} and {}",
            n + 1
        )));
    }
    Ok(Trace { z, depth: n, change })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RaySample {
    pub t: f64,
    pub z: Point,
}

#[derive(Serialize, Deserialize)]
struct SampleRecord {
    t: f64,
    re: f64,
    im: f64,
}

impl Serialize for RaySample {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SampleRecord {
            t: self.t,
            re: self.z.re,
            im: self.z.im,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RaySample {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SampleRecord::deserialize(d)?;
        Ok(RaySample {
            t: r.t,
            z: Point::new(r.re, r.im),
        })
    }
}

/// Samples of `g_s` on `[t_lo, t_hi]`, ordered by increasing potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RaySegment {
    #[serde(with = "complex")]
    pub lambda: Point,
    pub address: ExternalAddress,
    pub period: usize,
    pub samples: Vec<RaySample>,
}

impl RaySegment {
    pub fn new(lambda: Point, address: ExternalAddress, samples: Vec<RaySample>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Invalid("a ray segment needs at least two samples".into()));
        }
        if samples.windows(2).any(|w| !(w[1].t > w[0].t)) {
            return Err(Error::Invalid("segment potentials must increase strictly".into()));
        }
        Ok(RaySegment {
            lambda,
            period: address.period(),
            address,
            samples,
        })
    }

    pub fn t_lo(&self) -> f64 {
        self.samples[0].t
    }

    pub fn t_hi(&self) -> f64 {
        self.samples[self.samples.len() - 1].t
    }

    pub fn lower(&self) -> Point {
        self.samples[0].z
    }

    pub fn upper(&self) -> Point {
        self.samples[self.samples.len() - 1].z
    }

    pub fn points(&self) -> Vec<Point> {
        self.samples.iter().map(|s| s.z).collect()
    }

    /// Largest distance between two samples.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.samples.iter().enumerate() {
            for b in &self.samples[i + 1..] {
                d = d.max((a.z - b.z).norm());
            }
        }
        d
    }

    pub fn euclidean_length(&self) -> f64 {
        self.samples.windows(2).map(|w| (w[1].z - w[0].z).norm()).sum()
    }

    /// `t,re,im` table with 15 significant digits.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io_err = |e: csv::Error| Error::Invalid(format!("csv: {e}"));
        w.write_record(["t", "re", "im"]).map_err(io_err)?;
        for s in &self.samples {
            w.write_record([format_sig15(s.t), format_sig15(s.z.re), format_sig15(s.z.im)])
                .map_err(io_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Invalid(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Invalid(format!("csv: {e}")))
    }
}

/// `g_s` sampled on the fundamental interval `[t, F^k(t)]`.
///
/// Initial samples are uniform in `u = log(1 + t)`. With more than two
/// samples, a chord is split at its parameter midpoint while the traced
/// midpoint deviates from the chord midpoint by more than
/// [`SPLIT_DEVIATION`] times the chord, or the chord is longer than
/// [`SPLIT_STEP`]` · max(1, |z|)`, up to [`MAX_SEGMENT_SAMPLES`] samples.
pub fn fundamental_segment(
    m: &ExpMap,
    addr: &ExternalAddress,
    t: f64,
    samples: usize,
) -> Result<RaySegment> {
    check_potential(t)?;
    if samples < 2 {
        return Err(Error::Invalid("need at least 2 samples".into()));
    }
    let t_hi = RayModel::iterate(t, addr.period() as i64)?;
    let trace = |s: f64| -> Result<RaySample> {
        Ok(RaySample {
            t: s,
            z: trace_ray(m, addr, s, None, DEFAULT_TRACE_TOL)?,
        })
    };
    if samples == 2 {
        return RaySegment::new(m.lambda(), addr.clone(), vec![trace(t)?, trace(t_hi)?]);
    }
    let (u0, u1) = (t.ln_1p(), t_hi.ln_1p());
    let mut pts = Vec::with_capacity(samples);
    for i in 0..samples {
        let s = match i {
            0 => t,
            _ if i == samples - 1 => t_hi,
            _ => (u0 + (u1 - u0) * i as f64 / (samples - 1) as f64).exp_m1(),
        };
        pts.push(trace(s)?);
    }
    let mut i = 0;
    while i + 1 < pts.len() && pts.len() < MAX_SEGMENT_SAMPLES {
        let (a, b) = (pts[i], pts[i + 1]);
        let chord = (b.z - a.z).norm();
        let scale = a.z.norm().min(b.z.norm()).max(1.0);
        let s_mid = (0.5 * (a.t.ln_1p() + b.t.ln_1p())).exp_m1();
        if s_mid <= a.t || s_mid >= b.t {
            i += 1;
            continue;
        }
        let needs_step = chord > SPLIT_STEP * scale;
        let mid = trace(s_mid)?;
        let deviation = (mid.z - 0.5 * (a.z + b.z)).norm();
        if needs_step || deviation > SPLIT_DEVIATION * chord {
            pts.insert(i + 1, mid);
        } else {
            i += 1;
        }
    }
    RaySegment::new(m.lambda(), addr.clone(), pts)
}

/// Upper bound for `diam*` of a segment with respect to the complement of
/// the boundary samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiamStarEstimate {
    pub t: f64,
    /// Length of the segment in the density `2/dist(z, S)`.
    pub value: f64,
    /// Euclidean diameter times the smallest lower density bound found on
    /// the segment.
    pub lower: f64,
    pub boundary_samples_used: usize,
    /// The bound uses density estimates instead of the true metric of the
    /// post-singular complement.
    pub surrogate: bool,
}

/// [`diamstar_upper_indexed`] for a raw sample list.
pub fn diamstar_upper(seg: &RaySegment, boundary_samples: &[Point]) -> Result<DiamStarEstimate> {
    diamstar_upper_indexed(seg, &BoundarySamples::new(boundary_samples)?)
}

/// Upper-density length of the sampled polyline.
///
/// The supremum over sub-arcs in `diam*` is attained by the whole segment,
/// since lengths are additive.
pub fn diamstar_upper_indexed(
    seg: &RaySegment,
    boundary: &BoundarySamples,
) -> Result<DiamStarEstimate> {
    let pts = seg.points();
    for (i, w) in pts.windows(2).enumerate() {
        if boundary.segment_meets_hull(w[0], w[1]) {
            return Err(Error::HullIntersection(format!(
                "chord {i} from {} to {} at t = {}",
                w[0],
                w[1],
                seg.samples[i].t
            )));
        }
    }
    let mut value = 0.0;
    let mut lo_min = f64::INFINITY;
    let hull = boundary.hull();
    for w in pts.windows(2) {
        let (p, q) = (w[0], w[1]);
        let dir = q - p;
        let len = dir.norm();
        value += adaptive_simpson(
            |s| boundary.upper_density(p + dir * s) * len,
            0.0,
            1.0,
            LENGTH_REL_TOL,
        );
        for z in [p, p + 0.5 * dir] {
            lo_min = lo_min.min(boundary.lower_density_with(z, hull));
        }
    }
    lo_min = lo_min.min(boundary.lower_density_with(*pts.last().unwrap(), hull));
    Ok(DiamStarEstimate {
        t: seg.t_lo(),
        value,
        lower: seg.diameter() * lo_min,
        boundary_samples_used: boundary.len(),
        surrogate: true,
    })
}

/// Sampled stand-in for `M(t)`: the largest `diam*` bound over fundamental
/// segments starting in `[t, F^k(t)]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MSurrogate {
    pub t: f64,
    pub value: f64,
    pub starts: Vec<f64>,
    pub bounds: Vec<f64>,
    pub surrogate: bool,
}

pub fn m_surrogate(
    m: &ExpMap,
    addr: &ExternalAddress,
    t: f64,
    grid: usize,
    boundary: &BoundarySamples,
) -> Result<MSurrogate> {
    check_potential(t)?;
    if grid < 2 {
        return Err(Error::Invalid("grid needs at least 2 points".into()));
    }
    let t_hi = RayModel::iterate(t, addr.period() as i64)?;
    let (u0, u1) = (t.ln_1p(), t_hi.ln_1p());
    let mut starts = Vec::with_capacity(grid);
    let mut bounds = Vec::with_capacity(grid);
    for i in 0..grid {
        let s = match i {
            0 => t,
            _ if i == grid - 1 => t_hi,
            _ => (u0 + (u1 - u0) * i as f64 / (grid - 1) as f64).exp_m1(),
        };
        let seg = fundamental_segment(m, addr, s, 16)?;
        starts.push(s);
        bounds.push(diamstar_upper_indexed(&seg, boundary)?.value);
    }
    let value = bounds.iter().copied().fold(0.0, f64::max);
    Ok(MSurrogate {
        t,
        value,
        starts,
        bounds,
        surrogate: true,
    })
}
