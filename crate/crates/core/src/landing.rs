//! Landing of periodic rays by iterated pullback of a fundamental segment.
//!
//! A segment `g[t, F^k(t)]` is pulled back along the `k` inverse branches
//! prescribed by the address, giving `g[F^{-k}(t), t]`. The Euclidean
//! diameters shrink to the landing point `w`, which is then refined as a
//! root of `f^k(w) = w` and classified by its multiplier.

use serde::{Deserialize, Serialize};

use crate::bounds::BoundarySamples;
use crate::error::{Error, Result};
use crate::expfield::{Boundedness, ExpMap};
use crate::output::complex;
use crate::rays::{diamstar_upper_indexed, fundamental_segment, ExternalAddress, RaySample, RaySegment};
use crate::Point;

/// Endpoint identity tolerance for a pullback, relative to `max(1, |z|)`.
pub const ENDPOINT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Repelling,
    Parabolic,
    /// Ray landing points are never attracting; this flags an engine fault.
    InvalidAttracting,
}

/// Classification by multiplier modulus.
pub fn classify(multiplier: Point, tol: f64) -> Classification {
    let r = multiplier.norm();
    if r > 1.0 + tol {
        Classification::Repelling
    } else if r < 1.0 - tol {
        Classification::InvalidAttracting
    } else {
        Classification::Parabolic
    }
}

/// Whether the chord `pq` crosses the branch cut `λ·(−∞, 0]` of `L_j`.
fn crosses_cut(m: &ExpMap, p: Point, q: Point) -> bool {
    let (u, v) = (m.unrotate(p), m.unrotate(q));
    if (u.im > 0.0 && v.im > 0.0) || (u.im < 0.0 && v.im < 0.0) {
        return false;
    }
    if u.im == v.im {
        // both on the real axis
        return u.re.min(v.re) <= 0.0 && u.im == 0.0;
    }
    let s = u.im / (u.im - v.im);
    u.re + s * (v.re - u.re) <= 0.0
}

/// Pulls `seg` back by one period of `addr`.
pub fn pullback_segment(m: &ExpMap, addr: &ExternalAddress, seg: &RaySegment) -> Result<RaySegment> {
    if &seg.address != addr {
        return Err(Error::BranchMismatch(format!(
            "segment carries address {} but {} was requested",
            seg.address, addr
        )));
    }
    let k = addr.period();
    let mut pts = seg.points();
    for stage in (0..k).rev() {
        let j = addr.entry(stage);
        if let Some(i) = pts.windows(2).position(|w| crosses_cut(m, w[0], w[1])) {
            return Err(Error::BranchMismatch(format!(
                "chord {i} crosses the cut of branch {j} at stage {stage}"
            )));
        }
        for z in pts.iter_mut() {
            *z = m.inverse_branch(*z, j)?;
        }
    }
    let mut samples = Vec::with_capacity(pts.len());
    for (s, z) in seg.samples.iter().zip(pts) {
        let mut t = s.t;
        for _ in 0..k {
            t = t.ln_1p();
        }
        samples.push(RaySample { t, z });
    }
    let out = RaySegment::new(seg.lambda, addr.clone(), samples)?;
    let gap = (out.upper() - seg.lower()).norm();
    if gap > ENDPOINT_TOL * seg.lower().norm().max(1.0) {
        return Err(Error::BranchMismatch(format!(
            "pulled-back endpoint misses the previous lower endpoint by {gap:e}"
        )));
    }
    Ok(out)
}

/// `n` successive pullbacks.
pub fn pullback_times(m: &ExpMap, addr: &ExternalAddress, seg: &RaySegment, n: usize) -> Result<RaySegment> {
    let mut cur = seg.clone();
    for _ in 0..n {
        cur = pullback_segment(m, addr, &cur)?;
    }
    Ok(cur)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandingOptions {
    pub t0: f64,
    /// Target Euclidean diameter; endpoints must also come within `2·tol`
    /// of the refined landing point.
    pub tol: f64,
    pub max_pullbacks: usize,
    /// Initial samples of the fundamental segment.
    pub samples: usize,
    pub classify_tol: f64,
    /// Budget multiplier once decay looks sub-geometric.
    pub parabolic_factor: usize,
    /// Pullbacks excluded from the contraction check.
    pub settling: usize,
    pub postsingular_iter: usize,
    pub escape_radius: f64,
}

impl Default for LandingOptions {
    fn default() -> Self {
        LandingOptions {
            t0: 1.0,
            tol: 1e-10,
            max_pullbacks: 1000,
            samples: 16,
            classify_tol: 1e-6,
            parabolic_factor: 100,
            settling: 5,
            postsingular_iter: 1000,
            escape_radius: 1e6,
        }
    }
}

/// How the diameters decay: `d_{n+1}/d_n → rate`, or `d_n ~ n^{−rate}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Decay {
    Geometric { rate: f64 },
    Algebraic { rate: f64 },
}

/// Local log-log slope above which decay counts as geometric.
const GEOMETRIC_SLOPE: f64 = 8.0;

/// Reads the decay mode off the tail of the diameter sequence.
pub fn estimate_decay(diameters: &[f64]) -> Decay {
    let n = diameters.len();
    if n < 4 {
        let rate = if n >= 2 { diameters[n - 1] / diameters[n - 2] } else { f64::NAN };
        return Decay::Geometric { rate };
    }
    let (i, j) = (n / 2, n - 1);
    let slope = -(diameters[j] / diameters[i]).ln() / ((j + 1) as f64 / (i + 1) as f64).ln();
    if slope > GEOMETRIC_SLOPE {
        let tail = 5.min(n - 1);
        let rate = (diameters[j] / diameters[j - tail]).powf(1.0 / tail as f64);
        Decay::Geometric { rate }
    } else {
        Decay::Algebraic { rate: slope }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandingCertificate {
    #[serde(with = "complex")]
    pub lambda: Point,
    pub address: ExternalAddress,
    pub period: usize,
    #[serde(with = "complex")]
    pub w: Point,
    /// `|f^k(w) − w|`.
    pub residual: f64,
    #[serde(with = "complex")]
    pub multiplier: Point,
    pub classification: Classification,
    /// Euclidean diameter of the segment after each pullback (index 0 is
    /// the traced segment).
    pub diameters: Vec<f64>,
    /// Upper `diam*` bounds for the same segments.
    pub hyp_bounds: Vec<f64>,
    /// `hyp_bounds[n+1] / hyp_bounds[n]`.
    pub ratios: Vec<f64>,
    pub pullbacks_used: usize,
    pub surrogate_flags: Vec<String>,
    pub decay: Decay,
}

pub const FLAG_UPPER_DENSITY: &str = "hyp-bounds-upper-density";
pub const FLAG_SAMPLED_BOUNDARY: &str = "postsingular-sampled";
pub const FLAG_BUDGET_ENLARGED: &str = "budget-enlarged";
pub const FLAG_COCONVERGENCE_INCOMPLETE: &str = "co-convergence-incomplete";

/// [`land_ray_with`] with default options apart from the listed ones.
pub fn land_ray(
    m: &ExpMap,
    addr: &ExternalAddress,
    t0: f64,
    tol: f64,
    max_pullbacks: usize,
) -> Result<LandingCertificate> {
    let opts = LandingOptions {
        t0,
        tol,
        max_pullbacks,
        ..LandingOptions::default()
    };
    land_ray_with(m, addr, &opts)
}

/// Pulls back the fundamental segment at `t0` until its diameter is below
/// `tol` and both endpoints lie within `2·tol` of the refined periodic
/// point, then classifies that point.
///
/// Requires a certified bounded post-singular set. The budget grows by
/// `parabolic_factor` once if the diameter ratio exceeds 0.9 when the
/// budget runs out.
pub fn land_ray_with(m: &ExpMap, addr: &ExternalAddress, opts: &LandingOptions) -> Result<LandingCertificate> {
    if !(opts.tol > 0.0) {
        return Err(Error::Invalid(format!("tol = {} must be > 0", opts.tol)));
    }
    if !(opts.t0 > 0.0) {
        return Err(Error::Domain(format!("t0 = {} must be > 0", opts.t0)));
    }
    let ps = m.postsingular(opts.postsingular_iter, opts.escape_radius)?;
    match ps.status {
        Boundedness::Bounded => {}
        Boundedness::Unbounded => return Err(Error::Hypothesis("postsingular-unbounded")),
        Boundedness::Inconclusive => return Err(Error::Hypothesis("postsingular-inconclusive")),
    }
    let boundary = BoundarySamples::new(&ps.samples())?;
    let k = addr.period();

    let mut seg = fundamental_segment(m, addr, opts.t0, opts.samples)?;
    let mut diameters = Vec::new();
    let mut hyp_bounds: Vec<f64> = Vec::new();
    let mut ratios = Vec::new();
    let mut flags = vec![FLAG_UPPER_DENSITY.to_string(), FLAG_SAMPLED_BOUNDARY.to_string()];
    let mut budget = opts.max_pullbacks;
    let mut landing = None;
    let mut used = 0;
    let converged = loop {
        let diam = seg.diameter();
        let hb = diamstar_upper_indexed(&seg, &boundary)?.value;
        if let Some(&prev) = hyp_bounds.last() {
            let r = hb / prev;
            ratios.push(r);
            if used > opts.settling && !(r < 1.0) {
                return Err(Error::NonContraction { step: used, ratio: r });
            }
        }
        diameters.push(diam);
        hyp_bounds.push(hb);

        if diam < opts.tol {
            let pp = match landing {
                Some(pp) => pp,
                None => {
                    let pp = m.refine_periodic_point(k, seg.lower())?;
                    landing = Some(pp);
                    pp
                }
            };
            let near = |z: Point| (z - pp.w).norm() <= 2.0 * opts.tol;
            if near(seg.lower()) && near(seg.upper()) {
                break true;
            }
        }
        if used >= budget {
            let n = diameters.len();
            let slow = n >= 2 && diameters[n - 1] / diameters[n - 2] > 0.9;
            if budget == opts.max_pullbacks && slow && opts.parabolic_factor > 1 {
                budget = opts.max_pullbacks.saturating_mul(opts.parabolic_factor);
                flags.push(FLAG_BUDGET_ENLARGED.to_string());
            } else {
                break false;
            }
        }
        seg = pullback_segment(m, addr, &seg)?;
        used += 1;
    };

    let Some(pp) = landing else {
        return Err(Error::NonConvergence(format!(
            "segment diameter {:e} still above tol {:e} after {used} pullbacks",
            diameters.last().copied().unwrap_or(f64::NAN),
            opts.tol
        )));
    };
    if !converged {
        flags.push(FLAG_COCONVERGENCE_INCOMPLETE.to_string());
    }
    Ok(LandingCertificate {
        lambda: m.lambda(),
        address: addr.clone(),
        period: k,
        w: pp.w,
        residual: pp.residual,
        multiplier: pp.multiplier,
        classification: classify(pp.multiplier, opts.classify_tol),
        decay: estimate_decay(&diameters),
        diameters,
        hyp_bounds,
        ratios,
        pullbacks_used: used,
        surrogate_flags: flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn bisect_fixed_point(lam: f64, mut lo: f64, mut hi: f64) -> f64 {
        let h = |x: f64| x - lam * x.exp();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (h(mid) > 0.0) == (h(lo) > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(Point::new(2.542_64, 0.0), 1e-6), Classification::Repelling);
        assert_eq!(classify(Point::new(1.0, 0.0), 1e-6), Classification::Parabolic);
        let rot = Point::from_polar(1.0, 2.0 * PI / 3.0);
        assert_eq!(classify(rot, 1e-6), Classification::Parabolic);
        assert_eq!(classify(Point::new(0.26, 0.0), 1e-6), Classification::InvalidAttracting);
    }

    #[test]
    fn pullback_chains_endpoints() {
        let m = ExpMap::real(0.2).unwrap();
        let s = ExternalAddress::constant(0);
        let seg = fundamental_segment(&m, &s, 1.0, 16).unwrap();
        let back = pullback_segment(&m, &s, &seg).unwrap();
        assert!((back.t_lo() - 2f64.ln()).abs() < 1e-15);
        assert!((back.t_hi() - 1.0).abs() < 1e-15);
        assert!((back.upper() - seg.lower()).norm() < 1e-12);
    }

    #[test]
    fn pullback_composes() {
        let m = ExpMap::real(0.2).unwrap();
        let s = ExternalAddress::parse("0,1", 2).unwrap();
        let seg = fundamental_segment(&m, &s, 1.0, 12).unwrap();
        let twice = pullback_segment(&m, &s, &pullback_segment(&m, &s, &seg).unwrap()).unwrap();
        let direct = pullback_times(&m, &s, &seg, 2).unwrap();
        for (a, b) in twice.samples.iter().zip(&direct.samples) {
            assert!((a.z - b.z).norm() < 1e-12);
        }
        let mut manual = seg.points();
        for _ in 0..2 {
            for z in manual.iter_mut() {
                *z = m.inverse_branch(m.inverse_branch(*z, 1).unwrap(), 0).unwrap();
            }
        }
        for (a, b) in manual.iter().zip(&direct.samples) {
            assert!((a - b.z).norm() < 1e-12);
        }
    }

    #[test]
    fn pullback_rejects_wrong_address() {
        let m = ExpMap::real(0.2).unwrap();
        let seg = fundamental_segment(&m, &ExternalAddress::constant(0), 1.0, 4).unwrap();
        assert!(matches!(
            pullback_segment(&m, &ExternalAddress::constant(1), &seg),
            Err(Error::BranchMismatch(_))
        ));
    }

    #[test]
    fn cut_crossing_detected() {
        let m = ExpMap::real(0.2).unwrap();
        assert!(crosses_cut(&m, Point::new(-1.0, 0.5), Point::new(-1.0, -0.5)));
        assert!(!crosses_cut(&m, Point::new(1.0, 0.5), Point::new(1.0, -0.5)));
        assert!(!crosses_cut(&m, Point::new(-1.0, 0.5), Point::new(-2.0, 0.1)));
        let m = ExpMap::new(Point::new(0.0, 1.0)).unwrap();
        assert!(crosses_cut(&m, Point::new(0.5, -1.0), Point::new(-0.5, -1.0)));
    }

    #[test]
    fn hyp_bound_decreases_every_step() {
        let m = ExpMap::real(0.2).unwrap();
        let s = ExternalAddress::constant(0);
        let ps = m.postsingular(1000, 10.0).unwrap();
        let boundary = BoundarySamples::new(&ps.samples()).unwrap();
        let mut seg = fundamental_segment(&m, &s, 1.0, 16).unwrap();
        let mut prev = diamstar_upper_indexed(&seg, &boundary).unwrap().value;
        for _ in 0..20 {
            seg = pullback_segment(&m, &s, &seg).unwrap();
            let hb = diamstar_upper_indexed(&seg, &boundary).unwrap().value;
            assert!(hb < prev);
            prev = hb;
        }
    }

    #[test]
    fn lands_at_repelling_fixed_point() {
        let m = ExpMap::real(0.2).unwrap();
        let cert = land_ray(&m, &ExternalAddress::constant(0), 1.0, 1e-10, 1000).unwrap();
        let q = bisect_fixed_point(0.2, 1.0, 10.0);
        assert!((cert.w.re - q).abs() < 1e-10);
        assert!(cert.w.im.abs() < 1e-12);
        assert!((cert.multiplier - cert.w).norm() < 1e-9);
        assert_eq!(cert.classification, Classification::Repelling);
        assert!(cert.residual < 1e-12);
        assert!(cert.hyp_bounds.windows(2).all(|w| w[1] < w[0]));
        match cert.decay {
            Decay::Geometric { rate } => assert!((rate - 1.0 / q).abs() < 0.05),
            other => panic!("{other:?}"),
        }
        assert!(!cert.surrogate_flags.iter().any(|f| f == FLAG_COCONVERGENCE_INCOMPLETE));
    }

    #[test]
    fn parabolic_tight_tolerance_reports_incomplete() {
        let m = ExpMap::real(1.0 / E).unwrap();
        let opts = LandingOptions {
            tol: 1e-6,
            max_pullbacks: 200,
            parabolic_factor: 10,
            ..LandingOptions::default()
        };
        let cert = land_ray_with(&m, &ExternalAddress::constant(0), &opts).unwrap();
        assert!((cert.w.re - 1.0).abs() < 1e-6);
        assert_eq!(cert.classification, Classification::Parabolic);
        assert!(cert.surrogate_flags.iter().any(|f| f == FLAG_BUDGET_ENLARGED));
        assert!(cert.surrogate_flags.iter().any(|f| f == FLAG_COCONVERGENCE_INCOMPLETE));
        assert!(matches!(cert.decay, Decay::Algebraic { .. }));
    }

    #[test]
    fn unbounded_postsingular_rejected() {
        let m = ExpMap::real(3.0).unwrap();
        let err = land_ray(&m, &ExternalAddress::constant(0), 1.0, 1e-10, 100).unwrap_err();
        assert_eq!(err.reason(), "postsingular-unbounded");
    }

    #[test]
    fn decay_estimates() {
        let geo: Vec<f64> = (0..30).map(|n| 0.4f64.powi(n)).collect();
        assert!(matches!(estimate_decay(&geo), Decay::Geometric { rate } if (rate - 0.4).abs() < 1e-12));
        let alg: Vec<f64> = (1..2000).map(|n| 2.0 / (n as f64).powi(2)).collect();
        assert!(matches!(estimate_decay(&alg), Decay::Algebraic { rate } if (rate - 2.0).abs() < 1e-3));
    }
}
