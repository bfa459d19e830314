//! Property suites run by `raylander verify`.
//!
//! Every check is deterministic: random samples come from a fixed seed.

use std::f64::consts::{E, PI};
use std::str::FromStr;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::bounds::{
    distance_to_ladder, kappa_annulus, kappa_contraction, kappa_gap, puncture_ratio, BoundarySamples,
    PunctureLadder,
};
use crate::error::Error;
use crate::expfield::{ExpMap, OrbitCertificate};
use crate::hypgeo::{circle_length_punctured, path_length, ModelDomain};
use crate::landing::{land_ray, land_ray_with, Classification, Decay, LandingOptions};
use crate::rays::{
    diamstar_upper_indexed, fundamental_segment, m_surrogate, ray_model, trace_ray, ExternalAddress,
};
use crate::Point;

const SEED: u64 = 0x5eed_1a4d;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lemma22,
    Prop27,
    Lemma31,
    Lemma41,
    Landing,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [Suite::Lemma22, Suite::Prop27, Suite::Lemma31, Suite::Lemma41, Suite::Landing];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma22 => "lemma22",
            Suite::Prop27 => "prop27",
            Suite::Lemma31 => "lemma31",
            Suite::Lemma41 => "lemma41",
            Suite::Landing => "landing",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Suite::EACH
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

type Check = (&'static str, fn() -> Result<String, String>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

pub fn run(suite: Suite) -> VerifyReport {
    let suites: Vec<Suite> = match suite {
        Suite::All => Suite::EACH.to_vec(),
        s => vec![s],
    };
    let mut checks = Vec::new();
    for s in suites {
        for (name, f) in checks_for(s) {
            let start = Instant::now();
            let outcome = f();
            let seconds = start.elapsed().as_secs_f64();
            let (passed, detail) = match outcome {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            checks.push(CheckResult {
                suite: s,
                name: name.to_string(),
                passed,
                detail,
                seconds,
            });
        }
    }
    VerifyReport {
        suite,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn checks_for(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Lemma22 => vec![
            ("kappa-closed-form", kappa_closed_form),
            ("kappa-monotone-below-one", kappa_monotone),
            ("kappa-puncture-ratio-chain", kappa_chain),
            ("puncture-ratio-increasing", puncture_ratio_increasing),
            ("comparison-principle", comparison_principle),
            ("covering-isometry", covering_isometry),
            ("distance-below-path-length", distance_below_length),
            ("co-convergence", co_convergence),
            ("density-bounds-sandwich", density_sandwich),
        ],
        Suite::Prop27 => vec![
            ("ladder-delta", ladder_delta),
            ("ladder-distance-bounds", ladder_bounds),
            ("circle-lengths", circle_lengths),
            ("annulus-kappa", annulus_kappa),
        ],
        Suite::Lemma31 => vec![
            ("functional-equation", functional_equation),
            ("conjugation-symmetry", conjugation_symmetry),
            ("injective-potentials", injective_potentials),
            ("diamstar-nondecreasing", diamstar_nondecreasing),
            ("m-surrogate-nondecreasing", m_nondecreasing),
        ],
        Suite::Lemma41 => vec![
            ("tract-ladder-delta", tract_ladder),
            ("inverse-branch-identity", inverse_identity),
            ("singular-orbit-limit", singular_orbit_limit),
        ],
        Suite::Landing => vec![
            ("repelling-fixed-ray", landing_repelling),
            ("parabolic-fixed-ray", landing_parabolic),
            ("period-two-ray", landing_period_two),
            ("hypothesis-gate", hypothesis_gate),
        ],
        Suite::All => Suite::EACH.iter().flat_map(|&s| checks_for(s)).collect(),
    }
}

fn kappa_grid() -> impl Iterator<Item = f64> {
    (1..=10_000).map(|i| 30.0 * i as f64 / 10_001.0)
}

fn kappa_closed_form() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for d in [1e-3f64, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let oracle = d.sinh() * -(0.5 * d).tanh().ln();
        worst = worst.max((kappa_contraction(d).map_err(err)? - oracle).abs());
    }
    ensure(worst < 1e-12, || format!("max deviation {worst:e}"))?;
    let k0 = kappa_contraction(1e-12).map_err(err)?;
    ensure(k0 < 1e-10, || format!("kappa(1e-12) = {k0:e}"))?;
    Ok(format!("max deviation {worst:e}"))
}

fn kappa_monotone() -> Result<String, String> {
    let mut prev_k = 0.0;
    let mut prev_gap = 1.0;
    for d in kappa_grid() {
        let k = kappa_contraction(d).map_err(err)?;
        let gap = kappa_gap(d).map_err(err)?;
        ensure(k >= prev_k && k <= 1.0, || format!("kappa not monotone at d = {d}"))?;
        ensure(gap > 0.0 && gap < prev_gap, || format!("1 - kappa not decreasing at d = {d}"))?;
        prev_k = k;
        prev_gap = gap;
    }
    Ok("10000 grid points".into())
}

fn kappa_chain() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for d in kappa_grid().filter(|&d| d >= 1e-6) {
        let x = (0.5 * d).tanh();
        let lhs = kappa_contraction(d).map_err(err)?;
        let rhs = if x < 1.0 { puncture_ratio(x).map_err(err)? } else { 1.0 };
        worst = worst.max((lhs - rhs).abs());
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:e}"))
}

fn puncture_ratio_increasing() -> Result<String, String> {
    let mut prev = 0.0;
    for i in 1..10_000 {
        let x = i as f64 / 10_000.0;
        let r = puncture_ratio(x).map_err(err)?;
        ensure(r > prev && r < 1.0, || format!("puncture ratio fails at x = {x}"))?;
        prev = r;
    }
    Ok("9999 grid points".into())
}

fn random_disk_point(rng: &mut StdRng, r_min: f64, r_max: f64) -> Point {
    let r = rng.gen_range(r_min..r_max);
    Point::from_polar(r, rng.gen_range(-PI..PI))
}

fn comparison_principle() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(SEED);
    for _ in 0..1000 {
        let z = random_disk_point(&mut rng, 1e-6, 0.999);
        let outer = ModelDomain::UnitDisk.density(z).map_err(err)?;
        let inner = ModelDomain::PuncturedUnitDisk.density(z).map_err(err)?;
        ensure(inner > outer, || format!("comparison fails at {z}"))?;
    }
    Ok("1000 points".into())
}

fn covering_isometry() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(SEED + 1);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let w = Point::new(-rng.gen_range(0.01..20.0), rng.gen_range(-10.0..10.0));
        let z = w.exp();
        let lhs = ModelDomain::PuncturedUnitDisk.density(z).map_err(err)? * z.norm();
        worst = worst.max((lhs * w.re.abs() - 1.0).abs());
    }
    ensure(worst < 1e-12, || format!("max relative deviation {worst:e}"))?;
    Ok(format!("max relative deviation {worst:e}"))
}

fn distance_below_length() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(SEED + 2);
    for _ in 0..100 {
        let z = random_disk_point(&mut rng, 0.0, 0.9);
        let w = random_disk_point(&mut rng, 0.0, 0.9);
        let bend = Point::new(rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3));
        let ctrl = 0.5 * (z + w) + bend;
        // quadratic Bezier from z to w
        let curve = |s: f64| {
            let p = (1.0 - s) * (1.0 - s) * z + 2.0 * s * (1.0 - s) * ctrl + s * s * w;
            let dp = 2.0 * (1.0 - s) * (ctrl - z) + 2.0 * s * (w - ctrl);
            (p, dp)
        };
        if (0..=64).any(|i| curve(i as f64 / 64.0).0.norm() > 0.99) {
            continue;
        }
        let len = path_length(ModelDomain::UnitDisk, curve, 0.0, 1.0).map_err(err)?;
        let d = ModelDomain::UnitDisk.distance(z, w).map_err(err)?;
        ensure(d <= len * (1.0 + 1e-9), || format!("distance {d} exceeds path length {len}"))?;
    }
    let x = 0.5;
    let chord = path_length(ModelDomain::UnitDisk, |s| (Point::new(x * s, 0.0), Point::new(x, 0.0)), 0.0, 1.0)
        .map_err(err)?;
    ensure((chord - 3f64.ln()).abs() < 1e-8, || format!("geodesic length {chord}"))?;
    Ok("100 paths plus the diameter geodesic".into())
}

fn co_convergence() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(SEED + 3);
    for n in 1..=25 {
        let x = (-(n as f64)).exp();
        // any y with d(x, y) <= 1 has |log|y|| >= |log x| e^{-1}
        let eps = x.powf((-1.0f64).exp());
        for _ in 0..20 {
            let y = random_disk_point(&mut rng, (x * 1e-3).max(1e-13), (x * 1e3).min(0.999));
            if ModelDomain::PuncturedUnitDisk.distance(x.into(), y).map_err(err)? <= 1.0 {
                ensure(y.norm() <= eps * (1.0 + 1e-12), || format!("|y| = {} >= {eps} at n = {n}", y.norm()))?;
            }
        }
    }
    Ok("25 scales".into())
}

fn density_sandwich() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(SEED + 4);
    let circle: Vec<Point> = (0..256).map(|i| Point::from_polar(1.0, 2.0 * PI * i as f64 / 256.0)).collect();
    let mut punctured = circle.clone();
    punctured.push(Point::new(0.0, 0.0));
    let disk = BoundarySamples::new(&circle).map_err(err)?;
    let pdisk = BoundarySamples::new(&punctured).map_err(err)?;
    let line: Vec<Point> = (-2000..=2000).map(|i| Point::new(0.0, i as f64 * 0.01)).collect();
    let half = BoundarySamples::new(&line).map_err(err)?;
    for _ in 0..1000 {
        // the nearest boundary point of each model domain is a sample
        let i = rng.gen_range(0..256);
        let r = rng.gen_range(0.05..0.95);
        let z = Point::from_polar(r, 2.0 * PI * i as f64 / 256.0);
        let exact = ModelDomain::UnitDisk.density(z).map_err(err)?;
        let b = disk.density_bounds(z).map_err(err)?;
        ensure(b.lo <= exact && exact <= b.hi, || format!("disk bounds fail at {z}"))?;
        let exact = ModelDomain::PuncturedUnitDisk.density(z).map_err(err)?;
        let b = pdisk.density_bounds(z).map_err(err)?;
        ensure(b.lo <= exact && exact <= b.hi, || format!("punctured bounds fail at {z}"))?;
        let z = Point::new(rng.gen_range(0.01..1.0), rng.gen_range(-1000..=1000) as f64 * 0.01);
        let exact = ModelDomain::RightHalfPlane.density(z).map_err(err)?;
        let b = half.density_bounds(z).map_err(err)?;
        ensure(b.lo <= exact && exact <= b.hi, || format!("half-plane bounds fail at {z}"))?;
    }
    Ok("3000 points".into())
}

fn ladder_delta() -> Result<String, String> {
    let ladder = PunctureLadder::exponential(8).map_err(err)?;
    let dev = (ladder.delta() - 2f64.ln()).abs();
    ensure(dev < 1e-9, || format!("delta off by {dev:e}"))?;
    Ok(format!("delta = {}", ladder.delta()))
}

fn ladder_bounds() -> Result<String, String> {
    let ladder = PunctureLadder::exponential(10).map_err(err)?;
    let mut rng = StdRng::seed_from_u64(SEED + 5);
    let top = ladder.radii()[0];
    let bottom = *ladder.radii().last().unwrap();
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let r = (rng.gen_range(bottom.ln()..top.ln())).exp();
        let z = Point::from_polar(r, rng.gen_range(-PI..PI));
        let ld = distance_to_ladder(z, &ladder).map_err(err)?;
        worst = worst.max(ld.distance - ld.bound);
        ensure(ld.distance <= ld.bound + 1e-9, || format!("bound fails at {z}"))?;
    }
    Ok(format!("max distance - bound = {worst}"))
}

fn circle_lengths() -> Result<String, String> {
    for r in [(-2.0 * PI).exp(), (-PI).exp(), 1e-30, 0.5, 0.999] {
        let l = circle_length_punctured(r).map_err(err)?;
        ensure(l == -2.0 * PI / r.ln(), || format!("circle length at r = {r}"))?;
    }
    let r = (-PI).exp();
    let half = path_length(
        ModelDomain::PuncturedUnitDisk,
        |s| (Point::from_polar(r, s), Point::from_polar(r, s + PI / 2.0)),
        0.0,
        PI,
    )
    .map_err(err)?;
    ensure((half - 1.0).abs() < 1e-10, || format!("half circle length {half}"))?;
    Ok("5 radii plus quadrature".into())
}

fn annulus_kappa() -> Result<String, String> {
    for (r, delta, d) in [((-PI).exp(), 0.0, 1.0), ((-PI).exp(), 1.0, 2.0), ((-2.0 * PI).exp(), 0.0, 0.5)] {
        let b = kappa_annulus(r, delta).map_err(err)?;
        ensure((b.d - d).abs() < 1e-14 && b.kappa < 1.0, || format!("annulus at r = {r}"))?;
        ensure(b.kappa == kappa_contraction(d).map_err(err)?, || "kappa mismatch".into())?;
    }
    Ok("3 cases".into())
}

fn lam02() -> ExpMap {
    ExpMap::real(0.2).expect("valid lambda")
}

fn functional_equation() -> Result<String, String> {
    let m = lam02();
    let mut rng = StdRng::seed_from_u64(SEED + 6);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let k = rng.gen_range(1..=3);
        let entries: Vec<i64> = (0..k).map(|_| rng.gen_range(-2..=2)).collect();
        let addr = ExternalAddress::new(entries, k).map_err(err)?;
        let t = rng.gen_range(0.2..2.0);
        let mut z = trace_ray(&m, &addr, t, None, 1e-12).map_err(err)?;
        for _ in 0..k {
            z = m.apply(z).map_err(err)?;
        }
        let tk = ray_model(t, k as i64).map_err(err)?;
        let target = trace_ray(&m, &addr, tk, None, 1e-12).map_err(err)?;
        let dev = (z - target).norm() / target.norm().max(1.0);
        worst = worst.max(dev);
        ensure(dev < 1e-8, || format!("deviation {dev:e} for {addr} at t = {t}"))?;
    }
    Ok(format!("max relative deviation {worst:e}"))
}

fn conjugation_symmetry() -> Result<String, String> {
    let m = lam02();
    let mut rng = StdRng::seed_from_u64(SEED + 7);
    for _ in 0..20 {
        let k = rng.gen_range(1..=3);
        let entries: Vec<i64> = (0..k).map(|_| rng.gen_range(-3..=3)).collect();
        let addr = ExternalAddress::new(entries, k).map_err(err)?;
        let t = rng.gen_range(0.2..3.0);
        let z = trace_ray(&m, &addr, t, None, 1e-12).map_err(err)?;
        let w = trace_ray(&m, &addr.conjugate(), t, None, 1e-12).map_err(err)?;
        ensure((z - w.conj()).norm() < 1e-10, || format!("asymmetry for {addr} at t = {t}"))?;
    }
    Ok("20 cases".into())
}

fn injective_potentials() -> Result<String, String> {
    let m = lam02();
    for text in ["0", "1", "0,1", "-1,2,0"] {
        let addr = ExternalAddress::parse(text, text.split(',').count()).map_err(err)?;
        let seg = fundamental_segment(&m, &addr, 0.5, 32).map_err(err)?;
        let pts = seg.points();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                ensure(pts[i] != pts[j], || format!("repeated point on {addr}"))?;
            }
        }
    }
    Ok("4 rays".into())
}

fn postsingular_boundary(m: &ExpMap) -> Result<BoundarySamples, String> {
    let ps = m.postsingular(1000, 1e6).map_err(err)?;
    BoundarySamples::new(&ps.samples()).map_err(err)
}

fn diamstar_nondecreasing() -> Result<String, String> {
    let m = lam02();
    let boundary = postsingular_boundary(&m)?;
    let addr = ExternalAddress::constant(0);
    let mut prev = 0.0;
    let mut vals = Vec::new();
    for t in [0.5, 1.0, 2.0] {
        let seg = fundamental_segment(&m, &addr, t, 16).map_err(err)?;
        let v = diamstar_upper_indexed(&seg, &boundary).map_err(err)?.value;
        ensure(v.is_finite() && v >= prev, || format!("diam* bound {v} at t = {t}"))?;
        prev = v;
        vals.push(v);
    }
    Ok(format!("surrogate values {vals:?}"))
}

fn m_nondecreasing() -> Result<String, String> {
    let m = lam02();
    let boundary = postsingular_boundary(&m)?;
    let addr = ExternalAddress::constant(0);
    let mut prev = 0.0;
    let mut vals = Vec::new();
    for t in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let v = m_surrogate(&m, &addr, t, 6, &boundary).map_err(err)?.value;
        ensure(v >= prev, || format!("M surrogate drops at t = {t}: {v} < {prev}"))?;
        prev = v;
        vals.push(v);
    }
    Ok(format!("surrogate values {vals:?}"))
}

fn tract_ladder() -> Result<String, String> {
    let m = lam02();
    let ladder = m.preimage_ladder(Point::new(3.0, 0.0), 0..=10, 1.0).map_err(err)?;
    let a = 3f64.ln();
    let expected = (1.0 + 2.0 * PI * PI / (a * a)).acosh();
    ensure((ladder.delta - expected).abs() < 1e-12, || format!("delta {}", ladder.delta))?;
    for (j, w) in ladder.points.iter().enumerate() {
        let target = Point::new(15f64.ln(), 2.0 * PI * j as f64);
        ensure((w - target).norm() < 1e-12, || format!("ladder point {j} = {w}"))?;
    }
    // the geodesic between a and a + 2πi in the right half-plane is an arc
    // of the circle centred at iπ through both points
    let (c, rho) = (Point::new(0.0, PI), (a * a + PI * PI).sqrt());
    let phi = (PI / a).atan();
    let len = path_length(
        ModelDomain::RightHalfPlane,
        |s| (c + Point::from_polar(rho, s), Point::from_polar(rho, s + PI / 2.0)),
        -phi,
        phi,
    )
    .map_err(err)?;
    ensure((len - expected).abs() < 1e-9, || format!("geodesic length {len}"))?;
    Ok(format!("delta = {}", ladder.delta))
}

fn inverse_identity() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(SEED + 8);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let lam = Point::from_polar(rng.gen_range(0.01..3.0), rng.gen_range(-PI..PI));
        let m = ExpMap::new(lam).map_err(err)?;
        let w = Point::from_polar(10f64.powf(rng.gen_range(-6.0..6.0)), rng.gen_range(-PI..PI));
        let j = rng.gen_range(-50..=50);
        let back = m.apply(m.inverse_branch(w, j).map_err(err)?).map_err(err)?;
        let dev = (back - w).norm() / w.norm();
        worst = worst.max(dev);
        ensure(dev < 1e-13, || format!("relative deviation {dev:e} at w = {w}, j = {j}"))?;
    }
    Ok(format!("max relative deviation {worst:e}"))
}

fn singular_orbit_limit() -> Result<String, String> {
    for lam in [0.05, 0.1, 0.2, 0.3, 0.35] {
        let m = ExpMap::real(lam).map_err(err)?;
        let ps = m.postsingular(1000, 1e6).map_err(err)?;
        ensure(ps.bounded, || format!("orbit not certified bounded for lambda = {lam}"))?;
        let (q_minus, _) = m.real_fixed_points().map_err(err)?;
        let limit = match &ps.certificate {
            OrbitCertificate::Attracting { cycle, .. } => cycle[0],
            other => return Err(format!("unexpected certificate {other:?} for lambda = {lam}")),
        };
        ensure((limit.re - q_minus).abs() < 1e-10, || format!("orbit limit {limit} vs {q_minus}"))?;
        let last = *ps.orbit.last().unwrap();
        ensure((last - limit).norm() < 1e-8, || format!("orbit stopped at {last}, limit {limit}"))?;
    }
    Ok("5 parameters".into())
}

fn landing_repelling() -> Result<String, String> {
    let m = lam02();
    let cert = land_ray(&m, &ExternalAddress::constant(0), 1.0, 1e-10, 1000).map_err(err)?;
    let (_, q_plus) = m.real_fixed_points().map_err(err)?;
    ensure((cert.w.re - q_plus).abs() < 1e-8, || format!("w = {}", cert.w))?;
    ensure(cert.classification == Classification::Repelling, || "not repelling".into())?;
    ensure(cert.hyp_bounds.windows(2).all(|w| w[1] < w[0]), || "bounds not decreasing".into())?;
    match cert.decay {
        Decay::Geometric { rate } if (rate - 1.0 / q_plus).abs() < 0.05 => {}
        d => return Err(format!("decay {d:?}")),
    }
    Ok(format!("w = {} after {} pullbacks", cert.w, cert.pullbacks_used))
}

fn landing_parabolic() -> Result<String, String> {
    let m = ExpMap::real(1.0 / E).map_err(err)?;
    let opts = LandingOptions {
        tol: 1e-4,
        ..LandingOptions::default()
    };
    let cert = land_ray_with(&m, &ExternalAddress::constant(0), &opts).map_err(err)?;
    ensure((cert.w - 1.0).norm() < 1e-4, || format!("w = {}", cert.w))?;
    ensure((cert.multiplier - 1.0).norm() < 1e-4, || format!("multiplier {}", cert.multiplier))?;
    ensure(cert.classification == Classification::Parabolic, || "not parabolic".into())?;
    ensure(matches!(cert.decay, Decay::Algebraic { .. }), || format!("decay {:?}", cert.decay))?;
    Ok(format!("{} pullbacks, decay {:?}", cert.pullbacks_used, cert.decay))
}

fn landing_period_two() -> Result<String, String> {
    let m = lam02();
    let addr = ExternalAddress::parse("0,1", 2).map_err(err)?;
    let mut ws = Vec::new();
    for t0 in [0.5, 0.8, 1.0, 1.3, 1.7] {
        let cert = land_ray(&m, &addr, t0, 1e-10, 1000).map_err(err)?;
        let w = cert.w;
        let f2 = m.apply(m.apply(w).map_err(err)?).map_err(err)?;
        ensure((f2 - w).norm() < 1e-10, || format!("f^2 residual at t0 = {t0}"))?;
        ensure((m.apply(w).map_err(err)? - w).norm() > 1e-3, || "landing point is fixed".into())?;
        ensure(cert.multiplier.norm() > 1.0, || "multiplier not repelling".into())?;
        ws.push(w);
    }
    let spread = ws.iter().map(|w| (w - ws[0]).norm()).fold(0.0, f64::max);
    ensure(spread < 1e-8, || format!("landing points spread {spread:e}"))?;
    Ok(format!("w = {}", ws[0]))
}

fn hypothesis_gate() -> Result<String, String> {
    let m = ExpMap::real(3.0).map_err(err)?;
    let ps = m.postsingular(100, 1e6).map_err(err)?;
    ensure(!ps.bounded, || "orbit of 0 for lambda = 3 not flagged unbounded".into())?;
    match land_ray(&m, &ExternalAddress::constant(0), 1.0, 1e-10, 100) {
        Err(Error::Hypothesis(code)) => Ok(format!("rejected: {code}")),
        other => Err(format!("expected a hypothesis rejection, got {other:?}")),
    }
}
