//! Contraction estimates for hyperbolic densities.
//!
//! For hyperbolic domains `V ⊂ U` and `z ∈ V` with `d = d_U(z, ∂V)`, the
//! density ratio is bounded by
//!
//! ```text
//! λ_U(z) / λ_V(z) ≤ κ(d) = −(e^{2d} − 1)/(2e^d) · log((e^d − 1)/(e^d + 1))
//!                        = sinh(d) · (−log tanh(d/2))
//! ```
//!
//! with `κ(0) = 0`. A sequence of punctures `w_n → 0` in `D*` with
//! consecutive distances at most `δ` keeps every point within
//! `δ + π/|log r_n|` of the punctures, which turns into a uniform `κ < 1`.
//!
//! The module also provides two-sided density bounds for domains known only
//! through boundary samples. Constants:
//!
//! | bound | formula | constant |
//! |-------|---------|----------|
//! | upper | `2 / dist(z, S)` (inscribed disk) | — |
//! | lower | `1 / (ρ(|log ρ| + C0)) / |b − a|`, `ρ = |z − a|/|b − a|` | `C0 = Γ(1/4)⁴/(4π²)` |
//!
//! The lower bound is the sharp twice-punctured-plane estimate applied to a
//! pair `a, b ∈ S`. Both bounds refer to `C ∖ S`; they bracket the density
//! of a domain `Ω` when `S ⊂ ∂Ω` contains the boundary point nearest to `z`.
//! These are diagnostics only.

use std::cmp::Ordering;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypgeo::{punctured_distance, ModelDomain};
use crate::Point;

/// Below this `d`, `κ` is evaluated from its expansion at zero.
pub const KAPPA_SERIES_THRESHOLD: f64 = 1e-6;

/// `Γ(1/4)⁴ / (4π²)`.
pub const HEMPEL_CONSTANT: f64 = 4.376_879_230_452_953;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Single-boundary-distance estimate `κ(d)`.
    Lemma22,
    /// Puncture-ladder estimate with `d = δ + π/|log r_n|`.
    Prop27,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaBound {
    pub d: f64,
    pub kappa: f64,
    /// `1 − κ`, computed without cancellation.
    pub one_minus_kappa: f64,
    pub provenance: Provenance,
}

impl KappaBound {
    pub fn from_distance(d: f64, provenance: Provenance) -> Result<Self> {
        Ok(KappaBound {
            d,
            kappa: kappa_contraction(d)?,
            one_minus_kappa: kappa_gap(d)?,
            provenance,
        })
    }
}

fn check_distance(d: f64) -> Result<()> {
    if d.is_nan() || d < 0.0 {
        return Err(Error::Domain(format!("distance d = {d} must be >= 0")));
    }
    if d.is_infinite() {
        return Err(Error::Domain("distance d must be finite".into()));
    }
    Ok(())
}

/// `κ(d)`, the density-ratio bound at hyperbolic distance `d` from the
/// smaller domain's boundary.
///
/// In `f64` the value rounds to exactly `1.0` once `1 − κ ≈ (2/3)e^{−2d}`
/// drops below half an ulp (`d ≳ 18.4`); use [`kappa_gap`] there.
pub fn kappa_contraction(d: f64) -> Result<f64> {
    check_distance(d)?;
    if d == 0.0 {
        return Ok(0.0);
    }
    if d < KAPPA_SERIES_THRESHOLD {
        // sinh d ≈ d + d³/6, −log tanh(d/2) ≈ −log(d/2) + d²/12
        return Ok((d + d * d * d / 6.0) * (-(0.5 * d).ln() + d * d / 12.0));
    }
    if d >= 1.0 {
        // rounding 1 − g is monotone in g, so κ stays monotone in f64
        return Ok(1.0 - gap_series(d));
    }
    let ed = d.exp();
    let em1 = d.exp_m1();
    // (e^{2d} − 1)/(2e^d) written as (e^d − 1)(e^d + 1)/(2e^d)
    let prefactor = em1 * (ed + 1.0) / (2.0 * ed);
    let log_ratio = (em1 / (em1 + 2.0)).ln();
    Ok(-prefactor * log_ratio)
}

/// `1 − κ(d)` without cancellation.
///
/// For `d ≥ 1` uses `1 − κ(d) = Σ_{j≥1} 2u^{2j}/(4j² − 1)` with `u = e^{−d}`.
pub fn kappa_gap(d: f64) -> Result<f64> {
    check_distance(d)?;
    if d < 1.0 {
        return Ok(1.0 - kappa_contraction(d)?);
    }
    Ok(gap_series(d))
}

fn gap_series(d: f64) -> f64 {
    let u2 = (-2.0 * d).exp();
    let mut power = u2;
    let mut sum = 0.0;
    for j in 1..200 {
        let jf = j as f64;
        let term = 2.0 * power / (4.0 * jf * jf - 1.0);
        sum += term;
        if term <= 1e-18 * sum {
            break;
        }
        power *= u2;
    }
    sum
}

pub fn kappa_bound(d: f64) -> Result<KappaBound> {
    KappaBound::from_distance(d, Provenance::Lemma22)
}

/// `λ_D(−x) / λ_{D*}(−x) = −2x log x / (1 − x²)` for `0 < x < 1`.
pub fn puncture_ratio(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!("x = {x} not in (0, 1)")));
    }
    if x <= 0.5 {
        return Ok(-2.0 * x * x.ln() / ((1.0 - x) * (1.0 + x)));
    }
    // 1 − x is exact here
    let y = 1.0 - x;
    Ok(-2.0 * x * (-y).ln_1p() / (y * (1.0 + x)))
}

/// `κ` for a point between two rungs of a puncture ladder:
/// `d = δ + π/|log r_n|`, equivalently `δ − π/log r_n`.
pub fn kappa_annulus(r_n: f64, delta: f64) -> Result<KappaBound> {
    if !(r_n > 0.0 && r_n < 1.0) {
        return Err(Error::Domain(format!("rung radius {r_n} not in (0, 1)")));
    }
    if delta.is_nan() || delta < 0.0 || delta.is_infinite() {
        return Err(Error::Domain(format!("delta = {delta} must be finite and >= 0")));
    }
    let d = delta + PI / r_n.ln().abs();
    KappaBound::from_distance(d, Provenance::Prop27)
}

/// A sequence of punctures `w_n` in `D*` with strictly decreasing moduli.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PunctureLadder {
    radii: Vec<f64>,
    #[serde(with = "crate::output::complex_vec")]
    points: Vec<Point>,
    delta: f64,
}

impl PunctureLadder {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Invalid("empty puncture ladder".into()));
        }
        for &p in &points {
            ModelDomain::PuncturedUnitDisk.check(p)?;
        }
        let radii: Vec<f64> = points.iter().map(|p| p.norm()).collect();
        if let Some(i) = radii.windows(2).position(|w| w[1] >= w[0]) {
            return Err(Error::Invalid(format!(
                "ladder radii must strictly decrease (index {})",
                i + 1
            )));
        }
        let mut delta: f64 = 0.0;
        for w in points.windows(2) {
            delta = delta.max(punctured_distance(w[0], w[1])?.distance);
        }
        Ok(PunctureLadder {
            radii,
            points,
            delta,
        })
    }

    /// Ladder `r_n = e^{−πn}` on the positive real axis, `n = 1..=rungs`.
    pub fn exponential(rungs: usize) -> Result<Self> {
        Self::new(
            (1..=rungs)
                .map(|n| Point::new((-PI * n as f64).exp(), 0.0))
                .collect(),
        )
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Largest distance between consecutive punctures.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Index of the smallest radius that is `>= r`.
    fn rung_above(&self, r: f64) -> Option<usize> {
        let slack = 1e-12 * r;
        self.radii.iter().rposition(|&rn| rn >= r - slack)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderDistance {
    /// Exact `D*` distance to the nearest puncture.
    pub distance: f64,
    /// Index of the nearest puncture.
    pub nearest: usize,
    /// Index of the smallest ladder radius `>= |z|`.
    pub rung: usize,
    /// `δ + π/|log r_rung|`.
    pub bound: f64,
}

/// Distance from `z` to the ladder, with the bound it must satisfy.
pub fn distance_to_ladder(z: Point, ladder: &PunctureLadder) -> Result<LadderDistance> {
    if ladder.points.is_empty() {
        return Err(Error::Invalid("empty puncture ladder".into()));
    }
    ModelDomain::PuncturedUnitDisk.check(z)?;
    let r = z.norm();
    let top = ladder.radii[0];
    let bottom = *ladder.radii.last().unwrap();
    if r > top * (1.0 + 1e-12) {
        return Err(Error::Domain(format!("|z| = {r} above the first rung {top}")));
    }
    if r < bottom * (1.0 - 1e-12) {
        return Err(Error::Domain(format!("|z| = {r} below the last rung {bottom}")));
    }
    let rung = ladder.rung_above(r).unwrap_or(0);
    let mut best = (f64::INFINITY, 0);
    for (i, &w) in ladder.points.iter().enumerate() {
        let d = punctured_distance(z, w)?.distance;
        if d < best.0 {
            best = (d, i);
        }
    }
    let bound = ladder.delta + PI / ladder.radii[rung].ln().abs();
    Ok(LadderDistance {
        distance: best.0,
        nearest: best.1,
        rung,
        bound,
    })
}

/// `κ` valid on `{r_last <= |z| <= radius}` for the given ladder.
pub fn ladder_kappa(ladder: &PunctureLadder, radius: f64) -> Result<KappaBound> {
    let top = ladder.radii[0];
    if !(radius > 0.0 && radius <= top * (1.0 + 1e-12)) {
        return Err(Error::Domain(format!(
            "neighbourhood radius {radius} not in (0, {top}]"
        )));
    }
    let rung = ladder.rung_above(radius).unwrap_or(0);
    kappa_annulus(ladder.radii[rung], ladder.delta)
}

/// Finite sample of a boundary, indexed for nearest-point queries.
#[derive(Debug, Clone)]
pub struct BoundarySamples {
    /// Sorted by real part.
    points: Vec<Point>,
    hull: Vec<Point>,
}

impl BoundarySamples {
    pub fn new(samples: &[Point]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Invalid("empty boundary sample set".into()));
        }
        if samples.iter().any(|p| !(p.re.is_finite() && p.im.is_finite())) {
            return Err(Error::Invalid("non-finite boundary sample".into()));
        }
        let mut points = samples.to_vec();
        points.sort_by(|a, b| cmp_point(*a, *b));
        points.dedup();
        let hull = convex_hull(&points);
        Ok(BoundarySamples { points, hull })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Convex hull vertices, counter-clockwise. One or two vertices when the
    /// samples are a point or collinear.
    pub fn hull(&self) -> &[Point] {
        &self.hull
    }

    /// Nearest sample and its distance.
    pub fn nearest(&self, z: Point) -> (Point, f64) {
        let start = self.points.partition_point(|p| p.re < z.re);
        let mut best = (self.points[start.min(self.points.len() - 1)], f64::INFINITY);
        best.1 = (best.0 - z).norm();
        for p in self.points[start..].iter() {
            if p.re - z.re >= best.1 {
                break;
            }
            let d = (p - z).norm();
            if d < best.1 {
                best = (*p, d);
            }
        }
        for p in self.points[..start].iter().rev() {
            if z.re - p.re >= best.1 {
                break;
            }
            let d = (p - z).norm();
            if d < best.1 {
                best = (*p, d);
            }
        }
        best
    }

    /// `2 / dist(z, S)`.
    pub fn upper_density(&self, z: Point) -> f64 {
        2.0 / self.nearest(z).1
    }

    /// Twice-punctured-plane lower bound using the nearest sample and each
    /// partner in `partners`.
    pub fn lower_density_with(&self, z: Point, partners: &[Point]) -> f64 {
        let (a, _) = self.nearest(z);
        let mut lo: f64 = 0.0;
        for &b in partners {
            let span = (b - a).norm();
            if span == 0.0 {
                continue;
            }
            let rho_a = (z - a).norm() / span;
            let rho_b = (z - b).norm() / span;
            lo = lo.max(hempel(rho_a).max(hempel(rho_b)) / span);
        }
        lo
    }

    pub fn density_bounds(&self, z: Point) -> Result<DensityBounds> {
        let (_, dist) = self.nearest(z);
        if dist == 0.0 {
            return Err(Error::Invalid("z coincides with a boundary sample".into()));
        }
        let hi = 2.0 / dist;
        let lo = self.lower_density_with(z, &self.points);
        Ok(DensityBounds { lo, hi })
    }

    pub fn contains_in_hull(&self, z: Point) -> bool {
        match self.hull.len() {
            1 => self.hull[0] == z,
            2 => point_on_segment(z, self.hull[0], self.hull[1]),
            _ => {
                let n = self.hull.len();
                (0..n).all(|i| orient(self.hull[i], self.hull[(i + 1) % n], z) >= 0.0)
            }
        }
    }

    /// Whether the closed segment `pq` meets the convex hull.
    pub fn segment_meets_hull(&self, p: Point, q: Point) -> bool {
        if self.contains_in_hull(p) || self.contains_in_hull(q) {
            return true;
        }
        match self.hull.len() {
            1 => point_on_segment(self.hull[0], p, q),
            2 => segments_intersect(p, q, self.hull[0], self.hull[1]),
            n => (0..n).any(|i| segments_intersect(p, q, self.hull[i], self.hull[(i + 1) % n])),
        }
    }
}

fn hempel(rho: f64) -> f64 {
    if rho == 0.0 {
        return 0.0;
    }
    1.0 / (rho * (rho.ln().abs() + HEMPEL_CONSTANT))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityBounds {
    pub lo: f64,
    pub hi: f64,
}

/// Two-sided bounds on the hyperbolic density of `C ∖ samples` at `z`.
pub fn density_bounds(z: Point, boundary_samples: &[Point]) -> Result<DensityBounds> {
    BoundarySamples::new(boundary_samples)?.density_bounds(z)
}

fn cmp_point(a: Point, b: Point) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.re - a.re) * (c.im - a.im) - (b.im - a.im) * (c.re - a.re)
}

fn point_on_segment(z: Point, a: Point, b: Point) -> bool {
    orient(a, b, z) == 0.0
        && z.re >= a.re.min(b.re)
        && z.re <= a.re.max(b.re)
        && z.im >= a.im.min(b.im)
        && z.im <= a.im.max(b.im)
}

fn segments_intersect(p: Point, q: Point, a: Point, b: Point) -> bool {
    let d1 = orient(a, b, p);
    let d2 = orient(a, b, q);
    let d3 = orient(p, q, a);
    let d4 = orient(p, q, b);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    point_on_segment(p, a, b)
        || point_on_segment(q, a, b)
        || point_on_segment(a, p, q)
        || point_on_segment(b, p, q)
}

/// Andrew's monotone chain on points sorted by `(re, im)`.
fn convex_hull(sorted: &[Point]) -> Vec<Point> {
    if sorted.len() < 3 {
        return sorted.to_vec();
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in sorted {
        while lower.len() >= 2 && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in sorted.iter().rev() {
        while upper.len() >= 2 && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && lower[0] == lower[1] {
        lower.truncate(1);
    }
    lower
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    // Independent route: sinh(d) * (−log tanh(d/2)).
    fn kappa_oracle(d: f64) -> f64 {
        d.sinh() * -(0.5 * d).tanh().ln()
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa_contraction(0.0).unwrap(), 0.0);
        // values from 30-digit evaluation of the closed form
        assert!((kappa_contraction(1.0).unwrap() - 0.907_181_087_447_929_8).abs() < 1e-14);
        assert!((kappa_contraction(0.1).unwrap() - 0.300_156_189_405_176_5).abs() < 1e-14);
        assert!((kappa_contraction(0.5).unwrap() - 0.733_092_046_805_644_7).abs() < 1e-14);
        assert!((kappa_contraction(2.0).unwrap() - 0.987_744_491_011_221_6).abs() < 1e-14);
        let k10 = kappa_contraction(10.0).unwrap();
        assert!(k10 < 1.0);
        let g10 = kappa_gap(10.0).unwrap();
        assert!((g10 - 1.374_102_415_525_485_8e-9).abs() < 1e-22);
        for &d in &[1e-3, 0.3, 1.0, 3.0, 7.0] {
            assert!((kappa_contraction(d).unwrap() - kappa_oracle(d)).abs() < 1e-13);
        }
    }

    #[test]
    fn kappa_series_matches_closed_form_at_threshold() {
        for &d in &[KAPPA_SERIES_THRESHOLD * 0.999_999, KAPPA_SERIES_THRESHOLD * 1.000_001] {
            let k = kappa_contraction(d).unwrap();
            assert!((k - kappa_oracle(d)).abs() < 1e-12 * k);
        }
        assert!(kappa_contraction(1e-12).unwrap() < 1e-10);
    }

    #[test]
    fn kappa_gap_is_continuous_at_one() {
        let a = 1.0 - kappa_contraction(1.0 - 1e-12).unwrap();
        let b = kappa_gap(1.0).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn kappa_rejects_negative() {
        assert!(kappa_contraction(-1e-3).is_err());
        assert!(kappa_contraction(f64::NAN).is_err());
    }

    #[test]
    fn puncture_ratio_examples() {
        assert!((puncture_ratio(0.5).unwrap() - 0.924_196_240_746_593_7).abs() < 1e-15);
        assert!((puncture_ratio(1.0 / E).unwrap() - 0.850_918_128_239_321_5).abs() < 1e-15);
        assert!(puncture_ratio(1e-12).unwrap() < 1e-10);
        assert!(puncture_ratio(0.0).is_err());
        assert!(puncture_ratio(1.0).is_err());
    }

    #[test]
    fn annulus_examples() {
        let b = kappa_annulus((-PI).exp(), 0.0).unwrap();
        assert!((b.d - 1.0).abs() < 1e-15);
        assert!((b.kappa - 0.907_181_087_447_929_8).abs() < 1e-13);
        assert_eq!(b.provenance, Provenance::Prop27);
        let b = kappa_annulus((-PI).exp(), 1.0).unwrap();
        assert!((b.d - 2.0).abs() < 1e-15);
        assert!((b.kappa - 0.987_744_491_011_221_6).abs() < 1e-13);
        let b = kappa_annulus((-2.0 * PI).exp(), 0.0).unwrap();
        assert!((b.d - 0.5).abs() < 1e-15);
        assert!((b.kappa - 0.733_092_046_805_644_7).abs() < 1e-13);
        assert!(kappa_annulus(1.0, 0.0).is_err());
        assert!(kappa_annulus(0.5, -1.0).is_err());
    }

    #[test]
    fn ladder_examples() {
        let ladder = PunctureLadder::exponential(6).unwrap();
        assert!((ladder.delta() - 2f64.ln()).abs() < 1e-12);

        let z = Point::new(-(-PI).exp(), 0.0);
        let ld = distance_to_ladder(z, &ladder).unwrap();
        assert!((ld.distance - 0.962_423_650_119_206_9).abs() < 1e-12);
        assert!((ld.bound - (2f64.ln() + 1.0)).abs() < 1e-12);
        assert!(ld.distance <= ld.bound);

        let z = Point::new((-1.5 * PI).exp(), 0.0);
        let ld = distance_to_ladder(z, &ladder).unwrap();
        assert!((ld.distance - (4.0f64 / 3.0).ln()).abs() < 1e-12);
        assert_eq!(ld.nearest, 1);
        assert!(ld.distance <= ld.bound);

        let z = ladder.points()[2];
        assert_eq!(distance_to_ladder(z, &ladder).unwrap().distance, 0.0);
    }

    #[test]
    fn ladder_range_errors() {
        let ladder = PunctureLadder::exponential(3).unwrap();
        assert!(distance_to_ladder(Point::new(0.5, 0.0), &ladder).is_err());
        assert!(distance_to_ladder(Point::new(1e-6, 0.0), &ladder).is_err());
        assert!(PunctureLadder::new(vec![]).is_err());
        assert!(PunctureLadder::new(vec![Point::new(0.1, 0.0), Point::new(0.2, 0.0)]).is_err());
    }

    #[test]
    fn ladder_kappa_uses_rung_above_radius() {
        let ladder = PunctureLadder::exponential(6).unwrap();
        let k = ladder_kappa(&ladder, (-2.5 * PI).exp()).unwrap();
        // smallest radius >= e^{-2.5π} is e^{-2π}
        assert!((k.d - (2f64.ln() + 0.5)).abs() < 1e-12);
        assert!(k.kappa < 1.0);
    }

    #[test]
    fn density_bound_examples() {
        let mut samples = vec![Point::new(0.0, 0.0)];
        samples.extend((0..64).map(|i| Point::from_polar(1.0, 2.0 * PI * i as f64 / 64.0)));
        let z = Point::new(-0.5, 0.0);
        let b = density_bounds(z, &samples).unwrap();
        assert!((b.hi - 4.0).abs() < 1e-15);
        let exact = ModelDomain::PuncturedUnitDisk.density(z).unwrap();
        assert!((exact - 1.0 / (0.5 * 2f64.ln())).abs() < 1e-14);
        assert!(b.lo <= exact && exact <= b.hi);

        let b = density_bounds(Point::new(1.0, 0.0), &[Point::new(0.0, 0.0)]).unwrap();
        assert_eq!(b.hi, 2.0);
        assert_eq!(b.lo, 0.0);

        assert!(density_bounds(z, &[]).is_err());
        assert!(density_bounds(z, &[z]).is_err());
    }

    #[test]
    fn nearest_matches_brute_force() {
        let samples: Vec<Point> = (0..200)
            .map(|i| {
                let t = i as f64 * 0.37;
                Point::new(t.sin() * 3.0, (1.7 * t).cos())
            })
            .collect();
        let set = BoundarySamples::new(&samples).unwrap();
        for i in 0..100 {
            let z = Point::new((i as f64 * 0.13).cos() * 4.0, (i as f64 * 0.29).sin() * 2.0);
            let brute = samples.iter().map(|p| (p - z).norm()).fold(f64::INFINITY, f64::min);
            assert_eq!(set.nearest(z).1, brute);
        }
    }

    #[test]
    fn hull_intersection() {
        let collinear: Vec<Point> = (0..10).map(|i| Point::new(i as f64 * 0.1, 0.0)).collect();
        let set = BoundarySamples::new(&collinear).unwrap();
        assert_eq!(set.hull().len(), 2);
        assert!(set.segment_meets_hull(Point::new(0.5, -1.0), Point::new(0.5, 1.0)));
        assert!(!set.segment_meets_hull(Point::new(2.0, -1.0), Point::new(2.0, 1.0)));

        let square = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
            Point::new(0.5, 0.5),
        ];
        let set = BoundarySamples::new(&square).unwrap();
        assert_eq!(set.hull().len(), 4);
        assert!(set.contains_in_hull(Point::new(0.2, 0.7)));
        assert!(set.segment_meets_hull(Point::new(-1.0, 0.5), Point::new(2.0, 0.5)));
        assert!(!set.segment_meets_hull(Point::new(-1.0, 2.0), Point::new(2.0, 2.0)));
    }
}
