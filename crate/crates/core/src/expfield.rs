//! The exponential family `f_λ(z) = λe^z`.
//!
//! `f_λ` has a single singular value, the omitted asymptotic value `0`, so
//! the post-singular set is the closure of the orbit of `0`. Inverse
//! branches are `L_j(w) = Log(w/λ) + 2πij` with the principal `Log`; the
//! integer `j` is carried explicitly everywhere.

use std::f64::consts::{E, PI};
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypgeo::half_plane_distance;
use crate::output::{complex, complex_vec};
use crate::Point;

/// Largest `x` with `e^x` finite.
pub const MAX_EXPONENT: f64 = 709.782_712_893_384;

/// Residual required of a refined periodic point.
pub const PERIODIC_RESIDUAL_TOL: f64 = 1e-12;

/// Longest cycle the post-singular analysis looks for.
pub const MAX_CYCLE_PERIOD: usize = 16;

const TWO_PI: f64 = 2.0 * PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpMap {
    lambda: Point,
    log_abs_lambda: f64,
    arg_lambda: f64,
}

/// Wraps an angle into `(−π, π]`.
fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta % TWO_PI;
    if t > PI {
        t -= TWO_PI;
    } else if t <= -PI {
        t += TWO_PI;
    }
    t
}

impl ExpMap {
    pub fn new(lambda: Point) -> Result<Self> {
        if !(lambda.re.is_finite() && lambda.im.is_finite()) {
            return Err(Error::Invalid("lambda must be finite".into()));
        }
        if lambda.re == 0.0 && lambda.im == 0.0 {
            return Err(Error::Invalid("lambda must be non-zero".into()));
        }
        Ok(ExpMap {
            lambda,
            log_abs_lambda: lambda.norm().ln(),
            arg_lambda: lambda.arg(),
        })
    }

    pub fn real(lambda: f64) -> Result<Self> {
        Self::new(Point::new(lambda, 0.0))
    }

    pub fn lambda(&self) -> Point {
        self.lambda
    }

    /// Principal `Log λ`.
    pub fn log_lambda(&self) -> Point {
        Point::new(self.log_abs_lambda, self.arg_lambda)
    }

    /// `f(z)` and `f'(z)`; for this family they coincide.
    pub fn eval(&self, z: Point) -> Result<(Point, Point)> {
        let v = self.apply(z)?;
        Ok((v, v))
    }

    pub fn apply(&self, z: Point) -> Result<Point> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Overflow(format!("non-finite argument {z}")));
        }
        if z.re + self.log_abs_lambda > MAX_EXPONENT {
            return Err(Error::Overflow(format!(
                "Re z = {} exceeds the representable exponent range",
                z.re
            )));
        }
        Ok(self.lambda * z.exp())
    }

    pub fn iterate(&self, z: Point, n: usize) -> Result<Point> {
        (0..n).try_fold(z, |acc, _| self.apply(acc))
    }

    /// `f^k(z)` and `(f^k)'(z) = ∏_{j=1..k} f^j(z)`.
    pub fn iterate_with_derivative(&self, z: Point, k: usize) -> Result<(Point, Point)> {
        let mut w = z;
        let mut deriv = Point::new(1.0, 0.0);
        for _ in 0..k {
            w = self.apply(w)?;
            deriv *= w;
        }
        Ok((w, deriv))
    }

    /// `Log(w/λ) + 2πij`.
    pub fn inverse_branch(&self, w: Point, j: i64) -> Result<Point> {
        if w.re == 0.0 && w.im == 0.0 {
            return Err(Error::Domain(
                "0 is the omitted asymptotic value and has no preimage".into(),
            ));
        }
        if !(w.re.is_finite() && w.im.is_finite()) {
            return Err(Error::Overflow(format!("non-finite argument {w}")));
        }
        Ok(self.inverse_branch_unchecked(w, j))
    }

    pub(crate) fn inverse_branch_unchecked(&self, w: Point, j: i64) -> Point {
        // ln|w| − ln|λ| keeps |w/λ| from overflowing
        let re = w.norm().ln() - self.log_abs_lambda;
        let im = wrap_angle(w.arg() - self.arg_lambda) + TWO_PI * j as f64;
        Point::new(re, im)
    }

    /// `w/λ` rotated only, used to locate the branch cut `λ·(−∞, 0]`.
    pub(crate) fn unrotate(&self, w: Point) -> Point {
        w * Point::from_polar(1.0, -self.arg_lambda)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundedness {
    Bounded,
    Unbounded,
    Inconclusive,
}

/// Why the singular orbit was declared bounded or unbounded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrbitCertificate {
    /// The orbit entered a disk around an attracting cycle on which the
    /// return map is a strict contraction.
    Attracting {
        #[serde(with = "complex_vec")]
        cycle: Vec<Point>,
        #[serde(with = "complex")]
        multiplier: Point,
        basin_radius: f64,
        /// Maximum of `|(f^p)'|` on the certified disk.
        contraction: f64,
    },
    /// The orbit converges monotonically to a cycle whose multiplier is a
    /// root of unity.
    Parabolic {
        #[serde(with = "complex_vec")]
        cycle: Vec<Point>,
        #[serde(with = "complex")]
        multiplier: Point,
        rotation_denominator: u32,
    },
    /// The orbit landed on a repelling cycle.
    Preperiodic {
        preperiod: usize,
        #[serde(with = "complex_vec")]
        cycle: Vec<Point>,
    },
    /// `|z| > escape_radius` with `Re z > 0`, or the next iterate overflowed.
    Escape { iteration: usize },
    /// Neither certificate fired.
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PostsingularData {
    #[serde(with = "complex_vec")]
    pub orbit: Vec<Point>,
    pub status: Boundedness,
    pub bounded: bool,
    pub certificate: OrbitCertificate,
    /// Smallest `R` with the orbit and its limit cycle in `|z| <= R`
    /// (absent when unbounded).
    pub radius: Option<f64>,
    pub iterations: usize,
}

impl PostsingularData {
    /// Orbit points plus the limit cycle, a finite sample of `P`.
    pub fn samples(&self) -> Vec<Point> {
        let mut pts = self.orbit.clone();
        match &self.certificate {
            OrbitCertificate::Attracting { cycle, .. }
            | OrbitCertificate::Parabolic { cycle, .. }
            | OrbitCertificate::Preperiodic { cycle, .. } => pts.extend(cycle.iter().copied()),
            _ => {}
        }
        pts
    }
}

/// A refined periodic point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicPoint {
    #[serde(with = "complex")]
    pub w: Point,
    #[serde(with = "complex")]
    pub multiplier: Point,
    pub residual: f64,
    pub period: usize,
    pub minimal_period: usize,
}

/// Chart of the exponential tract `{Re z > a}` onto the right half-plane:
/// `φ(z) = z + Log λ − ln R`, so that `exp ∘ φ = f / R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TractChart {
    pub radius: f64,
    /// `a = ln(R/|λ|)`.
    pub abscissa: f64,
    #[serde(with = "complex")]
    pub shift: Point,
}

impl TractChart {
    pub fn apply(&self, z: Point) -> Point {
        z + self.shift - self.radius.ln()
    }

    pub fn inverse(&self, zeta: Point) -> Point {
        zeta - self.shift + self.radius.ln()
    }

    pub fn contains(&self, z: Point) -> bool {
        z.re > self.abscissa
    }
}

/// Preimages `w_j` of a point outside the disk `|z| <= R`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreimageLadder {
    pub indices: Vec<i64>,
    #[serde(with = "complex_vec")]
    pub points: Vec<Point>,
    /// Half-plane distances between consecutive chart images.
    pub deltas: Vec<f64>,
    pub delta: f64,
    pub chart: TractChart,
}

impl ExpMap {
    /// Forward orbit of the singular value with a boundedness verdict.
    pub fn postsingular(&self, max_iter: usize, escape_radius: f64) -> Result<PostsingularData> {
        if max_iter == 0 {
            return Err(Error::Invalid("max_iter must be >= 1".into()));
        }
        if !(escape_radius > 0.0) {
            return Err(Error::Invalid("escape_radius must be > 0".into()));
        }
        let mut orbit = vec![Point::new(0.0, 0.0)];
        let mut z = orbit[0];
        for n in 1..=max_iter {
            if z.norm() > escape_radius && z.re > 0.0 {
                return Ok(unbounded(orbit, n - 1));
            }
            z = match self.apply(z) {
                Ok(v) => v,
                Err(Error::Overflow(_)) => return Ok(unbounded(orbit, n - 1)),
                Err(e) => return Err(e),
            };
            orbit.push(z);
            for p in 1..=MAX_CYCLE_PERIOD.min(n) {
                let scale = z.norm().max(1.0);
                if (z - orbit[n - p]).norm() < 1e-9 * scale {
                    if let Some(cert) = self.cycle_certificate(&orbit, p)? {
                        return Ok(bounded(orbit, cert, n));
                    }
                }
            }
        }
        if z.norm() > escape_radius && z.re > 0.0 {
            return Ok(unbounded(orbit, max_iter));
        }
        // slow convergence (parabolic or weakly attracting)
        for p in 1..=MAX_CYCLE_PERIOD.min(max_iter) {
            if let Some(cert) = self.cycle_certificate(&orbit, p)? {
                return Ok(bounded(orbit, cert, max_iter));
            }
        }
        let radius = orbit.iter().map(|w| w.norm()).fold(0.0, f64::max);
        Ok(PostsingularData {
            orbit,
            status: Boundedness::Inconclusive,
            bounded: false,
            certificate: OrbitCertificate::None,
            radius: Some(radius),
            iterations: max_iter,
        })
    }

    fn cycle_certificate(&self, orbit: &[Point], p: usize) -> Result<Option<OrbitCertificate>> {
        let z = *orbit.last().unwrap();
        let pp = match self.refine_periodic_point(p, z) {
            Ok(pp) => pp,
            Err(Error::NonConvergence(_)) | Err(Error::Overflow(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        if pp.minimal_period != p {
            return Ok(None);
        }
        let mut cycle = vec![pp.w];
        for _ in 1..p {
            cycle.push(self.apply(*cycle.last().unwrap())?);
        }
        let mu = pp.multiplier;
        let modulus = mu.norm();
        // nearest cycle point to the current orbit point
        let (anchor, offset) = cycle
            .iter()
            .map(|c| (*c, (z - c).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();

        if modulus < 1.0 - 1e-6 {
            let rho = (2.0 * offset).max(1e-12 * anchor.norm().max(1.0));
            let mut worst: f64 = 0.0;
            for i in 0..64 {
                let zeta = anchor + Point::from_polar(rho, TWO_PI * i as f64 / 64.0);
                let (_, d) = self.iterate_with_derivative(zeta, p)?;
                worst = worst.max(d.norm());
            }
            if worst < 1.0 {
                return Ok(Some(OrbitCertificate::Attracting {
                    cycle,
                    multiplier: mu,
                    basin_radius: rho,
                    contraction: worst,
                }));
            }
            return Ok(None);
        }
        if (modulus - 1.0).abs() <= 1e-6 {
            let Some(q) = rotation_denominator(mu) else {
                return Ok(None);
            };
            // monotone approach along the period-p subsequence
            let tail: Vec<f64> = orbit
                .iter()
                .rev()
                .step_by(p)
                .take(20)
                .map(|o| (o - anchor).norm())
                .collect();
            if tail.len() >= 5 && tail.windows(2).all(|w| w[0] < w[1]) {
                return Ok(Some(OrbitCertificate::Parabolic {
                    cycle,
                    multiplier: mu,
                    rotation_denominator: q,
                }));
            }
            return Ok(None);
        }
        if offset < 1e-9 * anchor.norm().max(1.0) {
            return Ok(Some(OrbitCertificate::Preperiodic {
                preperiod: orbit.len().saturating_sub(p + 1),
                cycle,
            }));
        }
        Ok(None)
    }
}

fn rotation_denominator(mu: Point) -> Option<u32> {
    let turns = mu.arg() / TWO_PI;
    (1..=64u32).find(|&q| {
        let x = turns * q as f64;
        (x - x.round()).abs() < 1e-6 * q as f64
    })
}

fn unbounded(orbit: Vec<Point>, iteration: usize) -> PostsingularData {
    PostsingularData {
        iterations: iteration,
        orbit,
        status: Boundedness::Unbounded,
        bounded: false,
        certificate: OrbitCertificate::Escape { iteration },
        radius: None,
    }
}

fn bounded(orbit: Vec<Point>, certificate: OrbitCertificate, iterations: usize) -> PostsingularData {
    let cycle_max = match &certificate {
        OrbitCertificate::Attracting { cycle, .. }
        | OrbitCertificate::Parabolic { cycle, .. }
        | OrbitCertificate::Preperiodic { cycle, .. } => {
            cycle.iter().map(|c| c.norm()).fold(0.0, f64::max)
        }
        _ => 0.0,
    };
    let radius = orbit.iter().map(|w| w.norm()).fold(cycle_max, f64::max);
    PostsingularData {
        orbit,
        status: Boundedness::Bounded,
        bounded: true,
        certificate,
        radius: Some(radius),
        iterations,
    }
}

fn bisect<F: Fn(f64) -> f64>(h: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut h_lo = h(lo);
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let h_mid = h(mid);
        if h_mid == 0.0 {
            return mid;
        }
        if (h_mid > 0.0) == (h_lo > 0.0) {
            lo = mid;
            h_lo = h_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

impl ExpMap {
    /// The two real fixed points `q₋ < 1 < q₊` for real `λ ∈ (0, 1/e)`.
    pub fn real_fixed_points(&self) -> Result<(f64, f64)> {
        if self.lambda.im != 0.0 {
            return Err(Error::Domain("lambda must be real".into()));
        }
        let lam = self.lambda.re;
        let tangency = 1.0 / E;
        if (lam - tangency).abs() <= 4.0 * f64::EPSILON * tangency {
            return Err(Error::ParabolicTangency);
        }
        if !(lam > 0.0 && lam < tangency) {
            return Err(Error::Domain(format!("lambda = {lam} not in (0, 1/e)")));
        }
        let h = |x: f64| x - lam * x.exp();
        let q_minus = bisect(h, 0.0, 1.0);
        let mut upper = 2.0;
        while h(upper) > 0.0 {
            upper *= 2.0;
        }
        let q_plus = bisect(h, 1.0, upper);
        Ok((q_minus, q_plus))
    }

    /// Preimages `w_j = L_j(z0)` for `j` in `js` and the half-plane spacing
    /// of their chart images. `radius` is the `R` with `P ⊂ D̄(0, R)`.
    pub fn preimage_ladder(
        &self,
        z0: Point,
        js: RangeInclusive<i64>,
        radius: f64,
    ) -> Result<PreimageLadder> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Invalid(format!("chart radius {radius} must be > 0")));
        }
        if !(z0.norm() > radius) {
            return Err(Error::Domain(format!(
                "|z0| = {} must exceed the chart radius {radius}",
                z0.norm()
            )));
        }
        let indices: Vec<i64> = js.collect();
        if indices.len() < 2 {
            return Err(Error::Invalid("need at least two ladder indices".into()));
        }
        let chart = TractChart {
            radius,
            abscissa: (radius / self.lambda.norm()).ln(),
            shift: self.log_lambda(),
        };
        let points = indices
            .iter()
            .map(|&j| self.inverse_branch(z0, j))
            .collect::<Result<Vec<_>>>()?;
        let images: Vec<Point> = points.iter().map(|&w| chart.apply(w)).collect();
        let deltas = images
            .windows(2)
            .map(|w| half_plane_distance(w[0], w[1]))
            .collect::<Result<Vec<_>>>()?;
        let delta = deltas.iter().copied().fold(0.0, f64::max);
        let spread = deltas.iter().map(|d| (d - deltas[0]).abs()).fold(0.0, f64::max);
        if spread > 1e-12 * delta.max(1.0) {
            return Err(Error::NonConvergence(format!(
                "ladder spacing varies by {spread} across indices"
            )));
        }
        Ok(PreimageLadder {
            indices,
            points,
            deltas,
            delta,
            chart,
        })
    }

    /// Newton refinement of a solution of `f^k(w) = w` near `seed`.
    pub fn refine_periodic_point(&self, k: usize, seed: Point) -> Result<PeriodicPoint> {
        if k == 0 {
            return Err(Error::Invalid("period must be >= 1".into()));
        }
        let mut z = seed;
        let mut best: Option<(Point, f64)> = None;
        let mut extra = 0;
        for _ in 0..200 {
            let (fk, d) = self.iterate_with_derivative(z, k)?;
            let residual = (fk - z).norm();
            if best.is_none_or(|(_, r)| residual < r) {
                best = Some((z, residual));
            }
            if residual < PERIODIC_RESIDUAL_TOL {
                // keep polishing while it pays (double roots converge linearly)
                extra += 1;
                if extra > 60 || residual == 0.0 {
                    break;
                }
                if let Some((_, r)) = best {
                    if residual > 0.5 * r && extra > 1 {
                        break;
                    }
                }
            }
            let denom = d - 1.0;
            if denom.norm() == 0.0 {
                break;
            }
            let step = (fk - z) / denom;
            if !(step.re.is_finite() && step.im.is_finite()) {
                break;
            }
            z -= step;
        }
        let (w, residual) = best.expect("at least one iterate");
        if !(residual < PERIODIC_RESIDUAL_TOL) {
            return Err(Error::NonConvergence(format!(
                "Newton for period {k} stalled at residual {residual:e}"
            )));
        }
        let (_, multiplier) = self.iterate_with_derivative(w, k)?;
        let scale = w.norm().max(1.0);
        let mut minimal_period = k;
        for p in 1..k {
            if k.is_multiple_of(p) && (self.iterate(w, p)? - w).norm() <= 1e-8 * scale {
                minimal_period = p;
                break;
            }
        }
        Ok(PeriodicPoint {
            w,
            multiplier,
            residual,
            period: k,
            minimal_period,
        })
    }
}
