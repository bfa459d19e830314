//! Hyperbolic geometry of the model domains.
//!
//! All metrics have curvature −1:
//!
//! | domain              | density                  |
//! |---------------------|--------------------------|
//! | unit disk `D`       | `2 / (1 − |z|²)`         |
//! | punctured disk `D*` | `−1 / (|z| log |z|)`     |
//! | right half-plane    | `1 / Re z`               |
//!
//! Distances in `D*` are computed on the logarithmic lift: `Log` maps `D*`
//! to the left half-plane modulo `2πi`, so `d_{D*}(z, w)` is the minimum of
//! half-plane distances between `Log z` and the deck translates
//! `Log w + 2πik`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{adaptive_simpson, LENGTH_REL_TOL};
use crate::Point;

/// Points closer than this to a domain boundary are rejected.
pub const BOUNDARY_MARGIN: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelDomain {
    UnitDisk,
    PuncturedUnitDisk,
    RightHalfPlane,
}

impl ModelDomain {
    pub const ALL: [ModelDomain; 3] = [
        ModelDomain::UnitDisk,
        ModelDomain::PuncturedUnitDisk,
        ModelDomain::RightHalfPlane,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelDomain::UnitDisk => "unit_disk",
            ModelDomain::PuncturedUnitDisk => "punctured_unit_disk",
            ModelDomain::RightHalfPlane => "right_half_plane",
        }
    }

    /// Checks that `z` lies strictly inside, at least [`BOUNDARY_MARGIN`]
    /// away from the boundary.
    pub fn check(self, z: Point) -> Result<()> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(outside(z, "non-finite coordinates"));
        }
        match self {
            ModelDomain::UnitDisk => {
                if 1.0 - z.norm() <= BOUNDARY_MARGIN {
                    return Err(outside(z, "|z| must be < 1"));
                }
            }
            ModelDomain::PuncturedUnitDisk => {
                if z.re == 0.0 && z.im == 0.0 {
                    return Err(Error::PunctureHit);
                }
                let r = z.norm();
                if r <= BOUNDARY_MARGIN {
                    return Err(outside(z, "too close to the puncture"));
                }
                if 1.0 - r <= BOUNDARY_MARGIN {
                    return Err(outside(z, "|z| must be < 1"));
                }
            }
            ModelDomain::RightHalfPlane => {
                if z.re <= BOUNDARY_MARGIN {
                    return Err(outside(z, "Re z must be > 0"));
                }
            }
        }
        Ok(())
    }

    pub fn contains(self, z: Point) -> bool {
        self.check(z).is_ok()
    }

    /// Exact hyperbolic density at `z`.
    pub fn density(self, z: Point) -> Result<f64> {
        self.check(z)?;
        Ok(self.density_unchecked(z))
    }

    fn density_unchecked(self, z: Point) -> f64 {
        match self {
            ModelDomain::UnitDisk => {
                let r = z.norm();
                2.0 / ((1.0 - r) * (1.0 + r))
            }
            ModelDomain::PuncturedUnitDisk => {
                let r = z.norm();
                -1.0 / (r * r.ln())
            }
            ModelDomain::RightHalfPlane => 1.0 / z.re,
        }
    }

    /// Exact hyperbolic distance between `z` and `w`.
    pub fn distance(self, z: Point, w: Point) -> Result<f64> {
        self.check(z)?;
        self.check(w)?;
        Ok(match self {
            ModelDomain::UnitDisk => disk_distance_unchecked(z, w),
            ModelDomain::RightHalfPlane => half_plane_distance_unchecked(z, w),
            ModelDomain::PuncturedUnitDisk => punctured_distance_unchecked(z, w).distance,
        })
    }
}

fn outside(z: Point, reason: &'static str) -> Error {
    Error::OutsideDomain {
        re: z.re,
        im: z.im,
        reason,
    }
}

// sinh²(d/2) forms avoid the cancellation in arccosh(1 + small).
fn disk_distance_unchecked(z: Point, w: Point) -> f64 {
    let rz = z.norm();
    let rw = w.norm();
    let s2 = (z - w).norm_sqr() / ((1.0 - rz) * (1.0 + rz) * (1.0 - rw) * (1.0 + rw));
    2.0 * s2.sqrt().asinh()
}

fn half_plane_distance_unchecked(a: Point, b: Point) -> f64 {
    let s2 = (a - b).norm_sqr() / (4.0 * a.re.abs() * b.re.abs());
    2.0 * s2.sqrt().asinh()
}

/// Distance in the right half-plane `{Re z > 0}`.
pub fn half_plane_distance(a: Point, b: Point) -> Result<f64> {
    ModelDomain::RightHalfPlane.distance(a, b)
}

/// Punctured-disk distance together with the deck translate that realized it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PuncturedDistance {
    pub distance: f64,
    /// Integer `k` such that `Log w + 2πik` is the closest lift.
    pub deck_shift: i64,
    /// Largest `|k|` that was searched.
    pub cutoff: i64,
}

impl PuncturedDistance {
    /// True when the minimizer sits at the search cutoff, so a wider search
    /// could in principle find a shorter lift.
    pub fn at_cutoff(&self) -> bool {
        self.deck_shift.abs() == self.cutoff
    }
}

/// Distance in `D*` with branch diagnostics.
pub fn punctured_distance(z: Point, w: Point) -> Result<PuncturedDistance> {
    ModelDomain::PuncturedUnitDisk.check(z)?;
    ModelDomain::PuncturedUnitDisk.check(w)?;
    Ok(punctured_distance_unchecked(z, w))
}

fn punctured_distance_unchecked(z: Point, w: Point) -> PuncturedDistance {
    let a = z.ln();
    let b = w.ln();
    let cutoff = 1 + ((a.im - b.im).abs() / (2.0 * PI)).ceil() as i64 + 2;
    let mut best = PuncturedDistance {
        distance: f64::INFINITY,
        deck_shift: 0,
        cutoff,
    };
    for k in -cutoff..=cutoff {
        let lift = b + Point::new(0.0, 2.0 * PI * k as f64);
        let d = half_plane_distance_unchecked(a, lift);
        if d < best.distance {
            best.distance = d;
            best.deck_shift = k;
        }
    }
    best
}

/// Hyperbolic length of the circle `|z| = r` in `D*`: `−2π / log r`.
pub fn circle_length_punctured(r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("circle radius {r} not in (0, 1)")));
    }
    Ok(-2.0 * PI / r.ln())
}

/// An open polyline with at least two vertices and no repeated neighbours.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline(Vec<Point>);

impl Polyline {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::DegeneratePolyline(format!(
                "need at least 2 points, got {}",
                points.len()
            )));
        }
        if let Some(p) = points.iter().find(|p| !(p.re.is_finite() && p.im.is_finite())) {
            return Err(Error::DegeneratePolyline(format!("non-finite vertex {p}")));
        }
        if let Some(i) = points.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::DegeneratePolyline(format!(
                "vertices {i} and {} coincide",
                i + 1
            )));
        }
        Ok(Polyline(points))
    }

    pub fn points(&self) -> &[Point] {
        &self.0
    }

    pub fn euclidean_length(&self) -> f64 {
        self.0.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }
}

fn segment_distance_to_origin(p: Point, q: Point) -> f64 {
    let d = q - p;
    let len2 = d.norm_sqr();
    let s = (-(p.re * d.re + p.im * d.im) / len2).clamp(0.0, 1.0);
    (p + d * s).norm()
}

/// Hyperbolic length of a polyline, integrating the density along each
/// straight edge with adaptive Simpson (relative tolerance
/// [`LENGTH_REL_TOL`] per edge).
pub fn polyline_length(domain: ModelDomain, line: &Polyline) -> Result<f64> {
    for &p in line.points() {
        domain.check(p)?;
    }
    let mut total = 0.0;
    for edge in line.points().windows(2) {
        let (p, q) = (edge[0], edge[1]);
        if domain == ModelDomain::PuncturedUnitDisk
            && segment_distance_to_origin(p, q) <= BOUNDARY_MARGIN
        {
            return Err(Error::PunctureHit);
        }
        let dir = q - p;
        let len = dir.norm();
        total += adaptive_simpson(
            |s| domain.density_unchecked(p + dir * s) * len,
            0.0,
            1.0,
            LENGTH_REL_TOL,
        );
    }
    Ok(total)
}

/// Hyperbolic length of a parametrized curve `s ↦ (γ(s), γ'(s))` on
/// `[s0, s1]`.
pub fn path_length<C>(domain: ModelDomain, curve: C, s0: f64, s1: f64) -> Result<f64>
where
    C: Fn(f64) -> (Point, Point),
{
    let mut failure = None;
    let value = adaptive_simpson(
        |s| {
            let (z, dz) = curve(s);
            match domain.density(z) {
                Ok(rho) => rho * dz.norm(),
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        s0,
        s1,
        LENGTH_REL_TOL,
    );
    match failure {
        Some(e) => Err(e),
        None => Ok(value),
    }
}
