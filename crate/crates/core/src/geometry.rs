//! Planar geometry: points, reflecting segments, mirror construction and ray casting.

use core::f64::consts::{FRAC_PI_2, PI};
use core::ops::{Add, Mul, Neg, Sub};

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::angle::wrap;
use crate::error::{Error, Result};

/// Shortest surface segment accepted, in meters.
pub const MIN_SURFACE_LENGTH_M: f64 = 0.5;

const SIDE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn from_polar(r: f64, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { x: r * c, y: r * s }
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn angle(&self) -> f64 {
        wrap(self.y.atan2(self.x))
    }

    #[inline]
    pub fn dot(&self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    #[inline]
    pub fn cross(&self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn distance(&self, o: Point2) -> f64 {
        (*self - o).norm()
    }

    /// Mirror image across the x axis.
    #[inline]
    pub fn flip_y(&self) -> Point2 {
        Point2::new(self.x, -self.y)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Folds a line direction into `[-π/2, π/2)`.
pub fn fold_orientation(theta: f64) -> f64 {
    let mut w = wrap(theta);
    if w >= FRAC_PI_2 {
        w -= PI;
    } else if w < -FRAC_PI_2 {
        w += PI;
    }
    if w >= FRAC_PI_2 {
        w -= PI;
    }
    w
}

/// Straight reflecting segment (guardrail, wall) in sensor coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionSurface {
    p0: Point2,
    p1: Point2,
    /// `ω`, direction of the segment line in `[-π/2, π/2)`.
    orientation_rad: f64,
    length: f64,
    /// Unit direction from `p0` to `p1`.
    dir: Point2,
}

impl ReflectionSurface {
    pub fn new(p0: Point2, p1: Point2) -> Result<Self> {
        if ![p0.x, p0.y, p1.x, p1.y].iter().all(|v| v.is_finite()) {
            return Err(Error::Domain("surface endpoints must be finite"));
        }
        let d = p1 - p0;
        let length = d.norm();
        if length <= MIN_SURFACE_LENGTH_M {
            return Err(Error::Domain("surface segment must be longer than 0.5 m"));
        }
        Ok(Self {
            p0,
            p1,
            orientation_rad: fold_orientation(d.y.atan2(d.x)),
            length,
            dir: d * (1.0 / length),
        })
    }

    pub fn p0(&self) -> Point2 {
        self.p0
    }

    pub fn p1(&self) -> Point2 {
        self.p1
    }

    pub fn orientation(&self) -> f64 {
        self.orientation_rad
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Unit normal, rotated +90° from the `p0 → p1` direction.
    fn normal(&self) -> Point2 {
        Point2::new(-self.dir.y, self.dir.x)
    }

    /// Signed distance of `p` from the infinite surface line.
    pub fn signed_distance(&self, p: Point2) -> f64 {
        (p - self.p0).dot(self.normal())
    }

    /// Position of the orthogonal projection of `p`, measured from `p0` along the segment.
    pub fn project(&self, p: Point2) -> f64 {
        (p - self.p0).dot(self.dir)
    }

    pub fn within_extent(&self, p: Point2, slack: f64) -> bool {
        let t = self.project(p);
        t >= -slack && t <= self.length + slack
    }

    /// Mirror image of `p` across the surface line.
    pub fn mirror(&self, p: Point2) -> Point2 {
        p - self.normal() * (2.0 * self.signed_distance(p))
    }

    /// Same segment mirrored across the sensor's x axis.
    pub fn flip_y(&self) -> ReflectionSurface {
        // Length is preserved, so construction cannot fail.
        ReflectionSurface::new(self.p0.flip_y(), self.p1.flip_y()).expect("mirrored segment stays valid")
    }
}

/// Point `R` on `surface` where a wave from the sensor reaches `o` with equal
/// angles of incidence and reflection.
///
/// Returns `None` when the sensor or `o` lies on the surface line, when they
/// lie on opposite sides, or when `R` falls outside the segment extended by
/// `slack` meters at either end.
pub fn reflection_point_on_segment(o: Point2, surface: &ReflectionSurface, slack: f64) -> Option<Point2> {
    let s_sensor = surface.signed_distance(Point2::ORIGIN);
    let s_obj = surface.signed_distance(o);
    if s_sensor.abs() < SIDE_EPS || s_obj.abs() < SIDE_EPS || s_sensor.signum() != s_obj.signum() {
        return None;
    }
    let image = surface.mirror(o);
    let lambda = s_sensor / (s_sensor + s_obj);
    let r = image * lambda;
    surface.within_extent(r, slack).then_some(r)
}

/// `φ₁ − φ₂` (wrapped) for a candidate reflection point `r` and object point `o`;
/// zero when the angle of incidence equals the angle of reflection.
pub fn reflection_angle_residual(r: Point2, o: Point2, omega: f64) -> f64 {
    let phi1 = FRAC_PI_2 + r.angle() - omega;
    let phi2 = FRAC_PI_2 - (o - r).angle() + omega;
    wrap(phi1 - phi2)
}

/// Intersection of the ray from the sensor at azimuth `alpha` with `surface`
/// (extended by `slack`). Parallel or collinear rays yield `None`.
pub fn ray_segment_intersection(alpha: f64, surface: &ReflectionSurface, slack: f64) -> Option<Point2> {
    let u = Point2::from_polar(1.0, alpha);
    let denom = u.cross(surface.dir);
    if denom.abs() < 1e-12 {
        return None;
    }
    let t = surface.p0.cross(surface.dir) / denom;
    let s = surface.p0.cross(u) / denom;
    if t <= 0.0 || s < -slack || s > surface.length + slack {
        return None;
    }
    Some(u * t)
}
