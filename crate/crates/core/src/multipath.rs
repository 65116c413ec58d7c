//! Forward observables of direct, 2-bounce and 3-bounce propagation paths via a
//! static specular surface, plus the heading and velocity feasibility sets used
//! to test whether a detection can be explained by such a path.

use core::f64::consts::{FRAC_PI_2, PI};

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::angle::{wrap, AngularInterval, AngularSet};
use crate::error::{Error, Result};
use crate::geometry::{reflection_point_on_segment, Point2, ReflectionSurface};
use crate::types::{EgoMotion, TargetMotion};

/// Multipath taxonomy: type by where the last reflection happened, then total bounces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PathKind {
    /// Direct path.
    T1B1,
    T1B2,
    T2B2,
    T2B3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BounceKind {
    TwoBounce,
    ThreeBounce,
}

/// What the sensor would report for one propagation path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathObservables {
    pub range_m: f64,
    pub azimuth_rad: f64,
    pub v_rel_mps: f64,
    pub v_abs_mps: f64,
    pub kind: PathKind,
}

/// Sensor-relative positions of the object point `O` and the surface point `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorGeometry {
    o_vec: Point2,
    r_vec: Point2,
    /// `∠(o − r) = 2ω − α_r`.
    mirrored_dir_rad: f64,
    /// `φ = π/2 + α_r − ω`.
    reflection_angle_rad: f64,
}

impl MirrorGeometry {
    pub fn new(o_vec: Point2, r_vec: Point2, omega: f64) -> Result<Self> {
        if o_vec.norm() <= 0.0 || r_vec.norm() <= 0.0 {
            return Err(Error::Degenerate("object and reflection point must differ from the sensor"));
        }
        if (o_vec - r_vec).norm() <= 0.0 {
            return Err(Error::Degenerate("object point coincides with reflection point"));
        }
        let alpha_r = r_vec.angle();
        Ok(Self {
            o_vec,
            r_vec,
            mirrored_dir_rad: mirrored_direction(alpha_r, omega),
            reflection_angle_rad: wrap(FRAC_PI_2 + alpha_r - omega),
        })
    }

    /// Geometry through the specular point of `surface` for object point `o`, if one exists.
    pub fn from_surface(o_vec: Point2, surface: &ReflectionSurface, slack: f64) -> Option<Self> {
        let r = reflection_point_on_segment(o_vec, surface, slack)?;
        Self::new(o_vec, r, surface.orientation()).ok()
    }

    pub fn o_vec(&self) -> Point2 {
        self.o_vec
    }

    pub fn r_vec(&self) -> Point2 {
        self.r_vec
    }

    pub fn mirrored_dir(&self) -> f64 {
        self.mirrored_dir_rad
    }

    pub fn reflection_angle(&self) -> f64 {
        self.reflection_angle_rad
    }

    pub fn alpha_o(&self) -> f64 {
        self.o_vec.angle()
    }

    pub fn alpha_r(&self) -> f64 {
        self.r_vec.angle()
    }

    /// `r + |o − r|`.
    pub fn three_bounce_range(&self) -> f64 {
        self.r_vec.norm() + (self.o_vec - self.r_vec).norm()
    }

    /// `½(o + r + |o − r|)`.
    pub fn two_bounce_range(&self) -> f64 {
        0.5 * (self.o_vec.norm() + self.three_bounce_range())
    }
}

/// Direction of the leg from the surface point to the object, `wrap(2ω − α_r)`.
pub fn mirrored_direction(alpha_r: f64, omega: f64) -> f64 {
    wrap(2.0 * omega - alpha_r)
}

pub fn direct_observables(o_vec: Point2, target: &TargetMotion, ego: &EgoMotion) -> Result<PathObservables> {
    let d = o_vec.norm();
    if d <= 0.0 {
        return Err(Error::Domain("object point must differ from the sensor"));
    }
    let alpha = o_vec.angle();
    let v_abs = target.component_along(alpha);
    Ok(PathObservables {
        range_m: d,
        azimuth_rad: alpha,
        v_rel_mps: v_abs - ego.radial_component(alpha),
        v_abs_mps: v_abs,
        kind: PathKind::T1B1,
    })
}

pub fn type2_3bounce_observables(geom: &MirrorGeometry, target: &TargetMotion, ego: &EgoMotion) -> PathObservables {
    let alpha_r = geom.alpha_r();
    let v_abs = target.component_along(geom.mirrored_dir_rad);
    PathObservables {
        range_m: geom.three_bounce_range(),
        azimuth_rad: alpha_r,
        v_rel_mps: v_abs - ego.radial_component(alpha_r),
        v_abs_mps: v_abs,
        kind: PathKind::T2B3,
    }
}

/// Type-1 or type-2 2-bounce observables. The reported `v_abs` is compensated
/// with the path's own measured azimuth, so the ego term does not cancel.
pub fn two_bounce_observables(
    geom: &MirrorGeometry,
    target: &TargetMotion,
    ego: &EgoMotion,
    kind: PathKind,
) -> Result<PathObservables> {
    let alpha = match kind {
        PathKind::T1B2 => geom.alpha_o(),
        PathKind::T2B2 => geom.alpha_r(),
        _ => return Err(Error::Domain("two-bounce kind must be T1B2 or T2B2")),
    };
    let direct = direct_observables(geom.o_vec, target, ego)?;
    let triple = type2_3bounce_observables(geom, target, ego);
    let v_rel = 0.5 * direct.v_rel_mps + 0.5 * triple.v_rel_mps;
    Ok(PathObservables {
        range_m: geom.two_bounce_range(),
        azimuth_rad: alpha,
        v_rel_mps: v_rel,
        v_abs_mps: v_rel + ego.radial_component(alpha),
        kind,
    })
}

/// Feasible headings `Γ₁` of other road users, within `delta_max` of the ego
/// direction of travel (either sense).
pub fn feasible_heading_set(ego: &EgoMotion, delta_max: f64) -> Result<AngularSet> {
    if !(0.0..=FRAC_PI_2).contains(&delta_max) {
        return Err(Error::Domain("delta_max must lie in [0, pi/2]"));
    }
    let forward = -ego.sensor_yaw_rad;
    let backward = PI - ego.sensor_yaw_rad;
    Ok(AngularSet::from_intervals([
        AngularInterval::new(forward - delta_max, forward + delta_max)?,
        AngularInterval::new(backward - delta_max, backward + delta_max)?,
    ]))
}

/// Headings `Γ₂` compatible with measured `v_abs_o` under a speed cap `v_max`.
pub fn heading_set_from_speed(alpha_o: f64, v_abs_o: f64, v_max: f64) -> Result<AngularSet> {
    if !(v_max > 0.0) {
        return Err(Error::Domain("v_max must be positive"));
    }
    let center = if v_abs_o < 0.0 { alpha_o + PI } else { alpha_o };
    let ratio = v_abs_o.abs() / v_max;
    if ratio > 1.0 {
        return Ok(AngularSet::from_intervals([AngularInterval::singleton(center)]));
    }
    let half = ratio.acos();
    Ok(AngularSet::from_intervals([AngularInterval::new(center - half, center + half)?]))
}

/// Closed interval of radial velocities in m/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityInterval {
    pub lo: f64,
    pub hi: f64,
}

impl VelocityInterval {
    pub fn point(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn contains(&self, v: f64, tol: f64) -> bool {
        v >= self.lo - tol && v <= self.hi + tol
    }

    fn scaled_shifted(self, kind: BounceKind, offset: f64) -> Self {
        match kind {
            BounceKind::ThreeBounce => self,
            BounceKind::TwoBounce => Self { lo: 0.5 * self.lo + offset, hi: 0.5 * self.hi + offset },
        }
    }
}

/// `v_abs_o · cos(γ − mirrored_dir) / cos(γ − α_o)`.
#[inline]
pub fn projected_velocity(alpha_o: f64, v_abs_o: f64, mirrored_dir: f64, gamma: f64) -> f64 {
    v_abs_o * (gamma - mirrored_dir).cos() / (gamma - alpha_o).cos()
}

fn crosses_singularity(alpha_o: f64, piece: &AngularInterval) -> bool {
    let zero = alpha_o + FRAC_PI_2;
    let k = ((piece.start() - zero) / PI).ceil();
    let first = zero + k * PI;
    if first <= piece.end() {
        return true;
    }
    let edge = |g: f64| (g - alpha_o).cos().abs() < 1e-12;
    edge(piece.start()) || edge(piece.end())
}

/// Range of the velocity component along `mirrored_dir` over all headings in
/// `gamma_set`, given the radial component `v_abs_o` along `alpha_o`.
///
/// The ratio is monotonic in `γ` between singularities, so the extremes sit on
/// piece endpoints. For two-bounce paths the interval is halved and shifted by
/// `offset`. An empty heading set gives `Ok(None)`; a heading set on which
/// `cos(γ − α_o)` vanishes gives [`Error::Singular`].
pub fn projected_velocity_interval(
    alpha_o: f64,
    v_abs_o: f64,
    mirrored_dir: f64,
    gamma_set: &AngularSet,
    kind: BounceKind,
    offset: f64,
) -> Result<Option<VelocityInterval>> {
    if gamma_set.is_empty() {
        return Ok(None);
    }
    if v_abs_o == 0.0 {
        return Ok(Some(VelocityInterval::point(0.0).scaled_shifted(kind, offset)));
    }
    if wrap(mirrored_dir - alpha_o) == 0.0 {
        return Ok(Some(VelocityInterval::point(v_abs_o).scaled_shifted(kind, offset)));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for piece in gamma_set.pieces() {
        if crosses_singularity(alpha_o, piece) {
            return Err(Error::Singular);
        }
        for g in [piece.start(), piece.end()] {
            let v = projected_velocity(alpha_o, v_abs_o, mirrored_dir, g);
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    Ok(Some(VelocityInterval { lo, hi }.scaled_shifted(kind, offset)))
}

/// Velocity interval for an object point that appears stationary on the direct
/// path: its true motion may be tangential with speed up to `tangential_bound`.
pub fn tangential_velocity_interval(
    alpha_o: f64,
    v_abs_o: f64,
    mirrored_dir: f64,
    tangential_bound: f64,
    kind: BounceKind,
    offset: f64,
) -> VelocityInterval {
    let delta = mirrored_dir - alpha_o;
    let center = v_abs_o * delta.cos();
    let spread = tangential_bound * delta.sin().abs();
    VelocityInterval { lo: center - spread, hi: center + spread }.scaled_shifted(kind, offset)
}

/// Ego term added to the halved 3-bounce interval for 2-bounce paths, plus the
/// halved direct-path velocity: `v_abs,2 = ½ v_abs,o + ½ v_abs,23 + offset_ego`.
pub fn two_bounce_offset(v_abs_o: f64, alpha_o: f64, alpha_r: f64, kind: PathKind, ego: &EgoMotion) -> f64 {
    let ego_term = 0.5 * (ego.radial_component(alpha_o) - ego.radial_component(alpha_r));
    let ego_term = if kind == PathKind::T2B2 { -ego_term } else { ego_term };
    0.5 * v_abs_o + ego_term
}
