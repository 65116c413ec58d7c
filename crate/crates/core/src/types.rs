//! Domain types shared by every stage: detections, ego motion, frames and verdicts.

use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::angle::wrap;
use crate::error::{Error, Result};
use crate::geometry::Point2;

/// Opaque per-frame detection index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct DetectionId(pub u32);

/// One resolved radar reflection point.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Detection {
    pub id: DetectionId,
    /// Range `d` in meters, `>= 0`.
    pub range_m: f64,
    /// Azimuth `α` in `[-π, π)`, zero at boresight, counterclockwise positive.
    pub azimuth_rad: f64,
    /// Radial velocity relative to the sensor; negative when approaching.
    pub v_rel_mps: f64,
    /// Ego-motion-compensated radial velocity.
    pub v_abs_mps: f64,
    pub rcs_dbsm: f64,
}

impl Detection {
    /// Builds a detection, wrapping the azimuth and rejecting negative or non-finite values.
    pub fn new(
        id: DetectionId,
        range_m: f64,
        azimuth_rad: f64,
        v_rel_mps: f64,
        v_abs_mps: f64,
        rcs_dbsm: f64,
    ) -> Result<Self> {
        let det = Self {
            id,
            range_m,
            azimuth_rad: if azimuth_rad.is_finite() { wrap(azimuth_rad) } else { azimuth_rad },
            v_rel_mps,
            v_abs_mps,
            rcs_dbsm,
        };
        det.validate()?;
        Ok(det)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.range_m, self.azimuth_rad, self.v_rel_mps, self.v_abs_mps, self.rcs_dbsm]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Domain("detection fields must be finite"));
        }
        if self.range_m < 0.0 {
            return Err(Error::Domain("range must be non-negative"));
        }
        if !(-core::f64::consts::PI..core::f64::consts::PI).contains(&self.azimuth_rad) {
            return Err(Error::Domain("azimuth must lie in [-pi, pi)"));
        }
        Ok(())
    }

    /// Cartesian position in the sensor frame.
    pub fn position(&self) -> Point2 {
        Point2::from_polar(self.range_m, self.azimuth_rad)
    }

    pub fn is_moving(&self, threshold_mps: f64) -> bool {
        self.v_abs_mps.abs() >= threshold_mps
    }
}

/// Motion of the sensor, expressed in its own frame.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EgoMotion {
    /// `v_s`, `>= 0`.
    pub speed_mps: f64,
    /// `γ_s`: direction of the ego velocity in the sensor frame.
    pub heading_rad: f64,
    /// `ψ_s`: yaw of the sensor relative to the vehicle.
    pub sensor_yaw_rad: f64,
    pub timestamp_s: f64,
}

impl EgoMotion {
    pub fn new(speed_mps: f64, heading_rad: f64, sensor_yaw_rad: f64, timestamp_s: f64) -> Result<Self> {
        if ![speed_mps, heading_rad, sensor_yaw_rad, timestamp_s].iter().all(|v| v.is_finite()) {
            return Err(Error::Domain("ego motion fields must be finite"));
        }
        if speed_mps < 0.0 {
            return Err(Error::Domain("ego speed must be non-negative"));
        }
        Ok(Self {
            speed_mps,
            heading_rad: wrap(heading_rad),
            sensor_yaw_rad: wrap(sensor_yaw_rad),
            timestamp_s,
        })
    }

    pub fn stationary(timestamp_s: f64) -> Self {
        Self { speed_mps: 0.0, heading_rad: 0.0, sensor_yaw_rad: 0.0, timestamp_s }
    }

    /// Ego velocity vector in the sensor frame.
    pub fn velocity(&self) -> Point2 {
        Point2::from_polar(self.speed_mps, self.heading_rad)
    }

    /// `v_s · cos(γ_s − α)`: the ego contribution to radial velocity along `alpha`.
    #[inline]
    pub fn radial_component(&self, alpha: f64) -> f64 {
        self.speed_mps * (self.heading_rad - alpha).cos()
    }
}

/// Motion of a reflection point on a target object, in the sensor frame.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TargetMotion {
    /// `v_o`, `>= 0`.
    pub speed_mps: f64,
    /// `γ_o`.
    pub heading_rad: f64,
}

impl TargetMotion {
    pub fn new(speed_mps: f64, heading_rad: f64) -> Result<Self> {
        if !speed_mps.is_finite() || !heading_rad.is_finite() || speed_mps < 0.0 {
            return Err(Error::Domain("target speed must be finite and non-negative"));
        }
        Ok(Self { speed_mps, heading_rad: wrap(heading_rad) })
    }

    pub fn stationary() -> Self {
        Self { speed_mps: 0.0, heading_rad: 0.0 }
    }

    /// `v_o · cos(γ_o − θ)`: speed component along direction `theta`.
    #[inline]
    pub fn component_along(&self, theta: f64) -> f64 {
        self.speed_mps * (self.heading_rad - theta).cos()
    }
}

/// All detections of one sensor cycle.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeasurementFrame {
    pub frame_index: u64,
    pub timestamp_s: f64,
    /// `None` when the recording lacks ego data for this cycle.
    pub ego: Option<EgoMotion>,
    pub detections: Vec<Detection>,
}

impl MeasurementFrame {
    pub fn new(frame_index: u64, ego: EgoMotion, detections: Vec<Detection>) -> Self {
        Self { frame_index, timestamp_s: ego.timestamp_s, ego: Some(ego), detections }
    }

    /// Checks per-detection invariants and id uniqueness.
    pub fn validate(&self) -> Result<()> {
        let mut ids: Vec<u32> = self.detections.iter().map(|d| d.id.0).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Precondition(alloc::format!(
                "duplicate detection id in frame {}",
                self.frame_index
            )));
        }
        for det in &self.detections {
            det.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Label {
    Nonclutter,
    Clutter,
    Stationary,
}

/// The check that labeled a detection as clutter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Cause {
    None,
    RcsFilter,
    NoSimilar,
    EgoReflection,
    Underbody,
    Specular,
}

impl Cause {
    pub fn as_str(&self) -> &'static str {
        match self {
            Cause::None => "none",
            Cause::RcsFilter => "rcs_filter",
            Cause::NoSimilar => "no_similar",
            Cause::EgoReflection => "ego_reflection",
            Cause::Underbody => "underbody",
            Cause::Specular => "specular",
        }
    }
}

impl Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::Nonclutter => "nonclutter",
            Label::Clutter => "clutter",
            Label::Stationary => "stationary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Verdict {
    pub id: DetectionId,
    pub label: Label,
    pub cause: Cause,
}

impl Verdict {
    pub fn stationary(id: DetectionId) -> Self {
        Self { id, label: Label::Stationary, cause: Cause::None }
    }

    pub fn nonclutter(id: DetectionId) -> Self {
        Self { id, label: Label::Nonclutter, cause: Cause::None }
    }

    pub fn clutter(id: DetectionId, cause: Cause) -> Self {
        debug_assert!(cause != Cause::None);
        Self { id, label: Label::Clutter, cause }
    }
}

/// Polar to Cartesian sensor coordinates: `x` forward, `y` left.
pub fn to_cartesian(range_m: f64, alpha: f64) -> Result<Point2> {
    if !(range_m >= 0.0) || !alpha.is_finite() || !range_m.is_finite() {
        return Err(Error::Domain("range must be finite and non-negative"));
    }
    Ok(Point2::from_polar(range_m, alpha))
}

/// `v_abs = v_rel + v_s · cos(γ_s − α)`.
pub fn compensate_ego_motion(v_rel: f64, alpha: f64, ego: &EgoMotion) -> f64 {
    v_rel + ego.radial_component(alpha)
}
