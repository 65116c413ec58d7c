//! Reflecting surfaces from stationary detections: accumulate a few frames,
//! cluster, then fit line segments inside each cluster.

mod cluster;
mod ransac;

use alloc::format;
use alloc::vec::Vec;

pub use cluster::rbnn;
pub use ransac::ransac_line_segments;

use crate::error::{Error, Result};
use crate::geometry::{Point2, ReflectionSurface};
use crate::types::MeasurementFrame;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct ExtractionConfig {
    pub cluster_radius_m: f64,
    pub min_cluster_size: usize,
    pub ransac_iterations: usize,
    pub inlier_threshold_m: f64,
    pub min_segment_length_m: f64,
    pub min_inliers: usize,
    /// Number of most recent frames accumulated into one cloud.
    pub accumulation_frames: usize,
    pub rng_seed: u64,
    /// Detections below this `|v_abs|` count as stationary.
    pub moving_threshold_mps: f64,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        Self {
            cluster_radius_m: 1.5,
            min_cluster_size: 8,
            ransac_iterations: 200,
            inlier_threshold_m: 0.3,
            min_segment_length_m: 5.0,
            min_inliers: 6,
            accumulation_frames: 5,
            rng_seed: 0,
            moving_threshold_mps: 0.5,
        }
    }
}

impl ExtractionConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("cluster_radius_m", self.cluster_radius_m),
            ("inlier_threshold_m", self.inlier_threshold_m),
            ("min_segment_length_m", self.min_segment_length_m),
            ("moving_threshold_mps", self.moving_threshold_mps),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be positive and finite")));
            }
        }
        for (name, v) in [
            ("min_cluster_size", self.min_cluster_size),
            ("ransac_iterations", self.ransac_iterations),
            ("accumulation_frames", self.accumulation_frames),
        ] {
            if v == 0 {
                return Err(Error::Config(format!("{name} must be at least 1")));
            }
        }
        if self.min_inliers < 2 {
            return Err(Error::Config("min_inliers must be at least 2".into()));
        }
        if self.inlier_threshold_m >= self.cluster_radius_m {
            return Err(Error::Config("inlier_threshold_m must be below cluster_radius_m".into()));
        }
        Ok(())
    }
}

/// Stationary detections of several frames in the sensor frame of the newest one.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StationaryCloud {
    pub points: Vec<Point2>,
    pub source_frame_indices: Vec<u64>,
}

impl StationaryCloud {
    /// Accumulates `frames` (oldest first) into the pose of the last one.
    ///
    /// Alignment is a pure translation by the integrated ego velocity, since
    /// frames carry no yaw rate. Frames without ego motion are skipped.
    pub fn accumulate(frames: &[&MeasurementFrame], moving_threshold_mps: f64) -> Self {
        let mut cloud = Self::default();
        if frames.is_empty() {
            return cloud;
        }
        // Sensor displacement from each frame to the newest, trapezoidal in velocity.
        let mut offsets = alloc::vec![Point2::ORIGIN; frames.len()];
        for k in (0..frames.len() - 1).rev() {
            let (a, b) = (frames[k], frames[k + 1]);
            let dt = b.timestamp_s - a.timestamp_s;
            let v = match (a.ego, b.ego) {
                (Some(ea), Some(eb)) => (ea.velocity() + eb.velocity()) * 0.5,
                (Some(e), None) | (None, Some(e)) => e.velocity(),
                (None, None) => Point2::ORIGIN,
            };
            offsets[k] = offsets[k + 1] + v * dt;
        }
        for (frame, offset) in frames.iter().zip(offsets) {
            if frame.ego.is_none() {
                log::warn!("frame {} has no ego motion; skipped for surface extraction", frame.frame_index);
                continue;
            }
            for det in &frame.detections {
                if !det.is_moving(moving_threshold_mps) {
                    cloud.points.push(det.position() - offset);
                    cloud.source_frame_indices.push(frame.frame_index);
                }
            }
        }
        cloud
    }
}

/// Extracts surfaces from the last `accumulation_frames` of `frames` (oldest first).
pub fn extract_surfaces<'a, I>(frames: I, cfg: &ExtractionConfig) -> Result<Vec<ReflectionSurface>>
where
    I: IntoIterator<Item = &'a MeasurementFrame>,
{
    cfg.validate()?;
    let frames: Vec<&MeasurementFrame> = frames.into_iter().collect();
    if frames.is_empty() {
        return Err(Error::Precondition("surface extraction needs at least one frame".into()));
    }
    let start = frames.len().saturating_sub(cfg.accumulation_frames);
    let cloud = StationaryCloud::accumulate(&frames[start..], cfg.moving_threshold_mps);
    Ok(surfaces_from_cloud(&cloud, cfg))
}

pub fn surfaces_from_cloud(cloud: &StationaryCloud, cfg: &ExtractionConfig) -> Vec<ReflectionSurface> {
    let mut out = Vec::new();
    for cluster in rbnn(&cloud.points, cfg.cluster_radius_m, cfg.min_cluster_size) {
        let pts: Vec<Point2> = cluster.iter().map(|&i| cloud.points[i]).collect();
        out.extend(ransac_line_segments(&pts, cfg));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{Detection, DetectionId, EgoMotion};

    fn stationary_det(id: u32, p: Point2) -> Detection {
        Detection::new(DetectionId(id), p.norm(), p.angle(), 0.0, 0.0, 0.0).unwrap()
    }

    #[test]
    fn clean_guardrail_single_frame() {
        let dets = (0..25).map(|i| stationary_det(i, Point2::new(5.0 + 2.5 * i as f64, 4.0))).collect();
        let frame = MeasurementFrame::new(0, EgoMotion::stationary(0.0), dets);
        // 2.5 m spacing needs a wider connection radius than the default.
        let cfg = ExtractionConfig { cluster_radius_m: 3.0, ..Default::default() };
        let s = extract_surfaces([&frame], &cfg).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s[0].orientation().abs() < 1e-6);
        assert!((s[0].length() - 60.0).abs() < 1e-6);
    }

    #[test]
    fn moving_only_gives_nothing() {
        let dets = (0..25)
            .map(|i| Detection::new(DetectionId(i), 10.0 + i as f64, 0.1, -5.0, -5.0, 0.0).unwrap())
            .collect();
        let frame = MeasurementFrame::new(0, EgoMotion::stationary(0.0), dets);
        assert!(extract_surfaces([&frame], &ExtractionConfig::default()).unwrap().is_empty());
        assert!(extract_surfaces(core::iter::empty(), &ExtractionConfig::default()).is_err());
    }

    #[test]
    fn accumulation_aligns_translation() {
        let ego0 = EgoMotion::new(10.0, 0.0, 0.0, 0.0).unwrap();
        let ego1 = EgoMotion::new(10.0, 0.0, 0.0, 0.5).unwrap();
        let p = Point2::new(30.0, 5.0);
        let f0 = MeasurementFrame::new(0, ego0, alloc::vec![stationary_det(0, p)]);
        let f1 = MeasurementFrame::new(1, ego1, alloc::vec![stationary_det(0, p - Point2::new(5.0, 0.0))]);
        let cloud = StationaryCloud::accumulate(&[&f0, &f1], 0.5);
        assert_eq!(cloud.points.len(), 2);
        assert!(cloud.points[0].distance(cloud.points[1]) < 1e-9);
        assert_eq!(cloud.source_frame_indices, alloc::vec![0, 1]);
    }

    #[test]
    fn config_validation() {
        ExtractionConfig::default().validate().unwrap();
        let bad = ExtractionConfig { inlier_threshold_m: 2.0, ..Default::default() };
        assert!(bad.validate().is_err());
    }
}
