//! The inexpensive checks: RCS filter, similarity search, ego reflection and underbody.

use crate::angle::angle_diff;
use crate::geometry::Point2;
use crate::pipeline::buffer::FrameBuffer;
use crate::pipeline::config::PipelineConfig;
use crate::types::{Detection, EgoMotion};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcsDecision {
    Pass,
    Reject,
}

/// Rejects detections strictly below the range-dependent RCS threshold.
pub fn rcs_filter(det: &Detection, cfg: &PipelineConfig) -> RcsDecision {
    if det.rcs_dbsm < cfg.rcs_curve.min_rcs(det.range_m) {
        RcsDecision::Reject
    } else {
        RcsDecision::Pass
    }
}

/// Where the DUT's reflection point was `dt` seconds ago, expressed in the
/// sensor frame of that earlier measurement.
///
/// Only the radial motion is observed, so the point is moved back by
/// `v_abs · dt` along its line of sight. The ego is assumed to travel straight
/// at its current velocity over `dt`.
pub fn project_back(dut: &Detection, ego: &EgoMotion, dt: f64) -> Point2 {
    let los = Point2::from_polar(1.0, dut.azimuth_rad);
    let past_in_current = los * (dut.range_m - dut.v_abs_mps * dt);
    past_in_current + ego.velocity() * dt
}

/// Number of detections in the buffered frames (current frame included) that
/// are near the DUT's projected past position and share its radial velocity.
///
/// `ego` is the motion of the frame the DUT belongs to, which must be the
/// newest frame in `buffer`; the DUT itself is skipped there.
pub fn similarity_search(dut: &Detection, buffer: &FrameBuffer, ego: &EgoMotion, cfg: &PipelineConfig) -> usize {
    let Some(now) = buffer.latest().map(|f| f.timestamp_s) else {
        return 0;
    };
    let mut found = 0;
    for (age, entry) in buffer.recent(cfg.buffer_len).enumerate() {
        let dt = now - entry.frame.timestamp_s;
        let center = project_back(dut, ego, dt);
        let radius = cfg.similarity_base_radius_m + cfg.tangential_speed_bound_mps * dt;
        let r2 = radius * radius;
        for (det, pos) in entry.frame.detections.iter().zip(&entry.positions) {
            if age == 0 && det.id == dut.id {
                continue;
            }
            if (det.v_abs_mps - dut.v_abs_mps).abs() > cfg.tol_v_mps {
                continue;
            }
            let dx = pos.x - center.x;
            let dy = pos.y - center.y;
            if dx * dx + dy * dy > r2 {
                continue;
            }
            if rcs_filter(det, cfg) == RcsDecision::Reject {
                continue;
            }
            found += 1;
        }
    }
    found
}

/// True if some other moving detection at a similar azimuth explains the DUT
/// as a signal that bounced `n` extra times between the object and the ego vehicle.
pub fn check_ego_reflection(dut: &Detection, moving: &[Detection], cfg: &PipelineConfig) -> bool {
    let tol_d = cfg.range_tolerance(dut.range_m);
    let dut_slow = dut.v_rel_mps.abs() < cfg.near_zero_v_mps;
    moving.iter().filter(|m| m.id != dut.id).any(|dir| {
        if angle_diff(dir.azimuth_rad, dut.azimuth_rad).abs() > cfg.tol_alpha_rad {
            return false;
        }
        let relaxed = dut_slow && dir.v_rel_mps.abs() < cfg.near_zero_v_mps;
        (1..=cfg.ego_reflection_n_max).any(|n| {
            let k = f64::from(n + 1);
            if (dut.range_m - k * dir.range_m).abs() > tol_d {
                return false;
            }
            relaxed || (dut.v_rel_mps - k * dir.v_rel_mps).abs() <= k * cfg.tol_v_mps
        })
    })
}

/// Heuristic for ghosts produced by bounces under a vehicle: several matching
/// detections slightly in front of the DUT, hardly any slightly behind it.
pub fn check_underbody(dut: &Detection, all: &[Detection], cfg: &PipelineConfig) -> bool {
    let (near, far) = cfg.underbody_band_near_m;
    let in_band = |gap: f64| gap >= near && gap <= far;
    let mut closer = 0;
    let mut farther = 0;
    for m in all.iter().filter(|m| m.id != dut.id) {
        if angle_diff(m.azimuth_rad, dut.azimuth_rad).abs() > cfg.tol_alpha_rad
            || (m.v_abs_mps - dut.v_abs_mps).abs() > cfg.tol_v_mps
        {
            continue;
        }
        if in_band(dut.range_m - m.range_m) {
            closer += 1;
        } else if in_band(m.range_m - dut.range_m) {
            farther += 1;
        }
    }
    closer >= cfg.underbody_min_closer && farther <= cfg.underbody_max_farther
}
