//! Search for an object point `O'` and surface point `R'` that explain the DUT
//! as a specular multipath ghost.

use alloc::vec::Vec;

use crate::angle::{angle_diff, AngularSet};
use crate::geometry::{ray_segment_intersection, reflection_point_on_segment, Point2, ReflectionSurface};
use crate::multipath::{
    feasible_heading_set, heading_set_from_speed, mirrored_direction, projected_velocity_interval,
    tangential_velocity_interval, two_bounce_offset, BounceKind, PathKind,
};
use crate::pipeline::config::PipelineConfig;
use crate::types::{Detection, EgoMotion};

struct Candidate {
    det: Detection,
    pos: Point2,
    /// `Γ₁ ∩ Γ₂`; `None` for candidates handled by the stationary branch.
    headings: Option<AngularSet>,
}

/// Per-frame precomputation shared by all DUTs of a frame.
pub(crate) struct SpecularContext<'a> {
    candidates: Vec<Candidate>,
    surfaces: &'a [ReflectionSurface],
    ego: EgoMotion,
    cfg: &'a PipelineConfig,
}

impl<'a> SpecularContext<'a> {
    pub(crate) fn new(
        candidates: &[Detection],
        surfaces: &'a [ReflectionSurface],
        ego: &EgoMotion,
        cfg: &'a PipelineConfig,
    ) -> Self {
        let gamma1 = feasible_heading_set(ego, cfg.delta_max_rad).unwrap_or_default();
        let candidates = candidates
            .iter()
            .map(|det| {
                let headings = (det.v_abs_mps.abs() >= cfg.near_zero_v_mps).then(|| {
                    heading_set_from_speed(det.azimuth_rad, det.v_abs_mps, cfg.v_max_mps)
                        .map(|g2| gamma1.intersect(&g2))
                        .unwrap_or_default()
                });
                Candidate { det: *det, pos: det.position(), headings }
            })
            .collect();
        Self { candidates, surfaces, ego: *ego, cfg }
    }

    /// Does `v_abs_dut` fit the velocities the path over `O'` and `R'` can produce?
    fn velocity_fits(&self, dut: &Detection, cand: &Candidate, alpha_r: f64, omega: f64, kind: PathKind) -> bool {
        let cfg = self.cfg;
        let alpha_o = cand.det.azimuth_rad;
        let mirrored = mirrored_direction(alpha_r, omega);
        let (bounce, offset) = match kind {
            PathKind::T2B3 => (BounceKind::ThreeBounce, 0.0),
            _ => (BounceKind::TwoBounce, two_bounce_offset(cand.det.v_abs_mps, alpha_o, alpha_r, kind, &self.ego)),
        };
        let interval = match &cand.headings {
            None => Some(tangential_velocity_interval(
                alpha_o,
                cand.det.v_abs_mps,
                mirrored,
                cfg.tangential_speed_bound_mps,
                bounce,
                offset,
            )),
            Some(set) => match projected_velocity_interval(alpha_o, cand.det.v_abs_mps, mirrored, set, bounce, offset) {
                Ok(v) => v,
                // Near-tangential candidate: no velocity information, skip it.
                Err(_) => return false,
            },
        };
        interval.is_some_and(|v| v.contains(dut.v_abs_mps, cfg.tol_v_mps))
    }

    /// Type-1 2-bounce: `O'` lies on the DUT's line of sight and in front of it.
    fn type1(&self, dut: &Detection) -> bool {
        let cfg = self.cfg;
        let tol_d = cfg.range_tolerance(dut.range_m);
        for cand in &self.candidates {
            if cand.det.id == dut.id
                || cand.det.range_m >= dut.range_m - cfg.type1_min_gap_m
                || angle_diff(cand.det.azimuth_rad, dut.azimuth_rad).abs() > cfg.tol_alpha_rad
            {
                continue;
            }
            for surface in self.surfaces {
                let Some(r) = reflection_point_on_segment(cand.pos, surface, cfg.extent_slack_m) else {
                    continue;
                };
                let d_pred = 0.5 * (cand.det.range_m + r.norm() + (cand.pos - r).norm());
                if (d_pred - dut.range_m).abs() > tol_d {
                    continue;
                }
                if self.velocity_fits(dut, cand, r.angle(), surface.orientation(), PathKind::T1B2) {
                    return true;
                }
            }
        }
        false
    }

    /// Type-2 (2- or 3-bounce): `R'` is where the DUT's line of sight meets a surface.
    ///
    /// `O'` satisfies the equal-angle condition at `R'` exactly when its mirror
    /// image lies on that line of sight, so the angular residual is measured at
    /// the sensor where it is bounded by the azimuth accuracy.
    fn type2(&self, dut: &Detection) -> bool {
        let cfg = self.cfg;
        let tol_d = cfg.range_tolerance(dut.range_m);
        for surface in self.surfaces {
            let Some(r) = ray_segment_intersection(dut.azimuth_rad, surface, cfg.extent_slack_m) else {
                continue;
            };
            let r_len = r.norm();
            if r_len >= dut.range_m {
                continue;
            }
            let sensor_side = surface.signed_distance(Point2::ORIGIN);
            for cand in &self.candidates {
                if cand.det.id == dut.id {
                    continue;
                }
                let side = surface.signed_distance(cand.pos);
                if side * sensor_side <= 0.0 {
                    continue;
                }
                let image = surface.mirror(cand.pos);
                if angle_diff(image.angle(), dut.azimuth_rad).abs() > cfg.tol_alpha_rad {
                    continue;
                }
                let leg = (cand.pos - r).norm();
                let d3 = r_len + leg;
                let d2 = 0.5 * (cand.det.range_m + d3);
                for (kind, d_pred) in [(PathKind::T2B3, d3), (PathKind::T2B2, d2)] {
                    if (d_pred - dut.range_m).abs() <= tol_d
                        && self.velocity_fits(dut, cand, dut.azimuth_rad, surface.orientation(), kind)
                    {
                        return true;
                    }
                }
            }
        }
        false
    }

    pub(crate) fn check(&self, dut: &Detection) -> bool {
        !self.surfaces.is_empty() && (self.type1(dut) || self.type2(dut))
    }
}

/// True if the DUT can be explained as a specular multipath ghost of one of
/// `candidates` via one of `surfaces`. Stationary candidates are included.
pub fn check_specular(
    dut: &Detection,
    candidates: &[Detection],
    surfaces: &[ReflectionSurface],
    ego: &EgoMotion,
    cfg: &PipelineConfig,
) -> bool {
    if surfaces.is_empty() {
        return false;
    }
    SpecularContext::new(candidates, surfaces, ego, cfg).check(dut)
}
