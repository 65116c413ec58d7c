use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};

/// Piecewise-linear minimum RCS (dBsm) as a function of range, held constant
/// beyond the first and last knots.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct RcsCurve {
    knots: Vec<(f64, f64)>,
}

impl RcsCurve {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        let curve = Self { knots };
        curve.validate()?;
        Ok(curve)
    }

    /// Accepts every detection.
    pub fn permissive() -> Self {
        Self { knots: vec![(0.0, f64::NEG_INFINITY)] }
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    fn validate(&self) -> Result<()> {
        if self.knots.is_empty() {
            return Err(Error::Config("rcs_curve needs at least one knot".into()));
        }
        if self.knots.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::Config("rcs_curve ranges must be strictly increasing".into()));
        }
        Ok(())
    }

    pub fn min_rcs(&self, range_m: f64) -> f64 {
        let k = &self.knots;
        if range_m <= k[0].0 {
            return k[0].1;
        }
        for w in k.windows(2) {
            let ((r0, v0), (r1, v1)) = (w[0], w[1]);
            if range_m <= r1 {
                return v0 + (v1 - v0) * (range_m - r0) / (r1 - r0);
            }
        }
        k[k.len() - 1].1
    }
}

impl Default for RcsCurve {
    /// -10 dBsm up to 40 m, falling linearly to -20 dBsm at 110 m.
    fn default() -> Self {
        Self { knots: vec![(0.0, -10.0), (40.0, -10.0), (110.0, -20.0)] }
    }
}

/// Thresholds of the classification chain. Every tolerance is explicit; none
/// is derived from data.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct PipelineConfig {
    pub moving_threshold_mps: f64,
    pub rcs_curve: RcsCurve,
    /// Frames searched by the similarity check, current frame included.
    pub buffer_len: usize,
    pub similarity_min_count: usize,
    pub similarity_base_radius_m: f64,
    pub tangential_speed_bound_mps: f64,
    pub ego_reflection_n_max: u32,
    pub rel_tol_d: f64,
    pub abs_tol_d_m: f64,
    pub tol_v_mps: f64,
    pub tol_alpha_rad: f64,
    pub near_zero_v_mps: f64,
    pub underbody_min_closer: usize,
    pub underbody_max_farther: usize,
    /// Range offsets, in meters, that count as "slightly closer" or "slightly farther".
    pub underbody_band_near_m: (f64, f64),
    pub delta_max_rad: f64,
    pub v_max_mps: f64,
    /// Slack beyond each segment end within which a reflection point is accepted.
    pub extent_slack_m: f64,
    /// A type-1 object candidate must be at least this much closer than the DUT.
    pub type1_min_gap_m: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            moving_threshold_mps: 0.5,
            rcs_curve: RcsCurve::default(),
            buffer_len: 4,
            similarity_min_count: 2,
            similarity_base_radius_m: 1.5,
            tangential_speed_bound_mps: 8.0,
            ego_reflection_n_max: 2,
            rel_tol_d: 0.05,
            abs_tol_d_m: 1.0,
            tol_v_mps: 0.75,
            tol_alpha_rad: 0.035,
            near_zero_v_mps: 0.5,
            underbody_min_closer: 3,
            underbody_max_farther: 1,
            underbody_band_near_m: (1.0, 8.0),
            delta_max_rad: FRAC_PI_4,
            v_max_mps: 60.0,
            extent_slack_m: 0.5,
            type1_min_gap_m: 0.5,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("moving_threshold_mps", self.moving_threshold_mps),
            ("similarity_base_radius_m", self.similarity_base_radius_m),
            ("tangential_speed_bound_mps", self.tangential_speed_bound_mps),
            ("rel_tol_d", self.rel_tol_d),
            ("abs_tol_d_m", self.abs_tol_d_m),
            ("tol_v_mps", self.tol_v_mps),
            ("tol_alpha_rad", self.tol_alpha_rad),
            ("near_zero_v_mps", self.near_zero_v_mps),
            ("v_max_mps", self.v_max_mps),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be positive and finite")));
            }
        }
        if !(self.extent_slack_m >= 0.0) || !(self.type1_min_gap_m >= 0.0) {
            return Err(Error::Config("extent_slack_m and type1_min_gap_m must be non-negative".into()));
        }
        if self.buffer_len == 0 {
            return Err(Error::Config("buffer_len must be at least 1".into()));
        }
        if self.ego_reflection_n_max < 1 {
            return Err(Error::Config("ego_reflection_n_max must be at least 1".into()));
        }
        if !(0.0..=core::f64::consts::FRAC_PI_2).contains(&self.delta_max_rad) {
            return Err(Error::Config("delta_max_rad must lie in [0, pi/2]".into()));
        }
        let (lo, hi) = self.underbody_band_near_m;
        if !(lo >= 0.0 && hi > lo) {
            return Err(Error::Config("underbody_band_near_m must satisfy 0 <= lo < hi".into()));
        }
        self.rcs_curve.validate()
    }

    /// Range tolerance at `range_m`, combining the absolute and relative terms.
    pub fn range_tolerance(&self, range_m: f64) -> f64 {
        self.abs_tol_d_m.max(self.rel_tol_d * range_m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_curve_shape() {
        let c = RcsCurve::default();
        assert_eq!(c.min_rcs(0.0), -10.0);
        assert_eq!(c.min_rcs(40.0), -10.0);
        assert!((c.min_rcs(75.0) + 15.0).abs() < 1e-12);
        assert_eq!(c.min_rcs(110.0), -20.0);
        assert_eq!(c.min_rcs(500.0), -20.0);
    }

    #[test]
    fn unsorted_curve_rejected() {
        assert!(RcsCurve::new(vec![(10.0, 0.0), (5.0, 1.0)]).is_err());
        assert!(RcsCurve::new(vec![]).is_err());
    }

    #[test]
    fn default_config_is_valid() {
        PipelineConfig::default().validate().unwrap();
        let bad = PipelineConfig { tol_v_mps: 0.0, ..PipelineConfig::default() };
        assert!(bad.validate().is_err());
        let bad = PipelineConfig { ego_reflection_n_max: 0, ..PipelineConfig::default() };
        assert!(bad.validate().is_err());
        let bad = PipelineConfig { delta_max_rad: 2.0, ..PipelineConfig::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn range_tolerance_switches_regime() {
        let c = PipelineConfig::default();
        assert_eq!(c.range_tolerance(10.0), 1.0);
        assert!((c.range_tolerance(100.0) - 5.0).abs() < 1e-12);
    }
}
