//! Forward multipath simulator producing measurement frames with ground truth.
//!
//! The world frame is the sensor frame at `t = 0`. The ego drives straight,
//! so sensor axes stay parallel to the world axes and every frame is a pure
//! translation of the world.

mod scenes;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

use crate::angle::wrap;
use crate::error::{Error, Result};
use crate::geometry::{Point2, ReflectionSurface};
use crate::multipath::{direct_observables, two_bounce_observables, type2_3bounce_observables, MirrorGeometry, PathKind};
use crate::types::{compensate_ego_motion, Detection, DetectionId, EgoMotion, MeasurementFrame, TargetMotion};

pub use scenes::{builtin_scene, builtin_scenes, BUILTIN_SCENE_NAMES};

/// `|v_abs|` below which a simulated detection is labeled stationary.
pub const MOVING_THRESHOLD_MPS: f64 = 0.5;

/// RCS loss per additional bounce.
const BOUNCE_LOSS_DB: f64 = 6.0;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct NoiseModel {
    pub sigma_d_m: f64,
    pub sigma_alpha_rad: f64,
    pub sigma_v_mps: f64,
    pub sigma_rcs_dbsm: f64,
    /// Mean number of isolated random detections per frame.
    pub clutter_rate_uniform: f64,
}

impl NoiseModel {
    pub fn is_noiseless(&self) -> bool {
        self.sigma_d_m == 0.0 && self.sigma_alpha_rad == 0.0 && self.sigma_v_mps == 0.0 && self.sigma_rcs_dbsm == 0.0
    }
}

/// Straight ego drive. The vehicle moves along its own x axis; the sensor is
/// mounted with yaw `sensor_yaw_rad`, so in sensor coordinates the ego heads
/// toward `-sensor_yaw_rad`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct EgoTrajectory {
    pub speed_mps: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub accel_mps2: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub sensor_yaw_rad: f64,
}

impl EgoTrajectory {
    pub fn constant(speed_mps: f64) -> Self {
        Self { speed_mps, accel_mps2: 0.0, sensor_yaw_rad: 0.0 }
    }

    fn heading(&self) -> f64 {
        wrap(-self.sensor_yaw_rad)
    }

    /// Speed at `t`, stopping at zero under deceleration.
    pub fn speed_at(&self, t: f64) -> f64 {
        (self.speed_mps + self.accel_mps2 * t).max(0.0)
    }

    fn distance_at(&self, t: f64) -> f64 {
        let t_eff = if self.accel_mps2 < 0.0 { t.min(self.speed_mps / -self.accel_mps2) } else { t };
        self.speed_mps * t_eff + 0.5 * self.accel_mps2 * t_eff * t_eff
    }

    pub fn position_at(&self, t: f64) -> Point2 {
        Point2::from_polar(self.distance_at(t), self.heading())
    }

    pub fn motion_at(&self, t: f64) -> EgoMotion {
        EgoMotion {
            speed_mps: self.speed_at(t),
            heading_rad: self.heading(),
            sensor_yaw_rad: wrap(self.sensor_yaw_rad),
            timestamp_s: t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", deny_unknown_fields))]
pub enum GhostSpec {
    #[cfg_attr(feature = "serde", serde(rename = "ego_reflection"))]
    EgoReflection { n: u32 },
    #[cfg_attr(feature = "serde", serde(rename = "underbody"))]
    Underbody { extra_path_m: f64 },
    #[cfg_attr(feature = "serde", serde(rename = "t1b2"))]
    T1B2 { surface: u32 },
    #[cfg_attr(feature = "serde", serde(rename = "t2b2"))]
    T2B2 { surface: u32 },
    #[cfg_attr(feature = "serde", serde(rename = "t2b3"))]
    T2B3 { surface: u32 },
}

impl GhostSpec {
    pub fn kind(&self) -> ClutterKind {
        match self {
            GhostSpec::EgoReflection { .. } => ClutterKind::EgoReflection,
            GhostSpec::Underbody { .. } => ClutterKind::Underbody,
            GhostSpec::T1B2 { .. } => ClutterKind::T1B2,
            GhostSpec::T2B2 { .. } => ClutterKind::T2B2,
            GhostSpec::T2B3 { .. } => ClutterKind::T2B3,
        }
    }

    fn surface(&self) -> Option<u32> {
        match *self {
            GhostSpec::T1B2 { surface } | GhostSpec::T2B2 { surface } | GhostSpec::T2B3 { surface } => Some(surface),
            _ => None,
        }
    }
}

/// Constant-velocity extended object. Its direct detections are spread
/// across `extent_m` perpendicular to the line of sight, centered on the
/// reference point; ghosts are generated from the reference point.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct TargetSpec {
    pub id: u32,
    pub position: [f64; 2],
    pub speed_mps: f64,
    pub heading_rad: f64,
    pub extent_m: f64,
    pub detections_per_frame: usize,
    pub rcs_dbsm: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub ghosts: Vec<GhostSpec>,
}

impl TargetSpec {
    fn motion(&self) -> TargetMotion {
        TargetMotion { speed_mps: self.speed_mps, heading_rad: wrap(self.heading_rad) }
    }

    fn position_at(&self, t: f64) -> Point2 {
        Point2::new(self.position[0], self.position[1]) + Point2::from_polar(self.speed_mps * t, self.heading_rad)
    }
}

/// World-fixed reflecting segment, optionally with stationary posts.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct SceneSurface {
    pub id: u32,
    pub p0: [f64; 2],
    pub p1: [f64; 2],
    /// Spacing of stationary returns along the segment; 0 disables them.
    #[cfg_attr(feature = "serde", serde(default))]
    pub post_spacing_m: f64,
    #[cfg_attr(feature = "serde", serde(default = "one"))]
    pub post_return_prob: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub post_rcs_dbsm: f64,
}

#[cfg(feature = "serde")]
fn one() -> f64 {
    1.0
}

impl SceneSurface {
    fn world(&self) -> Result<ReflectionSurface> {
        ReflectionSurface::new(Point2::new(self.p0[0], self.p0[1]), Point2::new(self.p1[0], self.p1[1]))
    }

    fn posts(&self) -> Vec<Point2> {
        if !(self.post_spacing_m > 0.0) {
            return Vec::new();
        }
        let p0 = Point2::new(self.p0[0], self.p0[1]);
        let d = Point2::new(self.p1[0], self.p1[1]) - p0;
        let len = d.norm();
        let n = (len / self.post_spacing_m).floor() as usize;
        (0..=n).map(|k| p0 + d * (k as f64 * self.post_spacing_m / len)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct Scene {
    pub name: String,
    pub ego: EgoTrajectory,
    pub targets: Vec<TargetSpec>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub surfaces: Vec<SceneSurface>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub noise: NoiseModel,
    pub frame_count: usize,
    pub frame_dt_s: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub rng_seed: u64,
    #[cfg_attr(feature = "serde", serde(default = "default_fov"))]
    pub fov_half_rad: f64,
    #[cfg_attr(feature = "serde", serde(default = "default_range"))]
    pub max_range_m: f64,
    /// Ghosts and random clutter closer than this to a direct detection are
    /// labeled ambiguous.
    #[cfg_attr(feature = "serde", serde(default = "one"))]
    pub ambiguity_radius_m: f64,
}

pub const DEFAULT_FOV_HALF_RAD: f64 = core::f64::consts::FRAC_PI_3;
pub const DEFAULT_MAX_RANGE_M: f64 = 110.0;

#[cfg(feature = "serde")]
fn default_fov() -> f64 {
    DEFAULT_FOV_HALF_RAD
}

#[cfg(feature = "serde")]
fn default_range() -> f64 {
    DEFAULT_MAX_RANGE_M
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TruthLabel {
    Nonclutter,
    Clutter,
    Stationary,
    /// True class unknowable from the measurement; excluded from evaluation.
    Ambiguous,
}

impl TruthLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            TruthLabel::Nonclutter => "nonclutter",
            TruthLabel::Clutter => "clutter",
            TruthLabel::Stationary => "stationary",
            TruthLabel::Ambiguous => "ambiguous",
        }
    }
}

/// Generating mechanism of a simulated detection; `None` for direct returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ClutterKind {
    #[cfg_attr(feature = "serde", serde(rename = "none"))]
    None,
    #[cfg_attr(feature = "serde", serde(rename = "ego_reflection"))]
    EgoReflection,
    #[cfg_attr(feature = "serde", serde(rename = "underbody"))]
    Underbody,
    #[cfg_attr(feature = "serde", serde(rename = "t1b2"))]
    T1B2,
    #[cfg_attr(feature = "serde", serde(rename = "t2b2"))]
    T2B2,
    #[cfg_attr(feature = "serde", serde(rename = "t2b3"))]
    T2B3,
    #[cfg_attr(feature = "serde", serde(rename = "random"))]
    Random,
}

impl ClutterKind {
    pub const ALL: [ClutterKind; 7] = [
        ClutterKind::None,
        ClutterKind::EgoReflection,
        ClutterKind::Underbody,
        ClutterKind::T1B2,
        ClutterKind::T2B2,
        ClutterKind::T2B3,
        ClutterKind::Random,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ClutterKind::None => "none",
            ClutterKind::EgoReflection => "ego_reflection",
            ClutterKind::Underbody => "underbody",
            ClutterKind::T1B2 => "t1b2",
            ClutterKind::T2B2 => "t2b2",
            ClutterKind::T2B3 => "t2b3",
            ClutterKind::Random => "random",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TruthEntry {
    pub id: DetectionId,
    pub label: TruthLabel,
    pub kind: ClutterKind,
    pub target: Option<u32>,
    pub surface: Option<u32>,
}

/// Labels of one frame, sorted by id, plus the surfaces in that frame's sensor coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub frame_index: u64,
    pub entries: Vec<TruthEntry>,
    pub surfaces: Vec<(u32, ReflectionSurface)>,
}

impl GroundTruth {
    pub fn surface_list(&self) -> Vec<ReflectionSurface> {
        self.surfaces.iter().map(|(_, s)| *s).collect()
    }
}

/// Detection before noise, ids and labels.
struct Raw {
    range_m: f64,
    azimuth_rad: f64,
    v_rel_mps: f64,
    rcs_dbsm: f64,
    kind: ClutterKind,
    target: Option<u32>,
    surface: Option<u32>,
    /// Object is moving (direct returns) or the return is a ghost.
    moving_object: bool,
}

impl Scene {
    pub fn validate(&self) -> Result<()> {
        if !(self.frame_dt_s > 0.0) || !self.frame_dt_s.is_finite() {
            return Err(Error::Scene("frame_dt_s must be positive".into()));
        }
        if !(self.fov_half_rad > 0.0 && self.fov_half_rad <= core::f64::consts::PI) {
            return Err(Error::Scene("fov_half_rad must lie in (0, pi]".into()));
        }
        if !(self.max_range_m > 0.0) || !(self.ambiguity_radius_m >= 0.0) {
            return Err(Error::Scene("max_range_m must be positive, ambiguity_radius_m non-negative".into()));
        }
        if !(self.ego.speed_mps >= 0.0) || !self.ego.accel_mps2.is_finite() || !self.ego.sensor_yaw_rad.is_finite() {
            return Err(Error::Scene("ego speed must be non-negative and finite".into()));
        }
        let n = self.noise;
        if [n.sigma_d_m, n.sigma_alpha_rad, n.sigma_v_mps, n.sigma_rcs_dbsm, n.clutter_rate_uniform]
            .iter()
            .any(|v| !(*v >= 0.0) || !v.is_finite())
        {
            return Err(Error::Scene("noise parameters must be non-negative".into()));
        }
        for s in &self.surfaces {
            s.world().map_err(|e| Error::Scene(format!("surface {}: {e}", s.id)))?;
            if !(0.0..=1.0).contains(&s.post_return_prob) || !(s.post_spacing_m >= 0.0) {
                return Err(Error::Scene(format!("surface {}: invalid post parameters", s.id)));
            }
            if self.surfaces.iter().filter(|o| o.id == s.id).count() > 1 {
                return Err(Error::Scene(format!("duplicate surface id {}", s.id)));
            }
        }
        for t in &self.targets {
            if !(t.extent_m >= 0.0) || !(t.speed_mps >= 0.0) || t.detections_per_frame == 0 {
                return Err(Error::Scene(format!(
                    "target {}: extent and speed must be non-negative, at least one detection per frame",
                    t.id
                )));
            }
            for g in &t.ghosts {
                if let Some(sid) = g.surface() {
                    if !self.surfaces.iter().any(|s| s.id == sid) {
                        return Err(Error::Scene(format!("target {} references missing surface {sid}", t.id)));
                    }
                }
                match *g {
                    GhostSpec::EgoReflection { n: 0 } => {
                        return Err(Error::Scene(format!("target {}: ego reflection order must be >= 1", t.id)))
                    }
                    GhostSpec::Underbody { extra_path_m } if !(extra_path_m > 0.0) => {
                        return Err(Error::Scene(format!("target {}: underbody extra path must be positive", t.id)))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Mirror image across the world x axis.
    pub fn mirrored(&self) -> Scene {
        let mut s = self.clone();
        s.name = format!("{}-mirrored", self.name);
        s.ego.sensor_yaw_rad = -s.ego.sensor_yaw_rad;
        for t in &mut s.targets {
            t.position[1] = -t.position[1];
            t.heading_rad = -t.heading_rad;
        }
        for sf in &mut s.surfaces {
            sf.p0[1] = -sf.p0[1];
            sf.p1[1] = -sf.p1[1];
        }
        s
    }

    pub fn timestamp(&self, frame: usize) -> f64 {
        frame as f64 * self.frame_dt_s
    }

    /// Surfaces in the sensor frame of `frame`.
    pub fn surfaces_at(&self, frame: usize) -> Result<Vec<(u32, ReflectionSurface)>> {
        let s = self.ego.position_at(self.timestamp(frame));
        self.surfaces
            .iter()
            .map(|sf| {
                let w = sf.world()?;
                Ok((sf.id, ReflectionSurface::new(w.p0() - s, w.p1() - s)?))
            })
            .collect()
    }

    fn visible(&self, p: Point2) -> bool {
        let d = p.norm();
        d > 0.0 && d <= self.max_range_m && p.angle().abs() <= self.fov_half_rad
    }
}

/// Runs the scene and returns per frame the measurements and their ground truth.
pub fn simulate(scene: &Scene) -> Result<Vec<(MeasurementFrame, GroundTruth)>> {
    scene.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(scene.rng_seed);
    let posts: Vec<(u32, f64, Vec<Point2>)> =
        scene.surfaces.iter().map(|s| (s.id, s.post_rcs_dbsm, s.posts())).collect();
    let prob: Vec<f64> = scene.surfaces.iter().map(|s| s.post_return_prob).collect();
    let clutter = if scene.noise.clutter_rate_uniform > 0.0 {
        Some(Poisson::new(scene.noise.clutter_rate_uniform).map_err(|_| Error::Scene("invalid clutter rate".into()))?)
    } else {
        None
    };

    let mut out = Vec::with_capacity(scene.frame_count);
    for k in 0..scene.frame_count {
        let t = scene.timestamp(k);
        let ego = scene.ego.motion_at(t);
        let sensor = scene.ego.position_at(t);
        let surfaces = scene.surfaces_at(k)?;
        let mut raws: Vec<Raw> = Vec::new();
        // True positions of direct returns of moving and stationary targets.
        let mut footprint: Vec<Point2> = Vec::new();

        for target in &scene.targets {
            let motion = target.motion();
            let o = target.position_at(t) - sensor;
            if o.norm() <= 0.0 {
                continue;
            }
            let normal = Point2::from_polar(1.0, o.angle() + core::f64::consts::FRAC_PI_2);
            let n = target.detections_per_frame;
            for i in 0..n {
                let s = if n == 1 { 0.0 } else { target.extent_m * (i as f64 / (n - 1) as f64 - 0.5) };
                let p = o + normal * s;
                if !scene.visible(p) {
                    continue;
                }
                let obs = direct_observables(p, &motion, &ego)?;
                footprint.push(p);
                raws.push(Raw {
                    range_m: obs.range_m,
                    azimuth_rad: obs.azimuth_rad,
                    v_rel_mps: obs.v_rel_mps,
                    rcs_dbsm: target.rcs_dbsm,
                    kind: ClutterKind::None,
                    target: Some(target.id),
                    surface: None,
                    moving_object: target.speed_mps > 0.0,
                });
            }
            if !scene.visible(o) {
                continue;
            }
            let direct = direct_observables(o, &motion, &ego)?;
            for ghost in &target.ghosts {
                let generated = match *ghost {
                    GhostSpec::EgoReflection { n } => {
                        let f = (n + 1) as f64;
                        Some((f * direct.range_m, direct.azimuth_rad, f * direct.v_rel_mps, n as f64, None))
                    }
                    GhostSpec::Underbody { extra_path_m } => {
                        Some((direct.range_m + extra_path_m, direct.azimuth_rad, direct.v_rel_mps, 1.0, None))
                    }
                    GhostSpec::T1B2 { surface: sid } | GhostSpec::T2B2 { surface: sid } | GhostSpec::T2B3 { surface: sid } => {
                        let (_, surface) = surfaces.iter().find(|(id, _)| *id == sid).expect("validated surface id");
                        MirrorGeometry::from_surface(o, surface, 0.0)
                            .filter(|g| scene.visible(g.r_vec()))
                            .map(|g| -> Result<_> {
                                let obs = match ghost {
                                    GhostSpec::T2B3 { .. } => type2_3bounce_observables(&g, &motion, &ego),
                                    GhostSpec::T1B2 { .. } => two_bounce_observables(&g, &motion, &ego, PathKind::T1B2)?,
                                    _ => two_bounce_observables(&g, &motion, &ego, PathKind::T2B2)?,
                                };
                                let bounces = if obs.kind == PathKind::T2B3 { 2.0 } else { 1.0 };
                                Ok((obs.range_m, obs.azimuth_rad, obs.v_rel_mps, bounces, Some(sid)))
                            })
                            .transpose()?
                    }
                };
                let Some((d, alpha, v_rel, bounces, surface)) = generated else { continue };
                if d > scene.max_range_m || alpha.abs() > scene.fov_half_rad {
                    continue;
                }
                raws.push(Raw {
                    range_m: d,
                    azimuth_rad: alpha,
                    v_rel_mps: v_rel,
                    rcs_dbsm: target.rcs_dbsm - BOUNCE_LOSS_DB * bounces,
                    kind: ghost.kind(),
                    target: Some(target.id),
                    surface,
                    moving_object: true,
                });
            }
        }

        for ((sid, rcs, pts), &p_ret) in posts.iter().zip(&prob) {
            for w in pts {
                let p = *w - sensor;
                // Draw for every post so visibility does not shift the random stream.
                let returned = rng.random::<f64>() < p_ret;
                if !returned || !scene.visible(p) {
                    continue;
                }
                let obs = direct_observables(p, &TargetMotion::stationary(), &ego)?;
                raws.push(Raw {
                    range_m: obs.range_m,
                    azimuth_rad: obs.azimuth_rad,
                    v_rel_mps: obs.v_rel_mps,
                    rcs_dbsm: *rcs,
                    kind: ClutterKind::None,
                    target: None,
                    surface: Some(*sid),
                    moving_object: false,
                });
            }
        }

        if let Some(dist) = &clutter {
            let count = dist.sample(&mut rng) as usize;
            for _ in 0..count {
                let d = rng.random_range(3.0..scene.max_range_m);
                let alpha = rng.random_range(-scene.fov_half_rad..scene.fov_half_rad);
                let v_abs: f64 = rng.random_range(1.0..25.0) * if rng.random::<bool>() { 1.0 } else { -1.0 };
                raws.push(Raw {
                    range_m: d,
                    azimuth_rad: alpha,
                    v_rel_mps: v_abs - ego.radial_component(alpha),
                    rcs_dbsm: rng.random_range(-5.0..10.0),
                    kind: ClutterKind::Random,
                    target: None,
                    surface: None,
                    moving_object: true,
                });
            }
        }

        raws.shuffle(&mut rng);
        let noise = scene.noise;
        let mut gauss = |sigma: f64| if sigma > 0.0 { sigma * rng.sample::<f64, _>(StandardNormal) } else { 0.0 };
        let mut dets = Vec::with_capacity(raws.len());
        let mut entries = Vec::with_capacity(raws.len());
        for (i, raw) in raws.iter().enumerate() {
            let id = DetectionId(i as u32);
            let true_pos = Point2::from_polar(raw.range_m, raw.azimuth_rad);
            let d = (raw.range_m + gauss(noise.sigma_d_m)).max(0.0);
            let alpha = wrap(raw.azimuth_rad + gauss(noise.sigma_alpha_rad));
            let v_rel = raw.v_rel_mps + gauss(noise.sigma_v_mps);
            let rcs = raw.rcs_dbsm + gauss(noise.sigma_rcs_dbsm);
            let v_abs = compensate_ego_motion(v_rel, alpha, &ego);
            dets.push(Detection::new(id, d, alpha, v_rel, v_abs, rcs)?);

            let label = if v_abs.abs() < MOVING_THRESHOLD_MPS {
                TruthLabel::Stationary
            } else if raw.kind == ClutterKind::None {
                if raw.moving_object {
                    TruthLabel::Nonclutter
                } else {
                    TruthLabel::Ambiguous
                }
            } else if footprint.iter().any(|f| f.distance(true_pos) < scene.ambiguity_radius_m) {
                TruthLabel::Ambiguous
            } else {
                TruthLabel::Clutter
            };
            entries.push(TruthEntry { id, label, kind: raw.kind, target: raw.target, surface: raw.surface });
        }

        let frame = MeasurementFrame { frame_index: k as u64, timestamp_s: t, ego: Some(ego), detections: dets };
        out.push((frame, GroundTruth { frame_index: k as u64, entries, surfaces }));
    }
    Ok(out)
}
