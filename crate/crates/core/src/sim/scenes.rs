use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{EgoTrajectory, GhostSpec, NoiseModel, Scene, SceneSurface, TargetSpec, DEFAULT_FOV_HALF_RAD, DEFAULT_MAX_RANGE_M};
use crate::error::{Error, Result};

pub const BUILTIN_SCENE_NAMES: [&str; 5] =
    ["guardrail-left", "ego-bounce", "truck-underbody", "combined-all-ghosts", "dense-low-speed"];

const DT: f64 = 0.06;

fn base(name: &str, ego: EgoTrajectory, frame_count: usize, seed: u64) -> Scene {
    Scene {
        name: String::from(name),
        ego,
        targets: Vec::new(),
        surfaces: Vec::new(),
        noise: NoiseModel::default(),
        frame_count,
        frame_dt_s: DT,
        rng_seed: seed,
        fov_half_rad: DEFAULT_FOV_HALF_RAD,
        max_range_m: DEFAULT_MAX_RANGE_M,
        ambiguity_radius_m: 1.0,
    }
}

fn car(id: u32, x: f64, y: f64, speed: f64, heading: f64, ghosts: Vec<GhostSpec>) -> TargetSpec {
    TargetSpec {
        id,
        position: [x, y],
        speed_mps: speed,
        heading_rad: heading,
        extent_m: 1.2,
        detections_per_frame: 3,
        rcs_dbsm: 10.0,
        ghosts,
    }
}

fn rail(id: u32, p0: [f64; 2], p1: [f64; 2]) -> SceneSurface {
    SceneSurface { id, p0, p1, post_spacing_m: 1.0, post_return_prob: 0.9, post_rcs_dbsm: 0.0 }
}

fn specular(surface: u32) -> Vec<GhostSpec> {
    vec![GhostSpec::T1B2 { surface }, GhostSpec::T2B2 { surface }, GhostSpec::T2B3 { surface }]
}

/// Vehicle ahead next to a finite guardrail on the left.
fn guardrail_left() -> Scene {
    let mut s = base("guardrail-left", EgoTrajectory::constant(25.0), 45, 11);
    s.surfaces.push(rail(1, [8.0, 6.0], [105.0, 6.0]));
    s.targets.push(car(1, 70.0, 2.0, 20.0, 0.0, specular(1)));
    s
}

/// Lead car at the ego's speed, seen again after one bounce off the ego.
fn ego_bounce() -> Scene {
    let mut s = base("ego-bounce", EgoTrajectory::constant(20.0), 80, 12);
    s.targets.push(car(1, 45.0, 0.0, 20.0, 0.0, vec![GhostSpec::EgoReflection { n: 1 }]));
    s
}

/// Truck ahead with an underbody ghost behind its rear.
fn truck_underbody() -> Scene {
    let mut s = base("truck-underbody", EgoTrajectory::constant(15.0), 80, 13);
    s.targets.push(TargetSpec {
        id: 1,
        position: [35.0, -3.5],
        speed_mps: 13.0,
        heading_rad: 0.0,
        extent_m: 2.5,
        detections_per_frame: 7,
        rcs_dbsm: 15.0,
        ghosts: vec![GhostSpec::Underbody { extra_path_m: 4.0 }],
    });
    s
}

/// Every ghost kind at once along a long guardrail.
fn combined() -> Scene {
    let mut s = base("combined-all-ghosts", EgoTrajectory::constant(20.0), 100, 14);
    s.surfaces.push(rail(1, [-10.0, 6.0], [400.0, 6.0]));
    s.targets.push(car(1, 60.0, 2.0, 16.0, 0.0, specular(1)));
    s.targets.push(car(2, 25.0, -1.0, 20.0, 0.0, vec![GhostSpec::EgoReflection { n: 1 }]));
    s.targets.push(TargetSpec {
        id: 3,
        position: [60.0, -8.0],
        speed_mps: 19.0,
        heading_rad: 0.0,
        extent_m: 2.0,
        detections_per_frame: 5,
        rcs_dbsm: 15.0,
        ghosts: vec![GhostSpec::Underbody { extra_path_m: 5.0 }],
    });
    s.targets.push(car(4, 12.0, -2.5, 20.0, 0.0, vec![GhostSpec::T1B2 { surface: 1 }]));
    s
}

/// Slow traffic near an intersection with a railing on the right.
fn dense_low_speed() -> Scene {
    let mut s = base("dense-low-speed", EgoTrajectory::constant(3.0), 80, 15);
    s.surfaces.push(rail(1, [0.0, -6.0], [80.0, -6.0]));
    s.targets.push(car(1, 12.0, -2.0, 2.0, 0.0, vec![GhostSpec::T2B3 { surface: 1 }]));
    s.targets.push(car(2, 35.0, 4.0, 4.0, PI, vec![GhostSpec::T2B2 { surface: 1 }, GhostSpec::T2B3 { surface: 1 }]));
    s.targets.push(car(3, 70.0, 20.0, 3.0, -PI / 2.0, vec![]));
    s.targets.push(car(4, 22.0, 1.0, 1.5, 0.0, vec![GhostSpec::T1B2 { surface: 1 }, GhostSpec::T2B3 { surface: 1 }]));
    s
}

/// All built-in scenes, noiseless.
pub fn builtin_scenes() -> Vec<Scene> {
    vec![guardrail_left(), ego_bounce(), truck_underbody(), combined(), dense_low_speed()]
}

pub fn builtin_scene(name: &str) -> Result<Scene> {
    builtin_scenes()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownScene(String::from(name)))
}
