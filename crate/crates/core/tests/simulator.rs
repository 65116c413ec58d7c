use ghostscan::sim::{ClutterKind, NoiseModel, Scene, TruthLabel, BUILTIN_SCENE_NAMES};
use ghostscan::{builtin_scene, extract_surfaces, simulate, ExtractionConfig, Point2};

/// Sensor-relative reference point of target `id` at frame `k`, from the scene description alone.
fn reference_point(scene: &Scene, id: u32, k: usize) -> Point2 {
    let t = scene.timestamp(k);
    let spec = scene.targets.iter().find(|x| x.id == id).unwrap();
    let world = Point2::new(spec.position[0], spec.position[1]) + Point2::from_polar(spec.speed_mps * t, spec.heading_rad);
    world - scene.ego.position_at(t)
}

#[test]
fn deterministic_under_seed() {
    let mut scene = builtin_scene("combined-all-ghosts").unwrap();
    scene.noise = NoiseModel { sigma_d_m: 0.2, sigma_alpha_rad: 0.01, sigma_v_mps: 0.3, sigma_rcs_dbsm: 1.0, clutter_rate_uniform: 3.0 };
    let a = simulate(&scene).unwrap();
    assert_eq!(a, simulate(&scene).unwrap());
    scene.rng_seed += 1;
    assert_ne!(a, simulate(&scene).unwrap());
}

#[test]
fn truth_covers_every_detection_once() {
    for name in BUILTIN_SCENE_NAMES {
        for (frame, gt) in simulate(&builtin_scene(name).unwrap()).unwrap() {
            assert_eq!(frame.detections.len(), gt.entries.len());
            for (i, (d, t)) in frame.detections.iter().zip(&gt.entries).enumerate() {
                assert_eq!(d.id.0 as usize, i);
                assert_eq!(t.id, d.id);
            }
            frame.validate().unwrap();
        }
    }
}

#[test]
fn guardrail_t2b3_matches_mirror_image() {
    let scene = builtin_scene("guardrail-left").unwrap();
    let (frame, gt) = &simulate(&scene).unwrap()[0];
    // Target at (70, 2), surface y = 6: the image of the target is (70, 10).
    let image = Point2::new(70.0, 10.0);
    let ghost = frame.detections[gt.entries.iter().position(|t| t.kind == ClutterKind::T2B3).unwrap()];
    assert!((ghost.range_m - image.norm()).abs() < 1e-6);
    assert!((ghost.azimuth_rad - image.angle()).abs() < 1e-9);
}

#[test]
fn ego_bounce_ghost_doubles_range_and_velocity() {
    let scene = builtin_scene("ego-bounce").unwrap();
    for (k, (frame, gt)) in simulate(&scene).unwrap().iter().enumerate() {
        let o = reference_point(&scene, 1, k);
        let direct = frame
            .detections
            .iter()
            .zip(&gt.entries)
            .filter(|(_, t)| t.kind == ClutterKind::None)
            .map(|(d, _)| *d)
            .min_by(|a, b| a.range_m.total_cmp(&b.range_m))
            .unwrap();
        assert!((direct.range_m - o.norm()).abs() < 1e-9);
        let ghost = frame.detections[gt.entries.iter().position(|t| t.kind == ClutterKind::EgoReflection).unwrap()];
        assert!((ghost.range_m - 2.0 * direct.range_m).abs() < 1e-9);
        assert!((ghost.v_rel_mps - 2.0 * direct.v_rel_mps).abs() < 1e-9);
        assert_eq!(ghost.azimuth_rad, direct.azimuth_rad);
    }
}

#[test]
fn specular_and_underbody_ghosts_lie_behind_their_target() {
    for name in BUILTIN_SCENE_NAMES {
        let scene = builtin_scene(name).unwrap();
        for (frame, gt) in simulate(&scene).unwrap() {
            for (d, t) in frame.detections.iter().zip(&gt.entries) {
                if matches!(t.kind, ClutterKind::None | ClutterKind::EgoReflection | ClutterKind::Random) {
                    continue;
                }
                let nearest = frame
                    .detections
                    .iter()
                    .zip(&gt.entries)
                    .filter(|(_, u)| u.kind == ClutterKind::None && u.target == t.target)
                    .map(|(x, _)| x.range_m)
                    .fold(f64::INFINITY, f64::min);
                assert!(d.range_m > nearest, "{name}: {t:?}");
            }
        }
    }
}

#[test]
fn noiseless_ghosts_follow_the_mirror_image() {
    for name in BUILTIN_SCENE_NAMES {
        let scene = builtin_scene(name).unwrap();
        for (k, (frame, gt)) in simulate(&scene).unwrap().iter().enumerate() {
            for (d, t) in frame.detections.iter().zip(&gt.entries) {
                let Some(sid) = t.surface else { continue };
                if t.target.is_none() {
                    continue;
                }
                let o = reference_point(&scene, t.target.unwrap(), k);
                let s = gt.surfaces.iter().find(|(id, _)| *id == sid).unwrap().1;
                let image = s.mirror(o);
                let expected = match t.kind {
                    ClutterKind::T2B3 => image.norm(),
                    ClutterKind::T1B2 | ClutterKind::T2B2 => 0.5 * (o.norm() + image.norm()),
                    k => panic!("kind {k:?} has no surface"),
                };
                assert!((d.range_m - expected).abs() < 1e-6, "{name} frame {k}");
                let alpha = if t.kind == ClutterKind::T1B2 { o.angle() } else { image.angle() };
                assert!((d.azimuth_rad - alpha).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn posts_are_stationary_truth() {
    let (frame, gt) = &simulate(&builtin_scene("guardrail-left").unwrap()).unwrap()[3];
    let posts: Vec<_> = frame.detections.iter().zip(&gt.entries).filter(|(_, t)| t.target.is_none()).collect();
    assert!(posts.len() > 50);
    assert!(posts.iter().all(|(d, t)| t.label == TruthLabel::Stationary && d.v_abs_mps.abs() < 1e-9));
}

#[test]
fn mirrored_scene_mirrors_detections() {
    let scene = builtin_scene("dense-low-speed").unwrap();
    let a = simulate(&scene).unwrap();
    let b = simulate(&scene.mirrored()).unwrap();
    let key = |f: &ghostscan::MeasurementFrame, gt: &ghostscan::sim::GroundTruth, sign: f64| {
        let mut v: Vec<(i64, i64, ClutterKind)> = f
            .detections
            .iter()
            .zip(&gt.entries)
            .map(|(d, t)| ((d.range_m * 1e6).round() as i64, (sign * d.azimuth_rad * 1e6).round() as i64, t.kind))
            .collect();
        v.sort();
        v
    };
    for ((fa, ga), (fb, gb)) in a.iter().zip(&b) {
        assert_eq!(key(fa, ga, 1.0), key(fb, gb, -1.0));
    }
}

#[test]
fn guardrail_surface_is_recovered() {
    let scene = builtin_scene("guardrail-left").unwrap();
    let out = simulate(&scene).unwrap();
    let frames: Vec<_> = out[..5].iter().map(|(f, _)| f).collect();
    let found = extract_surfaces(frames, &ExtractionConfig::default()).unwrap();
    assert_eq!(found.len(), 1);
    let truth = out[4].1.surfaces[0].1;
    assert!((found[0].orientation() - truth.orientation()).abs() < 0.05);
}

#[test]
fn builtins_are_noiseless() {
    for name in BUILTIN_SCENE_NAMES {
        let scene = builtin_scene(name).unwrap();
        assert!(scene.noise.is_noiseless() && scene.noise.clutter_rate_uniform == 0.0);
    }
}
