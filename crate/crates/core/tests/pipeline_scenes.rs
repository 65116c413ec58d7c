use std::collections::HashMap;

use ghostscan::multipath::{direct_observables, type2_3bounce_observables};
use ghostscan::pipeline::{check_specular, project_back, similarity_search};
use ghostscan::sim::{ClutterKind, GroundTruth, TruthLabel};
use ghostscan::{
    builtin_scene, classify_frame, simulate, Cause, Detection, DetectionId, EgoMotion, FrameBuffer, Label,
    MeasurementFrame, MirrorGeometry, PipelineConfig, Point2, ReflectionSurface, SequenceClassifier, TargetMotion,
    Verdict,
};

fn run_scene(name: &str) -> Vec<(Vec<Verdict>, GroundTruth)> {
    let scene = builtin_scene(name).unwrap();
    let mut seq = SequenceClassifier::new(PipelineConfig::default()).unwrap();
    simulate(&scene)
        .unwrap()
        .into_iter()
        .map(|(frame, gt)| (seq.process(frame, &gt.surface_list()).unwrap(), gt))
        .collect()
}

fn det_from(id: u32, d: f64, alpha: f64, v_rel: f64, ego: &EgoMotion) -> Detection {
    let v_abs = ghostscan::compensate_ego_motion(v_rel, alpha, ego);
    Detection::new(DetectionId(id), d, alpha, v_rel, v_abs, 10.0).unwrap()
}

#[test]
fn ego_bounce_ghost_is_ego_reflection() {
    // Skip the frames that lack enough history for the similarity search.
    for (verdicts, gt) in run_scene("ego-bounce").into_iter().skip(2) {
        for (v, t) in verdicts.iter().zip(&gt.entries) {
            match t.kind {
                ClutterKind::EgoReflection => assert_eq!(v.cause, Cause::EgoReflection),
                ClutterKind::None => assert_eq!(v.label, Label::Nonclutter),
                k => panic!("unexpected kind {k:?}"),
            }
        }
    }
}

#[test]
fn guardrail_ghosts_are_specular() {
    let mut seen = HashMap::new();
    // The first two frames lack enough history for the similarity search.
    for (verdicts, gt) in run_scene("guardrail-left").into_iter().skip(2) {
        for (v, t) in verdicts.iter().zip(&gt.entries) {
            match (t.kind, t.label) {
                (ClutterKind::T2B2 | ClutterKind::T2B3, TruthLabel::Clutter) => {
                    assert_eq!(v.cause, Cause::Specular);
                    *seen.entry(t.kind).or_insert(0) += 1;
                }
                (ClutterKind::None, TruthLabel::Nonclutter) => assert_eq!(v.label, Label::Nonclutter),
                (ClutterKind::None, TruthLabel::Stationary) => assert_eq!(v.label, Label::Stationary),
                _ => {}
            }
        }
    }
    assert!(seen[&ClutterKind::T2B2] > 30 && seen[&ClutterKind::T2B3] > 30);
}

#[test]
fn noiseless_completeness_on_every_builtin() {
    for name in ghostscan::sim::BUILTIN_SCENE_NAMES {
        for (verdicts, gt) in run_scene(name) {
            assert_eq!(verdicts.len(), gt.entries.len());
            for (v, t) in verdicts.iter().zip(&gt.entries) {
                assert_eq!(v.id, t.id);
                match t.label {
                    TruthLabel::Clutter => assert_eq!(v.label, Label::Clutter, "{name} frame {} {t:?}", gt.frame_index),
                    TruthLabel::Nonclutter => {
                        assert_eq!(v.label, Label::Nonclutter, "{name} frame {} {t:?} {v:?}", gt.frame_index)
                    }
                    TruthLabel::Stationary => assert_eq!(v.label, Label::Stationary),
                    TruthLabel::Ambiguous => {}
                }
            }
        }
    }
}

#[test]
fn specular_round_trip_and_violation() {
    let ego = EgoMotion::new(25.0, 0.0, 0.0, 0.0).unwrap();
    let target = TargetMotion::new(20.0, 0.0).unwrap();
    let o = Point2::new(70.0, 2.0);
    let s = ReflectionSurface::new(Point2::new(0.0, 6.0), Point2::new(100.0, 6.0)).unwrap();
    let g = MirrorGeometry::from_surface(o, &s, 0.0).unwrap();
    let direct = direct_observables(o, &target, &ego).unwrap();
    let ghost = type2_3bounce_observables(&g, &target, &ego);
    let o_det = det_from(0, direct.range_m, direct.azimuth_rad, direct.v_rel_mps, &ego);
    let g_det = det_from(1, ghost.range_m, ghost.azimuth_rad, ghost.v_rel_mps, &ego);
    let cfg = PipelineConfig::default();
    assert!(check_specular(&g_det, &[o_det], &[s], &ego, &cfg));
    assert!(!check_specular(&g_det, &[o_det], &[], &ego, &cfg));
    assert!(!check_specular(&o_det, &[g_det], &[s], &ego, &cfg));
    let far = det_from(1, ghost.range_m + 10.0, ghost.azimuth_rad, ghost.v_rel_mps, &ego);
    assert!(!check_specular(&far, &[o_det], &[s], &ego, &cfg));
}

#[test]
fn similarity_tracks_radial_mover() {
    let ego = EgoMotion::stationary(0.0);
    let cfg = PipelineConfig::default();
    let alpha = 0.3;
    let mut buffer = FrameBuffer::new(cfg.buffer_len);
    let d_at = |t: f64| 40.0 + 15.0 * t;
    for k in 0..4 {
        let t = 0.06 * k as f64;
        let det = Detection::new(DetectionId(0), d_at(t), alpha, 15.0, 15.0, 10.0).unwrap();
        let e = EgoMotion::stationary(t);
        buffer.push(MeasurementFrame::new(k, e, vec![det])).unwrap();
    }
    let now = buffer.latest().unwrap().clone();
    let dut = now.detections[0];
    let ego_now = EgoMotion { timestamp_s: now.timestamp_s, ..ego };
    for k in 0..3 {
        let dt = now.timestamp_s - 0.06 * k as f64;
        let past = Point2::from_polar(d_at(0.06 * k as f64), alpha);
        assert!(project_back(&dut, &ego_now, dt).distance(past) < 0.2);
    }
    assert_eq!(similarity_search(&dut, &buffer, &ego_now, &cfg), 3);
}

#[test]
fn classify_rejects_mismatched_buffer() {
    let frame = MeasurementFrame::new(3, EgoMotion::stationary(0.3), vec![]);
    let buffer = FrameBuffer::new(4);
    assert!(classify_frame(&frame, &buffer, &[], &PipelineConfig::default()).is_err());
    let mut buffer = FrameBuffer::new(4);
    buffer.push(MeasurementFrame::new(2, EgoMotion::stationary(0.2), vec![])).unwrap();
    assert!(classify_frame(&frame, &buffer, &[], &PipelineConfig::default()).is_err());
    let no_ego = MeasurementFrame { ego: None, ..frame.clone() };
    let mut buffer = FrameBuffer::new(4);
    buffer.push(no_ego.clone()).unwrap();
    assert!(classify_frame(&no_ego, &buffer, &[], &PipelineConfig::default()).is_err());
}

#[test]
fn stationary_frame_is_all_stationary() {
    let ego = EgoMotion::new(10.0, 0.0, 0.0, 0.0).unwrap();
    let dets: Vec<Detection> = (0..10)
        .map(|i| {
            let alpha = -0.5 + 0.1 * i as f64;
            det_from(i, 10.0 + i as f64, alpha, -10.0 * alpha.cos(), &ego)
        })
        .collect();
    let frame = MeasurementFrame::new(0, ego, dets);
    let mut buffer = FrameBuffer::new(4);
    buffer.push(frame.clone()).unwrap();
    let verdicts = classify_frame(&frame, &buffer, &[], &PipelineConfig::default()).unwrap();
    assert!(verdicts.iter().all(|v| v.label == Label::Stationary && v.cause == Cause::None));
}

#[test]
fn rcs_rejected_detection_is_labeled_and_excluded() {
    let ego = EgoMotion::stationary(0.0);
    let weak = Detection::new(DetectionId(0), 30.0, 0.0, -8.0, -8.0, -30.0).unwrap();
    let frame = MeasurementFrame::new(0, ego, vec![weak]);
    let mut buffer = FrameBuffer::new(4);
    buffer.push(frame.clone()).unwrap();
    let v = classify_frame(&frame, &buffer, &[], &PipelineConfig::default()).unwrap();
    assert_eq!(v[0], Verdict::clutter(DetectionId(0), Cause::RcsFilter));
}
