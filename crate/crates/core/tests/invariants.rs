use proptest::prelude::*;

use ghostscan::extraction::{rbnn, ransac_line_segments};
use ghostscan::sim::NoiseModel;
use ghostscan::{
    builtin_scene, classify_frame, simulate, wrap_angle, AngularInterval, AngularSet, Detection, DetectionId,
    EgoMotion, ExtractionConfig, FrameBuffer, Label, MeasurementFrame, PipelineConfig, Point2, ReflectionSurface,
    SequenceClassifier,
};

use std::f64::consts::PI;

fn detection() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (1.0..100.0f64, -1.0..1.0f64, -30.0..30.0f64, -25.0..20.0f64)
}

fn frame_from(raw: &[(f64, f64, f64, f64)], ego: EgoMotion) -> MeasurementFrame {
    let dets = raw
        .iter()
        .enumerate()
        .map(|(i, &(d, a, v_rel, rcs))| {
            let v_abs = ghostscan::compensate_ego_motion(v_rel, a, &ego);
            Detection::new(DetectionId(i as u32), d, a, v_rel, v_abs, rcs).unwrap()
        })
        .collect();
    MeasurementFrame::new(0, ego, dets)
}

fn surfaces() -> impl Strategy<Value = Vec<ReflectionSurface>> {
    prop::collection::vec((0.0..60.0f64, -15.0..15.0f64, 10.0..60.0f64, -0.3..0.3f64), 0..3).prop_map(|v| {
        v.into_iter()
            .map(|(x, y, len, tilt)| {
                ReflectionSurface::new(Point2::new(x, y), Point2::new(x, y) + Point2::from_polar(len, tilt)).unwrap()
            })
            .collect()
    })
}

fn classify(frame: &MeasurementFrame, surfaces: &[ReflectionSurface]) -> Vec<ghostscan::Verdict> {
    let mut buffer = FrameBuffer::new(4);
    buffer.push(frame.clone()).unwrap();
    classify_frame(frame, &buffer, surfaces, &PipelineConfig::default()).unwrap()
}

fn mirror_frame(f: &MeasurementFrame) -> MeasurementFrame {
    let ego = f.ego.map(|e| EgoMotion {
        heading_rad: wrap_angle(-e.heading_rad).unwrap(),
        sensor_yaw_rad: wrap_angle(-e.sensor_yaw_rad).unwrap(),
        ..e
    });
    let detections = f
        .detections
        .iter()
        .map(|d| Detection::new(d.id, d.range_m, -d.azimuth_rad, d.v_rel_mps, d.v_abs_mps, d.rcs_dbsm).unwrap())
        .collect();
    MeasurementFrame { ego, detections, ..f.clone() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn wrap_lands_in_half_open_range(theta in -50.0..50.0f64) {
        let w = wrap_angle(theta).unwrap();
        prop_assert!((-PI..PI).contains(&w));
        let turns = (theta - w) / (2.0 * PI);
        prop_assert!((turns - turns.round()).abs() < 1e-9);
    }

    #[test]
    fn intersection_is_pointwise_and(
        a in -4.0..4.0f64, wa in 0.0..6.0f64,
        b in -4.0..4.0f64, wb in 0.0..6.0f64,
        c in -4.0..4.0f64, wc in 0.0..3.0f64,
        probe in -PI..PI,
    ) {
        let x = AngularSet::from_intervals([AngularInterval::new(a, a + wa).unwrap(), AngularInterval::new(c, c + wc).unwrap()]);
        let y = AngularSet::from_intervals([AngularInterval::new(b, b + wb).unwrap()]);
        let z = x.intersect(&y);
        prop_assert!(z.pieces().len() <= 4);
        let near_edge = [a, a + wa, b, b + wb, c, c + wc]
            .iter()
            .any(|e| wrap_angle(probe - e).unwrap().abs() < 1e-9);
        if !near_edge {
            prop_assert_eq!(z.contains(probe), x.contains(probe) && y.contains(probe));
        }
    }

    #[test]
    fn verdicts_cover_frame_in_order(
        raw in prop::collection::vec(detection(), 0..40),
        ego_speed in 0.0..30.0f64,
        s in surfaces(),
    ) {
        let frame = frame_from(&raw, EgoMotion::new(ego_speed, 0.0, 0.0, 0.0).unwrap());
        let v = classify(&frame, &s);
        prop_assert_eq!(v.len(), frame.detections.len());
        for (verdict, det) in v.iter().zip(&frame.detections) {
            prop_assert_eq!(verdict.id, det.id);
            if det.v_abs_mps.abs() < 0.5 {
                prop_assert_eq!(verdict.label, Label::Stationary);
            } else {
                prop_assert_ne!(verdict.label, Label::Stationary);
            }
        }
        prop_assert_eq!(classify(&frame, &s), v);
    }

    #[test]
    fn surfaces_only_add_clutter(
        raw in prop::collection::vec(detection(), 0..40),
        ego_speed in 0.0..30.0f64,
        s in surfaces(),
        extra in surfaces(),
    ) {
        let frame = frame_from(&raw, EgoMotion::new(ego_speed, 0.0, 0.0, 0.0).unwrap());
        let before = classify(&frame, &s);
        let mut more = s.clone();
        more.extend(extra);
        let after = classify(&frame, &more);
        for (b, a) in before.iter().zip(&after) {
            if b.label == Label::Clutter {
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn mirrored_frame_keeps_labels(
        raw in prop::collection::vec(detection(), 0..40),
        ego_speed in 0.0..30.0f64,
        yaw in -0.5..0.5f64,
        s in surfaces(),
    ) {
        let frame = frame_from(&raw, EgoMotion::new(ego_speed, -yaw, yaw, 0.0).unwrap());
        let flipped: Vec<ReflectionSurface> = s.iter().map(|x| x.flip_y()).collect();
        let a = classify(&frame, &s);
        let b = classify(&mirror_frame(&frame), &flipped);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn clusters_are_closed_under_radius(
        pts in prop::collection::vec((0.0..30.0f64, 0.0..30.0f64), 0..120),
        radius in 0.5..3.0f64,
    ) {
        let pts: Vec<Point2> = pts.into_iter().map(|(x, y)| Point2::new(x, y)).collect();
        let clusters = rbnn(&pts, radius, 1);
        let mut owner = vec![usize::MAX; pts.len()];
        for (c, members) in clusters.iter().enumerate() {
            for &i in members {
                prop_assert_eq!(owner[i], usize::MAX);
                owner[i] = c;
            }
        }
        prop_assert!(owner.iter().all(|&o| o != usize::MAX));
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                if pts[i].distance(pts[j]) <= radius {
                    prop_assert_eq!(owner[i], owner[j]);
                }
            }
        }
        // Each cluster is connected through radius neighbors.
        for members in &clusters {
            let mut reached = vec![members[0]];
            let mut k = 0;
            while k < reached.len() {
                let p = pts[reached[k]];
                for &j in members {
                    if !reached.contains(&j) && p.distance(pts[j]) <= radius {
                        reached.push(j);
                    }
                }
                k += 1;
            }
            prop_assert_eq!(reached.len(), members.len());
        }
    }

    #[test]
    fn segments_are_supported_and_long(
        pts in prop::collection::vec((0.0..40.0f64, -0.2..0.2f64), 8..80),
        outliers in prop::collection::vec((0.0..40.0f64, -10.0..10.0f64), 0..20),
        seed in 0u64..1000,
    ) {
        let cloud: Vec<Point2> = pts.iter().chain(&outliers).map(|&(x, y)| Point2::new(x, y)).collect();
        let cfg = ExtractionConfig { rng_seed: seed, ..Default::default() };
        let segs = ransac_line_segments(&cloud, &cfg);
        prop_assert_eq!(&ransac_line_segments(&cloud, &cfg), &segs);
        for s in &segs {
            prop_assert!(s.length() >= cfg.min_segment_length_m);
            let support = cloud
                .iter()
                .filter(|p| s.signed_distance(**p).abs() <= cfg.inlier_threshold_m)
                .count();
            prop_assert!(support >= cfg.min_inliers);
        }
    }
}

#[test]
fn mirrored_noisy_sequence_keeps_labels() {
    let mut scene = builtin_scene("combined-all-ghosts").unwrap();
    scene.noise = NoiseModel { sigma_d_m: 0.2, sigma_alpha_rad: 0.01, sigma_v_mps: 0.3, sigma_rcs_dbsm: 1.0, clutter_rate_uniform: 1.0 };
    let mut a = SequenceClassifier::new(PipelineConfig::default()).unwrap();
    let mut b = SequenceClassifier::new(PipelineConfig::default()).unwrap();
    for (frame, gt) in simulate(&scene).unwrap() {
        let s = gt.surface_list();
        let flipped: Vec<ReflectionSurface> = s.iter().map(|x| x.flip_y()).collect();
        let va = a.process(frame.clone(), &s).unwrap();
        let vb = b.process(mirror_frame(&frame), &flipped).unwrap();
        assert_eq!(va, vb, "frame {}", frame.frame_index);
    }
}
