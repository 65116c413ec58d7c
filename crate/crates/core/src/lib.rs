//! Multipath-aware clutter classification for automotive radar.
//!
//! Every moving detection of a measurement frame is classified as clutter or
//! nonclutter by running a fixed chain of checks: an RCS filter, a search for
//! similar detections in buffered frames, and three propagation-path models
//! (reflection at the ego vehicle, underbody reflections and specular
//! multipath via guardrails or walls).
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. File formats and the command-line tool live in the companion
//! `ghostscan` crate.
//!
//! Conventions: the sensor frame has its origin at the sensor, `x` along the
//! boresight, `y` to the left, angles counterclockwise in radians. Negative
//! radial velocity means approaching.

#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod angle;
pub mod error;
pub mod eval;
pub mod extraction;
pub mod geometry;
pub mod multipath;
pub mod pipeline;
pub mod sim;
pub mod types;

pub use angle::{wrap_angle, AngularInterval, AngularSet};
pub use error::{Error, Result};
pub use eval::{confusion, metrics, recall_by_kind, ConfusionCounts, Metrics};
pub use extraction::{extract_surfaces, ExtractionConfig};
pub use geometry::{Point2, ReflectionSurface};
pub use multipath::{BounceKind, MirrorGeometry, PathKind, PathObservables};
pub use pipeline::{classify_frame, FrameBuffer, PipelineConfig, SequenceClassifier};
pub use sim::{builtin_scene, builtin_scenes, simulate, Scene};
pub use types::{
    compensate_ego_motion, to_cartesian, Cause, Detection, DetectionId, EgoMotion, Label,
    MeasurementFrame, TargetMotion, Verdict,
};
