//! Per-frame clutter classification.
//!
//! Each moving detection runs through the checks in a fixed order and stops at
//! the first that fires:
//!
//! 1. RCS filter (rejected detections are also removed as candidates for every
//!    other check)
//! 2. similarity search over the buffered frames
//! 3. reflection at the ego vehicle
//! 4. underbody reflection
//! 5. specular multipath
//!
//! The specular check looks for object points among the detections that
//! survived steps 1-4, stationary ones included.

mod buffer;
mod checks;
mod config;
mod specular;

use alloc::format;
use alloc::vec::Vec;

pub use buffer::FrameBuffer;
pub use checks::{check_ego_reflection, check_underbody, project_back, rcs_filter, similarity_search, RcsDecision};
pub use config::{PipelineConfig, RcsCurve};
pub use specular::check_specular;

use crate::error::{Error, Result};
use crate::geometry::ReflectionSurface;
use crate::types::{Cause, Detection, MeasurementFrame, Verdict};
use specular::SpecularContext;

/// Classifies every detection of `frame`, returning one verdict per detection in input order.
///
/// `buffer` must already contain `frame` as its newest entry.
pub fn classify_frame(
    frame: &MeasurementFrame,
    buffer: &FrameBuffer,
    surfaces: &[ReflectionSurface],
    cfg: &PipelineConfig,
) -> Result<Vec<Verdict>> {
    cfg.validate()?;
    match buffer.latest() {
        Some(latest) if latest.frame_index == frame.frame_index && latest.timestamp_s == frame.timestamp_s => {}
        _ => {
            return Err(Error::Precondition(format!(
                "frame {} is not the newest frame in the buffer",
                frame.frame_index
            )))
        }
    }
    let ego = frame
        .ego
        .ok_or_else(|| Error::Precondition(format!("frame {} has no ego motion", frame.frame_index)))?;

    let dets = &frame.detections;
    let passes: Vec<bool> = dets.iter().map(|d| rcs_filter(d, cfg) == RcsDecision::Pass).collect();
    let usable: Vec<Detection> = dets.iter().zip(&passes).filter(|(_, &ok)| ok).map(|(d, _)| *d).collect();
    let moving: Vec<Detection> = usable.iter().filter(|d| d.is_moving(cfg.moving_threshold_mps)).copied().collect();

    let mut verdicts: Vec<Option<Verdict>> = Vec::with_capacity(dets.len());
    for (det, &ok) in dets.iter().zip(&passes) {
        let verdict = if !det.is_moving(cfg.moving_threshold_mps) {
            Some(Verdict::stationary(det.id))
        } else if !ok {
            Some(Verdict::clutter(det.id, Cause::RcsFilter))
        } else if similarity_search(det, buffer, &ego, cfg) < cfg.similarity_min_count {
            Some(Verdict::clutter(det.id, Cause::NoSimilar))
        } else if check_ego_reflection(det, &moving, cfg) {
            Some(Verdict::clutter(det.id, Cause::EgoReflection))
        } else if check_underbody(det, &usable, cfg) {
            Some(Verdict::clutter(det.id, Cause::Underbody))
        } else {
            None
        };
        verdicts.push(verdict);
    }

    let remaining: Vec<Detection> = dets
        .iter()
        .zip(&passes)
        .zip(&verdicts)
        .filter(|((_, &ok), v)| ok && !matches!(v, Some(v) if v.cause != Cause::None))
        .map(|((d, _), _)| *d)
        .collect();
    let context = SpecularContext::new(&remaining, surfaces, &ego, cfg);

    Ok(dets
        .iter()
        .zip(verdicts)
        .map(|(det, v)| {
            v.unwrap_or_else(|| {
                if context.check(det) {
                    Verdict::clutter(det.id, Cause::Specular)
                } else {
                    Verdict::nonclutter(det.id)
                }
            })
        })
        .collect())
}

/// Owns the frame buffer of one sequence and classifies frames in order.
#[derive(Debug, Clone)]
pub struct SequenceClassifier {
    cfg: PipelineConfig,
    buffer: FrameBuffer,
}

impl SequenceClassifier {
    pub fn new(cfg: PipelineConfig) -> Result<Self> {
        cfg.validate()?;
        let buffer = FrameBuffer::new(cfg.buffer_len);
        Ok(Self { cfg, buffer })
    }

    /// Keeps at least `capacity` frames, e.g. to share the buffer with surface extraction.
    pub fn with_capacity(cfg: PipelineConfig, capacity: usize) -> Result<Self> {
        cfg.validate()?;
        let buffer = FrameBuffer::new(capacity.max(cfg.buffer_len));
        Ok(Self { cfg, buffer })
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.cfg
    }

    pub fn buffer(&self) -> &FrameBuffer {
        &self.buffer
    }

    pub fn push(&mut self, frame: MeasurementFrame) -> Result<()> {
        self.buffer.push(frame)
    }

    /// Classifies the newest buffered frame.
    pub fn classify_latest(&self, surfaces: &[ReflectionSurface]) -> Result<Vec<Verdict>> {
        let frame = self
            .buffer
            .latest()
            .ok_or_else(|| Error::Precondition("no frame buffered".into()))?;
        classify_frame(frame, &self.buffer, surfaces, &self.cfg)
    }

    pub fn process(&mut self, frame: MeasurementFrame, surfaces: &[ReflectionSurface]) -> Result<Vec<Verdict>> {
        self.push(frame)?;
        self.classify_latest(surfaces)
    }
}
