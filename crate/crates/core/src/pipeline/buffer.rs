use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::types::MeasurementFrame;

#[derive(Debug, Clone)]
pub(crate) struct BufferedFrame {
    pub frame: MeasurementFrame,
    pub positions: Vec<Point2>,
}

/// Ring of the most recent frames of one sequence, oldest first.
#[derive(Debug, Clone)]
pub struct FrameBuffer {
    capacity: usize,
    frames: VecDeque<BufferedFrame>,
}

impl FrameBuffer {
    pub fn new(capacity: usize) -> Self {
        Self { capacity: capacity.max(1), frames: VecDeque::with_capacity(capacity.max(1)) }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Appends `frame`, evicting the oldest when full. Timestamps must strictly increase.
    pub fn push(&mut self, frame: MeasurementFrame) -> Result<()> {
        if let Some(last) = self.frames.back() {
            if !(frame.timestamp_s > last.frame.timestamp_s) {
                return Err(Error::Precondition(format!(
                    "frame {} has timestamp {} not after {}",
                    frame.frame_index, frame.timestamp_s, last.frame.timestamp_s
                )));
            }
        }
        if self.frames.len() == self.capacity {
            self.frames.pop_front();
        }
        let positions = frame.detections.iter().map(|d| d.position()).collect();
        self.frames.push_back(BufferedFrame { frame, positions });
        Ok(())
    }

    pub fn latest(&self) -> Option<&MeasurementFrame> {
        self.frames.back().map(|b| &b.frame)
    }

    pub fn frames(&self) -> impl DoubleEndedIterator<Item = &MeasurementFrame> + ExactSizeIterator {
        self.frames.iter().map(|b| &b.frame)
    }

    /// Up to `n` most recent entries, newest first.
    pub(crate) fn recent(&self, n: usize) -> impl Iterator<Item = &BufferedFrame> {
        self.frames.iter().rev().take(n)
    }

    pub fn clear(&mut self) {
        self.frames.clear();
    }
}
