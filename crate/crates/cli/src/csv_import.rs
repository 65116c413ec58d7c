//! Conversion of tabular detection exports into frames.
//!
//! One row per detection with columns `frame,t,d,alpha,v_rel,rcs` and the
//! optional columns `id,v_abs,ego_v,ego_gamma,ego_psi`. Rows of one frame must
//! be contiguous. Missing ids are assigned in row order; a missing `v_abs` is
//! computed from the ego columns.

use std::io::Read;

use anyhow::{bail, Context, Result};
use ghostscan::{compensate_ego_motion, Detection, DetectionId, EgoMotion, MeasurementFrame};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
struct Row {
    frame: u64,
    t: f64,
    #[serde(default)]
    id: Option<u32>,
    d: f64,
    alpha: f64,
    v_rel: f64,
    #[serde(default)]
    v_abs: Option<f64>,
    rcs: f64,
    #[serde(default)]
    ego_v: Option<f64>,
    #[serde(default)]
    ego_gamma: Option<f64>,
    #[serde(default)]
    ego_psi: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CsvOptions {
    /// Angles (`alpha`, `ego_gamma`, `ego_psi`) are given in degrees.
    pub degrees: bool,
}

fn row_ego(row: &Row, opts: CsvOptions) -> Result<Option<EgoMotion>> {
    let conv = |x: f64| if opts.degrees { x.to_radians() } else { x };
    match (row.ego_v, row.ego_gamma, row.ego_psi) {
        (None, None, None) => Ok(None),
        (Some(v), g, p) => Ok(Some(EgoMotion::new(v, conv(g.unwrap_or(0.0)), conv(p.unwrap_or(0.0)), row.t)?)),
        _ => bail!("ego_gamma/ego_psi given without ego_v"),
    }
}

pub fn import_csv<R: Read>(input: R, opts: CsvOptions) -> Result<Vec<MeasurementFrame>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let mut frames: Vec<MeasurementFrame> = Vec::new();
    for (i, row) in reader.deserialize::<Row>().enumerate() {
        // Header is line 1.
        let line = i + 2;
        let row = row.with_context(|| format!("line {line}: malformed row"))?;
        let ego = row_ego(&row, opts).with_context(|| format!("line {line}"))?;
        let new_frame = frames.last().is_none_or(|f| f.frame_index != row.frame);
        if new_frame {
            if let Some(prev) = frames.last() {
                if row.frame < prev.frame_index || !(row.t > prev.timestamp_s) {
                    bail!("line {line}: frames must be contiguous with increasing index and time");
                }
            }
            frames.push(MeasurementFrame { frame_index: row.frame, timestamp_s: row.t, ego, detections: Vec::new() });
        }
        let frame = frames.last_mut().expect("frame pushed above");
        if row.t != frame.timestamp_s {
            bail!("line {line}: timestamp differs within frame {}", row.frame);
        }
        let alpha = if opts.degrees { row.alpha.to_radians() } else { row.alpha };
        let v_abs = match (row.v_abs, frame.ego.as_ref()) {
            (Some(v), _) => v,
            (None, Some(e)) => compensate_ego_motion(row.v_rel, alpha, e),
            (None, None) => bail!("line {line}: v_abs missing and no ego columns to compute it"),
        };
        let id = row.id.unwrap_or(frame.detections.len() as u32);
        let det = Detection::new(DetectionId(id), row.d, alpha, row.v_rel, v_abs, row.rcs)
            .with_context(|| format!("line {line}"))?;
        frame.detections.push(det);
    }
    for f in &frames {
        f.validate().with_context(|| format!("frame {}", f.frame_index))?;
    }
    Ok(frames)
}
