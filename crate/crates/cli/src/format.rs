//! Line-oriented JSON formats for frames, labels and surfaces.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use anyhow::{bail, Context, Result};
use ghostscan::sim::{ClutterKind, GroundTruth, TruthEntry, TruthLabel};
use ghostscan::{Cause, Detection, DetectionId, EgoMotion, Label, MeasurementFrame, Point2, ReflectionSurface, Verdict};
use serde::{Deserialize, Serialize, Serializer};

/// Rounds to 9 significant digits so files are stable across platforms.
pub fn round9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().unwrap_or(x)
}

fn ser9<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round9(*x))
}

fn ser9_pair<S: Serializer>(p: &[f64; 2], s: S) -> Result<S::Ok, S::Error> {
    [round9(p[0]), round9(p[1])].serialize(s)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EgoRecord {
    #[serde(serialize_with = "ser9")]
    pub v: f64,
    #[serde(serialize_with = "ser9")]
    pub gamma: f64,
    #[serde(serialize_with = "ser9")]
    pub psi: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectionRecord {
    pub id: u32,
    #[serde(serialize_with = "ser9")]
    pub d: f64,
    #[serde(serialize_with = "ser9")]
    pub alpha: f64,
    #[serde(serialize_with = "ser9")]
    pub v_rel: f64,
    #[serde(serialize_with = "ser9")]
    pub v_abs: f64,
    #[serde(serialize_with = "ser9")]
    pub rcs: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameRecord {
    pub frame: u64,
    #[serde(serialize_with = "ser9")]
    pub t: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ego: Option<EgoRecord>,
    pub dets: Vec<DetectionRecord>,
}

impl From<&MeasurementFrame> for FrameRecord {
    fn from(f: &MeasurementFrame) -> Self {
        FrameRecord {
            frame: f.frame_index,
            t: f.timestamp_s,
            ego: f.ego.map(|e| EgoRecord { v: e.speed_mps, gamma: e.heading_rad, psi: e.sensor_yaw_rad }),
            dets: f
                .detections
                .iter()
                .map(|d| DetectionRecord {
                    id: d.id.0,
                    d: d.range_m,
                    alpha: d.azimuth_rad,
                    v_rel: d.v_rel_mps,
                    v_abs: d.v_abs_mps,
                    rcs: d.rcs_dbsm,
                })
                .collect(),
        }
    }
}

impl FrameRecord {
    pub fn into_frame(self) -> Result<MeasurementFrame> {
        let ego = self.ego.map(|e| EgoMotion::new(e.v, e.gamma, e.psi, self.t)).transpose()?;
        let detections = self
            .dets
            .into_iter()
            .map(|d| Detection::new(DetectionId(d.id), d.d, d.alpha, d.v_rel, d.v_abs, d.rcs))
            .collect::<Result<Vec<_>, _>>()?;
        let frame = MeasurementFrame { frame_index: self.frame, timestamp_s: self.t, ego, detections };
        frame.validate()?;
        Ok(frame)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct LabelRecord {
    pub id: u32,
    pub label: String,
    pub kind: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct LabelFrame {
    pub frame: u64,
    pub labels: Vec<LabelRecord>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceRecord {
    #[serde(serialize_with = "ser9_pair")]
    pub p0: [f64; 2],
    #[serde(serialize_with = "ser9_pair")]
    pub p1: [f64; 2],
    #[serde(serialize_with = "ser9")]
    pub omega: f64,
}

impl From<&ReflectionSurface> for SurfaceRecord {
    fn from(s: &ReflectionSurface) -> Self {
        SurfaceRecord { p0: [s.p0().x, s.p0().y], p1: [s.p1().x, s.p1().y], omega: s.orientation() }
    }
}

impl SurfaceRecord {
    /// Endpoints define the surface; `omega` is informational and only checked.
    pub fn to_surface(self) -> Result<ReflectionSurface> {
        let s = ReflectionSurface::new(Point2::new(self.p0[0], self.p0[1]), Point2::new(self.p1[0], self.p1[1]))?;
        if ghostscan::angle::angle_diff(s.orientation(), self.omega).abs() > 1e-3 {
            log::warn!("surface omega {} disagrees with its endpoints ({})", self.omega, s.orientation());
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceFrame {
    pub frame: u64,
    pub surfaces: Vec<SurfaceRecord>,
}

/// Surfaces given either once for the whole sequence or per frame.
#[derive(Debug, Clone)]
pub enum SurfaceSource {
    Static(Vec<ReflectionSurface>),
    PerFrame(BTreeMap<u64, Vec<ReflectionSurface>>),
}

impl SurfaceSource {
    pub fn for_frame(&self, frame: u64) -> &[ReflectionSurface] {
        match self {
            SurfaceSource::Static(s) => s,
            SurfaceSource::PerFrame(m) => m.get(&frame).map(Vec::as_slice).unwrap_or(&[]),
        }
    }
}

pub fn cause_from_str(s: &str) -> Option<Cause> {
    [Cause::None, Cause::RcsFilter, Cause::NoSimilar, Cause::EgoReflection, Cause::Underbody, Cause::Specular]
        .into_iter()
        .find(|c| c.as_str() == s)
}

pub fn label_from_str(s: &str) -> Option<Label> {
    [Label::Nonclutter, Label::Clutter, Label::Stationary].into_iter().find(|l| l.as_str() == s)
}

pub fn truth_label_from_str(s: &str) -> Option<TruthLabel> {
    [TruthLabel::Nonclutter, TruthLabel::Clutter, TruthLabel::Stationary, TruthLabel::Ambiguous]
        .into_iter()
        .find(|l| l.as_str() == s)
}

pub fn verdict_frame(frame: u64, verdicts: &[Verdict]) -> LabelFrame {
    LabelFrame {
        frame,
        labels: verdicts
            .iter()
            .map(|v| LabelRecord { id: v.id.0, label: v.label.as_str().into(), kind: v.cause.as_str().into() })
            .collect(),
    }
}

pub fn truth_frame(gt: &GroundTruth) -> LabelFrame {
    LabelFrame {
        frame: gt.frame_index,
        labels: gt
            .entries
            .iter()
            .map(|e| LabelRecord { id: e.id.0, label: e.label.as_str().into(), kind: e.kind.as_str().into() })
            .collect(),
    }
}

impl LabelFrame {
    pub fn to_verdicts(&self) -> Result<Vec<Verdict>> {
        self.labels
            .iter()
            .map(|r| {
                let label = label_from_str(&r.label).with_context(|| format!("unknown verdict label {:?}", r.label))?;
                let cause = cause_from_str(&r.kind).with_context(|| format!("unknown verdict kind {:?}", r.kind))?;
                Ok(Verdict { id: DetectionId(r.id), label, cause })
            })
            .collect()
    }

    pub fn to_truth(&self) -> Result<Vec<TruthEntry>> {
        self.labels
            .iter()
            .map(|r| {
                let label =
                    truth_label_from_str(&r.label).with_context(|| format!("unknown truth label {:?}", r.label))?;
                let kind = ClutterKind::parse(&r.kind).with_context(|| format!("unknown truth kind {:?}", r.kind))?;
                Ok(TruthEntry { id: DetectionId(r.id), label, kind, target: None, surface: None })
            })
            .collect()
    }
}

/// Writes one JSON value per line.
pub fn write_jsonl<W: Write, T: Serialize>(out: &mut W, value: &T) -> Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Parses a JSONL stream, skipping blank lines; errors name the 1-based line.
pub fn read_jsonl<R: BufRead, T: for<'de> Deserialize<'de>>(input: R) -> impl Iterator<Item = Result<T>> {
    input.lines().enumerate().filter_map(|(i, line)| {
        let line = match line {
            Ok(l) => l,
            Err(e) => return Some(Err(anyhow::Error::new(e).context(format!("line {}", i + 1)))),
        };
        if line.trim().is_empty() {
            return None;
        }
        Some(serde_json::from_str(&line).with_context(|| format!("line {}: malformed record", i + 1)))
    })
}

/// Reads frames, checking that indices and timestamps increase.
pub fn read_frames<R: BufRead>(input: R) -> impl Iterator<Item = Result<MeasurementFrame>> {
    let mut last: Option<(u64, f64)> = None;
    read_jsonl::<R, FrameRecord>(input).enumerate().map(move |(n, rec)| {
        let rec = rec?;
        let index = rec.frame;
        let frame = rec.into_frame().with_context(|| format!("frame record {} (frame {index})", n + 1))?;
        if let Some((i, t)) = last {
            if frame.frame_index <= i || !(frame.timestamp_s > t) {
                bail!("frame {}: indices and timestamps must strictly increase", frame.frame_index);
            }
        }
        last = Some((frame.frame_index, frame.timestamp_s));
        Ok(frame)
    })
}

pub fn parse_surfaces(text: &str) -> Result<SurfaceSource> {
    if text.trim_start().starts_with('[') {
        let recs: Vec<SurfaceRecord> = serde_json::from_str(text).context("malformed surface array")?;
        let s = recs.into_iter().map(SurfaceRecord::to_surface).collect::<Result<_>>()?;
        return Ok(SurfaceSource::Static(s));
    }
    let mut map = BTreeMap::new();
    for rec in read_jsonl::<_, SurfaceFrame>(text.as_bytes()) {
        let rec = rec?;
        let s = rec.surfaces.into_iter().map(SurfaceRecord::to_surface).collect::<Result<_>>()?;
        if map.insert(rec.frame, s).is_some() {
            bail!("surfaces for frame {} given twice", rec.frame);
        }
    }
    Ok(SurfaceSource::PerFrame(map))
}

pub fn surface_frame(frame: u64, surfaces: &[ReflectionSurface]) -> SurfaceFrame {
    SurfaceFrame { frame, surfaces: surfaces.iter().map(SurfaceRecord::from).collect() }
}
