//! Subcommand implementations, callable without the argument parser.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use ghostscan::sim::{BUILTIN_SCENE_NAMES, GroundTruth};
use ghostscan::{builtin_scene, extract_surfaces, simulate, MeasurementFrame, ReflectionSurface, Scene, SequenceClassifier, Verdict};

use crate::config::Config;
use crate::format::{self, LabelFrame, SurfaceSource};
use crate::report::{Evaluator, Report};

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

/// A builtin scene name or a path to a scene JSON file.
pub fn load_scene(spec: &str) -> Result<Scene> {
    if BUILTIN_SCENE_NAMES.contains(&spec) {
        return Ok(builtin_scene(spec)?);
    }
    let path = Path::new(spec);
    if !path.exists() {
        bail!("{spec:?} is neither a builtin scene ({}) nor a file", BUILTIN_SCENE_NAMES.join(", "));
    }
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {spec}"))?;
    let scene: Scene = serde_json::from_str(&text).with_context(|| format!("scene {spec}"))?;
    scene.validate()?;
    Ok(scene)
}

#[derive(Debug, Clone)]
pub struct SimulateArgs {
    pub scene: String,
    pub out: PathBuf,
    pub truth: PathBuf,
    pub seed: Option<u64>,
    pub frames: Option<usize>,
    pub surfaces_out: Option<PathBuf>,
}

pub fn run_simulate(args: &SimulateArgs) -> Result<usize> {
    let mut scene = load_scene(&args.scene)?;
    if let Some(seed) = args.seed {
        scene.rng_seed = seed;
    }
    if let Some(n) = args.frames {
        scene.frame_count = n;
    }
    let seq = simulate(&scene)?;
    let mut out = create(&args.out)?;
    let mut truth = create(&args.truth)?;
    let mut surf = args.surfaces_out.as_deref().map(create).transpose()?;
    for (frame, gt) in &seq {
        format::write_jsonl(&mut out, &format::FrameRecord::from(frame))?;
        format::write_jsonl(&mut truth, &format::truth_frame(gt))?;
        if let Some(w) = surf.as_mut() {
            format::write_jsonl(w, &format::surface_frame(gt.frame_index, &gt.surface_list()))?;
        }
    }
    out.flush()?;
    truth.flush()?;
    if let Some(mut w) = surf {
        w.flush()?;
    }
    Ok(seq.len())
}

pub fn load_surfaces(path: &Path) -> Result<SurfaceSource> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    format::parse_surfaces(&text).with_context(|| format!("surfaces {}", path.display()))
}

/// Streams frames through the classifier. With `extract`, surfaces found in
/// the recent stationary detections are added to the given ones.
pub struct FrameClassifier {
    cfg: Config,
    seq: SequenceClassifier,
    surfaces: Option<SurfaceSource>,
    extract: bool,
}

impl FrameClassifier {
    pub fn new(cfg: Config, surfaces: Option<SurfaceSource>, extract: bool) -> Result<Self> {
        cfg.validate()?;
        let cap = cfg.pipeline.buffer_len.max(cfg.extraction.accumulation_frames);
        let seq = SequenceClassifier::with_capacity(cfg.pipeline.clone(), cap)?;
        Ok(Self { cfg, seq, surfaces, extract })
    }

    pub fn classify(&mut self, frame: MeasurementFrame) -> Result<Vec<Verdict>> {
        let index = frame.frame_index;
        if frame.ego.is_none() {
            bail!("frame {index}: ego motion missing");
        }
        self.seq.push(frame).with_context(|| format!("frame {index}"))?;
        let mut surfaces: Vec<ReflectionSurface> =
            self.surfaces.as_ref().map(|s| s.for_frame(index).to_vec()).unwrap_or_default();
        if self.extract {
            surfaces.extend(extract_surfaces(self.seq.buffer().frames(), &self.cfg.extraction)?);
        }
        self.seq.classify_latest(&surfaces).with_context(|| format!("frame {index}"))
    }
}

#[derive(Debug, Clone)]
pub struct ClassifyArgs {
    pub input: PathBuf,
    pub out: PathBuf,
    pub config: Option<PathBuf>,
    pub surfaces: Option<PathBuf>,
    pub extract_surfaces: bool,
}

pub fn run_classify(args: &ClassifyArgs) -> Result<usize> {
    let cfg = Config::load(args.config.as_deref())?;
    let surfaces = args.surfaces.as_deref().map(load_surfaces).transpose()?;
    if surfaces.is_none() && !args.extract_surfaces {
        log::info!("no surfaces given: specular checks are skipped");
    }
    let mut clf = FrameClassifier::new(cfg, surfaces, args.extract_surfaces)?;
    let mut out = create(&args.out)?;
    let mut n = 0;
    for frame in format::read_frames(open(&args.input)?) {
        let frame = frame.with_context(|| format!("{}", args.input.display()))?;
        let index = frame.frame_index;
        let verdicts = clf.classify(frame)?;
        format::write_jsonl(&mut out, &format::verdict_frame(index, &verdicts))?;
        n += 1;
    }
    out.flush()?;
    Ok(n)
}

fn read_label_frames(path: &Path) -> Result<Vec<LabelFrame>> {
    format::read_jsonl(open(path)?)
        .collect::<Result<Vec<_>>>()
        .with_context(|| format!("{}", path.display()))
}

/// Pairs verdict and truth files frame by frame; any id or frame mismatch is an error.
pub fn evaluate_files(verdicts: &Path, truth: &Path) -> Result<Report> {
    let v = read_label_frames(verdicts)?;
    let t = read_label_frames(truth)?;
    if v.len() != t.len() {
        bail!("{} verdict frames but {} truth frames", v.len(), t.len());
    }
    let mut ev = Evaluator::new();
    for (vf, tf) in v.iter().zip(&t) {
        if vf.frame != tf.frame {
            bail!("verdict frame {} paired with truth frame {}", vf.frame, tf.frame);
        }
        ev.add_frame(&vf.to_verdicts()?, &tf.to_truth()?).with_context(|| format!("frame {}", vf.frame))?;
    }
    Ok(ev.report())
}

pub fn evaluate_sequence(verdicts: &[Vec<Verdict>], truth: &[GroundTruth]) -> Result<Report> {
    if verdicts.len() != truth.len() {
        bail!("{} verdict frames but {} truth frames", verdicts.len(), truth.len());
    }
    let mut ev = Evaluator::new();
    for (v, t) in verdicts.iter().zip(truth) {
        ev.add_frame(v, &t.entries)?;
    }
    Ok(ev.report())
}

pub fn write_report(report: &Report, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, report)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchStats {
    pub frames: usize,
    pub mean_detections: f64,
    pub mean_ms: f64,
    pub p95_ms: f64,
    pub max_ms: f64,
}

/// Times classification only; reading and buffering are excluded.
pub fn bench_frames(frames: Vec<MeasurementFrame>, cfg: Config, surfaces: Option<SurfaceSource>) -> Result<BenchStats> {
    if frames.is_empty() {
        bail!("no frames to benchmark");
    }
    let mut clf = FrameClassifier::new(cfg, surfaces, false)?;
    let n = frames.len();
    let dets: usize = frames.iter().map(|f| f.detections.len()).sum();
    let mut times = Vec::with_capacity(n);
    for frame in frames {
        let start = Instant::now();
        clf.classify(frame)?;
        times.push(start.elapsed().as_secs_f64() * 1e3);
    }
    let mean_ms = times.iter().sum::<f64>() / n as f64;
    let mut sorted = times.clone();
    sorted.sort_by(f64::total_cmp);
    let p95_ms = sorted[((n as f64 * 0.95).ceil() as usize).clamp(1, n) - 1];
    Ok(BenchStats { frames: n, mean_detections: dets as f64 / n as f64, mean_ms, p95_ms, max_ms: sorted[n - 1] })
}

pub fn read_frame_file(path: &Path) -> Result<Vec<MeasurementFrame>> {
    format::read_frames(open(path)?)
        .collect::<Result<Vec<_>>>()
        .with_context(|| format!("{}", path.display()))
}

pub fn write_frames(frames: &[MeasurementFrame], path: &Path) -> Result<()> {
    let mut w = create(path)?;
    for f in frames {
        format::write_jsonl(&mut w, &format::FrameRecord::from(f))?;
    }
    w.flush()?;
    Ok(())
}

/// Per-frame surfaces from the trailing stationary detections.
pub fn run_extract(input: &Path, out: &Path, config: Option<&Path>) -> Result<usize> {
    let cfg = Config::load(config)?;
    let k = cfg.extraction.accumulation_frames;
    let mut window: std::collections::VecDeque<MeasurementFrame> = Default::default();
    let mut w = create(out)?;
    let mut n = 0;
    for frame in format::read_frames(open(input)?) {
        let frame = frame?;
        let index = frame.frame_index;
        window.push_back(frame);
        if window.len() > k {
            window.pop_front();
        }
        let surfaces = extract_surfaces(window.iter(), &cfg.extraction)?;
        format::write_jsonl(&mut w, &format::surface_frame(index, &surfaces))?;
        n += 1;
    }
    w.flush()?;
    Ok(n)
}
