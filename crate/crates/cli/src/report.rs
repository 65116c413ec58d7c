//! Aggregated evaluation of verdicts against ground truth.

use std::collections::{BTreeMap, HashMap};

use anyhow::{bail, Result};
use ghostscan::sim::{TruthEntry, TruthLabel};
use ghostscan::{confusion, metrics, recall_by_kind, ConfusionCounts, Label, Metrics, Verdict};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct KindRecall {
    pub evaluated: u64,
    pub detected: u64,
    pub recall: Option<f64>,
}

/// Detections left out of the confusion counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Excluded {
    pub predicted_stationary: u64,
    pub truth_stationary: u64,
    pub truth_ambiguous: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub frames: u64,
    pub detections: u64,
    pub counts: ConfusionCounts,
    pub metrics: Metrics,
    pub excluded: Excluded,
    pub recall_by_kind: BTreeMap<String, KindRecall>,
    pub verdict_causes: BTreeMap<String, u64>,
}

#[derive(Debug, Default)]
pub struct Evaluator {
    frames: u64,
    detections: u64,
    counts: ConfusionCounts,
    excluded: Excluded,
    by_kind: BTreeMap<String, (u64, u64)>,
    causes: BTreeMap<String, u64>,
}

impl Evaluator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_frame(&mut self, verdicts: &[Verdict], truth: &[TruthEntry]) -> Result<()> {
        let c = confusion(verdicts, truth)?;
        let kinds = recall_by_kind(verdicts, truth)?;
        let truth_by_id: HashMap<_, _> = truth.iter().map(|t| (t.id, t.label)).collect();
        for v in verdicts {
            if v.label == Label::Stationary {
                self.excluded.predicted_stationary += 1;
                continue;
            }
            match truth_by_id[&v.id] {
                TruthLabel::Stationary => self.excluded.truth_stationary += 1,
                TruthLabel::Ambiguous => self.excluded.truth_ambiguous += 1,
                _ => {}
            }
            if v.label == Label::Clutter {
                *self.causes.entry(v.cause.as_str().to_string()).or_default() += 1;
            }
        }
        self.counts.merge(&c);
        for (k, (n, d)) in kinds {
            let e = self.by_kind.entry(k.as_str().to_string()).or_default();
            e.0 += n;
            e.1 += d;
        }
        self.frames += 1;
        self.detections += verdicts.len() as u64;
        Ok(())
    }

    pub fn counts(&self) -> ConfusionCounts {
        self.counts
    }

    pub fn report(&self) -> Report {
        Report {
            frames: self.frames,
            detections: self.detections,
            counts: self.counts,
            metrics: metrics(&self.counts),
            excluded: self.excluded,
            recall_by_kind: self
                .by_kind
                .iter()
                .map(|(k, &(n, d))| {
                    let recall = (n > 0).then(|| d as f64 / n as f64);
                    (k.clone(), KindRecall { evaluated: n, detected: d, recall })
                })
                .collect(),
            verdict_causes: self.causes.clone(),
        }
    }
}

impl Report {
    /// Checks that the stored metrics follow from the stored counts.
    pub fn check_consistent(&self) -> Result<()> {
        if metrics(&self.counts) != self.metrics {
            bail!("report metrics do not match its counts");
        }
        Ok(())
    }

    pub fn summary(&self) -> String {
        let f = |x: Option<f64>| x.map_or("n/a".to_string(), |v| format!("{:.4}", v));
        let c = &self.counts;
        let mut s = format!(
            "frames {} detections {}\ntp {} fp {} tn {} fn {}\nprecision {} recall {} specificity {} balanced_accuracy {} f1 {}\n",
            self.frames,
            self.detections,
            c.tp,
            c.fp,
            c.tn,
            c.fn_,
            f(self.metrics.precision),
            f(self.metrics.recall),
            f(self.metrics.specificity),
            f(self.metrics.balanced_accuracy),
            f(self.metrics.f1),
        );
        for (k, r) in &self.recall_by_kind {
            s.push_str(&format!("recall[{k}] {} ({}/{})\n", f(r.recall), r.detected, r.evaluated));
        }
        s
    }
}
