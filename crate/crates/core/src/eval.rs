//! Confusion counts and derived metrics, with clutter as the positive class.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::sim::{ClutterKind, TruthEntry, TruthLabel};
use crate::types::{DetectionId, Label, Verdict};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[cfg_attr(feature = "serde", serde(rename = "fn"))]
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn new(tp: u64, fp: u64, tn: u64, fn_: u64) -> Self {
        Self { tp, fp, tn, fn_ }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn merge(&mut self, other: &ConfusionCounts) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.tn += other.tn;
        self.fn_ += other.fn_;
    }
}

/// Fractions in `[0, 1]`; `None` where the denominator is zero.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Metrics {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub specificity: Option<f64>,
    pub balanced_accuracy: Option<f64>,
    pub f1: Option<f64>,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn metrics(c: &ConfusionCounts) -> Metrics {
    let precision = ratio(c.tp, c.tp + c.fp);
    let recall = ratio(c.tp, c.tp + c.fn_);
    let specificity = ratio(c.tn, c.tn + c.fp);
    let balanced_accuracy = match (recall, specificity) {
        (Some(r), Some(s)) => Some(0.5 * (r + s)),
        _ => None,
    };
    let f1 = match (precision, recall) {
        (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
        _ => None,
    };
    Metrics { precision, recall, specificity, balanced_accuracy, f1 }
}

fn index_truth(truth: &[TruthEntry]) -> Result<BTreeMap<DetectionId, &TruthEntry>> {
    let mut map = BTreeMap::new();
    for t in truth {
        if map.insert(t.id, t).is_some() {
            return Err(Error::Mismatch(format!("duplicate truth id {}", t.id.0)));
        }
    }
    Ok(map)
}

fn paired<'a>(verdicts: &'a [Verdict], truth: &'a [TruthEntry]) -> Result<Vec<(&'a Verdict, &'a TruthEntry)>> {
    let map = index_truth(truth)?;
    if map.len() != verdicts.len() {
        return Err(Error::Mismatch(format!(
            "{} verdicts but {} truth entries",
            verdicts.len(),
            map.len()
        )));
    }
    verdicts
        .iter()
        .map(|v| {
            map.get(&v.id)
                .map(|t| (v, *t))
                .ok_or_else(|| Error::Mismatch(format!("verdict id {} has no truth entry", v.id.0)))
        })
        .collect()
}

/// Counts over detections that are predicted moving and whose truth is clutter
/// or nonclutter. Stationary predictions and stationary or ambiguous truth are skipped.
pub fn confusion(verdicts: &[Verdict], truth: &[TruthEntry]) -> Result<ConfusionCounts> {
    let mut c = ConfusionCounts::default();
    for (v, t) in paired(verdicts, truth)? {
        if v.label == Label::Stationary {
            continue;
        }
        let predicted = v.label == Label::Clutter;
        match (t.label, predicted) {
            (TruthLabel::Clutter, true) => c.tp += 1,
            (TruthLabel::Clutter, false) => c.fn_ += 1,
            (TruthLabel::Nonclutter, true) => c.fp += 1,
            (TruthLabel::Nonclutter, false) => c.tn += 1,
            _ => {}
        }
    }
    Ok(c)
}

/// Per truth kind: (evaluated clutter detections, detected as clutter).
pub fn recall_by_kind(verdicts: &[Verdict], truth: &[TruthEntry]) -> Result<BTreeMap<ClutterKind, (u64, u64)>> {
    let mut out: BTreeMap<ClutterKind, (u64, u64)> = BTreeMap::new();
    for (v, t) in paired(verdicts, truth)? {
        if v.label == Label::Stationary || t.label != TruthLabel::Clutter {
            continue;
        }
        let e = out.entry(t.kind).or_default();
        e.0 += 1;
        if v.label == Label::Clutter {
            e.1 += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::Cause;
    use alloc::vec;

    fn truth(id: u32, label: TruthLabel) -> TruthEntry {
        let kind = if label == TruthLabel::Clutter { ClutterKind::Random } else { ClutterKind::None };
        TruthEntry { id: DetectionId(id), label, kind, target: None, surface: None }
    }

    fn verdict(id: u32, label: Label) -> Verdict {
        let cause = if label == Label::Clutter { Cause::Specular } else { Cause::None };
        Verdict { id: DetectionId(id), label, cause }
    }

    #[test]
    fn hand_values() {
        let m = metrics(&ConfusionCounts::new(4, 1, 3, 2));
        assert!((m.precision.unwrap() - 0.8).abs() < 1e-4);
        assert!((m.recall.unwrap() - 0.6667).abs() < 1e-4);
        assert!((m.specificity.unwrap() - 0.75).abs() < 1e-4);
        assert!((m.balanced_accuracy.unwrap() - 0.7083).abs() < 1e-4);
        assert!((m.f1.unwrap() - 0.7273).abs() < 1e-4);
    }

    #[test]
    fn perfect_and_degenerate() {
        let m = metrics(&ConfusionCounts::new(10, 0, 5, 0));
        for v in [m.precision, m.recall, m.specificity, m.balanced_accuracy, m.f1] {
            assert_eq!(v, Some(1.0));
        }
        let m = metrics(&ConfusionCounts::new(0, 0, 5, 10));
        assert_eq!(m.precision, None);
        assert_eq!(m.recall, Some(0.0));
        assert_eq!(m.f1, None);
    }

    #[test]
    fn all_correct_and_inverted() {
        let mut t = Vec::new();
        let mut good = Vec::new();
        let mut bad = Vec::new();
        for i in 0..15 {
            let clutter = i < 10;
            t.push(truth(i, if clutter { TruthLabel::Clutter } else { TruthLabel::Nonclutter }));
            good.push(verdict(i, if clutter { Label::Clutter } else { Label::Nonclutter }));
            bad.push(verdict(i, if clutter { Label::Nonclutter } else { Label::Clutter }));
        }
        assert_eq!(confusion(&good, &t).unwrap(), ConfusionCounts::new(10, 0, 5, 0));
        assert_eq!(confusion(&bad, &t).unwrap(), ConfusionCounts::new(0, 5, 0, 10));
    }

    #[test]
    fn mixed_case_with_exclusions() {
        use Label as L;
        use TruthLabel as T;
        let rows = [
            (T::Clutter, L::Clutter),
            (T::Clutter, L::Clutter),
            (T::Clutter, L::Nonclutter),
            (T::Nonclutter, L::Nonclutter),
            (T::Nonclutter, L::Clutter),
            (T::Ambiguous, L::Clutter),
            (T::Ambiguous, L::Nonclutter),
            (T::Stationary, L::Stationary),
            (T::Clutter, L::Stationary),
            (T::Nonclutter, L::Nonclutter),
            (T::Clutter, L::Clutter),
            (T::Nonclutter, L::Nonclutter),
        ];
        let t: Vec<_> = rows.iter().enumerate().map(|(i, r)| truth(i as u32, r.0)).collect();
        let v: Vec<_> = rows.iter().enumerate().map(|(i, r)| verdict(i as u32, r.1)).collect();
        // By hand: tp 3, fn 1, fp 1, tn 3; ambiguous x2 and stationary x2 excluded.
        let c = confusion(&v, &t).unwrap();
        assert_eq!(c, ConfusionCounts::new(3, 1, 3, 1));
        assert_eq!(c.total(), 8);
    }

    #[test]
    fn id_mismatch_is_error() {
        let t = vec![truth(0, TruthLabel::Clutter)];
        let v = vec![verdict(1, Label::Clutter)];
        assert!(confusion(&v, &t).is_err());
        let v = vec![verdict(0, Label::Clutter), verdict(1, Label::Clutter)];
        assert!(confusion(&v, &t).is_err());
    }
}
