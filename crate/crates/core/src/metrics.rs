//! Per-class F1, macro and micro averages, and reports comparing two
//! approaches class by class.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Label sets by instance id.
pub type LabelSets = BTreeMap<String, BTreeSet<String>>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("instance `{0}` is missing from one of the inputs")]
    InstanceMismatch(String),
    #[error("class `{0}` is missing from one of the runs")]
    ClassSetMismatch(String),
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ClassMetrics {
    pub class: String,
    pub tp: usize,
    pub fp: usize,
    #[cfg_attr(feature = "serde", serde(rename = "fn"))]
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl ClassMetrics {
    /// Precision and recall are 0 when their denominator is 0, and so is F1
    /// when precision and recall are both 0. F1 is taken from the counts so
    /// it is rounded once.
    pub fn from_counts(class: impl Into<String>, tp: usize, fp: usize, fn_: usize) -> Self {
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = ratio(2 * tp, 2 * tp + fp + fn_);
        ClassMetrics { class: class.into(), tp, fp, fn_, precision, recall, f1 }
    }
}

/// Set-membership counts per class over instances present in both inputs.
pub fn per_class_f1(
    predictions: &LabelSets,
    truth: &LabelSets,
    classes: &[String],
) -> Result<Vec<ClassMetrics>, MetricsError> {
    if let Some(id) = predictions.keys().find(|k| !truth.contains_key(*k)) {
        return Err(MetricsError::InstanceMismatch(id.clone()));
    }
    if let Some(id) = truth.keys().find(|k| !predictions.contains_key(*k)) {
        return Err(MetricsError::InstanceMismatch(id.clone()));
    }
    let mut counts: BTreeMap<&str, (usize, usize, usize)> = classes.iter().map(|c| (c.as_str(), (0, 0, 0))).collect();
    for (id, predicted) in predictions {
        let actual = &truth[id];
        for (class, (tp, fp, fn_)) in counts.iter_mut() {
            match (predicted.contains(*class), actual.contains(*class)) {
                (true, true) => *tp += 1,
                (true, false) => *fp += 1,
                (false, true) => *fn_ += 1,
                (false, false) => {}
            }
        }
    }
    Ok(classes
        .iter()
        .map(|c| {
            let (tp, fp, fn_) = counts[c.as_str()];
            ClassMetrics::from_counts(c.clone(), tp, fp, fn_)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize), serde(rename_all = "snake_case"))]
pub enum Average {
    #[default]
    Macro,
    Micro,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Averages {
    /// Unweighted mean of per-class F1.
    pub macro_f1: f64,
    /// F1 of the pooled counts.
    pub micro_f1: f64,
}

impl Averages {
    pub fn of(metrics: &[ClassMetrics]) -> Self {
        let macro_f1 =
            if metrics.is_empty() { 0.0 } else { metrics.iter().map(|m| m.f1).sum::<f64>() / metrics.len() as f64 };
        let (tp, fp, fn_) = metrics.iter().fold((0, 0, 0), |(a, b, c), m| (a + m.tp, b + m.fp, c + m.fn_));
        let micro_f1 = ClassMetrics::from_counts("", tp, fp, fn_).f1;
        Averages { macro_f1, micro_f1 }
    }

    pub fn get(&self, average: Average) -> f64 {
        match average {
            Average::Macro => self.macro_f1,
            Average::Micro => self.micro_f1,
        }
    }
}

/// Training and test instance counts of a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ClassCounts {
    pub training: usize,
    pub test: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComparisonOptions {
    /// Which average drives the overall difference.
    pub average: Average,
    /// Training counts above this value are capped before binning.
    pub count_cap: usize,
    pub bin_width: usize,
}

impl Default for ComparisonOptions {
    fn default() -> Self {
        ComparisonOptions { average: Average::Macro, count_cap: 200, bin_width: 20 }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct GainRow {
    pub class: String,
    pub training_count: usize,
    pub test_count: usize,
    pub f1_a: f64,
    pub f1_b: f64,
    pub gain: f64,
}

/// Classes whose capped training count falls in `[lower, upper)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct GainBin {
    pub lower: usize,
    pub upper: usize,
    pub classes: usize,
    pub mean_gain: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ComparisonReport {
    pub average: Average,
    pub a: Averages,
    pub b: Averages,
    /// `b - a` for the chosen average.
    pub abs_diff: f64,
    /// `abs_diff / a * 100`, undefined when `a` is 0.
    pub pct_diff: Option<f64>,
    pub rows: Vec<GainRow>,
    pub bins: Vec<GainBin>,
}

/// Absolute and percentage difference of `b` over `a`.
pub fn difference(a: f64, b: f64) -> (f64, Option<f64>) {
    let abs = b - a;
    (abs, if a == 0.0 { None } else { Some(abs / a * 100.0) })
}

/// Compares run `b` against baseline `a`. Both must cover the same classes;
/// rows follow `a`'s class order.
pub fn comparison_report(
    a: &[ClassMetrics],
    b: &[ClassMetrics],
    counts: &BTreeMap<String, ClassCounts>,
    options: ComparisonOptions,
) -> Result<ComparisonReport, MetricsError> {
    let by_class: BTreeMap<&str, &ClassMetrics> = b.iter().map(|m| (m.class.as_str(), m)).collect();
    if let Some(extra) = b.iter().find(|m| !a.iter().any(|x| x.class == m.class)) {
        return Err(MetricsError::ClassSetMismatch(extra.class.clone()));
    }
    let mut rows = Vec::with_capacity(a.len());
    for ma in a {
        let mb = by_class.get(ma.class.as_str()).ok_or_else(|| MetricsError::ClassSetMismatch(ma.class.clone()))?;
        let c = counts.get(&ma.class).copied().unwrap_or_default();
        rows.push(GainRow {
            class: ma.class.clone(),
            training_count: c.training,
            test_count: c.test,
            f1_a: ma.f1,
            f1_b: mb.f1,
            gain: mb.f1 - ma.f1,
        });
    }
    let (avg_a, avg_b) = (Averages::of(a), Averages::of(b));
    let (abs_diff, pct_diff) = difference(avg_a.get(options.average), avg_b.get(options.average));
    Ok(ComparisonReport {
        average: options.average,
        a: avg_a,
        b: avg_b,
        abs_diff,
        pct_diff,
        bins: gain_bins(&rows, options),
        rows,
    })
}

fn gain_bins(rows: &[GainRow], options: ComparisonOptions) -> Vec<GainBin> {
    let width = options.bin_width.max(1);
    let mut bins: BTreeMap<usize, (usize, f64)> = BTreeMap::new();
    for row in rows {
        let capped = row.training_count.min(options.count_cap);
        let entry = bins.entry(capped / width).or_default();
        entry.0 += 1;
        entry.1 += row.gain;
    }
    bins.into_iter()
        .map(|(k, (n, total))| GainBin {
            lower: k * width,
            upper: (k + 1) * width,
            classes: n,
            mean_gain: total / n as f64,
        })
        .collect()
}
