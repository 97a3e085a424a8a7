//! Metric tables and comparison reports as CSV and JSON.

use std::collections::BTreeMap;

use multiplex_core::metrics::{Average, Averages, ClassCounts, ClassMetrics, ComparisonReport};
use serde::{Deserialize, Serialize};

use crate::dataset_io::{finish, DatasetIoError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationSummary {
    pub instances: usize,
    pub classes: usize,
    pub macro_f1: f64,
    pub micro_f1: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct MetricsRow {
    class: String,
    tp: usize,
    fp: usize,
    #[serde(rename = "fn")]
    fn_: usize,
    precision: f64,
    recall: f64,
    f1: f64,
}

#[derive(Debug, Deserialize)]
struct CountsRow {
    class: String,
    training: usize,
    test: usize,
}

pub fn summary(metrics: &[ClassMetrics], instances: usize) -> EvaluationSummary {
    let averages = Averages::of(metrics);
    EvaluationSummary { instances, classes: metrics.len(), macro_f1: averages.macro_f1, micro_f1: averages.micro_f1 }
}

pub fn write_metrics(metrics: &[ClassMetrics]) -> Result<String, DatasetIoError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for m in metrics {
        writer.serialize(MetricsRow {
            class: m.class.clone(),
            tp: m.tp,
            fp: m.fp,
            fn_: m.fn_,
            precision: m.precision,
            recall: m.recall,
            f1: m.f1,
        })?;
    }
    finish(writer)
}

/// Reads a metrics table back. Scores are recomputed from the counts.
pub fn read_metrics(text: &str) -> Result<Vec<ClassMetrics>, DatasetIoError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for row in reader.deserialize::<MetricsRow>() {
        let row = row?;
        out.push(ClassMetrics::from_counts(row.class, row.tp, row.fp, row.fn_));
    }
    Ok(out)
}

/// `class,training,test` rows.
pub fn read_counts(text: &str) -> Result<BTreeMap<String, ClassCounts>, DatasetIoError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut out = BTreeMap::new();
    for row in reader.deserialize::<CountsRow>() {
        let row = row?;
        out.insert(row.class, ClassCounts { training: row.training, test: row.test });
    }
    Ok(out)
}

/// Per-class gain table with the columns `Class, Training Counts, Test
/// Counts, <a> F1, <b> F1, F1 Gain`.
pub fn write_gain_table(report: &ComparisonReport, a: &str, b: &str) -> Result<String, DatasetIoError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record([
        "Class".to_string(),
        "Training Counts".to_string(),
        "Test Counts".to_string(),
        format!("{a} F1"),
        format!("{b} F1"),
        "F1 Gain".to_string(),
    ])?;
    for row in &report.rows {
        writer.write_record([
            row.class.clone(),
            row.training_count.to_string(),
            row.test_count.to_string(),
            format!("{:.3}", row.f1_a),
            format!("{:.3}", row.f1_b),
            format!("{:.3}", row.gain),
        ])?;
    }
    finish(writer)
}

pub fn write_gain_bins(report: &ComparisonReport) -> Result<String, DatasetIoError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["training_count_lower", "training_count_upper", "classes", "mean_f1_gain"])?;
    for bin in &report.bins {
        writer.write_record([
            bin.lower.to_string(),
            bin.upper.to_string(),
            bin.classes.to_string(),
            format!("{:.6}", bin.mean_gain),
        ])?;
    }
    finish(writer)
}

/// The headline row: `<a> F1, <b> F1, Diff, % Diff` for the chosen average.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonSummary {
    pub average: Average,
    pub a_name: String,
    pub b_name: String,
    pub a_f1: f64,
    pub b_f1: f64,
    pub abs_diff: f64,
    pub pct_diff: Option<f64>,
    pub a: Averages,
    pub b: Averages,
}

impl ComparisonSummary {
    pub fn new(report: &ComparisonReport, a: &str, b: &str) -> Self {
        ComparisonSummary {
            average: report.average,
            a_name: a.to_string(),
            b_name: b.to_string(),
            a_f1: report.a.get(report.average),
            b_f1: report.b.get(report.average),
            abs_diff: report.abs_diff,
            pct_diff: report.pct_diff,
            a: report.a,
            b: report.b,
        }
    }

    /// One Table-1-style text line.
    pub fn line(&self) -> String {
        let pct = self.pct_diff.map(|p| format!("{p:.3}")).unwrap_or_else(|| "n/a".into());
        format!(
            "{} F1 {:.3} | {} F1 {:.3} | Diff {:.3} | % Diff {}",
            self.a_name, self.a_f1, self.b_name, self.b_f1, self.abs_diff, pct
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use multiplex_core::metrics::{comparison_report, ComparisonOptions};

    #[test]
    fn metrics_round_trip() {
        let metrics = vec![ClassMetrics::from_counts("a", 3, 1, 0), ClassMetrics::from_counts("b", 0, 0, 2)];
        let text = write_metrics(&metrics).unwrap();
        assert!(text.starts_with("class,tp,fp,fn,precision,recall,f1\n"));
        assert_eq!(read_metrics(&text).unwrap(), metrics);
    }

    #[test]
    fn table_shape() {
        let a = vec![ClassMetrics::from_counts("x", 1, 1, 1), ClassMetrics::from_counts("y", 2, 0, 0)];
        let b = vec![ClassMetrics::from_counts("x", 2, 0, 0), ClassMetrics::from_counts("y", 2, 0, 0)];
        let counts = read_counts("class,training,test\nx,10,3\ny,250,2\n").unwrap();
        let report = comparison_report(&a, &b, &counts, ComparisonOptions::default()).unwrap();
        let table = write_gain_table(&report, "CA", "MA").unwrap();
        assert_eq!(
            table,
            "Class,Training Counts,Test Counts,CA F1,MA F1,F1 Gain\nx,10,3,0.500,1.000,0.500\ny,250,2,1.000,1.000,0.000\n"
        );
        let bins = write_gain_bins(&report).unwrap();
        assert_eq!(bins.lines().count(), 3);
        let line = ComparisonSummary::new(&report, "CA", "MA").line();
        assert_eq!(line, "CA F1 0.750 | MA F1 1.000 | Diff 0.250 | % Diff 33.333");
    }
}
