//! The `multiplex` command line.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use multiplex_core::dataset::{
    classify_pair_relation, emit_prepared, expand_ancestors, grouped_split, impute_exclusions, sampling_weights,
    PreparedFormat, SamplingMode,
};
use multiplex_core::ensemble::{
    cascade_infer, flat_infer, flat_submodel, reintroduce_compounds, Classifier, Instance, NoisyOracle,
    OracleClassifier, PriorClassifier,
};
use multiplex_core::metrics::{comparison_report, per_class_f1, Average, ClassCounts, ComparisonOptions};
use multiplex_core::taxonomy::validate_rainforest;
use multiplex_core::transform::{
    build_dubt, insert_exclusion_classes, split_oversized, transform_dag, transform_flat, transform_hierarchical,
    DagProblem, FlatProblem, HmcProblem,
};

use crate::dataset_io::{self, DEFAULT_LABEL_COLUMN};
use crate::manifest::Run;
use crate::owl::export_owl_axioms;
use crate::pipeline::{compile, reference_labels, PipelineError};
use crate::report::{self, ComparisonSummary};
use crate::scores::ScoresFileClassifier;
use crate::taxonomy_io::{parse_taxonomy, serialize_taxonomy};

pub const DEFAULT_SEED: u64 = 42;
pub const SEED_ENV: &str = "MULTIPLEX_SEED";

#[derive(Debug, Parser)]
#[command(name = "multiplex", version, about = "Multiplex classification pipeline")]
struct Cli {
    /// Seed for every random choice of the run.
    #[arg(long, global = true, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Directory receiving all outputs and the run manifest.
    #[arg(long, global = true, default_value = "multiplex_out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProblemKind {
    Flat,
    Hmc,
    Dag,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Multiplex,
    MultiplexWithoutMerging,
    Multilabel,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SamplingArg {
    Normal,
    Optimized,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Cascade,
    Flat,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AverageArg {
    Macro,
    Micro,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a taxonomy; on success export its compiled tree as OWL axioms.
    Validate { taxonomy: PathBuf },
    /// Turn a flat, hierarchical or DAG problem (JSON) into a taxonomy.
    Transform {
        problem: PathBuf,
        #[arg(long, value_enum)]
        kind: ProblemKind,
        /// Split BCTs holding more classes than this.
        #[arg(long)]
        split_max: Option<usize>,
    },
    /// Clean a dataset and lay it out for training.
    Prepare {
        taxonomy: PathBuf,
        csv: PathBuf,
        #[arg(long, value_enum)]
        format: FormatArg,
        /// Exclusion classes to impute where their group is unlabeled.
        #[arg(long, value_delimiter = ',')]
        exclusion_classes: Vec<String>,
        /// Drop rows left without labels by cleaning.
        #[arg(long)]
        drop_empty: bool,
        #[arg(long, value_enum, default_value = "normal")]
        sampling: SamplingArg,
        /// Also assign rows to train/test, keeping groups together.
        #[arg(long)]
        test_fraction: Option<f64>,
        #[arg(long, default_value = DEFAULT_LABEL_COLUMN)]
        label_column: String,
    },
    /// Predict label sets with a reference or file-backed classifier.
    Infer {
        taxonomy: PathBuf,
        csv: PathBuf,
        /// oracle | prior | noisy:<accuracy> | scores:<file>
        #[arg(long)]
        classifier: String,
        #[arg(long, value_enum, default_value = "cascade")]
        mode: ModeArg,
        #[arg(long, default_value = DEFAULT_LABEL_COLUMN)]
        label_column: String,
    },
    /// Per-class F1 of predictions against reference labels.
    Evaluate {
        predictions: PathBuf,
        truth: PathBuf,
        /// Clean the reference labels with this taxonomy first.
        #[arg(long)]
        taxonomy: Option<PathBuf>,
        #[arg(long, default_value = DEFAULT_LABEL_COLUMN)]
        label_column: String,
    },
    /// Compare two evaluations class by class.
    Compare {
        /// `evaluate` output directory or metrics CSV of the baseline.
        run_a: PathBuf,
        run_b: PathBuf,
        /// CSV with columns class,training,test.
        #[arg(long)]
        counts: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "macro")]
        average: AverageArg,
        #[arg(long, default_value = "A")]
        name_a: String,
        #[arg(long, default_value = "B")]
        name_b: String,
    },
    /// Empirical relation between two classes of a dataset.
    Relations {
        csv: PathBuf,
        class_a: String,
        class_b: String,
        /// Expand labels to their ancestors with this taxonomy first.
        #[arg(long)]
        taxonomy: Option<PathBuf>,
        #[arg(long, default_value = DEFAULT_LABEL_COLUMN)]
        label_column: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Transform { .. } => "transform",
            Command::Prepare { .. } => "prepare",
            Command::Infer { .. } => "infer",
            Command::Evaluate { .. } => "evaluate",
            Command::Compare { .. } => "compare",
            Command::Relations { .. } => "relations",
        }
    }
}

/// Outcome of a subcommand that ran to completion.
enum Status {
    Ok,
    Invalid,
}

/// Runs the CLI. Exit code 0 on success, 1 on validation failures and
/// runtime errors, 2 on usage errors.
pub fn run_cli<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            let text = err.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    let args = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let mut run = Run::new(&cli.out, cli.command.name(), args, cli.seed);
    let result = execute(&cli, &mut run, stdout).and_then(|status| {
        run.finish()?;
        Ok(status)
    });
    match result {
        Ok(Status::Ok) => 0,
        Ok(Status::Invalid) => 1,
        Err(err) => {
            let _ = writeln!(stderr, "error: {err:#}");
            1
        }
    }
}

fn read_forest(run: &mut Run, path: &Path) -> anyhow::Result<multiplex_core::taxonomy::DecisionRainforest> {
    let text = run.read(path)?;
    parse_taxonomy(&text).with_context(|| path.display().to_string())
}

fn compile_or_report(
    forest: &multiplex_core::taxonomy::DecisionRainforest,
    stdout: &mut dyn Write,
) -> anyhow::Result<Option<crate::pipeline::Compiled>> {
    match compile(forest) {
        Ok(c) => Ok(Some(c)),
        Err(PipelineError::Invalid(errors)) => {
            for e in &errors {
                writeln!(stdout, "{e}")?;
            }
            writeln!(stdout, "{} errors", errors.len())?;
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

fn load_rows(
    run: &mut Run,
    path: &Path,
    label_column: &str,
) -> anyhow::Result<Vec<multiplex_core::dataset::DatasetRow>> {
    let text = run.read(path)?;
    dataset_io::load_dataset(&text, label_column).with_context(|| path.display().to_string())
}

fn execute(cli: &Cli, run: &mut Run, stdout: &mut dyn Write) -> anyhow::Result<Status> {
    match &cli.command {
        Command::Validate { taxonomy } => {
            let forest = read_forest(run, taxonomy)?;
            let errors = validate_rainforest(&forest);
            for e in &errors {
                writeln!(stdout, "{e}")?;
            }
            writeln!(stdout, "{} errors", errors.len())?;
            if !errors.is_empty() {
                return Ok(Status::Invalid);
            }
            let dubt = build_dubt(&insert_exclusion_classes(&forest))?;
            run.write("taxonomy.ofn.txt", &export_owl_axioms(&dubt))?;
            Ok(Status::Ok)
        }
        Command::Transform { problem, kind, split_max } => {
            let text = run.read(problem)?;
            let parsed = || format!("{} is not a {kind:?} problem", problem.display());
            let mut forest = match kind {
                ProblemKind::Flat => transform_flat(&serde_json::from_str::<FlatProblem>(&text).with_context(parsed)?)?,
                ProblemKind::Hmc => {
                    transform_hierarchical(&serde_json::from_str::<HmcProblem>(&text).with_context(parsed)?)?
                }
                ProblemKind::Dag => transform_dag(&serde_json::from_str::<DagProblem>(&text).with_context(parsed)?)?,
            };
            if let Some(max) = split_max {
                forest = split_oversized(&forest, *max)?;
            }
            run.write("taxonomy.mtx.json", &serialize_taxonomy(&forest)?)?;
            run.write("taxonomy.ofn.txt", &export_owl_axioms(&build_dubt(&insert_exclusion_classes(&forest))?))?;
            writeln!(stdout, "{} trees, {} BCTs", forest.trees.len(), forest.bcts().len())?;
            Ok(Status::Ok)
        }
        Command::Prepare {
            taxonomy,
            csv,
            format,
            exclusion_classes,
            drop_empty,
            sampling,
            test_fraction,
            label_column,
        } => {
            let forest = read_forest(run, taxonomy)?;
            let Some(compiled) = compile_or_report(&forest, stdout)? else { return Ok(Status::Invalid) };
            let rows = load_rows(run, csv, label_column)?;
            let reference = reference_labels(&rows, &compiled)?;
            let exclusions: Vec<&str> = exclusion_classes.iter().map(String::as_str).collect();
            let mut rows = impute_exclusions(&reference.rows, &compiled.dubt, &exclusions)?;
            if *drop_empty {
                rows.retain(|r| !r.labels.is_empty());
            }
            let format = match format {
                FormatArg::Multiplex => PreparedFormat::Multiplex,
                FormatArg::MultiplexWithoutMerging => PreparedFormat::MultiplexWithoutMerging,
                FormatArg::Multilabel => PreparedFormat::Multilabel,
            };
            let mode = match sampling {
                SamplingArg::Normal => SamplingMode::Normal,
                SamplingArg::Optimized => SamplingMode::Optimized,
            };
            let prepared = emit_prepared(&rows, &compiled.dubt, &compiled.plan, format)?;
            let weights = sampling_weights(&rows, &compiled.dubt, mode)?;
            run.write(&format!("prepared_{}.csv", format.as_str()), &dataset_io::write_prepared(&prepared)?)?;
            let ids = || rows.iter().map(|r| r.instance_id.as_str());
            let weight_cells: Vec<String> = ids().map(|id| weights[id].to_string()).collect();
            run.write("weights.csv", &dataset_io::write_column(ids(), "weight", &weight_cells)?)?;
            if let Some(fraction) = test_fraction {
                let split = grouped_split(&rows, *fraction, cli.seed)?;
                let mut subset = vec![String::from("train"); rows.len()];
                for i in split.test {
                    subset[i] = String::from("test");
                }
                run.write("split.csv", &dataset_io::write_column(ids(), "subset", &subset)?)?;
            }
            run.write("cleaning_report.json", &(serde_json::to_string_pretty(&reference.report)? + "\n"))?;
            run.write("preprocessing_warnings.json", &(serde_json::to_string_pretty(&reference.warnings)? + "\n"))?;
            run.write("plan.json", &(serde_json::to_string_pretty(&compiled.plan)? + "\n"))?;
            writeln!(
                stdout,
                "{} rows, {} affected by cleaning ({:.4}), {} unknown labels dropped",
                rows.len(),
                reference.report.rows_affected,
                reference.report.affected_rate(),
                reference.warnings.len()
            )?;
            Ok(Status::Ok)
        }
        Command::Infer { taxonomy, csv, classifier, mode, label_column } => {
            let forest = read_forest(run, taxonomy)?;
            let Some(compiled) = compile_or_report(&forest, stdout)? else { return Ok(Status::Invalid) };
            let rows = load_rows(run, csv, label_column)?;
            let reference = reference_labels(&rows, &compiled)?;
            let model: Box<dyn Classifier> = match classifier.split_once(':') {
                None if classifier == "oracle" => Box::new(OracleClassifier::from_rows(&reference.rows)),
                None if classifier == "prior" => Box::new(PriorClassifier::fit(&reference.rows, &compiled.dubt)),
                Some(("noisy", p)) => {
                    let p: f64 = p.parse().map_err(|_| anyhow!("noisy accuracy `{p}` is not a number"))?;
                    if !(0.0..=1.0).contains(&p) {
                        bail!("noisy accuracy {p} is outside [0, 1]");
                    }
                    Box::new(NoisyOracle::from_rows(&reference.rows, p, cli.seed))
                }
                Some(("scores", file)) => Box::new(ScoresFileClassifier::parse(&run.read(Path::new(file))?)?),
                _ => bail!("unknown classifier `{classifier}` (oracle, prior, noisy:<p>, scores:<file>)"),
            };
            let mut predictions = Vec::with_capacity(rows.len());
            let mut traces = Vec::new();
            let flat = flat_submodel(&compiled.plan);
            for row in &rows {
                let instance = Instance { id: row.instance_id.clone(), features: row.features.clone() };
                let labels = match mode {
                    ModeArg::Cascade => {
                        let trace = cascade_infer(&instance, &compiled.plan, model.as_ref(), &compiled.dubt)?;
                        let labels = trace.final_labels.clone();
                        traces.push(trace);
                        labels
                    }
                    ModeArg::Flat => flat_infer(&instance, &flat, model.as_ref(), &compiled.dubt)?,
                };
                predictions.push((row.instance_id.clone(), labels));
            }
            run.write(
                "predictions.csv",
                &dataset_io::write_label_sets(predictions.iter().map(|(i, l)| (i.as_str(), l)))?,
            )?;
            if !traces.is_empty() {
                run.write("traces.jsonl", &dataset_io::write_traces(&traces))?;
            }
            writeln!(stdout, "{} instances predicted", predictions.len())?;
            Ok(Status::Ok)
        }
        Command::Evaluate { predictions, truth, taxonomy, label_column } => {
            let preds = dataset_io::load_label_sets(&run.read(predictions)?)?;
            let truth_rows = load_rows(run, truth, label_column)?;
            let truth: BTreeMap<String, BTreeSet<String>> = match taxonomy {
                Some(path) => {
                    let forest = read_forest(run, path)?;
                    let Some(compiled) = compile_or_report(&forest, stdout)? else { return Ok(Status::Invalid) };
                    let rules = compiled.dubt.compound_rules();
                    reference_labels(&truth_rows, &compiled)?
                        .rows
                        .into_iter()
                        .map(|r| (r.instance_id, reintroduce_compounds(&r.labels, &rules)))
                        .collect()
                }
                None => truth_rows.into_iter().map(|r| (r.instance_id, r.labels)).collect(),
            };
            // Classes with reference support; identical across runs scored on the same truth.
            let classes: Vec<String> = truth.values().flatten().cloned().collect::<BTreeSet<_>>().into_iter().collect();
            let metrics = per_class_f1(&preds, &truth, &classes)?;
            let summary = report::summary(&metrics, truth.len());
            run.write("metrics.csv", &report::write_metrics(&metrics)?)?;
            run.write("summary.json", &(serde_json::to_string_pretty(&summary)? + "\n"))?;
            writeln!(stdout, "macro F1 {:.4}, micro F1 {:.4}", summary.macro_f1, summary.micro_f1)?;
            Ok(Status::Ok)
        }
        Command::Compare { run_a, run_b, counts, average, name_a, name_b } => {
            let mut metrics_of = |path: &Path| -> anyhow::Result<Vec<_>> {
                let file = if path.is_dir() { path.join("metrics.csv") } else { path.to_path_buf() };
                Ok(report::read_metrics(&run.read(&file)?)?)
            };
            let a = metrics_of(run_a)?;
            let b = metrics_of(run_b)?;
            let counts: BTreeMap<String, ClassCounts> = match counts {
                Some(path) => report::read_counts(&run.read(path)?)?,
                None => a.iter().map(|m| (m.class.clone(), ClassCounts { training: 0, test: m.tp + m.fn_ })).collect(),
            };
            let average = match average {
                AverageArg::Macro => Average::Macro,
                AverageArg::Micro => Average::Micro,
            };
            let report = comparison_report(&a, &b, &counts, ComparisonOptions { average, ..Default::default() })?;
            let summary = ComparisonSummary::new(&report, name_a, name_b);
            run.write("comparison.csv", &report::write_gain_table(&report, name_a, name_b)?)?;
            run.write("gain_bins.csv", &report::write_gain_bins(&report)?)?;
            run.write("comparison.json", &(serde_json::to_string_pretty(&summary)? + "\n"))?;
            writeln!(stdout, "{}", summary.line())?;
            Ok(Status::Ok)
        }
        Command::Relations { csv, class_a, class_b, taxonomy, label_column } => {
            let mut rows = load_rows(run, csv, label_column)?;
            if let Some(path) = taxonomy {
                let forest = read_forest(run, path)?;
                let Some(compiled) = compile_or_report(&forest, stdout)? else { return Ok(Status::Invalid) };
                let (preprocessed, _) = multiplex_core::dataset::apply_preprocessing(
                    &rows,
                    &compiled.forest.preprocessing_rules,
                    &compiled.dubt,
                );
                rows = preprocessed;
                for row in &mut rows {
                    let known: BTreeSet<String> =
                        row.labels.iter().filter(|l| compiled.dubt.contains(l)).cloned().collect();
                    row.labels =
                        expand_ancestors(&known, &compiled.dubt).map_err(|c| anyhow!("unknown class `{c}`"))?;
                }
            }
            let relation = classify_pair_relation(&rows, class_a, class_b)?;
            let body = serde_json::json!({ "class_a": class_a, "class_b": class_b, "relation": relation });
            run.write("relation.json", &(serde_json::to_string_pretty(&body)? + "\n"))?;
            writeln!(stdout, "{}", relation.as_str())?;
            Ok(Status::Ok)
        }
    }
}
