//! Reference classifiers: the oracle, a class-prior baseline and two noisy
//! oracles for synthetic experiments.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Classifier, ClassifierError, Instance, TaskScores};
use crate::dataset::DatasetRow;
use crate::taxonomy::{Dubt, Submodel, Task};

/// Ground-truth label sets by instance id.
pub type Truth = BTreeMap<String, BTreeSet<String>>;

fn truth_of<'a>(truth: &'a Truth, instance: &Instance) -> Result<&'a BTreeSet<String>, ClassifierError> {
    truth.get(&instance.id).ok_or_else(|| ClassifierError(format!("no ground truth for instance `{}`", instance.id)))
}

fn true_class<'a>(task: &'a Task, labels: &BTreeSet<String>) -> Option<&'a String> {
    task.classes.iter().find(|c| labels.contains(*c))
}

/// Scores the true class 1 and the others 0. Tasks the truth does not reach
/// get uniform scores.
#[derive(Debug, Clone, Default)]
pub struct OracleClassifier {
    truth: Truth,
}

impl OracleClassifier {
    pub fn new(truth: Truth) -> Self {
        OracleClassifier { truth }
    }

    pub fn from_rows(rows: &[DatasetRow]) -> Self {
        Self::new(rows.iter().map(|r| (r.instance_id.clone(), r.labels.clone())).collect())
    }
}

impl Classifier for OracleClassifier {
    fn predict(&self, instance: &Instance, submodel: &Submodel) -> Result<TaskScores, ClassifierError> {
        let labels = truth_of(&self.truth, instance)?;
        Ok(submodel
            .tasks
            .iter()
            .map(|task| {
                let truth = true_class(task, labels);
                let uniform = 1.0 / task.classes.len() as f64;
                let row = task
                    .classes
                    .iter()
                    .map(|c| {
                        let score = match truth {
                            Some(t) if t == c => 1.0,
                            Some(_) => 0.0,
                            None => uniform,
                        };
                        (c.clone(), score)
                    })
                    .collect();
                (task.bct.clone(), row)
            })
            .collect())
    }
}

/// Predicts every instance with the per-BCT class frequencies of a
/// training set (add-one smoothed).
#[derive(Debug, Clone, Default)]
pub struct PriorClassifier {
    priors: BTreeMap<String, BTreeMap<String, f64>>,
}

impl PriorClassifier {
    pub fn fit(rows: &[DatasetRow], dubt: &Dubt) -> Self {
        let mut priors = BTreeMap::new();
        for group in dubt.groups() {
            let counts: Vec<usize> = group.members.iter().map(|m| rows.iter().filter(|r| r.has(m)).count()).collect();
            let total: usize = counts.iter().sum();
            let denominator = (total + group.members.len()) as f64;
            let row =
                group.members.iter().zip(counts).map(|(m, n)| (m.clone(), (n + 1) as f64 / denominator)).collect();
            priors.insert(group.id.clone(), row);
        }
        PriorClassifier { priors }
    }
}

impl Classifier for PriorClassifier {
    fn predict(&self, _: &Instance, submodel: &Submodel) -> Result<TaskScores, ClassifierError> {
        submodel
            .tasks
            .iter()
            .map(|task| {
                self.priors
                    .get(&task.bct)
                    .map(|p| (task.bct.clone(), p.clone()))
                    .ok_or_else(|| ClassifierError(format!("no prior for BCT `{}`", task.bct)))
            })
            .collect()
    }
}

/// FNV-1a over the parts, separated so that ("ab", "c") and ("a", "bc")
/// differ.
fn stream_seed(seed: u64, parts: &[&str]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for part in parts {
        for byte in part.bytes().chain([0xff]) {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(0x0100_0000_01b3);
        }
    }
    hash ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Per task, the top score goes to the true class with probability
/// `accuracy` and to a uniformly chosen wrong class otherwise. When the
/// truth does not reach the task, a uniformly chosen class wins. The winner
/// scores in (0.5, 1] and the others share the rest at random.
#[derive(Debug, Clone)]
pub struct NoisyOracle {
    truth: Truth,
    accuracy: f64,
    seed: u64,
}

impl NoisyOracle {
    pub fn new(truth: Truth, accuracy: f64, seed: u64) -> Self {
        NoisyOracle { truth, accuracy: accuracy.clamp(0.0, 1.0), seed }
    }

    pub fn from_rows(rows: &[DatasetRow], accuracy: f64, seed: u64) -> Self {
        Self::new(rows.iter().map(|r| (r.instance_id.clone(), r.labels.clone())).collect(), accuracy, seed)
    }

    /// Scores for a single task, deterministic in (instance, submodel, task, seed).
    pub fn task_scores(
        &self,
        instance: &str,
        submodel: &str,
        task: &Task,
        labels: &BTreeSet<String>,
    ) -> BTreeMap<String, f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(self.seed, &[instance, submodel, &task.bct]));
        let n = task.classes.len();
        let top = match true_class(task, labels).and_then(|t| task.classes.iter().position(|c| c == t)) {
            Some(t) if n == 1 || rng.random::<f64>() < self.accuracy => t,
            Some(t) => {
                let wrong = rng.random_range(0..n - 1);
                if wrong >= t {
                    wrong + 1
                } else {
                    wrong
                }
            }
            None => rng.random_range(0..n),
        };
        // random::<f64>() lies in [0, 1), so the winner lies in (0.5, 1].
        let winner = 1.0 - 0.5 * rng.random::<f64>();
        let shares: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + f64::EPSILON).collect();
        let total: f64 = shares.iter().enumerate().filter(|(i, _)| *i != top).map(|(_, s)| s).sum();
        task.classes
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let score = if i == top { winner } else { (1.0 - winner) * shares[i] / total };
                (c.clone(), score)
            })
            .collect()
    }
}

impl Classifier for NoisyOracle {
    fn predict(&self, instance: &Instance, submodel: &Submodel) -> Result<TaskScores, ClassifierError> {
        let labels = truth_of(&self.truth, instance)?;
        Ok(submodel
            .tasks
            .iter()
            .map(|task| (task.bct.clone(), self.task_scores(&instance.id, &submodel.id, task, labels)))
            .collect())
    }
}

/// Independent per-class noise, the behavior of a flat multi-label model:
/// each class lands on the correct side of 0.5 with probability `accuracy`.
#[derive(Debug, Clone)]
pub struct NoisyLabelOracle {
    truth: Truth,
    accuracy: f64,
    seed: u64,
}

impl NoisyLabelOracle {
    pub fn new(truth: Truth, accuracy: f64, seed: u64) -> Self {
        NoisyLabelOracle { truth, accuracy: accuracy.clamp(0.0, 1.0), seed }
    }

    pub fn from_rows(rows: &[DatasetRow], accuracy: f64, seed: u64) -> Self {
        Self::new(rows.iter().map(|r| (r.instance_id.clone(), r.labels.clone())).collect(), accuracy, seed)
    }
}

impl Classifier for NoisyLabelOracle {
    fn predict(&self, instance: &Instance, submodel: &Submodel) -> Result<TaskScores, ClassifierError> {
        let labels = truth_of(&self.truth, instance)?;
        Ok(submodel
            .tasks
            .iter()
            .map(|task| {
                let row = task
                    .classes
                    .iter()
                    .map(|c| {
                        let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(self.seed, &[&instance.id, c]));
                        let correct = rng.random::<f64>() < self.accuracy;
                        let positive = labels.contains(c) == correct;
                        let u = 0.5 * rng.random::<f64>();
                        (c.clone(), if positive { 1.0 - u } else { u })
                    })
                    .collect();
                (task.bct.clone(), row)
            })
            .collect())
    }
}
