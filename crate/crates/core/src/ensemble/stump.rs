use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{ClassLabel, Classifier, EnsembleModel, Member};
use crate::error::{Error, Result};

/// Labeled feature matrix with a fixed number of columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    features: Vec<Vec<f64>>,
    labels: Vec<ClassLabel>,
    feature_names: Vec<String>,
}

impl Dataset {
    pub fn new(features: Vec<Vec<f64>>, labels: Vec<ClassLabel>) -> Result<Self> {
        let width = features.first().map_or(0, Vec::len);
        let names = (0..width).map(|i| format!("x{i}")).collect();
        Self::with_names(features, labels, names)
    }

    pub fn with_names(features: Vec<Vec<f64>>, labels: Vec<ClassLabel>, feature_names: Vec<String>) -> Result<Self> {
        if features.len() != labels.len() {
            return Err(Error::Range(format!("{} feature rows but {} labels", features.len(), labels.len())));
        }
        if let Some((row, r)) = features.iter().enumerate().find(|(_, r)| r.len() != feature_names.len()) {
            return Err(Error::Range(format!("row {row} has {} features, expected {}", r.len(), feature_names.len())));
        }
        Ok(Self { features, labels, feature_names })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.features.iter().map(Vec::as_slice)
    }

    pub fn labels(&self) -> &[ClassLabel] {
        &self.labels
    }
}

/// Depth-one threshold classifier: `x[feature] <= threshold` selects the left leaf.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecisionStump {
    pub feature: usize,
    pub threshold: f64,
    /// Class₁ frequency in the left leaf.
    pub left_p: f64,
    /// Class₁ frequency in the right leaf.
    pub right_p: f64,
}

impl Classifier for DecisionStump {
    fn predict_proba(&self, x: &[f64]) -> f64 {
        if x[self.feature] <= self.threshold {
            self.left_p
        } else {
            self.right_p
        }
    }

    fn min_features(&self) -> usize {
        self.feature + 1
    }
}

fn gini(class1: usize, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let p = class1 as f64 / total as f64;
    2.0 * p * (1.0 - p)
}

fn frequency(class1: usize, total: usize) -> f64 {
    class1 as f64 / total as f64
}

/// Best Gini split of the rows in `sample`. Ties keep the lowest feature and
/// threshold; a sample with no useful split yields a constant stump.
pub fn fit_stump(data: &Dataset, sample: &[usize]) -> DecisionStump {
    let total = sample.len();
    let class1_total = sample.iter().filter(|&&i| data.labels[i] == ClassLabel::Class1).count();
    let parent = gini(class1_total, total);
    let constant = DecisionStump {
        feature: 0,
        threshold: sample.iter().map(|&i| data.features[i].first().copied().unwrap_or(0.0)).fold(f64::MIN, f64::max),
        left_p: frequency(class1_total, total),
        right_p: frequency(class1_total, total),
    };
    let mut best: Option<(f64, DecisionStump)> = None;
    let mut order = sample.to_vec();
    for feature in 0..data.n_features() {
        order.sort_by(|&a, &b| data.features[a][feature].total_cmp(&data.features[b][feature]));
        let mut left_class1 = 0;
        for k in 0..total - 1 {
            let here = data.features[order[k]][feature];
            let next = data.features[order[k + 1]][feature];
            left_class1 += (data.labels[order[k]] == ClassLabel::Class1) as usize;
            if here == next {
                continue;
            }
            let left = k + 1;
            let right = total - left;
            let right_class1 = class1_total - left_class1;
            let impurity =
                (left as f64 * gini(left_class1, left) + right as f64 * gini(right_class1, right)) / total as f64;
            if impurity < parent - 1e-12 && best.as_ref().is_none_or(|(b, _)| impurity < *b - 1e-12) {
                let stump = DecisionStump {
                    feature,
                    threshold: 0.5 * (here + next),
                    left_p: frequency(left_class1, left),
                    right_p: frequency(right_class1, right),
                };
                best = Some((impurity, stump));
            }
        }
    }
    best.map_or(constant, |(_, s)| s)
}

/// Bootstrap attempts before a stump falls back to the full dataset.
const MAX_BOOTSTRAP_DRAWS: usize = 64;

/// Trains `n_stumps` stumps, each on a bootstrap resample of `data`.
///
/// Resamples that contain only one class are redrawn, up to a fixed number of
/// attempts, after which the full dataset is used for that stump.
pub fn train_stumps<R: Rng + ?Sized>(data: &Dataset, n_stumps: usize, rng: &mut R) -> Result<EnsembleModel> {
    if n_stumps == 0 {
        return Err(Error::Config("n_stumps must be at least 1".into()));
    }
    if data.is_empty() || data.n_features() == 0 {
        return Err(Error::Training("dataset has no rows or no features".into()));
    }
    let class1 = data.labels.iter().filter(|&&l| l == ClassLabel::Class1).count();
    if class1 == 0 || class1 == data.len() {
        return Err(Error::Training("dataset contains a single class".into()));
    }
    let n = data.len();
    let mut members = Vec::with_capacity(n_stumps);
    for _ in 0..n_stumps {
        let mut sample = Vec::new();
        for _ in 0..MAX_BOOTSTRAP_DRAWS {
            sample = (0..n).map(|_| rng.gen_range(0..n)).collect();
            let c1 = sample.iter().filter(|&&i| data.labels[i] == ClassLabel::Class1).count();
            if c1 != 0 && c1 != n {
                break;
            }
            sample.clear();
        }
        if sample.is_empty() {
            sample = (0..n).collect();
        }
        members.push(Member::Stump(fit_stump(data, &sample)));
    }
    EnsembleModel::new(members)
}
