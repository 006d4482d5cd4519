//! Ensembles of small probabilistic classifiers and three ways to query them:
//! a full majority vote, a single randomly chosen member, and amplitude
//! estimation over an amplitude-encoded summary state.

mod oracle;
mod stump;

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{binary_search_first_probe, estimate, EstimatorConfig, EstimatorKind, Segment};
use crate::grover::{GroverIterate, QueryCounts};

pub use oracle::{encode_probabilities, EnsembleOracle, CLASS_QUBIT};
pub use stump::{fit_stump, train_stumps, Dataset, DecisionStump};

/// Binary class label, written as `1` or `2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum ClassLabel {
    Class1,
    Class2,
}

impl ClassLabel {
    /// The `p >= 0.5` decision rule; ties go to Class₁.
    pub fn from_probability(p: f64) -> Self {
        if p >= 0.5 {
            Self::Class1
        } else {
            Self::Class2
        }
    }
}

impl TryFrom<u8> for ClassLabel {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Self::Class1),
            2 => Ok(Self::Class2),
            other => Err(Error::Domain(format!("class label {other} is not 1 or 2"))),
        }
    }
}

impl From<ClassLabel> for u8 {
    fn from(l: ClassLabel) -> u8 {
        match l {
            ClassLabel::Class1 => 1,
            ClassLabel::Class2 => 2,
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(*self))
    }
}

impl FromStr for ClassLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let v: u8 = s.trim().parse().map_err(|_| Error::Domain(format!("class label '{s}' is not 1 or 2")))?;
        Self::try_from(v)
    }
}

/// A model mapping a feature vector to the probability of Class₁.
pub trait Classifier {
    fn predict_proba(&self, x: &[f64]) -> f64;

    /// Smallest feature-vector length the model can evaluate.
    fn min_features(&self) -> usize {
        0
    }
}

/// One ensemble member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Member {
    /// Ignores the input and always reports `p`.
    Constant {
        p: f64,
    },
    Stump(DecisionStump),
}

impl Classifier for Member {
    fn predict_proba(&self, x: &[f64]) -> f64 {
        match self {
            Member::Constant { p } => *p,
            Member::Stump(s) => s.predict_proba(x),
        }
    }

    fn min_features(&self) -> usize {
        match self {
            Member::Constant { .. } => 0,
            Member::Stump(s) => s.min_features(),
        }
    }
}

/// Current version of the model document format.
pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Equal-weight ensemble of `N >= 1` members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleModel {
    members: Vec<Member>,
    /// Abstract cost of evaluating one member.
    #[serde(default = "default_unit_cost")]
    unit_cost: f64,
}

fn default_unit_cost() -> f64 {
    1.0
}

#[derive(Serialize, Deserialize)]
struct ModelDocument {
    version: u32,
    #[serde(flatten)]
    model: EnsembleModel,
}

impl EnsembleModel {
    pub fn new(members: Vec<Member>) -> Result<Self> {
        let model = Self { members, unit_cost: 1.0 };
        model.validate()?;
        Ok(model)
    }

    /// Ensemble of constant members, one per probability.
    pub fn from_probabilities(ps: &[f64]) -> Result<Self> {
        Self::new(ps.iter().map(|&p| Member::Constant { p }).collect())
    }

    pub fn with_unit_cost(mut self, unit_cost: f64) -> Result<Self> {
        self.unit_cost = unit_cost;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if self.members.is_empty() {
            return Err(Error::Config("ensemble has no members".into()));
        }
        if !(self.unit_cost.is_finite() && self.unit_cost > 0.0) {
            return Err(Error::Config(format!("unit cost {} must be positive", self.unit_cost)));
        }
        let bad_p = |p: f64| !(0.0..=1.0).contains(&p);
        for (i, m) in self.members.iter().enumerate() {
            let out_of_range = match m {
                Member::Constant { p } => bad_p(*p),
                Member::Stump(s) => bad_p(s.left_p) || bad_p(s.right_p) || !s.threshold.is_finite(),
            };
            if out_of_range {
                return Err(Error::Config(format!("member {i} has an invalid parameter: {m:?}")));
            }
        }
        Ok(())
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn unit_cost(&self) -> f64 {
        self.unit_cost
    }

    pub fn min_features(&self) -> usize {
        self.members.iter().map(Classifier::min_features).max().unwrap_or(0)
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        let need = self.min_features();
        if x.len() < need {
            return Err(Error::Range(format!("input has {} features, model needs {need}", x.len())));
        }
        Ok(())
    }

    /// `p_i` of every member on `x`.
    pub fn probabilities(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        Ok(self.members.iter().map(|m| m.predict_proba(x)).collect())
    }

    /// Mean of the member probabilities on `x`.
    pub fn soft_mean(&self, x: &[f64]) -> Result<f64> {
        let ps = self.probabilities(x)?;
        Ok(ps.iter().sum::<f64>() / ps.len() as f64)
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = ModelDocument { version: MODEL_FORMAT_VERSION, model: self.clone() };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDocument = serde_json::from_str(text)?;
        if doc.version != MODEL_FORMAT_VERSION {
            return Err(Error::Config(format!("unsupported model format version {}", doc.version)));
        }
        doc.model.validate()?;
        Ok(doc.model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

impl Classifier for EnsembleModel {
    /// Soft mean of the members.
    fn predict_proba(&self, x: &[f64]) -> f64 {
        self.members.iter().map(|m| m.predict_proba(x)).sum::<f64>() / self.members.len() as f64
    }

    fn min_features(&self) -> usize {
        EnsembleModel::min_features(self)
    }
}

/// Outcome of one prediction, with its cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionReport {
    pub answer: ClassLabel,
    /// Value compared against 0.5.
    pub p_estimate: f64,
    /// Probability segment behind `p_estimate`, when the method produces one.
    pub interval: Option<Segment>,
    /// `classical`, `probabilistic` or `quantum-<estimator>`.
    pub method: String,
    pub queries: QueryCounts,
    /// Members evaluated on the input.
    pub classifier_evaluations: u64,
    /// Cost of this prediction in member-cost units: `N·T`, `T`, or A-applications × `T`.
    pub cost: f64,
    /// `N·T`, the full-vote cost this prediction is compared against.
    pub classical_equivalent_cost: f64,
    /// `p_estimate >= 0.5`; always agrees with `answer`.
    pub threshold_passed: bool,
    /// The estimate's interval contains 0.5 in its interior.
    pub low_confidence: bool,
}

impl PredictionReport {
    fn classical_like(model: &EnsembleModel, method: &str, p: f64, evaluations: u64, answer: ClassLabel) -> Self {
        Self {
            answer,
            p_estimate: p,
            interval: None,
            method: method.to_owned(),
            queries: QueryCounts::default(),
            classifier_evaluations: evaluations,
            cost: evaluations as f64 * model.unit_cost,
            classical_equivalent_cost: model.len() as f64 * model.unit_cost,
            threshold_passed: answer == ClassLabel::Class1,
            low_confidence: false,
        }
    }
}

/// Hard majority vote over every member; ties go to Class₁.
pub fn classical_predict(model: &EnsembleModel, x: &[f64]) -> Result<PredictionReport> {
    let ps = model.probabilities(x)?;
    let k1 = ps.iter().filter(|&&p| ClassLabel::from_probability(p) == ClassLabel::Class1).count();
    let k2 = ps.len() - k1;
    let answer = if k1 >= k2 { ClassLabel::Class1 } else { ClassLabel::Class2 };
    let p = k1 as f64 / ps.len() as f64;
    Ok(PredictionReport::classical_like(model, "classical", p, ps.len() as u64, answer))
}

/// Evaluates one uniformly chosen member and thresholds its probability.
pub fn probabilistic_predict<R: Rng + ?Sized>(
    model: &EnsembleModel,
    x: &[f64],
    rng: &mut R,
) -> Result<PredictionReport> {
    model.check_input(x)?;
    let i = rng.gen_range(0..model.len());
    let p = model.members[i].predict_proba(x);
    Ok(PredictionReport::classical_like(model, "probabilistic", p, 1, ClassLabel::from_probability(p)))
}

/// Builds the preparation and predicate for `model` on input `x`. Every
/// member is evaluated once here.
pub fn build_ensemble_oracle(model: &EnsembleModel, x: &[f64], allow_padding: bool) -> Result<EnsembleOracle> {
    encode_probabilities(&model.probabilities(x)?, allow_padding)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuantumOptions {
    /// With the bisection estimator, decide from the first probe alone.
    pub early_exit: bool,
    /// Round the member count up to a power of two.
    pub allow_padding: bool,
}

impl Default for QuantumOptions {
    fn default() -> Self {
        Self { early_exit: true, allow_padding: true }
    }
}

/// Estimates the ensemble's mean Class₁ probability with `kind` and applies
/// the `>= 0.5` rule to the estimator's decision value.
pub fn quantum_predict<R: Rng + ?Sized>(
    model: &EnsembleModel,
    x: &[f64],
    kind: EstimatorKind,
    config: &EstimatorConfig,
    options: QuantumOptions,
    rng: &mut R,
) -> Result<PredictionReport> {
    let oracle = build_ensemble_oracle(model, x, options.allow_padding)?;
    let iterate = GroverIterate::new(oracle.preparation, oracle.predicate);
    let result = if kind == EstimatorKind::BinarySearch && options.early_exit {
        binary_search_first_probe(&iterate, config, rng)?
    } else {
        estimate(kind, &iterate, config, rng)?
    };
    let p = result.decision_value();
    let answer = ClassLabel::from_probability(p);
    Ok(PredictionReport {
        answer,
        p_estimate: p,
        interval: Some(result.interval),
        method: format!("quantum-{kind}"),
        queries: result.queries,
        classifier_evaluations: model.len() as u64,
        cost: result.queries.a_applications as f64 * model.unit_cost,
        classical_equivalent_cost: model.len() as f64 * model.unit_cost,
        threshold_passed: answer == ClassLabel::Class1,
        low_confidence: result.interval.straddles_half(),
    })
}
