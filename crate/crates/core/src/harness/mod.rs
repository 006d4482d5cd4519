//! Experiment runner: estimator sweeps over synthetic oracles and
//! classical-versus-quantum prediction comparisons, with JSON/CSV reports.
//!
//! Every run draws from `run_rng(seed, run_index)`, where runs are numbered
//! in grid (or input-row) order and then by repetition, so results do not
//! depend on how the runs are scheduled across threads.

mod dataset;
mod report;

use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensemble::{
    classical_predict, probabilistic_predict, quantum_predict, train_stumps, ClassLabel, EnsembleModel, QuantumOptions,
};
use crate::error::{Error, Result};
use crate::estimators::{estimate, EstimationResult, EstimatorConfig, EstimatorKind};
use crate::grover::GroverIterate;
use crate::oracles::rotation_oracle;
use crate::rng::{run_rng, TRAINING_STREAM};
use crate::statevector::DEFAULT_MAX_QUBITS;

pub use dataset::ingest_dataset;
pub use report::{
    compare_aggregates, sweep_aggregates, CompareAggregates, CompareRun, Report, ReportBody, SweepAggregates,
    SweepPointSummary, SweepRun, REPORT_FORMAT_VERSION, SOFT_MARGIN,
};

/// Everything that determines an experiment's output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub estimator: EstimatorKind,
    pub estimator_params: EstimatorConfig,
    pub reps: usize,
    /// True good probabilities for a sweep.
    pub grid: Vec<f64>,
    /// Extra uniform qubits added to each synthetic sweep oracle.
    pub dummy_qubits: usize,
    /// Explicit member probabilities; takes precedence over `model` and `dataset`.
    pub probabilities: Option<Vec<f64>>,
    /// Saved model document; takes precedence over training on `dataset`.
    pub model: Option<PathBuf>,
    /// Labeled CSV used for training (when no model is given) and as default inputs.
    pub dataset: Option<PathBuf>,
    pub n_stumps: usize,
    /// Explicit input rows; when empty, the dataset rows are used, or a single
    /// empty row when there is no dataset.
    pub inputs: Vec<Vec<f64>>,
    pub quantum: QuantumOptions,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            estimator: EstimatorKind::BinarySearch,
            estimator_params: EstimatorConfig::default(),
            reps: 1,
            grid: Vec::new(),
            dummy_qubits: 0,
            probabilities: None,
            model: None,
            dataset: None,
            n_stumps: 32,
            inputs: Vec::new(),
            quantum: QuantumOptions::default(),
        }
    }
}

impl ExperimentConfig {
    fn validate_common(&self) -> Result<()> {
        self.estimator_params.validate()?;
        if self.reps == 0 {
            return Err(Error::Config("reps must be at least 1".into()));
        }
        Ok(())
    }

    fn validate_sweep(&self) -> Result<()> {
        self.validate_common()?;
        if self.grid.is_empty() {
            return Err(Error::Config("sweep grid is empty".into()));
        }
        if let Some(p) = self.grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::Config(format!("grid value {p} outside [0, 1]")));
        }
        if 1 + self.dummy_qubits > DEFAULT_MAX_QUBITS {
            return Err(Error::Capacity { requested: 1 + self.dummy_qubits, limit: DEFAULT_MAX_QUBITS });
        }
        Ok(())
    }
}

/// One estimator run on the synthetic oracle with good probability `p`.
pub fn single_estimate(
    p: f64,
    dummy_qubits: usize,
    kind: EstimatorKind,
    config: &EstimatorConfig,
    seed: u64,
    run_index: u64,
) -> Result<EstimationResult> {
    let (prep, pred) = rotation_oracle(p, dummy_qubits)?;
    let iterate = GroverIterate::new(prep, pred);
    estimate(kind, &iterate, config, &mut run_rng(seed, run_index))
}

/// Runs the configured estimator `reps` times at every grid probability.
pub fn run_estimator_sweep(config: &ExperimentConfig) -> Result<Report> {
    config.validate_sweep()?;
    let reps = config.reps;
    let oracles = config.grid.iter().map(|&p| rotation_oracle(p, config.dummy_qubits)).collect::<Result<Vec<_>>>()?;
    let total = config.grid.len() * reps;
    let runs = (0..total)
        .into_par_iter()
        .map(|index| {
            let (grid_index, rep) = (index / reps, index % reps);
            let true_p = config.grid[grid_index];
            let (prep, pred) = &oracles[grid_index];
            let iterate = GroverIterate::new(prep.clone(), pred.clone());
            let mut rng = run_rng(config.seed, index as u64);
            let r = estimate(config.estimator, &iterate, &config.estimator_params, &mut rng)?;
            Ok(SweepRun {
                index: index as u64,
                grid_index,
                rep,
                true_p,
                estimator: config.estimator,
                point_estimate: r.point_estimate,
                interval: r.interval,
                covered: r.interval.contains(true_p),
                queries: r.queries,
                stop_round: r.stop_round,
                floor_hit: r.floor_hit,
                max_probe_iterations: r.max_probe_iterations(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::sweep(config.clone(), runs))
}

/// An input row with its known label, if any.
pub type LabeledInput = (Vec<f64>, Option<ClassLabel>);

/// Resolves the ensemble and the input rows.
pub fn resolve_ensemble(config: &ExperimentConfig) -> Result<(EnsembleModel, Vec<LabeledInput>)> {
    let dataset = config.dataset.as_deref().map(ingest_dataset).transpose()?;
    let model = if let Some(ps) = &config.probabilities {
        EnsembleModel::from_probabilities(ps)?
    } else if let Some(path) = &config.model {
        EnsembleModel::load(path)?
    } else if let Some(data) = &dataset {
        train_stumps(data, config.n_stumps, &mut run_rng(config.seed, TRAINING_STREAM))?
    } else {
        return Err(Error::Config("no ensemble source: give probabilities, a model, or a dataset".into()));
    };
    let inputs = if !config.inputs.is_empty() {
        config.inputs.iter().map(|x| (x.clone(), None)).collect()
    } else if let Some(data) = &dataset {
        data.rows().zip(data.labels()).map(|(x, &l)| (x.to_vec(), Some(l))).collect()
    } else {
        vec![(Vec::new(), None)]
    };
    Ok((model, inputs))
}

/// Runs the classical, probabilistic and quantum predictors on every input row.
pub fn run_prediction_comparison(config: &ExperimentConfig) -> Result<Report> {
    config.validate_common()?;
    let (model, inputs) = resolve_ensemble(config)?;
    let reps = config.reps;
    let total = inputs.len() * reps;
    let runs = (0..total)
        .into_par_iter()
        .map(|index| {
            let (row, rep) = (index / reps, index % reps);
            let (x, true_label) = &inputs[row];
            let mut rng = run_rng(config.seed, index as u64);
            let classical = classical_predict(&model, x)?;
            let probabilistic = probabilistic_predict(&model, x, &mut rng)?;
            let quantum =
                quantum_predict(&model, x, config.estimator, &config.estimator_params, config.quantum, &mut rng)?;
            Ok(CompareRun {
                index: index as u64,
                row,
                rep,
                true_label: *true_label,
                members: model.len(),
                soft_mean: model.soft_mean(x)?,
                classical,
                probabilistic,
                quantum,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::compare(config.clone(), runs))
}
