use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qvote::ensemble::{classical_predict, probabilistic_predict, quantum_predict, train_stumps, QuantumOptions};
use qvote::estimators::{EstimatorConfig, EstimatorKind};
use qvote::grover::IterationSchedule;
use qvote::harness::{
    ingest_dataset, resolve_ensemble, run_estimator_sweep, run_prediction_comparison, single_estimate,
    ExperimentConfig, Report,
};
use qvote::rng::{run_rng, TRAINING_STREAM};
use qvote::{Error, Result};

#[derive(Parser)]
#[command(name = "qvote", version, about = "Amplitude-estimation experiments for ensemble prediction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one estimator on a synthetic oracle with good probability --p.
    Estimate {
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        qubits: usize,
        #[command(flatten)]
        estimator: EstimatorArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run an estimator repeatedly over a grid of good probabilities.
    Sweep {
        /// Comma-separated probabilities, e.g. 0.5,0.25,0.125.
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        qubits: usize,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[command(flatten)]
        estimator: EstimatorArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Push one input through the classical, probabilistic and quantum predictors.
    Predict {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        /// Comma-separated feature values.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Vec<f64>,
        #[command(flatten)]
        estimator: EstimatorArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare the three predictors over every input row.
    Compare {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[command(flatten)]
        estimator: EstimatorArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Re-aggregate a stored report from its run records.
    Report {
        input: PathBuf,
        /// Fail if the stored aggregates differ from the recomputed ones.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Train a stump ensemble on a labeled CSV file and save the model.
    Train {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long = "n-stumps", default_value_t = 32)]
        n_stumps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct EstimatorArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "binary-search")]
    estimator: EstimatorKind,
    /// QSearch growth factor, in (1, 2).
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Phase-estimation resolution (power of two).
    #[arg(long = "M")]
    m: Option<usize>,
    #[arg(long = "max-rounds")]
    max_rounds: Option<u32>,
    /// Probes per amplification check, majority-voted.
    #[arg(long)]
    trials: Option<u32>,
    #[arg(long)]
    schedule: Option<IterationSchedule>,
    /// Run the full bisection instead of deciding on the first probe.
    #[arg(long = "no-early-exit")]
    no_early_exit: bool,
    /// Reject ensembles whose size is not a power of two.
    #[arg(long = "no-padding")]
    no_padding: bool,
}

impl EstimatorArgs {
    fn config(&self) -> EstimatorConfig {
        let d = EstimatorConfig::default();
        EstimatorConfig {
            growth_c: self.c.unwrap_or(d.growth_c),
            epsilon: self.epsilon.unwrap_or(d.epsilon),
            est_amp_m: self.m.unwrap_or(d.est_amp_m),
            max_rounds: self.max_rounds.unwrap_or(d.max_rounds),
            trials_per_check: self.trials.unwrap_or(d.trials_per_check),
            schedule: self.schedule.unwrap_or(d.schedule),
        }
    }

    fn quantum(&self) -> QuantumOptions {
        QuantumOptions { early_exit: !self.no_early_exit, allow_padding: !self.no_padding }
    }

    fn experiment(&self) -> ExperimentConfig {
        ExperimentConfig {
            seed: self.seed,
            estimator: self.estimator,
            estimator_params: self.config(),
            quantum: self.quantum(),
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct EnsembleArgs {
    /// Comma-separated member probabilities.
    #[arg(long, value_delimiter = ',')]
    probs: Option<Vec<f64>>,
    /// Saved model document.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Labeled CSV: training data when no model is given, and the input rows.
    #[arg(long)]
    dataset: Option<PathBuf>,
    #[arg(long = "n-stumps", default_value_t = 32)]
    n_stumps: usize,
}

impl EnsembleArgs {
    fn apply(&self, config: &mut ExperimentConfig) {
        config.probabilities = self.probs.clone();
        config.model = self.model.clone();
        config.dataset = self.dataset.clone();
        config.n_stumps = self.n_stumps;
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn emit_report(report: &Report, output: &OutputArgs) -> Result<()> {
    let bytes = match output.format {
        Format::Json => {
            let mut s = report.to_json()?;
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => {
            let mut buf = Vec::new();
            report.write_csv(&mut buf)?;
            buf
        }
    };
    emit(output.out.as_deref(), &bytes)
}

fn emit_json(value: &serde_json::Value, output: &OutputArgs) -> Result<()> {
    if matches!(output.format, Format::Csv) {
        return Err(Error::Config("csv output is only available for sweep, compare and report".into()));
    }
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    emit(output.out.as_deref(), s.as_bytes())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Estimate { p, qubits, estimator, output } => {
            let config = estimator.config();
            config.validate()?;
            let result = single_estimate(p, qubits, estimator.estimator, &config, estimator.seed, 0)?;
            emit_json(&json!({ "true_p": p, "config": config, "result": result }), &output)
        }
        Command::Sweep { grid, qubits, reps, estimator, output } => {
            let config = ExperimentConfig { grid, dummy_qubits: qubits, reps, ..estimator.experiment() };
            emit_report(&run_estimator_sweep(&config)?, &output)
        }
        Command::Predict { ensemble, x, estimator, output } => {
            let mut config = estimator.experiment();
            ensemble.apply(&mut config);
            let (model, _) = resolve_ensemble(&config)?;
            let mut rng = run_rng(config.seed, 0);
            let classical = classical_predict(&model, &x)?;
            let probabilistic = probabilistic_predict(&model, &x, &mut rng)?;
            let quantum =
                quantum_predict(&model, &x, config.estimator, &config.estimator_params, config.quantum, &mut rng)?;
            emit_json(
                &json!({
                    "x": x,
                    "members": model.len(),
                    "soft_mean": model.soft_mean(&x)?,
                    "classical": classical,
                    "probabilistic": probabilistic,
                    "quantum": quantum,
                }),
                &output,
            )
        }
        Command::Compare { ensemble, reps, estimator, output } => {
            let mut config = ExperimentConfig { reps, ..estimator.experiment() };
            ensemble.apply(&mut config);
            emit_report(&run_prediction_comparison(&config)?, &output)
        }
        Command::Report { input, check, output } => {
            let mut report = Report::parse(&fs::read_to_string(&input)?)?;
            if check {
                report.verify()?;
            }
            report.recompute();
            emit_report(&report, &output)
        }
        Command::Train { dataset, n_stumps, seed, out } => {
            let data = ingest_dataset(&dataset)?;
            let model = train_stumps(&data, n_stumps, &mut run_rng(seed, TRAINING_STREAM))?;
            let mut text = model.to_json()?;
            text.push('\n');
            emit(out.as_deref(), text.as_bytes())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
