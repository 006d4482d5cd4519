use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ExperimentConfig;
use crate::ensemble::{ClassLabel, PredictionReport};
use crate::error::{Error, Result};
use crate::estimators::{EstimatorKind, Segment};
use crate::grover::QueryCounts;

/// Current version of the report document format.
pub const REPORT_FORMAT_VERSION: u32 = 1;

/// One estimator run on a synthetic oracle with known good probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRun {
    pub index: u64,
    pub grid_index: usize,
    pub rep: usize,
    pub true_p: f64,
    pub estimator: EstimatorKind,
    pub point_estimate: f64,
    pub interval: Segment,
    pub covered: bool,
    pub queries: QueryCounts,
    pub stop_round: u32,
    pub floor_hit: bool,
    pub max_probe_iterations: u64,
}

/// Per-grid-point summary of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPointSummary {
    pub grid_index: usize,
    pub true_p: f64,
    pub runs: usize,
    pub mean_a_applications: f64,
    pub p50_a_applications: u64,
    pub p90_a_applications: u64,
    pub max_a_applications: u64,
    pub mean_iterate_applications: f64,
    pub mean_point_estimate: f64,
    pub coverage_rate: f64,
    pub floor_rate: f64,
    /// Returned segments and how often each occurred, keyed by their display form.
    pub segment_counts: BTreeMap<String, usize>,
    pub modal_segment: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepAggregates {
    pub total_runs: usize,
    pub points: Vec<SweepPointSummary>,
}

/// One input pushed through all three predictors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRun {
    pub index: u64,
    pub row: usize,
    pub rep: usize,
    pub true_label: Option<ClassLabel>,
    pub members: usize,
    pub soft_mean: f64,
    pub classical: PredictionReport,
    pub probabilistic: PredictionReport,
    pub quantum: PredictionReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareAggregates {
    pub total_runs: usize,
    pub members: usize,
    pub quantum_classical_agreement: f64,
    pub probabilistic_classical_agreement: f64,
    /// Agreement restricted to runs whose soft mean is at least 0.05 from 0.5.
    pub quantum_classical_agreement_at_margin: Option<f64>,
    pub classical_accuracy: Option<f64>,
    pub probabilistic_accuracy: Option<f64>,
    pub quantum_accuracy: Option<f64>,
    pub mean_quantum_a_applications: f64,
    pub p50_quantum_a_applications: u64,
    pub p90_quantum_a_applications: u64,
    pub max_quantum_a_applications: u64,
    /// Mean quantum A-applications divided by `N`.
    pub headline_ratio: f64,
    pub low_confidence_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ReportBody {
    Sweep { runs: Vec<SweepRun>, aggregates: SweepAggregates },
    Compare { runs: Vec<CompareRun>, aggregates: CompareAggregates },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: u32,
    pub tool_version: String,
    pub config: ExperimentConfig,
    #[serde(flatten)]
    pub body: ReportBody,
}

pub const SOFT_MARGIN: f64 = 0.05;

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

fn rate<T>(items: &[T], pred: impl Fn(&T) -> bool) -> f64 {
    if items.is_empty() {
        return 0.0;
    }
    items.iter().filter(|i| pred(i)).count() as f64 / items.len() as f64
}

/// Nearest-rank percentile of `sorted` (ascending), `q` in (0, 1].
fn percentile(sorted: &[u64], q: f64) -> u64 {
    if sorted.is_empty() {
        return 0;
    }
    let rank = (q * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

fn sorted(values: impl Iterator<Item = u64>) -> Vec<u64> {
    let mut v: Vec<u64> = values.collect();
    v.sort_unstable();
    v
}

pub fn sweep_aggregates(runs: &[SweepRun]) -> SweepAggregates {
    let mut groups: BTreeMap<usize, Vec<&SweepRun>> = BTreeMap::new();
    for r in runs {
        groups.entry(r.grid_index).or_default().push(r);
    }
    let points = groups
        .into_iter()
        .map(|(grid_index, group)| {
            let a = sorted(group.iter().map(|r| r.queries.a_applications));
            let mut segment_counts = BTreeMap::new();
            for r in &group {
                *segment_counts.entry(r.interval.to_string()).or_insert(0usize) += 1;
            }
            // Highest count wins; ties go to the segment that sorts first.
            let modal_segment = segment_counts
                .iter()
                .fold(None::<(&String, usize)>, |best, (s, &c)| match best {
                    Some((_, bc)) if bc >= c => best,
                    _ => Some((s, c)),
                })
                .map(|(s, _)| s.clone())
                .unwrap_or_default();
            SweepPointSummary {
                grid_index,
                true_p: group[0].true_p,
                runs: group.len(),
                mean_a_applications: mean(a.iter().map(|&v| v as f64)),
                p50_a_applications: percentile(&a, 0.5),
                p90_a_applications: percentile(&a, 0.9),
                max_a_applications: a.last().copied().unwrap_or(0),
                mean_iterate_applications: mean(group.iter().map(|r| r.queries.iterate_applications as f64)),
                mean_point_estimate: mean(group.iter().map(|r| r.point_estimate)),
                coverage_rate: rate(&group, |r| r.covered),
                floor_rate: rate(&group, |r| r.floor_hit),
                segment_counts,
                modal_segment,
            }
        })
        .collect();
    SweepAggregates { total_runs: runs.len(), points }
}

pub fn compare_aggregates(runs: &[CompareRun]) -> CompareAggregates {
    let members = runs.first().map_or(0, |r| r.members);
    let labeled: Vec<&CompareRun> = runs.iter().filter(|r| r.true_label.is_some()).collect();
    let accuracy = |pick: fn(&CompareRun) -> &PredictionReport| {
        (!labeled.is_empty()).then(|| rate(&labeled, |r| Some(pick(r).answer) == r.true_label))
    };
    let at_margin: Vec<&CompareRun> = runs.iter().filter(|r| (r.soft_mean - 0.5).abs() >= SOFT_MARGIN).collect();
    let a = sorted(runs.iter().map(|r| r.quantum.queries.a_applications));
    let mean_a = mean(a.iter().map(|&v| v as f64));
    CompareAggregates {
        total_runs: runs.len(),
        members,
        quantum_classical_agreement: rate(runs, |r| r.quantum.answer == r.classical.answer),
        probabilistic_classical_agreement: rate(runs, |r| r.probabilistic.answer == r.classical.answer),
        quantum_classical_agreement_at_margin: (!at_margin.is_empty())
            .then(|| rate(&at_margin, |r| r.quantum.answer == r.classical.answer)),
        classical_accuracy: accuracy(|r| &r.classical),
        probabilistic_accuracy: accuracy(|r| &r.probabilistic),
        quantum_accuracy: accuracy(|r| &r.quantum),
        mean_quantum_a_applications: mean_a,
        p50_quantum_a_applications: percentile(&a, 0.5),
        p90_quantum_a_applications: percentile(&a, 0.9),
        max_quantum_a_applications: a.last().copied().unwrap_or(0),
        headline_ratio: if members == 0 { 0.0 } else { mean_a / members as f64 },
        low_confidence_rate: rate(runs, |r| r.quantum.low_confidence),
    }
}

#[derive(Serialize)]
struct SweepCsvRow<'a> {
    index: u64,
    grid_index: usize,
    rep: usize,
    true_p: f64,
    estimator: &'a str,
    point_estimate: f64,
    interval_low: f64,
    interval_high: f64,
    interval_closed: bool,
    covered: bool,
    a_applications: u64,
    a_inverse_applications: u64,
    iterate_applications: u64,
    oracle_evaluations: u64,
    measurements: u64,
    stop_round: u32,
    floor_hit: bool,
    max_probe_iterations: u64,
}

#[derive(Serialize)]
struct CompareCsvRow {
    index: u64,
    row: usize,
    rep: usize,
    true_label: Option<u8>,
    members: usize,
    soft_mean: f64,
    classical_answer: u8,
    classical_p: f64,
    probabilistic_answer: u8,
    probabilistic_p: f64,
    quantum_answer: u8,
    quantum_p: f64,
    quantum_interval_low: Option<f64>,
    quantum_interval_high: Option<f64>,
    quantum_a_applications: u64,
    quantum_low_confidence: bool,
    classical_cost: f64,
    quantum_cost: f64,
}

impl Report {
    pub fn new(config: ExperimentConfig, body: ReportBody) -> Self {
        Self { version: REPORT_FORMAT_VERSION, tool_version: env!("CARGO_PKG_VERSION").to_owned(), config, body }
    }

    pub fn sweep(config: ExperimentConfig, runs: Vec<SweepRun>) -> Self {
        let aggregates = sweep_aggregates(&runs);
        Self::new(config, ReportBody::Sweep { runs, aggregates })
    }

    pub fn compare(config: ExperimentConfig, runs: Vec<CompareRun>) -> Self {
        let aggregates = compare_aggregates(&runs);
        Self::new(config, ReportBody::Compare { runs, aggregates })
    }

    /// Recomputes the aggregates from the stored runs.
    pub fn recompute(&mut self) {
        match &mut self.body {
            ReportBody::Sweep { runs, aggregates } => *aggregates = sweep_aggregates(runs),
            ReportBody::Compare { runs, aggregates } => *aggregates = compare_aggregates(runs),
        }
    }

    /// Checks that the stored aggregates equal those recomputed from the runs.
    pub fn verify(&self) -> Result<()> {
        let mut fresh = self.clone();
        fresh.recompute();
        if fresh.body != self.body {
            return Err(Error::Numeric("stored aggregates do not match the run records".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parses a report and checks its version, without checking the aggregates.
    pub fn parse(text: &str) -> Result<Self> {
        let report: Report = serde_json::from_str(text)?;
        if report.version != REPORT_FORMAT_VERSION {
            return Err(Error::Config(format!("unsupported report format version {}", report.version)));
        }
        Ok(report)
    }

    /// Parses a report and checks its version and self-consistency.
    pub fn from_json(text: &str) -> Result<Self> {
        let report = Self::parse(text)?;
        report.verify()?;
        Ok(report)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    /// Run records only, as compact JSON.
    pub fn runs_json(&self) -> Result<String> {
        Ok(match &self.body {
            ReportBody::Sweep { runs, .. } => serde_json::to_string(runs)?,
            ReportBody::Compare { runs, .. } => serde_json::to_string(runs)?,
        })
    }

    /// Writes the run records as CSV, one row per run.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        match &self.body {
            ReportBody::Sweep { runs, .. } => {
                for r in runs {
                    w.serialize(SweepCsvRow {
                        index: r.index,
                        grid_index: r.grid_index,
                        rep: r.rep,
                        true_p: r.true_p,
                        estimator: r.estimator.as_str(),
                        point_estimate: r.point_estimate,
                        interval_low: r.interval.low,
                        interval_high: r.interval.high,
                        interval_closed: r.interval.closed,
                        covered: r.covered,
                        a_applications: r.queries.a_applications,
                        a_inverse_applications: r.queries.a_inverse_applications,
                        iterate_applications: r.queries.iterate_applications,
                        oracle_evaluations: r.queries.oracle_evaluations,
                        measurements: r.queries.measurements,
                        stop_round: r.stop_round,
                        floor_hit: r.floor_hit,
                        max_probe_iterations: r.max_probe_iterations,
                    })?;
                }
            }
            ReportBody::Compare { runs, .. } => {
                for r in runs {
                    w.serialize(CompareCsvRow {
                        index: r.index,
                        row: r.row,
                        rep: r.rep,
                        true_label: r.true_label.map(u8::from),
                        members: r.members,
                        soft_mean: r.soft_mean,
                        classical_answer: r.classical.answer.into(),
                        classical_p: r.classical.p_estimate,
                        probabilistic_answer: r.probabilistic.answer.into(),
                        probabilistic_p: r.probabilistic.p_estimate,
                        quantum_answer: r.quantum.answer.into(),
                        quantum_p: r.quantum.p_estimate,
                        quantum_interval_low: r.quantum.interval.map(|s| s.low),
                        quantum_interval_high: r.quantum.interval.map(|s| s.high),
                        quantum_a_applications: r.quantum.queries.a_applications,
                        quantum_low_confidence: r.quantum.low_confidence,
                        classical_cost: r.classical.cost,
                        quantum_cost: r.quantum.cost,
                    })?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_rank_percentiles() {
        let v = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];
        assert_eq!(percentile(&v, 0.5), 5);
        assert_eq!(percentile(&v, 0.9), 9);
        assert_eq!(percentile(&v, 1.0), 10);
        assert_eq!(percentile(&[7], 0.5), 7);
        assert_eq!(percentile(&[], 0.5), 0);
    }
}
