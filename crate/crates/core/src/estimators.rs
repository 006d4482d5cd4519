//! Good-probability estimators built on the Grover iterate.
//!
//! Four estimators share one result type:
//! - [`qsearch`]: exponentially growing random iteration counts until a good
//!   element is seen; reports `1/j` for the successful count `j`.
//! - [`est_amp`]: QFT phase estimation on the iterate's eigenphases; reports
//!   `sin²(πy/M)`.
//! - [`doubling_estimate`]: probes assumed probabilities `1, ½, ¼, …` and
//!   reports the first segment `[2⁻ʲ, 2⁻ʲ⁺¹)` whose probe succeeds.
//! - [`binary_search_estimate`]: bisects `[0, 1]` on probe outcomes.
//!
//! Segment estimators return probability intervals; [`EstimationResult::point_estimate`]
//! is the reported value and the interval carries the bracket.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grover::{amplify_assuming, GroverIterate, IterationSchedule, QueryCounts};
use crate::statevector::{QubitRange, StateVector, DEFAULT_MAX_QUBITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimatorKind {
    Qsearch,
    EstAmp,
    Doubling,
    BinarySearch,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 4] = [Self::Qsearch, Self::EstAmp, Self::Doubling, Self::BinarySearch];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Qsearch => "qsearch",
            Self::EstAmp => "est-amp",
            Self::Doubling => "doubling",
            Self::BinarySearch => "binary-search",
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| Error::Config(format!("unknown estimator '{s}'")))
    }
}

/// Probability interval `[low, high)`, or `[low, high]` when `closed`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub low: f64,
    pub high: f64,
    pub closed: bool,
}

impl Segment {
    pub const fn half_open(low: f64, high: f64) -> Self {
        Self { low, high, closed: false }
    }

    pub const fn closed(low: f64, high: f64) -> Self {
        Self { low, high, closed: true }
    }

    pub fn contains(&self, p: f64) -> bool {
        p >= self.low && (p < self.high || (self.closed && p <= self.high))
    }

    /// Whether `self` lies entirely inside `outer`.
    pub fn within(&self, outer: &Segment) -> bool {
        self.low >= outer.low && (self.high < outer.high || (self.high == outer.high && (outer.closed || !self.closed)))
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.low + self.high)
    }

    /// True when 0.5 lies strictly inside the segment.
    pub fn straddles_half(&self) -> bool {
        self.low < 0.5 && self.high > 0.5
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}{}", self.low, self.high, if self.closed { "]" } else { ")" })
    }
}

/// One probe or measurement inside an estimator run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Round {
    pub round: u32,
    /// Assumed probability for amplification probes, `M` for phase estimation,
    /// `ceil(c^l)` for QSearch.
    pub parameter: f64,
    pub iterations: u64,
    pub outcome: u64,
    pub good: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationResult {
    pub estimator: EstimatorKind,
    pub point_estimate: f64,
    pub amplitude_estimate: f64,
    pub interval: Segment,
    pub queries: QueryCounts,
    pub transcript: Vec<Round>,
    /// The run stopped at its floor (ε, `max_rounds`, or the 0.01 cut) without a success.
    pub floor_hit: bool,
    /// Index of the last round: `j` for doubling, `l` for QSearch, bisection depth for binary search.
    pub stop_round: u32,
}

impl EstimationResult {
    /// Largest iteration count used by any single probe.
    pub fn max_probe_iterations(&self) -> u64 {
        self.transcript.iter().map(|r| r.iterations).max().unwrap_or(0)
    }

    /// Scalar used for threshold decisions: the point estimate for QSearch and
    /// phase estimation, the interval midpoint for the segment estimators.
    pub fn decision_value(&self) -> f64 {
        match self.estimator {
            EstimatorKind::Qsearch | EstimatorKind::EstAmp => self.point_estimate,
            EstimatorKind::Doubling | EstimatorKind::BinarySearch => self.interval.midpoint(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EstimatorConfig {
    /// QSearch growth factor, strictly between 1 and 2.
    pub growth_c: f64,
    pub epsilon: f64,
    /// Phase-estimation resolution; a power of two.
    pub est_amp_m: usize,
    pub max_rounds: u32,
    /// Probes per amplification check, majority-voted.
    pub trials_per_check: u32,
    pub schedule: IterationSchedule,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            growth_c: 1.2,
            epsilon: 1e-4,
            est_amp_m: 64,
            max_rounds: 40,
            trials_per_check: 1,
            schedule: IterationSchedule::CeilSqrt,
        }
    }
}

impl EstimatorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.growth_c > 1.0 && self.growth_c < 2.0) {
            return Err(Error::Config(format!("growth factor c = {} must lie in (1, 2)", self.growth_c)));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::Config(format!("epsilon = {} must lie in (0, 1)", self.epsilon)));
        }
        if self.est_amp_m < 2 || !self.est_amp_m.is_power_of_two() {
            return Err(Error::Config(format!("M = {} must be a power of two >= 2", self.est_amp_m)));
        }
        if self.max_rounds == 0 {
            return Err(Error::Config("max_rounds must be at least 1".into()));
        }
        if self.trials_per_check == 0 {
            return Err(Error::Config("trials_per_check must be at least 1".into()));
        }
        Ok(())
    }
}

/// Runs `kind` with `config`.
pub fn estimate<R: Rng + ?Sized>(
    kind: EstimatorKind,
    iterate: &GroverIterate,
    config: &EstimatorConfig,
    rng: &mut R,
) -> Result<EstimationResult> {
    match kind {
        EstimatorKind::Qsearch => qsearch(iterate, config, rng),
        EstimatorKind::EstAmp => {
            config.validate()?;
            est_amp(iterate, config.est_amp_m, rng)
        }
        EstimatorKind::Doubling => doubling_estimate(iterate, config, rng),
        EstimatorKind::BinarySearch => binary_search_estimate(iterate, config, rng),
    }
}

struct Run<'a> {
    kind: EstimatorKind,
    iterate: &'a GroverIterate,
    start: QueryCounts,
    transcript: Vec<Round>,
}

impl<'a> Run<'a> {
    fn new(kind: EstimatorKind, iterate: &'a GroverIterate) -> Self {
        Self { kind, iterate, start: iterate.ledger().snapshot(), transcript: Vec::new() }
    }

    /// `trials` amplification probes at `assumed_p`; true on a strict majority of successes.
    fn probe<R: Rng + ?Sized>(
        &mut self,
        round: u32,
        assumed_p: f64,
        config: &EstimatorConfig,
        rng: &mut R,
    ) -> Result<bool> {
        let mut hits = 0;
        for _ in 0..config.trials_per_check {
            let amp = amplify_assuming(self.iterate, assumed_p, config.schedule, rng)?;
            self.transcript.push(Round {
                round,
                parameter: assumed_p,
                iterations: amp.iterations,
                outcome: amp.outcome.value as u64,
                good: Some(amp.found),
            });
            hits += amp.found as u32;
        }
        Ok(2 * hits > config.trials_per_check)
    }

    fn finish(self, point: f64, interval: Segment, floor_hit: bool, stop_round: u32) -> EstimationResult {
        EstimationResult {
            estimator: self.kind,
            point_estimate: point,
            amplitude_estimate: point.sqrt(),
            interval,
            queries: self.iterate.ledger().snapshot().since(&self.start),
            transcript: self.transcript,
            floor_hit,
            stop_round,
        }
    }
}

/// Lower end of the QSearch interval after a success at `j` iterations:
/// below `sin²(π/(4(2j+1)))` the amplified success probability is under ½.
fn qsearch_lower_bound(j: u64) -> f64 {
    (PI / (4.0 * (2 * j + 1) as f64)).sin().powi(2)
}

/// QSearch with growth factor `config.growth_c`.
///
/// A success on the initial unamplified measurement reports `p̂ = 1` with
/// interval `[½, 1]`. A success after `j` iterates reports `p̂ = 1/j`. After
/// `max_rounds` failed rounds the run reports `0` on `[0, ε)`.
pub fn qsearch<R: Rng + ?Sized>(
    iterate: &GroverIterate,
    config: &EstimatorConfig,
    rng: &mut R,
) -> Result<EstimationResult> {
    config.validate()?;
    let mut run = Run::new(EstimatorKind::Qsearch, iterate);

    let mut state = iterate.prepare()?;
    let (outcome, good) = iterate.measure_and_check(&mut state, rng)?;
    run.transcript.push(Round {
        round: 0,
        parameter: 1.0,
        iterations: 0,
        outcome: outcome.value as u64,
        good: Some(good),
    });
    if good {
        return Ok(run.finish(1.0, Segment::closed(0.5, 1.0), false, 0));
    }

    for l in 1..=config.max_rounds {
        let m = config.growth_c.powi(l as i32).ceil() as u64;
        let j = rng.gen_range(1..=m);
        let mut state = iterate.prepare()?;
        iterate.apply_power(&mut state, j)?;
        let (outcome, good) = iterate.measure_and_check(&mut state, rng)?;
        run.transcript.push(Round {
            round: l,
            parameter: m as f64,
            iterations: j,
            outcome: outcome.value as u64,
            good: Some(good),
        });
        if good {
            let p = 1.0 / j as f64;
            return Ok(run.finish(p, Segment::closed(qsearch_lower_bound(j).min(p), 1.0), false, l));
        }
    }
    Ok(run.finish(0.0, Segment::half_open(0.0, config.epsilon), true, config.max_rounds))
}

/// Half-width of the `k = 1` phase-estimation error band around `a`.
pub fn est_amp_error_bound(a: f64, m: usize) -> f64 {
    let m = m as f64;
    2.0 * PI * (a * (1.0 - a)).max(0.0).sqrt() / m + PI * PI / (m * m)
}

/// Phase estimation of the iterate with an `M`-point Fourier register.
///
/// The controlled-power step is charged as `M − 1` iterate applications,
/// the largest power any control value requests.
pub fn est_amp<R: Rng + ?Sized>(iterate: &GroverIterate, m: usize, rng: &mut R) -> Result<EstimationResult> {
    if m < 2 || !m.is_power_of_two() {
        return Err(Error::Config(format!("M = {m} must be a power of two >= 2")));
    }
    let control_qubits = m.trailing_zeros() as usize;
    let n = iterate.num_qubits();
    let total = n + control_qubits;
    if total > DEFAULT_MAX_QUBITS {
        return Err(Error::Capacity { requested: total, limit: DEFAULT_MAX_QUBITS });
    }
    let mut run = Run::new(EstimatorKind::EstAmp, iterate);
    let target = QubitRange::new(0, n);
    let control = QubitRange::new(n, control_qubits);

    let mut state = StateVector::zero(total)?;
    state.apply_on(iterate.preparation().as_ref(), target)?;
    iterate.ledger().record_a(1);
    state.apply_qft(control)?;
    state.apply_controlled_powers(control, target, &iterate.uncharged())?;
    iterate.charge_iterates(m as u64 - 1);
    state.apply_inverse_qft(control)?;
    let outcome = state.measure(control, rng)?;
    iterate.ledger().record_measurement();

    let y = outcome.value;
    let a = (PI * y as f64 / m as f64).sin().powi(2);
    let half = est_amp_error_bound(a, m);
    run.transcript.push(Round {
        round: 1,
        parameter: m as f64,
        iterations: m as u64 - 1,
        outcome: y as u64,
        good: None,
    });
    let interval = Segment::closed((a - half).max(0.0), (a + half).min(1.0));
    Ok(run.finish(a, interval, false, 1))
}

/// Doubling estimator: probe `p = 2⁻ʲ` for `j = 0, 1, …` until a probe
/// succeeds or `2⁻ʲ < ε` (the probe at that `j` still runs).
pub fn doubling_estimate<R: Rng + ?Sized>(
    iterate: &GroverIterate,
    config: &EstimatorConfig,
    rng: &mut R,
) -> Result<EstimationResult> {
    config.validate()?;
    let mut run = Run::new(EstimatorKind::Doubling, iterate);
    let mut j = 0u32;
    loop {
        let p = 0.5f64.powi(j as i32);
        if run.probe(j, p, config, rng)? {
            let interval = if j == 0 { Segment::closed(0.5, 1.0) } else { Segment::half_open(p, 2.0 * p) };
            return Ok(run.finish(p, interval, false, j));
        }
        if p < config.epsilon {
            return Ok(run.finish(0.0, Segment::half_open(0.0, p), true, j));
        }
        j += 1;
    }
}

/// Probes below this right edge are not refined further.
pub const BINARY_SEARCH_CUTOFF: f64 = 0.01;

fn iteration_class(p: f64) -> u64 {
    (1.0 / p).sqrt().ceil() as u64
}

/// Bisection estimator.
///
/// The first probe at `½` returns `[½, 1]` on success. Afterwards each probe
/// at the midpoint moves `left` up on success and `right` down on failure.
/// The run stops once `⌈√(1/left)⌉ = ⌈√(1/right)⌉` (never while `left = 0`),
/// once `right < 0.01`, or once the bracket is narrower than `ε`; the last
/// guard ends brackets that straddle a non-dyadic class boundary such as 1/9,
/// which bisection by halves never isolates.
pub fn binary_search_estimate<R: Rng + ?Sized>(
    iterate: &GroverIterate,
    config: &EstimatorConfig,
    rng: &mut R,
) -> Result<EstimationResult> {
    bisect(iterate, config, rng, false)
}

/// Only the first probe of [`binary_search_estimate`]: `[½, 1]` on success,
/// `[0, ½)` otherwise.
pub fn binary_search_first_probe<R: Rng + ?Sized>(
    iterate: &GroverIterate,
    config: &EstimatorConfig,
    rng: &mut R,
) -> Result<EstimationResult> {
    bisect(iterate, config, rng, true)
}

fn bisect<R: Rng + ?Sized>(
    iterate: &GroverIterate,
    config: &EstimatorConfig,
    rng: &mut R,
    first_probe_only: bool,
) -> Result<EstimationResult> {
    config.validate()?;
    let mut run = Run::new(EstimatorKind::BinarySearch, iterate);
    if run.probe(0, 0.5, config, rng)? {
        return Ok(run.finish(0.75, Segment::closed(0.5, 1.0), false, 0));
    }
    let (mut left, mut right) = (0.0f64, 0.5f64);
    if first_probe_only {
        return Ok(run.finish(0.25, Segment::half_open(left, right), false, 0));
    }
    let mut depth = 0u32;
    loop {
        depth += 1;
        let p = 0.5 * (left + right);
        if run.probe(depth, p, config, rng)? {
            left = p;
        } else {
            right = p;
        }
        let same_class = left > 0.0 && iteration_class(left) == iteration_class(right);
        if same_class || right < BINARY_SEARCH_CUTOFF || right - left < config.epsilon {
            let segment = Segment::half_open(left, right);
            return Ok(run.finish(segment.midpoint(), segment, left == 0.0, depth));
        }
    }
}

/// Segment ladder of the doubling estimator: `[½, 1]`, then `[2⁻ᵏ⁻¹, 2⁻ᵏ)`.
pub fn doubling_ladder(rows: usize) -> Vec<Segment> {
    (0..rows)
        .map(|k| {
            if k == 0 {
                Segment::closed(0.5, 1.0)
            } else {
                Segment::half_open(0.5f64.powi(k as i32 + 1), 0.5f64.powi(k as i32))
            }
        })
        .collect()
}

/// Segment ladder of the bisection estimator down to the 0.01 cut. The
/// seventh row runs `[0.0234375, 0.03125)` so the ladder stays monotone.
pub const BINARY_SEARCH_LADDER: [Segment; 8] = [
    Segment::closed(0.5, 1.0),
    Segment::half_open(0.25, 0.5),
    Segment::half_open(0.125, 0.25),
    Segment::half_open(0.0625, 0.125),
    Segment::half_open(0.046875, 0.0625),
    Segment::half_open(0.03125, 0.046875),
    Segment::half_open(0.0234375, 0.03125),
    Segment::half_open(0.015625, 0.0234375),
];

/// Index of the ladder row containing probability `p`.
pub fn ladder_row_of(ladder: &[Segment], p: f64) -> Option<usize> {
    ladder.iter().position(|s| s.contains(p))
}

/// Index of the ladder row that fully contains `segment`.
pub fn ladder_row(ladder: &[Segment], segment: &Segment) -> Option<usize> {
    ladder.iter().position(|s| segment.within(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::rotation_oracle;
    use crate::rng::run_rng;
    use approx::assert_abs_diff_eq;

    fn iterate(p: f64) -> GroverIterate {
        let (prep, pred) = rotation_oracle(p, 0).unwrap();
        GroverIterate::new(prep, pred)
    }

    #[test]
    fn estimator_names_round_trip() {
        for k in EstimatorKind::ALL {
            assert_eq!(k.to_string().parse::<EstimatorKind>().unwrap(), k);
        }
        assert!(matches!("grover".parse::<EstimatorKind>(), Err(Error::Config(_))));
    }

    #[test]
    fn config_validation() {
        let ok = EstimatorConfig::default();
        ok.validate().unwrap();
        for bad in [
            EstimatorConfig { growth_c: 1.0, ..ok },
            EstimatorConfig { growth_c: 2.0, ..ok },
            EstimatorConfig { epsilon: 0.0, ..ok },
            EstimatorConfig { est_amp_m: 12, ..ok },
            EstimatorConfig { est_amp_m: 1, ..ok },
            EstimatorConfig { max_rounds: 0, ..ok },
            EstimatorConfig { trials_per_check: 0, ..ok },
        ] {
            assert!(matches!(bad.validate(), Err(Error::Config(_))), "{bad:?}");
        }
    }

    #[test]
    fn segment_membership() {
        let s = Segment::half_open(0.25, 0.5);
        assert!(s.contains(0.25) && !s.contains(0.5));
        assert!(Segment::closed(0.5, 1.0).contains(1.0));
        assert!(Segment::half_open(0.25, 0.375).within(&s));
        assert!(!Segment::closed(0.25, 0.5).within(&s));
        assert!(!Segment::half_open(0.2, 0.3).within(&s));
    }

    #[test]
    fn qsearch_certain_success_is_one_query() {
        let mut rng = run_rng(1, 0);
        let r = qsearch(&iterate(1.0), &EstimatorConfig::default(), &mut rng).unwrap();
        assert_eq!(r.point_estimate, 1.0);
        assert_eq!(r.interval, Segment::closed(0.5, 1.0));
        assert_eq!(r.queries.a_applications, 1);
        assert_eq!(r.stop_round, 0);
    }

    #[test]
    fn qsearch_zero_probability_hits_floor() {
        let cfg = EstimatorConfig { max_rounds: 25, ..Default::default() };
        let mut rng = run_rng(2, 0);
        let r = qsearch(&iterate(0.0), &cfg, &mut rng).unwrap();
        assert!(r.floor_hit);
        assert_eq!(r.point_estimate, 0.0);
        assert_eq!(r.interval, Segment::half_open(0.0, cfg.epsilon));
        assert_eq!(r.transcript.len(), 26);
        // one preparation per round plus the drawn iteration counts
        let drawn: u64 = r.transcript.iter().map(|t| t.iterations).sum();
        assert_eq!(r.queries.a_applications, 26 + drawn);
        for t in &r.transcript[1..] {
            assert!(t.iterations >= 1 && t.iterations as f64 <= t.parameter);
        }
    }

    #[test]
    fn qsearch_quarter_mean_cost() {
        // Exact expectation of A-applications at p = ¼, c = 1.2 is ≈ 4.08 (≤ 6 = 3/√p).
        let cfg = EstimatorConfig::default();
        let it = iterate(0.25);
        let total: u64 = (0..200)
            .map(|i| {
                let mut rng = run_rng(3, i);
                let r = qsearch(&it, &cfg, &mut rng).unwrap();
                assert!(!r.floor_hit);
                r.queries.a_applications
            })
            .sum();
        let mean = total as f64 / 200.0;
        assert!(mean <= 6.0, "mean A-applications {mean}");
    }

    #[test]
    fn est_amp_extremes() {
        let mut rng = run_rng(4, 0);
        for _ in 0..10 {
            let r = est_amp(&iterate(0.0), 8, &mut rng).unwrap();
            assert_eq!(r.transcript[0].outcome, 0);
            assert_abs_diff_eq!(r.point_estimate, 0.0);
            let r = est_amp(&iterate(1.0), 8, &mut rng).unwrap();
            assert_eq!(r.transcript[0].outcome, 4);
            assert_abs_diff_eq!(r.point_estimate, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn est_amp_half_is_exact() {
        let mut rng = run_rng(5, 0);
        let mut seen = [0usize; 8];
        for _ in 0..200 {
            let r = est_amp(&iterate(0.5), 8, &mut rng).unwrap();
            let y = r.transcript[0].outcome as usize;
            seen[y] += 1;
            assert!(y == 2 || y == 6);
            assert_abs_diff_eq!(r.point_estimate, 0.5, epsilon = 1e-12);
        }
        assert!(seen[2] > 60 && seen[6] > 60, "{seen:?}");
    }

    #[test]
    fn est_amp_ledger_and_errors() {
        let it = iterate(0.3);
        let mut rng = run_rng(6, 0);
        let r = est_amp(&it, 16, &mut rng).unwrap();
        assert_eq!(r.queries.a_applications, 16);
        assert_eq!(r.queries.a_inverse_applications, 15);
        assert_eq!(r.queries.iterate_applications, 15);
        assert_eq!(r.queries.measurements, 1);
        assert!(r.interval.low <= r.point_estimate && r.point_estimate <= r.interval.high);
        assert!(matches!(est_amp(&it, 12, &mut rng), Err(Error::Config(_))));
        assert!(matches!(est_amp(&it, 1 << 22, &mut rng), Err(Error::Capacity { .. })));
    }

    #[test]
    fn doubling_extremes() {
        let cfg = EstimatorConfig::default();
        let mut rng = run_rng(7, 0);
        let r = doubling_estimate(&iterate(1.0), &cfg, &mut rng).unwrap();
        assert_eq!(r.interval, Segment::closed(0.5, 1.0));
        assert_eq!(r.stop_round, 0);
        assert_eq!(r.transcript.len(), 1);

        let r = doubling_estimate(&iterate(0.0), &cfg, &mut rng).unwrap();
        assert!(r.floor_hit);
        assert_eq!(r.stop_round, 14);
        assert_eq!(r.transcript.len(), 15);
    }

    #[test]
    fn binary_search_extremes() {
        let cfg = EstimatorConfig::default();
        let mut rng = run_rng(8, 0);
        let r = binary_search_estimate(&iterate(1.0), &cfg, &mut rng).unwrap();
        assert_eq!(r.interval, Segment::closed(0.5, 1.0));
        assert_eq!(r.transcript.len(), 1);

        let r = binary_search_estimate(&iterate(0.0), &cfg, &mut rng).unwrap();
        assert!(r.floor_hit);
        assert!(r.interval.high < BINARY_SEARCH_CUTOFF);
        assert_eq!(r.interval, Segment::half_open(0.0, 1.0 / 128.0));
        assert_eq!(r.max_probe_iterations(), 12);
    }

    #[test]
    fn binary_search_first_probe_only() {
        let cfg = EstimatorConfig::default();
        let mut rng = run_rng(9, 0);
        let r = binary_search_first_probe(&iterate(0.0), &cfg, &mut rng).unwrap();
        assert_eq!(r.interval, Segment::half_open(0.0, 0.5));
        assert_eq!(r.queries.a_applications, 3);
        let r = binary_search_first_probe(&iterate(1.0), &cfg, &mut rng).unwrap();
        assert_eq!(r.interval, Segment::closed(0.5, 1.0));
    }

    #[test]
    fn majority_vote_runs_every_trial() {
        let cfg = EstimatorConfig { trials_per_check: 3, ..Default::default() };
        let mut rng = run_rng(10, 0);
        let r = doubling_estimate(&iterate(1.0), &cfg, &mut rng).unwrap();
        assert_eq!(r.transcript.len(), 3);
        assert_eq!(r.queries.measurements, 3);
    }

    #[test]
    fn ladders() {
        let d = doubling_ladder(8);
        assert_eq!(ladder_row_of(&d, 0.6), Some(0));
        assert_eq!(ladder_row_of(&d, 0.3), Some(1));
        assert_eq!(ladder_row_of(&d, 0.15), Some(2));
        assert_eq!(ladder_row_of(&d, 0.07), Some(3));
        assert_eq!(ladder_row_of(&BINARY_SEARCH_LADDER, 0.05), Some(4));
        assert_eq!(ladder_row_of(&BINARY_SEARCH_LADDER, 0.025), Some(6));
        assert_eq!(ladder_row_of(&BINARY_SEARCH_LADDER, 0.005), None);
        for w in BINARY_SEARCH_LADDER.windows(2) {
            assert_eq!(w[0].low, w[1].high);
        }
        assert_eq!(ladder_row(&BINARY_SEARCH_LADDER, &Segment::half_open(0.125, 0.1875)), Some(2));
    }

    #[test]
    fn result_invariants_hold() {
        let cfg = EstimatorConfig::default();
        for p in [0.0, 0.05, 0.3, 0.7, 1.0] {
            let it = iterate(p);
            for kind in EstimatorKind::ALL {
                let mut rng = run_rng(11, (p * 100.0) as u64);
                let r = estimate(kind, &it, &cfg, &mut rng).unwrap();
                let s = r.interval;
                assert!(
                    0.0 <= s.low && s.low <= r.point_estimate && r.point_estimate <= s.high && s.high <= 1.0,
                    "{kind} {p} {r:?}"
                );
                assert_abs_diff_eq!(r.amplitude_estimate.powi(2), r.point_estimate, epsilon = 1e-12);
            }
        }
    }
}
