//! Reflections, the Grover iterate `Q = −A·S₀·A⁻¹·S_χ`, and fixed-count
//! amplitude amplification with query accounting.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::{MeasurementOutcome, QubitRange, StateVector, Unitary};

/// Monotone counters of oracle usage. Never reset.
#[derive(Debug, Default)]
pub struct QueryLedger {
    a_applications: AtomicU64,
    a_inverse_applications: AtomicU64,
    iterate_applications: AtomicU64,
    oracle_evaluations: AtomicU64,
    measurements: AtomicU64,
}

/// Point-in-time copy of a [`QueryLedger`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryCounts {
    pub a_applications: u64,
    pub a_inverse_applications: u64,
    pub iterate_applications: u64,
    pub oracle_evaluations: u64,
    pub measurements: u64,
}

impl QueryCounts {
    /// Counts accumulated since `earlier`.
    pub fn since(&self, earlier: &QueryCounts) -> QueryCounts {
        QueryCounts {
            a_applications: self.a_applications - earlier.a_applications,
            a_inverse_applications: self.a_inverse_applications - earlier.a_inverse_applications,
            iterate_applications: self.iterate_applications - earlier.iterate_applications,
            oracle_evaluations: self.oracle_evaluations - earlier.oracle_evaluations,
            measurements: self.measurements - earlier.measurements,
        }
    }
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn snapshot(&self) -> QueryCounts {
        QueryCounts {
            a_applications: self.a_applications.load(Ordering::Relaxed),
            a_inverse_applications: self.a_inverse_applications.load(Ordering::Relaxed),
            iterate_applications: self.iterate_applications.load(Ordering::Relaxed),
            oracle_evaluations: self.oracle_evaluations.load(Ordering::Relaxed),
            measurements: self.measurements.load(Ordering::Relaxed),
        }
    }

    pub fn record_a(&self, n: u64) {
        self.a_applications.fetch_add(n, Ordering::Relaxed);
    }

    pub fn record_a_inverse(&self, n: u64) {
        self.a_inverse_applications.fetch_add(n, Ordering::Relaxed);
    }

    pub fn record_oracle(&self, n: u64) {
        self.oracle_evaluations.fetch_add(n, Ordering::Relaxed);
    }

    pub fn record_measurement(&self) {
        self.measurements.fetch_add(1, Ordering::Relaxed);
    }

    /// `n` applications of Q: one A and one A⁻¹ each, plus a full χ sweep of `dimension`.
    fn record_iterates(&self, n: u64, dimension: u64) {
        self.iterate_applications.fetch_add(n, Ordering::Relaxed);
        self.record_a(n);
        self.record_a_inverse(n);
        self.record_oracle(n * dimension);
    }
}

/// χ: total boolean function on basis indices.
#[derive(Clone)]
pub struct GoodStatePredicate(Arc<dyn Fn(usize) -> bool + Send + Sync>);

impl fmt::Debug for GoodStatePredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("GoodStatePredicate(..)")
    }
}

impl GoodStatePredicate {
    pub fn from_fn(f: impl Fn(usize) -> bool + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn marks(indices: impl IntoIterator<Item = usize>) -> Self {
        let set: std::collections::BTreeSet<usize> = indices.into_iter().collect();
        Self::from_fn(move |i| set.contains(&i))
    }

    /// Good iff `qubit` reads 0.
    pub fn qubit_is_zero(qubit: usize) -> Self {
        Self::from_fn(move |i| (i >> qubit) & 1 == 0)
    }

    pub fn nothing() -> Self {
        Self::from_fn(|_| false)
    }

    pub fn everything() -> Self {
        Self::from_fn(|_| true)
    }

    #[inline]
    pub fn is_good(&self, index: usize) -> bool {
        (self.0)(index)
    }

    fn flip(&self, amplitudes: &mut [Complex64]) {
        for (i, a) in amplitudes.iter_mut().enumerate() {
            if self.is_good(i) {
                *a = -*a;
            }
        }
    }
}

/// S_χ: negate every amplitude whose index `predicate` marks.
pub fn apply_sign_flip_good(state: &mut StateVector, predicate: &GoodStatePredicate, ledger: &QueryLedger) {
    predicate.flip(state.amplitudes_mut());
    ledger.record_oracle(state.dimension() as u64);
}

/// S₀: negate the amplitude of |0⟩.
pub fn apply_sign_flip_zero(state: &mut StateVector) {
    let a = &mut state.amplitudes_mut()[0];
    *a = -*a;
}

/// Q = −A·S₀·A⁻¹·S_χ for a preparation `A` and predicate χ.
///
/// Every application through this type is charged to the ledger. The
/// ledger is shared by clones, so parallel runs can pool or separate their
/// accounting by choosing whether to clone or rebuild.
#[derive(Clone)]
pub struct GroverIterate {
    preparation: Arc<dyn Unitary>,
    predicate: GoodStatePredicate,
    ledger: Arc<QueryLedger>,
}

impl fmt::Debug for GroverIterate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroverIterate")
            .field("num_qubits", &self.num_qubits())
            .field("ledger", &self.ledger.snapshot())
            .finish()
    }
}

impl GroverIterate {
    pub fn new(preparation: Arc<dyn Unitary>, predicate: GoodStatePredicate) -> Self {
        Self::with_ledger(preparation, predicate, Arc::new(QueryLedger::new()))
    }

    pub fn with_ledger(preparation: Arc<dyn Unitary>, predicate: GoodStatePredicate, ledger: Arc<QueryLedger>) -> Self {
        Self { preparation, predicate, ledger }
    }

    pub fn num_qubits(&self) -> usize {
        self.preparation.num_qubits()
    }

    pub fn predicate(&self) -> &GoodStatePredicate {
        &self.predicate
    }

    pub fn ledger(&self) -> &Arc<QueryLedger> {
        &self.ledger
    }

    pub fn preparation(&self) -> &Arc<dyn Unitary> {
        &self.preparation
    }

    /// A|0⟩, charged as one A application.
    pub fn prepare(&self) -> Result<StateVector> {
        let mut state = StateVector::zero(self.num_qubits())?;
        self.preparation.apply(state.amplitudes_mut());
        self.ledger.record_a(1);
        Ok(state)
    }

    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        self.check_width(state)?;
        self.forward(state.amplitudes_mut());
        self.charge_iterates(1);
        Ok(())
    }

    pub fn apply_power(&self, state: &mut StateVector, power: u64) -> Result<()> {
        self.check_width(state)?;
        for _ in 0..power {
            self.forward(state.amplitudes_mut());
        }
        self.charge_iterates(power);
        Ok(())
    }

    /// Probability mass on good basis states, without touching the ledger.
    pub fn good_probability(&self, state: &StateVector) -> f64 {
        state.probability_where(|i| self.predicate.is_good(i))
    }

    /// Measures the whole register and evaluates χ on the outcome.
    pub fn measure_and_check<R: Rng + ?Sized>(
        &self,
        state: &mut StateVector,
        rng: &mut R,
    ) -> Result<(MeasurementOutcome, bool)> {
        let outcome = state.measure(QubitRange::full(state.n_qubits()), rng)?;
        self.ledger.record_measurement();
        self.ledger.record_oracle(1);
        Ok((outcome, self.predicate.is_good(outcome.value)))
    }

    pub(crate) fn charge_iterates(&self, n: u64) {
        self.ledger.record_iterates(n, 1u64 << self.num_qubits());
    }

    fn check_width(&self, state: &StateVector) -> Result<()> {
        if state.n_qubits() != self.num_qubits() {
            return Err(Error::Range(format!(
                "iterate acts on {} qubits, state has {}",
                self.num_qubits(),
                state.n_qubits()
            )));
        }
        Ok(())
    }

    fn forward(&self, amplitudes: &mut [Complex64]) {
        self.predicate.flip(amplitudes);
        self.preparation.apply_inverse(amplitudes);
        amplitudes[0] = -amplitudes[0];
        self.preparation.apply(amplitudes);
        amplitudes.iter_mut().for_each(|a| *a = -*a);
    }

    fn backward(&self, amplitudes: &mut [Complex64]) {
        amplitudes.iter_mut().for_each(|a| *a = -*a);
        self.preparation.apply_inverse(amplitudes);
        amplitudes[0] = -amplitudes[0];
        self.preparation.apply(amplitudes);
        self.predicate.flip(amplitudes);
    }

    /// View of this iterate whose applications are not charged.
    pub(crate) fn uncharged(&self) -> Uncharged<'_> {
        Uncharged(self)
    }
}

impl Unitary for GroverIterate {
    fn num_qubits(&self) -> usize {
        GroverIterate::num_qubits(self)
    }
    fn apply(&self, amplitudes: &mut [Complex64]) {
        self.forward(amplitudes);
        self.charge_iterates(1);
    }
    fn apply_inverse(&self, amplitudes: &mut [Complex64]) {
        self.backward(amplitudes);
        self.charge_iterates(1);
    }
}

pub(crate) struct Uncharged<'a>(&'a GroverIterate);

impl Unitary for Uncharged<'_> {
    fn num_qubits(&self) -> usize {
        self.0.num_qubits()
    }
    fn apply(&self, amplitudes: &mut [Complex64]) {
        self.0.forward(amplitudes);
    }
    fn apply_inverse(&self, amplitudes: &mut [Complex64]) {
        self.0.backward(amplitudes);
    }
}

/// How many iterates to run when the good probability is assumed to be `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IterationSchedule {
    /// `⌈√(1/p)⌉`, the bracket arithmetic of the segment tables.
    #[default]
    CeilSqrt,
    /// `⌊(π/4)/arcsin√p⌋`, the count that maximizes success when `p` is exact.
    Optimal,
}

impl IterationSchedule {
    pub fn iterations(&self, assumed_p: f64) -> u64 {
        match self {
            IterationSchedule::CeilSqrt => (1.0 / assumed_p).sqrt().ceil() as u64,
            IterationSchedule::Optimal => (std::f64::consts::FRAC_PI_4 / assumed_p.sqrt().asin() + 1e-9).floor() as u64,
        }
    }
}

impl FromStr for IterationSchedule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ceil-sqrt" => Ok(Self::CeilSqrt),
            "optimal" => Ok(Self::Optimal),
            other => Err(Error::Config(format!("unknown iteration schedule '{other}'"))),
        }
    }
}

/// Outcome of one amplify-then-measure probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplification {
    pub found: bool,
    pub outcome: MeasurementOutcome,
    pub iterations: u64,
}

/// Prepares A|0⟩, applies the iterate `schedule.iterations(assumed_p)` times,
/// measures once and checks χ.
pub fn amplify_assuming<R: Rng + ?Sized>(
    iterate: &GroverIterate,
    assumed_p: f64,
    schedule: IterationSchedule,
    rng: &mut R,
) -> Result<Amplification> {
    if !(assumed_p > 0.0 && assumed_p <= 1.0) {
        return Err(Error::Domain(format!("assumed probability {assumed_p} outside (0, 1]")));
    }
    let iterations = schedule.iterations(assumed_p);
    let mut state = iterate.prepare()?;
    iterate.apply_power(&mut state, iterations)?;
    let (outcome, found) = iterate.measure_and_check(&mut state, rng)?;
    Ok(Amplification { found, outcome, iterations })
}
