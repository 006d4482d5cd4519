//! Dense statevector simulation.
//!
//! Qubit `q` of an `n`-qubit register is bit `q` of the basis index, so
//! qubit 0 is the least-significant bit. A [`QubitRange`] names a
//! contiguous run of qubits; its value on basis index `i` is
//! `(i >> start) & (2^len − 1)`.

mod qft;
mod unitary;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

pub use qft::{Qft, QftMethod};
pub use unitary::{Circuit, Gate1, HouseholderPreparation, Layer, Unitary};

/// Largest register `StateVector::zero` will allocate.
pub const DEFAULT_MAX_QUBITS: usize = 22;

/// Absolute tolerance used for norm and unitarity checks.
pub const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QubitRange {
    start: usize,
    len: usize,
}

impl QubitRange {
    pub const fn new(start: usize, len: usize) -> Self {
        Self { start, len }
    }

    /// The whole register of `n_qubits`.
    pub const fn full(n_qubits: usize) -> Self {
        Self { start: 0, len: n_qubits }
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn end(&self) -> usize {
        self.start + self.len
    }

    pub fn dimension(&self) -> usize {
        1 << self.len
    }

    fn mask(&self) -> usize {
        (self.dimension() - 1) << self.start
    }

    pub fn overlaps(&self, other: &QubitRange) -> bool {
        self.start < other.end() && other.start < self.end()
    }

    #[inline]
    pub fn value_of(&self, index: usize) -> usize {
        (index >> self.start) & (self.dimension() - 1)
    }

    pub(crate) fn check(&self, n_qubits: usize) -> Result<()> {
        if self.len == 0 || self.end() > n_qubits {
            return Err(Error::Range(format!(
                "qubits {}..{} not within a {n_qubits}-qubit register",
                self.start,
                self.end()
            )));
        }
        Ok(())
    }
}

/// Result of reading a register in the computational basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementOutcome {
    /// Register value that was observed.
    pub value: usize,
    /// Probability of observing `value` before the measurement.
    pub probability: f64,
    /// Whether the state was collapsed onto the outcome.
    pub collapsed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// Registers wider than this use the O(M log M) transform.
const DIRECT_QFT_MAX_WIDTH: usize = 6;

fn qft_for(width: usize) -> Qft {
    let method = if width > DIRECT_QFT_MAX_WIDTH { QftMethod::Butterfly } else { QftMethod::Direct };
    Qft::with_method(width, method)
}

impl StateVector {
    /// `|0…0⟩` on `n_qubits`, limited to [`DEFAULT_MAX_QUBITS`].
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::zero_with_limit(n_qubits, DEFAULT_MAX_QUBITS)
    }

    pub fn zero_with_limit(n_qubits: usize, max_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > max_qubits {
            return Err(Error::Capacity { requested: n_qubits, limit: max_qubits });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let mut s = Self::zero(n_qubits)?;
        if index >= s.dimension() {
            return Err(Error::Range(format!("basis index {index} outside {n_qubits}-qubit register")));
        }
        s.amplitudes[0] = Complex64::new(0.0, 0.0);
        s.amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Builds a state from explicit amplitudes, which must already be normalized.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::Range(format!("{dim} amplitudes is not a power of two >= 2")));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        if n_qubits > DEFAULT_MAX_QUBITS {
            return Err(Error::Capacity { requested: n_qubits, limit: DEFAULT_MAX_QUBITS });
        }
        let s = Self { n_qubits, amplitudes };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Numeric(format!("amplitudes have squared norm {norm}")));
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self, tolerance: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tolerance
    }

    /// Total probability of the basis states accepted by `pred`.
    pub fn probability_where(&self, pred: impl Fn(usize) -> bool) -> f64 {
        self.amplitudes.iter().enumerate().filter(|(i, _)| pred(*i)).map(|(_, a)| a.norm_sqr()).sum()
    }

    /// Applies `op` to the whole register.
    pub fn apply(&mut self, op: &dyn Unitary) -> Result<()> {
        self.apply_on(op, QubitRange::full(self.n_qubits))
    }

    pub fn apply_on(&mut self, op: &dyn Unitary, register: QubitRange) -> Result<()> {
        self.check_op(op, register)?;
        apply_to_register(&mut self.amplitudes, self.n_qubits, register, op, false);
        Ok(())
    }

    pub fn apply_inverse_on(&mut self, op: &dyn Unitary, register: QubitRange) -> Result<()> {
        self.check_op(op, register)?;
        apply_to_register(&mut self.amplitudes, self.n_qubits, register, op, true);
        Ok(())
    }

    fn check_op(&self, op: &dyn Unitary, register: QubitRange) -> Result<()> {
        register.check(self.n_qubits)?;
        if op.num_qubits() != register.len() {
            return Err(Error::Range(format!(
                "operator acts on {} qubits but register has {}",
                op.num_qubits(),
                register.len()
            )));
        }
        Ok(())
    }

    pub fn apply_qft(&mut self, register: QubitRange) -> Result<()> {
        register.check(self.n_qubits)?;
        self.apply_on(&qft_for(register.len()), register)
    }

    pub fn apply_inverse_qft(&mut self, register: QubitRange) -> Result<()> {
        register.check(self.n_qubits)?;
        self.apply_inverse_on(&qft_for(register.len()), register)
    }

    /// `|j⟩|y⟩ → |j⟩ U^j|y⟩` with `j` read from `control` and `U = target_op`
    /// acting on `target`. Qubits outside both ranges are spectators.
    pub fn apply_controlled_powers(
        &mut self,
        control: QubitRange,
        target: QubitRange,
        target_op: &dyn Unitary,
    ) -> Result<()> {
        control.check(self.n_qubits)?;
        self.check_op(target_op, target)?;
        if control.overlaps(&target) {
            return Err(Error::Range(format!(
                "control {}..{} overlaps target {}..{}",
                control.start,
                control.end(),
                target.start,
                target.end()
            )));
        }
        let fixed = control.mask() | target.mask();
        let mut buf = vec![Complex64::new(0.0, 0.0); target.dimension()];
        for base in (0..self.dimension()).filter(|i| i & fixed == 0) {
            for j in 1..control.dimension() {
                let row = base | (j << control.start);
                for (t, b) in buf.iter_mut().enumerate() {
                    *b = self.amplitudes[row | (t << target.start)];
                }
                for _ in 0..j {
                    target_op.apply(&mut buf);
                }
                for (t, b) in buf.iter().enumerate() {
                    self.amplitudes[row | (t << target.start)] = *b;
                }
            }
        }
        Ok(())
    }

    /// Outcome distribution of `register`, indexed by register value.
    pub fn probabilities(&self, register: QubitRange) -> Result<Vec<f64>> {
        register.check(self.n_qubits)?;
        let mut probs = vec![0.0; register.dimension()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            probs[register.value_of(i)] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Draws an outcome for `register` without disturbing the state.
    pub fn sample<R: Rng + ?Sized>(&self, register: QubitRange, rng: &mut R) -> Result<MeasurementOutcome> {
        let probs = self.probabilities(register)?;
        let (value, probability) = draw(&probs, rng)?;
        Ok(MeasurementOutcome { value, probability, collapsed: false })
    }

    /// Measures `register` and collapses the state onto the observed value.
    pub fn measure<R: Rng + ?Sized>(&mut self, register: QubitRange, rng: &mut R) -> Result<MeasurementOutcome> {
        let probs = self.probabilities(register)?;
        let (value, probability) = draw(&probs, rng)?;
        let scale = 1.0 / probability.sqrt();
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            if register.value_of(i) == value {
                *a *= scale;
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        Ok(MeasurementOutcome { value, probability, collapsed: true })
    }
}

fn draw<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> Result<(usize, f64)> {
    let total: f64 = probs.iter().sum();
    if !total.is_finite() || total <= 1e-12 {
        return Err(Error::Numeric(format!("cannot measure a state of squared norm {total}")));
    }
    let r = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (v, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last = v;
        if r < acc {
            return Ok((v, p / total));
        }
    }
    // r landed in the rounding slack above the last cumulative sum
    Ok((last, probs[last] / total))
}

/// Applies `op` (or its inverse) to `register` of an `n_qubits` amplitude array.
pub(crate) fn apply_to_register(
    amplitudes: &mut [Complex64],
    n_qubits: usize,
    register: QubitRange,
    op: &dyn Unitary,
    inverse: bool,
) {
    let run = |buf: &mut [Complex64]| {
        if inverse {
            op.apply_inverse(buf)
        } else {
            op.apply(buf)
        }
    };
    if register.start == 0 && register.len == n_qubits {
        run(amplitudes);
        return;
    }
    let mask = register.mask();
    let mut buf = vec![Complex64::new(0.0, 0.0); register.dimension()];
    for base in (0..amplitudes.len()).filter(|i| i & mask == 0) {
        for (v, b) in buf.iter_mut().enumerate() {
            *b = amplitudes[base | (v << register.start)];
        }
        run(&mut buf);
        for (v, b) in buf.iter().enumerate() {
            amplitudes[base | (v << register.start)] = *b;
        }
    }
}
