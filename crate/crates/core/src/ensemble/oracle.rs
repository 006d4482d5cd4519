use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grover::GoodStatePredicate;
use crate::statevector::{Circuit, Gate1, HouseholderPreparation, QubitRange, Unitary};

/// Qubit carrying the class answer; |0⟩ is Class₁.
pub const CLASS_QUBIT: usize = 0;

/// Rotates the class qubit of index `i` by `gates[i]`; indices beyond
/// `gates.len()` are left alone.
///
/// Layout: qubit 0 is the class qubit, qubits `1..` hold the index.
#[derive(Debug, Clone)]
struct IndexedClassRotation {
    width: usize,
    gates: Vec<Gate1>,
}

impl IndexedClassRotation {
    fn run(&self, amplitudes: &mut [Complex64], inverse: bool) {
        for (i, pair) in amplitudes.chunks_exact_mut(2).enumerate().take(self.gates.len()) {
            let gate = if inverse { self.gates[i].dagger() } else { self.gates[i] };
            let (lo, hi) = pair.split_at_mut(1);
            gate.apply_pair(&mut lo[0], &mut hi[0]);
        }
    }
}

impl Unitary for IndexedClassRotation {
    fn num_qubits(&self) -> usize {
        self.width
    }
    fn apply(&self, amplitudes: &mut [Complex64]) {
        self.run(amplitudes, false);
    }
    fn apply_inverse(&self, amplitudes: &mut [Complex64]) {
        self.run(amplitudes, true);
    }
}

/// Amplitude-encoding preparation for a list of per-member Class₁ probabilities.
#[derive(Clone)]
pub struct EnsembleOracle {
    pub preparation: Arc<dyn Unitary>,
    pub predicate: GoodStatePredicate,
    /// Number of index qubits `m`; the full register has `m + 1` qubits.
    pub index_qubits: usize,
    /// Members actually encoded (`N`); slots `N..2^m` are padding.
    pub members: usize,
}

impl std::fmt::Debug for EnsembleOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EnsembleOracle")
            .field("index_qubits", &self.index_qubits)
            .field("members", &self.members)
            .finish()
    }
}

/// Builds `A` with `A|0⟩ = N^{-1/2} Σ_i |i⟩(√p_i|0⟩ + √(1−p_i)|1⟩)` and the
/// predicate marking class qubit |0⟩, so the good probability is the mean of `p`.
///
/// When `N` is not a power of two the index register is rounded up and the
/// uniform superposition covers only the first `N` slots; without
/// `allow_padding` this is a configuration error.
pub fn encode_probabilities(probabilities: &[f64], allow_padding: bool) -> Result<EnsembleOracle> {
    let n = probabilities.len();
    if n == 0 {
        return Err(Error::Config("ensemble has no members".into()));
    }
    if !n.is_power_of_two() && !allow_padding {
        return Err(Error::Config(format!("{n} members is not a power of two and padding is disabled")));
    }
    let index_qubits = (n.next_power_of_two().trailing_zeros() as usize).max(1);
    let gates = probabilities.iter().map(|&p| Gate1::amplitude_split(p)).collect::<Result<Vec<_>>>()?;
    let width = index_qubits + 1;
    let circuit = Circuit::new(width)
        .then(HouseholderPreparation::uniform_prefix(index_qubits, n)?, QubitRange::new(1, index_qubits))?
        .then(IndexedClassRotation { width, gates }, QubitRange::full(width))?;
    Ok(EnsembleOracle {
        preparation: Arc::new(circuit),
        predicate: GoodStatePredicate::qubit_is_zero(CLASS_QUBIT),
        index_qubits,
        members: n,
    })
}
