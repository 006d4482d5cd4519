//! Synthetic preparations with a known good probability.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grover::GoodStatePredicate;
use crate::statevector::{Circuit, Gate1, HouseholderPreparation, Layer, QubitRange, Unitary};

/// Qubit 0 split as √p|0⟩ + √(1−p)|1⟩, followed by `dummy_qubits` in uniform
/// superposition. Good states are those with qubit 0 in |0⟩.
pub fn rotation_oracle(p: f64, dummy_qubits: usize) -> Result<(Arc<dyn Unitary>, GoodStatePredicate)> {
    let mut circuit = Circuit::new(1 + dummy_qubits).then(Gate1::amplitude_split(p)?, QubitRange::new(0, 1))?;
    if dummy_qubits > 0 {
        circuit = circuit.then(Layer::hadamard(dummy_qubits), QubitRange::new(1, dummy_qubits))?;
    }
    Ok((Arc::new(circuit), GoodStatePredicate::qubit_is_zero(0)))
}

/// Preparation putting probability `p` on basis state `marked` and spreading
/// the rest evenly over the other states of an `n_qubits` register.
pub fn single_marked_preparation(n_qubits: usize, marked: usize, p: f64) -> Result<Arc<dyn Unitary>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
    }
    let dim = 1usize << n_qubits;
    if marked >= dim || n_qubits == 0 {
        return Err(Error::Range(format!("marked index {marked} outside {n_qubits}-qubit register")));
    }
    let rest = ((1.0 - p) / (dim - 1) as f64).sqrt();
    let target: Vec<f64> = (0..dim).map(|i| if i == marked { p.sqrt() } else { rest }).collect();
    Ok(Arc::new(HouseholderPreparation::new(&target)?))
}
