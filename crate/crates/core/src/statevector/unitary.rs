use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use num_complex::Complex64;

use super::{apply_to_register, QubitRange};
use crate::error::{Error, Result};

/// A reversible transformation of a fixed number of qubits.
///
/// Implementations act on a slice of `2^num_qubits()` amplitudes, with qubit
/// `q` mapped to bit `q` of the slice index. Placement inside a larger
/// register is handled by [`super::StateVector::apply_on`].
pub trait Unitary: Send + Sync {
    fn num_qubits(&self) -> usize;
    fn apply(&self, amplitudes: &mut [Complex64]);
    fn apply_inverse(&self, amplitudes: &mut [Complex64]);
}

impl<U: Unitary + ?Sized> Unitary for Arc<U> {
    fn num_qubits(&self) -> usize {
        (**self).num_qubits()
    }
    fn apply(&self, amplitudes: &mut [Complex64]) {
        (**self).apply(amplitudes)
    }
    fn apply_inverse(&self, amplitudes: &mut [Complex64]) {
        (**self).apply_inverse(amplitudes)
    }
}

impl<U: Unitary + ?Sized> Unitary for &U {
    fn num_qubits(&self) -> usize {
        (**self).num_qubits()
    }
    fn apply(&self, amplitudes: &mut [Complex64]) {
        (**self).apply(amplitudes)
    }
    fn apply_inverse(&self, amplitudes: &mut [Complex64]) {
        (**self).apply_inverse(amplitudes)
    }
}

/// Single-qubit gate given by its 2x2 matrix (row-major).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate1 {
    m: [[Complex64; 2]; 2],
}

impl Gate1 {
    pub fn new(m: [[Complex64; 2]; 2]) -> Self {
        Self { m }
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        let r = |v| Complex64::new(v, 0.0);
        Self::new([[r(a), r(b)], [r(c), r(d)]])
    }

    pub fn identity() -> Self {
        Self::real(1.0, 0.0, 0.0, 1.0)
    }

    pub fn hadamard() -> Self {
        Self::real(FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2)
    }

    pub fn pauli_x() -> Self {
        Self::real(0.0, 1.0, 1.0, 0.0)
    }

    pub fn pauli_z() -> Self {
        Self::real(1.0, 0.0, 0.0, -1.0)
    }

    /// `Ry(angle) = exp(-i angle Y / 2)`.
    pub fn ry(angle: f64) -> Self {
        let (s, c) = (angle / 2.0).sin_cos();
        Self::real(c, -s, s, c)
    }

    /// `diag(1, e^{i phi})`.
    pub fn phase(phi: f64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self::new([[one, zero], [zero, Complex64::from_polar(1.0, phi)]])
    }

    /// Real rotation taking |0⟩ to √p|0⟩ + √(1−p)|1⟩.
    pub fn amplitude_split(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
        }
        let g = p.sqrt();
        let b = (1.0 - p).sqrt();
        Ok(Self::real(g, -b, b, g))
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        self.m
    }

    pub(crate) fn dagger(&self) -> Self {
        let m = self.m;
        Self::new([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    #[inline]
    pub(crate) fn apply_pair(&self, a: &mut Complex64, b: &mut Complex64) {
        let (x, y) = (*a, *b);
        *a = self.m[0][0] * x + self.m[0][1] * y;
        *b = self.m[1][0] * x + self.m[1][1] * y;
    }

    fn apply_to_qubit(&self, amplitudes: &mut [Complex64], qubit: usize) {
        let stride = 1usize << qubit;
        for block in (0..amplitudes.len()).step_by(stride << 1) {
            for i in block..block + stride {
                let (lo, hi) = amplitudes.split_at_mut(i + stride);
                self.apply_pair(&mut lo[i], &mut hi[0]);
            }
        }
    }
}

impl Unitary for Gate1 {
    fn num_qubits(&self) -> usize {
        1
    }
    fn apply(&self, amplitudes: &mut [Complex64]) {
        self.apply_to_qubit(amplitudes, 0);
    }
    fn apply_inverse(&self, amplitudes: &mut [Complex64]) {
        self.dagger().apply_to_qubit(amplitudes, 0);
    }
}

/// The same single-qubit gate applied to every qubit of a register.
#[derive(Debug, Clone, Copy)]
pub struct Layer {
    gate: Gate1,
    width: usize,
}

impl Layer {
    pub fn new(gate: Gate1, width: usize) -> Self {
        Self { gate, width }
    }

    pub fn hadamard(width: usize) -> Self {
        Self::new(Gate1::hadamard(), width)
    }
}

impl Unitary for Layer {
    fn num_qubits(&self) -> usize {
        self.width
    }
    fn apply(&self, amplitudes: &mut [Complex64]) {
        for q in 0..self.width {
            self.gate.apply_to_qubit(amplitudes, q);
        }
    }
    fn apply_inverse(&self, amplitudes: &mut [Complex64]) {
        let dagger = self.gate.dagger();
        for q in (0..self.width).rev() {
            dagger.apply_to_qubit(amplitudes, q);
        }
    }
}

/// Ordered composition of unitaries, each placed on a sub-register.
#[derive(Clone)]
pub struct Circuit {
    width: usize,
    steps: Vec<(Arc<dyn Unitary>, QubitRange)>,
}

impl std::fmt::Debug for Circuit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Circuit")
            .field("width", &self.width)
            .field("steps", &self.steps.iter().map(|(_, r)| *r).collect::<Vec<_>>())
            .finish()
    }
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Self { width, steps: Vec::new() }
    }

    pub fn push(&mut self, op: Arc<dyn Unitary>, register: QubitRange) -> Result<&mut Self> {
        register.check(self.width)?;
        if op.num_qubits() != register.len() {
            return Err(Error::Range(format!(
                "operator on {} qubits placed on register of {} qubits",
                op.num_qubits(),
                register.len()
            )));
        }
        self.steps.push((op, register));
        Ok(self)
    }

    pub fn then(mut self, op: impl Unitary + 'static, register: QubitRange) -> Result<Self> {
        self.push(Arc::new(op), register)?;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl Unitary for Circuit {
    fn num_qubits(&self) -> usize {
        self.width
    }
    fn apply(&self, amplitudes: &mut [Complex64]) {
        for (op, reg) in &self.steps {
            apply_to_register(amplitudes, self.width, *reg, op.as_ref(), false);
        }
    }
    fn apply_inverse(&self, amplitudes: &mut [Complex64]) {
        for (op, reg) in self.steps.iter().rev() {
            apply_to_register(amplitudes, self.width, *reg, op.as_ref(), true);
        }
    }
}

/// Householder reflection `I − 2ww†/|w|²` with `w = |0⟩ − |target⟩`.
///
/// Maps |0⟩ to an arbitrary real normalized target state and is its own
/// inverse, which makes it a complete preparation unitary `A` with `A⁻¹ = A`.
#[derive(Debug, Clone)]
pub struct HouseholderPreparation {
    width: usize,
    w: Vec<f64>,
    w_norm_sqr: f64,
}

impl HouseholderPreparation {
    pub fn new(target: &[f64]) -> Result<Self> {
        let dim = target.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::Range(format!("target length {dim} is not a power of two >= 2")));
        }
        let norm: f64 = target.iter().map(|v| v * v).sum();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Numeric(format!("target state has squared norm {norm}")));
        }
        let mut w: Vec<f64> = target.iter().map(|v| -v).collect();
        w[0] += 1.0;
        let w_norm_sqr = w.iter().map(|v| v * v).sum();
        Ok(Self { width: dim.trailing_zeros() as usize, w, w_norm_sqr })
    }

    /// Uniform superposition over the first `count` basis states of a
    /// `width`-qubit register; the remaining states get amplitude zero.
    pub fn uniform_prefix(width: usize, count: usize) -> Result<Self> {
        let dim = 1usize << width;
        if count == 0 || count > dim {
            return Err(Error::Domain(format!("cannot spread over {count} of {dim} states")));
        }
        let a = 1.0 / (count as f64).sqrt();
        let target: Vec<f64> = (0..dim).map(|i| if i < count { a } else { 0.0 }).collect();
        Self::new(&target)
    }

    fn reflect(&self, amplitudes: &mut [Complex64]) {
        if self.w_norm_sqr < 1e-30 {
            return;
        }
        let dot: Complex64 = self.w.iter().zip(amplitudes.iter()).map(|(w, a)| a * w).sum();
        let scale = dot * (2.0 / self.w_norm_sqr);
        for (a, w) in amplitudes.iter_mut().zip(&self.w) {
            *a -= scale * w;
        }
    }
}

impl Unitary for HouseholderPreparation {
    fn num_qubits(&self) -> usize {
        self.width
    }
    fn apply(&self, amplitudes: &mut [Complex64]) {
        self.reflect(amplitudes);
    }
    fn apply_inverse(&self, amplitudes: &mut [Complex64]) {
        self.reflect(amplitudes);
    }
}
