use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::Unitary;

/// How the Fourier transform is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QftMethod {
    /// Direct O(M²) sum over the defining formula.
    #[default]
    Direct,
    /// Radix-style O(M log M) evaluation.
    Butterfly,
}

/// Quantum Fourier transform `|x⟩ → M^{-1/2} Σ_y e^{2πixy/M} |y⟩` on `width` qubits.
#[derive(Clone)]
pub struct Qft {
    width: usize,
    roots: Vec<Complex64>,
    kernel: Kernel,
}

#[derive(Clone)]
enum Kernel {
    Direct,
    Butterfly { forward: Arc<dyn Fft<f64>>, inverse: Arc<dyn Fft<f64>> },
}

impl std::fmt::Debug for Qft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let method = match self.kernel {
            Kernel::Direct => QftMethod::Direct,
            Kernel::Butterfly { .. } => QftMethod::Butterfly,
        };
        f.debug_struct("Qft").field("width", &self.width).field("method", &method).finish()
    }
}

impl Qft {
    pub fn new(width: usize) -> Self {
        Self::with_method(width, QftMethod::Direct)
    }

    pub fn with_method(width: usize, method: QftMethod) -> Self {
        let m = 1usize << width;
        let roots = (0..m).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64)).collect();
        let kernel = match method {
            QftMethod::Direct => Kernel::Direct,
            QftMethod::Butterfly => {
                let mut planner = FftPlanner::new();
                // rustfft's "inverse" uses the e^{+2πi} kernel, which is our forward QFT.
                Kernel::Butterfly { forward: planner.plan_fft_inverse(m), inverse: planner.plan_fft_forward(m) }
            }
        };
        Self { width, roots, kernel }
    }

    fn direct(&self, amplitudes: &mut [Complex64], conjugate: bool) {
        let m = amplitudes.len();
        let scale = 1.0 / (m as f64).sqrt();
        let input = amplitudes.to_vec();
        for (y, out) in amplitudes.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, a) in input.iter().enumerate() {
                let w = self.roots[(x * y) % m];
                acc += a * if conjugate { w.conj() } else { w };
            }
            *out = acc * scale;
        }
    }
}

impl Unitary for Qft {
    fn num_qubits(&self) -> usize {
        self.width
    }

    fn apply(&self, amplitudes: &mut [Complex64]) {
        match &self.kernel {
            Kernel::Direct => self.direct(amplitudes, false),
            Kernel::Butterfly { forward, .. } => {
                forward.process(amplitudes);
                let scale = 1.0 / (amplitudes.len() as f64).sqrt();
                amplitudes.iter_mut().for_each(|a| *a *= scale);
            }
        }
    }

    fn apply_inverse(&self, amplitudes: &mut [Complex64]) {
        match &self.kernel {
            Kernel::Direct => self.direct(amplitudes, true),
            Kernel::Butterfly { inverse, .. } => {
                inverse.process(amplitudes);
                let scale = 1.0 / (amplitudes.len() as f64).sqrt();
                amplitudes.iter_mut().for_each(|a| *a *= scale);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn butterfly_matches_direct() {
        for width in 1..=6 {
            let m = 1 << width;
            let v: Vec<Complex64> =
                (0..m).map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 1.3).cos())).collect();
            let mut a = v.clone();
            let mut b = v.clone();
            Qft::new(width).apply(&mut a);
            Qft::with_method(width, QftMethod::Butterfly).apply(&mut b);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).norm() < 1e-9);
            }
            Qft::new(width).apply_inverse(&mut a);
            Qft::with_method(width, QftMethod::Butterfly).apply_inverse(&mut b);
            for ((x, y), z) in a.iter().zip(&b).zip(&v) {
                assert!((x - z).norm() < 1e-9);
                assert!((y - z).norm() < 1e-9);
            }
        }
    }
}
