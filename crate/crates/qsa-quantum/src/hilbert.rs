//! Hilbert-space bookkeeping for qubits ⊗ truncated bosonic modes.
//!
//! Basis index layout: `idx = q · Π cutoffs + n₁ · c₂ + n₂ · c₃ ...` with the
//! qubit word q carrying qubit i at bit i (0 = S, 1 = D) and mode occupations
//! appended most-significant-first.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HilbertError {
    #[error("dimension {0} exceeds the direct-integration budget {1}")]
    DimensionBudget(usize, usize),
    #[error("fock cutoffs must be at least 4, got {0}")]
    CutoffTooSmall(usize),
    #[error("state norm/trace deviates from 1 by {0:.3e}")]
    NotNormalized(f64),
}

/// Largest dimension the dense density-operator path accepts.
pub const DIMENSION_BUDGET: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeSpec {
    /// Mode frequency (rad/s).
    pub frequency: f64,
    pub fock_cutoff: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HilbertSpec {
    pub n_qubits: usize,
    pub modes: Vec<ModeSpec>,
}

impl HilbertSpec {
    pub fn new(n_qubits: usize, modes: Vec<ModeSpec>) -> Result<Self, HilbertError> {
        for m in &modes {
            if m.fock_cutoff < 4 {
                return Err(HilbertError::CutoffTooSmall(m.fock_cutoff));
            }
        }
        let spec = Self { n_qubits, modes };
        if spec.dim() > DIMENSION_BUDGET {
            return Err(HilbertError::DimensionBudget(spec.dim(), DIMENSION_BUDGET));
        }
        Ok(spec)
    }

    pub fn dim(&self) -> usize {
        (1usize << self.n_qubits) * self.modes.iter().map(|m| m.fock_cutoff).product::<usize>()
    }

    pub fn mode_dim(&self) -> usize {
        self.modes.iter().map(|m| m.fock_cutoff).product()
    }

    /// Decompose a basis index into (qubit word, mode occupations).
    pub fn unpack(&self, idx: usize) -> (usize, Vec<usize>) {
        let md = self.mode_dim();
        let q = idx / md;
        let mut rest = idx % md;
        let mut ns = Vec::with_capacity(self.modes.len());
        let mut div = md;
        for m in &self.modes {
            div /= m.fock_cutoff;
            ns.push(rest / div);
            rest %= div;
        }
        (q, ns)
    }

    pub fn pack(&self, q: usize, ns: &[usize]) -> usize {
        let mut idx = q;
        for (m, &n) in self.modes.iter().zip(ns) {
            idx = idx * m.fock_cutoff + n;
        }
        idx
    }

    /// Stride of mode `m` in the flat index.
    pub fn mode_stride(&self, m: usize) -> usize {
        self.modes[m + 1..].iter().map(|x| x.fock_cutoff).product()
    }

    /// Occupation of mode `m` in basis state `idx`.
    pub fn occupation(&self, idx: usize, m: usize) -> usize {
        (idx % self.mode_dim()) / self.mode_stride(m) % self.modes[m].fock_cutoff
    }

    /// Qubit-word of basis state `idx`.
    pub fn qubit_word(&self, idx: usize) -> usize {
        idx / self.mode_dim()
    }
}

/// Pure state or density operator over a [`HilbertSpec`].
#[derive(Clone, Debug)]
pub enum QuantumState {
    Pure { spec: HilbertSpec, amplitudes: Vec<C64> },
    Density { spec: HilbertSpec, matrix: Vec<C64> },
}

impl QuantumState {
    /// |q; n₁ n₂ ...⟩ basis state.
    pub fn basis(spec: &HilbertSpec, q: usize, ns: &[usize]) -> Self {
        let mut amplitudes = vec![C64::new(0.0, 0.0); spec.dim()];
        amplitudes[spec.pack(q, ns)] = C64::new(1.0, 0.0);
        QuantumState::Pure { spec: spec.clone(), amplitudes }
    }

    pub fn spec(&self) -> &HilbertSpec {
        match self {
            QuantumState::Pure { spec, .. } | QuantumState::Density { spec, .. } => spec,
        }
    }

    pub fn dim(&self) -> usize {
        self.spec().dim()
    }

    /// Promote to a density operator (idempotent).
    pub fn to_density(&self) -> QuantumState {
        match self {
            QuantumState::Density { .. } => self.clone(),
            QuantumState::Pure { spec, amplitudes } => {
                let d = spec.dim();
                let mut matrix = vec![C64::new(0.0, 0.0); d * d];
                for i in 0..d {
                    for j in 0..d {
                        matrix[i * d + j] = amplitudes[i] * amplitudes[j].conj();
                    }
                }
                QuantumState::Density { spec: spec.clone(), matrix }
            }
        }
    }

    /// Norm (pure) or trace (density).
    pub fn norm(&self) -> f64 {
        match self {
            QuantumState::Pure { amplitudes, .. } => {
                amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
            }
            QuantumState::Density { spec, matrix } => {
                let d = spec.dim();
                (0..d).map(|i| matrix[i * d + i].re).sum()
            }
        }
    }

    pub fn check_normalized(&self, tol: f64) -> Result<(), HilbertError> {
        let dev = (self.norm() - 1.0).abs();
        if dev > tol {
            return Err(HilbertError::NotNormalized(dev));
        }
        Ok(())
    }

    /// Reduced qubit density matrix (modes traced out), row-major 2^q × 2^q.
    pub fn reduced_qubits(&self) -> Vec<C64> {
        let spec = self.spec().clone();
        let nq = 1usize << spec.n_qubits;
        let md = spec.mode_dim();
        let mut rho = vec![C64::new(0.0, 0.0); nq * nq];
        match self {
            QuantumState::Pure { amplitudes, .. } => {
                for qa in 0..nq {
                    for qb in 0..nq {
                        let mut acc = C64::new(0.0, 0.0);
                        for n in 0..md {
                            acc += amplitudes[qa * md + n] * amplitudes[qb * md + n].conj();
                        }
                        rho[qa * nq + qb] = acc;
                    }
                }
            }
            QuantumState::Density { spec, matrix } => {
                let d = spec.dim();
                for qa in 0..nq {
                    for qb in 0..nq {
                        let mut acc = C64::new(0.0, 0.0);
                        for n in 0..md {
                            acc += matrix[(qa * md + n) * d + (qb * md + n)];
                        }
                        rho[qa * nq + qb] = acc;
                    }
                }
            }
        }
        rho
    }

    /// Purity tr(ρ_q²) of the reduced qubit state.
    pub fn qubit_purity(&self) -> f64 {
        let rho = self.reduced_qubits();
        let nq = 1usize << self.spec().n_qubits;
        let mut acc = 0.0;
        for a in 0..nq {
            for b in 0..nq {
                acc += (rho[a * nq + b] * rho[b * nq + a]).re;
            }
        }
        acc
    }
}
