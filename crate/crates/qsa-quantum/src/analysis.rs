//! Population, parity, and Bell-fidelity analysis of two-qubit reduced
//! states.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use qsa_core::fit::fit_harmonic;

use crate::hilbert::QuantumState;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParityAnalysis {
    pub p_ss: f64,
    /// P_SD + P_DS.
    pub p_mixed: f64,
    pub p_dd: f64,
    /// Parity after a π/2 analysis pulse, per scanned phase.
    pub parity: Vec<(f64, f64)>,
    /// Fitted contrast of the cos(2φ) parity oscillation.
    pub visibility: f64,
    /// (P_SS + P_DD)/2 + V/2.
    pub fidelity: f64,
}

/// Bell fidelity against the (|SS⟩ − i|DD⟩)/√2 class, maximized over local
/// Z rotations: (P_SS + P_DD)/2 + |⟨SS|ρ|DD⟩|.
pub fn bell_fidelity(state: &QuantumState) -> f64 {
    assert_eq!(state.spec().n_qubits, 2, "bell fidelity needs a two-qubit register");
    let rho = state.reduced_qubits();
    // qubit word: bit0 = qubit 0; SS = 0b00, DD = 0b11
    0.5 * (rho[0].re + rho[15].re) + rho[3].norm()
}

/// Apply exp(−i(π/4)(cos φ X + sin φ Y)) to each qubit of a 2-qubit density
/// matrix (row-major 4×4) and return ⟨Z₁Z₂⟩.
fn parity_after_pulse(rho: &[C64], phi: f64) -> f64 {
    let c = C64::new(0.5f64.sqrt(), 0.0);
    let s = C64::new(0.0, -0.5f64.sqrt());
    let u1 = [
        [c, s * C64::new(0.0, -phi).exp()],
        [s * C64::new(0.0, phi).exp(), c],
    ];
    // two-qubit pulse U = u ⊗ u (qubit word: bit0 → tensor slot 0)
    let mut u = [[C64::new(0.0, 0.0); 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            u[a][b] = u1[a & 1][b & 1] * u1[(a >> 1) & 1][(b >> 1) & 1];
        }
    }
    let mut out = 0.0;
    for a in 0..4 {
        let z = if (a & 1) ^ ((a >> 1) & 1) == 0 { 1.0 } else { -1.0 };
        let mut diag = C64::new(0.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                diag += u[a][i] * rho[i * 4 + j] * u[a][j].conj();
            }
        }
        out += z * diag.re;
    }
    out
}

/// Populations and a parity-phase scan of the reduced two-qubit state.
pub fn populations_and_parity(state: &QuantumState, n_phases: usize) -> ParityAnalysis {
    assert_eq!(state.spec().n_qubits, 2);
    let rho = state.reduced_qubits();
    let p_ss = rho[0].re;
    let p_dd = rho[15].re;
    let p_mixed = rho[5].re + rho[10].re;
    let phases: Vec<f64> =
        (0..n_phases).map(|k| std::f64::consts::TAU * k as f64 / n_phases as f64).collect();
    let parity: Vec<(f64, f64)> =
        phases.iter().map(|&phi| (phi, parity_after_pulse(&rho, phi))).collect();
    let xs: Vec<f64> = parity.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = parity.iter().map(|p| p.1).collect();
    let visibility = fit_harmonic(&xs, &ys, 2.0).map(|(amp, _, _)| amp).unwrap_or(0.0);
    ParityAnalysis {
        p_ss,
        p_mixed,
        p_dd,
        parity,
        visibility,
        fidelity: 0.5 * (p_ss + p_dd) + 0.5 * visibility,
    }
}
