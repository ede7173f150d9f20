//! Addressed pulse operations: carrier and sideband rotations on a chosen
//! ion and local mode, and the beam-splitter exchange coupling between two
//! modes.

use num_complex::Complex64 as C64;
use thiserror::Error;

use qsa_core::ode::OdeError;

use crate::evolve::{evolve_density, evolve_pure, CollapseOp, GatherHamiltonian};
use crate::hilbert::QuantumState;

#[derive(Debug, Error)]
pub enum OpsError {
    #[error("qubit index {0} out of range")]
    BadQubit(usize),
    #[error("mode index {0} out of range")]
    BadMode(usize),
    #[error(transparent)]
    Ode(#[from] OdeError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PulseKind {
    Carrier,
    /// Red sideband: couples |S, n+1⟩ ↔ |D, n⟩.
    Rsb,
    /// Blue sideband: couples |S, n⟩ ↔ |D, n+1⟩.
    Bsb,
}

/// Apply a 2×2 unitary on a set of disjoint index pairs. Pure states get
/// U·ψ; density operators get U·ρ·U†.
fn apply_pairs(state: &mut QuantumState, pairs: &[(usize, usize)], u: [[C64; 2]; 2]) {
    match state {
        QuantumState::Pure { amplitudes, .. } => {
            for &(a, b) in pairs {
                let (va, vb) = (amplitudes[a], amplitudes[b]);
                amplitudes[a] = u[0][0] * va + u[0][1] * vb;
                amplitudes[b] = u[1][0] * va + u[1][1] * vb;
            }
        }
        QuantumState::Density { spec, matrix } => {
            let d = spec.dim();
            for &(a, b) in pairs {
                for j in 0..d {
                    let (va, vb) = (matrix[a * d + j], matrix[b * d + j]);
                    matrix[a * d + j] = u[0][0] * va + u[0][1] * vb;
                    matrix[b * d + j] = u[1][0] * va + u[1][1] * vb;
                }
            }
            for &(a, b) in pairs {
                for i in 0..d {
                    let (va, vb) = (matrix[i * d + a], matrix[i * d + b]);
                    matrix[i * d + a] = u[0][0].conj() * va + u[0][1].conj() * vb;
                    matrix[i * d + b] = u[1][0].conj() * va + u[1][1].conj() * vb;
                }
            }
        }
    }
}

fn rotation(theta: f64, phase: f64) -> [[C64; 2]; 2] {
    let c = C64::new((theta / 2.0).cos(), 0.0);
    let s = (theta / 2.0).sin();
    let mi = C64::new(0.0, -1.0);
    [
        [c, mi * s * C64::new(0.0, -phase).exp()],
        [mi * s * C64::new(0.0, phase).exp(), c],
    ]
}

/// Carrier or sideband pulse of the stated `area` (a π-pulse has area π) on
/// `ion`, coupling to local `mode` for the sideband kinds. Sideband Rabi
/// rates carry the usual √(n+1) ladder factors, so the stated area is exact
/// on the lowest rung.
pub fn sideband_pulse(
    state: &mut QuantumState,
    ion: usize,
    mode: usize,
    kind: PulseKind,
    area: f64,
    phase: f64,
) -> Result<(), OpsError> {
    let spec = state.spec().clone();
    if ion >= spec.n_qubits {
        return Err(OpsError::BadQubit(ion));
    }
    if mode >= spec.modes.len() && kind != PulseKind::Carrier {
        return Err(OpsError::BadMode(mode));
    }
    let bit = 1usize << ion;
    let d = spec.dim();
    match kind {
        PulseKind::Carrier => {
            let pairs: Vec<(usize, usize)> = (0..d)
                .filter(|&i| spec.qubit_word(i) & bit == 0)
                .map(|i| (i, i + bit * spec.mode_dim()))
                .collect();
            apply_pairs(state, &pairs, rotation(area, phase));
        }
        PulseKind::Bsb | PulseKind::Rsb => {
            let cut = spec.modes[mode].fock_cutoff;
            let stride = spec.mode_stride(mode);
            // group pairs by rung so each gets its √(n+1)-scaled angle
            for n in 0..(cut - 1) {
                let scale = ((n + 1) as f64).sqrt();
                let mut pairs = Vec::new();
                for i in 0..d {
                    if spec.qubit_word(i) & bit != 0 {
                        continue;
                    }
                    let occ = spec.occupation(i, mode);
                    match kind {
                        // |S, n⟩ ↔ |D, n+1⟩
                        PulseKind::Bsb if occ == n => {
                            pairs.push((i, i + bit * spec.mode_dim() + stride));
                        }
                        // |S, n+1⟩ ↔ |D, n⟩
                        PulseKind::Rsb if occ == n + 1 => {
                            pairs.push((i, i + bit * spec.mode_dim() - stride));
                        }
                        _ => {}
                    }
                }
                apply_pairs(state, &pairs, rotation(area * scale, phase));
            }
        }
    }
    Ok(())
}

/// Beam-splitter exchange H = (Ω_c/2)(a₁†a₂ + a₁a₂†) between two modes for
/// `duration`; a single phonon fully swaps wells at duration π/Ω_c.
/// `dephasing` optionally adds a diagonal collapse (rate, values) during the
/// wait.
pub fn exchange_coupling(
    state: &mut QuantumState,
    mode_a: usize,
    mode_b: usize,
    omega_c: f64,
    duration: f64,
    dephasing: Option<(f64, Vec<f64>)>,
) -> Result<(), OpsError> {
    let spec = state.spec().clone();
    if mode_a >= spec.modes.len() || mode_b >= spec.modes.len() {
        return Err(OpsError::BadMode(mode_a.max(mode_b)));
    }
    let d = spec.dim();
    let (sa, sb) = (spec.mode_stride(mode_a), spec.mode_stride(mode_b));
    let (ca, cb) = (spec.modes[mode_a].fock_cutoff, spec.modes[mode_b].fock_cutoff);
    let mut h = GatherHamiltonian::new(d);
    for i in 0..d {
        let na = spec.occupation(i, mode_a);
        let nb = spec.occupation(i, mode_b);
        // a₁†a₂ |.., na, nb⟩ → √(na+1)√nb |.., na+1, nb−1⟩
        if na + 1 < ca && nb >= 1 && cb > 0 {
            let j = i + sa - sb;
            let amp = omega_c / 2.0 * (((na + 1) * nb) as f64).sqrt();
            h.add(j, i, C64::new(amp, 0.0), 0.0);
        }
    }
    if dephasing.is_none() {
        if let QuantumState::Pure { amplitudes, .. } = state {
            *amplitudes = evolve_pure(&h, amplitudes, duration, 1e-11)?;
            return Ok(());
        }
    }
    // density path (also used whenever dephasing is requested)
    let mut rho = state.to_density();
    let QuantumState::Density { matrix, .. } = &mut rho else { unreachable!() };
    let collapse: Vec<CollapseOp> = match dephasing {
        Some((rate, values)) => vec![CollapseOp::Dephase { values, rate }],
        None => vec![],
    };
    let out = evolve_density(&spec, &h, &collapse, matrix, &[duration], 1e-10)?;
    *state = QuantumState::Density { spec, matrix: out.into_iter().next().unwrap() };
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{HilbertSpec, ModeSpec};

    fn spec() -> HilbertSpec {
        HilbertSpec::new(
            2,
            vec![
                ModeSpec { frequency: 1.0, fock_cutoff: 4 },
                ModeSpec { frequency: 1.0, fock_cutoff: 4 },
            ],
        )
        .unwrap()
    }

    fn amp_at(state: &QuantumState, q: usize, ns: &[usize]) -> C64 {
        match state {
            QuantumState::Pure { spec, amplitudes } => amplitudes[spec.pack(q, ns)],
            _ => panic!("pure expected"),
        }
    }

    #[test]
    fn bsb_pi_transfers_s0_to_d1() {
        let spec = spec();
        let mut state = QuantumState::basis(&spec, 0, &[0, 0]);
        sideband_pulse(&mut state, 0, 0, PulseKind::Bsb, std::f64::consts::PI, 0.0).unwrap();
        let p = amp_at(&state, 0b01, &[1, 0]).norm_sqr();
        assert!((p - 1.0).abs() < 1e-12, "p = {p}");
    }

    #[test]
    fn rsb_on_ground_is_identity() {
        let spec = spec();
        let mut state = QuantumState::basis(&spec, 0, &[0, 0]);
        sideband_pulse(&mut state, 0, 0, PulseKind::Rsb, std::f64::consts::PI, 0.3).unwrap();
        let p = amp_at(&state, 0, &[0, 0]).norm_sqr();
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_carrier_half_pulses_make_a_pi() {
        let spec = spec();
        let mut a = QuantumState::basis(&spec, 0, &[1, 2]);
        sideband_pulse(&mut a, 1, 0, PulseKind::Carrier, std::f64::consts::PI / 2.0, 0.1).unwrap();
        sideband_pulse(&mut a, 1, 0, PulseKind::Carrier, std::f64::consts::PI / 2.0, 0.1).unwrap();
        let mut b = QuantumState::basis(&spec, 0, &[1, 2]);
        sideband_pulse(&mut b, 1, 0, PulseKind::Carrier, std::f64::consts::PI, 0.1).unwrap();
        let (QuantumState::Pure { amplitudes: xa, .. }, QuantumState::Pure { amplitudes: ya, .. }) =
            (&a, &b)
        else {
            panic!()
        };
        for (p, q) in xa.iter().zip(ya) {
            assert!((p - q).norm() < 1e-12);
        }
    }

    #[test]
    fn exchange_half_full_and_return() {
        let spec = spec();
        let omega_c = 2.0 * std::f64::consts::PI * 5.3e3;
        // half swap: 50/50 split
        let mut state = QuantumState::basis(&spec, 0, &[1, 0]);
        exchange_coupling(&mut state, 0, 1, omega_c, std::f64::consts::PI / (2.0 * omega_c), None)
            .unwrap();
        let p10 = amp_at(&state, 0, &[1, 0]).norm_sqr();
        let p01 = amp_at(&state, 0, &[0, 1]).norm_sqr();
        assert!((p10 - 0.5).abs() < 1e-8 && (p01 - 0.5).abs() < 1e-8, "{p10} {p01}");
        // full swap
        let mut state = QuantumState::basis(&spec, 0, &[1, 0]);
        exchange_coupling(&mut state, 0, 1, omega_c, std::f64::consts::PI / omega_c, None).unwrap();
        assert!((amp_at(&state, 0, &[0, 1]).norm_sqr() - 1.0).abs() < 1e-8);
        // return up to global phase
        let mut state = QuantumState::basis(&spec, 0, &[1, 0]);
        exchange_coupling(&mut state, 0, 1, omega_c, 2.0 * std::f64::consts::PI / omega_c, None)
            .unwrap();
        assert!((amp_at(&state, 0, &[1, 0]).norm_sqr() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn exchange_conserves_total_phonons() {
        let spec = spec();
        let mut state = QuantumState::basis(&spec, 0b10, &[2, 1]);
        exchange_coupling(&mut state, 0, 1, 1e4, 3.7e-5, None).unwrap();
        let QuantumState::Pure { spec, amplitudes } = &state else { panic!() };
        for (i, a) in amplitudes.iter().enumerate() {
            if a.norm_sqr() > 1e-20 {
                assert_eq!(spec.occupation(i, 0) + spec.occupation(i, 1), 3);
                assert_eq!(spec.qubit_word(i), 0b10);
            }
        }
    }
}
