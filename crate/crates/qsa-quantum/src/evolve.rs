//! Schrödinger and Lindblad propagation for qubit ⊗ mode states.
//!
//! Hamiltonians are supplied as per-row gather lists with optionally
//! time-dependent phases, so the density-operator right-multiplication can
//! reuse the same structure through Hermiticity. Collapse operators cover
//! the cases needed here: mode lowering/raising (heating) and diagonal
//! dephasing.

use num_complex::Complex64 as C64;

use qsa_core::ode::{integrate, OdeError, OdeOptions};

use crate::hilbert::HilbertSpec;

/// One Hamiltonian matrix element H[row, from] = amp · phases[phase_idx](t).
#[derive(Clone, Copy, Debug)]
pub struct HamEntry {
    pub from: u32,
    pub phase_idx: u32,
    pub amp: C64,
}

/// Sparse Hermitian Hamiltonian in row-gather form. The handful of distinct
/// oscillation rates are tabulated so e^{iωt} is evaluated once per rate per
/// right-hand-side call, not once per matrix element.
#[derive(Clone, Debug)]
pub struct GatherHamiltonian {
    pub dim: usize,
    /// `rows[r]` lists the entries of row r.
    pub rows: Vec<Vec<HamEntry>>,
    /// Distinct phase rates; index 0 is the static rate 0.
    pub phase_rates: Vec<f64>,
}

impl GatherHamiltonian {
    pub fn new(dim: usize) -> Self {
        Self { dim, rows: vec![Vec::new(); dim], phase_rates: vec![0.0] }
    }

    fn rate_index(&mut self, rate: f64) -> u32 {
        match self.phase_rates.iter().position(|&r| r == rate) {
            Some(i) => i as u32,
            None => {
                self.phase_rates.push(rate);
                (self.phase_rates.len() - 1) as u32
            }
        }
    }

    /// Add H[i, j] = amp·e^{i w t} and its Hermitian partner.
    pub fn add(&mut self, i: usize, j: usize, amp: C64, phase_rate: f64) {
        let idx = self.rate_index(phase_rate);
        self.rows[i].push(HamEntry { from: j as u32, amp, phase_idx: idx });
        if i != j {
            let idx_c = self.rate_index(-phase_rate);
            self.rows[j].push(HamEntry { from: i as u32, amp: amp.conj(), phase_idx: idx_c });
        }
    }

    /// e^{i ω t} per tabulated rate.
    pub fn phases_at(&self, t: f64) -> Vec<C64> {
        self.phase_rates
            .iter()
            .map(|&r| if r == 0.0 { C64::new(1.0, 0.0) } else { C64::new(0.0, r * t).exp() })
            .collect()
    }

    /// out += scale · H(t) · psi
    pub fn apply(&self, t: f64, psi: &[C64], out: &mut [C64], scale: C64) {
        let phases = self.phases_at(t);
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for e in row {
                acc += e.amp * phases[e.phase_idx as usize] * psi[e.from as usize];
            }
            out[r] += scale * acc;
        }
    }
}

/// Collapse operators for the master equation.
#[derive(Clone, Debug)]
pub enum CollapseOp {
    /// L = √rate · a_mode
    Lower { mode: usize, rate: f64 },
    /// L = √rate · a†_mode
    Raise { mode: usize, rate: f64 },
    /// L = √rate · diag(values)
    Dephase { values: Vec<f64>, rate: f64 },
}

/// One collapse channel in separable form: L ρ L† reads ρ shifted by
/// `shift` in both indices and scales by gain[i]·gain[j]; the anticommutator
/// diagonals are folded into one shared loss vector.
struct PreparedCollapse {
    rate: f64,
    shift: isize,
    gain: Vec<f64>,
}

/// Dense row-major density-operator propagation under H + collapse ops,
/// with all index arithmetic hoisted out of the inner loops.
pub struct LindbladSystem {
    dim: usize,
    rows: Vec<Vec<HamEntry>>,
    phase_rates: Vec<f64>,
    prepared: Vec<PreparedCollapse>,
    /// A[i] = Σ_ops rate·diag(L†L)[i]; the anticommutator is −(A_i+A_j)/2.
    loss: Vec<f64>,
}

impl LindbladSystem {
    pub fn new(spec: &HilbertSpec, hamiltonian: &GatherHamiltonian, collapse: &[CollapseOp]) -> Self {
        let d = spec.dim();
        let mut prepared = Vec::new();
        let mut loss = vec![0.0; d];
        for op in collapse {
            match op {
                CollapseOp::Lower { mode, rate } => {
                    let s = spec.mode_stride(*mode);
                    let cut = spec.modes[*mode].fock_cutoff;
                    let gain: Vec<f64> = (0..d)
                        .map(|i| {
                            let n = spec.occupation(i, *mode);
                            if n + 1 < cut { ((n + 1) as f64).sqrt() } else { 0.0 }
                        })
                        .collect();
                    for (i, l) in loss.iter_mut().enumerate() {
                        *l += rate * spec.occupation(i, *mode) as f64;
                    }
                    prepared.push(PreparedCollapse { rate: *rate, shift: s as isize, gain });
                }
                CollapseOp::Raise { mode, rate } => {
                    let s = spec.mode_stride(*mode);
                    let cut = spec.modes[*mode].fock_cutoff;
                    let gain: Vec<f64> = (0..d)
                        .map(|i| {
                            let n = spec.occupation(i, *mode);
                            if n >= 1 { (n as f64).sqrt() } else { 0.0 }
                        })
                        .collect();
                    // truncated a†: no outflow from the top rung
                    for (i, l) in loss.iter_mut().enumerate() {
                        let n = spec.occupation(i, *mode);
                        if n + 1 < cut {
                            *l += rate * (n + 1) as f64;
                        }
                    }
                    prepared.push(PreparedCollapse { rate: *rate, shift: -(s as isize), gain });
                }
                CollapseOp::Dephase { values, rate } => {
                    for (i, l) in loss.iter_mut().enumerate() {
                        *l += rate * values[i] * values[i];
                    }
                    prepared.push(PreparedCollapse { rate: *rate, shift: 0, gain: values.clone() });
                }
            }
        }
        Self {
            dim: d,
            rows: hamiltonian.rows.clone(),
            phase_rates: hamiltonian.phase_rates.clone(),
            prepared,
            loss,
        }
    }

    /// drho = −i[H, ρ] + Σ_k (L_k ρ L_k† − ½{L_k†L_k, ρ})
    pub fn rhs(&self, t: f64, rho: &[C64], out: &mut [C64]) {
        let d = self.dim;
        let minus_i = C64::new(0.0, -1.0);
        let plus_i = C64::new(0.0, 1.0);
        let phases: Vec<C64> = self
            .phase_rates
            .iter()
            .map(|&r| if r == 0.0 { C64::new(1.0, 0.0) } else { C64::new(0.0, r * t).exp() })
            .collect();
        let do_row = |i: usize, out_row: &mut [C64]| {
            // −i (H ρ): gather over row i of H
            for e in &self.rows[i] {
                let a = minus_i * e.amp * phases[e.phase_idx as usize];
                let src = &rho[e.from as usize * d..(e.from as usize + 1) * d];
                for (o, s) in out_row.iter_mut().zip(src) {
                    *o += a * s;
                }
            }
            // +i (ρ H): (ρH)[i, c] = Σ_{e in row c} conj(amp_e) ρ[i, from_e]
            let row_i = &rho[i * d..(i + 1) * d];
            for (c, col_row) in self.rows.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for e in col_row {
                    acc += (e.amp * phases[e.phase_idx as usize]).conj() * row_i[e.from as usize];
                }
                out_row[c] += plus_i * acc;
            }
            // gain parts of L ρ L†
            for op in &self.prepared {
                let gi = op.gain[i];
                if gi == 0.0 {
                    continue;
                }
                let scale = op.rate * gi;
                if op.shift == 0 {
                    let base = i * d;
                    for (j, o) in out_row.iter_mut().enumerate() {
                        *o += scale * op.gain[j] * rho[base + j];
                    }
                } else {
                    // both indices shift together: ρ[i+Δ, j+Δ]
                    let base = (i as isize + op.shift) * d as isize + op.shift;
                    for (j, o) in out_row.iter_mut().enumerate() {
                        let gj = op.gain[j];
                        if gj != 0.0 {
                            *o += scale * gj * rho[(base + j as isize) as usize];
                        }
                    }
                }
            }
            // shared anticommutator/loss pass
            let li = self.loss[i];
            for (j, o) in out_row.iter_mut().enumerate() {
                *o -= 0.5 * (li + self.loss[j]) * row_i[j];
            }
        };

        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            out.par_chunks_mut(d).enumerate().for_each(|(i, out_row)| {
                out_row.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
                do_row(i, out_row);
            });
        }
        #[cfg(not(feature = "parallel"))]
        {
            out.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
            for i in 0..d {
                do_row(i, &mut out[i * d..(i + 1) * d]);
            }
        }
    }
}

/// Integrate a pure state under H(t).
pub fn evolve_pure(
    hamiltonian: &GatherHamiltonian,
    psi0: &[C64],
    t_end: f64,
    rtol: f64,
) -> Result<Vec<C64>, OdeError> {
    let rhs = |t: f64, y: &Vec<C64>, dy: &mut Vec<C64>| {
        dy.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
        hamiltonian.apply(t, y, dy, C64::new(0.0, -1.0));
    };
    let opts = OdeOptions { rtol, atol: 1e-14, ..Default::default() };
    qsa_core::ode::integrate_to(rhs, 0.0, &psi0.to_vec(), t_end, &opts)
}

/// Integrate a density operator under the master equation, sampling at
/// `t_samples`.
pub fn evolve_density(
    spec: &HilbertSpec,
    hamiltonian: &GatherHamiltonian,
    collapse: &[CollapseOp],
    rho0: &[C64],
    t_samples: &[f64],
    rtol: f64,
) -> Result<Vec<Vec<C64>>, OdeError> {
    let system = LindbladSystem::new(spec, hamiltonian, collapse);
    let rhs = |t: f64, y: &Vec<C64>, dy: &mut Vec<C64>| system.rhs(t, y, dy);
    let opts = OdeOptions { rtol, atol: 1e-14, ..Default::default() };
    integrate(rhs, 0.0, &rho0.to_vec(), t_samples, &opts)
}
