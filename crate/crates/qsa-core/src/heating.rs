//! Electrode-voltage-noise heating of motional modes.
//!
//! Each DC electrode carries uncorrelated voltage noise of a shared PSD.
//! The heating rate of mode n from electrode k follows from projecting the
//! electrode's field pattern onto the mode vector:
//!
//! Γ_{n,k} = q² S_V |Σ_i ν_n^(i)·E_k^(i)|² / (4 m ħ ω_n)
//!
//! with unit-normalized 3N mode vectors; the total is the sum over
//! electrodes. The stretch mode of a coupled double well barely projects
//! onto the (nearly homogeneous) electrode fields, which is what makes it
//! the better gate bus.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::{IonSpecies, REDUCED_PLANCK};
use crate::par::par_map;
use crate::pointcharge::Orientation;
use crate::pseudo::{dc_field_per_volt, PseudoError, SurfaceTrapGeometry};
use crate::statics::{
    calibrate_double_well, normal_modes, solve_equilibrium, ModeSpectrum, StaticsError,
};

#[derive(Debug, Error)]
pub enum HeatingError {
    #[error("fields supplied for {fields} ions but the spectrum has {modes}")]
    DimensionMismatch { fields: usize, modes: usize },
    #[error("projected field vanishes at the calibration point; noise amplitude unconstrained")]
    Uncalibratable,
    #[error(transparent)]
    Statics(#[from] StaticsError),
    #[error(transparent)]
    Pseudo(#[from] PseudoError),
}

/// Technical voltage-noise model: uncorrelated between electrodes, one
/// shared amplitude.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Voltage noise PSD (V²/Hz) on every electrode.
    pub voltage_psd: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HeatingReport {
    /// Mode frequencies (rad/s), in spectrum order.
    pub frequencies: Vec<f64>,
    /// Total heating rate per mode (quanta/s).
    pub mode_rates: Vec<f64>,
    /// Per-electrode breakdown `[mode][electrode]` (quanta/s).
    pub per_electrode: Vec<Vec<f64>>,
}

impl HeatingReport {
    /// Ratio of two named modes' rates.
    pub fn ratio(&self, mode_a: usize, mode_b: usize) -> f64 {
        self.mode_rates[mode_a] / self.mode_rates[mode_b]
    }
}

/// Heating rates of every mode in `spectrum` given per-electrode per-ion
/// field vectors (V/m per V).
pub fn mode_heating_rates(
    spectrum: &ModeSpectrum,
    fields: &[Vec<[f64; 3]>],
    noise: &NoiseModel,
    species: &IonSpecies,
) -> Result<HeatingReport, HeatingError> {
    let n_modes = spectrum.n_modes();
    let n_ions = spectrum.mode_vectors.first().map_or(0, |v| v.len() / 3);
    for f in fields {
        if f.len() != n_ions {
            return Err(HeatingError::DimensionMismatch { fields: f.len(), modes: n_ions });
        }
    }
    let q = species.charge;
    let prefactor = q * q * noise.voltage_psd / (4.0 * species.mass * REDUCED_PLANCK);
    let mut per_electrode = Vec::with_capacity(n_modes);
    let mut mode_rates = Vec::with_capacity(n_modes);
    for l in 0..n_modes {
        let nu = &spectrum.mode_vectors[l];
        let omega = spectrum.frequencies[l];
        let mut rates_k = Vec::with_capacity(fields.len());
        let mut total = 0.0;
        for field in fields {
            let mut proj = 0.0;
            for (i, e) in field.iter().enumerate() {
                proj += nu[3 * i] * e[0] + nu[3 * i + 1] * e[1] + nu[3 * i + 2] * e[2];
            }
            let rate = prefactor * proj * proj / omega;
            rates_k.push(rate);
            total += rate;
        }
        per_electrode.push(rates_k);
        mode_rates.push(total);
    }
    Ok(HeatingReport { frequencies: spectrum.frequencies.clone(), mode_rates, per_electrode })
}

/// Calibrate the shared voltage PSD so the model reproduces a measured
/// single-ion rate along `axis` at frequency `omega`.
pub fn calibrate_noise_amplitude(
    reference_rate: f64,
    single_ion_fields: &[[f64; 3]],
    omega: f64,
    axis: usize,
    species: &IonSpecies,
) -> Result<NoiseModel, HeatingError> {
    assert!(reference_rate > 0.0);
    let q = species.charge;
    let proj2: f64 = single_ion_fields.iter().map(|e| e[axis] * e[axis]).sum();
    if proj2 <= 0.0 {
        return Err(HeatingError::Uncalibratable);
    }
    let psd = reference_rate * 4.0 * species.mass * REDUCED_PLANCK * omega / (q * q * proj2);
    Ok(NoiseModel { voltage_psd: psd })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HeatingScanRow {
    pub d_um: f64,
    pub gamma_com: f64,
    pub gamma_str: f64,
    pub ratio: f64,
    pub status: String,
}

/// Common/stretch heating rates of the coupled axial pair of a one-ion-per-
/// well radial double well, versus separation, for a given trap geometry's
/// DC electrodes.
pub fn heating_ratio_scan(
    geometry: &SurfaceTrapGeometry,
    species: &IonSpecies,
    d_values: &[f64],
    omega_z: f64,
    height: f64,
    noise: &NoiseModel,
) -> Vec<HeatingScanRow> {
    let ds = d_values.to_vec();
    par_map(ds, move |d| match heating_ratio_point(geometry, species, d, omega_z, height, noise) {
        Ok((gc, gs)) => HeatingScanRow {
            d_um: d * 1e6,
            gamma_com: gc,
            gamma_str: gs,
            ratio: gc / gs,
            status: "ok".into(),
        },
        Err(e) => HeatingScanRow {
            d_um: d * 1e6,
            gamma_com: f64::NAN,
            gamma_str: f64::NAN,
            ratio: f64::NAN,
            status: format!("error: {e}"),
        },
    })
}

/// (Γ_com, Γ_str) of the lowest coupled axial pair at one separation.
pub fn heating_ratio_point(
    geometry: &SurfaceTrapGeometry,
    species: &IonSpecies,
    d: f64,
    omega_z: f64,
    height: f64,
    noise: &NoiseModel,
) -> Result<(f64, f64), HeatingError> {
    let potential = calibrate_double_well(omega_z, 1, d, species, Orientation::Radial)?;
    let config = solve_equilibrium(&potential, species, (1, 1), None)?;
    let modes = normal_modes(&config, &potential)?;
    // trap-frame positions are centered on the RF null plane; place them at
    // the physical height above the electrode plane
    let positions: Vec<[f64; 3]> =
        config.positions.iter().map(|p| [p[0], height + p[1], p[2]]).collect();
    let fields = dc_field_per_volt(geometry, &positions)?;
    let report = mode_heating_rates(&modes, &fields, noise, species)?;
    let (ip, oop) = modes.lowest_axial_pair().ok_or(StaticsError::MissingPair)?;
    Ok((report.mode_rates[ip], report.mode_rates[oop]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::TrapPotential;
    use crate::pseudo::radial_entanglement_surrogate;
    use crate::statics::PairPhase;
    use std::f64::consts::TAU;

    fn ca() -> IonSpecies {
        IonSpecies::ca40()
    }

    /// Hand-built two-ion spectrum: com and stretch along z at ±x wells.
    fn two_ion_pair_spectrum(omega: f64, split: f64) -> ModeSpectrum {
        let s = 0.5f64.sqrt();
        ModeSpectrum {
            frequencies: vec![omega - split / 2.0, omega + split / 2.0],
            mode_vectors: vec![vec![0.0, 0.0, s, 0.0, 0.0, s], vec![0.0, 0.0, s, 0.0, 0.0, -s]],
            axis_label: vec![2, 2],
            pair_phase: vec![PairPhase::InPhase, PairPhase::OutOfPhase],
            pair_index: vec![Some(1), Some(0)],
        }
    }

    #[test]
    fn homogeneous_field_cannot_excite_stretch() {
        let spectrum = two_ion_pair_spectrum(TAU * 740e3, TAU * 5e3);
        let fields = vec![vec![[0.3, -0.1, 2.0], [0.3, -0.1, 2.0]]];
        let noise = NoiseModel { voltage_psd: 1e-12 };
        let report = mode_heating_rates(&spectrum, &fields, &noise, &ca()).unwrap();
        assert!(report.mode_rates[0] > 0.0);
        assert!(
            report.mode_rates[1] < 1e-10 * report.mode_rates[0],
            "stretch rate {:.3e} vs com {:.3e}",
            report.mode_rates[1],
            report.mode_rates[0]
        );
    }

    #[test]
    fn antisymmetric_field_heats_stretch_only() {
        let spectrum = two_ion_pair_spectrum(TAU * 740e3, TAU * 5e3);
        let fields = vec![vec![[0.0, 0.0, 1.4], [0.0, 0.0, -1.4]]];
        let noise = NoiseModel { voltage_psd: 1e-12 };
        let report = mode_heating_rates(&spectrum, &fields, &noise, &ca()).unwrap();
        assert_eq!(report.mode_rates[0], 0.0);
        assert!(report.mode_rates[1] > 0.0);
    }

    #[test]
    fn rate_scalings() {
        let spectrum = two_ion_pair_spectrum(TAU * 740e3, 0.0);
        let fields = vec![vec![[0.0, 0.0, 1.0], [0.0, 0.0, 0.4]]];
        let base =
            mode_heating_rates(&spectrum, &fields, &NoiseModel { voltage_psd: 1e-12 }, &ca())
                .unwrap();
        // linear in PSD
        let psd2 =
            mode_heating_rates(&spectrum, &fields, &NoiseModel { voltage_psd: 2e-12 }, &ca())
                .unwrap();
        assert!((psd2.mode_rates[0] - 2.0 * base.mode_rates[0]).abs() < 1e-12 * base.mode_rates[0]);
        // quadratic in projected field
        let fields2 = vec![vec![[0.0, 0.0, 2.0], [0.0, 0.0, 0.8]]];
        let f2 = mode_heating_rates(&spectrum, &fields2, &NoiseModel { voltage_psd: 1e-12 }, &ca())
            .unwrap();
        assert!((f2.mode_rates[0] - 4.0 * base.mode_rates[0]).abs() < 1e-12 * f2.mode_rates[0]);
        // inverse in omega
        let spectrum2 = two_ion_pair_spectrum(TAU * 1480e3, 0.0);
        let w2 = mode_heating_rates(&spectrum2, &fields, &NoiseModel { voltage_psd: 1e-12 }, &ca())
            .unwrap();
        assert!((w2.mode_rates[0] - base.mode_rates[0] / 2.0).abs() < 1e-12 * base.mode_rates[0]);
    }

    #[test]
    fn com_rate_linear_in_ion_number_for_pointlike_chain() {
        // N-ion chain in a stiff single well, field from a distant
        // electrode: the COM rate grows linearly in N within 1%
        let species = ca();
        let omega = TAU * 450e3;
        let phi = species.mass * omega * omega / species.charge;
        let potential = TrapPotential::harmonic(9.0 * phi, 9.9 * phi, phi);
        // z-asymmetric so the axial field is nonzero at the chain
        let dc = crate::pseudo::DcElectrode {
            x_min: 2000e-6,
            x_max: 4000e-6,
            z_min: 1000e-6,
            z_max: 9000e-6,
            id: "far".into(),
        };
        let noise = NoiseModel { voltage_psd: 1e-12 };
        let mut rates = Vec::new();
        for n in [1usize, 2, 4, 8] {
            let config = solve_equilibrium(&potential, &species, (n, 0), None).unwrap();
            let modes = normal_modes(&config, &potential).unwrap();
            let com = (0..modes.n_modes())
                .find(|&l| modes.axis_label[l] == 2)
                .unwrap();
            let positions: Vec<[f64; 3]> =
                config.positions.iter().map(|p| [p[0], 100e-6 + p[1], p[2]]).collect();
            let fields: Vec<Vec<[f64; 3]>> = vec![positions
                .iter()
                .map(|&r| crate::pseudo::rectangle_field(&dc, r).unwrap())
                .collect()];
            let report = mode_heating_rates(&modes, &fields, &noise, &species).unwrap();
            rates.push((n as f64, report.mode_rates[com]));
        }
        let unit = rates[0].1;
        for &(n, r) in &rates {
            assert!((r - n * unit).abs() / (n * unit) < 0.01, "N = {n}: {r:.3e} vs {unit:.3e}/ion");
        }
    }

    #[test]
    fn calibration_round_trip_and_linear_extrapolation() {
        let species = ca();
        let omega = TAU * 450e3;
        let fields_single = [[0.1, -0.05, 0.8], [0.02, 0.0, 0.5]];
        let noise =
            calibrate_noise_amplitude(120.0, &fields_single, omega, 2, &species).unwrap();
        // round trip: model single-ion rate equals the reference
        let spectrum = ModeSpectrum {
            frequencies: vec![omega],
            mode_vectors: vec![vec![0.0, 0.0, 1.0]],
            axis_label: vec![2],
            pair_phase: vec![PairPhase::None],
            pair_index: vec![None],
        };
        let fields: Vec<Vec<[f64; 3]>> =
            fields_single.iter().map(|&e| vec![e]).collect();
        let report = mode_heating_rates(&spectrum, &fields, &noise, &species).unwrap();
        assert!((report.mode_rates[0] - 120.0).abs() / 120.0 < 1e-12);
        // zero projection is uncalibratable
        assert!(matches!(
            calibrate_noise_amplitude(120.0, &[[1.0, 1.0, 0.0]], omega, 2, &species),
            Err(HeatingError::Uncalibratable)
        ));
    }

    #[test]
    fn degenerate_subspace_heating_is_basis_independent() {
        let species = ca();
        let omega = TAU * 500e3;
        let s = 0.5f64.sqrt();
        let base = ModeSpectrum {
            frequencies: vec![omega, omega],
            mode_vectors: vec![vec![0.0, 0.0, s, 0.0, 0.0, s], vec![0.0, 0.0, s, 0.0, 0.0, -s]],
            axis_label: vec![2, 2],
            pair_phase: vec![PairPhase::InPhase, PairPhase::OutOfPhase],
            pair_index: vec![Some(1), Some(0)],
        };
        let theta: f64 = 0.7345;
        let rot = ModeSpectrum {
            frequencies: vec![omega, omega],
            mode_vectors: vec![
                base.mode_vectors[0]
                    .iter()
                    .zip(&base.mode_vectors[1])
                    .map(|(a, b)| theta.cos() * a + theta.sin() * b)
                    .collect(),
                base.mode_vectors[0]
                    .iter()
                    .zip(&base.mode_vectors[1])
                    .map(|(a, b)| -theta.sin() * a + theta.cos() * b)
                    .collect(),
            ],
            axis_label: vec![2, 2],
            pair_phase: vec![PairPhase::None, PairPhase::None],
            pair_index: vec![None, None],
        };
        let fields = vec![vec![[0.0, 0.1, 1.3], [0.0, -0.2, 0.9]], vec![[0.0, 0.0, 0.4], [0.0, 0.3, 0.7]]];
        let noise = NoiseModel { voltage_psd: 3e-13 };
        let a = mode_heating_rates(&base, &fields, &noise, &species).unwrap();
        let b = mode_heating_rates(&rot, &fields, &noise, &species).unwrap();
        let sum_a: f64 = a.mode_rates.iter().sum();
        let sum_b: f64 = b.mode_rates.iter().sum();
        assert!((sum_a - sum_b).abs() < 1e-12 * sum_a);
    }

    #[test]
    fn total_is_sum_of_per_electrode() {
        let spectrum = two_ion_pair_spectrum(TAU * 740e3, TAU * 5e3);
        let fields = vec![
            vec![[0.0, 0.0, 1.0], [0.0, 0.0, 0.8]],
            vec![[0.0, 0.0, 0.2], [0.0, 0.0, 0.6]],
        ];
        let noise = NoiseModel { voltage_psd: 1e-12 };
        let report = mode_heating_rates(&spectrum, &fields, &noise, &ca()).unwrap();
        for l in 0..2 {
            let s: f64 = report.per_electrode[l].iter().sum();
            assert!((s - report.mode_rates[l]).abs() < 1e-15 * s.max(1e-300));
        }
    }

    #[test]
    fn surrogate_trap_com_stretch_ratio_near_16() {
        let species = ca();
        let (geometry, _) =
            radial_entanglement_surrogate(&species, 29e-6, 80e-6, 70.0, TAU * 19e6).unwrap();
        let noise = NoiseModel { voltage_psd: 1e-12 };
        let (gc, gs) =
            heating_ratio_point(&geometry, &species, 29e-6, TAU * 740e3, 80e-6, &noise).unwrap();
        let ratio = gc / gs;
        assert!(
            (8.0..=32.0).contains(&ratio),
            "com/stretch ratio {ratio:.2} (com {gc:.3e}, str {gs:.3e})"
        );
    }

    #[test]
    fn ratio_grows_as_wells_approach() {
        let species = ca();
        let (geometry, _) =
            radial_entanglement_surrogate(&species, 29e-6, 80e-6, 70.0, TAU * 19e6).unwrap();
        let noise = NoiseModel { voltage_psd: 1e-12 };
        let h = 80e-6;
        let rows = heating_ratio_scan(
            &geometry,
            &species,
            &[h / 10.0, 29e-6, 2.0 * h],
            TAU * 740e3,
            h,
            &noise,
        );
        assert!(rows.iter().all(|r| r.status == "ok"), "{rows:?}");
        assert!(rows[0].ratio > 10.0, "close wells: ratio {:.2}", rows[0].ratio);
        assert!(rows[2].ratio < rows[1].ratio && rows[1].ratio < rows[0].ratio);
        assert!(rows[2].ratio < 8.0, "far wells: ratio {:.2}", rows[2].ratio);
        // the stretch mode stays quieter than a single-well two-ion COM at
        // matched frequency: the latter is the com of a merged pair, whose
        // rate matches the double-well com in the homogeneous-field limit
        assert!(rows[1].gamma_str < rows[1].gamma_com / 4.0);
    }
}
