//! Subcommand implementations: each takes its config block and produces an
//! artifact set plus a flag for per-point numerical failures.

use std::f64::consts::TAU;

use qsa_core::constants::IonSpecies;
use qsa_core::crossing::{
    fit_avoided_crossing, synth_crossing_spectrum, SynthCrossingConfig,
};
use qsa_core::exchange::{detuning_scan, fit_exchange_curve, integrate_exchange, ExchangeConfig};
use qsa_core::heating::{calibrate_noise_amplitude, heating_ratio_scan};
use qsa_core::pointcharge::{interaction_constant_from_splitting, Orientation};
use qsa_core::pseudo::{
    dc_field_per_volt, find_rf_nulls, fit_zeta_scale_factor, radial_entanglement_surrogate,
    separation_vs_ratio, SearchWindow, SurfaceTrapGeometry,
};
use qsa_core::statics::{
    calibrate_double_well, coupling_scan, mode_splitting_scan, normal_modes, solve_equilibrium,
    SeparationConvention,
};
use qsa_quantum::lightshift::{
    fidelity_scan_vs_omega, transversal_gate_scenario, CancellationParity,
};
use qsa_quantum::ms::{ms_gate_fidelity, MsCase, MsGateConfig};
use qsa_quantum::sequence::{exchange_entanglement_sequence, ExchangeSequenceConfig};
use qsa_qec::codes::{concatenated_stabilizers, concatenated_surface_params, resource_table, Protocol};

use crate::config::*;
use crate::output::{ArtifactSet, Csv, CsvCell};

pub struct CommandOutcome {
    pub artifacts: ArtifactSet,
    pub had_point_failures: bool,
}

pub fn parse_orientation(s: &str) -> Result<Orientation, String> {
    match s {
        "axial" => Ok(Orientation::Axial),
        "radial" => Ok(Orientation::Radial),
        other => Err(format!("orientation: expected \"axial\" or \"radial\", got \"{other}\"")),
    }
}

pub fn run_coupling_scan(cfg: &CouplingScanCfg) -> Result<CommandOutcome, String> {
    let orientation = parse_orientation(&cfg.orientation)?;
    let convention = match cfg.separation_convention.as_str() {
        "chain-centers" => SeparationConvention::ChainCenters,
        "potential" => SeparationConvention::PotentialParameter,
        other => return Err(format!("separation_convention: unknown \"{other}\"")),
    };
    let species = IonSpecies::ca40();
    let d_m: Vec<f64> = cfg.d_um.iter().map(|d| d * 1e-6).collect();
    let rows = coupling_scan(
        &cfg.n_values,
        &d_m,
        TAU * cfg.target_com_khz * 1e3,
        &species,
        orientation,
        convention,
    );
    let mut csv = Csv::new(
        &["n", "d_um", "omega_com_Hz", "omega_str_Hz", "coupling_Hz", "k_int_eV_per_m2", "pointcharge_Hz", "d_pot_um", "status"],
        &["count", "um", "Hz", "Hz", "Hz", "eV/m^2", "Hz", "um", "text"],
    );
    let mut failures = false;
    for r in &rows {
        failures |= r.status != "ok";
        csv.row(&[
            CsvCell::Int(r.n as i64),
            CsvCell::Float(r.d_um),
            CsvCell::Float(r.omega_com_hz),
            CsvCell::Float(r.omega_str_hz),
            CsvCell::Float(r.coupling_hz),
            CsvCell::Float(r.k_int_ev_per_m2),
            CsvCell::Float(r.pointcharge_hz),
            CsvCell::Float(r.d_pot_um),
            CsvCell::Text(r.status.clone()),
        ]);
    }
    let mut artifacts = ArtifactSet::default();
    artifacts.add("coupling_scan.csv", csv.into_string());
    artifacts.add_hints("coupling_scan", "n", "coupling_Hz", "well-to-well coupling vs ion number");
    Ok(CommandOutcome { artifacts, had_point_failures: failures })
}

pub fn run_avoided_crossing(cfg: &AvoidedCrossingCfg, seed: u64) -> Result<CommandOutcome, String> {
    let species = IonSpecies::ca40();
    let omega_m = TAU * cfg.omega_m_khz * 1e3;
    let rate = TAU * cfg.coupling_khz * 1e3;
    let k_int = interaction_constant_from_splitting(rate, cfg.n, &species, omega_m)
        .map_err(|e| e.to_string())?;
    let fields: Vec<f64> = (0..cfg.field_count)
        .map(|i| {
            cfg.field_min + (cfg.field_max - cfg.field_min) * i as f64 / (cfg.field_count - 1) as f64
        })
        .collect();
    let span = 12.0 * rate;
    let synth = SynthCrossingConfig {
        omega_m,
        k_int,
        n: cfg.n,
        slope: cfg.slope_rel * rate,
        field_center: cfg.field_center_v_per_m,
        fields,
        probes: SynthCrossingConfig::probe_grid(omega_m, span, cfg.probe_count),
        line_width: cfg.line_width_rel * rate,
        freq_noise_sd: cfg.freq_noise_rel * rate,
        excitation_noise_sd: cfg.excitation_noise,
        seed,
    };
    let rows = synth_crossing_spectrum(&synth, &species).map_err(|e| e.to_string())?;
    let fit = fit_avoided_crossing(&rows, synth.line_width).map_err(|e| e.to_string())?;

    let mut csv = Csv::new(
        &["field_V_per_m", "detuning_Hz", "excitation"],
        &["V/m", "Hz", "arb"],
    );
    for r in &rows {
        csv.row(&[
            CsvCell::Float(r.field_v_per_m),
            CsvCell::Float(r.detuning_hz),
            CsvCell::Float(r.excitation),
        ]);
    }
    let mut artifacts = ArtifactSet::default();
    artifacts.add("avoided_crossing_spectrum.csv", csv.into_string());
    artifacts.add_hints(
        "avoided_crossing_spectrum",
        "field_V_per_m",
        "detuning_Hz",
        "synthetic sideband excitation map",
    );
    artifacts.add_json(
        "avoided_crossing_fit.json",
        &serde_json::json!({
            "a": fit.a,
            "b": fit.b,
            "c": fit.c,
            "d_center": fit.d_center,
            "omega_c_Hz": fit.omega_c / TAU,
            "ci95_Hz": fit.ci95 / TAU,
            "true_omega_c_Hz": rate / TAU,
        }),
    );
    Ok(CommandOutcome { artifacts, had_point_failures: false })
}

pub fn run_mode_structure(cfg: &ModeStructureCfg) -> Result<CommandOutcome, String> {
    let orientation = parse_orientation(&cfg.orientation)?;
    let species = IonSpecies::ca40();
    let target = TAU * cfg.target_com_khz * 1e3;
    let d_m: Vec<f64> = cfg.d_um.iter().map(|d| d * 1e-6).collect();

    // per-mode table at the first separation
    let mut artifacts = ArtifactSet::default();
    let mut failures = false;
    if let Some(&d0) = d_m.first() {
        let built = calibrate_double_well(target, cfg.n_per_well, d0, &species, orientation)
            .and_then(|p| {
                let config = solve_equilibrium(&p, &species, (cfg.n_per_well, cfg.n_per_well), None)?;
                let modes = normal_modes(&config, &p)?;
                Ok((config, modes))
            });
        match built {
            Ok((config, modes)) => {
                let mut csv = Csv::new(
                    &["mode", "freq_Hz", "axis", "pair_phase", "pair_index"],
                    &["index", "Hz", "xyz", "text", "index"],
                );
                for l in 0..modes.n_modes() {
                    csv.row(&[
                        CsvCell::Int(l as i64),
                        CsvCell::Float(modes.frequencies[l] / TAU),
                        CsvCell::Text(["x", "y", "z"][modes.axis_label[l]].into()),
                        CsvCell::Text(format!("{:?}", modes.pair_phase[l])),
                        CsvCell::Int(modes.pair_index[l].map(|p| p as i64).unwrap_or(-1)),
                    ]);
                }
                artifacts.add("mode_table.csv", csv.into_string());
                let mut pos = Csv::new(&["ion", "x_um", "y_um", "z_um", "well"], &["index", "um", "um", "um", "1|2"]);
                for (i, p) in config.positions.iter().enumerate() {
                    pos.row(&[
                        CsvCell::Int(i as i64),
                        CsvCell::Float(p[0] * 1e6),
                        CsvCell::Float(p[1] * 1e6),
                        CsvCell::Float(p[2] * 1e6),
                        CsvCell::Int(config.well_assignment[i] as i64),
                    ]);
                }
                artifacts.add("equilibrium_positions.csv", pos.into_string());
            }
            Err(e) => {
                failures = true;
                artifacts.add_json("mode_table_error.json", &serde_json::json!({"error": e.to_string()}));
            }
        }
    }

    let rows = mode_splitting_scan(cfg.n_per_well, &d_m, target, &species, orientation);
    let mut csv = Csv::new(
        &["d_um", "pair_rank", "mean_freq_Hz", "splitting_Hz", "status"],
        &["um", "index", "Hz", "Hz", "text"],
    );
    for r in &rows {
        failures |= r.status != "ok";
        csv.row(&[
            CsvCell::Float(r.d_um),
            CsvCell::Int(r.pair_rank as i64),
            CsvCell::Float(r.mean_freq_hz),
            CsvCell::Float(r.splitting_hz),
            CsvCell::Text(r.status.clone()),
        ]);
    }
    artifacts.add("mode_splitting.csv", csv.into_string());
    artifacts.add_hints("mode_splitting", "d_um", "splitting_Hz", "pair splitting vs separation");
    Ok(CommandOutcome { artifacts, had_point_failures: failures })
}

pub fn run_heating(cfg: &HeatingCfg) -> Result<CommandOutcome, String> {
    let species = IonSpecies::ca40();
    let omega_z = TAU * cfg.omega_z_khz * 1e3;
    let height = cfg.height_um * 1e-6;
    let (geometry, _) =
        radial_entanglement_surrogate(&species, 29e-6, height, 70.0, TAU * 19e6)
            .map_err(|e| e.to_string())?;
    // calibrate the PSD to the reference single-ion rate at the first well
    let single_pos = [[-14.5e-6, height, 0.0]];
    let fields = dc_field_per_volt(&geometry, &single_pos).map_err(|e| e.to_string())?;
    let per_electrode: Vec<[f64; 3]> = fields.iter().map(|f| f[0]).collect();
    let noise = calibrate_noise_amplitude(cfg.reference_rate, &per_electrode, omega_z, 2, &species)
        .map_err(|e| e.to_string())?;

    let d_m: Vec<f64> = cfg.d_um.iter().map(|d| d * 1e-6).collect();
    let rows = heating_ratio_scan(&geometry, &species, &d_m, omega_z, height, &noise);
    let mut csv = Csv::new(
        &["d_um", "gamma_com", "gamma_str", "ratio", "status"],
        &["um", "quanta/s", "quanta/s", "ratio", "text"],
    );
    let mut failures = false;
    for r in &rows {
        failures |= r.status != "ok";
        csv.row(&[
            CsvCell::Float(r.d_um),
            CsvCell::Float(r.gamma_com),
            CsvCell::Float(r.gamma_str),
            CsvCell::Float(r.ratio),
            CsvCell::Text(r.status.clone()),
        ]);
    }
    let mut artifacts = ArtifactSet::default();
    artifacts.add("heating_ratio.csv", csv.into_string());
    artifacts.add_hints("heating_ratio", "d_um", "ratio", "common/stretch heating ratio vs separation");
    artifacts.add_json(
        "noise_model.json",
        &serde_json::json!({ "voltage_psd_V2_per_Hz": noise.voltage_psd, "reference_rate": cfg.reference_rate }),
    );
    Ok(CommandOutcome { artifacts, had_point_failures: failures })
}

pub fn run_exchange(cfg: &ExchangeCfg) -> Result<CommandOutcome, String> {
    let deltas: Vec<f64> = (0..cfg.delta_f_count)
        .map(|i| {
            (cfg.delta_f_khz_min
                + (cfg.delta_f_khz_max - cfg.delta_f_khz_min) * i as f64
                    / (cfg.delta_f_count - 1).max(1) as f64)
                * 1e3
        })
        .collect();
    let rows = detuning_scan(&deltas, cfg.t_end_us * 1e-6, cfg.settle_us * 1e-6);
    let mut csv = Csv::new(
        &["delta_f_kHz", "contrast", "max_occ2", "status"],
        &["kHz", "occupation", "occupation", "text"],
    );
    let mut failures = false;
    for r in &rows {
        failures |= r.status != "ok";
        csv.row(&[
            CsvCell::Float(r.delta_f_khz),
            CsvCell::Float(r.contrast),
            CsvCell::Float(r.max_occ2),
            CsvCell::Text(r.status.clone()),
        ]);
    }
    let mut artifacts = ArtifactSet::default();
    artifacts.add("exchange_detuning_scan.csv", csv.into_string());
    artifacts.add_hints("exchange_detuning_scan", "delta_f_kHz", "contrast", "phonon-exchange contrast vs final detuning");

    for &df_khz in &cfg.trace_delta_f_khz {
        let config = ExchangeConfig::reference_with_final_detuning(df_khz * 1e3);
        match integrate_exchange(&config, cfg.t_end_us * 1e-6, 1e-6) {
            Ok(traj) => {
                let mut tcsv = Csv::new(
                    &["t_us", "y1", "y2", "occ1", "occ2"],
                    &["us", "amplitude", "amplitude", "occupation", "occupation"],
                );
                for k in 0..traj.t.len() {
                    tcsv.row(&[
                        CsvCell::Float(traj.t[k] * 1e6),
                        CsvCell::Float(traj.y1[k]),
                        CsvCell::Float(traj.y2[k]),
                        CsvCell::Float(traj.occ1[k]),
                        CsvCell::Float(traj.occ2[k]),
                    ]);
                }
                let fit = fit_exchange_curve(&traj.t, &traj.occ2, Some(cfg.settle_us * 1e-6));
                artifacts.add(format!("exchange_trace_{df_khz:+.1}kHz.csv"), tcsv.into_string());
                if let Ok(f) = fit {
                    artifacts.add_json(
                        format!("exchange_fit_{df_khz:+.1}kHz.json"),
                        &serde_json::json!({
                            "omega_c_Hz": f.omega_c / TAU,
                            "n1_0": f.n1_0,
                            "n2_0": f.n2_0,
                            "phi": f.phi,
                            "tau_d_s": f.tau_d,
                        }),
                    );
                }
            }
            Err(_) => failures = true,
        }
    }
    Ok(CommandOutcome { artifacts, had_point_failures: failures })
}

pub fn parse_ms_case(s: &str) -> Result<MsCase, String> {
    match s {
        "red" => Ok(MsCase::RedOfBoth),
        "blue" => Ok(MsCase::BlueOfBoth),
        "centered" => Ok(MsCase::Centered),
        other => Err(format!("ms case: expected red|blue|centered, got \"{other}\"")),
    }
}

pub fn run_ms_gate(cfg: &MsGateCfg) -> Result<CommandOutcome, String> {
    let omega_c = TAU * cfg.omega_c_khz * 1e3;
    let mut artifacts = ArtifactSet::default();
    let mut reports = Vec::new();
    let mut csv = Csv::new(
        &["case", "gate_time_us", "omega_sb_Hz", "fidelity", "infidelity", "qubit_purity", "convergence_shift"],
        &["text", "us", "Hz", "prob", "prob", "prob", "prob"],
    );
    for case_name in &cfg.cases {
        let case = parse_ms_case(case_name)?;
        let mut config = MsGateConfig::for_case(case, omega_c)
            .with_heating(cfg.heating_str, cfg.heating_com);
        if let Some(tau_us) = cfg.dephasing_us {
            config = config.with_dephasing(tau_us * 1e-6);
        }
        let result = ms_gate_fidelity(&config, cfg.preflight).map_err(|e| e.to_string())?;
        csv.row(&[
            CsvCell::Text(case_name.clone()),
            CsvCell::Float(config.gate_time * 1e6),
            CsvCell::Float(config.omega_sb / TAU),
            CsvCell::Float(result.fidelity),
            CsvCell::Float(result.infidelity),
            CsvCell::Float(result.qubit_purity),
            CsvCell::Float(result.convergence_shift.unwrap_or(f64::NAN)),
        ]);
        reports.push(serde_json::json!({
            "case": case_name,
            "fidelity": result.fidelity,
            "infidelity": result.infidelity,
            "qubit_purity": result.qubit_purity,
            "convergence_shift": result.convergence_shift,
        }));
    }
    artifacts.add("ms_gate.csv", csv.into_string());
    artifacts.add_json("ms_gate.json", &reports);
    Ok(CommandOutcome { artifacts, had_point_failures: false })
}

pub fn run_lightshift(cfg: &LightShiftCfg) -> Result<CommandOutcome, String> {
    let species = IonSpecies::ca40();
    let scenario =
        transversal_gate_scenario(&species, cfg.n_per_well).map_err(|e| e.to_string())?;
    let omegas: Vec<f64> = (0..cfg.omega_count)
        .map(|i| {
            TAU * 1e3
                * (cfg.omega_khz_min
                    + (cfg.omega_khz_max - cfg.omega_khz_min) * i as f64
                        / (cfg.omega_count - 1).max(1) as f64)
        })
        .collect();
    let echo_set: Vec<usize> = (cfg.n_per_well / 2..cfg.n_per_well)
        .chain(cfg.n_per_well + cfg.n_per_well / 2..2 * cfg.n_per_well)
        .collect();
    let mut csv = Csv::new(&["omega_Hz", "fidelity", "variant"], &["Hz", "prob", "text"]);
    for variant in &cfg.variants {
        let (parity, echo): (CancellationParity, Vec<usize>) = match variant.as_str() {
            "even" => (CancellationParity::Even, vec![]),
            "odd" => (CancellationParity::Odd, vec![]),
            "odd-echo" => (CancellationParity::Odd, echo_set.clone()),
            other => return Err(format!("lightshift variant: unknown \"{other}\"")),
        };
        let rows = fidelity_scan_vs_omega(&scenario, parity, cfg.p, &echo, &omegas, variant)
            .map_err(|e| e.to_string())?;
        for r in &rows {
            csv.row(&[
                CsvCell::Float(r.omega_hz),
                CsvCell::Float(r.fidelity),
                CsvCell::Text(r.variant.clone()),
            ]);
        }
    }
    let mut artifacts = ArtifactSet::default();
    artifacts.add("lightshift_scan.csv", csv.into_string());
    artifacts.add_hints("lightshift_scan", "omega_Hz", "fidelity", "transversal-gate fidelity vs drive amplitude");
    artifacts.add_json(
        "lightshift_scenario.json",
        &serde_json::json!({
            "omega_c_Hz": scenario.omega_c() / TAU,
            "gate_time_us": scenario.gate_time() * 1e6,
            "nn_spacing_um": scenario.nn_spacing * 1e6,
        }),
    );
    Ok(CommandOutcome { artifacts, had_point_failures: false })
}

pub fn run_pseudo(cfg: &PseudoCfg) -> Result<CommandOutcome, String> {
    let species = IonSpecies::ca40();
    let geometry = SurfaceTrapGeometry::rf_transport_trap();
    let window = SearchWindow { x_min: -250e-6, x_max: 250e-6, y_min: 30e-6, y_max: 400e-6 };
    let zetas: Vec<f64> = (0..cfg.zeta_count)
        .map(|i| {
            cfg.zeta_min + (cfg.zeta_max - cfg.zeta_min) * i as f64 / (cfg.zeta_count - 1).max(1) as f64
        })
        .collect();
    let rows = separation_vs_ratio(&geometry, &species, &window, &zetas);
    let mut csv = Csv::new(
        &["zeta", "separation_um", "height_um", "omega_x_Hz", "merged", "status"],
        &["ratio", "um", "um", "Hz", "bool", "text"],
    );
    let mut failures = false;
    for r in &rows {
        failures |= r.status != "ok";
        csv.row(&[
            CsvCell::Float(r.zeta),
            CsvCell::Float(r.separation_um),
            CsvCell::Float(r.height_um),
            CsvCell::Float(r.omega_x_hz),
            CsvCell::Bool(r.merged),
            CsvCell::Text(r.status.clone()),
        ]);
    }
    let mut artifacts = ArtifactSet::default();
    artifacts.add("pseudo_zeta_scan.csv", csv.into_string());
    artifacts.add_hints("pseudo_zeta_scan", "zeta", "separation_um", "double-well separation vs RF ratio");

    if !cfg.scale_fit_points.is_empty() {
        let measured: Vec<(f64, f64)> =
            cfg.scale_fit_points.iter().map(|&(z, s_um)| (z, s_um * 1e-6)).collect();
        let s = fit_zeta_scale_factor(&geometry, &species, &window, &measured);
        artifacts.add_json("pseudo_scale_fit.json", &serde_json::json!({ "scale_factor": s }));
    }
    let unity = find_rf_nulls(&geometry.clone().with_zeta(1.0), &species, &window)
        .map_err(|e| e.to_string())?;
    artifacts.add_json(
        "pseudo_unity_ratio.json",
        &serde_json::json!({
            "separation_um": unity.separation.map(|s| s * 1e6),
            "height_um": unity.minima[0].y * 1e6,
            "omega_x_Hz": unity.minima[0].omega_x / TAU,
            "merged": unity.merged,
        }),
    );
    Ok(CommandOutcome { artifacts, had_point_failures: failures })
}

pub fn run_qec(cfg: &QecCfg) -> Result<CommandOutcome, String> {
    let mut artifacts = ArtifactSet::default();
    let mut csv = Csv::new(
        &["protocol", "ions_per_well", "registers"],
        &["text", "count", "count"],
    );
    let mut reports = Vec::new();
    for name in &cfg.protocols {
        let protocol = Protocol::parse(name).map_err(|e| e.to_string())?;
        let row = resource_table(protocol);
        csv.row(&[
            CsvCell::Text(name.clone()),
            CsvCell::Int(row.ions_per_well as i64),
            CsvCell::Int(row.registers as i64),
        ]);
        reports.push(serde_json::json!({
            "protocol": name,
            "ions_per_well": row.ions_per_well,
            "registers": row.registers,
        }));
    }
    artifacts.add("qec_resources.csv", csv.into_string());
    artifacts.add_json("qec_resources.json", &reports);

    for &d_c in &cfg.layout_d_c {
        let params = concatenated_surface_params(d_c).map_err(|e| e.to_string())?;
        let layout = concatenated_stabilizers(d_c).map_err(|e| e.to_string())?;
        artifacts.add_json(
            format!("qec_layout_d{d_c}.json"),
            &serde_json::json!({
                "code": { "n": params.n, "k": params.k, "d": params.d, "name": params.name },
                "encoded_qubits": layout.encoded_qubits,
                "all_commute": layout.all_commute(),
                "local": layout.stabilizers_local(),
                "wells": layout.wells,
                "adjacency": layout.adjacency,
                "stabilizers": layout.stabilizers.iter().map(|s| serde_json::json!({
                    "kind": format!("{:?}", s.kind),
                    "weight": s.weight,
                    "wells": s.wells,
                    "label": s.label,
                })).collect::<Vec<_>>(),
            }),
        );
        artifacts.add(format!("qec_layout_d{d_c}.dot"), layout.to_dot());
    }
    Ok(CommandOutcome { artifacts, had_point_failures: false })
}

/// Appendix-style exchange-entanglement sequence report (used by repro-all).
pub fn run_sequence_report() -> Result<serde_json::Value, String> {
    let (_, result) =
        exchange_entanglement_sequence(&ExchangeSequenceConfig::default()).map_err(|e| e.to_string())?;
    Ok(serde_json::json!({
        "bell_fidelity": result.bell_fidelity,
        "parity_visibility": result.analysis.visibility,
        "p_ss": result.analysis.p_ss,
        "p_dd": result.analysis.p_dd,
    }))
}
