//! JSON run-configuration schema (version 1).
//!
//! A config file carries the schema version, an optional seed, and exactly
//! the block matching the subcommand being run. Unknown fields are schema
//! violations.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub coupling_scan: Option<CouplingScanCfg>,
    #[serde(default)]
    pub avoided_crossing: Option<AvoidedCrossingCfg>,
    #[serde(default)]
    pub mode_structure: Option<ModeStructureCfg>,
    #[serde(default)]
    pub heating: Option<HeatingCfg>,
    #[serde(default)]
    pub exchange: Option<ExchangeCfg>,
    #[serde(default)]
    pub ms_gate: Option<MsGateCfg>,
    #[serde(default)]
    pub lightshift: Option<LightShiftCfg>,
    #[serde(default)]
    pub pseudo: Option<PseudoCfg>,
    #[serde(default)]
    pub qec: Option<QecCfg>,
}

fn default_convention() -> String {
    "chain-centers".into()
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingScanCfg {
    /// "axial" or "radial".
    pub orientation: String,
    pub n_values: Vec<usize>,
    pub d_um: Vec<f64>,
    pub target_com_khz: f64,
    /// "chain-centers" (measured convention) or "potential".
    #[serde(default = "default_convention")]
    pub separation_convention: String,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AvoidedCrossingCfg {
    pub omega_m_khz: f64,
    pub coupling_khz: f64,
    pub n: usize,
    /// Field → detuning slope in units of the coupling rate per V/m.
    #[serde(default = "one")]
    pub slope_rel: f64,
    pub field_center_v_per_m: f64,
    pub field_min: f64,
    pub field_max: f64,
    pub field_count: usize,
    #[serde(default = "default_probe_count")]
    pub probe_count: usize,
    /// Gaussian line sigma relative to the coupling rate.
    #[serde(default = "default_line_width_rel")]
    pub line_width_rel: f64,
    /// Frequency jitter relative to the coupling rate.
    #[serde(default)]
    pub freq_noise_rel: f64,
    #[serde(default)]
    pub excitation_noise: f64,
}

fn one() -> f64 {
    1.0
}
fn default_probe_count() -> usize {
    361
}
fn default_line_width_rel() -> f64 {
    1.0 / 6.0
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ModeStructureCfg {
    pub orientation: String,
    pub n_per_well: usize,
    pub d_um: Vec<f64>,
    pub target_com_khz: f64,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct HeatingCfg {
    pub d_um: Vec<f64>,
    pub omega_z_khz: f64,
    pub height_um: f64,
    /// Reference single-ion rate (quanta/s) the voltage-noise PSD is
    /// calibrated to.
    pub reference_rate: f64,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExchangeCfg {
    pub delta_f_khz_min: f64,
    pub delta_f_khz_max: f64,
    pub delta_f_count: usize,
    pub t_end_us: f64,
    pub settle_us: f64,
    /// Final detunings (kHz) whose full trajectories are also emitted.
    #[serde(default)]
    pub trace_delta_f_khz: Vec<f64>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MsGateCfg {
    pub omega_c_khz: f64,
    /// Subset of {"red", "blue", "centered"}.
    pub cases: Vec<String>,
    #[serde(default)]
    pub heating_str: f64,
    #[serde(default)]
    pub heating_com: f64,
    #[serde(default)]
    pub dephasing_us: Option<f64>,
    #[serde(default)]
    pub preflight: bool,
    /// Also emit the populations-vs-time curve of the first case.
    #[serde(default)]
    pub emit_populations: bool,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LightShiftCfg {
    pub n_per_well: usize,
    pub p: u32,
    pub omega_khz_min: f64,
    pub omega_khz_max: f64,
    pub omega_count: usize,
    /// Variants: "even", "odd", "odd-echo".
    pub variants: Vec<String>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PseudoCfg {
    pub zeta_min: f64,
    pub zeta_max: f64,
    pub zeta_count: usize,
    /// Synthetic measured (zeta, separation_um) pairs to exercise the
    /// ζ-axis scale-factor fit.
    #[serde(default)]
    pub scale_fit_points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct QecCfg {
    /// "steane-ec", "msi", "universal", "surface-<d>".
    pub protocols: Vec<String>,
    pub layout_d_c: Vec<usize>,
}

/// Parse and validate a config file, reporting schema violations with their
/// JSON path.
pub fn parse_config(text: &str) -> Result<FileConfig, String> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let config: FileConfig =
        serde_path_to_error::deserialize(de).map_err(|e| format!("{}: {}", e.path(), e.inner()))?;
    if config.schema_version != SCHEMA_VERSION {
        return Err(format!(
            "schema_version: expected {SCHEMA_VERSION}, got {}",
            config.schema_version
        ));
    }
    Ok(config)
}
