//! Point-charge model of well-to-well coupling.
//!
//! Two ion chains in separate wells interact as oscillating dipoles. With
//! both chains treated as point charges Q = n·q separated by d, the
//! interaction constant is k_int = κ Q²/(4πε₀ d³) and the common/stretch
//! pair frequencies are √(ω_z² ± k_int/(n m)). The coupling rate Ω_c is the
//! splitting of that pair.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::{newton_per_meter_to_ev_per_m2, IonSpecies, VACUUM_PERMITTIVITY};

/// Orientation of the double-well separation relative to the chains' axial
/// mode of oscillation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    /// Separation parallel to the oscillation axis; dipole factor κ = −2.
    Axial,
    /// Separation perpendicular to the oscillation axis; κ = +1.
    Radial,
}

impl Orientation {
    /// Dipole-dipole geometry factor κ.
    pub fn kappa(self) -> f64 {
        match self {
            Orientation::Axial => -2.0,
            Orientation::Radial => 1.0,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum CouplingError {
    #[error("not a double well: requires alpha < 0 and beta > 0 (alpha = {alpha:.3e}, beta = {beta:.3e})")]
    NoDoubleWell { alpha: f64, beta: f64 },
    #[error("overcoupled: stretch radicand non-positive (k_int = {k_int:.3e} N/m >= n m omega^2 = {limit:.3e})")]
    Overcoupled { k_int: f64, limit: f64 },
    #[error("splitting {coupling_rate:.3e} rad/s must be below 2 omega_z = {limit:.3e}")]
    SplittingTooLarge { coupling_rate: f64, limit: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

/// Lowest coupled axial mode pair of a double well.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoupledPair {
    /// In-phase (common) mode frequency (rad/s).
    pub omega_com: f64,
    /// Out-of-phase (stretch) mode frequency (rad/s).
    pub omega_str: f64,
    /// Coupling rate Ω_c = |ω_com − ω_str| (rad/s).
    pub coupling_rate: f64,
    /// Interaction constant (N/m), reported as a magnitude; the axial κ sign
    /// is folded into [`Orientation`].
    pub k_int: f64,
}

impl CoupledPair {
    pub fn new(omega_com: f64, omega_str: f64, k_int: f64) -> Self {
        assert!(omega_com > 0.0 && omega_str > 0.0);
        Self { omega_com, omega_str, coupling_rate: (omega_com - omega_str).abs(), k_int }
    }

    /// k_int in the eV/m² convention.
    pub fn k_int_ev_per_m2(&self) -> f64 {
        newton_per_meter_to_ev_per_m2(self.k_int)
    }
}

/// Separation d = √(−24 α/β) of a symmetric double well with quadratic
/// coefficient `alpha` (V/m²) and quartic coefficient `beta` (V/m⁴).
pub fn well_separation(alpha: f64, beta: f64) -> Result<f64, CouplingError> {
    if alpha >= 0.0 || beta <= 0.0 {
        return Err(CouplingError::NoDoubleWell { alpha, beta });
    }
    Ok((-24.0 * alpha / beta).sqrt())
}

/// Local quadratic coefficient α_w = −2α of each well of a double well.
pub fn local_well_curvature(alpha: f64) -> f64 {
    -2.0 * alpha
}

/// Point-charge coupling rate Ω_c = |κ| n q² / (4π ε₀ m ω_z d³) (rad/s)
/// between two chains of `n` ions each.
///
/// Valid for small coupling, |k_int| ≪ n m ω_z²; use
/// [`point_charge_validity`] to check.
pub fn point_charge_coupling(
    n: usize,
    species: &IonSpecies,
    omega_z: f64,
    d: f64,
    orientation: Orientation,
) -> Result<f64, CouplingError> {
    if n == 0 {
        return Err(CouplingError::InvalidArgument("n must be >= 1"));
    }
    if omega_z <= 0.0 {
        return Err(CouplingError::InvalidArgument("omega_z must be positive"));
    }
    if d <= 0.0 {
        return Err(CouplingError::InvalidArgument("d must be positive"));
    }
    let q = species.charge;
    Ok(orientation.kappa().abs() * n as f64 * q * q
        / (4.0 * PI * VACUUM_PERMITTIVITY * species.mass * omega_z * d * d * d))
}

/// Point-charge interaction constant |k_int| = |κ| (n q)² / (4π ε₀ d³) (N/m).
pub fn point_charge_interaction_constant(
    n: usize,
    species: &IonSpecies,
    d: f64,
    orientation: Orientation,
) -> f64 {
    let big_q = n as f64 * species.charge;
    orientation.kappa().abs() * big_q * big_q / (4.0 * PI * VACUUM_PERMITTIVITY * d * d * d)
}

/// Ratio |k_int| / (n m ω_z²); the point-charge expansion assumes this is
/// small. Callers can warn when it approaches one.
pub fn point_charge_validity(
    n: usize,
    species: &IonSpecies,
    omega_z: f64,
    d: f64,
    orientation: Orientation,
) -> f64 {
    point_charge_interaction_constant(n, species, d, orientation)
        / (n as f64 * species.mass * omega_z * omega_z)
}

/// Exact pair frequencies (ω_com, ω_str) = √(ω_z² ± k_int/(n m)) for an
/// interaction-constant magnitude `k_int` ≥ 0.
///
/// The '+' branch is labelled common; for axial coupling (κ < 0) the
/// physical common mode is the lower of the two, which callers account for
/// via [`Orientation`].
pub fn exact_pair_frequencies(
    k_int: f64,
    n: usize,
    species: &IonSpecies,
    omega_z: f64,
) -> Result<(f64, f64), CouplingError> {
    if n == 0 {
        return Err(CouplingError::InvalidArgument("n must be >= 1"));
    }
    let shift = k_int / (n as f64 * species.mass);
    let com2 = omega_z * omega_z + shift;
    let str2 = omega_z * omega_z - shift;
    if str2 <= 0.0 || com2 <= 0.0 {
        return Err(CouplingError::Overcoupled {
            k_int,
            limit: n as f64 * species.mass * omega_z * omega_z,
        });
    }
    Ok((com2.sqrt(), str2.sqrt()))
}

/// Invert the pair splitting: k_int = ½ n m Ω_c √(4ω_z² − Ω_c²).
///
/// Exact inverse of the [`exact_pair_frequencies`] splitting for
/// Ω_c < 2 ω_z.
pub fn interaction_constant_from_splitting(
    coupling_rate: f64,
    n: usize,
    species: &IonSpecies,
    omega_z: f64,
) -> Result<f64, CouplingError> {
    if n == 0 {
        return Err(CouplingError::InvalidArgument("n must be >= 1"));
    }
    if coupling_rate < 0.0 {
        return Err(CouplingError::InvalidArgument("coupling_rate must be non-negative"));
    }
    if coupling_rate >= 2.0 * omega_z {
        return Err(CouplingError::SplittingTooLarge {
            coupling_rate,
            limit: 2.0 * omega_z,
        });
    }
    let radicand = 4.0 * omega_z * omega_z - coupling_rate * coupling_rate;
    Ok(0.5 * n as f64 * species.mass * coupling_rate * radicand.sqrt())
}
