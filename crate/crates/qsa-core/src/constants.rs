//! Physical constants and ion species data.
//!
//! Values are CODATA 2018 (Tiesinga et al., Rev. Mod. Phys. 93, 025010) and
//! are fixed at build time.

use serde::{Deserialize, Serialize};

/// Vacuum permittivity ε₀ (F/m).
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;

/// Elementary charge e (C).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Atomic mass unit u (kg).
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;

/// Reduced Planck constant ħ (J·s).
pub const REDUCED_PLANCK: f64 = 1.054_571_817e-34;

/// Coulomb constant e²/(4πε₀) (J·m), for a pair of elementary charges.
pub const COULOMB_E2: f64 =
    ELEMENTARY_CHARGE * ELEMENTARY_CHARGE / (4.0 * std::f64::consts::PI * VACUUM_PERMITTIVITY);

/// Bundle of the constants used throughout the crate.
///
/// Exists so configs and reports can record the values they were computed
/// with; code paths read the [`CODATA_2018`] instance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// ε₀ (F/m)
    pub vacuum_permittivity: f64,
    /// e (C)
    pub elementary_charge: f64,
    /// u (kg)
    pub atomic_mass_unit: f64,
    /// ħ (J·s)
    pub reduced_planck: f64,
}

pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    vacuum_permittivity: VACUUM_PERMITTIVITY,
    elementary_charge: ELEMENTARY_CHARGE,
    atomic_mass_unit: ATOMIC_MASS_UNIT,
    reduced_planck: REDUCED_PLANCK,
};

/// A singly ionized positive ion species.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IonSpecies {
    /// Ion mass (kg). The neutral-atom mass is used; the electron-mass
    /// correction is below the precision relevant here.
    pub mass: f64,
    /// Ion charge (C), +e for everything in this crate.
    pub charge: f64,
    pub label: String,
}

impl IonSpecies {
    pub fn new(mass: f64, charge: f64, label: impl Into<String>) -> Self {
        assert!(mass > 0.0 && charge > 0.0, "ion species must have positive mass and charge");
        Self { mass, charge, label: label.into() }
    }

    /// ⁴⁰Ca⁺ (atomic mass 39.962590863 u).
    pub fn ca40() -> Self {
        Self::new(39.962_590_863 * ATOMIC_MASS_UNIT, ELEMENTARY_CHARGE, "40Ca+")
    }

    /// Length scale l = (e²/(4πε₀ m ω²))^{1/3} of ion spacing at secular
    /// frequency `omega` (rad/s).
    pub fn length_scale(&self, omega: f64) -> f64 {
        (COULOMB_E2 / (self.mass * omega * omega)).cbrt()
    }
}

/// Convert an interaction constant from N/m to eV/m² (the convention used
/// when quoting k_int next to coupling rates).
pub fn newton_per_meter_to_ev_per_m2(k: f64) -> f64 {
    k / ELEMENTARY_CHARGE
}
