//! Polynomial trap potentials for single- and double-well configurations.
//!
//! The double well lies along either z (axial coupling, chains parallel to
//! the separation) or x (radial coupling, chains perpendicular to it). In
//! both cases ion chains align with z. Potentials are in volts; multiply by
//! the ion charge for energy.

use serde::{Deserialize, Serialize};

use crate::constants::IonSpecies;
use crate::pointcharge::{well_separation, CouplingError};

/// Axis of the double-well separation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WellAxis {
    /// Double well along z; chains couple axially.
    Z,
    /// Double well along x; chains couple radially.
    X,
}

impl WellAxis {
    pub fn index(self) -> usize {
        match self {
            WellAxis::X => 0,
            WellAxis::Z => 2,
        }
    }
}

/// Polynomial trap potential (V) evaluated at positions in meters.
///
/// Along the double-well axis: ½ α u² + β u⁴/4! − E_bias·u. Perpendicular
/// axes carry harmonic curvatures, and the chain axis (z) can carry an
/// optional quartic γ z⁴/4! used to even out ion spacings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrapPotential {
    pub axis: WellAxis,
    /// Quadratic coefficient along the double-well axis (V/m²); negative for
    /// a double well.
    pub alpha: f64,
    /// Quartic coefficient along the double-well axis (V/m⁴).
    pub beta: f64,
    /// Harmonic curvatures (V/m²) on the two axes perpendicular to the
    /// double-well axis, ordered by Cartesian index. For `axis == Z` these
    /// are (φ_x, φ_y); for `axis == X` they are (φ_y, φ_z).
    pub phi_perp: [f64; 2],
    /// Optional quartic along the chain axis z (V/m⁴); only meaningful for
    /// `axis == X`, where z is not the double-well axis.
    pub gamma: f64,
    /// Homogeneous bias field along the double-well axis (V/m).
    pub bias_field: f64,
}

impl TrapPotential {
    /// Axial double well: ½αz² + βz⁴/4! + ½φ_x x² + ½φ_y y².
    pub fn axial(alpha: f64, beta: f64, phi_x: f64, phi_y: f64) -> Self {
        Self { axis: WellAxis::Z, alpha, beta, phi_perp: [phi_x, phi_y], gamma: 0.0, bias_field: 0.0 }
    }

    /// Radial double well: ½αx² + βx⁴/4! + ½φ_y y² + ½φ_z z².
    pub fn radial(alpha: f64, beta: f64, phi_y: f64, phi_z: f64) -> Self {
        Self { axis: WellAxis::X, alpha, beta, phi_perp: [phi_y, phi_z], gamma: 0.0, bias_field: 0.0 }
    }

    /// Single harmonic well with curvatures (φ_x, φ_y, φ_z); the chain axis
    /// z is the "double well" axis with β = 0.
    pub fn harmonic(phi_x: f64, phi_y: f64, phi_z: f64) -> Self {
        Self { axis: WellAxis::Z, alpha: phi_z, beta: 0.0, phi_perp: [phi_x, phi_y], gamma: 0.0, bias_field: 0.0 }
    }

    pub fn with_bias(mut self, bias_field: f64) -> Self {
        self.bias_field = bias_field;
        self
    }

    pub fn with_chain_quartic(mut self, gamma: f64) -> Self {
        assert!(
            self.axis == WellAxis::X || gamma == 0.0,
            "chain quartic only applies to radial double wells"
        );
        self.gamma = gamma;
        self
    }

    pub fn is_double_well(&self) -> bool {
        self.alpha < 0.0 && self.beta > 0.0
    }

    /// Separation √(−24α/β) of the two wells.
    pub fn separation(&self) -> Result<f64, CouplingError> {
        well_separation(self.alpha, self.beta)
    }

    /// Quadratic coefficient (V/m²) along Cartesian axis `k` at the origin.
    pub fn curvature(&self, k: usize) -> f64 {
        let dw = self.axis.index();
        if k == dw {
            self.alpha
        } else if self.axis == WellAxis::Z {
            self.phi_perp[k] // k in {0,1}
        } else {
            self.phi_perp[k - 1] // k in {1,2}
        }
    }

    /// Quartic coefficient (V/m⁴) along Cartesian axis `k`.
    pub fn quartic(&self, k: usize) -> f64 {
        let dw = self.axis.index();
        if k == dw {
            self.beta
        } else if k == 2 {
            self.gamma
        } else {
            0.0
        }
    }

    /// Potential (V) at a point.
    pub fn value(&self, r: [f64; 3]) -> f64 {
        let mut v = 0.0;
        for k in 0..3 {
            let u = r[k];
            v += 0.5 * self.curvature(k) * u * u + self.quartic(k) * u.powi(4) / 24.0;
        }
        v - self.bias_field * r[self.axis.index()]
    }

    /// Gradient of the potential (V/m).
    pub fn gradient(&self, r: [f64; 3]) -> [f64; 3] {
        let mut g = [0.0; 3];
        for k in 0..3 {
            let u = r[k];
            g[k] = self.curvature(k) * u + self.quartic(k) * u * u * u / 6.0;
        }
        g[self.axis.index()] -= self.bias_field;
        g
    }

    /// Diagonal of the Hessian (V/m²); the polynomial potential has no cross
    /// terms.
    pub fn hessian_diag(&self, r: [f64; 3]) -> [f64; 3] {
        let mut h = [0.0; 3];
        for k in 0..3 {
            let u = r[k];
            h[k] = self.curvature(k) + 0.5 * self.quartic(k) * u * u;
        }
        h
    }

    /// Secular frequency (rad/s) of a single ion at the bottom of one well,
    /// from the local curvature α_w = −2α.
    pub fn single_ion_well_frequency(&self, species: &IonSpecies) -> Result<f64, CouplingError> {
        if !self.is_double_well() {
            return Err(CouplingError::NoDoubleWell { alpha: self.alpha, beta: self.beta });
        }
        Ok((species.charge * (-2.0 * self.alpha) / species.mass).sqrt())
    }

    /// Build an axial double well whose single-ion well frequency is
    /// `omega` (rad/s) at separation `d`, with perpendicular curvatures
    /// `phi_perp_rel` times the well curvature.
    pub fn axial_from_frequency(
        species: &IonSpecies,
        omega: f64,
        d: f64,
        phi_perp_rel: f64,
    ) -> Self {
        let alpha_w = species.mass * omega * omega / species.charge;
        let alpha = -0.5 * alpha_w;
        let beta = -24.0 * alpha / (d * d);
        Self::axial(alpha, beta, phi_perp_rel * alpha_w, phi_perp_rel * alpha_w * 1.11)
    }

    /// Radial analogue of [`TrapPotential::axial_from_frequency`]: the chain
    /// axis z carries curvature for `omega_z`, the double well along x has
    /// single-ion frequency `omega_x`.
    pub fn radial_from_frequencies(
        species: &IonSpecies,
        omega_x: f64,
        omega_y: f64,
        omega_z: f64,
        d: f64,
    ) -> Self {
        let to_phi = |w: f64| species.mass * w * w / species.charge;
        let alpha = -0.5 * to_phi(omega_x);
        let beta = -24.0 * alpha / (d * d);
        Self::radial(alpha, beta, to_phi(omega_y), to_phi(omega_z))
    }
}
