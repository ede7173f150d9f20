//! Numerical models of coupled ion chains in double-well potentials.
//!
//! The crate covers the classical side of a double-well trapped-ion system:
//! point-charge coupling formulas, crystal equilibria and normal modes,
//! avoided-crossing spectroscopy synthesis and fitting, surface-trap
//! pseudopotentials in the gapless-plane approximation, electrode-noise
//! heating projections, and the classical phonon-exchange dynamics of two
//! coupled wells.

pub mod constants;
pub mod crossing;
pub mod exchange;
pub mod fit;
pub mod heating;
pub mod ode;
pub mod par;
pub mod pointcharge;
pub mod potential;
pub mod pseudo;
pub mod statics;

pub use constants::{IonSpecies, PhysicalConstants, CODATA_2018};
pub use pointcharge::{CoupledPair, Orientation};
pub use potential::{TrapPotential, WellAxis};
