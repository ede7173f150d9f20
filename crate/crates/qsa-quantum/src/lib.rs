//! Quantum simulation of double-well entangling operations: sideband and
//! exchange pulses, the bichromatic gate on two closely spaced modes with
//! heating and dephasing, and the geometric light-shift gate with spin-echo
//! refocusing.

pub mod analysis;
pub mod evolve;
pub mod hilbert;
pub mod lightshift;
pub mod ms;
pub mod ops;
pub mod sequence;

pub use hilbert::{HilbertSpec, ModeSpec, QuantumState};
