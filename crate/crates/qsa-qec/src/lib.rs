//! Stabilizer-code constructions mapped onto a lattice of ion-trap wells:
//! resource tables, the [[4,2,2]]-concatenated surface code with its lifted
//! stabilizers, and layout emission for external tooling.

pub mod codes;
pub mod pauli;

pub use codes::{
    concatenated_stabilizers, concatenated_surface_params, resource_table, CodeSpec,
    LatticeLayout, Protocol, QecError, ResourceRow, Stabilizer, Well,
};
pub use pauli::{gf2_rank, PauliString};
