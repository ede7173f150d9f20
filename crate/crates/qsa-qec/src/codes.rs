//! Code constructions and resource tables for the well-lattice layout.
//!
//! The surface code with parameters [[d² + (d−1)², 1, d]] is laid out with
//! primal sites at integer points and dual sites at half-integer points.
//! Concatenating every site with the [[4,2,2]] code (one well of four ions
//! per site) lifts each surface stabilizer to a weight-2w operator through
//! the block logicals, adds the per-well weight-4 stabilizers, and hosts a
//! second (dual) surface code on the blocks' second logical qubits, giving
//! [[4(d² + (d−1)²), 2, 2d]].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pauli::{gf2_rank, PauliString};

#[derive(Debug, Error)]
pub enum QecError {
    #[error("unknown protocol: {0}")]
    UnknownProtocol(String),
    #[error("concatenated surface code needs d_c >= 2, got {0}")]
    DistanceTooSmall(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub transversal_gates: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Protocol {
    /// Steane-type error correction on the [[7,1,3]] code.
    SteaneEc713,
    /// Magic-state injection on the [[7,1,3]] code.
    Msi713,
    /// Universal gate set from concatenating [[7,1,3]] with [[15,1,3]].
    UniversalGateSet,
    /// Distance-d_c surface code of [[4,2,2]] blocks.
    Surface422 { d_c: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceRow {
    pub ions_per_well: usize,
    pub registers: usize,
}

/// Minimal ion and register counts per protocol (data qubits only).
pub fn resource_table(protocol: Protocol) -> ResourceRow {
    match protocol {
        Protocol::SteaneEc713 => ResourceRow { ions_per_well: 7, registers: 2 },
        Protocol::Msi713 => ResourceRow { ions_per_well: 7, registers: 2 },
        Protocol::UniversalGateSet => ResourceRow { ions_per_well: 15, registers: 7 },
        Protocol::Surface422 { d_c } => {
            ResourceRow { ions_per_well: 4, registers: d_c * d_c + (d_c - 1) * (d_c - 1) }
        }
    }
}

impl Protocol {
    pub fn parse(name: &str) -> Result<Self, QecError> {
        match name {
            "steane-ec" => Ok(Protocol::SteaneEc713),
            "msi" => Ok(Protocol::Msi713),
            "universal" => Ok(Protocol::UniversalGateSet),
            other => {
                if let Some(d) = other.strip_prefix("surface-") {
                    let d_c: usize =
                        d.parse().map_err(|_| QecError::UnknownProtocol(other.into()))?;
                    return Ok(Protocol::Surface422 { d_c });
                }
                Err(QecError::UnknownProtocol(other.into()))
            }
        }
    }
}

/// Parameters [[4(d_c² + (d_c−1)²), 2, 2 d_c]] of the concatenated surface
/// code.
pub fn concatenated_surface_params(d_c: usize) -> Result<CodeSpec, QecError> {
    if d_c < 2 {
        return Err(QecError::DistanceTooSmall(d_c));
    }
    let sites = d_c * d_c + (d_c - 1) * (d_c - 1);
    Ok(CodeSpec {
        name: format!("[[4,2,2]]-concatenated surface code, d_c = {d_c}"),
        n: 4 * sites,
        k: 2,
        d: 2 * d_c,
        transversal_gates: vec!["CNOT".into()],
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WellRole {
    Data,
    Auxiliary,
}

/// One well of the lattice: grid position in half-step units (primal sites
/// at even coordinates, dual sites at odd) and its four ions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Well {
    /// Doubled lattice coordinates (so half-integers stay integral).
    pub grid: (i64, i64),
    pub ions: usize,
    pub role: WellRole,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StabKind {
    X,
    Z,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stabilizer {
    pub kind: StabKind,
    /// Wells the operator touches.
    pub wells: Vec<usize>,
    pub weight: usize,
    /// Physical-qubit support as a Pauli label (4 chars per well).
    pub label: String,
    #[serde(skip)]
    pub pauli: Option<PauliString>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeLayout {
    pub wells: Vec<Well>,
    /// Nearest-neighbor well pairs (primal-dual contacts).
    pub adjacency: Vec<(usize, usize)>,
    pub stabilizers: Vec<Stabilizer>,
    pub n_qubits: usize,
    pub encoded_qubits: usize,
}

/// [[4,2,2]] block operators on the four ions of well `w` (qubits 4w..4w+3):
/// logical 1: X̄ = X₀X₁, Z̄ = Z₀Z₂; logical 2: X̄ = X₀X₂, Z̄ = Z₀Z₁.
fn block_logical(n: usize, well: usize, logical: usize, kind: StabKind) -> PauliString {
    let mut p = PauliString::identity(n);
    let base = 4 * well;
    let (a, b) = match (logical, kind) {
        (1, StabKind::X) => (0, 1),
        (1, StabKind::Z) => (0, 2),
        (2, StabKind::X) => (0, 2),
        (2, StabKind::Z) => (0, 1),
        _ => unreachable!(),
    };
    match kind {
        StabKind::X => {
            p.set_x(base + a);
            p.set_x(base + b);
        }
        StabKind::Z => {
            p.set_z(base + a);
            p.set_z(base + b);
        }
    }
    p
}

/// Surface-code stabilizer supports on the half-step lattice: returns
/// (X-type supports, Z-type supports) as lists of well indices.
fn surface_supports(d: usize, wells: &[Well]) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let find = |g: (i64, i64)| wells.iter().position(|w| w.grid == g);
    let mut x_stabs = Vec::new();
    // X checks sit between horizontally adjacent primal sites
    for i in 0..(d - 1) {
        for j in 0..d {
            let (cx, cy) = (2 * i as i64 + 1, 2 * j as i64);
            let support: Vec<usize> = [
                (cx - 1, cy),
                (cx + 1, cy),
                (cx, cy - 1),
                (cx, cy + 1),
            ]
            .iter()
            .filter_map(|&g| find(g))
            .collect();
            x_stabs.push(support);
        }
    }
    let mut z_stabs = Vec::new();
    // Z checks sit between vertically adjacent primal sites
    for i in 0..d {
        for j in 0..(d - 1) {
            let (cx, cy) = (2 * i as i64, 2 * j as i64 + 1);
            let support: Vec<usize> = [
                (cx, cy - 1),
                (cx, cy + 1),
                (cx - 1, cy),
                (cx + 1, cy),
            ]
            .iter()
            .filter_map(|&g| find(g))
            .collect();
            z_stabs.push(support);
        }
    }
    (x_stabs, z_stabs)
}

/// Build the full concatenated layout: wells, adjacency, well stabilizers,
/// and both lifted surface codes.
pub fn concatenated_stabilizers(d_c: usize) -> Result<LatticeLayout, QecError> {
    if d_c < 2 {
        return Err(QecError::DistanceTooSmall(d_c));
    }
    let mut wells = Vec::new();
    for i in 0..d_c {
        for j in 0..d_c {
            wells.push(Well { grid: (2 * i as i64, 2 * j as i64), ions: 4, role: WellRole::Data });
        }
    }
    for i in 0..(d_c - 1) {
        for j in 0..(d_c - 1) {
            wells.push(Well {
                grid: (2 * i as i64 + 1, 2 * j as i64 + 1),
                ions: 4,
                role: WellRole::Data,
            });
        }
    }
    let n_wells = wells.len();
    let n = 4 * n_wells;

    let mut adjacency = Vec::new();
    for a in 0..n_wells {
        for b in (a + 1)..n_wells {
            let dx = wells[a].grid.0 - wells[b].grid.0;
            let dy = wells[a].grid.1 - wells[b].grid.1;
            if dx * dx + dy * dy == 2 {
                adjacency.push((a, b));
            }
        }
    }

    let mut stabilizers = Vec::new();
    // per-well [[4,2,2]] stabilizers
    for w in 0..n_wells {
        for kind in [StabKind::X, StabKind::Z] {
            let mut p = PauliString::identity(n);
            for q in 0..4 {
                match kind {
                    StabKind::X => p.set_x(4 * w + q),
                    StabKind::Z => p.set_z(4 * w + q),
                }
            }
            stabilizers.push(Stabilizer {
                kind,
                wells: vec![w],
                weight: p.weight(),
                label: p.label(),
                pauli: Some(p),
            });
        }
    }

    // lifted surface codes: code A on logical 1, its dual partner (code B,
    // X and Z supports exchanged) on logical 2
    let (x_supports, z_supports) = surface_supports(d_c, &wells);
    let lift = |supports: &[Vec<usize>], logical: usize, kind: StabKind,
                    stabs: &mut Vec<Stabilizer>| {
        for support in supports {
            let mut p = PauliString::identity(n);
            for &w in support {
                p.mul_assign(&block_logical(n, w, logical, kind));
            }
            stabs.push(Stabilizer {
                kind,
                wells: support.clone(),
                weight: p.weight(),
                label: p.label(),
                pauli: Some(p),
            });
        }
    };
    lift(&x_supports, 1, StabKind::X, &mut stabilizers);
    lift(&z_supports, 1, StabKind::Z, &mut stabilizers);
    lift(&z_supports, 2, StabKind::X, &mut stabilizers);
    lift(&x_supports, 2, StabKind::Z, &mut stabilizers);

    let ops: Vec<PauliString> =
        stabilizers.iter().map(|s| s.pauli.clone().unwrap()).collect();
    let rank = gf2_rank(&ops);
    Ok(LatticeLayout {
        wells,
        adjacency,
        stabilizers,
        n_qubits: n,
        encoded_qubits: n - rank,
    })
}

impl LatticeLayout {
    /// Verify that every pair of stabilizers commutes.
    pub fn all_commute(&self) -> bool {
        let ops: Vec<&PauliString> =
            self.stabilizers.iter().filter_map(|s| s.pauli.as_ref()).collect();
        for (i, a) in ops.iter().enumerate() {
            for b in ops.iter().skip(i + 1) {
                if !a.commutes_with(b) {
                    return false;
                }
            }
        }
        true
    }

    /// Verify that each stabilizer's wells sit within unit distance of each
    /// other on the lattice (doubled-coordinate distance² ≤ 4).
    pub fn stabilizers_local(&self) -> bool {
        self.stabilizers.iter().all(|s| {
            s.wells.iter().all(|&a| {
                s.wells.iter().all(|&b| {
                    let dx = self.wells[a].grid.0 - self.wells[b].grid.0;
                    let dy = self.wells[a].grid.1 - self.wells[b].grid.1;
                    dx * dx + dy * dy <= 4
                })
            })
        })
    }

    /// DOT graph of the well adjacency.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph wells {\n");
        for (i, w) in self.wells.iter().enumerate() {
            out.push_str(&format!(
                "  w{} [label=\"{} ({},{})\", pos=\"{},{}!\"];\n",
                i,
                i,
                w.grid.0,
                w.grid.1,
                w.grid.0,
                w.grid.1
            ));
        }
        for &(a, b) in &self.adjacency {
            out.push_str(&format!("  w{a} -- w{b};\n"));
        }
        out.push_str("}\n");
        out
    }
}
