//! Binary-symplectic Pauli strings and GF(2) rank computation.
//!
//! A Pauli string on n qubits is stored as two bit vectors (X half, Z half);
//! phases are irrelevant for commutation and rank checks, so they are not
//! tracked.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliString {
    pub n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
}

fn blocks(n: usize) -> usize {
    n.div_ceil(64)
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self { n, x: vec![0; blocks(n)], z: vec![0; blocks(n)] }
    }

    pub fn set_x(&mut self, qubit: usize) {
        assert!(qubit < self.n);
        self.x[qubit / 64] ^= 1 << (qubit % 64);
    }

    pub fn set_z(&mut self, qubit: usize) {
        assert!(qubit < self.n);
        self.z[qubit / 64] ^= 1 << (qubit % 64);
    }

    pub fn x_bit(&self, qubit: usize) -> bool {
        self.x[qubit / 64] >> (qubit % 64) & 1 == 1
    }

    pub fn z_bit(&self, qubit: usize) -> bool {
        self.z[qubit / 64] >> (qubit % 64) & 1 == 1
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        (0..self.n).filter(|&q| self.x_bit(q) || self.z_bit(q)).count()
    }

    /// Symplectic product: 0 when the operators commute, 1 otherwise.
    pub fn symplectic_product(&self, other: &Self) -> u8 {
        assert_eq!(self.n, other.n);
        let mut acc = 0u32;
        for b in 0..self.x.len() {
            acc ^= (self.x[b] & other.z[b]).count_ones() & 1;
            acc ^= (self.z[b] & other.x[b]).count_ones() & 1;
        }
        acc as u8
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.symplectic_product(other) == 0
    }

    /// Multiply in place (phaseless): bitwise XOR of both halves.
    pub fn mul_assign(&mut self, other: &Self) {
        assert_eq!(self.n, other.n);
        for b in 0..self.x.len() {
            self.x[b] ^= other.x[b];
            self.z[b] ^= other.z[b];
        }
    }

    fn symplectic_row(&self) -> Vec<u64> {
        let mut row = self.x.clone();
        row.extend_from_slice(&self.z);
        row
    }

    /// Readable label, e.g. "X.ZY" (dot is identity).
    pub fn label(&self) -> String {
        (0..self.n)
            .map(|q| match (self.x_bit(q), self.z_bit(q)) {
                (false, false) => '.',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            })
            .collect()
    }
}

/// Rank over GF(2) of the symplectic rows of `ops`.
pub fn gf2_rank(ops: &[PauliString]) -> usize {
    if ops.is_empty() {
        return 0;
    }
    let width = ops[0].symplectic_row().len();
    let mut rows: Vec<Vec<u64>> = ops.iter().map(|p| p.symplectic_row()).collect();
    let mut rank = 0;
    for col in 0..(width * 64) {
        let (blk, bit) = (col / 64, col % 64);
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][blk] >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r != rank && rows[r][blk] >> bit & 1 == 1 {
                let (head, tail) = rows.split_at_mut(rank.max(r));
                let (a, b) = if r < rank { (&mut head[r], &tail[0]) } else { (&mut tail[0], &head[rank]) };
                for w in 0..a.len() {
                    a[w] ^= b[w];
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_label(s: &str) -> PauliString {
        let mut p = PauliString::identity(s.len());
        for (q, c) in s.chars().enumerate() {
            match c {
                'X' => p.set_x(q),
                'Z' => p.set_z(q),
                'Y' => {
                    p.set_x(q);
                    p.set_z(q);
                }
                '.' | 'I' => {}
                _ => panic!("bad pauli char {c}"),
            }
        }
        p
    }

    #[test]
    fn commutation_basics() {
        let x = from_label("X...");
        let z = from_label("Z...");
        let zz = from_label("ZZ..");
        let xx = from_label("XX..");
        assert!(!x.commutes_with(&z));
        assert!(xx.commutes_with(&zz));
        assert!(x.commutes_with(&from_label(".Z..")));
        assert_eq!(from_label("Y...").symplectic_product(&x), 1);
    }

    #[test]
    fn weight_and_label_round_trip() {
        let p = from_label("X.ZY");
        assert_eq!(p.weight(), 3);
        assert_eq!(p.label(), "X.ZY");
    }

    #[test]
    fn rank_of_steane_stabilizers_is_six() {
        // [[7,1,3]] Steane code: 6 independent stabilizers, k = 7 − 6 = 1
        let stabs: Vec<PauliString> = [
            "XXXX...",
            "XX..XX.",
            "X.X.X.X",
            "ZZZZ...",
            "ZZ..ZZ.",
            "Z.Z.Z.Z",
        ]
        .iter()
        .map(|s| from_label(s))
        .collect();
        for a in &stabs {
            for b in &stabs {
                assert!(a.commutes_with(b));
            }
        }
        assert_eq!(gf2_rank(&stabs), 6);
        // adding a product of existing rows does not raise the rank
        let mut extra = stabs[0].clone();
        extra.mul_assign(&stabs[1]);
        let mut with_extra = stabs.clone();
        with_extra.push(extra);
        assert_eq!(gf2_rank(&with_extra), 6);
    }

    #[test]
    fn rank_spans_beyond_64_qubits() {
        let n = 130;
        let ops: Vec<PauliString> = (0..n)
            .map(|q| {
                let mut p = PauliString::identity(n);
                p.set_x(q);
                if q + 1 < n {
                    p.set_x(q + 1);
                }
                p
            })
            .collect();
        // chain of XX..: rank n (the last row is a single X)
        assert_eq!(gf2_rank(&ops), n);
    }
}
