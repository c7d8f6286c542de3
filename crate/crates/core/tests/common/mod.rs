//! Random Clifford circuits replayed on both the tableau and the oracle.
#![allow(dead_code)]

use photon_cluster::oracle::{Branch, Gate, StateVector};
use photon_cluster::protocol::PhotonicRegister;
use photon_cluster::stab::{ForcedOutcomes, Pauli, StabilizerTableau};
use proptest::prelude::*;
use rand::Rng;

#[derive(Clone, Copy, Debug)]
pub enum Op {
    H(usize),
    Cz(usize, usize),
    Cnot(usize, usize),
    X(usize),
    Z(usize),
    /// Z measurement; the bit is used only when the outcome is random.
    Measure(usize, bool),
}

fn make_op(kind: u8, a: usize, b: usize, bit: bool, n: usize) -> Op {
    let b = if a == b { (a + 1) % n } else { b };
    let kind = if n == 1 && matches!(kind, 1 | 2) { 0 } else { kind };
    match kind {
        0 => Op::H(a),
        1 => Op::Cz(a, b),
        2 => Op::Cnot(a, b),
        3 => Op::X(a),
        4 => Op::Z(a),
        _ => Op::Measure(a, bit),
    }
}

/// Circuits on `n` qubits; measurements only when `measure` is set.
pub fn ops(n: usize, max_len: usize, measure: bool) -> impl Strategy<Value = Vec<Op>> {
    let kinds = if measure { 6u8 } else { 5 };
    prop::collection::vec((0..kinds, 0..n, 0..n, any::<bool>()), 0..=max_len)
        .prop_map(move |v| v.into_iter().map(|(k, a, b, bit)| make_op(k, a, b, bit, n)).collect())
}

pub fn random_ops(rng: &mut impl Rng, n: usize, len: usize, measure: bool) -> Vec<Op> {
    let kinds = if measure { 6 } else { 5 };
    (0..len)
        .map(|_| {
            make_op(
                rng.gen_range(0..kinds),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen(),
                n,
            )
        })
        .collect()
}

/// Apply `op` to the tableau; returns the measured bit if any.
pub fn apply_tableau(t: &mut StabilizerTableau, op: Op) -> Option<bool> {
    match op {
        Op::H(a) => t.apply_h(a).unwrap(),
        Op::Cz(a, b) => t.apply_cz(a, b).unwrap(),
        Op::Cnot(a, b) => t.apply_cnot(a, b).unwrap(),
        Op::X(a) => t.apply_pauli(a, Pauli::X).unwrap(),
        Op::Z(a) => t.apply_pauli(a, Pauli::Z).unwrap(),
        Op::Measure(a, bit) => return Some(t.measure_z(a, &mut ForcedOutcomes::constant(bit)).unwrap().bit()),
    }
    None
}

/// Apply `op` to the oracle, following the tableau's measured bit.
pub fn apply_sv(sv: &mut StateVector, op: Op, measured: Option<bool>) {
    match op {
        Op::H(a) => sv.apply_gate(Gate::H, &[a]).unwrap(),
        Op::Cz(a, b) => sv.apply_gate(Gate::Cz, &[a, b]).unwrap(),
        Op::Cnot(a, b) => sv.apply_gate(Gate::Cnot, &[a, b]).unwrap(),
        Op::X(a) => sv.apply_gate(Gate::X, &[a]).unwrap(),
        Op::Z(a) => sv.apply_gate(Gate::Z, &[a]).unwrap(),
        Op::Measure(a, _) => {
            sv.measure_z(a, Branch::Forced(measured.expect("tableau measured")))
                .unwrap();
        }
    }
}

pub fn tableau_from(n: usize, ops: &[Op]) -> StabilizerTableau {
    let mut t = StabilizerTableau::new(n).unwrap();
    for &op in ops {
        apply_tableau(&mut t, op);
    }
    t
}

pub fn photons_from(n: usize, ops: &[Op]) -> PhotonicRegister {
    PhotonicRegister::from_tableau(tableau_from(n, ops))
}

/// Two distinct qubits out of `n`.
pub fn pair(n: usize) -> impl Strategy<Value = (usize, usize)> {
    (0..n, 1..n).prop_map(move |(x, d)| (x, (x + d) % n))
}
