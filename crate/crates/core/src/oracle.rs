//! Dense state-vector simulator used as an independent reference for the
//! tableau. Capped at 12 qubits; qubit `q` is bit `q` of the basis index.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::stab::PauliString;

pub const MAX_QUBITS: usize = 12;
const TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    H,
    X,
    Z,
    Cz,
    Cnot,
}

impl Gate {
    fn arity(self) -> usize {
        match self {
            Gate::H | Gate::X | Gate::Z => 1,
            Gate::Cz | Gate::Cnot => 2,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("state vector limited to {MAX_QUBITS} qubits, requested {0}")]
    TooManyQubits(usize),
    #[error("a state vector needs at least one qubit")]
    ZeroQubits,
    #[error("{gate:?} expects {expected} distinct in-range targets, got {got:?}")]
    BadTargets {
        gate: Gate,
        expected: usize,
        got: Vec<usize>,
    },
    #[error("qubit {qubit} out of range for {n} qubits")]
    OutOfRange { qubit: usize, n: usize },
    #[error("width mismatch: {left} vs {right}")]
    WidthMismatch { left: usize, right: usize },
    #[error("forced outcome {bit} on qubit {qubit} has zero probability")]
    ImpossibleBranch { qubit: usize, bit: u8 },
}

/// How a measurement picks its branch.
pub enum Branch<'a> {
    Sample(&'a mut dyn rand::RngCore),
    Forced(bool),
}

#[derive(Clone, Debug)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0>` on `n` qubits.
    pub fn zero(n: usize) -> Result<Self, OracleError> {
        if n == 0 {
            return Err(OracleError::ZeroQubits);
        }
        if n > MAX_QUBITS {
            return Err(OracleError::TooManyQubits(n));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Tensor a fresh `|0>` qubit onto the state and return its index.
    pub fn add_qubit(&mut self) -> Result<usize, OracleError> {
        if self.n + 1 > MAX_QUBITS {
            return Err(OracleError::TooManyQubits(self.n + 1));
        }
        self.amps.resize(1 << (self.n + 1), Complex64::new(0.0, 0.0));
        self.n += 1;
        Ok(self.n - 1)
    }

    fn check(&self, q: usize) -> Result<(), OracleError> {
        if q >= self.n {
            return Err(OracleError::OutOfRange { qubit: q, n: self.n });
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: Gate, targets: &[usize]) -> Result<(), OracleError> {
        let bad = || OracleError::BadTargets {
            gate,
            expected: gate.arity(),
            got: targets.to_vec(),
        };
        if targets.len() != gate.arity() || targets.iter().any(|&q| q >= self.n) {
            return Err(bad());
        }
        if gate.arity() == 2 && targets[0] == targets[1] {
            return Err(bad());
        }
        match gate {
            Gate::H => {
                let m = 1usize << targets[0];
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        let (a, b) = (self.amps[i], self.amps[i | m]);
                        self.amps[i] = (a + b) * FRAC_1_SQRT_2;
                        self.amps[i | m] = (a - b) * FRAC_1_SQRT_2;
                    }
                }
            }
            Gate::X => {
                let m = 1usize << targets[0];
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        self.amps.swap(i, i | m);
                    }
                }
            }
            Gate::Z => {
                let m = 1usize << targets[0];
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & m != 0 {
                        *a = -*a;
                    }
                }
            }
            Gate::Cz => {
                let m = (1usize << targets[0]) | (1usize << targets[1]);
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & m == m {
                        *a = -*a;
                    }
                }
            }
            Gate::Cnot => {
                let (c, t) = (1usize << targets[0], 1usize << targets[1]);
                for i in 0..self.amps.len() {
                    if i & c != 0 && i & t == 0 {
                        self.amps.swap(i, i | t);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn prob_one(&self, q: usize) -> Result<f64, OracleError> {
        self.check(q)?;
        let m = 1usize << q;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & m != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Born-rule Z measurement; the state is projected and renormalized.
    pub fn measure_z(&mut self, q: usize, branch: Branch<'_>) -> Result<bool, OracleError> {
        let p1 = self.prob_one(q)?;
        let bit = match branch {
            Branch::Sample(rng) => rng.gen::<f64>() < p1,
            Branch::Forced(bit) => bit,
        };
        let p = if bit { p1 } else { 1.0 - p1 };
        if p < TOL {
            return Err(OracleError::ImpossibleBranch {
                qubit: q,
                bit: bit as u8,
            });
        }
        let m = 1usize << q;
        let scale = 1.0 / p.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i & m != 0) == bit {
                *a *= scale;
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        Ok(bit)
    }

    pub fn inner(&self, other: &StateVector) -> Result<Complex64, OracleError> {
        if self.n != other.n {
            return Err(OracleError::WidthMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|<self|other>| = 1` within 1e-9.
    pub fn equal_up_to_phase(&self, other: &StateVector) -> Result<bool, OracleError> {
        Ok((self.inner(other)?.norm() - 1.0).abs() <= TOL)
    }

    /// `P|self>` for a signed Pauli string.
    pub fn apply_pauli_string(&self, p: &PauliString) -> Result<StateVector, OracleError> {
        if p.len() != self.n {
            return Err(OracleError::WidthMismatch {
                left: self.n,
                right: p.len(),
            });
        }
        let (mut xm, mut zm, mut ys) = (0usize, 0usize, 0u32);
        for q in 0..self.n {
            if p.x_bit(q) {
                xm |= 1 << q;
            }
            if p.z_bit(q) {
                zm |= 1 << q;
            }
            if p.x_bit(q) && p.z_bit(q) {
                ys += 1;
            }
        }
        // Y = iXZ, so P = ±i^{#Y} X^x Z^z with Z acting first.
        let mut global = Complex64::i().powu(ys);
        if p.is_negative() {
            global = -global;
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (b, a) in self.amps.iter().enumerate() {
            let sign = if (b & zm).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out[b ^ xm] = *a * global * sign;
        }
        Ok(StateVector { n: self.n, amps: out })
    }

    /// `g|self> = |self>` within 1e-9 (componentwise).
    pub fn stabilizer_check(&self, g: &PauliString) -> Result<bool, OracleError> {
        let image = self.apply_pauli_string(g)?;
        Ok(image.amps.iter().zip(&self.amps).all(|(a, b)| (a - b).norm() <= TOL))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: Complex64, re: f64, im: f64) -> bool {
        (a - Complex64::new(re, im)).norm() < 1e-12
    }

    #[test]
    fn gate_examples() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply_gate(Gate::H, &[0]).unwrap();
        assert!(close(s.amps[0], FRAC_1_SQRT_2, 0.0) && close(s.amps[1], FRAC_1_SQRT_2, 0.0));

        let mut s = StateVector::zero(2).unwrap();
        s.apply_gate(Gate::X, &[0]).unwrap();
        s.apply_gate(Gate::X, &[1]).unwrap();
        s.apply_gate(Gate::Cz, &[0, 1]).unwrap();
        assert!(close(s.amps[3], -1.0, 0.0));

        let mut s = StateVector::zero(2).unwrap();
        s.apply_gate(Gate::H, &[0]).unwrap();
        s.apply_gate(Gate::H, &[1]).unwrap();
        s.apply_gate(Gate::Cz, &[0, 1]).unwrap();
        for (i, want) in [0.5, 0.5, 0.5, -0.5].into_iter().enumerate() {
            assert!(close(s.amps[i], want, 0.0));
        }
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn target_validation() {
        let mut s = StateVector::zero(2).unwrap();
        assert!(s.apply_gate(Gate::Cz, &[1, 1]).is_err());
        assert!(s.apply_gate(Gate::H, &[2]).is_err());
        assert!(s.apply_gate(Gate::H, &[0, 1]).is_err());
        assert_eq!(StateVector::zero(13).unwrap_err(), OracleError::TooManyQubits(13));
        let mut full = StateVector::zero(12).unwrap();
        assert!(full.add_qubit().is_err());
    }

    #[test]
    fn measurement_examples() {
        let mut one = StateVector::zero(1).unwrap();
        one.apply_gate(Gate::X, &[0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(one.measure_z(0, Branch::Sample(&mut rng)).unwrap());
        assert!(matches!(
            one.measure_z(0, Branch::Forced(false)),
            Err(OracleError::ImpossibleBranch { .. })
        ));

        let mut plus = StateVector::zero(1).unwrap();
        plus.apply_gate(Gate::H, &[0]).unwrap();
        assert!((plus.prob_one(0).unwrap() - 0.5).abs() < 1e-15);
        plus.measure_z(0, Branch::Forced(true)).unwrap();
        assert!((plus.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phase_equivalence() {
        let mut s = StateVector::zero(2).unwrap();
        s.apply_gate(Gate::H, &[0]).unwrap();
        s.apply_gate(Gate::Cnot, &[0, 1]).unwrap();
        let mut t = s.clone();
        let phase = Complex64::from_polar(1.0, std::f64::consts::PI / 3.0);
        t.amps.iter_mut().for_each(|a| *a *= phase);
        assert!(s.equal_up_to_phase(&t).unwrap());

        let zero = StateVector::zero(1).unwrap();
        let mut one = zero.clone();
        one.apply_gate(Gate::X, &[0]).unwrap();
        assert!(!zero.equal_up_to_phase(&one).unwrap());
        assert!(zero.equal_up_to_phase(&s).is_err());
    }

    #[test]
    fn stabilizer_check_examples() {
        let zero = StateVector::zero(1).unwrap();
        assert!(zero.stabilizer_check(&"+Z".parse().unwrap()).unwrap());
        assert!(!zero.stabilizer_check(&"+X".parse().unwrap()).unwrap());
        assert!(!zero.stabilizer_check(&"-Z".parse().unwrap()).unwrap());

        // Path 0-1-2 built directly from |+>^3 and two CZs.
        let mut path = StateVector::zero(3).unwrap();
        (0..3).for_each(|q| path.apply_gate(Gate::H, &[q]).unwrap());
        path.apply_gate(Gate::Cz, &[0, 1]).unwrap();
        path.apply_gate(Gate::Cz, &[1, 2]).unwrap();
        for g in ["+XZI", "+ZXZ", "+IZX"] {
            assert!(path.stabilizer_check(&g.parse().unwrap()).unwrap(), "{g}");
        }
        // X on the centre with Z on both ends, written with the centre first.
        let mut relabelled = StateVector::zero(3).unwrap();
        (0..3).for_each(|q| relabelled.apply_gate(Gate::H, &[q]).unwrap());
        relabelled.apply_gate(Gate::Cz, &[0, 1]).unwrap();
        relabelled.apply_gate(Gate::Cz, &[0, 2]).unwrap();
        assert!(relabelled.stabilizer_check(&"+XZZ".parse().unwrap()).unwrap());
        // Y-containing products are checked with the Hermitian Y.
        assert!(path.stabilizer_check(&"+YYZ".parse().unwrap()).unwrap());
    }

    #[test]
    fn cz_module_ancilla_is_uniform_for_control_one() {
        // x=|1>, y=|+>, ancilla |+>: CZ(x,a) H(a) CZ(a,y) H(a) then measure a.
        let mut s = StateVector::zero(3).unwrap();
        s.apply_gate(Gate::X, &[0]).unwrap();
        s.apply_gate(Gate::H, &[1]).unwrap();
        s.apply_gate(Gate::H, &[2]).unwrap();
        s.apply_gate(Gate::Cz, &[0, 2]).unwrap();
        s.apply_gate(Gate::H, &[2]).unwrap();
        s.apply_gate(Gate::Cz, &[2, 1]).unwrap();
        s.apply_gate(Gate::H, &[2]).unwrap();
        assert!((s.prob_one(2).unwrap() - 0.5).abs() < 1e-12);
    }
}
