//! Stabilizer/destabilizer tableau with the Clifford subset used by the
//! module protocols: H, CZ, CNOT, X, Z and computational-basis measurement.

use rand::Rng;

use super::pauli::{Pauli, PauliString};
use super::StabError;

/// Source of fair coin flips for non-deterministic measurements.
pub trait OutcomeSource {
    fn next_bit(&mut self) -> bool;
}

impl<R: rand::RngCore> OutcomeSource for R {
    fn next_bit(&mut self) -> bool {
        self.gen()
    }
}

/// Pins every random measurement branch, cycling through `bits`.
#[derive(Clone, Debug)]
pub struct ForcedOutcomes {
    bits: Vec<bool>,
    cursor: usize,
}

impl ForcedOutcomes {
    pub fn constant(bit: bool) -> Self {
        Self {
            bits: vec![bit],
            cursor: 0,
        }
    }

    pub fn sequence(bits: Vec<bool>) -> Self {
        assert!(!bits.is_empty(), "forced outcome sequence must be non-empty");
        Self { bits, cursor: 0 }
    }
}

impl OutcomeSource for ForcedOutcomes {
    fn next_bit(&mut self) -> bool {
        let b = self.bits[self.cursor % self.bits.len()];
        self.cursor += 1;
        b
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct MeasurementOutcome {
    pub value: u8,
    /// The measured operator was already in the stabilizer group up to sign.
    pub deterministic: bool,
}

impl MeasurementOutcome {
    pub fn bit(self) -> bool {
        self.value == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    destabilizers: Vec<PauliString>,
    stabilizers: Vec<PauliString>,
}

impl StabilizerTableau {
    /// `|0…0>` on `n` qubits.
    pub fn new(n: usize) -> Result<Self, StabError> {
        if n == 0 {
            return Err(StabError::ZeroQubits);
        }
        Ok(Self {
            n,
            destabilizers: (0..n).map(|q| PauliString::single(n, q, Pauli::X)).collect(),
            stabilizers: (0..n).map(|q| PauliString::single(n, q, Pauli::Z)).collect(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn stabilizers(&self) -> &[PauliString] {
        &self.stabilizers
    }

    pub fn destabilizers(&self) -> &[PauliString] {
        &self.destabilizers
    }

    /// Append a fresh qubit in `|0>` and return its index.
    pub fn add_qubit(&mut self) -> usize {
        let q = self.n;
        self.n += 1;
        for row in self.destabilizers.iter_mut().chain(self.stabilizers.iter_mut()) {
            row.push_qubit();
        }
        self.destabilizers.push(PauliString::single(self.n, q, Pauli::X));
        self.stabilizers.push(PauliString::single(self.n, q, Pauli::Z));
        q
    }

    fn check_qubit(&self, q: usize) -> Result<(), StabError> {
        if q >= self.n {
            return Err(StabError::QubitOutOfRange { qubit: q, n: self.n });
        }
        Ok(())
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<(), StabError> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(StabError::SameQubit(a));
        }
        Ok(())
    }

    fn rows_mut(&mut self) -> impl Iterator<Item = &mut PauliString> {
        self.destabilizers.iter_mut().chain(self.stabilizers.iter_mut())
    }

    pub fn apply_h(&mut self, q: usize) -> Result<(), StabError> {
        self.check_qubit(q)?;
        self.rows_mut().for_each(|r| r.conj_h(q));
        Ok(())
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) -> Result<(), StabError> {
        self.check_pair(a, b)?;
        self.rows_mut().for_each(|r| r.conj_cz(a, b));
        Ok(())
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<(), StabError> {
        self.check_pair(control, target)?;
        self.rows_mut().for_each(|r| r.conj_cnot(control, target));
        Ok(())
    }

    /// Apply the Pauli gate `p` (X or Z in the protocols; Y accepted too).
    pub fn apply_pauli(&mut self, q: usize, p: Pauli) -> Result<(), StabError> {
        self.check_qubit(q)?;
        self.rows_mut().for_each(|r| r.conj_pauli(q, p));
        Ok(())
    }

    /// Projective Z measurement of qubit `q`.
    ///
    /// Deterministic outcomes leave the state untouched and do not consume a
    /// coin; random outcomes take exactly one bit from `coins`.
    pub fn measure_z(&mut self, q: usize, coins: &mut impl OutcomeSource) -> Result<MeasurementOutcome, StabError> {
        self.check_qubit(q)?;
        let n = self.n;
        match (0..n).find(|&p| self.stabilizers[p].x_bit(q)) {
            Some(p) => {
                // Random: every other row with X support on q absorbs row p.
                let pivot = self.stabilizers[p].clone();
                for i in 0..n {
                    if i != p && self.stabilizers[i].x_bit(q) {
                        self.stabilizers[i].mul_assign_commuting(&pivot);
                    }
                    if i != p && self.destabilizers[i].x_bit(q) {
                        self.destabilizers[i].mul_assign_unsigned(&pivot);
                    }
                }
                let bit = coins.next_bit();
                self.destabilizers[p] = pivot;
                let mut z = PauliString::single(n, q, Pauli::Z);
                z.set_negative(bit);
                self.stabilizers[p] = z;
                Ok(MeasurementOutcome {
                    value: bit as u8,
                    deterministic: false,
                })
            }
            None => {
                // Deterministic: Z_q is the product of the stabilizers whose
                // paired destabilizer anticommutes with it.
                let mut acc = PauliString::identity(n);
                for i in 0..n {
                    if self.destabilizers[i].x_bit(q) {
                        acc.mul_assign_commuting(&self.stabilizers[i]);
                    }
                }
                debug_assert_eq!(acc.support().collect::<Vec<_>>(), vec![q]);
                Ok(MeasurementOutcome {
                    value: acc.is_negative() as u8,
                    deterministic: true,
                })
            }
        }
    }

    /// Outcome bit of a Z measurement if it is deterministic, without
    /// touching the state.
    pub fn peek_z(&self, q: usize) -> Result<Option<bool>, StabError> {
        self.check_qubit(q)?;
        if self.stabilizers.iter().any(|s| s.x_bit(q)) {
            return Ok(None);
        }
        let mut acc = PauliString::identity(self.n);
        for i in 0..self.n {
            if self.destabilizers[i].x_bit(q) {
                acc.mul_assign_commuting(&self.stabilizers[i]);
            }
        }
        Ok(Some(acc.is_negative()))
    }

    /// Check the tableau invariants: stabilizers commute pairwise,
    /// destabilizer k anticommutes only with stabilizer k, destabilizers
    /// commute pairwise, and the stabilizers are independent.
    pub fn check_invariants(&self) -> Result<(), String> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                if i < j && !self.stabilizers[i].commutes_with(&self.stabilizers[j]) {
                    return Err(format!("stabilizers {i} and {j} anticommute"));
                }
                if i < j && !self.destabilizers[i].commutes_with(&self.destabilizers[j]) {
                    return Err(format!("destabilizers {i} and {j} anticommute"));
                }
                let anti = !self.destabilizers[i].commutes_with(&self.stabilizers[j]);
                if anti != (i == j) {
                    return Err(format!("destabilizer {i} / stabilizer {j} pairing broken"));
                }
            }
        }
        let rank = super::canonical::gf2_rank(&self.stabilizers);
        if rank != n {
            return Err(format!("stabilizer rank {rank} < {n}"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn strings(t: &StabilizerTableau) -> Vec<String> {
        t.stabilizers().iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn new_is_all_zero() {
        assert_eq!(strings(&StabilizerTableau::new(1).unwrap()), ["+Z"]);
        assert_eq!(strings(&StabilizerTableau::new(3).unwrap()), ["+ZII", "+IZI", "+IIZ"]);
        assert_eq!(StabilizerTableau::new(0), Err(StabError::ZeroQubits));
    }

    #[test]
    fn hadamard_prepares_plus() {
        let mut t = StabilizerTableau::new(2).unwrap();
        t.apply_h(0).unwrap();
        t.apply_h(1).unwrap();
        assert_eq!(strings(&t), ["+XI", "+IX"]);
        t.apply_h(0).unwrap();
        assert_eq!(strings(&t), ["+ZI", "+IX"]);
        assert!(matches!(
            t.apply_h(2),
            Err(StabError::QubitOutOfRange { qubit: 2, n: 2 })
        ));
    }

    #[test]
    fn cz_on_plus_pair_gives_cluster() {
        let mut t = StabilizerTableau::new(2).unwrap();
        t.apply_h(0).unwrap();
        t.apply_h(1).unwrap();
        t.apply_cz(0, 1).unwrap();
        assert_eq!(strings(&t), ["+XZ", "+ZX"]);
        t.apply_cz(1, 0).unwrap();
        assert_eq!(strings(&t), ["+XI", "+IX"]);
        assert_eq!(t.apply_cz(1, 1), Err(StabError::SameQubit(1)));
    }

    #[test]
    fn cnot_examples() {
        let mut bell = StabilizerTableau::new(2).unwrap();
        bell.apply_h(0).unwrap();
        bell.apply_cnot(0, 1).unwrap();
        assert_eq!(strings(&bell), ["+XX", "+ZZ"]);

        let mut t = StabilizerTableau::new(2).unwrap();
        t.apply_pauli(0, Pauli::X).unwrap();
        t.apply_cnot(0, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let a = t.measure_z(0, &mut rng).unwrap();
        let b = t.measure_z(1, &mut rng).unwrap();
        assert_eq!((a.value, b.value), (1, 1));
        assert!(a.deterministic && b.deterministic);
    }

    #[test]
    fn pauli_sign_flips() {
        let mut t = StabilizerTableau::new(1).unwrap();
        t.apply_h(0).unwrap();
        t.apply_pauli(0, Pauli::Z).unwrap();
        assert_eq!(strings(&t), ["-X"]);

        let mut t = StabilizerTableau::new(1).unwrap();
        t.apply_pauli(0, Pauli::X).unwrap();
        assert_eq!(strings(&t), ["-Z"]);
    }

    #[test]
    fn measurement_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut zero = StabilizerTableau::new(1).unwrap();
        let out = zero.measure_z(0, &mut rng).unwrap();
        assert_eq!(
            out,
            MeasurementOutcome {
                value: 0,
                deterministic: true
            }
        );

        let mut plus = StabilizerTableau::new(1).unwrap();
        plus.apply_h(0).unwrap();
        let out = plus.measure_z(0, &mut ForcedOutcomes::constant(true)).unwrap();
        assert_eq!(
            out,
            MeasurementOutcome {
                value: 1,
                deterministic: false
            }
        );
        assert_eq!(strings(&plus), ["-Z"]);

        for seed in 0..16 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut bell = StabilizerTableau::new(2).unwrap();
            bell.apply_h(0).unwrap();
            bell.apply_cnot(0, 1).unwrap();
            let a = bell.measure_z(0, &mut rng).unwrap();
            let b = bell.measure_z(1, &mut rng).unwrap();
            assert!(!a.deterministic);
            assert!(b.deterministic);
            assert_eq!(a.value, b.value);
            bell.check_invariants().unwrap();
        }
    }

    #[test]
    fn plus_measurement_frequency_is_fair() {
        let ones: u32 = (0..1000u64)
            .map(|seed| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut t = StabilizerTableau::new(1).unwrap();
                t.apply_h(0).unwrap();
                t.measure_z(0, &mut rng).unwrap().value as u32
            })
            .sum();
        let freq = ones as f64 / 1000.0;
        assert!((freq - 0.5).abs() <= 0.05, "frequency of 1 was {freq}");
    }

    #[test]
    fn added_qubits_start_in_zero() {
        let mut t = StabilizerTableau::new(63).unwrap();
        for _ in 0..3 {
            t.add_qubit();
        }
        assert_eq!(t.num_qubits(), 66);
        t.apply_h(65).unwrap();
        t.apply_cz(0, 65).unwrap();
        t.check_invariants().unwrap();
        assert_eq!(t.peek_z(64).unwrap(), Some(false));
        assert_eq!(t.peek_z(65).unwrap(), None);
    }

    #[test]
    fn random_clifford_sequences_keep_invariants() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut t = StabilizerTableau::new(8).unwrap();
        for _ in 0..1000 {
            let a = rng.gen_range(0..8);
            let mut b = rng.gen_range(0..8);
            if b == a {
                b = (a + 1) % 8;
            }
            match rng.gen_range(0..6) {
                0 => t.apply_h(a).unwrap(),
                1 => t.apply_cz(a, b).unwrap(),
                2 => t.apply_cnot(a, b).unwrap(),
                3 => t.apply_pauli(a, Pauli::X).unwrap(),
                4 => t.apply_pauli(a, Pauli::Z).unwrap(),
                _ => {
                    t.measure_z(a, &mut rng).unwrap();
                }
            }
            t.check_invariants().unwrap();
        }
    }
}
