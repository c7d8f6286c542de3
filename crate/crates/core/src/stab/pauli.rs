//! Signed Pauli strings over `n` qubits, bit-packed into 64-bit words.
//!
//! A string is `(-1)^negative · P_0 ⊗ P_1 ⊗ … ⊗ P_{n-1}` where each `P_q` is
//! encoded by the bit pair `(x_q, z_q)`: `(0,0)=I`, `(1,0)=X`, `(0,1)=Z`,
//! `(1,1)=Y`. `Y` is the Hermitian Pauli, so every encoded string is Hermitian
//! and the only admissible overall signs are ±1.

use std::fmt;
use std::str::FromStr;

use super::StabError;

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

#[inline]
pub(crate) fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    negative: bool,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let words = word_count(n);
        Self {
            n,
            x: vec![0; words],
            z: vec![0; words],
            negative: false,
        }
    }

    /// `+P` acting on qubit `q`, identity elsewhere.
    pub fn single(n: usize, q: usize, p: Pauli) -> Self {
        let mut s = Self::identity(n);
        s.set(q, p);
        s
    }

    pub fn from_paulis(paulis: &[Pauli], negative: bool) -> Self {
        let mut s = Self::identity(paulis.len());
        for (q, &p) in paulis.iter().enumerate() {
            s.set(q, p);
        }
        s.negative = negative;
        s
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn is_negative(&self) -> bool {
        self.negative
    }

    #[inline]
    pub fn set_negative(&mut self, negative: bool) {
        self.negative = negative;
    }

    #[inline]
    pub fn flip_sign(&mut self) {
        self.negative = !self.negative;
    }

    #[inline]
    pub fn x_bit(&self, q: usize) -> bool {
        debug_assert!(q < self.n);
        (self.x[q >> 6] >> (q & 63)) & 1 == 1
    }

    #[inline]
    pub fn z_bit(&self, q: usize) -> bool {
        debug_assert!(q < self.n);
        (self.z[q >> 6] >> (q & 63)) & 1 == 1
    }

    #[inline]
    fn set_x_bit(&mut self, q: usize, v: bool) {
        let mask = 1u64 << (q & 63);
        if v {
            self.x[q >> 6] |= mask;
        } else {
            self.x[q >> 6] &= !mask;
        }
    }

    #[inline]
    fn set_z_bit(&mut self, q: usize, v: bool) {
        let mask = 1u64 << (q & 63);
        if v {
            self.z[q >> 6] |= mask;
        } else {
            self.z[q >> 6] &= !mask;
        }
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x_bit(q), self.z_bit(q))
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        assert!(q < self.n, "qubit {q} out of range for width {}", self.n);
        let (x, z) = p.bits();
        self.set_x_bit(q, x);
        self.set_z_bit(q, z);
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    /// Qubits on which the string acts non-trivially.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&q| self.x_bit(q) || self.z_bit(q))
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// Append one identity qubit.
    pub(crate) fn push_qubit(&mut self) {
        self.n += 1;
        if word_count(self.n) > self.x.len() {
            self.x.push(0);
            self.z.push(0);
        }
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        debug_assert_eq!(self.n, other.n);
        let mut parity = 0u32;
        for w in 0..self.x.len() {
            parity ^= ((self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w])).count_ones() & 1;
        }
        parity == 0
    }

    /// Power of `i` picked up when the unsigned letters of `self` are
    /// multiplied on the right by those of `rhs`, modulo 4.
    fn product_phase(&self, rhs: &PauliString) -> u32 {
        let mut plus = 0u32;
        let mut minus = 0u32;
        for w in 0..self.x.len() {
            let (x1, z1, x2, z2) = (self.x[w], self.z[w], rhs.x[w], rhs.z[w]);
            let (px1, pz1, py1) = (x1 & !z1, z1 & !x1, x1 & z1);
            let (px2, pz2, py2) = (x2 & !z2, z2 & !x2, x2 & z2);
            // XY = iZ, YZ = iX, ZX = iY and the reverse orders give -i.
            plus += ((px1 & py2) | (py1 & pz2) | (pz1 & px2)).count_ones();
            minus += ((px1 & pz2) | (py1 & px2) | (pz1 & py2)).count_ones();
        }
        (plus + 4 * self.x.len() as u32 * 64 - minus) % 4
    }

    /// Replace `self` by `self · rhs`. Both factors must commute, so that the
    /// product is Hermitian and carries a ±1 sign; anything else would leave
    /// the ±1 phase group and is treated as a bug.
    pub fn mul_assign_commuting(&mut self, rhs: &PauliString) {
        let phase = self.product_phase(rhs) + 2 * (self.negative as u32) + 2 * (rhs.negative as u32);
        assert!(
            phase.is_multiple_of(2),
            "product of anticommuting Pauli strings left the ±1 phase group"
        );
        self.negative = phase % 4 == 2;
        self.xor_bits(rhs);
    }

    /// Replace `self` by `self · rhs` up to phase; the sign is only meaningful
    /// when the factors commute. Used for destabilizer rows, whose signs carry
    /// no information.
    pub(crate) fn mul_assign_unsigned(&mut self, rhs: &PauliString) {
        let phase = self.product_phase(rhs) + 2 * (self.negative as u32) + 2 * (rhs.negative as u32);
        self.negative = phase % 4 >= 2;
        self.xor_bits(rhs);
    }

    fn xor_bits(&mut self, rhs: &PauliString) {
        debug_assert_eq!(self.n, rhs.n);
        for (a, b) in self.x.iter_mut().zip(&rhs.x) {
            *a ^= b;
        }
        for (a, b) in self.z.iter_mut().zip(&rhs.z) {
            *a ^= b;
        }
    }

    // Conjugation rules. Each maps P to G P G† for the named gate G.

    pub(crate) fn conj_h(&mut self, q: usize) {
        let (x, z) = (self.x_bit(q), self.z_bit(q));
        if x && z {
            self.negative = !self.negative;
        }
        self.set_x_bit(q, z);
        self.set_z_bit(q, x);
    }

    pub(crate) fn conj_cz(&mut self, a: usize, b: usize) {
        let (xa, za, xb, zb) = (self.x_bit(a), self.z_bit(a), self.x_bit(b), self.z_bit(b));
        if xa && xb && (za ^ zb) {
            self.negative = !self.negative;
        }
        self.set_z_bit(a, za ^ xb);
        self.set_z_bit(b, zb ^ xa);
    }

    pub(crate) fn conj_cnot(&mut self, c: usize, t: usize) {
        let (xc, zc, xt, zt) = (self.x_bit(c), self.z_bit(c), self.x_bit(t), self.z_bit(t));
        if xc && zt && !(xt ^ zc) {
            self.negative = !self.negative;
        }
        self.set_x_bit(t, xt ^ xc);
        self.set_z_bit(c, zc ^ zt);
    }

    /// Conjugation by a Pauli gate: flips the sign iff the row anticommutes.
    pub(crate) fn conj_pauli(&mut self, q: usize, p: Pauli) {
        let anticommutes = match p {
            Pauli::I => false,
            Pauli::X => self.z_bit(q),
            Pauli::Z => self.x_bit(q),
            Pauli::Y => self.x_bit(q) ^ self.z_bit(q),
        };
        if anticommutes {
            self.negative = !self.negative;
        }
    }

    /// Restriction to `qubits`, in the given order. Support outside the list
    /// is dropped, so callers must check it is empty when that matters.
    pub fn select(&self, qubits: &[usize]) -> PauliString {
        let mut out = PauliString::identity(qubits.len());
        for (i, &q) in qubits.iter().enumerate() {
            out.set(i, self.get(q));
        }
        out.negative = self.negative;
        out
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.negative { "-" } else { "+" })?;
        for q in 0..self.n {
            write!(f, "{}", self.get(q).letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = StabError;

    /// Parses `[+|-]` followed by letters from `{I, X, Y, Z}`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (negative, body) = match s.as_bytes().first() {
            Some(b'+') => (false, &s[1..]),
            Some(b'-') => (true, &s[1..]),
            _ => (false, s),
        };
        let paulis = body
            .chars()
            .map(|c| match c {
                'I' | '_' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(StabError::Parse(format!("unexpected Pauli letter {other:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if paulis.is_empty() {
            return Err(StabError::Parse(format!("empty Pauli string {s:?}")));
        }
        Ok(PauliString::from_paulis(&paulis, negative))
    }
}
