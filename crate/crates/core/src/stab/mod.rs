//! Stabilizer-formalism core: Pauli strings, the tableau simulator and
//! canonical group comparison.

mod canonical;
mod pauli;
mod tableau;

pub use canonical::{gf2_rank, stabilizer_group_equals, Generators, StabilizerGroup};
pub use pauli::{Pauli, PauliString};
pub use tableau::{ForcedOutcomes, MeasurementOutcome, OutcomeSource, StabilizerTableau};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StabError {
    #[error("a tableau needs at least one qubit")]
    ZeroQubits,
    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("two-qubit gate needs distinct qubits, got {0} twice")]
    SameQubit(usize),
    #[error("width mismatch: {left} vs {right} qubits")]
    WidthMismatch { left: usize, right: usize },
    #[error("generators {0} and {1} anticommute")]
    NonCommuting(usize, usize),
    #[error("generator set contains -I")]
    MinusIdentity,
    #[error("subsystem of {kept} qubits is entangled with the rest ({independent} local generators)")]
    Entangled { kept: usize, independent: usize },
    #[error("{0}")]
    Parse(String),
}
