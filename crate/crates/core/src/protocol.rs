//! Ancilla-mediated two-photon modules.
//!
//! A module is a cavity whose atom is the ancilla. Both module types share
//! the same primitives (prepare the atom in `|+>`, let a photon interact via
//! CZ, rotate the atom with H, read it out in Z) and differ only in the order
//! of those steps:
//!
//! ```text
//! CZ module:     init, interact(x), H, interact(y), H, readout   -> Z^a on x
//! parity module: init, interact(x), interact(y), H, readout
//! ```
//!
//! The CZ module acts as `CZ(x, y)` once `Z^a` is applied to the first photon.
//! That correction commutes with every later CZ, so it may be recorded in a
//! [`PauliFrame`] and applied once at the end.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stab::{MeasurementOutcome, OutcomeSource, Pauli, StabError, StabilizerTableau};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProtocolError {
    #[error("qubit {0} is not a photon")]
    NotAPhoton(usize),
    #[error("module needs two distinct photons, got {0} twice")]
    SamePhoton(usize),
    #[error("ancilla {0} was already read out")]
    AncillaConsumed(usize),
    #[error("module program expected {expected:?}, got {got:?}")]
    OutOfOrder { expected: Option<Step>, got: Step },
    #[error(transparent)]
    Stab(#[from] StabError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QubitRole {
    Photon,
    Ancilla { consumed: bool },
}

/// Tableau plus the role of every qubit. Photons come first; ancillas are
/// appended as modules fire and are never removed.
#[derive(Clone, Debug)]
pub struct PhotonicRegister {
    tableau: StabilizerTableau,
    roles: Vec<QubitRole>,
}

impl PhotonicRegister {
    /// `photons` qubits in `|0>`.
    pub fn new(photons: usize) -> Result<Self, ProtocolError> {
        let tableau = StabilizerTableau::new(photons)?;
        Ok(Self {
            tableau,
            roles: vec![QubitRole::Photon; photons],
        })
    }

    /// Treat every qubit of an existing state as a photon.
    pub fn from_tableau(tableau: StabilizerTableau) -> Self {
        let roles = vec![QubitRole::Photon; tableau.num_qubits()];
        Self { tableau, roles }
    }

    pub fn tableau(&self) -> &StabilizerTableau {
        &self.tableau
    }

    pub fn tableau_mut(&mut self) -> &mut StabilizerTableau {
        &mut self.tableau
    }

    pub fn into_tableau(self) -> StabilizerTableau {
        self.tableau
    }

    pub fn role(&self, q: usize) -> Option<QubitRole> {
        self.roles.get(q).copied()
    }

    pub fn photons(&self) -> Vec<usize> {
        (0..self.roles.len())
            .filter(|&q| self.roles[q] == QubitRole::Photon)
            .collect()
    }

    pub fn ancillas(&self) -> Vec<usize> {
        (0..self.roles.len())
            .filter(|&q| self.roles[q] != QubitRole::Photon)
            .collect()
    }

    pub fn check_photon(&self, q: usize) -> Result<(), ProtocolError> {
        match self.roles.get(q) {
            Some(QubitRole::Photon) => Ok(()),
            _ => Err(ProtocolError::NotAPhoton(q)),
        }
    }

    fn allocate_ancilla(&mut self) -> usize {
        let q = self.tableau.add_qubit();
        self.roles.push(QubitRole::Ancilla { consumed: false });
        q
    }

    fn check_live_ancilla(&self, q: usize) -> Result<(), ProtocolError> {
        match self.roles.get(q) {
            Some(QubitRole::Ancilla { consumed: false }) => Ok(()),
            Some(QubitRole::Ancilla { consumed: true }) => Err(ProtocolError::AncillaConsumed(q)),
            _ => Err(ProtocolError::NotAPhoton(q)),
        }
    }

    fn consume(&mut self, q: usize) {
        self.roles[q] = QubitRole::Ancilla { consumed: true };
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    Init,
    InteractFirst,
    InteractSecond,
    Hadamard,
    Readout,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModuleProgram {
    Cz,
    Parity,
}

pub const CZ_MODULE_STEPS: [Step; 6] = [
    Step::Init,
    Step::InteractFirst,
    Step::Hadamard,
    Step::InteractSecond,
    Step::Hadamard,
    Step::Readout,
];
pub const PARITY_MODULE_STEPS: [Step; 5] = [
    Step::Init,
    Step::InteractFirst,
    Step::InteractSecond,
    Step::Hadamard,
    Step::Readout,
];

impl ModuleProgram {
    pub fn steps(self) -> &'static [Step] {
        match self {
            ModuleProgram::Cz => &CZ_MODULE_STEPS,
            ModuleProgram::Parity => &PARITY_MODULE_STEPS,
        }
    }
}

/// One firing of a module, driven step by step.
#[derive(Clone, Debug)]
pub struct Cavity {
    program: ModuleProgram,
    cursor: usize,
    ancilla: Option<usize>,
    first: Option<usize>,
    second: Option<usize>,
}

impl Cavity {
    pub fn new(program: ModuleProgram) -> Self {
        Self {
            program,
            cursor: 0,
            ancilla: None,
            first: None,
            second: None,
        }
    }

    pub fn program(&self) -> ModuleProgram {
        self.program
    }

    pub fn next_step(&self) -> Option<Step> {
        self.program.steps().get(self.cursor).copied()
    }

    pub fn ancilla(&self) -> Option<usize> {
        self.ancilla
    }

    pub fn first(&self) -> Option<usize> {
        self.first
    }

    pub fn second(&self) -> Option<usize> {
        self.second
    }

    pub fn is_complete(&self) -> bool {
        self.cursor == self.program.steps().len()
    }

    fn advance(&mut self, got: Step) -> Result<(), ProtocolError> {
        if self.is_complete() {
            if let Some(a) = self.ancilla {
                return Err(ProtocolError::AncillaConsumed(a));
            }
        }
        let expected = self.next_step();
        if expected != Some(got) {
            return Err(ProtocolError::OutOfOrder { expected, got });
        }
        self.cursor += 1;
        Ok(())
    }

    /// Prepare the atom in `|+>` (fresh `|0>` qubit followed by H).
    pub fn init(&mut self, reg: &mut PhotonicRegister) -> Result<usize, ProtocolError> {
        self.advance(Step::Init)?;
        let a = reg.allocate_ancilla();
        reg.tableau.apply_h(a)?;
        self.ancilla = Some(a);
        Ok(a)
    }

    /// Photon-atom CZ. The first call is the first photon, the second call
    /// the second photon.
    pub fn interact(&mut self, reg: &mut PhotonicRegister, photon: usize) -> Result<(), ProtocolError> {
        reg.check_photon(photon)?;
        let step = if self.first.is_none() {
            Step::InteractFirst
        } else {
            Step::InteractSecond
        };
        if step == Step::InteractSecond && self.first == Some(photon) {
            return Err(ProtocolError::SamePhoton(photon));
        }
        self.advance(step)?;
        let a = self.live_ancilla(reg)?;
        reg.tableau.apply_cz(photon, a)?;
        match step {
            Step::InteractFirst => self.first = Some(photon),
            _ => self.second = Some(photon),
        }
        Ok(())
    }

    pub fn hadamard(&mut self, reg: &mut PhotonicRegister) -> Result<(), ProtocolError> {
        self.advance(Step::Hadamard)?;
        let a = self.live_ancilla(reg)?;
        reg.tableau.apply_h(a)?;
        Ok(())
    }

    pub fn readout(
        &mut self,
        reg: &mut PhotonicRegister,
        coins: &mut impl OutcomeSource,
    ) -> Result<MeasurementOutcome, ProtocolError> {
        self.advance(Step::Readout)?;
        let a = self.live_ancilla(reg)?;
        let outcome = reg.tableau.measure_z(a, coins)?;
        reg.consume(a);
        Ok(outcome)
    }

    fn live_ancilla(&self, reg: &PhotonicRegister) -> Result<usize, ProtocolError> {
        let a = self.ancilla.expect("init precedes every other step");
        reg.check_live_ancilla(a)?;
        Ok(a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrectionMode {
    Immediate,
    #[default]
    Deferred,
}

/// Pending Pauli corrections on photon qubits.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliFrame {
    pending_z: Vec<bool>,
    /// Unused by the CZ protocol.
    pending_x: Vec<bool>,
}

impl PauliFrame {
    pub fn new(photons: usize) -> Self {
        Self {
            pending_z: vec![false; photons],
            pending_x: vec![false; photons],
        }
    }

    pub fn pending_z(&self) -> &[bool] {
        &self.pending_z
    }

    pub fn pending_x(&self) -> &[bool] {
        &self.pending_x
    }

    pub fn is_empty(&self) -> bool {
        !self.pending_z.iter().chain(&self.pending_x).any(|&b| b)
    }

    fn ensure(&mut self, q: usize) {
        if q >= self.pending_z.len() {
            self.pending_z.resize(q + 1, false);
            self.pending_x.resize(q + 1, false);
        }
    }

    pub fn toggle_z(&mut self, reg: &PhotonicRegister, q: usize) -> Result<(), ProtocolError> {
        reg.check_photon(q)?;
        self.ensure(q);
        self.pending_z[q] ^= true;
        Ok(())
    }

    pub fn toggle_x(&mut self, reg: &PhotonicRegister, q: usize) -> Result<(), ProtocolError> {
        reg.check_photon(q)?;
        self.ensure(q);
        self.pending_x[q] ^= true;
        Ok(())
    }
}

/// Apply every pending correction and clear the frame.
pub fn apply_frame(reg: &mut PhotonicRegister, frame: &mut PauliFrame) -> Result<(), ProtocolError> {
    for q in 0..frame.pending_z.len() {
        if frame.pending_x[q] {
            reg.tableau.apply_pauli(q, Pauli::X)?;
        }
        if frame.pending_z[q] {
            reg.tableau.apply_pauli(q, Pauli::Z)?;
        }
    }
    frame
        .pending_z
        .iter_mut()
        .chain(frame.pending_x.iter_mut())
        .for_each(|b| *b = false);
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleRunRecord {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub module: Option<usize>,
    pub program: ModuleProgram,
    pub photons: (usize, usize),
    pub ancilla: usize,
    pub outcome: MeasurementOutcome,
    /// Photon that receives `Z^a`; `None` when the program applies no
    /// correction.
    pub correction_target: Option<usize>,
}

/// Apply (or defer) the `Z^a` by-product correction of a finished CZ module.
pub fn correct_cz_byproduct(
    reg: &mut PhotonicRegister,
    frame: &mut PauliFrame,
    mode: CorrectionMode,
    target: usize,
    outcome: MeasurementOutcome,
) -> Result<(), ProtocolError> {
    if !outcome.bit() {
        return Ok(());
    }
    match mode {
        CorrectionMode::Immediate => reg.tableau.apply_pauli(target, Pauli::Z)?,
        CorrectionMode::Deferred => frame.toggle_z(reg, target)?,
    }
    Ok(())
}

fn check_pair(reg: &PhotonicRegister, x: usize, y: usize) -> Result<(), ProtocolError> {
    reg.check_photon(x)?;
    reg.check_photon(y)?;
    if x == y {
        return Err(ProtocolError::SamePhoton(x));
    }
    Ok(())
}

/// Full CZ-module firing on photons `x` (first) and `y` (second).
pub fn run_cz_module(
    reg: &mut PhotonicRegister,
    x: usize,
    y: usize,
    frame: &mut PauliFrame,
    mode: CorrectionMode,
    coins: &mut impl OutcomeSource,
) -> Result<ModuleRunRecord, ProtocolError> {
    check_pair(reg, x, y)?;
    let mut cavity = Cavity::new(ModuleProgram::Cz);
    let ancilla = cavity.init(reg)?;
    cavity.interact(reg, x)?;
    cavity.hadamard(reg)?;
    cavity.interact(reg, y)?;
    cavity.hadamard(reg)?;
    let outcome = cavity.readout(reg, coins)?;
    correct_cz_byproduct(reg, frame, mode, x, outcome)?;
    Ok(ModuleRunRecord {
        module: None,
        program: ModuleProgram::Cz,
        photons: (x, y),
        ancilla,
        outcome,
        correction_target: Some(x),
    })
}

/// Non-destructive `Z_x Z_y` parity measurement; the outcome bit is the
/// parity and no correction is applied.
pub fn run_parity_module(
    reg: &mut PhotonicRegister,
    x: usize,
    y: usize,
    coins: &mut impl OutcomeSource,
) -> Result<ModuleRunRecord, ProtocolError> {
    check_pair(reg, x, y)?;
    let mut cavity = Cavity::new(ModuleProgram::Parity);
    let ancilla = cavity.init(reg)?;
    cavity.interact(reg, x)?;
    cavity.interact(reg, y)?;
    cavity.hadamard(reg)?;
    let outcome = cavity.readout(reg, coins)?;
    Ok(ModuleRunRecord {
        module: None,
        program: ModuleProgram::Parity,
        photons: (x, y),
        ancilla,
        outcome,
        correction_target: None,
    })
}
