//! Photonic cluster-state construction with ancilla-mediated CZ modules.
//!
//! The crate simulates, in the stabilizer formalism, a chip that injects
//! photons on parallel rails, entangles them with cavity modules and
//! corrects measurement by-products, then checks the result against the
//! target graph state.
//!
//! - [`stab`]: stabilizer tableau and canonical group comparison
//! - [`oracle`]: dense state-vector reference simulator
//! - [`lattice`]: target graphs and their cluster-state generators
//! - [`protocol`]: CZ-module and parity-module programs, Pauli frame
//! - [`netsim`]: layouts, injection schedules and the event-driven network
//! - [`report`]: verification reports, JSON and DOT output

pub mod lattice;
pub mod netsim;
pub mod oracle;
pub mod protocol;
pub mod report;
pub mod stab;
