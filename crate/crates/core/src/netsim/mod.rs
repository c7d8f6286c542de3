//! Photon network: layouts, injection, switching and the event engine.

mod engine;
mod layout;
mod schedule;
mod switching;

use thiserror::Error;

use crate::protocol::ProtocolError;

pub use engine::{
    global_control_run, pulse_schedule, simulate, Event, PulseKind, PulseTick, ResourceReport, SimConfig, SimOutput,
    SwitchSetting,
};
pub use layout::{
    build_2d_layout, build_3d_layout, CavityVariant, ControlMode, Dimension, LayerSpec, ModuleKind, ModuleSpec,
    NetworkLayout, Plane, RailSpec, Switching, PERIOD,
};
pub use schedule::{firing_plan, injection_schedule, Firing, Photon};
pub use switching::{after_interaction, tag_router, FlipFlop, Route, Tag};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid layout: {0}")]
    Layout(String),
    #[error("invalid schedule: {0}")]
    Schedule(String),
    #[error("two photons reach module {module} at tick {time}")]
    SimultaneousArrival { module: usize, time: u64 },
    #[error("module {module} routed photon {photon} from rail {rail} onto rail {routed}")]
    Misroute {
        module: usize,
        photon: usize,
        rail: usize,
        routed: usize,
    },
    #[error("photon {photon} reached module {module} at tick {time} while its cavity was busy")]
    CavityBusy { module: usize, photon: usize, time: u64 },
    #[error("module {module} cycle exceeded one period at tick {time}")]
    CycleTooLong { module: usize, time: u64 },
    #[error("photon {photon} reached module {module} at tick {time} with no open cycle")]
    OrphanPhoton { module: usize, photon: usize, time: u64 },
    #[error("timing violation at module {module}, tick {tick}: {detail}")]
    TimingViolation { module: usize, tick: u64, detail: String },
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}
