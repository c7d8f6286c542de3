//! Discrete-event simulation of photons flowing through a layout.
//!
//! Events are ordered by `(time, layer, stage, rail, insertion)`. Within one
//! tick and layer, global control pulses that arm cavities run before photon
//! arrivals, and Hadamard/readout pulses (or, under individual control, the
//! completion of a cycle) run after them. Measurement coins are drawn from a
//! seeded ChaCha8 stream in the same order under every control and switching
//! mode, so runs that differ only in those modes produce identical records.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::layout::{ControlMode, ModuleKind, NetworkLayout, Switching, PERIOD};
use super::schedule::{firing_plan, index_photons, Firing, Photon};
use super::switching::{after_interaction, tag_router, FlipFlop, Route};
use super::SimError;
use crate::protocol::{
    apply_frame, correct_cz_byproduct, Cavity, CorrectionMode, ModuleProgram, ModuleRunRecord, PauliFrame,
    PhotonicRegister, Step,
};
use crate::stab::{MeasurementOutcome, StabilizerGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SimConfig {
    pub seed: u64,
    pub corrections: CorrectionMode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SwitchSetting {
    Flipflop(FlipFlop),
    Pbs(Route),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseKind {
    Init,
    H1,
    H2,
    Readout,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    Arrive {
        time: u64,
        photon: usize,
        module: usize,
        layer: usize,
    },
    Switch {
        time: u64,
        photon: usize,
        module: usize,
        rail: usize,
        setting: SwitchSetting,
    },
    Pulse {
        time: u64,
        layer: usize,
        phase: u64,
        pulse: PulseKind,
        modules: Vec<usize>,
    },
    Latch {
        time: u64,
        module: usize,
        value: u8,
    },
    Fire {
        time: u64,
        record: ModuleRunRecord,
    },
}

impl Event {
    /// Switch settings and control pulses; the rest of the log is the same
    /// for every switching and control mode.
    pub fn is_control(&self) -> bool {
        matches!(self, Event::Switch { .. } | Event::Pulse { .. } | Event::Latch { .. })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub m1_count: usize,
    pub m2_count: usize,
    pub photon_count: usize,
    pub ancilla_count: usize,
    pub measurement_count: usize,
    pub switch_event_count: usize,
    pub pulse_count: usize,
    /// Completed firings per layer.
    pub layer_firings: Vec<usize>,
    pub tag_checks: usize,
    pub tag_violations: usize,
}

#[derive(Clone, Debug)]
pub struct SimOutput {
    pub register: PhotonicRegister,
    pub frame: PauliFrame,
    pub events: Vec<Event>,
    pub records: Vec<ModuleRunRecord>,
    pub resources: ResourceReport,
    /// Photons indexed by id.
    pub photons: Vec<Photon>,
    /// Modules each photon passed through.
    pub visits: Vec<usize>,
}

impl SimOutput {
    /// Register with the pending frame applied.
    pub fn corrected_register(&self) -> Result<PhotonicRegister, SimError> {
        let mut reg = self.register.clone();
        let mut frame = self.frame.clone();
        apply_frame(&mut reg, &mut frame)?;
        Ok(reg)
    }

    /// Stabilizer group of the photons alone, after corrections.
    pub fn photon_group(&self) -> Result<StabilizerGroup, SimError> {
        let reg = self.corrected_register()?;
        let photons: Vec<usize> = (0..self.photons.len()).collect();
        Ok(reg
            .tableau()
            .restricted_group(&photons)
            .map_err(crate::protocol::ProtocolError::from)?)
    }

    /// Number of firings each photon took part in.
    pub fn link_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.photons.len()];
        for r in &self.records {
            deg[r.photons.0] += 1;
            deg[r.photons.1] += 1;
        }
        deg
    }
}

/// One global-control tick: every module of `(layer, phase)` receives the
/// init and H1 pulses at `start` and H2 and readout at `end`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PulseTick {
    pub layer: usize,
    pub phase: u64,
    pub start: u64,
    pub end: u64,
    pub modules: Vec<usize>,
}

#[derive(Clone, Debug)]
struct ControlGroup {
    layer: usize,
    phase: u64,
    first_start: u64,
    cadence: u64,
    cycle: u64,
    modules: Vec<usize>,
}

/// Control groups share a layer and a half-period phase. M1 cycles last one
/// period and repeat every two (each module fires on every other bin pair);
/// M2 cycles last half a period and repeat every period.
fn control_groups(layout: &NetworkLayout) -> Vec<ControlGroup> {
    let mut groups: Vec<ControlGroup> = Vec::new();
    for m in &layout.modules {
        let phase = m.rails.iter().map(|&r| layout.rails[r].offset).min().unwrap_or(0);
        let layer_start = m.layer as u64 * PERIOD + phase;
        let (first_start, cadence, cycle) = match m.kind {
            ModuleKind::M1 => (layer_start + m.pairing.unwrap_or(0) as u64 * PERIOD, 2 * PERIOD, PERIOD),
            ModuleKind::M2 => (layer_start, PERIOD, PERIOD / 2),
        };
        match groups.iter_mut().find(|g| g.layer == m.layer && g.phase == phase) {
            Some(g) => g.modules.push(m.id),
            None => groups.push(ControlGroup {
                layer: m.layer,
                phase,
                first_start,
                cadence,
                cycle,
                modules: vec![m.id],
            }),
        }
    }
    groups
}

/// Ticks of the shared control lines that cover every photon in `schedule`.
pub fn pulse_schedule(layout: &NetworkLayout, schedule: &[Photon]) -> Vec<PulseTick> {
    let last_injection = schedule.iter().map(|p| p.injected_at).max().unwrap_or(0);
    let mut ticks = Vec::new();
    for g in control_groups(layout) {
        let last = last_injection + g.layer as u64 * PERIOD;
        let mut start = g.first_start;
        while start <= last {
            ticks.push(PulseTick {
                layer: g.layer,
                phase: g.phase,
                start,
                end: start + g.cycle,
                modules: g.modules.clone(),
            });
            start += g.cadence;
        }
    }
    ticks.sort_by_key(|t| (t.start, t.layer, t.phase));
    ticks
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Stage {
    Pre,
    Photon,
    Post,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    time: u64,
    layer: usize,
    stage: Stage,
    rail: usize,
    seq: usize,
}

#[derive(Clone, Copy, Debug)]
enum Action {
    Arrive { photon: usize, module: usize },
    Complete { module: usize },
    Arm { tick: usize },
    FirstHadamard { tick: usize },
    Finish { tick: usize },
}

#[derive(Debug)]
struct ModuleState {
    cavity: Option<Cavity>,
    firing: Option<Firing>,
    last_start: Option<u64>,
    flipflop: FlipFlop,
    memory: Option<MeasurementOutcome>,
}

struct Engine<'a> {
    layout: &'a NetworkLayout,
    photons: Vec<Photon>,
    plan: Vec<Vec<Firing>>,
    roles: HashMap<(usize, usize), (Firing, bool)>,
    ticks: Vec<PulseTick>,
    modules: Vec<ModuleState>,
    reg: PhotonicRegister,
    frame: PauliFrame,
    corrections: CorrectionMode,
    rng: ChaCha8Rng,
    queue: BinaryHeap<Reverse<(Key, usize)>>,
    actions: Vec<Action>,
    events: Vec<Event>,
    records: Vec<ModuleRunRecord>,
    visits: Vec<usize>,
    resources: ResourceReport,
}

/// Run the layout under its own control mode.
pub fn simulate(layout: &NetworkLayout, schedule: &[Photon], config: &SimConfig) -> Result<SimOutput, SimError> {
    layout.validate()?;
    let mut engine = Engine::new(layout, schedule, config)?;
    engine.run()?;
    Ok(engine.finish())
}

/// Run a globally controlled layout; refuses individually controlled ones.
pub fn global_control_run(
    layout: &NetworkLayout,
    schedule: &[Photon],
    config: &SimConfig,
) -> Result<SimOutput, SimError> {
    if layout.control != ControlMode::Global {
        return Err(SimError::Layout("layout is not under global control".into()));
    }
    simulate(layout, schedule, config)
}

fn violation(module: usize, tick: u64, detail: impl Into<String>) -> SimError {
    SimError::TimingViolation {
        module,
        tick,
        detail: detail.into(),
    }
}

impl<'a> Engine<'a> {
    fn new(layout: &'a NetworkLayout, schedule: &[Photon], config: &SimConfig) -> Result<Self, SimError> {
        let photons = index_photons(layout, schedule)?;
        let plan = firing_plan(layout, &photons)?;
        let mut roles = HashMap::new();
        for f in plan.iter().flatten() {
            roles.insert((f.module, f.first), (*f, true));
            roles.insert((f.module, f.second), (*f, false));
        }
        let mut reg = PhotonicRegister::new(photons.len().max(1))?;
        for p in 0..photons.len() {
            reg.tableau_mut()
                .apply_h(p)
                .map_err(crate::protocol::ProtocolError::from)?;
        }
        let ticks = match layout.control {
            ControlMode::Global => pulse_schedule(layout, &photons),
            ControlMode::Individual => Vec::new(),
        };
        let modules = layout
            .modules
            .iter()
            .map(|_| ModuleState {
                cavity: None,
                firing: None,
                last_start: None,
                flipflop: FlipFlop::Up,
                memory: None,
            })
            .collect();
        let resources = ResourceReport {
            m1_count: layout.m1_count(),
            m2_count: layout.m2_count(),
            photon_count: photons.len(),
            layer_firings: vec![0; layout.layers.len()],
            ..Default::default()
        };
        let mut engine = Engine {
            layout,
            visits: vec![0; photons.len()],
            frame: PauliFrame::new(photons.len()),
            photons,
            plan,
            roles,
            ticks,
            modules,
            reg,
            corrections: config.corrections,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            queue: BinaryHeap::new(),
            actions: Vec::new(),
            events: Vec::new(),
            records: Vec::new(),
            resources,
        };
        engine.seed_queue();
        Ok(engine)
    }

    fn push(&mut self, time: u64, layer: usize, stage: Stage, rail: usize, action: Action) {
        let seq = self.actions.len();
        self.actions.push(action);
        self.queue.push(Reverse((
            Key {
                time,
                layer,
                stage,
                rail,
                seq,
            },
            seq,
        )));
    }

    fn seed_queue(&mut self) {
        let layout = self.layout;
        for p in 0..self.photons.len() {
            let (rail, injected) = (self.photons[p].rail, self.photons[p].injected_at);
            for m in layout.modules.iter().filter(|m| m.rails.contains(&rail)) {
                let t = injected + m.layer as u64 * PERIOD;
                self.push(
                    t,
                    m.layer,
                    Stage::Photon,
                    rail,
                    Action::Arrive {
                        photon: p,
                        module: m.id,
                    },
                );
            }
        }
        for i in 0..self.ticks.len() {
            let (layer, start, end) = (self.ticks[i].layer, self.ticks[i].start, self.ticks[i].end);
            self.push(start, layer, Stage::Pre, 0, Action::Arm { tick: i });
            self.push(start, layer, Stage::Post, 0, Action::FirstHadamard { tick: i });
            self.push(end, layer, Stage::Post, 0, Action::Finish { tick: i });
        }
    }

    fn run(&mut self) -> Result<(), SimError> {
        while let Some(Reverse((key, idx))) = self.queue.pop() {
            match self.actions[idx] {
                Action::Arrive { photon, module } => self.arrive(key, photon, module)?,
                Action::Complete { module } => self.complete(key.time, module)?,
                Action::Arm { tick } => self.arm(key.time, tick)?,
                Action::FirstHadamard { tick } => self.first_hadamard(key.time, tick)?,
                Action::Finish { tick } => self.finish_tick(key.time, tick)?,
            }
        }
        for (m, st) in self.modules.iter().enumerate() {
            if st.cavity.is_some() || st.memory.is_some() {
                return Err(violation(m, u64::MAX, "cycle still open when the network drained"));
            }
        }
        Ok(())
    }

    fn finish(mut self) -> SimOutput {
        self.resources.ancilla_count = self.reg.ancillas().len();
        self.resources.measurement_count = self.records.len();
        SimOutput {
            register: self.reg,
            frame: self.frame,
            events: self.events,
            records: self.records,
            resources: self.resources,
            photons: self.photons,
            visits: self.visits,
        }
    }

    fn route(&mut self, time: u64, photon: usize, module: usize) -> Result<(), SimError> {
        let spec = &self.layout.modules[module];
        let p = &self.photons[photon];
        let rails = [spec.rails[0], spec.rails[1]];
        let (setting, routed) = match spec.switching {
            Switching::ActiveFlipflop => {
                let lead = *rails
                    .iter()
                    .min_by_key(|&&r| self.layout.rails[r].offset)
                    .expect("two rails");
                let trail = if rails[0] == lead { rails[1] } else { rails[0] };
                let st = &mut self.modules[module];
                let pos = st.flipflop;
                st.flipflop = pos.toggled();
                (
                    SwitchSetting::Flipflop(pos),
                    if pos == FlipFlop::Up { lead } else { trail },
                )
            }
            Switching::PassivePbs => {
                let route = tag_router(p.tag);
                let routed = rails
                    .into_iter()
                    .find(|&r| tag_router(self.layout.rails[r].tag) == route)
                    .expect("validated layouts give each M2 rail its own tag");
                (SwitchSetting::Pbs(route), routed)
            }
            Switching::None => return Err(SimError::Layout(format!("M2 module {module} has no switch"))),
        };
        self.resources.switch_event_count += 1;
        self.events.push(Event::Switch {
            time,
            photon,
            module,
            rail: routed,
            setting,
        });
        if routed != p.rail {
            return Err(SimError::Misroute {
                module,
                photon,
                rail: p.rail,
                routed,
            });
        }
        Ok(())
    }

    fn interact(&mut self, module: usize, photon: usize) -> Result<(), SimError> {
        let cavity = self.modules[module].cavity.as_mut().expect("caller checked the cavity");
        cavity.interact(&mut self.reg, photon)?;
        let tag = self.photons[photon].tag;
        let out = after_interaction(tag);
        self.resources.tag_checks += 1;
        if out != tag || tag_router(out) != tag_router(tag) {
            self.resources.tag_violations += 1;
        }
        Ok(())
    }

    fn arrive(&mut self, key: Key, photon: usize, module: usize) -> Result<(), SimError> {
        let time = key.time;
        self.visits[photon] += 1;
        self.events.push(Event::Arrive {
            time,
            photon,
            module,
            layer: key.layer,
        });
        if self.layout.modules[module].kind == ModuleKind::M2 {
            self.route(time, photon, module)?;
        }
        let Some(&(firing, is_first)) = self.roles.get(&(module, photon)) else {
            if self.modules[module].cavity.is_some() {
                return Err(SimError::CavityBusy { module, photon, time });
            }
            return Ok(());
        };
        match self.layout.control {
            ControlMode::Individual => {
                if is_first {
                    let st = &mut self.modules[module];
                    if st.cavity.is_some() {
                        return Err(SimError::CavityBusy { module, photon, time });
                    }
                    if st.last_start.is_some_and(|t| time < t + PERIOD) {
                        return Err(violation(module, time, "second firing within one period"));
                    }
                    let mut cavity = Cavity::new(ModuleProgram::Cz);
                    cavity.init(&mut self.reg)?;
                    st.cavity = Some(cavity);
                    st.firing = Some(firing);
                    st.last_start = Some(time);
                    self.interact(module, photon)?;
                    self.modules[module]
                        .cavity
                        .as_mut()
                        .expect("armed")
                        .hadamard(&mut self.reg)?;
                } else {
                    let st = &self.modules[module];
                    let ready = st.firing.is_some_and(|f| f.second == photon)
                        && st
                            .cavity
                            .as_ref()
                            .is_some_and(|c| c.next_step() == Some(Step::InteractSecond));
                    if !ready {
                        return Err(SimError::OrphanPhoton { module, photon, time });
                    }
                    if st.last_start.is_some_and(|t| time > t + PERIOD) {
                        return Err(SimError::CycleTooLong { module, time });
                    }
                    self.interact(module, photon)?;
                    let rail = self.photons[photon].rail;
                    self.push(time, key.layer, Stage::Post, rail, Action::Complete { module });
                }
            }
            ControlMode::Global => {
                let st = &self.modules[module];
                let want = if is_first {
                    Step::InteractFirst
                } else {
                    Step::InteractSecond
                };
                let ready =
                    st.firing == Some(firing) && st.cavity.as_ref().is_some_and(|c| c.next_step() == Some(want));
                if !ready {
                    return Err(violation(
                        module,
                        time,
                        format!("photon {photon} arrived outside its control window"),
                    ));
                }
                self.interact(module, photon)?;
            }
        }
        Ok(())
    }

    fn complete(&mut self, time: u64, module: usize) -> Result<(), SimError> {
        let cavity = self.modules[module]
            .cavity
            .as_mut()
            .expect("completion follows the second photon");
        cavity.hadamard(&mut self.reg)?;
        let outcome = cavity.readout(&mut self.reg, &mut self.rng)?;
        self.record(time, module, outcome)
    }

    fn record(&mut self, time: u64, module: usize, outcome: MeasurementOutcome) -> Result<(), SimError> {
        let st = &mut self.modules[module];
        let cavity = st.cavity.take().expect("open cycle");
        let firing = st.firing.take().expect("open cycle");
        correct_cz_byproduct(&mut self.reg, &mut self.frame, self.corrections, firing.first, outcome)?;
        let record = ModuleRunRecord {
            module: Some(module),
            program: ModuleProgram::Cz,
            photons: (firing.first, firing.second),
            ancilla: cavity.ancilla().expect("initialised"),
            outcome,
            correction_target: Some(firing.first),
        };
        self.resources.layer_firings[self.layout.modules[module].layer] += 1;
        self.events.push(Event::Fire {
            time,
            record: record.clone(),
        });
        self.records.push(record);
        Ok(())
    }

    fn pulse(&mut self, time: u64, tick: usize, pulse: PulseKind, modules: Vec<usize>) {
        let t = &self.ticks[tick];
        self.resources.pulse_count += 1;
        self.events.push(Event::Pulse {
            time,
            layer: t.layer,
            phase: t.phase,
            pulse,
            modules,
        });
    }

    fn arm(&mut self, time: u64, tick: usize) -> Result<(), SimError> {
        let mut armed: Vec<(usize, Firing)> = self.ticks[tick]
            .modules
            .iter()
            .filter_map(|&m| self.plan[m].iter().find(|f| f.t_first == time).map(|f| (m, *f)))
            .collect();
        armed.sort_by_key(|(_, f)| self.photons[f.first].rail);
        self.pulse(time, tick, PulseKind::Init, armed.iter().map(|(m, _)| *m).collect());
        for (m, firing) in armed {
            let st = &mut self.modules[m];
            if st.cavity.is_some() {
                return Err(violation(m, time, "init pulse while the previous cycle is open"));
            }
            let mut cavity = Cavity::new(ModuleProgram::Cz);
            cavity.init(&mut self.reg)?;
            st.cavity = Some(cavity);
            st.firing = Some(firing);
        }
        Ok(())
    }

    fn open_cycles(&self, tick: usize) -> Vec<usize> {
        self.ticks[tick]
            .modules
            .iter()
            .copied()
            .filter(|&m| self.modules[m].cavity.is_some())
            .collect()
    }

    fn first_hadamard(&mut self, time: u64, tick: usize) -> Result<(), SimError> {
        let open = self.open_cycles(tick);
        self.pulse(time, tick, PulseKind::H1, open.clone());
        for m in open {
            let cavity = self.modules[m].cavity.as_mut().expect("open");
            if cavity.next_step() != Some(Step::Hadamard) || cavity.second().is_some() {
                return Err(violation(m, time, "first photon missing at the H1 pulse"));
            }
            cavity.hadamard(&mut self.reg)?;
        }
        Ok(())
    }

    fn finish_tick(&mut self, time: u64, tick: usize) -> Result<(), SimError> {
        let mut open = self.open_cycles(tick);
        open.sort_by_key(|&m| {
            let f = self.modules[m].firing.expect("open");
            self.photons[f.second].rail
        });
        self.pulse(time, tick, PulseKind::H2, open.clone());
        self.pulse(time, tick, PulseKind::Readout, open.clone());
        for &m in &open {
            let st = &mut self.modules[m];
            let cavity = st.cavity.as_mut().expect("open");
            if cavity.next_step() != Some(Step::Hadamard) || cavity.second().is_none() {
                return Err(violation(m, time, "second photon missing at the H2 pulse"));
            }
            cavity.hadamard(&mut self.reg)?;
            let outcome = cavity.readout(&mut self.reg, &mut self.rng)?;
            if st.memory.replace(outcome).is_some() {
                return Err(violation(m, time, "readout memory overwritten before it was drained"));
            }
            self.events.push(Event::Latch {
                time,
                module: m,
                value: outcome.value,
            });
        }
        for m in open {
            let outcome = self.modules[m].memory.take().expect("latched");
            self.record(time, m, outcome)?;
        }
        Ok(())
    }
}
