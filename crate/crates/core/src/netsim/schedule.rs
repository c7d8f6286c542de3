//! Photon injection schedules and per-module firing plans.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::layout::{ModuleKind, NetworkLayout, PERIOD};
use super::switching::Tag;
use super::SimError;
use crate::lattice::Color;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Photon {
    /// Also the photon's qubit index and its target-graph vertex id.
    pub id: usize,
    pub rail: usize,
    pub time_bin: usize,
    pub tag: Tag,
    pub color: Color,
    /// Injection time in half-period ticks.
    pub injected_at: u64,
}

impl Photon {
    /// Time the photon reaches module layer `layer`; layers are one period
    /// apart.
    pub fn arrival(&self, layer: usize) -> u64 {
        self.injected_at + layer as u64 * PERIOD
    }
}

/// One photon per emitting `(rail, bin)`, ids in `(rail, bin)` order, listed
/// by injection time.
pub fn injection_schedule(layout: &NetworkLayout) -> Vec<Photon> {
    let mut photons = Vec::new();
    for rail in &layout.rails {
        for bin in (0..layout.time_steps).filter(|&b| rail.emits(b)) {
            photons.push(Photon {
                id: photons.len(),
                rail: rail.index,
                time_bin: bin,
                tag: rail.tag,
                color: rail.color,
                injected_at: bin as u64 * PERIOD + rail.offset,
            });
        }
    }
    photons.sort_by_key(|p| (p.injected_at, p.rail, p.id));
    photons
}

/// Photons indexed by id, checked for consistency with the layout.
pub(crate) fn index_photons(layout: &NetworkLayout, schedule: &[Photon]) -> Result<Vec<Photon>, SimError> {
    let mut by_id: Vec<Option<Photon>> = vec![None; schedule.len()];
    for p in schedule {
        let bad = |msg: &str| SimError::Schedule(format!("photon {}: {msg}", p.id));
        let slot = by_id.get_mut(p.id).ok_or_else(|| bad("id out of range"))?;
        if slot.is_some() {
            return Err(bad("duplicate id"));
        }
        let rail = layout.rails.get(p.rail).ok_or_else(|| bad("unknown rail"))?;
        if p.time_bin >= layout.time_steps || !rail.emits(p.time_bin) {
            return Err(bad("rail does not emit in this time bin"));
        }
        if p.tag != rail.tag || p.color != rail.color {
            return Err(bad("tag or colour differs from its rail"));
        }
        *slot = Some(p.clone());
    }
    let photons: Vec<Photon> = by_id.into_iter().map(|p| p.expect("every id filled")).collect();
    let mut seen = HashMap::new();
    for p in &photons {
        if let Some(other) = seen.insert((p.rail, p.time_bin), p.id) {
            return Err(SimError::Schedule(format!(
                "photons {other} and {} share rail and bin",
                p.id
            )));
        }
    }
    Ok(photons)
}

/// A planned module firing: `first` is the earlier photon and receives the
/// by-product correction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Firing {
    pub module: usize,
    pub first: usize,
    pub second: usize,
    pub t_first: u64,
    pub t_second: u64,
}

/// Firings per module, in time order. M1 modules pair consecutive bins
/// `(b, b + 1)` with `b % 2 == pairing`; M2 modules pair same-bin photons on
/// their two rails. Pairs with a missing photon are skipped.
pub fn firing_plan(layout: &NetworkLayout, photons: &[Photon]) -> Result<Vec<Vec<Firing>>, SimError> {
    let at: HashMap<(usize, usize), &Photon> = photons.iter().map(|p| ((p.rail, p.time_bin), p)).collect();
    let mut plan = Vec::with_capacity(layout.modules.len());
    for m in &layout.modules {
        let mut firings = Vec::new();
        let mut fire = |a: &Photon, b: &Photon| -> Result<(), SimError> {
            let (ta, tb) = (a.arrival(m.layer), b.arrival(m.layer));
            if ta == tb {
                return Err(SimError::SimultaneousArrival { module: m.id, time: ta });
            }
            let (x, y) = if ta < tb { (a, b) } else { (b, a) };
            firings.push(Firing {
                module: m.id,
                first: x.id,
                second: y.id,
                t_first: x.arrival(m.layer),
                t_second: y.arrival(m.layer),
            });
            Ok(())
        };
        match m.kind {
            ModuleKind::M1 => {
                let rail = m.rails[0];
                let start = m.pairing.unwrap_or(0);
                for b in (start..layout.time_steps.saturating_sub(1)).step_by(2) {
                    if let (Some(x), Some(y)) = (at.get(&(rail, b)), at.get(&(rail, b + 1))) {
                        fire(x, y)?;
                    }
                }
            }
            ModuleKind::M2 => {
                for b in 0..layout.time_steps {
                    if let (Some(x), Some(y)) = (at.get(&(m.rails[0], b)), at.get(&(m.rails[1], b))) {
                        fire(x, y)?;
                    }
                }
            }
        }
        firings.sort_by_key(|f| f.t_first);
        plan.push(firings);
    }
    Ok(plan)
}
