//! Verification reports: run a layout, compare the photons' stabilizer group
//! with the target cluster state, and export JSON or DOT.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{
    cluster_generators, grid_graph, pruned_cubic_graph, raussendorf_graph, Color, GraphKind, LatticeError, TargetGraph,
};
use crate::netsim::{
    build_2d_layout, build_3d_layout, injection_schedule, simulate, ControlMode, Dimension, Event, NetworkLayout,
    ResourceReport, SimConfig, SimError, SimOutput, Switching,
};
use crate::protocol::CorrectionMode;
use crate::stab::{stabilizer_group_equals, PauliString, StabError, StabilizerGroup};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Stab(#[from] StabError),
    #[error("report JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Inconsistent(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunOptions {
    pub seed: u64,
    pub corrections: CorrectionMode,
    pub control: ControlMode,
    pub switching: Switching,
    /// Include the full event log in the report.
    pub events: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            corrections: CorrectionMode::Deferred,
            control: ControlMode::Individual,
            switching: Switching::PassivePbs,
            events: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutSummary {
    pub dimension: Dimension,
    pub rails_y: usize,
    pub rails_z: usize,
    pub time_steps: usize,
    pub layers: usize,
    pub m1_count: usize,
    pub m2_count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Modes {
    pub control: ControlMode,
    pub switching: Switching,
    pub corrections: CorrectionMode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhotonEntry {
    pub id: usize,
    pub coords: [usize; 3],
    pub color: Color,
    /// Links made by module firings.
    pub degree: usize,
    /// Modules passed through.
    pub visits: usize,
    pub interior: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhotonSummary {
    pub total: usize,
    pub red: usize,
    pub green: usize,
    pub list: Vec<PhotonEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub target: GraphKind,
    pub layout: LayoutSummary,
    pub seed: u64,
    pub modes: Modes,
    pub resources: ResourceReport,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub events: Option<Vec<Event>>,
    pub canonical_stabilizers: Vec<String>,
    /// Target vertices whose generator is not in the photons' group; `pass`
    /// holds exactly when this is empty.
    pub mismatched_generators: Vec<usize>,
    pub photons: PhotonSummary,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_ms: Option<f64>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Target graph for a 3D run of `nx` time steps on `ny × nz` rails. Boxes
/// with a unit dimension are slabs of the same pruned lattice.
pub fn target_3d(nx: usize, ny: usize, nz: usize) -> Result<TargetGraph, LatticeError> {
    if nx >= 2 && ny >= 2 && nz >= 2 {
        raussendorf_graph(nx, ny, nz)
    } else {
        pruned_cubic_graph(nx, ny, nz)
    }
}

/// Rebuild a target graph from its descriptor.
pub fn target_graph(kind: GraphKind) -> Result<TargetGraph, LatticeError> {
    match kind {
        GraphKind::Grid { rows, cols } => grid_graph(rows, cols),
        GraphKind::Cubic { nx, ny, nz } => crate::lattice::cubic_graph(nx, ny, nz),
        GraphKind::Topological { nx, ny, nz } => target_3d(nx, ny, nz),
    }
}

/// `m` rails by `n` time steps, checked against the `m × n` grid state.
pub fn verify_2d(m: usize, n: usize, opts: &RunOptions) -> Result<VerificationReport, ReportError> {
    let layout = build_2d_layout(m, n, opts.switching, opts.control)?;
    let target = grid_graph(m, n)?;
    Ok(verify_layout(&layout, &target, opts)?.0)
}

/// `ny × nz` rails by `nx` time steps, checked against the pruned lattice.
/// Only passive switching is available in 3D.
pub fn verify_3d(nx: usize, ny: usize, nz: usize, opts: &RunOptions) -> Result<VerificationReport, ReportError> {
    if opts.switching != Switching::PassivePbs {
        return Err(ReportError::Inconsistent(
            "3D layouts use passive switching only".into(),
        ));
    }
    let layout = build_3d_layout(ny, nz, nx, opts.control)?;
    let target = target_3d(nx, ny, nz)?;
    Ok(verify_layout(&layout, &target, opts)?.0)
}

/// Photon id of each target vertex, matched by rail and time bin.
pub fn vertex_to_photon(target: &TargetGraph, out: &SimOutput) -> Result<Vec<usize>, ReportError> {
    if out.photons.len() != target.num_vertices() {
        return Err(ReportError::Inconsistent(format!(
            "{} photons for {} target vertices",
            out.photons.len(),
            target.num_vertices()
        )));
    }
    let mut map = vec![usize::MAX; target.num_vertices()];
    for p in &out.photons {
        let v = target
            .vertex_on_rail(p.rail, p.time_bin)
            .ok_or_else(|| ReportError::Inconsistent(format!("photon {} has no target vertex", p.id)))?;
        map[v.id] = p.id;
    }
    Ok(map)
}

/// Cluster generators of `target`, relabelled onto qubits via `map`.
pub fn mapped_generators(target: &TargetGraph, map: &[usize]) -> Vec<PauliString> {
    let n = map.len();
    cluster_generators(target)
        .generators
        .iter()
        .map(|k| {
            let mut out = PauliString::identity(n);
            for q in k.support() {
                out.set(map[q], k.get(q));
            }
            out
        })
        .collect()
}

/// Generators of `target` (by vertex id) missing from `group`.
pub fn mismatches(group: &StabilizerGroup, generators: &[PauliString]) -> Result<Vec<usize>, StabError> {
    let mut bad = Vec::new();
    for (v, k) in generators.iter().enumerate() {
        if !group.contains(k)? {
            bad.push(v);
        }
    }
    Ok(bad)
}

pub fn verify_layout(
    layout: &NetworkLayout,
    target: &TargetGraph,
    opts: &RunOptions,
) -> Result<(VerificationReport, SimOutput), ReportError> {
    let schedule = injection_schedule(layout);
    let out = simulate(
        layout,
        &schedule,
        &SimConfig {
            seed: opts.seed,
            corrections: opts.corrections,
        },
    )?;
    let map = vertex_to_photon(target, &out)?;
    let group = out.photon_group()?;
    let expected = mapped_generators(target, &map);
    let mut mismatched = mismatches(&group, &expected)?;
    if mismatched.is_empty() && !stabilizer_group_equals(&group, &expected)? {
        mismatched = (0..target.num_vertices()).collect();
    }

    let degrees = out.link_degrees();
    let list: Vec<PhotonEntry> = target
        .vertices()
        .iter()
        .map(|v| PhotonEntry {
            id: map[v.id],
            coords: v.coords,
            color: v.color,
            degree: degrees[map[v.id]],
            visits: out.visits[map[v.id]],
            interior: target.is_interior(v.id),
        })
        .collect();
    let red = list.iter().filter(|p| p.color == Color::Red).count();
    let report = VerificationReport {
        target: target.kind(),
        layout: LayoutSummary {
            dimension: layout.dimension,
            rails_y: layout.rails_y,
            rails_z: layout.rails_z,
            time_steps: layout.time_steps,
            layers: layout.layers.len(),
            m1_count: layout.m1_count(),
            m2_count: layout.m2_count(),
        },
        seed: opts.seed,
        modes: Modes {
            control: layout.control,
            switching: layout.switching,
            corrections: opts.corrections,
        },
        resources: out.resources.clone(),
        events: opts.events.then(|| out.events.clone()),
        canonical_stabilizers: group.to_strings(),
        pass: mismatched.is_empty(),
        mismatched_generators: mismatched,
        photons: PhotonSummary {
            total: list.len(),
            red,
            green: list.len() - red,
            list,
        },
        wall_time_ms: None,
    };
    Ok((report, out))
}

/// Independent re-check of a saved report: the listed stabilizers must
/// generate the target cluster state. Returns the mismatched vertices.
pub fn recheck_report(report: &VerificationReport) -> Result<Vec<usize>, ReportError> {
    let target = target_graph(report.target)?;
    if report.photons.list.len() != target.num_vertices() {
        return Err(ReportError::Inconsistent(
            "photon list does not cover the target".into(),
        ));
    }
    let mut map = vec![usize::MAX; target.num_vertices()];
    for p in &report.photons.list {
        let v = target
            .vertex_at(p.coords)
            .ok_or_else(|| ReportError::Inconsistent(format!("photon {} sits off the target", p.id)))?;
        map[v.id] = p.id;
    }
    if map.iter().any(|&p| p >= target.num_vertices()) {
        return Err(ReportError::Inconsistent("photon ids do not match the target".into()));
    }
    let group = StabilizerGroup::parse(&report.canonical_stabilizers)?;
    if group.width() != target.num_vertices() {
        return Err(ReportError::Inconsistent(
            "stabilizer width does not match the target".into(),
        ));
    }
    let expected = mapped_generators(&target, &map);
    let mut bad = mismatches(&group, &expected)?;
    if bad.is_empty() && !stabilizer_group_equals(&group, &expected)? {
        bad = (0..target.num_vertices()).collect();
    }
    Ok(bad)
}

/// Graphviz rendering with coordinates and colours; output is byte-stable.
pub fn to_dot(graph: &TargetGraph) -> String {
    let mut s = String::from("graph cluster {\n");
    for v in graph.vertices() {
        let [x, y, z] = v.coords;
        let _ = writeln!(
            s,
            "  n{} [label=\"{} ({x},{y},{z})\", color={}];",
            v.id,
            v.id,
            v.color.as_str()
        );
    }
    for &(a, b) in graph.edges() {
        let _ = writeln!(s, "  n{a} -- n{b};");
    }
    s.push_str("}\n");
    s
}
