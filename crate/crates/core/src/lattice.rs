//! Target graphs and their cluster-state generators.
//!
//! Coordinates are `(x, y, z)` with `x` the propagation (time-bin) axis and
//! `(y, z)` the rail position. Vertex ids are row-major in `(z, y, x)`, so a
//! rail's photons are contiguous and ordered by time bin.
//!
//! The topological lattice is the cubic lattice with every site having zero
//! or three odd coordinates removed. A rail `(y, z)` with `y + z` odd keeps a
//! photon at every time bin (red); with `y + z` even it keeps only every
//! other bin (green), and green rails only neighbour red ones.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stab::{Pauli, PauliString, StabError, StabilizerGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Green,
}

impl Color {
    pub fn as_str(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Green => "green",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphKind {
    Grid { rows: usize, cols: usize },
    Cubic { nx: usize, ny: usize, nz: usize },
    Topological { nx: usize, ny: usize, nz: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("lattice dimensions must be at least {min}, got {dims:?}")]
    Dimension { dims: Vec<usize>, min: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    /// `[x, y, z]`.
    pub coords: [usize; 3],
    pub color: Color,
    pub rail: usize,
    pub time_bin: usize,
}

#[derive(Clone, Debug)]
pub struct TargetGraph {
    kind: GraphKind,
    extent: [usize; 3],
    vertices: Vec<Vertex>,
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    by_coords: HashMap<[usize; 3], usize>,
}

fn odd_count(c: [usize; 3]) -> usize {
    c.iter().filter(|&&v| v % 2 == 1).count()
}

/// Sites with exactly one or two odd coordinates survive the pruning.
pub fn topological_site(c: [usize; 3]) -> bool {
    matches!(odd_count(c), 1 | 2)
}

/// Rails with `y + z` even carry photons only on alternate time bins.
pub fn rail_color(y: usize, z: usize) -> Color {
    if (y + z).is_multiple_of(2) {
        Color::Green
    } else {
        Color::Red
    }
}

impl TargetGraph {
    fn build(
        kind: GraphKind,
        extent: [usize; 3],
        keep: impl Fn([usize; 3]) -> bool,
        color: impl Fn([usize; 3]) -> Color,
    ) -> Self {
        let [nx, ny, nz] = extent;
        let mut vertices = Vec::new();
        let mut by_coords = HashMap::new();
        for z in 0..nz {
            for y in 0..ny {
                for x in 0..nx {
                    let c = [x, y, z];
                    if !keep(c) {
                        continue;
                    }
                    let id = vertices.len();
                    by_coords.insert(c, id);
                    vertices.push(Vertex {
                        id,
                        coords: c,
                        color: color(c),
                        rail: z * ny + y,
                        time_bin: x,
                    });
                }
            }
        }
        let mut edges = BTreeSet::new();
        for v in &vertices {
            for axis in 0..3 {
                let mut c = v.coords;
                c[axis] += 1;
                if let Some(&w) = by_coords.get(&c) {
                    edges.insert((v.id, w));
                }
            }
        }
        let mut adjacency = vec![Vec::new(); vertices.len()];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        adjacency.iter_mut().for_each(|n| n.sort_unstable());
        Self {
            kind,
            extent,
            vertices,
            edges,
            adjacency,
            by_coords,
        }
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    /// Box size `[nx, ny, nz]`.
    pub fn extent(&self) -> [usize; 3] {
        self.extent
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, id: usize) -> &[usize] {
        &self.adjacency[id]
    }

    pub fn degree(&self, id: usize) -> usize {
        self.adjacency[id].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn vertex_at(&self, coords: [usize; 3]) -> Option<&Vertex> {
        self.by_coords.get(&coords).map(|&id| &self.vertices[id])
    }

    /// Vertex on rail `(y, z)` at time bin `x`.
    pub fn vertex_on_rail(&self, rail: usize, time_bin: usize) -> Option<&Vertex> {
        let ny = self.extent[1];
        self.vertex_at([time_bin, rail % ny, rail / ny])
    }

    /// Whether every lattice site that could link to `id` lies inside the
    /// box. Only these vertices are expected to reach the bulk degree.
    pub fn is_interior(&self, id: usize) -> bool {
        let c = self.vertices[id].coords;
        (0..3).all(|axis| {
            [-1i64, 1].into_iter().all(|d| {
                let mut n = c.map(|v| v as i64);
                n[axis] += d;
                let would_link = match self.kind {
                    GraphKind::Grid { .. } => axis != 2,
                    GraphKind::Cubic { .. } => true,
                    GraphKind::Topological { .. } => topological_site(n.map(|v| v.rem_euclid(2) as usize)),
                };
                !would_link || (0..self.extent[axis] as i64).contains(&n[axis])
            })
        })
    }
}

fn check_dims(dims: &[usize], min: usize) -> Result<(), LatticeError> {
    if dims.iter().any(|&d| d < min) {
        return Err(LatticeError::Dimension {
            dims: dims.to_vec(),
            min,
        });
    }
    Ok(())
}

/// `rows × cols` square lattice with open boundaries; vertex `(r, c)` sits on
/// rail `r` at time bin `c`.
pub fn grid_graph(rows: usize, cols: usize) -> Result<TargetGraph, LatticeError> {
    check_dims(&[rows, cols], 1)?;
    Ok(TargetGraph::build(
        GraphKind::Grid { rows, cols },
        [cols, rows, 1],
        |_| true,
        |_| Color::Red,
    ))
}

pub fn cubic_graph(nx: usize, ny: usize, nz: usize) -> Result<TargetGraph, LatticeError> {
    check_dims(&[nx, ny, nz], 1)?;
    Ok(TargetGraph::build(
        GraphKind::Cubic { nx, ny, nz },
        [nx, ny, nz],
        |_| true,
        |_| Color::Red,
    ))
}

/// Cubic lattice with the zero-odd and three-odd parity classes removed.
pub fn raussendorf_graph(nx: usize, ny: usize, nz: usize) -> Result<TargetGraph, LatticeError> {
    check_dims(&[nx, ny, nz], 2)?;
    Ok(pruned_box(nx, ny, nz))
}

/// The same pruning rule on any box, including slabs one site thick.
pub fn pruned_cubic_graph(nx: usize, ny: usize, nz: usize) -> Result<TargetGraph, LatticeError> {
    check_dims(&[nx, ny, nz], 1)?;
    Ok(pruned_box(nx, ny, nz))
}

fn pruned_box(nx: usize, ny: usize, nz: usize) -> TargetGraph {
    TargetGraph::build(
        GraphKind::Topological { nx, ny, nz },
        [nx, ny, nz],
        topological_site,
        |[_, y, z]| rail_color(y, z),
    )
}

/// One generator `X_i ∏_{j ~ i} Z_j` per vertex, all with sign `+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerGeneratorSet {
    pub generators: Vec<PauliString>,
}

impl StabilizerGeneratorSet {
    pub fn group(&self) -> Result<StabilizerGroup, StabError> {
        let width = self.generators.len();
        StabilizerGroup::from_generators(width, &self.generators)
    }
}

pub fn cluster_generators(g: &TargetGraph) -> StabilizerGeneratorSet {
    let n = g.num_vertices();
    let generators = (0..n)
        .map(|i| {
            let mut k = PauliString::single(n, i, Pauli::X);
            for &j in g.neighbors(i) {
                k.set(j, Pauli::Z);
            }
            k
        })
        .collect();
    StabilizerGeneratorSet { generators }
}
