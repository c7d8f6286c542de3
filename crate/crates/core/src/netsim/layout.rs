//! Chip layouts: rails, module layers, switching and control modes.
//!
//! Time is counted in half-periods, so the period `T` is [`PERIOD`] ticks and
//! the offset between neighbouring rails is one tick.

use serde::{Deserialize, Serialize};

use super::switching::Tag;
use super::SimError;
use crate::lattice::{rail_color, topological_site, Color};

/// One period `T`, in half-period ticks.
pub const PERIOD: u64 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dimension {
    #[serde(rename = "2d")]
    Two,
    #[serde(rename = "3d")]
    Three,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Switching {
    ActiveFlipflop,
    PassivePbs,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ControlMode {
    #[default]
    Individual,
    Global,
}

/// How the atom-photon CZ is realised optically. Both variants run the same
/// gate sequence; the field only annotates the layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CavityVariant {
    #[default]
    QSwitched,
    Reflection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModuleKind {
    M1,
    M2,
}

/// Plane an M2 module lies in. `Xz` modules couple rails adjacent along `z`,
/// `Xy` modules couple rails adjacent along `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Plane {
    Xz,
    Xy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RailSpec {
    pub index: usize,
    /// `(y, z)` position of the rail.
    pub position: (usize, usize),
    pub color: Color,
    pub tag: Tag,
    /// Injection offset in ticks, 0 or `PERIOD / 2`.
    pub offset: u64,
    /// Time bins carrying a photon: `bin % stride == phase % stride`.
    pub stride: usize,
    pub phase: usize,
}

impl RailSpec {
    pub fn emits(&self, bin: usize) -> bool {
        bin % self.stride == self.phase % self.stride
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub id: usize,
    pub kind: ModuleKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub plane: Option<Plane>,
    pub layer: usize,
    pub rails: Vec<usize>,
    pub switching: Switching,
    /// M1 only: fires on bin pairs `(b, b + 1)` with `b % 2 == pairing`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pairing: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub index: usize,
    pub kind: ModuleKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub plane: Option<Plane>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkLayout {
    pub dimension: Dimension,
    /// Rails along `y` and `z`; `rails_z == 1` in 2D.
    pub rails_y: usize,
    pub rails_z: usize,
    pub time_steps: usize,
    pub period: u64,
    pub switching: Switching,
    pub control: ControlMode,
    #[serde(default)]
    pub variant: CavityVariant,
    pub rails: Vec<RailSpec>,
    pub layers: Vec<LayerSpec>,
    pub modules: Vec<ModuleSpec>,
}

fn rail_tag(parity: usize) -> Tag {
    if parity.is_multiple_of(2) {
        Tag::H
    } else {
        Tag::V
    }
}

/// `m` rails by `n` time steps: two M1 layers around two M2 layers.
pub fn build_2d_layout(
    m: usize,
    n: usize,
    switching: Switching,
    control: ControlMode,
) -> Result<NetworkLayout, SimError> {
    if m == 0 || n == 0 {
        return Err(SimError::Layout(format!(
            "2D layout needs rails and time steps >= 1, got {m}x{n}"
        )));
    }
    if switching == Switching::None {
        return Err(SimError::Layout("M2 modules need a switching mechanism".into()));
    }
    let rails = (0..m)
        .map(|r| RailSpec {
            index: r,
            position: (r, 0),
            color: Color::Red,
            tag: rail_tag(r),
            offset: (r % 2) as u64 * PERIOD / 2,
            stride: 1,
            phase: 0,
        })
        .collect();
    let layers = vec![
        LayerSpec {
            index: 0,
            kind: ModuleKind::M1,
            plane: None,
        },
        LayerSpec {
            index: 1,
            kind: ModuleKind::M2,
            plane: None,
        },
        LayerSpec {
            index: 2,
            kind: ModuleKind::M2,
            plane: None,
        },
        LayerSpec {
            index: 3,
            kind: ModuleKind::M1,
            plane: None,
        },
    ];
    let mut modules = Vec::new();
    let mut push = |kind, layer, rails: Vec<usize>, switching, pairing| {
        let id = modules.len();
        modules.push(ModuleSpec {
            id,
            kind,
            plane: None,
            layer,
            rails,
            switching,
            pairing,
        });
    };
    for r in 0..m {
        push(ModuleKind::M1, 0, vec![r], Switching::None, Some(0));
    }
    for start in [0, 1] {
        for r in (start..m.saturating_sub(1)).step_by(2) {
            push(ModuleKind::M2, 1 + start, vec![r, r + 1], switching, None);
        }
    }
    for r in 0..m {
        push(ModuleKind::M1, 3, vec![r], Switching::None, Some(1));
    }
    let layout = NetworkLayout {
        dimension: Dimension::Two,
        rails_y: m,
        rails_z: 1,
        time_steps: n,
        period: PERIOD,
        switching,
        control,
        variant: CavityVariant::QSwitched,
        rails,
        layers,
        modules,
    };
    layout.validate()?;
    Ok(layout)
}

/// `ny × nz` rails by `n` time steps for the topological lattice. Red rails
/// get two M1 modules; every adjacent rail pair gets an M2 module in the
/// `xz` (along `z`) or `xy` (along `y`) plane. Switching is passive.
pub fn build_3d_layout(ny: usize, nz: usize, n: usize, control: ControlMode) -> Result<NetworkLayout, SimError> {
    if ny == 0 || nz == 0 || n == 0 {
        return Err(SimError::Layout(format!(
            "3D layout needs every dimension >= 1, got {ny}x{nz}x{n}"
        )));
    }
    let rail_index = |y: usize, z: usize| z * ny + y;
    let mut rails = Vec::with_capacity(ny * nz);
    for z in 0..nz {
        for y in 0..ny {
            let color = rail_color(y, z);
            let (stride, phase) = match color {
                Color::Red => (1, 0),
                Color::Green => (2, usize::from(!topological_site([0, y, z]))),
            };
            rails.push(RailSpec {
                index: rail_index(y, z),
                position: (y, z),
                color,
                tag: rail_tag(y + z),
                offset: ((y + z) % 2) as u64 * PERIOD / 2,
                stride,
                phase,
            });
        }
    }
    let layers = vec![
        LayerSpec {
            index: 0,
            kind: ModuleKind::M1,
            plane: None,
        },
        LayerSpec {
            index: 1,
            kind: ModuleKind::M2,
            plane: Some(Plane::Xz),
        },
        LayerSpec {
            index: 2,
            kind: ModuleKind::M2,
            plane: Some(Plane::Xz),
        },
        LayerSpec {
            index: 3,
            kind: ModuleKind::M2,
            plane: Some(Plane::Xy),
        },
        LayerSpec {
            index: 4,
            kind: ModuleKind::M2,
            plane: Some(Plane::Xy),
        },
        LayerSpec {
            index: 5,
            kind: ModuleKind::M1,
            plane: None,
        },
    ];
    let red: Vec<usize> = rails
        .iter()
        .filter(|r| r.color == Color::Red)
        .map(|r| r.index)
        .collect();
    let mut modules = Vec::new();
    let mut push = |kind, plane, layer, rails: Vec<usize>, switching, pairing| {
        let id = modules.len();
        modules.push(ModuleSpec {
            id,
            kind,
            plane,
            layer,
            rails,
            switching,
            pairing,
        });
    };
    for &r in &red {
        push(ModuleKind::M1, None, 0, vec![r], Switching::None, Some(0));
    }
    for start in [0, 1] {
        for z in (start..nz.saturating_sub(1)).step_by(2) {
            for y in 0..ny {
                let pair = vec![rail_index(y, z), rail_index(y, z + 1)];
                push(
                    ModuleKind::M2,
                    Some(Plane::Xz),
                    1 + start,
                    pair,
                    Switching::PassivePbs,
                    None,
                );
            }
        }
    }
    for start in [0, 1] {
        for z in 0..nz {
            for y in (start..ny.saturating_sub(1)).step_by(2) {
                let pair = vec![rail_index(y, z), rail_index(y + 1, z)];
                push(
                    ModuleKind::M2,
                    Some(Plane::Xy),
                    3 + start,
                    pair,
                    Switching::PassivePbs,
                    None,
                );
            }
        }
    }
    for &r in &red {
        push(ModuleKind::M1, None, 5, vec![r], Switching::None, Some(1));
    }
    let layout = NetworkLayout {
        dimension: Dimension::Three,
        rails_y: ny,
        rails_z: nz,
        time_steps: n,
        period: PERIOD,
        switching: Switching::PassivePbs,
        control,
        variant: CavityVariant::QSwitched,
        rails,
        layers,
        modules,
    };
    layout.validate()?;
    Ok(layout)
}

impl NetworkLayout {
    pub fn m1_count(&self) -> usize {
        self.modules.iter().filter(|m| m.kind == ModuleKind::M1).count()
    }

    pub fn m2_count(&self) -> usize {
        self.modules.iter().filter(|m| m.kind == ModuleKind::M2).count()
    }

    /// Modules a photon on `rail` passes through.
    pub fn module_visits(&self, rail: usize) -> usize {
        self.modules.iter().filter(|m| m.rails.contains(&rail)).count()
    }

    pub fn rail_at(&self, y: usize, z: usize) -> Option<&RailSpec> {
        if y >= self.rails_y || z >= self.rails_z {
            return None;
        }
        self.rails.get(z * self.rails_y + y)
    }

    /// Rails whose every lattice neighbour rail exists.
    pub fn is_interior_rail(&self, rail: usize) -> bool {
        let (y, z) = self.rails[rail].position;
        let y_ok = self.rails_y == 1 || (y > 0 && y + 1 < self.rails_y);
        let z_ok = self.rails_z == 1 || (z > 0 && z + 1 < self.rails_z);
        y_ok && z_ok
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("layout serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, SimError> {
        let layout: NetworkLayout =
            serde_json::from_str(s).map_err(|e| SimError::Layout(format!("bad layout descriptor: {e}")))?;
        layout.validate()?;
        Ok(layout)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |msg: String| Err(SimError::Layout(msg));
        if self.period != PERIOD {
            return bad(format!("period must be {PERIOD} ticks, got {}", self.period));
        }
        if self.rails.len() != self.rails_y * self.rails_z || self.rails.is_empty() {
            return bad(format!(
                "expected {}x{} rails, got {}",
                self.rails_y,
                self.rails_z,
                self.rails.len()
            ));
        }
        if self.time_steps == 0 {
            return bad("time_steps must be >= 1".into());
        }
        for (i, r) in self.rails.iter().enumerate() {
            let (y, z) = r.position;
            if r.index != i || z * self.rails_y + y != i {
                return bad(format!("rail {i} has inconsistent index/position"));
            }
            if r.stride == 0 || r.stride > 2 || r.offset >= PERIOD {
                return bad(format!("rail {i} has invalid emission pattern"));
            }
        }
        let mut served = std::collections::HashSet::new();
        for (i, m) in self.modules.iter().enumerate() {
            if m.id != i {
                return bad(format!("module ids must be consecutive, found {} at {i}", m.id));
            }
            let Some(layer) = self.layers.get(m.layer) else {
                return bad(format!("module {i} refers to missing layer {}", m.layer));
            };
            if layer.kind != m.kind || layer.plane != m.plane {
                return bad(format!("module {i} does not match its layer"));
            }
            if m.rails.iter().any(|&r| r >= self.rails.len()) {
                return bad(format!("module {i} serves a missing rail"));
            }
            for &r in &m.rails {
                if !served.insert((m.layer, r)) {
                    return bad(format!("rail {r} served twice in layer {}", m.layer));
                }
            }
            match m.kind {
                ModuleKind::M1 => {
                    if m.rails.len() != 1 || m.switching != Switching::None || !matches!(m.pairing, Some(0 | 1)) {
                        return bad(format!(
                            "M1 module {i} must serve one rail, unswitched, with pairing 0 or 1"
                        ));
                    }
                }
                ModuleKind::M2 => {
                    if m.rails.len() != 2 || m.switching == Switching::None || m.pairing.is_some() {
                        return bad(format!("M2 module {i} must serve two rails with one switch"));
                    }
                    let (a, b) = (&self.rails[m.rails[0]], &self.rails[m.rails[1]]);
                    let dy = a.position.0.abs_diff(b.position.0);
                    let dz = a.position.1.abs_diff(b.position.1);
                    if dy + dz != 1 {
                        return bad(format!("M2 module {i} couples non-adjacent rails"));
                    }
                    if a.offset == b.offset {
                        return bad(format!("M2 module {i} rails arrive in the same half-period"));
                    }
                    if m.switching == Switching::PassivePbs && a.tag == b.tag {
                        return bad(format!(
                            "M2 module {i} rails carry equal tags; PBS cannot separate them"
                        ));
                    }
                    if m.switching != self.switching {
                        return bad(format!("M2 module {i} switching differs from the layout"));
                    }
                }
            }
        }
        Ok(())
    }
}
