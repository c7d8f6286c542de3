//! Routing photons into and out of M2 cavities.
//!
//! Passive switching uses a non-computational tag (polarization): a
//! polarizing beam splitter transmits `H` and reflects `V`, so each path
//! through the module belongs to exactly one of the two rails. Active
//! switching uses a flip-flop that toggles on every arrival.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tag {
    H,
    V,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Transmitted,
    Reflected,
}

/// PBS rule: `H` is transmitted, `V` reflected.
pub fn tag_router(tag: Tag) -> Route {
    match tag {
        Tag::H => Route::Transmitted,
        Tag::V => Route::Reflected,
    }
}

/// Tag after a cavity interaction. The coupling depends only on the total
/// photon number, so polarization passes through unchanged.
pub fn after_interaction(tag: Tag) -> Tag {
    tag
}

/// Position of the synchronous switch pair of an active M2 module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlipFlop {
    /// Selects the rail whose photons arrive first in each period.
    Up,
    Down,
}

impl FlipFlop {
    pub fn toggled(self) -> Self {
        match self {
            FlipFlop::Up => FlipFlop::Down,
            FlipFlop::Down => FlipFlop::Up,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pbs_rule() {
        assert_eq!(tag_router(Tag::H), Route::Transmitted);
        assert_eq!(tag_router(Tag::V), Route::Reflected);
    }

    #[test]
    fn interaction_preserves_tag() {
        for t in [Tag::H, Tag::V] {
            assert_eq!(after_interaction(t), t);
        }
    }

    #[test]
    fn flipflop_alternates() {
        assert_eq!(FlipFlop::Up.toggled(), FlipFlop::Down);
        assert_eq!(FlipFlop::Up.toggled().toggled(), FlipFlop::Up);
    }
}
