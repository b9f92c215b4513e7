use std::collections::BTreeSet;

use crate::error::Error;
use crate::truncation::{boundaries, Truncation};
use crate::vertex::{Edge, VertexId};
use crate::{Rat, Result};

/// An induced connected subgraph of a truncation together with its vertex-
/// and edge-boundary.
///
/// Every boundary vertex contributes at least one boundary edge, so
/// `|edge_boundary| >= |vertex_boundary|` always holds.
#[derive(Clone, Debug)]
pub struct Region {
    pub members: BTreeSet<VertexId>,
    pub vertex_boundary: BTreeSet<VertexId>,
    pub edge_boundary: BTreeSet<Edge>,
    pub reliable: bool,
}

impl Region {
    pub fn of(t: &Truncation, members: BTreeSet<VertexId>) -> Result<Region> {
        if members.is_empty() {
            return Err(Error::EmptyMembers);
        }
        if !t.is_connected(&members) {
            return Err(Error::NotConnected);
        }
        let b = boundaries(t, &members)?;
        let region = Region {
            members,
            vertex_boundary: b.vertex_boundary,
            edge_boundary: b.edge_boundary,
            reliable: b.reliable,
        };
        assert!(
            region.edge_boundary.len() >= region.vertex_boundary.len(),
            "boundary edge count fell below boundary vertex count"
        );
        Ok(region)
    }

    /// `|edge_boundary| / |vertex_boundary|`; `None` for a boundaryless
    /// region (a whole component).
    pub fn ratio(&self) -> Option<Rat> {
        if self.vertex_boundary.is_empty() {
            None
        } else {
            Some(Rat::new(
                self.edge_boundary.len() as i64,
                self.vertex_boundary.len() as i64,
            ))
        }
    }

    /// Variant ratio also counting the edges inside the vertex-boundary:
    /// `(|edge_boundary| + |E(G[vertex_boundary])|) / |vertex_boundary|`.
    /// Reported as a secondary statistic, never used in decisions.
    pub fn augmented_ratio(&self, t: &Truncation) -> Option<Rat> {
        if self.vertex_boundary.is_empty() {
            return None;
        }
        let inner = t.induced_edge_count(&self.vertex_boundary) as i64;
        Some(Rat::new(
            self.edge_boundary.len() as i64 + inner,
            self.vertex_boundary.len() as i64,
        ))
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.members.contains(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_presentation, FamilySpec};
    use crate::truncation::{build_truncation, DegreeCap};
    use crate::vertex::vid;

    #[test]
    fn region_requires_connectivity() {
        let p = make_presentation(&FamilySpec::RegularTree { r: 3 }).unwrap();
        let t = build_truncation(&p, 3, DegreeCap::Unlimited).unwrap();
        let split: BTreeSet<_> = [vid(&[0, 0]), vid(&[0, 1])].into();
        assert!(matches!(Region::of(&t, split), Err(Error::NotConnected)));
        assert!(matches!(Region::of(&t, BTreeSet::new()), Err(Error::EmptyMembers)));
    }

    #[test]
    fn chain_tail_ratio() {
        let p = make_presentation(&FamilySpec::CompleteChain { k: 4 }).unwrap();
        let t = build_truncation(&p, 4, DegreeCap::Unlimited).unwrap();
        let tail: BTreeSet<_> = t
            .vertices
            .iter()
            .filter(|v| v.tokens()[0] >= 2)
            .cloned()
            .collect();
        let r = Region::of(&t, tail).unwrap();
        assert_eq!(r.ratio(), Some(Rat::from_integer(4)));
        // augmented variant adds the 6 edges inside the boundary copy
        assert_eq!(r.augmented_ratio(&t), Some(Rat::new(16 + 6, 4)));
        assert!(r.reliable);
    }
}
