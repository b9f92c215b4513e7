//! Vertex separators and what they certify: minimum and inclusion-minimal
//! separators, certificates for whether a vertex dominates an end, and the
//! disjoint-ray lower bound on an end's vertex-degree.

use std::collections::BTreeSet;

use crate::error::Error;
use crate::flow::{disjoint_path_packing, min_vertex_cut};
use crate::presentation::{EndHandle, GraphPresentation};
use crate::truncation::{build_truncation, DegreeCap, Truncation};
use crate::vertex::VertexId;
use crate::Result;

/// Neighbor-stream cap used when operations build their own truncations;
/// generous enough to exhaust every locally finite family at test depths,
/// while keeping apex-style infinite streams explorable.
pub const EXPLORATION_CAP: DegreeCap = DegreeCap::Max(512);

#[derive(Clone, Debug)]
pub struct SeparatorResult {
    pub separator: BTreeSet<VertexId>,
    pub side_source: BTreeSet<VertexId>,
    pub side_target: BTreeSet<VertexId>,
    pub minimal: bool,
    /// No capped or frontier vertex sits on the separator and no capped
    /// vertex on the source side, so no unknown edge can bypass it.
    pub reliable: bool,
}

/// Does `separator` leave no component containing both a source and a
/// target? Sources or targets inside the separator are considered removed.
pub fn separates(
    t: &Truncation,
    separator: &BTreeSet<VertexId>,
    sources: &BTreeSet<VertexId>,
    targets: &BTreeSet<VertexId>,
) -> bool {
    let mut seen: BTreeSet<VertexId> = BTreeSet::new();
    let mut stack: Vec<VertexId> = Vec::new();
    for s in sources {
        if t.vertices.contains(s) && !separator.contains(s) && seen.insert(s.clone()) {
            stack.push(s.clone());
        }
    }
    while let Some(v) = stack.pop() {
        if targets.contains(&v) {
            return false;
        }
        for u in t.neighbors(&v) {
            if !separator.contains(u) && seen.insert(u.clone()) {
                stack.push(u.clone());
            }
        }
    }
    true
}

fn assemble(t: &Truncation, separator: BTreeSet<VertexId>, sources: &BTreeSet<VertexId>, targets: &BTreeSet<VertexId>) -> SeparatorResult {
    let mut side_source = BTreeSet::new();
    let mut side_target = BTreeSet::new();
    for comp in t.escape_components(&separator) {
        if comp.vertices.iter().any(|v| sources.contains(v)) {
            side_source.extend(comp.vertices.iter().cloned());
        } else if comp.vertices.iter().any(|v| targets.contains(v)) {
            side_target.extend(comp.vertices.iter().cloned());
        }
    }
    let reliable = separator.iter().all(|v| !t.unknown_neighbors(v))
        && side_source.iter().all(|v| !t.capped.contains(v));
    SeparatorResult { separator, side_source, side_target, minimal: true, reliable }
}

/// Minimum-cardinality vertex set separating `sources` from `targets`,
/// disjoint from the sources (it may meet the targets). A minimum cut is
/// inclusion-minimal, so `minimal` always holds on the output.
pub fn min_vertex_separator(
    t: &Truncation,
    sources: &BTreeSet<VertexId>,
    targets: &BTreeSet<VertexId>,
) -> Result<SeparatorResult> {
    if sources.is_empty() || targets.is_empty() {
        return Err(Error::InvalidParams("sources and targets must be nonempty".into()));
    }
    if sources.intersection(targets).next().is_some() {
        return Err(Error::Infeasible);
    }
    for v in sources.iter().chain(targets.iter()) {
        if !t.vertices.contains(v) {
            return Err(Error::UnknownVertex(v.to_string()));
        }
    }
    let cut = min_vertex_cut(t, sources, targets, false);
    debug_assert!(separates(t, &cut.cut, sources, targets));
    Ok(assemble(t, cut.cut, sources, targets))
}

/// Maximum family of vertex-disjoint source-target paths, the packing dual
/// of [`min_vertex_separator`] (paths may share source vertices only).
pub fn max_disjoint_paths(
    t: &Truncation,
    sources: &BTreeSet<VertexId>,
    targets: &BTreeSet<VertexId>,
) -> Vec<Vec<VertexId>> {
    disjoint_path_packing(t, sources, targets, false)
}

/// Shrink `candidate` to an inclusion-minimal separator by greedily dropping
/// vertices in ascending order.
pub fn minimalize_separator(
    t: &Truncation,
    candidate: &BTreeSet<VertexId>,
    sources: &BTreeSet<VertexId>,
    escape_targets: &BTreeSet<VertexId>,
) -> Result<SeparatorResult> {
    if !separates(t, candidate, sources, escape_targets) {
        return Err(Error::NotSeparating);
    }
    let mut sep = candidate.clone();
    for v in candidate {
        let mut without = sep.clone();
        without.remove(v);
        if separates(t, &without, sources, escape_targets) {
            sep = without;
        }
    }
    Ok(assemble(t, sep, sources, escape_targets))
}

/// Frontier vertices in the same component as the deepest in-truncation
/// vertex of the end's canonical ray, after deleting `removed`. This is the
/// finite stand-in for "where the end lives" at the truncation boundary.
pub fn frontier_sector(
    t: &Truncation,
    end: &EndHandle,
    removed: &BTreeSet<VertexId>,
) -> BTreeSet<VertexId> {
    let prefix = end.ray_prefix_in(&t.vertices);
    let Some(pivot) = prefix.iter().rev().find(|v| !removed.contains(*v)) else {
        return BTreeSet::new();
    };
    t.component_of(pivot, removed)
        .into_iter()
        .filter(|v| t.unknown_neighbors(v))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DominationVerdict {
    /// No separator stabilized up to this depth; a bounded-depth statement,
    /// not a proof of domination.
    DominatesUpTo(u32),
    /// This separator cut the vertex from the end's sector at two
    /// consecutive radii.
    SeparatedBy(BTreeSet<VertexId>),
}

#[derive(Clone, Debug)]
pub struct DominationCertificate {
    pub vertex: VertexId,
    pub end: String,
    pub depth: u32,
    pub cut_profile: Vec<(u32, usize)>,
    pub verdict: DominationVerdict,
}

/// Bounded-depth test of whether `v` dominates `end`: for growing radii,
/// compute a minimum cut between `v` and the end's frontier sector; report
/// `SeparatedBy` as soon as a cut also works at the next radius.
///
/// Other vertices already known to dominate the end are deleted first.
/// A vertex dominates an end iff it still does after removing finitely many
/// other dominators (each appears in at most one of the disjoint witness
/// paths), and this keeps their edges from hiding the separator.
pub fn domination_certificate(
    p: &GraphPresentation,
    v: &VertexId,
    end: &EndHandle,
    max_depth: u32,
) -> Result<DominationCertificate> {
    if p.end(end.name()).is_none() {
        return Err(Error::EndNotInCatalog(end.name().to_string()));
    }
    let mut other_dominators = p.dominators(end);
    other_dominators.remove(v);
    let view = if other_dominators.is_empty() {
        p.clone()
    } else {
        p.without(other_dominators, v.clone())
    };

    let mut profile: Vec<(u32, usize)> = Vec::new();
    let mut last_cut: Option<BTreeSet<VertexId>> = None;
    let me: BTreeSet<VertexId> = [v.clone()].into();
    for radius in 2..=max_depth.max(2) {
        let t = build_truncation(&view, radius, EXPLORATION_CAP)?;
        if !t.vertices.contains(v) {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        let sector = frontier_sector(&t, end, &me);
        if sector.is_empty() {
            // the end has no presence near v at this depth
            continue;
        }
        if let Some(cut) = &last_cut {
            if separates(&t, cut, &me, &sector) {
                return Ok(DominationCertificate {
                    vertex: v.clone(),
                    end: end.name().to_string(),
                    depth: radius,
                    cut_profile: profile,
                    verdict: DominationVerdict::SeparatedBy(cut.clone()),
                });
            }
        }
        let sep = min_vertex_separator(&t, &me, &sector)?;
        profile.push((radius, sep.separator.len()));
        last_cut = Some(sep.separator);
    }
    Ok(DominationCertificate {
        vertex: v.clone(),
        end: end.name().to_string(),
        depth: max_depth,
        cut_profile: profile,
        verdict: DominationVerdict::DominatesUpTo(max_depth),
    })
}

#[derive(Clone, Debug)]
pub struct EndVertexDegree {
    pub end: String,
    pub lower_bound: usize,
    pub stable: bool,
    pub per_radius: Vec<(u32, usize)>,
}

/// Disjoint-ray evidence for the end's vertex-degree: the maximum number of
/// fully vertex-disjoint paths from the root's neighborhood to the end's
/// frontier sector, minimized over radii.
pub fn end_vertex_degree(
    p: &GraphPresentation,
    end: &EndHandle,
    depth: u32,
) -> Result<EndVertexDegree> {
    if p.end(end.name()).is_none() {
        return Err(Error::EndNotInCatalog(end.name().to_string()));
    }
    let mut per_radius = Vec::new();
    for radius in 2..=depth.max(2) {
        let t = build_truncation(p, radius, EXPLORATION_CAP)?;
        let sources: BTreeSet<VertexId> = t.neighbors(p.root()).cloned().collect();
        if sources.is_empty() {
            continue;
        }
        let mut removed = sources.clone();
        removed.insert(p.root().clone());
        let sector = frontier_sector(&t, end, &removed);
        if sector.is_empty() {
            continue;
        }
        let cut = min_vertex_cut(&t, &sources, &sector, true);
        per_radius.push((radius, cut.flow));
    }
    let lower_bound = per_radius.iter().map(|(_, k)| *k).min().unwrap_or(0);
    let n = per_radius.len();
    let stable = n >= 2 && per_radius[n - 1].1 == per_radius[n - 2].1;
    Ok(EndVertexDegree { end: end.name().to_string(), lower_bound, stable, per_radius })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_presentation, FamilySpec};
    use crate::vertex::vid;

    #[test]
    fn tree_root_branch_cut() {
        let p = make_presentation(&FamilySpec::RegularTree { r: 3 }).unwrap();
        let t = build_truncation(&p, 3, DegreeCap::Unlimited).unwrap();
        let sources: BTreeSet<_> = [vid(&[0])].into();
        let targets: BTreeSet<_> = t
            .frontier
            .iter()
            .filter(|v| v.starts_with(&vid(&[0, 1])))
            .cloned()
            .collect();
        let sep = min_vertex_separator(&t, &sources, &targets).unwrap();
        assert_eq!(sep.separator, [vid(&[0, 1])].into());
        assert!(sep.minimal);
        assert!(sep.side_source.contains(&vid(&[0, 0])));
    }

    #[test]
    fn chain_copy_separates() {
        let p = make_presentation(&FamilySpec::CompleteChain { k: 4 }).unwrap();
        let t = build_truncation(&p, 4, DegreeCap::Unlimited).unwrap();
        let sources: BTreeSet<_> = (0..4).map(|j| vid(&[1, j])).collect();
        let targets: BTreeSet<_> = (0..4).map(|j| vid(&[3, j])).collect();
        let sep = min_vertex_separator(&t, &sources, &targets).unwrap();
        assert_eq!(sep.separator, (0..4).map(|j| vid(&[2, j])).collect());
        // packing matches (Menger)
        let paths = max_disjoint_paths(&t, &sources, &targets);
        assert_eq!(paths.len(), 4);
    }

    #[test]
    fn minimalize_drops_redundant() {
        let p = make_presentation(&FamilySpec::RegularTree { r: 3 }).unwrap();
        let t = build_truncation(&p, 3, DegreeCap::Unlimited).unwrap();
        let sources: BTreeSet<_> = [vid(&[0])].into();
        let targets: BTreeSet<_> = t
            .frontier
            .iter()
            .filter(|v| v.starts_with(&vid(&[0, 0])))
            .cloned()
            .collect();
        let candidate: BTreeSet<_> = [vid(&[0, 0]), vid(&[0, 1])].into();
        let sep = minimalize_separator(&t, &candidate, &sources, &targets).unwrap();
        assert_eq!(sep.separator, [vid(&[0, 0])].into());

        // already-minimal candidates come back unchanged
        let again =
            minimalize_separator(&t, &sep.separator, &sources, &targets).unwrap();
        assert_eq!(again.separator, sep.separator);
        assert!(again.minimal);

        // chain: an extra vertex on top of a full copy is redundant
        let p = make_presentation(&FamilySpec::CompleteChain { k: 4 }).unwrap();
        let t = build_truncation(&p, 4, DegreeCap::Unlimited).unwrap();
        let mut candidate: BTreeSet<_> = (0..4).map(|j| vid(&[2, j])).collect();
        candidate.insert(vid(&[3, 0]));
        let sources: BTreeSet<_> = (0..4).map(|j| vid(&[1, j])).collect();
        let targets: BTreeSet<_> = t.frontier.clone();
        let sep = minimalize_separator(&t, &candidate, &sources, &targets).unwrap();
        assert_eq!(sep.separator, (0..4).map(|j| vid(&[2, j])).collect());

        let hopeless: BTreeSet<_> = [vid(&[3, 0])].into();
        assert!(matches!(
            minimalize_separator(&t, &hopeless, &sources, &targets),
            Err(Error::NotSeparating)
        ));
    }

    #[test]
    fn apex_dominates_tree_root_does_not() {
        let p = make_presentation(&FamilySpec::ApexTree { r: 3, apexes: 1 }).unwrap();
        let end = p.end("branch-0-first").unwrap().clone();
        let apex = vid(&[1, 0]);
        let cert = domination_certificate(&p, &apex, &end, 4).unwrap();
        assert_eq!(cert.verdict, DominationVerdict::DominatesUpTo(4));
        for w in cert.cut_profile.windows(2) {
            assert!(w[1].1 > w[0].1, "cut profile must grow strictly: {:?}", cert.cut_profile);
        }

        let root = vid(&[0]);
        let cert = domination_certificate(&p, &root, &end, 4).unwrap();
        match cert.verdict {
            DominationVerdict::SeparatedBy(sep) => assert_eq!(sep.len(), 1),
            other => panic!("tree root must not dominate, got {other:?}"),
        }
    }

    #[test]
    fn regular_tree_root_separated() {
        let p = make_presentation(&FamilySpec::RegularTree { r: 3 }).unwrap();
        for end in p.ends() {
            let cert = domination_certificate(&p, &vid(&[0]), end, 4).unwrap();
            match &cert.verdict {
                DominationVerdict::SeparatedBy(sep) => assert_eq!(sep.len(), 1),
                other => panic!("{}: expected separation, got {other:?}", end.name()),
            }
        }
    }

    #[test]
    fn end_vertex_degree_examples() {
        let p = make_presentation(&FamilySpec::RegularTree { r: 3 }).unwrap();
        let end = p.end("branch-0-first").unwrap().clone();
        let d = end_vertex_degree(&p, &end, 5).unwrap();
        assert_eq!(d.lower_bound, 1);

        let p = make_presentation(&FamilySpec::CompleteChain { k: 4 }).unwrap();
        let end = p.end("tail").unwrap().clone();
        let d = end_vertex_degree(&p, &end, 5).unwrap();
        assert_eq!(d.lower_bound, 4);
        assert!(d.stable);
    }
}
