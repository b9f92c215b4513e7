//! Region sequences converging to an end, their boundary-ratio profiles,
//! the relative end degree (dominators plus the best ratio evidence), and
//! the cut-off primitive that hands a region with a good ratio to the
//! extraction pipeline.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::Error;
use crate::presentation::{EndHandle, GraphPresentation};
use crate::region::Region;
use crate::separators::{
    frontier_sector, min_vertex_separator, minimalize_separator, EXPLORATION_CAP,
};
use crate::truncation::{build_truncation, Truncation};
use crate::vertex::VertexId;
use crate::{Rat, Result};

/// Per-step verdicts of the sequence checker. `separation` is the defining
/// property (minimal separator towards every end of the next region);
/// `separation_single_end` is the weaker variant against the pinned end
/// alone, recorded for comparison but never used in decisions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepChecks {
    pub nesting: bool,
    pub separation: bool,
    pub separation_single_end: bool,
    pub omega_region: bool,
}

#[derive(Clone, Debug)]
pub struct RegionSequence {
    pub end: String,
    pub regions: Vec<Region>,
    pub checks: Vec<StepChecks>,
    pub distinct: bool,
}

impl RegionSequence {
    pub fn all_valid(&self) -> bool {
        self.distinct
            && self
                .checks
                .iter()
                .all(|c| c.nesting && c.separation && c.omega_region)
    }
}

// --- independent checker -----------------------------------------------

fn reach_avoiding(
    t: &Truncation,
    from: &BTreeSet<VertexId>,
    removed: &BTreeSet<VertexId>,
) -> BTreeSet<VertexId> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    for v in from {
        if t.vertices.contains(v) && !removed.contains(v) && seen.insert(v.clone()) {
            queue.push_back(v.clone());
        }
    }
    while let Some(v) = queue.pop_front() {
        for u in t.neighbors(&v) {
            if !removed.contains(u) && seen.insert(u.clone()) {
                queue.push_back(u.clone());
            }
        }
    }
    seen
}

fn is_separator_here(
    t: &Truncation,
    sep: &BTreeSet<VertexId>,
    sources: &BTreeSet<VertexId>,
    targets: &BTreeSet<VertexId>,
) -> bool {
    if sources.iter().all(|s| sep.contains(s)) {
        return false; // the sources must not be swallowed whole
    }
    let reached = reach_avoiding(t, sources, sep);
    targets.iter().all(|v| sep.contains(v) || !reached.contains(v))
}

fn is_minimal_separator(
    t: &Truncation,
    sep: &BTreeSet<VertexId>,
    sources: &BTreeSet<VertexId>,
    targets: &BTreeSet<VertexId>,
) -> bool {
    if !is_separator_here(t, sep, sources, targets) {
        return false;
    }
    sep.iter().all(|s| {
        let mut without = sep.clone();
        without.remove(s);
        !is_separator_here(t, &without, sources, targets)
    })
}

/// Deepest in-truncation vertices of the canonical ray that avoid `sep`.
fn ray_pivot(t: &Truncation, end: &EndHandle, sep: &BTreeSet<VertexId>) -> Option<VertexId> {
    end.ray_prefix_in(&t.vertices)
        .into_iter()
        .rev()
        .find(|v| !sep.contains(v))
}

/// Re-derives every invariant of a region sequence from scratch: pairwise
/// distinctness, nesting, the separation property (against all escaping
/// parts of the next region, and against the pinned end alone), and the
/// requirement that each region contains the canonical ray's tail.
pub fn verify_sequence(
    t: &Truncation,
    end: &EndHandle,
    regions: &[Region],
) -> (Vec<StepChecks>, bool) {
    let ray = end.ray_prefix_in(&t.vertices);
    let mut checks = Vec::new();
    for (i, region) in regions.iter().enumerate() {
        // the indices of ray vertices inside the region must be a nonempty
        // suffix of the in-truncation prefix
        let inside: Vec<bool> = ray.iter().map(|v| region.contains(v)).collect();
        let omega_region = match inside.iter().position(|b| *b) {
            Some(first) => inside[first..].iter().all(|b| *b),
            None => false,
        };
        let (nesting, separation, separation_single_end) = if i == 0 {
            (true, true, true)
        } else {
            let prev = &regions[i - 1];
            let nesting = region
                .members
                .iter()
                .all(|v| prev.members.contains(v) && !prev.vertex_boundary.contains(v));
            let sep = &region.vertex_boundary;
            let sources = &prev.vertex_boundary;
            let escape_targets: BTreeSet<VertexId> = region
                .members
                .iter()
                .filter(|v| !sep.contains(*v) && t.unknown_neighbors(v))
                .cloned()
                .collect();
            let separation = !escape_targets.is_empty()
                && is_minimal_separator(t, sep, sources, &escape_targets);
            let single = match ray_pivot(t, end, sep) {
                Some(pivot) => {
                    let target: BTreeSet<VertexId> = [pivot].into();
                    is_minimal_separator(t, sep, sources, &target)
                }
                None => false,
            };
            (nesting, separation, single)
        };
        checks.push(StepChecks { nesting, separation, separation_single_end, omega_region });
    }
    let mut distinct = true;
    for i in 0..regions.len() {
        for j in (i + 1)..regions.len() {
            if regions[i].members == regions[j].members {
                distinct = false;
            }
        }
    }
    (checks, distinct)
}

pub fn sequence_with_checks(t: &Truncation, end: &EndHandle, regions: Vec<Region>) -> RegionSequence {
    let (checks, distinct) = verify_sequence(t, end, &regions);
    RegionSequence { end: end.name().to_string(), regions, checks, distinct }
}

// --- construction --------------------------------------------------------

/// Constructive sequence walk inside a truncation view (the view is the
/// graph with the end's dominators already deleted): starting from the
/// first ray vertex, take per-vertex minimum separators towards the end's
/// sector, minimalize their union, and induce the region on the separator
/// plus the component holding the ray. Returns as many reliable steps as
/// the view supports, up to `steps`.
pub fn constructed_sequence(
    view: &Truncation,
    end: &EndHandle,
    steps: usize,
) -> RegionSequence {
    let mut regions: Vec<Region> = Vec::new();
    let ray = end.ray_prefix_in(&view.vertices);
    let Some(first) = ray.first().cloned() else {
        return sequence_with_checks(view, end, regions);
    };
    let mut current = view.clone();
    let mut prev: BTreeSet<VertexId> = [first].into();
    for _ in 0..steps {
        let mut union: BTreeSet<VertexId> = BTreeSet::new();
        let mut ok = true;
        for v in &prev {
            let me: BTreeSet<VertexId> = [v.clone()].into();
            let sector = frontier_sector(&current, end, &me);
            if sector.is_empty() || sector.contains(v) {
                ok = false;
                break;
            }
            match min_vertex_separator(&current, &me, &sector) {
                Ok(res) => union.extend(res.separator),
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            break;
        }
        for v in &prev {
            union.remove(v);
        }
        let mut behind: BTreeSet<VertexId> = union.iter().cloned().collect();
        behind.extend(prev.iter().cloned());
        let sector = frontier_sector(&current, end, &behind);
        if sector.is_empty() {
            break;
        }
        let Ok(minimal) = minimalize_separator(&current, &union, &prev, &sector) else {
            break;
        };
        let separator = minimal.separator;
        let Some(pivot) = ray_pivot(&current, end, &separator) else { break };
        let component = current.component_of(&pivot, &separator);
        if component.is_empty() {
            break;
        }
        let mut members = component;
        members.extend(separator.iter().cloned());
        let Ok(region) = Region::of(view, members.clone()) else { break };
        regions.push(region);
        current = current.induced(&members);
        prev = separator;
    }
    sequence_with_checks(view, end, regions)
}

/// The constructive region sequence for `end`, built inside the graph minus
/// the end's dominators at the given exploration depth. A shallow depth
/// yields a shorter (possibly empty) sequence rather than an error.
pub fn region_sequence(
    p: &GraphPresentation,
    end: &EndHandle,
    steps: usize,
    depth: u32,
) -> Result<RegionSequence> {
    if p.end(end.name()).is_none() {
        return Err(Error::EndNotInCatalog(end.name().to_string()));
    }
    let t = build_truncation(p, depth, EXPLORATION_CAP)?;
    let view = t.without(&p.dominators(end));
    Ok(constructed_sequence(&view, end, steps))
}

/// Boundary ratios `|edge boundary| / |vertex boundary|` per step.
pub fn ratio_profile(seq: &RegionSequence) -> Result<Vec<Rat>> {
    let mut out = Vec::new();
    for (i, r) in seq.regions.iter().enumerate() {
        if !r.reliable {
            return Err(Error::UnreliableRegion {
                step: i,
                reason: "boundary touches unexplored vertices".into(),
            });
        }
        match r.ratio() {
            Some(q) => out.push(q),
            None => {
                return Err(Error::UnreliableRegion {
                    step: i,
                    reason: "region has an empty boundary".into(),
                })
            }
        }
    }
    Ok(out)
}

// --- degree estimate ------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DomSize {
    Finite(usize),
    CountablyInfinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Caveat {
    /// The family's construction pins this value exactly.
    ExactForFamily,
    /// Finitely many sequences only bound the infimum from above.
    UpperEvidenceOnly,
}

#[derive(Clone, Debug)]
pub struct DegreeEstimate {
    pub end: String,
    pub dom_size: DomSize,
    /// Profile of the best sequence found (the one attaining the minimum).
    pub ratio_profile: Vec<Rat>,
    /// Secondary statistic for the same sequence: the boundary ratio with
    /// the edges inside the vertex-boundary added on top.
    pub augmented_profile: Vec<Rat>,
    pub estimate: Rat,
    pub caveat: Caveat,
    pub profile_source: String,
}

/// Relative degree of the end: `|Dom| + inf |edge boundary|/|vertex
/// boundary|`, where the infimum is estimated from the constructive
/// sequence and every canonical family sequence. With no surviving ray the
/// degree collapses to the dominator count.
pub fn relative_degree_estimate(
    p: &GraphPresentation,
    end: &EndHandle,
    steps: usize,
    depth: u32,
) -> Result<DegreeEstimate> {
    if p.end(end.name()).is_none() {
        return Err(Error::EndNotInCatalog(end.name().to_string()));
    }
    let dom = p.dominators(end);
    let dom_size = dom.len();
    let t = build_truncation(p, depth, EXPLORATION_CAP)?;
    let view = t.without(&dom);

    if end.ray_prefix_in(&view.vertices).is_empty() {
        return Ok(DegreeEstimate {
            end: end.name().to_string(),
            dom_size: DomSize::Finite(dom_size),
            ratio_profile: Vec::new(),
            augmented_profile: Vec::new(),
            estimate: Rat::from_integer(dom_size as i64),
            caveat: Caveat::ExactForFamily,
            profile_source: "rayless".into(),
        });
    }

    let mut candidates: Vec<(String, RegionSequence)> = Vec::new();
    let constructed = constructed_sequence(&view, end, steps);
    if !constructed.regions.is_empty() {
        candidates.push(("constructed".into(), constructed));
    }
    if let Some(source) = p.canonical_source() {
        for (name, regions) in source.sequences(end, steps, &view) {
            let seq = sequence_with_checks(&view, end, regions);
            if !seq.regions.is_empty() {
                candidates.push((name, seq));
            }
        }
    }
    let mut best: Option<(String, Vec<Rat>, Vec<Rat>, Rat)> = None;
    for (name, seq) in candidates {
        let Ok(profile) = ratio_profile(&seq) else { continue };
        let Some(min) = profile.iter().min().copied() else { continue };
        let augmented: Vec<Rat> = seq
            .regions
            .iter()
            .map(|r| r.augmented_ratio(&view).unwrap_or(min))
            .collect();
        if best.as_ref().is_none_or(|(_, _, _, m)| min < *m) {
            best = Some((name, profile, augmented, min));
        }
    }
    let Some((source_name, profile, augmented, min)) = best else {
        return Err(Error::DepthInsufficient(format!(
            "no reliable sequence for end `{}` at depth {depth}",
            end.name()
        )));
    };
    let estimate = Rat::from_integer(dom_size as i64) + min;
    let known = p
        .canonical_source()
        .and_then(|s| s.known_relative_degree(end));
    let caveat = match known {
        Some(v) if v == estimate => Caveat::ExactForFamily,
        _ => Caveat::UpperEvidenceOnly,
    };
    Ok(DegreeEstimate {
        end: end.name().to_string(),
        dom_size: DomSize::Finite(dom_size),
        ratio_profile: profile,
        augmented_profile: augmented,
        estimate,
        caveat,
        profile_source: source_name,
    })
}

// --- cut-off --------------------------------------------------------------

/// Walk the constructive sequence inside `view` until a region avoids
/// `avoid` entirely and its boundary ratio exceeds `threshold`.
pub fn cut_off_in_view(
    view: &Truncation,
    end: &EndHandle,
    avoid: &BTreeSet<VertexId>,
    threshold: Rat,
    max_steps: usize,
    depth: u32,
) -> Result<Region> {
    let seq = constructed_sequence(view, end, max_steps);
    for region in seq.regions {
        if !region.reliable {
            continue;
        }
        if region.members.intersection(avoid).next().is_some() {
            continue;
        }
        match region.ratio() {
            Some(q) if q > threshold => return Ok(region),
            _ => continue,
        }
    }
    Err(Error::NotFoundAtDepth { depth })
}

/// A region of the graph minus the end's dominators that avoids the finite
/// set `avoid` and has boundary ratio above `m - |Dom|`. Callers are
/// responsible for only asking when the end's relative degree exceeds `m`.
pub fn cut_off_region(
    p: &GraphPresentation,
    end: &EndHandle,
    avoid: &BTreeSet<VertexId>,
    m: Rat,
    depth: u32,
) -> Result<Region> {
    if p.end(end.name()).is_none() {
        return Err(Error::EndNotInCatalog(end.name().to_string()));
    }
    let dom = p.dominators(end);
    let t = build_truncation(p, depth, EXPLORATION_CAP)?;
    let view = t.without(&dom);
    let threshold = m - Rat::from_integer(dom.len() as i64);
    cut_off_in_view(&view, end, avoid, threshold, depth as usize + 2, depth)
}

// --- canonical sequence map for external callers ---------------------------

/// All canonical sequences a family supplies for `end`, fully checked.
pub fn canonical_sequences(
    p: &GraphPresentation,
    end: &EndHandle,
    steps: usize,
    t: &Truncation,
) -> BTreeMap<String, RegionSequence> {
    let mut out = BTreeMap::new();
    if let Some(source) = p.canonical_source() {
        for (name, regions) in source.sequences(end, steps, t) {
            out.insert(name.clone(), sequence_with_checks(t, end, regions));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_presentation, FamilySpec};
    use crate::vertex::vid;

    #[test]
    fn tree_sequence_all_ones() {
        let p = make_presentation(&FamilySpec::RegularTree { r: 3 }).unwrap();
        let end = p.end("branch-0-first").unwrap().clone();
        let seq = region_sequence(&p, &end, 3, 6).unwrap();
        assert_eq!(seq.regions.len(), 3);
        assert!(seq.all_valid(), "checks: {:?}", seq.checks);
        assert_eq!(
            ratio_profile(&seq).unwrap(),
            vec![Rat::from_integer(1); 3]
        );
    }

    #[test]
    fn chain_sequence_boundaries_are_copies() {
        let p = make_presentation(&FamilySpec::CompleteChain { k: 4 }).unwrap();
        let end = p.end("tail").unwrap().clone();
        let seq = region_sequence(&p, &end, 3, 7).unwrap();
        assert_eq!(seq.regions.len(), 3);
        assert!(seq.all_valid(), "checks: {:?}", seq.checks);
        assert_eq!(ratio_profile(&seq).unwrap(), vec![Rat::from_integer(4); 3]);
        for region in &seq.regions {
            let copies: BTreeSet<i64> = region
                .vertex_boundary
                .iter()
                .map(|v| v.tokens()[0])
                .collect();
            assert_eq!(copies.len(), 1, "boundary must sit inside one copy");
            assert_eq!(region.vertex_boundary.len(), 4);
        }
    }

    #[test]
    fn apex_tree_estimate_is_two() {
        let p = make_presentation(&FamilySpec::ApexTree { r: 3, apexes: 1 }).unwrap();
        let end = p.end("branch-1-first").unwrap().clone();
        let est = relative_degree_estimate(&p, &end, 3, 5).unwrap();
        assert_eq!(est.estimate, Rat::from_integer(2));
        assert_eq!(est.dom_size, DomSize::Finite(1));
        assert_eq!(est.caveat, Caveat::ExactForFamily);
    }

    #[test]
    fn chain_estimate_is_k() {
        for k in [3u32, 4, 5] {
            let p = make_presentation(&FamilySpec::CompleteChain { k }).unwrap();
            let end = p.end("tail").unwrap().clone();
            let est = relative_degree_estimate(&p, &end, 3, 7).unwrap();
            assert_eq!(est.estimate, Rat::from_integer(k as i64), "chain k={k}");
            assert_eq!(est.caveat, Caveat::ExactForFamily);
        }
    }

    #[test]
    fn cut_off_examples() {
        // chain: skip the first copy, demand ratio above 3
        let p = make_presentation(&FamilySpec::CompleteChain { k: 4 }).unwrap();
        let end = p.end("tail").unwrap().clone();
        let avoid: BTreeSet<_> = (0..4).map(|j| vid(&[1, j])).collect();
        let region = cut_off_region(&p, &end, &avoid, Rat::from_integer(3), 7).unwrap();
        assert!(region.ratio().unwrap() > Rat::from_integer(3));
        assert!(region.members.intersection(&avoid).next().is_none());

        // apex tree: region in the tree part with ratio above m - |Dom| = 1/2
        let p = make_presentation(&FamilySpec::ApexTree { r: 3, apexes: 1 }).unwrap();
        let end = p.end("branch-0-first").unwrap().clone();
        let region =
            cut_off_region(&p, &end, &BTreeSet::new(), Rat::new(3, 2), 5).unwrap();
        assert!(region.ratio().unwrap() > Rat::new(1, 2));
        assert!(!region.contains(&vid(&[1, 0])));

        // an impossible demand reports the depth
        let err = cut_off_region(&p, &end, &BTreeSet::new(), Rat::from_integer(9), 5);
        assert!(matches!(err, Err(Error::NotFoundAtDepth { .. })));
    }
}
