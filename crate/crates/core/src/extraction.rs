//! The main pipeline: repeatedly cut off ends behind regions with good
//! boundary ratios while keeping an anchor set of well-connected vertices,
//! then grow a vertex set inside what remains until its average degree
//! certificate stabilizes. Non-stabilization within budget yields a layered
//! ray trace instead of a certificate.

use std::collections::{BTreeMap, BTreeSet};

use crate::end_degree::{cut_off_in_view, relative_degree_estimate, Caveat};
use crate::error::Error;
use crate::finite::FiniteGraph;
use crate::minors::{tkk_from_dominators, TopoWitness};
use crate::presentation::{EndHandle, GraphPresentation};
use crate::separators::EXPLORATION_CAP;
use crate::truncation::{boundaries, build_truncation, Truncation};
use crate::vertex::VertexId;
use crate::{Rat, Result};

// --- layered graphs ---------------------------------------------------------

#[derive(Clone, Debug)]
pub struct LayeredGraph {
    pub layers: Vec<Vec<VertexId>>,
    pub graph: FiniteGraph,
}

/// A layer-respecting ray through the first `steps` layers: survivors are
/// back-pruned to those with forward reach, then the smallest survivor is
/// taken at every step (the lexicographically least valid ray).
pub fn koenig_ray(l: &LayeredGraph, steps: usize) -> Result<Vec<VertexId>> {
    if steps == 0 || steps > l.layers.len() {
        return Err(Error::InvalidParams(format!(
            "need 1..={} steps, asked for {steps}",
            l.layers.len()
        )));
    }
    let mut seen: BTreeSet<&VertexId> = BTreeSet::new();
    for (i, layer) in l.layers.iter().take(steps).enumerate() {
        if layer.is_empty() {
            return Err(Error::LayerInvariant { layer: i });
        }
        for v in layer {
            if !seen.insert(v) {
                return Err(Error::LayerInvariant { layer: i });
            }
        }
        if i > 0 {
            for v in layer {
                if !l.layers[i - 1].iter().any(|u| l.graph.has_edge(u, v)) {
                    return Err(Error::LayerInvariant { layer: i });
                }
            }
        }
    }
    let mut survivors: Vec<BTreeSet<&VertexId>> = vec![BTreeSet::new(); steps];
    survivors[steps - 1] = l.layers[steps - 1].iter().collect();
    for i in (0..steps - 1).rev() {
        survivors[i] = l.layers[i]
            .iter()
            .filter(|v| survivors[i + 1].iter().any(|u| l.graph.has_edge(v, u)))
            .collect();
    }
    let mut ray: Vec<VertexId> = Vec::with_capacity(steps);
    let first = survivors[0]
        .iter()
        .next()
        .ok_or(Error::LayerInvariant { layer: 0 })?;
    ray.push((*first).clone());
    for i in 1..steps {
        let prev = ray.last().unwrap();
        let next = survivors[i]
            .iter()
            .find(|u| l.graph.has_edge(prev, u))
            .ok_or(Error::LayerInvariant { layer: i })?;
        ray.push((*next).clone());
    }
    Ok(ray)
}

// --- iterated cut-offs -------------------------------------------------

/// One cut-off piece: the region that was removed, attached to the
/// remaining graph along its vertex-boundary.
#[derive(Clone, Debug)]
pub struct PieceInfo {
    pub attachment: BTreeSet<VertexId>,
    pub members: BTreeSet<VertexId>,
    pub end: String,
    pub dom_size: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct CutoffChecks {
    /// Remaining graph shrank, anchor and pieces only grew.
    pub monotone: bool,
    /// Anchor and attachments stay inside the remaining graph.
    pub containment: bool,
    /// Pieces are disjoint, connected, meet the remaining graph exactly in
    /// their attachment, and together with it cover the truncation.
    pub pieces_consistent: bool,
    pub boundary_size: usize,
    /// Every attachment has average degree above `m - |Dom|` into itself
    /// plus the anchor.
    pub piece_degrees: bool,
    /// Boundary vertices outside every attachment have more than `m`
    /// anchor neighbors.
    pub boundary_degrees: bool,
    /// The processed end's canonical ray no longer has a tail inside.
    pub ray_removed: bool,
}

impl CutoffChecks {
    pub fn all_ok(&self) -> bool {
        self.monotone
            && self.containment
            && self.pieces_consistent
            && self.piece_degrees
            && self.boundary_degrees
            && self.ray_removed
    }
}

#[derive(Clone, Debug)]
pub struct StepAudit {
    pub step: usize,
    pub end: String,
    pub skipped: bool,
    pub checks: CutoffChecks,
}

#[derive(Clone, Debug)]
pub struct CutoffState {
    pub truncation: Truncation,
    pub current: BTreeSet<VertexId>,
    pub anchor: BTreeSet<VertexId>,
    pub pieces: Vec<PieceInfo>,
    pub audit: Vec<StepAudit>,
}

fn smallest_count_above(m: Rat) -> usize {
    let floor = m.floor().to_integer();
    if floor < 0 {
        0
    } else {
        floor as usize + 1
    }
}

fn check_state(
    state: &CutoffState,
    m: Rat,
    end: &EndHandle,
    prev_current: &BTreeSet<VertexId>,
    prev_anchor: &BTreeSet<VertexId>,
    prev_pieces: usize,
) -> CutoffChecks {
    let t = &state.truncation;
    let monotone = state.current.is_subset(prev_current)
        && prev_anchor.is_subset(&state.anchor)
        && state.pieces.len() >= prev_pieces;
    let containment = state.anchor.is_subset(&state.current)
        && state
            .pieces
            .iter()
            .all(|p| p.attachment.is_subset(&state.current));

    let mut pieces_consistent = true;
    let mut covered: BTreeSet<VertexId> = state.current.clone();
    for (i, p) in state.pieces.iter().enumerate() {
        if !t.is_connected(&p.members) {
            pieces_consistent = false;
        }
        let meet: BTreeSet<_> = p.members.intersection(&state.current).cloned().collect();
        if meet != p.attachment {
            pieces_consistent = false;
        }
        for q in state.pieces.iter().skip(i + 1) {
            let overlap = p
                .members
                .difference(&p.attachment)
                .any(|v| q.members.contains(v));
            if overlap {
                pieces_consistent = false;
            }
        }
        covered.extend(p.members.iter().cloned());
    }
    if covered != t.vertices {
        pieces_consistent = false;
    }

    let b = boundaries(t, &state.current).expect("current is a subset of the truncation");
    let attachments: BTreeSet<&VertexId> =
        state.pieces.iter().flat_map(|p| p.attachment.iter()).collect();
    let boundary_degrees = b
        .vertex_boundary
        .iter()
        .filter(|v| !attachments.contains(*v) && !t.unknown_neighbors(v))
        .all(|v| Rat::from_integer(t.degree_into(v, &state.anchor) as i64) > m);

    let piece_degrees = state.pieces.iter().all(|p| {
        let mut into: BTreeSet<VertexId> = p.attachment.clone();
        into.extend(state.anchor.iter().cloned());
        let total: usize = p
            .attachment
            .iter()
            .map(|v| t.neighbors(v).filter(|u| into.contains(*u)).count())
            .sum();
        Rat::new(total as i64, p.attachment.len() as i64)
            > m - Rat::from_integer(p.dom_size as i64)
    });

    let prefix = end.ray_prefix_in(&t.vertices);
    let ray_removed = prefix
        .last()
        .is_none_or(|deep| !state.current.contains(deep));

    CutoffChecks {
        monotone,
        containment,
        pieces_consistent,
        boundary_size: b.vertex_boundary.len(),
        piece_degrees,
        boundary_degrees,
        ray_removed,
    }
}

fn step_cutoff(
    p: &GraphPresentation,
    state: &mut CutoffState,
    m: Rat,
    end: &EndHandle,
    step: usize,
) -> Result<()> {
    let prev_current = state.current.clone();
    let prev_anchor = state.anchor.clone();
    let prev_pieces = state.pieces.len();
    let t = state.truncation.clone();

    let prefix = end.ray_prefix_in(&t.vertices);
    let has_tail = prefix.last().is_some_and(|deep| state.current.contains(deep));
    if !has_tail {
        let checks = check_state(state, m, end, &prev_current, &prev_anchor, prev_pieces);
        state.audit.push(StepAudit {
            step,
            end: end.name().to_string(),
            skipped: true,
            checks,
        });
        return Ok(());
    }

    let dom_present: BTreeSet<VertexId> = p
        .dominators(end)
        .intersection(&state.current)
        .cloned()
        .collect();
    let need = smallest_count_above(m);
    let mut dom_anchor: BTreeSet<VertexId> = BTreeSet::new();
    for d in &dom_present {
        let nbrs: Vec<VertexId> = t
            .neighbors(d)
            .filter(|u| state.current.contains(*u) && !dom_present.contains(*u))
            .take(need)
            .cloned()
            .collect();
        if nbrs.len() < need {
            return Err(Error::HypothesisNotMet(format!(
                "dominating vertex {d} has fewer than {need} usable neighbors"
            )));
        }
        dom_anchor.extend(nbrs);
    }

    let mut avoid: BTreeSet<VertexId> = state.anchor.clone();
    avoid.extend(dom_anchor.iter().cloned());
    for piece in &state.pieces {
        avoid.extend(piece.attachment.iter().cloned());
    }

    let view_members: BTreeSet<VertexId> = state
        .current
        .difference(&dom_present)
        .cloned()
        .collect();
    let view = t.induced(&view_members);
    let threshold = m - Rat::from_integer(dom_present.len() as i64);
    let region = cut_off_in_view(
        &view,
        end,
        &avoid,
        threshold,
        t.radius as usize + 2,
        t.radius,
    )?;

    let attachment = region.vertex_boundary.clone();
    let removed: BTreeSet<VertexId> = region
        .members
        .difference(&attachment)
        .cloned()
        .collect();
    state.current.retain(|v| !removed.contains(v));

    // grow the anchor until the attachment's average degree into it clears
    // the threshold; all of the boundary edge targets together always do
    let base: usize = attachment
        .iter()
        .map(|v| t.neighbors(v).filter(|u| attachment.contains(*u)).count())
        .sum();
    let mut candidates: BTreeSet<VertexId> = BTreeSet::new();
    for v in &attachment {
        for u in t.neighbors(v) {
            if state.current.contains(u) && !attachment.contains(u) {
                candidates.insert(u.clone());
            }
        }
    }
    let size = attachment.len() as i64;
    let mut picked: BTreeSet<VertexId> = BTreeSet::new();
    let mut extra = 0usize;
    let enough = |base: usize, extra: usize| Rat::new((base + extra) as i64, size) > threshold;
    for c in candidates {
        if enough(base, extra) {
            break;
        }
        extra += attachment
            .iter()
            .filter(|v| t.contains_edge(v, &c))
            .count();
        picked.insert(c);
    }
    if !enough(base, extra) {
        return Err(Error::HypothesisNotMet(format!(
            "attachment of end `{}` cannot reach average degree above {threshold}",
            end.name()
        )));
    }

    state.anchor.extend(dom_anchor);
    state.anchor.extend(picked);
    state.pieces.push(PieceInfo {
        attachment,
        members: region.members,
        end: end.name().to_string(),
        dom_size: dom_present.len(),
    });

    let checks = check_state(state, m, end, &prev_current, &prev_anchor, prev_pieces);
    state.audit.push(StepAudit {
        step,
        end: end.name().to_string(),
        skipped: false,
        checks,
    });
    Ok(())
}

/// Process the given ends in order, cutting each one off behind a region
/// with boundary ratio above `m - |Dom|` and keeping the anchor growing.
pub fn iterate_cutoffs(
    p: &GraphPresentation,
    m: Rat,
    seed: &BTreeSet<VertexId>,
    ends: &[EndHandle],
    depth: u32,
) -> Result<CutoffState> {
    let t = build_truncation(p, depth, EXPLORATION_CAP)?;
    for v in seed {
        if !t.vertices.contains(v) {
            return Err(Error::UnknownVertex(v.to_string()));
        }
    }
    let mut state = CutoffState {
        current: t.vertices.clone(),
        truncation: t,
        anchor: seed.clone(),
        pieces: Vec::new(),
        audit: Vec::new(),
    };
    for (i, end) in ends.iter().enumerate() {
        step_cutoff(p, &mut state, m, end, i + 1)?;
    }
    Ok(state)
}

#[derive(Clone, Debug)]
pub struct CutAllResult {
    pub state: CutoffState,
    pub kept: BTreeSet<VertexId>,
    /// Catalog ends whose canonical ray still has a tail inside `kept`.
    pub rays_remaining: Vec<String>,
    /// Vertices of low degree in the kept graph that no attachment of high
    /// average degree covers.
    pub degree_cover_violations: Vec<String>,
    pub partial: bool,
}

/// Cut off every catalog end (up to `end_budget` of them) and return what
/// remains together with the attachment sets.
pub fn cut_off_all_ends(
    p: &GraphPresentation,
    m: Rat,
    k: usize,
    seed: &BTreeSet<VertexId>,
    depth: u32,
    end_budget: usize,
) -> Result<CutAllResult> {
    for end in p.ends() {
        if p.dominators(end).len() >= k {
            return Err(Error::InvalidParams(format!(
                "end `{}` has {} dominating vertices; the topological branch applies",
                end.name(),
                p.dominators(end).len()
            )));
        }
    }
    let partial = p.ends().len() > end_budget;
    let ends: Vec<EndHandle> = p.ends().iter().take(end_budget).cloned().collect();
    let state = iterate_cutoffs(p, m, seed, &ends, depth)?;
    let kept = state.current.clone();
    let t = &state.truncation;

    let rays_remaining: Vec<String> = p
        .ends()
        .iter()
        .filter(|end| {
            end.ray_prefix_in(&t.vertices)
                .last()
                .is_some_and(|deep| kept.contains(deep))
        })
        .map(|end| end.name().to_string())
        .collect();

    let threshold = m - Rat::from_integer(k as i64) + Rat::from_integer(1);
    let mut violations = Vec::new();
    for v in &kept {
        if t.unknown_neighbors(v) {
            continue;
        }
        let deg = t.degree_into(v, &kept);
        if Rat::from_integer(deg as i64) > m {
            continue;
        }
        let covered = state.pieces.iter().any(|piece| {
            if !piece.attachment.contains(v) {
                return false;
            }
            let total: usize = piece
                .attachment
                .iter()
                .map(|u| t.degree_into(u, &kept))
                .sum();
            Rat::new(total as i64, piece.attachment.len() as i64) > threshold
        });
        if !covered {
            violations.push(format!("vertex {v} has degree {deg} and no covering piece"));
        }
    }

    Ok(CutAllResult { state, kept, rays_remaining, degree_cover_violations: violations, partial })
}

// --- the main extractor ---------------------------------------------------

#[derive(Clone, Debug)]
pub enum ExtractionOutcome {
    DenseSubgraph {
        members: BTreeSet<VertexId>,
        avg_degree: Rat,
    },
    TopoClique(TopoWitness),
    BudgetExceeded {
        trace: LayeredGraph,
    },
}

#[derive(Clone, Debug)]
pub struct GrowthAudit {
    pub step: usize,
    pub added: usize,
    /// Average degree of the previous set inside the grown induced
    /// subgraph (the certified quantity).
    pub prev_avg: Rat,
    /// Average degree of the newly added vertices in the whole kept graph.
    pub new_avg: Option<Rat>,
    /// Every attachment touched by this layer was swallowed whole.
    pub whole_pieces: bool,
}

#[derive(Clone, Debug)]
pub struct ExtractReport {
    pub outcome: ExtractionOutcome,
    pub hypothesis_source: String,
    pub cutoff_audit: Vec<StepAudit>,
    pub growth: Vec<GrowthAudit>,
}

/// The dichotomy: a topological clique witness when some end has `k`
/// dominating vertices, otherwise a finite subgraph of average degree above
/// `m - k + 1` found by cutting off all ends and growing from the root.
/// Budget exhaustion returns the layered trace of the growth instead.
pub fn extract_dense_or_tkk(
    p: &GraphPresentation,
    m: Rat,
    k: usize,
    depth: u32,
    budget: u64,
) -> Result<ExtractReport> {
    if k < 1 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    // enough dominators pin the witness directly, no degree hypothesis needed
    for end in p.ends() {
        let dom = p.dominators(end);
        if dom.len() >= k {
            let branch: BTreeSet<VertexId> = dom.into_iter().take(k).collect();
            let w = tkk_from_dominators(p, end, &branch, depth)?;
            return Ok(ExtractReport {
                outcome: ExtractionOutcome::TopoClique(w),
                hypothesis_source: "dominator-catalog".into(),
                cutoff_audit: Vec::new(),
                growth: Vec::new(),
            });
        }
    }

    // degree hypothesis: every vertex and every catalog end above m
    let t = build_truncation(p, depth, EXPLORATION_CAP)?;
    if let Some(v) = t
        .interior
        .iter()
        .filter(|v| !t.capped.contains(*v))
        .find(|v| Rat::from_integer(t.degree(v) as i64) <= m)
    {
        return Err(Error::HypothesisNotMet(format!(
            "vertex {v} has degree {} which does not exceed m = {m}",
            t.degree(v)
        )));
    }
    let mut exact = true;
    for end in p.ends() {
        let est = relative_degree_estimate(p, end, 3, depth)?;
        if est.estimate <= m {
            return Err(Error::HypothesisNotMet(format!(
                "end `{}` has relative degree estimate {} which does not exceed m = {m}",
                end.name(),
                est.estimate
            )));
        }
        if est.caveat != Caveat::ExactForFamily {
            exact = false;
        }
    }
    let hypothesis_source = if exact { "family-exact" } else { "truncation-evidence" };

    let seed: BTreeSet<VertexId> = [p.root().clone()].into();
    let cut = cut_off_all_ends(p, m, k, &seed, depth, p.ends().len().max(1))?;
    let kept = cut.kept;
    let t = &cut.state.truncation;
    let g = FiniteGraph::from_truncation(&t.induced(&kept));
    let threshold = m - Rat::from_integer(k as i64) + Rat::from_integer(1);

    let attachments: Vec<&PieceInfo> = cut.state.pieces.iter().collect();
    let piece_of = |v: &VertexId| attachments.iter().find(|p| p.attachment.contains(v));

    let root = p.root().clone();
    let mut grown: BTreeSet<VertexId> = match piece_of(&root) {
        Some(piece) => piece.attachment.clone(),
        None => [root.clone()].into(),
    };
    let mut previous: BTreeSet<VertexId> = BTreeSet::new();
    let mut layers: Vec<BTreeSet<VertexId>> = vec![grown.clone()];
    let mut growth: Vec<GrowthAudit> = Vec::new();

    let deg_into = |v: &VertexId, set: &BTreeSet<VertexId>| -> usize {
        g.neighbors(v).filter(|u| set.contains(*u)).count()
    };

    for step in 0..budget {
        let total: usize = grown.iter().map(|v| deg_into(v, &grown)).sum();
        let avg = Rat::new(total as i64, grown.len() as i64);
        if avg > threshold {
            return Ok(ExtractReport {
                outcome: ExtractionOutcome::DenseSubgraph { members: grown, avg_degree: avg },
                hypothesis_source: hypothesis_source.into(),
                cutoff_audit: cut.state.audit,
                growth,
            });
        }
        let ring: BTreeSet<VertexId> = grown.difference(&previous).cloned().collect();
        let mut candidates: BTreeSet<VertexId> = BTreeSet::new();
        for v in &ring {
            for u in g.neighbors(v) {
                if !grown.contains(u) {
                    candidates.insert(u.clone());
                }
            }
        }
        let mut fresh: BTreeSet<VertexId> = BTreeSet::new();
        let mut extra = 0usize;
        for c in candidates {
            if Rat::new((total + extra) as i64, grown.len() as i64) > threshold {
                break;
            }
            extra += deg_into(&c, &grown);
            fresh.insert(c);
        }
        if Rat::new((total + extra) as i64, grown.len() as i64) <= threshold {
            return Err(Error::HypothesisNotMet(format!(
                "growth stalled at {} vertices with average degree {}",
                grown.len(),
                Rat::new((total + extra) as i64, grown.len() as i64)
            )));
        }
        // swallow whole any attachment the fresh vertices touch
        let mut whole_pieces = true;
        let mut layer = fresh.clone();
        for c in fresh.iter() {
            if let Some(piece) = piece_of(c) {
                for v in &piece.attachment {
                    if grown.contains(v) && !layer.contains(v) {
                        whole_pieces = false; // piece straddles older layers
                    }
                    if !grown.contains(v) {
                        layer.insert(v.clone());
                    }
                }
            }
        }
        let added = layer.len();
        previous = grown.clone();
        grown.extend(layer.iter().cloned());
        layers.push(layer);

        let prev_total: usize = previous.iter().map(|v| deg_into(v, &grown)).sum();
        let prev_avg = Rat::new(prev_total as i64, previous.len() as i64);
        let new_set = layers.last().unwrap();
        let new_avg = if new_set.is_empty() {
            None
        } else {
            let s: usize = new_set.iter().map(|v| deg_into(v, &kept)).sum();
            Some(Rat::new(s as i64, new_set.len() as i64))
        };
        growth.push(GrowthAudit { step: step as usize + 1, added, prev_avg, new_avg, whole_pieces });
    }

    // budget exhausted: emit the collapsed layered trace as ray evidence
    let trace = collapse_layers(&g, &layers, &cut.state.pieces);
    koenig_ray(&trace, trace.layers.len())?;
    Ok(ExtractReport {
        outcome: ExtractionOutcome::BudgetExceeded { trace },
        hypothesis_source: hypothesis_source.into(),
        cutoff_audit: cut.state.audit,
        growth,
    })
}

/// Collapse every attachment lying wholly inside one layer to a single
/// vertex (its smallest member, which becomes adjacent to all outside
/// neighbors of the attachment), and keep only consecutive-layer edges.
fn collapse_layers(
    g: &FiniteGraph,
    layers: &[BTreeSet<VertexId>],
    pieces: &[PieceInfo],
) -> LayeredGraph {
    let mut rep: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for layer in layers {
        for piece in pieces {
            if piece.attachment.is_subset(layer) {
                let leader = piece.attachment.iter().next().unwrap().clone();
                for v in &piece.attachment {
                    rep.insert(v.clone(), leader.clone());
                }
            }
        }
    }
    let class = |v: &VertexId| rep.get(v).cloned().unwrap_or_else(|| v.clone());
    let collapsed: Vec<Vec<VertexId>> = layers
        .iter()
        .map(|layer| {
            let set: BTreeSet<VertexId> = layer.iter().map(&class).collect();
            set.into_iter().collect()
        })
        .collect();
    let mut graph = FiniteGraph::new();
    for layer in &collapsed {
        for v in layer {
            graph.add_vertex(v.clone());
        }
    }
    for w in layers.windows(2) {
        for u in &w[0] {
            for x in g.neighbors(u) {
                if w[1].contains(x) {
                    let (cu, cx) = (class(u), class(x));
                    if cu != cx {
                        graph.add_edge(cu, cx);
                    }
                }
            }
        }
    }
    LayeredGraph { layers: collapsed, graph }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_presentation, FamilySpec};
    use crate::minors::verify_topo_witness;
    use crate::vertex::vid;

    fn layered(layers: Vec<Vec<VertexId>>, edges: &[(VertexId, VertexId)]) -> LayeredGraph {
        let mut graph = FiniteGraph::from_edges(edges);
        for v in layers.iter().flatten() {
            graph.add_vertex(v.clone());
        }
        LayeredGraph { layers, graph }
    }

    #[test]
    fn koenig_on_a_path() {
        let l = layered(
            vec![vec![vid(&[0])], vec![vid(&[1])], vec![vid(&[2])]],
            &[(vid(&[0]), vid(&[1])), (vid(&[1]), vid(&[2]))],
        );
        assert_eq!(koenig_ray(&l, 3).unwrap(), vec![vid(&[0]), vid(&[1]), vid(&[2])]);
    }

    #[test]
    fn koenig_takes_leftmost_branch() {
        // binary-tree layers: the smallest surviving vertex wins
        let edges = vec![
            (vid(&[0]), vid(&[1, 0])),
            (vid(&[0]), vid(&[1, 1])),
            (vid(&[1, 0]), vid(&[2, 0])),
            (vid(&[1, 1]), vid(&[2, 1])),
        ];
        let l = layered(
            vec![
                vec![vid(&[0])],
                vec![vid(&[1, 0]), vid(&[1, 1])],
                vec![vid(&[2, 0]), vid(&[2, 1])],
            ],
            &edges,
        );
        assert_eq!(
            koenig_ray(&l, 3).unwrap(),
            vec![vid(&[0]), vid(&[1, 0]), vid(&[2, 0])]
        );
    }

    #[test]
    fn koenig_avoids_dead_ends() {
        // the smaller middle vertex has no continuation: the ray must avoid it
        let edges = vec![
            (vid(&[0]), vid(&[1, 0])),
            (vid(&[0]), vid(&[1, 1])),
            (vid(&[1, 1]), vid(&[2, 0])),
        ];
        let l = layered(
            vec![
                vec![vid(&[0])],
                vec![vid(&[1, 0]), vid(&[1, 1])],
                vec![vid(&[2, 0])],
            ],
            &edges,
        );
        assert_eq!(
            koenig_ray(&l, 3).unwrap(),
            vec![vid(&[0]), vid(&[1, 1]), vid(&[2, 0])]
        );
    }

    #[test]
    fn koenig_rejects_broken_layers() {
        let l = layered(
            vec![vec![vid(&[0])], vec![vid(&[1])]],
            &[],
        );
        assert!(matches!(
            koenig_ray(&l, 2),
            Err(Error::LayerInvariant { layer: 1 })
        ));
    }

    #[test]
    fn cutoffs_on_the_chain() {
        let p = make_presentation(&FamilySpec::CompleteChain { k: 4 }).unwrap();
        let seed: BTreeSet<_> = [vid(&[1, 0])].into();
        let ends: Vec<_> = p.ends().to_vec();
        let state =
            iterate_cutoffs(&p, Rat::from_integer(3), &seed, &ends, 7).unwrap();
        assert_eq!(state.pieces.len(), 1);
        assert!(state.audit.iter().all(|a| a.checks.all_ok()), "{:?}", state.audit);
        // the piece attachment is one whole copy
        let f = &state.pieces[0].attachment;
        assert_eq!(f.len(), 4);
        // processing the same end again skips
        let twice: Vec<_> = [ends[0].clone(), ends[0].clone()].to_vec();
        let state2 =
            iterate_cutoffs(&p, Rat::from_integer(3), &seed, &twice, 7).unwrap();
        assert!(state2.audit[1].skipped);
        assert_eq!(state2.pieces.len(), 1);
    }

    #[test]
    fn cut_all_ends_examples() {
        let p = make_presentation(&FamilySpec::CompleteChain { k: 4 }).unwrap();
        let seed: BTreeSet<_> = [vid(&[1, 0])].into();
        let res = cut_off_all_ends(&p, Rat::from_integer(3), 2, &seed, 7, 4).unwrap();
        assert!(res.rays_remaining.is_empty());
        assert!(!res.partial);
        assert!(res.degree_cover_violations.is_empty(), "{:?}", res.degree_cover_violations);

        // an empty catalog keeps everything
        let p = make_presentation(&FamilySpec::LayeredExplicit {
            layers: vec![vec![vid(&[0]), vid(&[1])]],
            edges: vec![(vid(&[0]), vid(&[1]))],
        })
        .unwrap();
        let seed: BTreeSet<_> = [vid(&[0])].into();
        let res = cut_off_all_ends(&p, Rat::from_integer(0), 1, &seed, 3, 1).unwrap();
        assert_eq!(res.kept.len(), 2);
        assert!(res.state.pieces.is_empty());
    }

    #[test]
    fn extract_apex_k1_is_topological() {
        let p = make_presentation(&FamilySpec::ApexTree { r: 3, apexes: 1 }).unwrap();
        let report = extract_dense_or_tkk(&p, Rat::from_integer(2), 1, 5, 64).unwrap();
        match &report.outcome {
            ExtractionOutcome::TopoClique(w) => {
                assert_eq!(w.branch_vertices, vec![vid(&[1, 0])]);
                assert!(w.paths.is_empty());
            }
            other => panic!("expected a topological witness, got {other:?}"),
        }
    }

    #[test]
    fn extract_chain_dense() {
        let p = make_presentation(&FamilySpec::CompleteChain { k: 5 }).unwrap();
        let report = extract_dense_or_tkk(&p, Rat::from_integer(4), 2, 6, 64).unwrap();
        match &report.outcome {
            ExtractionOutcome::DenseSubgraph { members, avg_degree } => {
                assert!(*avg_degree > Rat::from_integer(3));
                // recompute independently
                let t = build_truncation(&p, 6, EXPLORATION_CAP).unwrap();
                let back = crate::truncation::average_degree(&t, members).unwrap();
                assert_eq!(back, *avg_degree);
            }
            other => panic!("expected a dense subgraph, got {other:?}"),
        }
    }

    #[test]
    fn extract_hypothesis_failure_is_reported() {
        let p = make_presentation(&FamilySpec::ApexTree { r: 3, apexes: 1 }).unwrap();
        let err = extract_dense_or_tkk(&p, Rat::from_integer(4), 2, 5, 64);
        assert!(matches!(err, Err(Error::HypothesisNotMet(_))), "{err:?}");
    }

    #[test]
    fn extract_budget_trace_extends() {
        let p = make_presentation(&FamilySpec::CompleteChain { k: 4 }).unwrap();
        let report = extract_dense_or_tkk(&p, Rat::from_integer(2), 1, 7, 1).unwrap();
        match &report.outcome {
            ExtractionOutcome::BudgetExceeded { trace } => {
                let ray = koenig_ray(trace, trace.layers.len()).unwrap();
                assert_eq!(ray.len(), trace.layers.len());
            }
            other => panic!("expected budget exhaustion with a trace, got {other:?}"),
        }
    }

    #[test]
    fn extract_validates_topo_output() {
        let p = make_presentation(&FamilySpec::ApexTree { r: 3, apexes: 3 }).unwrap();
        let report = extract_dense_or_tkk(&p, Rat::new(1, 2), 3, 6, 64).unwrap();
        match &report.outcome {
            ExtractionOutcome::TopoClique(w) => {
                let t = build_truncation(&p, 6, EXPLORATION_CAP).unwrap();
                let g = FiniteGraph::from_truncation(&t);
                assert!(verify_topo_witness(&g, w).0);
                assert_eq!(w.paths.len(), 3);
            }
            other => panic!("expected a topological witness, got {other:?}"),
        }
    }
}
