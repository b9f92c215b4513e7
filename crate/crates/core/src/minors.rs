//! Complete-minor and topological-minor witnesses: independent verifiers,
//! budgeted heuristic searches with sound absence certificates, and the
//! construction of a topological clique from vertices dominating one end.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Error;
use crate::finite::FiniteGraph;
use crate::planarity::is_planar;
use crate::presentation::{EndHandle, GraphPresentation};
use crate::separators::{domination_certificate, DominationVerdict, EXPLORATION_CAP};
use crate::truncation::build_truncation;
use crate::vertex::VertexId;
use crate::Result;

#[derive(Clone, Debug)]
pub struct MinorWitness {
    pub branch_sets: Vec<BTreeSet<VertexId>>,
}

#[derive(Clone, Debug)]
pub struct TopoWitness {
    pub branch_vertices: Vec<VertexId>,
    /// One path per unordered pair, in lexicographic pair order over the
    /// branch vertex list.
    pub paths: Vec<Vec<VertexId>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotFoundReason {
    BudgetExhausted,
    /// A sound certificate rules the structure out (what kind is recorded).
    ProvablyAbsent(String),
}

#[derive(Clone, Debug)]
pub enum Search<W> {
    Found(W),
    NotFound(NotFoundReason),
}

impl<W> Search<W> {
    pub fn found(&self) -> Option<&W> {
        match self {
            Search::Found(w) => Some(w),
            Search::NotFound(_) => None,
        }
    }
}

// --- verifiers --------------------------------------------------------------

/// Check the branch-set definition: disjoint connected sets, every pair
/// joined by an edge. Violations are reported, not thrown.
pub fn verify_minor_witness(g: &FiniteGraph, w: &MinorWitness) -> (bool, Vec<String>) {
    let mut violations = Vec::new();
    for (i, set) in w.branch_sets.iter().enumerate() {
        if set.is_empty() {
            violations.push(format!("branch set {i} is empty"));
            continue;
        }
        for v in set {
            if !g.contains(v) {
                violations.push(format!("branch set {i}: vertex {v} not in graph"));
            }
        }
        if !g.is_connected_set(set) {
            violations.push(format!("branch set {i} is not connected"));
        }
    }
    for i in 0..w.branch_sets.len() {
        for j in (i + 1)..w.branch_sets.len() {
            let (a, b) = (&w.branch_sets[i], &w.branch_sets[j]);
            if a.intersection(b).next().is_some() {
                violations.push(format!("disjointness: branch sets {i} and {j} overlap"));
            }
            let joined = a
                .iter()
                .any(|u| g.neighbors(u).any(|x| b.contains(x)));
            if !joined {
                violations.push(format!("no edge between branch sets {i} and {j}"));
            }
        }
    }
    (violations.is_empty(), violations)
}

/// Check the subdivision definition: distinct branch vertices, one path per
/// pair with matching endpoints, all paths internally disjoint from each
/// other and from the branch vertices.
pub fn verify_topo_witness(g: &FiniteGraph, w: &TopoWitness) -> (bool, Vec<String>) {
    let mut violations = Vec::new();
    let k = w.branch_vertices.len();
    let branch: BTreeSet<&VertexId> = w.branch_vertices.iter().collect();
    if branch.len() != k {
        violations.push("branch vertices are not distinct".into());
    }
    for v in &w.branch_vertices {
        if !g.contains(v) {
            violations.push(format!("branch vertex {v} not in graph"));
        }
    }
    if w.paths.len() != k * k.saturating_sub(1) / 2 {
        violations.push(format!(
            "expected {} paths, got {}",
            k * k.saturating_sub(1) / 2,
            w.paths.len()
        ));
        return (false, violations);
    }
    let mut seen_internal: BTreeSet<&VertexId> = BTreeSet::new();
    let mut idx = 0;
    for i in 0..k {
        for j in (i + 1)..k {
            let path = &w.paths[idx];
            idx += 1;
            let (a, b) = (&w.branch_vertices[i], &w.branch_vertices[j]);
            if path.len() < 2 {
                violations.push(format!("path {i}-{j} is too short"));
                continue;
            }
            let ends_match = (path.first() == Some(a) && path.last() == Some(b))
                || (path.first() == Some(b) && path.last() == Some(a));
            if !ends_match {
                violations.push(format!("endpoint mismatch on path {i}-{j}"));
            }
            for w2 in path.windows(2) {
                if !g.has_edge(&w2[0], &w2[1]) {
                    violations.push(format!("path {i}-{j} uses a missing edge {} {}", w2[0], w2[1]));
                }
            }
            let interior = &path[1..path.len() - 1];
            let distinct: BTreeSet<&VertexId> = path.iter().collect();
            if distinct.len() != path.len() {
                violations.push(format!("path {i}-{j} repeats a vertex"));
            }
            for v in interior {
                if branch.contains(v) {
                    violations.push(format!("path {i}-{j} passes through branch vertex {v}"));
                }
                if !seen_internal.insert(v) {
                    violations.push(format!("internal disjointness: {v} used twice"));
                }
            }
        }
    }
    (violations.is_empty(), violations)
}

// --- sound absence certificates ----------------------------------------

/// Simple-graph reduction that empties exactly when the graph has no
/// complete minor of order four: repeatedly delete degree-one vertices and
/// smooth degree-two vertices.
fn reduces_to_empty_series_parallel(g: &FiniteGraph) -> bool {
    let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> = g
        .vertices()
        .map(|v| (v.clone(), g.neighbors(v).cloned().collect()))
        .collect();
    loop {
        let mut changed = false;
        let small: Vec<VertexId> = adj
            .iter()
            .filter(|(_, n)| n.len() <= 2)
            .map(|(v, _)| v.clone())
            .collect();
        for v in small {
            let Some(ns) = adj.get(&v) else { continue };
            let ns: Vec<VertexId> = ns.iter().cloned().collect();
            match ns.len() {
                0 | 1 => {
                    for u in &ns {
                        adj.get_mut(u).map(|s| s.remove(&v));
                    }
                    adj.remove(&v);
                    changed = true;
                }
                2 => {
                    let (a, b) = (&ns[0], &ns[1]);
                    adj.get_mut(a).map(|s| s.remove(&v));
                    adj.get_mut(b).map(|s| s.remove(&v));
                    adj.get_mut(a).map(|s| s.insert(b.clone()));
                    adj.get_mut(b).map(|s| s.insert(a.clone()));
                    adj.remove(&v);
                    changed = true;
                }
                _ => {}
            }
        }
        if adj.is_empty() {
            return true;
        }
        if !changed {
            return false;
        }
    }
}

// --- clique-minor search ------------------------------------------------

struct Contracted {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
    classes: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl Contracted {
    fn new(g: &FiniteGraph) -> Self {
        Contracted {
            adj: g
                .vertices()
                .map(|v| (v.clone(), g.neighbors(v).cloned().collect()))
                .collect(),
            classes: g.vertices().map(|v| (v.clone(), [v.clone()].into())).collect(),
        }
    }

    /// Merge the class of `b` into the class of `a`.
    fn contract(&mut self, a: &VertexId, b: &VertexId) {
        let bn = self.adj.remove(b).unwrap();
        let bc = self.classes.remove(b).unwrap();
        for u in &bn {
            if let Some(s) = self.adj.get_mut(u) {
                s.remove(b);
                if u != a {
                    s.insert(a.clone());
                }
            }
        }
        let an = self.adj.get_mut(a).unwrap();
        an.remove(b);
        an.extend(bn.into_iter().filter(|u| u != a && u != b));
        self.classes.get_mut(a).unwrap().extend(bc);
    }

    /// Deterministic greedy clique; returns the best clique found and the
    /// work spent (in adjacency probes).
    fn greedy_clique(&self, stop_at: usize) -> (Vec<VertexId>, u64) {
        let mut best: Vec<VertexId> = Vec::new();
        let mut work = 0u64;
        for seed in self.adj.keys() {
            let mut clique = vec![seed.clone()];
            let mut candidates: BTreeSet<VertexId> = self.adj[seed].clone();
            while !candidates.is_empty() {
                // candidate keeping the most options open
                let mut pick: Option<(usize, &VertexId)> = None;
                for c in &candidates {
                    let overlap = self.adj[c].intersection(&candidates).count();
                    work += 1;
                    if pick.is_none() || overlap > pick.unwrap().0 {
                        pick = Some((overlap, c));
                    }
                }
                let chosen = pick.unwrap().1.clone();
                candidates = self.adj[&chosen]
                    .intersection(&candidates)
                    .cloned()
                    .collect();
                candidates.remove(&chosen);
                clique.push(chosen);
            }
            if clique.len() > best.len() {
                best = clique;
                if best.len() >= stop_at {
                    return (best, work);
                }
            }
        }
        (best, work)
    }

    /// Edge whose contraction keeps the graph densest: maximal common
    /// neighborhood, then maximal degree sum, then smallest endpoints.
    fn best_edge(&self) -> (Option<(VertexId, VertexId)>, u64) {
        let mut best: Option<(usize, usize, VertexId, VertexId)> = None;
        let mut work = 0u64;
        for (u, ns) in &self.adj {
            for v in ns {
                if v <= u {
                    continue;
                }
                work += 1;
                let common = self.adj[u].intersection(&self.adj[v]).count();
                let degsum = self.adj[u].len() + self.adj[v].len();
                let better = match &best {
                    None => true,
                    Some((c, d, bu, bv)) => {
                        (common, degsum) > (*c, *d)
                            || ((common, degsum) == (*c, *d) && (u, v) < (&bu.clone(), &bv.clone()))
                    }
                };
                if better {
                    best = Some((common, degsum, u.clone(), v.clone()));
                }
            }
        }
        (best.map(|(_, _, u, v)| (u, v)), work)
    }
}

/// Heuristic search for a complete minor of order `k`: greedy densest-edge
/// contraction, checking for a clique of contracted classes at every stage.
/// Returns a verified witness, a sound absence certificate (planarity for
/// order five, reduction for small orders), or an honest budget exhaustion.
/// The contraction path does not depend on `k`, so success at `k` implies
/// success at `k - 1` (the clique restricts).
pub fn find_clique_minor(g: &FiniteGraph, k: usize, budget: u64) -> Search<MinorWitness> {
    if k == 0 {
        return Search::Found(MinorWitness { branch_sets: Vec::new() });
    }
    if g.vertex_count() < k {
        return Search::NotFound(NotFoundReason::ProvablyAbsent("order".into()));
    }
    if k == 1 {
        let v = g.vertices().next().unwrap().clone();
        return Search::Found(MinorWitness { branch_sets: vec![[v].into()] });
    }
    if k == 2 && g.edge_count() == 0 {
        return Search::NotFound(NotFoundReason::ProvablyAbsent("edgeless".into()));
    }
    if k == 3 && !g.has_cycle() {
        return Search::NotFound(NotFoundReason::ProvablyAbsent("forest".into()));
    }
    if k == 4 && reduces_to_empty_series_parallel(g) {
        return Search::NotFound(NotFoundReason::ProvablyAbsent("series-parallel".into()));
    }
    if k >= 5 && is_planar(g) {
        return Search::NotFound(NotFoundReason::ProvablyAbsent("planarity".into()));
    }

    let mut state = Contracted::new(g);
    let mut budget = budget;
    loop {
        let (clique, work) = state.greedy_clique(k);
        if budget <= work {
            return Search::NotFound(NotFoundReason::BudgetExhausted);
        }
        budget -= work;
        if clique.len() >= k {
            let branch_sets: Vec<BTreeSet<VertexId>> = clique
                .into_iter()
                .take(k)
                .map(|root| state.classes[&root].clone())
                .collect();
            let w = MinorWitness { branch_sets };
            let (ok, violations) = verify_minor_witness(g, &w);
            assert!(ok, "search produced an invalid witness: {violations:?}");
            return Search::Found(w);
        }
        let (edge, work) = state.best_edge();
        if budget <= work {
            return Search::NotFound(NotFoundReason::BudgetExhausted);
        }
        budget -= work;
        match edge {
            Some((u, v)) => state.contract(&u, &v),
            None => return Search::NotFound(NotFoundReason::BudgetExhausted),
        }
    }
}

// --- topological clique search -------------------------------------------

/// Route one path per branch pair, greedily but deterministically: highest
/// degree candidates first, breadth-first shortest paths avoiding all other
/// branch vertices and previously used interiors.
pub fn find_topological_clique(g: &FiniteGraph, k: usize, budget: u64) -> Search<TopoWitness> {
    if k == 0 {
        return Search::Found(TopoWitness { branch_vertices: Vec::new(), paths: Vec::new() });
    }
    if g.vertex_count() < k {
        return Search::NotFound(NotFoundReason::ProvablyAbsent("order".into()));
    }
    if k == 1 {
        let v = g.vertices().next().unwrap().clone();
        return Search::Found(TopoWitness { branch_vertices: vec![v], paths: Vec::new() });
    }
    if k >= 3 && !g.has_cycle() {
        return Search::NotFound(NotFoundReason::ProvablyAbsent("forest".into()));
    }
    let mut ranked: Vec<VertexId> = g.vertices().cloned().collect();
    ranked.sort_by(|a, b| g.degree(b).cmp(&g.degree(a)).then(a.cmp(b)));
    let eligible: Vec<VertexId> = ranked
        .into_iter()
        .filter(|v| g.degree(v) >= k - 1)
        .collect();
    if eligible.len() < k {
        return Search::NotFound(NotFoundReason::ProvablyAbsent("degrees".into()));
    }
    let pool: Vec<VertexId> = eligible.into_iter().take(k + 8).collect();

    let mut budget = budget;
    let mut combo_indices: Vec<usize> = (0..k).collect();
    loop {
        if budget == 0 {
            return Search::NotFound(NotFoundReason::BudgetExhausted);
        }
        budget -= 1;
        let branch: Vec<VertexId> = combo_indices.iter().map(|&i| pool[i].clone()).collect();
        if let Some(w) = try_route(g, &branch, &mut budget) {
            let (ok, violations) = verify_topo_witness(g, &w);
            assert!(ok, "routing produced an invalid witness: {violations:?}");
            return Search::Found(w);
        }
        if !advance_combination(&mut combo_indices, pool.len()) {
            return Search::NotFound(NotFoundReason::BudgetExhausted);
        }
    }
}

fn advance_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - (k - i) {
            idx[i] += 1;
            for j in (i + 1)..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn try_route(g: &FiniteGraph, branch: &[VertexId], budget: &mut u64) -> Option<TopoWitness> {
    let branch_set: BTreeSet<VertexId> = branch.iter().cloned().collect();
    let mut used_internal: BTreeSet<VertexId> = BTreeSet::new();
    let mut paths = Vec::new();
    for i in 0..branch.len() {
        for j in (i + 1)..branch.len() {
            if *budget == 0 {
                return None;
            }
            *budget -= 1;
            let (a, b) = (&branch[i], &branch[j]);
            let mut allowed: BTreeSet<VertexId> = g
                .vertices()
                .filter(|v| !branch_set.contains(*v) && !used_internal.contains(*v))
                .cloned()
                .collect();
            allowed.insert(a.clone());
            allowed.insert(b.clone());
            let path = g.shortest_path_within(a, b, &allowed)?;
            for v in &path[1..path.len() - 1] {
                used_internal.insert(v.clone());
            }
            paths.push(path);
        }
    }
    Some(TopoWitness { branch_vertices: branch.to_vec(), paths })
}

// --- topological clique from dominating vertices ---------------------------

/// Build a subdivided complete graph whose branch vertices all dominate the
/// same end: connect each new branch vertex to its predecessors one path at
/// a time, always routing through the escape component that still holds the
/// end's canonical ray.
pub fn tkk_from_dominators(
    p: &GraphPresentation,
    end: &EndHandle,
    branch: &BTreeSet<VertexId>,
    depth: u32,
) -> Result<TopoWitness> {
    if p.end(end.name()).is_none() {
        return Err(Error::EndNotInCatalog(end.name().to_string()));
    }
    for s in branch {
        let cert = domination_certificate(p, s, end, depth)?;
        if let DominationVerdict::SeparatedBy(sep) = cert.verdict {
            return Err(Error::InvalidParams(format!(
                "{s} does not dominate `{}` up to depth {depth} (separated by {} vertices)",
                end.name(),
                sep.len()
            )));
        }
    }
    let t = build_truncation(p, depth, EXPLORATION_CAP)?;
    let g = FiniteGraph::from_truncation(&t);
    let order: Vec<VertexId> = branch.iter().cloned().collect();
    let mut used: BTreeSet<VertexId> = branch.clone();
    let mut paths_by_pair: BTreeMap<(usize, usize), Vec<VertexId>> = BTreeMap::new();
    for j in 1..order.len() {
        for i in 0..j {
            let pivot = end
                .ray_prefix_in(&t.vertices)
                .into_iter()
                .rev()
                .find(|v| !used.contains(v))
                .ok_or(Error::NotFoundAtDepth { depth })?;
            let comp = t.component_of(&pivot, &used);
            let escapes = comp.iter().any(|v| t.unknown_neighbors(v));
            if !escapes {
                return Err(Error::NotFoundAtDepth { depth });
            }
            let mut allowed: BTreeSet<VertexId> = comp;
            allowed.insert(order[i].clone());
            allowed.insert(order[j].clone());
            let path = g
                .shortest_path_within(&order[i], &order[j], &allowed)
                .ok_or(Error::NotFoundAtDepth { depth })?;
            for v in &path[1..path.len() - 1] {
                used.insert(v.clone());
            }
            paths_by_pair.insert((i, j), path);
        }
    }
    let mut paths = Vec::new();
    for i in 0..order.len() {
        for j in (i + 1)..order.len() {
            paths.push(paths_by_pair.remove(&(i, j)).unwrap());
        }
    }
    let w = TopoWitness { branch_vertices: order, paths };
    let (ok, violations) = verify_topo_witness(&g, &w);
    if !ok {
        return Err(Error::InvalidPresentation(format!(
            "dominator routing produced an invalid witness: {violations:?}"
        )));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_presentation, FamilySpec};
    use crate::truncation::DegreeCap;
    use crate::vertex::vid;

    fn complete(n: i64) -> FiniteGraph {
        let edges: Vec<_> = (0..n)
            .flat_map(|a| ((a + 1)..n).map(move |b| (vid(&[a]), vid(&[b]))))
            .collect();
        FiniteGraph::from_edges(&edges)
    }

    #[test]
    fn verify_minor_examples() {
        let k5 = complete(5);
        let w = MinorWitness {
            branch_sets: (0..5).map(|i| [vid(&[i])].into()).collect(),
        };
        assert!(verify_minor_witness(&k5, &w).0);

        let mut shared = w.clone();
        shared.branch_sets[1] = [vid(&[0])].into();
        let (ok, violations) = verify_minor_witness(&k5, &shared);
        assert!(!ok);
        assert!(violations.iter().any(|v| v.contains("disjointness")));

        // C4 has no complete minor of order 4: singleton sets miss diagonals
        let c4 = FiniteGraph::from_edges(&[
            (vid(&[0]), vid(&[1])),
            (vid(&[1]), vid(&[2])),
            (vid(&[2]), vid(&[3])),
            (vid(&[3]), vid(&[0])),
        ]);
        let w = MinorWitness {
            branch_sets: (0..4).map(|i| [vid(&[i])].into()).collect(),
        };
        let (ok, violations) = verify_minor_witness(&c4, &w);
        assert!(!ok);
        assert!(violations.iter().any(|v| v.contains("no edge")));
    }

    #[test]
    fn verify_topo_examples() {
        let k4 = complete(4);
        let mut paths = Vec::new();
        for i in 0..4i64 {
            for j in (i + 1)..4 {
                paths.push(vec![vid(&[i]), vid(&[j])]);
            }
        }
        let w = TopoWitness {
            branch_vertices: (0..4).map(|i| vid(&[i])).collect(),
            paths,
        };
        assert!(verify_topo_witness(&k4, &w).0);

        // shared internal vertex
        let mut g = complete(4);
        g.add_edge(vid(&[0]), vid(&[9]));
        g.add_edge(vid(&[9]), vid(&[1]));
        g.add_edge(vid(&[2]), vid(&[9]));
        let mut w2 = w.clone();
        w2.paths[0] = vec![vid(&[0]), vid(&[9]), vid(&[1])];
        w2.paths[1] = vec![vid(&[0]), vid(&[9]), vid(&[2])];
        let (ok, violations) = verify_topo_witness(&g, &w2);
        assert!(!ok);
        assert!(violations.iter().any(|v| v.contains("internal disjointness")));

        // endpoint mismatch
        let mut w3 = w.clone();
        w3.paths[0] = vec![vid(&[2]), vid(&[3])];
        let (ok, violations) = verify_topo_witness(&k4, &w3);
        assert!(!ok);
        assert!(violations.iter().any(|v| v.contains("endpoint mismatch")));
    }

    #[test]
    fn find_minor_positive_and_negative() {
        let k6 = complete(6);
        let found = find_clique_minor(&k6, 6, 10_000);
        assert!(found.found().is_some());

        // tree: order-3 minors need a cycle
        let tree = FiniteGraph::from_edges(&[
            (vid(&[0]), vid(&[1])),
            (vid(&[0]), vid(&[2])),
            (vid(&[1]), vid(&[3])),
        ]);
        match find_clique_minor(&tree, 3, 10_000) {
            Search::NotFound(NotFoundReason::ProvablyAbsent(c)) => assert_eq!(c, "forest"),
            other => panic!("expected provable absence, got {other:?}"),
        }

        // planar blowup: planarity rules out order 5
        let p = make_presentation(&FamilySpec::PlanarBlowup { rounds: 2, t: 3 }).unwrap();
        let t = build_truncation(&p, 6, DegreeCap::Unlimited).unwrap();
        let g = FiniteGraph::from_truncation(&t);
        match find_clique_minor(&g, 5, 1_000_000) {
            Search::NotFound(NotFoundReason::ProvablyAbsent(c)) => assert_eq!(c, "planarity"),
            other => panic!("expected planarity certificate, got {other:?}"),
        }
    }

    #[test]
    fn minor_monotone_under_k() {
        let p = make_presentation(&FamilySpec::CompleteChain { k: 5 }).unwrap();
        let t = build_truncation(&p, 3, DegreeCap::Unlimited).unwrap();
        let g = FiniteGraph::from_truncation(&t);
        for k in (1..=5).rev() {
            let res = find_clique_minor(&g, k, 1_000_000);
            assert!(res.found().is_some(), "chain truncation must contain order {k}");
        }
    }

    #[test]
    fn find_topo_examples() {
        let k5 = complete(5);
        let w = find_topological_clique(&k5, 5, 100_000);
        assert!(w.found().is_some());

        // subdivided complete bipartite graph contains a topological triangle
        let mut g = FiniteGraph::new();
        for (i, a) in (0..3i64).flat_map(|a| (0..3i64).map(move |b| (a, b))).enumerate() {
            let mid = vid(&[2, i as i64]);
            g.add_edge(vid(&[0, a.0]), mid.clone());
            g.add_edge(mid, vid(&[1, a.1]));
        }
        assert!(g.has_cycle());
        let w = find_topological_clique(&g, 3, 100_000);
        assert!(w.found().is_some(), "subdivision routing failed");

        let tree = FiniteGraph::from_edges(&[
            (vid(&[0]), vid(&[1])),
            (vid(&[1]), vid(&[2])),
        ]);
        match find_topological_clique(&tree, 3, 100_000) {
            Search::NotFound(NotFoundReason::ProvablyAbsent(_)) => {}
            other => panic!("expected absence on a tree, got {other:?}"),
        }
    }

    #[test]
    fn dominator_tkk() {
        // two apexes: a single path through any common neighbor
        let p = make_presentation(&FamilySpec::ApexTree { r: 3, apexes: 2 }).unwrap();
        let end = p.end("branch-0-first").unwrap().clone();
        let branch: BTreeSet<_> = [vid(&[1, 0]), vid(&[1, 1])].into();
        let w = tkk_from_dominators(&p, &end, &branch, 5).unwrap();
        assert_eq!(w.paths.len(), 1);

        // three apexes: three internally disjoint paths
        let p = make_presentation(&FamilySpec::ApexTree { r: 3, apexes: 3 }).unwrap();
        let end = p.end("branch-0-first").unwrap().clone();
        let branch: BTreeSet<_> = (0..3).map(|j| vid(&[1, j])).collect();
        let w = tkk_from_dominators(&p, &end, &branch, 6).unwrap();
        assert_eq!(w.paths.len(), 3);
        let t = build_truncation(&p, 6, EXPLORATION_CAP).unwrap();
        let g = FiniteGraph::from_truncation(&t);
        assert!(verify_topo_witness(&g, &w).0);

        // the empty witness is the base case
        let w = tkk_from_dominators(&p, &end, &BTreeSet::new(), 4).unwrap();
        assert!(w.branch_vertices.is_empty() && w.paths.is_empty());
    }
}
