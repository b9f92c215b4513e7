use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::Error;
use crate::presentation::GraphPresentation;
use crate::vertex::{Edge, VertexId};
use crate::{Rat, Result};

/// Cap on how many neighbors of a single vertex are enumerated, making
/// non-locally-finite presentations explorable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeCap {
    Unlimited,
    Max(u32),
}

/// A finite explored portion of a presentation: the breadth-first ball of a
/// given radius around the root.
///
/// `interior` holds the vertices whose neighbor streams were enumerated
/// (possibly cut at the degree cap, in which case the vertex is in `capped`);
/// `frontier` holds vertices with possibly-missing neighbors. Interior and
/// frontier partition the vertex set.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<Edge>,
    pub interior: BTreeSet<VertexId>,
    pub frontier: BTreeSet<VertexId>,
    pub capped: BTreeSet<VertexId>,
    pub radius: u32,
    pub degree_cap: DegreeCap,
    pub dist: BTreeMap<VertexId, u32>,
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

/// Breadth-first ball of the given radius around the presentation's root,
/// enumerating at most `cap` neighbors per vertex.
pub fn build_truncation(
    p: &GraphPresentation,
    radius: u32,
    cap: DegreeCap,
) -> Result<Truncation> {
    if cap == DegreeCap::Max(0) && radius > 0 {
        return Err(Error::EmptyExpansion);
    }
    let root = p.root().clone();
    let mut dist: BTreeMap<VertexId, u32> = BTreeMap::new();
    let mut edges: BTreeSet<Edge> = BTreeSet::new();
    let mut capped: BTreeSet<VertexId> = BTreeSet::new();
    let mut incomplete: BTreeSet<VertexId> = BTreeSet::new();
    let mut queue = VecDeque::new();
    dist.insert(root.clone(), 0);
    queue.push_back(root);

    while let Some(v) = queue.pop_front() {
        let dv = dist[&v];
        if p.incomplete(&v) {
            incomplete.insert(v.clone());
        }
        if dv >= radius {
            continue;
        }
        let mut stream = p.neighbors(&v);
        let mut taken = 0u32;
        loop {
            if let DegreeCap::Max(c) = cap {
                if taken >= c {
                    // Only flag the cut when the stream actually had more.
                    if stream.next().is_some() {
                        capped.insert(v.clone());
                    }
                    break;
                }
            }
            let Some(u) = stream.next() else { break };
            taken += 1;
            if u == v {
                return Err(Error::InvalidPresentation(format!(
                    "oracle emitted a self-loop at {v}"
                )));
            }
            edges.insert(Edge::new(v.clone(), u.clone()));
            if !dist.contains_key(&u) {
                dist.insert(u.clone(), dv + 1);
                queue.push_back(u);
            }
        }
    }

    let vertices: BTreeSet<VertexId> = dist.keys().cloned().collect();
    let mut frontier: BTreeSet<VertexId> = dist
        .iter()
        .filter(|(_, d)| **d == radius)
        .map(|(v, _)| v.clone())
        .collect();
    frontier.extend(incomplete);
    capped.retain(|v| !frontier.contains(v));
    let interior: BTreeSet<VertexId> =
        vertices.difference(&frontier).cloned().collect();

    let t = Truncation::assemble(vertices, edges, interior, frontier, capped, radius, cap, dist)?;
    t.check_symmetry(p)?;
    Ok(t)
}

impl Truncation {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        vertices: BTreeSet<VertexId>,
        edges: BTreeSet<Edge>,
        interior: BTreeSet<VertexId>,
        frontier: BTreeSet<VertexId>,
        capped: BTreeSet<VertexId>,
        radius: u32,
        degree_cap: DegreeCap,
        dist: BTreeMap<VertexId, u32>,
    ) -> Result<Truncation> {
        let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> =
            vertices.iter().map(|v| (v.clone(), BTreeSet::new())).collect();
        for e in &edges {
            let (u, v) = e.ends();
            if !vertices.contains(u) || !vertices.contains(v) {
                return Err(Error::InvalidPresentation(format!(
                    "edge {e} has an endpoint outside the vertex set"
                )));
            }
            adj.get_mut(u).unwrap().insert(v.clone());
            adj.get_mut(v).unwrap().insert(u.clone());
        }
        Ok(Truncation {
            vertices,
            edges,
            interior,
            frontier,
            capped,
            radius,
            degree_cap,
            dist,
            adj,
        })
    }

    /// Truncation for an explicit finite edge list; every vertex interior.
    pub fn from_edges(edges: &[(VertexId, VertexId)]) -> Result<Truncation> {
        let mut vs = BTreeSet::new();
        let mut es = BTreeSet::new();
        for (u, v) in edges {
            vs.insert(u.clone());
            vs.insert(v.clone());
            es.insert(Edge::new(u.clone(), v.clone()));
        }
        let interior = vs.clone();
        Truncation::assemble(
            vs,
            es,
            interior,
            BTreeSet::new(),
            BTreeSet::new(),
            0,
            DegreeCap::Unlimited,
            BTreeMap::new(),
        )
    }

    /// Enumerated neighbors of `v` within the truncation.
    pub fn neighbors(&self, v: &VertexId) -> impl Iterator<Item = &VertexId> + '_ {
        self.adj.get(v).into_iter().flatten()
    }

    pub fn degree(&self, v: &VertexId) -> usize {
        self.adj.get(v).map_or(0, |s| s.len())
    }

    pub fn contains_edge(&self, u: &VertexId, v: &VertexId) -> bool {
        self.adj.get(u).is_some_and(|s| s.contains(v))
    }

    /// True when the vertex may have neighbors the truncation does not know.
    pub fn unknown_neighbors(&self, v: &VertexId) -> bool {
        self.frontier.contains(v) || self.capped.contains(v)
    }

    /// Induced sub-truncation on `allowed`. Deleting vertices keeps the
    /// remaining adjacency knowledge complete, so interior stays interior.
    pub fn induced(&self, allowed: &BTreeSet<VertexId>) -> Truncation {
        let vertices: BTreeSet<_> = self.vertices.intersection(allowed).cloned().collect();
        let edges: BTreeSet<_> = self
            .edges
            .iter()
            .filter(|e| vertices.contains(e.ends().0) && vertices.contains(e.ends().1))
            .cloned()
            .collect();
        let interior = self.interior.intersection(&vertices).cloned().collect();
        let frontier = self.frontier.intersection(&vertices).cloned().collect();
        let capped = self.capped.intersection(&vertices).cloned().collect();
        let dist = self
            .dist
            .iter()
            .filter(|(v, _)| vertices.contains(*v))
            .map(|(v, d)| (v.clone(), *d))
            .collect();
        Truncation::assemble(
            vertices, edges, interior, frontier, capped, self.radius, self.degree_cap, dist,
        )
        .expect("induced subgraph of a valid truncation")
    }

    pub fn without(&self, removed: &BTreeSet<VertexId>) -> Truncation {
        let allowed: BTreeSet<_> = self.vertices.difference(removed).cloned().collect();
        self.induced(&allowed)
    }

    /// Re-enumerates interior streams and checks the oracle is symmetric and
    /// loop-free on what the truncation saw.
    fn check_symmetry(&self, p: &GraphPresentation) -> Result<()> {
        for v in &self.interior {
            if self.capped.contains(v) {
                continue;
            }
            for u in self.neighbors(v) {
                if self.interior.contains(u) && !self.capped.contains(u) {
                    let mut found = false;
                    for w in p.neighbors(u) {
                        if &w == v {
                            found = true;
                            break;
                        }
                    }
                    if !found {
                        return Err(Error::InvalidPresentation(format!(
                            "oracle is asymmetric: {v} lists {u} but not conversely"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Connected components of the truncation minus `removed`, each flagged
    /// with whether it contains a frontier or capped vertex (the finite
    /// proxy for "contains a ray").
    pub fn escape_components(&self, removed: &BTreeSet<VertexId>) -> Vec<EscapeComponent> {
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        let mut out = Vec::new();
        for start in &self.vertices {
            if removed.contains(start) || seen.contains(start) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::new();
            queue.push_back(start.clone());
            seen.insert(start.clone());
            while let Some(v) = queue.pop_front() {
                comp.insert(v.clone());
                for u in self.neighbors(&v) {
                    if !removed.contains(u) && seen.insert(u.clone()) {
                        queue.push_back(u.clone());
                    }
                }
            }
            let escapes = comp.iter().any(|v| self.unknown_neighbors(v));
            out.push(EscapeComponent { vertices: comp, escapes });
        }
        out
    }

    /// Component of the truncation minus `removed` containing `v`.
    pub fn component_of(
        &self,
        v: &VertexId,
        removed: &BTreeSet<VertexId>,
    ) -> BTreeSet<VertexId> {
        let mut comp = BTreeSet::new();
        if removed.contains(v) || !self.vertices.contains(v) {
            return comp;
        }
        let mut queue = VecDeque::new();
        comp.insert(v.clone());
        queue.push_back(v.clone());
        while let Some(w) = queue.pop_front() {
            for u in self.neighbors(&w) {
                if !removed.contains(u) && !comp.contains(u) {
                    comp.insert(u.clone());
                    queue.push_back(u.clone());
                }
            }
        }
        comp
    }

    pub fn is_connected(&self, members: &BTreeSet<VertexId>) -> bool {
        let Some(first) = members.iter().next() else { return true };
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(first.clone());
        queue.push_back(first.clone());
        while let Some(v) = queue.pop_front() {
            for u in self.neighbors(&v) {
                if members.contains(u) && seen.insert(u.clone()) {
                    queue.push_back(u.clone());
                }
            }
        }
        seen.len() == members.len()
    }

    /// Number of edges of the induced subgraph on `members`.
    pub fn induced_edge_count(&self, members: &BTreeSet<VertexId>) -> usize {
        self.edges
            .iter()
            .filter(|e| members.contains(e.ends().0) && members.contains(e.ends().1))
            .count()
    }

    /// Edges from `from` into `into` (both endpoints distinct), counted once
    /// per ordered pair with the `from` endpoint distinguished.
    pub fn degree_into(&self, v: &VertexId, into: &BTreeSet<VertexId>) -> usize {
        self.neighbors(v).filter(|u| into.contains(*u)).count()
    }
}

#[derive(Clone, Debug)]
pub struct EscapeComponent {
    pub vertices: BTreeSet<VertexId>,
    pub escapes: bool,
}

/// Result of a boundary computation, flagged unreliable when the computed
/// vertex-boundary touches a vertex with possibly-missing neighbors.
#[derive(Clone, Debug)]
pub struct Boundaries {
    pub vertex_boundary: BTreeSet<VertexId>,
    pub edge_boundary: BTreeSet<Edge>,
    pub reliable: bool,
}

/// Vertex- and edge-boundary of `members` within the truncation: the members
/// with a neighbor outside, and the edges joining members to non-members.
pub fn boundaries(t: &Truncation, members: &BTreeSet<VertexId>) -> Result<Boundaries> {
    for v in members {
        if !t.vertices.contains(v) {
            return Err(Error::UnknownVertex(v.to_string()));
        }
    }
    let mut vertex_boundary = BTreeSet::new();
    let mut edge_boundary = BTreeSet::new();
    for e in &t.edges {
        let (u, v) = e.ends();
        let iu = members.contains(u);
        let iv = members.contains(v);
        if iu != iv {
            edge_boundary.insert(e.clone());
            vertex_boundary.insert(if iu { u.clone() } else { v.clone() });
        }
    }
    let reliable = vertex_boundary.iter().all(|v| !t.unknown_neighbors(v));
    Ok(Boundaries { vertex_boundary, edge_boundary, reliable })
}

/// Average degree `2·|E(G[members])| / |members|` as an exact rational.
pub fn average_degree(t: &Truncation, members: &BTreeSet<VertexId>) -> Result<Rat> {
    if members.is_empty() {
        return Err(Error::EmptyMembers);
    }
    for v in members {
        if !t.vertices.contains(v) {
            return Err(Error::UnknownVertex(v.to_string()));
        }
    }
    let e = t.induced_edge_count(members) as i64;
    Ok(Rat::new(2 * e, members.len() as i64))
}

// --- text format -----------------------------------------------------------

const HEADER: &str = "endgraph-trunc v1";

impl Truncation {
    /// Deterministic text form: header, `V` lines, `F` lines, `E` lines, all
    /// sorted by vertex order. Capped vertices are written as frontier since
    /// both stand for "neighbors may be missing".
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(HEADER);
        out.push('\n');
        for v in &self.vertices {
            out.push_str(&format!("V {v}\n"));
        }
        let mut unknown: BTreeSet<&VertexId> = self.frontier.iter().collect();
        unknown.extend(self.capped.iter());
        for v in unknown {
            out.push_str(&format!("F {v}\n"));
        }
        for e in &self.edges {
            out.push_str(&format!("E {e}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Truncation> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == HEADER => {}
            other => {
                return Err(Error::Parse(format!(
                    "expected `{HEADER}` header, got {other:?}"
                )))
            }
        }
        let mut vertices = BTreeSet::new();
        let mut frontier = BTreeSet::new();
        let mut edges = BTreeSet::new();
        for (n, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (tag, rest) = line
                .split_once(' ')
                .ok_or_else(|| Error::Parse(format!("line {}: `{line}`", n + 2)))?;
            match tag {
                "V" => {
                    vertices.insert(rest.parse::<VertexId>()?);
                }
                "F" => {
                    let v = rest.parse::<VertexId>()?;
                    if !vertices.contains(&v) {
                        return Err(Error::Parse(format!("frontier id {v} not declared")));
                    }
                    frontier.insert(v);
                }
                "E" => {
                    let (a, b) = rest
                        .split_once(' ')
                        .ok_or_else(|| Error::Parse(format!("bad edge line `{line}`")))?;
                    let u = a.parse::<VertexId>()?;
                    let v = b.parse::<VertexId>()?;
                    if !vertices.contains(&u) || !vertices.contains(&v) {
                        return Err(Error::Parse(format!("edge {u} {v} uses undeclared id")));
                    }
                    edges.insert(Edge::new(u, v));
                }
                _ => return Err(Error::Parse(format!("unknown tag `{tag}`"))),
            }
        }
        let interior: BTreeSet<_> = vertices.difference(&frontier).cloned().collect();
        Truncation::assemble(
            vertices,
            edges,
            interior,
            frontier,
            BTreeSet::new(),
            0,
            DegreeCap::Unlimited,
            BTreeMap::new(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_presentation, FamilySpec};
    use crate::vertex::vid;

    fn tree3() -> GraphPresentation {
        make_presentation(&FamilySpec::RegularTree { r: 3 }).unwrap()
    }

    #[test]
    fn tree_ball_counts() {
        let t = build_truncation(&tree3(), 2, DegreeCap::Unlimited).unwrap();
        assert_eq!(t.vertices.len(), 10); // 1 + 3 + 6
        assert_eq!(t.edges.len(), 9);
        assert_eq!(t.frontier.len(), 6);
        assert!(t.capped.is_empty());
    }

    #[test]
    fn apex_cap_cuts_stream() {
        let p = make_presentation(&FamilySpec::ApexTree { r: 3, apexes: 1 }).unwrap();
        let t = build_truncation(&p, 1, DegreeCap::Max(5)).unwrap();
        assert_eq!(t.vertices.len(), 6);
        assert!(t.capped.contains(p.root()));
    }

    #[test]
    fn cap_zero_rejected() {
        let p = tree3();
        assert!(matches!(
            build_truncation(&p, 2, DegreeCap::Max(0)),
            Err(Error::EmptyExpansion)
        ));
    }

    #[test]
    fn chain_ball_radius_two() {
        let p = make_presentation(&FamilySpec::CompleteChain { k: 4 }).unwrap();
        let t = build_truncation(&p, 2, DegreeCap::Unlimited).unwrap();
        assert_eq!(t.vertices.len(), 12); // copies 1..=3
        // Expected edges by direct enumeration: inside copy 1 and 2, the two
        // bipartite links, but nothing inside the frontier copy 3.
        let mut expected = BTreeSet::new();
        for i in 1..=2i64 {
            for a in 0..4 {
                for b in (a + 1)..4 {
                    expected.insert(Edge::new(vid(&[i, a]), vid(&[i, b])));
                }
            }
        }
        for i in 1..=2i64 {
            for a in 0..4 {
                for b in 0..4 {
                    expected.insert(Edge::new(vid(&[i, a]), vid(&[i + 1, b])));
                }
            }
        }
        assert_eq!(t.edges, expected);
        assert_eq!(t.edges.len(), 44);
    }

    #[test]
    fn monotone_restriction() {
        // The radius-3 ball restricted to the radius-2 semantics equals the
        // radius-2 ball: distances agree and no extra interior edges appear.
        let p = tree3();
        let t2 = build_truncation(&p, 2, DegreeCap::Unlimited).unwrap();
        let t3 = build_truncation(&p, 3, DegreeCap::Unlimited).unwrap();
        let within: BTreeSet<_> = t3
            .dist
            .iter()
            .filter(|(_, d)| **d <= 2)
            .map(|(v, _)| v.clone())
            .collect();
        assert_eq!(within, t2.vertices);
        for e in &t2.edges {
            assert!(t3.edges.contains(e));
        }
        for v in &t2.interior {
            assert_eq!(
                t2.neighbors(v).collect::<Vec<_>>(),
                t3.neighbors(v).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn boundaries_on_chain() {
        let p = make_presentation(&FamilySpec::CompleteChain { k: 4 }).unwrap();
        let t = build_truncation(&p, 4, DegreeCap::Unlimited).unwrap();
        // one interior copy
        let copy2: BTreeSet<_> = (0..4).map(|j| vid(&[2, j])).collect();
        let b = boundaries(&t, &copy2).unwrap();
        assert_eq!(b.vertex_boundary.len(), 4);
        assert_eq!(b.edge_boundary.len(), 32);
        assert!(b.reliable);
        // the tail from copy 3 onwards
        let tail: BTreeSet<_> = t
            .vertices
            .iter()
            .filter(|v| v.tokens()[0] >= 3)
            .cloned()
            .collect();
        let b = boundaries(&t, &tail).unwrap();
        assert_eq!(b.vertex_boundary.len(), 4);
        assert_eq!(b.edge_boundary.len(), 16);
        assert!(b.reliable);
    }

    #[test]
    fn boundaries_single_tree_vertex() {
        let p = tree3();
        let t = build_truncation(&p, 3, DegreeCap::Unlimited).unwrap();
        let v = vid(&[0, 1]);
        let members: BTreeSet<_> = [v.clone()].into();
        let b = boundaries(&t, &members).unwrap();
        assert_eq!(b.vertex_boundary, members);
        assert_eq!(b.edge_boundary.len(), 3);
    }

    #[test]
    fn boundaries_empty_and_unreliable() {
        let p = tree3();
        let t = build_truncation(&p, 2, DegreeCap::Unlimited).unwrap();
        let b = boundaries(&t, &BTreeSet::new()).unwrap();
        assert!(b.vertex_boundary.is_empty() && b.edge_boundary.is_empty());
        // a frontier vertex on the boundary makes the answer unreliable
        let members: BTreeSet<_> = [vid(&[0, 0, 0])].into();
        let b = boundaries(&t, &members).unwrap();
        assert!(!b.reliable);
    }

    #[test]
    fn average_degree_examples() {
        let k5: Vec<_> = (0..5)
            .flat_map(|a| ((a + 1)..5).map(move |b| (vid(&[a]), vid(&[b]))))
            .collect();
        let t = Truncation::from_edges(&k5).unwrap();
        let all = t.vertices.clone();
        assert_eq!(average_degree(&t, &all).unwrap(), Rat::from_integer(4));

        let path = Truncation::from_edges(&[(vid(&[0]), vid(&[1])), (vid(&[1]), vid(&[2]))])
            .unwrap();
        let all = path.vertices.clone();
        assert_eq!(average_degree(&path, &all).unwrap(), Rat::new(4, 3));
        assert!(matches!(
            average_degree(&path, &BTreeSet::new()),
            Err(Error::EmptyMembers)
        ));
    }

    #[test]
    fn average_degree_chain_prefix() {
        let p = make_presentation(&FamilySpec::CompleteChain { k: 4 }).unwrap();
        let t = build_truncation(&p, 3, DegreeCap::Unlimited).unwrap();
        let members: BTreeSet<_> = t
            .vertices
            .iter()
            .filter(|v| v.tokens()[0] <= 2)
            .cloned()
            .collect();
        assert_eq!(average_degree(&t, &members).unwrap(), Rat::from_integer(7));
    }

    #[test]
    fn escape_components_on_tree() {
        let p = tree3();
        let t = build_truncation(&p, 3, DegreeCap::Unlimited).unwrap();
        let removed: BTreeSet<_> = [vid(&[0])].into();
        let comps = t.escape_components(&removed);
        assert_eq!(comps.len(), 3);
        assert!(comps.iter().all(|c| c.escapes));

        let depth1: BTreeSet<_> = (0..3).map(|c| vid(&[0, c])).collect();
        let comps = t.escape_components(&depth1);
        let (escaping, stuck): (Vec<_>, Vec<_>) = comps.iter().partition(|c| c.escapes);
        assert_eq!(escaping.len(), 6);
        assert_eq!(stuck.len(), 1);
        assert!(stuck[0].vertices.contains(&vid(&[0])));
    }

    #[test]
    fn escape_components_on_chain() {
        let p = make_presentation(&FamilySpec::CompleteChain { k: 4 }).unwrap();
        let t = build_truncation(&p, 3, DegreeCap::Unlimited).unwrap();
        let copy2: BTreeSet<_> = (0..4).map(|j| vid(&[2, j])).collect();
        let comps = t.escape_components(&copy2);
        assert_eq!(comps.len(), 2);
        let first = comps.iter().find(|c| c.vertices.contains(&vid(&[1, 0]))).unwrap();
        assert!(!first.escapes);
        let tail = comps.iter().find(|c| c.vertices.contains(&vid(&[3, 0]))).unwrap();
        assert!(tail.escapes);
    }

    #[test]
    fn text_roundtrip() {
        let p = make_presentation(&FamilySpec::CompleteChain { k: 3 }).unwrap();
        let t = build_truncation(&p, 2, DegreeCap::Unlimited).unwrap();
        let text = t.to_text();
        assert!(text.starts_with("endgraph-trunc v1\n"));
        let back = Truncation::from_text(&text).unwrap();
        assert_eq!(back.vertices, t.vertices);
        assert_eq!(back.edges, t.edges);
        assert_eq!(back.frontier, t.frontier);
        assert_eq!(back.to_text(), text);
    }
}
