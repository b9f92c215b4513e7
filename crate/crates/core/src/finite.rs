//! Plain finite graphs used by the witness searches, the planarity test and
//! the extraction pipeline.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::truncation::Truncation;
use crate::vertex::{Edge, VertexId};

#[derive(Clone, Debug, Default)]
pub struct FiniteGraph {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl FiniteGraph {
    pub fn new() -> Self {
        FiniteGraph::default()
    }

    pub fn from_truncation(t: &Truncation) -> Self {
        let mut g = FiniteGraph::new();
        for v in &t.vertices {
            g.add_vertex(v.clone());
        }
        for e in &t.edges {
            let (u, v) = e.ends();
            g.add_edge(u.clone(), v.clone());
        }
        g
    }

    pub fn from_edges(edges: &[(VertexId, VertexId)]) -> Self {
        let mut g = FiniteGraph::new();
        for (u, v) in edges {
            g.add_edge(u.clone(), v.clone());
        }
        g
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.adj.entry(v).or_default();
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) {
        assert!(u != v, "no self-loops");
        self.adj.entry(u.clone()).or_default().insert(v.clone());
        self.adj.entry(v).or_default().insert(u);
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexId> + '_ {
        self.adj.keys()
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.adj.contains_key(v)
    }

    pub fn neighbors(&self, v: &VertexId) -> impl Iterator<Item = &VertexId> + '_ {
        self.adj.get(v).into_iter().flatten()
    }

    pub fn degree(&self, v: &VertexId) -> usize {
        self.adj.get(v).map_or(0, |s| s.len())
    }

    pub fn has_edge(&self, u: &VertexId, v: &VertexId) -> bool {
        self.adj.get(u).is_some_and(|s| s.contains(v))
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for (u, ns) in &self.adj {
            for v in ns {
                if u < v {
                    out.push(Edge::new(u.clone(), v.clone()));
                }
            }
        }
        out
    }

    pub fn induced(&self, members: &BTreeSet<VertexId>) -> FiniteGraph {
        let mut g = FiniteGraph::new();
        for v in members {
            if self.contains(v) {
                g.add_vertex(v.clone());
            }
        }
        for (u, ns) in &self.adj {
            if !members.contains(u) {
                continue;
            }
            for v in ns {
                if members.contains(v) && u < v {
                    g.add_edge(u.clone(), v.clone());
                }
            }
        }
        g
    }

    pub fn remove_vertex(&mut self, v: &VertexId) {
        if let Some(ns) = self.adj.remove(v) {
            for u in ns {
                self.adj.get_mut(&u).map(|s| s.remove(v));
            }
        }
    }

    pub fn is_connected_set(&self, members: &BTreeSet<VertexId>) -> bool {
        let Some(first) = members.iter().next() else { return true };
        let mut seen: BTreeSet<&VertexId> = [first].into();
        let mut queue = VecDeque::from([first]);
        while let Some(v) = queue.pop_front() {
            for u in self.neighbors(v) {
                if members.contains(u) && seen.insert(u) {
                    queue.push_back(u);
                }
            }
        }
        seen.len() == members.len()
    }

    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        let mut out = Vec::new();
        for start in self.adj.keys() {
            if seen.contains(start) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([start.clone()]);
            seen.insert(start.clone());
            while let Some(v) = queue.pop_front() {
                comp.insert(v.clone());
                for u in self.neighbors(&v) {
                    if seen.insert(u.clone()) {
                        queue.push_back(u.clone());
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Shortest path between two vertices staying inside `allowed` (which
    /// must contain both endpoints); breadth-first with ascending ties.
    pub fn shortest_path_within(
        &self,
        from: &VertexId,
        to: &VertexId,
        allowed: &BTreeSet<VertexId>,
    ) -> Option<Vec<VertexId>> {
        if !allowed.contains(from) || !allowed.contains(to) {
            return None;
        }
        let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        let mut queue = VecDeque::from([from.clone()]);
        parent.insert(from.clone(), from.clone());
        while let Some(v) = queue.pop_front() {
            if &v == to {
                let mut path = vec![v.clone()];
                let mut cur = v;
                while parent[&cur] != cur {
                    cur = parent[&cur].clone();
                    path.push(cur.clone());
                }
                path.reverse();
                return Some(path);
            }
            for u in self.neighbors(&v) {
                if allowed.contains(u) && !parent.contains_key(u) {
                    parent.insert(u.clone(), v.clone());
                    queue.push_back(u.clone());
                }
            }
        }
        None
    }

    pub fn has_cycle(&self) -> bool {
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        for start in self.adj.keys() {
            if seen.contains(start) {
                continue;
            }
            // BFS forest; a cross edge inside one tree means a cycle
            let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
            parent.insert(start.clone(), start.clone());
            seen.insert(start.clone());
            let mut queue = VecDeque::from([start.clone()]);
            while let Some(v) = queue.pop_front() {
                for u in self.neighbors(&v) {
                    if u == &parent[&v] {
                        continue;
                    }
                    if seen.contains(u) {
                        return true;
                    }
                    seen.insert(u.clone());
                    parent.insert(u.clone(), v.clone());
                    queue.push_back(u.clone());
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vertex::vid;

    #[test]
    fn cycle_detection() {
        let mut g = FiniteGraph::from_edges(&[
            (vid(&[0]), vid(&[1])),
            (vid(&[1]), vid(&[2])),
        ]);
        assert!(!g.has_cycle());
        g.add_edge(vid(&[2]), vid(&[0]));
        assert!(g.has_cycle());
    }

    #[test]
    fn multi_edge_parent_cycle() {
        // triangle plus pendant: cycle found even with parent skipping
        let g = FiniteGraph::from_edges(&[
            (vid(&[0]), vid(&[1])),
            (vid(&[1]), vid(&[2])),
            (vid(&[0]), vid(&[2])),
            (vid(&[2]), vid(&[3])),
        ]);
        assert!(g.has_cycle());
        assert_eq!(g.edge_count(), 4);
    }
}
