//! Planarity testing by iterative face embedding (Demoucron-Malgrange-
//! Pertuiset): decompose into biconnected blocks, start each block from a
//! cycle, and repeatedly embed a path of a bridge into an admissible face.
//! A bridge with no admissible face certifies non-planarity.

use std::collections::{BTreeMap, BTreeSet};

use crate::finite::FiniteGraph;
use crate::vertex::{Edge, VertexId};

pub fn is_planar(g: &FiniteGraph) -> bool {
    let n = g.vertex_count();
    let m = g.edge_count();
    if n <= 4 {
        return true;
    }
    if m > 3 * n - 6 {
        return false;
    }
    blocks(g).iter().all(|b| block_planar(b))
}

/// Biconnected components as edge lists (classic lowpoint computation,
/// iterative to survive deep truncations).
fn blocks(g: &FiniteGraph) -> Vec<Vec<Edge>> {
    let mut index: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut low: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut stack: Vec<Edge> = Vec::new();
    let mut out: Vec<Vec<Edge>> = Vec::new();
    let mut counter = 0usize;

    enum Step {
        Descend(VertexId, VertexId),
        Return,
        Next,
    }

    struct Frame {
        v: VertexId,
        parent: Option<VertexId>,
        nbrs: Vec<VertexId>,
        pos: usize,
    }

    for root in g.vertices() {
        if index.contains_key(root) {
            continue;
        }
        index.insert(root.clone(), counter);
        low.insert(root.clone(), counter);
        counter += 1;
        let mut frames = vec![Frame {
            v: root.clone(),
            parent: None,
            nbrs: g.neighbors(root).cloned().collect(),
            pos: 0,
        }];
        while !frames.is_empty() {
            let step = {
                let frame = frames.last_mut().unwrap();
                if frame.pos < frame.nbrs.len() {
                    let u = frame.nbrs[frame.pos].clone();
                    frame.pos += 1;
                    if Some(&u) == frame.parent.as_ref() {
                        Step::Next
                    } else if let Some(&iu) = index.get(&u) {
                        if iu < index[&frame.v] {
                            stack.push(Edge::new(frame.v.clone(), u));
                            let lv = low[&frame.v].min(iu);
                            low.insert(frame.v.clone(), lv);
                        }
                        Step::Next
                    } else {
                        Step::Descend(frame.v.clone(), u)
                    }
                } else {
                    Step::Return
                }
            };
            match step {
                Step::Next => {}
                Step::Descend(v, u) => {
                    index.insert(u.clone(), counter);
                    low.insert(u.clone(), counter);
                    counter += 1;
                    stack.push(Edge::new(v.clone(), u.clone()));
                    let nbrs = g.neighbors(&u).cloned().collect();
                    frames.push(Frame { v: u, parent: Some(v), nbrs, pos: 0 });
                }
                Step::Return => {
                    let finished = frames.pop().unwrap();
                    if let Some(up) = frames.last() {
                        let lu = low[&finished.v];
                        let lp = low[&up.v].min(lu);
                        low.insert(up.v.clone(), lp);
                        if lu >= index[&up.v] {
                            // the tree edge up-finished closes one block
                            let marker = Edge::new(up.v.clone(), finished.v.clone());
                            let mut block = Vec::new();
                            while let Some(e) = stack.pop() {
                                let done = e == marker;
                                block.push(e);
                                if done {
                                    break;
                                }
                            }
                            out.push(block);
                        }
                    }
                }
            }
        }
    }
    out
}

fn block_planar(edges: &[Edge]) -> bool {
    if edges.len() <= 2 {
        return true;
    }
    let pairs: Vec<(VertexId, VertexId)> = edges
        .iter()
        .map(|e| (e.ends().0.clone(), e.ends().1.clone()))
        .collect();
    let g = FiniteGraph::from_edges(&pairs);
    let n = g.vertex_count();
    let m = g.edge_count();
    if n <= 4 {
        return true;
    }
    if m > 3 * n - 6 {
        return false;
    }

    let Some(cycle) = find_cycle(&g) else {
        return true; // no cycle in a block only for trivial blocks
    };

    let mut embedded: BTreeSet<VertexId> = cycle.iter().cloned().collect();
    let mut embedded_edges: BTreeSet<Edge> = cycle_edges(&cycle);
    let mut faces: Vec<Vec<VertexId>> = vec![cycle.clone(), cycle];

    loop {
        let bridges = compute_bridges(&g, &embedded, &embedded_edges);
        if bridges.is_empty() {
            return true;
        }
        // admissible faces per bridge
        let face_sets: Vec<BTreeSet<&VertexId>> =
            faces.iter().map(|f| f.iter().collect()).collect();
        let admissible: Vec<Vec<usize>> = bridges
            .iter()
            .map(|b| {
                face_sets
                    .iter()
                    .enumerate()
                    .filter(|(_, fs)| b.attachments.iter().all(|a| fs.contains(a)))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        if admissible.iter().any(|a| a.is_empty()) {
            return false;
        }
        let pick = admissible
            .iter()
            .position(|a| a.len() == 1)
            .unwrap_or(0);
        let bridge = &bridges[pick];
        let face_idx = admissible[pick][0];

        let path = bridge_path(&g, bridge);
        for w in path.windows(2) {
            embedded_edges.insert(Edge::new(w[0].clone(), w[1].clone()));
        }
        for v in &path[1..path.len() - 1] {
            embedded.insert(v.clone());
        }
        let face = faces.swap_remove(face_idx);
        let (f1, f2) = split_face(&face, &path);
        faces.push(f1);
        faces.push(f2);
    }
}

struct Bridge {
    attachments: BTreeSet<VertexId>,
    /// Interior vertices (empty for a chord edge).
    interior: BTreeSet<VertexId>,
    /// For a chord, its two endpoints.
    chord: Option<(VertexId, VertexId)>,
}

fn compute_bridges(
    g: &FiniteGraph,
    embedded: &BTreeSet<VertexId>,
    embedded_edges: &BTreeSet<Edge>,
) -> Vec<Bridge> {
    let mut bridges = Vec::new();
    // chords: unembedded edges between embedded vertices
    for e in g.edges() {
        let (u, v) = e.ends();
        if embedded.contains(u) && embedded.contains(v) && !embedded_edges.contains(&e) {
            bridges.push(Bridge {
                attachments: [u.clone(), v.clone()].into(),
                interior: BTreeSet::new(),
                chord: Some((u.clone(), v.clone())),
            });
        }
    }
    // components of g minus embedded, with their attachments
    let rest: BTreeSet<VertexId> = g
        .vertices()
        .filter(|v| !embedded.contains(*v))
        .cloned()
        .collect();
    let sub = g.induced(&rest);
    for comp in sub.components() {
        let mut attachments = BTreeSet::new();
        for v in &comp {
            for u in g.neighbors(v) {
                if embedded.contains(u) {
                    attachments.insert(u.clone());
                }
            }
        }
        bridges.push(Bridge { attachments, interior: comp, chord: None });
    }
    bridges
}

/// A path between two attachments running through the bridge.
fn bridge_path(g: &FiniteGraph, bridge: &Bridge) -> Vec<VertexId> {
    if let Some((u, v)) = &bridge.chord {
        return vec![u.clone(), v.clone()];
    }
    let mut iter = bridge.attachments.iter();
    let a = iter.next().expect("bridges of a block attach twice").clone();
    let b = iter.next().expect("bridges of a block attach twice").clone();
    let mut allowed = bridge.interior.clone();
    allowed.insert(a.clone());
    allowed.insert(b.clone());
    g.shortest_path_within(&a, &b, &allowed)
        .expect("bridge interior connects its attachments")
}

fn split_face(face: &[VertexId], path: &[VertexId]) -> (Vec<VertexId>, Vec<VertexId>) {
    let a = &path[0];
    let b = &path[path.len() - 1];
    let i = face.iter().position(|v| v == a).unwrap();
    let j = face.iter().position(|v| v == b).unwrap();
    let (i, j, path_fwd) = if i <= j { (i, j, true) } else { (j, i, false) };
    let arc1: Vec<VertexId> = face[i..=j].to_vec();
    let mut arc2: Vec<VertexId> = face[j..].to_vec();
    arc2.extend_from_slice(&face[..=i]);
    let interior: Vec<VertexId> = path[1..path.len() - 1].to_vec();
    let mut f1 = arc1;
    let mut f2 = arc2;
    if path_fwd {
        // arc1 runs a..b, so close it with the path reversed (b..a)
        f1.extend(interior.iter().rev().cloned());
        f2.extend(interior.iter().cloned());
    } else {
        f1.extend(interior.iter().cloned());
        f2.extend(interior.iter().rev().cloned());
    }
    (f1, f2)
}

fn cycle_edges(cycle: &[VertexId]) -> BTreeSet<Edge> {
    let mut out = BTreeSet::new();
    for w in cycle.windows(2) {
        out.insert(Edge::new(w[0].clone(), w[1].clone()));
    }
    out.insert(Edge::new(cycle[0].clone(), cycle[cycle.len() - 1].clone()));
    out
}

fn find_cycle(g: &FiniteGraph) -> Option<Vec<VertexId>> {
    let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut depth: BTreeMap<VertexId, usize> = BTreeMap::new();
    for root in g.vertices() {
        if parent.contains_key(root) {
            continue;
        }
        parent.insert(root.clone(), root.clone());
        depth.insert(root.clone(), 0);
        let mut stack = vec![root.clone()];
        while let Some(v) = stack.pop() {
            for u in g.neighbors(&v) {
                if parent.get(&v) == Some(u) {
                    continue;
                }
                if parent.contains_key(u) {
                    // back edge: walk both endpoints up to their meeting point
                    let mut path_v = vec![v.clone()];
                    let mut path_u = vec![u.clone()];
                    let (mut x, mut y) = (v.clone(), u.clone());
                    while depth[&x] > depth[&y] {
                        x = parent[&x].clone();
                        path_v.push(x.clone());
                    }
                    while depth[&y] > depth[&x] {
                        y = parent[&y].clone();
                        path_u.push(y.clone());
                    }
                    while x != y {
                        x = parent[&x].clone();
                        path_v.push(x.clone());
                        y = parent[&y].clone();
                        path_u.push(y.clone());
                    }
                    path_u.pop();
                    path_u.reverse();
                    path_v.extend(path_u);
                    return Some(path_v);
                }
                parent.insert(u.clone(), v.clone());
                depth.insert(u.clone(), depth[&v] + 1);
                stack.push(u.clone());
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vertex::vid;

    fn complete(n: i64) -> FiniteGraph {
        let edges: Vec<_> = (0..n)
            .flat_map(|a| ((a + 1)..n).map(move |b| (vid(&[a]), vid(&[b]))))
            .collect();
        FiniteGraph::from_edges(&edges)
    }

    fn complete_bipartite(a: i64, b: i64) -> FiniteGraph {
        let edges: Vec<_> = (0..a)
            .flat_map(|x| (0..b).map(move |y| (vid(&[0, x]), vid(&[1, y]))))
            .collect();
        FiniteGraph::from_edges(&edges)
    }

    fn grid(w: i64, h: i64) -> FiniteGraph {
        let mut edges = Vec::new();
        for x in 0..w {
            for y in 0..h {
                if x + 1 < w {
                    edges.push((vid(&[x, y]), vid(&[x + 1, y])));
                }
                if y + 1 < h {
                    edges.push((vid(&[x, y]), vid(&[x, y + 1])));
                }
            }
        }
        FiniteGraph::from_edges(&edges)
    }

    fn petersen() -> FiniteGraph {
        let mut edges = Vec::new();
        for i in 0..5i64 {
            edges.push((vid(&[0, i]), vid(&[0, (i + 1) % 5])));
            edges.push((vid(&[1, i]), vid(&[1, (i + 2) % 5])));
            edges.push((vid(&[0, i]), vid(&[1, i])));
        }
        FiniteGraph::from_edges(&edges)
    }

    fn subdivide_all(g: &FiniteGraph) -> FiniteGraph {
        let mut out = FiniteGraph::new();
        for (i, e) in g.edges().iter().enumerate() {
            let (u, v) = e.ends();
            let mid = vid(&[9, i as i64]);
            out.add_edge(u.clone(), mid.clone());
            out.add_edge(mid, v.clone());
        }
        out
    }

    #[test]
    fn small_staples() {
        assert!(is_planar(&complete(4)));
        assert!(!is_planar(&complete(5)));
        assert!(!is_planar(&complete(6)));
        assert!(!is_planar(&complete_bipartite(3, 3)));
        assert!(is_planar(&complete_bipartite(2, 7)));
        assert!(is_planar(&grid(5, 5)));
        assert!(!is_planar(&petersen()));
    }

    #[test]
    fn subdivisions_preserve_the_verdict() {
        assert!(!is_planar(&subdivide_all(&complete(5))));
        assert!(!is_planar(&subdivide_all(&complete_bipartite(3, 3))));
        assert!(is_planar(&subdivide_all(&complete(4))));
    }

    #[test]
    fn near_kuratowski_graphs_are_planar() {
        let mut k5 = complete(5);
        k5.remove_vertex(&vid(&[4]));
        k5.add_vertex(vid(&[4]));
        assert!(is_planar(&k5));
        // K5 minus one edge
        let edges: Vec<_> = complete(5)
            .edges()
            .into_iter()
            .filter(|e| !(e.ends().0 == &vid(&[0]) && e.ends().1 == &vid(&[1])))
            .map(|e| (e.ends().0.clone(), e.ends().1.clone()))
            .collect();
        assert!(is_planar(&FiniteGraph::from_edges(&edges)));
    }

    #[test]
    fn wheel_and_two_blocks() {
        let mut wheel = FiniteGraph::new();
        for i in 0..6i64 {
            wheel.add_edge(vid(&[i]), vid(&[(i + 1) % 6]));
            wheel.add_edge(vid(&[9]), vid(&[i]));
        }
        assert!(is_planar(&wheel));
        // two K4 blocks sharing a cut vertex
        let mut g = FiniteGraph::new();
        for a in 0..4i64 {
            for b in (a + 1)..4 {
                g.add_edge(vid(&[0, a]), vid(&[0, b]));
                g.add_edge(vid(&[1, a]), vid(&[1, b]));
            }
        }
        g.add_edge(vid(&[0, 0]), vid(&[1, 0]));
        assert!(is_planar(&g));
    }

    #[test]
    fn family_truncations() {
        use crate::families::{make_presentation, FamilySpec};
        use crate::truncation::{build_truncation, DegreeCap};
        for spec in [
            FamilySpec::PlanarBlowup { rounds: 1, t: 1 },
            FamilySpec::PlanarBlowup { rounds: 2, t: 3 },
            FamilySpec::PlanarBlowup { rounds: 3, t: 2 },
            FamilySpec::SpanningPathTree { r: 3 },
            FamilySpec::SpanningPathTree { r: 4 },
        ] {
            let p = make_presentation(&spec).unwrap();
            let t = build_truncation(&p, 6, DegreeCap::Unlimited).unwrap();
            let g = FiniteGraph::from_truncation(&t);
            assert!(is_planar(&g), "{} truncation should be planar", spec.id());
        }
    }
}
