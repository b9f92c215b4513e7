//! Vertex-capacity flow over truncations: minimum vertex cuts by the
//! standard splitting construction, and an independently coded
//! augmenting-path packer that produces explicit vertex-disjoint paths.
//! The two sides cross-check each other in the test suite.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::truncation::Truncation;
use crate::vertex::VertexId;

const INF: i64 = i64::MAX / 4;

struct Net {
    // arcs stored as residual capacities; arc 2k+1 is the reverse of 2k
    to: Vec<u32>,
    cap: Vec<i64>,
    adj: Vec<Vec<u32>>,
}

impl Net {
    fn new(nodes: usize) -> Self {
        Net { to: Vec::new(), cap: Vec::new(), adj: vec![Vec::new(); nodes] }
    }

    fn add(&mut self, from: usize, to: usize, cap: i64) {
        let id = self.to.len() as u32;
        self.to.push(to as u32);
        self.cap.push(cap);
        self.to.push(from as u32);
        self.cap.push(0);
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
    }

    /// One shortest augmenting path (breadth-first); returns false when the
    /// sink is unreachable in the residual network.
    fn augment(&mut self, s: usize, t: usize) -> bool {
        let mut parent: Vec<u32> = vec![u32::MAX; self.adj.len()];
        let mut queue = VecDeque::new();
        parent[s] = u32::MAX - 1;
        queue.push_back(s);
        'bfs: while let Some(v) = queue.pop_front() {
            for &a in &self.adj[v] {
                let w = self.to[a as usize] as usize;
                if self.cap[a as usize] > 0 && parent[w] == u32::MAX {
                    parent[w] = a;
                    if w == t {
                        break 'bfs;
                    }
                    queue.push_back(w);
                }
            }
        }
        if parent[t] == u32::MAX {
            return false;
        }
        let mut bottleneck = INF;
        let mut v = t;
        while v != s {
            let a = parent[v] as usize;
            bottleneck = bottleneck.min(self.cap[a]);
            v = self.to[a ^ 1] as usize;
        }
        let mut v = t;
        while v != s {
            let a = parent[v] as usize;
            self.cap[a] -= bottleneck;
            self.cap[a ^ 1] += bottleneck;
            v = self.to[a ^ 1] as usize;
        }
        true
    }

    fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        let mut queue = VecDeque::new();
        seen[s] = true;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &a in &self.adj[v] {
                let w = self.to[a as usize] as usize;
                if self.cap[a as usize] > 0 && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }
}

pub struct CutResult {
    pub cut: BTreeSet<VertexId>,
    pub flow: usize,
}

/// Minimum-cardinality vertex set separating `sources` from `targets`.
///
/// The cut never contains a source unless `sources_cuttable`; it may contain
/// targets. Deterministic: the source-side minimal minimum cut is returned.
pub fn min_vertex_cut(
    t: &Truncation,
    sources: &BTreeSet<VertexId>,
    targets: &BTreeSet<VertexId>,
    sources_cuttable: bool,
) -> CutResult {
    let verts: Vec<&VertexId> = t.vertices.iter().collect();
    let index: BTreeMap<&VertexId, usize> =
        verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let n = verts.len();
    let (ss, tt) = (2 * n, 2 * n + 1);
    let mut net = Net::new(2 * n + 2);
    for (i, v) in verts.iter().enumerate() {
        let splittable = sources_cuttable || !sources.contains(*v);
        net.add(2 * i, 2 * i + 1, if splittable { 1 } else { INF });
    }
    for e in &t.edges {
        let (u, v) = e.ends();
        let (iu, iv) = (index[u], index[v]);
        net.add(2 * iu + 1, 2 * iv, INF);
        net.add(2 * iv + 1, 2 * iu, INF);
    }
    for s in sources {
        if let Some(&i) = index.get(s) {
            let entry = if sources_cuttable { 2 * i } else { 2 * i + 1 };
            net.add(ss, entry, INF);
        }
    }
    for v in targets {
        if let Some(&i) = index.get(v) {
            net.add(2 * i + 1, tt, INF);
        }
    }
    let mut flow = 0usize;
    while net.augment(ss, tt) {
        flow += 1;
        if flow > n {
            break; // targets directly fed by uncuttable sources cannot occur
        }
    }
    let reach = net.residual_reachable(ss);
    let cut: BTreeSet<VertexId> = verts
        .iter()
        .enumerate()
        .filter(|(i, _)| reach[2 * i] && !reach[2 * i + 1])
        .map(|(_, v)| (*v).clone())
        .collect();
    CutResult { cut, flow }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Side {
    In,
    Out,
}

/// Independent packer: computes a maximum family of paths from `sources` to
/// `targets` that are pairwise vertex-disjoint (when `sources_cuttable`) or
/// disjoint everywhere except possibly at shared source vertices otherwise.
/// Coded directly over vertex states rather than the split arc network.
pub fn disjoint_path_packing(
    t: &Truncation,
    sources: &BTreeSet<VertexId>,
    targets: &BTreeSet<VertexId>,
    sources_cuttable: bool,
) -> Vec<Vec<VertexId>> {
    let mut through: BTreeSet<VertexId> = BTreeSet::new();
    let mut edge_flow: BTreeMap<(VertexId, VertexId), i64> = BTreeMap::new();

    let shareable = |v: &VertexId| !sources_cuttable && sources.contains(v);

    loop {
        // breadth-first over (vertex, side) states of the residual
        let mut parent: BTreeMap<(VertexId, Side), (VertexId, Side)> = BTreeMap::new();
        let mut queue: VecDeque<(VertexId, Side)> = VecDeque::new();
        let mut goal: Option<VertexId> = None;
        for s in sources {
            if !t.vertices.contains(s) {
                continue;
            }
            let st = (s.clone(), Side::In);
            if !parent.contains_key(&st) {
                parent.insert(st.clone(), st.clone());
                queue.push_back(st);
            }
        }
        'search: while let Some((v, side)) = queue.pop_front() {
            if side == Side::Out && targets.contains(&v) {
                goal = Some(v.clone());
                break 'search;
            }
            let push = |q: &mut VecDeque<(VertexId, Side)>,
                            parent: &mut BTreeMap<(VertexId, Side), (VertexId, Side)>,
                            next: (VertexId, Side)| {
                if !parent.contains_key(&next) {
                    parent.insert(next.clone(), (v.clone(), side));
                    q.push_back(next);
                }
            };
            match side {
                Side::In => {
                    if shareable(&v) || !through.contains(&v) {
                        push(&mut queue, &mut parent, (v.clone(), Side::Out));
                    }
                    // reverse of an edge currently carrying flow into v
                    let preds: Vec<VertexId> = t
                        .neighbors(&v)
                        .filter(|u| edge_flow.get(&((*u).clone(), v.clone())).copied().unwrap_or(0) > 0)
                        .cloned()
                        .collect();
                    for u in preds {
                        push(&mut queue, &mut parent, (u, Side::Out));
                    }
                }
                Side::Out => {
                    let nbrs: Vec<VertexId> = t.neighbors(&v).cloned().collect();
                    for u in nbrs {
                        push(&mut queue, &mut parent, (u, Side::In));
                    }
                    if through.contains(&v) && !shareable(&v) {
                        push(&mut queue, &mut parent, (v.clone(), Side::In));
                    }
                }
            }
        }
        let Some(goal) = goal else { break };

        // apply the augmenting path
        let mut cur = (goal, Side::Out);
        loop {
            let prev = parent[&cur].clone();
            if prev == cur {
                // start state: consume the source when sources are cuttable
                if sources_cuttable {
                    // handled by the In->Out transition below on first step
                }
                break;
            }
            match (&prev.1, &cur.1) {
                (Side::In, Side::Out) if prev.0 == cur.0 => {
                    if !shareable(&cur.0) {
                        through.insert(cur.0.clone());
                    }
                }
                (Side::Out, Side::In) if prev.0 == cur.0 => {
                    through.remove(&cur.0);
                }
                (Side::Out, Side::In) => {
                    let back = (cur.0.clone(), prev.0.clone());
                    let entry = edge_flow.get(&back).copied().unwrap_or(0);
                    if entry > 0 {
                        edge_flow.insert(back, entry - 1);
                    } else {
                        *edge_flow.entry((prev.0.clone(), cur.0.clone())).or_insert(0) += 1;
                    }
                }
                (Side::In, Side::Out) => {
                    // reverse traversal of an edge that carried flow prev<-cur
                    let key = (cur.0.clone(), prev.0.clone());
                    let entry = edge_flow.get(&key).copied().unwrap_or(0);
                    edge_flow.insert(key, entry - 1);
                }
                _ => unreachable!("inconsistent augmenting path"),
            }
            cur = prev;
        }
    }

    // decompose the flow into explicit paths; each path starts at a source
    // with excess outflow and ends at the first target it terminates in
    let mut out_arcs: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    let mut inflow: BTreeMap<VertexId, i64> = BTreeMap::new();
    for ((u, v), f) in &edge_flow {
        for _ in 0..*f {
            out_arcs.entry(u.clone()).or_default().push(v.clone());
        }
        *inflow.entry(v.clone()).or_insert(0) += f;
    }
    let mut paths = Vec::new();
    for s in sources {
        let outgoing = out_arcs.get(s).map_or(0, |l| l.len() as i64);
        let excess = outgoing - inflow.get(s).copied().unwrap_or(0);
        for _ in 0..excess.max(0) {
            let mut path = vec![s.clone()];
            let mut cur = s.clone();
            loop {
                if targets.contains(&cur)
                    && (out_arcs.get(&cur).map_or(true, |l| l.is_empty())
                        || !sources.contains(&cur))
                {
                    break;
                }
                let Some(list) = out_arcs.get_mut(&cur) else { break };
                if list.is_empty() {
                    break;
                }
                let next = list.remove(0);
                path.push(next.clone());
                cur = next;
            }
            paths.push(path);
        }
    }
    paths
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::truncation::Truncation;
    use crate::vertex::vid;

    fn three_paths() -> Truncation {
        // two vertices joined by three internally disjoint paths
        let (s, t) = (vid(&[0]), vid(&[9]));
        let mut edges = Vec::new();
        for p in 1..=3i64 {
            edges.push((s.clone(), vid(&[p, 0])));
            edges.push((vid(&[p, 0]), vid(&[p, 1])));
            edges.push((vid(&[p, 1]), t.clone()));
        }
        Truncation::from_edges(&edges).unwrap()
    }

    #[test]
    fn menger_three_paths() {
        let t = three_paths();
        let sources: BTreeSet<_> = [vid(&[0])].into();
        let targets: BTreeSet<_> = [vid(&[9])].into();
        let cut = min_vertex_cut(&t, &sources, &targets, false);
        assert_eq!(cut.flow, 3);
        assert_eq!(cut.cut.len(), 3);
        let paths = disjoint_path_packing(&t, &sources, &targets, false);
        assert_eq!(paths.len(), 3);
    }

    #[test]
    fn adjacent_source_target_cut_on_target() {
        let t = Truncation::from_edges(&[(vid(&[0]), vid(&[1]))]).unwrap();
        let sources: BTreeSet<_> = [vid(&[0])].into();
        let targets: BTreeSet<_> = [vid(&[1])].into();
        let cut = min_vertex_cut(&t, &sources, &targets, false);
        assert_eq!(cut.flow, 1);
        assert_eq!(cut.cut, targets);
    }

    #[test]
    fn cuttable_sources_count_fully_disjoint_paths() {
        // one source with two branches: shareable sources give 2 paths,
        // cuttable sources only 1
        let mut edges = vec![];
        for b in 1..=2i64 {
            edges.push((vid(&[0]), vid(&[b, 0])));
            edges.push((vid(&[b, 0]), vid(&[b, 9])));
        }
        let t = Truncation::from_edges(&edges).unwrap();
        let sources: BTreeSet<_> = [vid(&[0])].into();
        let targets: BTreeSet<_> = [vid(&[1, 9]), vid(&[2, 9])].into();
        assert_eq!(min_vertex_cut(&t, &sources, &targets, false).flow, 2);
        assert_eq!(min_vertex_cut(&t, &sources, &targets, true).flow, 1);
        assert_eq!(disjoint_path_packing(&t, &sources, &targets, false).len(), 2);
        assert_eq!(disjoint_path_packing(&t, &sources, &targets, true).len(), 1);
    }
}
