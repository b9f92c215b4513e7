//! The concrete graph constructions: regular trees, apex trees, trees with
//! level spanning paths, the three-vertex-gadget tree blowup `gamma`, chains
//! of complete graphs, the planar edge-replacement blowup, and explicit
//! layered graphs. Each is exposed as a [`GraphPresentation`] with symbolic
//! end and dominator catalogs.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::Error;
use crate::presentation::{
    CanonicalSource, EndHandle, ExplicitOracle, GraphPresentation, Oracle,
};
use crate::region::Region;
use crate::truncation::Truncation;
use crate::vertex::VertexId;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    RegularTree { r: u32 },
    /// Tree plus `apexes` pairwise non-adjacent vertices, each adjacent to
    /// every tree vertex.
    ApexTree { r: u32, apexes: u32 },
    SpanningPathTree { r: u32 },
    GammaR { r: u32 },
    CompleteChain { k: u32 },
    /// Finite stand-in for the iterated edge replacement: `t` parallel
    /// length-two paths per replaced edge, `rounds` replacement rounds.
    PlanarBlowup { rounds: u32, t: u32 },
    LayeredExplicit {
        layers: Vec<Vec<VertexId>>,
        edges: Vec<(VertexId, VertexId)>,
    },
}

/// Which hand-constructed region sequence to produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonicalSequenceKind {
    /// Full gadget closures along the branch of the end (gamma).
    GammaH,
    /// Two gadget vertices plus the same-colored child closures (gamma).
    GammaK,
    /// Suffixes of the chain of complete graphs.
    ChainTail,
    /// Subtrees above the branch vertices of the end.
    TreeSubtree,
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        match self {
            FamilySpec::RegularTree { r } | FamilySpec::SpanningPathTree { r } => {
                if *r < 2 {
                    return bad(format!("tree branching r={r} must be at least 2"));
                }
            }
            FamilySpec::ApexTree { r, apexes } => {
                if *r < 2 || *apexes < 1 {
                    return bad(format!("apex-tree needs r >= 2 and apexes >= 1, got r={r}, apexes={apexes}"));
                }
            }
            FamilySpec::GammaR { r } => {
                // The construction balances blue/red exactly for even r; odd
                // r is accepted with first ⌊r/2⌋ children blue.
                if *r < 3 {
                    return bad(format!("gamma needs r >= 3, got {r}"));
                }
            }
            FamilySpec::CompleteChain { k } => {
                if *k < 1 {
                    return bad("chain needs k >= 1".into());
                }
            }
            FamilySpec::PlanarBlowup { rounds, t } => {
                if *rounds < 1 || *t < 1 {
                    return bad(format!("planar-blowup needs rounds >= 1 and t >= 1, got rounds={rounds}, t={t}"));
                }
            }
            FamilySpec::LayeredExplicit { layers, edges } => {
                let mut seen: BTreeSet<&VertexId> = BTreeSet::new();
                if layers.is_empty() || layers.iter().any(|l| l.is_empty()) {
                    return bad("layers must be nonempty".into());
                }
                for v in layers.iter().flatten() {
                    if !seen.insert(v) {
                        return bad(format!("vertex {v} appears in two layers"));
                    }
                }
                for (u, v) in edges {
                    if !seen.contains(u) || !seen.contains(v) {
                        return bad(format!("edge {u}-{v} uses an undeclared vertex"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            FamilySpec::RegularTree { .. } => "regular-tree",
            FamilySpec::ApexTree { .. } => "apex-tree",
            FamilySpec::SpanningPathTree { .. } => "spanning-path-tree",
            FamilySpec::GammaR { .. } => "gamma",
            FamilySpec::CompleteChain { .. } => "chain",
            FamilySpec::PlanarBlowup { .. } => "planar-blowup",
            FamilySpec::LayeredExplicit { .. } => "layered-explicit",
        }
    }

    pub fn id(&self) -> String {
        match self {
            FamilySpec::RegularTree { r } => format!("regular-tree(r={r})"),
            FamilySpec::ApexTree { r, apexes } => format!("apex-tree(r={r},apexes={apexes})"),
            FamilySpec::SpanningPathTree { r } => format!("spanning-path-tree(r={r})"),
            FamilySpec::GammaR { r } => format!("gamma(r={r})"),
            FamilySpec::CompleteChain { k } => format!("chain(k={k})"),
            FamilySpec::PlanarBlowup { rounds, t } => {
                format!("planar-blowup(rounds={rounds},t={t})")
            }
            FamilySpec::LayeredExplicit { layers, .. } => {
                format!("layered-explicit(layers={})", layers.len())
            }
        }
    }

    /// Human-readable construction notes, including the degree behavior of
    /// the finite stand-ins.
    pub fn describe(&self) -> String {
        match self {
            FamilySpec::RegularTree { r } => {
                format!("{r}-regular infinite tree; root has {r} children, other vertices {} children plus parent", r - 1)
            }
            FamilySpec::ApexTree { r, apexes } => format!(
                "{r}-regular tree plus {apexes} apex vertices, each adjacent to every tree vertex; the apexes dominate every end"
            ),
            FamilySpec::SpanningPathTree { r } => format!(
                "{r}-regular tree with a spanning path inserted at each level (still planar); a single end"
            ),
            FamilySpec::GammaR { r } => format!(
                "tree blowup with a path x-y-z per tree vertex; first {} child edges blue, the rest red",
                r / 2
            ),
            FamilySpec::CompleteChain { k } => format!(
                "chain of complete graphs of order {k} with all edges between consecutive copies; one end of relative degree {k}"
            ),
            FamilySpec::PlanarBlowup { rounds, t } => {
                let min_deg = if *rounds == 1 || *t == 1 { 2 } else { 3 };
                format!(
                    "double-ray with each edge replaced by {t} length-two paths, repeated for {rounds} rounds; planar; \
                     minimum interior degree {min_deg}, replaced-edge endpoints reach degree {}",
                    2 * t
                )
            }
            FamilySpec::LayeredExplicit { layers, edges } => {
                format!("explicit layered graph: {} layers, {} edges", layers.len(), edges.len())
            }
        }
    }

    // --- manifest (de)serialization -----------------------------------

    pub fn to_manifest(&self) -> Value {
        let params = match self {
            FamilySpec::RegularTree { r } | FamilySpec::SpanningPathTree { r } => json!({"r": r}),
            FamilySpec::ApexTree { r, apexes } => json!({"r": r, "apexes": apexes}),
            FamilySpec::GammaR { r } => json!({"r": r}),
            FamilySpec::CompleteChain { k } => json!({"k": k}),
            FamilySpec::PlanarBlowup { rounds, t } => json!({"rounds": rounds, "t": t}),
            FamilySpec::LayeredExplicit { layers, edges } => {
                let layers: Vec<Vec<String>> = layers
                    .iter()
                    .map(|l| l.iter().map(|v| v.to_string()).collect())
                    .collect();
                let edges: Vec<Vec<String>> = edges
                    .iter()
                    .map(|(u, v)| vec![u.to_string(), v.to_string()])
                    .collect();
                json!({"layers": layers, "edges": edges})
            }
        };
        json!({"family": self.family_name(), "params": params})
    }

    pub fn from_manifest(v: &Value) -> Result<FamilySpec> {
        let family = v
            .get("family")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("manifest is missing `family`".into()))?;
        let params = v.get("params").cloned().unwrap_or_else(|| json!({}));
        let get_u32 = |key: &str| -> Result<u32> {
            params
                .get(key)
                .and_then(Value::as_u64)
                .and_then(|n| u32::try_from(n).ok())
                .ok_or_else(|| Error::Parse(format!("manifest param `{key}` missing or bad")))
        };
        let spec = match family {
            "regular-tree" => FamilySpec::RegularTree { r: get_u32("r")? },
            "apex-tree" => FamilySpec::ApexTree {
                r: get_u32("r")?,
                apexes: if params.get("apexes").is_some() { get_u32("apexes")? } else { 1 },
            },
            "spanning-path-tree" => FamilySpec::SpanningPathTree { r: get_u32("r")? },
            "gamma" => FamilySpec::GammaR { r: get_u32("r")? },
            "chain" => FamilySpec::CompleteChain { k: get_u32("k")? },
            "planar-blowup" => FamilySpec::PlanarBlowup {
                rounds: get_u32("rounds")?,
                t: get_u32("t")?,
            },
            "layered-explicit" => {
                let parse_id = |s: &Value| -> Result<VertexId> {
                    s.as_str()
                        .ok_or_else(|| Error::Parse("layer ids must be strings".into()))?
                        .parse()
                };
                let layers = params
                    .get("layers")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse("layered-explicit needs `layers`".into()))?
                    .iter()
                    .map(|l| {
                        l.as_array()
                            .ok_or_else(|| Error::Parse("each layer must be an array".into()))?
                            .iter()
                            .map(parse_id)
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                let edges = params
                    .get("edges")
                    .and_then(Value::as_array)
                    .unwrap_or(&Vec::new())
                    .iter()
                    .map(|e| {
                        let pair = e
                            .as_array()
                            .filter(|a| a.len() == 2)
                            .ok_or_else(|| Error::Parse("each edge must be a pair".into()))?;
                        Ok((parse_id(&pair[0])?, parse_id(&pair[1])?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                FamilySpec::LayeredExplicit { layers, edges }
            }
            other => return Err(Error::Parse(format!("unknown family `{other}`"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Build the presentation for a family, with end and dominator catalogs.
pub fn make_presentation(spec: &FamilySpec) -> Result<GraphPresentation> {
    spec.validate()?;
    let p = match spec {
        FamilySpec::RegularTree { r } => {
            let r = *r;
            let oracle = Arc::new(TreeOracle { r });
            let ends = tree_branch_ends(r, TreeRay::TreeVertices);
            GraphPresentation::new(spec.id(), root_id(), oracle, ends, BTreeMap::new())
        }
        FamilySpec::ApexTree { r, apexes } => {
            let (r, a) = (*r, *apexes);
            let oracle = Arc::new(ApexTreeOracle { r, apexes: a });
            let ends = tree_branch_ends(r, TreeRay::TreeVertices);
            let apex_set: BTreeSet<VertexId> = (0..a).map(|j| apex_id(j)).collect();
            let dominators = ends
                .iter()
                .map(|e| (e.name().to_string(), apex_set.clone()))
                .collect();
            GraphPresentation::new(spec.id(), apex_id(0), oracle, ends, dominators)
        }
        FamilySpec::SpanningPathTree { r } => {
            let r = *r;
            let oracle = Arc::new(SpanningPathTreeOracle { r });
            let ray = branch_ray(r, 0, Descent::First, TreeRay::TreeVertices);
            let ends = vec![EndHandle::new("end", ray)];
            GraphPresentation::new(spec.id(), root_id(), oracle, ends, BTreeMap::new())
        }
        FamilySpec::GammaR { r } => {
            let r = *r;
            let oracle = Arc::new(GammaOracle { r });
            let ends = tree_branch_ends(r, TreeRay::GadgetY);
            GraphPresentation::new(
                spec.id(),
                root_id().child(roles::X),
                oracle,
                ends,
                BTreeMap::new(),
            )
        }
        FamilySpec::CompleteChain { k } => {
            let k = *k;
            let oracle = Arc::new(ChainOracle { k });
            let ray = Arc::new(move |i: usize| Some(VertexId::new(vec![i as i64 + 1, 0])));
            let ends = vec![EndHandle::new("tail", ray)];
            GraphPresentation::new(
                spec.id(),
                VertexId::new(vec![1, 0]),
                oracle,
                ends,
                BTreeMap::new(),
            )
        }
        FamilySpec::PlanarBlowup { rounds, t } => {
            let (rounds, t) = (*rounds, *t);
            let oracle = Arc::new(BlowupOracle { rounds, t: t as i64 });
            let ray_dir = |sign: i64| -> Arc<dyn Fn(usize) -> Option<VertexId> + Send + Sync> {
                Arc::new(move |i: usize| {
                    let i = i as i64;
                    if rounds == 1 {
                        Some(VertexId::new(vec![sign * i]))
                    } else if i % 2 == 0 {
                        Some(VertexId::new(vec![sign * (i / 2)]))
                    } else if sign > 0 {
                        Some(VertexId::new(vec![i / 2, 0]))
                    } else {
                        Some(VertexId::new(vec![-(i / 2) - 1, 0]))
                    }
                })
            };
            let ends = vec![
                EndHandle::new("left", ray_dir(-1)),
                EndHandle::new("right", ray_dir(1)),
            ];
            GraphPresentation::new(
                spec.id(),
                VertexId::new(vec![0]),
                oracle,
                ends,
                BTreeMap::new(),
            )
        }
        FamilySpec::LayeredExplicit { layers, edges } => {
            let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
            for v in layers.iter().flatten() {
                adj.entry(v.clone()).or_default();
            }
            for (u, v) in edges {
                adj.get_mut(u).unwrap().insert(v.clone());
                adj.get_mut(v).unwrap().insert(u.clone());
            }
            let oracle = Arc::new(ExplicitOracle::new(adj, BTreeSet::new()));
            let root = layers[0][0].clone();
            GraphPresentation::new(spec.id(), root, oracle, Vec::new(), BTreeMap::new())
        }
    };
    let p = p.with_canonical(Arc::new(FamilyCanonical { spec: spec.clone() }));
    Ok(p)
}

// --- tree addressing --------------------------------------------------------

fn root_id() -> VertexId {
    VertexId::new(vec![0])
}

fn apex_id(j: u32) -> VertexId {
    VertexId::new(vec![1, j as i64])
}

fn is_tree_root(a: &VertexId) -> bool {
    a.len() == 1
}

/// Children of a tree vertex: the root has `r`, everyone else `r - 1`.
fn child_count(r: u32, a: &VertexId) -> i64 {
    if is_tree_root(a) {
        r as i64
    } else {
        r as i64 - 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Descent {
    First,
    Last,
}

#[derive(Clone, Copy)]
enum TreeRay {
    /// The branch vertices themselves.
    TreeVertices,
    /// The y-gadget vertices along the branch (always adjacent in gamma).
    GadgetY,
}

/// `i`-th tree vertex (0-based from the root) of the branch that goes to
/// root child `c` and then descends on the given side forever.
fn branch_vertex(r: u32, c: i64, descent: Descent, i: usize) -> VertexId {
    let mut v = root_id();
    for step in 0..i {
        let token = if step == 0 {
            c
        } else {
            match descent {
                Descent::First => 0,
                Descent::Last => child_count(r, &v) - 1,
            }
        };
        v = v.child(token);
    }
    v
}

fn branch_ray(
    r: u32,
    c: i64,
    descent: Descent,
    kind: TreeRay,
) -> Arc<dyn Fn(usize) -> Option<VertexId> + Send + Sync> {
    Arc::new(move |i: usize| {
        let v = branch_vertex(r, c, descent, i);
        Some(match kind {
            TreeRay::TreeVertices => v,
            TreeRay::GadgetY => v.child(roles::Y),
        })
    })
}

/// Canonical end catalog for tree-shaped families: one end per root child
/// descending first-child forever, plus the all-last-children branch.
fn tree_branch_ends(r: u32, kind: TreeRay) -> Vec<EndHandle> {
    let mut ends: Vec<EndHandle> = (0..r as i64)
        .map(|c| {
            EndHandle::new(format!("branch-{c}-first"), branch_ray(r, c, Descent::First, kind))
        })
        .collect();
    ends.push(EndHandle::new(
        "branch-last",
        branch_ray(r, r as i64 - 1, Descent::Last, kind),
    ));
    ends
}

/// Parse a branch end produced by [`tree_branch_ends`] back into its rule.
fn parse_branch_end(r: u32, name: &str) -> Option<(i64, Descent)> {
    if name == "branch-last" {
        return Some((r as i64 - 1, Descent::Last));
    }
    let rest = name.strip_prefix("branch-")?;
    let c: i64 = rest.strip_suffix("-first")?.parse().ok()?;
    (0..r as i64).contains(&c).then_some((c, Descent::First))
}

// --- plain and decorated trees ----------------------------------------------

struct TreeOracle {
    r: u32,
}

fn tree_neighbors(r: u32, v: &VertexId) -> Vec<VertexId> {
    let mut out = Vec::new();
    if let Some(p) = v.parent() {
        out.push(p);
    }
    for c in 0..child_count(r, v) {
        out.push(v.child(c));
    }
    out
}

impl Oracle for TreeOracle {
    fn neighbors<'a>(&'a self, v: &VertexId) -> Box<dyn Iterator<Item = VertexId> + 'a> {
        Box::new(tree_neighbors(self.r, v).into_iter())
    }
}

struct ApexTreeOracle {
    r: u32,
    apexes: u32,
}

impl Oracle for ApexTreeOracle {
    fn neighbors<'a>(&'a self, v: &VertexId) -> Box<dyn Iterator<Item = VertexId> + 'a> {
        if v.tokens()[0] == 1 {
            // apex: every tree vertex, in level order
            return Box::new(TreeLevelIter::new(self.r));
        }
        let mut out = tree_neighbors(self.r, v);
        out.extend((0..self.apexes).map(apex_id));
        Box::new(out.into_iter())
    }
}

/// Level-by-level enumeration of all tree vertices; infinite.
struct TreeLevelIter {
    r: u32,
    level: Vec<VertexId>,
    idx: usize,
}

impl TreeLevelIter {
    fn new(r: u32) -> Self {
        TreeLevelIter { r, level: vec![root_id()], idx: 0 }
    }
}

impl Iterator for TreeLevelIter {
    type Item = VertexId;

    fn next(&mut self) -> Option<VertexId> {
        if self.idx == self.level.len() {
            let next: Vec<VertexId> = self
                .level
                .iter()
                .flat_map(|v| (0..child_count(self.r, v)).map(|c| v.child(c)))
                .collect();
            self.level = next;
            self.idx = 0;
        }
        let v = self.level[self.idx].clone();
        self.idx += 1;
        Some(v)
    }
}

struct SpanningPathTreeOracle {
    r: u32,
}

/// Successor of a tree address within its level, in lexicographic order.
/// First token position ranges over the root's children, deeper positions
/// over non-root children.
fn level_successor(r: u32, a: &VertexId) -> Option<VertexId> {
    let mut t = a.tokens().to_vec();
    for i in (1..t.len()).rev() {
        let max = if i == 1 { r as i64 - 1 } else { r as i64 - 2 };
        if t[i] < max {
            t[i] += 1;
            for x in t.iter_mut().skip(i + 1) {
                *x = 0;
            }
            return Some(VertexId::new(t));
        }
        t[i] = 0;
    }
    None
}

fn level_predecessor(r: u32, a: &VertexId) -> Option<VertexId> {
    let mut t = a.tokens().to_vec();
    for i in (1..t.len()).rev() {
        if t[i] > 0 {
            t[i] -= 1;
            for x in t.iter_mut().enumerate().skip(i + 1) {
                *x.1 = if x.0 == 1 { r as i64 - 1 } else { r as i64 - 2 };
            }
            return Some(VertexId::new(t));
        }
    }
    None
}

impl Oracle for SpanningPathTreeOracle {
    fn neighbors<'a>(&'a self, v: &VertexId) -> Box<dyn Iterator<Item = VertexId> + 'a> {
        let mut out = tree_neighbors(self.r, v);
        if !is_tree_root(v) {
            out.extend(level_predecessor(self.r, v));
            out.extend(level_successor(self.r, v));
        }
        out.sort();
        Box::new(out.into_iter())
    }
}

// --- gamma ------------------------------------------------------------------

pub mod roles {
    pub const X: i64 = 0;
    pub const Y: i64 = 1;
    pub const Z: i64 = 2;
}

struct GammaOracle {
    r: u32,
}

/// Color of the tree edge from a vertex to its child with index `c`:
/// the first ⌊r/2⌋ children are blue, the rest red.
fn is_blue(r: u32, c: i64) -> bool {
    c < (r / 2) as i64
}

fn gamma_neighbors(r: u32, v: &VertexId) -> Vec<VertexId> {
    let addr = v.parent().expect("gamma ids have a role token");
    let role = v.last();
    let mut out = Vec::new();
    let parent = addr.parent().map(|p| (p, is_blue(r, addr.last())));
    let children: Vec<(VertexId, bool)> = (0..child_count(r, &addr))
        .map(|c| (addr.child(c), is_blue(r, c)))
        .collect();
    match role {
        roles::X => {
            out.push(addr.child(roles::Y));
            if let Some((p, blue)) = parent {
                out.push(p.child(if blue { roles::X } else { roles::Y }));
            }
            for (w, blue) in &children {
                if *blue {
                    out.push(w.child(roles::X));
                }
            }
        }
        roles::Y => {
            out.push(addr.child(roles::X));
            out.push(addr.child(roles::Z));
            if let Some((p, _)) = parent {
                out.push(p.child(roles::Y));
            }
            for (w, blue) in &children {
                if *blue {
                    out.push(w.child(roles::Y));
                    out.push(w.child(roles::Z));
                } else {
                    out.push(w.child(roles::X));
                    out.push(w.child(roles::Y));
                }
            }
        }
        roles::Z => {
            out.push(addr.child(roles::Y));
            if let Some((p, blue)) = parent {
                out.push(p.child(if blue { roles::Y } else { roles::Z }));
            }
            for (w, blue) in &children {
                if !*blue {
                    out.push(w.child(roles::Z));
                }
            }
        }
        other => panic!("gamma role token out of range: {other}"),
    }
    out.sort();
    out
}

impl Oracle for GammaOracle {
    fn neighbors<'a>(&'a self, v: &VertexId) -> Box<dyn Iterator<Item = VertexId> + 'a> {
        Box::new(gamma_neighbors(self.r, v).into_iter())
    }
}

// --- chain ------------------------------------------------------------------

struct ChainOracle {
    k: u32,
}

impl Oracle for ChainOracle {
    fn neighbors<'a>(&'a self, v: &VertexId) -> Box<dyn Iterator<Item = VertexId> + 'a> {
        let (i, j) = (v.tokens()[0], v.tokens()[1]);
        let k = self.k as i64;
        let mut out = Vec::new();
        if i > 1 {
            out.extend((0..k).map(|b| VertexId::new(vec![i - 1, b])));
        }
        out.extend((0..k).filter(|b| *b != j).map(|b| VertexId::new(vec![i, b])));
        out.extend((0..k).map(|b| VertexId::new(vec![i + 1, b])));
        Box::new(out.into_iter())
    }
}

// --- planar blowup ----------------------------------------------------------

struct BlowupOracle {
    rounds: u32,
    t: i64,
}

impl BlowupOracle {
    fn neighbors_of(&self, v: &VertexId) -> Vec<VertexId> {
        let tok = v.tokens();
        let (alpha, j) = (&tok[..tok.len() - 1], tok[tok.len() - 1]);
        let mut out = Vec::new();
        // spokes to the endpoints of the replaced edge this path hangs on
        if !alpha.is_empty() {
            let gamma = &alpha[..alpha.len() - 1];
            let e = alpha[alpha.len() - 1];
            out.push(id_cat(gamma, &[e]));
            out.push(id_cat(gamma, &[e + 1]));
        }
        let original = alpha.is_empty();
        let own_round = alpha.len() as u32 + 1;
        let replaced = own_round < self.rounds;
        // left side edge (alpha, j-1)
        if original || j >= 1 {
            if replaced {
                for q in 0..self.t {
                    out.push(id_cat(alpha, &[j - 1, q]));
                }
            } else {
                out.push(id_cat(alpha, &[j - 1]));
            }
        }
        // right side edge (alpha, j)
        if original || j <= self.t - 2 {
            if replaced {
                for q in 0..self.t {
                    out.push(id_cat(alpha, &[j, q]));
                }
            } else {
                out.push(id_cat(alpha, &[j + 1]));
            }
        }
        out.sort();
        out
    }
}

fn id_cat(a: &[i64], b: &[i64]) -> VertexId {
    let mut t = a.to_vec();
    t.extend_from_slice(b);
    VertexId::new(t)
}

impl Oracle for BlowupOracle {
    fn neighbors<'a>(&'a self, v: &VertexId) -> Box<dyn Iterator<Item = VertexId> + 'a> {
        Box::new(self.neighbors_of(v).into_iter())
    }
}

// --- canonical sequences ------------------------------------------------

/// The regions of the requested canonical sequence for `end`, indexed from
/// the second branch vertex (the whole-graph step has an empty boundary and
/// is skipped).
pub fn canonical_sequence(
    spec: &FamilySpec,
    kind: CanonicalSequenceKind,
    end: &EndHandle,
    steps: usize,
    t: &Truncation,
) -> Result<Vec<Region>> {
    let wrong = || {
        Err(Error::InvalidParams(format!(
            "sequence kind {kind:?} does not apply to {}",
            spec.id()
        )))
    };
    match (spec, kind) {
        (FamilySpec::GammaR { r }, CanonicalSequenceKind::GammaH) => {
            gamma_sequence(*r, end, steps, t, GammaFlavor::FullClosure)
        }
        (FamilySpec::GammaR { r }, CanonicalSequenceKind::GammaK) => {
            gamma_sequence(*r, end, steps, t, GammaFlavor::ColoredChildren)
        }
        (FamilySpec::CompleteChain { .. }, CanonicalSequenceKind::ChainTail) => {
            chain_tail_sequence(end, steps, t)
        }
        (FamilySpec::RegularTree { r }, CanonicalSequenceKind::TreeSubtree)
        | (FamilySpec::ApexTree { r, .. }, CanonicalSequenceKind::TreeSubtree) => {
            tree_subtree_sequence(*r, end, steps, t)
        }
        _ => wrong(),
    }
}

enum GammaFlavor {
    FullClosure,
    ColoredChildren,
}

fn require_deep_enough(region: Result<Region>, step: usize) -> Result<Region> {
    match region {
        Ok(r) if r.reliable => Ok(r),
        Ok(_) => Err(Error::DepthInsufficient(format!(
            "boundary of step {step} touches unexplored vertices"
        ))),
        Err(Error::EmptyMembers) => Err(Error::DepthInsufficient(format!(
            "step {step} lies outside the truncation"
        ))),
        Err(e) => Err(e),
    }
}

fn gamma_sequence(
    r: u32,
    end: &EndHandle,
    steps: usize,
    t: &Truncation,
    flavor: GammaFlavor,
) -> Result<Vec<Region>> {
    let (c, descent) = parse_branch_end(r, end.name())
        .ok_or_else(|| Error::EndNotInCatalog(end.name().to_string()))?;
    let mut out = Vec::new();
    for i in 1..=steps {
        let v = branch_vertex(r, c, descent, i);
        let members: BTreeSet<VertexId> = match flavor {
            GammaFlavor::FullClosure => t
                .vertices
                .iter()
                .filter(|g| g.parent().is_some_and(|a| a.starts_with(&v)))
                .cloned()
                .collect(),
            GammaFlavor::ColoredChildren => {
                let next = branch_vertex(r, c, descent, i + 1);
                let ray_blue = is_blue(r, next.last());
                let mut m: BTreeSet<VertexId> =
                    [v.child(roles::X), v.child(roles::Y)].into();
                for cc in 0..child_count(r, &v) {
                    if is_blue(r, cc) == ray_blue {
                        let w = v.child(cc);
                        m.extend(
                            t.vertices
                                .iter()
                                .filter(|g| g.parent().is_some_and(|a| a.starts_with(&w)))
                                .cloned(),
                        );
                    }
                }
                m.retain(|g| t.vertices.contains(g));
                m
            }
        };
        out.push(require_deep_enough(Region::of(t, members), i)?);
    }
    Ok(out)
}

fn chain_tail_sequence(end: &EndHandle, steps: usize, t: &Truncation) -> Result<Vec<Region>> {
    if end.name() != "tail" {
        return Err(Error::EndNotInCatalog(end.name().to_string()));
    }
    let mut out = Vec::new();
    for i in 1..=steps {
        let from_copy = i as i64 + 1;
        let members: BTreeSet<VertexId> = t
            .vertices
            .iter()
            .filter(|v| v.tokens()[0] >= from_copy)
            .cloned()
            .collect();
        out.push(require_deep_enough(Region::of(t, members), i)?);
    }
    Ok(out)
}

fn tree_subtree_sequence(
    r: u32,
    end: &EndHandle,
    steps: usize,
    t: &Truncation,
) -> Result<Vec<Region>> {
    let (c, descent) = parse_branch_end(r, end.name())
        .ok_or_else(|| Error::EndNotInCatalog(end.name().to_string()))?;
    let mut out = Vec::new();
    for i in 1..=steps {
        let v = branch_vertex(r, c, descent, i);
        let members: BTreeSet<VertexId> = t
            .vertices
            .iter()
            .filter(|w| w.starts_with(&v))
            .cloned()
            .collect();
        out.push(require_deep_enough(Region::of(t, members), i)?);
    }
    Ok(out)
}

/// Supplies the family's canonical sequences to the degree estimator.
struct FamilyCanonical {
    spec: FamilySpec,
}

impl CanonicalSource for FamilyCanonical {
    fn sequences(
        &self,
        end: &EndHandle,
        steps: usize,
        t: &Truncation,
    ) -> Vec<(String, Vec<Region>)> {
        let kinds: &[(&str, CanonicalSequenceKind)] = match self.spec {
            FamilySpec::GammaR { .. } => &[
                ("gamma-h", CanonicalSequenceKind::GammaH),
                ("gamma-k", CanonicalSequenceKind::GammaK),
            ],
            FamilySpec::CompleteChain { .. } => &[("chain-tail", CanonicalSequenceKind::ChainTail)],
            FamilySpec::RegularTree { .. } | FamilySpec::ApexTree { .. } => {
                &[("tree-subtree", CanonicalSequenceKind::TreeSubtree)]
            }
            _ => &[],
        };
        kinds
            .iter()
            .filter_map(|(name, kind)| {
                canonical_sequence(&self.spec, *kind, end, steps, t)
                    .ok()
                    .map(|regions| (name.to_string(), regions))
            })
            .collect()
    }

    fn known_relative_degree(&self, _end: &EndHandle) -> Option<crate::Rat> {
        known_relative_degree(&self.spec)
    }
}

/// The family's known-exact relative end degree, when the construction pins
/// one: trees and gamma have boundary ratio exactly 1 (the ratio is never
/// below 1, and the canonical sequences attain it), the chain has its clique
/// order, and apex trees add one per apex on top of the tree value.
pub fn known_relative_degree(spec: &FamilySpec) -> Option<crate::Rat> {
    use crate::Rat;
    match spec {
        FamilySpec::RegularTree { .. } | FamilySpec::GammaR { .. } => Some(Rat::from_integer(1)),
        FamilySpec::ApexTree { apexes, .. } => Some(Rat::from_integer(1 + *apexes as i64)),
        FamilySpec::CompleteChain { k } => Some(Rat::from_integer(*k as i64)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::truncation::{build_truncation, DegreeCap};
    use crate::vertex::vid;

    #[test]
    fn gamma_x_vertex_degree() {
        // non-root x vertices: path edge + parent edge + one x edge per blue child
        let p = make_presentation(&FamilySpec::GammaR { r: 4 }).unwrap();
        let t = build_truncation(&p, 6, DegreeCap::Unlimited).unwrap();
        let x = vid(&[0, 0, roles::X]);
        assert!(t.interior.contains(&x));
        assert_eq!(t.degree(&x), 4);
    }

    #[test]
    fn gamma_locally_finite_max_degree() {
        // the y vertex of the root is the worst case: two path edges plus
        // two edges per child, r children at the root
        for r in [4u32, 5, 6] {
            let p = make_presentation(&FamilySpec::GammaR { r }).unwrap();
            let t = build_truncation(&p, 4, DegreeCap::Unlimited).unwrap();
            let max = t.interior.iter().map(|v| t.degree(v)).max().unwrap();
            assert_eq!(max, 2 * r as usize + 2);
            assert_eq!(t.degree(&vid(&[0, roles::Y])), 2 * r as usize + 2);
        }
    }

    #[test]
    fn chain_interior_degree() {
        let p = make_presentation(&FamilySpec::CompleteChain { k: 4 }).unwrap();
        let t = build_truncation(&p, 3, DegreeCap::Unlimited).unwrap();
        assert_eq!(t.degree(&vid(&[2, 1])), 11); // 3 inside + 4 + 4
    }

    #[test]
    fn apex_dominator_catalog() {
        let p = make_presentation(&FamilySpec::ApexTree { r: 3, apexes: 1 }).unwrap();
        assert_eq!(p.ends().len(), 4);
        for e in p.ends() {
            let dom = p.dominators(e);
            assert_eq!(dom.len(), 1);
            assert!(dom.contains(&vid(&[1, 0])));
        }
        let p3 = make_presentation(&FamilySpec::ApexTree { r: 3, apexes: 3 }).unwrap();
        for e in p3.ends() {
            assert_eq!(p3.dominators(e).len(), 3);
        }
    }

    #[test]
    fn spanning_path_levels() {
        let p = make_presentation(&FamilySpec::SpanningPathTree { r: 3 }).unwrap();
        let t = build_truncation(&p, 3, DegreeCap::Unlimited).unwrap();
        // level 2 in lexicographic order: 0/0/0, 0/0/1, 0/1/0, ...
        assert!(t.contains_edge(&vid(&[0, 0, 1]), &vid(&[0, 1, 0])));
        assert!(t.contains_edge(&vid(&[0, 0, 0]), &vid(&[0, 0, 1])));
        assert!(!t.contains_edge(&vid(&[0, 0, 0]), &vid(&[0, 1, 0])));
        // level 1 path
        assert!(t.contains_edge(&vid(&[0, 0]), &vid(&[0, 1])));
        assert!(t.contains_edge(&vid(&[0, 1]), &vid(&[0, 2])));
        assert!(!t.contains_edge(&vid(&[0, 0]), &vid(&[0, 2])));
    }

    #[test]
    fn blowup_degrees() {
        let p = make_presentation(&FamilySpec::PlanarBlowup { rounds: 2, t: 3 }).unwrap();
        let t = build_truncation(&p, 4, DegreeCap::Unlimited).unwrap();
        // original ray vertex: both incident edges replaced by 3 middles each
        assert_eq!(t.degree(&vid(&[0])), 6);
        // middle of an unreplaced last-round path: two spokes plus path edges
        assert_eq!(t.degree(&vid(&[0, 1])), 4);
        assert_eq!(t.degree(&vid(&[0, 0])), 3);
        // rays are valid
        let right = p.end("right").unwrap();
        for i in 0..4 {
            let a = right.ray_vertex(i).unwrap();
            let b = right.ray_vertex(i + 1).unwrap();
            assert!(p.neighbors(&a).any(|n| n == b), "ray break {a} {b}");
        }
    }

    #[test]
    fn manifest_roundtrip() {
        let specs = vec![
            FamilySpec::RegularTree { r: 3 },
            FamilySpec::ApexTree { r: 3, apexes: 2 },
            FamilySpec::GammaR { r: 6 },
            FamilySpec::CompleteChain { k: 4 },
            FamilySpec::PlanarBlowup { rounds: 2, t: 3 },
        ];
        for s in specs {
            let m = s.to_manifest();
            assert_eq!(FamilySpec::from_manifest(&m).unwrap(), s);
        }
        // apexes defaults to 1
        let v: Value = serde_json::from_str(r#"{"family":"apex-tree","params":{"r":3}}"#).unwrap();
        assert_eq!(
            FamilySpec::from_manifest(&v).unwrap(),
            FamilySpec::ApexTree { r: 3, apexes: 1 }
        );
        assert!(FamilySpec::from_manifest(&serde_json::json!({"family":"nope"})).is_err());
    }

    #[test]
    fn gamma_rays_are_valid() {
        let p = make_presentation(&FamilySpec::GammaR { r: 4 }).unwrap();
        for end in p.ends() {
            for i in 0..5 {
                let a = end.ray_vertex(i).unwrap();
                let b = end.ray_vertex(i + 1).unwrap();
                assert!(
                    p.neighbors(&a).any(|n| n == b),
                    "{}: ray break {a} {b}",
                    end.name()
                );
            }
        }
    }
}
