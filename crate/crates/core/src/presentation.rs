use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::region::Region;
use crate::truncation::Truncation;
use crate::vertex::VertexId;

/// Deterministic neighbor oracle of a (possibly infinite) graph.
///
/// The stream for a fixed vertex must enumerate the same prefix on every
/// call, must not contain the vertex itself, and must be symmetric:
/// `u` appears in `neighbors(v)` iff `v` appears in `neighbors(u)`.
pub trait Oracle: Send + Sync {
    fn neighbors<'a>(&'a self, v: &VertexId) -> Box<dyn Iterator<Item = VertexId> + 'a>;

    /// Vertices whose adjacency data is known to be incomplete (used by
    /// explicit finite stand-ins for larger graphs). Such vertices are
    /// classified as frontier in every truncation.
    fn incomplete(&self, _v: &VertexId) -> bool {
        false
    }
}

/// Generator of the canonical ray pinning an end: index `i` to the `i`-th ray
/// vertex. Returns `None` past the horizon of explicitly presented graphs;
/// symbolic families always return `Some`.
pub type RayGen = Arc<dyn Fn(usize) -> Option<VertexId> + Send + Sync>;

/// Symbolic handle for an end: a family-specific name plus the canonical ray.
#[derive(Clone)]
pub struct EndHandle {
    name: String,
    ray: RayGen,
}

impl EndHandle {
    pub fn new(name: impl Into<String>, ray: RayGen) -> Self {
        EndHandle { name: name.into(), ray }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ray_vertex(&self, i: usize) -> Option<VertexId> {
        (self.ray)(i)
    }

    /// Prefix of the canonical ray that lies inside the given vertex set,
    /// stopping at the first ray vertex outside it.
    pub fn ray_prefix_in(&self, vertices: &BTreeSet<VertexId>) -> Vec<VertexId> {
        let mut out = Vec::new();
        for i in 0.. {
            match self.ray_vertex(i) {
                Some(v) if vertices.contains(&v) => out.push(v),
                _ => break,
            }
        }
        out
    }
}

impl PartialEq for EndHandle {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}
impl Eq for EndHandle {}
impl PartialOrd for EndHandle {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for EndHandle {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.name.cmp(&other.name)
    }
}
impl fmt::Debug for EndHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "end[{}]", self.name)
    }
}

/// Hook with which a family supplies its hand-constructed region sequences
/// (used by degree estimation alongside the generic construction).
pub trait CanonicalSource: Send + Sync {
    /// Named canonical sequences for `end`, each a nested list of regions
    /// computed inside `t`. Implementations return an empty list when the
    /// kind does not apply to the end.
    fn sequences(
        &self,
        end: &EndHandle,
        steps: usize,
        t: &Truncation,
    ) -> Vec<(String, Vec<Region>)>;

    /// The relative degree the construction pins exactly, if any.
    fn known_relative_degree(&self, _end: &EndHandle) -> Option<crate::Rat> {
        None
    }
}

/// A finitely-describable, possibly infinite graph: a deterministic neighbor
/// oracle plus a root and optional symbolic end/dominator catalogs.
#[derive(Clone)]
pub struct GraphPresentation {
    id: String,
    root: VertexId,
    oracle: Arc<dyn Oracle>,
    ends: Vec<EndHandle>,
    dominators: BTreeMap<String, BTreeSet<VertexId>>,
    canonical: Option<Arc<dyn CanonicalSource>>,
}

impl GraphPresentation {
    pub fn new(
        id: impl Into<String>,
        root: VertexId,
        oracle: Arc<dyn Oracle>,
        ends: Vec<EndHandle>,
        dominators: BTreeMap<String, BTreeSet<VertexId>>,
    ) -> Self {
        GraphPresentation {
            id: id.into(),
            root,
            oracle,
            ends,
            dominators,
            canonical: None,
        }
    }

    pub fn with_canonical(mut self, source: Arc<dyn CanonicalSource>) -> Self {
        self.canonical = Some(source);
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn root(&self) -> &VertexId {
        &self.root
    }

    pub fn neighbors<'a>(&'a self, v: &VertexId) -> Box<dyn Iterator<Item = VertexId> + 'a> {
        self.oracle.neighbors(v)
    }

    pub fn incomplete(&self, v: &VertexId) -> bool {
        self.oracle.incomplete(v)
    }

    pub fn ends(&self) -> &[EndHandle] {
        &self.ends
    }

    pub fn end(&self, name: &str) -> Option<&EndHandle> {
        self.ends.iter().find(|e| e.name() == name)
    }

    /// Vertices known to dominate the end; empty for locally finite families.
    pub fn dominators(&self, end: &EndHandle) -> BTreeSet<VertexId> {
        self.dominators.get(end.name()).cloned().unwrap_or_default()
    }

    pub fn canonical_source(&self) -> Option<&Arc<dyn CanonicalSource>> {
        self.canonical.as_ref()
    }

    /// The same graph with a finite vertex set deleted: the oracle filters
    /// the removed vertices from every stream. `new_root` must survive.
    pub fn without(&self, removed: BTreeSet<VertexId>, new_root: VertexId) -> GraphPresentation {
        assert!(!removed.contains(&new_root), "new root was removed");
        let inner = Arc::clone(&self.oracle);
        let filter = Arc::new(FilteredOracle { inner, removed: removed.clone() });
        GraphPresentation {
            id: format!("{}-minus-{}", self.id, removed.len()),
            root: new_root,
            oracle: filter,
            ends: self.ends.clone(),
            dominators: self.dominators.clone(),
            canonical: self.canonical.clone(),
        }
    }
}

impl fmt::Debug for GraphPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "presentation[{}]", self.id)
    }
}

struct FilteredOracle {
    inner: Arc<dyn Oracle>,
    removed: BTreeSet<VertexId>,
}

impl Oracle for FilteredOracle {
    fn neighbors<'a>(&'a self, v: &VertexId) -> Box<dyn Iterator<Item = VertexId> + 'a> {
        if self.removed.contains(v) {
            return Box::new(std::iter::empty());
        }
        Box::new(self.inner.neighbors(v).filter(|u| !self.removed.contains(u)))
    }

    fn incomplete(&self, v: &VertexId) -> bool {
        self.inner.incomplete(v)
    }
}

/// Finite graph given by an explicit adjacency map. Vertices listed in
/// `incomplete` stand for points where a larger graph was cut off; they are
/// treated as frontier by every truncation built from this presentation.
pub struct ExplicitOracle {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
    incomplete: BTreeSet<VertexId>,
}

impl ExplicitOracle {
    pub fn new(
        adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
        incomplete: BTreeSet<VertexId>,
    ) -> Self {
        ExplicitOracle { adj, incomplete }
    }

    pub fn from_edges(edges: &[(VertexId, VertexId)]) -> Self {
        let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
        for (u, v) in edges {
            adj.entry(u.clone()).or_default().insert(v.clone());
            adj.entry(v.clone()).or_default().insert(u.clone());
        }
        ExplicitOracle { adj, incomplete: BTreeSet::new() }
    }
}

impl Oracle for ExplicitOracle {
    fn neighbors<'a>(&'a self, v: &VertexId) -> Box<dyn Iterator<Item = VertexId> + 'a> {
        match self.adj.get(v) {
            Some(set) => Box::new(set.iter().cloned()),
            None => Box::new(std::iter::empty()),
        }
    }

    fn incomplete(&self, v: &VertexId) -> bool {
        self.incomplete.contains(v)
    }
}

/// Ray generator following an explicit finite vertex path.
pub fn path_ray(path: Vec<VertexId>) -> RayGen {
    Arc::new(move |i| path.get(i).cloned())
}
