use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid family parameters: {0}")]
    InvalidParams(String),

    #[error("degree cap 0 with positive radius expands to nothing")]
    EmptyExpansion,

    #[error("member set is empty")]
    EmptyMembers,

    #[error("member set does not induce a connected subgraph")]
    NotConnected,

    #[error("vertex {0} is not part of the truncation")]
    UnknownVertex(String),

    #[error("end `{0}` is not in the presentation's catalog")]
    EndNotInCatalog(String),

    #[error("truncation too shallow: {0}")]
    DepthInsufficient(String),

    #[error("candidate set does not separate the sources from the targets")]
    NotSeparating,

    #[error("sources and targets intersect")]
    Infeasible,

    #[error("region at step {step} is unreliable: {reason}")]
    UnreliableRegion { step: usize, reason: String },

    #[error("no region satisfying the cut-off conditions within depth {depth}")]
    NotFoundAtDepth { depth: u32 },

    #[error("layered graph violates the feeding invariant at layer {layer}")]
    LayerInvariant { layer: usize },

    #[error("degree hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("presentation is inconsistent: {0}")]
    InvalidPresentation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn bad_rational(s: &str) -> Self {
        Error::Parse(format!("not a rational `p/q`: {s}"))
    }
}
