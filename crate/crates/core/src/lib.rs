//! Desk-scale machinery for infinite graphs presented by lazy neighbor
//! oracles: finite truncations, boundary ratios of region sequences,
//! vertex separators and domination, end-degree estimates, and extraction
//! of dense finite subgraphs or topological clique witnesses.
//!
//! All ratio arithmetic is exact rational and every operation is
//! deterministic: ties are broken by the total order on [`VertexId`].

pub mod end_degree;
pub mod error;
pub mod extraction;
pub mod families;
pub mod finite;
pub mod flow;
pub mod minors;
pub mod planarity;
pub mod presentation;
pub mod region;
pub mod separators;
pub mod truncation;
pub mod vertex;

pub use error::Error;
pub use presentation::{EndHandle, GraphPresentation};
pub use region::Region;
pub use truncation::{DegreeCap, Truncation};
pub use vertex::{Edge, VertexId};

/// Exact rational used for all boundary ratios and degree estimates.
pub type Rat = num::rational::Ratio<i64>;

pub type Result<T> = std::result::Result<T, Error>;

/// Parse a rational given as `p/q` or a bare integer `p`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| Error::bad_rational(s))?;
            let q: i64 = q.trim().parse().map_err(|_| Error::bad_rational(s))?;
            if q == 0 {
                return Err(Error::bad_rational(s));
            }
            Rat::new(p, q)
        }
        None => Rat::from_integer(s.parse().map_err(|_| Error::bad_rational(s))?),
    };
    Ok(parsed)
}
