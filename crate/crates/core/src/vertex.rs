use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// A vertex of a (possibly infinite) graph, encoded as a finite sequence of
/// integer tokens (tree address, layer index, copy index, role tag).
///
/// The derived `Ord` is lexicographic on the token sequence and is the total
/// order used for all tie-breaking in the crate. Equality is structural and
/// the encoding round-trips through the slash-separated text format.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(Vec<i64>);

impl VertexId {
    pub fn new(tokens: impl Into<Vec<i64>>) -> Self {
        let tokens = tokens.into();
        assert!(!tokens.is_empty(), "vertex ids need at least one token");
        VertexId(tokens)
    }

    pub fn tokens(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Child address: this id with one extra token.
    pub fn child(&self, token: i64) -> VertexId {
        let mut t = self.0.clone();
        t.push(token);
        VertexId(t)
    }

    /// Parent address, if the id has more than one token.
    pub fn parent(&self) -> Option<VertexId> {
        if self.0.len() <= 1 {
            None
        } else {
            Some(VertexId(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn last(&self) -> i64 {
        *self.0.last().unwrap()
    }

    pub fn starts_with(&self, prefix: &VertexId) -> bool {
        self.0.len() >= prefix.0.len() && self.0[..prefix.0.len()] == prefix.0[..]
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for t in &self.0 {
            if !first {
                write!(f, "/")?;
            }
            write!(f, "{t}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v[{self}]")
    }
}

impl FromStr for VertexId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if s.is_empty() {
            return Err(Error::Parse("empty vertex id".into()));
        }
        let tokens: Result<Vec<i64>, Error> = s
            .split('/')
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad vertex token `{t}` in `{s}`")))
            })
            .collect();
        Ok(VertexId(tokens?))
    }
}

/// Convenience constructor used pervasively in tests.
pub fn vid(tokens: &[i64]) -> VertexId {
    VertexId::new(tokens.to_vec())
}

/// An undirected edge, stored with its endpoints in sorted order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(VertexId, VertexId);

impl Edge {
    pub fn new(u: VertexId, v: VertexId) -> Self {
        assert!(u != v, "self-loops are not allowed");
        if u <= v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn ends(&self) -> (&VertexId, &VertexId) {
        (&self.0, &self.1)
    }

    pub fn touches(&self, v: &VertexId) -> bool {
        &self.0 == v || &self.1 == v
    }

    pub fn other(&self, v: &VertexId) -> Option<&VertexId> {
        if &self.0 == v {
            Some(&self.1)
        } else if &self.1 == v {
            Some(&self.0)
        } else {
            None
        }
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e[{} {}]", self.0, self.1)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.0, self.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lexicographic_order() {
        assert!(vid(&[0]) < vid(&[0, 0]));
        assert!(vid(&[0, 0, 5]) < vid(&[0, 1]));
        assert!(vid(&[0, 3]) < vid(&[1]));
        assert!(vid(&[-2]) < vid(&[0]));
    }

    #[test]
    fn display_roundtrip() {
        let v = vid(&[2, 0, -7, 3]);
        assert_eq!(v.to_string(), "2/0/-7/3");
        assert_eq!("2/0/-7/3".parse::<VertexId>().unwrap(), v);
        assert!("".parse::<VertexId>().is_err());
        assert!("1//2".parse::<VertexId>().is_err());
    }

    #[test]
    fn edge_normalizes() {
        let e = Edge::new(vid(&[3]), vid(&[1]));
        assert_eq!(e.ends().0, &vid(&[1]));
        assert_eq!(e.other(&vid(&[1])), Some(&vid(&[3])));
    }

    proptest! {
        #[test]
        fn roundtrip_any(tokens in proptest::collection::vec(-1000i64..1000, 1..6)) {
            let v = VertexId::new(tokens);
            let back: VertexId = v.to_string().parse().unwrap();
            prop_assert_eq!(back, v);
        }
    }
}
