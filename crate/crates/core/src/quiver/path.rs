use super::{EdgeId, Quiver, QuiverError, VertexId};
use serde::de::Error as _;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// A finite path: either a trivial path sitting at a vertex, or a nonempty
/// composable edge sequence.
///
/// Paths do not carry a reference to their quiver; endpoint and validity
/// queries take the quiver as an argument.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Path {
    Trivial(VertexId),
    Edges(Vec<EdgeId>),
}

impl Path {
    pub fn trivial(v: impl Into<VertexId>) -> Self {
        Path::Trivial(v.into())
    }

    /// Wrap an edge sequence. The sequence must be nonempty; composability
    /// is checked by [`Path::validate`].
    pub fn from_edges(edges: Vec<EdgeId>) -> Self {
        assert!(!edges.is_empty(), "edge sequence must be nonempty");
        Path::Edges(edges)
    }

    pub fn single(e: impl Into<EdgeId>) -> Self {
        Path::Edges(vec![e.into()])
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, Path::Trivial(_))
    }

    /// Number of edges; zero for a trivial path.
    pub fn len(&self) -> usize {
        match self {
            Path::Trivial(_) => 0,
            Path::Edges(es) => es.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edge_ids(&self) -> &[EdgeId] {
        match self {
            Path::Trivial(_) => &[],
            Path::Edges(es) => es,
        }
    }

    /// Check membership of every edge and composability of consecutive
    /// edges.
    pub fn validate(&self, q: &Quiver) -> Result<(), QuiverError> {
        match self {
            Path::Trivial(v) => q.check_vertex(v),
            Path::Edges(es) => {
                for w in es.windows(2) {
                    let (a, b) = (q.edge(&w[0])?, q.edge(&w[1])?);
                    if a.dst != b.src {
                        return Err(QuiverError::NotComposable {
                            position: es.iter().position(|e| *e == w[1]).unwrap_or(0),
                            range: a.dst.clone(),
                            source: b.src.clone(),
                        });
                    }
                }
                q.edge(es.last().unwrap()).map(|_| ())
            }
        }
    }

    pub fn source(&self, q: &Quiver) -> Result<VertexId, QuiverError> {
        match self {
            Path::Trivial(v) => q.check_vertex(v).map(|_| v.clone()),
            Path::Edges(es) => Ok(q.edge(&es[0])?.src.clone()),
        }
    }

    pub fn range(&self, q: &Quiver) -> Result<VertexId, QuiverError> {
        match self {
            Path::Trivial(v) => q.check_vertex(v).map(|_| v.clone()),
            Path::Edges(es) => Ok(q.edge(es.last().unwrap())?.dst.clone()),
        }
    }

    /// The vertex set of the path: `{s(e_1), r(e_1), ..., r(e_n)}`, or the
    /// singleton for a trivial path.
    pub fn vertex_set(&self, q: &Quiver) -> Result<BTreeSet<VertexId>, QuiverError> {
        match self {
            Path::Trivial(v) => {
                q.check_vertex(v)?;
                Ok(BTreeSet::from([v.clone()]))
            }
            Path::Edges(es) => {
                let mut set = BTreeSet::new();
                set.insert(q.edge(&es[0])?.src.clone());
                for e in es {
                    set.insert(q.edge(e)?.dst.clone());
                }
                Ok(set)
            }
        }
    }

    /// Interior range vertices `r(e_1), ..., r(e_{n-1})`.
    pub fn interior_ranges(&self, q: &Quiver) -> Result<Vec<VertexId>, QuiverError> {
        match self {
            Path::Trivial(_) => Ok(Vec::new()),
            Path::Edges(es) => es[..es.len() - 1]
                .iter()
                .map(|e| q.edge(e).map(|e| e.dst.clone()))
                .collect(),
        }
    }

    /// Concatenation `self . other`, requiring `r(self) = s(other)`.
    pub fn concat(&self, other: &Path, q: &Quiver) -> Result<Path, QuiverError> {
        let r = self.range(q)?;
        let s = other.source(q)?;
        if r != s {
            return Err(QuiverError::NotComposable {
                position: self.len(),
                range: r,
                source: s,
            });
        }
        Ok(match (self, other) {
            (Path::Trivial(_), p) | (p, Path::Trivial(_)) => p.clone(),
            (Path::Edges(a), Path::Edges(b)) => {
                Path::Edges(a.iter().chain(b.iter()).cloned().collect())
            }
        })
    }

    /// If `self` is a prefix of `whole`, return the remaining suffix (which
    /// is trivial at `r(self)` when the two paths are equal). Trivial paths
    /// are prefixes of every path starting at their vertex.
    pub fn strip_prefix(&self, whole: &Path, q: &Quiver) -> Result<Option<Path>, QuiverError> {
        match (self, whole) {
            (Path::Trivial(v), w) => Ok((w.source(q)? == *v).then(|| w.clone())),
            (Path::Edges(_), Path::Trivial(_)) => Ok(None),
            (Path::Edges(a), Path::Edges(b)) => {
                if b.len() < a.len() || &b[..a.len()] != a.as_slice() {
                    return Ok(None);
                }
                if b.len() == a.len() {
                    Ok(Some(Path::Trivial(self.range(q)?)))
                } else {
                    Ok(Some(Path::Edges(b[a.len()..].to_vec())))
                }
            }
        }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Path::Trivial(v) => write!(f, "{v}"),
            Path::Edges(es) => {
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
        }
    }
}

/// JSON form: a trivial path is `{"vertex": "v"}`, a nontrivial path is the
/// array of its edge ids.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PathRepr {
    Edges(Vec<EdgeId>),
    Vertex { vertex: VertexId },
}

impl Serialize for Path {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Path::Trivial(v) => PathRepr::Vertex { vertex: v.clone() },
            Path::Edges(es) => PathRepr::Edges(es.clone()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Path {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match PathRepr::deserialize(deserializer)? {
            PathRepr::Vertex { vertex } => Ok(Path::Trivial(vertex)),
            PathRepr::Edges(es) if es.is_empty() => {
                Err(D::Error::custom("path edge list must be nonempty"))
            }
            PathRepr::Edges(es) => Ok(Path::Edges(es)),
        }
    }
}
