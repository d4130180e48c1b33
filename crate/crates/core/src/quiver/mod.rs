//! Finite quiver model: named vertices and edges with source/range maps,
//! path machinery, hereditary saturated closures, incidence matrices and
//! isomorphism testing.
//!
//! All values are immutable after construction and every operation is a pure
//! function of its inputs. Vertices and edges are ordered lexicographically
//! by id, which makes serialisation, DOT export and all derived structures
//! byte-deterministic.

mod iso;
mod matrix;
mod path;

pub use iso::{is_isomorphic, IsoOutcome, IsoWitness, ISO_VERTEX_BOUND};
pub use matrix::{IntMatrix, MatrixError};
pub use path::Path;

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use thiserror::Error;

/// Vertex name. Arbitrary UTF-8; ordering is lexicographic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(String);

/// Edge name. Arbitrary UTF-8; ordering is lexicographic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(String);

macro_rules! id_impls {
    ($t:ty) => {
        impl $t {
            pub fn new(s: impl Into<String>) -> Self {
                Self(s.into())
            }
            pub fn as_str(&self) -> &str {
                &self.0
            }
        }
        impl From<&str> for $t {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }
        impl From<String> for $t {
            fn from(s: String) -> Self {
                Self(s)
            }
        }
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}
id_impls!(VertexId);
id_impls!(EdgeId);

/// A directed edge `src -> dst`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub src: VertexId,
    pub dst: VertexId,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuiverError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(EdgeId),
    #[error("edge `{edge}` references unknown vertex `{vertex}`")]
    DanglingEdge { edge: EdgeId, vertex: VertexId },
    #[error("unknown vertex id `{0}`")]
    UnknownVertex(VertexId),
    #[error("unknown edge id `{0}`")]
    UnknownEdge(EdgeId),
    #[error("path is not composable at position {position}: range `{range}` != source `{source}`")]
    NotComposable {
        position: usize,
        range: VertexId,
        source: VertexId,
    },
    #[error("empty edge sequence does not define a path")]
    EmptyPath,
    #[error("a cycle avoids the kept vertex set: {}", format_cycle(.0))]
    CycleAvoidsKeep(Vec<VertexId>),
    #[error("incidence matrix must be square, got {rows}x{cols}")]
    NonSquareMatrix { rows: usize, cols: usize },
}

fn format_cycle(vs: &[VertexId]) -> String {
    vs.iter()
        .map(VertexId::as_str)
        .collect::<Vec<_>>()
        .join(" -> ")
}

/// Four-way classification of a vertex by whether it emits or receives edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VertexClass {
    /// Emits none, receives some.
    Sink,
    /// Receives none, emits some.
    Source,
    /// Emits and receives.
    Regular,
    /// Emits none and receives none.
    BothSourceAndSink,
}

impl fmt::Display for VertexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            VertexClass::Sink => "sink",
            VertexClass::Source => "source",
            VertexClass::Regular => "regular",
            VertexClass::BothSourceAndSink => "both-source-and-sink",
        };
        f.write_str(s)
    }
}

/// Levels of the closure iteration together with its fixpoint.
///
/// `levels[0]` is the forward-reachable set of the seed; each later level
/// adds the emitting vertices all of whose out-neighbours already lie in the
/// previous level. The iteration stabilises after at most `|Q^0|` rounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureTrace {
    pub levels: Vec<BTreeSet<VertexId>>,
    pub closure: BTreeSet<VertexId>,
}

/// A finite directed multigraph with named vertices and edges.
///
/// Invariants enforced at construction: vertex and edge ids are unique, and
/// every edge endpoint is a declared vertex. Vertices are stored sorted and
/// edges are stored sorted by id.
#[derive(Debug, Clone)]
pub struct Quiver {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    out: BTreeMap<VertexId, Vec<usize>>,
    inc: BTreeMap<VertexId, Vec<usize>>,
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}
impl Eq for Quiver {}

impl Quiver {
    pub fn new<V, E, S1, S2, S3>(vertices: V, edges: E) -> Result<Self, QuiverError>
    where
        V: IntoIterator<Item = S1>,
        E: IntoIterator<Item = (S2, S3, S3)>,
        S1: Into<String>,
        S2: Into<String>,
        S3: Into<String>,
    {
        let vertices: Vec<VertexId> = vertices.into_iter().map(|v| VertexId::new(v)).collect();
        let edges: Vec<Edge> = edges
            .into_iter()
            .map(|(id, src, dst)| Edge {
                id: EdgeId::new(id),
                src: VertexId::new(src.into()),
                dst: VertexId::new(dst.into()),
            })
            .collect();
        Self::from_parts(vertices, edges)
    }

    pub fn from_parts(
        mut vertices: Vec<VertexId>,
        mut edges: Vec<Edge>,
    ) -> Result<Self, QuiverError> {
        vertices.sort();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(QuiverError::DuplicateVertex(w[0].clone()));
        }
        edges.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = edges.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(QuiverError::DuplicateEdge(w[0].id.clone()));
        }
        let vset: BTreeSet<&VertexId> = vertices.iter().collect();
        for e in &edges {
            for v in [&e.src, &e.dst] {
                if !vset.contains(v) {
                    return Err(QuiverError::DanglingEdge {
                        edge: e.id.clone(),
                        vertex: v.clone(),
                    });
                }
            }
        }
        let mut out: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
        let mut inc: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
        for v in &vertices {
            out.insert(v.clone(), Vec::new());
            inc.insert(v.clone(), Vec::new());
        }
        for (i, e) in edges.iter().enumerate() {
            out.get_mut(&e.src).unwrap().push(i);
            inc.get_mut(&e.dst).unwrap().push(i);
        }
        Ok(Quiver {
            vertices,
            edges,
            out,
            inc,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sorted vertex ids.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Edges sorted by id.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_vertex(&self, v: &VertexId) -> bool {
        self.out.contains_key(v)
    }

    pub fn edge(&self, id: &EdgeId) -> Result<&Edge, QuiverError> {
        self.edges
            .binary_search_by(|e| e.id.cmp(id))
            .map(|i| &self.edges[i])
            .map_err(|_| QuiverError::UnknownEdge(id.clone()))
    }

    pub fn check_vertex(&self, v: &VertexId) -> Result<(), QuiverError> {
        if self.has_vertex(v) {
            Ok(())
        } else {
            Err(QuiverError::UnknownVertex(v.clone()))
        }
    }

    pub fn check_vertices<'a>(
        &self,
        vs: impl IntoIterator<Item = &'a VertexId>,
    ) -> Result<(), QuiverError> {
        vs.into_iter().try_for_each(|v| self.check_vertex(v))
    }

    /// Edges emitted by `v` (the fiber `s^{-1}(v)`), in id order.
    pub fn out_edges(&self, v: &VertexId) -> impl Iterator<Item = &Edge> {
        self.out
            .get(v)
            .into_iter()
            .flatten()
            .map(move |&i| &self.edges[i])
    }

    /// Edges received by `v` (the fiber `r^{-1}(v)`), in id order.
    pub fn in_edges(&self, v: &VertexId) -> impl Iterator<Item = &Edge> {
        self.inc
            .get(v)
            .into_iter()
            .flatten()
            .map(move |&i| &self.edges[i])
    }

    pub fn out_degree(&self, v: &VertexId) -> usize {
        self.out.get(v).map_or(0, Vec::len)
    }

    pub fn in_degree(&self, v: &VertexId) -> usize {
        self.inc.get(v).map_or(0, Vec::len)
    }

    pub fn is_sink(&self, v: &VertexId) -> bool {
        self.out_degree(v) == 0
    }

    pub fn is_source(&self, v: &VertexId) -> bool {
        self.in_degree(v) == 0
    }

    /// Emits at least one edge. In a finite quiver this is exactly the
    /// regularity condition `0 < |s^{-1}(v)| < oo`; there are no infinite
    /// emitters, so the singular vertices are precisely the sinks.
    pub fn is_regular(&self, v: &VertexId) -> bool {
        self.out_degree(v) > 0
    }

    pub fn sinks(&self) -> impl Iterator<Item = &VertexId> {
        self.vertices.iter().filter(|v| self.is_sink(v))
    }

    /// Classify every vertex by its emit/receive pattern.
    pub fn classify_vertices(&self) -> BTreeMap<VertexId, VertexClass> {
        self.vertices
            .iter()
            .map(|v| {
                let class = match (self.out_degree(v) > 0, self.in_degree(v) > 0) {
                    (false, true) => VertexClass::Sink,
                    (true, false) => VertexClass::Source,
                    (true, true) => VertexClass::Regular,
                    (false, false) => VertexClass::BothSourceAndSink,
                };
                (v.clone(), class)
            })
            .collect()
    }

    /// True iff a (possibly trivial) path leads from `v` into `targets`.
    pub fn reaches_set(
        &self,
        v: &VertexId,
        targets: &BTreeSet<VertexId>,
    ) -> Result<bool, QuiverError> {
        self.check_vertex(v)?;
        self.check_vertices(targets)?;
        if targets.contains(v) {
            return Ok(true);
        }
        let mut seen = BTreeSet::new();
        seen.insert(v.clone());
        let mut queue = VecDeque::from([v.clone()]);
        while let Some(u) = queue.pop_front() {
            for e in self.out_edges(&u) {
                if targets.contains(&e.dst) {
                    return Ok(true);
                }
                if seen.insert(e.dst.clone()) {
                    queue.push_back(e.dst.clone());
                }
            }
        }
        Ok(false)
    }

    /// The tree of `v`: every vertex reachable from `v`, including `v`.
    /// This is the smallest hereditary set containing `v`.
    pub fn tree(&self, v: &VertexId) -> Result<BTreeSet<VertexId>, QuiverError> {
        self.check_vertex(v)?;
        Ok(self.forward_closure(std::iter::once(v)))
    }

    fn forward_closure<'a>(&self, seed: impl IntoIterator<Item = &'a VertexId>) -> BTreeSet<VertexId> {
        let mut seen: BTreeSet<VertexId> = seed.into_iter().cloned().collect();
        let mut queue: VecDeque<VertexId> = seen.iter().cloned().collect();
        while let Some(u) = queue.pop_front() {
            for e in self.out_edges(&u) {
                if seen.insert(e.dst.clone()) {
                    queue.push_back(e.dst.clone());
                }
            }
        }
        seen
    }

    /// Smallest hereditary and saturated vertex set containing `x`.
    pub fn hereditary_saturated_closure(
        &self,
        x: &BTreeSet<VertexId>,
    ) -> Result<BTreeSet<VertexId>, QuiverError> {
        Ok(self.closure_trace(x)?.closure)
    }

    /// Closure computed level by level. Level 0 is the hereditary closure
    /// (union of trees); each later level saturates once, adding the
    /// emitting vertices whose whole out-neighbourhood is already present.
    pub fn closure_trace(&self, x: &BTreeSet<VertexId>) -> Result<ClosureTrace, QuiverError> {
        self.check_vertices(x)?;
        let mut levels = vec![self.forward_closure(x)];
        loop {
            let prev = levels.last().unwrap();
            let mut next = prev.clone();
            for v in &self.vertices {
                if next.contains(v) || !self.is_regular(v) {
                    continue;
                }
                if self.out_edges(v).all(|e| prev.contains(&e.dst)) {
                    next.insert(v.clone());
                }
            }
            if next == *levels.last().unwrap() {
                break;
            }
            levels.push(next);
        }
        let closure = levels.last().unwrap().clone();
        Ok(ClosureTrace { levels, closure })
    }

    /// True iff the set is closed under moving forward along edges.
    pub fn is_hereditary(&self, h: &BTreeSet<VertexId>) -> bool {
        h.iter()
            .flat_map(|v| self.out_edges(v))
            .all(|e| h.contains(&e.dst))
    }

    /// True iff every emitting vertex whose out-neighbours all lie in the
    /// set belongs to the set.
    pub fn is_saturated(&self, h: &BTreeSet<VertexId>) -> bool {
        self.vertices.iter().all(|v| {
            !self.is_regular(v)
                || h.contains(v)
                || self.out_edges(v).any(|e| !h.contains(&e.dst))
        })
    }

    /// A cycle whose vertices all avoid `keep`, if one exists. The returned
    /// vertex list is the cycle in traversal order.
    pub fn find_cycle_avoiding(
        &self,
        keep: &BTreeSet<VertexId>,
    ) -> Result<Option<Vec<VertexId>>, QuiverError> {
        self.check_vertices(keep)?;
        #[derive(Clone, Copy, PartialEq)]
        enum Color {
            White,
            Gray,
            Black,
        }
        let mut color: BTreeMap<&VertexId, Color> = self
            .vertices
            .iter()
            .filter(|v| !keep.contains(*v))
            .map(|v| (v, Color::White))
            .collect();
        let outside: Vec<&VertexId> = color.keys().cloned().collect();
        let mut stack: Vec<VertexId> = Vec::new();

        fn dfs(
            q: &Quiver,
            v: &VertexId,
            color: &mut BTreeMap<&VertexId, Color>,
            stack: &mut Vec<VertexId>,
        ) -> Option<Vec<VertexId>> {
            *color.get_mut(v).unwrap() = Color::Gray;
            stack.push(v.clone());
            for e in q.out_edges(v) {
                match color.get(&e.dst) {
                    None => continue, // lands in keep
                    Some(Color::Gray) => {
                        let start = stack.iter().position(|u| *u == e.dst).unwrap();
                        return Some(stack[start..].to_vec());
                    }
                    Some(Color::Black) => continue,
                    Some(Color::White) => {
                        if let Some(c) = dfs(q, &e.dst, color, stack) {
                            return Some(c);
                        }
                    }
                }
            }
            stack.pop();
            *color.get_mut(v).unwrap() = Color::Black;
            None
        }

        for v in outside {
            if color[&v] == Color::White {
                if let Some(c) = dfs(self, v, &mut color, &mut stack) {
                    return Ok(Some(c));
                }
            }
        }
        Ok(None)
    }

    /// True iff every cycle of the quiver meets `keep`, i.e. the subquiver
    /// induced on the complement of `keep` is acyclic.
    pub fn cycles_meet(&self, keep: &BTreeSet<VertexId>) -> Result<bool, QuiverError> {
        Ok(self.find_cycle_avoiding(keep)?.is_none())
    }

    /// For every vertex `v`, the set `B_v` of nontrivial paths that start at
    /// `v`, end in `keep`, and whose interior ranges all avoid `keep`.
    ///
    /// Finiteness requires every cycle to meet `keep`; otherwise the
    /// enumeration would not terminate and the precondition violation is
    /// reported with a witness cycle.
    pub fn bridge_paths(
        &self,
        keep: &BTreeSet<VertexId>,
    ) -> Result<BTreeMap<VertexId, Vec<Path>>, QuiverError> {
        self.check_vertices(keep)?;
        if let Some(cycle) = self.find_cycle_avoiding(keep)? {
            return Err(QuiverError::CycleAvoidsKeep(cycle));
        }
        let mut result = BTreeMap::new();
        for v in &self.vertices {
            let mut found = Vec::new();
            let mut stack: Vec<Vec<usize>> = (0..self.edges.len())
                .filter(|&i| self.edges[i].src == *v)
                .map(|i| vec![i])
                .collect();
            while let Some(path) = stack.pop() {
                let last = &self.edges[*path.last().unwrap()];
                if keep.contains(&last.dst) {
                    found.push(Path::from_edges(
                        path.iter().map(|&i| self.edges[i].id.clone()).collect(),
                    ));
                    continue;
                }
                // Interior vertices avoid keep and never repeat
                // (acyclicity), so depth stays below the vertex count.
                debug_assert!(path.len() <= self.vertices.len() + 1);
                for (i, e) in self.edges.iter().enumerate() {
                    if e.src == last.dst {
                        let mut ext = path.clone();
                        ext.push(i);
                        stack.push(ext);
                    }
                }
            }
            found.sort_by(|a, b| (a.len(), a.edge_ids()).cmp(&(b.len(), b.edge_ids())));
            result.insert(v.clone(), found);
        }
        Ok(result)
    }

    /// Square matrix whose `(i, j)` entry counts the edges from the `i`-th
    /// to the `j`-th vertex, in the sorted vertex order.
    pub fn incidence(&self) -> IntMatrix {
        let n = self.vertices.len();
        let index: BTreeMap<&VertexId, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v, i))
            .collect();
        let mut m = IntMatrix::zero(n, n);
        for e in &self.edges {
            let (i, j) = (index[&e.src], index[&e.dst]);
            m.set(i, j, m.get(i, j) + 1);
        }
        m
    }

    /// Quiver with the given incidence matrix, using canonical vertex names
    /// `v0, v1, ...` (zero padded so lexicographic order matches row order)
    /// and edge names `e{i}_{j}_{k}`.
    pub fn from_incidence(m: &IntMatrix) -> Result<Quiver, QuiverError> {
        if m.rows() != m.cols() {
            return Err(QuiverError::NonSquareMatrix {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let n = m.rows();
        let width = if n <= 1 { 1 } else { (n - 1).to_string().len() };
        let name = |i: usize| format!("v{:0width$}", i, width = width);
        let vertices: Vec<String> = (0..n).map(name).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..m.get(i, j) {
                    edges.push((format!("e{i}_{j}_{k}"), name(i), name(j)));
                }
            }
        }
        Quiver::new(vertices, edges)
    }

    /// All paths of exactly `len` edges, in lexicographic edge-sequence
    /// order. `len = 0` yields the trivial paths (one per vertex).
    pub fn paths_of_length(&self, len: usize) -> Vec<Path> {
        if len == 0 {
            return self.vertices.iter().cloned().map(Path::trivial).collect();
        }
        let mut acc: Vec<Vec<usize>> = (0..self.edges.len()).map(|i| vec![i]).collect();
        for _ in 1..len {
            let mut next = Vec::new();
            for p in &acc {
                let last = &self.edges[*p.last().unwrap()];
                for (i, e) in self.edges.iter().enumerate() {
                    if e.src == last.dst {
                        let mut ext = p.clone();
                        ext.push(i);
                        next.push(ext);
                    }
                }
            }
            acc = next;
        }
        acc.sort();
        acc.into_iter()
            .map(|p| Path::from_edges(p.into_iter().map(|i| self.edges[i].id.clone()).collect()))
            .collect()
    }

    /// Canonical JSON rendering: `{"vertices": [...], "edges": [...]}` with
    /// ids in sorted order. Byte-deterministic.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("quiver serialisation cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Quiver, String> {
        serde_json::from_str(s).map_err(|e| e.to_string())
    }

    /// Hex SHA-256 of the canonical JSON rendering. Used by certificates to
    /// pin intermediate quivers across machines.
    pub fn content_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    /// GraphViz DOT rendering: one node per vertex, one labelled arrow per
    /// edge, all in id order.
    pub fn to_dot(&self) -> String {
        fn esc(s: &str) -> String {
            s.replace('\\', "\\\\").replace('"', "\\\"")
        }
        let mut out = String::from("digraph quiver {\n");
        for v in &self.vertices {
            out.push_str(&format!("    \"{}\";\n", esc(v.as_str())));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "    \"{}\" -> \"{}\" [label=\"{}\"];\n",
                esc(e.src.as_str()),
                esc(e.dst.as_str()),
                esc(e.id.as_str())
            ));
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Serialize, Deserialize)]
struct QuiverFile {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
}

impl Serialize for Quiver {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        QuiverFile {
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Quiver {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = QuiverFile::deserialize(deserializer)?;
        Quiver::from_parts(raw.vertices, raw.edges).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests;
