use super::MoveError;
use crate::quiver::{Edge, EdgeId, Quiver, VertexId};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// A partition of edge fibers: for each vertex with a nonempty fiber
/// (`r^{-1}(v)` for in-splits, `s^{-1}(v)` for out-splits), an ordered list
/// of disjoint nonempty blocks covering the fiber. The block count is
/// `m(v)`; vertices with empty fibers are omitted (`m(v) = 0`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<VertexId, Vec<BTreeSet<EdgeId>>>")]
#[serde(into = "BTreeMap<VertexId, Vec<BTreeSet<EdgeId>>>")]
pub struct Partition {
    groups: BTreeMap<VertexId, Vec<BTreeSet<EdgeId>>>,
}

impl Partition {
    pub fn new(groups: BTreeMap<VertexId, Vec<BTreeSet<EdgeId>>>) -> Result<Self, MoveError> {
        let mut seen = BTreeSet::new();
        for (v, blocks) in &groups {
            if blocks.is_empty() {
                return Err(MoveError::InvalidPartition(format!(
                    "vertex `{v}` has no blocks; omit it instead"
                )));
            }
            for block in blocks {
                if block.is_empty() {
                    return Err(MoveError::InvalidPartition(format!(
                        "vertex `{v}` has an empty block"
                    )));
                }
                for e in block {
                    if !seen.insert(e.clone()) {
                        return Err(MoveError::InvalidPartition(format!(
                            "edge `{e}` appears in more than one block"
                        )));
                    }
                }
            }
        }
        Ok(Partition { groups })
    }

    /// One block per nonempty range fiber.
    pub fn trivial_in(q: &Quiver) -> Partition {
        let groups = q
            .vertices()
            .iter()
            .filter(|v| q.in_degree(v) > 0)
            .map(|v| {
                (
                    v.clone(),
                    vec![q.in_edges(v).map(|e| e.id.clone()).collect()],
                )
            })
            .collect();
        Partition { groups }
    }

    /// One block per nonempty source fiber.
    pub fn trivial_out(q: &Quiver) -> Partition {
        let groups = q
            .vertices()
            .iter()
            .filter(|v| q.out_degree(v) > 0)
            .map(|v| {
                (
                    v.clone(),
                    vec![q.out_edges(v).map(|e| e.id.clone()).collect()],
                )
            })
            .collect();
        Partition { groups }
    }

    pub fn groups(&self) -> &BTreeMap<VertexId, Vec<BTreeSet<EdgeId>>> {
        &self.groups
    }

    /// `m(v)`: number of blocks at `v` (0 when omitted).
    pub fn block_count(&self, v: &VertexId) -> usize {
        self.groups.get(v).map_or(0, Vec::len)
    }

    /// 1-based index of the block containing `e` at vertex `v`.
    pub fn block_index(&self, v: &VertexId, e: &EdgeId) -> Option<usize> {
        self.groups
            .get(v)?
            .iter()
            .position(|block| block.contains(e))
            .map(|i| i + 1)
    }

    /// All edges mentioned by the partition.
    pub fn edges(&self) -> impl Iterator<Item = &EdgeId> {
        self.groups.values().flatten().flatten()
    }

    fn validate(
        &self,
        q: &Quiver,
        fiber: impl Fn(&VertexId) -> BTreeSet<EdgeId>,
        direction: &str,
    ) -> Result<(), MoveError> {
        for v in q.vertices() {
            let fiber = fiber(v);
            let blocks = self.groups.get(v);
            match (fiber.is_empty(), blocks) {
                (true, None) => {}
                (true, Some(_)) => {
                    return Err(MoveError::InvalidPartition(format!(
                        "vertex `{v}` has an empty {direction} fiber but carries blocks"
                    )));
                }
                (false, None) => {
                    return Err(MoveError::InvalidPartition(format!(
                        "vertex `{v}` has a nonempty {direction} fiber but no blocks"
                    )));
                }
                (false, Some(blocks)) => {
                    let union: BTreeSet<EdgeId> = blocks.iter().flatten().cloned().collect();
                    if union != fiber {
                        return Err(MoveError::InvalidPartition(format!(
                            "blocks at `{v}` do not cover its {direction} fiber exactly"
                        )));
                    }
                    let total: usize = blocks.iter().map(BTreeSet::len).sum();
                    if total != fiber.len() {
                        return Err(MoveError::InvalidPartition(format!(
                            "blocks at `{v}` overlap"
                        )));
                    }
                }
            }
        }
        for v in self.groups.keys() {
            q.check_vertex(v)?;
        }
        Ok(())
    }

    /// Check this partitions the range fibers of `q`.
    pub fn validate_in(&self, q: &Quiver) -> Result<(), MoveError> {
        self.validate(q, |v| q.in_edges(v).map(|e| e.id.clone()).collect(), "range")
    }

    /// Check this partitions the source fibers of `q`.
    pub fn validate_out(&self, q: &Quiver) -> Result<(), MoveError> {
        self.validate(
            q,
            |v| q.out_edges(v).map(|e| e.id.clone()).collect(),
            "source",
        )
    }
}

impl TryFrom<BTreeMap<VertexId, Vec<BTreeSet<EdgeId>>>> for Partition {
    type Error = String;
    fn try_from(groups: BTreeMap<VertexId, Vec<BTreeSet<EdgeId>>>) -> Result<Self, Self::Error> {
        Partition::new(groups).map_err(|e| e.to_string())
    }
}

impl From<Partition> for BTreeMap<VertexId, Vec<BTreeSet<EdgeId>>> {
    fn from(p: Partition) -> Self {
        p.groups
    }
}

/// In-split of `q` along a partition of its range fibers. Vertex `v` with
/// `m(v) >= 1` becomes copies `v_1 ... v_{m(v)}`; sources stay unindexed. An
/// edge `e` becomes copies `e_j` (one per block at its source, or a single
/// unindexed copy when the source is unindexed), landing on the copy of its
/// range indexed by the block containing `e`.
pub fn in_split(q: &Quiver, partition: &Partition) -> Result<Quiver, MoveError> {
    partition.validate_in(q)?;
    let mut vertices = Vec::new();
    for v in q.vertices() {
        match partition.block_count(v) {
            0 => vertices.push(v.clone()),
            m => {
                for i in 1..=m {
                    vertices.push(format!("{v}_{i}").into());
                }
            }
        }
    }
    let mut edges = Vec::new();
    for e in q.edges() {
        let i = partition
            .block_index(&e.dst, &e.id)
            .expect("validated partition covers every edge");
        let dst: VertexId = format!("{}_{i}", e.dst).into();
        match partition.block_count(&e.src) {
            0 => edges.push(Edge {
                id: e.id.clone(),
                src: e.src.clone(),
                dst,
            }),
            m => {
                for j in 1..=m {
                    edges.push(Edge {
                        id: format!("{}_{j}", e.id).into(),
                        src: format!("{}_{j}", e.src).into(),
                        dst: dst.clone(),
                    });
                }
            }
        }
    }
    Ok(Quiver::from_parts(vertices, edges)?)
}

/// Out-split of `q` along a partition of its source fibers; the exact dual
/// of [`in_split`], with superscript-style ids `v^i`, `e^j`.
pub fn out_split(q: &Quiver, partition: &Partition) -> Result<Quiver, MoveError> {
    partition.validate_out(q)?;
    let mut vertices = Vec::new();
    for v in q.vertices() {
        match partition.block_count(v) {
            0 => vertices.push(v.clone()),
            m => {
                for i in 1..=m {
                    vertices.push(format!("{v}^{i}").into());
                }
            }
        }
    }
    let mut edges = Vec::new();
    for e in q.edges() {
        let i = partition
            .block_index(&e.src, &e.id)
            .expect("validated partition covers every edge");
        let src: VertexId = format!("{}^{i}", e.src).into();
        match partition.block_count(&e.dst) {
            0 => edges.push(Edge {
                id: e.id.clone(),
                src,
                dst: e.dst.clone(),
            }),
            m => {
                for j in 1..=m {
                    edges.push(Edge {
                        id: format!("{}^{j}", e.id).into(),
                        src: src.clone(),
                        dst: format!("{}^{j}", e.dst).into(),
                    });
                }
            }
        }
    }
    Ok(Quiver::from_parts(vertices, edges)?)
}

/// Inverse of [`in_split`]: reconstruct the quiver whose in-split along
/// `partition` is exactly `q`, or report that no such quiver exists. The
/// check is structural: the candidate is rebuilt and re-split, and the
/// result must equal `q` id-for-id.
pub fn in_amalgamate(q: &Quiver, partition: &Partition) -> Result<Quiver, MoveError> {
    amalgamate(q, partition, SplitKind::In)
}

/// Inverse of [`out_split`]; see [`in_amalgamate`].
pub fn out_amalgamate(q: &Quiver, partition: &Partition) -> Result<Quiver, MoveError> {
    amalgamate(q, partition, SplitKind::Out)
}

#[derive(Clone, Copy)]
enum SplitKind {
    In,
    Out,
}

impl SplitKind {
    fn sep(self) -> char {
        match self {
            SplitKind::In => '_',
            SplitKind::Out => '^',
        }
    }
}

fn amalgamate(q: &Quiver, partition: &Partition, kind: SplitKind) -> Result<Quiver, MoveError> {
    let sep = kind.sep();
    // Names the split would generate for vertex copies.
    let copy_names: BTreeSet<VertexId> = partition
        .groups()
        .iter()
        .flat_map(|(v, blocks)| {
            (1..=blocks.len()).map(move |i| VertexId::new(format!("{v}{sep}{i}")))
        })
        .collect();
    let carried: Vec<VertexId> = q
        .vertices()
        .iter()
        .filter(|v| !copy_names.contains(*v))
        .cloned()
        .collect();
    let mut vertices: Vec<VertexId> = partition.groups().keys().cloned().collect();
    vertices.extend(carried.iter().cloned());

    // Recover each original edge's free endpoint from its first copy.
    let mut edges = Vec::new();
    for (v, blocks) in partition.groups() {
        for block in blocks {
            for e in block {
                let free = find_free_endpoint(q, e, sep)?;
                let (src, dst) = match kind {
                    SplitKind::In => (free, v.clone()),
                    SplitKind::Out => (v.clone(), free),
                };
                edges.push(Edge {
                    id: e.clone(),
                    src,
                    dst,
                });
            }
        }
    }
    let candidate = Quiver::from_parts(vertices, edges)
        .map_err(|e| MoveError::NotSplitShape(e.to_string()))?;
    let resplit = match kind {
        SplitKind::In => in_split(&candidate, partition)?,
        SplitKind::Out => out_split(&candidate, partition)?,
    };
    if resplit == *q {
        Ok(candidate)
    } else {
        Err(MoveError::NotSplitShape(
            "re-splitting the reconstructed quiver does not reproduce the input".into(),
        ))
    }
}

/// For an original edge `e`, locate one of its copies in the split quiver
/// and strip the copy index off the endpoint that the split indexed by the
/// source (in) or range (out) block count.
fn find_free_endpoint(q: &Quiver, e: &EdgeId, sep: char) -> Result<VertexId, MoveError> {
    let missing = || MoveError::NotSplitShape(format!("no copy of edge `{e}` present"));
    if let Ok(edge) = q.edge(e) {
        // Unindexed copy: its free endpoint is carried over unchanged.
        let v = match sep {
            '_' => &edge.src,
            _ => &edge.dst,
        };
        return Ok(v.clone());
    }
    let first_copy = EdgeId::new(format!("{e}{sep}1"));
    let edge = q.edge(&first_copy).map_err(|_| missing())?;
    let endpoint = match sep {
        '_' => &edge.src,
        _ => &edge.dst,
    };
    let suffix = format!("{sep}1");
    endpoint
        .as_str()
        .strip_suffix(&suffix)
        .map(VertexId::from)
        .ok_or_else(|| {
            MoveError::NotSplitShape(format!(
                "endpoint `{endpoint}` of copy `{first_copy}` lacks the copy index"
            ))
        })
}
