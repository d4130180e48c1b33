//! Quiver transformations: the collapse move, the six standard flow moves
//! (in/out splitting and amalgamation, expansion, contraction), source
//! elimination, Drinen delays, heads, higher edge quivers, and elementary
//! strong shift equivalence with its matrix-level counterpart.
//!
//! Every transformation is a pure function returning a new quiver (plus the
//! bookkeeping a certificate needs). Generated ids are deterministic
//! encodings of their origin, so replaying a move sequence is byte-stable.

mod collapse;
mod delay;
mod esse;
mod split;

pub use collapse::{collapse, origin_edge_id, CollapseResult};
pub use delay::{in_delay, is_strictly_proper, out_delay, DrinenVector, PropernessCheck};
pub use esse::{
    esse_from_factorization, find_esse_factorization, verify_esse, EsseFailure, EsseReport,
    EsseWitness, SeIdentity, SeReport, ShiftEquivalenceWitness,
};
pub use split::{in_amalgamate, in_split, out_amalgamate, out_split, Partition};

use crate::quiver::{
    is_isomorphic, IsoOutcome, IsoWitness, MatrixError, Quiver, QuiverError, VertexId,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MoveError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("kept vertex set must be nonempty")]
    EmptyKeep,
    #[error("sink `{0}` lies outside the kept vertex set")]
    SinkOutsideKeep(VertexId),
    #[error("vertex `{0}` is not a source")]
    NotSource(VertexId),
    #[error("cannot eliminate the only vertex of a quiver")]
    SingletonQuiver,
    #[error("vertex `{vertex}` is not the base of an expansion: {reason}")]
    NotExpansionShape { vertex: VertexId, reason: String },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("quiver is not the split of any quiver under this partition: {0}")]
    NotSplitShape(String),
    #[error("invalid Drinen vector: {0}")]
    InvalidDrinenVector(String),
    #[error("head length must be at least 1")]
    HeadLengthZero,
    #[error("higher edge order must be at least 2, got {0}")]
    HigherEdgeOrder(u32),
    #[error("shift equivalence lag must be at least 1")]
    LagZero,
    #[error("factor search space too large for the budget: about 10^{log10_estimate} candidates")]
    SearchBudgetExceeded { log10_estimate: u32 },
    #[error("move {index} (`{name}`) is not one of the six standard flow moves")]
    NonStandardMove { index: usize, name: &'static str },
    #[error("flow move {index} (`{name}`) failed: {source}")]
    FlowStep {
        index: usize,
        name: &'static str,
        #[source]
        source: Box<MoveError>,
    },
    #[error("elementary strong shift equivalence witness rejected: {0}")]
    EsseRejected(String),
    #[error("isomorphism witness rejected")]
    IsoWitnessRejected,
    #[error("isomorphism test undecided above {bound} vertices")]
    IsomorphismUndecided { bound: usize },
    #[error("quiver does not match the collapse of the claimed source quiver")]
    UncollapseMismatch,
}

/// Remove a source vertex together with the edges it emits.
pub fn source_eliminate(q: &Quiver, v: &VertexId) -> Result<Quiver, MoveError> {
    q.check_vertex(v)?;
    if !q.is_source(v) {
        return Err(MoveError::NotSource(v.clone()));
    }
    if q.vertex_count() < 2 {
        return Err(MoveError::SingletonQuiver);
    }
    let vertices = q.vertices().iter().filter(|u| *u != v).cloned().collect();
    let edges = q
        .edges()
        .iter()
        .filter(|e| e.src != *v)
        .cloned()
        .collect();
    Ok(Quiver::from_parts(vertices, edges)?)
}

/// Expansion at `v`: a fresh vertex `v*` and a fresh edge `f: v -> v*`;
/// every edge formerly emitted by `v` is re-sourced at `v*`.
pub fn expand(q: &Quiver, v: &VertexId) -> Result<Quiver, MoveError> {
    q.check_vertex(v)?;
    let star = VertexId::new(format!("{v}*"));
    let fresh = format!("f({v})");
    let mut vertices: Vec<VertexId> = q.vertices().to_vec();
    vertices.push(star.clone());
    let mut edges: Vec<crate::quiver::Edge> = q
        .edges()
        .iter()
        .map(|e| {
            let mut e = e.clone();
            if e.src == *v {
                e.src = star.clone();
            }
            e
        })
        .collect();
    edges.push(crate::quiver::Edge {
        id: fresh.into(),
        src: v.clone(),
        dst: star,
    });
    Ok(Quiver::from_parts(vertices, edges)?)
}

/// Contraction at `v`: inverse of [`expand`]. Requires the exact image
/// shape: `v` emits a single edge `f`, whose range `v*` differs from `v`
/// and receives only `f`.
pub fn contract(q: &Quiver, v: &VertexId) -> Result<Quiver, MoveError> {
    q.check_vertex(v)?;
    let shape_err = |reason: &str| MoveError::NotExpansionShape {
        vertex: v.clone(),
        reason: reason.to_owned(),
    };
    let mut out = q.out_edges(v);
    let f = out.next().ok_or_else(|| shape_err("emits no edge"))?.clone();
    if out.next().is_some() {
        return Err(shape_err("emits more than one edge"));
    }
    if f.dst == *v {
        return Err(shape_err("its only out-edge is a loop"));
    }
    let star = f.dst.clone();
    if q.in_degree(&star) != 1 {
        return Err(shape_err("the target of its out-edge receives other edges"));
    }
    let vertices = q
        .vertices()
        .iter()
        .filter(|u| **u != star)
        .cloned()
        .collect();
    let edges = q
        .edges()
        .iter()
        .filter(|e| e.id != f.id)
        .map(|e| {
            let mut e = e.clone();
            if e.src == star {
                e.src = v.clone();
            }
            e
        })
        .collect();
    Ok(Quiver::from_parts(vertices, edges)?)
}

/// Attach to every vertex `v` a chain `v_{n-1} -> ... -> v_1 -> v` of
/// length `n - 1`. `n = 1` returns the quiver unchanged.
pub fn attach_heads(q: &Quiver, n: u32) -> Result<Quiver, MoveError> {
    if n == 0 {
        return Err(MoveError::HeadLengthZero);
    }
    let mut vertices: Vec<VertexId> = q.vertices().to_vec();
    let mut edges: Vec<crate::quiver::Edge> = q.edges().to_vec();
    for v in q.vertices() {
        for i in 1..n {
            vertices.push(format!("{v}_{i}").into());
            let dst = if i == 1 {
                v.clone()
            } else {
                format!("{v}_{}", i - 1).into()
            };
            edges.push(crate::quiver::Edge {
                id: format!("h({v})_{i}").into(),
                src: format!("{v}_{i}").into(),
                dst,
            });
        }
    }
    Ok(Quiver::from_parts(vertices, edges)?)
}

/// The n-th higher edge quiver: vertices are the paths of length `n - 1`,
/// with one edge from `e_1...e_{n-1}` to `f_1...f_{n-1}` exactly when the
/// overlap `e_2...e_{n-1} = f_1...f_{n-2}` holds (ranges match for n = 2).
/// Vertex ids join the path's edge ids with `/`.
pub fn higher_edge(q: &Quiver, n: u32) -> Result<Quiver, MoveError> {
    if n < 2 {
        return Err(MoveError::HigherEdgeOrder(n));
    }
    let paths = q.paths_of_length(n as usize - 1);
    let name = |p: &crate::quiver::Path| {
        p.edge_ids()
            .iter()
            .map(|e| e.as_str())
            .collect::<Vec<_>>()
            .join("/")
    };
    let vertices: Vec<String> = paths.iter().map(&name).collect();
    let mut edges = Vec::new();
    for p in &paths {
        for f in &paths {
            let pe = p.edge_ids();
            let fe = f.edge_ids();
            let overlaps = if n == 2 {
                q.edge(&pe[0])?.dst == q.edge(&fe[0])?.src
            } else {
                pe[1..] == fe[..fe.len() - 1]
            };
            if overlaps {
                let id = format!("{}/{}", name(p), fe[fe.len() - 1]);
                edges.push((id, name(p), name(f)));
            }
        }
    }
    Ok(Quiver::new(vertices, edges)?)
}

/// A quiver transformation descriptor, as stored in move sequences and
/// certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Move {
    Collapse {
        keep: BTreeSet<VertexId>,
    },
    /// Inverse direction of [`Move::Collapse`]: asserts that the current
    /// quiver is isomorphic to the collapse of `source` onto `keep`, and
    /// steps to `source`.
    Uncollapse {
        source: Quiver,
        keep: BTreeSet<VertexId>,
    },
    InSplit {
        partition: Partition,
    },
    InAmalgamate {
        partition: Partition,
    },
    OutSplit {
        partition: Partition,
    },
    OutAmalgamate {
        partition: Partition,
    },
    SourceEliminate {
        vertex: VertexId,
    },
    Expand {
        vertex: VertexId,
    },
    Contract {
        vertex: VertexId,
    },
    OutDelay {
        vector: DrinenVector,
    },
    InDelay {
        vector: DrinenVector,
    },
    AttachHeads {
        length: u32,
    },
    HigherEdge {
        order: u32,
    },
    /// Asserts elementary strong shift equivalence of the current quiver and
    /// `target` via the witness, and steps to `target`.
    Esse {
        target: Quiver,
        witness: EsseWitness,
    },
    /// Relabelling step: the current quiver is isomorphic to `target` via
    /// the embedded witness.
    Isomorphism {
        target: Quiver,
        witness: IsoWitness,
    },
}

impl Move {
    pub fn name(&self) -> &'static str {
        match self {
            Move::Collapse { .. } => "collapse",
            Move::Uncollapse { .. } => "uncollapse",
            Move::InSplit { .. } => "in_split",
            Move::InAmalgamate { .. } => "in_amalgamate",
            Move::OutSplit { .. } => "out_split",
            Move::OutAmalgamate { .. } => "out_amalgamate",
            Move::SourceEliminate { .. } => "source_eliminate",
            Move::Expand { .. } => "expand",
            Move::Contract { .. } => "contract",
            Move::OutDelay { .. } => "out_delay",
            Move::InDelay { .. } => "in_delay",
            Move::AttachHeads { .. } => "attach_heads",
            Move::HigherEdge { .. } => "higher_edge",
            Move::Esse { .. } => "esse",
            Move::Isomorphism { .. } => "isomorphism",
        }
    }

    /// One of the six standard flow-equivalence moves?
    pub fn is_standard(&self) -> bool {
        matches!(
            self,
            Move::InSplit { .. }
                | Move::InAmalgamate { .. }
                | Move::OutSplit { .. }
                | Move::OutAmalgamate { .. }
                | Move::Expand { .. }
                | Move::Contract { .. }
        )
    }

    /// Apply the move to a quiver, verifying any embedded witness.
    pub fn apply(&self, q: &Quiver) -> Result<Quiver, MoveError> {
        match self {
            Move::Collapse { keep } => Ok(collapse(q, keep)?.q_prime),
            Move::Uncollapse { source, keep } => {
                let c = collapse(source, keep)?;
                match is_isomorphic(&c.q_prime, q) {
                    IsoOutcome::Isomorphic(_) => Ok(source.clone()),
                    IsoOutcome::NotIsomorphic => Err(MoveError::UncollapseMismatch),
                    IsoOutcome::Undecided { bound } => {
                        Err(MoveError::IsomorphismUndecided { bound })
                    }
                }
            }
            Move::InSplit { partition } => in_split(q, partition),
            Move::InAmalgamate { partition } => in_amalgamate(q, partition),
            Move::OutSplit { partition } => out_split(q, partition),
            Move::OutAmalgamate { partition } => out_amalgamate(q, partition),
            Move::SourceEliminate { vertex } => source_eliminate(q, vertex),
            Move::Expand { vertex } => expand(q, vertex),
            Move::Contract { vertex } => contract(q, vertex),
            Move::OutDelay { vector } => out_delay(q, vector),
            Move::InDelay { vector } => in_delay(q, vector),
            Move::AttachHeads { length } => attach_heads(q, *length),
            Move::HigherEdge { order } => higher_edge(q, *order),
            Move::Esse { target, witness } => {
                let report = verify_esse(q, target, witness);
                if report.ok() {
                    Ok(target.clone())
                } else {
                    Err(MoveError::EsseRejected(report.to_string()))
                }
            }
            Move::Isomorphism { target, witness } => {
                if witness.verify(q, target) {
                    Ok(target.clone())
                } else {
                    Err(MoveError::IsoWitnessRejected)
                }
            }
        }
    }
}

/// Apply a sequence of standard flow moves left to right, recording every
/// intermediate quiver. `log[0]` is the input; `log[i + 1]` the result of
/// move `i`. The first failing move aborts with its index and reason.
pub fn apply_flow_sequence(
    q: &Quiver,
    moves: &[Move],
) -> Result<(Quiver, Vec<Quiver>), MoveError> {
    for (index, m) in moves.iter().enumerate() {
        if !m.is_standard() {
            return Err(MoveError::NonStandardMove {
                index,
                name: m.name(),
            });
        }
    }
    let mut log = vec![q.clone()];
    let mut current = q.clone();
    for (index, m) in moves.iter().enumerate() {
        current = m.apply(&current).map_err(|e| MoveError::FlowStep {
            index,
            name: m.name(),
            source: Box::new(e),
        })?;
        log.push(current.clone());
    }
    Ok((current, log))
}

#[cfg(test)]
mod tests;
