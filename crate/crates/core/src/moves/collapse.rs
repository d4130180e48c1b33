use super::MoveError;
use crate::quiver::{Edge, EdgeId, Path, Quiver, QuiverError, VertexId};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Deterministic id for the edge replacing an origin path: `e__` followed by
/// the path's edge ids joined with `/`. Parseable back into the path.
pub fn origin_edge_id(path: &Path) -> EdgeId {
    let joined = path
        .edge_ids()
        .iter()
        .map(|e| e.as_str())
        .collect::<Vec<_>>()
        .join("/");
    EdgeId::new(format!("e__{joined}"))
}

/// Output of the collapse move.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseResult {
    /// The collapsed quiver: vertex set `keep`, one edge per qualifying
    /// path.
    pub q_prime: Quiver,
    /// Maximum origin path length (1 when no path qualifies).
    pub n_max: u32,
    /// Bijection from the new edges onto their origin paths.
    pub edge_origin: BTreeMap<EdgeId, Path>,
}

/// Collapse a quiver onto a kept vertex set: the result has vertex set
/// `keep` and one edge `e_p` for every nontrivial path `p` that starts and
/// ends in `keep` while its interior ranges avoid `keep`.
///
/// Preconditions: `keep` is nonempty, contains every sink, and meets every
/// cycle. Violations are reported with the offending sink or cycle.
pub fn collapse(q: &Quiver, keep: &BTreeSet<VertexId>) -> Result<CollapseResult, MoveError> {
    q.check_vertices(keep)?;
    if keep.is_empty() {
        return Err(MoveError::EmptyKeep);
    }
    if let Some(sink) = q.sinks().find(|s| !keep.contains(*s)) {
        return Err(MoveError::SinkOutsideKeep(sink.clone()));
    }
    let bridges = q.bridge_paths(keep).map_err(|e| match e {
        QuiverError::CycleAvoidsKeep(cycle) => {
            MoveError::Quiver(QuiverError::CycleAvoidsKeep(cycle))
        }
        other => MoveError::Quiver(other),
    })?;

    let mut n_max: u32 = 1;
    let mut edge_origin = BTreeMap::new();
    let mut edges = Vec::new();
    for v in keep {
        for path in &bridges[v] {
            let id = origin_edge_id(path);
            n_max = n_max.max(path.len() as u32);
            edges.push(Edge {
                id: id.clone(),
                src: v.clone(),
                dst: path.range(q)?,
            });
            edge_origin.insert(id, path.clone());
        }
    }
    let q_prime = Quiver::from_parts(keep.iter().cloned().collect(), edges)?;
    Ok(CollapseResult {
        q_prime,
        n_max,
        edge_origin,
    })
}
