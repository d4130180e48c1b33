use super::MoveError;
use crate::quiver::{Edge, EdgeId, Quiver, VertexId};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A Drinen delay vector: a nonnegative integer for every vertex and every
/// edge. Infinite values do not arise; all quivers here are finite, so no
/// vertex is an infinite emitter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrinenVector {
    pub vertices: BTreeMap<VertexId, u32>,
    pub edges: BTreeMap<EdgeId, u32>,
}

impl DrinenVector {
    /// Constant vector: `value` on every vertex and edge.
    pub fn constant(q: &Quiver, value: u32) -> Self {
        DrinenVector {
            vertices: q.vertices().iter().map(|v| (v.clone(), value)).collect(),
            edges: q.edges().iter().map(|e| (e.id.clone(), value)).collect(),
        }
    }

    fn check_total(&self, q: &Quiver) -> Result<(), MoveError> {
        for v in q.vertices() {
            if !self.vertices.contains_key(v) {
                return Err(MoveError::InvalidDrinenVector(format!(
                    "missing value for vertex `{v}`"
                )));
            }
        }
        for e in q.edges() {
            if !self.edges.contains_key(&e.id) {
                return Err(MoveError::InvalidDrinenVector(format!(
                    "missing value for edge `{}`",
                    e.id
                )));
            }
        }
        Ok(())
    }

    /// Source-vector law: at every non-sink `w`, the vertex value equals
    /// the maximum value over the edges emitted by `w`.
    pub fn validate_source(&self, q: &Quiver) -> Result<(), MoveError> {
        self.check_total(q)?;
        for w in q.vertices() {
            if q.is_sink(w) {
                continue;
            }
            let max = q
                .out_edges(w)
                .map(|e| self.edges[&e.id])
                .max()
                .expect("non-sink emits an edge");
            if self.vertices[w] != max {
                return Err(MoveError::InvalidDrinenVector(format!(
                    "vertex `{w}` has value {} but its out-edges peak at {max}",
                    self.vertices[w]
                )));
            }
        }
        Ok(())
    }

    /// Range-vector law: at every non-source `w`, the vertex value equals
    /// the maximum value over the edges received by `w`.
    pub fn validate_range(&self, q: &Quiver) -> Result<(), MoveError> {
        self.check_total(q)?;
        for w in q.vertices() {
            if q.is_source(w) {
                continue;
            }
            let max = q
                .in_edges(w)
                .map(|e| self.edges[&e.id])
                .max()
                .expect("non-source receives an edge");
            if self.vertices[w] != max {
                return Err(MoveError::InvalidDrinenVector(format!(
                    "vertex `{w}` has value {} but its in-edges peak at {max}",
                    self.vertices[w]
                )));
            }
        }
        Ok(())
    }
}

/// Out-delayed quiver for a source vector: vertex `v` becomes the chain
/// `v^0 -> v^1 -> ... -> v^{d(v)}` (delay edges `f(v)^i`), and an original
/// edge `e` runs from `s(e)^{d(e)}` to `r(e)^0`.
pub fn out_delay(q: &Quiver, d: &DrinenVector) -> Result<Quiver, MoveError> {
    d.validate_source(q)?;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for v in q.vertices() {
        for i in 0..=d.vertices[v] {
            vertices.push(VertexId::new(format!("{v}^{i}")));
            if i > 0 {
                edges.push(Edge {
                    id: format!("f({v})^{i}").into(),
                    src: format!("{v}^{}", i - 1).into(),
                    dst: format!("{v}^{i}").into(),
                });
            }
        }
    }
    for e in q.edges() {
        edges.push(Edge {
            id: e.id.clone(),
            src: format!("{}^{}", e.src, d.edges[&e.id]).into(),
            dst: format!("{}^0", e.dst).into(),
        });
    }
    Ok(Quiver::from_parts(vertices, edges)?)
}

/// In-delayed quiver for a range vector: vertex `v` becomes the chain
/// `v_{d(v)} -> ... -> v_1 -> v_0` (delay edges `f(v)_i`), and an original
/// edge `e` runs from `s(e)_0` to `r(e)_{d(e)}`.
pub fn in_delay(q: &Quiver, d: &DrinenVector) -> Result<Quiver, MoveError> {
    d.validate_range(q)?;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for v in q.vertices() {
        for i in 0..=d.vertices[v] {
            vertices.push(VertexId::new(format!("{v}_{i}")));
            if i > 0 {
                edges.push(Edge {
                    id: format!("f({v})_{i}").into(),
                    src: format!("{v}_{i}").into(),
                    dst: format!("{v}_{}", i - 1).into(),
                });
            }
        }
    }
    for e in q.edges() {
        edges.push(Edge {
            id: e.id.clone(),
            src: format!("{}_0", e.src).into(),
            dst: format!("{}_{}", e.dst, d.edges[&e.id]).into(),
        });
    }
    Ok(Quiver::from_parts(vertices, edges)?)
}

/// Outcome of the strict-properness check for a source vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropernessCheck {
    pub strictly_proper: bool,
    pub note: &'static str,
}

/// Strict properness of a source vector. Properness can only fail at a
/// vertex of infinite valency; finite quivers have none, so every valid
/// source vector is strictly proper and the check documents that fact.
pub fn is_strictly_proper(d: &DrinenVector, q: &Quiver) -> Result<PropernessCheck, MoveError> {
    d.validate_source(q)?;
    Ok(PropernessCheck {
        strictly_proper: true,
        note: "properness can only fail at an infinite emitter; finite quivers have none",
    })
}
