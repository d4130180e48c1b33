//! Shared quivers and generators for unit tests.

use crate::quiver::{Quiver, VertexId};
use proptest::prelude::*;
use std::collections::BTreeSet;

pub fn vset(ids: &[&str]) -> BTreeSet<VertexId> {
    ids.iter().map(|s| VertexId::from(*s)).collect()
}

/// Line quiver `1 -a-> 2 -b-> 3`.
pub fn line3() -> Quiver {
    Quiver::new(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")]).unwrap()
}

/// Two-cycle `1 -a-> 2 -b-> 1`.
pub fn two_cycle() -> Quiver {
    Quiver::new(["1", "2"], [("a", "1", "2"), ("b", "2", "1")]).unwrap()
}

/// Single vertex with one loop.
pub fn single_loop() -> Quiver {
    Quiver::new(["v"], [("l", "v", "v")]).unwrap()
}

/// Rose with `n` petals at one vertex.
pub fn rose(n: usize) -> Quiver {
    let edges: Vec<(String, &str, &str)> = (0..n).map(|i| (format!("l{i}"), "v", "v")).collect();
    Quiver::new(["v"], edges).unwrap()
}

/// The four-edge quiver with a loop used for higher-edge tests:
/// `a: 1 -> 2`, `b: 2 -> 3`, `c: 1 -> 3`, `d: 3 -> 3`.
pub fn four_edge_loop_quiver() -> Quiver {
    Quiver::new(
        ["1", "2", "3"],
        [
            ("a", "1", "2"),
            ("b", "2", "3"),
            ("c", "1", "3"),
            ("d", "3", "3"),
        ],
    )
    .unwrap()
}

/// Wheel of length-4 cycles through a hub `A`: edges
/// `A -> x_i -> B -> y_j -> A` for `i < n`, `j < m`. Collapsing onto `{A}`
/// yields a rose with `m * n` petals.
pub fn wheel_mn(m: usize, n: usize) -> Quiver {
    let mut vertices = vec!["A".to_string(), "B".to_string()];
    let mut edges = Vec::new();
    for i in 0..n {
        vertices.push(format!("x{i}"));
        edges.push((format!("a{i}"), "A".to_string(), format!("x{i}")));
        edges.push((format!("b{i}"), format!("x{i}"), "B".to_string()));
    }
    for j in 0..m {
        vertices.push(format!("y{j}"));
        edges.push((format!("c{j}"), "B".to_string(), format!("y{j}")));
        edges.push((format!("d{j}"), format!("y{j}"), "A".to_string()));
    }
    Quiver::new(vertices, edges).unwrap()
}

/// Variant with a shared tail `B -> C -> A`: edges `A -> x_i -> B`,
/// `A -> y_j -> B`, `B -> C`, `C -> A`. Collapsing onto `{A}` yields a rose
/// with `m + n` petals.
pub fn wheel_m_plus_n(m: usize, n: usize) -> Quiver {
    let mut vertices = vec!["A".to_string(), "B".to_string(), "C".to_string()];
    let mut edges = vec![
        ("t".to_string(), "B".to_string(), "C".to_string()),
        ("u".to_string(), "C".to_string(), "A".to_string()),
    ];
    for i in 0..n {
        vertices.push(format!("x{i}"));
        edges.push((format!("a{i}"), "A".to_string(), format!("x{i}")));
        edges.push((format!("b{i}"), format!("x{i}"), "B".to_string()));
    }
    for j in 0..m {
        vertices.push(format!("y{j}"));
        edges.push((format!("p{j}"), "A".to_string(), format!("y{j}")));
        edges.push((format!("q{j}"), format!("y{j}"), "B".to_string()));
    }
    Quiver::new(vertices, edges).unwrap()
}

/// Random quiver with up to `max_v` vertices and `max_e` edges. Vertex ids
/// `v0..`, edge ids `e0..` (no underscores, so generated move names never
/// collide).
pub fn arb_quiver(max_v: usize, max_e: usize) -> impl Strategy<Value = Quiver> {
    (1..=max_v).prop_flat_map(move |n| {
        proptest::collection::vec((0..n, 0..n), 0..=max_e).prop_map(move |pairs| {
            let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let edges: Vec<(String, String, String)> = pairs
                .iter()
                .enumerate()
                .map(|(k, (s, d))| (format!("e{k}"), format!("v{s}"), format!("v{d}")))
                .collect();
            Quiver::new(vertices, edges).unwrap()
        })
    })
}

/// Random quiver together with a random vertex subset.
pub fn arb_quiver_with_subset(
    max_v: usize,
    max_e: usize,
) -> impl Strategy<Value = (Quiver, BTreeSet<VertexId>)> {
    arb_quiver(max_v, max_e).prop_flat_map(|q| {
        let n = q.vertex_count();
        proptest::collection::vec(proptest::bool::ANY, n).prop_map(move |mask| {
            let keep = q
                .vertices()
                .iter()
                .zip(&mask)
                .filter(|(_, m)| **m)
                .map(|(v, _)| v.clone())
                .collect();
            (q.clone(), keep)
        })
    })
}
