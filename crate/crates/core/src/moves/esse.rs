use super::MoveError;
use crate::quiver::{EdgeId, IntMatrix, Quiver, VertexId};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Witness that two quivers are elementary strong shift equivalent via a
/// bridging quiver: the bridge, the two-sided vertex bipartition, and for
/// each side a bijection from its edges onto the bridge's length-2 paths
/// staying on that side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EsseWitness {
    pub bridge: Quiver,
    pub side1: BTreeSet<VertexId>,
    pub side2: BTreeSet<VertexId>,
    /// Edge of the first quiver -> (first, second) bridge edge of its
    /// length-2 path.
    pub theta1: BTreeMap<EdgeId, (EdgeId, EdgeId)>,
    pub theta2: BTreeMap<EdgeId, (EdgeId, EdgeId)>,
}

/// A named condition of the elementary strong shift equivalence definition
/// that a witness failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum EsseFailure {
    /// Side vertex set does not equal the quiver's vertex set.
    SideMismatch { side: u8 },
    /// The two sides intersect.
    SidesOverlap,
    /// Bridge vertices are not exactly the union of the two sides.
    VertexUnion,
    /// A bridge edge stays within one side instead of crossing.
    EdgeSplit { edge: EdgeId },
    /// Theta domain differs from the side quiver's edge set.
    ThetaDomain { side: u8 },
    /// A theta image is not a composable pair of bridge edges.
    ThetaImageNotPath { side: u8, edge: EdgeId },
    /// A theta image does not preserve the edge's source and range.
    ThetaEndpoints { side: u8, edge: EdgeId },
    /// Theta maps two edges to the same length-2 path.
    ThetaNotInjective { side: u8 },
    /// Theta misses some length-2 path of the bridge within the side.
    ThetaNotSurjective { side: u8 },
}

impl fmt::Display for EsseFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EsseFailure::SideMismatch { side } => {
                write!(f, "side {side} vertex set mismatch")
            }
            EsseFailure::SidesOverlap => write!(f, "sides overlap"),
            EsseFailure::VertexUnion => write!(f, "vertex union mismatch"),
            EsseFailure::EdgeSplit { edge } => {
                write!(f, "edge split violated: `{edge}` stays within one side")
            }
            EsseFailure::ThetaDomain { side } => write!(f, "theta{side} domain mismatch"),
            EsseFailure::ThetaImageNotPath { side, edge } => {
                write!(f, "theta{side} image of `{edge}` is not a length-2 path")
            }
            EsseFailure::ThetaEndpoints { side, edge } => {
                write!(f, "theta{side} image of `{edge}` moves its endpoints")
            }
            EsseFailure::ThetaNotInjective { side } => write!(f, "theta{side} not injective"),
            EsseFailure::ThetaNotSurjective { side } => write!(f, "theta{side} not surjective"),
        }
    }
}

/// Verification outcome with one entry per failed condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EsseReport {
    pub failures: Vec<EsseFailure>,
}

impl EsseReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for EsseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return f.write_str("all conditions hold");
        }
        let msgs: Vec<String> = self.failures.iter().map(|x| x.to_string()).collect();
        f.write_str(&msgs.join("; "))
    }
}

/// Check an elementary strong shift equivalence witness for `q1` and `q2`.
/// Every failed condition is reported by name; an empty report means the
/// witness is valid.
pub fn verify_esse(q1: &Quiver, q2: &Quiver, w: &EsseWitness) -> EsseReport {
    let mut failures = Vec::new();
    let v1: BTreeSet<VertexId> = q1.vertices().iter().cloned().collect();
    let v2: BTreeSet<VertexId> = q2.vertices().iter().cloned().collect();
    if w.side1 != v1 {
        failures.push(EsseFailure::SideMismatch { side: 1 });
    }
    if w.side2 != v2 {
        failures.push(EsseFailure::SideMismatch { side: 2 });
    }
    if !w.side1.is_disjoint(&w.side2) {
        failures.push(EsseFailure::SidesOverlap);
    }
    let union: BTreeSet<VertexId> = w.side1.union(&w.side2).cloned().collect();
    let bridge_vertices: BTreeSet<VertexId> = w.bridge.vertices().iter().cloned().collect();
    if union != bridge_vertices {
        failures.push(EsseFailure::VertexUnion);
    }
    for e in w.bridge.edges() {
        let crosses = (w.side1.contains(&e.src) && w.side2.contains(&e.dst))
            || (w.side2.contains(&e.src) && w.side1.contains(&e.dst));
        if !crosses {
            failures.push(EsseFailure::EdgeSplit { edge: e.id.clone() });
        }
    }
    check_theta(&mut failures, q1, &w.side1, &w.bridge, &w.theta1, 1);
    check_theta(&mut failures, q2, &w.side2, &w.bridge, &w.theta2, 2);
    EsseReport { failures }
}

fn check_theta(
    failures: &mut Vec<EsseFailure>,
    side_quiver: &Quiver,
    side: &BTreeSet<VertexId>,
    bridge: &Quiver,
    theta: &BTreeMap<EdgeId, (EdgeId, EdgeId)>,
    side_no: u8,
) {
    let domain: BTreeSet<&EdgeId> = theta.keys().collect();
    let expected: BTreeSet<&EdgeId> = side_quiver.edges().iter().map(|e| &e.id).collect();
    if domain != expected {
        failures.push(EsseFailure::ThetaDomain { side: side_no });
    }
    let mut images = BTreeSet::new();
    for (e, (f1, f2)) in theta {
        let Ok(edge) = side_quiver.edge(e) else {
            continue; // already covered by the domain check
        };
        let (Ok(b1), Ok(b2)) = (bridge.edge(f1), bridge.edge(f2)) else {
            failures.push(EsseFailure::ThetaImageNotPath {
                side: side_no,
                edge: e.clone(),
            });
            continue;
        };
        if b1.dst != b2.src {
            failures.push(EsseFailure::ThetaImageNotPath {
                side: side_no,
                edge: e.clone(),
            });
            continue;
        }
        if b1.src != edge.src || b2.dst != edge.dst {
            failures.push(EsseFailure::ThetaEndpoints {
                side: side_no,
                edge: e.clone(),
            });
        }
        if !images.insert((f1.clone(), f2.clone())) {
            failures.push(EsseFailure::ThetaNotInjective { side: side_no });
        }
    }
    // Count the bridge's length-2 paths that start and end on this side.
    let mut count = 0usize;
    for a in bridge.edges() {
        if !side.contains(&a.src) {
            continue;
        }
        for b in bridge.edges() {
            if a.dst == b.src && side.contains(&b.dst) {
                count += 1;
            }
        }
    }
    if count != theta.len() {
        failures.push(EsseFailure::ThetaNotSurjective { side: side_no });
    }
}

/// From a factorization pair `L` (p x q) and `R` (q x p), build the quivers
/// with incidence matrices `LR` and `RL` together with the canonical
/// bridging witness whose incidence is the block matrix `[[0, L], [R, 0]]`.
/// Theta bijections pair edges with length-2 paths in id order.
pub fn esse_from_factorization(
    l: &IntMatrix,
    r: &IntMatrix,
) -> Result<(Quiver, Quiver, EsseWitness), MoveError> {
    let lr = l.mul(r)?;
    let rl = r.mul(l)?;
    let p = l.rows();
    let q = l.cols();
    let u = |i: usize| format!("u{i}");
    let w = |j: usize| format!("w{j}");

    let quiver_on = |n: usize,
                     name: &dyn Fn(usize) -> String,
                     prefix: &str,
                     m: &IntMatrix|
     -> Result<Quiver, MoveError> {
        let vertices: Vec<String> = (0..n).map(name).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for k in 0..n {
                for t in 0..m.get(i, k) {
                    edges.push((format!("{prefix}{i}_{k}_{t}"), name(i), name(k)));
                }
            }
        }
        Ok(Quiver::new(vertices, edges)?)
    };
    let q1 = quiver_on(p, &u, "p", &lr)?;
    let q2 = quiver_on(q, &w, "q", &rl)?;

    let mut bridge_vertices: Vec<String> = (0..p).map(u).collect();
    bridge_vertices.extend((0..q).map(w));
    let mut bridge_edges = Vec::new();
    for i in 0..p {
        for j in 0..q {
            for t in 0..l.get(i, j) {
                bridge_edges.push((format!("a{i}_{j}_{t}"), u(i), w(j)));
            }
        }
    }
    for j in 0..q {
        for i in 0..p {
            for t in 0..r.get(j, i) {
                bridge_edges.push((format!("b{j}_{i}_{t}"), w(j), u(i)));
            }
        }
    }
    let bridge = Quiver::new(bridge_vertices, bridge_edges)?;

    // Pair the edges between each ordered vertex pair with the length-2
    // paths through the opposite side, both enumerated in id order.
    let mut theta1 = BTreeMap::new();
    for i in 0..p {
        for k in 0..p {
            let mut paths = Vec::new();
            for j in 0..q {
                for t1 in 0..l.get(i, j) {
                    for t2 in 0..r.get(j, k) {
                        paths.push((
                            EdgeId::new(format!("a{i}_{j}_{t1}")),
                            EdgeId::new(format!("b{j}_{k}_{t2}")),
                        ));
                    }
                }
            }
            for (t, pair) in paths.into_iter().enumerate() {
                theta1.insert(EdgeId::new(format!("p{i}_{k}_{t}")), pair);
            }
        }
    }
    let mut theta2 = BTreeMap::new();
    for j in 0..q {
        for k in 0..q {
            let mut paths = Vec::new();
            for i in 0..p {
                for t1 in 0..r.get(j, i) {
                    for t2 in 0..l.get(i, k) {
                        paths.push((
                            EdgeId::new(format!("b{j}_{i}_{t1}")),
                            EdgeId::new(format!("a{i}_{k}_{t2}")),
                        ));
                    }
                }
            }
            for (t, pair) in paths.into_iter().enumerate() {
                theta2.insert(EdgeId::new(format!("q{j}_{k}_{t}")), pair);
            }
        }
    }

    let witness = EsseWitness {
        bridge,
        side1: q1.vertices().iter().cloned().collect(),
        side2: q2.vertices().iter().cloned().collect(),
        theta1,
        theta2,
    };
    Ok((q1, q2, witness))
}

/// Bounded exhaustive search for nonnegative integer matrices `L`, `R` with
/// `a = LR` and `b = RL`, entries at most `entry_bound`. Returns the first
/// pair in row-major lexicographic order, or `None` when no pair exists
/// within the bounds (which never asserts that `a` and `b` are
/// inequivalent). The inner dimension is forced by `b` and must not exceed
/// `dim_bound`.
pub fn find_esse_factorization(
    a: &IntMatrix,
    b: &IntMatrix,
    entry_bound: u64,
    dim_bound: usize,
) -> Result<Option<(IntMatrix, IntMatrix)>, MoveError> {
    if !a.is_square() || !b.is_square() {
        return Err(MoveError::Matrix(
            crate::quiver::MatrixError::DimensionMismatch {
                lr: a.rows(),
                lc: a.cols(),
                rr: b.rows(),
                rc: b.cols(),
            },
        ));
    }
    let n = a.rows();
    let m = b.rows();
    if m > dim_bound {
        return Ok(None);
    }
    // trace(LR) = trace(RL) always, so differing traces rule out every
    // factorization, not just the bounded ones.
    if a.trace() != b.trace() {
        return Ok(None);
    }
    if n == 0 || m == 0 {
        // Zero-dimensional factors exist exactly when both matrices vanish.
        let zero_a = a.to_rows().iter().flatten().all(|&x| x == 0);
        let zero_b = b.to_rows().iter().flatten().all(|&x| x == 0);
        return Ok((zero_a && zero_b).then(|| (IntMatrix::zero(n, m), IntMatrix::zero(m, n))));
    }
    let cells = 2 * n * m;
    let log10_estimate = (cells as f64 * ((entry_bound + 1) as f64).log10()).ceil() as u32;
    const BUDGET: u64 = 50_000_000;
    if ((entry_bound + 1) as f64).powi(cells as i32) > BUDGET as f64 * 100.0 {
        return Err(MoveError::SearchBudgetExceeded { log10_estimate });
    }

    let mut l = IntMatrix::zero(n, m);
    let mut r = IntMatrix::zero(m, n);
    let mut steps: u64 = 0;
    if search_l(a, b, entry_bound, &mut l, &mut r, 0, &mut steps)? {
        Ok(Some((l, r)))
    } else {
        Ok(None)
    }
}

fn bump(steps: &mut u64) -> Result<(), MoveError> {
    *steps += 1;
    if *steps > 50_000_000 {
        return Err(MoveError::SearchBudgetExceeded { log10_estimate: 8 });
    }
    Ok(())
}

fn search_l(
    a: &IntMatrix,
    b: &IntMatrix,
    entry_bound: u64,
    l: &mut IntMatrix,
    r: &mut IntMatrix,
    cell: usize,
    steps: &mut u64,
) -> Result<bool, MoveError> {
    let (n, m) = (a.rows(), b.rows());
    if cell == n * m {
        return search_r(a, b, entry_bound, l, r, 0, steps);
    }
    let (i, j) = (cell / m, cell % m);
    for value in 0..=entry_bound {
        bump(steps)?;
        l.set(i, j, value);
        if search_l(a, b, entry_bound, l, r, cell + 1, steps)? {
            return Ok(true);
        }
    }
    l.set(i, j, 0);
    Ok(false)
}

fn search_r(
    a: &IntMatrix,
    b: &IntMatrix,
    entry_bound: u64,
    l: &IntMatrix,
    r: &mut IntMatrix,
    cell: usize,
    steps: &mut u64,
) -> Result<bool, MoveError> {
    let (n, m) = (a.rows(), b.rows());
    if cell == m * n {
        return Ok(l.mul(r)? == *a && r.mul(l)? == *b);
    }
    let (j, c) = (cell / n, cell % n);
    'values: for value in 0..=entry_bound {
        bump(steps)?;
        r.set(j, c, value);
        // Column c of a constrains column c of R once row m-1 is reached;
        // partial sums already prune (entries are nonnegative).
        for i in 0..n {
            let partial: u64 = (0..=j).map(|jj| l.get(i, jj) * r.get(jj, c)).sum();
            if partial > a.get(i, c) || (j == m - 1 && partial != a.get(i, c)) {
                continue 'values;
            }
        }
        // Row j of b constrains row j of R once its last cell is set.
        if c == n - 1 {
            for k in 0..m {
                let sum: u64 = (0..n).map(|i| r.get(j, i) * l.get(i, k)).sum();
                if sum != b.get(j, k) {
                    continue 'values;
                }
            }
        }
        if search_r(a, b, entry_bound, l, r, cell + 1, steps)? {
            return Ok(true);
        }
    }
    r.set(j, c, 0);
    Ok(false)
}

/// Witness for shift equivalence of two square matrices: `A^n = CD`,
/// `B^n = DC`, `AC = CB`, `DA = BD` for the given lag `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftEquivalenceWitness {
    pub c: IntMatrix,
    pub d: IntMatrix,
    pub lag: u32,
}

/// The four defining identities of shift equivalence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeIdentity {
    /// `A^n = CD`
    PowerA,
    /// `B^n = DC`
    PowerB,
    /// `AC = CB`
    IntertwineC,
    /// `DA = BD`
    IntertwineD,
}

impl fmt::Display for SeIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SeIdentity::PowerA => "A^n = CD",
            SeIdentity::PowerB => "B^n = DC",
            SeIdentity::IntertwineC => "AC = CB",
            SeIdentity::IntertwineD => "DA = BD",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeReport {
    pub failures: Vec<SeIdentity>,
}

impl SeReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check all four shift-equivalence identities with exact integer
/// arithmetic, reporting every identity that fails.
pub fn verify_shift_equivalence(
    a: &IntMatrix,
    b: &IntMatrix,
    w: &ShiftEquivalenceWitness,
) -> Result<SeReport, MoveError> {
    if w.lag == 0 {
        return Err(MoveError::LagZero);
    }
    let mut failures = Vec::new();
    if a.pow(w.lag)? != w.c.mul(&w.d)? {
        failures.push(SeIdentity::PowerA);
    }
    if b.pow(w.lag)? != w.d.mul(&w.c)? {
        failures.push(SeIdentity::PowerB);
    }
    if a.mul(&w.c)? != w.c.mul(b)? {
        failures.push(SeIdentity::IntertwineC);
    }
    if w.d.mul(a)? != b.mul(&w.d)? {
        failures.push(SeIdentity::IntertwineD);
    }
    Ok(SeReport { failures })
}
