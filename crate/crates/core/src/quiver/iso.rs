use super::{EdgeId, Quiver, VertexId};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Largest vertex count for which [`is_isomorphic`] gives an exact answer.
pub const ISO_VERTEX_BOUND: usize = 10;

/// Explicit quiver isomorphism: a vertex bijection plus an edge bijection
/// preserving sources and ranges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoWitness {
    pub vertex_map: BTreeMap<VertexId, VertexId>,
    pub edge_map: BTreeMap<EdgeId, EdgeId>,
}

impl IsoWitness {
    /// Re-check the witness against the two quivers.
    pub fn verify(&self, a: &Quiver, b: &Quiver) -> bool {
        if self.vertex_map.len() != a.vertex_count()
            || self.edge_map.len() != a.edge_count()
            || a.vertex_count() != b.vertex_count()
            || a.edge_count() != b.edge_count()
        {
            return false;
        }
        let mut seen_v = std::collections::BTreeSet::new();
        for (u, w) in &self.vertex_map {
            if !a.has_vertex(u) || !b.has_vertex(w) || !seen_v.insert(w) {
                return false;
            }
        }
        let mut seen_e = std::collections::BTreeSet::new();
        for (x, y) in &self.edge_map {
            let (Ok(ea), Ok(eb)) = (a.edge(x), b.edge(y)) else {
                return false;
            };
            if !seen_e.insert(y) {
                return false;
            }
            if self.vertex_map.get(&ea.src) != Some(&eb.src)
                || self.vertex_map.get(&ea.dst) != Some(&eb.dst)
            {
                return false;
            }
        }
        true
    }
}

/// Result of an isomorphism test: a witness, a definite negative, or an
/// honest refusal when the inputs exceed the supported size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoOutcome {
    Isomorphic(IsoWitness),
    NotIsomorphic,
    /// Inputs exceed [`ISO_VERTEX_BOUND`]; no verdict is given.
    Undecided { bound: usize },
}

impl IsoOutcome {
    pub fn witness(&self) -> Option<&IsoWitness> {
        match self {
            IsoOutcome::Isomorphic(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic(_))
    }
}

/// Exact isomorphism test by pruned backtracking over vertex bijections,
/// for quivers of at most [`ISO_VERTEX_BOUND`] vertices. Candidates are
/// tried in id order, so the returned witness is deterministic (and the
/// identity when the quivers are equal).
pub fn is_isomorphic(a: &Quiver, b: &Quiver) -> IsoOutcome {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return IsoOutcome::NotIsomorphic;
    }
    let n = a.vertex_count();
    if n > ISO_VERTEX_BOUND {
        return IsoOutcome::Undecided {
            bound: ISO_VERTEX_BOUND,
        };
    }

    // Degree profile (out, in, loops) is an isomorphism invariant used both
    // as a quick rejection and to prune candidate targets.
    let profile = |q: &Quiver, v: &VertexId| {
        let loops = q.out_edges(v).filter(|e| e.dst == *v).count();
        (q.out_degree(v), q.in_degree(v), loops)
    };
    let pa: Vec<_> = a.vertices().iter().map(|v| profile(a, v)).collect();
    let pb: Vec<_> = b.vertices().iter().map(|v| profile(b, v)).collect();
    let mut sa = pa.clone();
    let mut sb = pb.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return IsoOutcome::NotIsomorphic;
    }

    let count = |q: &Quiver, u: &VertexId, v: &VertexId| {
        q.out_edges(u).filter(|e| e.dst == *v).count()
    };

    let av = a.vertices();
    let bv = b.vertices();
    let mut map: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];

    fn backtrack(
        a: &Quiver,
        b: &Quiver,
        pa: &[(usize, usize, usize)],
        pb: &[(usize, usize, usize)],
        count: &impl Fn(&Quiver, &VertexId, &VertexId) -> usize,
        map: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        depth: usize,
    ) -> bool {
        let n = map.len();
        if depth == n {
            return true;
        }
        for cand in 0..n {
            if used[cand] || pa[depth] != pb[cand] {
                continue;
            }
            let ok = (0..depth).all(|prev| {
                let t = map[prev].unwrap();
                count(a, &a.vertices()[prev], &a.vertices()[depth])
                    == count(b, &b.vertices()[t], &b.vertices()[cand])
                    && count(a, &a.vertices()[depth], &a.vertices()[prev])
                        == count(b, &b.vertices()[cand], &b.vertices()[t])
            });
            if !ok {
                continue;
            }
            map[depth] = Some(cand);
            used[cand] = true;
            if backtrack(a, b, pa, pb, count, map, used, depth + 1) {
                return true;
            }
            map[depth] = None;
            used[cand] = false;
        }
        false
    }

    if !backtrack(a, b, &pa, &pb, &count, &mut map, &mut used, 0) {
        return IsoOutcome::NotIsomorphic;
    }

    let vertex_map: BTreeMap<VertexId, VertexId> = av
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), bv[map[i].unwrap()].clone()))
        .collect();

    // Pair parallel edges between matched endpoints in id order.
    let mut edge_map = BTreeMap::new();
    let mut grouped: BTreeMap<(VertexId, VertexId), Vec<EdgeId>> = BTreeMap::new();
    for e in b.edges() {
        grouped
            .entry((e.src.clone(), e.dst.clone()))
            .or_default()
            .push(e.id.clone());
    }
    for e in a.edges() {
        let key = (
            vertex_map[&e.src].clone(),
            vertex_map[&e.dst].clone(),
        );
        let bucket = grouped.get_mut(&key).expect("multiplicities matched");
        edge_map.insert(e.id.clone(), bucket.remove(0));
    }

    IsoOutcome::Isomorphic(IsoWitness {
        vertex_map,
        edge_map,
    })
}
