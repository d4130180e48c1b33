use super::CertifyError;
use crate::algebra::{Element, LeavittAlgebra, Monomial};
use crate::moves::CollapseResult;
use crate::quiver::{EdgeId, Path, Quiver, VertexId};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// The generator family a collapse induces inside `L_k(Q)`: the vertex
/// idempotents `q_v = v` for kept vertices, and for each new edge the
/// element `T_e` given by its origin path (ghost part trivial).
#[derive(Debug, Clone)]
pub struct QPrimeFamily {
    pub algebra: LeavittAlgebra,
    pub vertex_idempotents: BTreeMap<VertexId, Element>,
    pub generators: BTreeMap<EdgeId, Element>,
}

/// Build the family in the rational Leavitt path algebra of `q`.
pub fn q_prime_family(q: &Quiver, c: &CollapseResult) -> Result<QPrimeFamily, CertifyError> {
    let algebra = LeavittAlgebra::rational(q.clone());
    let mut vertex_idempotents = BTreeMap::new();
    for v in c.q_prime.vertices() {
        vertex_idempotents.insert(v.clone(), algebra.vertex(v.clone())?);
    }
    let mut generators = BTreeMap::new();
    for (e, path) in &c.edge_origin {
        generators.insert(e.clone(), algebra.path(path.clone())?);
    }
    Ok(QPrimeFamily {
        algebra,
        vertex_idempotents,
        generators,
    })
}

/// One defining relation of the collapsed quiver's algebra, instantiated at
/// concrete generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyIdentity {
    /// `q_v q_w = 0` for distinct kept vertices, `q_v q_v = q_v`.
    Orthogonality { left: VertexId, right: VertexId },
    /// `q_{s(e)} T_e = T_e`.
    UnitLeft { edge: EdgeId },
    /// `T_e q_{r(e)} = T_e`.
    UnitRight { edge: EdgeId },
    /// `q_{r(e)} T_e* = T_e*`.
    GhostUnitLeft { edge: EdgeId },
    /// `T_e* q_{s(e)} = T_e*`.
    GhostUnitRight { edge: EdgeId },
    /// `T_a* T_b = 0` for distinct edges, `T_a* T_a = q_{r(a)}`.
    CkOne { left: EdgeId, right: EdgeId },
    /// `q_v = sum of T_e T_e* over the edges the collapsed quiver emits at
    /// v` (only stated at vertices emitting at least one edge).
    CkTwo { vertex: VertexId },
}

impl fmt::Display for FamilyIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyIdentity::Orthogonality { left, right } => {
                write!(f, "orthogonality of q_{left} and q_{right}")
            }
            FamilyIdentity::UnitLeft { edge } => write!(f, "q_s(e) T = T for `{edge}`"),
            FamilyIdentity::UnitRight { edge } => write!(f, "T q_r(e) = T for `{edge}`"),
            FamilyIdentity::GhostUnitLeft { edge } => write!(f, "q_r(e) T* = T* for `{edge}`"),
            FamilyIdentity::GhostUnitRight { edge } => write!(f, "T* q_s(e) = T* for `{edge}`"),
            FamilyIdentity::CkOne { left, right } => {
                write!(f, "T*_{{{left}}} T_{{{right}}} relation")
            }
            FamilyIdentity::CkTwo { vertex } => {
                write!(f, "q_{vertex} = sum of T T* over its fiber")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCheck {
    pub identity: FamilyIdentity,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub checks: Vec<FamilyCheck>,
}

impl FamilyReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &FamilyCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Verify, inside `L_k(Q)` via normal forms, that the collapse-induced
/// family satisfies every defining relation of the collapsed quiver: the
/// kept idempotents are pairwise orthogonal, the unit laws hold at each
/// generator, distinct generators are star-orthogonal with `T* T` the range
/// idempotent, and each emitting kept vertex splits as the sum of `T T*`
/// over its fiber.
pub fn verify_q_prime_family(
    q: &Quiver,
    c: &CollapseResult,
) -> Result<FamilyReport, CertifyError> {
    let family = q_prime_family(q, c)?;
    let algebra = &family.algebra;
    let prime = &c.q_prime;
    let mut checks = Vec::new();
    let mut push = |identity: FamilyIdentity, pass: bool| checks.push(FamilyCheck { identity, pass });

    let vs: Vec<&VertexId> = prime.vertices().iter().collect();
    for (i, v) in vs.iter().enumerate() {
        for w in &vs[i..] {
            let qv = &family.vertex_idempotents[*v];
            let qw = &family.vertex_idempotents[*w];
            let product = qv.mul(qw)?;
            let expected = if v == w { qv.clone() } else { algebra.zero() };
            push(
                FamilyIdentity::Orthogonality {
                    left: (*v).clone(),
                    right: (*w).clone(),
                },
                product.equivalent(&expected)?,
            );
        }
    }

    for e in prime.edges() {
        let t = &family.generators[&e.id];
        let ts = t.star();
        let qs = &family.vertex_idempotents[&e.src];
        let qr = &family.vertex_idempotents[&e.dst];
        push(
            FamilyIdentity::UnitLeft { edge: e.id.clone() },
            qs.mul(t)?.equivalent(t)?,
        );
        push(
            FamilyIdentity::UnitRight { edge: e.id.clone() },
            t.mul(qr)?.equivalent(t)?,
        );
        push(
            FamilyIdentity::GhostUnitLeft { edge: e.id.clone() },
            qr.mul(&ts)?.equivalent(&ts)?,
        );
        push(
            FamilyIdentity::GhostUnitRight { edge: e.id.clone() },
            ts.mul(qs)?.equivalent(&ts)?,
        );
    }

    for a in prime.edges() {
        for b in prime.edges() {
            let ta = &family.generators[&a.id];
            let tb = &family.generators[&b.id];
            let product = ta.star().mul(tb)?;
            let expected = if a.id == b.id {
                family.vertex_idempotents[&a.dst].clone()
            } else {
                algebra.zero()
            };
            push(
                FamilyIdentity::CkOne {
                    left: a.id.clone(),
                    right: b.id.clone(),
                },
                product.equivalent(&expected)?,
            );
        }
    }

    for v in prime.vertices() {
        if !prime.is_regular(v) {
            continue;
        }
        let mut sum = algebra.zero();
        for e in prime.out_edges(v) {
            let t = &family.generators[&e.id];
            sum = sum.add(&t.mul(&t.star())?)?;
        }
        push(
            FamilyIdentity::CkTwo { vertex: v.clone() },
            sum.equivalent(&family.vertex_idempotents[v])?,
        );
    }

    Ok(FamilyReport { checks })
}

/// Express a corner monomial of `L_k(Q)` as an element of the collapsed
/// quiver's algebra (words in the `T` generators and kept idempotents).
///
/// The monomial must satisfy `s(p), s(q) in keep` and `r(p) = r(q)`. When
/// the common range is kept, both paths factor through kept visits into
/// origin segments and the result is a single word. Otherwise both paths
/// split at their last kept visit into `p = a b`, `q = g d`, and the
/// dangling tails expand over the bridge paths `h` at the range:
/// `p q* = sum over h of (a . b h)(g . d h)*`.
pub fn express_in_corner(
    q: &Quiver,
    c: &CollapseResult,
    m: &Monomial,
) -> Result<Element, CertifyError> {
    let keep: BTreeSet<VertexId> = c.q_prime.vertices().iter().cloned().collect();
    let prime_algebra = LeavittAlgebra::rational(c.q_prime.clone());
    let origin_of: BTreeMap<&Path, &EdgeId> =
        c.edge_origin.iter().map(|(e, p)| (p, e)).collect();

    m.real.validate(q)?;
    m.ghost.validate(q)?;
    let r_real = m.real.range(q)?;
    let r_ghost = m.ghost.range(q)?;
    if r_real != r_ghost {
        return Err(CertifyError::MonomialOutsideCorner(format!(
            "ranges differ: `{r_real}` vs `{r_ghost}`"
        )));
    }
    for (side, path) in [("real", &m.real), ("ghost", &m.ghost)] {
        let s = path.source(q)?;
        if !keep.contains(&s) {
            return Err(CertifyError::MonomialOutsideCorner(format!(
                "{side} part starts at dropped vertex `{s}`"
            )));
        }
    }

    let lookup = |segment: &Path| -> Result<EdgeId, CertifyError> {
        origin_of.get(segment).map(|e| (*e).clone()).ok_or_else(|| {
            CertifyError::Reexpression(format!("segment `{segment}` is not an origin path"))
        })
    };
    // Split a kept-to-kept path at each kept visit into origin segments.
    let split = |path: &Path| -> Result<Vec<EdgeId>, CertifyError> {
        let mut ids = Vec::new();
        let mut segment: Vec<EdgeId> = Vec::new();
        for e in path.edge_ids() {
            segment.push(e.clone());
            if keep.contains(&q.edge(e)?.dst) {
                ids.push(lookup(&Path::from_edges(segment.clone()))?);
                segment.clear();
            }
        }
        if !segment.is_empty() {
            return Err(CertifyError::Reexpression(format!(
                "path `{path}` has a dangling tail outside the kept set"
            )));
        }
        Ok(ids)
    };
    let as_path = |ids: Vec<EdgeId>, base: &VertexId| -> Path {
        if ids.is_empty() {
            Path::trivial(base.clone())
        } else {
            Path::from_edges(ids)
        }
    };

    if keep.contains(&r_real) {
        let real_ids = split(&m.real)?;
        let ghost_ids = split(&m.ghost)?;
        let s_real = m.real.source(q)?;
        let s_ghost = m.ghost.source(q)?;
        return Ok(prime_algebra.monomial(
            as_path(real_ids, &s_real),
            as_path(ghost_ids, &s_ghost),
        )?);
    }

    // Split off the tail after the last kept visit of each part.
    let cut_tail = |path: &Path| -> Result<(Path, Path), CertifyError> {
        let ids = path.edge_ids();
        let mut last_kept_start = 0;
        for (i, e) in ids.iter().enumerate() {
            if keep.contains(&q.edge(e)?.src) {
                last_kept_start = i;
            }
        }
        let head = if last_kept_start == 0 {
            Path::trivial(path.source(q)?)
        } else {
            Path::from_edges(ids[..last_kept_start].to_vec())
        };
        let tail = Path::from_edges(ids[last_kept_start..].to_vec());
        Ok((head, tail))
    };

    let (real_head, real_tail) = cut_tail(&m.real)?;
    let (ghost_head, ghost_tail) = cut_tail(&m.ghost)?;
    let bridges = q.bridge_paths(&keep).map_err(CertifyError::Quiver)?;
    let continuations = bridges.get(&r_real).ok_or_else(|| {
        CertifyError::Reexpression(format!("no bridge paths recorded at `{r_real}`"))
    })?;
    if continuations.is_empty() {
        return Err(CertifyError::Reexpression(format!(
            "dropped vertex `{r_real}` has no bridge path into the kept set"
        )));
    }

    let real_head_ids = split(&real_head)?;
    let ghost_head_ids = split(&ghost_head)?;
    let s_real = m.real.source(q)?;
    let s_ghost = m.ghost.source(q)?;
    let mut acc = prime_algebra.zero();
    for h in continuations {
        let mut real_ids = real_head_ids.clone();
        real_ids.push(lookup(&real_tail.concat(h, q)?)?);
        let mut ghost_ids = ghost_head_ids.clone();
        ghost_ids.push(lookup(&ghost_tail.concat(h, q)?)?);
        let word = prime_algebra.monomial(
            as_path(real_ids, &s_real),
            as_path(ghost_ids, &s_ghost),
        )?;
        acc = acc.add(&word)?;
    }
    Ok(acc)
}

/// Substitute each collapsed-quiver edge by its origin path, mapping an
/// element over the collapsed quiver back into the given algebra over the
/// original quiver. This is the inverse direction of
/// [`express_in_corner`]: substituting its output recovers the input
/// monomial up to normal form.
pub fn substitute_origins(
    c: &CollapseResult,
    elem: &Element,
    target: &LeavittAlgebra,
) -> Result<Element, CertifyError> {
    let q = target.quiver();
    let expand_path = |p: &Path| -> Result<Path, CertifyError> {
        match p {
            Path::Trivial(v) => Ok(Path::trivial(v.clone())),
            Path::Edges(es) => {
                let mut acc: Option<Path> = None;
                for e in es {
                    let origin = c.edge_origin.get(e).ok_or_else(|| {
                        CertifyError::Reexpression(format!("edge `{e}` has no origin path"))
                    })?;
                    acc = Some(match acc {
                        None => origin.clone(),
                        Some(prefix) => prefix.concat(origin, q)?,
                    });
                }
                Ok(acc.expect("nonempty edge list"))
            }
        }
    };
    let mut result = target.zero();
    for (m, coeff) in elem.terms() {
        let real = expand_path(&m.real)?;
        let ghost = expand_path(&m.ghost)?;
        let word = target.monomial(real, ghost)?;
        result = result.add(&word.scale_coeff(coeff))?;
    }
    Ok(result)
}
