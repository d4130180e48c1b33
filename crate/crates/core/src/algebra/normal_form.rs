//! Cuntz–Krieger normal forms.
//!
//! For each emitting vertex `v` fix the distinguished edge `ê_v` as the
//! lexicographically last edge of `s^{-1}(v)`. A monomial is reducible when
//! its real and ghost parts end in the same distinguished edge; the rewrite
//! replaces `(p ê, q ê)` by `(p, q) - sum over the other edges e of the
//! fiber of (p e, q e)`, which is the CK-2 relation at `v` oriented to
//! eliminate `ê ê*`. Irreducible monomials form a linear basis, so two
//! elements are equal in the algebra exactly when their normal forms agree,
//! and the normal form does not depend on the reduction order.

use super::element::{add_term, Element, Monomial};
use crate::quiver::{EdgeId, Path, Quiver, VertexId};

/// The lexicographically last edge emitted by `v`, if any.
pub(crate) fn distinguished_edge(q: &Quiver, v: &VertexId) -> Option<EdgeId> {
    q.out_edges(v).last().map(|e| e.id.clone())
}

fn reducible(q: &Quiver, m: &Monomial) -> bool {
    let (Path::Edges(p), Path::Edges(g)) = (&m.real, &m.ghost) else {
        return false;
    };
    let e = p.last().unwrap();
    if g.last().unwrap() != e {
        return false;
    }
    let src = &q.edge(e).expect("validated monomial").src;
    distinguished_edge(q, src).as_ref() == Some(e)
}

fn drop_last(path: &Path, fallback: &VertexId) -> Path {
    match path {
        Path::Trivial(_) => unreachable!("reducible monomials have nontrivial parts"),
        Path::Edges(es) if es.len() == 1 => Path::trivial(fallback.clone()),
        Path::Edges(es) => Path::Edges(es[..es.len() - 1].to_vec()),
    }
}

fn append(path: &Path, e: &EdgeId) -> Path {
    match path {
        Path::Trivial(_) => Path::single(e.clone()),
        Path::Edges(es) => {
            let mut es = es.clone();
            es.push(e.clone());
            Path::Edges(es)
        }
    }
}

impl Element {
    /// Canonical normal form: reduce until no monomial ends in a
    /// distinguished-edge pair, always picking the first reducible monomial
    /// in term order. Idempotent, and zero exactly for the zero element of
    /// the algebra.
    pub fn normal_form(&self) -> Element {
        self.normal_form_with(|_| 0)
    }

    /// Normal form under an injected reduction strategy: at every step
    /// `choose` receives the number of reducible monomials currently
    /// present and picks which one to rewrite. Every strategy yields the
    /// same result; this entry point exists to let tests probe that
    /// confluence directly.
    pub fn normal_form_with(&self, mut choose: impl FnMut(usize) -> usize) -> Element {
        let q = self.quiver();
        let field = self.field();
        let mut terms = self.terms().clone();
        loop {
            let reducibles: Vec<Monomial> = terms
                .keys()
                .filter(|m| reducible(q, m))
                .cloned()
                .collect();
            if reducibles.is_empty() {
                break;
            }
            let pick = choose(reducibles.len()) % reducibles.len();
            let m = reducibles[pick].clone();
            let c = terms.remove(&m).expect("picked key present");

            let last = match &m.real {
                Path::Edges(es) => es.last().unwrap().clone(),
                Path::Trivial(_) => unreachable!(),
            };
            let src = q.edge(&last).expect("validated monomial").src.clone();
            let real_head = drop_last(&m.real, &src);
            let ghost_head = drop_last(&m.ghost, &src);
            add_term(
                &field,
                &mut terms,
                Monomial {
                    real: real_head.clone(),
                    ghost: ghost_head.clone(),
                },
                c.clone(),
            );
            let neg = field.neg(&c);
            for e in q.out_edges(&src) {
                if e.id == last {
                    continue;
                }
                add_term(
                    &field,
                    &mut terms,
                    Monomial {
                        real: append(&real_head, &e.id),
                        ghost: append(&ghost_head, &e.id),
                    },
                    neg.clone(),
                );
            }
        }
        Element::from_terms(self.quiver_arc(), field, terms)
    }
}
