use super::{AlgebraError, Coeff, FieldKind};
use crate::quiver::{EdgeId, Path, Quiver, VertexId};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// A basis word `p q*`: a real path and a ghost path with equal ranges. The
/// ghost part is stored un-starred, so the vertex idempotent `v` is the pair
/// of trivial paths at `v`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial {
    pub real: Path,
    pub ghost: Path,
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.real, &self.ghost) {
            (Path::Trivial(v), Path::Trivial(_)) => write!(f, "{v}"),
            (real, ghost) => {
                let mut parts: Vec<String> = Vec::new();
                if let Path::Edges(es) = real {
                    parts.extend(es.iter().map(|e| e.to_string()));
                }
                if let Path::Edges(es) = ghost {
                    parts.extend(es.iter().rev().map(|e| format!("{e}*")));
                }
                f.write_str(&parts.join(" "))
            }
        }
    }
}

/// Handle to `L_k(Q)` for a fixed quiver and scalar field; the factory for
/// [`Element`] values.
#[derive(Debug, Clone)]
pub struct LeavittAlgebra {
    quiver: Arc<Quiver>,
    field: FieldKind,
}

/// A finite formal combination of monomials with nonzero coefficients. The
/// zero element is the empty combination. Immutable; every operation
/// returns a fresh value.
#[derive(Debug, Clone)]
pub struct Element {
    quiver: Arc<Quiver>,
    field: FieldKind,
    terms: BTreeMap<Monomial, Coeff>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.terms == other.terms
            && (Arc::ptr_eq(&self.quiver, &other.quiver) || self.quiver == other.quiver)
    }
}
impl Eq for Element {}

impl LeavittAlgebra {
    pub fn new(quiver: Quiver, field: FieldKind) -> Self {
        LeavittAlgebra {
            quiver: Arc::new(quiver),
            field,
        }
    }

    /// `L_Q(Q)` over the rationals.
    pub fn rational(quiver: Quiver) -> Self {
        Self::new(quiver, FieldKind::Rational)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn zero(&self) -> Element {
        Element {
            quiver: self.quiver.clone(),
            field: self.field,
            terms: BTreeMap::new(),
        }
    }

    /// The vertex idempotent `v`.
    pub fn vertex(&self, v: impl Into<VertexId>) -> Result<Element, AlgebraError> {
        let v = v.into();
        self.quiver.check_vertex(&v)?;
        self.monomial(Path::trivial(v.clone()), Path::trivial(v))
    }

    /// The edge generator `e` as the monomial `(e, r(e))`.
    pub fn edge(&self, e: impl Into<EdgeId>) -> Result<Element, AlgebraError> {
        let e = e.into();
        let dst = self.quiver.edge(&e)?.dst.clone();
        self.monomial(Path::single(e), Path::trivial(dst))
    }

    /// The ghost generator `e*` as the monomial `(r(e), e)`.
    pub fn ghost(&self, e: impl Into<EdgeId>) -> Result<Element, AlgebraError> {
        let e = e.into();
        let dst = self.quiver.edge(&e)?.dst.clone();
        self.monomial(Path::trivial(dst), Path::single(e))
    }

    /// The path `p` as an element (ghost part trivial).
    pub fn path(&self, p: Path) -> Result<Element, AlgebraError> {
        let r = p.range(&self.quiver)?;
        self.monomial(p, Path::trivial(r))
    }

    /// The monomial `real . ghost*`. Parts with different ranges are
    /// rejected rather than stored: such a product is zero in the algebra
    /// and keeping the basis free of them makes representations canonical.
    pub fn monomial(&self, real: Path, ghost: Path) -> Result<Element, AlgebraError> {
        real.validate(&self.quiver)?;
        ghost.validate(&self.quiver)?;
        let r1 = real.range(&self.quiver)?;
        let r2 = ghost.range(&self.quiver)?;
        if r1 != r2 {
            return Err(AlgebraError::RangeMismatch {
                real: r1,
                ghost: r2,
            });
        }
        let mut terms = BTreeMap::new();
        terms.insert(Monomial { real, ghost }, self.field.one());
        Ok(Element {
            quiver: self.quiver.clone(),
            field: self.field,
            terms,
        })
    }

    /// Sum of the vertex idempotents of `keep`; the corner idempotent `e`
    /// with `e x e` supported on paths that start and end in `keep`.
    pub fn corner_idempotent(
        &self,
        keep: &BTreeSet<VertexId>,
    ) -> Result<Element, AlgebraError> {
        if keep.is_empty() {
            return Err(AlgebraError::EmptyCorner);
        }
        let mut acc = self.zero();
        for v in keep {
            acc = acc.add(&self.vertex(v.clone())?)?;
        }
        Ok(acc)
    }

    /// Rebuild an element from its JSON term list (the inverse of
    /// [`Element::to_json`]).
    pub fn element_from_json(&self, json: &str) -> Result<Element, AlgebraError> {
        let reprs: Vec<TermRepr> = serde_json::from_str(json)
            .map_err(|e| AlgebraError::BadFieldSpec(format!("bad element JSON: {e}")))?;
        let mut acc = self.zero();
        for t in reprs {
            let coeff = Coeff::parse(&self.field, &t.coeff)?;
            let mono = self.monomial(t.p, t.q)?;
            acc = acc.add(&mono.scale_coeff(&coeff))?;
        }
        Ok(acc)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    p: Path,
    q: Path,
    coeff: String,
}

impl Element {
    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub(crate) fn quiver_arc(&self) -> Arc<Quiver> {
        self.quiver.clone()
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Coeff> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn from_terms(
        quiver: Arc<Quiver>,
        field: FieldKind,
        terms: BTreeMap<Monomial, Coeff>,
    ) -> Element {
        Element {
            quiver,
            field,
            terms,
        }
    }

    fn compatible(&self, other: &Element) -> Result<(), AlgebraError> {
        if self.field != other.field {
            return Err(AlgebraError::FieldMismatch);
        }
        if !Arc::ptr_eq(&self.quiver, &other.quiver) && self.quiver != other.quiver {
            return Err(AlgebraError::QuiverMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.compatible(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&self.field, &mut terms, m.clone(), c.clone());
        }
        Ok(Element::from_terms(self.quiver.clone(), self.field, terms))
    }

    pub fn neg(&self) -> Element {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), self.field.neg(c)))
            .collect();
        Element::from_terms(self.quiver.clone(), self.field, terms)
    }

    pub fn sub(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.add(&other.neg())
    }

    /// Scale by a rational constant (embedded into the scalar field).
    pub fn scale(&self, r: &BigRational) -> Result<Element, AlgebraError> {
        Ok(self.scale_coeff(&self.field.from_rational(r)?))
    }

    pub(crate) fn scale_coeff(&self, c: &Coeff) -> Element {
        if self.field.is_zero(c) {
            return Element::from_terms(self.quiver.clone(), self.field, BTreeMap::new());
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, k)| (m.clone(), self.field.mul(k, c)))
            .collect();
        Element::from_terms(self.quiver.clone(), self.field, terms)
    }

    /// Bilinear product. Monomials multiply by the path-overlap rule: in
    /// `(p g*)(u w*)`, if `u = g z` the product is `(p z) w*`; if `g = u z`
    /// it is `p (w z)*`; otherwise the ghost/real interface is orthogonal
    /// and the product vanishes.
    pub fn mul(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.compatible(other)?;
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some(m) = mono_mul(&self.quiver, m1, m2)? {
                    add_term(&self.field, &mut terms, m, self.field.mul(c1, c2));
                }
            }
        }
        Ok(Element::from_terms(self.quiver.clone(), self.field, terms))
    }

    /// The star anti-automorphism: `(p q*)* = q p*`, coefficients fixed
    /// (the scalar fields here carry the trivial involution).
    pub fn star(&self) -> Element {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                (
                    Monomial {
                        real: m.ghost.clone(),
                        ghost: m.real.clone(),
                    },
                    c.clone(),
                )
            })
            .collect();
        Element::from_terms(self.quiver.clone(), self.field, terms)
    }

    /// Equality in `L_k(Q)`: the normal form of the difference vanishes.
    pub fn equivalent(&self, other: &Element) -> Result<bool, AlgebraError> {
        Ok(self.sub(other)?.normal_form().is_zero())
    }

    /// JSON term list: `[{"p": [...], "q": [...], "coeff": "3/2"}, ...]`,
    /// trivial paths as `{"vertex": "v"}`, in monomial order.
    pub fn to_json(&self) -> String {
        let reprs: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(m, c)| TermRepr {
                p: m.real.clone(),
                q: m.ghost.clone(),
                coeff: c.to_string(),
            })
            .collect();
        serde_json::to_string(&reprs).expect("element serialisation cannot fail")
    }
}

pub(crate) fn add_term(
    field: &FieldKind,
    terms: &mut BTreeMap<Monomial, Coeff>,
    m: Monomial,
    c: Coeff,
) {
    if field.is_zero(&c) {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let sum = field.add(e.get(), &c);
            if field.is_zero(&sum) {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

fn mono_mul(
    q: &Quiver,
    m1: &Monomial,
    m2: &Monomial,
) -> Result<Option<Monomial>, crate::quiver::QuiverError> {
    if let Some(z) = m1.ghost.strip_prefix(&m2.real, q)? {
        let real = m1.real.concat(&z, q)?;
        Ok(Some(Monomial {
            real,
            ghost: m2.ghost.clone(),
        }))
    } else if let Some(z) = m2.real.strip_prefix(&m1.ghost, q)? {
        let ghost = m2.ghost.concat(&z, q)?;
        Ok(Some(Monomial {
            real: m1.real.clone(),
            ghost,
        }))
    } else {
        Ok(None)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let field = &self.field;
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = field.is_negative(c);
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mag = field.abs(c);
            if !field.is_one(&mag) {
                write!(f, "{mag} ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}
