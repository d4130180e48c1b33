use super::{AlgebraError, Element};
use crate::moves::CollapseResult;
use crate::quiver::{EdgeId, Path, Quiver};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// A rational grading with common denominator `n`: each edge carries a
/// weight `numerator / n`, ghost edges the negated weight, vertices weight
/// zero. The degree of a monomial `p q*` is the weight sum over `p` minus
/// the weight sum over `q`, an element of `(1/n)Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grading {
    denominator: u32,
    /// Weight numerators, one per edge of the quiver.
    weights: BTreeMap<EdgeId, i64>,
}

impl Grading {
    /// The usual integer grading: every edge has weight 1.
    pub fn standard(q: &Quiver) -> Grading {
        Grading {
            denominator: 1,
            weights: q.edges().iter().map(|e| (e.id.clone(), 1)).collect(),
        }
    }

    /// A grading from explicit numerators; must cover exactly the edges of
    /// the quiver.
    pub fn new(
        q: &Quiver,
        denominator: u32,
        weights: BTreeMap<EdgeId, i64>,
    ) -> Result<Grading, AlgebraError> {
        if denominator == 0 {
            return Err(AlgebraError::GradingDenominatorZero);
        }
        for e in q.edges() {
            if !weights.contains_key(&e.id) {
                return Err(AlgebraError::GradingMismatch(e.id.clone()));
            }
        }
        for e in weights.keys() {
            q.edge(e)?;
        }
        Ok(Grading {
            denominator,
            weights,
        })
    }

    pub fn denominator(&self) -> u32 {
        self.denominator
    }

    pub fn weights(&self) -> &BTreeMap<EdgeId, i64> {
        &self.weights
    }

    /// Weight of one edge as an exact rational.
    pub fn weight(&self, e: &EdgeId) -> Result<BigRational, AlgebraError> {
        let numerator = self
            .weights
            .get(e)
            .ok_or_else(|| AlgebraError::GradingMismatch(e.clone()))?;
        Ok(BigRational::new(
            BigInt::from(*numerator),
            BigInt::from(self.denominator),
        ))
    }

    /// Total weight of a path (zero for trivial paths).
    pub fn path_weight(&self, p: &Path) -> Result<BigRational, AlgebraError> {
        let mut acc = BigRational::from(BigInt::from(0));
        for e in p.edge_ids() {
            acc += self.weight(e)?;
        }
        Ok(acc)
    }
}

impl Element {
    /// The common degree of a homogeneous element under the grading, after
    /// normal-forming. Returns `None` for inhomogeneous elements and for
    /// zero (which is homogeneous of every degree).
    pub fn degree(&self, grading: &Grading) -> Result<Option<BigRational>, AlgebraError> {
        let nf = self.normal_form();
        let mut common: Option<BigRational> = None;
        for m in nf.terms().keys() {
            let d = grading.path_weight(&m.real)? - grading.path_weight(&m.ghost)?;
            match &common {
                None => common = Some(d),
                Some(c) if *c == d => {}
                Some(_) => return Ok(None),
            }
        }
        Ok(common)
    }
}

/// Solve for the rational grading attached to a collapse: weights lie in
/// `(1/n)Z` with `n = n_max`, every origin path has total weight exactly 1,
/// edges on no origin path get weight 1, and all weights are positive.
/// Among the integer solutions the lexicographically least weight vector
/// (edges in id order) is returned. Infeasibility is reported together with
/// the unsatisfiable constraint set.
pub fn solve_collapse_grading(
    q: &Quiver,
    c: &CollapseResult,
) -> Result<Grading, AlgebraError> {
    let n = c.n_max;
    let mut on_path: BTreeSet<EdgeId> = BTreeSet::new();
    for path in c.edge_origin.values() {
        path.validate(q)?;
        on_path.extend(path.edge_ids().iter().cloned());
    }
    let vars: Vec<EdgeId> = on_path.iter().cloned().collect();
    let index: BTreeMap<&EdgeId, usize> = vars.iter().enumerate().map(|(i, e)| (e, i)).collect();
    // Each origin path visits its edges once (interiors avoid the kept set
    // and never repeat), so every constraint is a plain sum over variables.
    let constraints: Vec<Vec<usize>> = c
        .edge_origin
        .values()
        .map(|p| p.edge_ids().iter().map(|e| index[e]).collect())
        .collect();

    let mut assignment: Vec<i64> = vec![0; vars.len()];
    if !assign(&constraints, n as i64, &mut assignment, 0) {
        return Err(AlgebraError::GradingInfeasible {
            denominator: n,
            constraints: c
                .edge_origin
                .values()
                .map(|p| format!("weights of `{p}` must sum to 1"))
                .collect(),
        });
    }

    let mut weights: BTreeMap<EdgeId, i64> = BTreeMap::new();
    for (i, e) in vars.iter().enumerate() {
        weights.insert(e.clone(), assignment[i]);
    }
    for e in q.edges() {
        weights.entry(e.id.clone()).or_insert(n as i64);
    }
    Grading::new(q, n, weights)
}

/// Depth-first search for the lexicographically least positive integer
/// assignment with every constraint summing to `n`. Values are tried in
/// ascending order, so the first full assignment is the least one.
fn assign(constraints: &[Vec<usize>], n: i64, values: &mut Vec<i64>, next: usize) -> bool {
    if next == values.len() {
        return constraints
            .iter()
            .all(|c| c.iter().map(|&i| values[i]).sum::<i64>() == n);
    }
    'candidates: for v in 1..=n {
        values[next] = v;
        for c in constraints {
            let mut sum = 0;
            let mut unassigned = 0i64;
            for &i in c {
                if i <= next {
                    sum += values[i];
                } else {
                    unassigned += 1;
                }
            }
            // Remaining variables contribute at least 1 and at most n each.
            if sum + unassigned > n || sum + unassigned * n < n {
                continue 'candidates;
            }
        }
        if assign(constraints, n, values, next + 1) {
            return true;
        }
    }
    values[next] = 0;
    false
}
