use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::certificate::IdealTerm;
use super::{jacobian_generators, Path, Potential};
use crate::error::{Error, Result};
use crate::quiver::{ArrowId, Quiver, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleOptions {
    /// Longest path allowed in any ideal element of the search.
    pub length_cap: usize,
    /// Largest number of rotation classes in the linear system.
    pub basis_cap: usize,
}

impl OracleOptions {
    pub const DEFAULT_BASIS_CAP: usize = 200_000;

    pub fn with_length(length_cap: usize) -> Self {
        Self {
            length_cap,
            basis_cap: Self::DEFAULT_BASIS_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// The cycle is cyclically equivalent to the sum of these terms.
    Member(Vec<IdealTerm>),
    /// Proven absent: every generator is a single path and no rotation of
    /// the cycle contains one.
    NotMemberExact,
    /// No combination of ideal elements up to the length cap was found.
    NotCertifiedWithinCap,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

/// Decides whether the cycle `c` is cyclically equivalent to an element of
/// the Jacobian ideal of `s`, searching elements `p·∂_a(S)·q` of bounded length.
///
/// Modulo rotations `p·g·q ≡ g·(q·p)`, so it suffices to range over
/// `∂_a(S)·r` with `r` a path from `s(a)` back to `t(a)`.
pub fn brute_force_membership(
    q: &Quiver,
    c: &[ArrowId],
    s: &Potential,
    opts: &OracleOptions,
) -> Result<Membership> {
    let target = Path::new(q, c.to_vec())?;
    if !target.is_cycle(q) {
        return Err(Error::NotComposable(c.to_vec()));
    }
    let gens = jacobian_generators(s);
    if gens.iter().all(|(_, g)| g.num_terms() == 1) {
        return Ok(monomial_membership(c, &gens));
    }

    let mut out: HashMap<VertexId, Vec<(ArrowId, VertexId)>> = HashMap::new();
    for a in q.arrows() {
        out.entry(a.src).or_default().push((a.id, a.tgt));
    }
    let mut rows: HashMap<Path, usize> = HashMap::new();
    let mut columns: Vec<BTreeMap<usize, BigRational>> = Vec::new();
    let mut labels: Vec<(ArrowId, Vec<ArrowId>)> = Vec::new();
    let target_class = target.necklace();
    rows.insert(target_class, 0);
    for (a, g) in &gens {
        let arrow = q.arrow(*a).unwrap();
        let budget = opts.length_cap.saturating_sub(g.max_len());
        for r in paths_between(q, &out, arrow.src, arrow.tgt, budget) {
            let mut col: BTreeMap<usize, BigRational> = BTreeMap::new();
            for (p, k) in g.terms() {
                let mut v = p.arrows().to_vec();
                v.extend_from_slice(&r);
                let class = Path::raw(v).necklace();
                let n = rows.len();
                let row = *rows.entry(class).or_insert(n);
                *col.entry(row).or_insert_with(BigRational::zero) += k;
            }
            col.retain(|_, v| !v.is_zero());
            if !col.is_empty() {
                columns.push(col);
                labels.push((*a, r));
            }
        }
    }

    // Only the columns connected to the target matter.
    let mut by_row: HashMap<usize, Vec<usize>> = HashMap::new();
    for (j, col) in columns.iter().enumerate() {
        for &r in col.keys() {
            by_row.entry(r).or_default().push(j);
        }
    }
    let mut seen_rows: BTreeSet<usize> = [0].into_iter().collect();
    let mut seen_cols: BTreeSet<usize> = BTreeSet::new();
    let mut queue: VecDeque<usize> = [0].into_iter().collect();
    while let Some(r) = queue.pop_front() {
        for &j in by_row.get(&r).into_iter().flatten() {
            if seen_cols.insert(j) {
                for &r2 in columns[j].keys() {
                    if seen_rows.insert(r2) {
                        if seen_rows.len() > opts.basis_cap {
                            return Err(Error::BasisCap {
                                dimension: seen_rows.len(),
                                cap: opts.basis_cap,
                            });
                        }
                        queue.push_back(r2);
                    }
                }
            }
        }
    }
    let picked: Vec<usize> = seen_cols.into_iter().collect();
    let sub: Vec<BTreeMap<usize, BigRational>> = picked.iter().map(|&j| columns[j].clone()).collect();
    Ok(match solve_span(&sub, 0) {
        Some(lambda) => Membership::Member(
            lambda
                .into_iter()
                .map(|(k, l)| {
                    let (a, r) = &labels[picked[k]];
                    IdealTerm::new(l, vec![], *a, r.clone())
                })
                .collect(),
        ),
        None => Membership::NotCertifiedWithinCap,
    })
}

fn monomial_membership(c: &[ArrowId], gens: &[(ArrowId, super::PathElement)]) -> Membership {
    let n = c.len();
    for i in 0..n {
        let rot: Vec<ArrowId> = (0..n).map(|j| c[(i + j) % n]).collect();
        for (a, g) in gens {
            let (p, k) = g.terms().next().unwrap();
            let w = p.arrows();
            if w.len() > n {
                continue;
            }
            if let Some(at) = (0..=n - w.len()).find(|&s| rot[s..s + w.len()] == *w) {
                return Membership::Member(vec![IdealTerm::new(
                    k.recip(),
                    rot[..at].to_vec(),
                    *a,
                    rot[at + w.len()..].to_vec(),
                )]);
            }
        }
    }
    Membership::NotMemberExact
}

/// Nonempty paths from `from` to `to` with at most `max_len` arrows.
fn paths_between(
    q: &Quiver,
    out: &HashMap<VertexId, Vec<(ArrowId, VertexId)>>,
    from: VertexId,
    to: VertexId,
    max_len: usize,
) -> Vec<Vec<ArrowId>> {
    // Backward distances to `to` prune hopeless branches.
    let mut into: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
    for a in q.arrows() {
        into.entry(a.tgt).or_default().push(a.src);
    }
    let mut dist: HashMap<VertexId, usize> = HashMap::new();
    dist.insert(to, 0);
    let mut queue: VecDeque<VertexId> = [to].into_iter().collect();
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        for &u in into.get(&v).into_iter().flatten() {
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(u) {
                e.insert(d + 1);
                queue.push_back(u);
            }
        }
    }
    let mut found = Vec::new();
    let mut stack = Vec::new();
    fn walk(
        v: VertexId,
        to: VertexId,
        left: usize,
        out: &HashMap<VertexId, Vec<(ArrowId, VertexId)>>,
        dist: &HashMap<VertexId, usize>,
        stack: &mut Vec<ArrowId>,
        found: &mut Vec<Vec<ArrowId>>,
    ) {
        if v == to && !stack.is_empty() {
            found.push(stack.clone());
        }
        if left == 0 {
            return;
        }
        for &(a, w) in out.get(&v).into_iter().flatten() {
            if dist.get(&w).is_some_and(|&d| d < left) {
                stack.push(a);
                walk(w, to, left - 1, out, dist, stack, found);
                stack.pop();
            }
        }
    }
    walk(from, to, max_len, out, &dist, &mut stack, &mut found);
    found
}

/// Exact coefficients `λ` with `Σ λ_j columns[j] = e_target`, if any.
pub(crate) fn solve_span(
    columns: &[BTreeMap<usize, BigRational>],
    target: usize,
) -> Option<BTreeMap<usize, BigRational>> {
    struct Row {
        pivot: usize,
        vec: BTreeMap<usize, BigRational>,
        combo: BTreeMap<usize, BigRational>,
    }
    fn axpy(y: &mut BTreeMap<usize, BigRational>, a: &BigRational, x: &BTreeMap<usize, BigRational>) {
        for (k, v) in x {
            let slot = y.entry(*k).or_insert_with(BigRational::zero);
            *slot += a * v;
            if slot.is_zero() {
                y.remove(k);
            }
        }
    }
    let mut basis: Vec<Row> = Vec::new();
    let reduce = |basis: &[Row],
                  vec: &mut BTreeMap<usize, BigRational>,
                  combo: &mut BTreeMap<usize, BigRational>| {
        for b in basis {
            if let Some(v) = vec.get(&b.pivot) {
                let mu = -(v / &b.vec[&b.pivot]);
                axpy(vec, &mu, &b.vec);
                axpy(combo, &mu, &b.combo);
            }
        }
    };
    for (j, col) in columns.iter().enumerate() {
        let mut vec = col.clone();
        let mut combo: BTreeMap<usize, BigRational> = [(j, BigRational::from_integer(1.into()))].into_iter().collect();
        reduce(&basis, &mut vec, &mut combo);
        if let Some(&pivot) = vec.keys().next() {
            basis.push(Row { pivot, vec, combo });
        }
    }
    let mut vec: BTreeMap<usize, BigRational> =
        [(target, BigRational::from_integer(1.into()))].into_iter().collect();
    let mut combo = BTreeMap::new();
    reduce(&basis, &mut vec, &mut combo);
    // vec = e_t + Σ combo·columns, so e_t = −Σ combo·columns when vec vanishes.
    vec.is_empty().then(|| combo.into_iter().map(|(k, v)| (k, -v)).collect())
}
