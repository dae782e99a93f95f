use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::certificate::{certify_faces, Certificate, FaceCertificates, IdealTerm, Step, StepKind};
use super::oracle::{brute_force_membership, Membership, OracleOptions};
use super::{Path, Potential};
use crate::cylinder::{CylinderLayout, Face};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::quiver::{ArrowId, Quiver, VertexId};

/// All simple cycles, each starting at its minimal vertex, in a fixed order.
/// Fails if a cycle longer than `cap` exists.
pub fn simple_cycles(q: &Quiver, cap: usize) -> Result<Vec<Vec<ArrowId>>> {
    let mut out_arrows: BTreeMap<VertexId, Vec<(ArrowId, VertexId)>> = BTreeMap::new();
    for a in q.arrows() {
        out_arrows.entry(a.src).or_default().push((a.id, a.tgt));
    }
    struct Search<'a> {
        out: &'a BTreeMap<VertexId, Vec<(ArrowId, VertexId)>>,
        start: VertexId,
        on_path: BTreeSet<VertexId>,
        stack: Vec<ArrowId>,
        found: Vec<Vec<ArrowId>>,
        cap: usize,
    }
    impl Search<'_> {
        fn go(&mut self, v: VertexId) -> Result<()> {
            for &(a, w) in self.out.get(&v).into_iter().flatten() {
                if w == self.start {
                    self.stack.push(a);
                    if self.stack.len() > self.cap {
                        return Err(Error::CycleCap {
                            found: self.stack.len(),
                            cap: self.cap,
                        });
                    }
                    self.found.push(self.stack.clone());
                    self.stack.pop();
                } else if w > self.start && !self.on_path.contains(&w) {
                    self.stack.push(a);
                    self.on_path.insert(w);
                    self.go(w)?;
                    self.on_path.remove(&w);
                    self.stack.pop();
                }
            }
            Ok(())
        }
    }
    let mut found = Vec::new();
    for v in q.vertex_ids() {
        let mut s = Search {
            out: &out_arrows,
            start: v,
            on_path: BTreeSet::new(),
            stack: Vec::new(),
            found: Vec::new(),
            cap,
        };
        s.go(v)?;
        found.extend(s.found);
    }
    Ok(found)
}

/// One face-split move: `C ≡ coefficient·∂_edge(S)·right + factor·residual`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub edge: ArrowId,
    /// Face whose other arrows run along the cycle.
    pub face: Vec<ArrowId>,
    /// The face on the other side of `edge`, inside the cycle.
    pub partner: Vec<ArrowId>,
    pub right: Vec<ArrowId>,
    pub coefficient: BigRational,
    pub residual: Vec<ArrowId>,
    pub factor: BigRational,
}

type Pt = (i64, i64);

/// Winding number of a closed polygon around `p`, which must not lie on it.
fn winding(poly: &[Pt], p: Pt) -> i64 {
    let left = |a: Pt, b: Pt| (b.0 - a.0) * (p.1 - a.1) - (p.0 - a.0) * (b.1 - a.1);
    let mut w = 0;
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        if a.1 <= p.1 {
            if b.1 > p.1 && left(a, b) > 0 {
                w += 1;
            }
        } else if b.1 <= p.1 && left(a, b) < 0 {
            w -= 1;
        }
    }
    w
}

struct Geometry<'a> {
    q: &'a Quiver,
    layout: &'a CylinderLayout,
    faces: &'a [Face],
    coeff: BTreeMap<Path, BigRational>,
    occurs: BTreeMap<ArrowId, Vec<Path>>,
}

impl<'a> Geometry<'a> {
    fn new(q: &'a Quiver, layout: &'a CylinderLayout, faces: &'a [Face], s: &Potential) -> Self {
        let coeff: BTreeMap<Path, BigRational> = s.element().necklaces();
        let mut occurs: BTreeMap<ArrowId, Vec<Path>> = BTreeMap::new();
        for k in coeff.keys() {
            for &a in k.arrows() {
                occurs.entry(a).or_default().push(k.clone());
            }
        }
        Self {
            q,
            layout,
            faces,
            coeff,
            occurs,
        }
    }

    fn src(&self, a: ArrowId) -> VertexId {
        self.q.arrow(a).unwrap().src
    }

    fn sheet_of(&self, cycle: &[ArrowId]) -> Option<usize> {
        let mut common: Option<BTreeSet<usize>> = None;
        for &a in cycle {
            let s: BTreeSet<usize> = self.layout.arrow_sheets(self.q.arrow(a).unwrap()).into_iter().collect();
            common = Some(match common {
                None => s,
                Some(c) => c.intersection(&s).copied().collect(),
            });
        }
        common.and_then(|c| c.first().copied())
    }

    fn is_simple(&self, cycle: &[ArrowId]) -> bool {
        let vs: BTreeSet<VertexId> = cycle.iter().map(|&a| self.src(a)).collect();
        vs.len() == cycle.len()
    }

    fn polygon(&self, sheet: usize, cycle: &[ArrowId]) -> Vec<Pt> {
        cycle
            .iter()
            .map(|&a| self.layout.sheet_coords(sheet, self.src(a)).unwrap())
            .collect()
    }

    /// Winding number of the walk around each face of `sheet` it winds around.
    fn windings(&self, sheet: usize, walk: &[ArrowId]) -> Vec<(usize, i64)> {
        let poly = self.polygon(sheet, walk);
        (0..self.faces.len())
            .filter(|&i| self.faces[i].sheet == sheet)
            .filter_map(|i| {
                let f = &self.faces[i];
                let n = f.vertices.len() as i64;
                let pts: Vec<Pt> = f
                    .vertices
                    .iter()
                    .map(|&v| self.layout.sheet_coords(sheet, v).unwrap())
                    .collect();
                // Face centroid, with everything scaled by the vertex count.
                let c = (pts.iter().map(|p| p.0).sum(), pts.iter().map(|p| p.1).sum());
                let scaled: Vec<Pt> = poly.iter().map(|p| (p.0 * n, p.1 * n)).collect();
                let w = winding(&scaled, c);
                (w != 0).then_some((i, w))
            })
            .collect()
    }

    /// Faces of `sheet` inside a simple cycle.
    fn enclosed(&self, sheet: usize, cycle: &[ArrowId]) -> Vec<usize> {
        self.windings(sheet, cycle).into_iter().map(|(i, _)| i).collect()
    }

    /// Faces counted with multiplicity `|winding|`.
    fn weight(&self, sheet: usize, walk: &[ArrowId]) -> i64 {
        self.windings(sheet, walk).iter().map(|(_, w)| w.abs()).sum()
    }

    fn split(&self, cycle: &[ArrowId]) -> Option<Split> {
        let sheet = self.sheet_of(cycle)?;
        if !self.is_simple(cycle) {
            return None;
        }
        let on_cycle: BTreeSet<ArrowId> = cycle.iter().copied().collect();
        let k = self.weight(sheet, cycle);
        let mut candidates: Vec<(i64, ArrowId, usize)> = Vec::new();
        for fi in self.enclosed(sheet, cycle) {
            let f = &self.faces[fi];
            if !f.is_oriented() {
                continue;
            }
            for &e in &f.arrows {
                if on_cycle.contains(&e) {
                    continue;
                }
                let a = self.q.arrow(e).unwrap();
                let x = [a.src, a.tgt]
                    .iter()
                    .map(|&v| self.layout.sheet_coords(sheet, v).unwrap().0)
                    .max()
                    .unwrap();
                candidates.push((x, e, fi));
            }
        }
        candidates.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let n = cycle.len();
        let mut fallback = None;
        for (_, e, fi) in candidates {
            let f = &self.faces[fi];
            let at = f.arrows.iter().position(|&x| x == e).unwrap();
            let m = f.len();
            let rest: Vec<ArrowId> = (1..m).map(|j| f.arrows[(at + j) % m]).collect();
            let Some(i) = cycle.iter().position(|&x| x == rest[0]) else {
                continue;
            };
            if (0..rest.len()).any(|j| cycle[(i + j) % n] != rest[j]) {
                continue;
            }
            let right: Vec<ArrowId> = (rest.len()..n).map(|j| cycle[(i + j) % n]).collect();
            let occ = &self.occurs[&e];
            let fk = Path::raw(f.arrows.clone()).necklace();
            if occ.len() != 2 || !occ.contains(&fk) {
                continue;
            }
            let partner = if occ[0] == fk { &occ[1] } else { &occ[0] };
            if *partner == fk {
                continue;
            }
            let pa = partner.arrows();
            let pat = pa.iter().position(|&x| x == e).unwrap();
            let rest2: Vec<ArrowId> = (1..pa.len()).map(|j| pa[(pat + j) % pa.len()]).collect();
            let mut residual = rest2;
            residual.extend_from_slice(&right);
            if self.sheet_of(&residual) != Some(sheet) || self.weight(sheet, &residual) >= k {
                continue;
            }
            let (c_f, c_p) = (&self.coeff[&fk], &self.coeff[partner]);
            let simple = self.is_simple(&residual);
            let split = Split {
                edge: e,
                face: f.arrows.clone(),
                partner: pa.to_vec(),
                right,
                coefficient: c_f.recip(),
                residual,
                factor: -(c_p / c_f),
            };
            if simple {
                return Some(split);
            }
            fallback.get_or_insert(split);
        }
        fallback
    }
}

/// An interior arrow splitting a simple cycle drawn on one sheet into a face
/// and a closed walk around fewer faces. Splits leaving a simple cycle are
/// preferred; `None` if the cycle spans several sheets or no arrow works.
pub fn find_differentiable_edge(
    q: &Quiver,
    cycle: &[ArrowId],
    faces: &[Face],
    layout: &CylinderLayout,
    s: &Potential,
) -> Option<Split> {
    Geometry::new(q, layout, faces, s).split(cycle)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    NotMember,
    NotCertifiedWithinCap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleFailure {
    pub cycle: Vec<ArrowId>,
    pub reason: FailureReason,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub rigid: bool,
    pub cycles_total: usize,
    pub certified: usize,
    /// Certified cycles whose certificate uses a linear-algebra step.
    pub oracle_only: usize,
    /// Cycles not drawable on a single sheet.
    pub multi_sheet: usize,
    pub failures: Vec<CycleFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigidityReport {
    pub verdict: Verdict,
    pub certificates: Vec<Certificate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RigidityOptions {
    /// Longest simple cycle allowed; defaults to the number of vertices.
    pub length_cap: Option<usize>,
    /// Length cap handed to the oracle; defaults to the cycle length plus
    /// twice the longest term of `S`.
    pub oracle_length: Option<usize>,
    pub basis_cap: usize,
    pub exec: Execution,
}

impl Default for RigidityOptions {
    fn default() -> Self {
        Self {
            length_cap: None,
            oracle_length: None,
            basis_cap: OracleOptions::DEFAULT_BASIS_CAP,
            exec: Execution::default(),
        }
    }
}

enum Outcome {
    Certified(Certificate),
    Failed(FailureReason),
}

/// Decides rigidity of `s` by certifying every simple cycle of `q`.
///
/// With a layout, faces are certified from the boundary inwards and single-sheet
/// cycles are reduced face by face; everything else goes to the linear-algebra
/// oracle. Every certificate is replayed before it is reported.
pub fn rigidity_check(
    q: &Quiver,
    layout: Option<&CylinderLayout>,
    faces: &[Face],
    s: &Potential,
    opts: &RigidityOptions,
) -> Result<RigidityReport> {
    let cap = opts.length_cap.unwrap_or(q.vertices().len());
    let cycles = simple_cycles(q, cap)?;
    let face_certs = certify_faces(q, s)?;
    let geometry = layout.map(|l| Geometry::new(q, l, faces, s));
    let rewriter = Rewriter::new(s);
    let longest = s.terms().map(|(p, _)| p.len()).max().unwrap_or(0);
    let oracle = |c: &[ArrowId]| {
        let len = opts.oracle_length.unwrap_or(c.len() + 2 * longest);
        let o = OracleOptions {
            length_cap: len,
            basis_cap: opts.basis_cap,
        };
        brute_force_membership(q, c, s, &o)
    };
    let certify = |c: &Vec<ArrowId>| -> Result<(Outcome, bool)> {
        let multi = geometry.as_ref().is_some_and(|g| g.sheet_of(c).is_none());
        let steps = match structural(c, &face_certs, &rewriter, geometry.as_ref(), longest) {
            Some(steps) => steps,
            None => {
                log::debug!("no structural certificate for cycle {c:?}; trying the membership oracle");
                match oracle(c)? {
                    Membership::Member(w) => vec![Step {
                        kind: StepKind::Oracle,
                        edge: None,
                        face: None,
                        witness: w,
                    }],
                    Membership::NotMemberExact => return Ok((Outcome::Failed(FailureReason::NotMember), multi)),
                    Membership::NotCertifiedWithinCap => {
                        return Ok((Outcome::Failed(FailureReason::NotCertifiedWithinCap), multi))
                    }
                }
            }
        };
        let cert = Certificate::new(c.clone(), steps).verify(q, s)?;
        Ok((Outcome::Certified(cert), multi))
    };
    log::info!("certifying {} simple cycles", cycles.len());
    let results = opts.exec.map(&cycles, certify);
    let mut certificates = Vec::new();
    let mut failures = Vec::new();
    let mut multi_sheet = 0;
    for (c, r) in cycles.iter().zip(results) {
        let (outcome, multi) = r?;
        multi_sheet += multi as usize;
        match outcome {
            Outcome::Certified(cert) => certificates.push(cert),
            Outcome::Failed(reason) => failures.push(CycleFailure {
                cycle: c.clone(),
                reason,
            }),
        }
    }
    let oracle_only = certificates
        .iter()
        .filter(|c| c.steps.iter().any(|s| s.kind == StepKind::Oracle))
        .count();
    Ok(RigidityReport {
        verdict: Verdict {
            rigid: failures.is_empty(),
            cycles_total: cycles.len(),
            certified: certificates.len(),
            oracle_only,
            multi_sheet,
            failures,
        },
        certificates,
    })
}

/// One rewriting move read off `∂_e(S)`: a rotation of the walk that starts
/// with `rest` (the term `term` after `e`) is replaced by `replacement` times
/// `factor`, or removed outright when `e` occurs in no other term.
struct Move {
    edge: ArrowId,
    term: Vec<ArrowId>,
    rest: Vec<ArrowId>,
    inverse: BigRational,
    replacement: Option<(Vec<ArrowId>, BigRational)>,
}

struct Rewriter {
    by_first: BTreeMap<ArrowId, Vec<Move>>,
}

impl Rewriter {
    fn new(s: &Potential) -> Self {
        let classes = s.element().necklaces();
        let mut occurs: BTreeMap<ArrowId, Vec<(&Path, usize)>> = BTreeMap::new();
        for k in classes.keys() {
            for (i, &a) in k.arrows().iter().enumerate() {
                occurs.entry(a).or_default().push((k, i));
            }
        }
        let rest = |k: &Path, i: usize| -> Vec<ArrowId> {
            let n = k.len();
            (1..n).map(|j| k.arrows()[(i + j) % n]).collect()
        };
        let mut by_first: BTreeMap<ArrowId, Vec<Move>> = BTreeMap::new();
        for (&e, occ) in &occurs {
            let moves: Vec<Move> = match occ.as_slice() {
                [(k, i)] => vec![Move {
                    edge: e,
                    term: k.rotate(*i).arrows().to_vec(),
                    rest: rest(k, *i),
                    inverse: classes[*k].recip(),
                    replacement: None,
                }],
                [(k1, i1), (k2, i2)] if k1 != k2 => {
                    let (c1, c2) = (&classes[*k1], &classes[*k2]);
                    vec![
                        Move {
                            edge: e,
                            term: k1.rotate(*i1).arrows().to_vec(),
                            rest: rest(k1, *i1),
                            inverse: c1.recip(),
                            replacement: Some((rest(k2, *i2), -(c2 / c1))),
                        },
                        Move {
                            edge: e,
                            term: k2.rotate(*i2).arrows().to_vec(),
                            rest: rest(k2, *i2),
                            inverse: c2.recip(),
                            replacement: Some((rest(k1, *i1), -(c1 / c2))),
                        },
                    ]
                }
                _ => Vec::new(),
            };
            for m in moves {
                if let Some(&first) = m.rest.first() {
                    by_first.entry(first).or_default().push(m);
                }
            }
        }
        Self { by_first }
    }

    /// Moves applicable to some rotation of `walk`, with the remainder `v`
    /// such that the rotation equals `rest · v`.
    fn moves<'a>(&'a self, walk: &[ArrowId]) -> Vec<(&'a Move, Vec<ArrowId>)> {
        let n = walk.len();
        let mut out = Vec::new();
        for i in 0..n {
            for m in self.by_first.get(&walk[i]).into_iter().flatten() {
                let len = m.rest.len();
                if len <= n && (0..len).all(|j| walk[(i + j) % n] == m.rest[j]) {
                    let v: Vec<ArrowId> = (len..n).map(|j| walk[(i + j) % n]).collect();
                    out.push((m, v));
                }
            }
        }
        out
    }

    fn kill(&self, walk: &[ArrowId], factor: &BigRational) -> Option<Step> {
        self.moves(walk)
            .into_iter()
            .find(|(m, _)| m.replacement.is_none())
            .map(|(m, v)| Step {
                kind: StepKind::Boundary,
                edge: Some(m.edge),
                face: Some(m.term.clone()),
                witness: vec![IdealTerm::new(factor * &m.inverse, vec![], m.edge, v)],
            })
    }
}

fn scaled_steps(steps: &[Step], factor: &BigRational) -> Vec<Step> {
    steps
        .iter()
        .map(|st| Step {
            witness: st
                .witness
                .iter()
                .map(|t| IdealTerm::new(&t.coefficient * factor, t.left.clone(), t.arrow, t.right.clone()))
                .collect(),
            ..st.clone()
        })
        .collect()
}

/// Ends a chain at `cur` if it is a face or contains a removable path.
fn finish(cur: &[ArrowId], factor: &BigRational, face_certs: &FaceCertificates, rw: &Rewriter) -> Option<Vec<Step>> {
    if let Some(cert) = face_certs.get(cur) {
        return Some(scaled_steps(&cert.steps, factor));
    }
    rw.kill(cur, factor).map(|s| vec![s])
}

/// The face-split reduction on simple cycles of one sheet.
fn split_chain(c: &[ArrowId], face_certs: &FaceCertificates, rw: &Rewriter, g: &Geometry) -> Option<Vec<Step>> {
    let mut steps = Vec::new();
    let mut factor = BigRational::one();
    let mut cur = c.to_vec();
    loop {
        if let Some(cert) = face_certs.get(&cur) {
            steps.extend(scaled_steps(&cert.steps, &factor));
            return Some(steps);
        }
        let split = if g.is_simple(&cur) { g.split(&cur) } else { None };
        let Some(split) = split else {
            steps.push(rw.kill(&cur, &factor)?);
            return Some(steps);
        };
        steps.push(Step {
            kind: StepKind::Split,
            edge: Some(split.edge),
            face: Some(split.face.clone()),
            witness: vec![IdealTerm::new(&factor * &split.coefficient, vec![], split.edge, split.right.clone())],
        });
        factor *= &split.factor;
        if factor.is_zero() {
            return Some(steps);
        }
        cur = split.residual;
    }
}

/// Breadth-first search over closed walks reachable by the two-term relations,
/// for cycles the geometric reduction does not handle.
fn rewrite_search(
    c: &[ArrowId],
    face_certs: &FaceCertificates,
    rw: &Rewriter,
    max_len: usize,
    max_states: usize,
) -> Option<Vec<Step>> {
    let mut seen: BTreeSet<Path> = BTreeSet::new();
    let mut queue: std::collections::VecDeque<(Vec<ArrowId>, BigRational, Vec<Step>)> =
        [(c.to_vec(), BigRational::one(), Vec::new())].into_iter().collect();
    seen.insert(Path::raw(c.to_vec()).necklace());
    while let Some((walk, factor, steps)) = queue.pop_front() {
        if let Some(end) = finish(&walk, &factor, face_certs, rw) {
            let mut steps = steps;
            steps.extend(end);
            return Some(steps);
        }
        for (m, v) in rw.moves(&walk) {
            let Some((replacement, mult)) = &m.replacement else {
                continue;
            };
            let mut next = replacement.clone();
            next.extend_from_slice(&v);
            if next.len() > max_len || !seen.insert(Path::raw(next.clone()).necklace()) {
                continue;
            }
            if seen.len() > max_states {
                return None;
            }
            let mut st = steps.clone();
            st.push(Step {
                kind: StepKind::Split,
                edge: Some(m.edge),
                face: Some(m.term.clone()),
                witness: vec![IdealTerm::new(&factor * &m.inverse, vec![], m.edge, v)],
            });
            queue.push_back((next, &factor * mult, st));
        }
    }
    None
}

/// Walk budget for [`rewrite_search`].
const REWRITE_STATES: usize = 4096;

/// Face certificate, split chain, or rewriting chain; `None` if all fail.
fn structural(
    c: &[ArrowId],
    face_certs: &FaceCertificates,
    rw: &Rewriter,
    geometry: Option<&Geometry>,
    longest: usize,
) -> Option<Vec<Step>> {
    if let Some(steps) = geometry.and_then(|g| split_chain(c, face_certs, rw, g)) {
        return Some(steps);
    }
    rewrite_search(c, face_certs, rw, c.len() + longest, REWRITE_STATES)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::superpotential;
    use super::*;
    use crate::bfz::{build_bfz_quiver_with, FrozenArrows, Interleaving, ShuffledWord};
    use crate::cartan::{GeneralizedCartanMatrix, WeylWord};
    use crate::cylinder::{branch_decompose, enumerate_faces, layout};

    fn necklace(c: &[ArrowId]) -> Path {
        Path::raw(c.to_vec()).necklace()
    }

    #[test]
    fn two_triangle_cycles() {
        let q = two_triangles();
        let cycles = simple_cycles(&q, 4).unwrap();
        assert_eq!(cycles, vec![vec![0, 1, 2], vec![3, 4, 2]]);
        assert_eq!(simple_cycles(&q, 2), Err(Error::CycleCap { found: 3, cap: 2 }));
    }

    #[test]
    fn example_not_rigid() {
        let q = two_triangles();
        let s1 = potential(&q, &[(1, &[0, 1, 2])]);
        let r = rigidity_check(&q, None, &[], &s1, &RigidityOptions::default()).unwrap();
        assert!(!r.verdict.rigid);
        assert_eq!(r.verdict.failures.len(), 1);
        assert_eq!(necklace(&r.verdict.failures[0].cycle), necklace(&[2, 3, 4]));
        assert_eq!(r.verdict.failures[0].reason, FailureReason::NotMember);
    }

    #[test]
    fn example_rigid() {
        let q = two_triangles();
        let s2 = potential(&q, &[(1, &[0, 1, 2]), (1, &[2, 3, 4])]);
        let r = rigidity_check(&q, None, &[], &s2, &RigidityOptions::default()).unwrap();
        assert!(r.verdict.rigid);
        assert_eq!((r.verdict.cycles_total, r.verdict.certified, r.verdict.oracle_only), (2, 2, 0));
        assert!(r.certificates.iter().all(|c| c.verified && c.replay(&q, &s2)));
    }

    fn bfz(name: &str, u: &str) -> (Quiver, CylinderLayout, Vec<Face>) {
        let g = GeneralizedCartanMatrix::named(name).unwrap();
        let u: WeylWord = u.parse().unwrap();
        let w = ShuffledWord::new(&g, &u, &WeylWord::identity(), &Interleaving::u_first(u.len(), 0)).unwrap();
        let bq = build_bfz_quiver_with(&g, &w, FrozenArrows::Boundary).unwrap();
        let l = layout(&bq, &branch_decompose(&g.dynkin()).unwrap()).unwrap();
        let q = bq.quiver().clone();
        let faces = enumerate_faces(&q, &l).unwrap();
        (q, l, faces)
    }

    #[test]
    fn a2_fixture() {
        let (q, l, faces) = bfz("A2", "1 2 1");
        let s = superpotential(&q, &faces).unwrap();
        let r = rigidity_check(&q, Some(&l), &faces, &s, &RigidityOptions::default()).unwrap();
        assert!(r.verdict.rigid);
        assert_eq!((r.verdict.cycles_total, r.verdict.certified), (1, 1));
        assert_eq!(r.certificates[0].steps.len(), 1);
        assert_eq!(r.certificates[0].steps[0].kind, StepKind::Boundary);
    }

    #[test]
    fn example_long_cycle() {
        let (q, l, faces) = bfz("A3", "3 2 1 2 3");
        let s = superpotential(&q, &faces).unwrap();
        let r = rigidity_check(&q, Some(&l), &faces, &s, &RigidityOptions::default()).unwrap();
        assert!(r.verdict.rigid, "{:?}", r.verdict);
        assert_eq!(r.verdict.oracle_only, 0);
        assert_eq!(r.verdict.multi_sheet, 0);
        assert!(r.verdict.cycles_total > faces.len());
        assert!(r.certificates.iter().all(|c| c.verified && c.replay(&q, &s)));
    }

    #[test]
    fn enclosed_counts_are_odd() {
        for name in ["A3", "D4"] {
            let g = GeneralizedCartanMatrix::named(name).unwrap();
            let mut words: Vec<String> = g.enumerate_weyl(8).unwrap().iter().map(|u| u.to_string()).collect();
            if name == "A3" {
                words.push("3 2 1 2 3".into());
            }
            for u in words {
                let (q, l, faces) = bfz(name, &u);
                let s = superpotential(&q, &faces).unwrap();
                let geometry = Geometry::new(&q, &l, &faces, &s);
                for c in simple_cycles(&q, q.vertices().len()).unwrap() {
                    if let Some(sheet) = geometry.sheet_of(&c) {
                        assert_eq!(geometry.enclosed(sheet, &c).len() % 2, 1, "{name} {u} {c:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn example_outer_cycle_splits() {
        let (q, l, faces) = bfz("A3", "3 2 1 2 3");
        let s = superpotential(&q, &faces).unwrap();
        let geometry = Geometry::new(&q, &l, &faces, &s);
        let outer = simple_cycles(&q, q.vertices().len())
            .unwrap()
            .into_iter()
            .max_by_key(|c| geometry.enclosed(0, c).len())
            .unwrap();
        assert_eq!(geometry.enclosed(0, &outer).len(), 5);
        let split = find_differentiable_edge(&q, &outer, &faces, &l, &s).unwrap();
        let shared: Vec<ArrowId> = split.face.iter().copied().filter(|a| split.partner.contains(a)).collect();
        assert_eq!(shared, vec![split.edge]);
        assert!(!outer.contains(&split.edge));
        assert_eq!(geometry.weight(0, &split.residual), 3);
        let r = rigidity_check(&q, Some(&l), &faces, &s, &RigidityOptions::default()).unwrap();
        let cert = r.certificates.iter().find(|c| c.cycle == outer).unwrap();
        assert_eq!(cert.steps[0].kind, StepKind::Split);
        assert!(cert.verified);
    }

    #[test]
    fn winding_numbers() {
        let square = [(0, 0), (2, 0), (2, 2), (0, 2)];
        assert_eq!(winding(&square, (1, 1)), 1);
        let back: Vec<Pt> = square.iter().rev().copied().collect();
        assert_eq!(winding(&back, (1, 1)), -1);
        assert_eq!(winding(&square, (3, 1)), 0);
        let twice: Vec<Pt> = square.iter().chain(square.iter()).copied().collect();
        assert_eq!(winding(&twice, (1, 1)), 2);
    }

    #[test]
    fn split_chains_replay() {
        let g = GeneralizedCartanMatrix::named("D4").unwrap();
        let mut splits = 0;
        for u in g.enumerate_weyl(8).unwrap() {
            let (q, l, faces) = bfz("D4", &u.to_string());
            let s = superpotential(&q, &faces).unwrap();
            let r = rigidity_check(&q, Some(&l), &faces, &s, &RigidityOptions::default()).unwrap();
            assert!(r.verdict.rigid);
            for c in &r.certificates {
                if c.steps.iter().any(|st| st.kind == StepKind::Split) {
                    assert!(c.replay(&q, &s));
                    splits += 1;
                }
            }
        }
        assert!(splits > 0);
    }
}
