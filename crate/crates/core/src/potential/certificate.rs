use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::oracle::solve_span;
use super::{cyclic_derivative, Path, PathElement, Potential};
use crate::error::{Error, Result};
use crate::quiver::{ArrowId, Quiver};

mod rational_string {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&c.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| D::Error::custom(format!("bad rational `{s}`")))
    }
}

/// `coefficient · left · ∂_arrow(S) · right`, an element of the Jacobian ideal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealTerm {
    #[serde(with = "rational_string")]
    pub coefficient: BigRational,
    pub left: Vec<ArrowId>,
    pub arrow: ArrowId,
    pub right: Vec<ArrowId>,
}

impl IdealTerm {
    pub fn new(coefficient: BigRational, left: Vec<ArrowId>, arrow: ArrowId, right: Vec<ArrowId>) -> Self {
        Self {
            coefficient,
            left,
            arrow,
            right,
        }
    }

    fn scaled(&self, c: &BigRational) -> Self {
        Self {
            coefficient: &self.coefficient * c,
            ..self.clone()
        }
    }

    /// Expands the term; `None` if some product is not a path.
    pub fn expand(&self, q: &Quiver, s: &Potential) -> Option<PathElement> {
        let e = cyclic_derivative(s, self.arrow)
            .sandwich(&self.left, &self.right)
            .scale(&self.coefficient);
        let ok = e.terms().all(|(p, _)| Path::new(q, p.arrows().to_vec()).is_ok());
        ok.then_some(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    /// A face with an arrow that occurs in no other term of `S`.
    Boundary,
    /// A face sharing an arrow with exactly one already certified face.
    Adjacent,
    /// A cycle cut along an interior arrow into a face and a smaller cycle.
    Split,
    /// A linear combination found by exact linear algebra.
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub kind: StepKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge: Option<ArrowId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face: Option<Vec<ArrowId>>,
    pub witness: Vec<IdealTerm>,
}

impl Step {
    fn scaled(&self, c: &BigRational) -> Self {
        Self {
            witness: self.witness.iter().map(|t| t.scaled(c)).collect(),
            ..self.clone()
        }
    }
}

/// Claims that `cycle` is cyclically equivalent to the sum of all step witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub cycle: Vec<ArrowId>,
    pub steps: Vec<Step>,
    pub verified: bool,
}

impl Certificate {
    pub fn new(cycle: Vec<ArrowId>, steps: Vec<Step>) -> Self {
        Self {
            cycle,
            steps,
            verified: false,
        }
    }

    /// Expands every witness exactly and compares with the cycle modulo rotations.
    pub fn replay(&self, q: &Quiver, s: &Potential) -> bool {
        if Path::new(q, self.cycle.clone()).map_or(true, |p| !p.is_cycle(q)) {
            return false;
        }
        let mut total = PathElement::zero();
        for t in self.steps.iter().flat_map(|st| &st.witness) {
            match t.expand(q, s) {
                Some(e) => total = total.add(&e),
                None => return false,
            }
        }
        PathElement::from_path(Path::raw(self.cycle.clone()))
            .sub(&total)
            .is_cyclically_zero(q)
    }

    /// Replays and records the outcome.
    pub fn verify(mut self, q: &Quiver, s: &Potential) -> Result<Self> {
        if !self.replay(q, s) {
            return Err(Error::ReplayFailed(self.cycle));
        }
        self.verified = true;
        Ok(self)
    }
}

/// Distance of every face from the boundary: 0 if it has a boundary arrow,
/// otherwise one more than the nearest face sharing an arrow with it.
pub fn face_distances(faces: &[Vec<ArrowId>], boundary: &BTreeSet<ArrowId>) -> Result<Vec<usize>> {
    let mut dist: Vec<Option<usize>> = faces
        .iter()
        .map(|f| f.iter().any(|a| boundary.contains(a)).then_some(0))
        .collect();
    let mut queue: VecDeque<usize> = (0..faces.len()).filter(|&i| dist[i].is_some()).collect();
    while let Some(i) = queue.pop_front() {
        for j in 0..faces.len() {
            if dist[j].is_none() && faces[j].iter().any(|a| faces[i].contains(a)) {
                dist[j] = Some(dist[i].unwrap() + 1);
                queue.push_back(j);
            }
        }
    }
    dist.into_iter()
        .zip(faces)
        .map(|(d, f)| d.ok_or_else(|| Error::Unreachable(f.clone())))
        .collect()
}

/// Convenience wrapper for one face.
pub fn face_distance(face: usize, faces: &[Vec<ArrowId>], boundary: &BTreeSet<ArrowId>) -> Result<usize> {
    Ok(face_distances(faces, boundary)?[face])
}

/// Certificates for the terms of a potential, keyed by rotation class.
#[derive(Debug, Clone, Default)]
pub struct FaceCertificates {
    by_class: BTreeMap<Path, Certificate>,
    distance: BTreeMap<Path, usize>,
}

impl FaceCertificates {
    /// Certificate for any rotation of a term of `S`.
    pub fn get(&self, cycle: &[ArrowId]) -> Option<&Certificate> {
        self.by_class.get(&Path::raw(cycle.to_vec()).necklace())
    }

    /// Number of adjacency steps back to a boundary face; absent for faces
    /// handled by linear algebra.
    pub fn distance(&self, cycle: &[ArrowId]) -> Option<usize> {
        self.distance.get(&Path::raw(cycle.to_vec()).necklace()).copied()
    }

    pub fn len(&self) -> usize {
        self.by_class.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_class.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Certificate> {
        self.by_class.values()
    }
}

/// Certifies every term of `S` (its faces), breadth-first from arrows used by a
/// single term; terms out of reach are solved for directly. Every certificate
/// is replayed before it is returned.
pub fn certify_faces(q: &Quiver, s: &Potential) -> Result<FaceCertificates> {
    // Terms merged by rotation class.
    let mut classes: BTreeMap<Path, (Path, BigRational)> = BTreeMap::new();
    for (p, c) in s.terms() {
        let slot = classes
            .entry(p.necklace())
            .or_insert_with(|| (p.clone(), BigRational::zero()));
        slot.1 += c;
    }
    classes.retain(|_, (_, c)| !c.is_zero());
    let keys: Vec<Path> = classes.keys().cloned().collect();

    // Which classes each arrow occurs in, with multiplicity.
    let mut occurs: BTreeMap<ArrowId, Vec<usize>> = BTreeMap::new();
    for (i, k) in keys.iter().enumerate() {
        for &a in k.arrows() {
            occurs.entry(a).or_default().push(i);
        }
    }

    let mut steps: Vec<Option<Vec<Step>>> = vec![None; keys.len()];
    let mut dist: Vec<Option<usize>> = vec![None; keys.len()];
    let mut queue = VecDeque::new();
    for (i, k) in keys.iter().enumerate() {
        let (cycle, c) = &classes[k];
        if let Some(&f) = k.arrows().iter().find(|a| occurs[a].len() == 1) {
            steps[i] = Some(vec![Step {
                kind: StepKind::Boundary,
                edge: Some(f),
                face: Some(cycle.arrows().to_vec()),
                witness: vec![IdealTerm::new(c.recip(), vec![f], f, vec![])],
            }]);
            dist[i] = Some(0);
            queue.push_back(i);
        }
    }
    while let Some(j) = queue.pop_front() {
        for &e in keys[j].arrows() {
            let occ = &occurs[&e];
            if occ.len() != 2 || occ[0] == occ[1] {
                continue;
            }
            let i = if occ[0] == j { occ[1] } else { occ[0] };
            if steps[i].is_some() {
                continue;
            }
            let (cycle, c_f) = &classes[&keys[i]];
            let c_e = &classes[&keys[j]].1;
            // e∂_e S ≡ c_F F + c_E E, so F ≡ (e∂_e S − c_E E) / c_F.
            let mut chain = vec![Step {
                kind: StepKind::Adjacent,
                edge: Some(e),
                face: Some(cycle.arrows().to_vec()),
                witness: vec![IdealTerm::new(c_f.recip(), vec![e], e, vec![])],
            }];
            let factor = -(c_e / c_f);
            chain.extend(steps[j].as_ref().unwrap().iter().map(|st| st.scaled(&factor)));
            steps[i] = Some(chain);
            dist[i] = Some(dist[j].unwrap() + 1);
            queue.push_back(i);
        }
    }

    // Remaining classes: solve Σ_a λ_a [a∂_a S] = [F] on rotation classes.
    if steps.iter().any(Option::is_none) {
        let arrows: Vec<ArrowId> = occurs.keys().copied().collect();
        let columns: Vec<BTreeMap<usize, BigRational>> = arrows
            .iter()
            .map(|a| {
                let mut col = BTreeMap::new();
                for &i in &occurs[a] {
                    *col.entry(i).or_insert_with(BigRational::zero) += &classes[&keys[i]].1;
                }
                col
            })
            .collect();
        for i in 0..keys.len() {
            if steps[i].is_some() {
                continue;
            }
            if let Some(lambda) = solve_span(&columns, i) {
                let witness = lambda
                    .into_iter()
                    .map(|(col, l)| IdealTerm::new(l, vec![arrows[col]], arrows[col], vec![]))
                    .collect();
                steps[i] = Some(vec![Step {
                    kind: StepKind::Oracle,
                    edge: None,
                    face: Some(classes[&keys[i]].0.arrows().to_vec()),
                    witness,
                }]);
            }
        }
    }

    let mut out = FaceCertificates::default();
    for (i, k) in keys.into_iter().enumerate() {
        if let Some(st) = steps[i].take() {
            let cert = Certificate::new(classes[&k].0.arrows().to_vec(), st).verify(q, s)?;
            if let Some(d) = dist[i] {
                out.distance.insert(k.clone(), d);
            }
            out.by_class.insert(k, cert);
        }
    }
    Ok(out)
}
