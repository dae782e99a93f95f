//! Path algebra, superpotentials of dimer models, Jacobian ideals and
//! rigidity certificates.
//!
//! Paths compose left to right: `ab` means "first `a`, then `b`".

mod certificate;
mod cycles;
mod oracle;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cylinder::Face;
use crate::error::{Error, Result};
use crate::quiver::{ArrowId, Quiver};

pub use certificate::{
    certify_faces, face_distance, face_distances, Certificate, FaceCertificates, IdealTerm, Step, StepKind,
};
pub use cycles::{
    find_differentiable_edge, rigidity_check, simple_cycles, CycleFailure, FailureReason,
    RigidityOptions, RigidityReport, Split, Verdict,
};
pub use oracle::{brute_force_membership, Membership, OracleOptions};

/// A composable sequence of arrows.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(Vec<ArrowId>);

impl Path {
    pub fn new(q: &Quiver, arrows: Vec<ArrowId>) -> Result<Self> {
        for &a in &arrows {
            if q.arrow(a).is_none() {
                return Err(Error::NotComposable(arrows.clone()));
            }
        }
        let ok = arrows
            .windows(2)
            .all(|w| q.arrow(w[0]).unwrap().tgt == q.arrow(w[1]).unwrap().src);
        if !ok {
            return Err(Error::NotComposable(arrows));
        }
        Ok(Self(arrows))
    }

    /// No composability check; for callers that already know.
    pub(crate) fn raw(arrows: Vec<ArrowId>) -> Self {
        Self(arrows)
    }

    pub fn arrows(&self) -> &[ArrowId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_cycle(&self, q: &Quiver) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(&f), Some(&l)) => q.arrow(l).unwrap().tgt == q.arrow(f).unwrap().src,
            _ => false,
        }
    }

    pub fn concat(&self, other: &Path) -> Path {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Path(v)
    }

    /// `e_{i}...e_n e_1...e_{i-1}`.
    pub fn rotate(&self, i: usize) -> Path {
        let n = self.0.len();
        Path((0..n).map(|j| self.0[(i + j) % n]).collect())
    }

    /// Least rotation; equal for cyclically equivalent cycles.
    pub fn necklace(&self) -> Path {
        (0..self.0.len().max(1))
            .map(|i| self.rotate(i))
            .min()
            .unwrap_or_else(|| self.clone())
    }

    fn composes(&self, q: &Quiver) -> bool {
        self.0
            .windows(2)
            .all(|w| q.arrow(w[0]).unwrap().tgt == q.arrow(w[1]).unwrap().src)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "[{}]", s.join(" "))
    }
}

/// A finite linear combination of paths with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PathElement {
    terms: BTreeMap<Path, BigRational>,
}

impl PathElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_path(p: Path) -> Self {
        Self::term(p, BigRational::one())
    }

    pub fn term(p: Path, c: BigRational) -> Self {
        let mut e = Self::zero();
        e.add_term(p, c);
        e
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, p: &Path) -> BigRational {
        self.terms.get(p).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, p: Path, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(p).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(p, v)| (p.clone(), v * c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    /// Product in the path algebra; non-composable products vanish.
    pub fn mul(&self, q: &Quiver, other: &Self) -> Self {
        let mut out = Self::zero();
        for (p, c) in &self.terms {
            for (r, d) in &other.terms {
                let pr = p.concat(r);
                if pr.composes(q) {
                    out.add_term(pr, c * d);
                }
            }
        }
        out
    }

    /// Multiplies every term by fixed paths on both sides (no composability check).
    pub fn sandwich(&self, left: &[ArrowId], right: &[ArrowId]) -> Self {
        let mut out = Self::zero();
        for (p, c) in &self.terms {
            let mut v = left.to_vec();
            v.extend_from_slice(p.arrows());
            v.extend_from_slice(right);
            out.add_term(Path(v), c.clone());
        }
        out
    }

    /// Lies in the span of `w − rotation(w)`: only cycles, with coefficients
    /// summing to zero on each rotation class.
    pub fn is_cyclically_zero(&self, q: &Quiver) -> bool {
        let mut by_class: BTreeMap<Path, BigRational> = BTreeMap::new();
        for (p, c) in &self.terms {
            if !p.is_cycle(q) || !p.composes(q) {
                return false;
            }
            *by_class.entry(p.necklace()).or_insert_with(BigRational::zero) += c;
        }
        by_class.values().all(Zero::is_zero)
    }

    /// Coefficients collected on rotation classes.
    pub fn necklaces(&self) -> BTreeMap<Path, BigRational> {
        let mut by_class: BTreeMap<Path, BigRational> = BTreeMap::new();
        for (p, c) in &self.terms {
            *by_class.entry(p.necklace()).or_insert_with(BigRational::zero) += c;
        }
        by_class.retain(|_, v| !v.is_zero());
        by_class
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(Path::len).max().unwrap_or(0)
    }
}

/// A linear combination of cycles.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Potential {
    element: PathElement,
}

impl Potential {
    pub fn new(q: &Quiver, element: PathElement) -> Result<Self> {
        for (p, _) in element.terms() {
            if !p.composes(q) || !p.is_cycle(q) {
                return Err(Error::NotComposable(p.arrows().to_vec()));
            }
        }
        Ok(Self { element })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn element(&self) -> &PathElement {
        &self.element
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &BigRational)> {
        self.element.terms()
    }

    pub fn is_zero(&self) -> bool {
        self.element.is_zero()
    }

    pub fn arrows(&self) -> BTreeSet<ArrowId> {
        self.terms()
            .flat_map(|(p, _)| p.arrows().iter().copied())
            .collect()
    }

    pub fn to_json(&self) -> PotentialJson {
        PotentialJson {
            terms: self
                .terms()
                .map(|(p, c)| PotentialTermJson {
                    coefficient: c.to_string(),
                    arrows: p.arrows().to_vec(),
                })
                .collect(),
        }
    }

    pub fn from_json(q: &Quiver, j: &PotentialJson) -> Result<Self> {
        let mut e = PathElement::zero();
        for t in &j.terms {
            let c: BigRational = t
                .coefficient
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("coefficient `{}`", t.coefficient)))?;
            e.add_term(Path::new(q, t.arrows.clone())?, c);
        }
        Self::new(q, e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PotentialJson {
    pub terms: Vec<PotentialTermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PotentialTermJson {
    /// Exact rational such as `"1"`, `"-1"` or `"3/2"`.
    pub coefficient: String,
    pub arrows: Vec<ArrowId>,
}

fn signed(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Clockwise faces minus anticlockwise faces, each anchored at its minimal vertex.
pub fn superpotential(q: &Quiver, faces: &[Face]) -> Result<Potential> {
    superpotential_rotated(q, faces, 0)
}

/// As [`superpotential`], with every face cycle rotated by `shift` arrows.
pub fn superpotential_rotated(q: &Quiver, faces: &[Face], shift: usize) -> Result<Potential> {
    let mut e = PathElement::zero();
    for f in faces {
        if !f.is_oriented() {
            return Err(Error::NotComposable(f.arrows.clone()));
        }
        let p = Path::new(q, f.arrows.clone())?.rotate(shift % f.len().max(1));
        e.add_term(p, signed(f.sign()));
    }
    Potential::new(q, e)
}

/// `S_r` for every sheet `r` carrying a face.
pub fn sheet_potentials(q: &Quiver, faces: &[Face]) -> Result<BTreeMap<usize, Potential>> {
    let sheets: BTreeSet<usize> = faces.iter().map(|f| f.sheet).collect();
    sheets
        .into_iter()
        .map(|s| {
            let part: Vec<Face> = faces.iter().filter(|f| f.sheet == s).cloned().collect();
            Ok((s, superpotential(q, &part)?))
        })
        .collect()
}

/// `∂_a`: one term per occurrence of `a`, reading the rest of the cycle after it.
pub fn cyclic_derivative(s: &Potential, a: ArrowId) -> PathElement {
    let mut out = PathElement::zero();
    for (p, c) in s.terms() {
        let n = p.len();
        for i in (0..n).filter(|&i| p.arrows()[i] == a) {
            let rest: Vec<ArrowId> = (1..n).map(|j| p.arrows()[(i + j) % n]).collect();
            out.add_term(Path(rest), c.clone());
        }
    }
    out
}

/// `(a, ∂_a S)` for every arrow with a nonzero derivative.
pub fn jacobian_generators(s: &Potential) -> Vec<(ArrowId, PathElement)> {
    s.arrows()
        .into_iter()
        .map(|a| (a, cyclic_derivative(s, a)))
        .filter(|(_, d)| !d.is_zero())
        .collect()
}

#[cfg(test)]
pub(crate) fn rat(n: i64) -> BigRational {
    signed(n)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::quiver::{Arrow, Vertex};

    /// Arrows a..e = 0..4: a: 1→2, b: 2→4, c: 4→1, d: 1→3, e: 3→4.
    pub fn two_triangles() -> Quiver {
        let vertices = (1..=4)
            .map(|id| Vertex {
                id,
                frozen: false,
                label: None,
            })
            .collect();
        let arrows = [(1, 2), (2, 4), (4, 1), (1, 3), (3, 4)]
            .iter()
            .enumerate()
            .map(|(id, &(src, tgt))| Arrow { id, src, tgt })
            .collect();
        Quiver::new(vertices, arrows).unwrap()
    }

    pub fn potential(q: &Quiver, terms: &[(i64, &[ArrowId])]) -> Potential {
        let mut e = PathElement::zero();
        for (c, p) in terms {
            e.add_term(Path::new(q, p.to_vec()).unwrap(), rat(*c));
        }
        Potential::new(q, e).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    const A: ArrowId = 0;
    const B: ArrowId = 1;
    const C: ArrowId = 2;
    const D: ArrowId = 3;
    const E: ArrowId = 4;

    fn path(p: &[ArrowId]) -> Path {
        Path(p.to_vec())
    }

    #[test]
    fn paths() {
        let q = two_triangles();
        assert!(Path::new(&q, vec![A, B, C]).unwrap().is_cycle(&q));
        assert!(!Path::new(&q, vec![A, B]).unwrap().is_cycle(&q));
        assert_eq!(
            Path::new(&q, vec![A, C]),
            Err(Error::NotComposable(vec![A, C]))
        );
        assert_eq!(path(&[B, C, A]).necklace(), path(&[A, B, C]));
        assert_eq!(path(&[A, B, C]).rotate(2), path(&[C, A, B]));
    }

    #[test]
    fn derivatives() {
        let q = two_triangles();
        let s1 = potential(&q, &[(1, &[A, B, C])]);
        assert_eq!(cyclic_derivative(&s1, A), PathElement::from_path(path(&[B, C])));
        assert!(cyclic_derivative(&s1, D).is_zero());
        let s2 = potential(&q, &[(1, &[A, B, C]), (1, &[C, D, E])]);
        let want = PathElement::from_path(path(&[A, B])).add(&PathElement::from_path(path(&[D, E])));
        assert_eq!(cyclic_derivative(&s2, C), want);
        let gens: Vec<(ArrowId, Vec<Path>)> = jacobian_generators(&s2)
            .into_iter()
            .map(|(a, g)| (a, g.terms().map(|(p, _)| p.clone()).collect()))
            .collect();
        assert_eq!(
            gens,
            vec![
                (A, vec![path(&[B, C])]),
                (B, vec![path(&[C, A])]),
                (C, vec![path(&[A, B]), path(&[D, E])]),
                (D, vec![path(&[E, C])]),
                (E, vec![path(&[C, D])]),
            ]
        );
        assert!(jacobian_generators(&Potential::zero()).is_empty());
    }

    #[test]
    fn repeated_arrow_counts_twice() {
        let q = two_triangles();
        let s = potential(&q, &[(1, &[A, B, C, A, B, C])]);
        let d = cyclic_derivative(&s, A);
        assert_eq!(d.coefficient(&path(&[B, C, A, B, C])), rat(2));
    }

    #[test]
    fn cyclic_zero() {
        let q = two_triangles();
        let e = PathElement::from_path(path(&[A, B, C])).sub(&PathElement::from_path(path(&[C, A, B])));
        assert!(e.is_cyclically_zero(&q));
        assert!(!PathElement::from_path(path(&[A, B, C])).is_cyclically_zero(&q));
        let open = PathElement::from_path(path(&[A, B])).sub(&PathElement::from_path(path(&[A, B])));
        assert!(open.is_zero());
    }

    #[test]
    fn mul_drops_non_composable() {
        let q = two_triangles();
        let x = PathElement::from_path(path(&[A]));
        let y = PathElement::from_path(path(&[B])).add(&PathElement::from_path(path(&[D])));
        assert_eq!(x.mul(&q, &y), PathElement::from_path(path(&[A, B])));
    }

    #[test]
    fn potential_json() {
        let q = two_triangles();
        let s = potential(&q, &[(1, &[A, B, C]), (-1, &[C, D, E])]);
        let j = s.to_json();
        assert_eq!(
            serde_json::to_string(&j).unwrap(),
            r#"{"terms":[{"coefficient":"1","arrows":[0,1,2]},{"coefficient":"-1","arrows":[2,3,4]}]}"#
        );
        assert_eq!(Potential::from_json(&q, &j).unwrap(), s);
        let bad = PotentialJson {
            terms: vec![PotentialTermJson {
                coefficient: "1".into(),
                arrows: vec![A, B],
            }],
        };
        assert!(Potential::from_json(&q, &bad).is_err());
    }
}
