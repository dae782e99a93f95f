//! Berenstein–Fomin–Zelevinsky quivers `Q^{u,v}` built from a shuffle of
//! reduced words for `u` and `v`.
//!
//! Positions run over `-r..=-1` followed by `1..=m` with `m = ℓ(u) + ℓ(v)`.
//! Position `-i` carries the letter `-i`; the remaining positions carry the
//! letters of `u` negated and the letters of `v` as they are, in the order
//! given by the interleaving. Vertex ids of the quiver are the positions.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cartan::{GeneralizedCartanMatrix, WeylWord};
use crate::error::{Error, Result};
use crate::quiver::{Arrow, ArrowId, Quiver, Vertex, VertexId};

/// The word `î = (-r, ..., -1, i_1, ..., i_m)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShuffledWord {
    rank: usize,
    u: WeylWord,
    v: WeylWord,
    interleave: Vec<bool>,
    /// Signed letters at positions `-r..=-1, 1..=m`, in that order.
    letters: Vec<i64>,
}

/// Interleaving pattern: `false` takes the next letter of `u`, `true` of `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interleaving(pub Vec<bool>);

impl Interleaving {
    /// All of `u`, then all of `v`.
    pub fn u_first(len_u: usize, len_v: usize) -> Self {
        Self(
            std::iter::repeat_n(false, len_u)
                .chain(std::iter::repeat_n(true, len_v))
                .collect(),
        )
    }
}

impl FromStr for Interleaving {
    type Err = Error;

    /// A string of `0` (take from `u`) and `1` (take from `v`); whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::BadInterleaving(format!("contains `{c}`; use 0 and 1"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

impl ShuffledWord {
    pub fn new(
        gcm: &GeneralizedCartanMatrix,
        u: &WeylWord,
        v: &WeylWord,
        interleave: &Interleaving,
    ) -> Result<Self> {
        for w in [u, v] {
            if !gcm.is_reduced(w)? {
                return Err(Error::NotReduced(w.letters().to_vec()));
            }
        }
        let pattern = &interleave.0;
        if pattern.len() != u.len() + v.len() {
            return Err(Error::BadInterleaving(format!(
                "has length {}, expected ℓ(u) + ℓ(v) = {}",
                pattern.len(),
                u.len() + v.len()
            )));
        }
        let ones = pattern.iter().filter(|&&b| b).count();
        if ones != v.len() {
            return Err(Error::BadInterleaving(format!(
                "has {} zeros and {ones} ones, expected {} and {}",
                pattern.len() - ones,
                u.len(),
                v.len()
            )));
        }
        let r = gcm.rank();
        let mut letters: Vec<i64> = (1..=r as i64).rev().map(|i| -i).collect();
        let (mut iu, mut iv) = (u.letters().iter(), v.letters().iter());
        for &from_v in pattern {
            if from_v {
                letters.push(*iv.next().unwrap() as i64);
            } else {
                letters.push(-(*iu.next().unwrap() as i64));
            }
        }
        Ok(Self {
            rank: r,
            u: u.clone(),
            v: v.clone(),
            interleave: pattern.clone(),
            letters,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn u(&self) -> &WeylWord {
        &self.u
    }

    pub fn v(&self) -> &WeylWord {
        &self.v
    }

    pub fn interleaving(&self) -> &[bool] {
        &self.interleave
    }

    /// `ℓ(u) + ℓ(v)`.
    pub fn len(&self) -> usize {
        self.letters.len() - self.rank
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The position `ℓ(u) + ℓ(v) + 1` returned by [`k_plus`](Self::k_plus) when no later position matches.
    pub fn sentinel(&self) -> i64 {
        self.len() as i64 + 1
    }

    pub fn positions(&self) -> impl Iterator<Item = i64> + '_ {
        (-(self.rank as i64)..=-1).chain(1..=self.len() as i64)
    }

    pub fn is_position(&self, k: i64) -> bool {
        (k < 0 && k >= -(self.rank as i64)) || (k >= 1 && k <= self.len() as i64)
    }

    /// Zero-based ordinal of a position in `î`.
    pub fn ordinal(&self, k: i64) -> usize {
        if k < 0 {
            (k + self.rank as i64) as usize
        } else {
            self.rank + k as usize - 1
        }
    }

    fn at_ordinal(&self, o: usize) -> i64 {
        if o < self.rank {
            o as i64 - self.rank as i64
        } else {
            (o - self.rank) as i64 + 1
        }
    }

    /// Signed letter `i_k`.
    pub fn letter(&self, k: i64) -> i64 {
        self.letters[self.ordinal(k)]
    }

    /// `|i_k|`, the Dynkin vertex (string) of position `k`.
    pub fn string(&self, k: i64) -> usize {
        self.letter(k).unsigned_abs() as usize
    }

    /// `ε(i_k)`: `-1` for letters of `u` and the initial block, `+1` for letters of `v`.
    pub fn sign(&self, k: i64) -> i64 {
        self.letter(k).signum()
    }

    /// Smallest later position with the same string, or the sentinel.
    pub fn k_plus(&self, k: i64) -> i64 {
        let s = self.string(k);
        (self.ordinal(k) + 1..self.letters.len())
            .find(|&o| self.letters[o].unsigned_abs() as usize == s)
            .map(|o| self.at_ordinal(o))
            .unwrap_or_else(|| self.sentinel())
    }

    pub fn is_exchangeable(&self, k: i64) -> bool {
        self.is_position(k) && self.is_position(self.k_plus(k))
    }

    /// Signed letters in position order.
    pub fn signed_letters(&self) -> &[i64] {
        &self.letters
    }
}

/// Treatment of pairs of frozen vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrozenArrows {
    /// Only pairs with an exchangeable endpoint are joined.
    Omit,
    /// Also join frozen pairs, reading `î` as if it were followed by virtual
    /// positions carrying the letters `1, ..., r` with sign `-1`. This closes
    /// the top faces of each sheet the way the drawn examples do.
    #[default]
    Boundary,
}

impl FromStr for FrozenArrows {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "omit" => Ok(FrozenArrows::Omit),
            "boundary" => Ok(FrozenArrows::Boundary),
            _ => Err(Error::Parse(format!(
                "frozen-arrow convention `{s}` (expected omit or boundary)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArrowKind {
    /// Joins consecutive positions on one string.
    Horizontal,
    /// Joins positions on Dynkin-adjacent strings.
    Inclined,
    /// Anything else, e.g. after mutation.
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexInfo {
    pub letter: usize,
    pub position: i64,
    pub exchangeable: bool,
}

/// A quiver whose vertices sit on the strings of the cylinder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfzQuiver {
    quiver: Quiver,
    info: BTreeMap<VertexId, VertexInfo>,
    kinds: BTreeMap<ArrowId, ArrowKind>,
    word: Option<ShuffledWord>,
}

impl BfzQuiver {
    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn word(&self) -> Option<&ShuffledWord> {
        self.word.as_ref()
    }

    pub fn info(&self, v: VertexId) -> Option<&VertexInfo> {
        self.info.get(&v)
    }

    /// String (Dynkin vertex) of every quiver vertex.
    pub fn letters(&self) -> BTreeMap<VertexId, usize> {
        self.info.iter().map(|(&k, i)| (k, i.letter)).collect()
    }

    pub fn kind(&self, a: ArrowId) -> ArrowKind {
        self.kinds.get(&a).copied().unwrap_or(ArrowKind::Other)
    }

    /// Replaces the underlying quiver (e.g. after mutation); arrow kinds are
    /// recomputed from the strings of the endpoints.
    pub fn with_quiver(&self, gcm: &GeneralizedCartanMatrix, quiver: Quiver) -> Result<Self> {
        Self::from_parts(gcm, quiver, self.info.clone(), self.word.clone())
    }

    /// Assembles a quiver with vertex annotations, e.g. one read back from JSON.
    pub fn from_parts(
        gcm: &GeneralizedCartanMatrix,
        quiver: Quiver,
        info: BTreeMap<VertexId, VertexInfo>,
        word: Option<ShuffledWord>,
    ) -> Result<Self> {
        for v in quiver.vertices() {
            let i = info
                .get(&v.id)
                .ok_or_else(|| Error::InvalidQuiver(format!("vertex {} has no letter", v.id)))?;
            if i.letter == 0 || i.letter > gcm.rank() {
                return Err(Error::IndexOutOfRange {
                    index: i.letter as i64,
                    rank: gcm.rank(),
                });
            }
        }
        let kinds = quiver
            .arrows()
            .iter()
            .map(|a| {
                let (x, y) = (info[&a.src].letter, info[&a.tgt].letter);
                let kind = if x == y {
                    let mut on_string: Vec<VertexId> = info
                        .iter()
                        .filter(|(_, i)| i.letter == x)
                        .map(|(&k, _)| k)
                        .collect();
                    on_string.sort();
                    let (p, q) = (a.src.min(a.tgt), a.src.max(a.tgt));
                    let consecutive = on_string.windows(2).any(|w| w[0] == p && w[1] == q);
                    if consecutive {
                        ArrowKind::Horizontal
                    } else {
                        ArrowKind::Other
                    }
                } else if gcm.adjacent(x, y) {
                    ArrowKind::Inclined
                } else {
                    ArrowKind::Other
                };
                (a.id, kind)
            })
            .collect();
        Ok(Self {
            quiver,
            info,
            kinds,
            word,
        })
    }

    pub fn to_json(&self) -> BfzQuiverJson {
        BfzQuiverJson {
            vertices: self
                .quiver
                .vertices()
                .iter()
                .map(|v| {
                    let i = self.info[&v.id];
                    BfzVertexJson {
                        id: v.id,
                        frozen: v.frozen,
                        label: v.label.clone(),
                        letter: i.letter,
                        position: i.position,
                        exchangeable: i.exchangeable,
                    }
                })
                .collect(),
            arrows: self
                .quiver
                .arrows()
                .iter()
                .map(|a| BfzArrowJson {
                    id: a.id,
                    src: a.src,
                    tgt: a.tgt,
                    kind: self.kind(a.id),
                })
                .collect(),
        }
    }

    pub fn from_json(gcm: &GeneralizedCartanMatrix, j: &BfzQuiverJson) -> Result<Self> {
        let vertices = j
            .vertices
            .iter()
            .map(|v| Vertex {
                id: v.id,
                frozen: v.frozen,
                label: v.label.clone(),
            })
            .collect();
        let arrows = j
            .arrows
            .iter()
            .map(|a| Arrow {
                id: a.id,
                src: a.src,
                tgt: a.tgt,
            })
            .collect();
        let info = j
            .vertices
            .iter()
            .map(|v| {
                (
                    v.id,
                    VertexInfo {
                        letter: v.letter,
                        position: v.position,
                        exchangeable: v.exchangeable,
                    },
                )
            })
            .collect();
        Self::from_parts(gcm, Quiver::new(vertices, arrows)?, info, None)
    }
}

/// Quiver JSON extended with string and arrow-kind annotations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BfzQuiverJson {
    pub vertices: Vec<BfzVertexJson>,
    pub arrows: Vec<BfzArrowJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BfzVertexJson {
    pub id: VertexId,
    pub frozen: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub letter: usize,
    pub position: i64,
    pub exchangeable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BfzArrowJson {
    pub id: ArrowId,
    pub src: VertexId,
    pub tgt: VertexId,
    pub kind: ArrowKind,
}

pub fn build_bfz_quiver(gcm: &GeneralizedCartanMatrix, w: &ShuffledWord) -> Result<BfzQuiver> {
    build_bfz_quiver_with(gcm, w, FrozenArrows::default())
}

pub fn build_bfz_quiver_with(
    gcm: &GeneralizedCartanMatrix,
    w: &ShuffledWord,
    frozen_arrows: FrozenArrows,
) -> Result<BfzQuiver> {
    if gcm.rank() != w.rank() {
        return Err(Error::InvalidCartan(format!(
            "word has rank {} but the matrix has rank {}",
            w.rank(),
            gcm.rank()
        )));
    }
    let positions: Vec<i64> = w.positions().collect();
    let plus: BTreeMap<i64, i64> = positions.iter().map(|&k| (k, w.k_plus(k))).collect();
    let exch = |k: i64| w.is_position(plus[&k]);
    let mut edges: Vec<(i64, i64, ArrowKind)> = Vec::new();
    for (a, &k) in positions.iter().enumerate() {
        for &l in &positions[a + 1..] {
            let (sk, sl) = (w.string(k), w.string(l));
            if !(exch(k) || exch(l)) {
                // Both k⁺ and l⁺ are virtual, so the inclined conditions
                // reduce to comparing the letters.
                let joined = if w.sign(l) == -1 { sk < sl } else { sk > sl };
                if frozen_arrows == FrozenArrows::Boundary && gcm.adjacent(sk, sl) && joined {
                    let (s, t) = if w.sign(l) == -1 { (k, l) } else { (l, k) };
                    edges.push((s, t, ArrowKind::Inclined));
                }
                continue;
            }
            let (kp, lp) = (plus[&k], plus[&l]);
            if sk == sl {
                if l == kp {
                    let (s, t) = if w.sign(l) == 1 { (k, l) } else { (l, k) };
                    edges.push((s, t, ArrowKind::Horizontal));
                }
            } else if gcm.adjacent(sk, sl) {
                // Both comparisons below only look at letters when the
                // compared position is a real one.
                let first = l < kp && kp < lp && w.sign(l) == w.sign(kp);
                let second = l < lp && lp < kp && w.sign(l) == -w.sign(lp);
                if first || second {
                    let (s, t) = if w.sign(l) == -1 { (k, l) } else { (l, k) };
                    edges.push((s, t, ArrowKind::Inclined));
                }
            }
        }
    }
    edges.sort();
    let vertices: Vec<Vertex> = positions
        .iter()
        .map(|&k| Vertex {
            id: k,
            frozen: !exch(k),
            label: None,
        })
        .collect();
    let arrows: Vec<Arrow> = edges
        .iter()
        .enumerate()
        .map(|(id, &(src, tgt, _))| Arrow { id, src, tgt })
        .collect();
    let kinds = edges
        .iter()
        .enumerate()
        .map(|(id, &(_, _, kind))| (id, kind))
        .collect();
    let info = positions
        .iter()
        .map(|&k| {
            (
                k,
                VertexInfo {
                    letter: w.string(k),
                    position: k,
                    exchangeable: exch(k),
                },
            )
        })
        .collect();
    Ok(BfzQuiver {
        quiver: Quiver::new(vertices, arrows)?,
        info,
        kinds,
        word: Some(w.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gcm(name: &str) -> GeneralizedCartanMatrix {
        GeneralizedCartanMatrix::named(name).unwrap()
    }

    fn word(s: &str) -> WeylWord {
        s.parse().unwrap()
    }

    fn shuffle(g: &GeneralizedCartanMatrix, u: &str, v: &str) -> ShuffledWord {
        let (u, v) = (word(u), word(v));
        let i = Interleaving::u_first(u.len(), v.len());
        ShuffledWord::new(g, &u, &v, &i).unwrap()
    }

    fn arrow_pairs(q: &BfzQuiver) -> Vec<(i64, i64)> {
        q.quiver().arrows().iter().map(|a| (a.src, a.tgt)).collect()
    }

    #[test]
    fn example_word() {
        let a3 = gcm("A3");
        let w = shuffle(&a3, "3 2 1 2 3", "");
        assert_eq!(w.signed_letters(), &[-3, -2, -1, -3, -2, -1, -2, -3]);
        assert_eq!(w.k_plus(-3), 1);
        assert_eq!(w.k_plus(3), 6);
        let exch: Vec<i64> = w.positions().filter(|&k| w.is_exchangeable(k)).collect();
        assert_eq!(exch, vec![-3, -2, -1, 1, 2]);
    }

    #[test]
    fn trivial_words() {
        let a2 = gcm("A2");
        let w = shuffle(&a2, "", "");
        assert_eq!(w.signed_letters(), &[-2, -1]);
        assert!(w.positions().all(|k| !w.is_exchangeable(k)));
        let q = build_bfz_quiver(&a2, &w).unwrap();
        assert_eq!(q.quiver().vertices().len(), 2);
        assert!(q.quiver().arrows().is_empty());
        let a1 = gcm("A1");
        let w = shuffle(&a1, "", "");
        assert_eq!(w.k_plus(-1), 1);
    }

    #[test]
    fn mixed_shuffle() {
        let a2 = gcm("A2");
        let i: Interleaving = "10".parse().unwrap();
        let w = ShuffledWord::new(&a2, &word("1"), &word("2"), &i).unwrap();
        assert_eq!(w.signed_letters(), &[-2, -1, 2, -1]);
    }

    #[test]
    fn shuffle_errors() {
        let a2 = gcm("A2");
        let err = ShuffledWord::new(&a2, &word("1 1"), &word(""), &"00".parse().unwrap());
        assert_eq!(err.unwrap_err(), Error::NotReduced(vec![1, 1]));
        let err = ShuffledWord::new(&a2, &word("1"), &word("2"), &"0".parse().unwrap());
        assert!(matches!(err, Err(Error::BadInterleaving(_))));
        let err = ShuffledWord::new(&a2, &word("1"), &word("2"), &"00".parse().unwrap());
        assert!(matches!(err, Err(Error::BadInterleaving(_))));
        assert!("012".parse::<Interleaving>().is_err());
    }

    #[test]
    fn a2_fixture() {
        let a2 = gcm("A2");
        let w = shuffle(&a2, "1 2 1", "");
        let exch: Vec<i64> = w.positions().filter(|&k| w.is_exchangeable(k)).collect();
        assert_eq!(exch, vec![-2, -1, 1]);
        let q = build_bfz_quiver(&a2, &w).unwrap();
        assert_eq!(
            build_bfz_quiver_with(&a2, &w, FrozenArrows::Omit).unwrap(),
            q
        );
        let mut got = arrow_pairs(&q);
        got.sort();
        let mut want = vec![(2, -2), (1, -1), (3, 1), (-2, 1), (1, 2)];
        want.sort();
        assert_eq!(got, want);
        let kinds: Vec<ArrowKind> = q
            .quiver()
            .arrows()
            .iter()
            .filter(|a| a.src == -2 && a.tgt == 1 || a.src == 1 && a.tgt == 2)
            .map(|a| q.kind(a.id))
            .collect();
        assert_eq!(kinds, vec![ArrowKind::Inclined, ArrowKind::Inclined]);
    }

    #[test]
    fn example_quiver_both_conventions() {
        let a3 = gcm("A3");
        let w = shuffle(&a3, "3 2 1 2 3", "");
        let strict = build_bfz_quiver_with(&a3, &w, FrozenArrows::Omit).unwrap();
        assert_eq!(strict.quiver().vertices().len(), 8);
        assert_eq!(strict.quiver().arrows().len(), 11);
        let drawn = build_bfz_quiver(&a3, &w).unwrap();
        assert_eq!(drawn.quiver().arrows().len(), 13);
        let extra: Vec<(i64, i64)> = arrow_pairs(&drawn)
            .into_iter()
            .filter(|p| !arrow_pairs(&strict).contains(p))
            .collect();
        assert_eq!(extra, vec![(3, 4), (4, 5)]);
    }

    #[test]
    fn json_round_trip() {
        let a3 = gcm("A3");
        let w = shuffle(&a3, "3 2 1 2 3", "");
        let q = build_bfz_quiver(&a3, &w).unwrap();
        let j = q.to_json();
        let back = BfzQuiver::from_json(&a3, &j).unwrap();
        assert_eq!(back.to_json(), j);
        let s = serde_json::to_string(&j).unwrap();
        assert!(s.contains(r#""kind":"horizontal""#));
        assert!(s.contains(r#""letter":3,"position":-3,"exchangeable":true"#));
    }
}
