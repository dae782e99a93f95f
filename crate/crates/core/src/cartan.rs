//! Symmetric generalized Cartan matrices, their Dynkin graphs and the
//! action of the Weyl group on the root lattice.
//!
//! Vertices of the Dynkin graph and letters of Weyl words are 1-based, so a
//! word like `3 2 1 2 3` reads the same here as it does on paper.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Root-lattice vector in the basis of simple roots.
pub type RootVector = Vec<BigInt>;

/// Default limit on the number of Weyl group elements [`GeneralizedCartanMatrix::enumerate_weyl`]
/// will materialize.
pub const DEFAULT_WEYL_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralizedCartanMatrix {
    entries: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

impl GeneralizedCartanMatrix {
    /// Validates an explicit matrix.
    pub fn from_entries(entries: Vec<Vec<i64>>) -> Result<Self> {
        let r = entries.len();
        if r == 0 {
            return Err(Error::InvalidCartan("rank must be positive".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != r {
                return Err(Error::InvalidCartan(format!(
                    "row {} has {} entries, expected {r}",
                    i + 1,
                    row.len()
                )));
            }
        }
        #[allow(clippy::needless_range_loop)]
        for i in 0..r {
            if entries[i][i] != 2 {
                return Err(Error::InvalidCartan(format!(
                    "diagonal entry a[{0}][{0}] = {1}, expected 2",
                    i + 1,
                    entries[i][i]
                )));
            }
            for j in 0..r {
                if i == j {
                    continue;
                }
                if entries[i][j] > 0 {
                    return Err(Error::InvalidCartan(format!(
                        "off-diagonal entry a[{}][{}] = {} is positive",
                        i + 1,
                        j + 1,
                        entries[i][j]
                    )));
                }
                if entries[i][j] != entries[j][i] {
                    return Err(Error::InvalidCartan(format!(
                        "matrix is not symmetric: a[{}][{}] = {} but a[{}][{}] = {}",
                        i + 1,
                        j + 1,
                        entries[i][j],
                        j + 1,
                        i + 1,
                        entries[j][i]
                    )));
                }
            }
        }
        Ok(Self {
            entries,
            name: None,
        })
    }

    /// Builds one of the named simply-laced types `A<n>`, `D<n>`, `E6`, `E7`, `E8`.
    pub fn named(name: &str) -> Result<Self> {
        let name = name.trim();
        let unknown = || Error::UnknownType(name.to_string());
        let mut chars = name.chars();
        let family = chars.next().ok_or_else(unknown)?.to_ascii_uppercase();
        let rest = chars.as_str().trim_start_matches('_');
        let n: usize = rest.parse().map_err(|_| unknown())?;
        let edges: Vec<(usize, usize)> = match family {
            'A' if n >= 1 => (1..n).map(|i| (i, i + 1)).collect(),
            'D' if n >= 4 => {
                let mut e: Vec<_> = (1..n - 2).map(|i| (i, i + 1)).collect();
                e.push((n - 2, n - 1));
                e.push((n - 2, n));
                e
            }
            'E' if (6..=8).contains(&n) => {
                let mut e = vec![(1, 3), (2, 4)];
                e.extend((3..n).map(|i| (i, i + 1)));
                e
            }
            _ => return Err(unknown()),
        };
        let mut entries = vec![vec![0i64; n]; n];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = 2;
        }
        for (i, j) in edges {
            entries[i - 1][j - 1] = -1;
            entries[j - 1][i - 1] = -1;
        }
        Ok(Self {
            entries,
            name: Some(format!("{family}{n}")),
        })
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    /// Entry `a_{ij}` with 1-based indices.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i - 1][j - 1]
    }

    /// Whether `i` and `j` are joined in the Dynkin diagram.
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.entry(i, j) < 0
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.rank() {
            return Err(Error::IndexOutOfRange {
                index: i as i64,
                rank: self.rank(),
            });
        }
        Ok(())
    }

    pub fn dynkin(&self) -> DynkinGraph {
        let r = self.rank();
        let mut edges = Vec::new();
        let mut neighbors = vec![Vec::new(); r];
        for i in 1..=r {
            for j in i + 1..=r {
                if self.adjacent(i, j) {
                    edges.push((i, j));
                    neighbors[i - 1].push(j);
                    neighbors[j - 1].push(i);
                }
            }
        }
        DynkinGraph {
            rank: r,
            edges,
            neighbors,
        }
    }

    /// Simple reflection `s_i` applied to a root-lattice vector.
    pub fn reflect(&self, i: usize, v: &[BigInt]) -> Result<RootVector> {
        self.check_index(i)?;
        if v.len() != self.rank() {
            return Err(Error::InvalidCartan(format!(
                "vector has length {}, expected {}",
                v.len(),
                self.rank()
            )));
        }
        let mut out = v.to_vec();
        self.reflect_in_place(i, &mut out);
        Ok(out)
    }

    fn reflect_in_place(&self, i: usize, v: &mut [BigInt]) {
        let row = &self.entries[i - 1];
        let pairing: BigInt = row
            .iter()
            .zip(v.iter())
            .filter(|(a, _)| **a != 0)
            .map(|(a, x)| x * *a)
            .sum();
        v[i - 1] -= pairing;
    }

    pub fn simple_root(&self, i: usize) -> RootVector {
        let mut v = vec![BigInt::zero(); self.rank()];
        v[i - 1] = BigInt::from(1);
        v
    }

    /// Applies `s_{w_1} s_{w_2} ... s_{w_l}` to `v` (rightmost letter first).
    pub fn act(&self, w: &WeylWord, v: &[BigInt]) -> Result<RootVector> {
        let mut out = v.to_vec();
        for &i in w.letters().iter().rev() {
            self.check_index(i)?;
            self.reflect_in_place(i, &mut out);
        }
        Ok(out)
    }

    /// A word is reduced iff no prefix `w_k` sends the next simple root
    /// `α_{i_{k+1}}` to a negative root.
    pub fn is_reduced(&self, w: &WeylWord) -> Result<bool> {
        for &i in w.letters() {
            self.check_index(i)?;
        }
        let letters = w.letters();
        for k in 0..letters.len() {
            let mut v = self.simple_root(letters[k]);
            for &j in letters[..k].iter().rev() {
                self.reflect_in_place(j, &mut v);
            }
            if v.iter().any(|c| c.is_negative()) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// One lexicographically least reduced word per Weyl group element of
    /// length at most `max_len`, ordered by length and then lexicographically.
    pub fn enumerate_weyl(&self, max_len: usize) -> Result<Vec<WeylWord>> {
        self.enumerate_weyl_capped(max_len, DEFAULT_WEYL_CAP)
    }

    pub fn enumerate_weyl_capped(&self, max_len: usize, cap: usize) -> Result<Vec<WeylWord>> {
        let r = self.rank();
        // Each element is keyed by the images of all simple roots.
        let identity: Vec<RootVector> = (1..=r).map(|i| self.simple_root(i)).collect();
        let mut seen: HashSet<Vec<RootVector>> = HashSet::new();
        seen.insert(identity.clone());
        let mut out = vec![WeylWord::identity()];
        let mut frontier: VecDeque<(Vec<usize>, Vec<RootVector>)> = VecDeque::new();
        frontier.push_back((Vec::new(), identity));
        for _ in 0..max_len {
            let mut next = VecDeque::new();
            while let Some((word, images)) = frontier.pop_front() {
                for s in 1..=r {
                    // Appending s lengthens the word iff w(α_s) is positive.
                    if images[s - 1].iter().any(|c| c.is_negative()) {
                        continue;
                    }
                    let ws = &images[s - 1];
                    let new_images: Vec<RootVector> = (1..=r)
                        .map(|j| {
                            let a = self.entry(s, j);
                            if a == 0 {
                                images[j - 1].clone()
                            } else {
                                images[j - 1]
                                    .iter()
                                    .zip(ws)
                                    .map(|(x, y)| x - y * a)
                                    .collect()
                            }
                        })
                        .collect();
                    if seen.contains(&new_images) {
                        continue;
                    }
                    if seen.len() >= cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    seen.insert(new_images.clone());
                    let mut new_word = word.clone();
                    new_word.push(s);
                    out.push(WeylWord::new(new_word.clone()));
                    next.push_back((new_word, new_images));
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Ok(out)
    }
}

impl FromStr for GeneralizedCartanMatrix {
    type Err = Error;

    /// Accepts a named type (`A3`, `D4`, `E7`) or a JSON array of integer rows.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with('[') {
            let entries: Vec<Vec<i64>> =
                serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))?;
            Self::from_entries(entries)
        } else {
            Self::named(t)
        }
    }
}

/// Simple graph on `1..=rank` with an edge wherever `a_{ij} < 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynkinGraph {
    rank: usize,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
}

impl DynkinGraph {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i - 1]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i - 1].len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.neighbors[i - 1].contains(&j)
    }
}

/// A word in the simple reflections, letters in `1..=rank`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeylWord(Vec<usize>);

impl WeylWord {
    pub fn new(letters: Vec<usize>) -> Self {
        Self(letters)
    }

    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for WeylWord {
    type Err = Error;

    /// Space- or comma-separated letters; the empty string is the identity.
    fn from_str(s: &str) -> Result<Self> {
        s.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad letter `{t}` in word")))
            })
            .collect::<Result<Vec<_>>>()
            .map(WeylWord)
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> RootVector {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn w(xs: &[usize]) -> WeylWord {
        WeylWord::new(xs.to_vec())
    }

    #[test]
    fn a3_matrix() {
        let a = GeneralizedCartanMatrix::named("A3").unwrap();
        assert_eq!(
            a.entries(),
            &[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]][..]
        );
    }

    #[test]
    fn d4_is_a_star_around_two() {
        let g = GeneralizedCartanMatrix::named("D4").unwrap().dynkin();
        assert_eq!(g.degree(2), 3);
        let mut nb = g.neighbors(2).to_vec();
        nb.sort();
        assert_eq!(nb, vec![1, 3, 4]);
        assert!((1..=4).filter(|&i| g.degree(i) == 3).count() == 1);
    }

    #[test]
    fn e7_shape() {
        let g = GeneralizedCartanMatrix::named("E7").unwrap().dynkin();
        assert_eq!(g.edges().len(), 6);
        assert_eq!(g.degree(4), 3);
    }

    #[test]
    fn rejects_bad_matrices() {
        let err = GeneralizedCartanMatrix::from_entries(vec![vec![2, -1], vec![-3, 2]]).unwrap_err();
        assert!(matches!(err, Error::InvalidCartan(ref m) if m.contains("symmetric")));
        let err = GeneralizedCartanMatrix::from_entries(vec![vec![1, 0], vec![0, 2]]).unwrap_err();
        assert!(matches!(err, Error::InvalidCartan(ref m) if m.contains("a[1][1]")));
        let err = GeneralizedCartanMatrix::from_entries(vec![vec![2, 1], vec![1, 2]]).unwrap_err();
        assert!(matches!(err, Error::InvalidCartan(ref m) if m.contains("positive")));
        assert!("B3".parse::<GeneralizedCartanMatrix>().is_err());
        assert!("D3".parse::<GeneralizedCartanMatrix>().is_err());
    }

    #[test]
    fn parses_json_matrices() {
        let a: GeneralizedCartanMatrix = "[[2,-2],[-2,2]]".parse().unwrap();
        assert_eq!(a.rank(), 2);
        assert!(a.adjacent(1, 2));
    }

    #[test]
    fn reflections_in_a2() {
        let a = GeneralizedCartanMatrix::named("A2").unwrap();
        assert_eq!(a.reflect(1, &v(&[1, 0])).unwrap(), v(&[-1, 0]));
        assert_eq!(a.reflect(1, &v(&[0, 1])).unwrap(), v(&[1, 1]));
        assert!(a.reflect(3, &v(&[0, 1])).is_err());
    }

    #[test]
    fn reducedness() {
        let a2 = GeneralizedCartanMatrix::named("A2").unwrap();
        assert!(a2.is_reduced(&w(&[1, 2, 1])).unwrap());
        assert!(!a2.is_reduced(&w(&[1, 1])).unwrap());
        assert!(!a2.is_reduced(&w(&[1, 2, 1, 2])).unwrap());
        let a3 = GeneralizedCartanMatrix::named("A3").unwrap();
        assert!(a3.is_reduced(&w(&[3, 2, 1, 2, 3])).unwrap());
        assert!(a3.is_reduced(&w(&[])).unwrap());
        assert!(a3.is_reduced(&w(&[4])).is_err());
    }

    #[test]
    fn enumeration_sizes() {
        let a2 = GeneralizedCartanMatrix::named("A2").unwrap();
        assert_eq!(a2.enumerate_weyl(3).unwrap().len(), 6);
        assert_eq!(a2.enumerate_weyl(0).unwrap(), vec![WeylWord::identity()]);
        let a3 = GeneralizedCartanMatrix::named("A3").unwrap();
        assert_eq!(a3.enumerate_weyl(6).unwrap().len(), 24);
        // Affine A1 is infinite: every length contributes exactly two elements.
        let affine: GeneralizedCartanMatrix = "[[2,-2],[-2,2]]".parse().unwrap();
        assert_eq!(affine.enumerate_weyl(10).unwrap().len(), 21);
        assert_eq!(
            affine.enumerate_weyl_capped(10, 5).unwrap_err(),
            Error::CapExceeded { cap: 5 }
        );
    }

    #[test]
    fn canonical_words_are_lex_least() {
        let a2 = GeneralizedCartanMatrix::named("A2").unwrap();
        let words: Vec<Vec<usize>> = a2
            .enumerate_weyl(3)
            .unwrap()
            .into_iter()
            .map(|w| w.0)
            .collect();
        assert_eq!(
            words,
            vec![vec![], vec![1], vec![2], vec![1, 2], vec![2, 1], vec![1, 2, 1]]
        );
    }

    #[test]
    fn word_parsing() {
        assert_eq!("3 2 1 2 3".parse::<WeylWord>().unwrap(), w(&[3, 2, 1, 2, 3]));
        assert_eq!("".parse::<WeylWord>().unwrap(), WeylWord::identity());
        assert!("1 x".parse::<WeylWord>().is_err());
    }
}
