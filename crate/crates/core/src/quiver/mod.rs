//! Quivers and seed mutation.
//!
//! A [`Quiver`] is a finite directed multigraph with frozen flags. Mutation
//! at a mutable vertex `k` reverses the arrows at `k`, completes every path
//! `i -> k -> j` of the reversed quiver with an arrow `j -> i`, and cancels
//! opposite pairs. Mutation never creates an arrow between two frozen
//! vertices.

pub mod poly;
pub mod rational;
mod seed;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use poly::{Monomial, MultivariatePolynomial};
pub use rational::RationalFunction;
pub use seed::{variable_name, Seed, SeedJson, VariableJson};

pub type VertexId = i64;
pub type ArrowId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: VertexId,
    #[serde(default)]
    pub frozen: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub id: ArrowId,
    pub src: VertexId,
    pub tgt: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "QuiverJson", into = "QuiverJson")]
pub struct Quiver {
    vertices: Vec<Vertex>,
    arrows: Vec<Arrow>,
    #[serde(skip)]
    frozen: BTreeSet<VertexId>,
}

/// Wire form of a quiver.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuiverJson {
    pub vertices: Vec<Vertex>,
    pub arrows: Vec<Arrow>,
}

impl TryFrom<QuiverJson> for Quiver {
    type Error = Error;

    fn try_from(j: QuiverJson) -> Result<Self> {
        Quiver::new(j.vertices, j.arrows)
    }
}

impl From<Quiver> for QuiverJson {
    fn from(q: Quiver) -> Self {
        QuiverJson {
            vertices: q.vertices,
            arrows: q.arrows,
        }
    }
}

impl Quiver {
    /// Validates vertex and arrow ids, endpoints, loops and 2-cycles.
    pub fn new(vertices: Vec<Vertex>, arrows: Vec<Arrow>) -> Result<Self> {
        let mut ids = BTreeSet::new();
        for v in &vertices {
            if !ids.insert(v.id) {
                return Err(Error::InvalidQuiver(format!("duplicate vertex id {}", v.id)));
            }
        }
        let mut arrow_ids = BTreeSet::new();
        let mut pairs = BTreeSet::new();
        for a in &arrows {
            if !arrow_ids.insert(a.id) {
                return Err(Error::InvalidQuiver(format!("duplicate arrow id {}", a.id)));
            }
            for end in [a.src, a.tgt] {
                if !ids.contains(&end) {
                    return Err(Error::InvalidQuiver(format!(
                        "arrow {} refers to missing vertex {end}",
                        a.id
                    )));
                }
            }
            if a.src == a.tgt {
                return Err(Error::InvalidQuiver(format!("arrow {} is a loop", a.id)));
            }
            pairs.insert((a.src, a.tgt));
        }
        if let Some(&(s, t)) = pairs.iter().find(|&&(s, t)| pairs.contains(&(t, s))) {
            return Err(Error::InvalidQuiver(format!(
                "2-cycle between vertices {s} and {t}"
            )));
        }
        let frozen = vertices.iter().filter(|v| v.frozen).map(|v| v.id).collect();
        Ok(Self {
            vertices,
            arrows,
            frozen,
        })
    }

    pub fn empty() -> Self {
        Self::new(Vec::new(), Vec::new()).unwrap()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex(&self, id: VertexId) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    pub fn arrow(&self, id: ArrowId) -> Option<&Arrow> {
        self.arrows.iter().find(|a| a.id == id)
    }

    pub fn contains_vertex(&self, id: VertexId) -> bool {
        self.vertex(id).is_some()
    }

    pub fn is_frozen(&self, id: VertexId) -> bool {
        self.frozen.contains(&id)
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().map(|v| v.id)
    }

    /// Number of arrows `i -> j`.
    pub fn multiplicity(&self, i: VertexId, j: VertexId) -> usize {
        self.arrows.iter().filter(|a| a.src == i && a.tgt == j).count()
    }

    /// Skew-symmetric count `#(i -> j) - #(j -> i)`.
    pub fn exchange_entry(&self, i: VertexId, j: VertexId) -> i64 {
        self.multiplicity(i, j) as i64 - self.multiplicity(j, i) as i64
    }

    pub fn has_two_cycle(&self) -> bool {
        let pairs: BTreeSet<_> = self.arrows.iter().map(|a| (a.src, a.tgt)).collect();
        pairs.iter().any(|&(s, t)| pairs.contains(&(t, s)))
    }

    /// Same vertices, arrows sorted by `(src, tgt)` and renumbered from 0.
    pub fn canonical(&self) -> Quiver {
        let mut pairs: Vec<(VertexId, VertexId)> =
            self.arrows.iter().map(|a| (a.src, a.tgt)).collect();
        pairs.sort();
        let arrows = pairs
            .into_iter()
            .enumerate()
            .map(|(id, (src, tgt))| Arrow { id, src, tgt })
            .collect();
        Quiver {
            vertices: self.vertices.clone(),
            arrows,
            frozen: self.frozen.clone(),
        }
    }

    fn check_mutable(&self, k: VertexId) -> Result<()> {
        if !self.contains_vertex(k) {
            return Err(Error::MissingVertex(k));
        }
        if self.is_frozen(k) {
            return Err(Error::FrozenVertex(k));
        }
        Ok(())
    }

    /// Mutation at `k`; the result is in [`canonical`](Self::canonical) form.
    pub fn mutate(&self, k: VertexId) -> Result<Quiver> {
        self.check_mutable(k)?;
        // Step 1: reverse every arrow at k.
        let reversed: Vec<(VertexId, VertexId)> = self
            .arrows
            .iter()
            .map(|a| {
                if a.src == k || a.tgt == k {
                    (a.tgt, a.src)
                } else {
                    (a.src, a.tgt)
                }
            })
            .collect();
        let mut count: BTreeMap<(VertexId, VertexId), i64> = BTreeMap::new();
        for &p in &reversed {
            *count.entry(p).or_default() += 1;
        }
        // Step 2: each path i -> k -> j of the reversed quiver adds j -> i.
        let into_k: Vec<VertexId> = reversed.iter().filter(|p| p.1 == k).map(|p| p.0).collect();
        let out_of_k: Vec<VertexId> = reversed.iter().filter(|p| p.0 == k).map(|p| p.1).collect();
        for &i in &into_k {
            for &j in &out_of_k {
                if i == j || (self.is_frozen(i) && self.is_frozen(j)) {
                    continue;
                }
                *count.entry((j, i)).or_default() += 1;
            }
        }
        // Step 3: cancel opposite pairs.
        let mut net: BTreeMap<(VertexId, VertexId), i64> = BTreeMap::new();
        for (&(s, t), &c) in &count {
            let key = if s < t { (s, t) } else { (t, s) };
            let sign = if s < t { 1 } else { -1 };
            *net.entry(key).or_default() += sign * c;
        }
        let mut pairs = Vec::new();
        for ((a, b), n) in net {
            let (s, t) = if n > 0 { (a, b) } else { (b, a) };
            for _ in 0..n.unsigned_abs() {
                pairs.push((s, t));
            }
        }
        pairs.sort();
        let arrows = pairs
            .into_iter()
            .enumerate()
            .map(|(id, (src, tgt))| Arrow { id, src, tgt })
            .collect();
        let out = Quiver {
            vertices: self.vertices.clone(),
            arrows,
            frozen: self.frozen.clone(),
        };
        debug_assert!(!out.has_two_cycle());
        debug_assert!(out.arrows.iter().all(|a| a.src != a.tgt));
        Ok(out)
    }

    pub fn to_json(&self) -> QuiverJson {
        self.clone().into()
    }
}
