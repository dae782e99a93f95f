//! The cylinder Γ × ℝ over a Dynkin diagram Γ: branch decomposition into
//! sheets, placement of quiver vertices on strings, and the dimer-model
//! checks.

mod faces;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::bfz::BfzQuiver;
use crate::cartan::DynkinGraph;
use crate::error::{Error, Result};
use crate::quiver::{Arrow, Quiver, VertexId};

pub use faces::{
    boundary_arrows,
    check_arrow_projection, check_dimer, check_dimer_with, check_planarity_per_sheet,
    enumerate_faces, CheckReport, Crossing, DimerReport, Face, FaceJson, Orientation,
    PlanarityReport,
};

/// A maximal path of Γ between special vertices, listed as Dynkin vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch(pub Vec<usize>);

impl Branch {
    /// Number of Dynkin edges on the branch.
    pub fn len(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn strings(&self) -> &[usize] {
        &self.0
    }

    pub fn contains_string(&self, s: usize) -> bool {
        self.0.contains(&s)
    }

    /// Index of `s` along the branch.
    pub fn offset(&self, s: usize) -> Option<usize> {
        self.0.iter().position(|&t| t == s)
    }

    pub fn contains_edge(&self, i: usize, j: usize) -> bool {
        self.0
            .windows(2)
            .any(|w| (w[0], w[1]) == (i, j) || (w[0], w[1]) == (j, i))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchDecomposition {
    rank: usize,
    special: Vec<usize>,
    branches: Vec<Branch>,
}

impl BranchDecomposition {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Endpoints, branching points and isolated vertices.
    pub fn special_vertices(&self) -> &[usize] {
        &self.special
    }

    /// Branches, longest first; sheet `s` is `branches()[s]`.
    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.branches.iter().map(Branch::len).collect()
    }

    /// Sheets whose branch passes through string `s`.
    pub fn sheets_of_string(&self, s: usize) -> Vec<usize> {
        (0..self.branches.len())
            .filter(|&b| self.branches[b].contains_string(s))
            .collect()
    }

    /// Sheet holding the Dynkin edge `{i, j}`.
    pub fn sheet_of_edge(&self, i: usize, j: usize) -> Option<usize> {
        self.branches.iter().position(|b| b.contains_edge(i, j))
    }
}

/// Splits a forest into branches between vertices of degree other than two.
pub fn branch_decompose(g: &DynkinGraph) -> Result<BranchDecomposition> {
    let n = g.rank();
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &(i, j) in g.edges() {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a == b {
            return Err(Error::UnsupportedDiagram);
        }
        parent[a] = b;
    }
    let special: Vec<usize> = (1..=n).filter(|&i| g.degree(i) != 2).collect();
    let mut used: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut branches = Vec::new();
    for &s in &special {
        if g.degree(s) == 0 {
            branches.push(Branch(vec![s]));
            continue;
        }
        for &first in g.neighbors(s) {
            if used.contains(&(s.min(first), s.max(first))) {
                continue;
            }
            let mut path = vec![s];
            let (mut prev, mut cur) = (s, first);
            loop {
                used.insert((prev.min(cur), prev.max(cur)));
                path.push(cur);
                if g.degree(cur) != 2 {
                    break;
                }
                let next = g.neighbors(cur).iter().copied().find(|&x| x != prev).unwrap();
                prev = cur;
                cur = next;
            }
            if path.first() > path.last() {
                path.reverse();
            }
            branches.push(Branch(path));
        }
    }
    branches.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.0.cmp(&b.0)));
    Ok(BranchDecomposition {
        rank: n,
        special,
        branches,
    })
}

/// Position of every quiver vertex on the cylinder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderLayout {
    decomposition: BranchDecomposition,
    place: BTreeMap<VertexId, (usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutJson {
    pub branches: Vec<Vec<usize>>,
    pub vertices: Vec<PlacedVertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacedVertex {
    pub id: VertexId,
    pub string: usize,
    pub height: usize,
    /// `[sheet, x]` for every sheet showing this vertex.
    pub sheets: Vec<[usize; 2]>,
}

/// Places vertex `k` on string `|i_k|` at the ordinal of `k` among all positions.
pub fn layout(q: &BfzQuiver, b: &BranchDecomposition) -> Result<CylinderLayout> {
    CylinderLayout::new(&q.letters(), b)
}

impl CylinderLayout {
    /// Heights are the ordinals of the vertex ids in increasing order.
    pub fn new(letters: &BTreeMap<VertexId, usize>, b: &BranchDecomposition) -> Result<Self> {
        let mut place = BTreeMap::new();
        for (height, (&v, &s)) in letters.iter().enumerate() {
            if s == 0 || s > b.rank() {
                return Err(Error::Layout(format!(
                    "vertex {v} has letter {s} outside 1..={}",
                    b.rank()
                )));
            }
            place.insert(v, (s, height));
        }
        Ok(Self {
            decomposition: b.clone(),
            place,
        })
    }

    pub fn decomposition(&self) -> &BranchDecomposition {
        &self.decomposition
    }

    pub fn sheet_count(&self) -> usize {
        self.decomposition.branches.len()
    }

    pub fn string(&self, v: VertexId) -> Option<usize> {
        self.place.get(&v).map(|p| p.0)
    }

    pub fn height(&self, v: VertexId) -> Option<usize> {
        self.place.get(&v).map(|p| p.1)
    }

    /// Vertices on string `s`, bottom to top.
    pub fn string_vertices(&self, s: usize) -> Vec<VertexId> {
        let mut vs: Vec<(usize, VertexId)> = self
            .place
            .iter()
            .filter(|(_, p)| p.0 == s)
            .map(|(&v, p)| (p.1, v))
            .collect();
        vs.sort();
        vs.into_iter().map(|(_, v)| v).collect()
    }

    /// `(x, y)` of `v` in sheet coordinates, if its string belongs to the sheet.
    pub fn sheet_coords(&self, sheet: usize, v: VertexId) -> Option<(i64, i64)> {
        let (s, h) = *self.place.get(&v)?;
        let x = self.decomposition.branches.get(sheet)?.offset(s)?;
        Some((x as i64, h as i64))
    }

    /// Does `a` project onto a vertex or an edge of Γ?
    pub fn projects(&self, a: &Arrow) -> bool {
        match (self.string(a.src), self.string(a.tgt)) {
            (Some(i), Some(j)) => i == j || self.decomposition.sheet_of_edge(i, j).is_some(),
            _ => false,
        }
    }

    /// Sheets drawing arrow `a`: every sheet through its string if it stays on
    /// one string, the sheet of its Dynkin edge otherwise.
    pub fn arrow_sheets(&self, a: &Arrow) -> Vec<usize> {
        match (self.string(a.src), self.string(a.tgt)) {
            (Some(i), Some(j)) if i == j => self.decomposition.sheets_of_string(i),
            (Some(i), Some(j)) => self.decomposition.sheet_of_edge(i, j).into_iter().collect(),
            _ => Vec::new(),
        }
    }

    /// Vertices and arrows drawn on one sheet.
    pub fn sheet_part<'q>(&self, q: &'q Quiver, sheet: usize) -> (Vec<VertexId>, Vec<&'q Arrow>) {
        let vs = q
            .vertex_ids()
            .filter(|&v| self.sheet_coords(sheet, v).is_some())
            .collect();
        let arrows = q
            .arrows()
            .iter()
            .filter(|a| self.arrow_sheets(a).contains(&sheet))
            .collect();
        (vs, arrows)
    }

    pub fn to_json(&self) -> LayoutJson {
        LayoutJson {
            branches: self
                .decomposition
                .branches
                .iter()
                .map(|b| b.0.clone())
                .collect(),
            vertices: self
                .place
                .iter()
                .map(|(&v, &(s, h))| PlacedVertex {
                    id: v,
                    string: s,
                    height: h,
                    sheets: self
                        .decomposition
                        .sheets_of_string(s)
                        .into_iter()
                        .map(|sh| [sh, self.decomposition.branches[sh].offset(s).unwrap()])
                        .collect(),
                })
                .collect(),
        }
    }
}
