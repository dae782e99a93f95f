use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::CylinderLayout;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::quiver::{Arrow, ArrowId, Quiver, VertexId};

type Point = (i64, i64);

/// Direction of an oriented face boundary in sheet coordinates
/// (x along the branch, y = height).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "cw")]
    Clockwise,
    #[serde(rename = "ccw")]
    Anticlockwise,
}

impl Orientation {
    /// Coefficient of the face in the superpotential.
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Clockwise => 1,
            Orientation::Anticlockwise => -1,
        }
    }
}

/// A bounded face of one sheet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    /// For an oriented face, the directed cycle starting at its minimal vertex;
    /// otherwise the anticlockwise boundary walk.
    pub arrows: Vec<ArrowId>,
    /// `vertices[i]` is where `arrows[i]` is entered along the walk.
    pub vertices: Vec<VertexId>,
    pub sheet: usize,
    /// Dynkin edge the face projects onto, when it spans exactly two adjacent strings.
    pub edge: Option<(usize, usize)>,
    /// `None` when the boundary is not a directed cycle.
    pub orientation: Option<Orientation>,
}

impl Face {
    pub fn is_oriented(&self) -> bool {
        self.orientation.is_some()
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn contains_arrow(&self, a: ArrowId) -> bool {
        self.arrows.contains(&a)
    }

    /// Coefficient in the superpotential, 0 for unoriented faces.
    pub fn sign(&self) -> i64 {
        self.orientation.map_or(0, Orientation::sign)
    }

    pub fn to_json(&self) -> FaceJson {
        FaceJson {
            arrows: self.arrows.clone(),
            vertices: self.vertices.clone(),
            sheet: self.sheet,
            edge: self.edge.map(|(i, j)| [i, j]),
            orientation: self.orientation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceJson {
    pub arrows: Vec<ArrowId>,
    pub vertices: Vec<VertexId>,
    pub sheet: usize,
    pub edge: Option<[usize; 2]>,
    pub orientation: Option<Orientation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CheckReport {
    pub pass: bool,
    pub violations: Vec<usize>,
}

impl CheckReport {
    fn from_violations(violations: Vec<usize>) -> Self {
        Self {
            pass: violations.is_empty(),
            violations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub sheet: usize,
    pub arrows: [ArrowId; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PlanarityReport {
    pub pass: bool,
    pub crossings: Vec<Crossing>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimerReport {
    /// Axiom 1: arrows project onto vertices or edges of Γ (arrow ids).
    pub arrow_projection: CheckReport,
    /// Axiom 2: faces project onto edges (indices into `faces`).
    pub face_projection: CheckReport,
    /// Axiom 3: faces are directed cycles (indices into `faces`).
    pub face_orientation: CheckReport,
    /// Faces with a single vertex on one of their two strings (indices into `faces`).
    pub face_shape: CheckReport,
    /// Sheets where V − E + F differs from the number of components.
    pub euler: CheckReport,
    pub planarity: PlanarityReport,
    pub faces: Vec<FaceJson>,
}

impl DimerReport {
    /// The three axioms together with planarity, which face tracing needs.
    pub fn passes(&self) -> bool {
        self.arrow_projection.pass
            && self.face_projection.pass
            && self.face_orientation.pass
            && self.planarity.pass
    }
}

pub fn check_arrow_projection(q: &Quiver, layout: &CylinderLayout) -> CheckReport {
    CheckReport::from_violations(
        q.arrows()
            .iter()
            .filter(|a| !layout.projects(a))
            .map(|a| a.id)
            .collect(),
    )
}

fn cross(o: Point, a: Point, b: Point) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn dot(o: Point, a: Point, b: Point) -> i64 {
    (a.0 - o.0) * (b.0 - o.0) + (a.1 - o.1) * (b.1 - o.1)
}

/// `r` on the closed segment `pq`, given the three are collinear.
fn within(p: Point, q: Point, r: Point) -> bool {
    r.0 >= p.0.min(q.0) && r.0 <= p.0.max(q.0) && r.1 >= p.1.min(q.1) && r.1 <= p.1.max(q.1)
}

/// Do two straight arrows meet anywhere other than a shared endpoint?
fn conflict(a: (VertexId, VertexId), b: (VertexId, VertexId), at: impl Fn(VertexId) -> Point) -> bool {
    let ends_a = [a.0, a.1];
    let ends_b = [b.0, b.1];
    let shared: Vec<VertexId> = ends_a.iter().copied().filter(|v| ends_b.contains(v)).collect();
    match shared.len() {
        2 => true,
        1 => {
            let c = shared[0];
            let p = if a.0 == c { a.1 } else { a.0 };
            let r = if b.0 == c { b.1 } else { b.0 };
            let (c, p, r) = (at(c), at(p), at(r));
            cross(c, p, r) == 0 && dot(c, p, r) > 0
        }
        _ => {
            let (p1, p2, q1, q2) = (at(a.0), at(a.1), at(b.0), at(b.1));
            let d1 = cross(q1, q2, p1);
            let d2 = cross(q1, q2, p2);
            let d3 = cross(p1, p2, q1);
            let d4 = cross(p1, p2, q2);
            if d1 * d2 < 0 && d3 * d4 < 0 {
                return true;
            }
            (d1 == 0 && within(q1, q2, p1))
                || (d2 == 0 && within(q1, q2, p2))
                || (d3 == 0 && within(p1, p2, q1))
                || (d4 == 0 && within(p1, p2, q2))
        }
    }
}

fn sheet_crossings(q: &Quiver, layout: &CylinderLayout, sheet: usize) -> Vec<Crossing> {
    let (_, arrows) = layout.sheet_part(q, sheet);
    let at = |v| layout.sheet_coords(sheet, v).unwrap();
    let mut out = Vec::new();
    for (i, a) in arrows.iter().enumerate() {
        for b in &arrows[i + 1..] {
            if conflict((a.src, a.tgt), (b.src, b.tgt), at) {
                out.push(Crossing {
                    sheet,
                    arrows: [a.id.min(b.id), a.id.max(b.id)],
                });
            }
        }
    }
    out
}

pub fn check_planarity_per_sheet(q: &Quiver, layout: &CylinderLayout) -> PlanarityReport {
    planarity_with(q, layout, Execution::default())
}

fn planarity_with(q: &Quiver, layout: &CylinderLayout, exec: Execution) -> PlanarityReport {
    let sheets: Vec<usize> = (0..layout.sheet_count()).collect();
    let crossings: Vec<Crossing> = exec
        .map(&sheets, |&s| sheet_crossings(q, layout, s))
        .into_iter()
        .flatten()
        .collect();
    PlanarityReport {
        pass: crossings.is_empty(),
        crossings,
    }
}

/// Counterclockwise order of directions, starting from the positive x axis.
fn angle_cmp(a: Point, b: Point) -> Ordering {
    let half = |d: Point| if d.1 > 0 || (d.1 == 0 && d.0 > 0) { 0 } else { 1 };
    half(a)
        .cmp(&half(b))
        .then_with(|| 0.cmp(&(a.0 * b.1 - a.1 * b.0)))
}

/// A closed boundary walk; each step is (arrow, traversed along its direction).
struct Walk {
    steps: Vec<(ArrowId, bool)>,
    origins: Vec<VertexId>,
    twice_area: i64,
}

/// Traces every face of the sheet's rotation system, keeping each face on the left.
fn trace_sheet(layout: &CylinderLayout, sheet: usize, arrows: &[&Arrow]) -> Vec<Walk> {
    let at = |v| layout.sheet_coords(sheet, v).unwrap();
    // Dart 2i runs along arrow i, dart 2i+1 against it.
    let dart = |d: usize| {
        let a = arrows[d / 2];
        if d.is_multiple_of(2) {
            (a.src, a.tgt)
        } else {
            (a.tgt, a.src)
        }
    };
    let mut rotation: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
    for d in 0..2 * arrows.len() {
        rotation.entry(dart(d).0).or_default().push(d);
    }
    let mut slot = vec![0usize; 2 * arrows.len()];
    for (&v, ds) in rotation.iter_mut() {
        let o = at(v);
        ds.sort_by(|&x, &y| {
            let (px, py) = (at(dart(x).1), at(dart(y).1));
            angle_cmp((px.0 - o.0, px.1 - o.1), (py.0 - o.0, py.1 - o.1))
                .then(arrows[x / 2].id.cmp(&arrows[y / 2].id))
        });
        for (i, &d) in ds.iter().enumerate() {
            slot[d] = i;
        }
    }
    let next = |d: usize| {
        let v = dart(d).1;
        let ring = &rotation[&v];
        let back = d ^ 1;
        ring[(slot[back] + ring.len() - 1) % ring.len()]
    };
    let mut seen = vec![false; 2 * arrows.len()];
    let mut walks = Vec::new();
    for start in 0..2 * arrows.len() {
        if seen[start] {
            continue;
        }
        let mut d = start;
        let mut steps = Vec::new();
        let mut origins = Vec::new();
        let mut twice_area = 0;
        loop {
            seen[d] = true;
            let (u, v) = dart(d);
            let (pu, pv) = (at(u), at(v));
            twice_area += pu.0 * pv.1 - pv.0 * pu.1;
            steps.push((arrows[d / 2].id, d % 2 == 0));
            origins.push(u);
            d = next(d);
            if d == start {
                break;
            }
        }
        walks.push(Walk {
            steps,
            origins,
            twice_area,
        });
    }
    walks
}

fn rotate_to_min<T: Clone>(items: &[T], keys: &[VertexId]) -> (Vec<T>, Vec<VertexId>) {
    let n = keys.len();
    let m = *keys.iter().min().unwrap();
    let best = (0..n)
        .filter(|&i| keys[i] == m)
        .min_by_key(|&i| (0..n).map(|j| keys[(i + j) % n]).collect::<Vec<_>>())
        .unwrap();
    (
        (0..n).map(|j| items[(best + j) % n].clone()).collect(),
        (0..n).map(|j| keys[(best + j) % n]).collect(),
    )
}

fn face_from_walk(q: &Quiver, layout: &CylinderLayout, sheet: usize, w: &Walk) -> Face {
    let all_forward = w.steps.iter().all(|s| s.1);
    let all_backward = w.steps.iter().all(|s| !s.1);
    let (arrows, sources, orientation) = if all_forward || all_backward {
        let mut arrows: Vec<ArrowId> = w.steps.iter().map(|s| s.0).collect();
        if all_backward {
            arrows.reverse();
        }
        let sources: Vec<VertexId> = arrows.iter().map(|&a| q.arrow(a).unwrap().src).collect();
        let o = if all_forward {
            Orientation::Anticlockwise
        } else {
            Orientation::Clockwise
        };
        (arrows, sources, Some(o))
    } else {
        (w.steps.iter().map(|s| s.0).collect(), w.origins.clone(), None)
    };
    let (arrows, vertices) = rotate_to_min(&arrows, &sources);
    let strings: BTreeSet<usize> = vertices.iter().map(|&v| layout.string(v).unwrap()).collect();
    let edge = if strings.len() == 2 {
        let (i, j) = (*strings.first().unwrap(), *strings.last().unwrap());
        layout.decomposition().sheet_of_edge(i, j).map(|_| (i, j))
    } else {
        None
    };
    Face {
        arrows,
        vertices,
        sheet,
        edge,
        orientation,
    }
}

struct SheetFaces {
    faces: Vec<Face>,
    euler_ok: bool,
}

fn sheet_faces(q: &Quiver, layout: &CylinderLayout, sheet: usize) -> SheetFaces {
    let (vs, arrows) = layout.sheet_part(q, sheet);
    let walks = trace_sheet(layout, sheet, &arrows);
    let faces: Vec<Face> = walks
        .iter()
        .filter(|w| w.twice_area > 0)
        .map(|w| face_from_walk(q, layout, sheet, w))
        .collect();
    let mut parent: BTreeMap<VertexId, VertexId> = vs.iter().map(|&v| (v, v)).collect();
    fn find(p: &mut BTreeMap<VertexId, VertexId>, x: VertexId) -> VertexId {
        let mut r = x;
        while p[&r] != r {
            r = p[&r];
        }
        p.insert(x, r);
        r
    }
    for a in &arrows {
        let (x, y) = (find(&mut parent, a.src), find(&mut parent, a.tgt));
        parent.insert(x, y);
    }
    let components = vs.iter().filter(|&&v| find(&mut parent, v) == v).count() as i64;
    let euler = vs.len() as i64 - arrows.len() as i64 + faces.len() as i64;
    SheetFaces {
        faces,
        euler_ok: euler == components,
    }
}

fn sort_faces(layout: &CylinderLayout, faces: &mut [Face]) {
    faces.sort_by_key(|f| {
        let low = f.vertices.iter().map(|&v| layout.height(v).unwrap()).min();
        (low, f.sheet, f.arrows.clone())
    });
}

/// Bounded faces of every sheet, in a deterministic order.
pub fn enumerate_faces(q: &Quiver, layout: &CylinderLayout) -> Result<Vec<Face>> {
    let planarity = check_planarity_per_sheet(q, layout);
    if let Some(c) = planarity.crossings.first() {
        return Err(Error::NotPlanar { sheet: c.sheet });
    }
    let sheets: Vec<usize> = (0..layout.sheet_count()).collect();
    let mut faces: Vec<Face> = Execution::default()
        .map(&sheets, |&s| sheet_faces(q, layout, s).faces)
        .into_iter()
        .flatten()
        .collect();
    sort_faces(layout, &mut faces);
    Ok(faces)
}

/// Arrows of the sheet's subquiver that border an unbounded region.
pub fn boundary_arrows(q: &Quiver, layout: &CylinderLayout, sheet: usize) -> Result<BTreeSet<ArrowId>> {
    if !sheet_crossings(q, layout, sheet).is_empty() {
        return Err(Error::NotPlanar { sheet });
    }
    let (_, arrows) = layout.sheet_part(q, sheet);
    Ok(trace_sheet(layout, sheet, &arrows)
        .iter()
        .filter(|w| w.twice_area <= 0)
        .flat_map(|w| w.steps.iter().map(|&(a, _)| a))
        .collect())
}

pub fn check_dimer(q: &Quiver, layout: &CylinderLayout) -> DimerReport {
    check_dimer_with(q, layout, Execution::default())
}

/// Runs every check; faces are traced only on sheets without crossings.
pub fn check_dimer_with(q: &Quiver, layout: &CylinderLayout, exec: Execution) -> DimerReport {
    let planarity = planarity_with(q, layout, exec);
    let bad: BTreeSet<usize> = planarity.crossings.iter().map(|c| c.sheet).collect();
    let sheets: Vec<usize> = (0..layout.sheet_count()).filter(|s| !bad.contains(s)).collect();
    let per_sheet = exec.map(&sheets, |&s| sheet_faces(q, layout, s));
    let euler = sheets
        .iter()
        .zip(&per_sheet)
        .filter(|(_, r)| !r.euler_ok)
        .map(|(&s, _)| s)
        .collect();
    let mut faces: Vec<Face> = per_sheet.into_iter().flat_map(|r| r.faces).collect();
    sort_faces(layout, &mut faces);
    let indices = |pred: &dyn Fn(&Face) -> bool| -> Vec<usize> {
        faces
            .iter()
            .enumerate()
            .filter(|(_, f)| pred(f))
            .map(|(i, _)| i)
            .collect()
    };
    let face_shape = indices(&|f: &Face| {
        let mut count: BTreeMap<usize, usize> = BTreeMap::new();
        for &v in &f.vertices {
            *count.entry(layout.string(v).unwrap()).or_default() += 1;
        }
        !(count.len() == 2 && count.values().any(|&c| c == 1))
    });
    DimerReport {
        arrow_projection: check_arrow_projection(q, layout),
        face_projection: CheckReport::from_violations(indices(&|f: &Face| f.edge.is_none())),
        face_orientation: CheckReport::from_violations(indices(&|f: &Face| !f.is_oriented())),
        face_shape: CheckReport::from_violations(face_shape),
        euler: CheckReport::from_violations(euler),
        planarity,
        faces: faces.iter().map(Face::to_json).collect(),
    }
}
