#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use dimerbfz::bfz::{build_bfz_quiver_with, FrozenArrows, Interleaving, ShuffledWord};
use dimerbfz::cartan::{GeneralizedCartanMatrix, WeylWord};
use dimerbfz::cylinder::{branch_decompose, enumerate_faces, layout, CylinderLayout};
use dimerbfz::quiver::{Arrow, Quiver, Vertex, VertexId};

pub fn gcm(name: &str) -> GeneralizedCartanMatrix {
    GeneralizedCartanMatrix::named(name).unwrap()
}

/// Arrows a..e = 0..4: a: 1→2, b: 2→4, c: 4→1, d: 1→3, e: 3→4.
pub fn two_triangles() -> Quiver {
    hand_quiver(4, &[], &[(1, 2), (2, 4), (4, 1), (1, 3), (3, 4)])
}

/// Interleaving of `m` letters with `k` of them from v, shuffled by a xorshift stream.
pub fn mask_from_seed(m: usize, k: usize, seed: u64) -> Vec<bool> {
    let mut order: Vec<usize> = (0..m).collect();
    let mut x = seed | 1;
    for i in (1..m).rev() {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        order.swap(i, (x % (i as u64 + 1)) as usize);
    }
    let mut mask = vec![false; m];
    for &i in &order[..k] {
        mask[i] = true;
    }
    mask
}

pub fn hand_quiver(n: usize, frozen: &[VertexId], pairs: &[(VertexId, VertexId)]) -> Quiver {
    let vertices = (1..=n as VertexId)
        .map(|id| Vertex { id, frozen: frozen.contains(&id), label: None })
        .collect();
    let arrows = pairs.iter().enumerate().map(|(id, &(src, tgt))| Arrow { id, src, tgt }).collect();
    Quiver::new(vertices, arrows).unwrap()
}

pub fn from_upper(n: usize, upper: &[i64], frozen: &[bool]) -> Quiver {
    let mut pairs = Vec::new();
    let mut it = upper.iter();
    for i in 1..=n as VertexId {
        for j in i + 1..=n as VertexId {
            let b = *it.next().unwrap();
            let both = frozen[i as usize - 1] && frozen[j as usize - 1];
            for _ in 0..b.unsigned_abs() {
                if !both {
                    pairs.push(if b > 0 { (i, j) } else { (j, i) });
                }
            }
        }
    }
    let fz: Vec<VertexId> = (1..=n as VertexId).filter(|&i| frozen[i as usize - 1]).collect();
    hand_quiver(n, &fz, &pairs)
}

pub fn matrix(q: &Quiver) -> BTreeMap<(VertexId, VertexId), i64> {
    let ids: Vec<VertexId> = q.vertex_ids().collect();
    let mut m = BTreeMap::new();
    for &i in &ids {
        for &j in &ids {
            m.insert((i, j), q.exchange_entry(i, j));
        }
    }
    m
}

pub fn matrix_mutation(q: &Quiver, k: VertexId) -> BTreeMap<(VertexId, VertexId), i64> {
    let b = matrix(q);
    let mut out = BTreeMap::new();
    for (&(i, j), &bij) in &b {
        let v = if i == k || j == k {
            -bij
        } else if q.is_frozen(i) && q.is_frozen(j) {
            bij
        } else {
            let (bik, bkj) = (b[&(i, k)], b[&(k, j)]);
            bij + bik.signum() * (bik * bkj).max(0)
        };
        out.insert((i, j), v);
    }
    out
}

// Face oracle: a cycle of the sheet graph bounds a face iff its polygon is empty.

pub type Pt = (i64, i64);

pub fn on_segment(p: Pt, a: Pt, b: Pt) -> bool {
    let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
    cross == 0 && p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
}

pub fn strictly_inside(poly: &[Pt], p: Pt) -> bool {
    let n = poly.len();
    if (0..n).any(|i| on_segment(p, poly[i], poly[(i + 1) % n])) {
        return false;
    }
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if (a.1 > p.1) != (b.1 > p.1) {
            // x-coordinate of the crossing compared without division.
            let lhs = (p.0 - a.0) * (b.1 - a.1);
            let rhs = (b.0 - a.0) * (p.1 - a.1);
            if (b.1 > a.1 && lhs < rhs) || (b.1 < a.1 && lhs > rhs) {
                inside = !inside;
            }
        }
    }
    inside
}

pub fn oracle_faces(q: &Quiver, l: &CylinderLayout, sheet: usize) -> BTreeSet<BTreeSet<usize>> {
    let (vs, arrows) = l.sheet_part(q, sheet);
    let at = |v: VertexId| l.sheet_coords(sheet, v).unwrap();
    let mut adj: BTreeMap<VertexId, Vec<(VertexId, usize)>> = BTreeMap::new();
    for a in &arrows {
        adj.entry(a.src).or_default().push((a.tgt, a.id));
        adj.entry(a.tgt).or_default().push((a.src, a.id));
    }
    let mut cycles = BTreeSet::new();
    fn dfs(
        adj: &BTreeMap<VertexId, Vec<(VertexId, usize)>>,
        start: VertexId,
        path: &mut Vec<VertexId>,
        edges: &mut Vec<usize>,
        out: &mut BTreeSet<(Vec<VertexId>, BTreeSet<usize>)>,
    ) {
        let v = *path.last().unwrap();
        for &(w, e) in adj.get(&v).into_iter().flatten() {
            if edges.contains(&e) {
                continue;
            }
            if w == start && path.len() >= 3 {
                let mut es = edges.clone();
                es.push(e);
                out.insert((path.clone(), es.into_iter().collect()));
            } else if w > start && !path.contains(&w) {
                path.push(w);
                edges.push(e);
                dfs(adj, start, path, edges, out);
                path.pop();
                edges.pop();
            }
        }
    }
    let mut found = BTreeSet::new();
    for &s in adj.keys() {
        dfs(&adj, s, &mut vec![s], &mut Vec::new(), &mut found);
    }
    for (path, es) in found {
        let poly: Vec<Pt> = path.iter().map(|&v| (2 * at(v).0, 2 * at(v).1)).collect();
        let vertex_inside = vs.iter().any(|&v| strictly_inside(&poly, (2 * at(v).0, 2 * at(v).1)));
        let chord_inside = arrows.iter().filter(|a| !es.contains(&a.id)).any(|a| {
            let (p, r) = (at(a.src), at(a.tgt));
            strictly_inside(&poly, (p.0 + r.0, p.1 + r.1))
        });
        if !vertex_inside && !chord_inside {
            cycles.insert(es);
        }
    }
    cycles
}

pub fn assert_faces_match(q: &Quiver, l: &CylinderLayout) {
    let faces = enumerate_faces(q, l).unwrap();
    for sheet in 0..l.sheet_count() {
        let traced: BTreeSet<BTreeSet<usize>> =
            faces.iter().filter(|f| f.sheet == sheet).map(|f| f.arrows.iter().copied().collect()).collect();
        assert_eq!(traced, oracle_faces(q, l, sheet), "sheet {sheet}");
    }
}

pub fn shuffled(name: &str, u: &WeylWord, v: &WeylWord, mask: &[bool], fa: FrozenArrows) -> (Quiver, CylinderLayout) {
    let g = gcm(name);
    let il = Interleaving(mask.to_vec());
    let w = ShuffledWord::new(&g, u, v, &il).unwrap();
    let q = build_bfz_quiver_with(&g, &w, fa).unwrap();
    let l = layout(&q, &branch_decompose(&g.dynkin()).unwrap()).unwrap();
    (q.quiver().clone(), l)
}

