//! DOT and TikZ renderings of a cell.

use std::fmt::Write;

use dimerbfz::bfz::ArrowKind;
use dimerbfz::quiver::{variable_name, VertexId};

use crate::input::Cell;

fn kind_name(k: ArrowKind) -> &'static str {
    match k {
        ArrowKind::Horizontal => "horizontal",
        ArrowKind::Inclined => "inclined",
        ArrowKind::Other => "other",
    }
}

pub fn dot(cell: &Cell) -> String {
    let q = cell.bfz.quiver();
    let mut out = String::from("digraph Q {\n  rankdir=LR;\n");
    for v in q.vertices() {
        let string = cell.layout.string(v.id).unwrap_or(0);
        let height = cell.layout.height(v.id).unwrap_or(0);
        let shape = if v.frozen { "box" } else { "circle" };
        writeln!(
            out,
            "  \"{}\" [label=\"{}\", shape={shape}, string={string}, height={height}];",
            v.id,
            variable_name(v.id)
        )
        .unwrap();
    }
    for a in q.arrows() {
        writeln!(
            out,
            "  \"{}\" -> \"{}\" [id={}, kind={}];",
            a.src,
            a.tgt,
            a.id,
            kind_name(cell.bfz.kind(a.id))
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

fn node(sheet: usize, v: VertexId) -> String {
    format!("s{sheet}{}{}", if v < 0 { 'm' } else { 'p' }, v.unsigned_abs())
}

/// Strings as vertical lines, one block per sheet, blocks side by side.
pub fn tikz(cell: &Cell) -> String {
    let q = cell.bfz.quiver();
    let l = &cell.layout;
    let top = q.vertex_ids().filter_map(|v| l.height(v)).max().unwrap_or(0);
    let mut out = String::new();
    out.push_str("\\begin{tikzpicture}[>=stealth, y=0.5cm,\n");
    out.push_str("  vertex/.style={circle, fill, inner sep=1.5pt},\n");
    out.push_str("  frozen/.style={rectangle, draw, fill=white, inner sep=2pt}]\n");
    let mut shift = 0;
    for (sheet, branch) in l.decomposition().branches().iter().enumerate() {
        writeln!(out, "\\begin{{scope}}[xshift={shift}cm]").unwrap();
        writeln!(out, "  % sheet {sheet}: strings {:?}", branch.strings()).unwrap();
        for (x, s) in branch.strings().iter().enumerate() {
            writeln!(out, "  \\draw[gray!50] ({x},0) -- ({x},{}) node[above, gray] {{{s}}};", top + 1).unwrap();
        }
        let (vs, arrows) = l.sheet_part(q, sheet);
        for v in vs {
            let (x, y) = l.sheet_coords(sheet, v).unwrap();
            let style = if q.is_frozen(v) { "frozen" } else { "vertex" };
            writeln!(out, "  \\node[{style}, label=right:{{\\tiny ${v}$}}] ({}) at ({x},{y}) {{}};", node(sheet, v)).unwrap();
        }
        for a in arrows {
            writeln!(out, "  \\draw[->, thick] ({}) -- ({});", node(sheet, a.src), node(sheet, a.tgt)).unwrap();
        }
        out.push_str("\\end{scope}\n");
        shift += branch.strings().len() + 1;
    }
    out.push_str("\\end{tikzpicture}\n");
    out
}
