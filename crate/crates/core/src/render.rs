//! TikZ and SVG emitters for paths and trees.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometric::GeometricNct;
use crate::path::{KDyckPath, Step};
use crate::signature::class_of_level;
use crate::tree::{KnctNode, KnctTree};

const PALETTE: [&str; 8] = [
    "red", "blue", "green", "orange", "purple", "brown", "teal", "magenta",
];
const LEFT_COLOR: &str = "lime";
const RIGHT_COLOR: &str = "pink";
const UNIT: f64 = 20.0;

pub fn class_color(class: usize) -> &'static str {
    PALETTE[(class - 1) % PALETTE.len()]
}

struct Segment {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
    // residue class of a down-step, None for up-steps
    class: Option<usize>,
}

fn path_segments(path: &KDyckPath) -> Vec<Segment> {
    let mut level = 0i64;
    let k = path.k() as i64;
    path.steps()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let from = level;
            level += if *s == Step::Up { 1 } else { -k };
            Segment {
                x0: i as f64,
                y0: from as f64,
                x1: (i + 1) as f64,
                y1: level as f64,
                class: (*s == Step::Down).then(|| class_of_level(level, path.k())),
            }
        })
        .collect()
}

fn path_extent(path: &KDyckPath) -> (i64, i64) {
    let prof = path.level_profile();
    let lo = prof.iter().copied().min().unwrap_or(0).min(0);
    let hi = prof.iter().copied().max().unwrap_or(0).max(0);
    (lo, hi)
}

/// SVG drawing of a path on a unit grid. Down-steps are colored by the
/// residue class of their landing level and tagged `class="down-rN"`.
pub fn path_svg(path: &KDyckPath) -> String {
    let (lo, hi) = path_extent(path);
    let w = path.len() as f64;
    let h = (hi - lo) as f64;
    let to_y = |y: f64| (hi as f64 - y) * UNIT + UNIT;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}">"#,
        w * UNIT + 2.0 * UNIT,
        h * UNIT + 2.0 * UNIT
    );
    let _ = writeln!(
        s,
        r#"<g transform="translate({UNIT},0)" stroke-linecap="round">"#
    );
    for i in 0..=path.len() {
        let x = i as f64 * UNIT;
        let _ = writeln!(
            s,
            r#"<line class="grid" x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="lightgray" stroke-width="0.5"/>"#,
            to_y(hi as f64),
            to_y(lo as f64)
        );
    }
    for y in lo..=hi {
        let yy = to_y(y as f64);
        let _ = writeln!(
            s,
            r#"<line class="grid" x1="0" y1="{yy}" x2="{}" y2="{yy}" stroke="lightgray" stroke-width="0.5"/>"#,
            w * UNIT
        );
    }
    for seg in path_segments(path) {
        let (class, color, width) = match seg.class {
            Some(c) => (format!("down-r{c}"), class_color(c), 3.0),
            None => ("up".to_string(), "black", 1.5),
        };
        let _ = writeln!(
            s,
            r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="{width}"/>"#,
            seg.x0 * UNIT,
            to_y(seg.y0),
            seg.x1 * UNIT,
            to_y(seg.y1)
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

pub fn path_tikz(path: &KDyckPath) -> String {
    let (lo, hi) = path_extent(path);
    let mut s = String::from("\\begin{tikzpicture}[scale=0.4]\n");
    let _ = writeln!(
        s,
        "  \\draw[very thin,gray] (0,{lo}) grid ({},{hi});",
        path.len()
    );
    for seg in path_segments(path) {
        let style = match seg.class {
            Some(c) => format!("very thick,{}", class_color(c)),
            None => "thick".to_string(),
        };
        let _ = writeln!(
            s,
            "  \\draw[{style}] ({},{}) -- ({},{});",
            seg.x0, seg.y0, seg.x1, seg.y1
        );
    }
    s.push_str("\\end{tikzpicture}\n");
    s
}

fn circle_position(i: usize, n: usize, radius: f64) -> (f64, f64) {
    let angle = std::f64::consts::TAU * (i as f64 - 1.0) / n as f64 + std::f64::consts::FRAC_PI_2;
    (radius * angle.cos(), radius * angle.sin())
}

/// Circular drawing with left edges in lime and right edges in pink.
pub fn geometric_svg(tree: &GeometricNct) -> String {
    let n = tree.n();
    let r = 6.0 * UNIT;
    let c = r + 2.0 * UNIT;
    let pos = |i: usize| {
        let (x, y) = circle_position(i, n, r);
        (c + x, c - y)
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{0}">"#,
        2.0 * c
    );
    for (p, q) in tree.oriented_edges() {
        let (class, color) = if q < p {
            ("left", LEFT_COLOR)
        } else {
            ("right", RIGHT_COLOR)
        };
        let ((x0, y0), (x1, y1)) = (pos(p), pos(q));
        let _ = writeln!(
            s,
            r#"<line class="{class}" x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="{color}" stroke-width="3"/>"#
        );
    }
    for i in 1..=n {
        let (x, y) = pos(i);
        let _ = writeln!(
            s,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="{}" fill="white" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle" font-size="12">{i}</text>"#,
            0.6 * UNIT,
            y + 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn geometric_tikz(tree: &GeometricNct) -> String {
    let n = tree.n();
    let mut s = String::from(
        "\\begin{tikzpicture}[every node/.style={circle,draw,inner sep=2pt,minimum size=2em}]\n",
    );
    for i in 1..=n {
        let (x, y) = circle_position(i, n, 3.0);
        let _ = writeln!(s, "  \\node ({i}) at ({x:.3},{y:.3}) {{${i}$}};");
    }
    for (p, q) in tree.oriented_edges() {
        let color = if q < p { LEFT_COLOR } else { RIGHT_COLOR };
        let _ = writeln!(s, "  \\draw[{color},very thick] ({p}) to ({q});");
    }
    s.push_str("\\end{tikzpicture}\n");
    s
}

/// Node coordinates of a layered drawing; node 0 is the root.
#[derive(Clone, Debug)]
pub struct TreeLayout {
    pub nodes: Vec<(f64, f64)>,
    /// `(parent, child, class)`
    pub edges: Vec<(usize, usize, usize)>,
}

/// Leaves take consecutive columns left to right; an inner node sits midway
/// between its first and last child. Depth gives the row.
pub fn layout_tree(tree: &KnctTree) -> TreeLayout {
    let k = tree.k();
    let mut layout = TreeLayout {
        nodes: vec![(0.0, 0.0)],
        edges: Vec::new(),
    };
    let mut next_col = 0.0;
    fn place(
        node: &KnctNode,
        depth: usize,
        class: usize,
        parent: usize,
        k: usize,
        next_col: &mut f64,
        layout: &mut TreeLayout,
    ) -> f64 {
        let id = layout.nodes.len();
        layout.nodes.push((0.0, depth as f64));
        layout.edges.push((parent, id, class));
        let mut xs = Vec::new();
        for (g, group) in node.groups.iter().enumerate() {
            let child_class = class_of_level((class + g + 1) as i64, k);
            for child in group {
                xs.push(place(
                    child,
                    depth + 1,
                    child_class,
                    id,
                    k,
                    next_col,
                    layout,
                ));
            }
        }
        let x = match (xs.first(), xs.last()) {
            (Some(a), Some(b)) => (a + b) / 2.0,
            _ => {
                let x = *next_col;
                *next_col += 1.0;
                x
            }
        };
        layout.nodes[id].0 = x;
        x
    }
    let xs: Vec<f64> = tree
        .root_children()
        .iter()
        .map(|c| place(c, 1, k, 0, k, &mut next_col, &mut layout))
        .collect();
    layout.nodes[0].0 = match (xs.first(), xs.last()) {
        (Some(a), Some(b)) => (a + b) / 2.0,
        _ => 0.0,
    };
    layout
}

/// Fails if two nodes of a layout are closer than half a column.
pub fn check_no_overlap(layout: &TreeLayout) -> Result<()> {
    for (i, a) in layout.nodes.iter().enumerate() {
        for (j, b) in layout.nodes.iter().enumerate().skip(i + 1) {
            if (a.0 - b.0).hypot(a.1 - b.1) < 0.5 {
                return Err(Error::MalformedTree(format!(
                    "nodes {i} and {j} overlap at {a:?} / {b:?}"
                )));
            }
        }
    }
    Ok(())
}

/// Layered drawing of a butterfly tree, edges colored by class.
pub fn tree_svg(tree: &KnctTree) -> Result<String> {
    let layout = layout_tree(tree);
    check_no_overlap(&layout)?;
    let cols = layout.nodes.iter().map(|p| p.0).fold(0.0, f64::max) + 1.0;
    let rows = layout.nodes.iter().map(|p| p.1).fold(0.0, f64::max) + 1.0;
    let step = 2.0 * UNIT;
    let at = |p: (f64, f64)| (p.0 * step + step, p.1 * step + step);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}">"#,
        cols * step + step,
        rows * step + step
    );
    for &(p, c, class) in &layout.edges {
        let ((x0, y0), (x1, y1)) = (at(layout.nodes[p]), at(layout.nodes[c]));
        let _ = writeln!(
            s,
            r#"<line class="edge-r{class}" x1="{x0}" y1="{y0}" x2="{x1}" y2="{y1}" stroke="{}" stroke-width="3"/>"#,
            class_color(class)
        );
    }
    for &p in &layout.nodes {
        let (x, y) = at(p);
        let _ = writeln!(
            s,
            r#"<circle cx="{x}" cy="{y}" r="{}" fill="white" stroke="black"/>"#,
            0.3 * UNIT
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn tree_tikz(tree: &KnctTree) -> Result<String> {
    let layout = layout_tree(tree);
    check_no_overlap(&layout)?;
    let mut s =
        String::from("\\begin{tikzpicture}[every node/.style={circle,draw,inner sep=2pt}]\n");
    for (i, &(x, y)) in layout.nodes.iter().enumerate() {
        let _ = writeln!(s, "  \\node (n{i}) at ({x},{}) {{}};", -1.5 * y);
    }
    for &(p, c, class) in &layout.edges {
        let _ = writeln!(
            s,
            "  \\draw[very thick,{}] (n{p}) -- (n{c});",
            class_color(class)
        );
    }
    s.push_str("\\end{tikzpicture}\n");
    Ok(s)
}
