//! SVG drawings of amoeba graphs and DOT drawings of digit trees.
//!
//! Coordinates stay exact until serialization, where they are rounded to six
//! decimals. The SVG y-axis points down, so every y is negated.

use std::fmt::Write as _;

use num_traits::{Signed, Zero};

use crate::amoeba::{AmoebaGraph, DigitTree, NodeKind};
use crate::arrangement::crossing_points;
use crate::geometry::{direction_point, Point};
use crate::rational::{format_rational, parse_decimal, to_decimal, Rational};

const DIGITS: u32 = 6;

/// Visible rectangle in amoeba coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canvas {
    pub x0: Rational,
    pub y0: Rational,
    pub x1: Rational,
    pub y1: Rational,
}

impl Canvas {
    /// Box around the vertices and edge crossings of `g`, padded by 10% of
    /// its larger side (at least 1).
    pub fn around(g: &AmoebaGraph) -> Canvas {
        let pts = crossing_points(g);
        let mut it = pts.iter().chain(g.vertices.iter());
        let Some(first) = it.next() else {
            return Canvas {
                x0: Rational::from_integer((-1).into()),
                y0: Rational::from_integer((-1).into()),
                x1: Rational::from_integer(1.into()),
                y1: Rational::from_integer(1.into()),
            };
        };
        let mut c = Canvas {
            x0: first.x.clone(),
            y0: first.y.clone(),
            x1: first.x.clone(),
            y1: first.y.clone(),
        };
        for p in it {
            c.x0 = c.x0.min(p.x.clone());
            c.y0 = c.y0.min(p.y.clone());
            c.x1 = c.x1.max(p.x.clone());
            c.y1 = c.y1.max(p.y.clone());
        }
        let side = (&c.x1 - &c.x0).max(&c.y1 - &c.y0);
        let pad = (side / Rational::from_integer(10.into())).max(Rational::from_integer(1.into()));
        c.x0 -= &pad;
        c.y0 -= &pad;
        c.x1 += &pad;
        c.y1 += &pad;
        c
    }

    fn contains(&self, p: &Point) -> bool {
        self.x0 <= p.x && p.x <= self.x1 && self.y0 <= p.y && p.y <= self.y1
    }

    /// Where the ray from `base` along `d` leaves the canvas; `None` when the
    /// base lies outside.
    fn exit(&self, base: &Point, d: &Point) -> Option<Point> {
        if !self.contains(base) {
            return None;
        }
        let mut best: Option<Rational> = None;
        for (b, dv, lo, hi) in [
            (&base.x, &d.x, &self.x0, &self.x1),
            (&base.y, &d.y, &self.y0, &self.y1),
        ] {
            if dv.is_zero() {
                continue;
            }
            let wall = if dv.is_positive() { hi } else { lo };
            let s = (wall - b) / dv;
            best = Some(match best {
                Some(cur) if cur <= s => cur,
                _ => s,
            });
        }
        best.map(|s| base.add(&d.scale(&s)))
    }
}

fn num(q: &Rational) -> String {
    to_decimal(q, DIGITS)
}

/// Palette cycled over branch classes.
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

/// One `<line>` per edge, rays clipped to `canvas` (the default is
/// [`Canvas::around`]). `labels[e]` names the tree branch of edge `e`
/// (segments first, then rays) and becomes its `branch-{label}` class;
/// missing labels fall back to the edge index.
pub fn emit_svg(g: &AmoebaGraph, canvas: Option<&Canvas>, labels: &[usize]) -> String {
    let owned;
    let canvas = match canvas {
        Some(c) => c,
        None => {
            owned = Canvas::around(g);
            &owned
        }
    };
    let width = &canvas.x1 - &canvas.x0;
    let height = &canvas.y1 - &canvas.y0;
    let stroke = width.clone().max(height.clone()) / Rational::from_integer(400.into());
    let classes: Vec<usize> = (0..g.edge_count())
        .map(|e| labels.get(e).copied().unwrap_or(e))
        .collect();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        num(&canvas.x0),
        num(&-canvas.y1.clone()),
        num(&width),
        num(&height)
    );
    let mut styled = classes.clone();
    styled.sort_unstable();
    styled.dedup();
    out.push_str("<style>\n");
    for c in &styled {
        let _ = writeln!(
            out,
            ".branch-{c} {{ stroke: {}; }}",
            PALETTE[c % PALETTE.len()]
        );
    }
    out.push_str("</style>\n");
    let _ = writeln!(
        out,
        r#"<g fill="none" stroke-width="{}" stroke-linecap="round">"#,
        num(&stroke)
    );
    let line = |out: &mut String, class: usize, a: &Point, b: &Point| {
        let _ = writeln!(
            out,
            r#"<line class="branch-{class}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            num(&a.x),
            num(&-a.y.clone()),
            num(&b.x),
            num(&-b.y.clone())
        );
    };
    let mut e = 0;
    for &(u, v) in &g.segments {
        line(&mut out, classes[e], &g.vertices[u], &g.vertices[v]);
        e += 1;
    }
    for r in &g.rays {
        let base = &g.vertices[r.base];
        if let Some(end) = canvas.exit(base, &direction_point(&r.dir)) {
            if end != *base {
                line(&mut out, classes[e], base, &end);
            }
        }
        e += 1;
    }
    out.push_str("</g>\n</svg>\n");
    out
}

/// The `<line>` elements of an SVG produced by [`emit_svg`], back in amoeba
/// coordinates (as rounded at serialization).
pub fn svg_lines(svg: &str) -> Vec<(Point, Point)> {
    let attr = |tag: &str, name: &str| -> Option<Rational> {
        let key = format!(" {name}=\"");
        let start = tag.find(&key)? + key.len();
        let end = start + tag[start..].find('"')?;
        parse_decimal(&tag[start..end]).ok()
    };
    svg.lines()
        .filter(|l| l.trim_start().starts_with("<line"))
        .filter_map(|l| {
            let (x1, y1, x2, y2) = (
                attr(l, "x1")?,
                attr(l, "y1")?,
                attr(l, "x2")?,
                attr(l, "y2")?,
            );
            Some((Point::new(x1, -y1), Point::new(x2, -y2)))
        })
        .collect()
}

/// Graphviz rendering: internal nodes show their depth, leaves their form
/// and zero, edges their digit.
pub fn emit_dot(tree: &DigitTree) -> String {
    let mut out = String::from("digraph digit_tree {\n  node [fontname=\"monospace\"];\n");
    let mut ids: Vec<usize> = vec![tree.root()];
    ids.extend(tree.branches().into_iter().map(|(_, c)| c));
    for &id in &ids {
        let label = match tree.node(id).kind {
            NodeKind::Internal { depth, .. } => format!("depth {depth}"),
            NodeKind::Leaf { form } => {
                let z = tree.zero_of(form).map(format_rational).unwrap_or_default();
                format!("f{form}: {z}")
            }
        };
        let shape = match tree.node(id).kind {
            NodeKind::Internal { .. } => "ellipse",
            NodeKind::Leaf { .. } => "box",
        };
        let _ = writeln!(out, "  n{id} [label=\"{label}\", shape={shape}];");
    }
    for &id in &ids {
        for &(digit, child) in tree.children(id) {
            let _ = writeln!(out, "  n{id} -> n{child} [label=\"{digit}\"];");
        }
    }
    out.push_str("}\n");
    out
}
