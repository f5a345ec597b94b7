//! Exact piecewise-linear planar graphs made of segments and rays.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{direction_point, on_ray, on_segment, primitive_direction, Point};
use crate::rational::{format_rational, parse_rational};

/// One straight piece: a segment with distinct ends or a ray with a primitive integer direction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Piece {
    Segment(Point, Point),
    Ray { base: Point, dir: (BigInt, BigInt) },
}

impl Piece {
    /// Segment with endpoints in canonical order; `None` when the ends coincide.
    pub fn segment(a: Point, b: Point) -> Option<Piece> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(Piece::Segment(a, b)),
            std::cmp::Ordering::Greater => Some(Piece::Segment(b, a)),
            std::cmp::Ordering::Equal => None,
        }
    }

    /// Ray along `dir`; `None` when `dir` is zero.
    pub fn ray(base: Point, dir: &Point) -> Option<Piece> {
        if dir.is_origin() {
            return None;
        }
        Some(Piece::Ray {
            base,
            dir: primitive_direction(dir),
        })
    }

    pub fn contains(&self, p: &Point) -> bool {
        match self {
            Piece::Segment(a, b) => on_segment(a, b, p),
            Piece::Ray { base, dir } => on_ray(base, &direction_point(dir), p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RayEdge {
    pub base: usize,
    pub dir: (BigInt, BigInt),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AmoebaGraph {
    pub vertices: Vec<Point>,
    pub segments: Vec<(usize, usize)>,
    pub rays: Vec<RayEdge>,
}

impl AmoebaGraph {
    /// Graph with every distinct piece once, in first-seen order.
    pub fn from_pieces(pieces: impl IntoIterator<Item = Piece>) -> Self {
        let mut g = AmoebaGraph::default();
        let mut index: HashMap<Point, usize> = HashMap::new();
        let mut seen = BTreeSet::new();
        let mut vertex = |g: &mut AmoebaGraph, p: Point| -> usize {
            *index.entry(p.clone()).or_insert_with(|| {
                g.vertices.push(p);
                g.vertices.len() - 1
            })
        };
        for piece in pieces {
            if !seen.insert(piece.clone()) {
                continue;
            }
            match piece {
                Piece::Segment(a, b) => {
                    let u = vertex(&mut g, a);
                    let v = vertex(&mut g, b);
                    g.segments.push((u, v));
                }
                Piece::Ray { base, dir } => {
                    let b = vertex(&mut g, base);
                    g.rays.push(RayEdge { base: b, dir });
                }
            }
        }
        g
    }

    pub fn pieces(&self) -> Vec<Piece> {
        let segs = self.segments.iter().filter_map(|&(u, v)| {
            Piece::segment(self.vertices[u].clone(), self.vertices[v].clone())
        });
        let rays = self.rays.iter().map(|r| Piece::Ray {
            base: self.vertices[r.base].clone(),
            dir: r.dir.clone(),
        });
        segs.chain(rays).collect()
    }

    pub fn piece_set(&self) -> BTreeSet<Piece> {
        self.pieces().into_iter().collect()
    }

    pub fn edge_count(&self) -> usize {
        self.segments.len() + self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edge_count() == 0
    }

    /// Exact point membership.
    pub fn contains(&self, p: &Point) -> bool {
        self.pieces().iter().any(|piece| piece.contains(p))
    }

    /// Copy without edge `k` (segments first, then rays); unused vertices are kept.
    pub fn without_edge(&self, k: usize) -> Self {
        let mut g = self.clone();
        if k < g.segments.len() {
            g.segments.remove(k);
        } else {
            g.rays.remove(k - g.segments.len());
        }
        g
    }

    pub fn to_json(&self) -> Value {
        let vertices: Vec<Value> = self
            .vertices
            .iter()
            .map(|p| json!([format_rational(&p.x), format_rational(&p.y)]))
            .collect();
        let segments: Vec<Value> = self.segments.iter().map(|&(u, v)| json!([u, v])).collect();
        let rays: Vec<Value> = self
            .rays
            .iter()
            .map(|r| json!({"base": r.base, "dir": [r.dir.0.to_string(), r.dir.1.to_string()]}))
            .collect();
        json!({"vertices": vertices, "segments": segments, "rays": rays})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("amoeba graph: bad {what}"));
        let arr = |key: &str| v.get(key).and_then(Value::as_array).ok_or_else(|| bad(key));
        let text = |x: &Value| -> Result<String> {
            match x {
                Value::String(s) => Ok(s.clone()),
                Value::Number(n) => Ok(n.to_string()),
                _ => Err(bad("number")),
            }
        };
        let mut g = AmoebaGraph::default();
        for p in arr("vertices")? {
            let xy = p
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| bad("vertex"))?;
            g.vertices.push(Point::new(
                parse_rational(&text(&xy[0])?)?,
                parse_rational(&text(&xy[1])?)?,
            ));
        }
        let n = g.vertices.len();
        let index = |x: &Value| -> Result<usize> {
            x.as_u64()
                .map(|k| k as usize)
                .filter(|&k| k < n)
                .ok_or_else(|| bad("vertex index"))
        };
        for s in arr("segments")? {
            let uv = s
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| bad("segment"))?;
            let (u, v) = (index(&uv[0])?, index(&uv[1])?);
            if g.vertices[u] == g.vertices[v] {
                return Err(bad("segment (zero length)"));
            }
            g.segments.push((u, v));
        }
        for r in arr("rays")? {
            let base = index(r.get("base").ok_or_else(|| bad("ray base"))?)?;
            let d = r
                .get("dir")
                .and_then(Value::as_array)
                .filter(|a| a.len() == 2)
                .ok_or_else(|| bad("ray dir"))?;
            let parse_int =
                |x: &Value| -> Result<BigInt> { text(x)?.parse().map_err(|_| bad("ray dir")) };
            let dir = (parse_int(&d[0])?, parse_int(&d[1])?);
            if direction_point(&dir).is_origin() {
                return Err(bad("ray dir (zero)"));
            }
            g.rays.push(RayEdge { base, dir });
        }
        Ok(g)
    }
}
