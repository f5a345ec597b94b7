//! Complement components of an amoeba graph, counted exactly.
//!
//! [`count_complement`] clips the rays to a square large enough that no two
//! edge supports meet outside it, splits every edge at every crossing and
//! walks the faces of the resulting planar subdivision. Two independent
//! oracles recount the same quantity: a uniform-grid flood fill and an exact
//! vertical-slab decomposition.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::amoeba::{AmoebaGraph, Piece};
use crate::error::{Error, Result};
use crate::geometry::{
    angle_cmp, cross, direction_point, dot, line_intersection, orient, segment_intersections,
    BoxBound, Point,
};
use crate::rational::{format_rational, Rational};

/// `2n² + 9n + 11`.
pub fn bound_value(n: usize) -> u64 {
    let n = n as u64;
    2 * n * n + 9 * n + 11
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComplementCount {
    pub total: usize,
    pub bounded: usize,
    pub bound_value: u64,
}

impl ComplementCount {
    pub fn unbounded(&self) -> usize {
        self.total - self.bounded
    }

    pub fn within_bound(&self) -> bool {
        self.total as u64 <= self.bound_value
    }
}

/// Component counts without a bound attached, as produced by the oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FaceCount {
    pub total: usize,
    pub bounded: usize,
}

/// A planar straight-line graph with the faces it bounds.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub vertices: Vec<Point>,
    pub edges: Vec<(usize, usize)>,
    /// Neighbours of each vertex in counterclockwise order.
    out: Vec<Vec<usize>>,
}

/// Result of walking every half-edge cycle of a [`Subdivision`].
#[derive(Debug, Clone)]
pub struct FaceWalk {
    /// Each cycle as its half-edges `(from, to)`; a face lies to the left.
    pub cycles: Vec<Vec<(usize, usize)>>,
    pub components: usize,
    /// Faces including the unbounded outer one, from Euler's formula.
    pub faces: usize,
}

impl Subdivision {
    /// Splits the segments at all mutual intersections (including the ends
    /// of collinear overlaps) and merges duplicate sub-edges.
    pub fn from_segments(segs: &[(Point, Point)]) -> Self {
        let mut cuts: Vec<Vec<Point>> = segs
            .iter()
            .map(|(a, b)| vec![a.clone(), b.clone()])
            .collect();
        for i in 0..segs.len() {
            for j in i + 1..segs.len() {
                let (a, b) = &segs[i];
                let (c, d) = &segs[j];
                for x in segment_intersections(a, b, c, d) {
                    cuts[i].push(x.clone());
                    cuts[j].push(x);
                }
            }
        }
        let mut index: BTreeMap<Point, usize> = BTreeMap::new();
        let mut vertices = Vec::new();
        let mut edge_set = BTreeSet::new();
        for mut c in cuts {
            // collinear points sort monotonically along their line
            c.sort();
            c.dedup();
            let ids: Vec<usize> = c
                .into_iter()
                .map(|p| {
                    *index.entry(p.clone()).or_insert_with(|| {
                        vertices.push(p);
                        vertices.len() - 1
                    })
                })
                .collect();
            for w in ids.windows(2) {
                edge_set.insert((w[0].min(w[1]), w[0].max(w[1])));
            }
        }
        let edges: Vec<(usize, usize)> = edge_set.into_iter().collect();
        let mut out = vec![Vec::new(); vertices.len()];
        for &(u, v) in &edges {
            out[u].push(v);
            out[v].push(u);
        }
        for (u, nbrs) in out.iter_mut().enumerate() {
            let base = &vertices[u];
            nbrs.sort_by(|&a, &b| angle_cmp(&vertices[a].sub(base), &vertices[b].sub(base)));
        }
        Subdivision {
            vertices,
            edges,
            out,
        }
    }

    /// Traces `next(u→v)` = the edge leaving `v` just clockwise of `v→u`,
    /// then cross-checks the cycle count against Euler's formula.
    pub fn walk(&self) -> Result<FaceWalk> {
        let pos: HashMap<(usize, usize), usize> = self
            .out
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().enumerate().map(move |(k, &v)| ((u, v), k)))
            .collect();
        let mut seen: Vec<Vec<bool>> = self.out.iter().map(|n| vec![false; n.len()]).collect();
        let mut cycles = Vec::new();
        for u in 0..self.out.len() {
            for k in 0..self.out[u].len() {
                if seen[u][k] {
                    continue;
                }
                let mut cycle = Vec::new();
                let (mut a, mut ka) = (u, k);
                loop {
                    seen[a][ka] = true;
                    let b = self.out[a][ka];
                    cycle.push((a, b));
                    let deg = self.out[b].len();
                    let back = pos[&(b, a)];
                    a = b;
                    ka = (back + deg - 1) % deg;
                    if a == u && ka == k {
                        break;
                    }
                }
                cycles.push(cycle);
            }
        }
        let components = self.components();
        let (v, e, c) = (
            self.vertices.len() as i64,
            self.edges.len() as i64,
            components as i64,
        );
        if cycles.len() as i64 != e - v + 2 * c {
            return Err(Error::Invariant(format!(
                "face walk found {} cycles, Euler predicts {}",
                cycles.len(),
                e - v + 2 * c
            )));
        }
        Ok(FaceWalk {
            cycles,
            components,
            faces: (e - v + 1 + c) as usize,
        })
    }

    fn components(&self) -> usize {
        let mut uf = UnionFind::new(self.vertices.len());
        for &(u, v) in &self.edges {
            uf.union(u, v);
        }
        uf.count()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    fn count(&mut self) -> usize {
        (0..self.parent.len())
            .filter(|&x| self.find(x) == x)
            .count()
    }
}

/// Straight support of a piece as `(point, direction)`.
fn support(piece: &Piece) -> (Point, Point) {
    match piece {
        Piece::Segment(a, b) => (a.clone(), b.sub(a)),
        Piece::Ray { base, dir } => (base.clone(), direction_point(dir)),
    }
}

/// Half-width of the square used by [`count_complement`]: twice one more
/// than the largest coordinate among vertices and extended-line crossings.
pub fn bounding_radius(g: &AmoebaGraph) -> Rational {
    let pieces = g.pieces();
    let lines: Vec<(Point, Point)> = pieces.iter().map(support).collect();
    let mut m = Rational::zero();
    let mut bump = |p: &Point| {
        let a = p.max_abs();
        if a > m {
            m = a;
        }
    };
    for v in &g.vertices {
        bump(v);
    }
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if let Some(x) = line_intersection(&lines[i].0, &lines[i].1, &lines[j].0, &lines[j].1) {
                bump(&x);
            }
        }
    }
    (m + Rational::one()) * Rational::from_integer(2.into())
}

/// Edges of `g` with rays clipped to `bbox`.
fn clip_to_box(g: &AmoebaGraph, bbox: &BoxBound) -> Vec<(Point, Point)> {
    g.pieces()
        .into_iter()
        .map(|piece| match piece {
            Piece::Segment(a, b) => (a, b),
            Piece::Ray { base, dir } => {
                let exit = bbox.exit_point(&base, &direction_point(&dir));
                (base, exit)
            }
        })
        .collect()
}

/// Total and bounded complement components of `g`, with the bound for `n`.
pub fn count_complement(g: &AmoebaGraph, n: usize) -> Result<ComplementCount> {
    let faces = complement_faces(g)?;
    Ok(ComplementCount {
        total: faces.total,
        bounded: faces.bounded,
        bound_value: bound_value(n),
    })
}

/// Face counts of the clipped arrangement, no bound attached.
pub fn complement_faces(g: &AmoebaGraph) -> Result<FaceCount> {
    if g.is_empty() {
        return Ok(FaceCount {
            total: 1,
            bounded: 0,
        });
    }
    let bbox = BoxBound {
        r: bounding_radius(g),
    };
    let mut segs = clip_to_box(g, &bbox);
    let c = bbox.corners();
    for k in 0..4 {
        segs.push((c[k].clone(), c[(k + 1) % 4].clone()));
    }
    let sub = Subdivision::from_segments(&segs);
    let walk = sub.walk()?;
    let origin = Point::new(Rational::zero(), Rational::zero());
    let on_box = |a: usize, b: usize| {
        let mid = sub.vertices[a]
            .add(&sub.vertices[b])
            .scale(&Rational::new(1.into(), 2.into()));
        bbox.on_boundary(&mid)
    };
    let unbounded = walk
        .cycles
        .iter()
        .filter(|cyc| {
            cyc.iter().any(|&(a, b)| {
                on_box(a, b)
                    && orient(&origin, &sub.vertices[a], &sub.vertices[b]) == Ordering::Greater
            })
        })
        .count();
    // one face lies outside the box
    let total = walk.faces - 1;
    if unbounded > total {
        return Err(Error::Invariant(format!(
            "{unbounded} unbounded faces out of {total}"
        )));
    }
    Ok(FaceCount {
        total,
        bounded: total - unbounded,
    })
}

/// Bounded faces of a finite set of segments (e.g. a rendered picture).
pub fn bounded_faces_of_segments(segs: &[(Point, Point)]) -> Result<usize> {
    let sub = Subdivision::from_segments(segs);
    if sub.edges.is_empty() {
        return Ok(0);
    }
    Ok(sub.walk()?.faces - 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub total: usize,
    pub bounded: usize,
    pub bound: u64,
    pub within_bound: bool,
}

impl BoundReport {
    pub fn to_json(&self) -> Value {
        json!({
            "total": self.total,
            "bounded": self.bounded,
            "bound": self.bound,
            "within_bound": self.within_bound,
        })
    }
}

pub fn check_bound(g: &AmoebaGraph, n: usize) -> Result<BoundReport> {
    let c = count_complement(g, n)?;
    Ok(BoundReport {
        total: c.total,
        bounded: c.bounded,
        bound: c.bound_value,
        within_bound: c.within_bound(),
    })
}

// ---------------------------------------------------------------------------
// Oracles. Neither uses the clipping square or the face walk above.

/// `p + t·d` with `t ∈ [0, 1]` (`bounded`) or `t ≥ 0`.
struct Param {
    p: Point,
    d: Point,
    bounded: bool,
}

impl Param {
    fn of(piece: &Piece) -> Self {
        let (p, d) = support(piece);
        Param {
            p,
            d,
            bounded: matches!(piece, Piece::Segment(..)),
        }
    }

    fn admits(&self, t: &Rational) -> bool {
        !t.is_negative() && (!self.bounded || *t <= Rational::one())
    }

    fn at(&self, t: &Rational) -> Point {
        self.p.add(&self.d.scale(t))
    }
}

/// Points where two pieces meet; a collinear overlap contributes its finite ends.
fn piece_meets(a: &Piece, b: &Piece) -> Vec<Point> {
    let (pa, pb) = (Param::of(a), Param::of(b));
    let den = cross(&pa.d, &pb.d);
    let qp = pb.p.sub(&pa.p);
    if !den.is_zero() {
        let t = cross(&qp, &pb.d) / &den;
        let s = cross(&qp, &pa.d) / &den;
        return if pa.admits(&t) && pb.admits(&s) {
            vec![pa.at(&t)]
        } else {
            Vec::new()
        };
    }
    if !cross(&qp, &pa.d).is_zero() {
        return Vec::new();
    }
    // collinear: express b's parameter range in a's parameter
    let dd = dot(&pa.d, &pa.d);
    let t0 = dot(&qp, &pa.d) / &dd;
    let k = dot(&pb.d, &pa.d) / &dd;
    let (b_lo, b_hi): (Option<Rational>, Option<Rational>) = if pb.bounded {
        let t1 = &t0 + &k;
        (Some(t0.clone().min(t1.clone())), Some(t0.max(t1)))
    } else if k.is_positive() {
        (Some(t0), None)
    } else {
        (None, Some(t0))
    };
    let a_hi = if pa.bounded {
        Some(Rational::one())
    } else {
        None
    };
    let lo = match b_lo {
        Some(l) if l.is_positive() => l,
        _ => Rational::zero(),
    };
    let hi = match (a_hi, b_hi) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    match hi {
        Some(h) if h < lo => Vec::new(),
        Some(h) if h == lo => vec![pa.at(&lo)],
        Some(h) => vec![pa.at(&lo), pa.at(&h)],
        None => vec![pa.at(&lo)],
    }
}

/// Vertices of `g` together with every point where two of its edges meet.
pub fn crossing_points(g: &AmoebaGraph) -> BTreeSet<Point> {
    key_points(&g.pieces())
}

/// Endpoints, ray bases and all mutual crossings of the pieces.
fn key_points(pieces: &[Piece]) -> BTreeSet<Point> {
    let mut pts = BTreeSet::new();
    for piece in pieces {
        match piece {
            Piece::Segment(a, b) => {
                pts.insert(a.clone());
                pts.insert(b.clone());
            }
            Piece::Ray { base, .. } => {
                pts.insert(base.clone());
            }
        }
    }
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            pts.extend(piece_meets(&pieces[i], &pieces[j]));
        }
    }
    pts
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Rect {
    x0: Rational,
    y0: Rational,
    x1: Rational,
    y1: Rational,
}

impl Rect {
    fn around<'a>(pts: impl IntoIterator<Item = &'a Point>, pad: &Rational) -> Rect {
        let mut it = pts.into_iter();
        let first = it.next().expect("at least one point");
        let mut r = Rect {
            x0: first.x.clone(),
            y0: first.y.clone(),
            x1: first.x.clone(),
            y1: first.y.clone(),
        };
        for p in it {
            r.x0 = r.x0.min(p.x.clone());
            r.y0 = r.y0.min(p.y.clone());
            r.x1 = r.x1.max(p.x.clone());
            r.y1 = r.y1.max(p.y.clone());
        }
        r.x0 -= pad;
        r.y0 -= pad;
        r.x1 += pad;
        r.y1 += pad;
        r
    }

    fn exit(&self, base: &Point, d: &Point) -> Point {
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
        base.add(&d.scale(&best.expect("nonzero direction")))
    }

    fn clip(&self, pieces: &[Piece]) -> Vec<(Point, Point)> {
        pieces
            .iter()
            .map(|piece| match piece {
                Piece::Segment(a, b) => (a.clone(), b.clone()),
                Piece::Ray { base, dir } => (base.clone(), self.exit(base, &direction_point(dir))),
            })
            .collect()
    }
}

fn y_at(a: &Point, b: &Point, x: &Rational) -> Rational {
    &a.y + (&b.y - &a.y) * (x - &a.x) / (&b.x - &a.x)
}

/// Exact recount by vertical slabs: cut the plane at the x-coordinate of
/// every key point; inside a slab the edges are disjoint graphs of linear
/// functions, so the cells are the gaps between them. Cells of adjacent
/// slabs are glued wherever their open y-ranges overlap on the shared line
/// outside any vertical edge.
pub fn column_oracle_components(g: &AmoebaGraph) -> Result<FaceCount> {
    let pieces = g.pieces();
    if pieces.is_empty() {
        return Ok(FaceCount {
            total: 1,
            bounded: 0,
        });
    }
    let keys = key_points(&pieces);
    let rect = Rect::around(&keys, &Rational::one());
    let segs = rect.clip(&pieces);
    let mut xs: BTreeSet<Rational> = keys.iter().map(|p| p.x.clone()).collect();
    for (a, b) in &segs {
        xs.insert(a.x.clone());
        xs.insert(b.x.clone());
    }
    xs.insert(rect.x0.clone());
    xs.insert(rect.x1.clone());
    let xs: Vec<Rational> = xs.into_iter().collect();
    let half = Rational::new(1.into(), 2.into());

    // per slab: the spanning non-vertical segments, bottom to top
    let mut slabs: Vec<Vec<usize>> = Vec::with_capacity(xs.len() - 1);
    let mut first_cell = Vec::with_capacity(xs.len());
    let mut cells = 0usize;
    for w in xs.windows(2) {
        let mid = (&w[0] + &w[1]) * &half;
        let mut span: Vec<(Rational, usize)> = segs
            .iter()
            .enumerate()
            .filter(|(_, (a, b))| {
                a.x != b.x
                    && a.x.clone().min(b.x.clone()) <= w[0]
                    && a.x.clone().max(b.x.clone()) >= w[1]
            })
            .map(|(k, (a, b))| (y_at(a, b, &mid), k))
            .collect();
        span.sort();
        // overlapping collinear edges coincide inside the slab
        span.dedup_by(|a, b| a.0 == b.0);
        first_cell.push(cells);
        cells += span.len() + 1;
        slabs.push(span.into_iter().map(|(_, k)| k).collect());
    }
    first_cell.push(cells);

    let mut uf = UnionFind::new(cells);
    let mut open_end = vec![false; cells];
    let last = slabs.len() - 1;
    for (s, span) in slabs.iter().enumerate() {
        for c in 0..=span.len() {
            if s == 0 || s == last || c == 0 || c == span.len() {
                open_end[first_cell[s] + c] = true;
            }
        }
    }
    // y-range of cell `c` of slab `s` on the vertical line `x`
    let range = |s: usize, c: usize, x: &Rational| -> (Rational, Rational) {
        let span = &slabs[s];
        let lo = if c == 0 {
            rect.y0.clone()
        } else {
            let (a, b) = &segs[span[c - 1]];
            y_at(a, b, x)
        };
        let hi = if c == span.len() {
            rect.y1.clone()
        } else {
            let (a, b) = &segs[span[c]];
            y_at(a, b, x)
        };
        (lo, hi)
    };
    for s in 0..last {
        let x = &xs[s + 1];
        let mut walls: Vec<(Rational, Rational)> = segs
            .iter()
            .filter(|(a, b)| a.x == *x && b.x == *x)
            .map(|(a, b)| (a.y.clone().min(b.y.clone()), a.y.clone().max(b.y.clone())))
            .collect();
        walls.sort();
        for cl in 0..=slabs[s].len() {
            let (l0, l1) = range(s, cl, x);
            for cr in 0..=slabs[s + 1].len() {
                let (r0, r1) = range(s + 1, cr, x);
                let lo = l0.clone().max(r0);
                let hi = l1.clone().min(r1);
                if lo < hi && !covered(&walls, &lo, &hi) {
                    uf.union(first_cell[s] + cl, first_cell[s + 1] + cr);
                }
            }
        }
    }
    let mut roots: BTreeMap<usize, bool> = BTreeMap::new();
    for (c, &open) in open_end.iter().enumerate() {
        let r = uf.find(c);
        *roots.entry(r).or_insert(false) |= open;
    }
    Ok(FaceCount {
        total: roots.len(),
        bounded: roots.values().filter(|&&open| !open).count(),
    })
}

/// `(lo, hi)` lies inside the union of the sorted closed intervals.
fn covered(walls: &[(Rational, Rational)], lo: &Rational, hi: &Rational) -> bool {
    let mut cur = lo.clone();
    for (a, b) in walls {
        if *b <= cur {
            continue;
        }
        if *a > cur {
            return false;
        }
        cur = b.clone();
        if cur >= *hi {
            return true;
        }
    }
    cur >= *hi
}

fn dist_sq_point_param(p: &Point, e: &Param) -> Rational {
    let ap = p.sub(&e.p);
    let t = dot(&ap, &e.d) / dot(&e.d, &e.d);
    let t = if t.is_negative() {
        Rational::zero()
    } else if e.bounded && t > Rational::one() {
        Rational::one()
    } else {
        t
    };
    p.sub(&e.at(&t)).norm_sq()
}

/// Squared minimum feature separation: the least distance between two key
/// points, or between a key point and an edge piece not passing through it.
pub fn feature_separation_sq(g: &AmoebaGraph) -> Option<Rational> {
    let pieces = g.pieces();
    if pieces.is_empty() {
        return None;
    }
    let keys: Vec<Point> = key_points(&pieces).into_iter().collect();
    let params: Vec<Param> = pieces.iter().map(Param::of).collect();
    let mut best: Option<Rational> = None;
    let mut take = |d: Rational| {
        if best.as_ref().is_none_or(|b| d < *b) {
            best = Some(d);
        }
    };
    for i in 0..keys.len() {
        for j in i + 1..keys.len() {
            take(keys[i].sub(&keys[j]).norm_sq());
        }
        for (piece, e) in pieces.iter().zip(&params) {
            if !piece.contains(&keys[i]) {
                take(dist_sq_point_param(&keys[i], e));
            }
        }
    }
    // a single ray or segment has no separation constraint of its own
    Some(best.unwrap_or_else(Rational::one))
}

/// Largest resolution the grid oracle accepts: the power of two at most
/// one sixteenth of the feature separation.
pub fn grid_resolution(g: &AmoebaGraph) -> Option<Rational> {
    let sep_sq = feature_separation_sq(g)?;
    let mut h = Rational::one();
    while &h * &h * Rational::from_integer(256.into()) > sep_sq {
        h /= Rational::from_integer(2.into());
    }
    while &h * &h * Rational::from_integer(1024.into()) <= sep_sq {
        h *= Rational::from_integer(2.into());
    }
    Some(h)
}

struct Grid {
    x0: Rational,
    y0: Rational,
    h: Rational,
    nx: usize,
    ny: usize,
}

impl Grid {
    fn plan(g: &AmoebaGraph, h: &Rational) -> Result<(Grid, Vec<(Point, Point)>)> {
        let pieces = g.pieces();
        let keys = key_points(&pieces);
        // widen the margin until neighbouring ray exits are 16h apart, so
        // every region between two rays holds a free 5×5 block near the wall
        let gap_sq = h * h * Rational::from_integer(256.into());
        let mut margin = h * Rational::from_integer(16.into());
        let mut rect = Rect::around(&keys, &margin);
        for _ in 0..40 {
            let exits: Vec<Point> = pieces
                .iter()
                .filter_map(|piece| match piece {
                    Piece::Ray { base, dir } => Some(rect.exit(base, &direction_point(dir))),
                    Piece::Segment(..) => None,
                })
                .collect();
            let crowded = (0..exits.len()).any(|i| {
                (i + 1..exits.len())
                    .any(|j| exits[i] != exits[j] && exits[i].sub(&exits[j]).norm_sq() < gap_sq)
            });
            if !crowded {
                break;
            }
            margin *= Rational::from_integer(2.into());
            rect = Rect::around(&keys, &margin);
        }
        let steps = |lo: &Rational, hi: &Rational| -> Result<usize> {
            ((hi - lo) / h)
                .ceil()
                .to_integer()
                .to_usize()
                .ok_or_else(|| Error::InvalidArgument("grid too large".into()))
        };
        let nx = steps(&rect.x0, &rect.x1)?;
        let ny = steps(&rect.y0, &rect.y1)?;
        let grid = Grid {
            x0: rect.x0.clone(),
            y0: rect.y0.clone(),
            h: h.clone(),
            nx,
            ny,
        };
        let full = Rect {
            x1: &rect.x0 + h * Rational::from_integer(nx.into()),
            y1: &rect.y0 + h * Rational::from_integer(ny.into()),
            ..rect
        };
        Ok((grid, full.clip(&pieces)))
    }

    fn points(&self) -> usize {
        (self.nx + 1).saturating_mul(self.ny + 1)
    }
}

/// Number of grid points [`grid_oracle_components`] would visit.
pub fn grid_point_count(g: &AmoebaGraph, resolution: &Rational) -> Result<usize> {
    if g.is_empty() {
        return Ok(0);
    }
    Ok(Grid::plan(g, resolution)?.0.points())
}

/// Hits of the segments on one grid line, as closed intervals in grid units.
fn line_hits(
    segs: &[(Point, Point)],
    fixed: &Rational,
    vertical: bool,
    origin: &Rational,
    h: &Rational,
) -> Vec<(Rational, Rational)> {
    let coord = |p: &Point| {
        if vertical {
            (p.x.clone(), p.y.clone())
        } else {
            (p.y.clone(), p.x.clone())
        }
    };
    let mut out = Vec::new();
    for (a, b) in segs {
        let (af, aa) = coord(a);
        let (bf, ba) = coord(b);
        let unit = |v: Rational| (v - origin) / h;
        if af == *fixed && bf == *fixed {
            let (l, u) = if aa <= ba { (aa, ba) } else { (ba, aa) };
            out.push((unit(l), unit(u)));
        } else if (af.clone().min(bf.clone())) <= *fixed && *fixed <= af.clone().max(bf.clone()) {
            let v = &aa + (&ba - &aa) * (fixed - &af) / (&bf - &af);
            let u = unit(v);
            out.push((u.clone(), u));
        }
    }
    out
}

fn floor_usize(q: &Rational) -> i64 {
    q.floor().to_integer().to_i64().unwrap_or(i64::MAX)
}

fn ceil_usize(q: &Rational) -> i64 {
    q.ceil().to_integer().to_i64().unwrap_or(i64::MAX)
}

/// Flood fill on a uniform grid of spacing `resolution` over a box around
/// the key points. Grid neighbours are joined when the segment between them
/// misses every edge; a grid component counts when it contains a point whose
/// surrounding 5×5 block is entirely free. Components reaching the box
/// boundary are unbounded.
pub fn grid_oracle_components(g: &AmoebaGraph, resolution: &Rational) -> Result<FaceCount> {
    if !resolution.is_positive() {
        return Err(Error::InvalidArgument("resolution must be positive".into()));
    }
    let Some(sep_sq) = feature_separation_sq(g) else {
        return Ok(FaceCount {
            total: 1,
            bounded: 0,
        });
    };
    if resolution * resolution * Rational::from_integer(256.into()) > sep_sq {
        return Err(Error::ResolutionTooCoarse {
            resolution: format_rational(resolution),
            limit: format!("sqrt({}) / 16", format_rational(&sep_sq)),
        });
    }
    let (grid, segs) = Grid::plan(g, resolution)?;
    if grid.points() > MAX_GRID_POINTS {
        return Err(Error::InvalidArgument(format!(
            "grid of {} points exceeds the limit of {MAX_GRID_POINTS}",
            grid.points()
        )));
    }
    let (nx, ny) = (grid.nx, grid.ny);
    let w = nx + 1;
    let id = |i: usize, j: usize| j * w + i;
    let mut removed = vec![false; grid.points()];
    // blocked_h[id(i, j)]: (i, j)–(i+1, j); blocked_v[id(i, j)]: (i, j)–(i, j+1)
    let mut blocked_h = vec![false; grid.points()];
    let mut blocked_v = vec![false; grid.points()];
    let mark = |hits: Vec<(Rational, Rational)>,
                n: usize,
                removed: &mut Vec<bool>,
                blocked: &mut Vec<bool>,
                at: &dyn Fn(usize) -> usize| {
        for (lo, hi) in hits {
            let first = (ceil_usize(&lo) - 1).max(0);
            let last = floor_usize(&hi).min(n as i64 - 1);
            for k in first..=last {
                blocked[at(k as usize)] = true;
            }
            let first = ceil_usize(&lo).max(0);
            let last = floor_usize(&hi).min(n as i64);
            for k in first..=last {
                removed[at(k as usize)] = true;
            }
        }
    };
    for j in 0..=ny {
        let y = &grid.y0 + &grid.h * Rational::from_integer(j.into());
        let hits = line_hits(&segs, &y, false, &grid.x0, &grid.h);
        mark(hits, nx, &mut removed, &mut blocked_h, &|i| id(i, j));
    }
    for i in 0..=nx {
        let x = &grid.x0 + &grid.h * Rational::from_integer(i.into());
        let hits = line_hits(&segs, &x, true, &grid.y0, &grid.h);
        mark(hits, ny, &mut removed, &mut blocked_v, &|j| id(i, j));
    }

    let mut uf = UnionFind::new(grid.points());
    for j in 0..=ny {
        for i in 0..=nx {
            if removed[id(i, j)] {
                continue;
            }
            if i < nx && !blocked_h[id(i, j)] && !removed[id(i + 1, j)] {
                uf.union(id(i, j), id(i + 1, j));
            }
            if j < ny && !blocked_v[id(i, j)] && !removed[id(i, j + 1)] {
                uf.union(id(i, j), id(i, j + 1));
            }
        }
    }
    // open unit squares, summed for 4×4 window queries
    let mut sum = vec![0u32; (nx + 1) * (ny + 1)];
    let sid = |i: usize, j: usize| j * (nx + 1) + i;
    for j in 0..ny {
        for i in 0..nx {
            let open = !removed[id(i, j)]
                && !removed[id(i + 1, j)]
                && !removed[id(i, j + 1)]
                && !removed[id(i + 1, j + 1)]
                && !blocked_h[id(i, j)]
                && !blocked_h[id(i, j + 1)]
                && !blocked_v[id(i, j)]
                && !blocked_v[id(i + 1, j)];
            sum[sid(i + 1, j + 1)] =
                open as u32 + sum[sid(i, j + 1)] + sum[sid(i + 1, j)] - sum[sid(i, j)];
        }
    }
    let mut deep_roots: BTreeMap<usize, bool> = BTreeMap::new();
    for j in 2..ny.saturating_sub(1) {
        for i in 2..nx.saturating_sub(1) {
            let (i0, j0, i1, j1) = (i - 2, j - 2, i + 2, j + 2);
            let open = sum[sid(i1, j1)] + sum[sid(i0, j0)] - sum[sid(i0, j1)] - sum[sid(i1, j0)];
            if open == 16 {
                deep_roots.entry(uf.find(id(i, j))).or_insert(false);
            }
        }
    }
    for j in 0..=ny {
        for i in 0..=nx {
            if (i == 0 || j == 0 || i == nx || j == ny) && !removed[id(i, j)] {
                if let Some(open) = deep_roots.get_mut(&uf.find(id(i, j))) {
                    *open = true;
                }
            }
        }
    }
    Ok(FaceCount {
        total: deep_roots.len(),
        bounded: deep_roots.values().filter(|&&open| !open).count(),
    })
}

/// Grids larger than this are refused rather than filled.
pub const MAX_GRID_POINTS: usize = 20_000_000;

/// Runs the grid oracle at [`grid_resolution`] when the grid has at most
/// `max_points` points; `None` when it would be larger.
pub fn grid_oracle_auto(g: &AmoebaGraph, max_points: usize) -> Result<Option<FaceCount>> {
    let Some(h) = grid_resolution(g) else {
        return Ok(Some(FaceCount {
            total: 1,
            bounded: 0,
        }));
    };
    if grid_point_count(g, &h)? > max_points.min(MAX_GRID_POINTS) {
        return Ok(None);
    }
    grid_oracle_components(g, &h).map(Some)
}
