//! Exact planar primitives over ℚ².

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{common_denominator, format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn from_i64(x: i64, y: i64) -> Self {
        Point::new(
            Rational::from_integer(x.into()),
            Rational::from_integer(y.into()),
        )
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn add(&self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn scale(&self, s: &Rational) -> Point {
        Point::new(&self.x * s, &self.y * s)
    }

    pub fn is_origin(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn norm_sq(&self) -> Rational {
        &self.x * &self.x + &self.y * &self.y
    }

    pub fn max_abs(&self) -> Rational {
        let (ax, ay) = (self.x.abs(), self.y.abs());
        if ax > ay {
            ax
        } else {
            ay
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {})",
            format_rational(&self.x),
            format_rational(&self.y)
        )
    }
}

pub fn cross(a: &Point, b: &Point) -> Rational {
    &a.x * &b.y - &a.y * &b.x
}

pub fn dot(a: &Point, b: &Point) -> Rational {
    &a.x * &b.x + &a.y * &b.y
}

/// Sign of the turn `p → q → r`: positive for counterclockwise.
pub fn orient(p: &Point, q: &Point, r: &Point) -> Ordering {
    cross(&q.sub(p), &r.sub(p)).cmp(&Rational::zero())
}

/// Primitive integer vector with the same direction (and orientation) as `v`.
pub fn primitive_direction(v: &Point) -> (BigInt, BigInt) {
    assert!(!v.is_origin(), "direction must be nonzero");
    let den = common_denominator([&v.x, &v.y]);
    let x = (&v.x * Rational::from_integer(den.clone())).to_integer();
    let y = (&v.y * Rational::from_integer(den)).to_integer();
    let g = x.gcd(&y);
    (x / &g, y / &g)
}

pub fn direction_point(d: &(BigInt, BigInt)) -> Point {
    Point::new(
        Rational::from_integer(d.0.clone()),
        Rational::from_integer(d.1.clone()),
    )
}

/// Counterclockwise angular order of nonzero direction vectors, starting at the positive x-axis.
pub fn angle_cmp(a: &Point, b: &Point) -> Ordering {
    let half = |v: &Point| {
        if v.y.is_positive() || (v.y.is_zero() && v.x.is_positive()) {
            0
        } else {
            1
        }
    };
    half(a)
        .cmp(&half(b))
        .then_with(|| Rational::zero().cmp(&cross(a, b)))
}

/// Closed segment `[a, b]` contains `p`.
pub fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    if orient(a, b, p) != Ordering::Equal {
        return false;
    }
    let within = |lo: &Rational, hi: &Rational, v: &Rational| {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        lo <= v && v <= hi
    };
    within(&a.x, &b.x, &p.x) && within(&a.y, &b.y, &p.y)
}

/// Closed ray from `base` along `dir` contains `p`.
pub fn on_ray(base: &Point, dir: &Point, p: &Point) -> bool {
    let d = p.sub(base);
    cross(dir, &d).is_zero() && !dot(dir, &d).is_negative()
}

/// Squared distance from `p` to the closed segment `[a, b]`.
pub fn dist_sq_point_segment(p: &Point, a: &Point, b: &Point) -> Rational {
    let ab = b.sub(a);
    let ap = p.sub(a);
    let len = ab.norm_sq();
    if len.is_zero() {
        return ap.norm_sq();
    }
    let t = dot(&ap, &ab) / &len;
    let t = if t.is_negative() {
        Rational::zero()
    } else if t > Rational::one() {
        Rational::one()
    } else {
        t
    };
    p.sub(&a.add(&ab.scale(&t))).norm_sq()
}

/// Intersection of the lines through `(p, p + d)` and `(q, q + e)`, if not parallel.
pub fn line_intersection(p: &Point, d: &Point, q: &Point, e: &Point) -> Option<Point> {
    let den = cross(d, e);
    if den.is_zero() {
        return None;
    }
    let t = cross(&q.sub(p), e) / den;
    Some(p.add(&d.scale(&t)))
}

/// All points where closed segments `[a, b]` and `[c, d]` meet, reduced to at
/// most two points (the ends of a collinear overlap).
pub fn segment_intersections(a: &Point, b: &Point, c: &Point, d: &Point) -> Vec<Point> {
    let ab = b.sub(a);
    let cd = d.sub(c);
    if cross(&ab, &cd).is_zero() {
        if orient(a, b, c) != Ordering::Equal {
            return Vec::new();
        }
        let mut pts: Vec<Point> = [a, b]
            .into_iter()
            .filter(|p| on_segment(c, d, p))
            .chain([c, d].into_iter().filter(|p| on_segment(a, b, p)))
            .cloned()
            .collect();
        pts.sort();
        pts.dedup();
        return pts;
    }
    match line_intersection(a, &ab, c, &cd) {
        Some(x) if on_segment(a, b, &x) && on_segment(c, d, &x) => vec![x],
        _ => Vec::new(),
    }
}

/// Axis-aligned square `[-r, r]²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxBound {
    pub r: Rational,
}

impl BoxBound {
    /// Where the ray from `base` (strictly inside) along `dir` leaves the box.
    pub fn exit_point(&self, base: &Point, dir: &Point) -> Point {
        let mut best: Option<Rational> = None;
        for (b, d) in [(&base.x, &dir.x), (&base.y, &dir.y)] {
            if d.is_zero() {
                continue;
            }
            let wall = if d.is_positive() {
                self.r.clone()
            } else {
                -self.r.clone()
            };
            let s = (wall - b) / d;
            best = Some(match best {
                Some(cur) if cur <= s => cur,
                _ => s,
            });
        }
        base.add(&dir.scale(&best.expect("nonzero direction")))
    }

    /// Corners in counterclockwise order starting at `(-r, -r)`.
    pub fn corners(&self) -> [Point; 4] {
        let r = &self.r;
        let n = -r.clone();
        [
            Point::new(n.clone(), n.clone()),
            Point::new(r.clone(), n.clone()),
            Point::new(r.clone(), r.clone()),
            Point::new(n, r.clone()),
        ]
    }

    pub fn on_boundary(&self, p: &Point) -> bool {
        p.x.abs() == self.r || p.y.abs() == self.r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn pt(x: i64, y: i64) -> Point {
        Point::from_i64(x, y)
    }

    #[test]
    fn crossing_and_touching_segments() {
        assert_eq!(
            segment_intersections(&pt(0, 0), &pt(2, 2), &pt(0, 2), &pt(2, 0)),
            vec![pt(1, 1)]
        );
        assert_eq!(
            segment_intersections(&pt(0, 0), &pt(1, 0), &pt(1, 0), &pt(1, 5)),
            vec![pt(1, 0)]
        );
        assert!(segment_intersections(&pt(0, 0), &pt(1, 0), &pt(2, 0), &pt(3, 0)).is_empty());
        assert_eq!(
            segment_intersections(&pt(0, 0), &pt(4, 0), &pt(6, 0), &pt(2, 0)),
            vec![pt(2, 0), pt(4, 0)]
        );
    }

    #[test]
    fn angular_order() {
        let mut dirs = vec![
            pt(0, -1),
            pt(-1, 0),
            pt(1, 1),
            pt(1, 0),
            pt(-1, -1),
            pt(0, 1),
        ];
        dirs.sort_by(angle_cmp);
        assert_eq!(
            dirs,
            vec![
                pt(1, 0),
                pt(1, 1),
                pt(0, 1),
                pt(-1, 0),
                pt(-1, -1),
                pt(0, -1)
            ]
        );
    }

    #[test]
    fn primitive_directions_keep_orientation() {
        let v = Point::new(frac(-3, 2), int(6));
        assert_eq!(primitive_direction(&v), ((-1).into(), 4.into()));
    }

    #[test]
    fn box_exits() {
        let b = BoxBound { r: int(10) };
        assert_eq!(b.exit_point(&pt(0, 0), &pt(1, 2)), pt(5, 10));
        assert_eq!(b.exit_point(&pt(1, 1), &pt(-1, 0)), pt(-10, 1));
        assert!(b.on_boundary(&pt(5, 10)));
    }

    #[test]
    fn distances() {
        assert_eq!(
            dist_sq_point_segment(&pt(0, 1), &pt(-1, 0), &pt(1, 0)),
            int(1)
        );
        assert_eq!(
            dist_sq_point_segment(&pt(3, 4), &pt(-1, 0), &pt(0, 0)),
            int(25)
        );
        assert!(on_ray(&pt(0, 0), &pt(1, 1), &pt(3, 3)));
        assert!(!on_ray(&pt(0, 0), &pt(1, 1), &pt(-3, -3)));
    }
}
