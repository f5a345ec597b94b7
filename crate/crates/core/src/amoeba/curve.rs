//! Closed-form piecewise-linear curves `φ_i`, one per form with a zero.
//!
//! With `t = ℓ − v(a_i)`, the curve through the zero `z_i` is
//!
//! ```text
//! c(t) = Σ_{a_j≠0} γ_j · (v(a_j) + min(t, v(z_i − z_j))) + Σ_{a_j=0} γ_j · v(b_j)
//! ```
//!
//! where the `j = i` term contributes `t`. It bends only at the finite
//! values `v(z_i − z_j)`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::padic::{val_diff, val_p, ValOrInf};
use crate::rational::{min_rational, Rational};
use crate::trop::DiscriminantMap;

use super::graph::Piece;
use super::{FormZero, ZeroSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlCurve {
    pub form: usize,
    /// Distinct finite `v(z_i − z_j)`, ascending.
    pub breakpoints: Vec<Rational>,
    /// `c(t)` at each breakpoint, or at `t = 0` when there are none.
    pub vertices: Vec<Point>,
    /// Velocity for `t → +∞`: `γ_i`.
    pub forward: Point,
    /// Velocity for `t → −∞`: `Σ_{a_j≠0} γ_j`. The curve runs off in direction `−backward`.
    pub backward: Point,
    terms: Vec<(Point, Rational, ValOrInf)>,
    constant: Point,
}

impl PlCurve {
    /// `c(t)` evaluated term by term.
    pub fn point_at(&self, t: &Rational) -> Point {
        let mut acc = self.constant.clone();
        for (g, va, d) in &self.terms {
            let level = match d.to_rational() {
                Some(d) => min_rational(t, &d).clone(),
                None => t.clone(),
            };
            acc = acc.add(&g.scale(&(va + level)));
        }
        acc
    }

    /// Straight pieces between consecutive breakpoints plus the end rays.
    pub fn pieces(&self) -> Vec<Piece> {
        let mut out: Vec<Piece> = self
            .vertices
            .windows(2)
            .filter_map(|w| Piece::segment(w[0].clone(), w[1].clone()))
            .collect();
        let first = self.vertices.first().expect("at least one vertex").clone();
        let last = self.vertices.last().expect("at least one vertex").clone();
        out.extend(Piece::ray(last, &self.forward));
        out.extend(Piece::ray(
            first,
            &self.backward.scale(&Rational::from_integer((-1).into())),
        ));
        out
    }
}

fn row_point(map: &DiscriminantMap, j: usize) -> Point {
    Point::new(map.gamma().get(j, 0).clone(), map.gamma().get(j, 1).clone())
}

pub fn pl_curve(map: &DiscriminantMap, zeros: &ZeroSet, i: usize) -> Result<PlCurve> {
    let p = map.prime();
    let zi = match zeros.entries().get(i) {
        Some(FormZero::Zero(z)) => z.clone(),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "form {i} has no zero; curves exist only for a_i != 0"
            )))
        }
    };
    let coeffs = map.forms().coeffs();
    let mut terms = Vec::new();
    let mut constant = Point::new(Rational::zero(), Rational::zero());
    let mut backward = Point::new(Rational::zero(), Rational::zero());
    let mut breakpoints = Vec::new();
    for (j, entry) in zeros.entries().iter().enumerate() {
        let g = row_point(map, j);
        match entry {
            FormZero::Zero(zj) => {
                let va = val_p(coeffs.get(j, 0), p).to_rational().expect("a_j != 0");
                let d = if j == i {
                    ValOrInf::Infinite
                } else {
                    val_diff(&zi, zj, p)
                };
                breakpoints.extend(d.to_rational());
                backward = backward.add(&g);
                terms.push((g, va, d));
            }
            FormZero::Constant(b) => {
                let vb = val_p(b, p)
                    .to_rational()
                    .expect("constant forms are nonzero");
                constant = constant.add(&g.scale(&vb));
            }
        }
    }
    breakpoints.sort();
    breakpoints.dedup();
    let mut curve = PlCurve {
        form: i,
        breakpoints,
        vertices: Vec::new(),
        forward: row_point(map, i),
        backward,
        terms,
        constant,
    };
    curve.vertices = if curve.breakpoints.is_empty() {
        vec![curve.point_at(&Rational::zero())]
    } else {
        curve
            .breakpoints
            .iter()
            .map(|t| curve.point_at(t))
            .collect()
    };
    Ok(curve)
}
