//! The `m = 2` amoeba: zeros of the forms, the digit tree, the curves `φ_i`,
//! and their union as an exact planar graph.
//!
//! Every branch of the digit tree is one straight piece of the amoeba. Its
//! velocity is the sum of `γ_j` over the zeros below the branch; branches
//! ending in a leaf are rays. A further ray toward `t → −∞` appears when the
//! `γ_j` of forms with a zero do not sum to zero.

mod curve;
mod graph;
mod tree;

use std::collections::BTreeSet;

use num_traits::Zero;

pub use curve::{pl_curve, PlCurve};
pub use graph::{AmoebaGraph, Piece, RayEdge};
pub use tree::{build_digit_tree, DigitTree, NodeKind, TreeNode};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::linalg::{build_ahat, integer_kernel, AffineFormSystem};
use crate::matrix::{IntMatrix, RatMatrix};
use crate::padic::{val_p, Prime};
use crate::rational::Rational;
use crate::trop::DiscriminantMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormZero {
    /// `z_i = −b_i / a_i`.
    Zero(Rational),
    /// `a_i = 0`; the form is the nonzero constant `b_i`.
    Constant(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroSet {
    entries: Vec<FormZero>,
}

impl ZeroSet {
    pub fn entries(&self) -> &[FormZero] {
        &self.entries
    }

    /// `(form index, z_i)` for forms with a zero.
    pub fn finite(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.entries
            .iter()
            .enumerate()
            .filter_map(|(i, e)| match e {
                FormZero::Zero(z) => Some((i, z)),
                FormZero::Constant(_) => None,
            })
    }

    pub fn has_constant_forms(&self) -> bool {
        self.entries
            .iter()
            .any(|e| matches!(e, FormZero::Constant(_)))
    }
}

pub fn zeros(forms: &AffineFormSystem) -> Result<ZeroSet> {
    if forms.m() != 2 {
        return Err(Error::InvalidArgument(format!(
            "zeros need m = 2, got m = {}",
            forms.m()
        )));
    }
    let c = forms.coeffs();
    let mut entries = Vec::with_capacity(forms.num_forms());
    for i in 0..forms.num_forms() {
        let (a, b) = (c.get(i, 0), c.get(i, 1));
        entries.push(if !a.is_zero() {
            FormZero::Zero(-b / a)
        } else if !b.is_zero() {
            FormZero::Constant(b.clone())
        } else {
            return Err(Error::DegenerateFamily(format!(
                "form {i} is identically zero"
            )));
        });
    }
    if entries.iter().all(|e| matches!(e, FormZero::Constant(_))) {
        return Err(Error::DegenerateFamily("every form is constant".into()));
    }
    Ok(ZeroSet { entries })
}

fn check_m2(map: &DiscriminantMap) -> Result<()> {
    if map.m() != 2 {
        return Err(Error::InvalidArgument(format!(
            "planar amoebae need m = 2, got m = {}",
            map.m()
        )));
    }
    Ok(())
}

fn check_distinct(z: &ZeroSet) -> Result<()> {
    let finite: Vec<_> = z.finite().collect();
    for (a, (i, zi)) in finite.iter().enumerate() {
        if let Some((j, _)) = finite[a + 1..].iter().find(|(_, zj)| zj == zi) {
            return Err(Error::RepeatedZero(*i, *j));
        }
    }
    Ok(())
}

/// Union of the curves `φ_i` over all forms with a zero, exact duplicates merged.
pub fn assemble_amoeba(map: &DiscriminantMap) -> Result<AmoebaGraph> {
    check_m2(map)?;
    let z = zeros(map.forms())?;
    check_distinct(&z)?;
    let mut pieces = Vec::new();
    for (i, _) in z.finite() {
        pieces.extend(pl_curve(map, &z, i)?.pieces());
    }
    Ok(AmoebaGraph::from_pieces(pieces))
}

/// Straight piece contributed by one tree branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchPiece {
    /// The lower node of the branch; `None` for the ray toward `t → −∞`.
    pub child: Option<usize>,
    /// Forms whose zeros lie below the branch.
    pub cohort: Vec<usize>,
    /// Velocity `Σ_{j ∈ cohort} γ_j`.
    pub slope: Point,
    /// `None` when the slope vanishes and the branch collapses to a point.
    pub piece: Option<Piece>,
}

fn gamma_row(map: &DiscriminantMap, j: usize) -> Point {
    Point::new(map.gamma().get(j, 0).clone(), map.gamma().get(j, 1).clone())
}

/// Image of tree node `node` (at its own depth, or at `t = 0` for a lone leaf),
/// computed from the tree structure alone.
fn node_point(map: &DiscriminantMap, z: &ZeroSet, tree: &DigitTree, node: usize) -> Point {
    let p = map.prime();
    let coeffs = map.forms().coeffs();
    let own_depth = tree
        .depth(node)
        .map(|d| Rational::from_integer(d.into()))
        .unwrap_or_else(Rational::zero);
    let below = tree.leaves_under(node);
    let mut acc = Point::new(Rational::zero(), Rational::zero());
    for (j, entry) in z.entries().iter().enumerate() {
        let g = gamma_row(map, j);
        let level = match entry {
            FormZero::Constant(b) => val_p(b, p).to_rational().expect("nonzero"),
            FormZero::Zero(_) => {
                let va = val_p(coeffs.get(j, 0), p).to_rational().expect("nonzero");
                let meet = if below.contains(&j) {
                    own_depth.clone()
                } else {
                    let leaf = tree.leaf_of(j).expect("every zero has a leaf");
                    Rational::from_integer(
                        tree.meet_depth(leaf, node).expect("common ancestor").into(),
                    )
                };
                va + meet
            }
        };
        acc = acc.add(&g.scale(&level));
    }
    acc
}

/// Maps every tree branch through the slope rule, plus the `t → −∞` ray.
pub fn branch_pieces(map: &DiscriminantMap, tree: &DigitTree) -> Result<Vec<BranchPiece>> {
    check_m2(map)?;
    let z = zeros(map.forms())?;
    let sum = |forms: &[usize]| {
        forms
            .iter()
            .fold(Point::new(Rational::zero(), Rational::zero()), |acc, &j| {
                acc.add(&gamma_row(map, j))
            })
    };
    let mut out = Vec::new();
    for (parent, child) in tree.branches() {
        let cohort = tree.leaves_under(child);
        let slope = sum(&cohort);
        let start = node_point(map, &z, tree, parent);
        let piece = match tree.node(child).kind {
            NodeKind::Leaf { .. } => Piece::ray(start, &slope),
            NodeKind::Internal { .. } => Piece::segment(start, node_point(map, &z, tree, child)),
        };
        out.push(BranchPiece {
            child: Some(child),
            cohort,
            slope,
            piece,
        });
    }
    let root = tree.root();
    let root_point = node_point(map, &z, tree, root);
    if let NodeKind::Leaf { form } = tree.node(root).kind {
        let slope = gamma_row(map, form);
        out.push(BranchPiece {
            child: Some(root),
            cohort: vec![form],
            slope: slope.clone(),
            piece: Piece::ray(root_point.clone(), &slope),
        });
    }
    let all = tree.leaves_under(root);
    let total = sum(&all);
    out.push(BranchPiece {
        child: None,
        cohort: all,
        slope: total.clone(),
        piece: Piece::ray(
            root_point,
            &total.scale(&Rational::from_integer((-1).into())),
        ),
    });
    Ok(out)
}

/// Pieces of the tree-side construction as a set.
pub fn branch_piece_set(map: &DiscriminantMap, tree: &DigitTree) -> Result<BTreeSet<Piece>> {
    Ok(branch_pieces(map, tree)?
        .into_iter()
        .filter_map(|b| b.piece)
        .collect())
}

/// For each edge of `g` (segments first, then rays), the position in
/// [`branch_pieces`] of the tree branch producing it.
pub fn branch_labels(
    map: &DiscriminantMap,
    tree: &DigitTree,
    g: &AmoebaGraph,
) -> Result<Vec<usize>> {
    let branches = branch_pieces(map, tree)?;
    g.pieces()
        .iter()
        .map(|piece| {
            branches
                .iter()
                .position(|b| b.piece.as_ref() == Some(piece))
                .ok_or_else(|| Error::Invariant("graph edge without a tree branch".into()))
        })
        .collect()
}

/// Everything derived from one `(B, p)` pair with `m = 2`.
#[derive(Debug, Clone)]
pub struct PlanarAmoeba {
    pub map: DiscriminantMap,
    pub zeros: ZeroSet,
    pub tree: DigitTree,
    pub graph: AmoebaGraph,
}

impl PlanarAmoeba {
    pub fn new(map: DiscriminantMap) -> Result<Self> {
        check_m2(&map)?;
        let zeros = zeros(map.forms())?;
        let tree = build_digit_tree(&zeros, map.prime())?;
        let graph = assemble_amoeba(&map)?;
        Ok(PlanarAmoeba {
            map,
            zeros,
            tree,
            graph,
        })
    }

    /// Pipeline from a kernel matrix `B` with two columns.
    pub fn from_kernel(b: &RatMatrix, prime: Prime) -> Result<Self> {
        if b.cols() != 2 {
            return Err(Error::InvalidArgument(format!(
                "planar amoebae need B with 2 columns, got {}",
                b.cols()
            )));
        }
        Self::new(DiscriminantMap::from_kernel(b, prime)?)
    }

    /// Pipeline from a support matrix `A` with `n` rows and `n + 3` columns.
    pub fn from_support(a: &IntMatrix, prime: Prime) -> Result<Self> {
        let b = integer_kernel(&build_ahat(a)?)?;
        Self::from_kernel(&b.to_rational(), prime)
    }

    /// `n` of the support, from `n + m + 1` forms.
    pub fn support_dimension(&self) -> usize {
        self.map.forms().num_forms().saturating_sub(3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn six_term_map() -> DiscriminantMap {
        let b = RatMatrix::from_i64(&[
            &[-2, 2],
            &[35, -11],
            &[-33, 9],
            &[-12, 4],
            &[0, -4],
            &[12, 0],
        ]);
        DiscriminantMap::from_kernel(&b, p(3)).unwrap()
    }

    fn worked_map() -> DiscriminantMap {
        let b = RatMatrix::from_i64(&[&[1, -1], &[1, -13], &[1, -25]]);
        DiscriminantMap::from_kernel(&b, p(2)).unwrap()
    }

    #[test]
    fn zero_sets() {
        let z = zeros(six_term_map().forms()).unwrap();
        assert_eq!(
            z.entries(),
            &[
                FormZero::Zero(int(1)),
                FormZero::Zero(frac(11, 35)),
                FormZero::Zero(frac(3, 11)),
                FormZero::Zero(frac(1, 3)),
                FormZero::Constant(int(-4)),
                FormZero::Zero(int(0)),
            ]
        );
        let z = zeros(worked_map().forms()).unwrap();
        let finite: Vec<Rational> = z.finite().map(|(_, z)| z.clone()).collect();
        assert_eq!(finite, vec![int(1), int(13), int(25)]);
        let scaled = AffineFormSystem::new(RatMatrix::from_i64(&[&[2, -2]])).unwrap();
        assert_eq!(zeros(&scaled).unwrap().entries(), &[FormZero::Zero(int(1))]);
        let dead = AffineFormSystem::new(RatMatrix::from_i64(&[&[0, 1], &[0, 2]])).unwrap();
        assert!(matches!(zeros(&dead), Err(Error::DegenerateFamily(_))));
    }

    #[test]
    fn six_term_tree_shape() {
        let z = zeros(six_term_map().forms()).unwrap();
        let t = build_digit_tree(&z, p(3)).unwrap();
        let root = t.root();
        assert_eq!(t.depth(root), Some(-1));
        let kids = t.children(root);
        assert_eq!(kids.len(), 2);
        // digit 0 carries the four zeros agreeing at index −1, digit 1 carries 1/3
        assert_eq!(kids[0].0, 0);
        assert_eq!(t.leaves_under(kids[0].1), vec![0, 1, 2, 5]);
        assert_eq!(kids[1].0, 1);
        assert_eq!(t.node(kids[1].1).kind, NodeKind::Leaf { form: 3 });
        let mid = kids[0].1;
        assert_eq!(t.depth(mid), Some(0));
        let grand: Vec<Vec<usize>> = t
            .children(mid)
            .iter()
            .map(|&(_, c)| t.leaves_under(c))
            .collect();
        assert_eq!(grand, vec![vec![2, 5], vec![0, 1]]);
        for &(_, c) in t.children(mid) {
            assert_eq!(t.depth(c), Some(1));
        }
        assert_eq!(t.leaf_count(), 5);
        assert_eq!(t.branches().len(), 8);
    }

    #[test]
    fn tree_edge_cases() {
        let two = AffineFormSystem::new(RatMatrix::from_i64(&[&[1, 0], &[1, -1]])).unwrap();
        let t = build_digit_tree(&zeros(&two).unwrap(), p(2)).unwrap();
        assert_eq!(t.depth(t.root()), Some(0));
        assert_eq!(t.children(t.root()).len(), 2);

        let dup = AffineFormSystem::new(RatMatrix::from_i64(&[&[1, -1], &[2, -2]])).unwrap();
        assert_eq!(
            build_digit_tree(&zeros(&dup).unwrap(), p(2)),
            Err(Error::RepeatedZero(0, 1))
        );
        let one = AffineFormSystem::new(RatMatrix::from_i64(&[&[3, 1]])).unwrap();
        let t = build_digit_tree(&zeros(&one).unwrap(), p(5)).unwrap();
        assert_eq!(t.node(t.root()).kind, NodeKind::Leaf { form: 0 });
    }

    #[test]
    fn worked_example_curve_matches_tropical_map() {
        let map = worked_map();
        let z = zeros(map.forms()).unwrap();
        let c = pl_curve(&map, &z, 0).unwrap();
        assert_eq!(c.breakpoints, vec![int(2), int(3)]);
        let phi = map.transformed(&[0]).unwrap().tropicalize();
        for t in [int(-3), int(1), int(2), frac(5, 2), int(3), int(7)] {
            let via_map = phi.eval(std::slice::from_ref(&t)).unwrap();
            assert_eq!(
                c.point_at(&t),
                Point::new(via_map[0].clone(), via_map[1].clone())
            );
        }
        assert_eq!(c.point_at(&int(1)), Point::from_i64(3, -39));
        assert_eq!(c.point_at(&int(2)), Point::from_i64(6, -78));
        assert_eq!(c.point_at(&int(3)), Point::from_i64(8, -104));
    }

    #[test]
    fn six_term_zero_curve_breakpoints() {
        let map = six_term_map();
        let z = zeros(map.forms()).unwrap();
        let c = pl_curve(&map, &z, 5).unwrap();
        // {v₃(0−1), v₃(0−11/35), v₃(0−3/11), v₃(0−1/3)} = {0, 0, 1, −1}
        assert_eq!(c.breakpoints, vec![int(-1), int(0), int(1)]);
        assert!(pl_curve(&map, &z, 4).is_err());
    }

    #[test]
    fn single_form_gives_a_line() {
        let map = DiscriminantMap::from_kernel(&RatMatrix::from_i64(&[&[2, 3]]), p(3)).unwrap();
        let g = assemble_amoeba(&map).unwrap();
        assert_eq!(g.segments.len(), 0);
        assert_eq!(g.rays.len(), 2);
        assert_eq!(g.rays[0].dir, (2.into(), 3.into()));
        assert_eq!(g.rays[1].dir, ((-2).into(), (-3).into()));
        let t = build_digit_tree(&zeros(map.forms()).unwrap(), p(3)).unwrap();
        assert_eq!(branch_piece_set(&map, &t).unwrap(), g.piece_set());
    }

    #[test]
    fn worked_example_assembly() {
        let map = worked_map();
        let g = assemble_amoeba(&map).unwrap();
        let t = build_digit_tree(&zeros(map.forms()).unwrap(), p(2)).unwrap();
        assert_eq!(t.branches().len(), 4);
        // forms do not sum to zero here, so the −∞ ray is present
        assert_eq!(g.segments.len(), 1);
        assert_eq!(g.rays.len(), 4);
        assert!(g.rays.iter().any(|r| r.dir == ((-1).into(), 13.into())));
        assert_eq!(branch_piece_set(&map, &t).unwrap(), g.piece_set());
    }

    #[test]
    fn six_term_assembly() {
        let map = six_term_map();
        let a = PlanarAmoeba::new(map.clone()).unwrap();
        let g = &a.graph;
        assert_eq!(g.segments.len(), 3);
        assert_eq!(g.rays.len(), 6);
        // extra ray from the constant form, pointing along −(0, 4)
        assert!(g.rays.iter().any(|r| r.dir == (0.into(), (-1).into())));
        // a vertex touched only by segments
        let ray_bases: BTreeSet<usize> = g.rays.iter().map(|r| r.base).collect();
        let interior = (0..g.vertices.len())
            .filter(|v| !ray_bases.contains(v))
            .count();
        assert_eq!(interior, 1);
        assert_eq!(branch_piece_set(&map, &a.tree).unwrap(), g.piece_set());
        let labels = branch_labels(&map, &a.tree, g).unwrap();
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), g.edge_count());
    }

    #[test]
    fn exact_values_lie_on_the_graph() {
        let map = six_term_map();
        let g = assemble_amoeba(&map).unwrap();
        for (n, d) in [
            (4, 1),
            (2, 9),
            (-5, 3),
            (7, 10),
            (1, 243),
            (40, 1),
            (11, 36),
        ] {
            let v = map.eval_exact(&[frac(n, d)]).unwrap();
            assert!(
                g.contains(&Point::new(v[0].clone(), v[1].clone())),
                "λ = {n}/{d}"
            );
        }
    }

    #[test]
    fn graph_json_round_trip() {
        let g = assemble_amoeba(&six_term_map()).unwrap();
        let back = AmoebaGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
        assert!(AmoebaGraph::from_json(&serde_json::json!({"vertices": []})).is_err());
    }
}
