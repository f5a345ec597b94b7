//! The ultrametric digit tree of the zeros `z_i`.
//!
//! Each internal node sits at the first digit index where its cohort of
//! zeros disagrees and has one child per distinct digit there. A cohort of
//! one zero becomes a leaf carrying the form index.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::padic::{DigitStream, Prime};
use crate::rational::Rational;

use super::ZeroSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    Internal {
        depth: i64,
        /// `(digit, child)` sorted by digit.
        children: Vec<(u64, usize)>,
    },
    Leaf {
        form: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub parent: Option<usize>,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitTree {
    nodes: Vec<TreeNode>,
    root: usize,
    prime: Prime,
    zeros: BTreeMap<usize, Rational>,
}

impl DigitTree {
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn node(&self, id: usize) -> &TreeNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn zero_of(&self, form: usize) -> Option<&Rational> {
        self.zeros.get(&form)
    }

    pub fn depth(&self, id: usize) -> Option<i64> {
        match self.nodes[id].kind {
            NodeKind::Internal { depth, .. } => Some(depth),
            NodeKind::Leaf { .. } => None,
        }
    }

    pub fn children(&self, id: usize) -> &[(u64, usize)] {
        match &self.nodes[id].kind {
            NodeKind::Internal { children, .. } => children,
            NodeKind::Leaf { .. } => &[],
        }
    }

    /// Form indices of the leaves below `id`, ascending.
    pub fn leaves_under(&self, id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            match &self.nodes[n].kind {
                NodeKind::Leaf { form } => out.push(*form),
                NodeKind::Internal { children, .. } => {
                    stack.extend(children.iter().map(|&(_, c)| c))
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn leaf_count(&self) -> usize {
        self.zeros.len()
    }

    pub fn leaf_of(&self, form: usize) -> Option<usize> {
        self.nodes
            .iter()
            .position(|n| n.kind == NodeKind::Leaf { form })
    }

    /// Ancestors of `id` from its parent up to the root.
    pub fn ancestors(&self, id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.nodes[id].parent;
        while let Some(c) = cur {
            out.push(c);
            cur = self.nodes[c].parent;
        }
        out
    }

    /// Every `(parent, child)` edge, in depth-first order by digit.
    pub fn branches(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut stack = vec![self.root];
        while let Some(n) = stack.pop() {
            for &(_, c) in self.children(n).iter().rev() {
                stack.push(c);
            }
            if let Some(p) = self.nodes[n].parent {
                out.push((p, n));
            }
        }
        out
    }

    /// Depth of the deepest common ancestor of two nodes (a node counts as its own ancestor).
    pub fn meet_depth(&self, a: usize, b: usize) -> Option<i64> {
        let mut up_a = vec![a];
        up_a.extend(self.ancestors(a));
        let mut cur = Some(b);
        while let Some(c) = cur {
            if up_a.contains(&c) {
                return self.depth(c);
            }
            cur = self.nodes[c].parent;
        }
        None
    }
}

/// Builds the tree by splitting cohorts on the first disagreeing digit.
pub fn build_digit_tree(zeros: &ZeroSet, prime: Prime) -> Result<DigitTree> {
    let finite: Vec<(usize, Rational)> = zeros.finite().map(|(i, z)| (i, z.clone())).collect();
    if finite.is_empty() {
        return Err(Error::DegenerateFamily("no form has a zero".into()));
    }
    for (a, (i, zi)) in finite.iter().enumerate() {
        if let Some((j, _)) = finite[a + 1..].iter().find(|(_, zj)| zj == zi) {
            return Err(Error::RepeatedZero(*i, *j));
        }
    }
    let mut streams: BTreeMap<usize, DigitStream> = finite
        .iter()
        .map(|(i, z)| (*i, DigitStream::new(z.clone(), prime)))
        .collect();
    let start = streams
        .values()
        .filter_map(|s| s.start_index().finite())
        .min()
        .unwrap_or(0);
    let mut tree = DigitTree {
        nodes: Vec::new(),
        root: 0,
        prime,
        zeros: finite.into_iter().collect(),
    };
    let cohort: Vec<usize> = tree.zeros.keys().copied().collect();
    tree.root = grow(&mut tree.nodes, &mut streams, cohort, start, None);
    Ok(tree)
}

fn grow(
    nodes: &mut Vec<TreeNode>,
    streams: &mut BTreeMap<usize, DigitStream>,
    cohort: Vec<usize>,
    from: i64,
    parent: Option<usize>,
) -> usize {
    let id = nodes.len();
    if let [form] = cohort[..] {
        nodes.push(TreeNode {
            parent,
            kind: NodeKind::Leaf { form },
        });
        return id;
    }
    // distinct zeros disagree at some finite index, so this terminates
    let mut depth = from;
    let groups = loop {
        let mut groups: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for &i in &cohort {
            let d = streams.get_mut(&i).expect("stream per zero").digit(depth);
            groups.entry(d).or_default().push(i);
        }
        if groups.len() > 1 {
            break groups;
        }
        depth += 1;
    };
    nodes.push(TreeNode {
        parent,
        kind: NodeKind::Internal {
            depth,
            children: Vec::new(),
        },
    });
    let mut children = Vec::with_capacity(groups.len());
    for (digit, sub) in groups {
        let child = grow(nodes, streams, sub, depth + 1, Some(id));
        children.push((digit, child));
    }
    if let NodeKind::Internal { children: c, .. } = &mut nodes[id].kind {
        *c = children;
    }
    id
}
