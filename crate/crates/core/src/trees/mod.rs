//! d-trees on m indices: construction, statistics, canonical enumeration,
//! shape-graph export and the bracketed text form.

mod dot;
mod enumerate;
mod text;

use thiserror::Error;

pub use dot::to_dot;
pub use enumerate::{enumerate_canonical, CanonicalTrees, Enumeration};
pub use text::parse_tree;

/// A d-tree. Leaves carry 1-based function indices; an internal node holds
/// its children in order (the order fixes the sign of `∂^G π`).
///
/// The derived `Ord` (leaves before nodes, leaves by index, nodes
/// lexicographically by children) is the fixed total order used for
/// canonical child sorting.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DTree {
    Leaf(usize),
    Node(Vec<DTree>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("leaf index {index} outside 1..={m}")]
    LeafOutOfRange { index: usize, m: usize },
    #[error("internal node has {got} children, expected {expected}")]
    WrongArity { expected: usize, got: usize },
    #[error("tree syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("multiindex has length {got}, expected {expected}")]
    MultiindexLength { expected: usize, got: usize },
    #[error("zero multiindex: the trivial tree is a single leaf")]
    ZeroMultiindex,
    #[error("dimension must be at least 1")]
    ZeroDimension,
}

/// `#G`, `G^(i)`, depth and vertex counts of a tree.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct TreeStats {
    /// `#G`: number of internal nodes.
    pub order: usize,
    /// `G^(1), ..., G^(m)`.
    pub leaf_counts: Vec<usize>,
    /// Least `K` with `G` in `𝒢_K`.
    pub depth: usize,
    pub vertex_count: usize,
    pub leaf_count: usize,
}

/// Type `(α, β)` of an admissible operator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct OperatorType {
    pub alpha: usize,
    pub beta: Vec<usize>,
}

impl OperatorType {
    pub fn beta_abs(&self) -> usize {
        self.beta.iter().sum()
    }

    /// `|β| + 1 − α`, the order of every tree realizing the operator.
    pub fn order(&self) -> i64 {
        self.beta_abs() as i64 + 1 - self.alpha as i64
    }
}

impl DTree {
    pub fn leaf(i: usize) -> Self {
        DTree::Leaf(i)
    }

    pub fn node(children: Vec<DTree>) -> Self {
        DTree::Node(children)
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, DTree::Leaf(_))
    }

    /// Number of internal nodes.
    pub fn order(&self) -> usize {
        match self {
            DTree::Leaf(_) => 0,
            DTree::Node(cs) => 1 + cs.iter().map(DTree::order).sum::<usize>(),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            DTree::Leaf(_) => 1,
            DTree::Node(cs) => cs.iter().map(DTree::leaf_count).sum(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.order() + self.leaf_count()
    }

    pub fn depth(&self) -> usize {
        match self {
            DTree::Leaf(_) => 0,
            DTree::Node(cs) => 1 + cs.iter().map(DTree::depth).max().unwrap_or(0),
        }
    }

    pub fn max_index(&self) -> usize {
        match self {
            DTree::Leaf(i) => *i,
            DTree::Node(cs) => cs.iter().map(DTree::max_index).max().unwrap_or(0),
        }
    }

    /// Arity of the root, or `None` for a leaf.
    pub fn arity(&self) -> Option<usize> {
        match self {
            DTree::Leaf(_) => None,
            DTree::Node(cs) => Some(cs.len()),
        }
    }

    /// Check every leaf lies in `1..=m` and every node has exactly `d` children.
    pub fn validate(&self, d: usize, m: usize) -> Result<(), TreeError> {
        if d == 0 {
            return Err(TreeError::ZeroDimension);
        }
        match self {
            DTree::Leaf(i) if *i == 0 || *i > m => Err(TreeError::LeafOutOfRange { index: *i, m }),
            DTree::Leaf(_) => Ok(()),
            DTree::Node(cs) if cs.len() != d => Err(TreeError::WrongArity {
                expected: d,
                got: cs.len(),
            }),
            DTree::Node(cs) => cs.iter().try_for_each(|c| c.validate(d, m)),
        }
    }

    /// The representative of the tree's class under child permutations:
    /// children sorted recursively by the derived order.
    pub fn canonical(&self) -> DTree {
        match self {
            DTree::Leaf(i) => DTree::Leaf(*i),
            DTree::Node(cs) => {
                let mut cs: Vec<DTree> = cs.iter().map(DTree::canonical).collect();
                cs.sort();
                DTree::Node(cs)
            }
        }
    }

    pub fn is_canonical(&self) -> bool {
        match self {
            DTree::Leaf(_) => true,
            DTree::Node(cs) => {
                cs.windows(2).all(|w| w[0] <= w[1]) && cs.iter().all(DTree::is_canonical)
            }
        }
    }
}

/// Statistics of `g` as a tree on `m` indices.
///
/// Arity is not checked here beyond requiring every node to be nonempty and
/// all nodes to agree; use [`DTree::validate`] to pin `d`.
pub fn stats(g: &DTree, m: usize) -> Result<TreeStats, TreeError> {
    let d = first_arity(g);
    if let Some(d) = d {
        g.validate(d, m)?;
    } else if let DTree::Leaf(i) = g {
        if *i == 0 || *i > m {
            return Err(TreeError::LeafOutOfRange { index: *i, m });
        }
    }
    let mut leaf_counts = vec![0usize; m];
    count_leaves(g, &mut leaf_counts);
    let order = g.order();
    let leaf_count = leaf_counts.iter().sum();
    Ok(TreeStats {
        order,
        leaf_counts,
        depth: g.depth(),
        vertex_count: order + leaf_count,
        leaf_count,
    })
}

fn first_arity(g: &DTree) -> Option<usize> {
    match g {
        DTree::Leaf(_) => None,
        DTree::Node(cs) => Some(cs.len()),
    }
}

fn count_leaves(g: &DTree, counts: &mut [usize]) {
    match g {
        DTree::Leaf(i) => counts[*i - 1] += 1,
        DTree::Node(cs) => cs.iter().for_each(|c| count_leaves(c, counts)),
    }
}

/// Tree realizing `∂^β F` with `π = (x_1, ..., x_d, F)`: starting from the
/// leaf `d+1`, for each coordinate `i` in increasing order wrap `β_i` times
/// in a node whose slot `i` holds the current tree and whose other slots hold
/// the coordinate leaves.
pub fn mixed_derivative_tree(beta: &[usize], d: usize) -> Result<DTree, TreeError> {
    if d == 0 {
        return Err(TreeError::ZeroDimension);
    }
    if beta.len() != d {
        return Err(TreeError::MultiindexLength {
            expected: d,
            got: beta.len(),
        });
    }
    if beta.iter().all(|&b| b == 0) {
        return Err(TreeError::ZeroMultiindex);
    }
    let mut t = DTree::Leaf(d + 1);
    for (i, &b) in beta.iter().enumerate() {
        for _ in 0..b {
            t = wrap_in_slot(t, i, d);
        }
    }
    Ok(t)
}

fn wrap_in_slot(t: DTree, slot: usize, d: usize) -> DTree {
    let mut t = Some(t);
    DTree::Node(
        (0..d)
            .map(|j| {
                if j == slot {
                    t.take().expect("slot used once")
                } else {
                    DTree::Leaf(j + 1)
                }
            })
            .collect(),
    )
}

/// Tree whose `∂^G π` is the Hessian determinant of `F = π_{d+1}`: child `j`
/// is the coordinate tuple with slot `j` replaced by `d+1`.
pub fn hessian_tree(d: usize) -> Result<DTree, TreeError> {
    if d == 0 {
        return Err(TreeError::ZeroDimension);
    }
    Ok(DTree::Node(
        (0..d)
            .map(|j| wrap_in_slot(DTree::Leaf(d + 1), j, d))
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(s: &str) -> DTree {
        parse_tree(s).unwrap()
    }

    #[test]
    fn leaf_stats() {
        let s = stats(&DTree::Leaf(3), 3).unwrap();
        assert_eq!(s.order, 0);
        assert_eq!(s.leaf_counts, vec![0, 0, 1]);
        assert_eq!(s.depth, 0);
    }

    #[test]
    fn mixed_tree_stats() {
        let g = t("(1,2,(1,(5,2,3,4),3,4),4)");
        let s = stats(&g, 5).unwrap();
        assert_eq!(s.order, 3);
        assert_eq!(s.leaf_counts, vec![2, 2, 2, 3, 1]);
        assert_eq!(s.vertex_count, 13);
        assert_eq!(s.depth, 3);
    }

    #[test]
    fn hessian_stats() {
        let s = stats(&t("((3,2),(1,3))"), 3).unwrap();
        assert_eq!(s.order, 3);
        assert_eq!(s.leaf_counts, vec![1, 1, 2]);
    }

    #[test]
    fn out_of_range_leaf() {
        assert_eq!(
            stats(&t("(1,4)"), 3),
            Err(TreeError::LeafOutOfRange { index: 4, m: 3 })
        );
        assert!(matches!(stats(&t("((1,2),3,1)"), 3), Err(TreeError::WrongArity { .. })));
    }

    #[test]
    fn mixed_derivative_examples() {
        assert_eq!(mixed_derivative_tree(&[1, 0], 2).unwrap(), t("(3,2)"));
        assert_eq!(
            mixed_derivative_tree(&[1, 1, 1, 0], 4).unwrap(),
            t("(1,2,(1,(5,2,3,4),3,4),4)")
        );
        let g = mixed_derivative_tree(&[2, 0], 2).unwrap();
        assert_eq!(g, t("((3,2),2)"));
        let s = stats(&g, 3).unwrap();
        assert_eq!((s.order, s.leaf_counts), (2, vec![0, 2, 1]));
        assert_eq!(mixed_derivative_tree(&[0, 0], 2), Err(TreeError::ZeroMultiindex));
    }

    #[test]
    fn hessian_examples() {
        assert_eq!(hessian_tree(2).unwrap(), t("((3,2),(1,3))"));
        assert_eq!(hessian_tree(3).unwrap(), t("((4,2,3),(1,4,3),(1,2,4))"));
        assert_eq!(hessian_tree(1).unwrap(), t("((2))"));
        for d in 1..=4 {
            let s = stats(&hessian_tree(d).unwrap(), d + 1).unwrap();
            assert_eq!(s.order, d + 1);
            assert_eq!(s.leaf_counts[d], d);
            assert!(s.leaf_counts[..d].iter().all(|&c| c == d - 1));
        }
    }

    #[test]
    fn canonical_sorts_children() {
        let g = t("((3,2),(1,3))").canonical();
        assert_eq!(g, t("((1,3),(2,3))"));
        assert!(g.is_canonical());
    }

    #[test]
    fn mixed_derivative_exhaustive() {
        fn multiindices(d: usize, total: usize) -> Vec<Vec<usize>> {
            if d == 1 {
                return vec![vec![total]];
            }
            (0..=total)
                .flat_map(|b| {
                    multiindices(d - 1, total - b).into_iter().map(move |mut rest| {
                        rest.insert(0, b);
                        rest
                    })
                })
                .collect()
        }
        for d in 1..=4 {
            for total in 1..=5 {
                for beta in multiindices(d, total) {
                    let g = mixed_derivative_tree(&beta, d).unwrap();
                    let s = stats(&g, d + 1).unwrap();
                    assert_eq!(s.order, total);
                    assert_eq!(s.leaf_counts[d], 1);
                    for (count, b) in s.leaf_counts.iter().zip(&beta) {
                        assert_eq!(*count, total - b);
                    }
                }
            }
        }
    }

    pub(crate) fn arb_tree(d: usize, m: usize) -> impl Strategy<Value = DTree> {
        (1..=m).prop_map(DTree::Leaf).prop_recursive(3, 40, d as u32, move |inner| {
            prop::collection::vec(inner, d..=d).prop_map(DTree::Node)
        })
    }

    proptest! {
        #[test]
        fn vertex_identities(
            (m, g) in (1usize..=3, 1usize..=4)
                .prop_flat_map(|(d, m)| (Just(m), arb_tree(d, m)))
        ) {
            let s = stats(&g, m).unwrap();
            prop_assert_eq!(s.order + s.leaf_counts.iter().sum::<usize>(), s.vertex_count);
            prop_assert_eq!(s.leaf_counts.iter().sum::<usize>(), s.leaf_count);
            prop_assert_eq!(s.leaf_count, g.leaf_count());
            let c = g.canonical();
            prop_assert_eq!(stats(&c, m).unwrap().leaf_counts, s.leaf_counts);
            prop_assert_eq!(c.canonical(), c);
        }
    }
}
