//! Admissible operators as nested-determinant recipes, application of recipes
//! and d-trees to functions, and the recipe/tree correspondence.

mod enumerate;
mod text;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::symbolic::{
    determinant, diff, jacobian_det, make_mul, make_sub, parse, zero_test, CompiledExpr, Expr,
    SymbolicError, ZeroVerdict,
};
use crate::trees::{DTree, OperatorType, TreeError};

pub use enumerate::{enumerate_recipes, random_recipe};
pub use text::parse_recipe;

/// Default ceiling on expression size during [`apply_recipe`].
pub const DEFAULT_NODE_LIMIT: usize = 1_000_000;

/// `id`, or `det[i1,...,in](L1,...,Ln)` with `LF = det(∂_{i_j} L_k F)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OperatorRecipe {
    Identity,
    Det {
        rows: Vec<usize>,
        children: Vec<OperatorRecipe>,
    },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error("recipe node has {rows} rows but {children} children")]
    ArityMismatch { rows: usize, children: usize },
    #[error("recipe node needs between 1 and {d} rows, got {got}")]
    RowCount { d: usize, got: usize },
    #[error("row index {index} outside 1..={d}")]
    RowOutOfRange { index: usize, d: usize },
    #[error("row indices must be strictly increasing: {rows:?}")]
    RowsNotIncreasing { rows: Vec<usize> },
    #[error("recipe syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("expression grew to {nodes} nodes, over the limit of {limit}")]
    TooLarge { nodes: usize, limit: usize },
    #[error("function tuple has {got} entries, tree needs index {need}")]
    TupleTooShort { need: usize, got: usize },
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

impl OperatorRecipe {
    /// `∂/∂x_i`, i.e. `det[i](id)`.
    pub fn partial(i: usize) -> Self {
        OperatorRecipe::Det {
            rows: vec![i],
            children: vec![OperatorRecipe::Identity],
        }
    }

    /// `∂^β` as nested single-row determinants, coordinates in increasing order
    /// (innermost first).
    pub fn mixed_partial(beta: &[usize]) -> Self {
        let mut r = OperatorRecipe::Identity;
        for (i, &b) in beta.iter().enumerate() {
            for _ in 0..b {
                r = OperatorRecipe::Det {
                    rows: vec![i + 1],
                    children: vec![r],
                };
            }
        }
        r
    }

    /// `det(∂_i ∂_j F)` in dimension `d`.
    pub fn hessian(d: usize) -> Self {
        OperatorRecipe::Det {
            rows: (1..=d).collect(),
            children: (1..=d).map(OperatorRecipe::partial).collect(),
        }
    }

    pub fn validate(&self, d: usize) -> Result<(), OperatorError> {
        match self {
            OperatorRecipe::Identity => Ok(()),
            OperatorRecipe::Det { rows, children } => {
                if rows.len() != children.len() {
                    return Err(OperatorError::ArityMismatch {
                        rows: rows.len(),
                        children: children.len(),
                    });
                }
                if rows.is_empty() || rows.len() > d {
                    return Err(OperatorError::RowCount { d, got: rows.len() });
                }
                if let Some(&bad) = rows.iter().find(|&&i| i == 0 || i > d) {
                    return Err(OperatorError::RowOutOfRange { index: bad, d });
                }
                if rows.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(OperatorError::RowsNotIncreasing { rows: rows.clone() });
                }
                children.iter().try_for_each(|c| c.validate(d))
            }
        }
    }

    /// Children sorted recursively; permuting children only flips the sign.
    pub fn canonical(&self) -> Self {
        match self {
            OperatorRecipe::Identity => OperatorRecipe::Identity,
            OperatorRecipe::Det { rows, children } => {
                let mut cs: Vec<_> = children.iter().map(OperatorRecipe::canonical).collect();
                cs.sort();
                OperatorRecipe::Det {
                    rows: rows.clone(),
                    children: cs,
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            OperatorRecipe::Identity => 0,
            OperatorRecipe::Det { children, .. } => {
                1 + children.iter().map(OperatorRecipe::depth).max().unwrap_or(0)
            }
        }
    }
}

/// `(α, β)` with `α = Σ α_k`, `β = Σ β_k + I_rows`; the identity has type `(1, 0)`.
pub fn type_of_recipe(r: &OperatorRecipe, d: usize) -> Result<OperatorType, OperatorError> {
    r.validate(d)?;
    Ok(type_unchecked(r, d))
}

fn type_unchecked(r: &OperatorRecipe, d: usize) -> OperatorType {
    match r {
        OperatorRecipe::Identity => OperatorType {
            alpha: 1,
            beta: vec![0; d],
        },
        OperatorRecipe::Det { rows, children } => {
            let mut alpha = 0;
            let mut beta = vec![0; d];
            for c in children {
                let t = type_unchecked(c, d);
                alpha += t.alpha;
                for (b, x) in beta.iter_mut().zip(t.beta) {
                    *b += x;
                }
            }
            for &i in rows {
                beta[i - 1] += 1;
            }
            OperatorType { alpha, beta }
        }
    }
}

/// `LF` with the default node limit.
pub fn apply_recipe(r: &OperatorRecipe, f: &Expr, d: usize) -> Result<Expr, OperatorError> {
    apply_recipe_with_limit(r, f, d, DEFAULT_NODE_LIMIT)
}

pub fn apply_recipe_with_limit(
    r: &OperatorRecipe,
    f: &Expr,
    d: usize,
    node_limit: usize,
) -> Result<Expr, OperatorError> {
    r.validate(d)?;
    if f.max_var() > d {
        return Err(SymbolicError::VariableOutOfRange {
            index: f.max_var(),
            dim: d,
        }
        .into());
    }
    apply_inner(r, &f.simplify(), node_limit)
}

fn apply_inner(r: &OperatorRecipe, f: &Expr, limit: usize) -> Result<Expr, OperatorError> {
    match r {
        OperatorRecipe::Identity => Ok(f.clone()),
        OperatorRecipe::Det { rows, children } => {
            let inner: Vec<Expr> = children
                .iter()
                .map(|c| apply_inner(c, f, limit))
                .collect::<Result<_, _>>()?;
            // m[j][k] = ∂_{i_j} (L_k F)
            let m: Vec<Vec<Expr>> = rows
                .iter()
                .map(|&i| inner.iter().map(|g| diff(g, i)).collect())
                .collect();
            let out = determinant(&m);
            let nodes = out.node_count();
            if nodes > limit {
                return Err(OperatorError::TooLarge { nodes, limit });
            }
            Ok(out)
        }
    }
}

/// Functions `π_1, ..., π_m` over `x_1..x_d`.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionTuple {
    pub d: usize,
    pub exprs: Vec<Expr>,
}

impl FunctionTuple {
    pub fn new(d: usize, exprs: Vec<Expr>) -> Result<Self, OperatorError> {
        if d == 0 {
            return Err(SymbolicError::ZeroDimension.into());
        }
        for e in &exprs {
            if e.max_var() > d {
                return Err(SymbolicError::VariableOutOfRange {
                    index: e.max_var(),
                    dim: d,
                }
                .into());
            }
        }
        Ok(FunctionTuple { d, exprs })
    }

    /// `(x_1, ..., x_d, F)`.
    pub fn euclidean(f: Expr, d: usize) -> Result<Self, OperatorError> {
        let mut exprs: Vec<Expr> = (1..=d).map(Expr::var).collect();
        exprs.push(f);
        FunctionTuple::new(d, exprs)
    }

    /// `(x_1, ..., x_d)` followed by the parsed functions.
    pub fn euclidean_from_text(texts: &[&str], d: usize) -> Result<Self, OperatorError> {
        let mut exprs: Vec<Expr> = (1..=d).map(Expr::var).collect();
        for t in texts {
            exprs.push(parse(t, d)?);
        }
        FunctionTuple::new(d, exprs)
    }

    pub fn m(&self) -> usize {
        self.exprs.len()
    }
}

/// `∂^G π`: a leaf `i` gives `π_i`, a node the Jacobian determinant of its
/// children's functions in stored order.
pub fn apply_tree(g: &DTree, pi: &FunctionTuple) -> Result<Expr, OperatorError> {
    let need = g.max_index();
    if need > pi.m() {
        return Err(OperatorError::TupleTooShort { need, got: pi.m() });
    }
    g.validate(pi.d, pi.m())?;
    Ok(apply_tree_inner(g, pi))
}

fn apply_tree_inner(g: &DTree, pi: &FunctionTuple) -> Expr {
    match g {
        DTree::Leaf(i) => pi.exprs[*i - 1].simplify(),
        DTree::Node(cs) => {
            let fs: Vec<Expr> = cs.iter().map(|c| apply_tree_inner(c, pi)).collect();
            jacobian_det(&fs, pi.d).expect("validated arity and variables")
        }
    }
}

/// The tree `G` with `LF = ∂^G π` for `π = (x_1, ..., x_d, F)`.
///
/// The identity gives the leaf `d+1`. A node `det[i_1..i_n](L_1..L_n)` places
/// the tree of `L_k` in slot `i_k` and the coordinate leaf `j` in every other
/// slot `j`. Expanding the Jacobian along those coordinate rows leaves exactly
/// the matrix `(∂_{i_j} L_k F)`, so the sign is `+1`.
pub fn tree_of_recipe(r: &OperatorRecipe, d: usize) -> Result<DTree, OperatorError> {
    r.validate(d)?;
    Ok(tree_unchecked(r, d))
}

fn tree_unchecked(r: &OperatorRecipe, d: usize) -> DTree {
    match r {
        OperatorRecipe::Identity => DTree::Leaf(d + 1),
        OperatorRecipe::Det { rows, children } => DTree::Node(
            (1..=d)
                .map(|j| match rows.iter().position(|&i| i == j) {
                    Some(k) => tree_unchecked(&children[k], d),
                    None => DTree::Leaf(j),
                })
                .collect(),
        ),
    }
}

/// Sign of `LF / ∂^G π` observed at sample points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ObservedSign {
    Positive,
    Negative,
    Mixed,
    /// Both sides vanished (or failed to evaluate) at every sample.
    Undetermined,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub verdict: ZeroVerdict,
    pub sign: ObservedSign,
    pub lhs: Expr,
    pub rhs: Expr,
    pub tree: DTree,
}

impl EquivalenceReport {
    pub fn pass(&self) -> bool {
        self.verdict.is_zero()
    }
}

/// Compare `(LF)^2` with `(∂^G π)^2` for `G = tree_of_recipe(R)`.
pub fn recipe_tree_equivalence(
    r: &OperatorRecipe,
    f: &Expr,
    d: usize,
    trials: usize,
    seed: u64,
) -> Result<EquivalenceReport, OperatorError> {
    let lhs = apply_recipe(r, f, d)?;
    let tree = tree_of_recipe(r, d)?;
    let rhs = apply_tree(&tree, &FunctionTuple::euclidean(f.clone(), d)?)?;
    let diff_sq = make_sub(
        make_mul(vec![lhs.clone(), lhs.clone()]),
        make_mul(vec![rhs.clone(), rhs.clone()]),
    );
    let verdict = zero_test(&diff_sq, trials, seed);
    let sign = observed_sign(&lhs, &rhs, d, trials, seed);
    Ok(EquivalenceReport {
        verdict,
        sign,
        lhs,
        rhs,
        tree,
    })
}

fn observed_sign(lhs: &Expr, rhs: &Expr, d: usize, trials: usize, seed: u64) -> ObservedSign {
    let (a, b) = (CompiledExpr::new(lhs), CompiledExpr::new(rhs));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5157_4e00);
    let (mut pos, mut neg) = (false, false);
    let mut x = vec![0.0; d];
    for _ in 0..trials.max(1) {
        for xi in x.iter_mut() {
            *xi = rng.gen_range(-1.0..=1.0);
        }
        let (u, v) = (a.eval(&x), b.eval(&x));
        if !(u.is_finite() && v.is_finite()) || u.abs() < 1e-12 || v.abs() < 1e-12 {
            continue;
        }
        if (u > 0.0) == (v > 0.0) {
            pos = true;
        } else {
            neg = true;
        }
    }
    match (pos, neg) {
        (true, false) => ObservedSign::Positive,
        (false, true) => ObservedSign::Negative,
        (true, true) => ObservedSign::Mixed,
        (false, false) => ObservedSign::Undetermined,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::{mixed_derivative_tree, parse_tree, stats};

    fn rec(s: &str) -> OperatorRecipe {
        parse_recipe(s).unwrap()
    }

    fn p(s: &str) -> Expr {
        parse(s, 2).unwrap()
    }

    #[test]
    fn types() {
        assert_eq!(
            type_of_recipe(&OperatorRecipe::Identity, 3).unwrap(),
            OperatorType { alpha: 1, beta: vec![0, 0, 0] }
        );
        let h = OperatorRecipe::hessian(2);
        assert_eq!(rec("det[1,2](det[1](id),det[2](id))"), h);
        assert_eq!(type_of_recipe(&h, 2).unwrap(), OperatorType { alpha: 2, beta: vec![2, 2] });
        let second = rec("det[1,2](id,det[1](det[2](id)))");
        assert_eq!(type_of_recipe(&second, 2).unwrap(), OperatorType { alpha: 2, beta: vec![2, 2] });
    }

    #[test]
    fn malformed_recipes() {
        let bad = OperatorRecipe::Det { rows: vec![1, 2], children: vec![OperatorRecipe::Identity] };
        assert!(matches!(type_of_recipe(&bad, 2), Err(OperatorError::ArityMismatch { .. })));
        assert!(matches!(
            type_of_recipe(&rec("det[2,1](id,id)"), 2),
            Err(OperatorError::RowsNotIncreasing { .. })
        ));
        assert!(matches!(
            type_of_recipe(&rec("det[3](id)"), 2),
            Err(OperatorError::RowOutOfRange { index: 3, d: 2 })
        ));
    }

    #[test]
    fn apply_examples() {
        let f = p("x1^2 + x2^2");
        assert_eq!(apply_recipe(&OperatorRecipe::Identity, &f, 2).unwrap(), f);
        assert_eq!(apply_recipe(&OperatorRecipe::hessian(2), &f, 2).unwrap(), Expr::int(4));
        let f = p("exp(x1)*sin(10*x2)/10");
        let h = apply_recipe(&OperatorRecipe::hessian(2), &f, 2).unwrap();
        let sum = crate::symbolic::make_add(vec![h, p("exp(2*x1)")]);
        assert!(zero_test(&sum, 50, 3).is_zero());
    }

    #[test]
    fn second_operator_formula() {
        // rows (1,2), children (id, ∂1∂2): F_x F_xyy - F_y F_xxy
        let r = rec("det[1,2](id,det[1](det[2](id)))");
        let f = p("x1^4 + x1*x2^3");
        let lf = apply_recipe(&r, &f, 2).unwrap();
        let want = p("(4*x1^3 + x2^3)*(6*x2) - (3*x1*x2^2)*0");
        assert!(zero_test(&make_sub(lf, want), 1, 0).is_zero());
    }

    #[test]
    fn node_limit() {
        let r = OperatorRecipe::hessian(2);
        let err = apply_recipe_with_limit(&r, &p("exp(x1*x2)*sin(x1+x2)"), 2, 5).unwrap_err();
        assert!(matches!(err, OperatorError::TooLarge { limit: 5, .. }));
    }

    #[test]
    fn tree_examples() {
        let pi = FunctionTuple::euclidean(p("x1^2 + x2^2"), 2).unwrap();
        assert_eq!(apply_tree(&parse_tree("(1,2)").unwrap(), &pi).unwrap(), Expr::one());
        let g = crate::trees::hessian_tree(2).unwrap();
        assert_eq!(apply_tree(&g, &pi).unwrap(), Expr::int(4));
        let pi = FunctionTuple::euclidean(p("x1^2*x2^2"), 2).unwrap();
        let g = mixed_derivative_tree(&[1, 1], 2).unwrap();
        assert_eq!(apply_tree(&g, &pi).unwrap(), p("4*x1*x2"));
    }

    #[test]
    fn tree_of_recipe_examples() {
        assert_eq!(tree_of_recipe(&OperatorRecipe::partial(1), 2).unwrap().to_string(), "(3,2)");
        assert_eq!(
            tree_of_recipe(&OperatorRecipe::hessian(2), 2).unwrap().to_string(),
            "((3,2),(1,3))"
        );
        let r = OperatorRecipe::mixed_partial(&[1, 1, 1, 0]);
        assert_eq!(
            tree_of_recipe(&r, 4).unwrap(),
            mixed_derivative_tree(&[1, 1, 1, 0], 4).unwrap()
        );
        assert_eq!(
            tree_of_recipe(&r, 4).unwrap().to_string(),
            "(1,2,(1,(5,2,3,4),3,4),4)"
        );
    }

    #[test]
    fn numerology_on_enumerated_recipes() {
        for d in 1..=3 {
            for r in enumerate_recipes(d, 3) {
                let t = type_of_recipe(&r, d).unwrap();
                let s = stats(&tree_of_recipe(&r, d).unwrap(), d + 1).unwrap();
                assert_eq!(s.order as i64, t.order());
                assert_eq!(s.leaf_counts[d], t.alpha);
                for i in 0..d {
                    assert_eq!(s.leaf_counts[i] as i64, t.order() - t.beta[i] as i64);
                }
            }
        }
    }

    #[test]
    fn equivalence_examples() {
        let cases = [
            ("det[1](id)", "sin(x1)*cos(x2)"),
            ("det[1,2](det[1](id),det[2](id))", "x1^3 + x2^3"),
            ("det[1,2](id,det[1](det[2](id)))", "x1^4 + x1*x2^3"),
        ];
        for (r, f) in cases {
            let rep = recipe_tree_equivalence(&rec(r), &p(f), 2, 20, 9).unwrap();
            assert!(rep.pass(), "{r} on {f}: {:?}", rep.verdict);
            assert_eq!(rep.sign, ObservedSign::Positive, "{r} on {f}");
        }
    }
}
