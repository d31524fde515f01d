//! Pfaffian formats, Khovanskii's bound on nondegenerate solutions, format
//! propagation through d-trees, and empirical root counting.

mod count;
mod suite;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::interval::eval_interval;
use crate::numerics::AxisBox;
use crate::symbolic::{make_mul, Expr, SymbolicError};
use crate::trees::DTree;

pub use count::{count_nondegenerate, count_nondegenerate_at, SolutionCount, DEFAULT_NONDEGENERACY};
pub use suite::{polynomial_suite, SuiteSystem};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PfaffianError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("transcendental subterm {0} is not registered in the chain")]
    Unregistered(String),
    #[error("negative power in {0}: not a polynomial in the chain")]
    NegativePower(String),
    #[error("trigonometric chain needs a linear argument, got {0}")]
    NonlinearTrigArgument(String),
    #[error("trigonometric chains require a bounded domain")]
    UnboundedTrigDomain,
    #[error("argument {arg} ranges over width {width} >= 2π on the domain")]
    TrigRangeTooWide { arg: String, width: f64 },
    #[error("exp chain argument must be a polynomial, got {0}")]
    NonpolynomialExpArgument(String),
    #[error("formats do not share a chain: {0:?} vs {1:?}")]
    ChainMismatch(PfaffianFormat, PfaffianFormat),
    #[error("a single leaf gives no system; the tree needs an internal root")]
    LeafTree,
    #[error("tree needs function {need}, only {got} formats given")]
    MissingFormat { need: usize, got: usize },
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

/// `(d, r, α, β)`: dimension, chain order, chain degree, polynomial degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PfaffianFormat {
    pub d: usize,
    pub r: usize,
    pub alpha: usize,
    pub beta: usize,
}

impl PfaffianFormat {
    pub fn polynomial(d: usize, degree: usize) -> Self {
        PfaffianFormat {
            d,
            r: 0,
            alpha: 1,
            beta: degree.max(1),
        }
    }

    /// Format of a partial derivative. With a chain the degree becomes
    /// `β + α − 1`; a plain polynomial drops one degree (floored at 1).
    pub fn derivative(self) -> Self {
        PfaffianFormat {
            beta: deriv_degree(self.r, self.alpha, self.beta).max(1),
            ..self
        }
    }

    /// Format of a product (degrees add).
    pub fn product(self, other: Self) -> Result<Self, PfaffianError> {
        let (r, alpha) = common_chain(&self, &other)?;
        Ok(PfaffianFormat {
            d: self.d,
            r,
            alpha,
            beta: self.beta + other.beta,
        })
    }

    /// Format of a sum (degrees take the max).
    pub fn sum(self, other: Self) -> Result<Self, PfaffianError> {
        let (r, alpha) = common_chain(&self, &other)?;
        Ok(PfaffianFormat {
            d: self.d,
            r,
            alpha,
            beta: self.beta.max(other.beta),
        })
    }
}

fn deriv_degree(r: usize, alpha: usize, beta: usize) -> usize {
    if beta == 0 {
        0
    } else if r == 0 {
        beta - 1
    } else {
        beta + alpha - 1
    }
}

/// Chain shared by two formats. A chain-free (r = 0) format lifts onto any
/// chain; two nontrivial chains must agree.
fn common_chain(a: &PfaffianFormat, b: &PfaffianFormat) -> Result<(usize, usize), PfaffianError> {
    if a.d != b.d {
        return Err(PfaffianError::ChainMismatch(*a, *b));
    }
    match (a.r, b.r) {
        (0, 0) => Ok((0, 1)),
        (0, _) => Ok((b.r, b.alpha)),
        (_, 0) => Ok((a.r, a.alpha)),
        _ if a.r == b.r && a.alpha == b.alpha => Ok((a.r, a.alpha)),
        _ => Err(PfaffianError::ChainMismatch(*a, *b)),
    }
}

/// `2^{r(r−1)/2} · β_1⋯β_d · (min(d,r)·α + β_1+⋯+β_d − d + 1)^r`.
pub fn khovanskii_bound(d: usize, r: usize, alpha: usize, betas: &[usize]) -> Result<BigUint, PfaffianError> {
    if d == 0 {
        return Err(PfaffianError::Precondition("d must be at least 1".into()));
    }
    if alpha == 0 {
        return Err(PfaffianError::Precondition("alpha must be at least 1".into()));
    }
    if betas.len() != d {
        return Err(PfaffianError::Precondition(format!(
            "expected {d} degrees, got {}",
            betas.len()
        )));
    }
    if betas.contains(&0) {
        return Err(PfaffianError::Precondition("every degree must be at least 1".into()));
    }
    let two_power = BigUint::one() << (r * r.saturating_sub(1) / 2);
    let prod: BigUint = betas.iter().map(|&b| BigUint::from(b)).product();
    let base = BigUint::from(d.min(r)) * BigUint::from(alpha)
        + betas.iter().map(|&b| BigUint::from(b)).sum::<BigUint>()
        + BigUint::one()
        - BigUint::from(d);
    let r32 = u32::try_from(r).map_err(|_| PfaffianError::Precondition("r too large".into()))?;
    Ok(two_power * prod * num_traits::pow::Pow::pow(base, r32))
}

/// One function of a declared Pfaffian chain.
#[derive(Clone, Debug, PartialEq)]
pub enum ChainEntry {
    /// `f = exp(u)` with `u` a polynomial: `df = f du`, order 1.
    Exp(Expr),
    /// `sin(u)`, `cos(u)` with `u` linear, through the order-2 chain
    /// `f1 = tan((u−c)/2)`, `f2 = cos²((u−c)/2)` where `c` is the midpoint of
    /// the range of `u` over the domain. Needs that range narrower than `2π`.
    Trig(Expr),
}

/// A chain declaration over a dimension, with the domain it must hold on.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainDecl {
    pub d: usize,
    pub entries: Vec<ChainEntry>,
    pub domain: Option<AxisBox>,
}

impl ChainDecl {
    pub fn none(d: usize) -> Self {
        ChainDecl {
            d,
            entries: Vec::new(),
            domain: None,
        }
    }

    /// Parse entries of the form `exp:<expr>` or `trig:<expr>`.
    pub fn from_specs(d: usize, specs: &[String], domain: Option<AxisBox>) -> Result<Self, PfaffianError> {
        let mut entries = Vec::new();
        for s in specs {
            let (kind, arg) = s
                .split_once(':')
                .ok_or_else(|| PfaffianError::Precondition(format!("chain entry '{s}' is not kind:expr")))?;
            let e = crate::symbolic::parse(arg, d)?;
            entries.push(match kind.trim() {
                "exp" => ChainEntry::Exp(e),
                "trig" => ChainEntry::Trig(e),
                other => {
                    return Err(PfaffianError::Precondition(format!("unknown chain kind '{other}'")))
                }
            });
        }
        Ok(ChainDecl { d, entries, domain })
    }
}

struct ResolvedChain {
    r: usize,
    alpha: usize,
    exps: Vec<Expr>,
    /// (argument, centre of its range)
    trigs: Vec<(Expr, f64)>,
}

fn resolve(chain: &ChainDecl) -> Result<ResolvedChain, PfaffianError> {
    let mut out = ResolvedChain {
        r: 0,
        alpha: 1,
        exps: Vec::new(),
        trigs: Vec::new(),
    };
    for entry in &chain.entries {
        match entry {
            ChainEntry::Exp(u) => {
                let k = poly_degree(u).ok_or_else(|| PfaffianError::NonpolynomialExpArgument(u.to_string()))?;
                out.r += 1;
                out.alpha = out.alpha.max(k.max(1));
                out.exps.push(u.clone());
            }
            ChainEntry::Trig(u) => {
                if poly_degree(u).is_none_or(|k| k > 1) {
                    return Err(PfaffianError::NonlinearTrigArgument(u.to_string()));
                }
                let domain = chain.domain.as_ref().ok_or(PfaffianError::UnboundedTrigDomain)?;
                let range = eval_interval(u, &domain.intervals());
                if !range.is_finite() || range.width() >= std::f64::consts::TAU {
                    return Err(PfaffianError::TrigRangeTooWide {
                        arg: u.to_string(),
                        width: range.width(),
                    });
                }
                out.r += 2;
                out.alpha = out.alpha.max(2);
                out.trigs.push((u.clone(), range.mid()));
            }
        }
    }
    Ok(out)
}

/// Degree of a polynomial in `x`, or `None` if `e` is not one.
fn poly_degree(e: &Expr) -> Option<usize> {
    match e {
        Expr::Const(_) => Some(0),
        Expr::Var(_) => Some(1),
        Expr::Add(ts) => ts.iter().map(poly_degree).try_fold(0, |m, k| Some(m.max(k?))),
        Expr::Mul(fs) => fs.iter().map(poly_degree).try_fold(0, |s, k| Some(s + k?)),
        Expr::Pow(b, n) if *n >= 0 => Some(poly_degree(b)? * *n as usize),
        Expr::Neg(b) => poly_degree(b),
        _ => None,
    }
}

/// Degree of `e` as a polynomial in `x` and the chain functions.
fn chain_degree(e: &Expr, ch: &ResolvedChain) -> Result<usize, PfaffianError> {
    Ok(match e {
        Expr::Const(_) => 0,
        Expr::Var(_) => 1,
        Expr::Add(ts) => ts.iter().map(|t| chain_degree(t, ch)).try_fold(0, |m, k| k.map(|k| m.max(k)))?,
        Expr::Mul(fs) => fs.iter().map(|f| chain_degree(f, ch)).try_fold(0, |s, k| k.map(|k| s + k))?,
        Expr::Pow(b, n) if *n >= 0 => chain_degree(b, ch)? * *n as usize,
        Expr::Pow(..) => return Err(PfaffianError::NegativePower(e.to_string())),
        Expr::Neg(b) => chain_degree(b, ch)?,
        Expr::Exp(u) => exp_degree(u, ch).ok_or_else(|| PfaffianError::Unregistered(e.to_string()))?,
        Expr::Sin(u) => trig_degree(u, ch, true).ok_or_else(|| PfaffianError::Unregistered(e.to_string()))?,
        Expr::Cos(u) => trig_degree(u, ch, false).ok_or_else(|| PfaffianError::Unregistered(e.to_string()))?,
    })
}

/// `exp(k·u)` for a registered `u` and positive integer `k` is `f^k`.
fn exp_degree(arg: &Expr, ch: &ResolvedChain) -> Option<usize> {
    let arg = arg.simplify();
    for u in &ch.exps {
        let u = u.simplify();
        if arg == u {
            return Some(1);
        }
        for k in 2..=16i64 {
            if make_mul(vec![Expr::int(k), u.clone()]) == arg {
                return Some(k as usize);
            }
        }
    }
    None
}

fn trig_degree(arg: &Expr, ch: &ResolvedChain, is_sin: bool) -> Option<usize> {
    let arg = arg.simplify();
    ch.trigs.iter().find(|(u, _)| u.simplify() == arg).map(|(_, c)| {
        // sin v = 2 f1 f2, cos v = 2 f2 − 1 with v = u − c
        if !is_sin && *c == 0.0 {
            1
        } else {
            2
        }
    })
}

/// Format of `e` over the declared chain. A chain-free result has `r = 0`.
pub fn format_of(e: &Expr, chain: &ChainDecl) -> Result<PfaffianFormat, PfaffianError> {
    if e.max_var() > chain.d {
        return Err(SymbolicError::VariableOutOfRange {
            index: e.max_var(),
            dim: chain.d,
        }
        .into());
    }
    let ch = resolve(chain)?;
    let e = e.simplify();
    let beta = chain_degree(&e, &ch)?;
    Ok(PfaffianFormat {
        d: chain.d,
        r: ch.r,
        alpha: ch.alpha,
        beta: beta.max(1),
    })
}

#[derive(Clone, Copy, Debug)]
struct Propagated {
    r: usize,
    alpha: usize,
    /// Unclamped degree; 0 marks a constant.
    beta: usize,
}

fn propagate(g: &DTree, formats: &[PfaffianFormat], d: usize) -> Result<Propagated, PfaffianError> {
    match g {
        DTree::Leaf(i) => {
            let f = formats.get(*i - 1).ok_or(PfaffianError::MissingFormat {
                need: *i,
                got: formats.len(),
            })?;
            Ok(Propagated {
                r: f.r,
                alpha: f.alpha,
                beta: f.beta,
            })
        }
        DTree::Node(cs) => {
            let mut r = 0;
            let mut alpha = 1;
            let mut beta = 0;
            let mut anchor: Option<PfaffianFormat> = None;
            for c in cs {
                let p = propagate(c, formats, d)?;
                if p.r > 0 {
                    let f = PfaffianFormat { d, r: p.r, alpha: p.alpha, beta: 1 };
                    if let Some(a) = anchor {
                        common_chain(&a, &f)?;
                    }
                    anchor = Some(f);
                    r = p.r;
                    alpha = p.alpha;
                }
                // each determinant term takes one first-derivative entry per child
                beta += deriv_degree(p.r, p.alpha, p.beta);
            }
            Ok(Propagated { r, alpha, beta })
        }
    }
}

/// Upper bound on the nondegenerate solutions of `∂^{G_k} π = c_k`
/// (`k = 1..d`, `G = (G_1, ..., G_d)`), valid for every right-hand side.
pub fn multiplicity_bound(g: &DTree, formats: &[PfaffianFormat]) -> Result<BigUint, PfaffianError> {
    let DTree::Node(children) = g else {
        return Err(PfaffianError::LeafTree);
    };
    let d = children.len();
    let mut anchor: Option<PfaffianFormat> = None;
    for f in formats {
        if f.d != d {
            return Err(PfaffianError::Precondition(format!(
                "format dimension {} differs from tree arity {d}",
                f.d
            )));
        }
        if f.r > 0 {
            if let Some(a) = anchor {
                common_chain(&a, f)?;
            }
            anchor = Some(*f);
        }
    }
    let props: Vec<Propagated> = children
        .iter()
        .map(|c| propagate(c, formats, d))
        .collect::<Result<_, _>>()?;
    let (r, alpha) = anchor.map_or((0, 1), |a| (a.r, a.alpha));
    let betas: Vec<usize> = props.iter().map(|p| p.beta.max(1)).collect();
    khovanskii_bound(d, r, alpha, &betas)
}

/// Formats of `π = (x_1, ..., x_d, F)` for a polynomial `F` of the given degree.
pub fn euclidean_polynomial_formats(d: usize, degree: usize) -> Vec<PfaffianFormat> {
    let mut v = vec![PfaffianFormat::polynomial(d, 1); d];
    v.push(PfaffianFormat::polynomial(d, degree));
    v
}

/// Total degree of a polynomial expression (for Bézout bounds).
pub fn polynomial_degree(e: &Expr) -> Option<usize> {
    poly_degree(&e.simplify())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::parse;
    use crate::trees::{hessian_tree, parse_tree};

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn khovanskii_examples() {
        assert_eq!(khovanskii_bound(3, 0, 1, &[2, 3, 4]).unwrap(), big(24));
        assert_eq!(khovanskii_bound(2, 1, 1, &[1, 1]).unwrap(), big(2));
        assert_eq!(khovanskii_bound(1, 2, 2, &[3]).unwrap(), big(150));
        assert!(khovanskii_bound(2, 0, 1, &[1]).is_err());
        assert!(khovanskii_bound(2, 0, 1, &[1, 0]).is_err());
        assert!(khovanskii_bound(0, 0, 1, &[]).is_err());
        // no overflow for large arguments
        let b = khovanskii_bound(4, 30, 5, &[100, 100, 100, 100]).unwrap();
        assert!(b.bits() > 200);
    }

    #[test]
    fn khovanskii_monotone() {
        for d in 1..=3usize {
            for r in 0..=4usize {
                for alpha in 1..=3usize {
                    for b in 1..=4usize {
                        let betas = vec![b; d];
                        let base = khovanskii_bound(d, r, alpha, &betas).unwrap();
                        assert!(khovanskii_bound(d, r + 1, alpha, &betas).unwrap() >= base);
                        for i in 0..d {
                            let mut up = betas.clone();
                            up[i] += 1;
                            assert!(khovanskii_bound(d, r, alpha, &up).unwrap() >= base);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn format_examples() {
        let f = format_of(&parse("x1^2*x2 + 1", 2).unwrap(), &ChainDecl::none(2)).unwrap();
        assert_eq!(f, PfaffianFormat { d: 2, r: 0, alpha: 1, beta: 3 });
        let chain = ChainDecl::from_specs(2, &["exp:x1".to_string()], None).unwrap();
        let f = format_of(&parse("exp(x1)", 2).unwrap(), &chain).unwrap();
        assert_eq!(f, PfaffianFormat { d: 2, r: 1, alpha: 1, beta: 1 });
        assert_eq!(f.derivative(), f);
        let f = format_of(&parse("x2*exp(3*x1)", 2).unwrap(), &chain).unwrap();
        assert_eq!(f.beta, 4);
    }

    #[test]
    fn format_errors() {
        let none = ChainDecl::none(1);
        assert!(matches!(
            format_of(&parse("exp(x1)", 1).unwrap(), &none),
            Err(PfaffianError::Unregistered(_))
        ));
        assert!(matches!(
            format_of(&parse("x1^-1", 1).unwrap(), &none),
            Err(PfaffianError::NegativePower(_))
        ));
        let trig = ChainDecl::from_specs(1, &["trig:x1".to_string()], None).unwrap();
        assert_eq!(
            format_of(&parse("sin(x1)", 1).unwrap(), &trig),
            Err(PfaffianError::UnboundedTrigDomain)
        );
        let wide = ChainDecl::from_specs(1, &["trig:x1".to_string()], Some(AxisBox::cube(1, 0.0, 7.0))).unwrap();
        assert!(matches!(
            format_of(&parse("sin(x1)", 1).unwrap(), &wide),
            Err(PfaffianError::TrigRangeTooWide { .. })
        ));
        let sq = ChainDecl::from_specs(1, &["trig:x1^2".to_string()], Some(AxisBox::unit(1))).unwrap();
        assert!(matches!(
            format_of(&parse("sin(x1^2)", 1).unwrap(), &sq),
            Err(PfaffianError::NonlinearTrigArgument(_))
        ));
    }

    #[test]
    fn trig_chain_degrees() {
        let sym = ChainDecl::from_specs(1, &["trig:x1".to_string()], Some(AxisBox::cube(1, -1.0, 1.0))).unwrap();
        let f = format_of(&parse("cos(x1)", 1).unwrap(), &sym).unwrap();
        assert_eq!((f.r, f.alpha, f.beta), (2, 2, 1));
        let f = format_of(&parse("sin(x1)*cos(x1)", 1).unwrap(), &sym).unwrap();
        assert_eq!(f.beta, 3);
        let off = ChainDecl::from_specs(1, &["trig:x1".to_string()], Some(AxisBox::unit(1))).unwrap();
        let f = format_of(&parse("cos(x1)", 1).unwrap(), &off).unwrap();
        assert_eq!(f.beta, 2);
    }

    #[test]
    fn multiplicity_examples() {
        let g = parse_tree("(1,2)").unwrap();
        assert_eq!(multiplicity_bound(&g, &euclidean_polynomial_formats(2, 3)).unwrap(), big(1));
        let h = hessian_tree(2).unwrap();
        assert_eq!(multiplicity_bound(&h, &euclidean_polynomial_formats(2, 4)).unwrap(), big(9));
        assert_eq!(multiplicity_bound(&DTree::Leaf(1), &[]), Err(PfaffianError::LeafTree));
    }

    #[test]
    fn multiplicity_with_exp_chain() {
        let chain = ChainDecl::from_specs(2, &["exp:x1".to_string()], None).unwrap();
        let f = format_of(&parse("x2*exp(x1)", 2).unwrap(), &chain).unwrap();
        let mut formats = euclidean_polynomial_formats(2, 1);
        formats[2] = f;
        let h = hessian_tree(2).unwrap();
        // children (F, x2) and (x1, F): each has degree β + α − 1 = 2
        let want = khovanskii_bound(2, 1, 1, &[2, 2]).unwrap();
        assert_eq!(multiplicity_bound(&h, &formats).unwrap(), want);
    }

    #[test]
    fn monotone_in_function_degree() {
        let h = hessian_tree(2).unwrap();
        let mut last = big(0);
        for k in 2..8 {
            let b = multiplicity_bound(&h, &euclidean_polynomial_formats(2, k)).unwrap();
            assert!(b >= last);
            last = b;
        }
    }
}
