//! Expression tree and canonical smart constructors.
//!
//! Every constructor in this file assumes its arguments are already in
//! canonical form and returns a canonical expression. [`Expr::simplify`]
//! rebuilds a tree bottom-up through these constructors, so applying it twice
//! is the same as applying it once.
//!
//! Canonical form:
//! - no `Neg` nodes (negation is multiplication by `-1`);
//! - sums and products are flattened, sorted by the derived `Ord`, and
//!   carry at most one leading constant (never `0` in a sum, never `0`/`1` in
//!   a product);
//! - like terms of a sum and like bases of a product are merged;
//! - a product holds at most one `exp` factor (`exp(a)*exp(b) = exp(a+b)`);
//! - powers never have a constant, power, product or `exp` base (except the
//!   irreducible `0^-n`).
//!
//! Trigonometric identities are deliberately not applied.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A multivariate real expression over variables `x1..xd`.
///
/// The variant order fixes the canonical term order: node kind first,
/// then variable index, then children recursively.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Const(BigRational),
    /// 1-based variable index.
    Var(usize),
    Pow(Box<Expr>, i64),
    Mul(Vec<Expr>),
    Add(Vec<Expr>),
    Neg(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Const(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn rational(num: i64, den: i64) -> Expr {
        Expr::Const(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Expr {
        Expr::Const(BigRational::zero())
    }

    pub fn one() -> Expr {
        Expr::Const(BigRational::one())
    }

    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_one())
    }

    pub fn as_const(&self) -> Option<&BigRational> {
        match self {
            Expr::Const(c) => Some(c),
            _ => None,
        }
    }

    /// Total number of nodes in the tree.
    pub fn node_count(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Pow(b, _) | Expr::Neg(b) | Expr::Sin(b) | Expr::Cos(b) | Expr::Exp(b) => {
                1 + b.node_count()
            }
            Expr::Mul(xs) | Expr::Add(xs) => 1 + xs.iter().map(Expr::node_count).sum::<usize>(),
        }
    }

    /// Largest variable index that occurs, or 0 for a constant.
    pub fn max_var(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(i) => *i,
            Expr::Pow(b, _) | Expr::Neg(b) | Expr::Sin(b) | Expr::Cos(b) | Expr::Exp(b) => {
                b.max_var()
            }
            Expr::Mul(xs) | Expr::Add(xs) => xs.iter().map(Expr::max_var).max().unwrap_or(0),
        }
    }

    /// True when the expression contains no `sin`, `cos` or `exp`.
    pub fn is_algebraic(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var(_) => true,
            Expr::Pow(b, _) | Expr::Neg(b) => b.is_algebraic(),
            Expr::Mul(xs) | Expr::Add(xs) => xs.iter().all(Expr::is_algebraic),
            Expr::Sin(_) | Expr::Cos(_) | Expr::Exp(_) => false,
        }
    }

    /// Rebuild the expression in canonical form.
    pub fn simplify(&self) -> Expr {
        match self {
            Expr::Const(_) | Expr::Var(_) => self.clone(),
            Expr::Pow(b, n) => make_pow(b.simplify(), *n),
            Expr::Mul(xs) => make_mul(xs.iter().map(Expr::simplify).collect()),
            Expr::Add(xs) => make_add(xs.iter().map(Expr::simplify).collect()),
            Expr::Neg(b) => make_neg(b.simplify()),
            Expr::Sin(b) => make_sin(b.simplify()),
            Expr::Cos(b) => make_cos(b.simplify()),
            Expr::Exp(b) => make_exp(b.simplify()),
        }
    }
}

pub(crate) fn rational_pow(c: &BigRational, n: i64) -> BigRational {
    let e = n.unsigned_abs();
    let mut acc = BigRational::one();
    let mut base = c.clone();
    let mut k = e;
    while k > 0 {
        if k & 1 == 1 {
            acc *= &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    if n < 0 {
        acc.recip()
    } else {
        acc
    }
}

pub fn make_neg(e: Expr) -> Expr {
    make_mul(vec![Expr::int(-1), e])
}

pub fn make_sub(a: Expr, b: Expr) -> Expr {
    make_add(vec![a, make_neg(b)])
}

pub fn make_sin(u: Expr) -> Expr {
    if u.is_zero() {
        Expr::zero()
    } else {
        Expr::Sin(Box::new(u))
    }
}

pub fn make_cos(u: Expr) -> Expr {
    if u.is_zero() {
        Expr::one()
    } else {
        Expr::Cos(Box::new(u))
    }
}

pub fn make_exp(u: Expr) -> Expr {
    if u.is_zero() {
        Expr::one()
    } else {
        Expr::Exp(Box::new(u))
    }
}

pub fn make_pow(base: Expr, n: i64) -> Expr {
    if n == 0 {
        return Expr::one();
    }
    if n == 1 {
        return base;
    }
    match base {
        Expr::Const(c) => {
            if c.is_zero() && n < 0 {
                Expr::Pow(Box::new(Expr::Const(c)), n)
            } else {
                Expr::Const(rational_pow(&c, n))
            }
        }
        Expr::Pow(b, m) => make_pow(*b, m.saturating_mul(n)),
        Expr::Mul(fs) => make_mul(fs.into_iter().map(|f| make_pow(f, n)).collect()),
        Expr::Exp(u) => make_exp(make_mul(vec![Expr::int(n), *u])),
        other => Expr::Pow(Box::new(other), n),
    }
}

/// Split a canonical factor into `(base, exponent)`.
fn split_power(f: Expr) -> (Expr, i64) {
    match f {
        Expr::Pow(b, n) => (*b, n),
        other => (other, 1),
    }
}

pub fn make_mul(factors: Vec<Expr>) -> Expr {
    let mut coef = BigRational::one();
    let mut exp_args: Vec<Expr> = Vec::new();
    let mut powers: BTreeMap<Expr, i64> = BTreeMap::new();

    let mut stack = factors;
    while let Some(f) = stack.pop() {
        match f {
            Expr::Const(c) => {
                if c.is_zero() {
                    return Expr::zero();
                }
                coef *= c;
            }
            Expr::Mul(inner) => stack.extend(inner),
            Expr::Neg(inner) => {
                coef = -coef;
                stack.push(*inner);
            }
            Expr::Exp(u) => exp_args.push(*u),
            other => {
                let (b, n) = split_power(other);
                *powers.entry(b).or_insert(0) += n;
            }
        }
    }

    let mut out: Vec<Expr> = Vec::with_capacity(powers.len() + 2);
    for (b, n) in powers {
        match make_pow(b, n) {
            Expr::Const(c) => coef *= c,
            f => out.push(f),
        }
    }
    if !exp_args.is_empty() {
        match make_exp(make_add(exp_args)) {
            Expr::Const(c) => coef *= c,
            e => out.push(e),
        }
    }
    if coef.is_zero() {
        return Expr::zero();
    }

    // c * (a + b) distributes so sums stay flat.
    if !coef.is_one() && out.len() == 1 && matches!(out[0], Expr::Add(_)) {
        if let Some(Expr::Add(ts)) = out.pop() {
            let c = Expr::Const(coef);
            return make_add(
                ts.into_iter()
                    .map(|t| make_mul(vec![c.clone(), t]))
                    .collect(),
            );
        }
    }

    out.sort();
    match (out.len(), coef.is_one()) {
        (0, _) => Expr::Const(coef),
        (1, true) => out.pop().expect("one factor"),
        (_, true) => Expr::Mul(out),
        (_, false) => {
            out.insert(0, Expr::Const(coef));
            Expr::Mul(out)
        }
    }
}

/// Split a canonical term into `(coefficient, non-constant part)`.
fn split_term(t: Expr) -> (BigRational, Option<Expr>) {
    match t {
        Expr::Const(c) => (c, None),
        Expr::Mul(mut fs) => {
            if let Some(Expr::Const(_)) = fs.first() {
                let c = match fs.remove(0) {
                    Expr::Const(c) => c,
                    _ => unreachable!(),
                };
                let rest = if fs.len() == 1 {
                    fs.pop().expect("one factor")
                } else {
                    Expr::Mul(fs)
                };
                (c, Some(rest))
            } else {
                (BigRational::one(), Some(Expr::Mul(fs)))
            }
        }
        other => (BigRational::one(), Some(other)),
    }
}

fn rebuild_term(c: BigRational, rest: Expr) -> Expr {
    if c.is_one() {
        return rest;
    }
    match rest {
        Expr::Mul(mut fs) => {
            fs.insert(0, Expr::Const(c));
            Expr::Mul(fs)
        }
        other => Expr::Mul(vec![Expr::Const(c), other]),
    }
}

pub fn make_add(terms: Vec<Expr>) -> Expr {
    let mut constant = BigRational::zero();
    let mut like: BTreeMap<Expr, BigRational> = BTreeMap::new();

    let mut stack = terms;
    while let Some(t) = stack.pop() {
        match t {
            Expr::Add(inner) => stack.extend(inner),
            Expr::Neg(inner) => stack.push(make_neg(*inner)),
            other => match split_term(other) {
                (c, None) => constant += c,
                (c, Some(rest)) => {
                    let slot = like.entry(rest).or_insert_with(BigRational::zero);
                    *slot += c;
                }
            },
        }
    }

    let mut out: Vec<Expr> = like
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(rest, c)| rebuild_term(c, rest))
        .collect();
    if !constant.is_zero() {
        out.push(Expr::Const(constant));
    }
    out.sort();
    match out.len() {
        0 => Expr::zero(),
        1 => out.pop().expect("one term"),
        _ => Expr::Add(out),
    }
}

/// True when the term prints with a leading minus sign.
pub(crate) fn is_negative_term(t: &Expr) -> bool {
    match t {
        Expr::Const(c) => c.is_negative(),
        Expr::Mul(fs) => matches!(fs.first(), Some(Expr::Const(c)) if c.is_negative()),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Expr {
        Expr::var(i)
    }

    #[test]
    fn like_terms_cancel() {
        let e = make_sub(x(1), x(1));
        assert!(e.is_zero());
        let e = make_add(vec![x(1), x(2), x(1)]);
        assert_eq!(e, Expr::Add(vec![x(2), Expr::Mul(vec![Expr::int(2), x(1)])]));
    }

    #[test]
    fn powers_merge_and_exp_combines() {
        let e = make_mul(vec![x(1), x(1), x(2)]);
        assert_eq!(e, Expr::Mul(vec![x(2), Expr::Pow(Box::new(x(1)), 2)]).simplify());
        let e = make_mul(vec![make_exp(x(1)), make_exp(x(1))]);
        assert_eq!(e, make_exp(make_mul(vec![Expr::int(2), x(1)])));
        let e = make_pow(make_exp(x(1)), -1);
        assert_eq!(make_mul(vec![e, make_exp(x(1))]), Expr::one());
    }

    #[test]
    fn constants_fold() {
        let e = make_pow(Expr::rational(2, 3), -2);
        assert_eq!(e, Expr::rational(9, 4));
        assert_eq!(make_mul(vec![Expr::int(0), x(1)]), Expr::zero());
        assert_eq!(make_pow(x(3), 0), Expr::one());
        // 0^-1 is left symbolic; evaluation reports it.
        assert!(matches!(make_pow(Expr::zero(), -1), Expr::Pow(_, -1)));
    }

    #[test]
    fn constant_distributes_over_sum() {
        let s = make_add(vec![x(1), x(2)]);
        let e = make_mul(vec![Expr::int(2), s]);
        assert_eq!(
            e,
            make_add(vec![
                make_mul(vec![Expr::int(2), x(1)]),
                make_mul(vec![Expr::int(2), x(2)])
            ])
        );
    }

    #[test]
    fn simplify_removes_neg() {
        let e = Expr::Neg(Box::new(Expr::Neg(Box::new(x(1)))));
        assert_eq!(e.simplify(), x(1));
    }
}
