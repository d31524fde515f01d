//! Sparse polynomial normal form and the identically-zero test.
//!
//! Expansion treats every `sin(u)`, `cos(u)`, `exp(u)` and every `b^-1` as an
//! independent indeterminate ("atom"). A polynomial in independent
//! indeterminates that expands to zero is zero under any substitution, so a
//! zero expansion proves identical vanishing. A nonzero expansion proves
//! nonvanishing only when there are no atoms; otherwise the test falls back
//! to seeded sampling.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::eval::magnitude_scale;
use super::expr::{make_exp, make_neg, make_pow, Expr};

/// Relative tolerance of the sampled zero test.
pub const SAMPLED_ZERO_TOLERANCE: f64 = 1e-9;

/// Expansion aborts (and the test falls back to sampling) beyond this many terms.
const MAX_TERMS: usize = 200_000;

const ATOM_BASE: usize = usize::MAX / 2;

type Monomial = Vec<(usize, u32)>;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl Poly {
    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Poly { terms }
    }

    fn generator(g: usize) -> Self {
        Poly {
            terms: BTreeMap::from([(vec![(g, 1)], BigRational::one())]),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree (atoms count as degree-one indeterminates).
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&(_, e)| e).sum())
            .max()
            .unwrap_or(0)
    }

    fn add_assign(&mut self, other: Poly) {
        for (m, c) in other.terms {
            let slot = self.terms.entry(m).or_insert_with(BigRational::zero);
            *slot += c;
        }
        self.terms.retain(|_, c| !c.is_zero());
    }

    fn mul(&self, other: &Poly) -> Option<Poly> {
        if self.terms.len().saturating_mul(other.terms.len()) > MAX_TERMS * 8 {
            return None;
        }
        let mut out: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let slot = out.entry(mono_mul(ma, mb)).or_insert_with(BigRational::zero);
                *slot += ca * cb;
            }
        }
        out.retain(|_, c| !c.is_zero());
        (out.len() <= MAX_TERMS).then_some(Poly { terms: out })
    }

    fn pow(&self, n: u64) -> Option<Poly> {
        let mut acc = Poly::constant(BigRational::one());
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Some(acc)
    }
}

#[derive(Default)]
struct Expander {
    atoms: BTreeMap<Expr, usize>,
}

impl Expander {
    fn atom(&mut self, e: Expr) -> Poly {
        let next = self.atoms.len();
        let id = *self.atoms.entry(e).or_insert(next);
        Poly::generator(ATOM_BASE + id)
    }

    fn expand(&mut self, e: &Expr) -> Option<Poly> {
        Some(match e {
            Expr::Const(c) => Poly::constant(c.clone()),
            Expr::Var(i) => Poly::generator(*i),
            Expr::Add(ts) => {
                let mut acc = Poly::default();
                for t in ts {
                    acc.add_assign(self.expand(t)?);
                    if acc.len() > MAX_TERMS {
                        return None;
                    }
                }
                acc
            }
            Expr::Mul(fs) => {
                let mut acc = Poly::constant(BigRational::one());
                for f in fs {
                    acc = acc.mul(&self.expand(f)?)?;
                }
                acc
            }
            Expr::Pow(b, n) if *n >= 0 => self.expand(b)?.pow(*n as u64)?,
            Expr::Pow(b, n) => {
                let inv = self.atom(make_pow(b.simplify(), -1));
                inv.pow(n.unsigned_abs())?
            }
            Expr::Neg(b) => {
                let mut p = self.expand(b)?;
                for c in p.terms.values_mut() {
                    *c = -c.clone();
                }
                p
            }
            Expr::Exp(u) => self.expand_exp(&u.simplify())?,
            Expr::Sin(_) | Expr::Cos(_) => self.atom(e.simplify()),
        })
    }

    /// `exp(sum k_i t_i)` with integer `k_i` becomes `prod exp(s_i t_i)^|k_i|`
    /// (`s_i` the sign of `k_i`), so `exp(x)^2` and `exp(2x)` agree.
    fn expand_exp(&mut self, u: &Expr) -> Option<Poly> {
        let terms: Vec<Expr> = match u {
            Expr::Add(ts) => ts.clone(),
            other => vec![other.clone()],
        };
        let mut acc = Poly::constant(BigRational::one());
        for t in terms {
            let (coef, rest) = match &t {
                Expr::Mul(fs) => match fs.split_first() {
                    Some((Expr::Const(c), tail)) if c.is_integer() => {
                        let rest = if tail.len() == 1 {
                            tail[0].clone()
                        } else {
                            Expr::Mul(tail.to_vec())
                        };
                        (c.to_integer(), rest)
                    }
                    _ => (BigInt::one(), t.clone()),
                },
                _ => (BigInt::one(), t.clone()),
            };
            let k = coef.to_i64().filter(|k| k.unsigned_abs() <= 64);
            let factor = match k {
                Some(k) => {
                    let base = if k < 0 { make_neg(rest) } else { rest };
                    self.atom(make_exp(base)).pow(k.unsigned_abs())?
                }
                None => self.atom(make_exp(t)),
            };
            acc = acc.mul(&factor)?;
        }
        Some(acc)
    }
}

/// Expand `e` into normal form. Returns the polynomial and whether any
/// transcendental or inverse atoms were introduced, or `None` when the
/// expansion exceeds the term budget.
pub fn expand(e: &Expr) -> Option<(Poly, bool)> {
    let mut ex = Expander::default();
    let p = ex.expand(e)?;
    Some((p, !ex.atoms.is_empty()))
}

/// Outcome of [`zero_test`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroVerdict {
    /// `exact == false` means decided by sampling.
    Zero { exact: bool },
    Nonzero { exact: bool },
    /// Evaluation failed at every sample point.
    Inconclusive,
}

impl ZeroVerdict {
    pub fn is_zero(self) -> bool {
        matches!(self, ZeroVerdict::Zero { .. })
    }

    pub fn label(self) -> &'static str {
        match self {
            ZeroVerdict::Zero { exact: true } => "zero (exact)",
            ZeroVerdict::Zero { exact: false } => "zero (probabilistic)",
            ZeroVerdict::Nonzero { exact: true } => "nonzero (exact)",
            ZeroVerdict::Nonzero { exact: false } => "nonzero (sampled)",
            ZeroVerdict::Inconclusive => "inconclusive",
        }
    }
}

/// Decide whether `e` vanishes identically.
///
/// Polynomials are decided exactly. Otherwise `trials` points drawn
/// uniformly from `[-1,1]^d` with a ChaCha8 stream seeded by `seed` are
/// checked against [`SAMPLED_ZERO_TOLERANCE`] relative to the
/// cancellation-free magnitude of the expression at that point.
pub fn zero_test(e: &Expr, trials: usize, seed: u64) -> ZeroVerdict {
    let s = e.simplify();
    if s.is_zero() {
        return ZeroVerdict::Zero { exact: true };
    }
    if let Some((p, has_atoms)) = expand(&s) {
        if p.is_zero() {
            return ZeroVerdict::Zero { exact: true };
        }
        if !has_atoms {
            return ZeroVerdict::Nonzero { exact: true };
        }
    }
    let dim = s.max_var().max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; dim];
    let mut usable = 0usize;
    for _ in 0..trials.max(1) {
        for xi in x.iter_mut() {
            *xi = rng.gen_range(-1.0..=1.0);
        }
        let v = super::eval::eval(&s, &super::eval::Point(x.clone()));
        let scale = magnitude_scale(&s, &x);
        let Ok(v) = v else { continue };
        if !scale.is_finite() {
            continue;
        }
        usable += 1;
        if v.abs() > SAMPLED_ZERO_TOLERANCE * scale {
            return ZeroVerdict::Nonzero { exact: false };
        }
    }
    if usable == 0 {
        ZeroVerdict::Inconclusive
    } else {
        ZeroVerdict::Zero { exact: false }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse;
    use super::*;

    #[test]
    fn exact_polynomial_cases() {
        let e = parse("x1 - x1", 1).unwrap();
        assert_eq!(zero_test(&e, 10, 1), ZeroVerdict::Zero { exact: true });
        let e = parse("(x1 + x2)^2 - x1^2 - 2*x1*x2 - x2^2", 2).unwrap();
        assert_eq!(zero_test(&e, 10, 1), ZeroVerdict::Zero { exact: true });
        let e = parse("x1*x2", 2).unwrap();
        assert_eq!(zero_test(&e, 10, 1), ZeroVerdict::Nonzero { exact: true });
    }

    #[test]
    fn atoms_expand_exactly() {
        let e = parse("(sin(x1) + exp(x2))^2 - sin(x1)^2 - 2*sin(x1)*exp(x2) - exp(2*x2)", 2)
            .unwrap();
        assert_eq!(zero_test(&e, 10, 1), ZeroVerdict::Zero { exact: true });
    }

    #[test]
    fn trig_identity_needs_sampling() {
        let e = parse("sin(3*x1)^2 + cos(3*x1)^2 - 1", 1).unwrap();
        assert_eq!(zero_test(&e, 50, 7), ZeroVerdict::Zero { exact: false });
        let e = parse("sin(x1)^2 - cos(x1)^2", 1).unwrap();
        assert_eq!(zero_test(&e, 50, 7), ZeroVerdict::Nonzero { exact: false });
    }

    #[test]
    fn inconclusive_when_every_sample_fails() {
        let e = parse("exp(exp(exp(exp(10 + x1^2)))) - exp(x1)", 1).unwrap();
        assert_eq!(zero_test(&e, 5, 3), ZeroVerdict::Inconclusive);
    }

    #[test]
    fn degree_of_expansion() {
        let (p, atoms) = expand(&parse("(x1 + 2*x2)^5", 2).unwrap()).unwrap();
        assert!(!atoms);
        assert_eq!(p.degree(), 5);
        assert_eq!(p.len(), 6);
    }
}
