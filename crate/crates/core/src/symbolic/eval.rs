//! Floating-point evaluation.

use num_traits::ToPrimitive;

use super::expr::Expr;
use super::SymbolicError;

/// A point of `R^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Point(v)
    }
}

fn raw_eval(e: &Expr, x: &[f64]) -> f64 {
    match e {
        Expr::Const(c) => c.to_f64().unwrap_or(f64::NAN),
        Expr::Var(i) => x[*i - 1],
        Expr::Pow(b, n) => powi(raw_eval(b, x), *n),
        Expr::Mul(fs) => fs.iter().map(|f| raw_eval(f, x)).product(),
        Expr::Add(ts) => ts.iter().map(|t| raw_eval(t, x)).sum(),
        Expr::Neg(b) => -raw_eval(b, x),
        Expr::Sin(u) => raw_eval(u, x).sin(),
        Expr::Cos(u) => raw_eval(u, x).cos(),
        Expr::Exp(u) => raw_eval(u, x).exp(),
    }
}

fn powi(b: f64, n: i64) -> f64 {
    match i32::try_from(n) {
        Ok(k) => b.powi(k),
        Err(_) => b.powf(n as f64),
    }
}

/// Evaluate `e` at `p`. Non-finite results are reported as errors.
pub fn eval(e: &Expr, p: &Point) -> Result<f64, SymbolicError> {
    let need = e.max_var();
    if need > p.dim() {
        return Err(SymbolicError::DimensionMismatch {
            expected: need,
            got: p.dim(),
        });
    }
    let v = raw_eval(e, &p.0);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SymbolicError::Evaluation {
            point: p.0.clone(),
            value: v,
        })
    }
}

/// Cancellation-free magnitude: every sum is replaced by the sum of the
/// magnitudes of its terms. Used as the reference scale of the sampled
/// zero test.
pub(crate) fn magnitude_scale(e: &Expr, x: &[f64]) -> f64 {
    match e {
        Expr::Add(ts) => ts.iter().map(|t| magnitude_scale(t, x)).sum(),
        Expr::Mul(fs) => fs.iter().map(|f| magnitude_scale(f, x)).product(),
        Expr::Pow(b, n) => powi(magnitude_scale(b, x), *n),
        Expr::Neg(b) => magnitude_scale(b, x),
        other => raw_eval(other, x).abs(),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Op {
    Const(f64),
    Var(usize),
    Add(usize),
    Mul(usize),
    Pow(i32),
    Neg,
    Sin,
    Cos,
    Exp,
}

/// Postfix program for fast repeated evaluation of one expression.
#[derive(Clone, Debug, PartialEq)]
pub struct CompiledExpr {
    ops: Vec<Op>,
    depth: usize,
}

impl CompiledExpr {
    pub fn new(e: &Expr) -> Self {
        let mut ops = Vec::new();
        emit(e, &mut ops);
        let mut depth = 0usize;
        let mut max_depth = 0usize;
        for op in &ops {
            match op {
                Op::Const(_) | Op::Var(_) => depth += 1,
                Op::Add(n) | Op::Mul(n) => depth = depth + 1 - n,
                _ => {}
            }
            max_depth = max_depth.max(depth);
        }
        CompiledExpr {
            ops,
            depth: max_depth,
        }
    }

    /// Evaluate with a caller-provided scratch stack (avoids allocation in loops).
    pub fn eval_with(&self, x: &[f64], stack: &mut Vec<f64>) -> f64 {
        stack.clear();
        for op in &self.ops {
            match *op {
                Op::Const(c) => stack.push(c),
                Op::Var(i) => stack.push(x[i]),
                Op::Add(n) => {
                    let at = stack.len() - n;
                    let s: f64 = stack[at..].iter().sum();
                    stack.truncate(at);
                    stack.push(s);
                }
                Op::Mul(n) => {
                    let at = stack.len() - n;
                    let s: f64 = stack[at..].iter().product();
                    stack.truncate(at);
                    stack.push(s);
                }
                Op::Pow(k) => {
                    let v = stack.last_mut().expect("operand");
                    *v = v.powi(k);
                }
                Op::Neg => {
                    let v = stack.last_mut().expect("operand");
                    *v = -*v;
                }
                Op::Sin => {
                    let v = stack.last_mut().expect("operand");
                    *v = v.sin();
                }
                Op::Cos => {
                    let v = stack.last_mut().expect("operand");
                    *v = v.cos();
                }
                Op::Exp => {
                    let v = stack.last_mut().expect("operand");
                    *v = v.exp();
                }
            }
        }
        stack.pop().unwrap_or(f64::NAN)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut stack = Vec::with_capacity(self.depth);
        self.eval_with(x, &mut stack)
    }
}

fn emit(e: &Expr, ops: &mut Vec<Op>) {
    match e {
        Expr::Const(c) => ops.push(Op::Const(c.to_f64().unwrap_or(f64::NAN))),
        Expr::Var(i) => ops.push(Op::Var(*i - 1)),
        Expr::Pow(b, n) => {
            emit(b, ops);
            ops.push(Op::Pow(i32::try_from(*n).unwrap_or(if *n > 0 { i32::MAX } else { i32::MIN })));
        }
        Expr::Mul(xs) | Expr::Add(xs) => {
            for x in xs {
                emit(x, ops);
            }
            ops.push(if matches!(e, Expr::Mul(_)) {
                Op::Mul(xs.len())
            } else {
                Op::Add(xs.len())
            });
        }
        Expr::Neg(b) => {
            emit(b, ops);
            ops.push(Op::Neg);
        }
        Expr::Sin(b) => {
            emit(b, ops);
            ops.push(Op::Sin);
        }
        Expr::Cos(b) => {
            emit(b, ops);
            ops.push(Op::Cos);
        }
        Expr::Exp(b) => {
            emit(b, ops);
            ops.push(Op::Exp);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse;
    use super::*;

    #[test]
    fn basic_values() {
        let e = parse("x1^2 + x2^2", 2).unwrap();
        assert_eq!(eval(&e, &Point::new(vec![3.0, 4.0])).unwrap(), 25.0);
        let e = parse("exp(x1)", 2).unwrap();
        assert_eq!(eval(&e, &Point::new(vec![0.0, 0.0])).unwrap(), 1.0);
        let e = parse("sin(x2)", 2).unwrap();
        let v = eval(&e, &Point::new(vec![0.0, std::f64::consts::FRAC_PI_2])).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn overflow_is_an_error() {
        let e = parse("exp(exp(x1))", 1).unwrap();
        assert!(matches!(
            eval(&e, &Point::new(vec![10.0])),
            Err(SymbolicError::Evaluation { .. })
        ));
        let e = parse("x1^-1", 1).unwrap();
        assert!(eval(&e, &Point::new(vec![0.0])).is_err());
    }

    #[test]
    fn short_point_is_rejected() {
        let e = parse("x2", 2).unwrap();
        assert!(matches!(
            eval(&e, &Point::new(vec![1.0])),
            Err(SymbolicError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn compiled_matches_tree_walk() {
        let e = parse("-(1/2)*exp(x1)*sin(3*x2)^2 + (x1 - x2)^-3 + cos(x1*x2)", 2).unwrap();
        let c = CompiledExpr::new(&e);
        for &(a, b) in &[(0.3, -0.7), (1.5, 0.25), (-2.0, 1.0)] {
            let p = Point::new(vec![a, b]);
            let want = eval(&e, &p).unwrap();
            assert!((c.eval(&[a, b]) - want).abs() <= 1e-14 * want.abs().max(1.0));
        }
    }
}
