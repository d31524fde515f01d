use super::expr::{make_add, make_cos, make_mul, make_neg, make_pow, make_sin, Expr};

/// Exact partial derivative with respect to `x_i` (1-based), in canonical form.
pub fn diff(e: &Expr, i: usize) -> Expr {
    diff_canonical(&e.simplify(), i)
}

/// Same as [`diff`] for an input already in canonical form.
pub(crate) fn diff_canonical(e: &Expr, i: usize) -> Expr {
    match e {
        Expr::Const(_) => Expr::zero(),
        Expr::Var(j) => {
            if *j == i {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Expr::Add(ts) => make_add(ts.iter().map(|t| diff_canonical(t, i)).collect()),
        Expr::Mul(fs) => {
            let mut terms = Vec::with_capacity(fs.len());
            for k in 0..fs.len() {
                let dk = diff_canonical(&fs[k], i);
                if dk.is_zero() {
                    continue;
                }
                let mut prod: Vec<Expr> = Vec::with_capacity(fs.len());
                for (j, f) in fs.iter().enumerate() {
                    prod.push(if j == k { dk.clone() } else { f.clone() });
                }
                terms.push(make_mul(prod));
            }
            make_add(terms)
        }
        Expr::Pow(b, n) => {
            let db = diff_canonical(b, i);
            if db.is_zero() {
                return Expr::zero();
            }
            make_mul(vec![Expr::int(*n), make_pow((**b).clone(), n - 1), db])
        }
        Expr::Neg(b) => make_neg(diff_canonical(b, i)),
        Expr::Sin(u) => chain(make_cos((**u).clone()), u, i),
        Expr::Cos(u) => chain(make_neg(make_sin((**u).clone())), u, i),
        Expr::Exp(u) => chain(e.clone(), u, i),
    }
}

fn chain(outer: Expr, u: &Expr, i: usize) -> Expr {
    let du = diff_canonical(u, i);
    if du.is_zero() {
        Expr::zero()
    } else {
        make_mul(vec![outer, du])
    }
}

/// Gradient `(d e/d x_1, ..., d e/d x_d)`.
pub fn gradient(e: &Expr, dim: usize) -> Vec<Expr> {
    let e = e.simplify();
    (1..=dim).map(|i| diff_canonical(&e, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse;
    use super::*;

    #[test]
    fn power_rule() {
        let e = parse("x1^2", 1).unwrap();
        assert_eq!(diff(&e, 1), parse("2*x1", 1).unwrap());
    }

    #[test]
    fn product_and_chain_rule() {
        let e = parse("exp(x1)*sin(x2)", 2).unwrap();
        assert_eq!(diff(&e, 2), parse("exp(x1)*cos(x2)", 2).unwrap());
        let e = parse("cos(x1^2)", 1).unwrap();
        assert_eq!(diff(&e, 1), parse("-2*x1*sin(x1^2)", 1).unwrap());
    }

    #[test]
    fn negative_powers() {
        let e = parse("x1^-1", 1).unwrap();
        assert_eq!(diff(&e, 1), parse("-x1^-2", 1).unwrap());
        let e = parse("(x1 + x2)^-2", 2).unwrap();
        assert_eq!(diff(&e, 2), parse("-2*(x1 + x2)^-3", 2).unwrap());
    }

    #[test]
    fn constant_direction() {
        let e = parse("sin(x1)", 2).unwrap();
        assert!(diff(&e, 2).is_zero());
    }
}
