use std::collections::HashMap;

use super::diff::gradient;
use super::expr::{make_add, make_mul, make_neg, Expr};
use super::SymbolicError;

/// Symbolic determinant of a square matrix by Laplace expansion along rows,
/// sharing minors across expansions (`O(2^n n)` products).
pub fn determinant(m: &[Vec<Expr>]) -> Expr {
    let n = m.len();
    if n == 0 {
        return Expr::one();
    }
    assert!(n < 31, "determinant size {n} unsupported");
    // minors[mask] = det of rows k..n restricted to the columns in `mask`.
    let mut minors: HashMap<u32, Expr> = HashMap::from([(0u32, Expr::one())]);
    for k in (0..n).rev() {
        let size = (n - k) as u32;
        let mut next = HashMap::new();
        for mask in 0u32..(1u32 << n) {
            if mask.count_ones() != size {
                continue;
            }
            let mut terms = Vec::new();
            let mut position = 0usize;
            for j in 0..n {
                if mask & (1 << j) == 0 {
                    continue;
                }
                let entry = &m[k][j];
                let sub = &minors[&(mask & !(1 << j))];
                if !entry.is_zero() && !sub.is_zero() {
                    let t = make_mul(vec![entry.clone(), sub.clone()]);
                    terms.push(if position.is_multiple_of(2) { t } else { make_neg(t) });
                }
                position += 1;
            }
            next.insert(mask, make_add(terms));
        }
        minors = next;
    }
    minors.remove(&((1u32 << n) - 1)).expect("full minor")
}

/// Determinant of the Jacobian `(d es_k / d x_i)`, rows in input order.
pub fn jacobian_det(es: &[Expr], dim: usize) -> Result<Expr, SymbolicError> {
    if es.len() != dim {
        return Err(SymbolicError::DimensionMismatch {
            expected: dim,
            got: es.len(),
        });
    }
    for e in es {
        if e.max_var() > dim {
            return Err(SymbolicError::VariableOutOfRange {
                index: e.max_var(),
                dim,
            });
        }
    }
    let rows: Vec<Vec<Expr>> = es.iter().map(|e| gradient(e, dim)).collect();
    Ok(determinant(&rows))
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse;
    use super::*;

    fn p(s: &str) -> Expr {
        parse(s, 2).unwrap()
    }

    #[test]
    fn identity_and_swap() {
        assert_eq!(jacobian_det(&[p("x1"), p("x2")], 2).unwrap(), Expr::int(1));
        assert_eq!(jacobian_det(&[p("x2"), p("x1")], 2).unwrap(), Expr::int(-1));
    }

    #[test]
    fn diagonal_scaling() {
        assert_eq!(jacobian_det(&[p("2*x1"), p("2*x2")], 2).unwrap(), Expr::int(4));
    }

    #[test]
    fn wrong_arity() {
        assert!(jacobian_det(&[p("x1")], 2).is_err());
    }

    #[test]
    fn three_by_three() {
        let m: Vec<Vec<Expr>> = [[2, 0, 1], [1, 3, 2], [1, 1, 1]]
            .iter()
            .map(|r| r.iter().map(|&v| Expr::int(v)).collect())
            .collect();
        // 2*(3-2) - 0 + 1*(1-3) = 0
        assert_eq!(determinant(&m), Expr::int(0));
        let m: Vec<Vec<Expr>> = [[1, 2, 3], [0, 1, 4], [5, 6, 0]]
            .iter()
            .map(|r| r.iter().map(|&v| Expr::int(v)).collect())
            .collect();
        assert_eq!(determinant(&m), Expr::int(1));
    }
}
