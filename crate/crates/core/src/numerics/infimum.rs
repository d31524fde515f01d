//! Infimum of `|g|` over a box.

use rayon::prelude::*;
use serde::Serialize;

use super::geometry::AxisBox;
use super::NumericsError;
use crate::interval::{eval_interval, Interval};
use crate::symbolic::{gradient, CompiledExpr, Expr};

/// Cells per axis in a certification block.
const BLOCK: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InfEstimate {
    /// Minimum of `|g|` over the vertex grid.
    pub naive: f64,
    pub argmin: Vec<f64>,
    /// Rigorous lower bound, `None` when the gradient enclosure is unbounded.
    pub certified: Option<f64>,
    pub resolution: usize,
}

impl InfEstimate {
    /// Certified bound when positive, the grid minimum otherwise.
    pub fn best(&self) -> f64 {
        match self.certified {
            Some(c) if c > 0.0 => c,
            _ => self.naive,
        }
    }
}

pub fn default_inf_resolution(d: usize) -> usize {
    match d {
        1 => 4096,
        2 => 512,
        3 => 64,
        _ => 12,
    }
}

struct BlockResult {
    min: f64,
    argmin: Vec<usize>,
    lower: Option<f64>,
}

/// `inf_{x ∈ B} |g(x)|` on a grid with `resolution` cells per axis.
///
/// The grid is cut into blocks of a few cells per axis. On each block,
/// `|g| ≥ min_vertices |g| - L r`, where `L` bounds `|∇g|` on the block by
/// interval arithmetic and `r` is half a cell diagonal.
pub fn inf_abs(g: &Expr, bx: &AxisBox, resolution: usize) -> Result<InfEstimate, NumericsError> {
    if resolution == 0 {
        return Err(NumericsError::InvalidParameter("resolution must be positive".into()));
    }
    let d = bx.dim();
    if g.max_var() > d {
        return Err(NumericsError::DimensionMismatch {
            expected: g.max_var(),
            got: d,
        });
    }
    let n = resolution;
    let g = g.simplify();
    let ce = CompiledExpr::new(&g);
    let grad: Vec<Expr> = gradient(&g, d).iter().map(Expr::simplify).collect();
    let h: Vec<f64> = (0..d).map(|i| bx.width(i) / n as f64).collect();
    let radius = 0.5 * h.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = n.div_ceil(BLOCK);
    let total = nb.pow(d as u32);
    let coord = |i: usize, k: usize| {
        if k == n {
            bx.hi()[i]
        } else {
            bx.lo()[i] + k as f64 * h[i]
        }
    };

    let blocks: Vec<BlockResult> = (0..total)
        .into_par_iter()
        .map(|b| {
            let mut r = b;
            let mut lo = vec![0; d];
            let mut hi = vec![0; d];
            for i in 0..d {
                let k = r % nb;
                r /= nb;
                lo[i] = k * BLOCK;
                hi[i] = ((k + 1) * BLOCK).min(n);
            }
            let side: Vec<usize> = (0..d).map(|i| hi[i] - lo[i] + 1).collect();
            let count: usize = side.iter().product();
            let mut stack = Vec::new();
            let mut x = vec![0.0; d];
            let mut idx = vec![0; d];
            let mut best = (f64::INFINITY, vec![0; d]);
            for v in 0..count {
                let mut r = v;
                for i in 0..d {
                    idx[i] = lo[i] + r % side[i];
                    r /= side[i];
                    x[i] = coord(i, idx[i]);
                }
                let val = ce.eval_with(&x, &mut stack);
                if !val.is_finite() {
                    return Err(NumericsError::EvaluationFailure { point: x.clone() });
                }
                if val.abs() < best.0 {
                    best = (val.abs(), idx.clone());
                }
            }
            let cell: Vec<Interval> = (0..d).map(|i| Interval::new(coord(i, lo[i]), coord(i, hi[i]))).collect();
            let lip2: f64 = grad
                .iter()
                .map(|gi| {
                    let m = eval_interval(gi, &cell).mag();
                    m * m
                })
                .sum();
            let lower = if lip2.is_finite() {
                Some(best.0 - lip2.sqrt() * radius)
            } else {
                None
            };
            Ok(BlockResult {
                min: best.0,
                argmin: best.1,
                lower,
            })
        })
        .collect::<Result<_, _>>()?;

    let mut naive = f64::INFINITY;
    let mut arg = vec![0; d];
    let mut certified = Some(f64::INFINITY);
    for b in &blocks {
        if b.min < naive || (b.min == naive && b.argmin < arg) {
            naive = b.min;
            arg = b.argmin.clone();
        }
        certified = match (certified, b.lower) {
            (Some(c), Some(l)) => Some(c.min(l)),
            _ => None,
        };
    }
    Ok(InfEstimate {
        naive,
        argmin: arg.iter().enumerate().map(|(i, &k)| coord(i, k)).collect(),
        certified: certified.map(|c| c.max(0.0)),
        resolution: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::parse;

    #[test]
    fn linear_function() {
        let g = parse("x1 + 2", 1).unwrap();
        let r = inf_abs(&g, &AxisBox::unit(1), 64).unwrap();
        assert_eq!(r.naive, 2.0);
        assert_eq!(r.argmin, vec![0.0]);
        let c = r.certified.unwrap();
        assert!(c <= 2.0 && c > 2.0 - 1.0 / 64.0);
    }

    #[test]
    fn zero_inside_is_never_certified_positive() {
        let g = parse("x1^2 + x2^2 - 1/3", 2).unwrap();
        let r = inf_abs(&g, &AxisBox::unit(2), 128).unwrap();
        assert!(r.naive < 0.01);
        assert_eq!(r.certified, Some(0.0));
    }

    #[test]
    fn exponential_hessian() {
        // -e^(2 x1) has |.| >= 1 on the unit square
        let g = parse("-exp(2*x1)*sin(100*x2)^2 - exp(2*x1)*cos(100*x2)^2", 2).unwrap();
        let r = inf_abs(&g, &AxisBox::unit(2), 512).unwrap();
        assert!((r.naive - 1.0).abs() < 1e-12);
        let c = r.certified.unwrap();
        assert!((0.99..=1.0).contains(&c), "{c}");
    }

    #[test]
    fn pole_is_an_error_or_uncertified() {
        let g = parse("x1^-1", 1).unwrap();
        assert!(inf_abs(&g, &AxisBox::cube(1, -1.0, 1.0), 8).is_err());
        let r = inf_abs(&g, &AxisBox::cube(1, -1.0, 1.0), 7).unwrap();
        assert_eq!(r.certified, None);
    }

    #[test]
    fn certified_below_naive() {
        let g = parse("sin(3*x1)*x2 + 2", 2).unwrap();
        let r = inf_abs(&g, &AxisBox::cube(2, -1.0, 1.0), 64).unwrap();
        let c = r.certified.unwrap();
        assert!(c <= r.naive && c > 0.0);
        // true minimum is 2 - sin(3)... attained on the boundary x2 = ±1
        assert!((r.naive - (2.0 - 1.0)).abs() < 1e-2);
    }
}
