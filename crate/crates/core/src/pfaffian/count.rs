//! Counting nondegenerate real solutions of square systems on a box.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use super::PfaffianError;
use crate::numerics::AxisBox;
use crate::symbolic::{gradient, CompiledExpr, Expr};

/// A root counts only when `|det J|` at the polished point exceeds this.
pub const DEFAULT_NONDEGENERACY: f64 = 1e-8;

const NEWTON_STEPS: usize = 60;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionCount {
    pub count: usize,
    /// The count did not change when the grid resolution was doubled.
    pub certified: bool,
    pub roots: Vec<Vec<f64>>,
    pub resolution: usize,
}

struct System {
    f: Vec<CompiledExpr>,
    jac: Vec<Vec<CompiledExpr>>,
    targets: Vec<f64>,
}

impl System {
    fn residual(&self, x: &[f64]) -> Vec<f64> {
        self.f.iter().zip(&self.targets).map(|(f, t)| f.eval(x) - t).collect()
    }

    fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let d = x.len();
        DMatrix::from_fn(d, d, |k, i| self.jac[k][i].eval(x))
    }
}

/// Default grid resolution (cells per axis) for dimension `d`.
pub fn default_resolution(d: usize) -> usize {
    match d {
        0..=2 => 64,
        3 => 32,
        _ => 16,
    }
}

/// Count at the default resolution.
pub fn count_nondegenerate(system: &[Expr], targets: &[f64], bx: &AxisBox) -> Result<SolutionCount, PfaffianError> {
    count_nondegenerate_at(system, targets, bx, default_resolution(bx.dim()))
}

/// Roots of `system = targets` in `bx`: cells whose corner values change sign
/// in every component seed a Newton iteration from the cell centre; converged
/// points inside the box with `|det J| > 1e-8` are counted once each. The
/// scan is repeated at twice the resolution to set `certified`.
pub fn count_nondegenerate_at(
    system: &[Expr],
    targets: &[f64],
    bx: &AxisBox,
    resolution: usize,
) -> Result<SolutionCount, PfaffianError> {
    let d = bx.dim();
    if system.len() != d || targets.len() != d {
        return Err(PfaffianError::Precondition(format!(
            "need {d} equations and targets, got {} and {}",
            system.len(),
            targets.len()
        )));
    }
    if let Some(e) = system.iter().find(|e| e.max_var() > d) {
        return Err(PfaffianError::Precondition(format!("{e} uses variables beyond x{d}")));
    }
    if resolution < 1 {
        return Err(PfaffianError::Precondition("resolution must be positive".into()));
    }
    let sys = System {
        f: system.iter().map(CompiledExpr::new).collect(),
        jac: system
            .iter()
            .map(|e| gradient(e, d).iter().map(CompiledExpr::new).collect())
            .collect(),
        targets: targets.to_vec(),
    };
    let roots = scan(&sys, bx, resolution);
    let finer = scan(&sys, bx, resolution * 2);
    Ok(SolutionCount {
        count: roots.len(),
        certified: finer.len() == roots.len(),
        roots,
        resolution,
    })
}

fn scan(sys: &System, bx: &AxisBox, n: usize) -> Vec<Vec<f64>> {
    let d = bx.dim();
    let h: Vec<f64> = (0..d).map(|i| bx.width(i) / n as f64).collect();
    let nv = n + 1;
    let vertex_count = nv.pow(d as u32);
    let vertex = |mut idx: usize| -> Vec<f64> {
        let mut x = vec![0.0; d];
        for i in 0..d {
            x[i] = bx.lo()[i] + (idx % nv) as f64 * h[i];
            idx /= nv;
        }
        x
    };
    // sign bits per vertex: bit 2k = value_k <= 0, bit 2k+1 = value_k >= 0
    let signs: Vec<u64> = (0..vertex_count)
        .into_par_iter()
        .with_min_len(1024)
        .map(|v| {
            let r = sys.residual(&vertex(v));
            let mut bits = 0u64;
            for (k, val) in r.iter().enumerate() {
                if !val.is_finite() || *val <= 0.0 {
                    bits |= 1 << (2 * k);
                }
                if !val.is_finite() || *val >= 0.0 {
                    bits |= 1 << (2 * k + 1);
                }
            }
            bits
        })
        .collect();
    let cell_count = n.pow(d as u32);
    let all = (1u64 << (2 * d)) - 1;
    let corner_offsets: Vec<usize> = (0..(1usize << d))
        .map(|mask| {
            (0..d)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| nv.pow(i as u32))
                .sum()
        })
        .collect();
    let candidates: Vec<Vec<f64>> = (0..cell_count)
        .into_par_iter()
        .with_min_len(256)
        .filter_map(|c| {
            let mut base = 0;
            let mut rest = c;
            let mut centre = vec![0.0; d];
            for i in 0..d {
                let k = rest % n;
                rest /= n;
                base += k * nv.pow(i as u32);
                centre[i] = bx.lo()[i] + (k as f64 + 0.5) * h[i];
            }
            let bits = corner_offsets.iter().fold(0u64, |acc, off| acc | signs[base + off]);
            (bits == all).then_some(centre)
        })
        .filter_map(|x0| newton(sys, x0, bx))
        .collect();
    let tol = 1e-7 * bx.diameter();
    let mut roots: Vec<Vec<f64>> = Vec::new();
    for x in candidates {
        if !roots.iter().any(|r| dist(r, &x) <= tol) {
            roots.push(x);
        }
    }
    roots
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn newton(sys: &System, mut x: Vec<f64>, bx: &AxisBox) -> Option<Vec<f64>> {
    let d = x.len();
    let slack = 1e-9 * bx.diameter();
    for _ in 0..NEWTON_STEPS {
        let r = DVector::from_vec(sys.residual(&x));
        let j = sys.jacobian(&x);
        let step = j.lu().solve(&r)?;
        let mut moved = 0.0f64;
        for i in 0..d {
            x[i] -= step[i];
            moved = moved.max(step[i].abs());
        }
        if !x.iter().all(|v| v.is_finite()) || !bx.contains(&x, bx.diameter()) {
            return None;
        }
        if moved <= 1e-14 * (1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs()))) {
            break;
        }
    }
    let r = sys.residual(&x);
    let scale: f64 = 1.0 + sys.targets.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    if r.iter().any(|v| v.is_nan() || v.abs() > 1e-9 * scale) || !bx.contains(&x, slack) {
        return None;
    }
    let det = sys.jacobian(&x).determinant();
    (det.abs() > DEFAULT_NONDEGENERACY).then_some(x)
}
