//! Oscillatory integrals `∫_C exp(iλ φ(x)) dx`.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::geometry::ConstraintSet;
use super::measure::Constraints;
use super::NumericsError;
use crate::interval::{eval_interval, Interval};
use crate::operators::FunctionTuple;
use crate::symbolic::{gradient, CompiledExpr, Expr};

const NODES: usize = 10;
/// Phase change (radians) allowed across one Gauss panel.
const PANEL_PHASE: f64 = 3.0;
const MAX_CELLS: usize = 1 << 20;
const MAX_EVALUATIONS: f64 = 4e9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OscillatoryEstimate {
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
    pub error: f64,
    pub cells: usize,
    pub evaluations: u64,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

type Cell = Vec<Interval>;

enum Class {
    Inside,
    Outside,
    Straddle,
}

struct Phase {
    lambda: f64,
    ce: CompiledExpr,
    grad: Vec<Expr>,
}

impl Phase {
    fn panels(&self, cell: &Cell) -> Vec<usize> {
        cell.iter()
            .zip(&self.grad)
            .map(|(iv, g)| {
                let slope = eval_interval(g, cell).mag();
                let turns = (self.lambda.abs() * iv.width() * slope / PANEL_PHASE).ceil();
                if turns.is_finite() {
                    (turns as usize).max(1)
                } else {
                    usize::MAX
                }
            })
            .collect()
    }

    fn at(&self, x: &[f64], stack: &mut Vec<f64>) -> Result<Complex64, NumericsError> {
        let v = self.ce.eval_with(x, stack);
        if !v.is_finite() {
            return Err(NumericsError::EvaluationFailure { point: x.to_vec() });
        }
        Ok(Complex64::from_polar(1.0, self.lambda * v))
    }

    fn quadrature(&self, cell: &Cell, panels: &[usize], rule: &[(f64, f64)]) -> Result<Complex64, NumericsError> {
        let d = cell.len();
        let per_axis: Vec<usize> = panels.iter().map(|p| p * rule.len()).collect();
        let rest: usize = per_axis[1..].iter().product();
        let point = |i: usize, k: usize| {
            let (p, q) = (k / rule.len(), k % rule.len());
            let h = cell[i].width() / panels[i] as f64;
            let a = cell[i].lo + p as f64 * h;
            let (t, w) = rule[q];
            (a + 0.5 * h * (t + 1.0), 0.5 * h * w)
        };
        let rows: Vec<Complex64> = (0..per_axis[0])
            .into_par_iter()
            .map(|k0| {
                let mut stack = Vec::new();
                let mut x = vec![0.0; d];
                let (x0, w0) = point(0, k0);
                x[0] = x0;
                let mut sum = Complex64::new(0.0, 0.0);
                for r in 0..rest {
                    let mut w = w0;
                    let mut rr = r;
                    for i in 1..d {
                        let (xi, wi) = point(i, rr % per_axis[i]);
                        rr /= per_axis[i];
                        x[i] = xi;
                        w *= wi;
                    }
                    sum += self.at(&x, &mut stack)? * w;
                }
                Ok(sum)
            })
            .collect::<Result<_, NumericsError>>()?;
        Ok(rows.iter().sum())
    }
}

fn volume(cell: &Cell) -> f64 {
    cell.iter().map(|iv| iv.width()).product()
}

fn midpoint(cell: &Cell) -> Vec<f64> {
    cell.iter().map(|iv| iv.mid()).collect()
}

fn bisect(cell: &Cell) -> Vec<Cell> {
    let mut out = vec![cell.clone()];
    for i in 0..cell.len() {
        let m = cell[i].mid();
        out = out
            .into_iter()
            .flat_map(|c| {
                let mut a = c.clone();
                let mut b = c;
                a[i] = Interval::new(a[i].lo, m);
                b[i] = Interval::new(m, b[i].hi);
                [a, b]
            })
            .collect();
    }
    out
}

/// `∫_C exp(iλ π_j(x)) dx` with estimated absolute error at most `2 tol`.
///
/// Cells are classified against the constraints by interval arithmetic.
/// Boundary cells are bisected until their total volume is at most `tol`
/// and then contribute a one-point midpoint estimate. Interior cells use
/// tensor Gauss–Legendre panels sized so the phase turns by at most a few
/// radians per panel.
pub fn oscillatory_integral(
    pi: &FunctionTuple,
    phase: usize,
    c: &ConstraintSet,
    lambda: f64,
    tol: f64,
) -> Result<OscillatoryEstimate, NumericsError> {
    if tol.is_nan() || tol <= 0.0 || !lambda.is_finite() {
        return Err(NumericsError::InvalidParameter(format!("tol {tol}, lambda {lambda}")));
    }
    if phase == 0 || phase > pi.m() {
        return Err(NumericsError::InvalidParameter(format!("no function {phase} to use as phase")));
    }
    let cons = Constraints::new(pi, c)?;
    let d = pi.d;
    let phi = pi.exprs[phase - 1].simplify();
    let ph = Phase {
        lambda,
        ce: CompiledExpr::new(&phi),
        grad: gradient(&phi, d).iter().map(Expr::simplify).collect(),
    };

    let mut inside: Vec<Cell> = Vec::new();
    let mut pending = vec![c.domain.intervals()];
    let straddle = loop {
        let classes: Vec<Class> = pending
            .par_iter()
            .map(|cell| match cons.classify(cell) {
                Some(true) => Class::Inside,
                Some(false) => Class::Outside,
                None => Class::Straddle,
            })
            .collect();
        let mut next = Vec::new();
        for (cell, class) in pending.into_iter().zip(classes) {
            match class {
                Class::Inside => inside.push(cell),
                Class::Outside => {}
                Class::Straddle => next.push(cell),
            }
        }
        let vol: f64 = next.iter().map(volume).sum();
        if vol <= tol || next.is_empty() {
            break next;
        }
        if next.len() << d > MAX_CELLS {
            let best = crude(&ph, &cons, &inside, &next)?;
            return Err(NumericsError::Budget {
                best_re: best.re,
                best_im: best.im,
                error: vol,
            });
        }
        pending = next.iter().flat_map(bisect).collect();
    };

    let panels: Vec<Vec<usize>> = inside.iter().map(|cell| ph.panels(cell)).collect();
    let evals: f64 = panels
        .iter()
        .map(|p| p.iter().map(|&k| k as f64 * NODES as f64).product::<f64>())
        .sum();
    if evals > MAX_EVALUATIONS {
        let best = crude(&ph, &cons, &inside, &straddle)?;
        let error = inside.iter().chain(&straddle).map(volume).sum::<f64>() * 2.0;
        return Err(NumericsError::Budget {
            best_re: best.re,
            best_im: best.im,
            error,
        });
    }

    let gl = GaussLegendre::new(NonZeroUsize::new(NODES).expect("nonzero"));
    let rule = gl.as_node_weight_pairs();
    let mut value = Complex64::new(0.0, 0.0);
    for (cell, p) in inside.iter().zip(&panels) {
        value += ph.quadrature(cell, p, rule)?;
    }
    let mut stack = Vec::new();
    let mut error = 0.0;
    for cell in &straddle {
        let m = midpoint(cell);
        if cons.contains(&m, &mut stack)? {
            value += ph.at(&m, &mut stack)? * volume(cell);
        }
        error += volume(cell);
    }
    let total_volume: f64 = inside.iter().map(volume).sum();
    Ok(OscillatoryEstimate {
        value,
        error: error + 1e-13 * total_volume.max(1.0) * (1.0 + evals.sqrt() * f64::EPSILON),
        cells: inside.len() + straddle.len(),
        evaluations: evals as u64,
    })
}

fn crude(ph: &Phase, cons: &Constraints, inside: &[Cell], straddle: &[Cell]) -> Result<Complex64, NumericsError> {
    let mut stack = Vec::new();
    let mut v = Complex64::new(0.0, 0.0);
    for cell in inside {
        v += ph.at(&midpoint(cell), &mut stack)? * volume(cell);
    }
    for cell in straddle {
        let m = midpoint(cell);
        if cons.contains(&m, &mut stack)? {
            v += ph.at(&m, &mut stack)? * volume(cell);
        }
    }
    Ok(v)
}
