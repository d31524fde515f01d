//! Lebesgue measure of constraint sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::geometry::{AxisBox, ConstraintSet};
use super::NumericsError;
use crate::interval::{eval_interval, Interval};
use crate::operators::FunctionTuple;
use crate::symbolic::{CompiledExpr, Expr};

/// Tensor grids are used up to this dimension, Monte Carlo above it.
pub const MAX_GRID_DIM: usize = 3;

const MC_SHARD: u64 = 1 << 16;
/// Two-sided 99% normal quantile.
pub const Z99: f64 = 2.576;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureMethod {
    TensorGrid,
    MonteCarlo,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureEstimate {
    pub value: f64,
    pub half_width: f64,
    pub method: MeasureMethod,
    /// Cells (grid) or sample points (Monte Carlo).
    pub samples: u64,
    pub seed: u64,
}

/// Default resolution: cells per axis for grids, sample count for Monte Carlo.
pub fn default_measure_resolution(d: usize) -> usize {
    match d {
        1 => 1_000_000,
        2 => 8192,
        3 => 512,
        _ => 1_000_000,
    }
}

pub(crate) struct Constraints {
    items: Vec<(Expr, CompiledExpr, f64, f64)>,
}

impl Constraints {
    pub(crate) fn new(pi: &FunctionTuple, c: &ConstraintSet) -> Result<Self, NumericsError> {
        check_shapes(pi, c)?;
        Ok(Constraints {
            items: c
                .constraints
                .iter()
                .map(|&(j, [lo, hi])| {
                    let e = pi.exprs[j - 1].simplify();
                    let ce = CompiledExpr::new(&e);
                    (e, ce, lo, hi)
                })
                .collect(),
        })
    }

    /// `Some(true)` inside, `Some(false)` outside, `None` undecided.
    pub(crate) fn classify(&self, b: &[Interval]) -> Option<bool> {
        let mut all_in = true;
        for (e, _, lo, hi) in &self.items {
            let r = eval_interval(e, b);
            if r.hi < *lo || r.lo > *hi {
                return Some(false);
            }
            if !(r.lo >= *lo && r.hi <= *hi) {
                all_in = false;
            }
        }
        if all_in {
            Some(true)
        } else {
            None
        }
    }

    pub(crate) fn contains(&self, x: &[f64], stack: &mut Vec<f64>) -> Result<bool, NumericsError> {
        let mut inside = true;
        for (_, ce, lo, hi) in &self.items {
            let v = ce.eval_with(x, stack);
            if !v.is_finite() {
                return Err(NumericsError::EvaluationFailure { point: x.to_vec() });
            }
            if v < *lo || v > *hi {
                inside = false;
            }
        }
        Ok(inside)
    }
}

pub(crate) fn check_shapes(pi: &FunctionTuple, c: &ConstraintSet) -> Result<(), NumericsError> {
    if c.domain.dim() != pi.d {
        return Err(NumericsError::DimensionMismatch {
            expected: pi.d,
            got: c.domain.dim(),
        });
    }
    if c.max_index() > pi.m() {
        return Err(NumericsError::InvalidParameter(format!(
            "constraint on function {} but only {} functions given",
            c.max_index(),
            pi.m()
        )));
    }
    Ok(())
}

/// Measure of `{x ∈ D : π_j(x) ∈ I_j}`.
///
/// For `d ≤ 3` this counts cell midpoints of a grid with `resolution` cells
/// per axis. Blocks of cells that interval arithmetic places entirely inside
/// or outside the set are counted without evaluation, so the result equals
/// the plain midpoint count. `half_width` is half the volume of the cells
/// whose corners disagree with their midpoint. For `d ≥ 4` it draws
/// `resolution` uniform samples from ChaCha8 streams seeded by `seed` and
/// reports a 99% normal-approximation half width.
pub fn constrained_measure(
    pi: &FunctionTuple,
    c: &ConstraintSet,
    resolution: usize,
    seed: u64,
) -> Result<MeasureEstimate, NumericsError> {
    if pi.d <= MAX_GRID_DIM {
        grid_measure(pi, c, resolution)
    } else {
        monte_carlo_measure(pi, c, resolution as u64, seed)
    }
}

#[derive(Clone, Debug)]
struct Block {
    lo: Vec<usize>,
    hi: Vec<usize>,
}

impl Block {
    fn cells(&self) -> u64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| (b - a) as u64).product()
    }

    fn split(&self) -> Option<(Block, Block)> {
        let (axis, len) = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| b - a)
            .enumerate()
            .max_by_key(|&(i, len)| (len, std::cmp::Reverse(i)))?;
        if len < 2 {
            return None;
        }
        let mid = self.lo[axis] + len / 2;
        let mut a = self.clone();
        let mut b = self.clone();
        a.hi[axis] = mid;
        b.lo[axis] = mid;
        Some((a, b))
    }
}

struct Grid<'a> {
    bx: &'a AxisBox,
    h: Vec<f64>,
    cons: &'a Constraints,
}

const LEAF_CELLS: u64 = 512;

impl Grid<'_> {
    fn block_box(&self, b: &Block) -> Vec<Interval> {
        (0..self.bx.dim())
            .map(|i| {
                let a = self.bx.lo()[i];
                Interval::new(a + b.lo[i] as f64 * self.h[i], a + b.hi[i] as f64 * self.h[i])
            })
            .collect()
    }

    /// (cells inside, boundary cells)
    fn count(&self, b: &Block) -> Result<(u64, u64), NumericsError> {
        match self.cons.classify(&self.block_box(b)) {
            Some(true) => return Ok((b.cells(), 0)),
            Some(false) => return Ok((0, 0)),
            None => {}
        }
        if b.cells() > LEAF_CELLS {
            if let Some((l, r)) = b.split() {
                let (a, x) = self.count(&l)?;
                let (c, y) = self.count(&r)?;
                return Ok((a + c, x + y));
            }
        }
        self.brute(b)
    }

    fn brute(&self, b: &Block) -> Result<(u64, u64), NumericsError> {
        let d = self.bx.dim();
        let side: Vec<usize> = (0..d).map(|i| b.hi[i] - b.lo[i]).collect();
        let vside: Vec<usize> = side.iter().map(|s| s + 1).collect();
        let nv: usize = vside.iter().product();
        let mut stack = Vec::new();
        let mut x = vec![0.0; d];
        let mut vin = Vec::with_capacity(nv);
        for v in 0..nv {
            let mut r = v;
            for i in 0..d {
                let k = r % vside[i];
                r /= vside[i];
                x[i] = self.bx.lo()[i] + (b.lo[i] + k) as f64 * self.h[i];
            }
            vin.push(self.cons.contains(&x, &mut stack)?);
        }
        let nc: usize = side.iter().product();
        let (mut inside, mut boundary) = (0u64, 0u64);
        for c in 0..nc {
            let mut r = c;
            let mut base = 0;
            let mut stride = 1;
            for i in 0..d {
                let k = r % side[i];
                r /= side[i];
                x[i] = self.bx.lo()[i] + ((b.lo[i] + k) as f64 + 0.5) * self.h[i];
                base += k * stride;
                stride *= vside[i];
            }
            let mid = self.cons.contains(&x, &mut stack)?;
            if mid {
                inside += 1;
            }
            let differs = (0..(1usize << d)).any(|mask| {
                let mut off = 0;
                let mut stride = 1;
                for (i, vs) in vside.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        off += stride;
                    }
                    stride *= vs;
                }
                vin[base + off] != mid
            });
            if differs {
                boundary += 1;
            }
        }
        Ok((inside, boundary))
    }
}

fn grid_measure(pi: &FunctionTuple, c: &ConstraintSet, n: usize) -> Result<MeasureEstimate, NumericsError> {
    if n < 2 {
        return Err(NumericsError::InvalidParameter("grid resolution must be at least 2".into()));
    }
    let cons = Constraints::new(pi, c)?;
    let bx = &c.domain;
    let d = bx.dim();
    let grid = Grid {
        bx,
        h: (0..d).map(|i| bx.width(i) / n as f64).collect(),
        cons: &cons,
    };
    // fixed top-level partition so the work split never depends on thread count
    let mut blocks = vec![Block {
        lo: vec![0; d],
        hi: vec![n; d],
    }];
    for _ in 0..8 {
        blocks = blocks
            .into_iter()
            .flat_map(|b| match b.split() {
                Some((l, r)) => vec![l, r],
                None => vec![b],
            })
            .collect();
    }
    let parts: Vec<(u64, u64)> = blocks
        .par_iter()
        .map(|b| grid.count(b))
        .collect::<Result<_, _>>()?;
    let (inside, boundary) = parts.iter().fold((0u64, 0u64), |(a, b), &(x, y)| (a + x, b + y));
    let cell_volume = bx.volume() / (n as f64).powi(d as i32);
    Ok(MeasureEstimate {
        value: inside as f64 * cell_volume,
        half_width: 0.5 * boundary as f64 * cell_volume,
        method: MeasureMethod::TensorGrid,
        samples: (n as u64).pow(d as u32),
        seed: 0,
    })
}

/// Seeded Monte Carlo estimate with a 99% half width. Shard `k` draws from
/// ChaCha8 stream `k` of the root seed.
pub fn monte_carlo_measure(
    pi: &FunctionTuple,
    c: &ConstraintSet,
    samples: u64,
    seed: u64,
) -> Result<MeasureEstimate, NumericsError> {
    if samples < 1000 {
        return Err(NumericsError::InvalidParameter("Monte Carlo needs at least 1000 samples".into()));
    }
    let cons = Constraints::new(pi, c)?;
    let bx = &c.domain;
    let d = bx.dim();
    let shards = samples.div_ceil(MC_SHARD);
    let hits: Vec<u64> = (0..shards)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let count = MC_SHARD.min(samples - k * MC_SHARD);
            let mut x = vec![0.0; d];
            let mut stack = Vec::new();
            let mut h = 0u64;
            for _ in 0..count {
                for (i, xi) in x.iter_mut().enumerate() {
                    *xi = rng.gen_range(bx.lo()[i]..bx.hi()[i]);
                }
                if cons.contains(&x, &mut stack)? {
                    h += 1;
                }
            }
            Ok(h)
        })
        .collect::<Result<_, NumericsError>>()?;
    let total: u64 = hits.iter().sum();
    let p = total as f64 / samples as f64;
    let vol = bx.volume();
    Ok(MeasureEstimate {
        value: vol * p,
        half_width: Z99 * vol * (p * (1.0 - p) / samples as f64).sqrt(),
        method: MeasureMethod::MonteCarlo,
        samples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(f: &str, d: usize) -> FunctionTuple {
        FunctionTuple::euclidean_from_text(&[f], d).unwrap()
    }

    #[test]
    fn interval_length() {
        let pi = tuple("x1", 1);
        let c = ConstraintSet::sublevel(AxisBox::unit(1), 2, 0.1).unwrap();
        let m = constrained_measure(&pi, &c, 1000, 0).unwrap();
        assert!((m.value - 0.1).abs() <= 1e-3 + 1e-12, "{m:?}");
        assert!(m.half_width <= 1e-3);
    }

    #[test]
    fn hyperbolic_region() {
        let pi = tuple("x1*x2", 2);
        let eps: f64 = 0.05;
        let c = ConstraintSet::sublevel(AxisBox::unit(2), 3, eps).unwrap();
        let m = constrained_measure(&pi, &c, 2048, 0).unwrap();
        let exact = eps * (1.0 - eps.ln());
        assert!((m.value - exact).abs() / exact < 0.01, "{} vs {exact}", m.value);
        assert!((m.value - exact).abs() <= 3.0 * m.half_width);
    }

    #[test]
    fn disk_area() {
        let pi = tuple("x1^2 + x2^2", 2);
        let c = ConstraintSet::sublevel(AxisBox::cube(2, -1.0, 1.0), 3, 0.25).unwrap();
        let m = constrained_measure(&pi, &c, 1024, 0).unwrap();
        let exact = std::f64::consts::PI * 0.25;
        assert!((m.value - exact).abs() / exact < 0.01);
    }

    #[test]
    fn monte_carlo_ball() {
        // unit ball in R^4 has volume pi^2/2
        let pi = tuple("x1^2 + x2^2 + x3^2 + x4^2", 4);
        let c = ConstraintSet::new(AxisBox::cube(4, -1.0, 1.0), vec![(5, [0.0, 1.0])]).unwrap();
        let m = constrained_measure(&pi, &c, 200_000, 42).unwrap();
        assert_eq!(m.method, MeasureMethod::MonteCarlo);
        let exact = std::f64::consts::PI.powi(2) / 2.0;
        assert!((m.value - exact).abs() <= m.half_width, "{m:?}");
        assert_eq!(m, constrained_measure(&pi, &c, 200_000, 42).unwrap());
    }

    #[test]
    fn evaluation_failure() {
        let pi = tuple("x1^-1", 1);
        let c = ConstraintSet::sublevel(AxisBox::cube(1, -1.0, 1.0), 2, 1.0).unwrap();
        // midpoints avoid 0 but the vertex at 0 does not
        assert!(matches!(
            constrained_measure(&pi, &c, 10, 0),
            Err(NumericsError::EvaluationFailure { .. })
        ));
    }

    #[test]
    fn refinement_within_reported_error() {
        let pi = tuple("x1^2 + x2^2", 2);
        let c = ConstraintSet::sublevel(AxisBox::cube(2, -1.0, 1.0), 3, 0.3).unwrap();
        let a = constrained_measure(&pi, &c, 256, 0).unwrap();
        let b = constrained_measure(&pi, &c, 512, 0).unwrap();
        assert!((a.value - b.value).abs() < 3.0 * a.half_width);
    }

    #[test]
    fn monotone_in_constraint() {
        let pi = tuple("x1*x2 + x2^3", 2);
        let mut last = 0.0;
        for k in 1..=8 {
            let eps = 0.05 * k as f64;
            let c = ConstraintSet::sublevel(AxisBox::unit(2), 3, eps).unwrap();
            let m = constrained_measure(&pi, &c, 256, 0).unwrap().value;
            assert!(m >= last);
            last = m;
        }
    }
}
