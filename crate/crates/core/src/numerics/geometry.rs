//! Coordinate boxes and constraint sets.

use serde::{Deserialize, Serialize};

use super::NumericsError;
use crate::interval::Interval;

/// Product of closed intervals `[lo_i, hi_i]` with `lo_i < hi_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct AxisBox {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl AxisBox {
    pub fn new(bounds: &[(f64, f64)]) -> Result<Self, NumericsError> {
        if bounds.is_empty() {
            return Err(NumericsError::InvalidBox("zero-dimensional box".into()));
        }
        for &(a, b) in bounds {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(NumericsError::InvalidBox(format!("bad side [{a}, {b}]")));
            }
        }
        Ok(AxisBox {
            lo: bounds.iter().map(|b| b.0).collect(),
            hi: bounds.iter().map(|b| b.1).collect(),
        })
    }

    /// `[0,1]^d`.
    pub fn unit(d: usize) -> Self {
        AxisBox::cube(d, 0.0, 1.0)
    }

    /// `[a,b]^d`.
    pub fn cube(d: usize, a: f64, b: f64) -> Self {
        AxisBox::new(&vec![(a, b); d]).expect("valid cube")
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn width(&self, i: usize) -> f64 {
        self.hi[i] - self.lo[i]
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|i| self.width(i)).product()
    }

    pub fn diameter(&self) -> f64 {
        (0..self.dim()).map(|i| self.width(i).powi(2)).sum::<f64>().sqrt()
    }

    pub fn center(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| 0.5 * (self.lo[i] + self.hi[i])).collect()
    }

    pub fn contains(&self, x: &[f64], slack: f64) -> bool {
        x.iter()
            .enumerate()
            .all(|(i, &v)| v >= self.lo[i] - slack && v <= self.hi[i] + slack)
    }

    pub fn intervals(&self) -> Vec<Interval> {
        (0..self.dim())
            .map(|i| Interval::new(self.lo[i], self.hi[i]))
            .collect()
    }

    pub fn translated(&self, shift: &[f64]) -> Self {
        AxisBox {
            lo: self.lo.iter().zip(shift).map(|(a, s)| a + s).collect(),
            hi: self.hi.iter().zip(shift).map(|(a, s)| a + s).collect(),
        }
    }
}

impl TryFrom<Vec<[f64; 2]>> for AxisBox {
    type Error = NumericsError;
    fn try_from(v: Vec<[f64; 2]>) -> Result<Self, Self::Error> {
        let b: Vec<(f64, f64)> = v.into_iter().map(|[a, b]| (a, b)).collect();
        AxisBox::new(&b)
    }
}

impl From<AxisBox> for Vec<[f64; 2]> {
    fn from(b: AxisBox) -> Self {
        b.lo.iter().zip(&b.hi).map(|(&a, &c)| [a, c]).collect()
    }
}

/// `{x ∈ D : π_j(x) ∈ [lo_j, hi_j] for each constraint}`; indices are 1-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSet {
    pub domain: AxisBox,
    pub constraints: Vec<(usize, [f64; 2])>,
}

impl ConstraintSet {
    pub fn new(domain: AxisBox, constraints: Vec<(usize, [f64; 2])>) -> Result<Self, NumericsError> {
        for (j, [a, b]) in &constraints {
            if *j == 0 || a.is_nan() || b.is_nan() || a > b {
                return Err(NumericsError::InvalidConstraint {
                    index: *j,
                    lo: *a,
                    hi: *b,
                });
            }
        }
        Ok(ConstraintSet {
            domain,
            constraints,
        })
    }

    pub fn unconstrained(domain: AxisBox) -> Self {
        ConstraintSet {
            domain,
            constraints: Vec::new(),
        }
    }

    /// `|π_j| ≤ eps`.
    pub fn sublevel(domain: AxisBox, j: usize, eps: f64) -> Result<Self, NumericsError> {
        ConstraintSet::new(domain, vec![(j, [-eps, eps])])
    }

    pub fn max_index(&self) -> usize {
        self.constraints.iter().map(|c| c.0).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_basics() {
        let b = AxisBox::new(&[(0.0, 2.0), (-1.0, 1.0)]).unwrap();
        assert_eq!(b.volume(), 4.0);
        assert_eq!(b.center(), vec![1.0, 0.0]);
        assert!(AxisBox::new(&[(1.0, 1.0)]).is_err());
        assert!(AxisBox::new(&[(0.0, f64::INFINITY)]).is_err());
        let json = serde_json::to_string(&b).unwrap();
        assert_eq!(json, "[[0.0,2.0],[-1.0,1.0]]");
        let back: AxisBox = serde_json::from_str(&json).unwrap();
        assert_eq!(back, b);
        assert!(serde_json::from_str::<AxisBox>("[[1.0,0.0]]").is_err());
    }

    #[test]
    fn constraint_validation() {
        assert!(ConstraintSet::new(AxisBox::unit(1), vec![(1, [0.5, 0.1])]).is_err());
        assert!(ConstraintSet::new(AxisBox::unit(1), vec![(0, [0.0, 0.1])]).is_err());
        assert!(ConstraintSet::sublevel(AxisBox::unit(1), 1, 0.1).is_ok());
    }
}
