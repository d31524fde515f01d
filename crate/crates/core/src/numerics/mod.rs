//! Measures of constrained sets, infima, oscillatory integrals, decay fits and
//! estimate reports.

mod fit;
mod geometry;
mod infimum;
mod measure;
mod oscillatory;
mod verify;

use thiserror::Error;

use crate::operators::OperatorError;
use crate::trees::TreeError;

pub use fit::{fit_decay, DecayFit, RATIO_GROWTH_LIMIT};
pub use geometry::{AxisBox, ConstraintSet};
pub use infimum::{default_inf_resolution, inf_abs, InfEstimate};
pub use measure::{
    constrained_measure, default_measure_resolution, monte_carlo_measure, MeasureEstimate, MeasureMethod,
    MAX_GRID_DIM,
};
pub use oscillatory::{oscillatory_integral, OscillatoryEstimate};
pub use verify::{
    verify_estimate, EstimateKind, EstimateProblem, EstimateReport, Ladder, LadderRow, OperatorSpec, Resolutions,
    Verdict, VerifyOptions, VACUOUS_INF,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("invalid box: {0}")]
    InvalidBox(String),
    #[error("invalid constraint on function {index}: [{lo}, {hi}]")]
    InvalidConstraint { index: usize, lo: f64, hi: f64 },
    #[error("expected dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{0}")]
    InvalidParameter(String),
    #[error("evaluation failed at {point:?}")]
    EvaluationFailure { point: Vec<f64> },
    #[error("budget exhausted: best estimate {best_re} + {best_im}i, error {error}")]
    Budget { best_re: f64, best_im: f64, error: f64 },
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { got: usize, need: usize },
    #[error("sample {index} has a nonpositive parameter or value")]
    NonPositiveSample { index: usize },
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}
