//! Nonlinear Jacobian-determinant differential operators and d-trees, with
//! numerical checks of the sublevel-set, multilinear and oscillatory-integral
//! estimates they control.
//!
//! - [`symbolic`]: expressions, derivatives, Jacobian determinants, zero tests.
//! - [`trees`]: d-trees on m indices, their statistics, enumeration and DOT export.
//! - [`operators`]: admissible operator recipes and their application.
//! - [`pfaffian`]: Pfaffian formats, Khovanskii bounds, nondegenerate root counts.
//! - [`numerics`]: measures, infima, oscillatory integrals, decay fits, estimate reports.
//! - [`cli`]: the `sublevel` command-line front end.

pub mod cli;
pub mod interval;
pub mod numerics;
pub mod operators;
pub mod pfaffian;
pub mod symbolic;
pub mod trees;
