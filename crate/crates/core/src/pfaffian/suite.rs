//! The polynomial test systems shipped with the crate.

use serde::Deserialize;

use super::{polynomial_degree, PfaffianError};
use crate::numerics::AxisBox;
use crate::symbolic::{parse, Expr};

const SUITE_JSON: &str = include_str!("../../data/polynomial_suite.json");

#[derive(Clone, Debug, Deserialize)]
struct RawSystem {
    name: String,
    equations: Vec<String>,
    #[serde(rename = "box")]
    domain: AxisBox,
    targets: Vec<Vec<f64>>,
}

#[derive(Clone, Debug)]
pub struct SuiteSystem {
    pub name: String,
    pub equations: Vec<Expr>,
    pub domain: AxisBox,
    pub targets: Vec<Vec<f64>>,
    /// Total degree of each equation.
    pub degrees: Vec<usize>,
}

/// Parse the shipped suite.
pub fn polynomial_suite() -> Result<Vec<SuiteSystem>, PfaffianError> {
    let raw: Vec<RawSystem> =
        serde_json::from_str(SUITE_JSON).map_err(|e| PfaffianError::Precondition(format!("suite data: {e}")))?;
    raw.into_iter()
        .map(|r| {
            let d = r.domain.dim();
            let equations: Vec<Expr> = r
                .equations
                .iter()
                .map(|t| parse(t, d))
                .collect::<Result<_, _>>()?;
            let degrees = equations
                .iter()
                .map(|e| {
                    polynomial_degree(e)
                        .ok_or_else(|| PfaffianError::Precondition(format!("{e} is not a polynomial")))
                })
                .collect::<Result<_, _>>()?;
            Ok(SuiteSystem {
                name: r.name,
                equations,
                domain: r.domain,
                targets: r.targets,
                degrees,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_loads() {
        let s = polynomial_suite().unwrap();
        assert_eq!(s.len(), 5);
        for sys in &s {
            assert_eq!(sys.equations.len(), sys.domain.dim());
            assert!(sys.targets.iter().all(|t| t.len() == sys.domain.dim()));
        }
    }
}
