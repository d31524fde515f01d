//! Experiment configuration files for `verify`.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::numerics::{
    default_inf_resolution, default_measure_resolution, AxisBox, ConstraintSet, EstimateKind, EstimateProblem, Ladder,
    OperatorSpec, VerifyOptions,
};
use crate::operators::{parse_recipe, FunctionTuple};
use crate::symbolic::parse;
use crate::trees::parse_tree;

pub const SCHEMA: &str = "sublevel-experiment/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorText {
    Tree(String),
    Recipe(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintText {
    pub function: usize,
    pub interval: [f64; 2],
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<PathBuf>,
}

fn yes() -> bool {
    true
}

/// One `verify` run. Missing fields take the defaults of the `verify` flags;
/// [`ExperimentConfig::resolve`] fills them in so the echoed config
/// reproduces the run exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<EstimateKind>,
    pub dimension: usize,
    /// With `euclidean` the tuple is `(x1, ..., xd, functions...)`,
    /// otherwise `functions` is the whole tuple.
    pub functions: Vec<String>,
    #[serde(default = "yes")]
    pub euclidean: bool,
    pub operator: OperatorText,
    /// Defaults to the unit cube.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub constraints: Vec<ConstraintText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ladder: Option<Ladder>,
    #[serde(default)]
    pub options: VerifyOptions,
    #[serde(default)]
    pub outputs: Outputs,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let c: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
        if c.schema != SCHEMA {
            return Err(CliError::Usage(format!(
                "config schema '{}' is not supported (expected '{SCHEMA}')",
                c.schema
            )));
        }
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes") + "\n"
    }

    /// Fill every default for `kind`.
    pub fn resolve(mut self, kind: EstimateKind) -> Result<Self, CliError> {
        match self.kind {
            Some(k) if k != kind => {
                return Err(CliError::Usage(format!(
                    "config is for {k:?} but the {kind:?} subcommand was used"
                )))
            }
            _ => self.kind = Some(kind),
        }
        let d = self.dimension;
        if d == 0 {
            return Err(CliError::Usage("dimension must be positive".into()));
        }
        self.domain.get_or_insert_with(|| vec![[0.0, 1.0]; d]);
        self.ladder.get_or_insert_with(|| Ladder::default_for(kind));
        if kind != EstimateKind::Oscillatory {
            self.options.measure_resolution.get_or_insert(default_measure_resolution(d));
        }
        self.options.inf_resolution.get_or_insert(default_inf_resolution(d));
        Ok(self)
    }

    pub fn problem(&self) -> Result<EstimateProblem, CliError> {
        let kind = self.kind.ok_or_else(|| CliError::Usage("config has no kind".into()))?;
        let d = self.dimension;
        let exprs = self
            .functions
            .iter()
            .map(|t| parse(t, d))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let pi = if self.euclidean {
            let mut all: Vec<_> = (1..=d).map(crate::symbolic::Expr::var).collect();
            all.extend(exprs);
            FunctionTuple::new(d, all)
        } else {
            FunctionTuple::new(d, exprs)
        }
        .map_err(|e| CliError::Usage(e.to_string()))?;
        let operator = match &self.operator {
            OperatorText::Tree(t) => OperatorSpec::Tree(parse_tree(t).map_err(|e| CliError::Usage(e.to_string()))?),
            OperatorText::Recipe(t) => {
                OperatorSpec::Recipe(parse_recipe(t).map_err(|e| CliError::Usage(e.to_string()))?)
            }
        };
        let bounds: Vec<(f64, f64)> = match &self.domain {
            Some(b) => b.iter().map(|&[a, b]| (a, b)).collect(),
            None => vec![(0.0, 1.0); d],
        };
        let domain = AxisBox::new(&bounds).map_err(|e| CliError::Usage(e.to_string()))?;
        let template = ConstraintSet::new(
            domain,
            self.constraints.iter().map(|c| (c.function, c.interval)).collect(),
        )
        .map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(EstimateProblem {
            kind,
            pi,
            operator,
            template,
            ladder: self.ladder.clone().unwrap_or_else(|| Ladder::default_for(kind)),
            options: self.options.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_resolves() {
        let text = r#"{"schema": "sublevel-experiment/1", "dimension": 2,
            "functions": ["x1*x2"], "operator": {"recipe": "det[1](det[2](id))"}}"#;
        let c = ExperimentConfig::from_json(text).unwrap().resolve(EstimateKind::Multilinear).unwrap();
        assert_eq!(c.domain, Some(vec![[0.0, 1.0]; 2]));
        assert_eq!(c.ladder, Some(Ladder::epsilon()));
        assert_eq!(c.options.measure_resolution, Some(8192));
        let again = ExperimentConfig::from_json(&c.to_json()).unwrap();
        assert_eq!(again, c);
        assert_eq!(again.problem().unwrap().pi.m(), 3);
    }

    #[test]
    fn rejects_unknown_schema_and_fields() {
        let bad = r#"{"schema": "sublevel-experiment/0", "dimension": 1, "functions": ["x1"], "operator": {"tree": "(2)"}}"#;
        assert!(ExperimentConfig::from_json(bad).is_err());
        let bad = r#"{"schema": "sublevel-experiment/1", "dimension": 1, "functions": ["x1"], "operator": {"tree": "(2)"}, "eps": 1}"#;
        assert!(ExperimentConfig::from_json(bad).is_err());
    }

    #[test]
    fn kind_must_match_subcommand() {
        let text = r#"{"schema": "sublevel-experiment/1", "kind": "oscillatory", "dimension": 1,
            "functions": ["x1"], "operator": {"tree": "(2)"}}"#;
        let c = ExperimentConfig::from_json(text).unwrap();
        assert!(c.clone().resolve(EstimateKind::Sublevel).is_err());
        assert!(c.resolve(EstimateKind::Oscillatory).is_ok());
    }
}
