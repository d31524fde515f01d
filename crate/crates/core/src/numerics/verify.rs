//! Ladder experiments that compare measured quantities with the right-hand
//! side of the tree estimates.

use serde::{Deserialize, Serialize};

use super::fit::{fit_decay, DecayFit};
use super::geometry::ConstraintSet;
use super::infimum::{default_inf_resolution, inf_abs, InfEstimate};
use super::measure::{constrained_measure, default_measure_resolution, MeasureMethod};
use super::oscillatory::oscillatory_integral;
use super::NumericsError;
use crate::operators::{apply_tree, tree_of_recipe, FunctionTuple, OperatorRecipe};
use crate::trees::{stats, DTree, TreeStats};

/// Infima at or below this make the bound vacuous.
pub const VACUOUS_INF: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateKind {
    Sublevel,
    Multilinear,
    Oscillatory,
}

/// `start, start·ratio, ..., start·ratio^(count-1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ladder {
    pub start: f64,
    pub ratio: f64,
    pub count: usize,
}

impl Ladder {
    /// `ε = 2^-4, ..., 2^-12`.
    pub fn epsilon() -> Self {
        Ladder {
            start: 2f64.powi(-4),
            ratio: 0.5,
            count: 9,
        }
    }

    /// `λ = 2^4, ..., 2^14`.
    pub fn frequency() -> Self {
        Ladder {
            start: 16.0,
            ratio: 2.0,
            count: 11,
        }
    }

    pub fn default_for(kind: EstimateKind) -> Self {
        match kind {
            EstimateKind::Oscillatory => Ladder::frequency(),
            _ => Ladder::epsilon(),
        }
    }

    pub fn scaled(&self, t: f64) -> Self {
        Ladder {
            start: self.start * t,
            ..self.clone()
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.start * self.ratio.powi(k as i32)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum OperatorSpec {
    Tree(DTree),
    Recipe(OperatorRecipe),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyOptions {
    /// Grid cells per axis or Monte Carlo samples; dimension default if absent.
    pub measure_resolution: Option<usize>,
    pub inf_resolution: Option<usize>,
    pub seed: u64,
    /// Oscillatory quadrature tolerance.
    pub tolerance: f64,
    /// Frequencies per window `[λ, 2λ)` in the oscillatory envelope.
    pub envelope: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            measure_resolution: None,
            inf_resolution: None,
            seed: 0,
            tolerance: 1e-9,
            envelope: 32,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimateProblem {
    pub kind: EstimateKind,
    pub pi: FunctionTuple,
    pub operator: OperatorSpec,
    /// Domain and the fixed constraints `π_j ∈ E_j`, `j < m`. The ladder
    /// supplies the constraint on (or the phase) `π_m`.
    pub template: ConstraintSet,
    pub ladder: Ladder,
    pub options: VerifyOptions,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Violation,
    Vacuous,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LadderRow {
    pub parameter: f64,
    pub value: f64,
    pub error: f64,
    pub bound_rhs: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Resolutions {
    pub infimum: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub envelope: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimateReport {
    pub kind: EstimateKind,
    pub tree: DTree,
    pub stats: TreeStats,
    pub predicted_exponent: f64,
    pub fitted_slope: f64,
    /// Largest `value / bound_rhs`; `None` when the bound is vacuous.
    pub c_star: Option<f64>,
    pub verdict: Verdict,
    pub rows: Vec<LadderRow>,
    pub fit: DecayFit,
    pub infimum: InfEstimate,
    /// `Π_{j<m} |E_j|^{G^(j)/#G}`.
    pub set_factor: f64,
    pub seeds: Vec<u64>,
    pub resolutions: Resolutions,
}

#[derive(Serialize)]
struct Summary<'a> {
    predicted_exponent: f64,
    fitted_slope: f64,
    #[serde(rename = "C_star")]
    c_star: Option<f64>,
    verdict: Verdict,
    seeds: &'a [u64],
    resolutions: &'a Resolutions,
}

impl EstimateReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("parameter,value,error,bound_rhs,ratio\n");
        for r in &self.rows {
            s.push_str(&format!("{},{},{},{},{}\n", r.parameter, r.value, r.error, r.bound_rhs, r.ratio));
        }
        s
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::to_value(Summary {
            predicted_exponent: self.predicted_exponent,
            fitted_slope: self.fitted_slope,
            c_star: self.c_star,
            verdict: self.verdict,
            seeds: &self.seeds,
            resolutions: &self.resolutions,
        })
        .expect("summary serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary_json()).expect("summary serializes") + "\n"
    }
}

/// Run the ladder and compare with `C param^s Π|E_j|^{G^(j)/#G} (inf |∂^G π|)^{-1/#G}`.
///
/// Sublevel and multilinear problems measure `{x ∈ C : |π_m(x)| ≤ ε}`;
/// oscillatory problems take, for each `λ`, the largest
/// `|∫_C e^{iμπ_m}| (μ/λ)^s` over `envelope` geometrically spaced
/// `μ ∈ [λ, 2λ)`, `s` the predicted decay rate. The raw `|∫|` has zeros in
/// `λ`, so single samples would not show the rate.
pub fn verify_estimate(p: &EstimateProblem) -> Result<EstimateReport, NumericsError> {
    let pi = &p.pi;
    let d = pi.d;
    let m = pi.m();
    if p.template.domain.dim() != d {
        return Err(NumericsError::DimensionMismatch {
            expected: d,
            got: p.template.domain.dim(),
        });
    }
    let tree = match &p.operator {
        OperatorSpec::Tree(g) => g.clone(),
        OperatorSpec::Recipe(r) => {
            if m != d + 1 {
                return Err(NumericsError::InvalidParameter(format!(
                    "an operator recipe needs d + 1 = {} functions, got {m}",
                    d + 1
                )));
            }
            tree_of_recipe(r, d)?
        }
    };
    tree.validate(d, m)?;
    let st = stats(&tree, m)?;
    if st.order == 0 {
        return Err(NumericsError::InvalidParameter("the operator tree is a single leaf".into()));
    }
    let order = st.order as f64;
    for &(j, _) in &p.template.constraints {
        if j == m {
            return Err(NumericsError::InvalidParameter(format!(
                "function {m} is constrained by the ladder"
            )));
        }
        if p.kind == EstimateKind::Sublevel {
            return Err(NumericsError::InvalidParameter(
                "sublevel problems take no fixed constraints; use multilinear".into(),
            ));
        }
    }
    let exponent = st.leaf_counts[m - 1] as f64 / order;
    let predicted = match p.kind {
        EstimateKind::Oscillatory => -exponent,
        _ => exponent,
    };
    let mut set_factor = 1.0;
    for j in 1..m {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        let mut any = false;
        for &(k, [a, b]) in &p.template.constraints {
            if k == j {
                lo = lo.max(a);
                hi = hi.min(b);
                any = true;
            }
        }
        if any {
            set_factor *= (hi - lo).max(0.0).powf(st.leaf_counts[j - 1] as f64 / order);
        }
    }

    let derivative = apply_tree(&tree, pi)?;
    let inf_res = p.options.inf_resolution.unwrap_or_else(|| default_inf_resolution(d));
    let infimum = inf_abs(&derivative, &p.template.domain, inf_res)?;
    let vacuous = infimum.naive <= VACUOUS_INF;
    let inf_factor = if vacuous { f64::INFINITY } else { infimum.best().powf(-1.0 / order) };

    let ladder = p.ladder.values();
    if ladder.iter().any(|&x| x <= 0.0 || !x.is_finite()) {
        return Err(NumericsError::InvalidParameter("ladder values must be positive".into()));
    }
    let mut seeds = Vec::new();
    let mut rows = Vec::with_capacity(ladder.len());
    let measure_res = p.options.measure_resolution.unwrap_or_else(|| default_measure_resolution(d));
    for (k, &param) in ladder.iter().enumerate() {
        let (value, error) = match p.kind {
            EstimateKind::Sublevel | EstimateKind::Multilinear => {
                let mut constraints = p.template.constraints.clone();
                constraints.push((m, [-param, param]));
                let c = ConstraintSet::new(p.template.domain.clone(), constraints)?;
                let seed = p.options.seed.wrapping_add(k as u64);
                let est = constrained_measure(pi, &c, measure_res, seed)?;
                if est.method == MeasureMethod::MonteCarlo {
                    seeds.push(seed);
                }
                (est.value, est.half_width)
            }
            EstimateKind::Oscillatory => {
                let w = p.options.envelope.max(1);
                let mut best = (0.0f64, 0.0f64);
                for t in 0..w {
                    let mu = param * 2f64.powf(t as f64 / w as f64);
                    let r = oscillatory_integral(pi, m, &p.template, mu, p.options.tolerance)?;
                    let v = r.value.norm() * (mu / param).powf(exponent);
                    if v > best.0 {
                        best.0 = v;
                    }
                    best.1 = best.1.max(r.error);
                }
                best
            }
        };
        let bound_rhs = param.powf(predicted) * set_factor * inf_factor;
        rows.push(LadderRow {
            parameter: param,
            value,
            error,
            bound_rhs,
            ratio: value / bound_rhs,
        });
    }
    let samples: Vec<(f64, f64)> = rows.iter().map(|r| (r.parameter, r.value)).collect();
    let fit = match fit_decay(&samples, predicted) {
        Ok(f) => f,
        // empty sets still get their vacuous report
        Err(NumericsError::NonPositiveSample { .. }) if vacuous => DecayFit {
            predicted_exponent: predicted,
            slope: f64::NAN,
            intercept: f64::NAN,
            ratios: samples.iter().map(|&(p, v)| v / p.powf(predicted)).collect(),
            max_ratio: f64::NAN,
            violation: false,
        },
        Err(e) => return Err(e),
    };
    let (c_star, verdict) = if vacuous {
        (None, Verdict::Vacuous)
    } else {
        let c = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
        (Some(c), if fit.violation { Verdict::Violation } else { Verdict::Pass })
    };
    let resolutions = match p.kind {
        EstimateKind::Oscillatory => Resolutions {
            infimum: inf_res,
            measure: None,
            envelope: Some(p.options.envelope.max(1)),
            tolerance: Some(p.options.tolerance),
        },
        _ => Resolutions {
            infimum: inf_res,
            measure: Some(measure_res),
            envelope: None,
            tolerance: None,
        },
    };
    Ok(EstimateReport {
        kind: p.kind,
        tree,
        stats: st,
        predicted_exponent: predicted,
        fitted_slope: fit.slope,
        c_star,
        verdict,
        rows,
        fit,
        infimum,
        set_factor,
        seeds,
        resolutions,
    })
}
