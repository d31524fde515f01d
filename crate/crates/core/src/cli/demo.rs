//! Worked demonstrations.

use crate::numerics::{constrained_measure, inf_abs, AxisBox, ConstraintSet, NumericsError};
use crate::operators::{apply_recipe, enumerate_recipes, type_of_recipe, FunctionTuple, OperatorRecipe};
use crate::symbolic::{parse, zero_test, Expr, ZeroVerdict};

#[derive(Clone, Debug, PartialEq)]
pub struct CounterexampleRow {
    pub n: u32,
    pub inf_naive: f64,
    pub inf_certified: Option<f64>,
    pub measure: f64,
}

/// `F_N = e^{x1} sin(N x2) / N` on the unit square.
pub fn counterexample_function(n: u32) -> Expr {
    parse(&format!("exp(x1)*sin({n}*x2)/{n}"), 2).expect("fixed expression parses")
}

/// `inf |det Hess F_N|` and `|{|F_N| ≤ eps}|` for each `N`.
pub fn hessian_counterexample(
    ns: &[u32],
    eps: f64,
    measure_resolution: usize,
    inf_resolution: usize,
) -> Result<Vec<CounterexampleRow>, NumericsError> {
    let square = AxisBox::unit(2);
    ns.iter()
        .map(|&n| {
            let f = counterexample_function(n);
            let hess = apply_recipe(&OperatorRecipe::hessian(2), &f, 2)?;
            let inf = inf_abs(&hess, &square, inf_resolution)?;
            let pi = FunctionTuple::euclidean(f, 2)?;
            let c = ConstraintSet::sublevel(square.clone(), 3, eps)?;
            let m = constrained_measure(&pi, &c, measure_resolution, 0)?;
            Ok(CounterexampleRow {
                n,
                inf_naive: inf.naive,
                inf_certified: inf.certified,
                measure: m.value,
            })
        })
        .collect()
}

pub fn counterexample_csv(rows: &[CounterexampleRow]) -> String {
    let mut s = String::from("N,inf_abs_det_hess,certified_lower,measure\n");
    for r in rows {
        let cert = r.inf_certified.map_or_else(|| "none".to_string(), |c| c.to_string());
        s.push_str(&format!("{},{},{},{}\n", r.n, r.inf_naive, cert, r.measure));
    }
    s
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompositeRow {
    pub k: u32,
    pub recipe: OperatorRecipe,
    pub alpha: usize,
    pub beta: Vec<usize>,
    pub verdict: ZeroVerdict,
}

/// Apply every canonical recipe of type `α ≥ min_alpha`, `|β| ≤ max_beta` in
/// dimension 2 to `(x1 + 2 x2)^k` and zero-test the result.
pub fn composite_vanishing(
    ks: &[u32],
    min_alpha: usize,
    max_beta: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<CompositeRow>, crate::operators::OperatorError> {
    let recipes: Vec<_> = enumerate_recipes(2, max_beta)
        .into_iter()
        .filter_map(|r| {
            let t = type_of_recipe(&r, 2).ok()?;
            (t.alpha >= min_alpha).then_some((r, t))
        })
        .collect();
    let mut rows = Vec::new();
    for &k in ks {
        let f = parse(&format!("(x1 + 2*x2)^{k}"), 2)?;
        for (r, t) in &recipes {
            let lf = apply_recipe(r, &f, 2)?;
            rows.push(CompositeRow {
                k,
                recipe: r.clone(),
                alpha: t.alpha,
                beta: t.beta.clone(),
                verdict: zero_test(&lf, trials, seed),
            });
        }
    }
    Ok(rows)
}

pub fn verdict_label(v: &ZeroVerdict) -> &'static str {
    match v {
        ZeroVerdict::Zero { exact: true } => "zero-exact",
        ZeroVerdict::Zero { exact: false } => "zero-sampled",
        ZeroVerdict::Nonzero { .. } => "nonzero",
        ZeroVerdict::Inconclusive => "inconclusive",
    }
}

pub fn composite_csv(rows: &[CompositeRow]) -> String {
    let mut s = String::from("k,recipe,alpha,beta,verdict\n");
    for r in rows {
        let beta: Vec<String> = r.beta.iter().map(|b| b.to_string()).collect();
        s.push_str(&format!(
            "{},\"{}\",{},{},{}\n",
            r.k,
            r.recipe,
            r.alpha,
            beta.join(" "),
            verdict_label(&r.verdict)
        ));
    }
    s
}
