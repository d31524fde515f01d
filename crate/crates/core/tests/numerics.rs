use sublevel_core::numerics::{
    constrained_measure, oscillatory_integral, verify_estimate, AxisBox, ConstraintSet, EstimateKind, EstimateProblem,
    Ladder, OperatorSpec, Verdict, VerifyOptions,
};
use sublevel_core::operators::{enumerate_recipes, parse_recipe, type_of_recipe, FunctionTuple, OperatorRecipe};

fn multilinear_ratios(s1: f64, s2: f64) -> Vec<f64> {
    let domain = AxisBox::new(&[(0.0, s1), (0.0, s2)]).unwrap();
    let template = ConstraintSet::new(domain, vec![(1, [0.0, s1]), (2, [0.0, s2])]).unwrap();
    let p = EstimateProblem {
        kind: EstimateKind::Multilinear,
        pi: FunctionTuple::euclidean_from_text(&["x1*x2"], 2).unwrap(),
        operator: OperatorSpec::Recipe(parse_recipe("det[1](det[2](id))").unwrap()),
        template,
        // x_i -> s_i x_i scales |{x1 x2 <= eps}| and |E_1|^(1/2) |E_2|^(1/2) by s1 s2,
        // so eps -> s1 s2 eps leaves value / bound unchanged.
        ladder: Ladder::epsilon().scaled(s1 * s2),
        options: VerifyOptions::default(),
    };
    let r = verify_estimate(&p).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    r.rows.iter().map(|row| row.ratio).collect()
}

#[test]
fn multilinear_ratio_is_scale_invariant() {
    let base = multilinear_ratios(1.0, 1.0);
    for s1 in [0.5, 1.0, 2.0] {
        for s2 in [0.5, 1.0, 2.0] {
            for (a, b) in base.iter().zip(multilinear_ratios(s1, s2)) {
                assert!((a - b).abs() < 0.02 * a, "s = ({s1}, {s2}): {b} vs {a}");
            }
        }
    }
}

#[test]
fn zero_frequency_integral_is_the_measure() {
    let pi = FunctionTuple::euclidean_from_text(&["x1^2 + x2^2 - x1*x2"], 2).unwrap();
    for (lo, hi) in [(0.0, 0.5), (-0.1, 0.25), (0.3, 2.0)] {
        let c = ConstraintSet::new(AxisBox::cube(2, -1.0, 1.0), vec![(3, [lo, hi])]).unwrap();
        let osc = oscillatory_integral(&pi, 3, &c, 0.0, 1e-3).unwrap();
        let m = constrained_measure(&pi, &c, 4096, 0).unwrap();
        assert!(osc.value.im.abs() < 1e-12);
        let gap = (osc.value.re - m.value).abs();
        assert!(gap <= osc.error + m.half_width, "[{lo}, {hi}]: {} vs {}", osc.value.re, m.value);
        assert!(gap <= 0.01 * m.value);
    }
}

#[test]
fn composites_of_linear_forms_are_vacuous() {
    let recipes: Vec<OperatorRecipe> = enumerate_recipes(2, 4)
        .into_iter()
        .filter(|r| type_of_recipe(r, 2).unwrap().alpha >= 2)
        .collect();
    assert!(!recipes.is_empty());
    for k in [3, 4] {
        let f = format!("(x1 + 2*x2 - 1)^{k}");
        for r in &recipes {
            let mut p = EstimateProblem {
                kind: EstimateKind::Sublevel,
                pi: FunctionTuple::euclidean_from_text(&[&f], 2).unwrap(),
                operator: OperatorSpec::Recipe(r.clone()),
                template: ConstraintSet::unconstrained(AxisBox::unit(2)),
                ladder: Ladder::epsilon(),
                options: VerifyOptions::default(),
            };
            p.options.measure_resolution = Some(256);
            p.options.inf_resolution = Some(64);
            let rep = verify_estimate(&p).unwrap();
            assert_eq!(rep.verdict, Verdict::Vacuous, "{r} on {f}");
            assert!(rep.c_star.is_none());
        }
    }
}

#[test]
fn monte_carlo_shards_are_reproducible() {
    let pi = FunctionTuple::euclidean_from_text(&["x1^2 + x2^2 + x3^2 + x4^2"], 4).unwrap();
    let c = ConstraintSet::sublevel(AxisBox::cube(4, -1.0, 1.0), 5, 1.0).unwrap();
    let a = constrained_measure(&pi, &c, 200_000, 17).unwrap();
    let b = constrained_measure(&pi, &c, 200_000, 17).unwrap();
    assert_eq!(a, b);
    let ball = std::f64::consts::PI.powi(2) / 2.0;
    assert!((a.value - ball).abs() <= a.half_width + 1e-12, "{} vs {ball}", a.value);
    let other = constrained_measure(&pi, &c, 200_000, 18).unwrap();
    assert_ne!(a.value, other.value);
}
