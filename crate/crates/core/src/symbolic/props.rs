//! Property tests over randomly generated expressions.

use proptest::prelude::*;

use super::eval::magnitude_scale;
use super::*;

/// Random expressions over `x1..x3`. With `inverses` false no negative powers
/// are generated, so the expressions are smooth everywhere.
pub(crate) fn arb_expr(inverses: bool) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (1usize..=3).prop_map(Expr::Var),
        (-5i64..=5, 1i64..=4).prop_map(|(p, q)| Expr::rational(p, q)),
    ];
    let lo_exp = if inverses { -2i64 } else { 0 };
    leaf.prop_recursive(4, 24, 3, move |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Expr::Add),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Expr::Mul),
            (inner.clone(), lo_exp..=3).prop_map(|(b, n)| Expr::Pow(Box::new(b), n)),
            inner.clone().prop_map(|b| Expr::Neg(Box::new(b))),
            inner.clone().prop_map(|b| Expr::Sin(Box::new(b))),
            inner.clone().prop_map(|b| Expr::Cos(Box::new(b))),
            inner.prop_map(|b| Expr::Exp(Box::new(b))),
        ]
    })
}

/// Random polynomials over `x1..x3` of modest degree.
pub(crate) fn arb_poly() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (1usize..=3).prop_map(Expr::Var),
        (-3i64..=3).prop_map(Expr::int),
    ];
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Expr::Add),
            prop::collection::vec(inner.clone(), 2..=2).prop_map(Expr::Mul),
            (inner, 0i64..=2).prop_map(|(b, n)| Expr::Pow(Box::new(b), n)),
        ]
    })
}

fn point() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn derivative_matches_central_difference(e in arb_expr(false), x in point(), i in 1usize..=3) {
        let h = 1e-5;
        let d = diff(&e, i);
        let Ok(dv) = eval(&d, &Point(x.clone())) else { return Ok(()) };
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[i - 1] += h;
        xm[i - 1] -= h;
        let (Ok(fp), Ok(fm)) = (eval(&e, &Point(xp)), eval(&e, &Point(xm))) else { return Ok(()) };
        // skip points where the function is too large for the step to resolve
        prop_assume!(magnitude_scale(&e, &x) < 1e3);
        let fd = (fp - fm) / (2.0 * h);
        prop_assert!((dv - fd).abs() <= 1e-5 * (1.0 + dv.abs()), "{e}: {dv} vs {fd}");
    }

    #[test]
    fn simplify_preserves_value_and_is_idempotent(e in arb_expr(true), pts in prop::collection::vec(point(), 50)) {
        let s = e.simplify();
        prop_assert_eq!(s.simplify(), s.clone());
        for x in pts {
            let (Ok(a), Ok(b)) = (eval(&e, &Point(x.clone())), eval(&s, &Point(x.clone()))) else { continue };
            let scale = magnitude_scale(&e, &x);
            prop_assume!(scale < 1e8);
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + scale), "{e} -> {s}: {a} vs {b}");
        }
    }

    #[test]
    fn print_parse_round_trip(e in arb_expr(true)) {
        let s = e.simplify();
        let text = s.to_string();
        let back = parse(&text, 3).unwrap();
        prop_assert_eq!(back, s, "{}", text);
    }

    #[test]
    fn jacobian_is_alternating(a in arb_poly(), b in arb_poly(), c in arb_poly(), k in 0usize..3) {
        let es = vec![a, b, c];
        let det = jacobian_det(&es, 3).unwrap();
        let mut swapped = es.clone();
        swapped.swap(k, (k + 1) % 3);
        let det_swapped = jacobian_det(&swapped, 3).unwrap();
        let sum = make_add(vec![det, det_swapped]);
        prop_assert_eq!(zero_test(&sum, 10, 0), ZeroVerdict::Zero { exact: true });
    }
}

#[test]
fn counterexample_derivative_against_finite_differences() {
    use rand::{Rng, SeedableRng};
    let e = parse("exp(x1)*sin(10*x2)/10", 2).unwrap();
    let d = diff(&e, 2);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let h = 1e-5;
    for _ in 0..100 {
        let x = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let dv = eval(&d, &Point(x.to_vec())).unwrap();
        let fp = eval(&e, &Point(vec![x[0], x[1] + h])).unwrap();
        let fm = eval(&e, &Point(vec![x[0], x[1] - h])).unwrap();
        let fd = (fp - fm) / (2.0 * h);
        assert!((dv - fd).abs() < 1e-6 * dv.abs().max(1.0), "{dv} vs {fd}");
    }
}
