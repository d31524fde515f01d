use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sublevel_core::operators::{
    apply_recipe, enumerate_recipes, random_recipe, recipe_tree_equivalence, tree_of_recipe, type_of_recipe,
};
use sublevel_core::symbolic::{diff, make_add, make_neg, parse, zero_test, Expr};
use sublevel_core::trees::stats;

fn generic(d: usize) -> Expr {
    let text = match d {
        1 => "x1^7 - 3*x1^5 + 2*x1^2 + 5",
        2 => "x1^5*x2^4 - 3*x1^2*x2^5 + 7*x1^4*x2 + x2^6 - x1*x2",
        _ => "x1^5*x2^4*x3^3 + 3*x1^2*x2^3 - 2*x1^4*x3^5 + x2^5*x3^2 + 7*x1*x2*x3 - x3^6",
    };
    parse(text, d).unwrap()
}

fn mixed_partial(f: &Expr, beta: &[usize]) -> Expr {
    let mut g = f.clone();
    for (i, &b) in beta.iter().enumerate() {
        for _ in 0..b {
            g = diff(&g, i + 1);
        }
    }
    g
}

#[test]
fn alpha_one_recipes_are_signed_mixed_partials() {
    let mut checked = 0;
    for d in 1..=3 {
        let f = generic(d);
        for r in enumerate_recipes(d, 4) {
            let t = type_of_recipe(&r, d).unwrap();
            if t.alpha != 1 {
                continue;
            }
            let lf = apply_recipe(&r, &f, d).unwrap();
            let dbeta = mixed_partial(&f, &t.beta);
            let same = zero_test(&make_add(vec![lf.clone(), make_neg(dbeta.clone())]), 10, 1).is_zero();
            let opposite = zero_test(&make_add(vec![lf, dbeta]), 10, 1).is_zero();
            assert!(same || opposite, "{r} in d = {d} is not ±∂^{:?}", t.beta);
            checked += 1;
        }
    }
    assert!(checked > 10, "only {checked} recipes of type alpha = 1");
}

#[test]
fn hessian_matches_closed_form() {
    let f = parse("x1^3*x2 + x2^2", 2).unwrap();
    let h = apply_recipe(&sublevel_core::operators::OperatorRecipe::hessian(2), &f, 2).unwrap();
    // f11 f22 - f12^2 = 6 x1 x2 * 2 - (3 x1^2)^2
    let expected = parse("12*x1*x2 - 9*x1^4", 2).unwrap();
    assert!(zero_test(&make_add(vec![h, make_neg(expected)]), 10, 0).is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn recipe_trees_satisfy_numerology(seed in any::<u64>(), d in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_recipe(&mut rng, d, 3);
        let t = type_of_recipe(&r, d).unwrap();
        let g = tree_of_recipe(&r, d).unwrap();
        let s = stats(&g, d + 1).unwrap();
        prop_assert_eq!(s.order as i64, t.beta.iter().sum::<usize>() as i64 + 1 - t.alpha as i64);
        prop_assert_eq!(s.leaf_counts[d], t.alpha);
        for i in 0..d {
            prop_assert_eq!(s.leaf_counts[i] + t.beta[i], s.order);
        }
        prop_assert_eq!(s.order + s.leaf_counts.iter().sum::<usize>(), s.vertex_count);
    }

    #[test]
    fn recipe_and_tree_agree_up_to_sign(seed in any::<u64>(), d in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_recipe(&mut rng, d, 2);
        let rep = recipe_tree_equivalence(&r, &generic(d), d, 10, seed).unwrap();
        prop_assert!(rep.pass(), "{} vs {}", r, rep.tree);
    }
}
