//! Canonical recipe enumeration and seeded random recipes.

use rand::Rng;

use super::OperatorRecipe;

fn subsets(d: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, d: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..=d {
            cur.push(i);
            go(i + 1, d, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, d, n, &mut Vec::new(), &mut out);
    out
}

/// Every recipe with `|β| ≤ max_abs_beta` in dimension `d`, children sorted
/// (one representative per class under child permutations), listed by `|β|`
/// and then in a fixed deterministic order.
pub fn enumerate_recipes(d: usize, max_abs_beta: usize) -> Vec<OperatorRecipe> {
    // by_weight[s] = canonical recipes with |β| = s, sorted
    let mut by_weight: Vec<Vec<OperatorRecipe>> = vec![vec![OperatorRecipe::Identity]];
    for s in 1..=max_abs_beta {
        let mut level = Vec::new();
        for n in 1..=d.min(s) {
            let budget = s - n;
            // pool of (recipe, weight) with weight <= budget
            let pool: Vec<(&OperatorRecipe, usize)> = by_weight[..=budget]
                .iter()
                .enumerate()
                .flat_map(|(w, rs)| rs.iter().map(move |r| (r, w)))
                .collect();
            let mut pool = pool;
            pool.sort();
            let mut multisets = Vec::new();
            pick(&pool, n, 0, budget, &mut Vec::new(), &mut multisets);
            for rows in subsets(d, n) {
                for ch in &multisets {
                    level.push(OperatorRecipe::Det {
                        rows: rows.clone(),
                        children: ch.clone(),
                    });
                }
            }
        }
        level.sort();
        by_weight.push(level);
    }
    by_weight.into_iter().flatten().collect()
}

/// Nondecreasing picks of `n` pool entries whose weights sum to `budget`.
fn pick(
    pool: &[(&OperatorRecipe, usize)],
    n: usize,
    start: usize,
    budget: usize,
    cur: &mut Vec<OperatorRecipe>,
    out: &mut Vec<Vec<OperatorRecipe>>,
) {
    if n == 0 {
        if budget == 0 {
            out.push(cur.clone());
        }
        return;
    }
    for k in start..pool.len() {
        let (r, w) = pool[k];
        if w > budget {
            continue;
        }
        cur.push(r.clone());
        pick(pool, n - 1, k, budget - w, cur, out);
        cur.pop();
    }
}

/// A random valid recipe of depth at most `max_depth`.
pub fn random_recipe<R: Rng + ?Sized>(rng: &mut R, d: usize, max_depth: usize) -> OperatorRecipe {
    if max_depth == 0 || rng.gen_bool(0.3) {
        return OperatorRecipe::Identity;
    }
    let n = rng.gen_range(1..=d);
    let mut rows: Vec<usize> = rand::seq::index::sample(rng, d, n)
        .into_iter()
        .map(|i| i + 1)
        .collect();
    rows.sort_unstable();
    let children = (0..n).map(|_| random_recipe(rng, d, max_depth - 1)).collect();
    OperatorRecipe::Det { rows, children }
}
