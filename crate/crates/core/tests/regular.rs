use fuplab_core::intervals::random_porous;
use fuplab_core::regular::{base_for, contains_in_neighborhood, cutoff_level, embed_porous, regularity_check};
use fuplab_core::{CantorTree, Interval, RegularMeasure};
use proptest::prelude::*;

/// Membership in the infinite tree, which keeps dropping the leftmost child
/// below the stored depth.
fn kept(tree: &CantorTree, k: u32, m: u64) -> bool {
    if k <= tree.depth() {
        tree.is_kept(k, m)
    } else {
        !m.is_multiple_of(tree.base_l()) && kept(tree, k - 1, m / tree.base_l())
    }
}

/// `μ(I)` by descending the tree to `depth` and taking leaf overlaps
/// proportionally; the error is at most two leaf weights.
fn tree_mass(tree: &CantorTree, i: &Interval, k: u32, m: u64, depth: u32) -> f64 {
    let scale = (tree.base_l() as f64).powi(k as i32);
    let node = Interval::new(m as f64 / scale, (m + 1) as f64 / scale).unwrap();
    if !kept(tree, k, m) || node.hi <= i.lo || node.lo >= i.hi {
        return 0.0;
    }
    if i.lo <= node.lo && node.hi <= i.hi {
        return tree.weight(k);
    }
    if k == depth {
        let overlap = node.hi.min(i.hi) - node.lo.max(i.lo);
        return tree.weight(k) * overlap / node.len();
    }
    (0..tree.base_l()).map(|c| tree_mass(tree, i, k + 1, m * tree.base_l() + c, depth)).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn embedding_contains_the_set(seed in 0u64..500, nu_idx in 0usize..3) {
        let nu = [0.1, 0.25, 0.5][nu_idx];
        let alpha0 = 2f64.powi(-9);
        let omega = random_porous(nu, alpha0, seed).unwrap();
        let tree = embed_porous(&omega, nu, alpha0).unwrap();
        prop_assert_eq!(tree.base_l(), base_for(nu).unwrap());
        prop_assert_eq!(tree.k0(), cutoff_level(tree.base_l(), alpha0).unwrap());
        prop_assert!(contains_in_neighborhood(&tree, &omega, alpha0).unwrap());
    }

    #[test]
    fn measure_matches_tree_descent(seed in 0u64..200, lo in 0.0f64..1.0, len in 1e-4f64..1.0) {
        let nu = 0.5;
        let omega = random_porous(nu, 1.0 / 64.0, seed).unwrap();
        let tree = embed_porous(&omega, nu, 1.0 / 64.0).unwrap();
        let depth = tree.depth() + 3;
        let mu = RegularMeasure::new(tree.clone());
        let i = Interval::new(lo.min(1.0 - len), lo.min(1.0 - len) + len).unwrap();
        let oracle = tree_mass(&tree, &i, 0, 0, depth);
        let got = mu.measure_of_interval(&i);
        prop_assert!((got - oracle).abs() <= 2.0 * tree.weight(depth) + 1e-12, "{got} vs {oracle}");
    }
}

#[test]
fn measure_is_a_probability_distribution() {
    let tree = CantorTree::uniform(4, 3, 4).unwrap();
    let mu = RegularMeasure::new(tree);
    assert_eq!(mu.cdf(0.0), 0.0);
    assert!((mu.cdf(1.0) - 1.0).abs() < 1e-15);
    let mut prev = 0.0;
    for k in 0..=1000 {
        let c = mu.cdf(k as f64 / 1000.0);
        assert!(c + 1e-15 >= prev);
        prev = c;
    }
    // Dropping the leftmost quarter at every level: μ[0, 1/4] = 0.
    assert!(mu.cdf(0.25) < 1e-15);
    assert!((mu.delta - 3f64.ln() / 4f64.ln()).abs() < 1e-15);
}

#[test]
fn uniform_trees_are_regular_with_the_proved_constants() {
    for l in [3, 5, 8] {
        let mu = RegularMeasure::new(CantorTree::uniform(l, 3, 4).unwrap());
        let r = regularity_check(&mu, 4000, l).unwrap();
        assert!(r.upper_ok && r.lower_ok, "{r:?}");
        assert_eq!(r.c_r, 2.0 * l as f64);
    }
}

#[test]
fn trees_round_trip_through_json() {
    let omega = random_porous(0.25, 1e-3, 7).unwrap();
    let tree = embed_porous(&omega, 0.25, 1e-3).unwrap();
    let text = serde_json::to_string(&tree).unwrap();
    let back: CantorTree = serde_json::from_str(&text).unwrap();
    assert_eq!(tree, back);
    assert!(serde_json::from_str::<CantorTree>(r#"{"L": 3, "k0": 0, "depth": 2, "kept": [[0], [0, 1, 2]]}"#).is_err());
}
