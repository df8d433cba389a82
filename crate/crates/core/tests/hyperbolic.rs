use fuplab_core::hyperbolic::group::bolza_inradius;
use fuplab_core::hyperbolic::hitting::default_targets;
use fuplab_core::hyperbolic::observables::{bump_profile, random_points};
use fuplab_core::hyperbolic::{
    geodesic_flow, hitting_time, horocycle_average, horocycle_flow, liouville_average, Direction, FuchsianGroup,
    MoebiusElement, Observable, UnitTangentPoint,
};
use proptest::prelude::*;

/// Composite Simpson rule on `[a, b]` with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|k| f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(a) + f(b) + inner) * h / 3.0
}

/// `γ = x y⁻¹` lies in the group exactly when it reduces to `±I`.
fn same_orbit(group: &FuchsianGroup, x: &MoebiusElement, y: &MoebiusElement) -> bool {
    let g = group.reduce(&(*x * y.inverse())).unwrap();
    g.distance(&MoebiusElement::identity()) < 1e-8
}

fn point(group: &FuchsianGroup, seed: u64) -> UnitTangentPoint {
    random_points(group, 1, seed)[0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn geodesic_flow_tracks_right_multiplication(seed in 0u64..10_000, t1 in -4.0f64..4.0, t2 in -4.0f64..4.0) {
        let g = FuchsianGroup::bolza();
        let p = point(&g, seed);
        let q = geodesic_flow(&g, &geodesic_flow(&g, &p, t1).unwrap(), t2).unwrap();
        prop_assert!(g.is_reduced(&q.rep));
        prop_assert!(same_orbit(&g, &q.rep, &(p.rep * MoebiusElement::a(t1 + t2))));
    }

    #[test]
    fn horocycle_flows_track_unipotents(seed in 0u64..10_000, s in -3.0f64..3.0) {
        let g = FuchsianGroup::bolza();
        let p = point(&g, seed);
        let q = horocycle_flow(&g, &p, s, Direction::Stable).unwrap();
        prop_assert!(same_orbit(&g, &q.rep, &(p.rep * MoebiusElement::n_plus(s))));
        let r = horocycle_flow(&g, &p, s, Direction::Unstable).unwrap();
        prop_assert!(same_orbit(&g, &r.rep, &(p.rep * MoebiusElement::n_minus(s))));
    }

    #[test]
    fn stable_horocycles_contract_under_the_geodesic_flow(seed in 0u64..10_000, s in 0.01f64..1.0, t in 0.5f64..3.0) {
        // φ_t(e^{sU₊} x) = e^{e^{-t}s U₊} φ_t(x).
        let x = point(&FuchsianGroup::bolza(), seed).rep;
        let lhs = x * MoebiusElement::n_plus(s) * MoebiusElement::a(t);
        let rhs = x * MoebiusElement::a(t) * MoebiusElement::n_plus((-t).exp() * s);
        prop_assert!(lhs.distance(&rhs) < 1e-10 * lhs.frobenius());
    }

    #[test]
    fn reduction_is_invariant_under_the_group(seed in 0u64..10_000, word in prop::collection::vec(0usize..8, 1..6)) {
        let g = FuchsianGroup::bolza();
        let p = point(&g, seed).rep;
        let gamma = word.iter().fold(MoebiusElement::identity(), |acc, &k| acc * g.generators()[k]);
        let moved = g.reduce(&(gamma * p)).unwrap();
        prop_assert!(g.is_reduced(&moved));
        prop_assert!(same_orbit(&g, &moved, &p));
    }

    #[test]
    fn hitting_points_are_inside_the_ball(seed in 0u64..10_000) {
        let g = FuchsianGroup::bolza();
        let balls = default_targets(&g, 0.3).unwrap();
        let p = point(&g, seed);
        if let Some(s) = hitting_time(&g, &balls[0], &p, 5000.0, Direction::Unstable).unwrap() {
            let q = horocycle_flow(&g, &p, s, Direction::Unstable).unwrap();
            prop_assert!(balls[0].contains(&q.rep) || balls[0].center.distance(&q.rep) < 0.3 + 1e-6);
        }
    }
}

#[test]
fn liouville_average_matches_the_radial_integral() {
    // Area of the genus-2 surface is 4π; the bump depends only on the base point.
    let exact = simpson(|r| bump_profile(r / 1.5) * r.sinh(), 0.0, 1.5, 2000) * 2.0 * std::f64::consts::PI
        / (4.0 * std::f64::consts::PI);
    assert!((exact - 0.25031).abs() < 1e-4);
    let g = FuchsianGroup::bolza();
    let est = liouville_average(&g, &Observable::default(), 100_000, 11).unwrap();
    assert!((est.mean - exact).abs() <= 4.0 * est.std_error, "{est:?} vs {exact}");
}

#[test]
fn long_horocycle_averages_approach_the_liouville_average() {
    let g = FuchsianGroup::bolza();
    let f = Observable::default();
    let exact = simpson(|r| bump_profile(r / 1.5) * r.sinh(), 0.0, 1.5, 2000) / 2.0;
    let pts = random_points(&g, 8, 5);
    let mean_err = |t: f64| {
        pts.iter()
            .map(|p| (horocycle_average(&g, &f, p, t, (t * 100.0) as usize).unwrap() - exact).abs())
            .sum::<f64>()
            / pts.len() as f64
    };
    let (short, long) = (mean_err(10.0), mean_err(320.0));
    assert!(long < short && long < 0.03, "{short} -> {long}");
}

#[test]
fn explicit_generators_behave_like_the_preset() {
    let preset = FuchsianGroup::bolza();
    let json = serde_json::to_string(&serde_json::json!({
        "generators": preset.generators(),
        "relations": preset.relation_products(),
    }))
    .unwrap();
    let explicit = FuchsianGroup::from_json(&json).unwrap();
    for seed in 0..20 {
        let p = point(&preset, seed).rep * MoebiusElement::a(2.5);
        let a = preset.reduce(&p).unwrap();
        let b = explicit.reduce(&p).unwrap();
        assert!(a.distance(&b) < 1e-9);
    }
    for g in preset.generators() {
        assert!((g.displacement() - 2.0 * bolza_inradius()).abs() < 1e-9);
    }
    let bad = r#"{"generators": [[2, 0, 0, 0.5]], "relations": [[0, 0]]}"#;
    assert!(FuchsianGroup::from_json(bad).is_err());
}
