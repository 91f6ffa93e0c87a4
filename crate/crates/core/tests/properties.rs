use proptest::prelude::*;

use mixedic::channel::{classify_all, classify_link, less_noisy_margin, third};
use mixedic::export::{region_from_json, region_to_json};
use mixedic::region::{
    lemma1_outer_bound, mixed_mac_region, scheme_inner_constraints, theorem_capacity_region,
};
use mixedic::sim::{estimate_error_rate, predicted_achievable, SimParams};
use mixedic::{figure2, sample_configs, ChannelConfig, MixedAssignment, SampleMode, GEOM_TOL};

fn gain() -> impl Strategy<Value = f64> {
    prop_oneof![-5.0..-0.05f64, 0.05..5.0f64]
}

fn channel() -> impl Strategy<Value = ChannelConfig> {
    (
        proptest::array::uniform3(proptest::array::uniform3(gain())),
        proptest::array::uniform3(0.0..25.0f64),
    )
        .prop_map(|(h, p)| ChannelConfig::new(h, p).expect("valid"))
}

fn link() -> impl Strategy<Value = (usize, usize)> {
    (0..3usize, 1..3usize).prop_map(|(tx, off)| (tx, (tx + off) % 3))
}

fn sampled(mode: SampleMode) -> impl Strategy<Value = (ChannelConfig, MixedAssignment)> {
    any::<u64>().prop_map(move |seed| {
        let s = sample_configs(mode, 1, seed).remove(0);
        (s.cfg, s.asg)
    })
}

fn any_mode() -> impl Strategy<Value = SampleMode> {
    prop_oneof![Just(SampleMode::Satisfy), Just(SampleMode::Violate)]
}

proptest! {
    #[test]
    fn very_strong_implies_strong(cfg in channel(), (tx, rx) in link()) {
        let l = classify_link(&cfg, tx, rx, third(tx, rx)).unwrap();
        prop_assert!(!l.is_very_strong() || l.is_strong());
    }

    #[test]
    fn less_noisy_margin_matches_strong(cfg in channel(), (tx, rx) in link()) {
        let m = less_noisy_margin(&cfg, rx, tx).unwrap();
        prop_assume!((m - 1.0).abs() > 1e-6);
        let l = classify_link(&cfg, tx, rx, third(tx, rx)).unwrap();
        prop_assert_eq!(m <= 1.0, l.is_strong());
    }

    #[test]
    fn rescaling_preserves_regime_and_regions(
        (cfg, asg) in any_mode().prop_flat_map(sampled),
        c in 0.01..100.0f64,
    ) {
        let scaled = cfg.rescaled(c).unwrap();
        let kinds = |x: &ChannelConfig| classify_all(x).map(|row| row.map(|l| l.map(|l| l.kind)));
        prop_assert_eq!(kinds(&cfg), kinds(&scaled));
        for (a, b) in [
            (lemma1_outer_bound(&cfg), lemma1_outer_bound(&scaled)),
            (mixed_mac_region(&cfg, &asg), mixed_mac_region(&scaled, &asg)),
        ] {
            for (x, y) in a.halfspaces.iter().zip(&b.halfspaces) {
                prop_assert!((x.bound() - y.bound()).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn regions_grow_with_power((cfg, asg) in sampled(SampleMode::Satisfy), boost in 1.0..4.0f64) {
        let louder = ChannelConfig::new(*cfg.gains(), cfg.powers().map(|p| p * boost)).unwrap();
        let small = mixed_mac_region(&cfg, &asg);
        let large = mixed_mac_region(&louder, &asg);
        for v in small.vertices().unwrap() {
            prop_assert!(large.contains(&v, GEOM_TOL));
        }
    }

    #[test]
    fn vertices_lie_on_the_boundary((cfg, asg) in sampled(SampleMode::Satisfy)) {
        let cap = theorem_capacity_region(&cfg, &asg).unwrap();
        for v in cap.vertices().unwrap() {
            prop_assert!(cap.contains(&v, GEOM_TOL));
            if v.iter().any(|&x| x > 0.0) {
                prop_assert!(!cap.contains(&v.map(|x| 1.01 * x), GEOM_TOL));
            }
        }
    }

    #[test]
    fn prediction_agrees_with_membership(
        (cfg, asg) in any_mode().prop_flat_map(sampled),
        r in proptest::array::uniform3(-0.2..3.0f64),
    ) {
        let inner = scheme_inner_constraints(&cfg, &asg);
        prop_assert_eq!(predicted_achievable(&cfg, &asg, &r).achievable, inner.contains(&r, 0.0));
    }

    #[test]
    fn region_documents_round_trip(
        (cfg, asg) in any_mode().prop_flat_map(sampled),
        with_vertices in any::<bool>(),
    ) {
        for poly in [lemma1_outer_bound(&cfg), scheme_inner_constraints(&cfg, &asg)] {
            let doc = region_from_json(&region_to_json(&poly, with_vertices).unwrap()).unwrap();
            prop_assert_eq!(&doc.polytope(), &poly);
            prop_assert_eq!(doc.vertices, with_vertices.then(|| poly.vertices().unwrap()));
        }
    }
}

#[test]
fn prediction_agrees_with_membership_on_dense_sample() {
    use rand::{Rng, SeedableRng};
    let cfg = figure2::config();
    let asg = figure2::assignment();
    let inner = scheme_inner_constraints(&cfg, &asg);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    for _ in 0..10_000 {
        let r = [0; 3].map(|_| rng.random_range(-0.1..1.6));
        assert_eq!(
            predicted_achievable(&cfg, &asg, &r).achievable,
            inner.contains(&r, 0.0)
        );
    }
}

#[test]
fn simulation_is_independent_of_thread_count() {
    let cfg = figure2::config();
    let asg = figure2::assignment();
    let params = SimParams {
        n: 8,
        rates: [0.5; 3],
        trials: 300,
        master_seed: 11,
    };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| estimate_error_rate(&cfg, &asg, &params).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
}

#[test]
fn block_errors_fall_with_blocklength_below_capacity() {
    let cfg = figure2::config();
    let asg = figure2::assignment();
    let rate = |n| {
        let params = SimParams {
            n,
            rates: [0.45; 3],
            trials: 600,
            master_seed: 5,
        };
        estimate_error_rate(&cfg, &asg, &params)
            .unwrap()
            .block_error_rate
    };
    let (short, long) = (rate(4), rate(12));
    assert!(long < short, "n=4 {short}, n=12 {long}");
}
