mod common;

use common::small_instance;
use contagion_core::balance::{apply_policy, assign_powerlaw, assign_uniform, SheetScheme};
use contagion_core::cascade::{run_cascade, run_cascade_from_set};
use contagion_core::netgen::{degree_assortativity, gen_erdos_renyi, gen_scale_free, rewire_assortativity, DirectedNetwork, ShiftedPowerLaw};
use proptest::prelude::*;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn assert_simple(net: &DirectedNetwork) {
    let edges: Vec<_> = net.edges().collect();
    DirectedNetwork::from_edges(net.node_count(), &edges).expect("simple graph");
    let profile = net.degree_profile();
    assert_eq!(profile.in_degree.iter().sum::<usize>(), net.edge_count());
    assert_eq!(profile.out_degree.iter().sum::<usize>(), net.edge_count());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rewiring_preserves_degrees_and_simplicity(
        n in 3usize..60,
        zf in 0.0f64..1.0,
        j in prop_oneof![Just(-1.0), Just(0.0), Just(1.0), -3.0f64..3.0],
        sweeps in 1usize..6,
        seed in any::<u64>(),
    ) {
        let z = zf * ((n - 1) as f64).min(6.0);
        let net = gen_erdos_renyi(n, z, &mut rng(seed)).unwrap();
        prop_assume!(net.edge_count() >= 2);
        let (out, report) = rewire_assortativity(&net, j, sweeps, &mut rng(seed ^ 1)).unwrap();
        prop_assert_eq!(out.degree_profile(), net.degree_profile());
        prop_assert_eq!(report.proposals, report.accepted + report.rejected_invalid + report.rejected_metropolis);
        assert_simple(&out);
    }

    #[test]
    fn generators_emit_simple_graphs(n in 4usize..400, zf in 0.05f64..0.8, seed in any::<u64>()) {
        let er = gen_erdos_renyi(n, zf * 5.0_f64.min((n - 1) as f64), &mut rng(seed)).unwrap();
        assert_simple(&er);
        // Stay below the largest mean the degree cutoff allows.
        let sup = ShiftedPowerLaw::cutoff_for(n) as f64 / 2.0;
        let sf = gen_scale_free(n, 3.0, zf * sup, &mut rng(seed)).unwrap();
        assert_simple(&sf);
    }

    #[test]
    fn generation_is_reproducible(n in 2usize..300, zf in 0.0f64..1.0, seed in any::<u64>()) {
        let z = zf * 4.0_f64.min((n - 1) as f64);
        prop_assert_eq!(gen_erdos_renyi(n, z, &mut rng(seed)).unwrap(), gen_erdos_renyi(n, z, &mut rng(seed)).unwrap());
        let sup = ShiftedPowerLaw::cutoff_for(n) as f64 / 2.0;
        if zf > 0.01 && n >= 4 {
            let a = gen_scale_free(n, 3.0, zf * 0.9 * sup, &mut rng(seed)).unwrap();
            let b = gen_scale_free(n, 3.0, zf * 0.9 * sup, &mut rng(seed)).unwrap();
            prop_assert_eq!(&a, &b);
            if a.edge_count() >= 2 {
                let (x, _) = rewire_assortativity(&a, -1.0, 3, &mut rng(seed)).unwrap();
                let (y, _) = rewire_assortativity(&a, -1.0, 3, &mut rng(seed)).unwrap();
                prop_assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn larger_seed_sets_never_shrink_defaults(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (net, sheets, first) = small_instance(&mut r);
        let n = net.node_count();
        let extra = r.gen_range(0..n);
        let small = run_cascade_from_set(&net, &sheets, &[first]).unwrap();
        let large = run_cascade_from_set(&net, &sheets, &[first, extra]).unwrap();
        for b in 0..n {
            prop_assert!(!small.defaulted[b] || large.defaulted[b]);
        }
    }

    #[test]
    fn more_capital_never_enlarges_defaults(seed in any::<u64>(), buffer in 0.041f64..0.2) {
        let mut r = rng(seed);
        let (net, sheets, first) = small_instance(&mut r);
        let n = net.node_count();
        let k = r.gen_range(0..=n);
        let targets: Vec<usize> = sample(&mut r, n, k).into_vec();
        let safer = apply_policy(&sheets, &targets, buffer).unwrap();
        prop_assert_eq!(safer.exposures(), sheets.exposures());
        let before = run_cascade(&net, &sheets, first).unwrap();
        let after = run_cascade(&net, &safer, first).unwrap();
        for b in 0..n {
            prop_assert!(!after.defaulted[b] || before.defaulted[b]);
        }
    }

    #[test]
    fn outcomes_are_scale_invariant(seed in any::<u64>(), factor in prop_oneof![Just(2.0), Just(0.5), 1e-3f64..1e3]) {
        let mut r = rng(seed);
        let (net, sheets, first) = small_instance(&mut r);
        let scaled = sheets.scaled(factor);
        prop_assert_eq!(run_cascade(&net, &sheets, first).unwrap(), run_cascade(&net, &scaled, first).unwrap());
    }

    #[test]
    fn exposures_conserve_interbank_assets(n in 2usize..200, z in 0.0f64..6.0, alpha in 2.05f64..5.0, seed in any::<u64>()) {
        let net = gen_erdos_renyi(n, z.min((n - 1) as f64), &mut rng(seed)).unwrap();
        let uniform = assign_uniform(&net, &SheetScheme::uniform()).unwrap();
        let sized = assign_powerlaw(&net, &SheetScheme::power_law(alpha), &mut rng(seed)).unwrap();
        for sheets in [&uniform, &sized] {
            for c in 0..n {
                let received: f64 = net.in_edge_ids(c).iter().map(|&id| sheets.exposure(id as usize)).sum();
                let aib = sheets.interbank_assets()[c];
                prop_assert!((received - aib).abs() <= 1e-9 * aib.max(1.0));
                if net.in_degree(c) == 0 {
                    prop_assert_eq!(aib, 0.0);
                }
                prop_assert!(sheets.capital()[c] > 0.0 && sheets.total_assets()[c] > 0.0);
                let ta = sheets.total_assets()[c];
                prop_assert!((sheets.interbank_assets()[c] + sheets.illiquid_assets()[c] - ta).abs() <= 1e-12 * ta);
            }
            prop_assert!(sheets.exposures().iter().all(|&w| w > 0.0));
            let assets: f64 = sheets.interbank_assets().iter().sum();
            let liabilities: f64 = sheets.interbank_liabilities(&net).iter().sum();
            prop_assert!((assets - liabilities).abs() <= 1e-9 * assets.max(1.0));
        }
    }

    #[test]
    fn assortativity_is_a_correlation(n in 3usize..200, z in 0.5f64..5.0, seed in any::<u64>()) {
        let net = gen_erdos_renyi(n, z.min((n - 1) as f64), &mut rng(seed)).unwrap();
        if let Ok(r) = degree_assortativity(&net) {
            prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&r));
        }
    }

    #[test]
    fn constant_sizes_reduce_to_uniform_sheets(n in 2usize..100, z in 0.0f64..5.0, seed in any::<u64>()) {
        use contagion_core::balance::BalanceSheetSet;
        let net = gen_erdos_renyi(n, z.min((n - 1) as f64), &mut rng(seed)).unwrap();
        let uniform = assign_uniform(&net, &SheetScheme::uniform()).unwrap();
        let constant = BalanceSheetSet::from_total_assets(&net, &SheetScheme::power_law(2.5), vec![1.0; n]).unwrap();
        for (a, b) in uniform.exposures().iter().zip(constant.exposures()) {
            prop_assert!((a - b).abs() < 1e-15);
        }
        prop_assert_eq!(uniform.capital(), constant.capital());
    }
}
