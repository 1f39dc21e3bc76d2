//! Property-based checks of data handling, forest bookkeeping, scoring and
//! posterior summaries.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{is_ancestor_or_self, random_graph};
use sbfc::dataio::synthetic::random_dataset;
use sbfc::dataio::{
    apply_cutpoints, discretize_binary, discretize_mdlp, drop_missing, fit_coding, make_folds, Discretization, RawTable,
};
use sbfc::graph::Group;
use sbfc::inference::{rank_features, Predictor};
use sbfc::sampler::SampleTrace;
use sbfc::score::{graph_log_score_uncached, Hyperparams};

fn raw_table(cells: Vec<Vec<String>>) -> RawTable {
    let width = cells[0].len();
    let header = (0..width).map(|c| format!("c{c}")).collect();
    RawTable::new(header, cells, width - 1).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn folds_are_near_equal_and_seed_determined(n in 2usize..300, k in 2usize..10, seed in any::<u64>()) {
        prop_assume!(n >= k);
        let plan = make_folds(n, k, seed).unwrap();
        let sizes = plan.sizes();
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        prop_assert!(plan.assignment.iter().all(|&f| f < k));
        prop_assert_eq!(plan, make_folds(n, k, seed).unwrap());
    }

    #[test]
    fn drop_missing_is_idempotent(cells in prop::collection::vec(prop::collection::vec("[01?]", 3), 1..30)) {
        let table = raw_table(cells);
        if let Ok(once) = drop_missing(&table, &["?"]) {
            prop_assert_eq!(drop_missing(&once, &["?"]).unwrap(), once.clone());
            prop_assert!(once.rows.iter().all(|r| !r.iter().any(|c| c == "?")));
        }
    }

    #[test]
    fn binary_binning_has_at_most_one_cut(values in prop::collection::vec(-1e6f64..1e6, 1..60)) {
        prop_assert!(discretize_binary(&values).len() <= 1);
    }

    #[test]
    fn mdlp_cuts_separable_data_once_at_the_boundary(
        low in prop::collection::vec(0.0f64..10.0, 2..20),
        high in prop::collection::vec(20.0f64..30.0, 2..20),
    ) {
        let values: Vec<f64> = low.iter().chain(&high).copied().collect();
        let class: Vec<u32> = low.iter().map(|_| 0).chain(high.iter().map(|_| 1)).collect();
        let cuts = discretize_mdlp(&values, &class);
        let max_low = low.iter().copied().fold(f64::MIN, f64::max);
        let min_high = high.iter().copied().fold(f64::MAX, f64::min);
        prop_assert_eq!(cuts, vec![(max_low + min_high) / 2.0]);
    }

    #[test]
    fn mdlp_cuts_are_sorted(values in prop::collection::vec(0u8..20, 4..80), seed in any::<u64>()) {
        let values: Vec<f64> = values.into_iter().map(f64::from).collect();
        let class: Vec<u32> = values.iter().enumerate().map(|(i, v)| ((*v as u64).wrapping_add(seed).wrapping_add((i % 3) as u64) % 2) as u32).collect();
        let cuts = discretize_mdlp(&values, &class);
        prop_assert!(cuts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn training_arities_equal_distinct_codes(
        rows in prop::collection::vec((0u8..6, "[abc]", 0.0f64..5.0, 0u8..2), 4..40),
        binary in any::<bool>(),
    ) {
        prop_assume!(rows.iter().any(|r| r.3 == 0) && rows.iter().any(|r| r.3 == 1));
        let cells: Vec<Vec<String>> = rows
            .iter()
            .map(|(a, b, c, y)| vec![a.to_string(), b.clone(), format!("{c:.3}"), y.to_string()])
            .collect();
        let table = raw_table(cells);
        let mode = if binary { Discretization::Binary } else { Discretization::Mdlp };
        let coding = fit_coding(&table, mode).unwrap();
        let ds = apply_cutpoints(&table, &coding).unwrap();
        for j in 0..ds.d() {
            let mut seen: Vec<u32> = ds.column(j).to_vec();
            seen.sort_unstable();
            seen.dedup();
            prop_assert_eq!(seen.len(), ds.arity(j));
        }
    }

    #[test]
    fn mutated_forests_stay_valid(seed in any::<u64>(), d in 1usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(d, &mut rng);
        prop_assert!(g.validate().is_ok());
        for j in 0..d {
            // parent pointers reach a root without revisiting j
            prop_assert!(g.parent(j).is_none_or(|p| !is_ancestor_or_self(g.parents(), j, p)));
            // every tree is single-group
            if let Some(p) = g.parent(j) {
                prop_assert_eq!(g.group(p), g.group(j));
            }
        }
    }

    #[test]
    fn pivoting_preserves_the_score(seed in any::<u64>(), d in 2usize..8) {
        let data = random_dataset(60, d, 3, 2, seed);
        let hp = Hyperparams::for_data(&data, 5.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut g = random_graph(d, &mut rng);
        let before = graph_log_score_uncached(&g, &data, &hp);
        g.pivot_tree((seed % d as u64) as usize);
        let after = graph_log_score_uncached(&g, &data, &hp);
        prop_assert!((before - after).abs() <= 1e-9 * before.abs());
    }

    #[test]
    fn relevance_is_mean_signal_indicator(seed in any::<u64>(), k in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = 6;
        let graphs: Vec<_> = (0..k).map(|_| random_graph(d, &mut rng)).collect();
        let names = (1..=d).map(|j| format!("X{j}")).collect();
        let trace = SampleTrace::from_graphs(graphs.clone(), names);
        for (j, rel) in rank_features(&trace).unwrap() {
            let signal = graphs.iter().filter(|g| g.group(j) == Group::Signal).count();
            prop_assert_eq!(rel, signal as f64 / k as f64);
        }
    }

    #[test]
    fn averaged_probabilities_are_normalized(seed in any::<u64>(), k in 1usize..5, v in 2usize..4) {
        let data = random_dataset(50, 5, 3, v, seed);
        let hp = Hyperparams::for_data(&data, 5.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let graphs: Vec<_> = (0..k).map(|_| random_graph(5, &mut rng)).collect();
        let predictor = Predictor::from_graphs(&graphs, &data, &hp).unwrap();
        // include one value outside the training range
        for x in [data.row(0), vec![3, 0, 1, 2, 0]] {
            let p = predictor.predict(&x);
            prop_assert!((p.class_probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(p.class_probs.iter().all(|&q| q > 0.0));
        }
    }
}
