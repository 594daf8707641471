use osinfo::order_stats::{joint_pmf, joint_pmf_counts, marginal_pmf};
use osinfo::report::format_sig9;
use osinfo::{DiscreteDist, IndexSet, LEstimator, SampleModel};
use proptest::prelude::*;

fn weights(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, len).prop_filter("nonzero total", |w| w.iter().sum::<f64>() > 1e-3)
}

fn discrete() -> impl Strategy<Value = DiscreteDist> {
    (1usize..=4).prop_flat_map(|m| {
        prop::collection::vec(0.05f64..1.0, m).prop_map(move |w| {
            let total: f64 = w.iter().sum();
            let support = (0..m).map(|j| 10.0 * j as f64).collect();
            DiscreteDist::new(support, w.iter().map(|x| x / total).collect()).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn apply_ignores_window_order(w in weights(9), mut xs in prop::collection::vec(0.0f64..255.0, 9), seed in any::<u64>()) {
        let f = LEstimator::from_weights(w).unwrap();
        let a = f.apply(&xs).unwrap();
        let k = (seed % 9) as usize;
        xs.rotate_left(k);
        xs.swap(0, 8);
        prop_assert_eq!(a, f.apply(&xs).unwrap());
    }

    #[test]
    fn constant_window_is_a_fixed_point(w in weights(25), c in 0.0f64..255.0) {
        let f = LEstimator::from_weights(w).unwrap();
        prop_assert_eq!(f.apply(&[c; 25]).unwrap(), c);
    }

    #[test]
    fn output_stays_within_window_range(w in weights(9), xs in prop::collection::vec(-50.0f64..50.0, 9)) {
        let f = LEstimator::from_weights(w).unwrap();
        let y = f.apply(&xs).unwrap();
        let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(y >= lo && y <= hi);
    }

    #[test]
    fn marginals_are_distributions(dist in discrete(), n in 1usize..20, pick in any::<usize>()) {
        let model = SampleModel::new(n, dist).unwrap();
        let i = pick % n + 1;
        let total: f64 = marginal_pmf(&model, i).unwrap().probs().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn joint_pmf_paths_agree(dist in discrete(), n in 1usize..10, raw in prop::collection::vec(any::<usize>(), 1..4)) {
        let model = SampleModel::new(n, dist.clone()).unwrap();
        let mut idx: Vec<usize> = raw.iter().map(|r| r % n + 1).collect();
        idx.sort_unstable();
        idx.dedup();
        let values: Vec<f64> = raw.iter().take(idx.len()).map(|r| dist.support()[r % dist.len()]).collect();
        let s = IndexSet::new(idx).unwrap();
        let a = joint_pmf(&model, &s, &values).unwrap();
        let b = joint_pmf_counts(&model, &s, &values).unwrap();
        prop_assert!((a - b).abs() < 1e-10, "{} vs {}", a, b);
    }

    #[test]
    fn sig9_round_trips(x in prop::num::f64::NORMAL) {
        let back: f64 = format_sig9(x).parse().unwrap();
        prop_assert!((back - x).abs() <= 1e-8 * x.abs());
    }
}
