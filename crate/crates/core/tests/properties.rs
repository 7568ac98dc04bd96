//! Property tests over the model layer and the series weights.

use hetsim_core::model::{
    arrival_selection_probabilities, jump_distribution, IdleEventPolicy, ModelConfig,
    SelectionKind, SelectionProfile, SystemState,
};
use hetsim_core::reward::{discount_weight, discount_weight_tail};
use proptest::prelude::*;

fn arb_config() -> impl Strategy<Value = ModelConfig> {
    (1usize..=6)
        .prop_flat_map(|m| {
            (
                Just(m),
                0.1f64..5.0,
                prop::collection::vec(0.2f64..4.0, m),
                prop::collection::vec(0.05f64..1.0, m),
                1usize..=m,
                prop::bool::ANY,
                (0.0f64..1.0, 0.0f64..1.0),
            )
        })
        .prop_map(|(m, lambda, mu, g, d, tandem, (w1, w2))| {
            let selection = if tandem {
                SelectionKind::Tandem
            } else {
                // random point on the weight simplex
                let (lo, hi) = if w1 <= w2 { (w1, w2) } else { (w2, w1) };
                SelectionKind::Weighted {
                    queue_weight: lo,
                    service_weight: hi - lo,
                    preference_weight: 1.0 - hi,
                }
            };
            ModelConfig {
                server_count: m,
                arrival_rate: lambda,
                service_rates: mu,
                preference: g,
                choice_count: d,
                selection,
            }
        })
}

fn arb_state(m: usize) -> impl Strategy<Value = SystemState> {
    prop::collection::vec(0u32..6, m).prop_map(SystemState::from)
}

proptest! {
    #[test]
    fn utilities_are_normalized((cfg, queues) in arb_config().prop_flat_map(|cfg| {
        let m = cfg.server_count;
        (Just(cfg), arb_state(m))
    })) {
        let profile = SelectionProfile::compute(&cfg, &queues).unwrap();
        let total: f64 = profile.utilities.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        for &u in &profile.utilities {
            prop_assert!((0.0..=1.0).contains(&u));
        }
        // the two permutations are mutually inverse and the utilities ascend
        for (rank, &server) in profile.server_at_rank.iter().enumerate() {
            prop_assert_eq!(profile.rank_of_server[server], rank);
            if rank > 0 {
                let prev = profile.utilities[profile.server_at_rank[rank - 1]];
                prop_assert!(prev <= profile.utilities[server] + 1e-15);
            }
        }
    }

    #[test]
    fn jump_chain_rows_are_distributions((cfg, queues) in arb_config().prop_flat_map(|cfg| {
        let m = cfg.server_count;
        (Just(cfg), arb_state(m))
    })) {
        let profile = SelectionProfile::compute(&cfg, &queues).unwrap();
        let dist = jump_distribution(&cfg, &queues, &profile, IdleEventPolicy::SelfLoop).unwrap();
        prop_assert!((dist.total_mass() - 1.0).abs() < 1e-12);
        for entry in &dist.entries {
            prop_assert!(entry.probability > 0.0);
            // successors differ from the origin by one job at one server
            let mut diff_count = 0;
            for (j, (&a, &b)) in entry.state.0.iter().zip(&queues.0).enumerate() {
                let d = i64::from(a) - i64::from(b);
                if d != 0 {
                    diff_count += 1;
                    prop_assert_eq!(d.abs(), 1, "server {}", j);
                }
            }
            prop_assert_eq!(diff_count, 1);
        }
        // idle servers are exactly the self-loop mass
        let idle: f64 = (0..cfg.server_count)
            .filter(|&j| queues.queue(j) == 0)
            .map(|j| cfg.service_rates[j] / cfg.total_event_rate())
            .sum();
        prop_assert!((dist.self_loop_probability - idle).abs() < 1e-12);
    }

    #[test]
    fn tie_averaged_selection_sums_to_one((cfg, queues) in arb_config().prop_flat_map(|cfg| {
        let m = cfg.server_count;
        (Just(cfg), arb_state(m))
    })) {
        let profile = SelectionProfile::compute(&cfg, &queues).unwrap();
        let mass = arrival_selection_probabilities(&cfg, &profile).unwrap();
        let total: f64 = mass.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(mass.iter().all(|&p| (0.0..=1.0).contains(&p)));
    }

    #[test]
    fn discount_weights_decrease_and_sum_geometrically(
        omega in 0.5f64..20.0,
        beta in 0.05f64..5.0,
        k_max in 1usize..200,
    ) {
        let mut partial = 0.0;
        let mut last = f64::INFINITY;
        for k in 0..=k_max {
            let w = discount_weight(omega, beta, k);
            prop_assert!(w > 0.0 && w < last);
            last = w;
            partial += w;
        }
        let tail = discount_weight_tail(omega, beta, k_max);
        prop_assert!((partial + tail - 1.0 / beta).abs() < 1e-9 / beta);
    }
}
