mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{brute_force_cover, random_instance};
use contribsim::solver::{solve_exact, solve_fptas, CoverInstance};

#[test]
fn exact_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let inst = random_instance(&mut rng, 12);
        let exact = solve_exact(&inst).unwrap();
        match brute_force_cover(&inst.values, &inst.costs, inst.threshold) {
            None => {
                assert!(!exact.feasible);
                assert!(exact.selected.is_empty());
            }
            Some((cost, sel)) => {
                assert!(exact.feasible);
                assert!((exact.total_cost - cost).abs() < 1e-9, "{inst:?}");
                assert_eq!(exact.selected, sel, "{inst:?}");
            }
        }
    }
}

#[test]
fn fptas_within_bound_of_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for eps in [0.05, 0.1, 0.5, 1.0] {
        for _ in 0..200 {
            let inst = random_instance(&mut rng, 15);
            let exact = solve_exact(&inst).unwrap();
            let approx = solve_fptas(&inst, eps).unwrap();
            assert_eq!(approx.feasible, exact.feasible);
            if exact.feasible {
                assert!(approx.total_value >= inst.threshold);
                assert!(approx.total_cost <= (1.0 + eps) * exact.total_cost + 1e-9);
            }
        }
    }
}

#[test]
fn symmetric_instances_are_exact() {
    for k in 1..=6 {
        let inst = CoverInstance::new(vec![1.5; 8], vec![0.7; 8], 1.5 * k as f64).unwrap();
        let s = solve_fptas(&inst, 0.1).unwrap();
        assert_eq!(s.selected.len(), k);
        assert!((s.total_cost - 0.7 * k as f64).abs() < 1e-12);
    }
}

fn instance() -> impl Strategy<Value = CoverInstance> {
    (1usize..=10)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(0.0f64..4.0, n),
                prop::collection::vec(0.0f64..4.0, n),
                0.01f64..1.2,
            )
        })
        .prop_map(|(values, costs, frac)| {
            let total: f64 = values.iter().sum();
            CoverInstance::new(values, costs, frac * total.max(0.01)).unwrap()
        })
}

proptest! {
    #[test]
    fn lowering_threshold_never_raises_optimum(inst in instance(), shrink in 0.0f64..1.0) {
        let lower = CoverInstance { threshold: inst.threshold * shrink, ..inst.clone() };
        let hi = solve_exact(&inst).unwrap();
        let lo = solve_exact(&lower).unwrap();
        if hi.feasible {
            prop_assert!(lo.feasible);
            prop_assert!(lo.total_cost <= hi.total_cost + 1e-12);
        }
    }

    #[test]
    fn solutions_are_consistent(inst in instance(), eps in 0.01f64..1.0) {
        for sol in [solve_exact(&inst).unwrap(), solve_fptas(&inst, eps).unwrap()] {
            let cost: f64 = sol.selected.iter().map(|&i| inst.costs[i]).sum();
            let value: f64 = sol.selected.iter().map(|&i| inst.values[i]).sum();
            prop_assert!((cost - sol.total_cost).abs() < 1e-9);
            prop_assert!((value - sol.total_value).abs() < 1e-9);
            prop_assert_eq!(sol.feasible, inst.is_feasible());
            if sol.feasible {
                prop_assert!(sol.total_value >= inst.threshold);
            }
            let mut sorted = sol.selected.clone();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), sol.selected.len());
        }
    }

    #[test]
    fn fptas_is_deterministic(inst in instance()) {
        prop_assert_eq!(solve_fptas(&inst, 0.1).unwrap(), solve_fptas(&inst, 0.1).unwrap());
    }
}
