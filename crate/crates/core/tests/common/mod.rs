//! Independent reference implementations shared by the integration tests.

#![allow(dead_code)]

use rand::Rng;

use contribsim::solver::CoverInstance;

/// Cheapest covering subset by enumerating all `2^n` subsets. Ties prefer
/// fewer items, then the lexicographically smaller index list.
pub fn brute_force_cover(values: &[f64], costs: &[f64], threshold: f64) -> Option<(f64, Vec<usize>)> {
    let n = values.len();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for mask in 0u32..(1 << n) {
        let sel: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let value: f64 = sel.iter().map(|&i| values[i]).sum();
        if value < threshold {
            continue;
        }
        let cost: f64 = sel.iter().map(|&i| costs[i]).sum();
        let better = match &best {
            None => true,
            Some((bc, bs)) => {
                cost < *bc - 1e-12
                    || ((cost - bc).abs() <= 1e-12
                        && (sel.len() < bs.len() || (sel.len() == bs.len() && sel < *bs)))
            }
        };
        if better {
            best = Some((cost, sel));
        }
    }
    best
}

/// Gini as half the relative mean absolute difference over all ordered pairs.
pub fn gini_mad(y: &[f64]) -> f64 {
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    if mean == 0.0 {
        return 0.0;
    }
    let mut diff = 0.0;
    for a in y {
        for b in y {
            diff += (a - b).abs();
        }
    }
    diff / (2.0 * n * n * mean)
}

/// Random covering instance with up to `max_n` items. Roughly a quarter of
/// instances are infeasible.
pub fn random_instance<R: Rng>(rng: &mut R, max_n: usize) -> CoverInstance {
    let n = rng.random_range(1..=max_n);
    let values: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..3.0)).collect();
    let costs: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..5.0)).collect();
    let total: f64 = values.iter().sum();
    let threshold = rng.random_range(0.05..1.3) * total.max(0.1);
    CoverInstance::new(values, costs, threshold).unwrap()
}
