//! Minimum-cost covering knapsack.
//!
//! Pick a subset of items whose summed value reaches `threshold` at the least
//! total cost. [`solve_exact`] is an exhaustive oracle for small instances;
//! [`solve_fptas`] is a `(1 + epsilon)`-approximation that never returns a
//! subset below the threshold: the dynamic program tracks exact values per
//! rounded cost level, so only costs are approximated and coverage is
//! approached from above.

use std::cmp::Ordering;

use crate::error::{contract, Error, Result};

/// Largest instance [`solve_exact`] accepts.
pub const EXACT_LIMIT: usize = 25;

#[derive(Clone, Debug, PartialEq)]
pub struct CoverInstance {
    pub values: Vec<f64>,
    pub costs: Vec<f64>,
    pub threshold: f64,
}

impl CoverInstance {
    pub fn new(values: Vec<f64>, costs: Vec<f64>, threshold: f64) -> Result<Self> {
        let inst = Self {
            values,
            costs,
            threshold,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() || self.values.len() != self.costs.len() {
            return Err(contract(format!(
                "cover instance needs equal, non-empty value and cost lists ({} vs {})",
                self.values.len(),
                self.costs.len()
            )));
        }
        let bad = |xs: &[f64]| xs.iter().any(|x| !(*x >= 0.0) || !x.is_finite());
        if bad(&self.values) || bad(&self.costs) {
            return Err(contract("item values and costs must be finite and non-negative"));
        }
        if !(self.threshold >= 0.0) || !self.threshold.is_finite() {
            return Err(contract(format!("threshold must be non-negative, got {}", self.threshold)));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Summed value of every item.
    pub fn total_value(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn is_feasible(&self) -> bool {
        self.total_value() >= self.threshold
    }

    /// Summed value of `selected` in ascending index order. All coverage
    /// checks go through this so that every path agrees on rounding.
    fn value_of(&self, selected: &[usize]) -> f64 {
        selected.iter().map(|&i| self.values[i]).sum()
    }

    fn cost_of(&self, selected: &[usize]) -> f64 {
        selected.iter().map(|&i| self.costs[i]).sum()
    }

    fn solution(&self, mut selected: Vec<usize>) -> CoverSolution {
        selected.sort_unstable();
        selected.dedup();
        let total_value = self.value_of(&selected);
        CoverSolution {
            total_cost: self.cost_of(&selected),
            feasible: total_value >= self.threshold,
            total_value,
            selected,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverSolution {
    /// Ascending item indices.
    pub selected: Vec<usize>,
    pub total_cost: f64,
    pub total_value: f64,
    pub feasible: bool,
}

impl CoverSolution {
    fn infeasible() -> Self {
        Self {
            selected: Vec::new(),
            total_cost: 0.0,
            total_value: 0.0,
            feasible: false,
        }
    }
}

/// Exact minimum-cost cover by depth-first enumeration with pruning.
///
/// Ties on cost go to the smaller subset, then to the lexicographically
/// smallest index list.
pub fn solve_exact(instance: &CoverInstance) -> Result<CoverSolution> {
    instance.validate()?;
    let n = instance.len();
    if n > EXACT_LIMIT {
        return Err(Error::Capacity {
            size: n,
            limit: EXACT_LIMIT,
        });
    }
    if !instance.is_feasible() {
        return Ok(CoverSolution::infeasible());
    }

    // suffix[i] = value still obtainable from items i..n
    let mut suffix = vec![0.0; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + instance.values[i];
    }

    struct Search<'a> {
        inst: &'a CoverInstance,
        suffix: Vec<f64>,
        stack: Vec<usize>,
        best: Option<(f64, Vec<usize>)>,
    }

    impl Search<'_> {
        fn better(&self, cost: f64, cand: &[usize]) -> bool {
            match &self.best {
                None => true,
                Some((best_cost, best)) => match cost.partial_cmp(best_cost) {
                    Some(Ordering::Less) => true,
                    Some(Ordering::Greater) | None => false,
                    Some(Ordering::Equal) => {
                        (cand.len(), cand) < (best.len(), best.as_slice())
                    }
                },
            }
        }

        fn visit(&mut self, next: usize, cost: f64) {
            if let Some((best_cost, _)) = &self.best {
                if cost > *best_cost {
                    return;
                }
            }
            // Covering is checked on the index-order sum, not a running total.
            if self.inst.value_of(&self.stack) >= self.inst.threshold {
                if self.better(cost, &self.stack) {
                    self.best = Some((cost, self.stack.clone()));
                }
                // Adding items with zero cost could only tie with a larger set.
                return;
            }
            let n = self.inst.len();
            if next == n {
                return;
            }
            let have = self.inst.value_of(&self.stack);
            // Slack for the rounding difference between a running sum and
            // the index-order sum of the final subset.
            if have + self.suffix[next] < self.inst.threshold * (1.0 - 1e-12) - 1e-12 {
                return;
            }
            self.stack.push(next);
            self.visit(next + 1, cost + self.inst.costs[next]);
            self.stack.pop();
            self.visit(next + 1, cost);
        }
    }

    let mut search = Search {
        inst: instance,
        suffix,
        stack: Vec::with_capacity(n),
        best: None,
    };
    search.visit(0, 0.0);
    // The full item set always covers a feasible instance, so `best` is set.
    let selected = search.best.map_or_else(|| (0..n).collect(), |(_, sel)| sel);
    Ok(instance.solution(selected))
}

/// Greedy cover by cost/value ratio restricted to items no dearer than some
/// cap, minimised over caps. At most twice the optimum: with the cap set to
/// the dearest item of an optimal cover, the ratio-greedy prefix costs at most
/// the fractional optimum plus one item of at most that cap.
fn greedy_upper_bound(instance: &CoverInstance, items: &[usize], need: f64) -> Option<Vec<usize>> {
    let mut by_ratio: Vec<usize> = items.to_vec();
    by_ratio.sort_by(|&a, &b| {
        let ra = instance.costs[a] / instance.values[a];
        let rb = instance.costs[b] / instance.values[b];
        ra.total_cmp(&rb).then(a.cmp(&b))
    });
    let mut caps: Vec<f64> = items.iter().map(|&i| instance.costs[i]).collect();
    caps.sort_by(f64::total_cmp);
    caps.dedup();

    let mut best: Option<(f64, Vec<usize>)> = None;
    for cap in caps {
        let mut picked = Vec::new();
        let mut got = 0.0;
        let mut cost = 0.0;
        for &i in &by_ratio {
            if instance.costs[i] > cap {
                continue;
            }
            picked.push(i);
            got += instance.values[i];
            cost += instance.costs[i];
            if got >= need {
                break;
            }
        }
        if got < need {
            continue;
        }
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, picked));
        }
    }
    best.map(|(_, picked)| picked)
}

/// `(1 + epsilon)`-approximate minimum-cost cover.
///
/// Zero-cost items with positive value are always taken. Remaining items are
/// rounded down to integral cost levels of width `epsilon * LB / m`, where
/// `LB` is half the greedy upper bound and `m` the number of priced items,
/// and a 0/1 dynamic program keeps the largest exact value reachable at each
/// level. The cheapest level whose value meets the residual requirement wins.
/// Rounding loses less than one level per selected item, so the result costs
/// at most `OPT + epsilon * LB`.
pub fn solve_fptas(instance: &CoverInstance, epsilon: f64) -> Result<CoverSolution> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(contract(format!("epsilon must lie in (0, 1], got {epsilon}")));
    }
    instance.validate()?;
    if !instance.is_feasible() {
        return Ok(CoverSolution::infeasible());
    }
    let n = instance.len();

    let free: Vec<usize> = (0..n)
        .filter(|&i| instance.costs[i] == 0.0 && instance.values[i] > 0.0)
        .collect();
    if instance.value_of(&free) >= instance.threshold {
        return Ok(instance.solution(free));
    }
    let need = instance.threshold - instance.value_of(&free);
    let priced: Vec<usize> = (0..n)
        .filter(|&i| instance.costs[i] > 0.0 && instance.values[i] > 0.0)
        .collect();

    let Some(greedy) = greedy_upper_bound(instance, &priced, need) else {
        // Rounding pushed the residual just out of reach; all items cover.
        return Ok(instance.solution((0..n).collect()));
    };
    let upper = instance.cost_of(&greedy);
    let lower = upper / 2.0;
    let items: Vec<usize> = priced
        .into_iter()
        .filter(|&i| instance.costs[i] <= upper)
        .collect();
    let width = epsilon * lower / items.len() as f64;
    let max_level = (upper / width).floor() as usize;
    let levels: Vec<usize> = items
        .iter()
        .map(|&i| (instance.costs[i] / width).floor() as usize)
        .collect();

    // best[l]: largest value reachable with rounded cost exactly l
    let mut best = vec![f64::NEG_INFINITY; max_level + 1];
    best[0] = 0.0;
    let mut take = vec![false; items.len() * (max_level + 1)];
    for (k, &i) in items.iter().enumerate() {
        let w = levels[k];
        let v = instance.values[i];
        let row = &mut take[k * (max_level + 1)..(k + 1) * (max_level + 1)];
        for l in (w..=max_level).rev() {
            let prev = best[l - w];
            if prev > f64::NEG_INFINITY && prev + v > best[l] {
                best[l] = prev + v;
                row[l] = true;
            }
        }
    }

    let mut candidates = vec![greedy];
    if let Some(level) = best.iter().position(|&v| v >= need) {
        let mut picked = Vec::new();
        let mut l = level;
        for k in (0..items.len()).rev() {
            if take[k * (max_level + 1) + l] {
                picked.push(items[k]);
                l -= levels[k];
            }
        }
        candidates.push(picked);
    }

    let chosen = candidates
        .into_iter()
        .map(|mut c| {
            c.extend_from_slice(&free);
            instance.solution(c)
        })
        .filter(|s| s.feasible)
        .min_by(|a, b| {
            a.total_cost
                .total_cmp(&b.total_cost)
                .then(a.selected.len().cmp(&b.selected.len()))
                .then_with(|| a.selected.cmp(&b.selected))
        });
    Ok(chosen.unwrap_or_else(|| instance.solution((0..n).collect())))
}
