//! Tabular Q-learning over a discretised (value, cost) context.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Feedback, Observation};
use crate::error::{contract, Result};
use crate::game::Action;

/// Closed interval used to bucket one observation coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Support {
    pub low: f64,
    pub high: f64,
}

impl Support {
    pub fn new(low: f64, high: f64) -> Result<Self> {
        if !(low.is_finite() && high.is_finite() && low <= high) {
            return Err(contract(format!("invalid support [{low}, {high}]")));
        }
        Ok(Self { low, high })
    }

    /// Equal-width bucket of `x`; values outside the support land in the
    /// edge buckets.
    pub fn bucket(&self, x: f64, buckets: usize) -> usize {
        let width = self.high - self.low;
        if width <= 0.0 || buckets <= 1 {
            return 0;
        }
        let pos = ((x - self.low) / width * buckets as f64).floor();
        if pos.is_nan() || pos < 0.0 {
            0
        } else {
            (pos as usize).min(buckets - 1)
        }
    }

    pub fn midpoint(&self, bucket: usize, buckets: usize) -> f64 {
        let width = (self.high - self.low) / buckets as f64;
        self.low + width * (bucket as f64 + 0.5)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QParams {
    pub learning_rate: f64,
    pub discount: f64,
    /// Exploration rate at the first step.
    pub explore_start: f64,
    /// Exploration floor, reached after `explore_decay_fraction` of the run.
    pub explore_end: f64,
    pub explore_decay_fraction: f64,
    pub value_buckets: usize,
    pub cost_buckets: usize,
}

impl Default for QParams {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            discount: 0.9,
            explore_start: 0.1,
            explore_end: 0.01,
            explore_decay_fraction: 0.2,
            value_buckets: 4,
            cost_buckets: 4,
        }
    }
}

impl QParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate <= 1.0) {
            return Err(contract("learning rate must lie in (0, 1]"));
        }
        if !(self.discount >= 0.0 && self.discount < 1.0) {
            return Err(contract("discount must lie in [0, 1)"));
        }
        for e in [self.explore_start, self.explore_end] {
            if !(0.0..=1.0).contains(&e) {
                return Err(contract("exploration rates must lie in [0, 1]"));
            }
        }
        if !(0.0..=1.0).contains(&self.explore_decay_fraction) {
            return Err(contract("exploration decay fraction must lie in [0, 1]"));
        }
        if self.value_buckets == 0 || self.cost_buckets == 0 {
            return Err(contract("bucket counts must be at least 1"));
        }
        Ok(())
    }

    /// Exploration rate at `step` of `total_steps`: exponential decay from
    /// `explore_start` to `explore_end`, then flat.
    pub fn exploration_at(&self, step: usize, total_steps: usize) -> f64 {
        let horizon = self.explore_decay_fraction * total_steps as f64;
        if horizon <= 0.0 || step as f64 >= horizon {
            return self.explore_end;
        }
        if self.explore_start <= 0.0 || self.explore_end <= 0.0 {
            // geometric interpolation needs positive endpoints
            let frac = step as f64 / horizon;
            return self.explore_start + (self.explore_end - self.explore_start) * frac;
        }
        let frac = step as f64 / horizon;
        self.explore_start * (self.explore_end / self.explore_start).powf(frac)
    }
}

fn slot(action: Action) -> usize {
    match action {
        Action::Contribute => 0,
        Action::Defect => 1,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QState {
    /// `[Q(s, Contribute), Q(s, Defect)]` per bucket, row-major over
    /// (value bucket, cost bucket).
    pub table: Vec<[f64; 2]>,
    pub params: QParams,
    pub value_support: Support,
    pub cost_support: Support,
    /// Current exploration probability.
    pub explore: f64,
}

impl QState {
    pub fn new(params: QParams, value_support: Support, cost_support: Support) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            table: vec![[0.0; 2]; params.value_buckets * params.cost_buckets],
            explore: params.explore_start,
            params,
            value_support,
            cost_support,
        })
    }

    pub fn bucket(&self, obs: &Observation) -> usize {
        let v = self.value_support.bucket(obs.own_value, self.params.value_buckets);
        let c = self.cost_support.bucket(obs.own_cost, self.params.cost_buckets);
        v * self.params.cost_buckets + c
    }

    pub fn q(&self, bucket: usize, action: Action) -> f64 {
        self.table[bucket][slot(action)]
    }

    pub fn set_q(&mut self, bucket: usize, action: Action, value: f64) {
        self.table[bucket][slot(action)] = value;
    }

    /// Argmax action of a bucket; ties go to Contribute.
    pub fn greedy(&self, bucket: usize) -> Action {
        let [c, d] = self.table[bucket];
        if d > c {
            Action::Defect
        } else {
            Action::Contribute
        }
    }

    fn max_q(&self, bucket: usize) -> f64 {
        let [c, d] = self.table[bucket];
        c.max(d)
    }

    pub fn decide<R: Rng + ?Sized>(&self, obs: &Observation, rng: &mut R) -> Action {
        let bucket = self.bucket(obs);
        if self.explore > 0.0 && rng.random_bool(self.explore.min(1.0)) {
            if rng.random_bool(0.5) {
                Action::Contribute
            } else {
                Action::Defect
            }
        } else {
            self.greedy(bucket)
        }
    }

    /// Temporal-difference update of the bucket `obs` fell into, bootstrapped
    /// from the bucket of `next`.
    pub fn update(&mut self, obs: &Observation, fb: &Feedback, next: &Observation) {
        let s = self.bucket(obs);
        let s_next = self.bucket(next);
        self.update_bucket(s, fb.own_action, fb.own_utility, s_next);
    }

    pub fn update_bucket(&mut self, bucket: usize, action: Action, reward: f64, next_bucket: usize) {
        let target = reward + self.params.discount * self.max_q(next_bucket);
        let q = &mut self.table[bucket][slot(action)];
        *q += self.params.learning_rate * (target - *q);
    }

    /// Train every bucket on `rounds` synthetic one-step episodes in which
    /// contributing succeeds (payoff `reward` minus the bucket's midpoint
    /// cost) and defecting fails (payoff `-penalty`). With a threshold
    /// public goods payoff structure this leaves Contribute strictly
    /// preferred everywhere, with entries bounded by `reward`.
    pub fn pretrain(&mut self, rounds: usize, reward: f64, penalty: f64) {
        let alpha = self.params.learning_rate;
        for v in 0..self.params.value_buckets {
            for c in 0..self.params.cost_buckets {
                let bucket = v * self.params.cost_buckets + c;
                let cost = self
                    .cost_support
                    .midpoint(c, self.params.cost_buckets)
                    .max(0.0);
                for _ in 0..rounds {
                    let entry = &mut self.table[bucket];
                    entry[0] += alpha * (reward - cost - entry[0]);
                    entry[1] += alpha * (-penalty - entry[1]);
                }
            }
        }
    }
}
