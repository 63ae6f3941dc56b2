//! Experiment orchestration: seeded runs, population sweeps, aggregation.
//!
//! A unit of work is one (strategy, population, repetition) run. Its random
//! streams derive from `run_seed(seed, population, repetition)`, so every
//! strategy faces the same rounds for a given unit and parallel and serial
//! execution produce identical output.

mod config;
mod output;

use rayon::prelude::*;

pub use config::{ExperimentConfig, DEFAULT_POPULATIONS};
pub use output::{read_results, read_rows, write_results, write_rows, Repetition, ResultRow, RESULT_HEADER};

use crate::error::Result;
use crate::game::evaluate_round;
use crate::metrics::{
    aggregate, efficiency_measure, fairness_over_time, fairness_round, privacy_measure,
    success_measure, welfare_measure, Measure,
};
use crate::rng::run_seed;
use crate::scenarios::{ScenarioData, ScenarioSource};
use crate::strategies::{PolicyContext, Population, StrategyKind};

/// Per-timestep measures of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSeries {
    /// Indexed by [`Measure::index`].
    pub measures: [Vec<f64>; 6],
    /// Running total of delivered quality.
    pub cumulative_quality: Vec<f64>,
    /// Rounds whose requirement exceeded the total available value.
    pub infeasible_rounds: usize,
    /// Whether each round met its requirement.
    pub succeeded: Vec<bool>,
}

impl RunSeries {
    pub fn series(&self, m: Measure) -> &[f64] {
        &self.measures[m.index()]
    }

    pub fn steps(&self) -> usize {
        self.cumulative_quality.len()
    }

    /// Fraction of rounds from `from` (0-based) onward that succeeded.
    pub fn success_rate_from(&self, from: usize) -> f64 {
        let tail = &self.succeeded[from.min(self.succeeded.len())..];
        if tail.is_empty() {
            return f64::NAN;
        }
        tail.iter().filter(|s| **s).count() as f64 / tail.len() as f64
    }
}

/// Mean of the last `fraction` of `values` (at least one element).
pub fn tail_mean(values: &[f64], fraction: f64) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let k = ((values.len() as f64 * fraction).ceil() as usize).clamp(1, values.len());
    values[values.len() - k..].iter().sum::<f64>() / k as f64
}

/// Execute one run of `strategy` with `population` agents.
pub fn run_simulation(
    cfg: &ExperimentConfig,
    data: &ScenarioData,
    strategy: StrategyKind,
    population: usize,
    repetition: usize,
) -> Result<RunSeries> {
    let seed = run_seed(cfg.seed, population, repetition);
    let mut source = ScenarioSource::new(
        cfg.scenario,
        &cfg.scenario_params,
        data,
        population,
        cfg.steps,
        seed,
    )?;
    let ctx = PolicyContext {
        payoffs: cfg.payoffs,
        value_support: source.value_support(),
        cost_support: source.cost_support(),
        mean_cost: source.mean_cost(),
        total_steps: cfg.steps,
    };
    let mut agents = Population::new(strategy, population, &cfg.strategy_params, &ctx, seed)?;

    let mut measures: [Vec<f64>; 6] = Default::default();
    for m in measures.iter_mut() {
        m.reserve_exact(cfg.steps);
    }
    let mut cumulative_quality = Vec::with_capacity(cfg.steps);
    let mut contributed = vec![0.0; population];
    let mut total_quality = 0.0;
    let mut infeasible_rounds = 0;
    let mut succeeded = Vec::with_capacity(cfg.steps);

    for step in 0..cfg.steps {
        let input = source.next_round(step)?;
        if !input.is_feasible() {
            infeasible_rounds += 1;
        }
        let decisions = agents.decide(&input, step)?;
        let outcome = evaluate_round(&input, &decisions, &cfg.payoffs)?;
        agents.learn(&input, &decisions, &outcome, step);

        for (acc, v) in contributed.iter_mut().zip(&outcome.contributed_values) {
            *acc += v;
        }
        total_quality += outcome.quality;
        succeeded.push(outcome.success);

        measures[Measure::Success.index()].push(success_measure(outcome.quality, input.threshold));
        measures[Measure::Efficiency.index()]
            .push(efficiency_measure(outcome.quality, input.threshold));
        measures[Measure::Welfare.index()].push(welfare_measure(&outcome.utilities));
        // A central planner learns every agent's state, contributor or not.
        let privacy = if strategy.is_centralized() {
            0.0
        } else {
            privacy_measure(&decisions)
        };
        measures[Measure::Privacy.index()].push(privacy);
        measures[Measure::Fairness.index()].push(fairness_round(&outcome));
        measures[Measure::FairnessOverTime.index()].push(fairness_over_time(&contributed)?);
        cumulative_quality.push(total_quality);
    }
    if infeasible_rounds > 0 {
        log::info!(
            "{strategy} n={population} rep={repetition}: {infeasible_rounds} of {} rounds infeasible",
            cfg.steps
        );
    }
    Ok(RunSeries {
        measures,
        cumulative_quality,
        infeasible_rounds,
        succeeded,
    })
}

/// All runs of one strategy at one population size, repetitions in order.
pub fn run_repetitions(
    cfg: &ExperimentConfig,
    data: &ScenarioData,
    strategy: StrategyKind,
    population: usize,
) -> Result<Vec<RunSeries>> {
    (0..cfg.repetitions)
        .into_par_iter()
        .map(|rep| run_simulation(cfg, data, strategy, population, rep))
        .collect()
}

/// Run every (strategy, population, repetition) unit and emit detail rows
/// followed, per population, by aggregate rows. Row order is strategy (as
/// configured), population (as configured), repetition, timestep, measure.
pub fn sweep(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let data = ScenarioData::load(cfg.scenario, &cfg.scenario_params)?;
    if cfg.repetitions < 2 {
        log::warn!("a single repetition leaves confidence intervals undefined; aggregate rows omitted");
    }
    let mut rows = Vec::new();
    for &strategy in &cfg.strategies {
        for &population in &cfg.population_sizes {
            let runs = run_repetitions(cfg, &data, strategy, population)?;
            rows.extend(rows_for(cfg, strategy, population, &runs)?);
        }
    }
    Ok(rows)
}

fn rows_for(
    cfg: &ExperimentConfig,
    strategy: StrategyKind,
    population: usize,
    runs: &[RunSeries],
) -> Result<Vec<ResultRow>> {
    let row = |repetition, timestep, measure, value, ci| ResultRow {
        scenario: cfg.scenario,
        strategy,
        population,
        repetition,
        timestep,
        measure,
        value,
        ci,
    };
    let mut rows = Vec::with_capacity((runs.len() + 1) * cfg.steps * Measure::ALL.len());
    for (rep, run) in runs.iter().enumerate() {
        for t in 0..run.steps() {
            for m in Measure::ALL {
                rows.push(row(Repetition::Run(rep), t + 1, m, run.series(m)[t], None));
            }
        }
    }
    if runs.len() >= 2 {
        let aggregated: Vec<_> = Measure::ALL
            .iter()
            .map(|&m| {
                let per_rep: Vec<Vec<f64>> = runs.iter().map(|r| r.series(m).to_vec()).collect();
                aggregate(&per_rep)
            })
            .collect::<Result<_>>()?;
        for t in 0..cfg.steps {
            for (k, m) in Measure::ALL.into_iter().enumerate() {
                let p = aggregated[k][t];
                rows.push(row(Repetition::Aggregate, t + 1, m, p.mean, Some(p.ci_half_width)));
            }
        }
    }
    Ok(rows)
}
