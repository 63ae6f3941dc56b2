//! Experiment configuration and its TOML file form.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::PayoffParams;
use crate::scenarios::{GridConfig, ScenarioConfig, ScenarioKind, SensingConfig, SyntheticConfig};
use crate::strategies::{QParams, StrategyKind, StrategyParams};

pub const DEFAULT_POPULATIONS: [usize; 4] = [10, 20, 50, 100];

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: ScenarioKind,
    /// Strategies to run, in output order.
    pub strategies: Vec<StrategyKind>,
    pub population_sizes: Vec<usize>,
    pub steps: usize,
    pub repetitions: usize,
    pub seed: u64,
    pub payoffs: PayoffParams,
    pub strategy_params: StrategyParams,
    pub scenario_params: ScenarioConfig,
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scenario: ScenarioKind::Synthetic,
            strategies: vec![StrategyKind::Knapsack],
            population_sizes: DEFAULT_POPULATIONS.to_vec(),
            steps: 5000,
            repetitions: 20,
            seed: 0,
            payoffs: PayoffParams::default(),
            strategy_params: StrategyParams::default(),
            scenario_params: ScenarioConfig::default(),
            output: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::Config("steps must be at least 1".into()));
        }
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        if self.population_sizes.is_empty() || self.population_sizes.contains(&0) {
            return Err(Error::Config("population sizes must be a non-empty list of positive sizes".into()));
        }
        if self.strategies.is_empty() {
            return Err(Error::Config("at least one strategy is required".into()));
        }
        self.payoffs.validate()?;
        self.strategy_params.validate()?;
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: FileConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Ok(file.into())
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg = Self::from_toml_str(&text)?;
        // Data paths are relative to the config file.
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.scenario_params.grid_csv, &mut cfg.scenario_params.trace_csv]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(&FileConfig::from(self)).expect("config serialises")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(StrategyKind),
    Many(Vec<StrategyKind>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ExperimentSection {
    scenario: ScenarioKind,
    strategy: OneOrMany,
    agents: Vec<usize>,
    steps: usize,
    reps: usize,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<PathBuf>,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        let d = ExperimentConfig::default();
        Self {
            scenario: d.scenario,
            strategy: OneOrMany::Many(d.strategies),
            agents: d.population_sizes,
            steps: d.steps,
            reps: d.repetitions,
            seed: d.seed,
            out: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct StrategySection {
    random_probability: f64,
    epsilon: f64,
    aspiration_step: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    switch_scale: Option<f64>,
    pretrain_rounds: usize,
}

impl Default for StrategySection {
    fn default() -> Self {
        let d = StrategyParams::default();
        Self {
            random_probability: d.random_probability,
            epsilon: d.epsilon,
            aspiration_step: d.aspiration_step,
            switch_scale: d.switch_scale,
            pretrain_rounds: d.pretrain_rounds,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct DataSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    grid_csv: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace_csv: Option<PathBuf>,
}

/// On-disk layout: flat `key = value` pairs grouped in sections.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct FileConfig {
    experiment: ExperimentSection,
    payoff: PayoffParams,
    strategy: StrategySection,
    qlearning: QParams,
    synthetic: SyntheticConfig,
    grid: GridConfig,
    sensing: SensingConfig,
    data: DataSection,
}

impl From<FileConfig> for ExperimentConfig {
    fn from(f: FileConfig) -> Self {
        ExperimentConfig {
            scenario: f.experiment.scenario,
            strategies: match f.experiment.strategy {
                OneOrMany::One(k) => vec![k],
                OneOrMany::Many(ks) => ks,
            },
            population_sizes: f.experiment.agents,
            steps: f.experiment.steps,
            repetitions: f.experiment.reps,
            seed: f.experiment.seed,
            payoffs: f.payoff,
            strategy_params: StrategyParams {
                random_probability: f.strategy.random_probability,
                epsilon: f.strategy.epsilon,
                aspiration_step: f.strategy.aspiration_step,
                switch_scale: f.strategy.switch_scale,
                q: f.qlearning,
                pretrain_rounds: f.strategy.pretrain_rounds,
            },
            scenario_params: ScenarioConfig {
                synthetic: f.synthetic,
                grid: f.grid,
                sensing: f.sensing,
                grid_csv: f.data.grid_csv,
                trace_csv: f.data.trace_csv,
            },
            output: f.experiment.out,
        }
    }
}

impl From<&ExperimentConfig> for FileConfig {
    fn from(c: &ExperimentConfig) -> Self {
        FileConfig {
            experiment: ExperimentSection {
                scenario: c.scenario,
                strategy: OneOrMany::Many(c.strategies.clone()),
                agents: c.population_sizes.clone(),
                steps: c.steps,
                reps: c.repetitions,
                seed: c.seed,
                out: c.output.clone(),
            },
            payoff: c.payoffs,
            strategy: StrategySection {
                random_probability: c.strategy_params.random_probability,
                epsilon: c.strategy_params.epsilon,
                aspiration_step: c.strategy_params.aspiration_step,
                switch_scale: c.strategy_params.switch_scale,
                pretrain_rounds: c.strategy_params.pretrain_rounds,
            },
            qlearning: c.strategy_params.q,
            synthetic: c.scenario_params.synthetic,
            grid: c.scenario_params.grid,
            sensing: c.scenario_params.sensing,
            data: DataSection {
                grid_csv: c.scenario_params.grid_csv.clone(),
                trace_csv: c.scenario_params.trace_csv.clone(),
            },
        }
    }
}
