//! Round generators: synthetic distributions, smart-grid EV charging and
//! participatory sensing, with CSV ingestion for the data-driven ones.

mod csv_io;
mod grid;
mod sensing;
mod synthetic;

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use csv_io::{
    ingest_grid_csv, ingest_trace_csv, read_grid, read_traces, write_grid, write_traces,
    GRID_COLUMNS, TRACE_COLUMNS,
};
pub use grid::{draw_needs, grid_round, project_record, synthetic_grid_record, GridConfig, GridRecord};
pub use sensing::{
    mean_speed_change, proximity_cost, raw_speed_change, sensing_round, synthetic_traces,
    SensingConfig, SensingSample, TraceRecord,
};
pub use synthetic::{synthetic_round, SyntheticConfig};

use crate::error::{Error, Result};
use crate::game::RoundInput;
use crate::rng::{stream, streams, SimRng};
use crate::strategies::Support;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Synthetic,
    Grid,
    Sensing,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Synthetic => "synthetic",
            ScenarioKind::Grid => "grid",
            ScenarioKind::Sensing => "sensing",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [ScenarioKind::Synthetic, ScenarioKind::Grid, ScenarioKind::Sensing]
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown scenario `{s}`")))
    }
}

/// Parameters of every scenario plus optional data files.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioConfig {
    pub synthetic: SyntheticConfig,
    pub grid: GridConfig,
    pub sensing: SensingConfig,
    /// Grid CSV; synthetic records are generated when absent.
    pub grid_csv: Option<PathBuf>,
    /// Trace CSV; synthetic traces are generated when absent.
    pub trace_csv: Option<PathBuf>,
}

/// Data loaded once and shared by every run of an experiment.
#[derive(Clone, Debug, Default)]
pub struct ScenarioData {
    pub grid: Option<Arc<Vec<GridRecord>>>,
    /// Traces grouped per vehicle (ascending id), each in time order.
    pub traces: Option<Arc<Vec<Vec<TraceRecord>>>>,
}

/// Group time-sorted trace records by vehicle.
pub fn group_traces(records: &[TraceRecord]) -> Vec<Vec<TraceRecord>> {
    let mut by_vehicle: BTreeMap<&str, Vec<TraceRecord>> = BTreeMap::new();
    for r in records {
        by_vehicle.entry(&r.vehicle_id).or_default().push(r.clone());
    }
    by_vehicle
        .into_values()
        .map(|mut v| {
            v.sort_by_key(|r| r.timestep);
            v
        })
        .collect()
}

impl ScenarioData {
    /// Load whatever files `cfg` names for `kind`.
    pub fn load(kind: ScenarioKind, cfg: &ScenarioConfig) -> Result<Self> {
        let mut out = ScenarioData::default();
        match kind {
            ScenarioKind::Grid => {
                if let Some(path) = &cfg.grid_csv {
                    let recs = ingest_grid_csv(path)?;
                    if recs.is_empty() {
                        return Err(Error::Config(format!("{} holds no grid rows", path.display())));
                    }
                    out.grid = Some(Arc::new(recs));
                }
            }
            ScenarioKind::Sensing => {
                if let Some(path) = &cfg.trace_csv {
                    let recs = ingest_trace_csv(path)?;
                    if recs.is_empty() {
                        return Err(Error::Config(format!("{} holds no trace rows", path.display())));
                    }
                    out.traces = Some(Arc::new(group_traces(&recs)));
                }
            }
            ScenarioKind::Synthetic => {}
        }
        Ok(out)
    }
}

#[derive(Debug)]
enum Source {
    Synthetic(SyntheticConfig),
    Grid {
        cfg: GridConfig,
        records: Option<Arc<Vec<GridRecord>>>,
    },
    Sensing {
        cfg: SensingConfig,
        traces: Arc<Vec<Vec<TraceRecord>>>,
        scale: f64,
    },
}

/// Stream of rounds for one run.
#[derive(Debug)]
pub struct ScenarioSource {
    kind: ScenarioKind,
    n: usize,
    source: Source,
    rng: SimRng,
    wrapped: bool,
}

impl ScenarioSource {
    /// A source for `n` agents whose randomness derives from `seed`.
    /// `total_steps` sizes synthetic traces.
    pub fn new(
        kind: ScenarioKind,
        cfg: &ScenarioConfig,
        data: &ScenarioData,
        n: usize,
        total_steps: usize,
        seed: u64,
    ) -> Result<Self> {
        let mut rng = stream(seed, &[streams::SCENARIO]);
        let source = match kind {
            ScenarioKind::Synthetic => {
                let c = SyntheticConfig { n, ..cfg.synthetic };
                c.validate()?;
                Source::Synthetic(c)
            }
            ScenarioKind::Grid => {
                cfg.grid.validate()?;
                Source::Grid {
                    cfg: cfg.grid,
                    records: data.grid.clone(),
                }
            }
            ScenarioKind::Sensing => {
                cfg.sensing.validate()?;
                let traces = match &data.traces {
                    Some(t) => t.clone(),
                    None => {
                        let recs = synthetic_traces(n, total_steps as u64 + 1, &mut rng);
                        Arc::new(group_traces(&recs))
                    }
                };
                let scale = cfg
                    .sensing
                    .speed_change_scale
                    .unwrap_or_else(|| mean_speed_change(&traces));
                Source::Sensing {
                    cfg: cfg.sensing,
                    traces,
                    scale,
                }
            }
        };
        if n == 0 {
            return Err(Error::Config("population must have at least one agent".into()));
        }
        Ok(Self {
            kind,
            n,
            source,
            rng,
            wrapped: false,
        })
    }

    pub fn kind(&self) -> ScenarioKind {
        self.kind
    }

    fn note_wrap(&mut self, step: usize) {
        if !self.wrapped {
            self.wrapped = true;
            log::info!(
                "{} data exhausted at step {step}; wrapping around to the start",
                self.kind
            );
        }
    }

    /// Whether recorded data has been reused from the start.
    pub fn has_wrapped(&self) -> bool {
        self.wrapped
    }

    /// Round for step `step` (0-based).
    pub fn next_round(&mut self, step: usize) -> Result<RoundInput> {
        match &self.source {
            Source::Synthetic(cfg) => synthetic_round(cfg, step, &mut self.rng),
            Source::Grid { cfg, records } => {
                let cfg = *cfg;
                let record = match records {
                    Some(recs) => {
                        let len = recs.len();
                        let rec = project_record(&recs[step % len], self.n);
                        if step >= len {
                            self.note_wrap(step);
                        }
                        rec
                    }
                    None => synthetic_grid_record(step as u64, self.n, &cfg, &mut self.rng),
                };
                let needs = draw_needs(self.n, &cfg, &mut self.rng);
                grid_round(&record, &needs, &cfg, &mut self.rng)
            }
            Source::Sensing { cfg, traces, scale } => {
                let v = traces.len();
                let mut wrapped = false;
                let samples: Vec<SensingSample> = (0..self.n)
                    .map(|i| {
                        let trace = &traces[i % v];
                        let pos = step + i / v;
                        wrapped |= pos >= trace.len();
                        let idx = pos % trace.len();
                        SensingSample {
                            current: trace[idx].clone(),
                            previous_speed: idx.checked_sub(1).map(|p| trace[p].speed),
                        }
                    })
                    .collect();
                let round = sensing_round(&samples, cfg, *scale);
                if wrapped {
                    self.note_wrap(step);
                }
                round
            }
        }
    }

    /// Range of values an agent can observe, for context bucketing.
    pub fn value_support(&self) -> Support {
        match &self.source {
            Source::Synthetic(c) => Support {
                low: c.value_low,
                high: c.value_high,
            },
            Source::Grid { cfg, .. } => Support {
                low: cfg.need_low,
                high: cfg.need_high,
            },
            Source::Sensing { .. } => Support { low: 0.0, high: 3.0 },
        }
    }

    /// Range of costs an agent can observe: the value range widened by three
    /// standard deviations of cost noise.
    pub fn cost_support(&self) -> Support {
        match &self.source {
            Source::Synthetic(c) => Support {
                low: (c.value_low - 3.0 * c.cost_sigma).max(0.0),
                high: c.value_high + 3.0 * c.cost_sigma,
            },
            Source::Grid { cfg, .. } => Support {
                low: (cfg.cost_factor * cfg.need_low - 3.0 * cfg.cost_sigma).max(0.0),
                high: cfg.cost_factor * cfg.need_high + 3.0 * cfg.cost_sigma,
            },
            Source::Sensing { cfg, .. } => Support {
                low: 0.0,
                high: cfg.cost_scale,
            },
        }
    }

    pub fn mean_cost(&self) -> f64 {
        match &self.source {
            Source::Synthetic(c) => c.mean_value(),
            Source::Grid { cfg, .. } => cfg.cost_factor * cfg.mean_need(),
            Source::Sensing { cfg, .. } => 0.5 * cfg.cost_scale,
        }
    }
}
