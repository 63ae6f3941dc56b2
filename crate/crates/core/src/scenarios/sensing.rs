//! Participatory-sensing rounds from vehicle traces.
//!
//! A report's value is how much the speed changed since the vehicle's
//! previous report. Its cost grows with proximity to the trip's origin or
//! destination, the only known points of interest; trip progress stands in
//! for distance since traces carry no coordinates.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{contract, data, Result};
use crate::game::RoundInput;

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    pub vehicle_id: String,
    pub timestep: u64,
    pub speed: f64,
    /// Progress between trip origin (0) and destination (1).
    pub trip_position: f64,
}

/// A report together with the speed of the same vehicle's previous report.
#[derive(Clone, Debug, PartialEq)]
pub struct SensingSample {
    pub current: TraceRecord,
    pub previous_speed: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SensingConfig {
    /// Divides the raw speed change. Unset means "mean absolute change in the
    /// trace set", which brings the mean value to about 1.
    pub speed_change_scale: Option<f64>,
    /// Cost at the origin or destination.
    pub cost_scale: f64,
    /// Requirement as a fraction of the population size.
    pub threshold_fraction: f64,
    /// Reject samples without a predecessor instead of treating the change as 0.
    pub strict: bool,
}

impl Default for SensingConfig {
    fn default() -> Self {
        Self {
            speed_change_scale: None,
            cost_scale: 2.0,
            threshold_fraction: 0.8,
            strict: false,
        }
    }
}

impl SensingConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(s) = self.speed_change_scale {
            if !(s > 0.0) {
                return Err(contract("speed change scale must be positive"));
            }
        }
        if !(self.cost_scale >= 0.0) {
            return Err(contract("cost scale must be non-negative"));
        }
        if !(self.threshold_fraction > 0.0 && self.threshold_fraction <= 1.0) {
            return Err(contract("threshold fraction must lie in (0, 1]"));
        }
        Ok(())
    }
}

/// Privacy cost of reporting at `trip_position`: `cost_scale` at either end
/// of the trip, 0 at its midpoint.
pub fn proximity_cost(trip_position: f64, cost_scale: f64) -> f64 {
    let p = trip_position.clamp(0.0, 1.0);
    cost_scale * (1.0 - 2.0 * p.min(1.0 - p))
}

pub fn raw_speed_change(sample: &SensingSample) -> Option<f64> {
    sample
        .previous_speed
        .map(|prev| (sample.current.speed - prev).abs())
}

/// One round from one sample per agent. `speed_change_scale` must be
/// resolved by the caller (see [`mean_speed_change`]).
pub fn sensing_round(samples: &[SensingSample], cfg: &SensingConfig, scale: f64) -> Result<RoundInput> {
    if samples.is_empty() {
        return Err(contract("a sensing round needs at least one report"));
    }
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let mut values = Vec::with_capacity(samples.len());
    let mut costs = Vec::with_capacity(samples.len());
    for (i, s) in samples.iter().enumerate() {
        let delta = match raw_speed_change(s) {
            Some(d) => d,
            None if cfg.strict => {
                return Err(data(
                    i + 1,
                    format!(
                        "vehicle {} has no report before timestep {}",
                        s.current.vehicle_id, s.current.timestep
                    ),
                ))
            }
            None => 0.0,
        };
        values.push(delta / scale);
        costs.push(proximity_cost(s.current.trip_position, cfg.cost_scale));
    }
    let threshold = cfg.threshold_fraction * samples.len() as f64;
    RoundInput::with_costs(values, costs, threshold)
}

/// Mean absolute speed change between consecutive reports of each vehicle.
/// `traces` must be grouped per vehicle in time order.
pub fn mean_speed_change(traces: &[Vec<TraceRecord>]) -> f64 {
    let (sum, count) = traces
        .iter()
        .flat_map(|t| t.windows(2))
        .fold((0.0, 0usize), |(s, c), w| (s + (w[1].speed - w[0].speed).abs(), c + 1));
    if count == 0 || sum == 0.0 {
        1.0
    } else {
        sum / count as f64
    }
}

/// Synthetic traces: each vehicle drives back-to-back trips of 20 to 120
/// steps, its speed a clamped random walk on `[0, 40]`.
pub fn synthetic_traces<R: Rng + ?Sized>(vehicles: usize, steps: u64, rng: &mut R) -> Vec<TraceRecord> {
    let jitter = Normal::new(0.0, 3.0).expect("positive sigma");
    let mut out = Vec::with_capacity(vehicles * steps as usize);
    for v in 0..vehicles {
        let id = format!("v{v:04}");
        let mut t = 0u64;
        while t < steps {
            let len = rng.random_range(20..=120u64);
            let mut speed: f64 = rng.random_range(0.0..10.0);
            for k in 0..len {
                if t >= steps {
                    break;
                }
                speed = (speed + jitter.sample(rng)).clamp(0.0, 40.0);
                out.push(TraceRecord {
                    vehicle_id: id.clone(),
                    timestep: t,
                    speed,
                    trip_position: k as f64 / (len - 1) as f64,
                });
                t += 1;
            }
        }
    }
    out.sort_by(|a, b| a.timestep.cmp(&b.timestep).then_with(|| a.vehicle_id.cmp(&b.vehicle_id)));
    out
}
