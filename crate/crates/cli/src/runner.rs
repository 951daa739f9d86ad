//! Seeded replica fan-out and summary statistics.
//!
//! Replica `k` draws all of its randomness from the stream
//! `(seed, stream_id = k)`, so results are independent of execution
//! order and of whether the fan-out runs parallel or sequential.

use serde::Serialize;

use glsim_core::continuous::{run_continuous, EventTrace, RunCaps, Termination};
use glsim_core::discrete::{run_discrete, DiscreteMode, DiscreteTermination, DiscreteTrace};
use glsim_core::replica::run_indexed;
use glsim_core::sampler::RngStream;

use crate::config::{ExperimentConfig, RunMode};
use crate::CliError;

/// One replica's trace, either engine.
#[derive(Clone, Debug)]
pub enum ReplicaTrace {
    Continuous(EventTrace),
    Discrete(DiscreteTrace),
}

impl ReplicaTrace {
    pub fn events(&self) -> u64 {
        match self {
            ReplicaTrace::Continuous(t) => t.events.len() as u64,
            ReplicaTrace::Discrete(t) => t.records.len() as u64,
        }
    }

    pub fn died(&self) -> bool {
        match self {
            ReplicaTrace::Continuous(t) => t.termination == Termination::Death,
            ReplicaTrace::Discrete(t) => t.termination == DiscreteTermination::Dead,
        }
    }

    /// Time of the last discharge before death (0 when it died silent).
    pub fn death_time(&self) -> Option<f64> {
        if !self.died() {
            return None;
        }
        Some(match self {
            ReplicaTrace::Continuous(t) => t.events.last().map_or(0.0, |e| e.time),
            ReplicaTrace::Discrete(t) => t.records.last().map_or(0.0, |r| r.step as f64),
        })
    }

    pub fn termination_label(&self) -> &'static str {
        match self {
            ReplicaTrace::Continuous(t) => match t.termination {
                Termination::Death => "death",
                Termination::EventCap => "event_cap",
                Termination::TimeCap => "time_cap",
            },
            ReplicaTrace::Discrete(t) => match t.termination {
                DiscreteTermination::Dead => "death",
                DiscreteTermination::Horizon => "horizon",
            },
        }
    }
}

/// Aggregates over all replicas; field order fixes the summary JSON.
#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub replicas: u64,
    pub death_fraction: f64,
    pub mean_events: f64,
    pub mean_death_time: Option<f64>,
    pub terminations: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub summary: RunSummary,
    pub traces: Vec<ReplicaTrace>,
}

/// Runs `replicas` independent simulations and aggregates them in
/// replica order. Deterministic given the config and seed.
pub fn run_replicas(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let run = &cfg.run;
    let outcomes: Vec<Result<ReplicaTrace, glsim_core::Error>> =
        run_indexed(run.replicas as usize, |k| {
            let mut rng = RngStream::new(run.seed, k as u64);
            match run.mode {
                RunMode::Continuous => run_continuous(
                    &cfg.network,
                    RunCaps {
                        max_events: run.max_events,
                        max_time: run.max_time,
                    },
                    &mut rng,
                )
                .map(ReplicaTrace::Continuous),
                RunMode::DiscreteSingle | RunMode::DiscreteMulti => {
                    let mode = if run.mode == RunMode::DiscreteSingle {
                        DiscreteMode::Single
                    } else {
                        DiscreteMode::Multi
                    };
                    let horizon = run.max_time.floor() as u64;
                    Ok(ReplicaTrace::Discrete(run_discrete(
                        &cfg.network,
                        horizon,
                        mode,
                        &mut rng,
                    )))
                }
            }
        });

    let mut traces = Vec::with_capacity(outcomes.len());
    for (k, outcome) in outcomes.into_iter().enumerate() {
        traces.push(outcome.map_err(|e| {
            CliError::Numeric(format!("replica {k}: {e}"))
        })?);
    }

    let replicas = traces.len() as u64;
    let deaths = traces.iter().filter(|t| t.died()).count() as u64;
    let mean_events =
        traces.iter().map(ReplicaTrace::events).sum::<u64>() as f64 / replicas as f64;
    let death_times: Vec<f64> = traces.iter().filter_map(ReplicaTrace::death_time).collect();
    let mean_death_time = if death_times.is_empty() {
        None
    } else {
        Some(death_times.iter().sum::<f64>() / death_times.len() as f64)
    };
    let terminations = traces
        .iter()
        .map(|t| t.termination_label().to_string())
        .collect();

    Ok(RunOutput {
        summary: RunSummary {
            replicas,
            death_fraction: deaths as f64 / replicas as f64,
            mean_events,
            mean_death_time,
            terminations,
        },
        traces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn config(mode: &str, replicas: u64, initial: f64) -> ExperimentConfig {
        parse_config(&format!(
            r#"{{
              "neurons": [
                {{"id": 0, "phi": {{"family": "monomial", "r": 1, "beta": 1.0}},
                  "decay": {{"gamma": 1.0, "mu": 1.0}}, "initial_potential": {initial}}}
              ],
              "weights": [[0.0]],
              "run": {{"mode": "{mode}", "max_events": 1000, "max_time": 1e6,
                       "replicas": {replicas}, "seed": 42}}
            }}"#
        ))
        .unwrap()
    }

    #[test]
    fn equal_seeds_give_equal_summaries() {
        let cfg = config("continuous", 20, 1.0);
        let a = run_replicas(&cfg).unwrap();
        let b = run_replicas(&cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&a.summary).unwrap(),
            serde_json::to_string(&b.summary).unwrap()
        );
    }

    #[test]
    fn zero_initial_potentials_die_immediately() {
        let cfg = config("continuous", 10, 0.0);
        let out = run_replicas(&cfg).unwrap();
        assert_eq!(out.summary.death_fraction, 1.0);
        assert_eq!(out.summary.mean_events, 0.0);
        assert_eq!(out.summary.mean_death_time, Some(0.0));
    }

    #[test]
    fn death_fraction_counts_death_terminations_exactly() {
        let cfg = config("continuous", 50, 1.0);
        let out = run_replicas(&cfg).unwrap();
        let deaths = out
            .summary
            .terminations
            .iter()
            .filter(|t| *t == "death")
            .count();
        assert_eq!(out.summary.death_fraction, deaths as f64 / 50.0);
    }

    #[test]
    fn atom_fraction_matches_first_event_death_rate() {
        // Defective single neuron: P(death at event 0) = e^{-1}.
        let cfg = config("continuous", 10_000, 1.0);
        let out = run_replicas(&cfg).unwrap();
        let immediate = out
            .traces
            .iter()
            .filter(|t| matches!(t, ReplicaTrace::Continuous(e) if e.death_index == Some(0)))
            .count() as f64;
        let p = (-1f64).exp();
        let sigma = (p * (1.0 - p) / 10_000f64).sqrt();
        assert!((immediate / 10_000.0 - p).abs() < 3.0 * sigma);
    }

    #[test]
    fn discrete_modes_run_to_horizon_or_death() {
        for mode in ["discrete_single", "discrete_multi"] {
            let cfg = config(mode, 5, 1.0);
            let out = run_replicas(&cfg).unwrap();
            assert_eq!(out.summary.replicas, 5);
            for label in &out.summary.terminations {
                assert!(label == "death" || label == "horizon");
            }
        }
    }
}
