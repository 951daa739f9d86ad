//! Experiment config: a JSON document with `neurons`, `weights`, and
//! `run` sections.
//!
//! ```json
//! {
//!   "neurons": [
//!     {
//!       "id": 0,
//!       "phi": { "family": "rational", "r": 1, "beta": 1.0 },
//!       "decay": { "gamma": 2.0, "mu": 1.0 },
//!       "initial_potential": 1.0
//!     }
//!   ],
//!   "weights": [[0.0]],
//!   "run": {
//!     "mode": "continuous",
//!     "max_events": 10000,
//!     "max_time": 1e12,
//!     "replicas": 100,
//!     "seed": 42
//!   }
//! }
//! ```
//!
//! `weights` is the row-major influence matrix: `weights[i][j]` is the
//! jump neuron `j` receives when neuron `i` fires. `family` is one of
//! `exponential`, `rational`, `monomial`; `r` is required for the latter
//! two and rejected for `exponential`. Semantic errors carry the key
//! path of the offending value.

use std::path::Path;

use serde::Deserialize;

use glsim_core::model::{DecayLaw, NetworkConfig, Neuron, PotentialFn, WeightMatrix};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunMode {
    DiscreteSingle,
    DiscreteMulti,
    Continuous,
}

impl RunMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            RunMode::DiscreteSingle => "discrete_single",
            RunMode::DiscreteMulti => "discrete_multi",
            RunMode::Continuous => "continuous",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunSettings {
    pub mode: RunMode,
    pub max_events: u64,
    pub max_time: f64,
    pub replicas: u64,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub network: NetworkConfig,
    pub run: RunSettings,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExperiment {
    neurons: Vec<RawNeuron>,
    weights: Vec<Vec<f64>>,
    run: RawRun,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNeuron {
    id: usize,
    phi: RawPhi,
    decay: RawDecay,
    initial_potential: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPhi {
    family: String,
    #[serde(default)]
    r: Option<u32>,
    beta: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDecay {
    gamma: f64,
    mu: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    mode: String,
    max_events: u64,
    max_time: f64,
    replicas: u64,
    seed: u64,
}

/// Reads and fully validates an experiment config file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let raw: RawExperiment = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    build_config(raw)
}

/// Parses a config from an in-memory JSON string (same checks as
/// [`load_config`]).
pub fn parse_config(text: &str) -> Result<ExperimentConfig, CliError> {
    let raw: RawExperiment =
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    build_config(raw)
}

fn build_config(raw: RawExperiment) -> Result<ExperimentConfig, CliError> {
    let n = raw.neurons.len();
    if n == 0 {
        return Err(CliError::Config("neurons: must be non-empty".into()));
    }

    // Neuron ids must be exactly 0..n; entries may appear in any order.
    let mut slots: Vec<Option<Neuron>> = vec![None; n];
    for (k, raw_neuron) in raw.neurons.iter().enumerate() {
        let at = format!("neurons[{k}]");
        if raw_neuron.id >= n {
            return Err(CliError::Config(format!(
                "{at}.id: {} is out of range for {n} neurons",
                raw_neuron.id
            )));
        }
        if slots[raw_neuron.id].is_some() {
            return Err(CliError::Config(format!(
                "{at}.id: duplicate id {}",
                raw_neuron.id
            )));
        }
        let phi = parse_phi(&raw_neuron.phi, &at)?;
        let decay = parse_decay(&raw_neuron.decay, &at)?;
        if !raw_neuron.initial_potential.is_finite() || raw_neuron.initial_potential < 0.0 {
            return Err(CliError::Config(format!(
                "{at}.initial_potential: must be finite and >= 0, got {}",
                raw_neuron.initial_potential
            )));
        }
        slots[raw_neuron.id] = Some(
            Neuron::new(phi, decay, raw_neuron.initial_potential)
                .map_err(|e| CliError::Config(format!("{at}: {e}")))?,
        );
    }
    let neurons: Vec<Neuron> = slots.into_iter().map(|s| s.expect("filled")).collect();

    if raw.weights.len() != n {
        return Err(CliError::Config(format!(
            "weights: expected {n} rows, got {}",
            raw.weights.len()
        )));
    }
    for (i, row) in raw.weights.iter().enumerate() {
        if row.len() != n {
            return Err(CliError::Config(format!(
                "weights[{i}]: expected {n} entries, got {}",
                row.len()
            )));
        }
        for (j, w) in row.iter().enumerate() {
            if !w.is_finite() {
                return Err(CliError::Config(format!(
                    "weights[{i}][{j}]: non-finite entry {w}"
                )));
            }
        }
    }
    let weights =
        WeightMatrix::from_rows(&raw.weights).map_err(|e| CliError::Config(e.to_string()))?;

    let network =
        NetworkConfig::new(neurons, weights).map_err(|e| CliError::Config(e.to_string()))?;
    // Structural axioms hold for every accepted power-law decay; this
    // also re-checks finiteness end to end.
    glsim_core::model::validate_config(&network)
        .map_err(|e| CliError::Config(e.to_string()))?;

    let run = parse_run(&raw.run)?;
    Ok(ExperimentConfig { network, run })
}

fn parse_phi(raw: &RawPhi, at: &str) -> Result<PotentialFn, CliError> {
    if !raw.beta.is_finite() || raw.beta <= 0.0 {
        return Err(CliError::Config(format!(
            "{at}.phi.beta: must be finite and positive, got {}",
            raw.beta
        )));
    }
    match raw.family.as_str() {
        "exponential" => {
            if raw.r.is_some() {
                return Err(CliError::Config(format!(
                    "{at}.phi.r: not accepted for the exponential family"
                )));
            }
            PotentialFn::exponential(raw.beta)
        }
        "rational" | "monomial" => {
            let r = raw.r.ok_or_else(|| {
                CliError::Config(format!(
                    "{at}.phi.r: required for the {} family",
                    raw.family
                ))
            })?;
            if r == 0 {
                return Err(CliError::Config(format!("{at}.phi.r: must be >= 1")));
            }
            if raw.family == "rational" {
                PotentialFn::rational(r, raw.beta)
            } else {
                PotentialFn::monomial(r, raw.beta)
            }
        }
        other => {
            return Err(CliError::Config(format!(
                "{at}.phi.family: unknown family {other:?} \
                 (expected exponential, rational, or monomial)"
            )))
        }
    }
    .map_err(|e| CliError::Config(format!("{at}.phi: {e}")))
}

fn parse_decay(raw: &RawDecay, at: &str) -> Result<DecayLaw, CliError> {
    if !raw.gamma.is_finite() || raw.gamma < 1.0 {
        return Err(CliError::Config(format!(
            "{at}.decay.gamma: must be finite and >= 1, got {}",
            raw.gamma
        )));
    }
    if !raw.mu.is_finite() || raw.mu <= 0.0 {
        return Err(CliError::Config(format!(
            "{at}.decay.mu: must be finite and positive, got {}",
            raw.mu
        )));
    }
    DecayLaw::power_law(raw.gamma, raw.mu).map_err(|e| CliError::Config(format!("{at}.decay: {e}")))
}

fn parse_run(raw: &RawRun) -> Result<RunSettings, CliError> {
    let mode = match raw.mode.as_str() {
        "discrete_single" => RunMode::DiscreteSingle,
        "discrete_multi" => RunMode::DiscreteMulti,
        "continuous" => RunMode::Continuous,
        other => {
            return Err(CliError::Config(format!(
                "run.mode: unknown mode {other:?} \
                 (expected discrete_single, discrete_multi, or continuous)"
            )))
        }
    };
    if raw.max_events == 0 {
        return Err(CliError::Config("run.max_events: must be >= 1".into()));
    }
    if raw.max_time.is_nan() || raw.max_time <= 0.0 {
        return Err(CliError::Config(format!(
            "run.max_time: must be positive, got {}",
            raw.max_time
        )));
    }
    if mode != RunMode::Continuous && raw.max_time < 1.0 {
        return Err(CliError::Config(format!(
            "run.max_time: discrete modes need a horizon >= 1, got {}",
            raw.max_time
        )));
    }
    if raw.replicas == 0 {
        return Err(CliError::Config("run.replicas: must be >= 1".into()));
    }
    Ok(RunSettings {
        mode,
        max_events: raw.max_events,
        max_time: raw.max_time,
        replicas: raw.replicas,
        seed: raw.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal(mode: &str) -> String {
        format!(
            r#"{{
              "neurons": [
                {{"id": 0, "phi": {{"family": "rational", "r": 1, "beta": 1.0}},
                  "decay": {{"gamma": 2.0, "mu": 1.0}}, "initial_potential": 1.0}}
              ],
              "weights": [[0.0]],
              "run": {{"mode": "{mode}", "max_events": 100, "max_time": 50.0,
                       "replicas": 2, "seed": 7}}
            }}"#
        )
    }

    #[test]
    fn minimal_config_parses() {
        let cfg = parse_config(&minimal("continuous")).unwrap();
        assert_eq!(cfg.network.len(), 1);
        assert_eq!(cfg.run.mode, RunMode::Continuous);
        assert_eq!(cfg.run.replicas, 2);
    }

    #[test]
    fn gamma_below_one_names_the_key() {
        let text = minimal("continuous").replace(r#""gamma": 2.0"#, r#""gamma": 0.5"#);
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("decay.gamma"), "{err}");
    }

    #[test]
    fn missing_weights_is_a_schema_error() {
        let text = minimal("continuous").replace(r#""weights": [[0.0]],"#, "");
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("weights"), "{err}");
    }

    #[test]
    fn wrong_weight_shape_names_the_row() {
        let text = minimal("continuous").replace("[[0.0]]", "[[0.0, 1.0]]");
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("weights[0]"), "{err}");
    }

    #[test]
    fn r_is_rejected_for_exponential() {
        let text = minimal("continuous").replace(
            r#"{"family": "rational", "r": 1, "beta": 1.0}"#,
            r#"{"family": "exponential", "r": 1, "beta": 1.0}"#,
        );
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("phi.r"), "{err}");
    }

    #[test]
    fn missing_r_is_rejected_for_monomial() {
        let text = minimal("continuous").replace(
            r#"{"family": "rational", "r": 1, "beta": 1.0}"#,
            r#"{"family": "monomial", "beta": 1.0}"#,
        );
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("phi.r"), "{err}");
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let text = r#"{
          "neurons": [
            {"id": 0, "phi": {"family": "monomial", "r": 1, "beta": 1.0},
             "decay": {"gamma": 1.0, "mu": 1.0}, "initial_potential": 1.0},
            {"id": 0, "phi": {"family": "monomial", "r": 1, "beta": 1.0},
             "decay": {"gamma": 1.0, "mu": 1.0}, "initial_potential": 1.0}
          ],
          "weights": [[0.0, 0.0], [0.0, 0.0]],
          "run": {"mode": "continuous", "max_events": 10, "max_time": 10.0,
                  "replicas": 1, "seed": 1}
        }"#;
        let err = parse_config(text).unwrap_err();
        assert!(err.to_string().contains("duplicate id"), "{err}");
    }

    #[test]
    fn out_of_order_ids_are_reindexed() {
        let text = r#"{
          "neurons": [
            {"id": 1, "phi": {"family": "monomial", "r": 1, "beta": 1.0},
             "decay": {"gamma": 1.0, "mu": 1.0}, "initial_potential": 2.0},
            {"id": 0, "phi": {"family": "monomial", "r": 1, "beta": 1.0},
             "decay": {"gamma": 1.0, "mu": 1.0}, "initial_potential": 1.0}
          ],
          "weights": [[0.0, 0.0], [0.0, 0.0]],
          "run": {"mode": "continuous", "max_events": 10, "max_time": 10.0,
                  "replicas": 1, "seed": 1}
        }"#;
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.network.neurons[0].initial_potential, 1.0);
        assert_eq!(cfg.network.neurons[1].initial_potential, 2.0);
    }

    #[test]
    fn unknown_mode_is_rejected() {
        let err = parse_config(&minimal("hybrid")).unwrap_err();
        assert!(err.to_string().contains("run.mode"), "{err}");
    }

    #[test]
    fn discrete_mode_requires_unit_horizon() {
        let text = minimal("discrete_single").replace(r#""max_time": 50.0"#, r#""max_time": 0.5"#);
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("max_time"), "{err}");
    }
}
