//! Discrete-time dynamics on integer steps, with no potential decay.
//!
//! At every step each neuron fires independently with probability
//! `phi(U(i))` given the current potentials; a firing neuron resets to
//! zero and every silent neuron adds the weights of the neurons that
//! fired, clamped at zero:
//!
//! ```text
//! U'(i) = (1 - X(i)) * max(U(i) + sum_j W[j][i] X(j), 0)
//! ```
//!
//! [`DiscreteEngine::multi_step`] skips silent steps exactly: each
//! neuron's wait until its next discharge (absent other events) is
//! geometric with parameter `phi(U(i))`, so sampling all waits and
//! firing the argmin set reproduces the step-by-step law.

use std::sync::Once;

use crate::error::{Error, Result};
use crate::model::{NetworkConfig, NeuronId};
use crate::sampler::{sample_geometric, RngStream};

/// Potentials and the current integer time.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteState {
    pub step: u64,
    pub potentials: Vec<f64>,
}

impl DiscreteState {
    pub fn initial(cfg: &NetworkConfig) -> Self {
        DiscreteState {
            step: 0,
            potentials: cfg.initial_potentials(),
        }
    }
}

/// The set of neurons that fired at an absolute step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub step: u64,
    pub fired: Vec<NeuronId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiscreteMode {
    Single,
    Multi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiscreteTermination {
    /// The requested horizon was reached.
    Horizon,
    /// Every firing probability is zero; nothing can ever fire again.
    Dead,
}

/// A finished discrete run: all firing events plus how it ended.
#[derive(Clone, Debug)]
pub struct DiscreteTrace {
    pub records: Vec<StepRecord>,
    pub termination: DiscreteTermination,
    pub final_step: u64,
}

static DECAY_IGNORED: Once = Once::new();
static PROB_CLAMPED: Once = Once::new();

/// Stepper over a fixed network. Decay laws are not consulted here: the
/// discrete model keeps potentials constant between firings.
pub struct DiscreteEngine<'a> {
    cfg: &'a NetworkConfig,
}

impl<'a> DiscreteEngine<'a> {
    pub fn new(cfg: &'a NetworkConfig) -> Self {
        DECAY_IGNORED.call_once(|| {
            log::warn!("discrete dynamics ignore decay laws; potentials hold between firings");
        });
        DiscreteEngine { cfg }
    }

    /// Firing probability of neuron `i`: the propensity clamped into
    /// `[0, 1]`, since here it is a Bernoulli parameter.
    fn firing_prob(&self, i: usize, u: f64) -> f64 {
        let p = self.cfg.neurons[i].phi.eval_raw(u);
        if p > 1.0 {
            PROB_CLAMPED.call_once(|| {
                log::warn!(
                    "firing propensity {p} exceeds 1 at potential {u}; clamping to 1 \
                     (unbounded monomial intensities are probabilities only after clamping)"
                );
            });
            1.0
        } else {
            p
        }
    }

    /// One Bernoulli step: draws one uniform per neuron, fires the
    /// successes, applies the potential update, and advances time by 1.
    pub fn single_step(&self, state: &mut DiscreteState, rng: &mut RngStream) -> StepRecord {
        let n = self.cfg.len();
        let mut fired = Vec::new();
        for i in 0..n {
            let p = self.firing_prob(i, state.potentials[i]);
            if rng.next_uniform() < p {
                fired.push(NeuronId(i));
            }
        }
        self.apply_update(state, &fired);
        state.step += 1;
        StepRecord {
            step: state.step,
            fired,
        }
    }

    /// Event-skipping step: samples a geometric wait per active neuron,
    /// jumps to the minimum, and fires the whole argmin set. Returns
    /// `None` when every probability is zero (no event can ever occur).
    pub fn multi_step(
        &self,
        state: &mut DiscreteState,
        rng: &mut RngStream,
    ) -> Option<StepRecord> {
        let n = self.cfg.len();
        let mut waits = vec![u64::MAX; n];
        let mut any = false;
        for (i, slot) in waits.iter_mut().enumerate() {
            let p = self.firing_prob(i, state.potentials[i]);
            if p > 0.0 {
                *slot = sample_geometric(p, rng).expect("probability in (0, 1]");
                any = true;
            }
        }
        if !any {
            return None;
        }
        let wait = *waits.iter().min().expect("non-empty network");
        let fired: Vec<NeuronId> = (0..n)
            .filter(|&i| waits[i] == wait)
            .map(NeuronId)
            .collect();
        self.apply_update(state, &fired);
        state.step += wait;
        Some(StepRecord {
            step: state.step,
            fired,
        })
    }

    fn apply_update(&self, state: &mut DiscreteState, fired: &[NeuronId]) {
        let mut mask = vec![false; self.cfg.len()];
        for id in fired {
            mask[id.0] = true;
        }
        for (i, u) in state.potentials.iter_mut().enumerate() {
            *u = if mask[i] {
                0.0
            } else {
                let input: f64 = fired
                    .iter()
                    .map(|&j| self.cfg.weights.get(j, NeuronId(i)))
                    .sum();
                (*u + input).max(0.0)
            };
        }
    }
}

/// Runs the chosen stepper from the configured initial potentials until
/// time reaches `horizon` or nothing can ever fire again, recording every
/// step at which at least one neuron fired.
pub fn run_discrete(
    cfg: &NetworkConfig,
    horizon: u64,
    mode: DiscreteMode,
    rng: &mut RngStream,
) -> DiscreteTrace {
    let engine = DiscreteEngine::new(cfg);
    let mut state = DiscreteState::initial(cfg);
    let mut records = Vec::new();
    let termination = loop {
        if state.step >= horizon {
            break DiscreteTermination::Horizon;
        }
        match mode {
            DiscreteMode::Single => {
                // The families vanish only at zero, so an all-zero state
                // can never produce another event.
                if state.potentials.iter().all(|&u| u == 0.0) {
                    break DiscreteTermination::Dead;
                }
                let record = engine.single_step(&mut state, rng);
                if !record.fired.is_empty() {
                    records.push(record);
                }
            }
            DiscreteMode::Multi => match engine.multi_step(&mut state, rng) {
                None => break DiscreteTermination::Dead,
                Some(record) => {
                    if record.step > horizon {
                        break DiscreteTermination::Horizon;
                    }
                    records.push(record);
                }
            },
        }
    };
    DiscreteTrace {
        records,
        termination,
        // A skipped event past the horizon does not count as elapsed time.
        final_step: state.step.min(horizon),
    }
}

/// Joint probability of observing the first event at step `t` with
/// exactly the given set firing, for constant per-neuron probabilities.
/// This is the product law the event-skipping construction must match.
pub fn first_event_probability(probs: &[f64], t: u64, fired_mask: u64) -> Result<f64> {
    if t == 0 || fired_mask == 0 {
        return Err(Error::Domain(
            "first event needs t >= 1 and a non-empty fired set".into(),
        ));
    }
    let mut p = 1.0;
    for (i, &q) in probs.iter().enumerate() {
        let in_set = fired_mask >> i & 1 == 1;
        p *= if in_set {
            (1.0 - q).powi(t as i32 - 1) * q
        } else {
            (1.0 - q).powi(t as i32)
        };
    }
    Ok(p)
}
