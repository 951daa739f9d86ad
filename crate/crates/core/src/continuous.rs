//! Exact event-driven continuous-time dynamics.
//!
//! From the current potentials, every neuron independently draws the
//! wait until its next discharge from the law induced by its propensity
//! and decay ([`crate::hazard::WaitTimeLaw`]). The earliest wait wins:
//! the argmin set fires and resets to zero, everyone else decays over
//! the elapsed interval and then receives the fired neurons' weights,
//! clamped at zero. When every sampled wait is `+inf` the network is
//! dead: no neuron will ever fire again, and the event index at which
//! this happens is recorded.
//!
//! Between events potentials are purely deterministic, so a trace of
//! (event time, fired set) pairs reconstructs the full potential
//! trajectory; see [`potential_at`].

use crate::error::{Error, Result};
use crate::hazard::WaitTimeLaw;
use crate::model::{ExtendedTime, NetworkConfig, NeuronId};
use crate::sampler::{sample_wait_time, RngStream};

/// Event counter, absolute time, and potentials at the last event.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuousState {
    pub events: u64,
    pub abs_time: f64,
    pub potentials: Vec<f64>,
}

impl ContinuousState {
    pub fn initial(cfg: &NetworkConfig) -> Self {
        ContinuousState {
            events: 0,
            abs_time: 0.0,
            potentials: cfg.initial_potentials(),
        }
    }
}

/// One discharge: absolute time and the (almost surely singleton) set of
/// neurons that fired.
#[derive(Clone, Debug, PartialEq)]
pub struct Event {
    pub time: f64,
    pub fired: Vec<NeuronId>,
}

/// Outcome of sampling the next inter-event interval.
#[derive(Clone, Debug, PartialEq)]
pub struct NextEvent {
    /// Smallest sampled wait; `+inf` means the network is dead.
    pub wait: ExtendedTime,
    /// Argmin set (empty iff `wait` is infinite).
    pub fired: Vec<NeuronId>,
    /// Every neuron's sampled wait, in neuron order.
    pub per_neuron: Vec<ExtendedTime>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// Every wait came up `+inf`; no further discharges ever.
    Death,
    /// The event cap was reached.
    EventCap,
    /// The next event would land beyond the time cap.
    TimeCap,
}

/// Completed run: ordered events, the death index if the network died,
/// and how far in time the trace's knowledge extends.
#[derive(Clone, Debug)]
pub struct EventTrace {
    pub events: Vec<Event>,
    pub death_index: Option<u64>,
    pub termination: Termination,
    /// Potentials are determined on `[0, covered_time]`; `+inf` after
    /// death (everything decays forever).
    pub covered_time: f64,
}

/// Stopping rules for a run. `max_time` may be `+inf`.
#[derive(Clone, Copy, Debug)]
pub struct RunCaps {
    pub max_events: u64,
    pub max_time: f64,
}

impl RunCaps {
    pub fn validate(&self) -> Result<()> {
        if self.max_events == 0 {
            return Err(Error::Config("max_events must be >= 1".into()));
        }
        if self.max_time.is_nan() || self.max_time <= 0.0 {
            return Err(Error::Config(format!(
                "max_time must be positive, got {}",
                self.max_time
            )));
        }
        Ok(())
    }
}

// Abort when this many consecutive events advance time by less than
// ZENO_MIN_ADVANCE in total: the process is formally allowed to
// accumulate events without advancing, but simulating past that point
// is meaningless.
const ZENO_WINDOW: u64 = 100_000;
const ZENO_MIN_ADVANCE: f64 = 1e-12;

/// Event-driven stepper bound to one network.
pub struct ContinuousEngine<'a> {
    cfg: &'a NetworkConfig,
}

impl<'a> ContinuousEngine<'a> {
    /// Validates that every neuron has a power-law decay (the wait-time
    /// laws are defined only for those).
    pub fn new(cfg: &'a NetworkConfig) -> Result<Self> {
        for (i, neuron) in cfg.neurons.iter().enumerate() {
            if neuron.decay.power_law_params().is_none() {
                return Err(Error::Config(format!(
                    "neuron {i}: continuous dynamics require a power-law decay"
                )));
            }
        }
        Ok(ContinuousEngine { cfg })
    }

    /// Samples every neuron's wait (one uniform each, in neuron order)
    /// and returns the minimum with its argmin set.
    pub fn next_event(&self, state: &ContinuousState, rng: &mut RngStream) -> Result<NextEvent> {
        let mut per_neuron = Vec::with_capacity(self.cfg.len());
        for (i, neuron) in self.cfg.neurons.iter().enumerate() {
            let law = WaitTimeLaw::new(neuron.phi, &neuron.decay, state.potentials[i])?;
            per_neuron.push(sample_wait_time(&law, rng));
        }
        let wait = per_neuron.iter().copied().fold(f64::INFINITY, f64::min);
        let fired = if wait.is_finite() {
            per_neuron
                .iter()
                .enumerate()
                .filter(|(_, &t)| t == wait)
                .map(|(i, _)| NeuronId(i))
                .collect()
        } else {
            Vec::new()
        };
        Ok(NextEvent {
            wait,
            fired,
            per_neuron,
        })
    }

    /// Advances the state across one finite inter-event interval: fired
    /// neurons reset to zero, the rest decay over `wait` and then absorb
    /// the fired neurons' weights, clamped at zero.
    pub fn apply_event(&self, state: &mut ContinuousState, wait: f64, fired: &[NeuronId]) {
        debug_assert!(wait.is_finite());
        let mut mask = vec![false; self.cfg.len()];
        for id in fired {
            mask[id.0] = true;
        }
        for (i, u) in state.potentials.iter_mut().enumerate() {
            *u = if mask[i] {
                0.0
            } else {
                let decayed = self.cfg.neurons[i].decay.value(*u, wait);
                let input: f64 = fired
                    .iter()
                    .map(|&j| self.cfg.weights.get(j, NeuronId(i)))
                    .sum();
                (decayed + input).max(0.0)
            };
        }
        state.abs_time += wait;
        state.events += 1;
    }
}

/// Runs the event loop from the configured initial potentials until the
/// network dies or a cap is hit.
pub fn run_continuous(
    cfg: &NetworkConfig,
    caps: RunCaps,
    rng: &mut RngStream,
) -> Result<EventTrace> {
    caps.validate()?;
    let engine = ContinuousEngine::new(cfg)?;
    let mut state = ContinuousState::initial(cfg);
    let mut events = Vec::new();
    let mut zeno_events = 0u64;
    let mut zeno_mark = 0.0f64;
    loop {
        let next = engine.next_event(&state, rng)?;
        if next.wait.is_infinite() {
            return Ok(EventTrace {
                events,
                death_index: Some(state.events),
                termination: Termination::Death,
                covered_time: f64::INFINITY,
            });
        }
        if state.abs_time + next.wait > caps.max_time {
            return Ok(EventTrace {
                events,
                death_index: None,
                termination: Termination::TimeCap,
                covered_time: caps.max_time,
            });
        }
        engine.apply_event(&mut state, next.wait, &next.fired);
        events.push(Event {
            time: state.abs_time,
            fired: next.fired,
        });
        zeno_events += 1;
        if zeno_events >= ZENO_WINDOW {
            if state.abs_time - zeno_mark < ZENO_MIN_ADVANCE {
                return Err(Error::Numeric(format!(
                    "{ZENO_WINDOW} consecutive events advanced time by less than \
                     {ZENO_MIN_ADVANCE}; aborting a vanishing-interval cascade at t = {}",
                    state.abs_time
                )));
            }
            zeno_events = 0;
            zeno_mark = state.abs_time;
        }
        if state.events >= caps.max_events {
            return Ok(EventTrace {
                events,
                death_index: None,
                termination: Termination::EventCap,
                covered_time: state.abs_time,
            });
        }
    }
}

/// Potential of neuron `id` at absolute time `t`, reconstructed from the
/// trace by replaying jumps and decaying between them.
pub fn potential_at(
    trace: &EventTrace,
    cfg: &NetworkConfig,
    id: NeuronId,
    t: f64,
) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::Domain(format!("time must be >= 0, got {t}")));
    }
    if t > trace.covered_time {
        return Err(Error::Range(format!(
            "time {t} is beyond the trace's covered time {}",
            trace.covered_time
        )));
    }
    if id.0 >= cfg.len() {
        return Err(Error::Range(format!("no neuron {id} in this network")));
    }
    let neuron = &cfg.neurons[id.0];
    let mut u = neuron.initial_potential;
    let mut last = 0.0f64;
    for event in trace.events.iter().take_while(|e| e.time <= t) {
        u = if event.fired.contains(&id) {
            0.0
        } else {
            let input: f64 = event
                .fired
                .iter()
                .map(|&j| cfg.weights.get(j, id))
                .sum();
            (neuron.decay.value(u, event.time - last) + input).max(0.0)
        };
        last = event.time;
    }
    Ok(neuron.decay.value(u, t - last))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DecayLaw, Neuron, PotentialFn, WeightMatrix};

    fn neuron(phi: PotentialFn, gamma: f64, mu: f64, a: f64) -> Neuron {
        Neuron::new(phi, DecayLaw::power_law(gamma, mu).unwrap(), a).unwrap()
    }

    fn single(phi: PotentialFn, gamma: f64, a: f64) -> NetworkConfig {
        NetworkConfig::new(vec![neuron(phi, gamma, 1.0, a)], WeightMatrix::zeros(1)).unwrap()
    }

    fn caps(max_events: u64) -> RunCaps {
        RunCaps {
            max_events,
            max_time: f64::INFINITY,
        }
    }

    #[test]
    fn zero_potentials_yield_immediate_death() {
        let cfg = single(PotentialFn::rational(1, 1.0).unwrap(), 2.0, 0.0);
        let mut rng = RngStream::new(0, 0);
        let trace = run_continuous(&cfg, caps(100), &mut rng).unwrap();
        assert!(trace.events.is_empty());
        assert_eq!(trace.death_index, Some(0));
        assert_eq!(trace.termination, Termination::Death);
    }

    #[test]
    fn recurrent_law_always_fires() {
        // Divergent total hazard: waits are finite almost surely.
        let cfg = single(PotentialFn::monomial(1, 1.0).unwrap(), 2.0, 1.0);
        let engine = ContinuousEngine::new(&cfg).unwrap();
        let state = ContinuousState::initial(&cfg);
        let mut rng = RngStream::new(1, 0);
        for _ in 0..1000 {
            let next = engine.next_event(&state, &mut rng).unwrap();
            assert!(next.wait.is_finite());
            assert_eq!(next.fired, vec![NeuronId(0)]);
        }
    }

    #[test]
    fn continuous_laws_never_tie() {
        let n = neuron(PotentialFn::rational(1, 1.0).unwrap(), 2.0, 1.0, 1.0);
        let cfg = NetworkConfig::new(vec![n, n], WeightMatrix::zeros(2)).unwrap();
        let engine = ContinuousEngine::new(&cfg).unwrap();
        let state = ContinuousState::initial(&cfg);
        let mut rng = RngStream::new(2, 0);
        for _ in 0..100_000 {
            let next = engine.next_event(&state, &mut rng).unwrap();
            assert_eq!(next.fired.len(), 1, "simultaneous discharge sampled");
        }
    }

    #[test]
    fn apply_event_decays_and_adds_weights() {
        let a = neuron(PotentialFn::monomial(1, 1.0).unwrap(), 1.0, 1.0, 4.0);
        let b = neuron(PotentialFn::monomial(1, 1.0).unwrap(), 1.0, 1.0, 1.0);
        let mut w = WeightMatrix::zeros(2);
        w.set(NeuronId(0), NeuronId(1), 2.0);
        let cfg = NetworkConfig::new(vec![a, b], w).unwrap();
        let engine = ContinuousEngine::new(&cfg).unwrap();
        let mut state = ContinuousState::initial(&cfg);
        engine.apply_event(&mut state, 2f64.ln(), &[NeuronId(0)]);
        assert_eq!(state.potentials[0], 0.0);
        // 1 * e^{-ln 2} + 2 = 2.5
        assert!((state.potentials[1] - 2.5).abs() < 1e-12);
        assert_eq!(state.events, 1);
    }

    #[test]
    fn inhibitory_weight_clamps_at_zero() {
        let a = neuron(PotentialFn::monomial(1, 1.0).unwrap(), 1.0, 1.0, 4.0);
        let b = neuron(PotentialFn::monomial(1, 1.0).unwrap(), 1.0, 1.0, 1.0);
        let mut w = WeightMatrix::zeros(2);
        w.set(NeuronId(0), NeuronId(1), -10.0);
        let cfg = NetworkConfig::new(vec![a, b], w).unwrap();
        let engine = ContinuousEngine::new(&cfg).unwrap();
        let mut state = ContinuousState::initial(&cfg);
        engine.apply_event(&mut state, 0.3, &[NeuronId(0)]);
        assert_eq!(state.potentials[1], 0.0);
    }

    #[test]
    fn zero_weights_mean_pure_decay() {
        let a = neuron(PotentialFn::monomial(1, 1.0).unwrap(), 1.0, 1.0, 4.0);
        let b = neuron(PotentialFn::monomial(1, 1.0).unwrap(), 1.0, 1.0, 1.0);
        let cfg = NetworkConfig::new(vec![a, b], WeightMatrix::zeros(2)).unwrap();
        let engine = ContinuousEngine::new(&cfg).unwrap();
        let mut state = ContinuousState::initial(&cfg);
        engine.apply_event(&mut state, 1.0, &[NeuronId(0)]);
        assert!((state.potentials[1] - (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn single_recurrent_neuron_fires_once_then_dies() {
        // Divergent total hazard guarantees the first discharge, but the
        // reset leaves the potential at zero with nothing to recharge it.
        let cfg = single(PotentialFn::monomial(1, 1.0).unwrap(), 2.0, 1.0);
        for k in 0..100 {
            let mut rng = RngStream::new(10, k);
            let trace = run_continuous(&cfg, caps(50), &mut rng).unwrap();
            assert_eq!(trace.termination, Termination::Death);
            assert_eq!(trace.events.len(), 1);
            assert_eq!(trace.death_index, Some(1));
            assert!(trace.events[0].time.is_finite());
        }
    }

    #[test]
    fn recurrent_cycle_hits_event_cap() {
        let n = neuron(PotentialFn::monomial(1, 1.0).unwrap(), 2.0, 1.0, 1.0);
        let mut w = WeightMatrix::zeros(2);
        w.set(NeuronId(0), NeuronId(1), 1.0);
        w.set(NeuronId(1), NeuronId(0), 1.0);
        let cfg = NetworkConfig::new(vec![n, n], w).unwrap();
        for k in 0..100 {
            let mut rng = RngStream::new(10, k);
            let trace = run_continuous(&cfg, caps(50), &mut rng).unwrap();
            assert_eq!(trace.termination, Termination::EventCap);
            assert_eq!(trace.events.len(), 50);
            assert!(trace.events.iter().all(|e| e.time.is_finite()));
        }
    }

    #[test]
    fn defective_single_neuron_dies_at_first_event_with_atom_rate() {
        // P(first wait = +inf) = e^{-1} for this law.
        let cfg = single(PotentialFn::monomial(1, 1.0).unwrap(), 1.0, 1.0);
        let n = 10_000;
        let mut immediate = 0u64;
        for k in 0..n {
            let mut rng = RngStream::new(21, k);
            let trace = run_continuous(&cfg, caps(1000), &mut rng).unwrap();
            if trace.death_index == Some(0) {
                immediate += 1;
            }
        }
        let p = (-1f64).exp();
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        let frac = immediate as f64 / n as f64;
        assert!((frac - p).abs() < 3.0 * sigma, "frac {frac} vs atom {p}");
    }

    #[test]
    fn event_times_strictly_increase() {
        let n = neuron(PotentialFn::rational(1, 1.0).unwrap(), 2.0, 1.0, 1.0);
        let mut w = WeightMatrix::zeros(2);
        w.set(NeuronId(0), NeuronId(1), 1.0);
        w.set(NeuronId(1), NeuronId(0), 1.0);
        let cfg = NetworkConfig::new(vec![n, n], w).unwrap();
        let mut rng = RngStream::new(4, 0);
        let trace = run_continuous(&cfg, caps(2000), &mut rng).unwrap();
        assert_eq!(trace.events.len(), 2000);
        let mut prev = 0.0;
        for e in &trace.events {
            assert!(e.time > prev);
            prev = e.time;
        }
    }

    #[test]
    fn identical_seeds_reproduce_traces_exactly() {
        let n = neuron(PotentialFn::rational(1, 1.0).unwrap(), 2.0, 1.0, 1.0);
        let mut w = WeightMatrix::zeros(2);
        w.set(NeuronId(0), NeuronId(1), 0.7);
        w.set(NeuronId(1), NeuronId(0), 0.4);
        let cfg = NetworkConfig::new(vec![n, n], w).unwrap();
        let run = || {
            let mut rng = RngStream::new(77, 3);
            run_continuous(&cfg, caps(500), &mut rng).unwrap()
        };
        let a = run();
        let b = run();
        assert_eq!(a.events, b.events);
        assert_eq!(a.death_index, b.death_index);
    }

    #[test]
    fn bounded_total_hazard_network_always_dies() {
        // Uniformly bounded total hazard: death is certain, and quickly.
        let n = neuron(PotentialFn::monomial(1, 1.0).unwrap(), 1.0, 1.0, 1.0);
        let mut w = WeightMatrix::zeros(2);
        w.set(NeuronId(0), NeuronId(1), 0.5);
        w.set(NeuronId(1), NeuronId(0), 0.5);
        let cfg = NetworkConfig::new(vec![n, n], w).unwrap();
        for k in 0..1000 {
            let mut rng = RngStream::new(31, k);
            let trace = run_continuous(&cfg, caps(100_000), &mut rng).unwrap();
            assert_eq!(trace.termination, Termination::Death, "replica {k}");
        }
    }

    #[test]
    fn time_advances_past_any_bound_for_bounded_propensities() {
        // phi <= 1 keeps per-interval hazard mass bounded, so cumulative
        // time cannot accumulate at a point.
        let n = neuron(PotentialFn::rational(1, 1.0).unwrap(), 2.0, 1.0, 1.0);
        let mut w = WeightMatrix::zeros(2);
        w.set(NeuronId(0), NeuronId(1), 1.0);
        w.set(NeuronId(1), NeuronId(0), 1.0);
        let cfg = NetworkConfig::new(vec![n, n], w).unwrap();
        for k in 0..100 {
            let mut rng = RngStream::new(57, k);
            let trace = run_continuous(&cfg, caps(5000), &mut rng).unwrap();
            assert_eq!(trace.termination, Termination::EventCap);
            assert!(
                trace.events.last().unwrap().time > 10.0,
                "replica {k} accumulated events without advancing"
            );
        }
    }

    #[test]
    fn time_cap_stops_before_the_next_event() {
        let n = neuron(PotentialFn::monomial(1, 1.0).unwrap(), 2.0, 1.0, 1.0);
        let mut w = WeightMatrix::zeros(2);
        w.set(NeuronId(0), NeuronId(1), 1.0);
        w.set(NeuronId(1), NeuronId(0), 1.0);
        let cfg = NetworkConfig::new(vec![n, n], w).unwrap();
        let mut rng = RngStream::new(3, 0);
        let trace = run_continuous(
            &cfg,
            RunCaps {
                max_events: u64::MAX,
                max_time: 5.0,
            },
            &mut rng,
        )
        .unwrap();
        assert_eq!(trace.termination, Termination::TimeCap);
        assert_eq!(trace.covered_time, 5.0);
        assert!(!trace.events.is_empty());
        assert!(trace.events.iter().all(|e| e.time <= 5.0));
    }

    #[test]
    fn potential_queries_replay_the_trace() {
        let a = neuron(PotentialFn::monomial(1, 1.0).unwrap(), 1.0, 1.0, 4.0);
        let b = neuron(PotentialFn::monomial(1, 1.0).unwrap(), 1.0, 1.0, 1.0);
        let mut w = WeightMatrix::zeros(2);
        w.set(NeuronId(0), NeuronId(1), 2.0);
        let cfg = NetworkConfig::new(vec![a, b], w).unwrap();
        let t1 = 2f64.ln();
        let trace = EventTrace {
            events: vec![Event {
                time: t1,
                fired: vec![NeuronId(0)],
            }],
            death_index: None,
            termination: Termination::EventCap,
            covered_time: t1 + 1.0,
        };
        // At t = 0: initial potentials.
        assert_eq!(potential_at(&trace, &cfg, NeuronId(0), 0.0).unwrap(), 4.0);
        // At the event: the firing neuron is at zero, the other took the jump.
        assert_eq!(potential_at(&trace, &cfg, NeuronId(0), t1).unwrap(), 0.0);
        assert!((potential_at(&trace, &cfg, NeuronId(1), t1).unwrap() - 2.5).abs() < 1e-12);
        // Between events: exponential interpolation from the post-event value.
        let t = t1 + 0.5;
        let expected = 2.5 * (-0.5f64).exp();
        assert!((potential_at(&trace, &cfg, NeuronId(1), t).unwrap() - expected).abs() < 1e-12);
        // Before the event: decay from the initial value.
        let expected = 4.0 * (-0.25f64).exp();
        assert!((potential_at(&trace, &cfg, NeuronId(0), 0.25).unwrap() - expected).abs() < 1e-12);
        // Beyond coverage: range error.
        assert!(matches!(
            potential_at(&trace, &cfg, NeuronId(0), t1 + 2.0),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn potentials_nonnegative_throughout_runs() {
        let n = neuron(PotentialFn::rational(1, 1.0).unwrap(), 2.0, 1.0, 1.0);
        let mut w = WeightMatrix::zeros(2);
        w.set(NeuronId(0), NeuronId(1), -3.0);
        w.set(NeuronId(1), NeuronId(0), 1.0);
        let cfg = NetworkConfig::new(vec![n, n], w).unwrap();
        let mut rng = RngStream::new(12, 0);
        let trace = run_continuous(&cfg, caps(500), &mut rng).unwrap();
        for e in &trace.events {
            for i in 0..2 {
                let u = potential_at(&trace, &cfg, NeuronId(i), e.time).unwrap();
                assert!(u >= 0.0);
            }
        }
    }

    #[test]
    fn symptomatic_decay_is_rejected_by_engine() {
        let bad = Neuron {
            phi: PotentialFn::rational(1, 1.0).unwrap(),
            decay: DecayLaw::Symptomatic,
            initial_potential: 1.0,
        };
        let cfg = NetworkConfig::new(vec![bad], WeightMatrix::zeros(1)).unwrap();
        assert!(ContinuousEngine::new(&cfg).is_err());
    }
}
