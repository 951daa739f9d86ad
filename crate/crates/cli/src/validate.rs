//! The `validate` subcommand: checks every neuron's wait-time law
//! against its independent numeric routes and against its own samples.
//!
//! Per law (one per neuron with positive initial potential):
//!
//! * closed-form cumulative hazard vs adaptive quadrature on a time grid;
//! * inverse round trip `|F(G(xi)) - xi|` across the finite branch;
//! * KS distance between conditional-on-finite samples and the analytic
//!   CDF, plus the empirical infinite fraction against the atom.

use glsim_core::hazard::WaitTimeLaw;
use glsim_core::sampler::sample_batch;
use glsim_core::stats::ks_statistic;

use crate::config::ExperimentConfig;
use crate::CliError;

const HAZARD_GRID: [f64; 8] = [0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0];
const HAZARD_TOL: f64 = 1e-6;
const ROUND_TRIP_TOL_CLOSED: f64 = 1e-9;
const ROUND_TRIP_TOL_NUMERIC: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Default)]
pub struct ValidationOutcome {
    pub checks: Vec<Check>,
}

impl ValidationOutcome {
    fn push(&mut self, name: String, value: f64, threshold: f64) {
        self.checks.push(Check {
            name,
            value,
            threshold,
            pass: value <= threshold,
        });
    }

    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }
}

/// Runs the full suite; `samples` is the per-law sample count for the
/// KS and atom checks.
pub fn run_validation(
    cfg: &ExperimentConfig,
    samples: usize,
) -> Result<ValidationOutcome, CliError> {
    let mut outcome = ValidationOutcome::default();
    for (i, neuron) in cfg.network.neurons.iter().enumerate() {
        let label = format!("neuron {i}");
        if neuron.initial_potential == 0.0 {
            // Zero potential: the wait is +inf with probability 1 and
            // there is nothing to compare distributions against.
            outcome.push(format!("{label}: zero potential, law is trivial"), 0.0, 0.0);
            continue;
        }
        let law = WaitTimeLaw::new(neuron.phi, &neuron.decay, neuron.initial_potential)?;
        check_hazard_agreement(&mut outcome, &label, &law)?;
        check_round_trip(&mut outcome, &label, &law);
        check_samples(&mut outcome, &label, &law, samples, cfg.run.seed)?;
    }
    Ok(outcome)
}

fn check_hazard_agreement(
    outcome: &mut ValidationOutcome,
    label: &str,
    law: &WaitTimeLaw,
) -> Result<(), CliError> {
    let mut worst = 0.0f64;
    for &t in &HAZARD_GRID {
        let closed = law.cumulative_hazard(t);
        let numeric = law.cumulative_hazard_numeric(t, 1e-9)?;
        worst = worst.max((closed - numeric).abs());
    }
    outcome.push(
        format!("{label}: cumulative hazard vs quadrature (max abs diff)"),
        worst,
        HAZARD_TOL,
    );
    Ok(())
}

fn check_round_trip(outcome: &mut ValidationOutcome, label: &str, law: &WaitTimeLaw) {
    let threshold = law.defect_threshold();
    let tol = if law.has_closed_form() {
        ROUND_TRIP_TOL_CLOSED
    } else {
        ROUND_TRIP_TOL_NUMERIC
    };
    let mut worst = 0.0f64;
    for k in 1..100 {
        let xi = k as f64 / 100.0;
        if xi >= threshold {
            break;
        }
        let t = glsim_core::sampler::inverse_cdf(law, xi).expect("xi in [0, 1)");
        worst = worst.max((law.cdf(t) - xi).abs());
    }
    outcome.push(
        format!("{label}: inverse round trip (max |F(G(xi)) - xi|)"),
        worst,
        tol,
    );
}

fn check_samples(
    outcome: &mut ValidationOutcome,
    label: &str,
    law: &WaitTimeLaw,
    samples: usize,
    seed: u64,
) -> Result<(), CliError> {
    let draws = sample_batch(law, samples, seed);
    let finite: Vec<f64> = draws.iter().copied().filter(|t| t.is_finite()).collect();
    let atom = law.atom_at_infinity();

    if !finite.is_empty() {
        let ks = ks_statistic(&finite, law)?;
        // 1% asymptotic critical value for the conditional sample size.
        let critical = 1.63 / (finite.len() as f64).sqrt();
        outcome.push(
            format!("{label}: KS distance over {} finite draws", finite.len()),
            ks,
            critical,
        );
    }

    if atom > 0.0 {
        let frac = (samples - finite.len()) as f64 / samples as f64;
        let sigma = (atom * (1.0 - atom) / samples as f64).sqrt();
        outcome.push(
            format!("{label}: |empirical - analytic| infinite-draw fraction"),
            (frac - atom).abs(),
            4.0 * sigma + 1.0 / samples as f64,
        );
    }
    Ok(())
}
