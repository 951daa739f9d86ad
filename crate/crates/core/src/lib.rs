//! Event-driven simulation of finite networks of stochastically firing
//! neurons whose membrane potentials decay deterministically between
//! discharges.
//!
//! A network is a finite set of neurons with a weight matrix `W[i][j]`
//! (the potential jump neuron `j` receives when `i` fires), a per-neuron
//! firing-propensity function `phi` of the current potential, and a
//! per-neuron decay law `V(u, t)` describing how potential evolves while
//! the neuron is silent. Two engines realize the dynamics:
//!
//! * [`discrete`]: synchronous Bernoulli steps on integer time, with an
//!   exact event-skipping variant based on geometric wait times;
//! * [`continuous`]: an exact event-driven process where each neuron's
//!   wait until its next discharge follows the (possibly defective)
//!   distribution induced by the hazard `phi(V(u, t))`.
//!
//! [`hazard`] evaluates the cumulative hazard and CDF of a single
//! neuron's wait time, both in closed form and by adaptive quadrature;
//! [`sampler`] inverts those laws to draw wait times; [`death`] decides
//! statically whether the whole network stops firing almost surely.
//!
//! Monte Carlo helpers ([`replica`], [`sampler::sample_batch`]) run
//! data-parallel when the default `parallel` feature is enabled and fall
//! back to sequential loops otherwise; both paths produce identical
//! results for identical seeds.

pub mod continuous;
pub mod death;
pub mod discrete;
mod error;
pub mod hazard;
pub mod model;
mod quad;
pub mod replica;
pub mod sampler;
pub mod stats;

pub use error::{Error, Result};
