//! Wait-time sampling by inverse transform.
//!
//! A uniform draw `xi` on `[0, 1)` maps to `+inf` when it reaches the
//! law's defect threshold and otherwise to the unique finite `t` with
//! `F(t) = xi`. The six closed-form hazard branches invert analytically;
//! every other law inverts by monotone bisection on the cumulative
//! hazard. Also provides the geometric sampler used by the discrete
//! event-skipping engine.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hazard::{Branch, WaitTimeLaw};
use crate::model::{ExtendedTime, PotentialFn};

/// Seeded, stream-addressed source of uniform variates.
///
/// Identical `(seed, stream_id)` pairs reproduce the same sequence;
/// distinct stream ids give statistically independent streams, which is
/// what lets replicas run concurrently without sharing state.
#[derive(Clone, Debug)]
pub struct RngStream {
    rng: ChaCha8Rng,
    seed: u64,
    stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RngStream {
            rng,
            seed,
            stream_id,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform `f64` in `[0, 1)`.
    pub fn next_uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }
}

/// Inverts the wait-time CDF at `xi` in `[0, 1)`.
///
/// Returns `+inf` for `xi` at or above the defect threshold (the sup
/// convention: the threshold itself is a measure-zero event).
pub fn inverse_cdf(law: &WaitTimeLaw, xi: f64) -> Result<ExtendedTime> {
    check_unit_interval(xi)?;
    Ok(invert(law, xi))
}

/// Inverts by bracket-doubling bisection on the cumulative hazard,
/// ignoring the closed forms. Used to cross-check them.
pub fn inverse_cdf_bisect(law: &WaitTimeLaw, xi: f64) -> Result<ExtendedTime> {
    check_unit_interval(xi)?;
    if xi == 0.0 {
        return Ok(0.0);
    }
    if xi >= law.defect_threshold() {
        return Ok(f64::INFINITY);
    }
    Ok(invert_hazard_by_bisection(
        |t| law.cumulative_hazard(t),
        xi,
    ))
}

fn check_unit_interval(xi: f64) -> Result<()> {
    if !(0.0..1.0).contains(&xi) {
        return Err(Error::Domain(format!(
            "inverse transform requires xi in [0, 1), got {xi}"
        )));
    }
    Ok(())
}

/// Solves `1 - exp(-hazard(t)) = xi` for a non-decreasing hazard with
/// `hazard(0) = 0`. The bracket's upper end doubles from 1 until it
/// covers the target, then bisection runs to f64 resolution. Returns
/// `+inf` if no finite bracket reaches the target.
pub fn invert_hazard_by_bisection(hazard: impl Fn(f64) -> f64, xi: f64) -> ExtendedTime {
    if xi == 0.0 {
        return 0.0;
    }
    let target = -(-xi).ln_1p();
    let mut hi = 1.0f64;
    while hazard(hi) < target {
        hi *= 2.0;
        if hi > 1e300 {
            return f64::INFINITY;
        }
    }
    let mut lo = if hi > 1.0 { hi * 0.5 } else { 0.0 };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if hazard(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn invert(law: &WaitTimeLaw, xi: f64) -> ExtendedTime {
    if xi == 0.0 {
        return 0.0;
    }
    if xi >= law.defect_threshold() {
        return f64::INFINITY;
    }
    let Some(branch) = law.branch() else {
        return invert_hazard_by_bisection(|t| law.cumulative_hazard(t), xi);
    };
    let v0 = law.start_potential();
    let mu = law.mu();
    let log_survival = (-xi).ln_1p(); // ln(1 - xi), negative
    let t = match branch {
        Branch::ExpDecayRational => {
            let (r, beta) = rational_params(law.phi());
            let rm = r as f64 * mu;
            let p0 = v0.powi(r as i32);
            // exp(-rm t) = 1 + (p0 + beta)/p0 * ((1-xi)^(rm) - 1)
            let x = (p0 + beta) / p0 * (rm * log_survival).exp_m1();
            if x <= -1.0 {
                return f64::INFINITY;
            }
            -x.ln_1p() / rm
        }
        Branch::ExpDecayMonomial => {
            let (r, beta) = monomial_params(law.phi());
            let rm = r as f64 * mu;
            // exp(-rm t) = 1 + rm ln(1-xi) / (beta v0^r); the survival log
            // is negative, so the argument stays inside (0, 1].
            let x = rm * log_survival / (beta * v0.powi(r as i32));
            if x <= -1.0 {
                return f64::INFINITY;
            }
            -x.ln_1p() / rm
        }
        Branch::RecipDecayRational1 => {
            let (_, beta) = rational_params(law.phi());
            (-beta * mu * log_survival).exp_m1() * (1.0 / v0 + 1.0 / beta) / mu
        }
        Branch::RecipDecayRational2 => {
            let (_, beta) = rational_params(law.phi());
            let sb = beta.sqrt();
            let angle = (v0 / sb).atan() + mu * sb * log_survival;
            if angle <= 0.0 {
                return f64::INFINITY;
            }
            ((1.0 / (sb * angle.tan())) - 1.0 / v0) / mu
        }
        Branch::RecipDecayMonomial1 => {
            let (_, beta) = monomial_params(law.phi());
            (-mu / beta * log_survival).exp_m1() / (mu * v0)
        }
        Branch::RecipDecayMonomialHigher => {
            let (r, beta) = monomial_params(law.phi());
            let c = beta / ((r as f64 - 1.0) * mu);
            // Solve for the potential at the hit time, then invert the decay.
            let target_pow = v0.powi(r as i32 - 1) + log_survival / c;
            if target_pow <= 0.0 {
                return f64::INFINITY;
            }
            let vt = target_pow.powf(1.0 / (r as f64 - 1.0));
            (1.0 / vt - 1.0 / v0) / mu
        }
    };
    t.max(0.0)
}

fn rational_params(phi: PotentialFn) -> (u32, f64) {
    match phi {
        PotentialFn::Rational { r, beta } => (r, beta),
        _ => unreachable!(),
    }
}

fn monomial_params(phi: PotentialFn) -> (u32, f64) {
    match phi {
        PotentialFn::Monomial { r, beta } => (r, beta),
        _ => unreachable!(),
    }
}

/// Draws one wait time: a uniform variate pushed through [`inverse_cdf`].
pub fn sample_wait_time(law: &WaitTimeLaw, rng: &mut RngStream) -> ExtendedTime {
    let xi = rng.next_uniform();
    invert(law, xi)
}

/// Geometric variate on `{1, 2, ...}` with success probability `p` in
/// `(0, 1]`, via the exact inverse transform (one uniform per draw).
pub fn sample_geometric(p: f64, rng: &mut RngStream) -> Result<u64> {
    if p.is_nan() || p <= 0.0 || p > 1.0 {
        return Err(Error::Domain(format!(
            "geometric parameter must be in (0, 1], got {p}"
        )));
    }
    let xi = rng.next_uniform();
    if p == 1.0 {
        return Ok(1);
    }
    let k = ((-xi).ln_1p() / (-p).ln_1p()).ceil();
    Ok((k as u64).max(1))
}

/// Chunk width for batch sampling; fixed so that sequential and parallel
/// batches draw from identical sub-streams.
const BATCH_CHUNK: usize = 8192;

/// Draws `n` wait times using sub-streams `(seed, chunk_index)`, one per
/// [`BATCH_CHUNK`]-sized block. Runs data-parallel over chunks when the
/// `parallel` feature is enabled; output is identical either way.
pub fn sample_batch(law: &WaitTimeLaw, n: usize, seed: u64) -> Vec<ExtendedTime> {
    let chunks = batch_chunks(n);
    let draw = |chunk: usize| sample_chunk(law, n, seed, chunk);
    #[cfg(feature = "parallel")]
    let parts: Vec<Vec<f64>> = {
        use rayon::prelude::*;
        (0..chunks).into_par_iter().map(draw).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<Vec<f64>> = (0..chunks).map(draw).collect();
    parts.concat()
}

/// Sequential reference implementation of [`sample_batch`]; same chunked
/// sub-streams, same output.
pub fn sample_batch_seq(law: &WaitTimeLaw, n: usize, seed: u64) -> Vec<ExtendedTime> {
    (0..batch_chunks(n))
        .map(|chunk| sample_chunk(law, n, seed, chunk))
        .collect::<Vec<_>>()
        .concat()
}

fn batch_chunks(n: usize) -> usize {
    n.div_ceil(BATCH_CHUNK)
}

fn sample_chunk(law: &WaitTimeLaw, n: usize, seed: u64, chunk: usize) -> Vec<f64> {
    let lo = chunk * BATCH_CHUNK;
    let hi = (lo + BATCH_CHUNK).min(n);
    let mut rng = RngStream::new(seed, chunk as u64);
    (lo..hi).map(|_| sample_wait_time(law, &mut rng)).collect()
}
