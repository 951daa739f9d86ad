//! A single neuron's wait-time law between discharges.
//!
//! With potential `u0` at the start of the waiting period and power-law
//! decay `V`, the firing intensity after `s` silent time units is
//! `lambda(s) = phi(V(u0, s))`. The cumulative hazard
//!
//! ```text
//! H(t) = integral of lambda over [0, t]
//!      = (1/mu) * integral of phi(v) / v^gamma over [V(t), V(0)]
//! ```
//!
//! determines the CDF `F(t) = 1 - exp(-H(t))`. When the total hazard
//! `H(inf)` is finite the law is defective: the wait equals `+inf` with
//! probability `exp(-H(inf))`, and `F` approaches the defect threshold
//! `1 - exp(-H(inf))` from below.
//!
//! Six `(family, gamma)` combinations have elementary antiderivatives
//! and are evaluated in closed form; everything else (the exponential
//! family for any `gamma`, and any `gamma` outside `{1, 2}`) goes
//! through adaptive quadrature. [`WaitTimeLaw::cumulative_hazard_numeric`]
//! is always quadrature-backed and serves as the independent cross-check
//! for every closed form.

use crate::death;
use crate::error::{Error, Result};
use crate::model::{DecayLaw, PotentialFn};
use crate::quad;

/// Default absolute tolerance for quadrature-backed evaluations.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Closed-form dispatch targets, named by decay shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Branch {
    /// gamma = 1, rational family (any r).
    ExpDecayRational,
    /// gamma = 1, monomial family (any r).
    ExpDecayMonomial,
    /// gamma = 2, rational family, r = 1.
    RecipDecayRational1,
    /// gamma = 2, rational family, r = 2.
    RecipDecayRational2,
    /// gamma = 2, monomial family, r = 1.
    RecipDecayMonomial1,
    /// gamma = 2, monomial family, r >= 2.
    RecipDecayMonomialHigher,
}

/// Wait-time distribution of one neuron holding potential `u0` under a
/// power-law decay. Immutable; total hazard is computed on construction.
#[derive(Clone, Copy, Debug)]
pub struct WaitTimeLaw {
    phi: PotentialFn,
    gamma: f64,
    mu: f64,
    start_potential: f64,
    total_hazard: f64,
}

impl WaitTimeLaw {
    pub fn new(phi: PotentialFn, decay: &DecayLaw, start_potential: f64) -> Result<Self> {
        phi.validate()?;
        decay.validate()?;
        let (gamma, mu) = decay.power_law_params().ok_or_else(|| {
            Error::Config("wait-time law requires a power-law decay".into())
        })?;
        if !start_potential.is_finite() || start_potential < 0.0 {
            return Err(Error::Domain(format!(
                "start potential must be finite and >= 0, got {start_potential}"
            )));
        }
        let total_hazard = compute_total_hazard(phi, gamma, mu, start_potential)?;
        Ok(WaitTimeLaw {
            phi,
            gamma,
            mu,
            start_potential,
            total_hazard,
        })
    }

    pub fn phi(&self) -> PotentialFn {
        self.phi
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn start_potential(&self) -> f64 {
        self.start_potential
    }

    /// Potential remaining after `t` silent time units.
    pub fn decay_at(&self, t: f64) -> f64 {
        DecayLaw::PowerLaw {
            gamma: self.gamma,
            mu: self.mu,
        }
        .value(self.start_potential, t)
    }

    pub(crate) fn branch(&self) -> Option<Branch> {
        branch_of(self.phi, self.gamma)
    }

    /// True when this law evaluates and inverts in closed form.
    pub fn has_closed_form(&self) -> bool {
        self.branch().is_some()
    }

    /// Cumulative hazard `H(t)`; `t = +inf` yields the total hazard.
    ///
    /// Closed form on the six supported branches, adaptive quadrature at
    /// the default tolerance otherwise.
    pub fn cumulative_hazard(&self, t: f64) -> f64 {
        assert!(t >= 0.0, "time must be >= 0, got {t}");
        if self.start_potential == 0.0 || t == 0.0 {
            return 0.0;
        }
        if t.is_infinite() {
            return self.total_hazard;
        }
        match self.branch() {
            Some(branch) => self.closed_hazard(branch, t),
            None => {
                let out = quad::adaptive_simpson(
                    &|s| self.phi.eval_raw(self.decay_at(s)),
                    0.0,
                    t,
                    DEFAULT_TOL,
                );
                if !out.converged {
                    log::warn!(
                        "cumulative hazard quadrature hit its subinterval cap at t = {t}; \
                         returning the deepest estimate"
                    );
                }
                out.value
            }
        }
    }

    /// Quadrature evaluation of `H(t)` to absolute tolerance `tol`,
    /// independent of every closed form.
    pub fn cumulative_hazard_numeric(&self, t: f64, tol: f64) -> Result<f64> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::Domain(format!(
                "numeric hazard requires finite t >= 0, got {t}"
            )));
        }
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::Domain(format!("tolerance must be > 0, got {tol}")));
        }
        if self.start_potential == 0.0 {
            return Ok(0.0);
        }
        let out = quad::adaptive_simpson(
            &|s| self.phi.eval_raw(self.decay_at(s)),
            0.0,
            t,
            tol,
        );
        if out.converged {
            Ok(out.value)
        } else {
            Err(Error::Numeric(format!(
                "hazard quadrature did not reach tolerance {tol} within {} subintervals",
                quad::MAX_INTERVALS
            )))
        }
    }

    /// `H(inf)`, possibly `+inf`.
    pub fn total_hazard(&self) -> f64 {
        self.total_hazard
    }

    /// `F(t) = 1 - exp(-H(t))` for finite `t`; `F(+inf) = 1` by the atom
    /// convention.
    pub fn cdf(&self, t: f64) -> f64 {
        if t.is_infinite() {
            return 1.0;
        }
        -(-self.cumulative_hazard(t)).exp_m1()
    }

    /// `lim F(t) = 1 - exp(-H(inf))`: the finite-wait mass. Draws at or
    /// above this threshold map to `+inf`.
    pub fn defect_threshold(&self) -> f64 {
        -(-self.total_hazard).exp_m1()
    }

    /// `P(T = +inf) = exp(-H(inf))`.
    pub fn atom_at_infinity(&self) -> f64 {
        (-self.total_hazard).exp()
    }

    fn closed_hazard(&self, branch: Branch, t: f64) -> f64 {
        let v0 = self.start_potential;
        let mu = self.mu;
        match branch {
            Branch::ExpDecayRational => {
                let (r, beta) = rational_params(self.phi);
                let rm = r as f64 * mu;
                let p0 = v0.powi(r as i32);
                let pt = p0 * (-rm * t).exp();
                ((p0 + beta) / (pt + beta)).ln() / rm
            }
            Branch::ExpDecayMonomial => {
                let (r, beta) = monomial_params(self.phi);
                let rm = r as f64 * mu;
                beta * v0.powi(r as i32) / rm * -(-rm * t).exp_m1()
            }
            Branch::RecipDecayRational1 => {
                let (_, beta) = rational_params(self.phi);
                (beta * v0 * mu * t / (v0 + beta)).ln_1p() / (beta * mu)
            }
            Branch::RecipDecayRational2 => {
                let (_, beta) = rational_params(self.phi);
                let sb = beta.sqrt();
                let vt = v0 / (1.0 + v0 * mu * t);
                ((v0 / sb).atan() - (vt / sb).atan()) / (sb * mu)
            }
            Branch::RecipDecayMonomial1 => {
                let (_, beta) = monomial_params(self.phi);
                beta / mu * (v0 * mu * t).ln_1p()
            }
            Branch::RecipDecayMonomialHigher => {
                let (r, beta) = monomial_params(self.phi);
                let c = beta / ((r as f64 - 1.0) * mu);
                c * v0.powi(r as i32 - 1) * -((1.0 - r as f64) * (v0 * mu * t).ln_1p()).exp_m1()
            }
        }
    }
}

fn rational_params(phi: PotentialFn) -> (u32, f64) {
    match phi {
        PotentialFn::Rational { r, beta } => (r, beta),
        _ => unreachable!("branch dispatch guarantees a rational family"),
    }
}

fn monomial_params(phi: PotentialFn) -> (u32, f64) {
    match phi {
        PotentialFn::Monomial { r, beta } => (r, beta),
        _ => unreachable!("branch dispatch guarantees a monomial family"),
    }
}

pub(crate) fn branch_of(phi: PotentialFn, gamma: f64) -> Option<Branch> {
    if gamma == 1.0 {
        match phi {
            PotentialFn::Rational { .. } => Some(Branch::ExpDecayRational),
            PotentialFn::Monomial { .. } => Some(Branch::ExpDecayMonomial),
            PotentialFn::Exponential { .. } => None,
        }
    } else if gamma == 2.0 {
        match phi {
            PotentialFn::Rational { r: 1, .. } => Some(Branch::RecipDecayRational1),
            PotentialFn::Rational { r: 2, .. } => Some(Branch::RecipDecayRational2),
            PotentialFn::Rational { .. } => None,
            PotentialFn::Monomial { r: 1, .. } => Some(Branch::RecipDecayMonomial1),
            PotentialFn::Monomial { .. } => Some(Branch::RecipDecayMonomialHigher),
            PotentialFn::Exponential { .. } => None,
        }
    } else {
        None
    }
}

fn compute_total_hazard(phi: PotentialFn, gamma: f64, mu: f64, v0: f64) -> Result<f64> {
    if v0 == 0.0 {
        return Ok(0.0);
    }
    if let Some(branch) = branch_of(phi, gamma) {
        return Ok(closed_total_hazard(branch, phi, mu, v0));
    }
    // Finiteness is decided analytically: near v = 0 the integrand
    // phi(v) / v^gamma behaves like v^(d - gamma) with d the order of the
    // zero of phi, so the integral converges iff d > gamma - 1.
    let d = death::zero_order(&phi) as f64;
    if d <= gamma - 1.0 {
        return Ok(f64::INFINITY);
    }
    // Substituting v = v0 * w^k with k = 2 / (d - gamma + 1) turns the
    // improper endpoint into an integrand vanishing linearly at w = 0,
    // so the whole mass is a proper integral over [0, 1].
    let k = 2.0 / (d - gamma + 1.0);
    let integrand = |w: f64| {
        if w <= 0.0 {
            return 0.0;
        }
        let v = v0 * w.powf(k);
        if v == 0.0 {
            return 0.0;
        }
        phi_over_v_gamma(phi, v, gamma) * v0 * k * w.powf(k - 1.0)
    };
    let out = quad::adaptive_simpson(&integrand, 0.0, 1.0, DEFAULT_TOL * mu);
    if out.converged {
        Ok(out.value / mu)
    } else {
        Err(Error::Numeric(format!(
            "total hazard quadrature did not converge within {} subintervals",
            quad::MAX_INTERVALS
        )))
    }
}

/// `phi(v) / v^gamma` in forms that stay finite for tiny `v`.
fn phi_over_v_gamma(phi: PotentialFn, v: f64, gamma: f64) -> f64 {
    match phi {
        PotentialFn::Exponential { beta } => {
            // (1 - exp(-beta v)) / v^gamma = beta v^(1-gamma) * ratio,
            // with ratio = (1 - exp(-x)) / x in (0, 1].
            let x = beta * v;
            let ratio = if x < 1e-8 { 1.0 - 0.5 * x } else { -(-x).exp_m1() / x };
            beta * v.powf(1.0 - gamma) * ratio
        }
        PotentialFn::Rational { r, beta } => v.powf(r as f64 - gamma) / (v.powi(r as i32) + beta),
        PotentialFn::Monomial { r, beta } => beta * v.powf(r as f64 - gamma),
    }
}

fn closed_total_hazard(branch: Branch, phi: PotentialFn, mu: f64, v0: f64) -> f64 {
    match branch {
        Branch::ExpDecayRational => {
            let (r, beta) = rational_params(phi);
            (v0.powi(r as i32) / beta).ln_1p() / (r as f64 * mu)
        }
        Branch::ExpDecayMonomial => {
            let (r, beta) = monomial_params(phi);
            beta * v0.powi(r as i32) / (r as f64 * mu)
        }
        Branch::RecipDecayRational1 | Branch::RecipDecayMonomial1 => f64::INFINITY,
        Branch::RecipDecayRational2 => {
            let (_, beta) = rational_params(phi);
            let sb = beta.sqrt();
            (v0 / sb).atan() / (sb * mu)
        }
        Branch::RecipDecayMonomialHigher => {
            let (r, beta) = monomial_params(phi);
            beta * v0.powi(r as i32 - 1) / ((r as f64 - 1.0) * mu)
        }
    }
}
