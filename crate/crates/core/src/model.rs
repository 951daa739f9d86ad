//! Network domain types: firing-propensity functions, potential decay
//! laws, and whole-network configuration, plus grid-based validation of
//! the structural axioms the engines rely on.
//!
//! Decay laws are solutions of `V' = -mu * V^gamma` with `gamma >= 1`:
//!
//! * `gamma = 1`: `V(u, t) = u * exp(-mu t)`;
//! * `gamma > 1`: `V(u, t) = (u^(1-gamma) + (gamma-1) mu t)^(1/(1-gamma))`,
//!   which for `gamma = 2` is the reciprocal decay `u / (1 + u mu t)`.
//!
//! All laws satisfy identity at `t = 0`, monotonicity in each argument,
//! and the semigroup property `V(u, t + t') = V(V(u, t), t')`.

use crate::error::{Error, Result};

/// Index of a neuron within a network; dense in `[0, N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NeuronId(pub usize);

impl std::fmt::Display for NeuronId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A nonnegative time that may be `f64::INFINITY`.
///
/// Comparisons and `min` are the native floating-point ones; none of the
/// library's code paths produce NaN times.
pub type ExtendedTime = f64;

/// Firing propensity as a function of membrane potential.
///
/// Every family vanishes exactly at `u = 0` and is non-decreasing on
/// `[0, +inf)`:
///
/// * `Exponential`: `1 - exp(-beta u)`, values in `[0, 1)`;
/// * `Rational`: `u^r / (u^r + beta)`, values in `[0, 1)`;
/// * `Monomial`: `beta * u^r`, unbounded. Valid as a hazard intensity in
///   continuous time; where a Bernoulli parameter is required the value
///   is clamped to `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PotentialFn {
    Exponential { beta: f64 },
    Rational { r: u32, beta: f64 },
    Monomial { r: u32, beta: f64 },
}

impl PotentialFn {
    pub fn exponential(beta: f64) -> Result<Self> {
        let phi = PotentialFn::Exponential { beta };
        phi.validate().map(|_| phi)
    }

    pub fn rational(r: u32, beta: f64) -> Result<Self> {
        let phi = PotentialFn::Rational { r, beta };
        phi.validate().map(|_| phi)
    }

    pub fn monomial(r: u32, beta: f64) -> Result<Self> {
        let phi = PotentialFn::Monomial { r, beta };
        phi.validate().map(|_| phi)
    }

    pub fn beta(&self) -> f64 {
        match *self {
            PotentialFn::Exponential { beta }
            | PotentialFn::Rational { beta, .. }
            | PotentialFn::Monomial { beta, .. } => beta,
        }
    }

    /// True for families bounded by 1 (usable directly as probabilities).
    pub fn is_bounded(&self) -> bool {
        !matches!(self, PotentialFn::Monomial { .. })
    }

    pub fn validate(&self) -> Result<()> {
        let beta = self.beta();
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::Config(format!(
                "potential function: beta must be finite and positive, got {beta}"
            )));
        }
        if let PotentialFn::Rational { r, .. } | PotentialFn::Monomial { r, .. } = *self {
            if r == 0 {
                return Err(Error::Config(
                    "potential function: exponent r must be >= 1".into(),
                ));
            }
            if r > i32::MAX as u32 {
                return Err(Error::Config(format!(
                    "potential function: exponent r = {r} is out of range"
                )));
            }
        }
        Ok(())
    }

    /// Evaluates the propensity at potential `u >= 0`.
    pub fn eval(&self, u: f64) -> Result<f64> {
        if u.is_nan() || u < 0.0 {
            return Err(Error::Domain(format!(
                "potential function argument must be >= 0, got {u}"
            )));
        }
        Ok(self.eval_raw(u))
    }

    /// Evaluation without the domain check; callers guarantee `u >= 0`.
    pub(crate) fn eval_raw(&self, u: f64) -> f64 {
        match *self {
            PotentialFn::Exponential { beta } => -(-beta * u).exp_m1(),
            PotentialFn::Rational { r, beta } => {
                if u == 0.0 {
                    0.0
                } else {
                    // 1 / (1 + beta u^-r) keeps full relative precision for
                    // small u and saturates cleanly at 1 for huge u.
                    1.0 / (1.0 + beta * u.powi(-(r as i32)))
                }
            }
            PotentialFn::Monomial { r, beta } => beta * u.powi(r as i32),
        }
    }
}

/// Deterministic evolution of a silent neuron's potential.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DecayLaw {
    /// Solution of `V' = -mu V^gamma` with `gamma >= 1`, `mu > 0`.
    PowerLaw { gamma: f64, mu: f64 },
    /// `V(u, t) = (u - floor(u)) e^(-t) + floor(u)`.
    ///
    /// Test fixture with a split limit regime: potentials below 1 decay to
    /// zero while the integer part survives forever. Passes the pointwise
    /// axioms but violates the death theorem's decay hypothesis.
    Symptomatic,
}

impl DecayLaw {
    pub fn power_law(gamma: f64, mu: f64) -> Result<Self> {
        let law = DecayLaw::PowerLaw { gamma, mu };
        law.validate().map(|_| law)
    }

    pub fn validate(&self) -> Result<()> {
        if let DecayLaw::PowerLaw { gamma, mu } = *self {
            if !gamma.is_finite() || gamma < 1.0 {
                return Err(Error::Config(format!(
                    "decay law: gamma must be finite and >= 1, got {gamma}"
                )));
            }
            if !mu.is_finite() || mu <= 0.0 {
                return Err(Error::Config(format!(
                    "decay law: mu must be finite and positive, got {mu}"
                )));
            }
        }
        Ok(())
    }

    /// `(gamma, mu)` for power-law decays, `None` for fixtures.
    pub fn power_law_params(&self) -> Option<(f64, f64)> {
        match *self {
            DecayLaw::PowerLaw { gamma, mu } => Some((gamma, mu)),
            DecayLaw::Symptomatic => None,
        }
    }

    /// Remaining potential after `t` time units of silence, starting
    /// from `u`. `V(u, 0) = u` exactly; `t = +inf` yields the limit.
    pub fn value(&self, u: f64, t: f64) -> f64 {
        debug_assert!(u >= 0.0 && t >= 0.0);
        if t == 0.0 {
            return u;
        }
        match *self {
            DecayLaw::PowerLaw { gamma, mu } => {
                if u == 0.0 {
                    0.0
                } else if gamma == 1.0 {
                    u * (-mu * t).exp()
                } else if gamma == 2.0 {
                    u / (1.0 + u * mu * t)
                } else if u >= 1.0 {
                    (u.powf(1.0 - gamma) + (gamma - 1.0) * mu * t).powf(1.0 / (1.0 - gamma))
                } else {
                    // Factored form avoids overflow of u^(1-gamma) for small u.
                    u * (1.0 + (gamma - 1.0) * mu * t * u.powf(gamma - 1.0))
                        .powf(1.0 / (1.0 - gamma))
                }
            }
            DecayLaw::Symptomatic => u.fract() * (-t).exp() + u.floor(),
        }
    }
}

/// One neuron's parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Neuron {
    pub phi: PotentialFn,
    pub decay: DecayLaw,
    pub initial_potential: f64,
}

impl Neuron {
    pub fn new(phi: PotentialFn, decay: DecayLaw, initial_potential: f64) -> Result<Self> {
        let neuron = Neuron {
            phi,
            decay,
            initial_potential,
        };
        neuron.validate().map(|_| neuron)
    }

    pub fn validate(&self) -> Result<()> {
        self.phi.validate()?;
        self.decay.validate()?;
        if !self.initial_potential.is_finite() || self.initial_potential < 0.0 {
            return Err(Error::Config(format!(
                "initial potential must be finite and >= 0, got {}",
                self.initial_potential
            )));
        }
        Ok(())
    }
}

/// Row-major `N x N` influence matrix; `get(i, j)` is the potential jump
/// neuron `j` receives when neuron `i` fires. The diagonal is ignored by
/// all dynamics (a firing neuron resets to zero regardless).
#[derive(Clone, Debug, PartialEq)]
pub struct WeightMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl WeightMatrix {
    pub fn zeros(n: usize) -> Self {
        WeightMatrix {
            n,
            entries: vec![0.0; n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Config(format!(
                    "weights: row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        let w = WeightMatrix { n, entries };
        w.validate().map(|_| w)
    }

    pub fn validate(&self) -> Result<()> {
        if self.entries.len() != self.n * self.n {
            return Err(Error::Config("weights: matrix is not square".into()));
        }
        for (k, w) in self.entries.iter().enumerate() {
            if !w.is_finite() {
                return Err(Error::Config(format!(
                    "weights[{}][{}]: non-finite entry {w}",
                    k / self.n,
                    k % self.n
                )));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, from: NeuronId, to: NeuronId) -> f64 {
        self.entries[from.0 * self.n + to.0]
    }

    pub fn set(&mut self, from: NeuronId, to: NeuronId, w: f64) {
        self.entries[from.0 * self.n + to.0] = w;
    }

    /// True when every off-diagonal entry is `>= 0`.
    pub fn nonnegative_off_diagonal(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(k, &w)| k / self.n == k % self.n || w >= 0.0)
    }
}

/// A complete network: per-neuron parameters plus the influence matrix.
#[derive(Clone, Debug)]
pub struct NetworkConfig {
    pub neurons: Vec<Neuron>,
    pub weights: WeightMatrix,
}

impl NetworkConfig {
    pub fn new(neurons: Vec<Neuron>, weights: WeightMatrix) -> Result<Self> {
        if neurons.is_empty() {
            return Err(Error::Config("network must have at least one neuron".into()));
        }
        if weights.n() != neurons.len() {
            return Err(Error::Config(format!(
                "weights are {0}x{0} but the network has {1} neurons",
                weights.n(),
                neurons.len()
            )));
        }
        for (i, neuron) in neurons.iter().enumerate() {
            neuron
                .validate()
                .map_err(|e| Error::Config(format!("neuron {i}: {e}")))?;
        }
        weights.validate()?;
        Ok(NetworkConfig { neurons, weights })
    }

    pub fn len(&self) -> usize {
        self.neurons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neurons.is_empty()
    }

    pub fn initial_potentials(&self) -> Vec<f64> {
        self.neurons.iter().map(|n| n.initial_potential).collect()
    }
}

/// Absolute tolerance for the semigroup defect on the validation grid.
pub const SEMIGROUP_TOL: f64 = 1e-9;

const U_GRID: [f64; 7] = [0.0, 0.25, 0.7, 1.0, 3.0, 10.0, 100.0];
const T_GRID: [f64; 6] = [0.0, 0.1, 0.5, 2.0, 10.0, 50.0];

/// Per-neuron outcome of the decay-axiom checks.
#[derive(Clone, Copy, Debug)]
pub struct AxiomReport {
    pub identity_at_zero: bool,
    pub monotone_in_potential: bool,
    pub monotone_in_time: bool,
    pub semigroup: bool,
    pub max_semigroup_defect: f64,
    pub phi_nondecreasing: bool,
}

impl AxiomReport {
    pub fn all_ok(&self) -> bool {
        self.identity_at_zero
            && self.monotone_in_potential
            && self.monotone_in_time
            && self.semigroup
            && self.phi_nondecreasing
    }
}

/// Satisfied/violated flags for the hypotheses of the almost-sure death
/// theorem. Violations do not fail the config; they only restrict which
/// analyses apply.
#[derive(Clone, Debug)]
pub struct HypothesisReport {
    pub nonnegative_weights: bool,
    pub positive_initial_potentials: bool,
    pub phi_vanishes_only_at_zero: bool,
    pub decay_limit_regular: bool,
}

impl HypothesisReport {
    pub fn all_ok(&self) -> bool {
        self.nonnegative_weights
            && self.positive_initial_potentials
            && self.phi_vanishes_only_at_zero
            && self.decay_limit_regular
    }

    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !self.nonnegative_weights {
            v.push("off-diagonal weights must be nonnegative".to_string());
        }
        if !self.positive_initial_potentials {
            v.push("initial potentials must be strictly positive".to_string());
        }
        if !self.phi_vanishes_only_at_zero {
            v.push("potential functions must vanish only at zero".to_string());
        }
        if !self.decay_limit_regular {
            v.push(
                "decay laws must vanish in the limit from every starting potential".to_string(),
            );
        }
        v
    }
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub axioms: Vec<AxiomReport>,
    pub hypotheses: HypothesisReport,
}

impl ValidationReport {
    pub fn axioms_ok(&self) -> bool {
        self.axioms.iter().all(AxiomReport::all_ok)
    }
}

/// Checks the structural axioms of every neuron's decay law on a fixed
/// `(u, t, t')` grid and flags the death-theorem hypotheses.
///
/// Errors only on malformed parameters (non-finite values, negative
/// initial potentials); axiom or hypothesis violations are reported, not
/// fatal.
pub fn validate_config(cfg: &NetworkConfig) -> Result<ValidationReport> {
    for (i, neuron) in cfg.neurons.iter().enumerate() {
        neuron
            .validate()
            .map_err(|e| Error::Config(format!("neuron {i}: {e}")))?;
    }
    cfg.weights.validate()?;

    let axioms = cfg.neurons.iter().map(check_axioms).collect();
    let hypotheses = HypothesisReport {
        nonnegative_weights: cfg.weights.nonnegative_off_diagonal(),
        positive_initial_potentials: cfg.neurons.iter().all(|n| n.initial_potential > 0.0),
        // All supported families have beta > 0 and vanish exactly at 0.
        phi_vanishes_only_at_zero: true,
        // Power laws decay to zero from every start; the symptomatic
        // fixture splits into regimes and is rejected outright.
        decay_limit_regular: cfg
            .neurons
            .iter()
            .all(|n| matches!(n.decay, DecayLaw::PowerLaw { .. })),
    };
    Ok(ValidationReport { axioms, hypotheses })
}

fn check_axioms(neuron: &Neuron) -> AxiomReport {
    let v = &neuron.decay;
    let mut identity = true;
    let mut mono_u = true;
    let mut mono_t = true;
    let mut semigroup = true;
    let mut max_defect = 0.0f64;

    for &u in &U_GRID {
        if v.value(u, 0.0) != u {
            identity = false;
        }
        for &t in &T_GRID {
            for &t2 in &T_GRID {
                let defect = (v.value(u, t + t2) - v.value(v.value(u, t), t2)).abs();
                max_defect = max_defect.max(defect);
                if defect > SEMIGROUP_TOL {
                    semigroup = false;
                }
            }
            for &u2 in &U_GRID {
                if u <= u2 && v.value(u, t) > v.value(u2, t) + SEMIGROUP_TOL {
                    mono_u = false;
                }
            }
            for &t2 in &T_GRID {
                if t <= t2 && v.value(u, t2) > v.value(u, t) + SEMIGROUP_TOL {
                    mono_t = false;
                }
            }
        }
    }

    let mut phi_mono = true;
    for pair in U_GRID.windows(2) {
        if neuron.phi.eval_raw(pair[0]) > neuron.phi.eval_raw(pair[1]) {
            phi_mono = false;
        }
    }

    AxiomReport {
        identity_at_zero: identity,
        monotone_in_potential: mono_u,
        monotone_in_time: mono_t,
        semigroup,
        max_semigroup_defect: max_defect,
        phi_nondecreasing: phi_mono,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn phi_exponential_vanishes_at_zero() {
        let phi = PotentialFn::exponential(1.0).unwrap();
        assert_eq!(phi.eval(0.0).unwrap(), 0.0);
    }

    #[test]
    fn phi_rational_half_at_matching_scale() {
        let phi = PotentialFn::rational(1, 1.0).unwrap();
        assert!(close(phi.eval(1.0).unwrap(), 0.5, 1e-15));
    }

    #[test]
    fn phi_monomial_unbounded_value() {
        let phi = PotentialFn::monomial(2, 3.0).unwrap();
        assert!(close(phi.eval(2.0).unwrap(), 12.0, 1e-12));
    }

    #[test]
    fn phi_rejects_negative_argument() {
        let phi = PotentialFn::rational(1, 1.0).unwrap();
        assert!(matches!(phi.eval(-0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn phi_rejects_bad_parameters() {
        assert!(PotentialFn::exponential(0.0).is_err());
        assert!(PotentialFn::rational(0, 1.0).is_err());
        assert!(PotentialFn::monomial(1, f64::NAN).is_err());
    }

    #[test]
    fn decay_identity_at_zero_is_exact() {
        let law = DecayLaw::power_law(1.0, 1.0).unwrap();
        assert_eq!(law.value(5.0, 0.0), 5.0);
        let law = DecayLaw::power_law(2.7, 0.3).unwrap();
        assert_eq!(law.value(0.123, 0.0), 0.123);
    }

    #[test]
    fn decay_reciprocal_closed_form() {
        let law = DecayLaw::power_law(2.0, 1.0).unwrap();
        assert!(close(law.value(1.0, 2.0), 1.0 / 3.0, 1e-15));
    }

    #[test]
    fn decay_exponential_closed_form() {
        let law = DecayLaw::power_law(1.0, 2.0).unwrap();
        assert!(close(law.value(1.0, 2f64.ln()), 0.25, 1e-15));
    }

    #[test]
    fn decay_rejects_gamma_below_one() {
        assert!(matches!(
            DecayLaw::power_law(0.5, 1.0),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn decay_limit_is_zero_for_power_laws() {
        for gamma in [1.0, 1.5, 2.0, 3.0] {
            let law = DecayLaw::power_law(gamma, 1.0).unwrap();
            assert_eq!(law.value(4.0, f64::INFINITY), 0.0, "gamma = {gamma}");
        }
    }

    #[test]
    fn symptomatic_fixture_keeps_integer_part() {
        let law = DecayLaw::Symptomatic;
        assert_eq!(law.value(2.5, f64::INFINITY), 2.0);
        assert_eq!(law.value(0.5, f64::INFINITY), 0.0);
    }

    fn two_neuron_config(w12: f64, w21: f64) -> NetworkConfig {
        let neuron = Neuron::new(
            PotentialFn::rational(1, 1.0).unwrap(),
            DecayLaw::power_law(2.0, 1.0).unwrap(),
            1.0,
        )
        .unwrap();
        let mut w = WeightMatrix::zeros(2);
        w.set(NeuronId(0), NeuronId(1), w12);
        w.set(NeuronId(1), NeuronId(0), w21);
        NetworkConfig::new(vec![neuron, neuron], w).unwrap()
    }

    #[test]
    fn validate_passes_power_law_network() {
        let report = validate_config(&two_neuron_config(1.0, 1.0)).unwrap();
        assert!(report.axioms_ok());
        assert!(report.hypotheses.all_ok());
    }

    #[test]
    fn validate_flags_negative_weight_without_failing() {
        let report = validate_config(&two_neuron_config(-1.0, 1.0)).unwrap();
        assert!(report.axioms_ok());
        assert!(!report.hypotheses.nonnegative_weights);
        assert!(!report.hypotheses.all_ok());
        assert_eq!(report.hypotheses.violations().len(), 1);
    }

    #[test]
    fn validate_flags_symptomatic_decay() {
        let neuron = Neuron {
            phi: PotentialFn::rational(1, 1.0).unwrap(),
            decay: DecayLaw::Symptomatic,
            initial_potential: 1.0,
        };
        let cfg = NetworkConfig::new(vec![neuron], WeightMatrix::zeros(1)).unwrap();
        let report = validate_config(&cfg).unwrap();
        assert!(report.axioms_ok(), "fixture satisfies the pointwise axioms");
        assert!(!report.hypotheses.decay_limit_regular);
    }

    #[test]
    fn validate_rejects_negative_initial_potential() {
        let neuron = Neuron {
            phi: PotentialFn::rational(1, 1.0).unwrap(),
            decay: DecayLaw::power_law(1.0, 1.0).unwrap(),
            initial_potential: -1.0,
        };
        let cfg = NetworkConfig {
            neurons: vec![neuron],
            weights: WeightMatrix::zeros(1),
        };
        assert!(validate_config(&cfg).is_err());
    }

    #[test]
    fn validate_rejects_non_finite_weight() {
        let neuron = Neuron::new(
            PotentialFn::rational(1, 1.0).unwrap(),
            DecayLaw::power_law(1.0, 1.0).unwrap(),
            1.0,
        )
        .unwrap();
        let mut w = WeightMatrix::zeros(1);
        w.set(NeuronId(0), NeuronId(0), f64::INFINITY);
        let cfg = NetworkConfig {
            neurons: vec![neuron],
            weights: w,
        };
        assert!(validate_config(&cfg).is_err());
    }

    #[test]
    fn config_rejects_shape_mismatch() {
        let neuron = Neuron::new(
            PotentialFn::rational(1, 1.0).unwrap(),
            DecayLaw::power_law(1.0, 1.0).unwrap(),
            1.0,
        )
        .unwrap();
        assert!(NetworkConfig::new(vec![neuron], WeightMatrix::zeros(2)).is_err());
    }
}
