//! Static classification of networks by almost-sure death.
//!
//! A neuron whose total hazard is finite for every starting potential
//! (class `S`) has positive probability of never firing again; a neuron
//! with divergent total hazard (class `R`) fires again almost surely
//! whenever its potential is positive. With nonnegative weights,
//! strictly positive initial potentials, and regular decay limits, the
//! whole network stops firing in finite time almost surely if and only
//! if the digraph of positive influences restricted to the `R` neurons
//! is acyclic.
//!
//! Classification is analytic: near `u = 0` each supported propensity
//! family behaves like `c * u^d` with integer order `d`, and the
//! change-of-variables integral `phi(v) / v^gamma` converges at zero iff
//! `d > gamma - 1`. This matches every closed-form total hazard and
//! never relies on quadrature to decide convergence.

use crate::error::{Error, Result};
use crate::model::{DecayLaw, NetworkConfig, NeuronId, PotentialFn};

/// Order of the zero of `phi` at the origin.
pub fn zero_order(phi: &PotentialFn) -> u32 {
    match *phi {
        // 1 - exp(-beta u) ~ beta u.
        PotentialFn::Exponential { .. } => 1,
        // u^r / (u^r + beta) ~ u^r / beta.
        PotentialFn::Rational { r, .. } => r,
        PotentialFn::Monomial { r, .. } => r,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    /// Finite total hazard: may never fire again.
    S,
    /// Divergent total hazard: fires again almost surely.
    R,
}

impl std::fmt::Display for Class {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Class::S => write!(f, "S"),
            Class::R => write!(f, "R"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NeuronClassification {
    pub class: Class,
    pub zero_order: u32,
}

/// Classifies one neuron from its propensity family and decay exponent.
///
/// Independent of the starting potential: divergence for one positive
/// start implies divergence for all of them.
pub fn classify_neuron(phi: &PotentialFn, decay: &DecayLaw) -> Result<NeuronClassification> {
    phi.validate()?;
    let (gamma, _) = decay.power_law_params().ok_or_else(|| {
        Error::Config("classification requires a power-law decay".into())
    })?;
    let d = zero_order(phi);
    let class = if (d as f64) > gamma - 1.0 {
        Class::S
    } else {
        Class::R
    };
    Ok(NeuronClassification {
        class,
        zero_order: d,
    })
}

/// Digraph of strictly positive influences over a vertex subset.
#[derive(Clone, Debug, PartialEq)]
pub struct InfluenceDigraph {
    pub vertices: Vec<NeuronId>,
    pub arcs: Vec<(NeuronId, NeuronId)>,
}

impl InfluenceDigraph {
    /// Arcs `(i, j)` with `i != j`, `W[i][j] > 0`, both endpoints in the
    /// vertex set.
    pub fn restricted_to(cfg: &NetworkConfig, vertices: Vec<NeuronId>) -> Self {
        let mut arcs = Vec::new();
        for &i in &vertices {
            for &j in &vertices {
                if i != j && cfg.weights.get(i, j) > 0.0 {
                    arcs.push((i, j));
                }
            }
        }
        InfluenceDigraph { vertices, arcs }
    }

    pub fn is_dag(&self) -> bool {
        let index: std::collections::HashMap<NeuronId, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(k, &v)| (v, k))
            .collect();
        let arcs: Vec<(usize, usize)> = self
            .arcs
            .iter()
            .map(|&(a, b)| (index[&a], index[&b]))
            .collect();
        kahn_is_dag(self.vertices.len(), &arcs)
    }
}

/// Acyclicity by repeatedly removing a vertex of indegree zero.
pub fn kahn_is_dag(num_vertices: usize, arcs: &[(usize, usize)]) -> bool {
    let mut indegree = vec![0usize; num_vertices];
    let mut out = vec![Vec::new(); num_vertices];
    for &(a, b) in arcs {
        indegree[b] += 1;
        out[a].push(b);
    }
    let mut queue: Vec<usize> = (0..num_vertices).filter(|&v| indegree[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = queue.pop() {
        removed += 1;
        for &w in &out[v] {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                queue.push(w);
            }
        }
    }
    removed == num_vertices
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conclusion {
    /// The network stops firing in finite time with probability 1.
    DiesAlmostSurely,
    /// The network fires forever with probability 1.
    NeverDiesAlmostSurely,
    /// A theorem hypothesis is violated; no conclusion is claimed.
    Inapplicable,
}

impl Conclusion {
    pub fn as_str(&self) -> &'static str {
        match self {
            Conclusion::DiesAlmostSurely => "dies_almost_surely",
            Conclusion::NeverDiesAlmostSurely => "never_dies_almost_surely",
            Conclusion::Inapplicable => "inapplicable",
        }
    }
}

/// Full verdict: per-neuron classes, the induced digraph over `R`, its
/// acyclicity, and the conclusion (or its inapplicability).
#[derive(Clone, Debug)]
pub struct DeathVerdict {
    /// `None` when a non-power-law decay makes classification undefined.
    pub classes: Option<Vec<NeuronClassification>>,
    pub digraph: Option<InfluenceDigraph>,
    pub dag: Option<bool>,
    pub conclusion: Conclusion,
    pub hypotheses_ok: bool,
    pub violations: Vec<String>,
}

/// Decides almost-sure death for a network.
///
/// Checks the theorem hypotheses first; when any is violated the
/// conclusion is reported as inapplicable rather than guessed.
pub fn death_verdict(cfg: &NetworkConfig) -> DeathVerdict {
    let mut violations = Vec::new();
    if !cfg.weights.nonnegative_off_diagonal() {
        violations.push("off-diagonal weights must be nonnegative".to_string());
    }
    if !cfg.neurons.iter().all(|n| n.initial_potential > 0.0) {
        violations.push("initial potentials must be strictly positive".to_string());
    }
    let power_law = cfg
        .neurons
        .iter()
        .all(|n| matches!(n.decay, DecayLaw::PowerLaw { .. }));
    if !power_law {
        violations.push(
            "decay laws must vanish in the limit from every starting potential".to_string(),
        );
    }
    let hypotheses_ok = violations.is_empty();

    let (classes, digraph, dag) = if power_law {
        let classes: Vec<NeuronClassification> = cfg
            .neurons
            .iter()
            .map(|n| classify_neuron(&n.phi, &n.decay).expect("power-law decay"))
            .collect();
        let recurrent: Vec<NeuronId> = classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.class == Class::R)
            .map(|(i, _)| NeuronId(i))
            .collect();
        let digraph = InfluenceDigraph::restricted_to(cfg, recurrent);
        let dag = digraph.is_dag();
        (Some(classes), Some(digraph), Some(dag))
    } else {
        (None, None, None)
    };

    let conclusion = match (hypotheses_ok, dag) {
        (true, Some(true)) => Conclusion::DiesAlmostSurely,
        (true, Some(false)) => Conclusion::NeverDiesAlmostSurely,
        _ => Conclusion::Inapplicable,
    };

    DeathVerdict {
        classes,
        digraph,
        dag,
        conclusion,
        hypotheses_ok,
        violations,
    }
}
