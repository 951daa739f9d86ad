//! Goodness-of-fit helpers for validating the samplers.

use crate::error::{Error, Result};
use crate::hazard::WaitTimeLaw;

/// One-sample Kolmogorov-Smirnov statistic between finite draws and the
/// law conditioned on finiteness, `F(t) / lim F`.
///
/// The samples must be the finite draws only; the defective mass at
/// `+inf` is tested separately through the atom fraction.
pub fn ks_statistic(samples: &[f64], law: &WaitTimeLaw) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Domain("ks statistic needs a non-empty sample set".into()));
    }
    let threshold = law.defect_threshold();
    if threshold == 0.0 {
        return Err(Error::Domain(
            "law has no finite mass to compare against".into(),
        ));
    }
    let mut sorted = samples.to_vec();
    if sorted.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::Domain(
            "samples must be finite nonnegative wait times".into(),
        ));
    }
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let n = sorted.len() as f64;
    let mut sup = 0.0f64;
    for (i, &t) in sorted.iter().enumerate() {
        let f = (law.cdf(t) / threshold).min(1.0);
        sup = sup.max((f - i as f64 / n).abs());
        sup = sup.max(((i + 1) as f64 / n - f).abs());
    }
    Ok(sup)
}

/// Total-variation distance between two discrete distributions given as
/// (outcome, probability) maps over a shared key type.
pub fn total_variation<K: Ord>(
    p: &std::collections::BTreeMap<K, f64>,
    q: &std::collections::BTreeMap<K, f64>,
) -> f64 {
    let mut tv = 0.0;
    for (key, &pp) in p {
        tv += (pp - q.get(key).copied().unwrap_or(0.0)).abs();
    }
    for (key, &qq) in q {
        if !p.contains_key(key) {
            tv += qq;
        }
    }
    0.5 * tv
}
