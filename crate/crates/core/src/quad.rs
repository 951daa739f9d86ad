//! Adaptive Simpson quadrature with interval bisection.
//!
//! Absolute-tolerance control with the usual 15x Richardson acceptance
//! test and a hard cap on the number of subintervals.

pub(crate) const MAX_INTERVALS: usize = 1_000_000;

pub(crate) struct QuadOutcome {
    pub value: f64,
    pub converged: bool,
}

pub(crate) fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> QuadOutcome {
    debug_assert!(a.is_finite() && b.is_finite() && b >= a && tol > 0.0);
    if a == b {
        return QuadOutcome {
            value: 0.0,
            converged: true,
        };
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(a, b, fa, fm, fb);
    let mut budget = MAX_INTERVALS;
    let mut converged = true;
    let value = refine(f, a, m, b, fa, fm, fb, whole, tol, &mut budget, &mut converged);
    QuadOutcome { value, converged }
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    budget: &mut usize,
    converged: &mut bool,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    // Stop when the interval can no longer be split in f64.
    if lm <= a || lm >= m || rm <= m || rm >= b {
        return whole;
    }
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    if *budget < 2 {
        *converged = false;
        return left + right + delta / 15.0;
    }
    *budget -= 2;
    let half_tol = 0.5 * tol;
    refine(f, a, lm, m, fa, flm, fm, left, half_tol, budget, converged)
        + refine(f, m, rm, b, fm, frm, fb, right, half_tol, budget, converged)
}
