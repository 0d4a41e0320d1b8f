use alloc::format;
use alloc::vec::Vec;

use super::{log_slope, CriterionVerdict, Tri};
use crate::measure::CarlesonProfile;
use crate::numerics::FitResult;
use crate::{Error, Result};

/// Windows with `h > 1/16` carry no asymptotic information and are skipped.
pub const PROFILE_MIN_LEVEL: u32 = 4;

/// `(n, ρ̂(2^-n)·2^n·w(n))` over trusted levels `n ≥ PROFILE_MIN_LEVEL`.
fn statistic(profile: &CarlesonProfile, weight: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
    profile
        .levels
        .iter()
        .filter(|l| l.n >= PROFILE_MIN_LEVEL && l.trusted())
        .map(|l| (l.n as f64, libm::ldexp(l.rho_hat, l.n as i32) * weight(l.n as f64)))
        .collect()
}

fn tail_slope(stat: &[(f64, f64)]) -> Option<f64> {
    log_slope(&stat[stat.len() / 2..])
}

/// Decides whether a nonnegative statistic tends to 0 or stays bounded
/// below: `Yes` when it drops by a factor ≥ 2 from its peak to the last
/// level with a tail slope below `yes_slope`, `No` when the last value
/// keeps at least half of the first (or peak) value with tail slope above
/// `no_slope`.
fn decide(stat: &[(f64, f64)], yes_slope: f64, no_slope: f64, no_ref_peak: bool) -> Tri {
    if stat.iter().all(|s| s.1 == 0.0) || stat.last().is_some_and(|s| s.1 == 0.0) {
        return Tri::Yes;
    }
    let first = stat[0].1;
    let last = stat[stat.len() - 1].1;
    let peak = stat.iter().map(|s| s.1).fold(0.0, f64::max);
    let slope = tail_slope(stat).unwrap_or(0.0);
    if peak >= 2.0 * last && slope < yes_slope {
        return Tri::Yes;
    }
    let reference = if no_ref_peak { peak } else { first };
    let min = stat.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let floor = if no_ref_peak { last } else { min };
    if floor >= 0.5 * reference && slope > no_slope {
        return Tri::No;
    }
    Tri::Inconclusive
}

/// Compactness from `ρ̂(h) = o(h)`: `Yes` means compact.
pub fn maccluer_test(profile: &CarlesonProfile) -> CriterionVerdict {
    let stat = statistic(profile, |_| 1.0);
    if stat.len() < 5 {
        return CriterionVerdict::new("maccluer", Tri::Inconclusive, stat, 2.0);
    }
    let passed = decide(&stat, 0.0, -0.15, false);
    CriterionVerdict::new("maccluer", passed, stat, 2.0)
}

/// Whether `ρ̂(h) = o(h (ln 1/h)^{-2/p})` holds: statistic
/// `u_n = ρ̂(2^-n) 2^n (n ln 2)^{2/p}`. `p = ∞` gives the MacCluer statistic.
pub fn necessary_condition_diag(profile: &CarlesonProfile, p: f64) -> Result<CriterionVerdict> {
    if !(p > 0.0) {
        return Err(Error::Parameter(format!("p = {p} must be positive")));
    }
    let e = 2.0 / p;
    let stat = statistic(profile, |n| libm::pow(n * core::f64::consts::LN_2, e));
    if stat.len() < 5 {
        return Ok(CriterionVerdict::new("necessary_condition", Tri::Inconclusive, stat, 2.0));
    }
    let passed = decide(&stat, -0.25, f64::NEG_INFINITY, true);
    Ok(CriterionVerdict::new("necessary_condition", passed, stat, 2.0))
}

/// `C_φ ∈ S_p` whenever `ρ ≲ h^α` with `p > 2/(α − 1)`. Only sufficient,
/// so the outcome is never `No`.
pub fn alpha_sufficient_at(alpha: f64, p: f64) -> CriterionVerdict {
    let threshold = if alpha > 1.0 { 2.0 / (alpha - 1.0) } else { f64::INFINITY };
    let passed = if alpha > 1.1 && p > threshold { Tri::Yes } else { Tri::Inconclusive };
    CriterionVerdict::new("alpha_carleson_sufficient", passed, alloc::vec![(alpha, threshold)], 0.1)
}

/// [`alpha_sufficient_at`] on a fitted exponent; poor fits (residual ≥ 0.3)
/// are inconclusive.
pub fn alpha_carleson_sufficient(fit: &FitResult, p: f64) -> CriterionVerdict {
    let mut v = alpha_sufficient_at(fit.exponent, p);
    if !(fit.residual < 0.3) {
        v.passed = Tri::Inconclusive;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{CarlesonProfile, ProfileLevel};

    fn profile(rho: impl Fn(f64) -> f64, n_max: u32) -> CarlesonProfile {
        let levels = (1..=n_max)
            .map(|n| {
                let h = libm::ldexp(1.0, -(n as i32));
                let r = rho(h);
                ProfileLevel { n, h, rho_hat: r, raw: r, argmax: 0.0, centers_tested: 1, effective_samples: 1000 }
            })
            .collect();
        CarlesonProfile { levels, sup_resolution: 4 << n_max }
    }

    #[test]
    fn maccluer_examples() {
        assert_eq!(maccluer_test(&profile(|h| h / core::f64::consts::PI, 20)).passed, Tri::No);
        assert_eq!(maccluer_test(&profile(|_| 0.0, 20)).passed, Tri::Yes);
        let theta1 = profile(|h| h / libm::log(1.0 / h), 40);
        assert_eq!(maccluer_test(&theta1).passed, Tri::Yes);
        assert_eq!(maccluer_test(&profile(|h| h, 3)).passed, Tri::Inconclusive);
    }

    #[test]
    fn necessary_condition_examples() {
        let theta2 = profile(|h| h / libm::pow(libm::log(1.0 / h), 2.0), 40);
        assert_eq!(necessary_condition_diag(&theta2, 2.0).unwrap().passed, Tri::Yes);
        let loglog = profile(|h| h / libm::log(libm::log(1.0 / h)), 52);
        for p in [0.5, 1.0, 2.0, 4.0] {
            assert_eq!(necessary_condition_diag(&loglog, p).unwrap().passed, Tri::No, "p={p}");
        }
        assert!(necessary_condition_diag(&loglog, 0.0).is_err());
        // p = ∞ reduces to the MacCluer statistic
        let a = necessary_condition_diag(&theta2, f64::INFINITY).unwrap();
        let b = maccluer_test(&theta2);
        assert_eq!(a.evidence, b.evidence);
    }

    #[test]
    fn alpha_examples() {
        let fit = |a: f64| FitResult { exponent: a, prefactor: 1.0, residual: 0.01, range: (0.0, 1.0) };
        assert_eq!(alpha_carleson_sufficient(&fit(1.5), 4.5).passed, Tri::Yes);
        assert_eq!(alpha_carleson_sufficient(&fit(1.5), 3.9).passed, Tri::Inconclusive);
        assert_eq!(alpha_carleson_sufficient(&fit(1.0), 100.0).passed, Tri::Inconclusive);
        let mut bad = fit(1.5);
        bad.residual = 0.5;
        assert_eq!(alpha_carleson_sufficient(&bad, 10.0).passed, Tri::Inconclusive);
    }
}
