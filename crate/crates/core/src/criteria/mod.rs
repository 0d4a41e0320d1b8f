//! Membership tests and diagnostics for Schatten classes and compactness.

mod boxwin;
mod hs;
mod luecking;
mod probe;
mod profile_tests;

use alloc::string::String;
use alloc::vec::Vec;

pub use boxwin::{box_window_consistency, box_window_sums, BoxWindowSums, BOX_WINDOW_SPREAD};
pub use hs::{hs_divergence_study, hs_integral, HsIntegral, HsStudy};
pub use luecking::{luecking_partial_sums, luecking_partial_sums_with, LueckingOptions, LueckingReport, SeriesVerdict};
pub use probe::{angular_derivative_probe, AngularDerivativeProbe, Trend};
pub use profile_tests::{alpha_carleson_sufficient, alpha_sufficient_at, maccluer_test, necessary_condition_diag, PROFILE_MIN_LEVEL};

/// Three-valued outcome; `Inconclusive` is a normal result, not a failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Tri {
    Yes,
    No,
    Inconclusive,
}

impl Tri {
    pub fn as_str(self) -> &'static str {
        match self {
            Tri::Yes => "yes",
            Tri::No => "no",
            Tri::Inconclusive => "inconclusive",
        }
    }
}

impl core::fmt::Display for Tri {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CriterionVerdict {
    pub name: String,
    pub passed: Tri,
    /// (level, statistic) pairs behind the decision.
    pub evidence: Vec<(f64, f64)>,
    pub tolerance_used: f64,
}

impl CriterionVerdict {
    pub(crate) fn new(name: &str, passed: Tri, evidence: Vec<(f64, f64)>, tolerance_used: f64) -> Self {
        Self { name: name.into(), passed, evidence, tolerance_used }
    }
}

/// `Σ_j (2^n m_j)^α` over a level's sectors, without forming `2^{nα}`.
pub(crate) fn scaled_power_sum(runs: &crate::measure::RunList, n: u32, alpha: f64) -> f64 {
    let mut s = crate::numerics::NeumaierSum::new();
    for r in runs.runs() {
        if r.mass > 0.0 {
            s.add(r.count as f64 * libm::pow(libm::ldexp(r.mass, n as i32), alpha));
        }
    }
    s.value()
}

/// Least-squares slope of `ln y` against `ln x` over positive pairs.
pub(crate) fn log_slope(pairs: &[(f64, f64)]) -> Option<f64> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = pairs.iter().filter(|p| p.0 > 0.0 && p.1 > 0.0).map(|p| (libm::log(p.0), libm::log(p.1))).unzip();
    if xs.len() < 2 {
        return None;
    }
    crate::numerics::linear_fit(&xs, &ys).ok().map(|f| f.slope)
}
