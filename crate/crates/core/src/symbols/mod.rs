//! Symbol families and their boundary and interior evaluation.

mod elementary;
mod general;
mod logpower;
mod series;
mod spec;
mod trace;

pub use elementary::ElementarySymbol;
pub use general::{eval_general_boundary, inner_factor, GeneralConstructionSymbol};
pub use logpower::{conformal_g, conformal_g_boundary, eval_log_power_boundary, LogPowerSymbol, LogPowerVariant, DEFAULT_EPSILON};
pub use series::{binomial_coeff_oracle, conjugate_series, sin_beta_coeffs, CosineSeries};
pub use spec::{Symbol, SymbolFamily, SymbolSpec};
pub use trace::{sample_symbol, sample_trace, BoundaryTrace, SamplingConfig, MAX_REFINEMENT_DEPTH};

use num_complex::Complex64;

/// Boundary value stored as `ln|φ*|` and a continuous argument.
///
/// Keeping the logarithm makes `1 - |φ*|` available far below machine
/// epsilon, and the unwrapped argument keeps winding information that a
/// reduced angle would lose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub log_modulus: f64,
    pub phase: f64,
}

impl BoundaryPoint {
    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(libm::exp(self.log_modulus), self.phase)
    }

    /// `1 - |value|`, accurate for tiny gaps.
    pub fn gap(&self) -> f64 {
        -libm::expm1(self.log_modulus)
    }
}
