use alloc::format;

use crate::numerics::NeumaierSum;
use crate::symbols::{sample_symbol, BoundaryTrace, SamplingConfig, Symbol, MAX_REFINEMENT_DEPTH};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HsIntegral {
    /// `(1/2π) ∫ dt / (1 − |φ*|²)`, equal to `Σ_n ‖φ^n‖²` when finite.
    pub value: f64,
    /// `(1/2π) ∫ dt / (1 − |φ*|)`, same finiteness class.
    pub first_power: f64,
}

pub fn hs_integral(trace: &BoundaryTrace) -> Result<HsIntegral> {
    let mut a = NeumaierSum::new();
    let mut b = NeumaierSum::new();
    for (i, (&w, &lm)) in trace.weights().iter().zip(trace.log_modulus()).enumerate() {
        let gap2 = -libm::expm1(2.0 * lm);
        let gap = -libm::expm1(lm);
        if !(gap > 0.0 && gap2 > 0.0) {
            return Err(Error::SingularNode { index: i });
        }
        a.add(w / gap2);
        b.add(w / gap);
    }
    let s = 0.5 / core::f64::consts::PI;
    Ok(HsIntegral { value: a.value() * s, first_power: b.value() * s })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HsStudy {
    pub depths: [u32; 3],
    pub values: [f64; 3],
    /// Set when the value moves by more than 10% on the last doubling, or
    /// its increments shrink by less than a factor 0.8.
    pub divergent: bool,
}

impl HsStudy {
    pub fn value(&self) -> f64 {
        self.values[2]
    }
}

/// HS integral at refinement depths `D`, `2D`, `4D`.
pub fn hs_divergence_study(symbol: &Symbol, cfg: &SamplingConfig) -> Result<HsStudy> {
    let d = cfg.refinement_depth.max(1);
    if 4 * d > MAX_REFINEMENT_DEPTH {
        return Err(Error::Parameter(format!("refinement depth {d} leaves no room to double twice")));
    }
    let depths = [d, 2 * d, 4 * d];
    let mut values = [0.0; 3];
    for (v, &depth) in values.iter_mut().zip(&depths) {
        let tr = sample_symbol(symbol, &SamplingConfig { refinement_depth: depth, ..*cfg })?;
        *v = hs_integral(&tr)?.value;
    }
    let rel = (values[2] - values[1]).abs() / values[1].abs();
    let (i1, i2) = (values[1] - values[0], values[2] - values[1]);
    let slow = i1.abs() > 1e-12 * values[1].abs() && i2 / i1 > 0.8;
    Ok(HsStudy { depths, values, divergent: !rel.is_finite() || rel > 0.1 || slow })
}
