use alloc::format;
use alloc::vec::Vec;

use crate::symbols::{Symbol, SymbolSpec};
use crate::{Complex64, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Trend {
    Bounded,
    Increasing,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AngularDerivativeProbe {
    pub xi_angle: f64,
    pub r: Vec<f64>,
    /// `(1 − |φ(rξ)|)/(1 − r)`.
    pub ratios: Vec<f64>,
    pub trend: Trend,
}

impl AngularDerivativeProbe {
    /// Smallest ratio seen, the finite-r stand-in for the liminf.
    pub fn liminf_estimate(&self) -> f64 {
        self.ratios.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Radial behaviour of `1 − |φ|` towards `ξ = e^{i xi_angle}`. A bounded
/// ratio means a finite angular derivative, which rules out compactness.
pub fn angular_derivative_probe(spec: &SymbolSpec, xi_angle: f64, r_values: &[f64]) -> Result<AngularDerivativeProbe> {
    if r_values.len() < 3 {
        return Err(Error::InsufficientData(format!("{} radii, need at least 3", r_values.len())));
    }
    if r_values.windows(2).any(|w| !(w[0] < w[1])) || !(r_values[0] > 0.0) || !(r_values[r_values.len() - 1] < 1.0) {
        return Err(Error::Parameter("radii must increase strictly inside (0, 1)".into()));
    }
    let sym = Symbol::from_spec(spec)?;
    let (s, c) = (libm::sin(xi_angle), libm::sin(0.5 * xi_angle));
    let mut ratios = Vec::with_capacity(r_values.len());
    for &r in r_values {
        let z = Complex64::from_polar(r, xi_angle);
        // 1 − r e^{iξ} = (1 − r) + 2r sin²(ξ/2) − i r sin ξ
        let omz = Complex64::new((1.0 - r) + 2.0 * r * c * c, -r * s);
        ratios.push(sym.interior_gap(z, omz)? / (1.0 - r));
    }
    let half = ratios.len() / 2;
    let rising = ratios[half..].windows(2).all(|w| w[1] >= w[0]);
    let trend = if rising && ratios[ratios.len() - 1] >= 2.0 * ratios[0] { Trend::Increasing } else { Trend::Bounded };
    Ok(AngularDerivativeProbe { xi_angle, r: r_values.to_vec(), ratios, trend })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn radii(k: u32) -> Vec<f64> {
        (1..=k).map(|k| 1.0 - libm::ldexp(1.0, -(k as i32))).collect()
    }

    #[test]
    fn examples() {
        let a = angular_derivative_probe(&SymbolSpec::affine(), 0.0, &radii(30)).unwrap();
        assert!(a.ratios.iter().all(|r| (r - 0.5).abs() < 1e-9), "{:?}", a.ratios);
        assert_eq!(a.trend, Trend::Bounded);
        let c = angular_derivative_probe(&SymbolSpec::constant(0.0), 0.0, &radii(20)).unwrap();
        assert_eq!(c.trend, Trend::Increasing);
        let t = angular_derivative_probe(&SymbolSpec::log_power(2.0), 0.0, &radii(30)).unwrap();
        assert_eq!(t.trend, Trend::Increasing, "{:?}", t.ratios);
        assert!(angular_derivative_probe(&SymbolSpec::affine(), 0.0, &[0.5, 0.4, 0.9]).is_err());
    }
}
