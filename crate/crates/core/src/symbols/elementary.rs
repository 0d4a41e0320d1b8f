use alloc::format;

use num_complex::Complex64;

use super::BoundaryPoint;
use crate::{Error, Result};

/// Closed-form fixtures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ElementarySymbol {
    Identity,
    /// `r·z` with `|r| ≤ 1`
    ScaledRotation(Complex64),
    /// `c` with `|c| < 1`
    Constant(Complex64),
    /// `z^k`, k ≥ 1
    Monomial(u32),
    /// `(1 + z)/2`
    Affine,
}

impl ElementarySymbol {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::ScaledRotation(r) if !(r.norm() <= 1.0) => Err(Error::Parameter(format!("|r| = {} > 1", r.norm()))),
            Self::Constant(c) if !(c.norm() < 1.0) => Err(Error::Parameter(format!("|c| = {} >= 1", c.norm()))),
            Self::Monomial(0) => Err(Error::Parameter("monomial power must be at least 1".into())),
            _ => Ok(()),
        }
    }

    pub fn boundary(&self, t: f64) -> BoundaryPoint {
        let (log_modulus, phase) = match *self {
            Self::Identity => (0.0, t),
            Self::ScaledRotation(r) => (libm::log(r.norm()), r.arg() + t),
            Self::Constant(c) => (libm::log(c.norm()), c.arg()),
            Self::Monomial(k) => (0.0, k as f64 * t),
            Self::Affine => (libm::log(libm::cos(0.5 * t)), 0.5 * t),
        };
        BoundaryPoint { log_modulus, phase }
    }

    pub fn interior(&self, z: Complex64) -> Complex64 {
        match *self {
            Self::Identity => z,
            Self::ScaledRotation(r) => r * z,
            Self::Constant(c) => c,
            Self::Monomial(k) => z.powu(k),
            Self::Affine => (Complex64::new(1.0, 0.0) + z) * 0.5,
        }
    }

    /// `1 - |φ(z)|` given `1 - z`.
    pub fn interior_gap(&self, z: Complex64, one_minus_z: Complex64) -> f64 {
        match *self {
            // |(1+z)/2| = |1 - (1-z)/2|
            Self::Affine => 1.0 - (Complex64::new(1.0, 0.0) - one_minus_z * 0.5).norm(),
            _ => 1.0 - self.interior(z).norm(),
        }
    }
}
