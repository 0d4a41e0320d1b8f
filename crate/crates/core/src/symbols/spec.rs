use alloc::format;
use alloc::string::String;

use num_complex::Complex64;

use super::elementary::ElementarySymbol;
use super::general::GeneralConstructionSymbol;
use super::logpower::{LogPowerSymbol, LogPowerVariant, DEFAULT_EPSILON};
use super::BoundaryPoint;
use crate::{Error, Result};

/// Symbol family tag used in [`SymbolSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SymbolFamily {
    Identity,
    Rotation,
    Constant,
    Monomial,
    Affine,
    /// `f = |sin(t/2)|^β`, optional inner factor
    General,
    /// `z(-log z)^θ`
    LogPower,
    /// `z(-log z)^θ [log(-log z)]^q`
    LogPowerLoglog,
    /// `z log(-log z)`
    Loglog,
}

/// Declarative symbol description.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct SymbolSpec {
    pub family: SymbolFamily,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub beta: Option<f64>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub theta: Option<f64>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub q: Option<f64>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub epsilon: Option<f64>,
    /// rotation scale, real
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub r: Option<f64>,
    /// constant value, real
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub c: Option<f64>,
    /// monomial power
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub k: Option<u32>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub inner_factor: Option<bool>,
}

impl SymbolSpec {
    pub fn new(family: SymbolFamily) -> Self {
        Self { family, beta: None, theta: None, q: None, epsilon: None, r: None, c: None, k: None, inner_factor: None }
    }

    pub fn identity() -> Self {
        Self::new(SymbolFamily::Identity)
    }

    pub fn rotation(r: f64) -> Self {
        Self { r: Some(r), ..Self::new(SymbolFamily::Rotation) }
    }

    pub fn constant(c: f64) -> Self {
        Self { c: Some(c), ..Self::new(SymbolFamily::Constant) }
    }

    pub fn monomial(k: u32) -> Self {
        Self { k: Some(k), ..Self::new(SymbolFamily::Monomial) }
    }

    pub fn affine() -> Self {
        Self::new(SymbolFamily::Affine)
    }

    pub fn general(beta: f64, inner_factor: bool) -> Self {
        Self { beta: Some(beta), inner_factor: Some(inner_factor), ..Self::new(SymbolFamily::General) }
    }

    pub fn log_power(theta: f64) -> Self {
        Self { theta: Some(theta), ..Self::new(SymbolFamily::LogPower) }
    }

    pub fn log_power_loglog(theta: f64, q: Option<f64>) -> Self {
        Self { theta: Some(theta), q, ..Self::new(SymbolFamily::LogPowerLoglog) }
    }

    pub fn loglog() -> Self {
        Self::new(SymbolFamily::Loglog)
    }

    pub fn with_inner_factor(mut self, on: bool) -> Self {
        self.inner_factor = Some(on);
        self
    }

    /// Short human-readable tag, stable across runs.
    pub fn label(&self) -> String {
        let inner = if self.inner_factor.unwrap_or(false) { "*M" } else { "" };
        match self.family {
            SymbolFamily::Identity => "z".into(),
            SymbolFamily::Rotation => format!("{}z", self.r.unwrap_or(0.0)),
            SymbolFamily::Constant => format!("const {}", self.c.unwrap_or(0.0)),
            SymbolFamily::Monomial => format!("z^{}", self.k.unwrap_or(1)),
            SymbolFamily::Affine => "(1+z)/2".into(),
            SymbolFamily::General => format!("exp(-F) beta={}{inner}", self.beta.unwrap_or(2.0)),
            SymbolFamily::LogPower => format!("log-power theta={}{inner}", self.theta.unwrap_or(0.0)),
            SymbolFamily::LogPowerLoglog => {
                let th = self.theta.unwrap_or(0.0);
                format!("log-power theta={th} q={}{inner}", self.q.unwrap_or(th))
            }
            SymbolFamily::Loglog => format!("loglog{inner}"),
        }
    }
}

/// A constructed symbol of any family.
#[derive(Debug, Clone, PartialEq)]
pub enum Symbol {
    Elementary(ElementarySymbol),
    General(GeneralConstructionSymbol),
    LogPower(LogPowerSymbol),
}

fn need(v: Option<f64>, name: &str, family: SymbolFamily) -> Result<f64> {
    v.ok_or_else(|| Error::Parameter(format!("{family:?} needs `{name}`")))
}

impl Symbol {
    pub fn from_spec(spec: &SymbolSpec) -> Result<Self> {
        let fam = spec.family;
        let inner = spec.inner_factor.unwrap_or(false);
        let eps = spec.epsilon.unwrap_or(DEFAULT_EPSILON);
        let elementary = |e: ElementarySymbol| -> Result<Self> {
            if inner {
                return Err(Error::Unsupported("inner factor on an elementary symbol".into()));
            }
            e.validate()?;
            Ok(Self::Elementary(e))
        };
        match fam {
            SymbolFamily::Identity => elementary(ElementarySymbol::Identity),
            SymbolFamily::Rotation => elementary(ElementarySymbol::ScaledRotation(Complex64::new(need(spec.r, "r", fam)?, 0.0))),
            SymbolFamily::Constant => elementary(ElementarySymbol::Constant(Complex64::new(need(spec.c, "c", fam)?, 0.0))),
            SymbolFamily::Monomial => elementary(ElementarySymbol::Monomial(spec.k.unwrap_or(1))),
            SymbolFamily::Affine => elementary(ElementarySymbol::Affine),
            SymbolFamily::General => Ok(Self::General(GeneralConstructionSymbol::from_beta(spec.beta.unwrap_or(2.0), inner)?)),
            SymbolFamily::LogPower => Ok(Self::LogPower(LogPowerSymbol::new(LogPowerVariant::Theta, need(spec.theta, "theta", fam)?, None, eps, inner)?)),
            SymbolFamily::LogPowerLoglog => Ok(Self::LogPower(LogPowerSymbol::new(
                LogPowerVariant::ThetaLoglog,
                need(spec.theta, "theta", fam)?,
                spec.q,
                eps,
                inner,
            )?)),
            SymbolFamily::Loglog => Ok(Self::LogPower(LogPowerSymbol::new(LogPowerVariant::LoglogOnly, 1.0, None, eps, inner)?)),
        }
    }

    pub fn boundary(&self, t: f64) -> Result<BoundaryPoint> {
        match self {
            Self::Elementary(e) => Ok(e.boundary(t)),
            Self::General(g) => g.boundary(t),
            Self::LogPower(l) => l.boundary(t),
        }
    }

    /// True when the argument of φ* jumps by an unbounded amount at t = 0.
    pub fn winds_at_zero(&self) -> bool {
        match self {
            Self::Elementary(_) => false,
            Self::General(g) => g.include_inner_factor(),
            Self::LogPower(l) => l.include_inner_factor,
        }
    }

    /// True when `φ*(e^{-it}) = conj φ*(e^{it})`.
    pub fn conjugate_symmetric(&self) -> bool {
        match self {
            Self::Elementary(ElementarySymbol::Identity | ElementarySymbol::Monomial(_) | ElementarySymbol::Affine) => true,
            Self::Elementary(ElementarySymbol::ScaledRotation(r) | ElementarySymbol::Constant(r)) => r.im == 0.0 && r.re >= 0.0,
            Self::General(_) | Self::LogPower(_) => true,
        }
    }

    /// φ(z) for |z| ≤ 1, with `1 - z` supplied for accuracy near z = 1.
    pub fn interior_with(&self, z: Complex64, one_minus_z: Complex64) -> Result<Complex64> {
        if z.norm() > 1.0 + 1e-12 {
            return Err(Error::Domain(z.norm()));
        }
        match self {
            Self::Elementary(e) => Ok(e.interior(z)),
            Self::General(g) => g.interior(z),
            Self::LogPower(l) => l.interior_with(z, one_minus_z),
        }
    }

    pub fn interior(&self, z: Complex64) -> Result<Complex64> {
        self.interior_with(z, Complex64::new(1.0, 0.0) - z)
    }

    /// `1 - |φ(z)|`, computed without cancellation where the family allows.
    pub fn interior_gap(&self, z: Complex64, one_minus_z: Complex64) -> Result<f64> {
        match self {
            Self::Elementary(e) => Ok(e.interior_gap(z, one_minus_z)),
            Self::General(g) => {
                let f = g.big_f(z);
                let mut lm = -f.re;
                if g.include_inner_factor() {
                    lm += libm::log(super::inner_factor(z).norm());
                }
                Ok(-libm::expm1(lm))
            }
            Self::LogPower(l) => l.interior_gap(z, one_minus_z),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_every_family() {
        let specs = [
            SymbolSpec::identity(),
            SymbolSpec::rotation(0.75),
            SymbolSpec::constant(0.3),
            SymbolSpec::monomial(2),
            SymbolSpec::affine(),
            SymbolSpec::general(2.0, true),
            SymbolSpec::log_power(2.0),
            SymbolSpec::log_power_loglog(2.0, None),
            SymbolSpec::loglog(),
        ];
        for s in &specs {
            Symbol::from_spec(s).unwrap();
        }
    }

    #[test]
    fn missing_parameters() {
        assert!(Symbol::from_spec(&SymbolSpec::new(SymbolFamily::Rotation)).is_err());
        assert!(Symbol::from_spec(&SymbolSpec::constant(1.2)).is_err());
        assert!(Symbol::from_spec(&SymbolSpec::identity().with_inner_factor(true)).is_err());
        let mut s = SymbolSpec::log_power(2.0);
        s.epsilon = Some(0.5);
        assert!(Symbol::from_spec(&s).is_err());
    }
}
