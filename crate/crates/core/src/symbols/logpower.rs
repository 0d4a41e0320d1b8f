use alloc::format;

use num_complex::Complex64;

use super::BoundaryPoint;
use crate::{Error, Result};

/// Which log-power function is composed with the conformal map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum LogPowerVariant {
    /// `z (-log z)^θ`
    Theta,
    /// `z (-log z)^θ [log(-log z)]^q`
    ThetaLoglog,
    /// `z log(-log z)`
    LoglogOnly,
}

/// `exp(-f ∘ g)` with `g` the conformal map of the disc onto the half disc
/// `V_ε = {Re w > 0, |w| < ε}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogPowerSymbol {
    pub variant: LogPowerVariant,
    pub theta: f64,
    pub q: f64,
    pub epsilon: f64,
    pub include_inner_factor: bool,
}

pub const DEFAULT_EPSILON: f64 = 0.1;

fn check_epsilon(epsilon: f64) -> Result<()> {
    let max = libm::exp(-core::f64::consts::FRAC_PI_2);
    if !(epsilon > 0.0 && epsilon <= max) {
        return Err(Error::Parameter(format!("epsilon = {epsilon} outside (0, e^(-pi/2)]")));
    }
    Ok(())
}

/// Conformal map of the closed disc onto the closure of V_ε, with
/// `g(1) = 0`, `g(-1) = ε`, `g'(1) = -ε/4`.
///
/// `one_minus_z` must equal `1 - z`; passing it separately keeps the map
/// accurate next to z = 1, where the subtraction would cancel.
pub fn conformal_g(z: Complex64, one_minus_z: Complex64, epsilon: f64) -> Result<Complex64> {
    let r = z.norm();
    if r > 1.0 + 1e-12 {
        return Err(Error::Domain(r));
    }
    check_epsilon(epsilon)?;
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    let u = (i - z) / (one - i * z);
    // the image of the disc is the upper half plane; rounding on the circle
    // may leave a tiny negative imaginary part
    let u = Complex64::new(u.re, u.im.abs());
    let s = u.sqrt();
    Ok(Complex64::new(epsilon, epsilon) * one_minus_z / ((one - i * z) * (s + i) * (one - i * s)))
}

/// Boundary values `g(e^{it})`. The arc |t| < π/2 maps onto the imaginary
/// segment, evaluated in closed form so the real part is exactly 0.
pub fn conformal_g_boundary(t: f64, epsilon: f64) -> Result<Complex64> {
    check_epsilon(epsilon)?;
    if t == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if t.abs() < core::f64::consts::FRAC_PI_2 {
        let tt = libm::tan(0.5 * t);
        let big_t = libm::tan(core::f64::consts::FRAC_PI_4 - 0.5 * t);
        let d = 1.0 + libm::sqrt(big_t);
        return Ok(Complex64::new(0.0, -epsilon * 2.0 * tt / ((1.0 + tt) * d * d)));
    }
    let (s, c) = (libm::sin(0.5 * t), libm::cos(0.5 * t));
    let z = Complex64::new(libm::cos(t), libm::sin(t));
    let one_minus = Complex64::new(2.0 * s * s, -2.0 * s * c);
    conformal_g(z, one_minus, epsilon)
}

impl LogPowerSymbol {
    pub fn new(variant: LogPowerVariant, theta: f64, q: Option<f64>, epsilon: f64, include_inner_factor: bool) -> Result<Self> {
        check_epsilon(epsilon)?;
        if variant != LogPowerVariant::LoglogOnly && !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::Parameter(format!("theta = {theta} must be positive")));
        }
        let q = q.unwrap_or(theta);
        if !q.is_finite() {
            return Err(Error::Parameter("q must be finite".into()));
        }
        let s = Self { variant, theta, q, epsilon, include_inner_factor };
        s.check_real_part()?;
        Ok(s)
    }

    /// `Re f > 0` on the boundary of V_ε (imaginary segment and arc), hence
    /// inside by the minimum principle; otherwise ε is too large.
    fn check_real_part(&self) -> Result<()> {
        let eps = self.epsilon;
        let segment = (0..=400).map(|k| Complex64::new(0.0, eps * libm::exp2(-(k as f64) * 0.25)));
        let arc = (0..=256).map(|k| Complex64::from_polar(eps, core::f64::consts::FRAC_PI_2 * (k as f64 / 256.0)));
        for w in segment.chain(arc) {
            for w in [w, w.conj()] {
                let f = self.f_variant(w)?;
                if !(f.re > 0.0) {
                    return Err(Error::Parameter(format!(
                        "Re f <= 0 at w = {w} on the boundary of V_eps: epsilon = {eps} too large for theta = {}, q = {}",
                        self.theta, self.q
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn theta(theta: f64) -> Result<Self> {
        Self::new(LogPowerVariant::Theta, theta, None, DEFAULT_EPSILON, false)
    }

    pub fn loglog_only() -> Result<Self> {
        Self::new(LogPowerVariant::LoglogOnly, 1.0, None, DEFAULT_EPSILON, false)
    }

    pub fn with_inner_factor(mut self, on: bool) -> Self {
        self.include_inner_factor = on;
        self
    }

    /// The variant function on the closed half disc, principal branches,
    /// with `f(0) = 0` as the limit.
    pub fn f_variant(&self, w: Complex64) -> Result<Complex64> {
        if w == Complex64::new(0.0, 0.0) {
            return Ok(w);
        }
        let big_l = -w.ln();
        if !(big_l.re > 0.0) {
            return Err(Error::Branch(format!("Re(-log w) = {} at w = {w}", big_l.re)));
        }
        Ok(match self.variant {
            LogPowerVariant::Theta => w * big_l.powf(self.theta),
            LogPowerVariant::ThetaLoglog => w * big_l.powf(self.theta) * big_l.ln().powf(self.q),
            LogPowerVariant::LoglogOnly => w * big_l.ln(),
        })
    }

    pub fn boundary(&self, t: f64) -> Result<BoundaryPoint> {
        if t == 0.0 {
            return Err(Error::Singularity);
        }
        let f = self.f_variant(conformal_g_boundary(t, self.epsilon)?)?;
        let mut phase = -f.im;
        if self.include_inner_factor {
            phase -= 1.0 / libm::tan(0.5 * t);
        }
        Ok(BoundaryPoint { log_modulus: -f.re, phase })
    }

    /// φ(z) given `1 - z` separately for accuracy next to z = 1.
    pub fn interior_with(&self, z: Complex64, one_minus_z: Complex64) -> Result<Complex64> {
        let f = self.f_variant(conformal_g(z, one_minus_z, self.epsilon)?)?;
        let mut v = (-f).exp();
        if self.include_inner_factor {
            v *= super::inner_factor(z);
        }
        Ok(v)
    }

    /// `1 - |φ(z)|` computed without cancellation.
    pub fn interior_gap(&self, z: Complex64, one_minus_z: Complex64) -> Result<f64> {
        let f = self.f_variant(conformal_g(z, one_minus_z, self.epsilon)?)?;
        let mut log_mod = -f.re;
        if self.include_inner_factor {
            let m = super::inner_factor(z);
            log_mod += libm::log(m.norm());
        }
        Ok(-libm::expm1(log_mod))
    }
}

/// `exp(-f_variant(g(e^{it})))`.
pub fn eval_log_power_boundary(sym: &LogPowerSymbol, t: f64) -> Result<Complex64> {
    sym.boundary(t).map(|b| b.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    const EPS: f64 = 0.1;

    fn g(z: Complex64) -> Complex64 {
        conformal_g(z, Complex64::new(1.0, 0.0) - z, EPS).unwrap()
    }

    #[test]
    fn fixed_values() {
        assert_eq!(g(Complex64::new(1.0, 0.0)), Complex64::new(0.0, 0.0));
        assert!((g(Complex64::new(-1.0, 0.0)) - Complex64::new(EPS, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn derivative_at_one() {
        let h = 1e-7;
        let z = Complex64::new(1.0 - h, 0.0);
        let d = conformal_g(z, Complex64::new(h, 0.0), EPS).unwrap() / (-h);
        assert!((d - Complex64::new(-EPS / 4.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn image_in_half_disc() {
        for i in 1..40 {
            for j in 0..64 {
                let r = 1.0 - libm::pow(0.8, i as f64);
                let z = Complex64::from_polar(r, -PI + 2.0 * PI * j as f64 / 64.0);
                let w = g(z);
                assert!(w.re >= -1e-16 && w.norm() <= EPS * (1.0 + 1e-12), "{z} -> {w}");
            }
        }
    }

    #[test]
    fn boundary_closed_form_matches_general_map() {
        for &t in &[1e-3, 0.3, 1.0, -1.2, 1.5] {
            let z = Complex64::new(libm::cos(t), libm::sin(t));
            let om = Complex64::new(2.0 * libm::pow(libm::sin(t / 2.0), 2.0), -libm::sin(t));
            let a = conformal_g(z, om, EPS).unwrap();
            let b = conformal_g_boundary(t, EPS).unwrap();
            assert!((a - b).norm() < 1e-14 * (1.0 + b.norm()), "t={t}: {a} vs {b}");
        }
        // the arc lands on the circle |w| = ε
        for &t in &[2.0, -2.5, 3.1] {
            assert!((conformal_g_boundary(t, EPS).unwrap().norm() - EPS).abs() < 1e-14);
        }
    }

    #[test]
    fn outside_disc_is_a_domain_error() {
        let z = Complex64::new(1.5, 0.0);
        assert!(matches!(conformal_g(z, Complex64::new(1.0, 0.0) - z, EPS), Err(Error::Domain(_))));
    }

    #[test]
    fn theta_two_on_imaginary_axis() {
        // Re f(it) = π t L and Im f(it) = t (L² - π²/4) with L = ln(1/t)
        let s = LogPowerSymbol::theta(2.0).unwrap();
        for e in 3..=6 {
            let t = libm::pow(10.0, -(e as f64));
            let l = libm::log(1.0 / t);
            let f = s.f_variant(Complex64::new(0.0, t)).unwrap();
            assert!((f.re / (t * l) - PI).abs() < 1e-9);
            let ratio = f.im / (t * l * l);
            assert!((0.3..=3.0).contains(&ratio));
        }
    }

    #[test]
    fn loglog_on_imaginary_axis() {
        let s = LogPowerSymbol::loglog_only().unwrap();
        for e in 3..=6 {
            let t = libm::pow(10.0, -(e as f64));
            let l = libm::log(1.0 / t);
            let f = s.f_variant(Complex64::new(0.0, t)).unwrap();
            let a = f.re / (t / l);
            let b = f.im / (t * libm::log(l));
            assert!((0.3..=3.0).contains(&a), "{a}");
            assert!((0.3..=3.0).contains(&b), "{b}");
        }
    }

    #[test]
    fn positive_real_part_on_boundary() {
        for v in [LogPowerVariant::Theta, LogPowerVariant::ThetaLoglog, LogPowerVariant::LoglogOnly] {
            let s = LogPowerSymbol::new(v, 2.0, None, EPS, false).unwrap();
            let n = 1 << 12;
            for j in 0..n {
                let t = -PI + 2.0 * PI * (j as f64 + 0.5) / n as f64;
                let w = conformal_g_boundary(t, EPS).unwrap();
                assert!(s.f_variant(w).unwrap().re > 0.0, "{v:?} t={t}");
            }
        }
    }

    #[test]
    fn epsilon_too_large_for_loglog_factor() {
        assert!(LogPowerSymbol::new(LogPowerVariant::ThetaLoglog, 4.0, Some(3.0), 0.1, false).is_err());
        assert!(LogPowerSymbol::new(LogPowerVariant::ThetaLoglog, 4.0, Some(3.0), 0.01, false).is_ok());
        assert!(LogPowerSymbol::theta(4.0).is_ok());
    }
}
