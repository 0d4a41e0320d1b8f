use alloc::vec::Vec;

use num_complex::Complex64;

use super::series::{sin_beta_coeffs, CosineSeries};
use super::BoundaryPoint;
use crate::{Error, Result};

/// `φ = M Φ` (or `Φ` alone) with `Φ = exp(-F)`, `F = Σ a_k z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralConstructionSymbol {
    series: CosineSeries,
    include_inner_factor: bool,
}

/// The singular inner function `M(z) = exp(-(1+z)/(1-z))`, with `M(1) = 0`
/// as the radial limit.
pub fn inner_factor(z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if z == one {
        return Complex64::new(0.0, 0.0);
    }
    (-(one + z) / (one - z)).exp()
}

impl GeneralConstructionSymbol {
    pub fn new(series: CosineSeries, include_inner_factor: bool) -> Result<Self> {
        series.check_invariants()?;
        Ok(Self { series, include_inner_factor })
    }

    /// Built on `f = |sin(t/2)|^β`. The Taylor part of F keeps terms until
    /// |a_K| drops below 1e-14, capped at 2^13 terms.
    pub fn from_beta(beta: f64, include_inner_factor: bool) -> Result<Self> {
        if beta == 2.0 {
            return Self::new(CosineSeries::sin_squared(), include_inner_factor);
        }
        // |c_k| ≈ |c_1| k^{-β-1}; c_1 ≤ 1 in modulus
        let k_needed = libm::pow(1e14, 1.0 / (beta + 1.0)) as usize;
        let k = k_needed.clamp(64, 1 << 13).next_power_of_two();
        Self::new(sin_beta_coeffs(beta, k)?, include_inner_factor)
    }

    pub fn series(&self) -> &CosineSeries {
        &self.series
    }

    pub fn include_inner_factor(&self) -> bool {
        self.include_inner_factor
    }

    pub fn f(&self, t: f64) -> f64 {
        self.series.eval(t)
    }

    pub fn hf(&self, t: f64) -> f64 {
        self.series.conjugate(t)
    }

    /// γ(t) = Hf(t) + cot(t/2).
    pub fn gamma(&self, t: f64) -> f64 {
        self.hf(t) + 1.0 / libm::tan(0.5 * t)
    }

    /// γ'(t) = (Hf)'(t) - 1/(2 sin²(t/2)).
    pub fn gamma_derivative(&self, t: f64) -> f64 {
        let s = libm::sin(0.5 * t);
        self.series.conjugate_derivative(t) - 0.5 / (s * s)
    }

    pub fn boundary(&self, t: f64) -> Result<BoundaryPoint> {
        if t == 0.0 {
            return Err(Error::Singularity);
        }
        let mut phase = -self.hf(t);
        if self.include_inner_factor {
            phase -= 1.0 / libm::tan(0.5 * t);
        }
        Ok(BoundaryPoint { log_modulus: -self.f(t), phase })
    }

    /// F(z) by Horner on the stored coefficients.
    pub fn big_f(&self, z: Complex64) -> Complex64 {
        let c = self.series.coeffs();
        let mut acc = Complex64::new(0.0, 0.0);
        for &a in c.iter().rev() {
            acc = acc * z + a;
        }
        acc
    }

    pub fn interior(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() > 1.0 {
            return Err(Error::Domain(z.norm()));
        }
        let mut v = (-self.big_f(z)).exp();
        if self.include_inner_factor {
            v *= inner_factor(z);
        }
        Ok(v)
    }

    /// Values on the circle |z| = r at `z_j = r e^{2πij/K}`, evaluating F by
    /// one inverse transform of the scaled coefficients.
    pub fn circle_values(&self, r: f64, k: usize) -> Result<Vec<Complex64>> {
        use crate::numerics::fft_in_place;
        let c = self.series.coeffs();
        if c.len() > k {
            return Err(Error::Parameter("circle transform shorter than the series".into()));
        }
        let mut buf = alloc::vec![Complex64::new(0.0, 0.0); k];
        let mut rk = 1.0;
        for (j, &a) in c.iter().enumerate() {
            buf[j] = Complex64::new(a * rk, 0.0);
            rk *= r;
        }
        fft_in_place(&mut buf, true)?;
        let out = buf
            .iter()
            .enumerate()
            .map(|(j, f)| {
                let mut v = (-*f).exp();
                if self.include_inner_factor {
                    let a = 2.0 * core::f64::consts::PI * j as f64 / k as f64;
                    v *= inner_factor(Complex64::from_polar(r, a));
                }
                v
            })
            .collect();
        Ok(out)
    }
}

/// φ*(e^{it}) = e^{-f(t)} e^{-i(Hf(t) + cot(t/2))}, inner factor optional.
pub fn eval_general_boundary(sym: &GeneralConstructionSymbol, t: f64) -> Result<Complex64> {
    sym.boundary(t).map(|b| b.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::bisect_inverse;
    use core::f64::consts::PI;

    #[test]
    fn value_at_pi() {
        let s = GeneralConstructionSymbol::from_beta(2.0, false).unwrap();
        let v = eval_general_boundary(&s, PI).unwrap();
        assert!((v - Complex64::new((-1.0f64).exp(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn same_modulus_with_inner_factor() {
        let a = GeneralConstructionSymbol::from_beta(2.0, false).unwrap();
        let b = GeneralConstructionSymbol::from_beta(2.0, true).unwrap();
        for j in 1..200 {
            let t = -PI + 2.0 * PI * j as f64 / 200.0 + 1e-3;
            let (va, vb) = (eval_general_boundary(&a, t).unwrap(), eval_general_boundary(&b, t).unwrap());
            assert!((va.norm() - vb.norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn real_positive_at_full_winding() {
        let s = GeneralConstructionSymbol::from_beta(2.0, true).unwrap();
        let t = bisect_inverse(|t| s.gamma(t), 1e-3, 3.0, 2.0 * PI).unwrap();
        let v = eval_general_boundary(&s, t).unwrap();
        assert!(v.re > 0.0);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn zero_is_singular() {
        let s = GeneralConstructionSymbol::from_beta(2.0, true).unwrap();
        assert_eq!(s.boundary(0.0), Err(Error::Singularity));
    }

    #[test]
    fn circle_values_match_pointwise() {
        let s = GeneralConstructionSymbol::from_beta(2.0, true).unwrap();
        let k = 64;
        let r = 0.9;
        let v = s.circle_values(r, k).unwrap();
        for j in [0usize, 5, 31, 63] {
            let z = Complex64::from_polar(r, 2.0 * PI * j as f64 / k as f64);
            assert!((v[j] - s.interior(z).unwrap()).norm() < 1e-14);
        }
    }
}
