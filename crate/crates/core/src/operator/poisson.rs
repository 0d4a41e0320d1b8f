use alloc::format;
use alloc::vec::Vec;

use crate::criteria::{CriterionVerdict, Tri};
use crate::numerics::{loglog_fit, FitResult, NeumaierSum};
use crate::{Complex64, Error, Result};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PoissonSums {
    pub p: f64,
    /// `m_n = ∫ |z|^{2n} dμ`, `0 ≤ n ≤ n_max`.
    pub moments: Vec<f64>,
    /// `S_N = m_0^{p/2} + 2 Σ_{1≤n≤N} m_n^{p/2}`: the index runs over
    /// `|n| ≤ N` and the moments only see `|n|`.
    pub partial_sums: Vec<f64>,
    /// Fit of `m_n` against `n` over `n_max/4 ≤ n ≤ n_max`.
    pub moment_fit: Option<FitResult>,
}

impl PoissonSums {
    pub fn total(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }

    /// Cauchy test on the dyadic blocks `(N/4, N/2]` and `(N/2, N]`: for
    /// terms `≈ n^{-s}` their ratio is `2^{1-s}`, below 1 iff the series
    /// converges. `Yes` at ratio ≤ 0.9, `No` at ≥ 0.97.
    pub fn cauchy_verdict(&self) -> CriterionVerdict {
        let n = self.partial_sums.len() - 1;
        let (q, h) = (n / 4, n / 2);
        if q == 0 || q == h {
            return CriterionVerdict::new("partial_sums_cauchy", Tri::Inconclusive, Vec::new(), 0.9);
        }
        let s = &self.partial_sums;
        let (d1, d2) = (s[h] - s[q], s[n] - s[h]);
        let mut evidence = alloc::vec![(q as f64, s[q]), (h as f64, s[h]), (n as f64, s[n])];
        let passed = if d2 <= 1e-15 * s[n] {
            Tri::Yes
        } else if d1 <= 0.0 {
            Tri::Inconclusive
        } else {
            let r = d2 / d1;
            evidence.push((-1.0, r));
            if r <= 0.9 {
                Tri::Yes
            } else if r >= 0.97 {
                Tri::No
            } else {
                Tri::Inconclusive
            }
        };
        CriterionVerdict::new("partial_sums_cauchy", passed, evidence, 0.9)
    }
}

pub fn poisson_moment_sums(samples: &[(Complex64, f64)], p: f64, n_max: usize) -> Result<PoissonSums> {
    if !(p > 0.0 && p <= 2.0) {
        return Err(Error::Parameter(format!("p = {p} outside (0, 2]")));
    }
    let total = samples.iter().map(|s| s.1).collect::<NeumaierSum>().value();
    if !((total - 1.0).abs() < 1e-12) || samples.iter().any(|s| !(s.1 >= 0.0) || s.0.norm() > 1.0) {
        return Err(Error::Validation(format!("need a probability measure on the closed disc (mass {total})")));
    }
    let mut acc: Vec<NeumaierSum> = (0..=n_max).map(|_| NeumaierSum::new()).collect();
    for &(z, w) in samples {
        let r2 = z.norm_sqr();
        let mut pw = w;
        for a in acc.iter_mut() {
            if pw == 0.0 {
                break;
            }
            a.add(pw);
            pw *= r2;
        }
    }
    let moments: Vec<f64> = acc.iter().map(|a| a.value()).collect();
    let alpha = 0.5 * p;
    let mut s = NeumaierSum::new();
    let mut partial_sums = Vec::with_capacity(n_max + 1);
    for (n, &m) in moments.iter().enumerate() {
        let t = libm::pow(m, alpha);
        s.add(if n == 0 { t } else { 2.0 * t });
        partial_sums.push(s.value());
    }
    let pairs: Vec<(f64, f64)> = (n_max / 4..=n_max).filter(|&n| n >= 1 && moments[n] > 0.0).map(|n| (n as f64, moments[n])).collect();
    let moment_fit = if pairs.len() >= 4 { loglog_fit(&pairs).ok() } else { None };
    Ok(PoissonSums { p, moments, partial_sums, moment_fit })
}

/// Probability measure with radial density `∝ (1 − r)^{β−2}` on `[0, 1)`,
/// midpoint rule in r, golden-angle arguments.
pub fn beta_radial_measure(beta: f64, radial: usize) -> Result<Vec<(Complex64, f64)>> {
    if !(beta > 1.0) || radial == 0 {
        return Err(Error::Parameter(format!("beta = {beta} must exceed 1 with a nonempty grid")));
    }
    let golden = core::f64::consts::PI * (3.0 - libm::sqrt(5.0));
    let dr = 1.0 / radial as f64;
    let mut pts: Vec<(Complex64, f64)> = (0..radial)
        .map(|i| {
            let r = (i as f64 + 0.5) * dr;
            (Complex64::from_polar(r, golden * i as f64), libm::pow(1.0 - r, beta - 2.0))
        })
        .collect();
    let total = pts.iter().map(|p| p.1).collect::<NeumaierSum>().value();
    for p in pts.iter_mut() {
        p.1 /= total;
    }
    Ok(pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lbeta(a: f64, b: f64) -> f64 {
        libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(a + b)
    }

    #[test]
    fn point_mass_and_circle() {
        let s = poisson_moment_sums(&[(Complex64::new(0.0, 0.0), 1.0)], 1.0, 10).unwrap();
        assert_eq!(s.total(), 1.0);
        let circle: Vec<(Complex64, f64)> = (0..64).map(|j| (Complex64::from_polar(0.5, j as f64 * 0.1), 1.0 / 64.0)).collect();
        let s = poisson_moment_sums(&circle, 2.0, 40).unwrap();
        assert!((s.total() - (1.0 + 2.0 * (0.25 / 0.75) * (1.0 - libm::pow(0.25, 40.0)))).abs() < 1e-12);
        assert!(poisson_moment_sums(&circle, 2.5, 4).is_err());
        assert!(poisson_moment_sums(&circle[..10], 1.0, 4).is_err());
    }

    #[test]
    fn beta_three_moments() {
        let mu = beta_radial_measure(3.0, 1 << 16).unwrap();
        let s = poisson_moment_sums(&mu, 1.5, 512).unwrap();
        for n in [1usize, 10, 100, 512] {
            let want = libm::exp(lbeta(2.0 * n as f64 + 1.0, 2.0) - lbeta(1.0, 2.0));
            assert!((s.moments[n] / want - 1.0).abs() < 1e-3, "n={n}");
        }
        let fit = s.moment_fit.unwrap();
        assert!((fit.exponent + 2.0).abs() < 0.2);
        assert_eq!(s.cauchy_verdict().passed, Tri::Yes);
    }

    #[test]
    fn divergent_blocks() {
        // β = 3, p = 0.5: terms ≈ n^{-1/2}
        let mu = beta_radial_measure(3.0, 1 << 14).unwrap();
        let s = poisson_moment_sums(&mu, 0.5, 1024).unwrap();
        assert_eq!(s.cauchy_verdict().passed, Tri::No);
    }
}
