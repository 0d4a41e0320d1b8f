use alloc::format;
use alloc::vec::Vec;

use super::{gram_matrix, OperatorMatrix};
use crate::symbols::BoundaryTrace;
use crate::criteria::{CriterionVerdict, Tri};
use crate::numerics::{loglog_fit, svd_values, FitResult, NeumaierSum};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SingularSpectrum {
    /// Nonincreasing.
    pub values: Vec<f64>,
}

impl SingularSpectrum {
    pub fn order(&self) -> usize {
        self.values.len()
    }
}

pub fn singular_spectrum(a: &OperatorMatrix) -> Result<SingularSpectrum> {
    Ok(SingularSpectrum { values: svd_values(a.entries())? })
}

/// Singular values of `C_φ` on `span{1, …, z^{N−1}}`, square roots of the
/// eigenvalues of [`gram_matrix`]. Nondecreasing in N, and tending to the
/// singular values of `C_φ`; values below ~1e-8·σ_1 are at the noise floor.
pub fn column_spectrum(trace: &BoundaryTrace, n: usize) -> Result<SingularSpectrum> {
    let g = gram_matrix(trace, n)?;
    let values = svd_values(&g)?.into_iter().map(|x| libm::sqrt(x.max(0.0))).collect();
    Ok(SingularSpectrum { values })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SchattenSum {
    pub p: f64,
    pub sum: f64,
    /// Fit `σ_k ≈ C k^{-s}` over `N/16 ≤ k ≤ N/4`; `exponent` holds `-s`.
    pub decay: Option<FitResult>,
}

impl SchattenSum {
    /// `s` in `σ_k ≈ C k^{-s}`.
    pub fn decay_rate(&self) -> Option<f64> {
        self.decay.map(|f| -f.exponent)
    }
}

pub fn schatten_sum(spec: &SingularSpectrum, p: f64) -> Result<SchattenSum> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::Parameter(format!("p = {p} must be positive")));
    }
    let sum = spec.values.iter().map(|&s| libm::pow(s, p)).collect::<NeumaierSum>().value();
    let n = spec.order();
    let (lo, hi) = ((n / 16).max(2), n / 4);
    let pairs: Vec<(f64, f64)> = (lo..=hi).filter(|&k| k >= 1 && spec.values[k - 1] > 0.0).map(|k| (k as f64, spec.values[k - 1])).collect();
    let decay = if pairs.len() >= 4 { loglog_fit(&pairs).ok() } else { None };
    Ok(SchattenSum { p, sum, decay })
}

/// Spectral verdict from spectra at increasing N. The increments
/// `d1, d2` of `Σσ^p` over the last two steps give a geometric tail
/// estimate `d2·r/(1−r)`, `r = d2/d1`: `Yes` (in S_p) when it is below 5%
/// of the sum, `No` when `r ≥ 0.95` or the tail is at least half the sum.
pub fn spectral_tail_verdict(spectra: &[SingularSpectrum], p: f64) -> Result<CriterionVerdict> {
    if spectra.len() < 3 {
        return Err(Error::InsufficientData(format!("{} spectra, need 3 truncation orders", spectra.len())));
    }
    if spectra.windows(2).any(|w| w[0].order() >= w[1].order()) {
        return Err(Error::Parameter("spectra must have increasing order".into()));
    }
    let sums: Vec<f64> = spectra.iter().map(|s| schatten_sum(s, p).map(|x| x.sum)).collect::<Result<_>>()?;
    let mut evidence: Vec<(f64, f64)> = spectra.iter().zip(&sums).map(|(s, &x)| (s.order() as f64, x)).collect();
    let k = sums.len();
    let total = sums[k - 1];
    let (d1, d2) = (sums[k - 2] - sums[k - 3], sums[k - 1] - sums[k - 2]);
    let small = 1e-12 * total.abs().max(1.0);
    let passed = if d2 <= small {
        evidence.push((-1.0, 0.0));
        Tri::Yes
    } else if d1 <= 0.0 {
        Tri::Inconclusive
    } else {
        let r = d2 / d1;
        let tail = if r < 1.0 { d2 * r / (1.0 - r) } else { f64::INFINITY };
        evidence.push((-1.0, r));
        evidence.push((-2.0, tail / total));
        if tail <= 0.05 * total {
            Tri::Yes
        } else if r >= 0.95 || tail >= 0.5 * total {
            Tri::No
        } else {
            Tri::Inconclusive
        }
    };
    Ok(CriterionVerdict::new("spectral_tail", passed, evidence, 0.05))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{matrix_truncation, taylor_matrix};
    use crate::symbols::{sample_trace, Symbol, SymbolSpec};

    #[test]
    fn closed_form_spectra() {
        let a = matrix_truncation(&sample_trace(&SymbolSpec::rotation(0.5), 128, 0).unwrap(), 8).unwrap();
        let s = singular_spectrum(&a).unwrap();
        for (k, v) in s.values.iter().enumerate() {
            assert!((v - libm::pow(0.5, k as f64)).abs() < 1e-10);
        }
        let a = matrix_truncation(&sample_trace(&SymbolSpec::constant(0.6), 256, 0).unwrap(), 32).unwrap();
        let s = singular_spectrum(&a).unwrap();
        assert!((s.values[0] - 1.25).abs() < 1e-6);
        assert!(s.values[1..].iter().all(|&v| v < 1e-10));
        let a = matrix_truncation(&sample_trace(&SymbolSpec::monomial(2), 64, 0).unwrap(), 8).unwrap();
        let s = singular_spectrum(&a).unwrap();
        assert!(s.values[..4].iter().all(|v| (v - 1.0).abs() < 1e-12));
        assert!(s.values[4..].iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn half_z_is_hilbert_schmidt() {
        let a = matrix_truncation(&sample_trace(&SymbolSpec::rotation(0.5), 512, 0).unwrap(), 32).unwrap();
        let s = schatten_sum(&singular_spectrum(&a).unwrap(), 2.0).unwrap();
        assert!((s.sum - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn monotone_in_truncation_and_p() {
        let sym = Symbol::from_spec(&SymbolSpec::general(2.0, true)).unwrap();
        let s: Vec<SingularSpectrum> = [16, 32, 64].iter().map(|&n| singular_spectrum(&taylor_matrix(&sym, n).unwrap()).unwrap()).collect();
        for w in s.windows(2) {
            for (k, v) in w[0].values.iter().enumerate() {
                assert!(w[1].values[k] >= v - 1e-10);
            }
        }
        let q = schatten_sum(&s[2], 1.0).unwrap().sum;
        let p = schatten_sum(&s[2], 2.0).unwrap().sum;
        assert!(libm::sqrt(p) <= q + 1e-12);
        assert!(spectral_tail_verdict(&s[..2], 1.0).is_err());
    }

    #[test]
    fn column_route() {
        let tr = sample_trace(&SymbolSpec::identity(), 1024, 0).unwrap();
        let s = column_spectrum(&tr, 64).unwrap();
        assert!(s.values.iter().all(|v| (v - 1.0).abs() < 1e-10));
        let tr = sample_trace(&SymbolSpec::rotation(0.5), 1024, 0).unwrap();
        let s = column_spectrum(&tr, 16).unwrap();
        assert!((schatten_sum(&s, 2.0).unwrap().sum - (4.0 / 3.0) * (1.0 - libm::pow(0.25, 16.0))).abs() < 1e-12);
        let tr = sample_trace(&SymbolSpec::general(2.0, true), 1024, 10).unwrap();
        assert!(column_spectrum(&tr, 8).is_err());
    }

    #[test]
    fn tail_rule() {
        let spec = |v: Vec<f64>| SingularSpectrum { values: v };
        // σ_k = 1/k at p = 1: harmonic growth never settles
        let h = |n: usize| spec((1..=n).map(|k| 1.0 / k as f64).collect());
        assert_eq!(spectral_tail_verdict(&[h(64), h(128), h(256)], 1.0).unwrap().passed, Tri::No);
        // p = 2: increments halve, tail ≈ 1/256 of the sum
        assert_eq!(spectral_tail_verdict(&[h(64), h(128), h(256)], 2.0).unwrap().passed, Tri::Yes);
        let g = |n: usize| spec((0..n).map(|k| libm::pow(0.5, k as f64)).collect());
        assert_eq!(spectral_tail_verdict(&[g(16), g(32), g(64)], 1.0).unwrap().passed, Tri::Yes);
    }
}
