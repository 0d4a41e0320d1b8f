use alloc::format;

use crate::{Error, Result};

/// Power-law fit `y ≈ prefactor · h^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FitResult {
    pub exponent: f64,
    pub prefactor: f64,
    /// RMS deviation of the fitted line in log space.
    pub residual: f64,
    pub range: (f64, f64),
}

/// Ordinary least-squares line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() {
        return Err(Error::Validation("length mismatch".into()));
    }
    if xs.len() < 3 {
        return Err(Error::InsufficientData(format!("{} points, need 3", xs.len())));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if !(sxx > 0.0) {
        return Err(Error::InsufficientData("abscissae are not distinct".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs.iter().zip(ys).map(|(&x, &y)| { let e = y - intercept - slope * x; e * e }).sum();
    Ok(LinearFit { slope, intercept, residual: libm::sqrt(ss / n) })
}

/// Least-squares line through `(ln h, ln y)`.
pub fn loglog_fit(pairs: &[(f64, f64)]) -> Result<FitResult> {
    if pairs.len() < 3 {
        return Err(Error::InsufficientData(format!("{} pairs, need 3", pairs.len())));
    }
    if pairs.iter().any(|&(h, y)| !(h > 0.0 && y > 0.0) || !h.is_finite() || !y.is_finite()) {
        return Err(Error::Validation("loglog_fit needs positive finite h and y".into()));
    }
    let xs: alloc::vec::Vec<f64> = pairs.iter().map(|p| libm::log(p.0)).collect();
    let ys: alloc::vec::Vec<f64> = pairs.iter().map(|p| libm::log(p.1)).collect();
    let lf = linear_fit(&xs, &ys)?;
    let lo = pairs.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = pairs.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    Ok(FitResult { exponent: lf.slope, prefactor: libm::exp(lf.intercept), residual: lf.residual, range: (lo, hi) })
}

/// Fit of `ln y = c + s·ln n + κ·ln ln n`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LogCorrectedFit {
    pub exponent: f64,
    pub log_exponent: f64,
    pub intercept: f64,
    pub residual: f64,
}

pub fn log_corrected_fit(pairs: &[(f64, f64)]) -> Result<LogCorrectedFit> {
    if pairs.len() < 4 {
        return Err(Error::InsufficientData(format!("{} pairs, need 4", pairs.len())));
    }
    if pairs.iter().any(|&(n, y)| !(n > 1.0 && y > 0.0)) {
        return Err(Error::Validation("log-corrected fit needs n > 1 and y > 0".into()));
    }
    // normal equations, columns (1, ln n, ln ln n), solved by Gaussian elimination
    let mut a = [[0.0f64; 4]; 3];
    for &(n, y) in pairs {
        let row = [1.0, libm::log(n), libm::log(libm::log(n))];
        let ly = libm::log(y);
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] += row[i] * row[j];
            }
            a[i][3] += row[i] * ly;
        }
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        if a[col][col].abs() < 1e-300 {
            return Err(Error::InsufficientData("singular design".into()));
        }
        for r in 0..3 {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..4 {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    let beta = [a[0][3] / a[0][0], a[1][3] / a[1][1], a[2][3] / a[2][2]];
    let mut ss = 0.0;
    for &(n, y) in pairs {
        let pred = beta[0] + beta[1] * libm::log(n) + beta[2] * libm::log(libm::log(n));
        let e = libm::log(y) - pred;
        ss += e * e;
    }
    Ok(LogCorrectedFit {
        exponent: beta[1],
        log_exponent: beta[2],
        intercept: beta[0],
        residual: libm::sqrt(ss / pairs.len() as f64),
    })
}

/// Fit of `ln y = c + power·ln n + κ·ln ln n` with the power held fixed.
/// Over short ranges `ln n` and `ln ln n` are nearly collinear, so the
/// free fit cannot separate them; pinning the power leaves a plain line.
pub fn critical_log_fit(pairs: &[(f64, f64)], power: f64) -> Result<LogCorrectedFit> {
    if pairs.iter().any(|&(n, y)| !(n > 1.0 && y > 0.0)) {
        return Err(Error::Validation("log-corrected fit needs n > 1 and y > 0".into()));
    }
    let xs: alloc::vec::Vec<f64> = pairs.iter().map(|p| libm::log(libm::log(p.0))).collect();
    let ys: alloc::vec::Vec<f64> = pairs.iter().map(|p| libm::log(p.1) - power * libm::log(p.0)).collect();
    let lf = linear_fit(&xs, &ys)?;
    Ok(LogCorrectedFit { exponent: power, log_exponent: lf.slope, intercept: lf.intercept, residual: lf.residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn exact_power_law() {
        let pairs: Vec<_> = (4..=10).map(|n| {
            let h = libm::ldexp(1.0, -n);
            (h, h * h)
        }).collect();
        let f = loglog_fit(&pairs).unwrap();
        assert!((f.exponent - 2.0).abs() < 1e-12);
        assert!(f.residual < 1e-12);
        assert!(f.range.0 < f.range.1);
    }

    #[test]
    fn prefactor() {
        let pairs: Vec<_> = (2..=9).map(|n| {
            let h = libm::ldexp(1.0, -n);
            (h, 3.0 * h)
        }).collect();
        let f = loglog_fit(&pairs).unwrap();
        assert!((f.exponent - 1.0).abs() < 1e-12);
        assert!((f.prefactor - 3.0).abs() < 1e-10);
    }

    #[test]
    fn log_correction_slows_the_slope() {
        let pairs: Vec<_> = (8..=16).map(|n| {
            let h = libm::ldexp(1.0, -n);
            (h, h / libm::log(1.0 / h))
        }).collect();
        let f = loglog_fit(&pairs).unwrap();
        assert!(f.exponent > 1.0 && f.exponent < 1.2, "{}", f.exponent);
    }

    #[test]
    fn too_few_pairs() {
        assert!(matches!(loglog_fit(&[(0.5, 1.0), (0.25, 2.0)]), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn log_corrected_recovers_both_exponents() {
        let pairs: Vec<_> = (4..200).map(|n| {
            let n = n as f64;
            (n, 2.0 * libm::pow(n, -1.3) * libm::pow(libm::log(n), 0.7))
        }).collect();
        let f = log_corrected_fit(&pairs).unwrap();
        assert!((f.exponent + 1.3).abs() < 1e-8);
        assert!((f.log_exponent - 0.7).abs() < 1e-8);
    }

    #[test]
    fn critical_fit_short_range() {
        let pairs: Vec<_> = (64..=256).map(|n| {
            let n = n as f64;
            (n, 0.7 / (n * libm::pow(libm::log(n), 1.5)))
        }).collect();
        let f = critical_log_fit(&pairs, -1.0).unwrap();
        assert!((f.log_exponent + 1.5).abs() < 1e-10);
        assert!((f.intercept - libm::log(0.7)).abs() < 1e-10);
    }
}
