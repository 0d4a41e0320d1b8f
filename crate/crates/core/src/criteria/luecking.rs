use alloc::format;
use alloc::vec::Vec;

use super::scaled_power_sum;
use crate::measure::PullbackHistogram;
use crate::numerics::{critical_log_fit, loglog_fit, FitResult, LogCorrectedFit, NeumaierSum};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SeriesVerdict {
    Converging,
    Diverging,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LueckingOptions {
    /// Fit range; defaults to `[depth/4, depth]`.
    pub n_lo: Option<u32>,
    pub n_hi: Option<u32>,
    /// The terms sit at the critical power, `L_n ≈ c/(n (ln n)^s)`: the
    /// power is pinned to −1 and the verdict rests on the fitted `−s`.
    pub log_corrected: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LueckingReport {
    pub p: f64,
    /// `(n, L_n)` for `1 ≤ n ≤ depth`, `L_n = 2^{np/2} Σ_j m̂(R_{n,j})^{p/2}`.
    pub per_level: Vec<(u32, f64)>,
    pub partial_sums: Vec<f64>,
    /// Power-law fit of `L_n` against `n`.
    pub growth_fit: Option<FitResult>,
    pub log_fit: Option<LogCorrectedFit>,
    pub fit_range: (u32, u32),
    pub verdict: SeriesVerdict,
    /// Every `L_n` vanished: the sum is trivially finite.
    pub rank_deficient: bool,
}

impl LueckingReport {
    pub fn total(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }
}

pub fn luecking_partial_sums(hist: &PullbackHistogram, p: f64) -> Result<LueckingReport> {
    luecking_partial_sums_with(hist, p, &LueckingOptions::default())
}

fn band(x: f64, lo: f64, hi: f64) -> SeriesVerdict {
    if x < lo {
        SeriesVerdict::Converging
    } else if x > hi {
        SeriesVerdict::Diverging
    } else {
        SeriesVerdict::Inconclusive
    }
}

pub fn luecking_partial_sums_with(hist: &PullbackHistogram, p: f64, opts: &LueckingOptions) -> Result<LueckingReport> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::Parameter(format!("p = {p} must be positive")));
    }
    let depth = hist.depth();
    if depth < 6 {
        return Err(Error::InsufficientData(format!("histogram depth {depth} below 6")));
    }
    let alpha = 0.5 * p;
    let mut per_level = Vec::with_capacity(depth as usize);
    let mut partial_sums = Vec::with_capacity(depth as usize);
    let mut acc = NeumaierSum::new();
    for n in 1..=depth {
        let l = scaled_power_sum(hist.box_runs(n), n, alpha);
        acc.add(l);
        per_level.push((n, l));
        partial_sums.push(acc.value());
    }
    let n_lo = opts.n_lo.unwrap_or((depth / 4).max(1)).max(1);
    let n_hi = opts.n_hi.unwrap_or(depth).min(depth);
    if n_hi < n_lo + 3 {
        return Err(Error::InsufficientData(format!("fit range [{n_lo}, {n_hi}] spans fewer than 4 levels")));
    }
    let in_range: Vec<(f64, f64)> = per_level.iter().filter(|(n, _)| (n_lo..=n_hi).contains(n)).map(|&(n, l)| (n as f64, l)).collect();
    let rank_deficient = per_level.iter().all(|&(_, l)| l == 0.0);
    let positive: Vec<(f64, f64)> = in_range.iter().copied().filter(|p| p.1 > 0.0).collect();
    let mut report = LueckingReport {
        p,
        per_level,
        partial_sums,
        growth_fit: None,
        log_fit: None,
        fit_range: (n_lo, n_hi),
        verdict: SeriesVerdict::Inconclusive,
        rank_deficient,
    };
    // nothing left at the fitted depths: the sum has stopped growing
    if in_range.iter().rev().take(4).all(|p| p.1 == 0.0) {
        report.verdict = SeriesVerdict::Converging;
        return Ok(report);
    }
    if positive.len() < 4 {
        return Ok(report);
    }
    let fit = loglog_fit(&positive)?;
    let mut verdict = if fit.exponent < -1.2 && fit.residual < 0.5 {
        SeriesVerdict::Converging
    } else if fit.exponent > -0.8 {
        SeriesVerdict::Diverging
    } else {
        SeriesVerdict::Inconclusive
    };
    if opts.log_corrected && positive.len() >= 5 {
        let lf = critical_log_fit(&positive, -1.0)?;
        // Σ 1/(n (ln n)^s) < ∞ iff s > 1
        verdict = band(lf.log_exponent, -1.2, -0.8);
        report.log_fit = Some(lf);
    }
    report.growth_fit = Some(fit);
    report.verdict = verdict;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::pullback_histogram;
    use crate::symbols::{sample_trace, SymbolSpec};

    #[test]
    fn rotation_levels() {
        let tr = sample_trace(&SymbolSpec::rotation(0.75), 256, 0).unwrap();
        let h = pullback_histogram(&tr, 10).unwrap();
        for p in [0.5, 1.0, 2.0, 3.7] {
            let r = luecking_partial_sums(&h, p).unwrap();
            for &(n, l) in &r.per_level {
                let want = if n == 2 { 4.0 } else { 0.0 };
                assert!((l - want).abs() < 1e-12, "p={p} n={n} l={l}");
            }
            assert!((r.total() - 4.0).abs() < 1e-12);
            assert_eq!(r.verdict, SeriesVerdict::Converging);
            assert!(!r.rank_deficient);
        }
    }

    #[test]
    fn zero_constant_is_rank_deficient() {
        let tr = sample_trace(&SymbolSpec::constant(0.0), 64, 0).unwrap();
        let h = pullback_histogram(&tr, 8).unwrap();
        let r = luecking_partial_sums(&h, 1.0).unwrap();
        assert!(r.rank_deficient);
        assert_eq!(r.verdict, SeriesVerdict::Converging);
    }

    #[test]
    fn shallow_histograms_rejected() {
        let tr = sample_trace(&SymbolSpec::rotation(0.75), 64, 0).unwrap();
        let h = pullback_histogram(&tr, 5).unwrap();
        assert!(luecking_partial_sums(&h, 1.0).is_err());
        let h = pullback_histogram(&tr, 8).unwrap();
        assert!(luecking_partial_sums(&h, 0.0).is_err());
    }
}
