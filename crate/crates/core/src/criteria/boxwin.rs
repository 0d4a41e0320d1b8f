use alloc::format;
use alloc::vec::Vec;

use super::{scaled_power_sum, CriterionVerdict, Tri};
use crate::measure::PullbackHistogram;
use crate::numerics::NeumaierSum;
use crate::{Error, Result};

/// Largest max/min spread of the window/box ratio accepted as bounded.
pub const BOX_WINDOW_SPREAD: f64 = 3.0;

/// Truncated sums `Σ_{n≤D} 2^{nα} Σ_j m̂(R_{n,j})^α` and the same over
/// windows, for every depth `D`, with `α = p/2`. Level 0 holds the core
/// and the whole open disc.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoxWindowSums {
    pub p: f64,
    pub box_sums: Vec<f64>,
    pub window_sums: Vec<f64>,
}

impl BoxWindowSums {
    /// Window over box sum at depth D; 1 when both vanish.
    pub fn ratio(&self, d: usize) -> f64 {
        let (b, w) = (self.box_sums[d], self.window_sums[d]);
        if b == 0.0 && w == 0.0 {
            1.0
        } else {
            w / b
        }
    }
}

pub fn box_window_sums(hist: &PullbackHistogram, p: f64) -> Result<BoxWindowSums> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::Parameter(format!("p = {p} must be positive")));
    }
    let alpha = 0.5 * p;
    let mut b = NeumaierSum::new();
    let mut w = NeumaierSum::new();
    let mut box_sums = Vec::new();
    let mut window_sums = Vec::new();
    for n in 0..=hist.depth() {
        b.add(scaled_power_sum(hist.box_runs(n), n, alpha));
        w.add(scaled_power_sum(hist.window_runs(n), n, alpha));
        box_sums.push(b.value());
        window_sums.push(w.value());
    }
    Ok(BoxWindowSums { p, box_sums, window_sums })
}

/// Box sums never exceed window sums, and over the deeper half of the
/// depths their ratio stays within a spread of [`BOX_WINDOW_SPREAD`].
pub fn box_window_consistency(hist: &PullbackHistogram, p: f64) -> Result<CriterionVerdict> {
    if hist.depth() < 6 {
        return Err(Error::InsufficientData(format!("histogram depth {} below 6", hist.depth())));
    }
    let s = box_window_sums(hist, p)?;
    let evidence: Vec<(f64, f64)> = (0..s.box_sums.len()).map(|d| (d as f64, s.ratio(d))).collect();
    let contained = s.box_sums.iter().zip(&s.window_sums).all(|(b, w)| b <= w);
    if !contained {
        return Ok(CriterionVerdict::new("box_window_consistency", Tri::No, evidence, BOX_WINDOW_SPREAD));
    }
    let from = s.box_sums.len() / 2;
    let tail: Vec<f64> = evidence[from..].iter().map(|e| e.1).collect();
    let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = tail.iter().copied().fold(0.0, f64::max);
    let passed = if hi.is_finite() && lo >= 1.0 && hi <= BOX_WINDOW_SPREAD * lo { Tri::Yes } else { Tri::Inconclusive };
    Ok(CriterionVerdict::new("box_window_consistency", passed, evidence, BOX_WINDOW_SPREAD))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::pullback_histogram;
    use crate::symbols::{sample_trace, SymbolSpec};

    #[test]
    fn rotation_sums() {
        let tr = sample_trace(&SymbolSpec::rotation(0.75), 256, 0).unwrap();
        let h = pullback_histogram(&tr, 8).unwrap();
        let s = box_window_sums(&h, 2.0).unwrap();
        assert!((s.box_sums[8] - 4.0).abs() < 1e-12);
        assert!((s.window_sums[8] - 7.0).abs() < 1e-12);
        assert_eq!(box_window_consistency(&h, 2.0).unwrap().passed, Tri::Yes);
    }

    #[test]
    fn zero_constant_ratio_is_one() {
        let tr = sample_trace(&SymbolSpec::constant(0.0), 64, 0).unwrap();
        let h = pullback_histogram(&tr, 8).unwrap();
        let s = box_window_sums(&h, 1.0).unwrap();
        assert_eq!(s.ratio(8), 1.0);
        assert_eq!(box_window_consistency(&h, 1.0).unwrap().passed, Tri::Yes);
    }
}
