use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::numerics::{bisect_inverse, NeumaierSum};
use crate::symbols::GeneralConstructionSymbol;
use crate::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;

/// Which modulus constraint cuts the working range `0 < t ≤ t_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ModulusBound {
    /// `|φ*| ≥ 1 − h`, i.e. `f(t) ≤ −ln(1 − h)`.
    #[default]
    Exact,
    /// `f(t) ≤ 2h`, the cruder upper-bound range.
    Relaxed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PreimageOptions {
    pub bound: ModulusBound,
    /// Windings resolved by root finding; the rest go into a tail estimate.
    pub max_windings: usize,
    /// Window centers tried by [`preimage_carleson_estimate`].
    pub angles: usize,
}

impl Default for PreimageOptions {
    fn default() -> Self {
        Self { bound: ModulusBound::Exact, max_windings: 4096, angles: 64 }
    }
}

/// Parameters `t > 0` with `φ*(e^{-it}) ∈ W(e^{iξ}, h)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WindowPreimage {
    pub h: f64,
    pub xi_angle: f64,
    /// Disjoint, sorted by `t`.
    pub intervals: Vec<(f64, f64)>,
    /// Winding index `n` of each interval: `γ = ξ ± h + 2πn` at its ends.
    pub windings: Vec<i64>,
    pub n_range: (i64, i64),
    pub t_max: f64,
    /// `Σ_{n > n_end} h/(π² n²)`, from `γ(t) ≈ 2/t`.
    pub tail: f64,
}

impl WindowPreimage {
    pub fn resolved_measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).collect::<NeumaierSum>().value()
    }

    pub fn total_measure(&self) -> f64 {
        self.resolved_measure() + self.tail
    }
}

fn t_max(sym: &GeneralConstructionSymbol, h: f64, bound: ModulusBound) -> Result<f64> {
    let level = match bound {
        ModulusBound::Exact => -libm::log1p(-h),
        ModulusBound::Relaxed => 2.0 * h,
    };
    if sym.f(PI) <= level {
        return Ok(PI);
    }
    bisect_inverse(|t| sym.f(t), 0.0, PI, level)
}

fn check_monotone(sym: &GeneralConstructionSymbol, tmax: f64) -> Result<()> {
    let steps = 2048;
    let mut prev = f64::INFINITY;
    for i in 0..=steps {
        let t = tmax * libm::exp2(-40.0 * (steps - i) as f64 / steps as f64);
        let g = sym.gamma(t);
        if !(g < prev) {
            return Err(Error::Inapplicable(format!("gamma is not strictly decreasing near t = {t:.3e}")));
        }
        prev = g;
    }
    Ok(())
}

/// Solves `γ(t) = y` for `0 < t ≤ tmax`, given `γ(tmax) ≤ y`.
fn gamma_inverse(sym: &GeneralConstructionSymbol, y: f64, tmax: f64) -> Result<f64> {
    // γ(t) ≈ 2/t near zero
    let mut lo = (1.0 / (y.abs() + 4.0)).min(0.5 * tmax);
    while sym.gamma(lo) < y {
        lo *= 0.5;
        if lo < 1e-300 {
            return Err(Error::Bracket { y, lo: sym.gamma(tmax), hi: sym.gamma(lo) });
        }
    }
    bisect_inverse(|t| sym.gamma(t), lo, tmax, y)
}

/// Preimage intervals of a Carleson window under a symbol with the inner
/// factor: `γ(t) ∈ [ξ − h + 2πn, ξ + h + 2πn]` intersected with the
/// modulus constraint.
pub fn window_preimage_intervals(sym: &GeneralConstructionSymbol, h: f64, xi_angle: f64) -> Result<WindowPreimage> {
    window_preimage_with(sym, h, xi_angle, &PreimageOptions::default())
}

pub fn window_preimage_with(sym: &GeneralConstructionSymbol, h: f64, xi_angle: f64, opts: &PreimageOptions) -> Result<WindowPreimage> {
    if !sym.include_inner_factor() {
        return Err(Error::Inapplicable("preimage intervals need the inner factor".into()));
    }
    if !(h > 0.0 && h <= 1.0 / 16.0) {
        return Err(Error::Parameter(format!("window size {h} outside (0, 1/16]")));
    }
    if opts.max_windings == 0 {
        return Err(Error::Parameter("max_windings must be positive".into()));
    }
    let tmax = t_max(sym, h, opts.bound)?;
    check_monotone(sym, tmax)?;
    let g_end = sym.gamma(tmax);
    // first n whose band [a_n, b_n] reaches above γ(t_max)
    let n_start = libm::ceil((g_end - xi_angle - h) / TWO_PI) as i64;
    let n_end = n_start + opts.max_windings as i64 - 1;
    let mut intervals = Vec::with_capacity(opts.max_windings);
    let mut windings = Vec::with_capacity(opts.max_windings);
    for n in (n_start..=n_end).rev() {
        let a = xi_angle - h + TWO_PI * n as f64;
        let b = xi_angle + h + TWO_PI * n as f64;
        if b < g_end {
            continue;
        }
        let t_lo = gamma_inverse(sym, b, tmax)?;
        let t_hi = if a <= g_end { tmax } else { gamma_inverse(sym, a, tmax)? };
        if t_hi > t_lo {
            intervals.push((t_lo, t_hi));
            windings.push(n);
        }
    }
    let tail = h / (PI * PI * n_end.max(1) as f64);
    Ok(WindowPreimage { h, xi_angle, intervals, windings, n_range: (n_start, n_end), t_max: tmax, tail })
}

/// Semi-analytic Carleson function: the window at angle `θ` collects the
/// preimages at `t > 0` (argument `−γ`) and, by symmetry, at `t < 0`, so
/// its mass is `(A(−θ) + A(θ))/2π` with `A` the preimage measure above.
/// Maximized over `opts.angles` equally spaced centers.
pub fn preimage_carleson_estimate(sym: &GeneralConstructionSymbol, h: f64, opts: &PreimageOptions) -> Result<f64> {
    let k = opts.angles.max(1);
    let mut best: f64 = 0.0;
    for i in 0..k {
        let theta = -PI + TWO_PI * i as f64 / k as f64;
        let a = window_preimage_with(sym, h, theta, opts)?.total_measure();
        let b = window_preimage_with(sym, h, -theta, opts)?.total_measure();
        best = best.max((a + b) / TWO_PI);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym() -> GeneralConstructionSymbol {
        GeneralConstructionSymbol::from_beta(2.0, true).unwrap()
    }

    #[test]
    fn intervals_sorted_and_scaled() {
        let h = libm::ldexp(1.0, -10);
        let w = window_preimage_intervals(&sym(), h, 0.0).unwrap();
        for p in w.intervals.windows(2) {
            assert!(p[0].1 <= p[1].0);
        }
        for (&(a, b), &n) in w.intervals.iter().zip(&w.windings) {
            assert!(b > a);
            if n >= 2 && b < w.t_max {
                let s = (b - a) * (n * n) as f64 / h;
                assert!((0.05..20.0).contains(&s), "n={n} s={s}");
            }
        }
        let finv = t_max(&sym(), h, ModulusBound::Exact).unwrap();
        let r = w.total_measure() / (h * finv);
        assert!((0.05..20.0).contains(&r), "{r}");
    }

    #[test]
    fn needs_inner_factor() {
        let s = GeneralConstructionSymbol::from_beta(2.0, false).unwrap();
        assert!(matches!(window_preimage_intervals(&s, 0.01, 0.0), Err(Error::Inapplicable(_))));
    }
}
