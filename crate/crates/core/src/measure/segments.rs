use alloc::vec::Vec;
use core::f64::consts::PI;

use super::levels::{level_of, level_threshold, Level, LEVEL_CAP};
use crate::symbols::BoundaryTrace;

/// How trace samples are turned into mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum MassModel {
    /// Each node is a point mass `weight/2π`.
    Point,
    /// Consecutive nodes bound a segment of mass `Δt/2π` along which
    /// `ln|φ*|` and the argument are interpolated linearly. Winding symbols
    /// need this: between two nodes the argument may sweep many turns.
    #[default]
    Segment,
}

/// A piece of the pullback measure: mass spread along a path in
/// (log-modulus, argument) space, linear in the parameter s ∈ [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Piece {
    pub lm0: f64,
    pub lm1: f64,
    pub p0: f64,
    pub p1: f64,
    pub mass: f64,
}

impl Piece {
    fn point(lm: f64, p: f64, mass: f64) -> Self {
        Self { lm0: lm, lm1: lm, p0: p, p1: p, mass }
    }

    pub fn phase_at(&self, s: f64) -> f64 {
        if s <= 0.0 {
            self.p0
        } else if s >= 1.0 {
            self.p1
        } else {
            self.p0 + s * (self.p1 - self.p0)
        }
    }

    fn param_of(&self, lm: f64) -> f64 {
        ((lm - self.lm0) / (self.lm1 - self.lm0)).clamp(0.0, 1.0)
    }

    /// Calls `f(level, s_lo, s_hi)` for every level the piece passes
    /// through, with the parameter sub-interval spent there.
    pub fn for_each_level<F: FnMut(Level, f64, f64)>(&self, mut f: F) {
        let (la, lb) = (level_of(self.lm0), level_of(self.lm1));
        if la == lb || self.lm0.is_infinite() || self.lm1.is_infinite() {
            // an infinite endpoint pins the interior of the piece to it
            let l = if self.lm0 == f64::NEG_INFINITY { la } else if self.lm1 == f64::NEG_INFINITY { lb } else { la };
            f(l, 0.0, 1.0);
            return;
        }
        let (lo, hi) = if la < lb { (la, lb) } else { (lb, la) };
        let first = match lo {
            Level::Band(n) => n,
            _ => LEVEL_CAP + 1,
        };
        let last = match hi {
            Level::Band(n) => n,
            _ => LEVEL_CAP + 1,
        };
        for n in first..=last.min(LEVEL_CAP + 1) {
            let lower = level_threshold(n.min(LEVEL_CAP + 1));
            let upper = if n > LEVEL_CAP { 0.0 } else { level_threshold(n + 1) };
            let (a, b) = (self.param_of(lower), self.param_of(upper));
            let (s0, s1) = if a <= b { (a, b) } else { (b, a) };
            if s1 > s0 {
                let lvl = if n > LEVEL_CAP { Level::Deep } else { Level::Band(n) };
                f(lvl, s0, s1);
            }
        }
    }

    /// Parameter sub-interval where `ln|w| ≥ threshold`, if nonempty.
    pub fn superlevel(&self, threshold: f64) -> Option<(f64, f64)> {
        let (a, b) = (self.lm0 >= threshold, self.lm1 >= threshold);
        match (a, b) {
            (true, true) => Some((0.0, 1.0)),
            (false, false) => None,
            _ if self.lm0.is_infinite() || self.lm1.is_infinite() => None,
            (true, false) => {
                let s = self.param_of(threshold);
                (s > 0.0).then_some((0.0, s))
            }
            (false, true) => {
                let s = self.param_of(threshold);
                (s < 1.0).then_some((s, 1.0))
            }
        }
    }
}

/// Decomposes the trace's pullback measure into pieces.
pub(crate) fn pieces(trace: &BoundaryTrace, model: MassModel) -> Vec<Piece> {
    let t = trace.nodes();
    let lm = trace.log_modulus();
    let ph = trace.phase();
    let n = t.len();
    let two_pi = 2.0 * PI;
    let mut out = Vec::with_capacity(n + 2);
    match model {
        MassModel::Point => {
            for (i, w) in trace.weights().iter().enumerate() {
                out.push(Piece::point(lm[i], ph[i], w / two_pi));
            }
        }
        MassModel::Segment => {
            for i in 0..n - 1 {
                let dt = t[i + 1] - t[i];
                if trace.winds_at_zero() && t[i] < 0.0 && t[i + 1] > 0.0 {
                    // the argument is unbounded across t = 0
                    out.push(Piece::point(lm[i], ph[i], 0.5 * dt / two_pi));
                    out.push(Piece::point(lm[i + 1], ph[i + 1], 0.5 * dt / two_pi));
                } else {
                    out.push(Piece { lm0: lm[i], lm1: lm[i + 1], p0: ph[i], p1: ph[i + 1], mass: dt / two_pi });
                }
            }
            // across ±π the argument continues up to a whole number of turns
            let dt = t[0] + two_pi - t[n - 1];
            let k = libm::round((ph[n - 1] - ph[0]) / two_pi);
            out.push(Piece { lm0: lm[n - 1], lm1: lm[0], p0: ph[n - 1], p1: ph[0] + k * two_pi, mass: dt / two_pi });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_split_conserves_parameter_length() {
        let p = Piece { lm0: libm::log(0.3), lm1: -libm::ldexp(1.0, -12), p0: 0.0, p1: 1.0, mass: 1.0 };
        let mut total = 0.0;
        let mut levels = Vec::new();
        p.for_each_level(|l, a, b| {
            total += b - a;
            levels.push(l);
        });
        assert!((total - 1.0).abs() < 1e-15);
        assert_eq!(levels.first(), Some(&Level::Band(0)));
        assert_eq!(levels.last(), Some(&Level::Band(12)));
    }

    #[test]
    fn superlevel_part() {
        let p = Piece { lm0: -1.0, lm1: 0.0, p0: 0.0, p1: 1.0, mass: 1.0 };
        let (a, b) = p.superlevel(-0.25).unwrap();
        assert!((a - 0.75).abs() < 1e-15 && b == 1.0);
        assert!(p.superlevel(0.5).is_none());
    }
}
