//! Mass distributed over arguments on the circle: a uniform part, linear
//! ramps (uniform density over an arc) and atoms.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::runs::RunList;
use crate::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;

/// Reduces an angle to [−π, π) without disturbing tiny values.
pub(crate) fn reduce(x: f64) -> f64 {
    if (-PI..PI).contains(&x) {
        return x;
    }
    let mut r = x - TWO_PI * libm::round(x / TWO_PI);
    if r >= PI {
        r -= TWO_PI;
    }
    if r < -PI {
        r += TWO_PI;
    }
    r
}

/// Uniform density on [start, end) with -π ≤ start < end ≤ π.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Ramp {
    pub start: f64,
    pub end: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct AngularMass {
    pub uniform: f64,
    pub ramps: Vec<Ramp>,
    pub points: Vec<(f64, f64)>,
}

impl AngularMass {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn total(&self) -> f64 {
        let mut s = crate::numerics::NeumaierSum::new();
        s.add(self.uniform);
        for r in &self.ramps {
            s.add(r.mass);
        }
        for p in &self.points {
            s.add(p.1);
        }
        s.value()
    }

    pub fn is_empty(&self) -> bool {
        self.uniform == 0.0 && self.ramps.is_empty() && self.points.is_empty()
    }

    pub fn add_point(&mut self, x: f64, mass: f64) {
        if mass > 0.0 {
            self.points.push((reduce(x), mass));
        }
    }

    /// Spreads `mass` uniformly over the unwrapped argument range between
    /// `p0` and `p1`.
    pub fn add_range(&mut self, p0: f64, p1: f64, mass: f64) {
        if !(mass > 0.0) {
            return;
        }
        let (lo, hi) = if p0 <= p1 { (p0, p1) } else { (p1, p0) };
        let len = hi - lo;
        if !(len > 0.0) || !(mass / len).is_finite() {
            self.add_point(lo + 0.5 * len, mass);
            return;
        }
        let turns = libm::floor(len / TWO_PI);
        let mut rest = mass;
        let mut rem = len;
        if turns >= 1.0 {
            let wound = mass * (turns * TWO_PI / len);
            self.uniform += wound;
            rest = mass - wound;
            rem = len - turns * TWO_PI;
            if !(rem > 0.0) || !(rest > 0.0) {
                return;
            }
        }
        let start = reduce(lo);
        let end = start + rem;
        if end <= PI {
            self.ramps.push(Ramp { start, end, mass: rest });
        } else {
            let first = rest * ((PI - start) / rem);
            if PI > start {
                self.ramps.push(Ramp { start, end: PI, mass: first });
            }
            let tail = end - TWO_PI;
            if tail > -PI {
                self.ramps.push(Ramp { start: -PI, end: tail, mass: rest - first });
            }
        }
    }

    /// Masses of the dyadic sectors `[sΔ, (s+1)Δ)`, `Δ = 2π/2^n`, with
    /// signed index `s ∈ [−2^{n−1}, 2^{n−1})`.
    pub fn sector_runs(&self, n: u32) -> Result<RunList> {
        if n == 0 {
            let t = self.total();
            let runs = if t > 0.0 { alloc::vec![super::runs::Run { start: 0, count: 1, mass: t }] } else { Vec::new() };
            return Ok(RunList::from_runs(runs));
        }
        let limit = libm::ldexp(1.0, 53);
        if self.uniform > 0.0 && n > 52 {
            return Err(Error::Unsupported(format!("level {n} carries winding mass but has more sectors than a double can index")));
        }
        let scale = libm::ldexp(1.0, n as i32) / TWO_PI;
        let width = TWO_PI / libm::ldexp(1.0, n as i32);
        let half: i64 = if n <= 62 { 1i64 << (n - 1) } else { i64::MAX };
        let sector = |x: f64| -> Result<i64> {
            let v = libm::floor(x * scale);
            if v.abs() >= limit {
                return Err(Error::Unsupported(format!("argument {x} at level {n} exceeds the sector index range")));
            }
            Ok((v as i64).clamp(-half, half - 1))
        };
        let mut singles: Vec<(i64, f64)> = Vec::with_capacity(self.points.len() + 2 * self.ramps.len());
        let mut ranges: Vec<(i64, i64, f64)> = Vec::new();
        for &(x, m) in &self.points {
            singles.push((sector(x)?, m));
        }
        for r in &self.ramps {
            let sa = sector(r.start)?;
            // last sector holding positive length
            let eb = libm::ceil(r.end * scale) - 1.0;
            if eb.abs() >= limit {
                return Err(Error::Unsupported(format!("argument {} at level {n} exceeds the sector index range", r.end)));
            }
            let sb = (eb as i64).clamp(sa, half - 1);
            if sa == sb {
                singles.push((sa, r.mass));
                continue;
            }
            let d = r.mass / (r.end - r.start);
            let first = d * ((sa + 1) as f64 * width - r.start);
            let last = d * (r.end - sb as f64 * width);
            singles.push((sa, first));
            singles.push((sb, last));
            if sb > sa + 1 {
                ranges.push((sa + 1, sb, d * width));
            }
        }
        if self.uniform > 0.0 {
            ranges.push((-half, half, self.uniform / libm::ldexp(1.0, n as i32)));
        }
        Ok(RunList::assemble(singles, ranges))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_keeps_tiny_angles() {
        assert_eq!(reduce(1e-300), 1e-300);
        assert_eq!(reduce(-1e-300), -1e-300);
        assert_eq!(reduce(PI), -PI);
        assert!((reduce(7.0) - (7.0 - TWO_PI)).abs() < 1e-15);
    }

    #[test]
    fn windings_become_uniform() {
        let mut a = AngularMass::new();
        a.add_range(0.0, 5.0 * PI, 1.0);
        assert!((a.uniform - 0.8).abs() < 1e-15);
        assert!((a.total() - 1.0).abs() < 1e-15);
        let runs = a.sector_runs(2).unwrap();
        // quarter sectors: [-π,-π/2) [-π/2,0) [0,π/2) [π/2,π)
        let v: Vec<f64> = (-2..2).map(|s| runs.value_at(s)).collect();
        assert!((v[0] - 0.2).abs() < 1e-14 && (v[2] - 0.3).abs() < 1e-14 && (v[3] - 0.3).abs() < 1e-14, "{v:?}");
        assert!((runs.total() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ramp_split_at_pi() {
        let mut a = AngularMass::new();
        a.add_range(PI - 0.5, PI + 0.5, 1.0);
        assert_eq!(a.ramps.len(), 2);
        let runs = a.sector_runs(1).unwrap();
        assert!((runs.value_at(-1) - 0.5).abs() < 1e-15);
        assert!((runs.value_at(0) - 0.5).abs() < 1e-15);
    }
}
