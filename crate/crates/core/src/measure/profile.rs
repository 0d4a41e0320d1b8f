use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::angular::{reduce, AngularMass};
use super::levels::level_threshold;
use super::segments::{pieces, MassModel};
use super::MIN_EFFECTIVE_SAMPLES;
use crate::numerics::{loglog_fit, FitResult, NeumaierSum};
use crate::symbols::BoundaryTrace;
use crate::{Error, Result};

/// Deepest profile level: centers are indexed by `i64` and arguments are
/// doubles, so finer windows are not resolvable.
pub const MAX_PROFILE_LEVEL: u32 = 52;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProfileOptions {
    pub model: MassModel,
    /// Upper bound on tested centers over all levels.
    pub max_centers: u64,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self { model: MassModel::Segment, max_centers: 1 << 26 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProfileLevel {
    pub n: u32,
    pub h: f64,
    /// Monotone envelope: max of the raw values at this and deeper levels.
    pub rho_hat: f64,
    /// Largest window mass found at this level.
    pub raw: f64,
    /// Center argument of the heaviest window.
    pub argmax: f64,
    pub centers_tested: u64,
    /// Trace pieces reaching `|w| ≥ 1 − h`.
    pub effective_samples: u64,
}

impl ProfileLevel {
    pub fn trusted(&self) -> bool {
        self.effective_samples >= MIN_EFFECTIVE_SAMPLES || self.raw == 0.0
    }
}

/// Estimated Carleson function at dyadic `h = 2^-n`, `1 ≤ n ≤ n_max`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CarlesonProfile {
    pub levels: Vec<ProfileLevel>,
    /// Centers per level in the full grid, `4·2^n` at the deepest level.
    pub sup_resolution: u64,
}

impl CarlesonProfile {
    pub fn level(&self, n: u32) -> Option<&ProfileLevel> {
        self.levels.iter().find(|l| l.n == n)
    }

    pub fn rho(&self, n: u32) -> Option<f64> {
        self.level(n).map(|l| l.rho_hat)
    }

    pub fn n_max(&self) -> u32 {
        self.levels.last().map_or(0, |l| l.n)
    }
}

pub fn carleson_profile(trace: &BoundaryTrace, n_max: u32) -> Result<CarlesonProfile> {
    carleson_profile_with(trace, n_max, &ProfileOptions::default())
}

pub fn carleson_profile_with(trace: &BoundaryTrace, n_max: u32, opts: &ProfileOptions) -> Result<CarlesonProfile> {
    if n_max == 0 || n_max > MAX_PROFILE_LEVEL {
        return Err(Error::Parameter(format!("profile depth {n_max} outside 1..={MAX_PROFILE_LEVEL}")));
    }
    let ps = pieces(trace, opts.model);
    let mut budget = opts.max_centers;
    let mut levels = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let thr = level_threshold(n);
        let mut am = AngularMass::new();
        let mut eff = 0u64;
        for p in &ps {
            if let Some((s0, s1)) = p.superlevel(thr) {
                let m = p.mass * (s1 - s0);
                if m > 0.0 {
                    am.add_range(p.phase_at(s0), p.phase_at(s1), m);
                    eff += 1;
                }
            }
        }
        let h = libm::ldexp(1.0, -(n as i32));
        let (raw, argmax, tested) = sup_window(&am, n, h, &mut budget)?;
        levels.push(ProfileLevel { n, h, rho_hat: raw, raw, argmax, centers_tested: tested, effective_samples: eff });
    }
    for i in (0..levels.len().saturating_sub(1)).rev() {
        levels[i].rho_hat = levels[i].rho_hat.max(levels[i + 1].rho_hat);
    }
    for l in &mut levels {
        l.rho_hat = l.rho_hat.min(1.0);
    }
    Ok(CarlesonProfile { levels, sup_resolution: 4u64 << n_max })
}

/// Cumulative mass of the non-uniform part on [−π, x].
struct Cumulative {
    // ramp events: position, mass strictly left of it, density right of it
    ev_x: Vec<f64>,
    ev_c: Vec<f64>,
    ev_d: Vec<f64>,
    pt_x: Vec<f64>,
    pt_c: Vec<f64>,
}

impl Cumulative {
    fn new(am: &AngularMass) -> Self {
        let mut ev: Vec<(f64, f64)> = Vec::with_capacity(2 * am.ramps.len());
        for r in &am.ramps {
            let d = r.mass / (r.end - r.start);
            ev.push((r.start, d));
            ev.push((r.end, -d));
        }
        ev.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut ev_x = Vec::with_capacity(ev.len());
        let mut ev_c = Vec::with_capacity(ev.len());
        let mut ev_d = Vec::with_capacity(ev.len());
        let mut c = NeumaierSum::new();
        let mut d = NeumaierSum::new();
        let mut last = -PI;
        for (x, dd) in ev {
            c.add(d.value().max(0.0) * (x - last));
            d.add(dd);
            if ev_x.last() == Some(&x) {
                *ev_d.last_mut().unwrap() = d.value().max(0.0);
            } else {
                ev_x.push(x);
                ev_c.push(c.value());
                ev_d.push(d.value().max(0.0));
            }
            if d.value().abs() < 1e-300 {
                d.reset();
            }
            last = x;
        }
        let mut pts = am.points.clone();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut pt_x = Vec::with_capacity(pts.len());
        let mut pt_c = Vec::with_capacity(pts.len());
        let mut s = NeumaierSum::new();
        for (x, m) in pts {
            s.add(m);
            pt_x.push(x);
            pt_c.push(s.value());
        }
        Self { ev_x, ev_c, ev_d, pt_x, pt_c }
    }

    fn ramps_upto(&self, x: f64) -> f64 {
        let i = self.ev_x.partition_point(|&e| e <= x);
        if i == 0 {
            return 0.0;
        }
        self.ev_c[i - 1] + self.ev_d[i - 1] * (x - self.ev_x[i - 1])
    }

    fn points_upto(&self, x: f64, inclusive: bool) -> f64 {
        let i = if inclusive { self.pt_x.partition_point(|&p| p <= x) } else { self.pt_x.partition_point(|&p| p < x) };
        if i == 0 {
            0.0
        } else {
            self.pt_c[i - 1]
        }
    }

    /// Mass of the closed arc [a, b] with −π ≤ a ≤ b ≤ π.
    fn arc(&self, a: f64, b: f64) -> f64 {
        (self.ramps_upto(b) - self.ramps_upto(a)).max(0.0) + (self.points_upto(b, true) - self.points_upto(a, false)).max(0.0)
    }

    /// Mass of the closed arc of half-width h around c (h < π).
    fn window(&self, c: f64, h: f64) -> f64 {
        let (a, b) = (c - h, c + h);
        if a < -PI {
            self.arc(-PI, b) + self.arc(a + 2.0 * PI, PI)
        } else if b > PI {
            self.arc(a, PI) + self.arc(-PI, b - 2.0 * PI)
        } else {
            self.arc(a, b)
        }
    }
}

/// Supports of the non-uniform parts as [lo, hi] intervals in [−π, π].
fn supports(am: &AngularMass) -> Vec<(f64, f64)> {
    let mut s: Vec<(f64, f64)> = am.ramps.iter().map(|r| (r.start, r.end)).chain(am.points.iter().map(|p| (p.0, p.0))).collect();
    s.sort_by(|a, b| a.0.total_cmp(&b.0));
    s
}

/// Max window mass over the centers `kΔc`, `Δc = (π/2)·2^-n`.
fn sup_window(am: &AngularMass, n: u32, h: f64, budget: &mut u64) -> Result<(f64, f64, u64)> {
    if am.is_empty() {
        return Ok((0.0, 0.0, 0));
    }
    let count: i64 = 4i64 << n;
    let half = count / 2;
    let dc = 2.0 * PI / count as f64;
    let uniform_part = am.uniform * h / PI;
    // center index ranges whose window can meet the support
    let mut ranges: Vec<(i64, i64)> = Vec::new();
    for (lo, hi) in supports(am) {
        let k0 = libm::floor((lo - h) / dc) as i64;
        let k1 = libm::ceil((hi + h) / dc) as i64;
        ranges.push((k0, k1));
    }
    let mut all = am.uniform > 0.0 && ranges.is_empty();
    ranges.sort_unstable();
    let mut merged: Vec<(i64, i64)> = Vec::new();
    for (a, b) in ranges {
        match merged.last_mut() {
            Some(last) if a <= last.1 + 1 => last.1 = last.1.max(b),
            _ => merged.push((a, b)),
        }
    }
    let span: i64 = merged.iter().map(|(a, b)| b - a + 1).sum();
    if span >= count {
        all = true;
    }
    let tested = if all { count as u64 } else { span as u64 };
    if tested > *budget {
        return Err(Error::Resolution {
            msg: format!("profile level {n} needs {tested} centers, over the remaining budget {}", *budget),
            suggested: n.saturating_sub(1) as usize,
        });
    }
    *budget -= tested;
    let cum = Cumulative::new(am);
    let mut best = (uniform_part, 0.0);
    let mut eval = |k: i64| {
        let kk = (k + half).rem_euclid(count) - half;
        let c = kk as f64 * dc;
        let m = uniform_part + cum.window(c, h);
        if m > best.0 {
            best = (m, c);
        }
    };
    if all {
        for k in -half..half {
            eval(k);
        }
    } else {
        for (a, b) in merged {
            for k in a..=b {
                eval(k);
            }
        }
    }
    Ok((best.0, reduce(best.1), tested))
}

/// Empirical doubling constant: max over k < n of
/// `2^{n−k} ρ̂(2^-n) / ρ̂(2^-k)` over levels with positive ρ̂.
pub fn doubling_constant(profile: &CarlesonProfile) -> f64 {
    let mut c: f64 = 1.0;
    let ls = &profile.levels;
    for (i, a) in ls.iter().enumerate() {
        for b in &ls[i + 1..] {
            if a.rho_hat > 0.0 && b.rho_hat > 0.0 {
                let r = libm::ldexp(b.rho_hat, (b.n - a.n) as i32) / a.rho_hat;
                c = c.max(r);
            }
        }
    }
    c
}

/// Power-law fit `ρ̂(h) ≈ C h^α` over `n_lo ≤ n ≤ n_hi`.
pub fn fit_carleson_exponent(profile: &CarlesonProfile, n_lo: u32, n_hi: u32) -> Result<FitResult> {
    if n_hi < n_lo + 3 {
        return Err(Error::InsufficientData(format!("fit range [{n_lo}, {n_hi}] spans fewer than 4 levels")));
    }
    let mut pairs = Vec::new();
    for n in n_lo..=n_hi {
        let l = profile.level(n).ok_or_else(|| Error::InsufficientData(format!("profile has no level {n}")))?;
        if !(l.rho_hat > 0.0) {
            return Err(Error::DegenerateProfile(format!("rho_hat vanishes at level {n}")));
        }
        pairs.push((l.h, l.rho_hat));
    }
    loglog_fit(&pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{sample_trace, SymbolSpec};

    #[test]
    fn identity_is_h_over_pi() {
        let tr = sample_trace(&SymbolSpec::identity(), 4096, 0).unwrap();
        let p = carleson_profile(&tr, 10).unwrap();
        for l in &p.levels {
            let cell = 2.0 * PI / 4096.0;
            assert!((l.rho_hat - l.h / PI).abs() <= cell / (2.0 * PI) + 1e-12, "{l:?}");
        }
        let f = fit_carleson_exponent(&p, 3, 10).unwrap();
        assert!((f.exponent - 1.0).abs() < 0.05);
    }

    #[test]
    fn constant_has_no_mass_in_windows() {
        let tr = sample_trace(&SymbolSpec::constant(0.3), 64, 0).unwrap();
        let p = carleson_profile(&tr, 8).unwrap();
        assert!(p.levels.iter().all(|l| l.rho_hat == 0.0));
        assert!(matches!(fit_carleson_exponent(&p, 2, 6), Err(Error::DegenerateProfile(_))));
    }

    #[test]
    fn monotone_and_bounded() {
        let tr = sample_trace(&SymbolSpec::general(2.0, true), 4096, 40).unwrap();
        let p = carleson_profile(&tr, 16).unwrap();
        for w in p.levels.windows(2) {
            assert!(w[0].rho_hat >= w[1].rho_hat);
        }
        assert!(p.levels.iter().all(|l| l.rho_hat <= 1.0));
        assert!(doubling_constant(&p) >= 1.0);
    }

    #[test]
    fn closed_window_catches_edge_atom() {
        let mut am = AngularMass::new();
        am.add_point(0.5, 1.0);
        let cum = Cumulative::new(&am);
        assert_eq!(cum.window(0.0, 0.5), 1.0);
        assert_eq!(cum.window(1.0, 0.5), 1.0);
        assert_eq!(cum.window(1.0, 0.49), 0.0);
    }
}
