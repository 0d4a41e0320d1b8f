use alloc::format;
use alloc::vec::Vec;

use super::angular::AngularMass;
use super::levels::Level;
use super::runs::RunList;
use super::segments::{pieces, MassModel};
use super::MIN_EFFECTIVE_SAMPLES;
use crate::numerics::NeumaierSum;
use crate::symbols::BoundaryTrace;
use crate::{Error, Result};

/// Estimated pullback masses of the Luecking boxes `R_{n,j}` and dyadic
/// windows `W_{n,j}`, `0 ≤ n ≤ depth`.
///
/// Level 0 is the core disc `|w| < 1/2` (one sector); `W_{0,0}` is the whole
/// open disc. Sector `j` of level n is stored under the signed index
/// `s = j` for `j < 2^{n-1}` and `s = j - 2^n` otherwise, so children of `s`
/// are `2s` and `2s + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PullbackHistogram {
    depth: u32,
    model: MassModel,
    boxes: Vec<RunList>,
    windows: Vec<RunList>,
    deep_mass: f64,
    circle_mass: f64,
    total: f64,
    effective_samples: Vec<u64>,
}

/// Signed sector index for the unsigned index `j ∈ [0, 2^n)`.
pub(crate) fn signed_sector(n: u32, j: u64) -> i64 {
    if n == 0 {
        return 0;
    }
    if n >= 64 {
        return j as i64;
    }
    let size = 1u128 << n;
    let j = j as u128 % size;
    if j >= size / 2 {
        (j as i128 - size as i128) as i64
    } else {
        j as i64
    }
}

/// Inverse of [`signed_sector`] for levels below 64.
pub fn unsigned_sector(n: u32, s: i64) -> u64 {
    if n == 0 {
        return 0;
    }
    if n >= 64 {
        return s as u64;
    }
    (s as i128).rem_euclid(1i128 << n) as u64
}

impl PullbackHistogram {
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn model(&self) -> MassModel {
        self.model
    }

    /// Box masses of level n as runs over signed sectors.
    pub fn box_runs(&self, n: u32) -> &RunList {
        &self.boxes[n as usize]
    }

    pub fn window_runs(&self, n: u32) -> &RunList {
        &self.windows[n as usize]
    }

    /// `m̂(R_{n,j})`.
    pub fn box_mass(&self, n: u32, j: u64) -> f64 {
        self.boxes[n as usize].value_at(signed_sector(n, j))
    }

    /// `m̂(W_{n,j})`.
    pub fn window_mass(&self, n: u32, j: u64) -> f64 {
        self.windows[n as usize].value_at(signed_sector(n, j))
    }

    /// Mass in `|w| < 1/2`.
    pub fn core_mass(&self) -> f64 {
        self.boxes[0].total()
    }

    /// Mass inside the open disc deeper than `depth`.
    pub fn deep_mass(&self) -> f64 {
        self.deep_mass
    }

    /// Mass on the unit circle.
    pub fn circle_mass(&self) -> f64 {
        self.circle_mass
    }

    /// Everything not binned at levels `0..=depth`.
    pub fn overflow_mass(&self) -> f64 {
        self.deep_mass + self.circle_mass
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    /// Contributing trace pieces per level.
    pub fn effective_samples(&self, n: u32) -> u64 {
        self.effective_samples[n as usize]
    }

    pub fn trusted(&self, n: u32) -> bool {
        self.effective_samples[n as usize] >= MIN_EFFECTIVE_SAMPLES
    }

    /// `core + boxes + overflow - total`.
    pub fn conservation_defect(&self) -> f64 {
        let mut s = NeumaierSum::new();
        for b in &self.boxes {
            s.add(b.total());
        }
        s.add(self.deep_mass);
        s.add(self.circle_mass);
        s.add(-self.total);
        s.value()
    }

    /// Checks `W_{n,j} = R_{n,j} + (W_{n+1,2j} + W_{n+1,2j+1})` bit for bit at
    /// every sector of every level below `depth`; returns the first failure.
    pub fn decomposition_violation(&self) -> Option<(u32, i64)> {
        for n in 0..self.depth {
            let w = &self.windows[n as usize];
            let r = &self.boxes[n as usize];
            let c = &self.windows[n as usize + 1];
            let check = |s: i64| -> bool {
                let children = if n == 0 { c.value_at(0) + c.value_at(-1) } else { c.value_at(2 * s) + c.value_at(2 * s + 1) };
                w.value_at(s) == r.value_at(s) + children
            };
            // every sector where any of the three lists is nonzero
            let mut candidates: Vec<i64> = Vec::new();
            for run in w.runs().iter().chain(r.runs()) {
                candidates.push(run.start);
                candidates.push(run.end() - 1);
            }
            for run in c.runs() {
                candidates.push(run.start >> 1);
                candidates.push((run.end() - 1) >> 1);
            }
            if n == 0 {
                candidates.retain(|&s| s == 0);
                candidates.push(0);
            }
            for s in candidates {
                if !check(s) {
                    return Some((n, s));
                }
            }
            // full scan where affordable
            if w.support_size() <= 1 << 16 {
                for (s, _) in w.sectors() {
                    if !check(s) {
                        return Some((n, s));
                    }
                }
            }
        }
        None
    }
}

/// Bins the pullback measure with the default segment model.
pub fn pullback_histogram(trace: &BoundaryTrace, depth: u32) -> Result<PullbackHistogram> {
    pullback_histogram_with(trace, depth, MassModel::Segment)
}

pub fn pullback_histogram_with(trace: &BoundaryTrace, depth: u32, model: MassModel) -> Result<PullbackHistogram> {
    if depth == 0 || depth > super::LEVEL_CAP {
        return Err(Error::Parameter(format!("histogram depth {depth} outside 1..={}", super::LEVEL_CAP)));
    }
    let d = depth as usize;
    let mut acc: Vec<AngularMass> = (0..=d).map(|_| AngularMass::new()).collect();
    let mut deep = AngularMass::new();
    let mut eff = alloc::vec![0u64; d + 1];
    let mut circle = NeumaierSum::new();
    let mut total = NeumaierSum::new();
    for piece in pieces(trace, model) {
        total.add(piece.mass);
        piece.for_each_level(|lvl, s0, s1| {
            let m = piece.mass * (s1 - s0);
            let (a, b) = (piece.phase_at(s0), piece.phase_at(s1));
            match lvl {
                Level::Band(n) if n <= depth => {
                    acc[n as usize].add_range(a, b, m);
                    eff[n as usize] += 1;
                }
                Level::Band(_) | Level::Deep => deep.add_range(a, b, m),
                Level::Circle => circle.add(m),
            }
        });
    }
    let mut boxes = Vec::with_capacity(d + 1);
    for (n, a) in acc.iter().enumerate() {
        boxes.push(a.sector_runs(n as u32)?);
    }
    let deep_runs = deep.sector_runs(depth)?;
    let deep_mass = deep_runs.total();
    let mut windows: Vec<RunList> = alloc::vec![RunList::new(); d + 1];
    windows[d] = boxes[d].add(&deep_runs);
    for n in (1..d).rev() {
        windows[n] = boxes[n].add(&windows[n + 1].coarsen());
    }
    let w1 = &windows[1];
    let top = boxes[0].value_at(0) + (w1.value_at(0) + w1.value_at(-1));
    windows[0] = RunList::from_runs(if top > 0.0 { alloc::vec![super::Run { start: 0, count: 1, mass: top }] } else { Vec::new() });
    Ok(PullbackHistogram {
        depth,
        model,
        boxes,
        windows,
        deep_mass,
        circle_mass: circle.value(),
        total: total.value(),
        effective_samples: eff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{sample_trace, SymbolSpec};

    #[test]
    fn sector_index_roundtrip() {
        for n in 1..10u32 {
            for j in 0..(1u64 << n) {
                assert_eq!(unsigned_sector(n, signed_sector(n, j)), j);
            }
        }
    }

    #[test]
    fn rotation_three_quarters() {
        let tr = sample_trace(&SymbolSpec::rotation(0.75), 256, 0).unwrap();
        let h = pullback_histogram(&tr, 8).unwrap();
        for j in 0..4 {
            assert!((h.box_mass(2, j) - 0.25).abs() < 1e-12, "{}", h.box_mass(2, j));
        }
        for n in [1u32, 3, 4, 5] {
            assert_eq!(h.box_runs(n).total(), 0.0);
        }
        assert!(h.conservation_defect().abs() < 1e-12);
        assert_eq!(h.decomposition_violation(), None);
    }

    #[test]
    fn zero_constant_and_identity() {
        let tr = sample_trace(&SymbolSpec::constant(0.0), 64, 0).unwrap();
        let h = pullback_histogram(&tr, 6).unwrap();
        assert!((h.core_mass() - 1.0).abs() < 1e-12);
        let tr = sample_trace(&SymbolSpec::identity(), 64, 0).unwrap();
        let h = pullback_histogram(&tr, 6).unwrap();
        assert!((h.overflow_mass() - 1.0).abs() < 1e-12);
        assert_eq!(h.core_mass(), 0.0);
    }

    #[test]
    fn point_model_agrees_on_constant_modulus() {
        let tr = sample_trace(&SymbolSpec::rotation(0.75), 256, 0).unwrap();
        let h = pullback_histogram_with(&tr, 6, MassModel::Point).unwrap();
        for j in 0..4 {
            assert!((h.box_mass(2, j) - 0.25).abs() < 1e-12);
        }
    }
}
