use alloc::vec::Vec;

use crate::numerics::NeumaierSum;

/// `count` consecutive sectors starting at signed index `start`, each of
/// mass `mass`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Run {
    pub start: i64,
    pub count: i64,
    pub mass: f64,
}

impl Run {
    pub fn end(&self) -> i64 {
        self.start + self.count
    }
}

/// Piecewise-constant sector masses at one dyadic level, as sorted
/// disjoint runs. Sectors not covered have mass 0.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RunList {
    runs: Vec<Run>,
}

impl RunList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_runs(mut runs: Vec<Run>) -> Self {
        runs.retain(|r| r.count > 0);
        runs.sort_by_key(|r| r.start);
        debug_assert!(runs.windows(2).all(|w| w[0].end() <= w[1].start));
        Self { runs }
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Mass of sector `s` (0 if uncovered).
    pub fn value_at(&self, s: i64) -> f64 {
        let i = self.runs.partition_point(|r| r.end() <= s);
        match self.runs.get(i) {
            Some(r) if r.start <= s => r.mass,
            _ => 0.0,
        }
    }

    /// Σ_j m_j.
    pub fn total(&self) -> f64 {
        self.runs.iter().map(|r| r.count as f64 * r.mass).collect::<NeumaierSum>().value()
    }

    /// Σ_j m_j^q over covered sectors.
    pub fn power_sum(&self, q: f64) -> f64 {
        self.runs
            .iter()
            .filter(|r| r.mass > 0.0)
            .map(|r| r.count as f64 * libm::pow(r.mass, q))
            .collect::<NeumaierSum>()
            .value()
    }

    /// Number of sectors with positive mass.
    pub fn support_size(&self) -> i64 {
        self.runs.iter().filter(|r| r.mass > 0.0).map(|r| r.count).sum()
    }

    pub fn max_mass(&self) -> f64 {
        self.runs.iter().map(|r| r.mass).fold(0.0, f64::max)
    }

    /// Builds sector masses from single-sector contributions and
    /// multi-sector ranges `[start, end)` of equal per-sector mass.
    pub(crate) fn assemble(mut singles: Vec<(i64, f64)>, ranges: Vec<(i64, i64, f64)>) -> Self {
        // ranges first: sweep with an open counter so the running value
        // snaps back to exactly 0 between disjoint stretches
        let mut events: Vec<(i64, f64, i32)> = Vec::with_capacity(2 * ranges.len());
        for &(a, b, m) in &ranges {
            if b > a && m != 0.0 {
                events.push((a, m, 1));
                events.push((b, -m, -1));
            }
        }
        events.sort_by_key(|x| x.0);
        let mut base: Vec<Run> = Vec::new();
        let mut acc = NeumaierSum::new();
        let mut open = 0i32;
        let mut i = 0;
        while i < events.len() {
            let pos = events[i].0;
            while i < events.len() && events[i].0 == pos {
                acc.add(events[i].1);
                open += events[i].2;
                i += 1;
            }
            if open == 0 {
                acc.reset();
            }
            if let Some(next) = events.get(i) {
                let v = acc.value().max(0.0);
                if open > 0 && next.0 > pos {
                    base.push(Run { start: pos, count: next.0 - pos, mass: v });
                }
            }
        }
        // singles: aggregate per sector, then overlay
        singles.sort_by_key(|a| a.0);
        let mut agg: Vec<(i64, f64)> = Vec::with_capacity(singles.len());
        for (s, m) in singles {
            match agg.last_mut() {
                Some(last) if last.0 == s => last.1 += m,
                _ => agg.push((s, m)),
            }
        }
        let mut out: Vec<Run> = Vec::with_capacity(base.len() + 2 * agg.len());
        let mut bi = 0;
        let mut cur: Option<Run> = base.first().copied();
        for (s, m) in agg {
            // flush base runs entirely before s
            loop {
                match cur {
                    Some(r) if r.end() <= s => {
                        out.push(r);
                        bi += 1;
                        cur = base.get(bi).copied();
                    }
                    _ => break,
                }
            }
            match cur {
                Some(r) if r.start <= s => {
                    if s > r.start {
                        out.push(Run { start: r.start, count: s - r.start, mass: r.mass });
                    }
                    out.push(Run { start: s, count: 1, mass: r.mass + m });
                    let rest = Run { start: s + 1, count: r.end() - s - 1, mass: r.mass };
                    if rest.count > 0 {
                        cur = Some(rest);
                    } else {
                        bi += 1;
                        cur = base.get(bi).copied();
                    }
                }
                _ => out.push(Run { start: s, count: 1, mass: m }),
            }
        }
        while let Some(r) = cur {
            out.push(r);
            bi += 1;
            cur = base.get(bi).copied();
        }
        out.retain(|r| r.mass > 0.0);
        Self { runs: out }
    }

    /// Pointwise `self + other`, evaluated as `self(s) + other(s)`.
    pub fn add(&self, other: &RunList) -> RunList {
        let mut cuts: Vec<i64> = Vec::with_capacity(2 * (self.runs.len() + other.runs.len()));
        for r in self.runs.iter().chain(other.runs.iter()) {
            cuts.push(r.start);
            cuts.push(r.end());
        }
        cuts.sort_unstable();
        cuts.dedup();
        let mut out: Vec<Run> = Vec::new();
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (x, y) = (self.value_at(a), other.value_at(a));
            if x == 0.0 && y == 0.0 {
                continue;
            }
            out.push(Run { start: a, count: b - a, mass: x + y });
        }
        RunList { runs: out }
    }

    /// Parent-level masses: sector `j` gets `child(2j) + child(2j+1)`.
    pub fn coarsen(&self) -> RunList {
        let mut cuts: Vec<i64> = Vec::with_capacity(4 * self.runs.len());
        for r in &self.runs {
            // parents whose left child 2j lies in [start, end)
            cuts.push(div_ceil2(r.start));
            cuts.push(div_ceil2(r.end()));
            // parents whose right child 2j+1 lies in [start, end)
            cuts.push(div_ceil2(r.start - 1));
            cuts.push(div_ceil2(r.end() - 1));
        }
        cuts.sort_unstable();
        cuts.dedup();
        let mut out: Vec<Run> = Vec::new();
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (l, r) = (self.value_at(2 * a), self.value_at(2 * a + 1));
            if l == 0.0 && r == 0.0 {
                continue;
            }
            out.push(Run { start: a, count: b - a, mass: l + r });
        }
        RunList { runs: out }
    }

    /// Iterates over every covered sector (expanding runs).
    pub fn sectors(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.runs.iter().flat_map(|r| (r.start..r.end()).map(move |s| (s, r.mass)))
    }
}

fn div_ceil2(x: i64) -> i64 {
    -((-x) >> 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn assemble_overlays_singles() {
        let rl = RunList::assemble(vec![(3, 1.0), (3, 0.5), (10, 2.0)], vec![(0, 5, 0.25), (2, 4, 0.25)]);
        let v: Vec<(i64, f64)> = rl.sectors().collect();
        assert_eq!(v, vec![(0, 0.25), (1, 0.25), (2, 0.5), (3, 2.0), (4, 0.25), (10, 2.0)]);
    }

    #[test]
    fn coarsen_pairs_children() {
        let rl = RunList::from_runs(vec![Run { start: -3, count: 6, mass: 1.0 }]);
        let c = rl.coarsen();
        let v: Vec<(i64, f64)> = c.sectors().collect();
        assert_eq!(v, vec![(-2, 1.0), (-1, 2.0), (0, 2.0), (1, 1.0)]);
    }

    #[test]
    fn add_is_pointwise() {
        let a = RunList::from_runs(vec![Run { start: 0, count: 4, mass: 1.0 }]);
        let b = RunList::from_runs(vec![Run { start: 2, count: 4, mass: 0.5 }]);
        let v: Vec<(i64, f64)> = a.add(&b).sectors().collect();
        assert_eq!(v, vec![(0, 1.0), (1, 1.0), (2, 1.5), (3, 1.5), (4, 0.5), (5, 0.5)]);
    }

    #[test]
    fn power_sum_counts_runs() {
        let a = RunList::from_runs(vec![Run { start: 0, count: 4, mass: 0.25 }]);
        assert!((a.power_sum(0.5) - 2.0).abs() < 1e-15);
        assert!((a.total() - 1.0).abs() < 1e-15);
    }
}
