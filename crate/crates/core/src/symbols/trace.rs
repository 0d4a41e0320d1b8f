use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::spec::{Symbol, SymbolSpec};
use super::BoundaryPoint;
use crate::numerics::Grid1D;
use crate::{Error, Result};

/// Sampling parameters for [`sample_trace`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SamplingConfig {
    /// Uniform nodes on the circle; a power of two.
    pub base_count: usize,
    /// Geometric refinement reaches |t| = 2^-refinement_depth.
    pub refinement_depth: u32,
    /// Geometric nodes per halving of |t|.
    pub per_octave: u32,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self { base_count: 4096, refinement_depth: 40, per_octave: 256 }
    }
}

/// Largest supported refinement depth; 2^-1000 is still a normal double.
pub const MAX_REFINEMENT_DEPTH: u32 = 1000;

impl SamplingConfig {
    pub fn new(base_count: usize, refinement_depth: u32) -> Self {
        Self { base_count, refinement_depth, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.base_count < 4 || !self.base_count.is_power_of_two() {
            return Err(Error::Parameter(format!("base_count {} must be a power of two >= 4", self.base_count)));
        }
        if self.refinement_depth > MAX_REFINEMENT_DEPTH {
            return Err(Error::Parameter(format!("refinement_depth {} exceeds {MAX_REFINEMENT_DEPTH}", self.refinement_depth)));
        }
        if self.per_octave == 0 {
            return Err(Error::Parameter("per_octave must be positive".into()));
        }
        Ok(())
    }

    /// Sorted node set: an offset uniform grid (never hitting 0 or ±π) with
    /// the cells next to t = 0 replaced by a geometric ladder on both sides.
    pub fn nodes(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let b = self.base_count;
        let du = 2.0 * PI / b as f64;
        let mut positive = Vec::new();
        let cutoff = if self.refinement_depth == 0 {
            0.0
        } else {
            let delta = core::f64::consts::LN_2 / self.per_octave as f64;
            (du / delta).min(0.5 * PI)
        };
        if self.refinement_depth > 0 {
            let floor = libm::ldexp(1.0, -(self.refinement_depth as i32));
            if floor < cutoff {
                let mut k = 1u64;
                loop {
                    let t = cutoff * libm::exp2(-(k as f64) / self.per_octave as f64);
                    if t <= floor {
                        break;
                    }
                    positive.push(t);
                    k += 1;
                }
                positive.push(floor);
            }
        }
        for j in b / 2..b {
            let t = -PI + du * (j as f64 + 0.5);
            if t >= cutoff {
                positive.push(t);
            }
        }
        positive.sort_by(f64::total_cmp);
        let mut nodes: Vec<f64> = positive.iter().rev().map(|t| -t).collect();
        nodes.extend_from_slice(&positive);
        Ok(nodes)
    }
}

/// Sampled boundary values with quadrature weights.
///
/// Values are kept as log-modulus and continuous phase; see
/// [`BoundaryPoint`].
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryTrace {
    grid: Grid1D,
    log_modulus: Vec<f64>,
    phase: Vec<f64>,
    winds_at_zero: bool,
}

impl BoundaryTrace {
    pub fn from_parts(grid: Grid1D, points: Vec<BoundaryPoint>, winds_at_zero: bool) -> Result<Self> {
        if grid.len() != points.len() {
            return Err(Error::Validation("one boundary point per node required".into()));
        }
        if points.iter().any(|p| p.log_modulus > 0.0 || p.log_modulus.is_nan() || !p.phase.is_finite()) {
            return Err(Error::Validation("boundary values must satisfy |v| <= 1 with finite phase".into()));
        }
        let (log_modulus, phase) = points.iter().map(|p| (p.log_modulus, p.phase)).unzip();
        Ok(Self { grid, log_modulus, phase, winds_at_zero })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        self.grid.nodes()
    }

    pub fn weights(&self) -> &[f64] {
        self.grid.weights()
    }

    pub fn log_modulus(&self) -> &[f64] {
        &self.log_modulus
    }

    pub fn phase(&self) -> &[f64] {
        &self.phase
    }

    /// Whether the argument is discontinuous (infinitely winding) at t = 0.
    pub fn winds_at_zero(&self) -> bool {
        self.winds_at_zero
    }

    pub fn point(&self, i: usize) -> BoundaryPoint {
        BoundaryPoint { log_modulus: self.log_modulus[i], phase: self.phase[i] }
    }

    pub fn value(&self, i: usize) -> Complex64 {
        self.point(i).value()
    }

    pub fn values(&self) -> Vec<Complex64> {
        (0..self.len()).map(|i| self.value(i)).collect()
    }

    /// Smallest `1 - |φ*|` over the nodes.
    pub fn modulus_floor(&self) -> f64 {
        self.log_modulus.iter().map(|&l| -libm::expm1(l)).fold(f64::INFINITY, f64::min)
    }
}

/// Samples the boundary trace of a constructed symbol.
pub fn sample_symbol(symbol: &Symbol, cfg: &SamplingConfig) -> Result<BoundaryTrace> {
    let nodes = cfg.nodes()?;
    let n = nodes.len();
    let mut points = Vec::with_capacity(n);
    if symbol.conjugate_symmetric() {
        // nodes are symmetric: evaluate t > 0 and mirror
        let half: Vec<BoundaryPoint> = nodes[n / 2..].iter().map(|&t| symbol.boundary(t)).collect::<Result<_>>()?;
        points.extend(half.iter().rev().map(|p| BoundaryPoint { log_modulus: p.log_modulus, phase: -p.phase }));
        points.extend(half);
    } else {
        for &t in &nodes {
            points.push(symbol.boundary(t)?);
        }
    }
    let grid = Grid1D::with_cell_weights(nodes)?;
    BoundaryTrace::from_parts(grid, points, symbol.winds_at_zero())
}

/// Builds the symbol from `spec` and samples it with the default ladder
/// density.
pub fn sample_trace(spec: &SymbolSpec, base_count: usize, refinement_depth: u32) -> Result<BoundaryTrace> {
    let symbol = Symbol::from_spec(spec)?;
    sample_symbol(&symbol, &SamplingConfig::new(base_count, refinement_depth))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_symmetric_sorted_and_weighted() {
        let cfg = SamplingConfig { base_count: 256, refinement_depth: 30, per_octave: 16 };
        let nodes = cfg.nodes().unwrap();
        let n = nodes.len();
        for i in 0..n {
            assert_eq!(nodes[i], -nodes[n - 1 - i]);
        }
        let g = Grid1D::with_cell_weights(nodes.clone()).unwrap();
        let s: f64 = g.weights().iter().sum();
        assert!((s - 2.0 * PI).abs() < 1e-12);
        assert_eq!(nodes[n / 2], libm::ldexp(1.0, -30));
    }

    #[test]
    fn identity_and_constant() {
        let t = sample_trace(&SymbolSpec::identity(), 64, 10).unwrap();
        assert!(t.values().iter().all(|v| (v.norm() - 1.0).abs() < 1e-15));
        let t = sample_trace(&SymbolSpec::constant(0.3), 64, 10).unwrap();
        assert!(t.values().iter().all(|v| (*v - 0.3).norm() < 1e-15));
    }

    #[test]
    fn theta_two_floor() {
        let t = sample_trace(&SymbolSpec::log_power(2.0), 1024, 40).unwrap();
        assert!(t.modulus_floor() < libm::ldexp(1.0, -20));
    }

    #[test]
    fn rejects_bad_base_count() {
        assert!(sample_trace(&SymbolSpec::identity(), 100, 10).is_err());
    }
}
