use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Error, Result};

/// Angular nodes in (−π, π] with quadrature weights summing to 2π.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Grid1D {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Grid1D {
    /// Validates ordering, positivity and the exclusion of t = 0.
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.len() != weights.len() || nodes.is_empty() {
            return Err(Error::Validation("nodes and weights must be nonempty and of equal length".into()));
        }
        for w in nodes.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::Validation("nodes must be strictly increasing".into()));
            }
        }
        if !(nodes[0] > -PI && nodes[nodes.len() - 1] <= PI) {
            return Err(Error::Validation("nodes must lie in (-pi, pi]".into()));
        }
        if nodes.contains(&0.0) {
            return Err(Error::Validation("t = 0 must not be a node".into()));
        }
        if weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::Validation("weights must be positive".into()));
        }
        Ok(Self { nodes, weights })
    }

    /// Cell-width weights for sorted nodes: each node owns the arc between
    /// the midpoints to its neighbours on the circle.
    pub fn with_cell_weights(nodes: Vec<f64>) -> Result<Self> {
        let n = nodes.len();
        if n < 2 {
            return Err(Error::Validation("need at least two nodes".into()));
        }
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let prev = if i == 0 { nodes[n - 1] - 2.0 * PI } else { nodes[i - 1] };
            let next = if i + 1 == n { nodes[0] + 2.0 * PI } else { nodes[i + 1] };
            weights.push(0.5 * (next - prev));
        }
        Self::new(nodes, weights)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_weights_sum_to_two_pi() {
        let nodes: Vec<f64> = (0..10).map(|j| -PI + 2.0 * PI * (j as f64 + 0.5) / 10.0).collect();
        let g = Grid1D::with_cell_weights(nodes).unwrap();
        let s: f64 = g.weights().iter().sum();
        assert!((s - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn rejects_zero_node() {
        assert!(Grid1D::new(alloc::vec![-1.0, 0.0, 1.0], alloc::vec![1.0; 3]).is_err());
    }
}
