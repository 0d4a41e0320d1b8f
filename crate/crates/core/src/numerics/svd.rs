use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{Error, Result};

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Validation("data length does not match shape".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }
}

#[inline]
fn dot_conj(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        re += a.re * b.re + a.im * b.im;
        im += a.re * b.im - a.im * b.re;
    }
    Complex64::new(re, im)
}

#[inline]
fn norm2(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.re * v.re + v.im * v.im).sum()
}

/// Singular values, sorted nonincreasing, by one-sided (Hestenes) Jacobi.
///
/// The result has `min(rows, cols)` entries.
pub fn svd_values(m: &DenseMatrix) -> Result<Vec<f64>> {
    if m.data.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Validation("matrix has a non-finite entry".into()));
    }
    // orthogonalize the columns of the taller orientation
    let (len, count) = if m.rows >= m.cols { (m.rows, m.cols) } else { (m.cols, m.rows) };
    let mut cols: Vec<Vec<Complex64>> = (0..count)
        .map(|c| {
            (0..len)
                .map(|r| if m.rows >= m.cols { m.get(r, c) } else { m.get(c, r).conj() })
                .collect()
        })
        .collect();
    if count == 0 {
        return Ok(Vec::new());
    }
    let tol = 1e-15;
    let mut norms: Vec<f64> = cols.iter().map(|c| norm2(c)).collect();
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..count - 1 {
            for q in p + 1..count {
                let (alpha, beta) = (norms[p], norms[q]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let (left, right) = cols.split_at_mut(q);
                let (x, y) = (&mut left[p], &mut right[0]);
                let g = dot_conj(x, y);
                let ga = g.norm();
                if ga == 0.0 || ga <= tol * libm::sqrt(alpha) * libm::sqrt(beta) {
                    continue;
                }
                rotated = true;
                let phase = g / ga;
                let zeta = (beta - alpha) / (2.0 * ga);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                let ph = phase.conj();
                let (mut na, mut nb) = (0.0, 0.0);
                for (a, b) in x.iter_mut().zip(y.iter_mut()) {
                    let bq = *b * ph;
                    let ap = *a;
                    *a = ap * c - bq * s;
                    *b = ap * s + bq * c;
                    na += a.re * a.re + a.im * a.im;
                    nb += b.re * b.re + b.im * b.im;
                }
                norms[p] = na;
                norms[q] = nb;
            }
        }
        norms = cols.iter().map(|c| norm2(c)).collect();
        if !rotated {
            break;
        }
    }
    let mut vals: Vec<f64> = norms.iter().map(|&n| libm::sqrt(n)).collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    Ok(vals)
}
