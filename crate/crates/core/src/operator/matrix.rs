use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::numerics::{fft_coefficients, fft_coefficients_offset, DenseMatrix};
use crate::symbols::{sample_symbol, BoundaryTrace, SamplingConfig, Symbol};
use crate::{Complex64, Error, Result};

/// How the entries were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum MatrixRoute {
    /// FFT of pointwise powers of boundary samples.
    Boundary,
    /// Truncated Cauchy powers of the Taylor coefficients of φ.
    Taylor,
}

/// `entries[n][m]` = n-th Taylor coefficient of `φ^m`, `0 ≤ n, m < N`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: DenseMatrix,
    fft_size: usize,
    route: MatrixRoute,
}

impl OperatorMatrix {
    pub fn order(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &DenseMatrix {
        &self.entries
    }

    pub fn entry(&self, n: usize, m: usize) -> Complex64 {
        self.entries.get(n, m)
    }

    pub fn fft_size(&self) -> usize {
        self.fft_size
    }

    pub fn route(&self) -> MatrixRoute {
        self.route
    }

    /// `Σ_n |entries[n][m]|²` per column; at most `‖φ^m‖² ≤ 1`.
    pub fn column_norms_sq(&self) -> Vec<f64> {
        let n = self.order();
        (0..n).map(|m| (0..n).map(|r| self.entries.get(r, m).norm_sqr()).sum()).collect()
    }

    /// Largest excess of a column norm over 1.
    pub fn parseval_excess(&self) -> f64 {
        self.column_norms_sq().into_iter().fold(f64::NEG_INFINITY, |a, c| a.max(c - 1.0))
    }

    fn checked(self) -> Result<Self> {
        let ex = self.parseval_excess();
        if !(ex <= 1e-8) {
            return Err(Error::Validation(format!("column norm exceeds 1 by {ex:.3e}")));
        }
        Ok(self)
    }
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Parameter("truncation order must be positive".into()));
    }
    Ok(())
}

/// Boundary route on a trace sampled on a uniform grid of `K ≥ 8N` nodes
/// (refinement depth 0). Powers use the log-modulus/phase form, so no
/// error builds up with m.
pub fn matrix_truncation(trace: &BoundaryTrace, n: usize) -> Result<OperatorMatrix> {
    check_order(n)?;
    let t = trace.nodes();
    let k = t.len();
    if k < 8 * n || !k.is_power_of_two() {
        return Err(Error::Resolution { msg: format!("uniform trace of {k} nodes, need a power of two >= {}", 8 * n), suggested: (8 * n).next_power_of_two() });
    }
    let du = 2.0 * PI / k as f64;
    if t.windows(2).any(|w| ((w[1] - w[0]) - du).abs() > 1e-9 * du) {
        return Err(Error::Validation("matrix truncation needs a uniform trace".into()));
    }
    let (lm, ph) = (trace.log_modulus(), trace.phase());
    let mut entries = DenseMatrix::zeros(n, n);
    let mut buf = alloc::vec![Complex64::new(0.0, 0.0); k];
    for m in 0..n {
        let mf = m as f64;
        for (j, b) in buf.iter_mut().enumerate() {
            *b = if m == 0 { Complex64::new(1.0, 0.0) } else { Complex64::from_polar(libm::exp(mf * lm[j]), mf * ph[j]) };
        }
        let c = fft_coefficients_offset(&buf, t[0])?;
        for r in 0..n {
            entries.set(r, m, c.get(r as i64));
        }
    }
    OperatorMatrix { entries, fft_size: k, route: MatrixRoute::Boundary }.checked()
}

/// Boundary route sampling `symbol` itself at `K` and `2K` nodes; the two
/// matrices must agree to 1e-8.
pub fn boundary_matrix(symbol: &Symbol, n: usize, k: usize) -> Result<OperatorMatrix> {
    if symbol.winds_at_zero() {
        return Err(Error::Inapplicable("boundary powers of a winding symbol alias at every K".into()));
    }
    let a = matrix_truncation(&sample_symbol(symbol, &SamplingConfig::new(k, 0))?, n)?;
    let b = matrix_truncation(&sample_symbol(symbol, &SamplingConfig::new(2 * k, 0))?, n)?;
    let diff = a.entries.as_slice().iter().zip(b.entries.as_slice()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    if !(diff < 1e-8) {
        return Err(Error::Resolution { msg: format!("entries move by {diff:.3e} when K doubles"), suggested: 4 * k });
    }
    Ok(b)
}

/// First `n` Taylor coefficients of φ, from samples on `|z| = 1 − 1/max(n, 8)`
/// at `K = max(2^14, 32n)` points, cross-checked against `2K`.
pub fn taylor_coefficients(symbol: &Symbol, n: usize) -> Result<(Vec<Complex64>, usize)> {
    check_order(n)?;
    let r = 1.0 - 1.0 / n.max(8) as f64;
    let k = (32 * n).max(1 << 14).next_power_of_two();
    let a = taylor_at(symbol, n, r, k)?;
    let b = taylor_at(symbol, n, r, 2 * k)?;
    let diff = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    if !(diff < 1e-12) {
        return Err(Error::Resolution { msg: format!("Taylor coefficients move by {diff:.3e} when K doubles"), suggested: 4 * k });
    }
    Ok((b, 2 * k))
}

fn taylor_at(symbol: &Symbol, n: usize, r: f64, k: usize) -> Result<Vec<Complex64>> {
    let vals = match symbol {
        Symbol::General(g) => g.circle_values(r, k)?,
        _ => (0..k)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / k as f64;
                let s = libm::sin(0.5 * t);
                let omz = Complex64::new((1.0 - r) + 2.0 * r * s * s, -r * libm::sin(t));
                symbol.interior_with(Complex64::from_polar(r, t), omz)
            })
            .collect::<Result<Vec<_>>>()?,
    };
    let c = fft_coefficients(&vals)?;
    let mut out = Vec::with_capacity(n);
    let mut scale = 1.0;
    for j in 0..n {
        out.push(c.raw()[j] * scale);
        scale /= r;
    }
    Ok(out)
}

/// Columns `φ^m mod z^N` by repeated truncated products with the Taylor
/// coefficients `b`.
pub fn matrix_from_taylor(b: &[Complex64], fft_size: usize) -> Result<OperatorMatrix> {
    let n = b.len();
    check_order(n)?;
    let mut entries = DenseMatrix::zeros(n, n);
    let mut col = alloc::vec![Complex64::new(0.0, 0.0); n];
    col[0] = Complex64::new(1.0, 0.0);
    let mut next = col.clone();
    for m in 0..n {
        for (r, v) in col.iter().enumerate() {
            entries.set(r, m, *v);
        }
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..=i {
                acc += col[j] * b[i - j];
            }
            next[i] = acc;
        }
        core::mem::swap(&mut col, &mut next);
    }
    OperatorMatrix { entries, fft_size, route: MatrixRoute::Taylor }.checked()
}

/// Taylor route, usable for every family including winding symbols.
pub fn taylor_matrix(symbol: &Symbol, n: usize) -> Result<OperatorMatrix> {
    let (b, k) = taylor_coefficients(symbol, n)?;
    matrix_from_taylor(&b, k)
}

/// Gram matrix `⟨φ^a, φ^b⟩ = (1/2π) ∫ φ*^a conj(φ*^b) dt`, `0 ≤ a, b < N`,
/// by the trace quadrature: `C_φ` restricted to the first N monomials,
/// with every row kept. Node contributions below 1e-20 are dropped.
pub fn gram_matrix(trace: &BoundaryTrace, n: usize) -> Result<DenseMatrix> {
    check_order(n)?;
    if trace.winds_at_zero() {
        return Err(Error::Inapplicable("the quadrature cannot follow the winding of the argument".into()));
    }
    let (lm, ph, w) = (trace.log_modulus(), trace.phase(), trace.weights());
    let mut g = alloc::vec![Complex64::new(0.0, 0.0); n * n];
    let mut v = alloc::vec![Complex64::new(0.0, 0.0); n];
    for j in 0..trace.len() {
        let s = libm::sqrt(w[j] / (2.0 * PI));
        let mut len = n;
        for (m, x) in v.iter_mut().enumerate() {
            let a = s * libm::exp(m as f64 * lm[j]);
            if a < 1e-20 {
                len = m;
                break;
            }
            *x = Complex64::from_polar(a, m as f64 * ph[j]);
        }
        for a in 0..len {
            let va = v[a];
            let row = &mut g[a * n..(a + 1) * n];
            for b in a..len {
                row[b] += va * v[b].conj();
            }
        }
    }
    for a in 0..n {
        for b in 0..a {
            g[a * n + b] = g[b * n + a].conj();
        }
    }
    DenseMatrix::from_row_major(n, n, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{sample_trace, SymbolSpec};

    fn both(spec: &SymbolSpec, n: usize) -> [OperatorMatrix; 2] {
        let s = Symbol::from_spec(spec).unwrap();
        [matrix_truncation(&sample_trace(spec, 16 * n, 0).unwrap(), n).unwrap(), taylor_matrix(&s, n).unwrap()]
    }

    #[test]
    fn closed_forms() {
        for a in both(&SymbolSpec::rotation(0.5), 8) {
            for i in 0..8 {
                for j in 0..8 {
                    let want = if i == j { libm::pow(0.5, j as f64) } else { 0.0 };
                    assert!((a.entry(i, j) - want).norm() < 1e-12, "{:?}", a.route());
                }
            }
        }
        for a in both(&SymbolSpec::constant(0.6), 32) {
            for j in 0..32 {
                assert!((a.entry(0, j).re - libm::pow(0.6, j as f64)).abs() < 1e-12);
                assert!((1..32).all(|i| a.entry(i, j).norm() < 1e-12));
            }
        }
        for a in both(&SymbolSpec::monomial(2), 8) {
            for i in 0..8 {
                for j in 0..8 {
                    let want = if i == 2 * j { 1.0 } else { 0.0 };
                    assert!((a.entry(i, j) - want).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn routes_agree_on_log_power() {
        let spec = SymbolSpec::log_power(4.0);
        let s = Symbol::from_spec(&spec).unwrap();
        let a = boundary_matrix(&s, 32, 1 << 14);
        let b = taylor_matrix(&s, 32).unwrap();
        if let Ok(a) = a {
            let d = a.entries().as_slice().iter().zip(b.entries().as_slice()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            assert!(d < 1e-6, "{d}");
        }
        assert!(b.parseval_excess() <= 1e-8);
    }

    #[test]
    fn winding_symbols_use_taylor() {
        let s = Symbol::from_spec(&SymbolSpec::general(2.0, true)).unwrap();
        assert!(matches!(boundary_matrix(&s, 8, 256), Err(Error::Inapplicable(_))));
        let a = taylor_matrix(&s, 16).unwrap();
        // φ(0) = e^{-F(0)} M(0)
        let f0 = (-(s.interior(Complex64::new(0.0, 0.0)).unwrap())).norm();
        assert!((a.entry(0, 1).norm() - f0).abs() < 1e-12);
    }

    #[test]
    fn rejects_short_traces() {
        let tr = sample_trace(&SymbolSpec::identity(), 64, 0).unwrap();
        assert!(matches!(matrix_truncation(&tr, 16), Err(Error::Resolution { .. })));
        let tr = sample_trace(&SymbolSpec::identity(), 256, 10).unwrap();
        assert!(matrix_truncation(&tr, 16).is_err());
    }
}
