use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::numerics::{fft_coefficients, NeumaierSum};
use crate::{Error, Result};

/// `f(t) = Σ a_k cos(kt)`, optionally tagged with the exponent β when the
/// coefficients come from `|sin(t/2)|^β`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CosineSeries {
    coeffs: Vec<f64>,
    beta: Option<f64>,
}

const RESYNC: usize = 64;

/// Σ_{k≥1} a_k e^{ikt}, by rotation with periodic exact resynchronization.
fn exp_sum(coeffs: &[f64], t: f64) -> Complex64 {
    let step = Complex64::new(libm::cos(t), libm::sin(t));
    let mut z = Complex64::new(1.0, 0.0);
    let (mut re, mut im) = (NeumaierSum::new(), NeumaierSum::new());
    for (k, &a) in coeffs.iter().enumerate().skip(1) {
        if k % RESYNC == 1 {
            let kt = k as f64 * t;
            z = Complex64::new(libm::cos(kt), libm::sin(kt));
        } else {
            z *= step;
        }
        re.add(a * z.re);
        im.add(a * z.im);
    }
    Complex64::new(re.value(), im.value())
}

impl CosineSeries {
    /// Arbitrary coefficients; `f(0) = 0` and nonnegativity are checked by
    /// [`CosineSeries::check_invariants`], not here.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Validation("cosine series needs finite coefficients".into()));
        }
        Ok(Self { coeffs, beta: None })
    }

    /// The exact series `1/2 - cos(t)/2` of `sin²(t/2)`.
    pub fn sin_squared() -> Self {
        Self { coeffs: vec![0.5, -0.5], beta: Some(2.0) }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    /// Highest retained index K.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// f(t); exact `|sin(t/2)|^β` when β is known.
    pub fn eval(&self, t: f64) -> f64 {
        match self.beta {
            Some(b) if b == 2.0 => {
                let s = libm::sin(0.5 * t);
                s * s
            }
            Some(b) => libm::pow(libm::fabs(libm::sin(0.5 * t)), b),
            None => self.eval_series(t),
        }
    }

    /// Truncated sum Σ a_k cos(kt).
    pub fn eval_series(&self, t: f64) -> f64 {
        self.coeffs[0] + exp_sum(&self.coeffs, t).re
    }

    /// Hf(t); closed forms for β ∈ {1, 2}, the truncated sine series otherwise.
    pub fn conjugate(&self, t: f64) -> f64 {
        match self.beta {
            Some(b) if b == 2.0 => -0.5 * libm::sin(t),
            Some(b) if b == 1.0 => {
                let t = wrap(t);
                if t == 0.0 {
                    0.0
                } else {
                    2.0 / PI * libm::sin(0.5 * t) * libm::log(libm::fabs(libm::tan(0.25 * t)))
                }
            }
            _ => conjugate_series(self, t),
        }
    }

    /// Derivative of the truncated conjugate series, Σ k a_k cos(kt).
    pub fn conjugate_derivative(&self, t: f64) -> f64 {
        match self.beta {
            Some(b) if b == 2.0 => -0.5 * libm::cos(t),
            _ => {
                let w: Vec<f64> = self.coeffs.iter().enumerate().map(|(k, a)| k as f64 * a).collect();
                exp_sum(&w, t).re
            }
        }
    }

    /// Spot checks `f ≥ 0` on a 2^12 grid and `f(0) = 0` to 1e-10.
    pub fn check_invariants(&self) -> Result<()> {
        let f0 = self.eval(0.0);
        if f0.abs() > 1e-10 {
            return Err(Error::Validation(format!("f(0) = {f0:e}, expected 0")));
        }
        let n = 1 << 12;
        for j in 0..n {
            let t = -PI + 2.0 * PI * (j as f64 + 0.5) / n as f64;
            let v = self.eval(t);
            if v < -1e-12 {
                return Err(Error::Validation(format!("f({t}) = {v:e} is negative")));
            }
        }
        Ok(())
    }
}

fn wrap(t: f64) -> f64 {
    if t > PI || t <= -PI {
        t - 2.0 * PI * libm::round(t / (2.0 * PI))
    } else {
        t
    }
}

/// Σ_{k≥1} a_k sin(kt) by direct summation.
pub fn conjugate_series(series: &CosineSeries, t: f64) -> f64 {
    exp_sum(&series.coeffs, t).im
}

fn check_beta(beta: f64, upper_inclusive: bool) -> Result<()> {
    let ok = beta > 0.0 && if upper_inclusive { beta <= 2.0 } else { beta < 2.0 };
    if !ok || !beta.is_finite() {
        return Err(Error::Parameter(format!("beta = {beta} outside (0, 2]")));
    }
    Ok(())
}

/// Cosine coefficients c_0..c_K of `|sin(t/2)|^β` by FFT quadrature.
///
/// Aliasing shifts every computed coefficient by about `Σ_{j≠0} c_{jM}`,
/// of order `M^{-(β+1)}`, so successive sizes are combined by Richardson
/// extrapolation on that exponent. The size starts at 2^18 (or 8K) and
/// doubles until two extrapolations agree to 1e-12 at every index.
pub fn sin_beta_coeffs(beta: f64, k: usize) -> Result<CosineSeries> {
    check_beta(beta, true)?;
    if k == 0 {
        return Err(Error::Parameter("K must be at least 1".into()));
    }
    if beta == 2.0 {
        let mut c = vec![0.0; k + 1];
        c[0] = 0.5;
        c[1] = -0.5;
        return Ok(CosineSeries { coeffs: c, beta: Some(2.0) });
    }
    const MAX_SIZE: usize = 1 << 23;
    let gain = libm::pow(2.0, beta + 1.0) - 1.0;
    let extrapolate = |coarse: &[f64], fine: &[f64]| -> Vec<f64> { fine.iter().zip(coarse).map(|(f, c)| f + (f - c) / gain).collect() };
    let mut m = (1usize << 18).max((8 * k).next_power_of_two());
    let mut prev = quadrature_coeffs(beta, k, m)?;
    let mut prev_ext: Option<Vec<f64>> = None;
    loop {
        m *= 2;
        if m > MAX_SIZE {
            return Err(Error::Resolution {
                msg: format!("sin^beta coefficients did not settle for beta = {beta}, K = {k}"),
                suggested: m,
            });
        }
        let next = quadrature_coeffs(beta, k, m)?;
        let ext = extrapolate(&prev, &next);
        if let Some(pe) = &prev_ext {
            if ext.iter().zip(pe).all(|(a, b)| (a - b).abs() < 1e-12) {
                return Ok(CosineSeries { coeffs: ext, beta: Some(beta) });
            }
        }
        prev = next;
        prev_ext = Some(ext);
    }
}

fn quadrature_coeffs(beta: f64, k: usize, m: usize) -> Result<Vec<f64>> {
    let samples: Vec<Complex64> = (0..m)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / m as f64;
            Complex64::new(libm::pow(libm::fabs(libm::sin(0.5 * t)), beta), 0.0)
        })
        .collect();
    let c = fft_coefficients(&samples)?;
    Ok((0..=k).map(|n| if n == 0 { c.get(0).re } else { 2.0 * c.get(n as i64).re }).collect())
}

/// Independent route to the coefficients of `|sin(t/2)|^β`: expand
/// `(1 - cos t)^{β/2} = 1 - Σ α_k cos^k t`, distribute each power of cos into
/// cosines, and sum the resulting positive series over k.
///
/// The k-series converges like D^{-(β+1)/2}, so partial sums at geometric
/// depths are combined by Richardson extrapolation on the known exponents.
pub fn binomial_coeff_oracle(beta: f64, k: usize) -> Result<CosineSeries> {
    check_beta(beta, true)?;
    if beta == 2.0 {
        return sin_beta_coeffs(2.0, k.max(1));
    }
    let p = 0.5 * beta;
    // α_m for m ≤ K: α_1 = p, α_{j+1} = α_j (j - p)/(j + 1)
    let mut alpha = vec![0.0; k.max(2) + 1];
    alpha[1] = p;
    for j in 1..alpha.len() - 1 {
        alpha[j + 1] = alpha[j] * (j as f64 - p) / (j as f64 + 1.0);
    }
    let scale = libm::pow(2.0, -p);
    let mut coeffs = Vec::with_capacity(k + 1);
    for m in 0..=k {
        let (first_k, first_term) = if m == 0 { (2usize, alpha[2] * 0.5) } else { (m, alpha[m] * libm::pow(2.0, 1.0 - m as f64)) };
        let s = richardson_tail_sum(p, m, first_k, first_term);
        coeffs.push(if m == 0 { (1.0 - s) * scale } else { -s * scale });
    }
    Ok(CosineSeries { coeffs, beta: Some(beta) })
}

/// Σ_{k ≥ first_k, k ≡ m mod 2} T_k with T_{k+2}/T_k = (k-p)(k+1-p)/((k+2-m)(k+2+m)).
fn richardson_tail_sum(p: f64, m: usize, first_k: usize, first_term: f64) -> f64 {
    let levels: usize = if m > 64 { 5 } else { 7 };
    let d0 = (8 * m * m).next_power_of_two().clamp(1 << 15, 1 << 17);
    let mf = m as f64;
    let mut partial = Vec::with_capacity(levels + 1);
    let mut acc = NeumaierSum::new();
    let mut kk = first_k;
    let mut term = first_term;
    for lvl in 0..=levels {
        let d = d0 << lvl;
        while kk <= d {
            acc.add(term);
            let kf = kk as f64;
            term *= (kf - p) * (kf + 1.0 - p) / ((kf + 2.0 - mf) * (kf + 2.0 + mf));
            kk += 2;
        }
        partial.push(acc.value());
    }
    // tail(D) ~ Σ_j b_j D^{-(p + 1/2 + j)}; eliminate one exponent per column
    let s0 = p + 0.5;
    let mut col = partial;
    for j in 0..levels {
        let f = libm::pow(2.0, s0 + j as f64) - 1.0;
        col = col.windows(2).map(|w| w[1] + (w[1] - w[0]) / f).collect();
    }
    col[0]
}
