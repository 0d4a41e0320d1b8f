use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// Fourier coefficients indexed `-K/2 ..= K/2 - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients {
    /// Raw DFT order: entry `j` holds coefficient `j` for `j < K/2`, and
    /// coefficient `j - K` otherwise.
    raw: Vec<Complex64>,
}

impl FourierCoefficients {
    pub fn size(&self) -> usize {
        self.raw.len()
    }

    /// Coefficient with index `n`, for `-K/2 <= n < K/2`.
    pub fn get(&self, n: i64) -> Complex64 {
        let k = self.raw.len() as i64;
        assert!(n >= -k / 2 && n < k / 2, "coefficient index {n} out of range");
        self.raw[n.rem_euclid(k) as usize]
    }

    /// Coefficients in signed order, starting at `-K/2`.
    pub fn signed(&self) -> Vec<Complex64> {
        let k = self.raw.len();
        let mut out = Vec::with_capacity(k);
        out.extend_from_slice(&self.raw[k / 2..]);
        out.extend_from_slice(&self.raw[..k / 2]);
        out
    }

    /// Coefficients in raw DFT order.
    pub fn raw(&self) -> &[Complex64] {
        &self.raw
    }

    pub fn into_raw(self) -> Vec<Complex64> {
        self.raw
    }
}

fn check_size(k: usize) -> Result<()> {
    if k < 4 || !k.is_power_of_two() {
        return Err(Error::Size(k));
    }
    Ok(())
}

/// Unnormalized radix-2 transform. Forward uses `exp(-2πi jn/K)`.
pub fn fft_in_place(buf: &mut [Complex64], inverse: bool) -> Result<()> {
    let k = buf.len();
    if k == 1 {
        return Ok(());
    }
    if !k.is_power_of_two() {
        return Err(Error::Size(k));
    }
    let bits = k.trailing_zeros();
    for i in 0..k {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }
    // twiddles straight from sin/cos, no recurrence drift
    let sign = if inverse { 1.0 } else { -1.0 };
    let half = k / 2;
    let tw: Vec<Complex64> = (0..half)
        .map(|j| {
            let a = 2.0 * PI * j as f64 / k as f64;
            Complex64::new(libm::cos(a), sign * libm::sin(a))
        })
        .collect();
    let mut len = 2;
    while len <= k {
        let step = k / len;
        let h = len / 2;
        for start in (0..k).step_by(len) {
            for j in 0..h {
                let w = tw[j * step];
                let a = buf[start + j];
                let b = buf[start + j + h] * w;
                buf[start + j] = a + b;
                buf[start + j + h] = a - b;
            }
        }
        len <<= 1;
    }
    Ok(())
}

/// Coefficient `n` is `(1/K) Σ_j samples_j exp(-i n t_j)` with `t_j = 2πj/K`.
pub fn fft_coefficients(samples: &[Complex64]) -> Result<FourierCoefficients> {
    check_size(samples.len())?;
    let mut raw = samples.to_vec();
    fft_in_place(&mut raw, false)?;
    let scale = 1.0 / samples.len() as f64;
    for c in raw.iter_mut() {
        *c *= scale;
    }
    Ok(FourierCoefficients { raw })
}

/// Same as [`fft_coefficients`] for samples at `t_j = offset + 2πj/K`.
pub fn fft_coefficients_offset(samples: &[Complex64], offset: f64) -> Result<FourierCoefficients> {
    let mut c = fft_coefficients(samples)?;
    let k = c.raw.len();
    for (j, v) in c.raw.iter_mut().enumerate() {
        let n = if j < k / 2 { j as f64 } else { j as f64 - k as f64 };
        let a = -n * offset;
        *v *= Complex64::new(libm::cos(a), libm::sin(a));
    }
    Ok(c)
}

/// Samples on `t_j = 2πj/K` reconstructed from coefficients.
pub fn inverse_coefficients(coeffs: &FourierCoefficients) -> Vec<Complex64> {
    let mut buf = coeffs.raw.clone();
    // size was validated on construction
    fft_in_place(&mut buf, true).expect("power-of-two size");
    buf
}
