//! Radial levels: level n holds `2^{-n-1} < 1 - |w| ≤ 2^{-n}`, i.e.
//! `λ_n ≤ ln|w| < λ_{n+1}` with `λ_n = ln(1 - 2^{-n})`. Level 0 is the core
//! `|w| < 1/2`.

/// Deepest level tracked individually.
pub const LEVEL_CAP: u32 = 1020;

/// Radial position of a boundary value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Level {
    /// Level n; 0 is the core disc |w| < 1/2.
    Band(u32),
    /// Deeper than [`LEVEL_CAP`] but still inside the open disc.
    Deep,
    /// |w| = 1.
    Circle,
}

/// `λ_n = ln(1 - 2^{-n})` for `n ≥ 1`, `-∞` for `n = 0`.
pub fn level_threshold(n: u32) -> f64 {
    if n == 0 {
        f64::NEG_INFINITY
    } else {
        libm::log1p(-libm::ldexp(1.0, -(n as i32)))
    }
}

/// Level of a log-modulus.
pub fn level_of(log_modulus: f64) -> Level {
    if log_modulus >= 0.0 {
        return Level::Circle;
    }
    if !(log_modulus >= level_threshold(1)) {
        return Level::Band(0);
    }
    // the gap 1 - |w| ≈ -ln|w| decides; refine around the binary exponent
    let gap = -libm::expm1(log_modulus);
    let guess = -libm::log2(gap);
    let mut n = (libm::floor(guess) as i64).clamp(1, LEVEL_CAP as i64 + 1) as u32;
    while n > 1 && level_threshold(n) > log_modulus {
        n -= 1;
    }
    while n <= LEVEL_CAP && level_threshold(n + 1) <= log_modulus {
        n += 1;
    }
    if n > LEVEL_CAP {
        Level::Deep
    } else {
        Level::Band(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_open_bands() {
        assert_eq!(level_of(libm::log(0.75)), Level::Band(2));
        assert_eq!(level_of(libm::log(0.5)), Level::Band(1));
        assert_eq!(level_of(libm::log(0.4999)), Level::Band(0));
        assert_eq!(level_of(libm::log(0.7499)), Level::Band(1));
        assert_eq!(level_of(0.0), Level::Circle);
        assert_eq!(level_of(f64::NEG_INFINITY), Level::Band(0));
        assert_eq!(level_of(-libm::ldexp(1.0, -300)), Level::Band(300));
        assert_eq!(level_of(-libm::ldexp(1.0, -1050)), Level::Deep);
    }

    #[test]
    fn matches_threshold_table() {
        for n in 1..200u32 {
            let lam = level_threshold(n);
            assert_eq!(level_of(lam), Level::Band(n));
            let below = f64::from_bits(lam.to_bits() + 1); // more negative
            assert_eq!(level_of(below), Level::Band(n - 1));
        }
    }
}
