use crate::{Error, Result};

/// Solves `f(t) = y` for `f` strictly monotone on `[a, b]` by bisection down
/// to adjacent floating-point numbers.
pub fn bisect_inverse<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, y: f64) -> Result<f64> {
    let (fa, fb) = (f(a), f(b));
    let (lo, hi) = if fa <= fb { (fa, fb) } else { (fb, fa) };
    if !(y >= lo && y <= hi) {
        return Err(Error::Bracket { y, lo, hi });
    }
    if fa == y {
        return Ok(a);
    }
    if fb == y {
        return Ok(b);
    }
    let increasing = fb > fa;
    let (mut l, mut r) = (a, b);
    for _ in 0..2100 {
        let m = 0.5 * (l + r);
        if m <= l.min(r) || m >= l.max(r) {
            break;
        }
        let fm = f(m);
        if fm == y {
            return Ok(m);
        }
        if (fm < y) == increasing {
            l = m;
        } else {
            r = m;
        }
    }
    let (fl, fr) = (f(l), f(r));
    Ok(if (fl - y).abs() <= (fr - y).abs() { l } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn half_angle_square() {
        let t = bisect_inverse(|t| libm::pow(libm::sin(t / 2.0), 2.0), 0.0, PI, 0.5).unwrap();
        assert!((t - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn identity_map() {
        let t = bisect_inverse(|t| t, 0.0, 1.0, 0.3).unwrap();
        assert!((t - 0.3).abs() < 1e-16);
    }

    #[test]
    fn entropy_like() {
        let f = |t: f64| t * libm::log(1.0 / t);
        let y = libm::ldexp(1.0, -10);
        let t = bisect_inverse(f, 1e-300, 0.1, y).unwrap();
        assert!((f(t) - y).abs() <= 1e-14 * y.max(1.0));
    }

    #[test]
    fn bracket_error() {
        assert!(matches!(bisect_inverse(|t| t, 0.0, 1.0, 2.0), Err(Error::Bracket { .. })));
    }

    #[test]
    fn decreasing_function() {
        let t = bisect_inverse(|t| 1.0 / t, 0.1, 10.0, 4.0).unwrap();
        assert!((t - 0.25).abs() < 1e-15);
    }
}
