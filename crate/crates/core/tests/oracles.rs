use std::f64::consts::PI;

use hardy_core::criteria::{hs_integral, luecking_partial_sums, SeriesVerdict};
use hardy_core::measure::{carleson_profile, fit_carleson_exponent, pullback_histogram};
use hardy_core::numerics::{critical_log_fit, loglog_fit, NeumaierSum};
use hardy_core::operator::{schatten_sum, singular_spectrum, taylor_matrix};
use hardy_core::symbols::{sample_trace, sin_beta_coeffs, Symbol, SymbolSpec};
use proptest::prelude::*;

// |sin(t/2)| = 2/π − (4/π) Σ cos(kt)/(4k² − 1)
#[test]
fn abs_sine_series() {
    let s = sin_beta_coeffs(1.0, 256).unwrap();
    let c = s.coeffs();
    assert!((c[0] - 2.0 / PI).abs() < 1e-10, "{}", c[0]);
    for k in 1..=256 {
        let want = -4.0 / (PI * (4.0 * (k * k) as f64 - 1.0));
        assert!((c[k] - want).abs() < 1e-10, "k={k}: {} vs {want}", c[k]);
    }
    for t in [0.3, 1.0, 2.5, PI] {
        assert!((s.eval(t) - (t / 2.0).sin().abs()).abs() < 1e-3);
    }
}

#[test]
fn half_rotation_spectrum() {
    let sym = Symbol::from_spec(&SymbolSpec::rotation(0.5)).unwrap();
    let spec = singular_spectrum(&taylor_matrix(&sym, 24).unwrap()).unwrap();
    for (n, &s) in spec.values.iter().enumerate() {
        assert!((s - 0.5f64.powi(n as i32)).abs() < 1e-14, "n={n}: {s}");
    }
    let hs = schatten_sum(&spec, 2.0).unwrap();
    assert!((hs.sum - 4.0 / 3.0).abs() < 1e-12);
}

// ∫ 1/(1 − |φ|²) dm = 4/3 for φ = z/2
#[test]
fn half_rotation_hs_integral() {
    let tr = sample_trace(&SymbolSpec::rotation(0.5), 1024, 0).unwrap();
    let hs = hs_integral(&tr).unwrap();
    assert!((hs.value - 4.0 / 3.0).abs() < 1e-12, "{}", hs.value);
}

#[test]
fn identity_profile_is_linear() {
    let tr = sample_trace(&SymbolSpec::identity(), 4096, 0).unwrap();
    let prof = carleson_profile(&tr, 10).unwrap();
    let fit = fit_carleson_exponent(&prof, 3, 10).unwrap();
    assert!((fit.exponent - 1.0).abs() < 0.05, "{}", fit.exponent);
}

#[test]
fn histograms_conserve_mass() {
    for spec in [SymbolSpec::general(2.0, false), SymbolSpec::log_power(4.0), SymbolSpec::rotation(0.9)] {
        let tr = sample_trace(&spec, 2048, 40).unwrap();
        let h = pullback_histogram(&tr, 16).unwrap();
        assert!(h.conservation_defect().abs() < 1e-12, "{}: {}", spec.label(), h.conservation_defect());
        assert_eq!(h.decomposition_violation(), None, "{}", spec.label());
    }
}

#[test]
fn compact_rotation_has_finite_luecking_sums() {
    let tr = sample_trace(&SymbolSpec::rotation(0.5), 512, 0).unwrap();
    let h = pullback_histogram(&tr, 12).unwrap();
    for p in [0.5, 1.0, 4.0] {
        assert_eq!(luecking_partial_sums(&h, p).unwrap().verdict, SeriesVerdict::Converging);
    }
}

#[test]
fn malformed_inputs_are_errors() {
    assert!(sin_beta_coeffs(1.0, 0).is_err());
    assert!(sample_trace(&SymbolSpec::rotation(1.5), 64, 0).is_err());
    assert!(Symbol::from_spec(&SymbolSpec::log_power(-1.0)).is_err());
}

proptest! {
    #[test]
    fn neumaier_matches_exact_integer_sum(xs in prop::collection::vec(-1_000_000i64..1_000_000, 1..200)) {
        let mut s = NeumaierSum::new();
        for &x in &xs {
            s.add(x as f64 * 0.5);
        }
        prop_assert_eq!(s.value(), xs.iter().sum::<i64>() as f64 * 0.5);
    }

    #[test]
    fn loglog_fit_recovers_power(a in -3.0f64..3.0, c in 0.1f64..10.0) {
        let pairs: Vec<_> = (1..=12).map(|n| { let h = (-n as f64).exp2(); (h, c * h.powf(a)) }).collect();
        let f = loglog_fit(&pairs).unwrap();
        prop_assert!((f.exponent - a).abs() < 1e-9);
        prop_assert!((f.prefactor / c - 1.0).abs() < 1e-9);
    }

    #[test]
    fn critical_fit_recovers_log_power(s in -3.0f64..3.0) {
        let pairs: Vec<_> = (64..=256).step_by(4).map(|n| { let n = n as f64; (n, n.ln().powf(s) / n) }).collect();
        let f = critical_log_fit(&pairs, -1.0).unwrap();
        prop_assert!((f.log_exponent - s).abs() < 1e-9);
    }
}
