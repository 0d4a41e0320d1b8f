//! Every numeric default used by the registry. Experiments read nothing
//! from anywhere else, so the "small enough" choices live in one table.

use hardy_core::symbols::DEFAULT_EPSILON;

use crate::config::ExperimentConfig;

pub const OUTPUT_DIR: &str = "hardy-lab-out";

/// Levels written to histogram CSVs; deeper levels stay in memory only.
pub const HISTOGRAM_CSV_LEVELS: u32 = 24;
/// Largest truncation order for which the matrix itself is written.
pub const MATRIX_CSV_MAX_ORDER: usize = 64;

pub const TRACE_BASE_COUNT: usize = 4096;
pub const TRACE_REFINEMENT_DEPTH: u32 = 40;
pub const TRACE_PER_OCTAVE: u32 = 256;

// tolerances of the quantitative checks
pub const EXPONENT_TOL_IDENTITY: f64 = 0.05;
pub const EXPONENT_TOL: f64 = 0.1;
pub const LUECKING_EXPONENT_TOL: f64 = 0.3;
pub const UNIT_SPECTRUM_TOL: f64 = 1e-8;
pub const MODULUS_AGREEMENT_TOL: f64 = 1e-12;
pub const HS_INTEGRAL_TOL: f64 = 1e-10;
pub const SCHATTEN_SUM_TOL: f64 = 1e-6;
pub const COEFF_FFT_TOL: f64 = 1e-8;
pub const COEFF_ORACLE_TOL: f64 = 1e-10;
pub const DECAY_SLOPE_TOL: f64 = 0.1;
pub const CONSERVATION_TOL: f64 = 1e-12;
/// Max/min spread of a normalized profile statistic accepted as bounded.
pub const PROFILE_STAT_SPREAD: f64 = 4.0;
/// Max/min spread of window/box ratios accepted as bounded.
pub const BOX_WINDOW_RATIO_SPREAD: f64 = 3.0;
pub const PREIMAGE_RATIO: f64 = 2.0;
/// Bracket for `|Hf(t)| / (t ln 1/t)` at β = 1.
pub const HF_BRACKET: (f64, f64) = (0.1, 10.0);
pub const HF_RANGE: (f64, f64) = (1e-4, 1e-2);
/// Terms of the direct sine series compared with the closed form of Hf.
pub const HF_SERIES_TERMS: usize = 1 << 20;
pub const HF_SERIES_TOL: f64 = 1e-6;
pub const LOGLOG_EPSILON: f64 = 0.01;
/// Exponent band for the ψ profile in the no-Schatten pair.
pub const PSI_EXPONENT_BAND: (f64, f64) = (1.8, 2.0);

fn base() -> ExperimentConfig {
    ExperimentConfig {
        base_count: Some(4096),
        refinement_depth: Some(60),
        per_octave: Some(512),
        ..Default::default()
    }
}

/// Fully populated parameters for `id`; `None` for unknown ids.
pub fn for_experiment(id: &str) -> Option<ExperimentConfig> {
    let c = match id {
        "identity-sanity" => ExperimentConfig {
            refinement_depth: Some(0),
            per_octave: Some(256),
            n_max: Some(10),
            fit_range: Some([3, 10]),
            truncations: Some(vec![64]),
            ..base()
        },
        "rotation-sanity" => ExperimentConfig {
            r: Some(0.5),
            refinement_depth: Some(0),
            per_octave: Some(256),
            depth: Some(8),
            truncations: Some(vec![64]),
            p_grid: Some(vec![2.0]),
            ..base()
        },
        "same-modulus" => ExperimentConfig {
            beta: Some(2.0),
            n_max: Some(16),
            fit_range: Some([8, 16]),
            p_grid: Some(vec![5.0]),
            ..base()
        },
        "shapiro-taylor" => ExperimentConfig {
            theta: Some(4.0),
            p_grid: Some(vec![0.8, 1.5]),
            refinement_depth: Some(300),
            per_octave: Some(256),
            depth: Some(256),
            fit_range: Some([64, 256]),
            truncations: Some(vec![128, 256, 512]),
            spectral_base_count: Some(1 << 14),
            spectral_refinement_depth: Some(60),
            ..base()
        },
        "log-power-profile" => ExperimentConfig { theta: Some(2.0), n_max: Some(16), fit_range: Some([8, 16]), ..base() },
        "loglog-boundary" => ExperimentConfig {
            theta: Some(4.0),
            q: Some(3.0),
            // the loglog factor turns the phase further; 0.1 leaves Re f < 0
            epsilon: Some(LOGLOG_EPSILON),
            p_grid: Some(vec![0.8, 1.0, 1.5]),
            refinement_depth: Some(300),
            per_octave: Some(256),
            depth: Some(256),
            fit_range: Some([64, 256]),
            ..base()
        },
        "no-schatten" => ExperimentConfig {
            p_grid: Some(vec![0.5, 1.0, 2.0, 4.0, 8.0]),
            refinement_depth: Some(120),
            per_octave: Some(256),
            n_max: Some(52),
            fit_range: Some([8, 16]),
            ..base()
        },
        "no-schatten-same-modulus" => ExperimentConfig {
            n_max: Some(16),
            fit_range: Some([8, 16]),
            p_grid: Some(vec![3.0]),
            alpha_floor: Some(1.8),
            ..base()
        },
        "beta-one-remark" => ExperimentConfig { k_max: Some(64), n_max: Some(20), fit_range: Some([8, 20]), ..base() },
        "fourier-coefficients" => ExperimentConfig { beta_grid: Some(vec![0.5, 1.5]), k_max: Some(512), fit_range: Some([16, 512]), ..Default::default() },
        "poisson-moments" => ExperimentConfig {
            beta: Some(3.0),
            p_grid: Some(vec![1.5]),
            radial: Some(1 << 16),
            n_max: Some(512),
            ..Default::default()
        },
        "preimage-vs-sampled" => ExperimentConfig { beta: Some(2.0), n_max: Some(12), h_level: Some(10), ..base() },
        "box-window-equivalence" => ExperimentConfig {
            theta: Some(4.0),
            p_grid: Some(vec![1.5]),
            per_octave: Some(256),
            depth: Some(14),
            fit_range: Some([8, 14]),
            ..base()
        },
        _ => return None,
    };
    let log_power = matches!(
        id,
        "shapiro-taylor" | "log-power-profile" | "loglog-boundary" | "no-schatten" | "no-schatten-same-modulus" | "box-window-equivalence"
    );
    Some(if log_power { ExperimentConfig { epsilon: c.epsilon.or(Some(DEFAULT_EPSILON)), ..c } } else { c })
}
