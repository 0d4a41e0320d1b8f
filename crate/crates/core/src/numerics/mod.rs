//! Shared numerical primitives.

mod fft;
mod fit;
mod grid;
mod roots;
mod sum;
mod svd;

pub use fft::{fft_coefficients, fft_coefficients_offset, fft_in_place, inverse_coefficients, FourierCoefficients};
pub use fit::{critical_log_fit, linear_fit, log_corrected_fit, loglog_fit, FitResult, LinearFit, LogCorrectedFit};
pub use grid::Grid1D;
pub use roots::bisect_inverse;
pub use sum::NeumaierSum;
pub use svd::{svd_values, DenseMatrix};
