//! Truncated matrices of C_φ in the monomial basis, singular values,
//! Schatten sums and Poisson-moment sums.

mod matrix;
mod poisson;
mod spectrum;

pub use matrix::{boundary_matrix, gram_matrix, matrix_from_taylor, matrix_truncation, taylor_coefficients, taylor_matrix, MatrixRoute, OperatorMatrix};
pub use poisson::{beta_radial_measure, poisson_moment_sums, PoissonSums};
pub use spectrum::{column_spectrum, schatten_sum, singular_spectrum, spectral_tail_verdict, SchattenSum, SingularSpectrum};
