//! Pullback measure on Luecking boxes and Carleson windows.

mod angular;
mod histogram;
mod levels;
mod preimage;
mod profile;
mod runs;
mod segments;

pub use histogram::{unsigned_sector, pullback_histogram, pullback_histogram_with, PullbackHistogram};
pub use levels::{level_of, level_threshold, Level, LEVEL_CAP};
pub use preimage::{preimage_carleson_estimate, window_preimage_intervals, window_preimage_with, ModulusBound, PreimageOptions, WindowPreimage};
pub use profile::{MAX_PROFILE_LEVEL, carleson_profile, carleson_profile_with, doubling_constant, fit_carleson_exponent, CarlesonProfile, ProfileLevel, ProfileOptions};
pub use runs::{Run, RunList};
pub use segments::MassModel;

/// Levels with fewer contributing samples than this are flagged untrusted.
pub const MIN_EFFECTIVE_SAMPLES: u64 = 100;
