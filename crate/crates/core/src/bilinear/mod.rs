//! Bilinear Kloosterman forms, dispersion coefficients and their Fourier profiles.

mod dispersion;
mod forms;
mod fourier;
mod poisson;
mod sequence;
mod window;

pub use dispersion::{default_window, DispersionSequence};
pub use forms::{bilinear_form_direct, bilinear_form_dual, bound_ratio_prop35, Prop35Sample, DIRECT_LIMIT};
pub use fourier::{
    dispersion_profile, fourier_profile, fourier_profile_direct, grid_for, norm_constants, Concentration,
    FourierProfile, NormConstants, SPIKE_EPS,
};
pub use poisson::{poisson_complete, progression_sum, PoissonResult};
pub use sequence::{e, SequenceKind, WindowedSequence, MAX_SUPPORT};
pub use window::SmoothWindow;
