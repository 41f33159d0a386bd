//! Numerical Landau-level spectra for spin-0, spin-1/2 and spin-1 particles
//! in a uniform magnetic field, in the original and FW representations.

pub mod closed_form;
pub mod eigen;
pub mod eqrel;
pub mod model;
pub mod ops;
pub mod report;

pub use eqrel::{eqrel_check, EqrelReport};
pub use model::{ModelError, Params, Particle, Representation, SpectralModel};
pub use report::{
    amm_linearity_scan, compare_closed_form, eqprf_residual_scan, SpectraError, SpectralReport, Spectrum,
};
