//! Reservoir spectral densities and the complex coefficients `Γ₋`.

mod density;
mod gamma;
pub mod quadrature;

pub use density::{DensityForm, Interval, SpectralDensity};
pub use gamma::{
    default_eps_seq, gamma_minus, gamma_regularized, gamma_set_dhl, gamma_set_hl, ComputedGammaSet, Convention,
    Detuning, DhlDensities, GammaCoefficient, GammaOptions, GammaSet, HlDensities, MatterGammas, ModelKind,
    RegularizationReport, RESONANCE_TOLERANCE,
};
pub use quadrature::{integrate, QuadOptions, QuadResult};
