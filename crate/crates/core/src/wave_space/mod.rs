//! The Hilbert space of right-handed Weyl waves, represented by sampled
//! Cauchy data on a periodic box.
//!
//! A wave is determined by its time-zero data `Φ₀`; its spectrum evolves with
//! `e^{−it σ·p}`. The complex structure of the wave space is not pointwise
//! multiplication by `i` but the spectral multiplier `ι(p) = i p̂·σ`, and the
//! inner product is
//!
//! ```text
//! ⟨Ψ, Φ⟩ = (2π)^{-3} ∫ dp (2|p|)^{-1} [Ψ̂₀†p̰₊Φ̂₀ − Φ̂₀†p̰₋Ψ̂₀]
//! ```
//!
//! whose diagonal is the plain L² norm of the Cauchy data. The single
//! zero-momentum grid point, where `ι`, `ν₀` and the weight are undefined, is
//! given zero weight.

mod fields;
mod grid;
mod profile;
mod special;
mod testfn;
mod weyl;

pub use fields::{
    inverse_transform, partial_derivative, transform, CauchyData, SpectralData, WeylCauchyData, WeylSpectrum,
};
pub use grid::{GridSettings, GridSpec, MIN_POINTS};
pub use profile::{synthesize_cauchy, synthesize_components, ProfileFamily, ProfileTerm, StateSpec, GAUSSIAN_TAIL};
pub use special::spherical_bessel_scaled;
pub use testfn::{
    testfunction_pair, wave_from_sampled_testfunction, wave_from_testfunction, SpaceProfile, TestFunctionSpec,
    TestTerm, TimeProfile, MAX_DEGREE,
};
pub use weyl::{
    apply_iota, evaluate, evolve, helicity_frame, helicity_frame_inverse, helicity_frame_pair, inner, inner_spectral,
    reflect, v_inverse, v_map, weyl_residual, MomentumPair, WaveEvaluator,
};

pub(crate) use fields::unzip;
pub(crate) use weyl::{check_containment, direction, evolve_blocks, sigma_dot_apply};
