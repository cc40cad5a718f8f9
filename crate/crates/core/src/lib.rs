//! Numerical laboratory for the modular flow of the unit double cone
//! `O₁ = {|x0| + |x| < 1}` for free massless Weyl, Dirac and Majorana
//! fields.
//!
//! The crate is organised bottom-up:
//!
//! * [`spinor_algebra`]: exact 2×2 and 4×4 spinor matrices, Dirac matrices in
//!   the chiral representation, the modular boost `e(λ) ∈ SU(2,2)`.
//! * [`conformal_flow`]: the geometric flow `ν_λ`, its singular set,
//!   Jacobian, light-cone profile and the Möbius action on the tube.
//! * [`wave_space`]: sampled Cauchy data of Weyl waves with spectral
//!   evolution, evaluation, complex structure and inner product.
//! * [`modular_flow`]: the modular group acting on waves, its generator, and
//!   the induced map on test functions.
//! * [`dirac_majorana`]: four-component waves, the Majorana embedding and
//!   the Dirac generator.
//! * [`entropy`]: relative entropy of one-particle Majorana states by three
//!   independent routes.
//! * [`cli_harness`]: verification suites, flow traces and report output
//!   behind the `conemod` binary.

pub mod cli_harness;
pub mod conformal_flow;
pub mod dirac_majorana;
pub mod entropy;
pub mod error;
pub mod modular_flow;
pub mod numerics;
pub mod spinor_algebra;
pub mod wave_space;

pub use error::{Error, Result};
