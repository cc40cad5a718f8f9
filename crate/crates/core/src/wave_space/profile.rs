//! Test-state factory: superpositions of radial scalar profiles times constant
//! spinors.
//!
//! Two profile families are available, both written in terms of
//! `s = |x − c| / R`:
//!
//! * `bump`: `e^{−a s²} (1 − s²)^k` for `s < 1` and zero outside. With the
//!   default `a = 0` this is the plain polynomial bump; a positive `a` damps
//!   the spectrum of the boundary kink so that moderate grids resolve it.
//! * `gaussian`: `exp(−|x − c|² / 2w²)` truncated at radius `R`, optionally
//!   multiplied by `(1 − s²)^k`. When `radius` is omitted it is chosen so that
//!   the discarded tail is below `1e−12`.
//!
//! By default the synthesized field has its discrete mean removed, which
//! makes the zero-momentum sample vanish. The correction subtracts a multiple
//! of a reference profile built from the first term, so the support is kept.

use std::path::Path;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fields::{CauchyData, WeylCauchyData};
use super::grid::GridSpec;
use crate::error::{Error, Result};
use crate::numerics::KahanSumC;

/// Relative tail level used to pick the default truncation radius of a
/// Gaussian.
pub const GAUSSIAN_TAIL: f64 = 1e-12;

/// One term of a state: a scalar profile times a constant spinor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ProfileTerm {
    /// Polynomial bump `e^{−a s²}(1 − s²)^k`.
    Bump {
        /// Center `c`.
        center: [f64; 3],
        /// Support radius `R`.
        radius: f64,
        /// Exponent `k`.
        degree: u32,
        /// Gaussian taper coefficient `a` (default 0).
        #[serde(default)]
        taper: f64,
        /// Spinor coefficient as `[re, im]` pairs.
        spinor: Vec<[f64; 2]>,
    },
    /// Gaussian of width `w` truncated at `R`.
    Gaussian {
        /// Center `c`.
        center: [f64; 3],
        /// Width `w`.
        width: f64,
        /// Truncation radius (defaults to the `1e−12` tail radius).
        #[serde(default)]
        radius: Option<f64>,
        /// Optional polynomial factor `(1 − s²)^k` (default 0).
        #[serde(default)]
        degree: u32,
        /// Spinor coefficient as `[re, im]` pairs.
        spinor: Vec<[f64; 2]>,
    },
}

/// Profile family tag recorded in reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileFamily {
    /// Compactly supported polynomial bump.
    Bump,
    /// Gaussian truncated at a finite radius.
    TruncatedGaussian,
}

impl ProfileTerm {
    /// Center of the profile.
    pub fn center(&self) -> [f64; 3] {
        match self {
            Self::Bump { center, .. } | Self::Gaussian { center, .. } => *center,
        }
    }

    /// Radius outside which the profile vanishes.
    pub fn radius(&self) -> f64 {
        match self {
            Self::Bump { radius, .. } => *radius,
            Self::Gaussian { width, radius, .. } => {
                radius.unwrap_or_else(|| width * (-2.0 * GAUSSIAN_TAIL.ln()).sqrt())
            }
        }
    }

    /// Spinor coefficient.
    pub fn spinor(&self) -> Vec<C64> {
        let raw = match self {
            Self::Bump { spinor, .. } | Self::Gaussian { spinor, .. } => spinor,
        };
        raw.iter().map(|[re, im]| C64::new(*re, *im)).collect()
    }

    /// Family tag.
    pub fn family(&self) -> ProfileFamily {
        match self {
            Self::Bump { .. } => ProfileFamily::Bump,
            Self::Gaussian { .. } => ProfileFamily::TruncatedGaussian,
        }
    }

    /// Value of the scalar profile at `x`.
    pub fn scalar_at(&self, x: &[f64; 3]) -> f64 {
        let c = self.center();
        let r2: f64 = (0..3).map(|a| (x[a] - c[a]).powi(2)).sum();
        let big_r = self.radius();
        let s2 = r2 / (big_r * big_r);
        if s2 >= 1.0 {
            return 0.0;
        }
        match self {
            Self::Bump { degree, taper, .. } => (-taper * s2).exp() * (1.0 - s2).powi(*degree as i32),
            Self::Gaussian { width, degree, .. } => {
                (-r2 / (2.0 * width * width)).exp() * (1.0 - s2).powi(*degree as i32)
            }
        }
    }

    fn validate(&self, grid: &GridSpec, components: usize) -> Result<()> {
        let r = self.radius();
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidInput(format!("profile radius must be positive, got {r}")));
        }
        if let Self::Gaussian { width, .. } = self {
            if !(width.is_finite() && *width > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "gaussian width must be positive, got {width}"
                )));
            }
        }
        if let Self::Bump { taper, .. } = self {
            if !(taper.is_finite() && *taper >= 0.0) {
                return Err(Error::InvalidInput(format!("taper must be non-negative, got {taper}")));
            }
        }
        let c = self.center();
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("profile center must be finite".into()));
        }
        let reach = c.iter().map(|v| v * v).sum::<f64>().sqrt() + r;
        if reach >= grid.half_width() {
            return Err(Error::SupportOverflow {
                needed: reach,
                available: grid.half_width(),
            });
        }
        let n = match self {
            Self::Bump { spinor, .. } | Self::Gaussian { spinor, .. } => spinor.len(),
        };
        if n != components {
            return Err(Error::InvalidInput(format!(
                "spinor has {n} components, expected {components}"
            )));
        }
        Ok(())
    }
}

fn default_true() -> bool {
    true
}

/// A state description as read from a JSON state file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    /// Optional grid settings carried with the state.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    /// Whether the loader should embed the Weyl profile as a Majorana state.
    #[serde(default)]
    pub majorana: bool,
    /// Remove the discrete mean (default true).
    #[serde(default = "default_true")]
    pub zero_mean: bool,
    /// Profile terms.
    pub terms: Vec<ProfileTerm>,
}

impl StateSpec {
    /// State built from terms with default flags.
    pub fn from_terms(terms: Vec<ProfileTerm>) -> Self {
        Self {
            grid: None,
            majorana: false,
            zero_mean: true,
            terms,
        }
    }

    /// Parses a JSON document.
    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Reads a JSON state file.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    /// Radius of the smallest origin-centered ball containing every term.
    pub fn support_radius(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.center().iter().map(|v| v * v).sum::<f64>().sqrt() + t.radius())
            .fold(0.0, f64::max)
    }

    /// Families used by the terms, in order of first appearance.
    pub fn families(&self) -> Vec<ProfileFamily> {
        let mut out = Vec::new();
        for t in &self.terms {
            if !out.contains(&t.family()) {
                out.push(t.family());
            }
        }
        out
    }
}

/// Samples a Weyl state on the grid.
pub fn synthesize_cauchy(grid: &GridSpec, spec: &StateSpec) -> Result<WeylCauchyData> {
    synthesize_components::<2>(grid, spec)
}

/// Samples a `D`-component state on the grid (`D` must match the spinor
/// length of every term).
pub fn synthesize_components<const D: usize>(grid: &GridSpec, spec: &StateSpec) -> Result<CauchyData<D>> {
    for t in &spec.terms {
        t.validate(grid, D)?;
    }
    let radius = spec.support_radius();
    let spinors: Vec<Vec<C64>> = spec.terms.iter().map(|t| t.spinor()).collect();
    let nodes: Vec<[C64; D]> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let x = grid.node(idx);
            let mut v = [C64::new(0.0, 0.0); D];
            for (t, s) in spec.terms.iter().zip(&spinors) {
                let b = t.scalar_at(&x);
                if b != 0.0 {
                    for c in 0..D {
                        v[c] += s[c] * b;
                    }
                }
            }
            v
        })
        .collect();
    let mut values = super::fields::unzip(&nodes);
    if spec.zero_mean {
        if let Some(first) = spec.terms.first() {
            remove_mean(grid, first, &mut values);
        }
    }
    CauchyData::new(*grid, values, radius)
}

/// Reference profile used for mean removal: the first term's profile times
/// `(1 − s²)²`.
fn reference_profile(term: &ProfileTerm, x: &[f64; 3]) -> f64 {
    let c = term.center();
    let r = term.radius();
    let s2: f64 = (0..3).map(|a| (x[a] - c[a]).powi(2)).sum::<f64>() / (r * r);
    if s2 >= 1.0 {
        0.0
    } else {
        term.scalar_at(x) * (1.0 - s2).powi(2)
    }
}

fn remove_mean<const D: usize>(grid: &GridSpec, first: &ProfileTerm, values: &mut [Vec<C64>; D]) {
    let reference: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|idx| reference_profile(first, &grid.node(idx)))
        .collect();
    let ref_sum: f64 = {
        let mut acc = crate::numerics::KahanSum::new();
        reference.iter().for_each(|&v| acc.add(v));
        acc.value()
    };
    if ref_sum == 0.0 {
        return;
    }
    for comp in values.iter_mut() {
        let mut acc = KahanSumC::new();
        comp.iter().for_each(|&v| acc.add(v));
        let coeff = acc.value() / ref_sum;
        for (v, r) in comp.iter_mut().zip(&reference) {
            *v -= coeff * r;
        }
    }
}
