//! Relative entropy `S(ω_Ψ‖ω)` of a one-particle Majorana state localized in
//! the unit ball, computed by three independent routes, and the energy
//! density `t(x) = ⟨Ψ, T₀₀(0,x)Ψ⟩` that enters the third.
//!
//! * Generator route: `S = −2 Im⟨Ψ, K_DΨ⟩` with the Dirac product and the
//!   position-space generator.
//! * Fourier route: the momentum integral
//!
//!   ```text
//!   S = (4π²)^{-1} ∫ dp/|p| [Ψ̂†|p|²(1+∇²)Ψ̂ + Ψ̂†p·∇Ψ̂ + i p_j Ψ̂†σ^{jk}∂_kΨ̂],
//!   ```
//!
//!   with momentum derivatives obtained as transforms of `−i x_k Ψ` and
//!   `−|x|²Ψ`.
//! * Energy-density route: `S = (4π²)^{-1} ∫ (1−r²) t(x) dx`, with `t` built
//!   from the two spectral projections
//!   `ψ± = F⁻¹[½(1 ± p̂_kγ⁰γᵏ)Ψ̂]` as
//!   `t = i Σ_k Σ_± ±[(∂_kψ±)†γ⁰γᵏψ± − ψ±†γ⁰γᵏ∂_kψ±]`.
//!
//! The energy density is normalized so that `∫ t = 2(2π)^{-3} ∫ |p||Ψ̂|²`.
//! With that normalization the generator and Fourier routes agree with
//! `π ∫ (1−r²) t`, so the energy route with the `(4π²)^{-1}` prefactor
//! differs from them by the constant factor `4π³`. The report carries the
//! literal value, the `(8π²)^{-1}` variant, and the observed ratio.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dirac_majorana::{inner_dirac, k_dirac, DiracCauchyData, MajoranaState};
use crate::error::{Error, Result};
use crate::numerics::{fmt17, ordered_max, ordered_sum, ordered_sum_c};
use crate::spinor_algebra::{alpha_dot_apply, dirac_matrices, Spinor4};
use crate::wave_space::{inverse_transform, partial_derivative, transform, GridSpec, SpectralData};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Allowed deviation of `‖Ψ‖` from 1.
pub const NORM_TOLERANCE: f64 = 1e-8;
/// Largest admissible relative mass outside the unit ball.
pub const LEAK_TOLERANCE: f64 = 1e-8;

/// Checks the hypotheses shared by every route: unit norm and support in the
/// closed unit ball. Returns `(norm, leak)`.
pub fn check_admissible(state: &MajoranaState) -> Result<(f64, f64)> {
    let norm = state.norm();
    if !((norm - 1.0).abs() <= NORM_TOLERANCE) {
        return Err(Error::NotNormalized { norm });
    }
    let leak = state.dirac().support_leak(1.0);
    if !(leak < LEAK_TOLERANCE) {
        return Err(Error::SupportViolation {
            leak,
            radius: state.dirac().support_radius(),
        });
    }
    Ok((norm, leak))
}

/// `S = −2 Im⟨Ψ, K_DΨ⟩`.
pub fn entropy_via_generator(state: &MajoranaState) -> Result<f64> {
    check_admissible(state)?;
    Ok(generator_value(state.dirac()))
}

fn generator_value(psi: &DiracCauchyData) -> f64 {
    let k = k_dirac(psi);
    let v = inner_dirac(psi, &k).expect("same grid by construction");
    -2.0 * v.im
}

/// Value of the Fourier-route integral with its imaginary part, which
/// vanishes in the continuum and serves as a diagnostic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierEntropy {
    /// Real part: the entropy.
    pub value: f64,
    /// Imaginary part of the same quadrature.
    pub imaginary: f64,
}

/// The momentum-space formula for `S`, on the momentum grid with the zero
/// mode dropped.
pub fn entropy_fourier(state: &MajoranaState) -> Result<FourierEntropy> {
    check_admissible(state)?;
    Ok(fourier_value(state.dirac()))
}

fn fourier_value(psi: &DiracCauchyData) -> FourierEntropy {
    let grid = *psi.grid();
    let spec = transform(psi);
    let first: Vec<SpectralData<4>> = (0..3)
        .map(|a| {
            transform(&psi.map_nodes(psi.support_radius(), |idx, v| {
                let x = grid.node(idx)[a];
                v.map(|z| z * C64::new(0.0, -x))
            }))
        })
        .collect();
    let second = transform(&psi.map_nodes(psi.support_radius(), |idx, v| {
        let r2 = grid.node_radius_sq(idx);
        v.map(|z| z * -r2)
    }));
    let sigma = &dirac_matrices().sigma;
    let sum = ordered_sum_c(grid.len(), |idx| {
        let p = grid.momentum(idx);
        let p2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        if p2 == 0.0 {
            return ZERO;
        }
        let f = spec.at(idx);
        let lap = second.at(idx);
        let grad: [Spinor4; 3] = std::array::from_fn(|a| first[a].at(idx));
        let mut acc = ZERO;
        for c in 0..4 {
            acc += f[c].conj() * (f[c] + lap[c]) * p2;
        }
        for j in 0..3 {
            acc += dot4(&f, &grad[j]) * p[j];
        }
        for j in 0..3 {
            for k in 0..3 {
                if j == k {
                    continue;
                }
                let s = sigma[j][k].apply(&grad[k]);
                acc += C64::new(0.0, p[j]) * dot4(&f, &s);
            }
        }
        acc / p2.sqrt()
    });
    let total = sum * grid.momentum_step().powi(3) / (4.0 * PI * PI);
    FourierEntropy {
        value: total.re,
        imaginary: total.im,
    }
}

/// `u†v` for four-spinors.
#[inline]
fn dot4(u: &Spinor4, v: &Spinor4) -> C64 {
    (0..4).map(|c| u[c].conj() * v[c]).sum()
}

/// Grid samples of `t(x) = ⟨Ψ, T₀₀(0,x)Ψ⟩`, with the imaginary part of the
/// computed bilinear kept as a diagnostic.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyDensityProfile {
    grid: GridSpec,
    values: Vec<f64>,
    imaginary: Vec<f64>,
}

impl EnergyDensityProfile {
    /// Sampling grid.
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// `t` at every grid node.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `∫ t dx` on the grid.
    pub fn total(&self) -> f64 {
        ordered_sum(self.values.len(), |i| self.values[i]) * self.grid.cell_volume()
    }

    /// `∫ (1 − r²) t dx` on the grid.
    pub fn weighted_total(&self) -> f64 {
        let g = self.grid;
        ordered_sum(self.values.len(), |i| (1.0 - g.node_radius_sq(i)) * self.values[i]) * g.cell_volume()
    }

    /// `max |t|`.
    pub fn max_abs(&self) -> f64 {
        ordered_max(self.values.len(), |i| self.values[i].abs())
    }

    /// `max |t|` over nodes with `|x| > radius`, relative to `max |t|`.
    pub fn exterior_ratio(&self, radius: f64) -> f64 {
        let m = self.max_abs();
        if m == 0.0 {
            return 0.0;
        }
        let r2 = radius * radius;
        let g = self.grid;
        ordered_max(self.values.len(), |i| {
            if g.node_radius_sq(i) > r2 {
                self.values[i].abs()
            } else {
                0.0
            }
        }) / m
    }

    /// `max |Im t| / max |t|` for the computed bilinear.
    pub fn imaginary_ratio(&self) -> f64 {
        let m = self.max_abs();
        if m == 0.0 {
            return 0.0;
        }
        ordered_max(self.imaginary.len(), |i| self.imaginary[i].abs()) / m
    }

    /// CSV dump with header `x1,x2,x3,t` and 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x1,x2,x3,t\n");
        for (i, t) in self.values.iter().enumerate() {
            let x = self.grid.node(i);
            out.push_str(&format!(
                "{},{},{},{}\n",
                fmt17(x[0]),
                fmt17(x[1]),
                fmt17(x[2]),
                fmt17(*t)
            ));
        }
        out
    }
}

/// The energy density of an admissible state.
pub fn energy_density_profile(state: &MajoranaState) -> Result<EnergyDensityProfile> {
    check_admissible(state)?;
    Ok(energy_density_unchecked(state.dirac()))
}

/// The energy density of arbitrary four-component data, without the
/// normalization and support checks.
///
/// With `P± = ½(1 ± p̂_kγ⁰γᵏ)` (both `½` at `p = 0`) and `ψ± = F⁻¹[P±Ψ̂]`,
/// `t = i Σ_k Σ_± ±[(∂_kψ±)†γ⁰γᵏψ± − ψ±†γ⁰γᵏ∂_kψ±]`, derivatives spectral.
pub fn energy_density_unchecked(psi: &DiracCauchyData) -> EnergyDensityProfile {
    let grid = *psi.grid();
    let spec = transform(psi);
    let project = |sign: f64| {
        let s = spec.map_modes(|idx, v| {
            let p = grid.momentum(idx);
            let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            if n == 0.0 {
                return v.map(|z| z * 0.5);
            }
            let unit = [p[0] / n, p[1] / n, p[2] / n];
            let a = alpha_dot_apply(&unit, &v);
            std::array::from_fn(|c| (v[c] + a[c] * sign) * 0.5)
        });
        inverse_transform(&s, psi.support_radius())
    };
    let parts: Vec<(f64, DiracCauchyData, Vec<DiracCauchyData>)> = [1.0, -1.0]
        .into_iter()
        .map(|sign| {
            let f = project(sign);
            let d = (0..3).map(|a| partial_derivative(&f, a)).collect();
            (sign, f, d)
        })
        .collect();
    let alpha = &dirac_matrices().alpha;
    let nodes: Vec<C64> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let mut acc = ZERO;
            for (sign, f, d) in &parts {
                let v = f.at(idx);
                for k in 0..3 {
                    let dv = d[k].at(idx);
                    let left = dot4(&dv, &alpha[k].apply(&v));
                    let right = dot4(&v, &alpha[k].apply(&dv));
                    acc += (left - right) * *sign;
                }
            }
            acc * C64::i()
        })
        .collect();
    EnergyDensityProfile {
        grid,
        values: nodes.iter().map(|z| z.re).collect(),
        imaginary: nodes.iter().map(|z| z.im).collect(),
    }
}

/// The double momentum integral for `t(x)` at one point, summed directly
/// over all pairs of nonzero grid momenta:
///
/// ```text
/// t(x) = (2(2π)⁶)^{-1} Σ_{p,q} e^{i(q−p)·x} {(|p|+|q|)Ψ̂(p)†Ψ̂(q)
///        + (1/|p| + 1/|q|) Ψ̂(p)†[p·q + i(p∧q)·Σ]Ψ̂(q)} Δp⁶.
/// ```
///
/// The cost is `O(N⁶)` per point, so this is an oracle for coarse grids.
pub fn energy_density_double_sum(psi: &DiracCauchyData, x: &[f64; 3]) -> C64 {
    let grid = *psi.grid();
    let spec = transform(psi);
    let spin = &dirac_matrices().spin;
    let modes: Vec<([f64; 3], f64, Spinor4, [Spinor4; 3], C64)> = (0..grid.len())
        .filter_map(|idx| {
            let p = grid.momentum(idx);
            let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            if n == 0.0 {
                return None;
            }
            let f = spec.at(idx);
            let sf = std::array::from_fn(|h| spin[h].apply(&f));
            let phase = C64::from_polar(1.0, p[0] * x[0] + p[1] * x[1] + p[2] * x[2]);
            Some((p, n, f, sf, phase))
        })
        .collect();
    let sum = ordered_sum_c(modes.len(), |a| {
        let (p, pn, fp, _, ep) = &modes[a];
        let mut acc = ZERO;
        for (q, qn, fq, sq, eq) in &modes {
            let pq = p[0] * q[0] + p[1] * q[1] + p[2] * q[2];
            let cross = [
                p[1] * q[2] - p[2] * q[1],
                p[2] * q[0] - p[0] * q[2],
                p[0] * q[1] - p[1] * q[0],
            ];
            let mut spin_term = ZERO;
            for h in 0..3 {
                spin_term += dot4(fp, &sq[h]) * cross[h];
            }
            let plain = dot4(fp, fq);
            let bracket = plain * (pn + qn) + (plain * pq + C64::i() * spin_term) * (1.0 / pn + 1.0 / qn);
            acc += bracket * *eq;
        }
        acc * ep.conj()
    });
    let dp3 = grid.momentum_step().powi(3);
    sum * dp3 * dp3 / (2.0 * (2.0 * PI).powi(6))
}

/// `2(2π)^{-3} Σ_p |p| |Ψ̂(p)|² Δp³`, the `p = q` diagonal of the double
/// integral and the exact value of `∫ t`.
pub fn spectral_energy(psi: &DiracCauchyData) -> f64 {
    let grid = *psi.grid();
    let spec = transform(psi);
    let sum = ordered_sum(grid.len(), |idx| {
        let p = grid.momentum(idx);
        let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        n * spec.at(idx).iter().map(|z| z.norm_sqr()).sum::<f64>()
    });
    2.0 * sum * grid.spectral_weight()
}

/// `S = (4π²)^{-1} ∫ (1−r²) t(x) dx`.
pub fn entropy_energy_density(state: &MajoranaState) -> Result<f64> {
    Ok(energy_density_profile(state)?.weighted_total() / (4.0 * PI * PI))
}

/// `|a − b| / max(|a|, |b|)` (0 when both vanish).
pub fn relative_deviation(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// All three routes and their diagnostics for one state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    /// `−2 Im⟨Ψ, K_DΨ⟩`.
    pub s_generator: f64,
    /// Momentum-space quadrature.
    pub s_fourier: f64,
    /// Imaginary part of the momentum-space quadrature.
    pub s_fourier_imaginary: f64,
    /// `(4π²)^{-1} ∫ (1−r²) t`.
    pub s_energy: f64,
    /// `(8π²)^{-1} ∫ (1−r²) t`, the alternative prefactor.
    pub s_energy_half_prefactor: f64,
    /// `∫ (1−r²) t`.
    pub weighted_energy: f64,
    /// `s_generator / ∫ (1−r²) t`, the prefactor the data select.
    pub observed_prefactor: f64,
    /// `∫ t` on the grid.
    pub energy_integral: f64,
    /// `2(2π)^{-3} ∫ |p||Ψ̂|²`.
    pub spectral_energy: f64,
    /// Relative deviation of the two energies.
    pub energy_deviation: f64,
    /// `max |t|` outside the unit ball relative to `max |t|`.
    pub exterior_ratio: f64,
    /// `max |Im t| / max |t|`.
    pub imaginary_ratio: f64,
    /// `‖Ψ‖`.
    pub norm_check: f64,
    /// Relative mass outside the unit ball.
    pub support_leak: f64,
    /// Relative deviation generator vs Fourier.
    pub dev_generator_fourier: f64,
    /// Relative deviation generator vs energy density.
    pub dev_generator_energy: f64,
    /// Relative deviation Fourier vs energy density.
    pub dev_fourier_energy: f64,
}

/// Runs every route on an admissible state.
pub fn entropy_report(state: &MajoranaState) -> Result<EntropyReport> {
    let (norm, leak) = check_admissible(state)?;
    let psi = state.dirac();
    let ((s_generator, fourier), profile) = rayon::join(
        || rayon::join(|| generator_value(psi), || fourier_value(psi)),
        || energy_density_unchecked(psi),
    );
    let weighted = profile.weighted_total();
    let s_energy = weighted / (4.0 * PI * PI);
    let energy_integral = profile.total();
    let spectral = spectral_energy(psi);
    Ok(EntropyReport {
        s_generator,
        s_fourier: fourier.value,
        s_fourier_imaginary: fourier.imaginary,
        s_energy,
        s_energy_half_prefactor: weighted / (8.0 * PI * PI),
        weighted_energy: weighted,
        observed_prefactor: if weighted != 0.0 {
            s_generator / weighted
        } else {
            f64::NAN
        },
        energy_integral,
        spectral_energy: spectral,
        energy_deviation: relative_deviation(energy_integral, spectral),
        exterior_ratio: profile.exterior_ratio(psi.support_radius().min(1.0)),
        imaginary_ratio: profile.imaginary_ratio(),
        norm_check: norm,
        support_leak: leak,
        dev_generator_fourier: relative_deviation(s_generator, fourier.value),
        dev_generator_energy: relative_deviation(s_generator, s_energy),
        dev_fourier_energy: relative_deviation(fourier.value, s_energy),
    })
}
