//! Four-component waves: Dirac data assembled from a right-handed and a
//! left-handed Weyl component, the Dirac inner product and complex
//! structure, the Majorana subspace and the Dirac form of the modular
//! generator.
//!
//! The block layout is `(right, left)` and all matrices are the chiral
//! representation of [`crate::spinor_algebra::DiracMatrices`]:
//!
//! ```text
//! γ⁰ = [[0, −1], [−1, 0]],  γᵏ = [[0, σ_k], [−σ_k, 0]],  γ⁰γᵏ = diag(σ_k, −σ_k),
//! C  = diag(−σ₂, σ₂).
//! ```
//!
//! The massless Dirac equation `iγ^μ∂_μΨ = 0` is `∂₀Ψ + γ⁰γᵏ∂_kΨ = 0`, so the
//! upper block obeys the right-handed and the lower block the left-handed
//! Weyl equation. In the inner product the on-shell weight is
//! `γ⁰(±|p|γ⁰ + p_kγᵏ) = ±|p| + p_k γ⁰γᵏ`, with `p_k` the Cartesian momentum
//! components; on each block it reduces to the chiral Weyl weight.
//!
//! A Majorana wave satisfies `Ψ = γ⁰C Ψ̄` and is the image of a Weyl wave
//! under `Φ ↦ (Φ, σ₂Φ̄)/√2`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{ordered_sum, ordered_sum_c};
use crate::spinor_algebra::{alpha_dot_apply, dirac_matrices, Matrix4C, Spinor4};
use crate::wave_space::{
    check_containment, direction, evolve_blocks, inverse_transform, partial_derivative, reflect, transform, unzip,
    CauchyData, SpectralData, WeylCauchyData,
};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Cauchy data of a Dirac wave, components ordered `(right, left)`.
pub type DiracCauchyData = CauchyData<4>;
/// Spectrum of Dirac Cauchy data.
pub type DiracSpectrum = SpectralData<4>;

/// Stacks a right-handed and a left-handed Weyl component into Dirac data.
/// The support radius is the larger of the two.
pub fn assemble(right: &WeylCauchyData, left: &WeylCauchyData) -> Result<DiracCauchyData> {
    if right.grid() != left.grid() {
        return Err(Error::GridMismatch);
    }
    let [a, b] = right.values().clone();
    let [c, d] = left.values().clone();
    DiracCauchyData::new(
        *right.grid(),
        [a, b, c, d],
        right.support_radius().max(left.support_radius()),
    )
}

/// Upper (right-handed) block of Dirac data.
pub fn right_block(field: &DiracCauchyData) -> WeylCauchyData {
    block(field, 0)
}

/// Lower (left-handed) block of Dirac data.
pub fn left_block(field: &DiracCauchyData) -> WeylCauchyData {
    block(field, 2)
}

fn block(field: &DiracCauchyData, first: usize) -> WeylCauchyData {
    WeylCauchyData::from_parts(
        *field.grid(),
        [field.component(first).to_vec(), field.component(first + 1).to_vec()],
        field.support_radius(),
    )
}

/// Parity-reflected Weyl data `x ↦ Φ₀(−x)`. Reflecting a right-handed wave
/// gives a left-handed one, which is how the lower block is usually fed.
pub fn parity_reflect(field: &WeylCauchyData) -> WeylCauchyData {
    reflect(field)
}

/// Cauchy data at time `t` of the solution of `iγ^μ∂_μΨ = 0`: the upper block
/// evolves with `e^{−itσ·p}`, the lower with `e^{+itσ·p}`. Requires
/// `|t| + R ≤ L`.
pub fn evolve_dirac(field: &DiracCauchyData, t: f64) -> Result<DiracCauchyData> {
    evolve_blocks(field, t, &[1.0, -1.0])
}

/// Relative residual of the Dirac equation for the evolved wave at time `t`,
///
/// ```text
/// ‖γ⁰(Ψ(t+Δt) − Ψ(t−Δt))/(2Δt) + γᵏ∂_kΨ(t)‖ / ‖γᵏ∂_kΨ(t)‖,
/// ```
///
/// with a centred difference in time and spectral derivatives in space.
/// Requires `|t| + Δt + R ≤ L` and `Δt > 0`.
pub fn dirac_residual(field: &DiracCauchyData, t: f64, dt: f64) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(Error::InvalidInput(format!("time step must be positive, got {dt}")));
    }
    check_containment(field.grid(), field.support_radius(), t.abs() + dt)?;
    let ahead = evolve_dirac(field, t + dt)?;
    let behind = evolve_dirac(field, t - dt)?;
    let now = evolve_dirac(field, t)?;
    let grads: Vec<DiracCauchyData> = (0..3).map(|a| partial_derivative(&now, a)).collect();
    let gamma = &dirac_matrices().gamma;
    let grid = *field.grid();
    let spatial = |idx: usize| {
        let mut acc = [ZERO; 4];
        for (a, g) in grads.iter().enumerate() {
            add_into(&mut acc, &gamma[a + 1].apply(&g.at(idx)));
        }
        acc
    };
    let scale = 0.5 / dt;
    let num = ordered_sum(grid.len(), |idx| {
        let (a, b) = (ahead.at(idx), behind.at(idx));
        let dt_part: Spinor4 = std::array::from_fn(|c| (a[c] - b[c]) * scale);
        let mut r = gamma[0].apply(&dt_part);
        add_into(&mut r, &spatial(idx));
        norm_sq4(&r)
    });
    let den = ordered_sum(grid.len(), |idx| norm_sq4(&spatial(idx)));
    Ok(if den > 0.0 { (num / den).sqrt() } else { num.sqrt() })
}

#[inline]
fn add_into(acc: &mut Spinor4, v: &Spinor4) {
    for c in 0..4 {
        acc[c] += v[c];
    }
}

#[inline]
fn norm_sq4(v: &Spinor4) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// `γ⁰C`, the matrix of the Majorana reality condition `Ψ = γ⁰C Ψ̄`.
pub fn majorana_matrix() -> Matrix4C {
    let d = dirac_matrices();
    d.gamma[0] * d.charge_conjugation
}

/// `γ⁰C Ψ̄` sampled node by node.
pub fn charge_conjugate(field: &DiracCauchyData) -> DiracCauchyData {
    let m = majorana_matrix();
    field.map_nodes(field.support_radius(), |_, v| {
        m.apply(&[v[0].conj(), v[1].conj(), v[2].conj(), v[3].conj()])
    })
}

/// `‖Ψ₀ − γ⁰C Ψ̄₀‖ / ‖Ψ₀‖` in the sampled L² norm (0 for the zero field).
pub fn majorana_defect(field: &DiracCauchyData) -> f64 {
    let norm = field.l2_norm();
    if norm == 0.0 {
        return 0.0;
    }
    let m = majorana_matrix();
    let grid = field.grid();
    let diff = ordered_sum(grid.len(), |idx| {
        let v = field.at(idx);
        let w = m.apply(&[v[0].conj(), v[1].conj(), v[2].conj(), v[3].conj()]);
        (0..4).map(|c| (v[c] - w[c]).norm_sqr()).sum::<f64>()
    }) * grid.cell_volume();
    diff.sqrt() / norm.max(f64::MIN_POSITIVE)
}

/// A Majorana wave together with the Weyl wave it was built from.
#[derive(Clone, Debug, PartialEq)]
pub struct MajoranaState {
    dirac: DiracCauchyData,
    weyl: WeylCauchyData,
}

impl MajoranaState {
    /// The four-component data `(Φ, σ₂Φ̄)/√2`.
    pub fn dirac(&self) -> &DiracCauchyData {
        &self.dirac
    }

    /// The generating Weyl wave `Φ`.
    pub fn weyl(&self) -> &WeylCauchyData {
        &self.weyl
    }

    /// Dirac norm, equal to the wave norm of the generating Weyl component.
    pub fn norm(&self) -> f64 {
        inner_dirac(&self.dirac, &self.dirac)
            .map(|z| z.re.max(0.0).sqrt())
            .unwrap_or(f64::NAN)
    }

    /// Multiplies by a real factor (which keeps the Majorana condition).
    pub fn scaled(&self, factor: f64) -> Self {
        let f = C64::new(factor, 0.0);
        Self {
            dirac: self.dirac.scaled(f),
            weyl: self.weyl.scaled(f),
        }
    }

    /// The unit-norm multiple of this state and the factor applied.
    pub fn normalized(&self) -> Result<(Self, f64)> {
        let norm = self.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        let factor = 1.0 / norm;
        Ok((self.scaled(factor), factor))
    }

    /// Recovers a Majorana state from four-component data, checking the
    /// reality condition to the given tolerance.
    pub fn from_dirac(dirac: DiracCauchyData, tolerance: f64) -> Result<Self> {
        let defect = majorana_defect(&dirac);
        if defect > tolerance {
            return Err(Error::InvalidInput(format!(
                "data violate the Majorana condition (defect {defect:e})"
            )));
        }
        let weyl = right_block(&dirac).scaled(C64::new(std::f64::consts::SQRT_2, 0.0));
        Ok(Self { dirac, weyl })
    }
}

/// The Majorana embedding `Φ ↦ (Φ, σ₂Φ̄)/√2` of a Weyl wave.
pub fn majorana_embed(field: &WeylCauchyData) -> MajoranaState {
    let s = FRAC_1_SQRT_2;
    let grid = *field.grid();
    let nodes: Vec<Spinor4> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let [a, b] = field.at(idx);
            // σ₂ (ā, b̄) = (−i b̄, i ā)
            let lower = [C64::new(0.0, -1.0) * b.conj(), C64::new(0.0, 1.0) * a.conj()];
            [a * s, b * s, lower[0] * s, lower[1] * s]
        })
        .collect();
    MajoranaState {
        dirac: DiracCauchyData::from_parts(grid, unzip(&nodes), field.support_radius()),
        weyl: field.clone(),
    }
}

/// Dirac inner product of two spectra (zero mode dropped):
/// `(2π)^{-3} Σ_p (2|p|)^{-1} [Ψ̂†(|p| + α·p)Φ̂ + Φ̂†(|p| − α·p)Ψ̂] Δp³`.
pub fn inner_dirac_spectral(psi: &DiracSpectrum, phi: &DiracSpectrum) -> Result<C64> {
    if psi.grid() != phi.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = *psi.grid();
    let sum = ordered_sum_c(grid.len(), |idx| {
        let p = grid.momentum(idx);
        let pn = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        if pn == 0.0 {
            return ZERO;
        }
        let a = psi.at(idx);
        let b = phi.at(idx);
        let ab = alpha_dot_apply(&p, &b);
        let aa = alpha_dot_apply(&p, &a);
        let mut first = ZERO;
        let mut second = ZERO;
        for c in 0..4 {
            first += a[c].conj() * (b[c] * pn + ab[c]);
            second += b[c].conj() * (a[c] * -pn + aa[c]);
        }
        (first - second) / (2.0 * pn)
    });
    Ok(sum * grid.spectral_weight())
}

/// Dirac inner product of two Cauchy data on the same grid.
pub fn inner_dirac(psi: &DiracCauchyData, phi: &DiracCauchyData) -> Result<C64> {
    if psi.grid() != phi.grid() {
        return Err(Error::GridMismatch);
    }
    inner_dirac_spectral(&transform(psi), &transform(phi))
}

/// Complex structure of the Dirac wave space: spectral multiplication by
/// `i p̂_k γ⁰γᵏ`, with the zero mode set to 0. The declared support radius of
/// the result is the box half-width.
pub fn apply_iota_dirac(field: &DiracCauchyData) -> DiracCauchyData {
    let spec = transform(field);
    let grid = *spec.grid();
    let out = spec.map_modes(|idx, v| match direction(&grid.momentum(idx)) {
        None => [ZERO; 4],
        Some(n) => alpha_dot_apply(&n, &v).map(|z| z * C64::i()),
    });
    inverse_transform(&out, grid.half_width())
}

/// The Dirac modular generator
/// `(K_DΨ)₀(x) = −π[(1−r²)∂_k − x_k] γ⁰γᵏ Ψ₀(x)` with spectral derivatives.
/// The declared support radius of the result is the box half-width.
pub fn k_dirac(field: &DiracCauchyData) -> DiracCauchyData {
    let grid = *field.grid();
    let grads: Vec<DiracCauchyData> = (0..3).map(|a| partial_derivative(field, a)).collect();
    let nodes: Vec<Spinor4> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let x = grid.node(idx);
            let weight = 1.0 - grid.node_radius_sq(idx);
            let mut acc = [ZERO; 4];
            for (a, g) in grads.iter().enumerate() {
                let mut e = [0.0; 3];
                e[a] = 1.0;
                add_into(&mut acc, &alpha_dot_apply(&e, &g.at(idx)));
            }
            let xa = alpha_dot_apply(&x, &field.at(idx));
            std::array::from_fn(|c| -PI * (acc[c] * weight - xa[c]))
        })
        .collect();
    DiracCauchyData::from_parts(grid, unzip(&nodes), grid.half_width())
}

#[cfg(test)]
mod tests;
