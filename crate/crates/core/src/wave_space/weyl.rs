//! Operations on right-handed Weyl waves: spectral evolution, evaluation at
//! arbitrary spacetime points, the complex structure `ι`, the wave inner
//! product, and the unitary identification with `L² ⊕ L²` in momentum space.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::fields::{
    inverse_transform, partial_derivative, transform, unzip, CauchyData, SpectralData, WeylCauchyData, WeylSpectrum,
};
use super::grid::GridSpec;
use crate::error::{Error, Result};
use crate::numerics::{ordered_sum, ordered_sum_c};
use crate::spinor_algebra::{nu0, onshell_matrices, polar_angles, FourVector, Matrix2C, Spinor2};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Slack allowed in the `|t| + R ≤ L` containment checks.
const CONTAINMENT_SLACK: f64 = 1e-12;

/// Unit momentum direction, or `None` at `p = 0`.
#[inline]
pub(crate) fn direction(p: &[f64; 3]) -> Option<[f64; 3]> {
    let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    if n == 0.0 {
        None
    } else {
        Some([p[0] / n, p[1] / n, p[2] / n])
    }
}

/// `(n·σ) v` for a real 3-vector `n`.
#[inline]
pub(crate) fn sigma_dot_apply(n: &[f64; 3], v: &Spinor2) -> Spinor2 {
    let [a, b] = *v;
    let minus = C64::new(n[0], -n[1]);
    let plus = C64::new(n[0], n[1]);
    [a * n[2] + b * minus, a * plus - b * n[2]]
}

/// Positive-helicity projection `½(1 + p̂·σ) v`.
#[inline]
pub(crate) fn helicity_plus(n: &[f64; 3], v: &Spinor2) -> Spinor2 {
    let s = sigma_dot_apply(n, v);
    [(v[0] + s[0]) * 0.5, (v[1] + s[1]) * 0.5]
}

/// Spectral propagator of a chiral Weyl equation applied to one mode:
/// `[cos(|p|t) − iχ sin(|p|t) p̂·σ] v` with `χ = +1` (right-handed) or `−1`
/// (left-handed). At `p = 0` the propagator is the identity.
#[inline]
pub(crate) fn propagate_mode(p: &[f64; 3], t: f64, chirality: f64, v: &Spinor2) -> Spinor2 {
    match direction(p) {
        None => *v,
        Some(n) => {
            let pn = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            let (s, c) = (pn * t).sin_cos();
            let sv = sigma_dot_apply(&n, v);
            let f = C64::new(0.0, -chirality * s);
            [v[0] * c + f * sv[0], v[1] * c + f * sv[1]]
        }
    }
}

/// Evolves a chiral pair of spectral components in place.
pub(crate) fn evolve_pair_spectrum(grid: &GridSpec, comps: &mut [Vec<C64>], t: f64, chirality: f64) {
    let (a, b) = comps.split_at_mut(1);
    a[0].par_iter_mut()
        .zip(b[0].par_iter_mut())
        .enumerate()
        .for_each(|(idx, (x, y))| {
            let out = propagate_mode(&grid.momentum(idx), t, chirality, &[*x, *y]);
            *x = out[0];
            *y = out[1];
        });
}

pub(crate) fn check_containment(grid: &GridSpec, support_radius: f64, t: f64) -> Result<()> {
    let needed = t.abs() + support_radius;
    if needed > grid.half_width() + CONTAINMENT_SLACK {
        return Err(Error::SupportOverflow {
            needed,
            available: grid.half_width(),
        });
    }
    Ok(())
}

/// Evolves a field made of consecutive chiral pairs: pair `b` (components
/// `2b, 2b+1`) uses `chiralities[b]`. Requires `|t| + R ≤ L`.
pub(crate) fn evolve_blocks<const D: usize>(
    field: &CauchyData<D>,
    t: f64,
    chiralities: &[f64],
) -> Result<CauchyData<D>> {
    check_containment(field.grid(), field.support_radius(), t)?;
    let spec = transform(field);
    let grid = *spec.grid();
    let mut comps = spec.values().clone();
    for (block, &chi) in comps.chunks_mut(2).zip(chiralities) {
        evolve_pair_spectrum(&grid, block, t, chi);
    }
    Ok(inverse_transform(
        &SpectralData::from_parts(grid, comps),
        field.support_radius() + t.abs(),
    ))
}

/// Cauchy data of the solution at time `t` of `(∂₀ + σ·∇)Φ = 0`.
///
/// Requires `|t| + R ≤ L`; the result has support radius `R + |t|`.
pub fn evolve(field: &WeylCauchyData, t: f64) -> Result<WeylCauchyData> {
    evolve_blocks(field, t, &[1.0])
}

/// Relative residual of the Weyl equation for the evolved wave at time `t`,
///
/// ```text
/// ‖(Φ(t+Δt) − Φ(t−Δt))/(2Δt) + σ·∇Φ(t)‖ / ‖σ·∇Φ(t)‖,
/// ```
///
/// with a centred difference in time and spectral derivatives in space. The
/// three time slices come from the spectral propagator, so the residual
/// measures the `O(Δt²)` consistency error of the difference quotient.
/// Requires `|t| + Δt + R ≤ L` and `Δt > 0`.
pub fn weyl_residual(field: &WeylCauchyData, t: f64, dt: f64) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(Error::InvalidInput(format!("time step must be positive, got {dt}")));
    }
    check_containment(field.grid(), field.support_radius(), t.abs() + dt)?;
    let ahead = evolve(field, t + dt)?;
    let behind = evolve(field, t - dt)?;
    let now = evolve(field, t)?;
    let grads: Vec<WeylCauchyData> = (0..3).map(|a| partial_derivative(&now, a)).collect();
    let grid = *field.grid();
    let spatial = |idx: usize| {
        let mut acc = [ZERO; 2];
        for (a, g) in grads.iter().enumerate() {
            let mut e = [0.0; 3];
            e[a] = 1.0;
            let s = sigma_dot_apply(&e, &g.at(idx));
            acc[0] += s[0];
            acc[1] += s[1];
        }
        acc
    };
    let scale = 0.5 / dt;
    let num = ordered_sum(grid.len(), |idx| {
        let s = spatial(idx);
        let (a, b) = (ahead.at(idx), behind.at(idx));
        (0..2).map(|c| ((a[c] - b[c]) * scale + s[c]).norm_sqr()).sum::<f64>()
    });
    let den = ordered_sum(grid.len(), |idx| {
        let s = spatial(idx);
        s[0].norm_sqr() + s[1].norm_sqr()
    });
    Ok(if den > 0.0 { (num / den).sqrt() } else { num.sqrt() })
}

/// Precomputed helicity decomposition of a chiral wave for repeated
/// evaluation at arbitrary spacetime points by direct summation over the
/// momentum grid.
#[derive(Clone, Debug)]
pub struct WaveEvaluator {
    grid: GridSpec,
    support_radius: f64,
    chirality: f64,
    plus: [Vec<C64>; 2],
    minus: [Vec<C64>; 2],
    shell_of_mode: Vec<u32>,
    shell_radius: Vec<f64>,
}

impl WaveEvaluator {
    /// Evaluator for a right-handed Weyl wave.
    pub fn new(field: &WeylCauchyData) -> Self {
        Self::from_spectrum(&transform(field), field.support_radius(), 1.0)
    }

    /// Evaluator for a chiral pair given its spectrum (`chirality = ±1`).
    pub(crate) fn from_spectrum(spec: &WeylSpectrum, support_radius: f64, chirality: f64) -> Self {
        let grid = *spec.grid();
        let modes: Vec<(Spinor2, Spinor2)> = (0..grid.len())
            .into_par_iter()
            .map(|idx| {
                let v = spec.at(idx);
                match direction(&grid.momentum(idx)) {
                    None => (v, [ZERO, ZERO]),
                    Some(n) => {
                        let plus = helicity_plus(&n, &v);
                        (plus, [v[0] - plus[0], v[1] - plus[1]])
                    }
                }
            })
            .collect();
        let plus = unzip(&modes.iter().map(|m| m.0).collect::<Vec<_>>());
        let minus = unzip(&modes.iter().map(|m| m.1).collect::<Vec<_>>());
        let max_shell = 3 * (grid.points() / 2) * (grid.points() / 2);
        let dp = grid.momentum_step();
        let shell_radius = (0..=max_shell).map(|k2| (k2 as f64).sqrt() * dp).collect();
        let shell_of_mode = (0..grid.len()).map(|idx| grid.momentum_index_sq(idx) as u32).collect();
        Self {
            grid,
            support_radius,
            chirality,
            plus,
            minus,
            shell_of_mode,
            shell_radius,
        }
    }

    /// Sampling grid of the underlying data.
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Value of the wave at one spacetime point. Requires `|x0| + R ≤ L`.
    pub fn evaluate(&self, x: &FourVector) -> Result<Spinor2> {
        Ok(self.evaluate_many(std::slice::from_ref(x))?[0])
    }

    /// Values at many points. Points sharing a time coordinate share the
    /// propagated spectrum, so batches with few distinct times are cheap.
    pub fn evaluate_many(&self, points: &[FourVector]) -> Result<Vec<Spinor2>> {
        for p in points {
            check_containment(&self.grid, self.support_radius, p.x0)?;
        }
        Ok(self.evaluate_many_unchecked(points))
    }

    /// [`Self::evaluate_many`] without the containment check; used where the
    /// caller accepts the periodic image of the box.
    pub(crate) fn evaluate_many_unchecked(&self, points: &[FourVector]) -> Vec<Spinor2> {
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| points[a].x0.total_cmp(&points[b].x0).then(a.cmp(&b)));
        let mut out = vec![[ZERO, ZERO]; points.len()];
        let mut start = 0;
        while start < order.len() {
            let t = points[order[start]].x0;
            let mut end = start + 1;
            while end < order.len() && points[order[end]].x0.to_bits() == t.to_bits() {
                end += 1;
            }
            let propagated = self.propagated(t);
            let group = &order[start..end];
            let values: Vec<Spinor2> = group
                .par_iter()
                .map(|&i| propagated.sum_at(&self.grid, &points[i].x))
                .collect();
            for (&i, v) in group.iter().zip(values) {
                out[i] = v;
            }
            start = end;
        }
        out
    }

    fn propagated(&self, t: f64) -> SplitSpectrum {
        let phases: Vec<C64> = self
            .shell_radius
            .iter()
            .map(|&r| C64::from_polar(1.0, -self.chirality * r * t))
            .collect();
        let n = self.grid.len();
        let mut re = [vec![0.0; n], vec![0.0; n]];
        let mut im = [vec![0.0; n], vec![0.0; n]];
        for idx in 0..n {
            let e = phases[self.shell_of_mode[idx] as usize];
            for c in 0..2 {
                let v = e * self.plus[c][idx] + e.conj() * self.minus[c][idx];
                re[c][idx] = v.re;
                im[c][idx] = v.im;
            }
        }
        SplitSpectrum { re, im }
    }
}

/// Propagated spectrum stored as split real and imaginary arrays.
struct SplitSpectrum {
    re: [Vec<f64>; 2],
    im: [Vec<f64>; 2],
}

impl SplitSpectrum {
    fn sum_at(&self, grid: &GridSpec, x: &[f64; 3]) -> Spinor2 {
        let n = grid.points();
        let phase = |a: usize| -> (Vec<f64>, Vec<f64>) {
            (0..n)
                .map(|m| {
                    let (s, c) = (grid.axis_momentum(m) * x[a]).sin_cos();
                    (c, s)
                })
                .unzip()
        };
        let (e1r, e1i) = phase(0);
        let (e2r, e2i) = phase(1);
        let (e3r, e3i) = phase(2);
        let mut acc = [ZERO, ZERO];
        for a in 0..n {
            let w1 = C64::new(e1r[a], e1i[a]);
            let mut row = [ZERO, ZERO];
            for b in 0..n {
                let base = (a * n + b) * n;
                let s = dot_split(
                    &e3r,
                    &e3i,
                    &self.re[0][base..base + n],
                    &self.im[0][base..base + n],
                    &self.re[1][base..base + n],
                    &self.im[1][base..base + n],
                );
                let w2 = C64::new(e2r[b], e2i[b]);
                row[0] += w2 * s[0];
                row[1] += w2 * s[1];
            }
            acc[0] += w1 * row[0];
            acc[1] += w1 * row[1];
        }
        let w = grid.spectral_weight();
        [acc[0] * w, acc[1] * w]
    }
}

/// `Σ_k e_k g_k` for two split complex vectors `g`, with four interleaved
/// accumulators in a fixed order.
#[inline]
fn dot_split(er: &[f64], ei: &[f64], g0r: &[f64], g0i: &[f64], g1r: &[f64], g1i: &[f64]) -> [C64; 2] {
    let n = er.len();
    let mut a0r = [0.0; 4];
    let mut a0i = [0.0; 4];
    let mut a1r = [0.0; 4];
    let mut a1i = [0.0; 4];
    let chunks = n / 4;
    for q in 0..chunks {
        for l in 0..4 {
            let k = 4 * q + l;
            a0r[l] += er[k] * g0r[k] - ei[k] * g0i[k];
            a0i[l] += er[k] * g0i[k] + ei[k] * g0r[k];
            a1r[l] += er[k] * g1r[k] - ei[k] * g1i[k];
            a1i[l] += er[k] * g1i[k] + ei[k] * g1r[k];
        }
    }
    for k in 4 * chunks..n {
        a0r[0] += er[k] * g0r[k] - ei[k] * g0i[k];
        a0i[0] += er[k] * g0i[k] + ei[k] * g0r[k];
        a1r[0] += er[k] * g1r[k] - ei[k] * g1i[k];
        a1i[0] += er[k] * g1i[k] + ei[k] * g1r[k];
    }
    let s = |a: [f64; 4]| (a[0] + a[1]) + (a[2] + a[3]);
    [C64::new(s(a0r), s(a0i)), C64::new(s(a1r), s(a1i))]
}

/// Value of the wave at a spacetime point (direct summation). Requires
/// `|x0| + R ≤ L`.
pub fn evaluate(field: &WeylCauchyData, x: &FourVector) -> Result<Spinor2> {
    WaveEvaluator::new(field).evaluate(x)
}

/// Applies the complex structure: spectral multiplication by
/// `ι(p) = i p̂·σ`, with the zero mode set to 0. The result is not compactly
/// supported, so its declared support radius is the box half-width.
pub fn apply_iota(field: &WeylCauchyData) -> WeylCauchyData {
    let spec = transform(field);
    let grid = *spec.grid();
    let out = spec.map_modes(|idx, v| match direction(&grid.momentum(idx)) {
        None => [ZERO, ZERO],
        Some(n) => {
            let s = sigma_dot_apply(&n, &v);
            [s[0] * C64::i(), s[1] * C64::i()]
        }
    });
    inverse_transform(&out, grid.half_width())
}

/// Wave inner product of two spectra (zero mode dropped).
pub fn inner_spectral(psi: &WeylSpectrum, phi: &WeylSpectrum) -> Result<C64> {
    if psi.grid() != phi.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = *psi.grid();
    let sum = ordered_sum_c(grid.len(), |idx| {
        let p = grid.momentum(idx);
        let Ok((pp, pm)) = onshell_matrices(&p) else {
            return ZERO;
        };
        let pn = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        let a = psi.at(idx);
        let b = phi.at(idx);
        let first = bilinear(&a, &pp, &b);
        let second = bilinear(&b, &pm, &a);
        (first - second) / (2.0 * pn)
    });
    Ok(sum * grid.spectral_weight())
}

/// `u† M v`.
#[inline]
fn bilinear(u: &Spinor2, m: &Matrix2C, v: &Spinor2) -> C64 {
    let mv = m.apply(v);
    u[0].conj() * mv[0] + u[1].conj() * mv[1]
}

/// Wave inner product
/// `(2π)^{-3} Σ_p (2|p|)^{-1} [Ψ̂†p̰₊Φ̂ − Φ̂†p̰₋Ψ̂] Δp³`.
pub fn inner(psi: &WeylCauchyData, phi: &WeylCauchyData) -> Result<C64> {
    if psi.grid() != phi.grid() {
        return Err(Error::GridMismatch);
    }
    inner_spectral(&transform(psi), &transform(phi))
}

/// Image of a wave in `L²(R³) ⊕ L²(R³)`, sampled on the momentum grid.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumPair {
    grid: GridSpec,
    /// First component `l(p)`.
    pub l: Vec<C64>,
    /// Second component `h(p)`.
    pub h: Vec<C64>,
}

impl MomentumPair {
    pub(crate) fn from_parts(grid: GridSpec, l: Vec<C64>, h: Vec<C64>) -> Self {
        Self { grid, l, h }
    }

    /// Momentum grid.
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// `Σ (|l|² + |h|²) Δp³`.
    pub fn norm_sq(&self) -> f64 {
        let dp3 = self.grid.momentum_step().powi(3);
        crate::numerics::ordered_sum(self.grid.len(), |i| self.l[i].norm_sqr() + self.h[i].norm_sqr()) * dp3
    }

    /// `Σ (l̄₁l₂ + h̄₁h₂) Δp³`.
    pub fn inner(&self, other: &MomentumPair) -> Result<C64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let dp3 = self.grid.momentum_step().powi(3);
        Ok(ordered_sum_c(self.grid.len(), |i| {
            self.l[i].conj() * other.l[i] + self.h[i].conj() * other.h[i]
        }) * dp3)
    }
}

fn inv_2pi_3_2() -> f64 {
    (2.0 * std::f64::consts::PI).powf(-1.5)
}

/// Momentum-space image `(l, h)` of a wave:
/// `l(p) = −(2π)^{-3/2} ν₀(p)†Φ̂(p)`, `h(p) = (2π)^{-3/2} Φ̂(−p)†ν₀(p)`.
/// The zero mode maps to 0.
pub fn v_map(field: &WeylCauchyData) -> MomentumPair {
    let spec = transform(field);
    let grid = *spec.grid();
    let c = inv_2pi_3_2();
    let pairs: Vec<(C64, C64)> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let Ok(n0) = nu0(&grid.momentum(idx)) else {
                return (ZERO, ZERO);
            };
            let v = spec.at(idx);
            let w = spec.at(grid.negated_index(idx));
            let l = -(n0[0].conj() * v[0] + n0[1].conj() * v[1]) * c;
            let h = (w[0].conj() * n0[0] + w[1].conj() * n0[1]) * c;
            (l, h)
        })
        .collect();
    MomentumPair {
        grid,
        l: pairs.iter().map(|p| p.0).collect(),
        h: pairs.iter().map(|p| p.1).collect(),
    }
}

/// Matrix with rows `−ν₀(p)†` and `ν₀(q)†`, where `q` is the grid momentum
/// stored at the negated index of `p` (equal to `−p` off the Nyquist planes).
pub fn helicity_frame_pair(p: &[f64; 3], q: &[f64; 3]) -> Result<Matrix2C> {
    let a = nu0(p)?;
    let b = nu0(q)?;
    Ok(Matrix2C::new(-a[0].conj(), -a[1].conj(), b[0].conj(), b[1].conj()))
}

/// Helicity frame with rows `−ν₀(p)†` and `ν₀(−p)†`.
pub fn helicity_frame(p: &[f64; 3]) -> Result<Matrix2C> {
    helicity_frame_pair(p, &[-p[0], -p[1], -p[2]])
}

/// Closed-form inverse of the helicity frame in terms of the polar angles of
/// `p`:
/// `[[−cos(θ/2), sin(θ/2)], [−sin(θ/2)e^{iφ}, −cos(θ/2)e^{iφ}]]`.
/// Valid off the third axis, where the angle conventions of `ν₀(p)` and
/// `ν₀(−p)` are not antipodal.
pub fn helicity_frame_inverse(p: &[f64; 3]) -> Result<Matrix2C> {
    let (theta, phi) = polar_angles(p)?;
    let (s, c) = (theta / 2.0).sin_cos();
    let e = C64::from_polar(1.0, phi);
    Ok(Matrix2C::new(C64::new(-c, 0.0), C64::new(s, 0.0), e * (-s), e * (-c)))
}

/// Inverse of [`v_map`]: solves `A Φ̂(p) = (2π)^{3/2} (l(p), conj h(−p))` mode
/// by mode, with `A` the helicity frame built from the same momenta the
/// forward map used. Modes where `A` is singular (the zero mode and the
/// self-paired Nyquist corners) are set to 0.
pub fn v_inverse(pair: &MomentumPair, support_radius: f64) -> WeylCauchyData {
    let grid = pair.grid;
    let c = (2.0 * std::f64::consts::PI).powf(1.5);
    let modes: Vec<Spinor2> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let neg = grid.negated_index(idx);
            let frame = helicity_frame_pair(&grid.momentum(idx), &grid.momentum(neg));
            let Some(inv) = frame
                .ok()
                .and_then(|a| if a.det().norm() < 1e-12 { None } else { a.inverse() })
            else {
                return [ZERO, ZERO];
            };
            let rhs = [pair.l[idx] * c, pair.h[neg].conj() * c];
            inv.apply(&rhs)
        })
        .collect();
    inverse_transform(&SpectralData::from_parts(grid, unzip(&modes)), support_radius)
}

/// Parity-reflected Cauchy data `x ↦ Φ₀(−x)`. On the periodic grid node
/// `j` maps to node `N − j` (node 0 at `−L` is its own image), which is the
/// same as `Φ̂(p) ↦ Φ̂(−p)` on the stored spectrum.
pub fn reflect<const D: usize>(field: &CauchyData<D>) -> CauchyData<D> {
    let grid = *field.grid();
    let nodes: Vec<[C64; D]> = (0..grid.len()).map(|idx| field.at(grid.reflected_index(idx))).collect();
    CauchyData::from_parts(grid, unzip(&nodes), field.support_radius())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wave_space::profile::{synthesize_cauchy, ProfileTerm, StateSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn smooth_state(grid: &GridSpec) -> WeylCauchyData {
        let spec = StateSpec::from_terms(vec![
            ProfileTerm::Bump {
                center: [0.1, -0.05, 0.05],
                radius: 0.7,
                degree: 5,
                taper: 6.0,
                spinor: vec![[1.0, 0.0], [0.0, 0.5]],
            },
            ProfileTerm::Bump {
                center: [-0.2, 0.15, 0.1],
                radius: 0.55,
                degree: 4,
                taper: 5.0,
                spinor: vec![[0.7, 0.0], [0.0, -0.3]],
            },
        ]);
        synthesize_cauchy(grid, &spec).unwrap()
    }

    /// Broad, well-resolved state with negligible Nyquist content.
    pub(crate) fn wide_state(grid: &GridSpec) -> WeylCauchyData {
        let spec = StateSpec::from_terms(vec![ProfileTerm::Bump {
            center: [0.1, -0.05, 0.05],
            radius: 1.6,
            degree: 6,
            taper: 2.0,
            spinor: vec![[1.0, 0.2], [-0.3, 0.5]],
        }]);
        synthesize_cauchy(grid, &spec).unwrap()
    }

    fn grid32() -> GridSpec {
        GridSpec::new(2.5, 32).unwrap()
    }

    #[test]
    fn evolve_zero_time_is_identity_and_composes() {
        let g = grid32();
        let f = smooth_state(&g);
        let e0 = evolve(&f, 0.0).unwrap();
        assert!(e0.relative_distance(&f).unwrap() < 1e-14);
        let a = evolve(&evolve(&f, 0.3).unwrap(), 0.4).unwrap();
        let b = evolve(&f, 0.7).unwrap();
        assert!(a.relative_distance(&b).unwrap() < 1e-12);
        assert!(matches!(evolve(&f, 2.0), Err(Error::SupportOverflow { .. })));
    }

    #[test]
    fn single_helicity_mode_acquires_phase() {
        let g = GridSpec::new(2.0, 16).unwrap();
        let idx = g.flat(1, 2, 3);
        let p = g.momentum(idx);
        let n0 = nu0(&p).unwrap();
        let mut comps = [vec![ZERO; g.len()], vec![ZERO; g.len()]];
        comps[0][idx] = n0[0];
        comps[1][idx] = n0[1];
        let t = 0.37;
        evolve_pair_spectrum(&g, &mut comps, t, 1.0);
        let pn = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        let phase = C64::from_polar(1.0, -pn * t);
        assert!((comps[0][idx] - phase * n0[0]).norm() < 1e-15);
        assert!((comps[1][idx] - phase * n0[1]).norm() < 1e-15);
    }

    #[test]
    fn evaluate_agrees_with_samples_and_evolution() {
        let g = GridSpec::new(2.5, 24).unwrap();
        let f = smooth_state(&g);
        let ev = WaveEvaluator::new(&f);
        let scale = f.max_abs();
        for idx in [0, 1234, 5000, 7001] {
            let x = g.node(idx);
            let v = ev.evaluate(&FourVector::from_parts(0.0, x)).unwrap();
            let s = f.at(idx);
            assert!((v[0] - s[0]).norm() < 1e-10 * scale);
            assert!((v[1] - s[1]).norm() < 1e-10 * scale);
        }
        let t = 0.45;
        let ft = evolve(&f, t).unwrap();
        for idx in [17, 4321, 9999] {
            let v = ev.evaluate(&FourVector::from_parts(t, g.node(idx))).unwrap();
            let s = ft.at(idx);
            assert!((v[0] - s[0]).norm() < 1e-10 * scale);
            assert!((v[1] - s[1]).norm() < 1e-10 * scale);
        }
        assert!(ev.evaluate(&FourVector::new(2.0, 0.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn evaluate_is_exact_on_single_modes() {
        let g = GridSpec::new(2.0, 16).unwrap();
        let idx = g.flat(2, 15, 5);
        let mut spec = [vec![ZERO; g.len()], vec![ZERO; g.len()]];
        spec[0][idx] = C64::new(0.3, -0.2);
        spec[1][idx] = C64::new(0.1, 0.4);
        let s = SpectralData::from_parts(g, spec);
        let f = inverse_transform(&s, 0.5);
        let ev = WaveEvaluator::new(&f);
        let p = g.momentum(idx);
        let x = FourVector::new(0.3, 0.11, -0.7, 0.25);
        let got = ev.evaluate(&x).unwrap();
        let mode = propagate_mode(&p, x.x0, 1.0, &s.at(idx));
        let ph = C64::from_polar(g.spectral_weight(), p[0] * x.x[0] + p[1] * x.x[1] + p[2] * x.x[2]);
        assert!((got[0] - ph * mode[0]).norm() < 1e-15);
        assert!((got[1] - ph * mode[1]).norm() < 1e-15);
    }

    #[test]
    fn iota_squares_to_minus_one_and_is_unitary() {
        let g = grid32();
        let f = smooth_state(&g);
        let i1 = apply_iota(&f);
        let i2 = apply_iota(&i1);
        assert!(i2.relative_distance(&f.scaled(C64::new(-1.0, 0.0))).unwrap() < 1e-12);
        assert!((i1.l2_norm() - f.l2_norm()).abs() < 1e-12 * f.l2_norm());
    }

    #[test]
    fn iota_multiplies_positive_helicity_by_i() {
        let g = GridSpec::new(2.0, 16).unwrap();
        let idx = g.flat(3, 1, 14);
        let n0 = nu0(&g.momentum(idx)).unwrap();
        let mut spec = [vec![ZERO; g.len()], vec![ZERO; g.len()]];
        spec[0][idx] = n0[0];
        spec[1][idx] = n0[1];
        let f = inverse_transform(&SpectralData::from_parts(g, spec), 1.0);
        let out = transform(&apply_iota(&f));
        assert!((out.at(idx)[0] - C64::i() * n0[0]).norm() < 1e-13);
        assert!((out.at(idx)[1] - C64::i() * n0[1]).norm() < 1e-13);
    }

    #[test]
    fn inner_product_properties() {
        let g = grid32();
        let f = smooth_state(&g);
        let k = evolve(&f, 0.2).unwrap();
        let nn = inner(&f, &f).unwrap();
        assert!(nn.im.abs() < 1e-14 * nn.re);
        assert!((nn.re - f.l2_norm_sq()).abs() < 1e-10 * nn.re);
        let ab = inner(&f, &k).unwrap();
        let ba = inner(&k, &f).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-13 * nn.re);
        let iota = apply_iota(&f);
        let ii = inner(&iota, &f).unwrap();
        assert!((ii + C64::i() * nn).norm() < 1e-10 * nn.re);
        let ij = inner(&f, &iota).unwrap();
        assert!((ij - C64::i() * nn).norm() < 1e-10 * nn.re);
        let other = GridSpec::new(2.5, 16).unwrap();
        assert!(matches!(
            inner(&f, &WeylCauchyData::zeros(other, 0.1)),
            Err(Error::GridMismatch)
        ));
    }

    #[test]
    fn v_map_is_isometric_and_invertible() {
        let g = grid32();
        let f = wide_state(&g);
        let pair = v_map(&f);
        let wave_norm = inner(&f, &f).unwrap().re;
        assert!((pair.norm_sq() - wave_norm).abs() < 1e-10 * wave_norm);
        let back = v_inverse(&pair, f.support_radius());
        assert!(back.relative_distance(&f).unwrap() < 1e-6);
        let zero = v_map(&WeylCauchyData::zeros(g, 0.5));
        assert!(zero.l.iter().chain(&zero.h).all(|v| *v == ZERO));
    }

    #[test]
    fn closed_form_frame_inverse_matches_numeric_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let p = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let a = helicity_frame(&p).unwrap();
            let inv = helicity_frame_inverse(&p).unwrap();
            assert!((a * inv).dist(&Matrix2C::identity()) < 1e-13);
        }
    }

    #[test]
    fn reflection_is_an_involution_and_reverses_momenta() {
        let g = grid32();
        let f = smooth_state(&g);
        let r = reflect(&f);
        assert!(reflect(&r).relative_distance(&f).unwrap() == 0.0);
        let fs = transform(&f);
        let rs = transform(&r);
        for idx in [5, 77, 1000, 20000] {
            if g.on_nyquist_plane(idx) {
                continue;
            }
            let a = rs.at(idx);
            let b = fs.at(g.negated_index(idx));
            assert!((a[0] - b[0]).norm() < 1e-13 && (a[1] - b[1]).norm() < 1e-13);
        }
    }
}
