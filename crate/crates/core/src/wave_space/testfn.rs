//! Spacetime test functions and the waves they generate.
//!
//! A test function is a sum of separable terms `g(x0)·h(x)·s` with a real
//! time profile `g`, a real spatial profile `h` and a constant spinor `s`.
//! Both profile families have closed-form transforms in the spacetime
//! convention `f̂(p) = ∫ f(x) e^{i(p0x0 − p·x)} d⁴x`:
//!
//! ```text
//! bump  (1 − ((t−c)/a)²)^k         →  e^{iωc} a k! 2^{k+1} j_k(ωa)/(ωa)^k
//! bump  (1 − |x−c|²/a²)^k          →  e^{−ip·c} a³ 4π 2^k k! j_{k+1}(|p|a)/(|p|a)^{k+1}
//! gauss exp(−(t−c)²/2w²)           →  e^{iωc} w√(2π) e^{−w²ω²/2}
//! gauss exp(−|x−c|²/2w²)           →  e^{−ip·c} (w√(2π))³ e^{−w²|p|²/2}
//! ```
//!
//! The Cauchy data of the generated wave are
//! `Φ̂₀(p) = (2|p|)^{-1} [p̰₊ F(p₊) − p̰₋ F(p₋)]` where `F` is the transform of
//! the complex conjugate of `f` and `p± = (±|p|, p)`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fields::{inverse_transform, unzip, SpectralData, WeylCauchyData};
use super::grid::GridSpec;
use super::special::spherical_bessel_scaled;
use super::weyl::MomentumPair;
use crate::error::{Error, Result};
use crate::spinor_algebra::{nu0, onshell_matrices, FourVector, Spinor2};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Largest bump degree accepted by the closed-form transforms.
pub const MAX_DEGREE: u32 = 40;

/// Radius (in widths) beyond which a Gaussian is treated as negligible when a
/// support radius is needed.
const GAUSSIAN_REACH: f64 = 7.5;

/// Time profile of a separable term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum TimeProfile {
    /// `(1 − ((t − c)/a)²)^k` on `|t − c| < a`.
    Bump {
        /// Center `c`.
        center: f64,
        /// Half-width `a`.
        radius: f64,
        /// Exponent `k`.
        degree: u32,
    },
    /// `exp(−(t − c)²/2w²)`.
    Gaussian {
        /// Center `c`.
        center: f64,
        /// Width `w`.
        width: f64,
    },
}

/// Spatial profile of a separable term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum SpaceProfile {
    /// `(1 − |x − c|²/a²)^k` on `|x − c| < a`.
    Bump {
        /// Center `c`.
        center: [f64; 3],
        /// Radius `a`.
        radius: f64,
        /// Exponent `k`.
        degree: u32,
    },
    /// `exp(−|x − c|²/2w²)`.
    Gaussian {
        /// Center `c`.
        center: [f64; 3],
        /// Width `w`.
        width: f64,
    },
}

impl TimeProfile {
    /// Pointwise value.
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            Self::Bump { center, radius, degree } => {
                let s2 = ((t - center) / radius).powi(2);
                if s2 >= 1.0 {
                    0.0
                } else {
                    (1.0 - s2).powi(degree as i32)
                }
            }
            Self::Gaussian { center, width } => (-(t - center).powi(2) / (2.0 * width * width)).exp(),
        }
    }

    /// `∫ g(t) e^{iωt} dt`.
    pub fn transform(&self, omega: f64) -> C64 {
        match *self {
            Self::Bump { center, radius, degree } => {
                let k = degree;
                let amp = radius * factorial(k) * 2f64.powi(k as i32 + 1) * spherical_bessel_scaled(k, omega * radius);
                C64::from_polar(amp, omega * center)
            }
            Self::Gaussian { center, width } => {
                let amp = width * (2.0 * PI).sqrt() * (-0.5 * width * width * omega * omega).exp();
                C64::from_polar(amp, omega * center)
            }
        }
    }

    /// Interval outside which the profile vanishes (Gaussians: 7.5 widths).
    pub fn extent(&self) -> (f64, f64) {
        match *self {
            Self::Bump { center, radius, .. } => (center - radius, center + radius),
            Self::Gaussian { center, width } => (center - GAUSSIAN_REACH * width, center + GAUSSIAN_REACH * width),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Self::Bump { radius, degree, center } => {
                if !(radius > 0.0 && radius.is_finite() && center.is_finite()) {
                    return Err(Error::InvalidInput(format!(
                        "time bump radius must be positive, got {radius}"
                    )));
                }
                if degree > MAX_DEGREE {
                    return Err(Error::NoClosedForm(format!(
                        "time bump degree {degree} exceeds {MAX_DEGREE}"
                    )));
                }
            }
            Self::Gaussian { width, center } => {
                if !(width > 0.0 && width.is_finite() && center.is_finite()) {
                    return Err(Error::InvalidInput(format!(
                        "time gaussian width must be positive, got {width}"
                    )));
                }
            }
        }
        Ok(())
    }
}

impl SpaceProfile {
    /// Center of the profile.
    pub fn center(&self) -> [f64; 3] {
        match self {
            Self::Bump { center, .. } | Self::Gaussian { center, .. } => *center,
        }
    }

    /// Pointwise value.
    pub fn value(&self, x: &[f64; 3]) -> f64 {
        let c = self.center();
        let r2: f64 = (0..3).map(|a| (x[a] - c[a]).powi(2)).sum();
        match *self {
            Self::Bump { radius, degree, .. } => {
                let s2 = r2 / (radius * radius);
                if s2 >= 1.0 {
                    0.0
                } else {
                    (1.0 - s2).powi(degree as i32)
                }
            }
            Self::Gaussian { width, .. } => (-r2 / (2.0 * width * width)).exp(),
        }
    }

    /// `∫ h(x) e^{−ip·x} dx`.
    pub fn transform(&self, p: &[f64; 3]) -> C64 {
        let c = self.center();
        let phase = -(p[0] * c[0] + p[1] * c[1] + p[2] * c[2]);
        let pn = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        match *self {
            Self::Bump { radius, degree, .. } => {
                let k = degree;
                let amp = radius.powi(3)
                    * 4.0
                    * PI
                    * 2f64.powi(k as i32)
                    * factorial(k)
                    * spherical_bessel_scaled(k + 1, pn * radius);
                C64::from_polar(amp, phase)
            }
            Self::Gaussian { width, .. } => {
                let amp = (width * (2.0 * PI).sqrt()).powi(3) * (-0.5 * width * width * pn * pn).exp();
                C64::from_polar(amp, phase)
            }
        }
    }

    /// Radius of the origin-centered ball outside which the profile vanishes
    /// (Gaussians: 7.5 widths).
    pub fn reach(&self) -> f64 {
        let c = self.center();
        let cn = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
        match *self {
            Self::Bump { radius, .. } => cn + radius,
            Self::Gaussian { width, .. } => cn + GAUSSIAN_REACH * width,
        }
    }

    fn validate(&self) -> Result<()> {
        let c = self.center();
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("spatial center must be finite".into()));
        }
        match *self {
            Self::Bump { radius, degree, .. } => {
                if !(radius > 0.0 && radius.is_finite()) {
                    return Err(Error::InvalidInput(format!(
                        "spatial bump radius must be positive, got {radius}"
                    )));
                }
                if degree > MAX_DEGREE {
                    return Err(Error::NoClosedForm(format!(
                        "spatial bump degree {degree} exceeds {MAX_DEGREE}"
                    )));
                }
            }
            Self::Gaussian { width, .. } => {
                if !(width > 0.0 && width.is_finite()) {
                    return Err(Error::InvalidInput(format!(
                        "spatial gaussian width must be positive, got {width}"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// One separable term `g(x0)·h(x)·s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestTerm {
    /// Time profile `g`.
    pub time: TimeProfile,
    /// Spatial profile `h`.
    pub space: SpaceProfile,
    /// Spinor `s` as `[re, im]` pairs.
    pub spinor: [[f64; 2]; 2],
}

impl TestTerm {
    fn spinor_c(&self) -> Spinor2 {
        [
            C64::new(self.spinor[0][0], self.spinor[0][1]),
            C64::new(self.spinor[1][0], self.spinor[1][1]),
        ]
    }
}

/// A test function `f: R⁴ → C²` given as a sum of separable terms.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestFunctionSpec {
    /// Separable terms.
    pub terms: Vec<TestTerm>,
}

impl TestFunctionSpec {
    /// Checks profile parameters.
    pub fn validate(&self) -> Result<()> {
        for t in &self.terms {
            t.time.validate()?;
            t.space.validate()?;
        }
        Ok(())
    }

    /// `f(x)`.
    pub fn value(&self, x: &FourVector) -> Spinor2 {
        let mut out = [ZERO, ZERO];
        for t in &self.terms {
            let a = t.time.value(x.x0) * t.space.value(&x.x);
            if a != 0.0 {
                let s = t.spinor_c();
                out[0] += s[0] * a;
                out[1] += s[1] * a;
            }
        }
        out
    }

    /// `f̂(p0, p) = ∫ f(x) e^{i(p0x0 − p·x)} d⁴x`.
    pub fn transform(&self, p0: f64, p: &[f64; 3]) -> Spinor2 {
        let mut out = [ZERO, ZERO];
        for t in &self.terms {
            let a = t.time.transform(p0) * t.space.transform(p);
            let s = t.spinor_c();
            out[0] += s[0] * a;
            out[1] += s[1] * a;
        }
        out
    }

    /// Transform of the complex conjugate `f̄` at `(p0, p)`. The profiles are
    /// real, so this is `Σ ĝ(p0) ĥ(p) s̄`.
    pub fn conj_transform(&self, p0: f64, p: &[f64; 3]) -> Spinor2 {
        let mut out = [ZERO, ZERO];
        for t in &self.terms {
            let a = t.time.transform(p0) * t.space.transform(p);
            let s = t.spinor_c();
            out[0] += s[0].conj() * a;
            out[1] += s[1].conj() * a;
        }
        out
    }

    /// Whether every term vanishes outside the open unit double cone, judged
    /// by the product of the time and space supports.
    pub fn supported_in_double_cone(&self) -> bool {
        self.terms.iter().all(|t| {
            let (a, b) = t.time.extent();
            a.abs().max(b.abs()) + t.space.reach() < 1.0
        })
    }

    /// Radius containing the time-zero support of the generated wave:
    /// spatial reach plus the largest `|x0|` of the time support.
    pub fn wave_support_radius(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let (a, b) = t.time.extent();
                a.abs().max(b.abs()) + t.space.reach()
            })
            .fold(0.0, f64::max)
    }
}

/// Assembles `Φ̂₀(p) = (2|p|)^{-1}[p̰₊ F₊ − p̰₋ F₋]` (and `F₊ = F₋ = F(0)` at
/// `p = 0`).
fn onshell_combination(p: &[f64; 3], f_plus: &Spinor2, f_minus: &Spinor2) -> Spinor2 {
    match onshell_matrices(p) {
        Err(_) => *f_plus,
        Ok((pp, pm)) => {
            let pn = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            let a = pp.apply(f_plus);
            let b = pm.apply(f_minus);
            [(a[0] - b[0]) / (2.0 * pn), (a[1] - b[1]) / (2.0 * pn)]
        }
    }
}

/// Cauchy data of the wave generated by a separable test function, from the
/// closed-form transforms. The declared support radius is
/// [`TestFunctionSpec::wave_support_radius`] (clamped to the box).
pub fn wave_from_testfunction(grid: &GridSpec, f: &TestFunctionSpec) -> Result<WeylCauchyData> {
    f.validate()?;
    let modes: Vec<Spinor2> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let p = grid.momentum(idx);
            let pn = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            let fp = f.conj_transform(pn, &p);
            let fm = f.conj_transform(-pn, &p);
            onshell_combination(&p, &fp, &fm)
        })
        .collect();
    let spec = SpectralData::from_parts(*grid, unzip(&modes));
    Ok(inverse_transform(&spec, f.wave_support_radius()))
}

/// Momentum-space pair `(l_f, h_f)` of a separable test function:
/// `l_f(p) = −(2π)^{-3/2} ν₀(p)† (f̄)̂(p₊)` and
/// `h_f(p) = (2π)^{-3/2} ν₀(p)ᵗ f̂(p₊)`.
pub fn testfunction_pair(grid: &GridSpec, f: &TestFunctionSpec) -> Result<MomentumPair> {
    f.validate()?;
    let c = (2.0 * PI).powf(-1.5);
    let pairs: Vec<(C64, C64)> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let p = grid.momentum(idx);
            let Ok(n0) = nu0(&p) else {
                return (ZERO, ZERO);
            };
            let pn = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            let fb = f.conj_transform(pn, &p);
            let fp = f.transform(pn, &p);
            let l = -(n0[0].conj() * fb[0] + n0[1].conj() * fb[1]) * c;
            let h = (n0[0] * fp[0] + n0[1] * fp[1]) * c;
            (l, h)
        })
        .collect();
    Ok(MomentumPair::from_parts(
        *grid,
        pairs.iter().map(|p| p.0).collect(),
        pairs.iter().map(|p| p.1).collect(),
    ))
}

/// Cauchy data of the wave generated by a test function known only
/// pointwise. The spacetime transform is computed numerically: the time
/// integral by the trapezoidal rule on `slices` uniform intervals of
/// `[t_min, t_max]` (the function must vanish outside), the spatial integral by
/// the grid transform of each time slice.
pub fn wave_from_sampled_testfunction<F>(
    grid: &GridSpec,
    f: F,
    time_window: (f64, f64),
    slices: usize,
    support_radius: f64,
) -> Result<WeylCauchyData>
where
    F: Fn(&FourVector) -> Spinor2 + Sync,
{
    let (t0, t1) = time_window;
    if !(t1 > t0) || slices < 2 {
        return Err(Error::InvalidInput(format!(
            "time window ({t0}, {t1}) with {slices} slices is not usable"
        )));
    }
    let n = grid.len();
    let dt = (t1 - t0) / slices as f64;
    let norms: Vec<f64> = (0..n)
        .map(|idx| {
            let p = grid.momentum(idx);
            (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
        })
        .collect();
    let mut f_plus = [vec![ZERO; n], vec![ZERO; n]];
    let mut f_minus = [vec![ZERO; n], vec![ZERO; n]];
    for i in 0..=slices {
        let t = t0 + i as f64 * dt;
        let w = if i == 0 || i == slices { 0.5 * dt } else { dt };
        let samples: Vec<Spinor2> = (0..n)
            .into_par_iter()
            .map(|idx| {
                let v = f(&FourVector::from_parts(t, grid.node(idx)));
                [v[0].conj(), v[1].conj()]
            })
            .collect();
        if samples.iter().all(|v| v[0] == ZERO && v[1] == ZERO) {
            continue;
        }
        let comps = unzip(&samples);
        let spectra: Vec<Vec<C64>> = comps.par_iter().map(|c| grid.forward(c)).collect();
        for c in 0..2 {
            f_plus[c]
                .par_iter_mut()
                .zip(f_minus[c].par_iter_mut())
                .enumerate()
                .for_each(|(idx, (fp, fm))| {
                    let e = C64::from_polar(w, norms[idx] * t);
                    let s = spectra[c][idx];
                    *fp += e * s;
                    *fm += e.conj() * s;
                });
        }
    }
    let modes: Vec<Spinor2> = (0..n)
        .into_par_iter()
        .map(|idx| {
            let p = grid.momentum(idx);
            onshell_combination(
                &p,
                &[f_plus[0][idx], f_plus[1][idx]],
                &[f_minus[0][idx], f_minus[1][idx]],
            )
        })
        .collect();
    Ok(inverse_transform(
        &SpectralData::from_parts(*grid, unzip(&modes)),
        support_radius,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wave_space::fields::transform;
    use crate::wave_space::weyl::v_map;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn sample_testfunction() -> TestFunctionSpec {
        TestFunctionSpec {
            terms: vec![TestTerm {
                time: TimeProfile::Gaussian {
                    center: 0.0,
                    width: 0.08,
                },
                space: SpaceProfile::Bump {
                    center: [0.05, -0.1, 0.0],
                    radius: 0.45,
                    degree: 6,
                },
                spinor: [[1.0, 0.0], [0.3, -0.4]],
            }],
        }
    }

    /// Simpson quadrature of a 1-D profile transform.
    fn quad_time(g: &TimeProfile, omega: f64) -> C64 {
        let (a, b) = g.extent();
        let m = 4000;
        let h = (b - a) / m as f64;
        let mut s = ZERO;
        for i in 0..=m {
            let t = a + i as f64 * h;
            let w = if i == 0 || i == m {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            s += C64::from_polar(w * g.value(t), omega * t);
        }
        s * (h / 3.0)
    }

    #[test]
    fn time_transforms_match_quadrature() {
        let profiles = [
            TimeProfile::Bump {
                center: 0.1,
                radius: 0.35,
                degree: 6,
            },
            TimeProfile::Bump {
                center: -0.2,
                radius: 0.5,
                degree: 3,
            },
            TimeProfile::Gaussian {
                center: 0.05,
                width: 0.1,
            },
        ];
        for g in &profiles {
            for &w in &[0.0, 0.7, 3.0, 12.5, 40.0] {
                let exact = g.transform(w);
                let num = quad_time(g, w);
                assert!((exact - num).norm() < 1e-9, "{g:?} at {w}: {exact} vs {num}");
            }
        }
    }

    #[test]
    fn spatial_bump_transform_matches_grid_transform() {
        let grid = GridSpec::new(2.0, 64).unwrap();
        let h = SpaceProfile::Bump {
            center: [0.1, 0.0, -0.2],
            radius: 0.8,
            degree: 8,
        };
        let vals: Vec<C64> = (0..grid.len()).map(|i| C64::new(h.value(&grid.node(i)), 0.0)).collect();
        let spec = grid.forward(&vals);
        let scale = h.transform(&[0.0; 3]).norm();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let idx = rng.gen_range(0..grid.len());
            let p = grid.momentum(idx);
            if p.iter().map(|v| v * v).sum::<f64>().sqrt() > 20.0 {
                continue;
            }
            assert!((spec[idx] - h.transform(&p)).norm() < 1e-8 * scale);
        }
    }

    #[test]
    fn zero_testfunction_gives_zero_wave() {
        let grid = GridSpec::new(2.5, 16).unwrap();
        let w = wave_from_testfunction(&grid, &TestFunctionSpec::default()).unwrap();
        assert_eq!(w.l2_norm(), 0.0);
    }

    #[test]
    fn onshell_identity_holds_mode_by_mode() {
        let grid = GridSpec::new(2.5, 32).unwrap();
        let f = sample_testfunction();
        let spec = transform(&wave_from_testfunction(&grid, &f).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let idx = rng.gen_range(1..grid.len());
            let p = grid.momentum(idx);
            let pn = p.iter().map(|v| v * v).sum::<f64>().sqrt();
            let (_, pm) = onshell_matrices(&p).unwrap();
            let lhs = pm.apply(&spec.at(idx));
            let rhs = pm.apply(&f.conj_transform(-pn, &p));
            assert!((lhs[0] - rhs[0]).norm() + (lhs[1] - rhs[1]).norm() < 1e-10);
        }
    }

    #[test]
    fn v_image_matches_closed_form_pair() {
        let grid = GridSpec::new(2.5, 32).unwrap();
        let f = sample_testfunction();
        let wave = wave_from_testfunction(&grid, &f).unwrap();
        let got = v_map(&wave);
        let want = testfunction_pair(&grid, &f).unwrap();
        let (mut num, mut den) = (0.0, 0.0);
        for idx in 0..grid.len() {
            if grid.on_nyquist_plane(idx) {
                continue;
            }
            num += (got.l[idx] - want.l[idx]).norm_sqr() + (got.h[idx] - want.h[idx]).norm_sqr();
            den += want.l[idx].norm_sqr() + want.h[idx].norm_sqr();
        }
        assert!((num / den).sqrt() < 1e-8);
    }

    #[test]
    fn sampled_route_reproduces_closed_form_route() {
        let grid = GridSpec::new(2.5, 32).unwrap();
        let f = TestFunctionSpec {
            terms: vec![TestTerm {
                time: TimeProfile::Gaussian {
                    center: 0.02,
                    width: 0.05,
                },
                space: SpaceProfile::Gaussian {
                    center: [0.0, 0.1, 0.0],
                    width: 0.3,
                },
                spinor: [[0.5, 0.5], [1.0, 0.0]],
            }],
        };
        let exact = wave_from_testfunction(&grid, &f).unwrap();
        let sampled =
            wave_from_sampled_testfunction(&grid, |x| f.value(x), (-0.4, 0.4), 96, exact.support_radius()).unwrap();
        assert!(sampled.relative_distance(&exact).unwrap() < 1e-6);
    }
}
