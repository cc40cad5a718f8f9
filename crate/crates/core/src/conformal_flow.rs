//! The conformal flow `ν_λ` that preserves the unit double cone
//! `O₁ = {|x0| + |x| < 1}`.
//!
//! The flow is the action of the one-parameter group `e(λ) ⊂ SU(2,2)` on
//! Minkowski space:
//!
//! ```text
//! τ(λ, x) = ½(1 + cosh λ) − ½x²(1 − cosh λ) − x0 sinh λ
//! ν_λ(x)  = (x0 cosh λ − ½(1 + x²) sinh λ, x) / τ(λ, x)
//! ```
//!
//! where `x² = x0² − |x|²`. The map is singular on `S_λ = {τ(λ, ·) = 0}`; inside
//! `O₁` the function τ stays positive. In light-cone coordinates
//! `u = x0 + |x|`, `v = x0 − |x|` the flow acts on `u` and `v` separately
//! through the Möbius profile `f_λ`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::FlowError;
use crate::spinor_algebra::{dirac_matrices, FourVector, Matrix2C, Matrix4C};

/// Tolerance on `|τ|` below which a point is treated as lying on the
/// singular set.
pub const SINGULAR_TOLERANCE: f64 = 1e-9;

/// Tolerance of the `SU(2,2)` membership check in [`mobius`].
pub const SU22_TOLERANCE: f64 = 1e-10;

/// A modular parameter `λ`. The geometric flow acting on Cauchy data uses
/// the angle `−2πλ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowParameter {
    /// The modular parameter.
    pub lambda: f64,
}

impl FlowParameter {
    /// Wraps a parameter value.
    pub fn new(lambda: f64) -> Self {
        Self { lambda }
    }

    /// The flow angle `−2πλ` at which points are pulled back.
    pub fn pullback_angle(&self) -> f64 {
        -2.0 * PI * self.lambda
    }

    /// `(cosh πλ, sinh πλ)`.
    pub fn half_angle_factors(&self) -> (f64, f64) {
        let a = PI * self.lambda;
        (a.cosh(), a.sinh())
    }
}

/// Spherical light-cone coordinates of a four-vector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LightconeCoords {
    /// `x0 + |x|`.
    pub u: f64,
    /// `x0 − |x|`.
    pub v: f64,
    /// Polar angle of `x` in `[0, π]`.
    pub theta: f64,
    /// Azimuth of `x` in `[0, 2π)`.
    pub phi: f64,
}

/// A point `z = x + iy` of the tube `R⁴ + iV₊`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TubePoint {
    /// Time component.
    pub z0: C64,
    /// Spatial components.
    pub z: [C64; 3],
}

impl TubePoint {
    /// `x + iy` from real and imaginary four-vectors.
    pub fn new(re: &FourVector, im: &FourVector) -> Self {
        Self {
            z0: C64::new(re.x0, im.x0),
            z: std::array::from_fn(|j| C64::new(re.x[j], im.x[j])),
        }
    }

    /// Real part.
    pub fn re(&self) -> FourVector {
        FourVector::from_parts(self.z0.re, self.z.map(|c| c.re))
    }

    /// Imaginary part.
    pub fn im(&self) -> FourVector {
        FourVector::from_parts(self.z0.im, self.z.map(|c| c.im))
    }

    /// Whether the imaginary part lies in the open forward cone.
    pub fn in_tube(&self) -> bool {
        let y = self.im();
        y.x0 > y.spatial_norm()
    }

    /// The complex matrix `z0·𝟙 + z_j σ_j`.
    pub fn to_matrix(&self) -> Matrix2C {
        let mut m = Matrix2C::scalar(self.z0);
        for j in 0..3 {
            m = m + Matrix2C::pauli(j + 1).scale(self.z[j]);
        }
        m
    }

    /// Decodes a matrix through `z0 = ½ tr m`, `z_j = ½ tr(σ_j m)`.
    pub fn from_matrix(m: &Matrix2C) -> Self {
        Self {
            z0: m.trace() * 0.5,
            z: std::array::from_fn(|j| (Matrix2C::pauli(j + 1) * *m).trace() * 0.5),
        }
    }
}

/// `τ(λ, x)`.
pub fn tau(lambda: f64, x: &FourVector) -> f64 {
    let (c, s) = (lambda.cosh(), lambda.sinh());
    0.5 * (1.0 + c) - 0.5 * x.minkowski_square() * (1.0 - c) - x.x0 * s
}

fn checked_tau(lambda: f64, x: &FourVector) -> Result<f64, FlowError> {
    let t = tau(lambda, x);
    if t.abs() <= SINGULAR_TOLERANCE || !t.is_finite() {
        Err(FlowError::SingularPoint { lambda, tau: t })
    } else {
        Ok(t)
    }
}

/// The flow `ν_λ(x)`.
pub fn nu(lambda: f64, x: &FourVector) -> Result<FourVector, FlowError> {
    let t = checked_tau(lambda, x)?;
    let x0 = x.x0 * lambda.cosh() - 0.5 * (1.0 + x.minkowski_square()) * lambda.sinh();
    Ok(FourVector::from_parts(x0 / t, x.x.map(|c| c / t)))
}

/// The Jacobian determinant `sgn τ / τ⁴` of `ν_λ` at `x`.
pub fn jacobian(lambda: f64, x: &FourVector) -> Result<f64, FlowError> {
    let t = checked_tau(lambda, x)?;
    Ok(t.signum() / t.powi(4))
}

/// Light-cone coordinates of `x` with the convention `θ = φ = 0` at `x = 0`
/// and `φ = 0` on the 3-axis.
pub fn lightcone_coords(x: &FourVector) -> LightconeCoords {
    let r = x.spatial_norm();
    let (theta, phi) = if r == 0.0 {
        (0.0, 0.0)
    } else {
        let theta = (x.x[2] / r).clamp(-1.0, 1.0).acos();
        let phi = if x.x[0] == 0.0 && x.x[1] == 0.0 {
            0.0
        } else {
            x.x[1].atan2(x.x[0]).rem_euclid(2.0 * PI)
        };
        (theta, phi)
    };
    LightconeCoords {
        u: x.x0 + r,
        v: x.x0 - r,
        theta,
        phi,
    }
}

/// Inverse of [`lightcone_coords`].
pub fn from_lightcone(c: &LightconeCoords) -> FourVector {
    let x0 = 0.5 * (c.u + c.v);
    let r = 0.5 * (c.u - c.v);
    let (st, ct) = c.theta.sin_cos();
    let (sp, cp) = c.phi.sin_cos();
    FourVector::new(x0, r * st * cp, r * st * sp, r * ct)
}

/// The Möbius profile `f_λ(u) = ((1+u) − e^λ(1−u)) / ((1+u) + e^λ(1−u))`.
pub fn f_profile(lambda: f64, u: f64) -> Result<f64, FlowError> {
    let e = lambda.exp();
    let den = (1.0 + u) + e * (1.0 - u);
    if den.abs() <= SINGULAR_TOLERANCE || !den.is_finite() {
        return Err(FlowError::ProfilePole { lambda, u });
    }
    Ok(((1.0 + u) - e * (1.0 - u)) / den)
}

/// `ν_λ(x)` computed in light-cone coordinates: for `τ > 0` the coordinates
/// transform as `u' = f_λ(u)`, `v' = f_λ(v)` with fixed angles; for `τ < 0`
/// the roles of `u` and `v` are exchanged and the angles become antipodal.
pub fn nu_via_lightcone(lambda: f64, x: &FourVector) -> Result<FourVector, FlowError> {
    let t = checked_tau(lambda, x)?;
    let c = lightcone_coords(x);
    let fu = f_profile(lambda, c.u)?;
    let fv = f_profile(lambda, c.v)?;
    let out = if t > 0.0 {
        LightconeCoords { u: fu, v: fv, ..c }
    } else {
        LightconeCoords {
            u: fv,
            v: fu,
            theta: PI - c.theta,
            phi: (c.phi + PI).rem_euclid(2.0 * PI),
        }
    };
    Ok(from_lightcone(&out))
}

/// Radius `coth(|a|/2)` of the sphere where `τ(a, (0, x))` vanishes; infinite
/// for `a = 0`.
pub fn time_zero_singular_radius(a: f64) -> f64 {
    if a == 0.0 {
        f64::INFINITY
    } else {
        1.0 / (0.5 * a.abs()).tanh()
    }
}

/// The Möbius action `under(gz) = (a·under(z) + b)(c·under(z) + d)⁻¹` of
/// `g = [[a, b], [c, d]] ∈ SU(2,2)` on the tube.
pub fn mobius(g: &Matrix4C, z: &TubePoint) -> Result<TubePoint, FlowError> {
    let defect = dirac_matrices().su22_defect(g);
    if defect > SU22_TOLERANCE || !defect.is_finite() {
        return Err(FlowError::NotSu22 { defect });
    }
    if !z.in_tube() {
        return Err(FlowError::NotInTube);
    }
    let zm = z.to_matrix();
    let num = g.block(0, 0) * zm + g.block(0, 1);
    let den = g.block(1, 0) * zm + g.block(1, 1);
    let inv = den.inverse().ok_or(FlowError::SingularDenominator)?;
    if !inv.max_abs().is_finite() {
        return Err(FlowError::SingularDenominator);
    }
    Ok(TubePoint::from_matrix(&(num * inv)))
}
