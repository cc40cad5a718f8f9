//! Exact 2×2 and 4×4 spinor matrices and the identities the rest of the
//! crate relies on.
//!
//! Minkowski vectors use the metric `diag(1, -1, -1, -1)`. A four-vector `x`
//! is mapped to the hermitian matrices
//!
//! ```text
//! under(x) = x0·𝟙 + x_j σ_j        tilde(x) = x0·𝟙 − x_j σ_j
//! ```
//!
//! both of determinant `x0² − |x|²`. The Dirac matrices are in the chiral
//! representation with 2×2 blocks
//!
//! ```text
//! γ⁰ = [[0, −𝟙], [−𝟙, 0]]     γᵏ = [[0, σ_k], [−σ_k, 0]]     C = [[−σ₂, 0], [0, σ₂]]
//! ```
//!
//! so that `γ⁰γᵏ = diag(σ_k, −σ_k)` is block diagonal. All arithmetic is
//! plain double precision; identity checks live in the tests with explicit
//! tolerances.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::SpinorError;

/// A two-component complex spinor (column vector).
pub type Spinor2 = [C64; 2];
/// A four-component complex spinor in chiral layout (right-handed pair first).
pub type Spinor4 = [C64; 4];

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// A Minkowski four-vector `(x0, x1, x2, x3)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourVector {
    /// Time component.
    pub x0: f64,
    /// Spatial components.
    pub x: [f64; 3],
}

impl FourVector {
    /// Builds a four-vector from its four components.
    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self { x0, x: [x1, x2, x3] }
    }

    /// Builds a four-vector from a time component and a spatial vector.
    pub const fn from_parts(x0: f64, x: [f64; 3]) -> Self {
        Self { x0, x }
    }

    /// The on-shell vector `(sign·|p|, p)` used for `p₊` (sign `+1`) and `p₋`
    /// (sign `−1`).
    pub fn on_shell(p: [f64; 3], sign: f64) -> Self {
        Self::from_parts(sign * norm3(&p), p)
    }

    /// `x0² − |x|²`.
    pub fn minkowski_square(&self) -> f64 {
        self.x0 * self.x0 - self.spatial_norm_sq()
    }

    /// `|x|²` of the spatial part.
    pub fn spatial_norm_sq(&self) -> f64 {
        dot3(&self.x, &self.x)
    }

    /// `|x|` of the spatial part.
    pub fn spatial_norm(&self) -> f64 {
        self.spatial_norm_sq().sqrt()
    }

    /// Largest absolute component difference to `other`.
    pub fn max_abs_diff(&self, other: &FourVector) -> f64 {
        let mut d = (self.x0 - other.x0).abs();
        for j in 0..3 {
            d = d.max((self.x[j] - other.x[j]).abs());
        }
        d
    }

    /// Whether the point lies in the open unit double cone `|x0| + |x| < 1`.
    pub fn in_unit_double_cone(&self) -> bool {
        self.x0.abs() + self.spatial_norm() < 1.0
    }
}

/// Euclidean dot product of two 3-vectors.
pub fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Euclidean norm of a 3-vector.
pub fn norm3(a: &[f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

/// Which of the two hermitian matrices to associate with a four-vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlashVariant {
    /// `x0·𝟙 + x_j σ_j`.
    Under,
    /// `x0·𝟙 − x_j σ_j`.
    Tilde,
}

/// A complex 2×2 matrix stored row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix2C {
    /// Entries `[m00, m01, m10, m11]`.
    pub m: [C64; 4],
}

impl Matrix2C {
    /// Builds a matrix from its entries in row-major order.
    pub const fn new(m00: C64, m01: C64, m10: C64, m11: C64) -> Self {
        Self {
            m: [m00, m01, m10, m11],
        }
    }

    /// The zero matrix.
    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    /// The identity matrix.
    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    /// `c·𝟙`.
    pub fn scalar(c: C64) -> Self {
        Self::new(c, ZERO, ZERO, c)
    }

    /// Pauli matrix `σ_j` for `j ∈ {1, 2, 3}`.
    ///
    /// # Panics
    /// Panics if `j` is not 1, 2 or 3.
    pub fn pauli(j: usize) -> Self {
        match j {
            1 => Self::new(ZERO, ONE, ONE, ZERO),
            2 => Self::new(ZERO, -I, I, ZERO),
            3 => Self::new(ONE, ZERO, ZERO, -ONE),
            _ => panic!("Pauli index must be 1, 2 or 3, got {j}"),
        }
    }

    /// `a_j σ_j` for a real 3-vector `a`.
    pub fn sigma_dot(a: &[f64; 3]) -> Self {
        Self::new(
            C64::new(a[2], 0.0),
            C64::new(a[0], -a[1]),
            C64::new(a[0], a[1]),
            C64::new(-a[2], 0.0),
        )
    }

    /// Entry at row `r`, column `c`.
    pub fn at(&self, r: usize, c: usize) -> C64 {
        self.m[2 * r + c]
    }

    /// Determinant.
    pub fn det(&self) -> C64 {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    /// Trace.
    pub fn trace(&self) -> C64 {
        self.m[0] + self.m[3]
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::new(self.m[0].conj(), self.m[2].conj(), self.m[1].conj(), self.m[3].conj())
    }

    /// Transpose.
    pub fn transpose(&self) -> Self {
        Self::new(self.m[0], self.m[2], self.m[1], self.m[3])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self::new(self.m[0].conj(), self.m[1].conj(), self.m[2].conj(), self.m[3].conj())
    }

    /// Inverse, or `None` when the determinant vanishes exactly.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d == ZERO {
            return None;
        }
        let inv = d.inv();
        Some(Self::new(
            self.m[3] * inv,
            -self.m[1] * inv,
            -self.m[2] * inv,
            self.m[0] * inv,
        ))
    }

    /// Multiplication by a complex scalar.
    pub fn scale(&self, c: C64) -> Self {
        Self {
            m: self.m.map(|z| z * c),
        }
    }

    /// Multiplication by a real scalar.
    pub fn scale_re(&self, c: f64) -> Self {
        Self {
            m: self.m.map(|z| z * c),
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &Spinor2) -> Spinor2 {
        [self.m[0] * v[0] + self.m[1] * v[1], self.m[2] * v[0] + self.m[3] * v[1]]
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// Largest entry modulus of `self − other`.
    pub fn dist(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }
}

impl Mul for Matrix2C {
    type Output = Matrix2C;
    fn mul(self, o: Matrix2C) -> Matrix2C {
        let a = &self.m;
        let b = &o.m;
        Matrix2C::new(
            a[0] * b[0] + a[1] * b[2],
            a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3],
        )
    }
}

impl Add for Matrix2C {
    type Output = Matrix2C;
    fn add(self, o: Matrix2C) -> Matrix2C {
        Matrix2C {
            m: std::array::from_fn(|i| self.m[i] + o.m[i]),
        }
    }
}

impl Sub for Matrix2C {
    type Output = Matrix2C;
    fn sub(self, o: Matrix2C) -> Matrix2C {
        Matrix2C {
            m: std::array::from_fn(|i| self.m[i] - o.m[i]),
        }
    }
}

impl Neg for Matrix2C {
    type Output = Matrix2C;
    fn neg(self) -> Matrix2C {
        Matrix2C { m: self.m.map(|z| -z) }
    }
}

/// A complex 4×4 matrix stored row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix4C {
    /// Entries in row-major order.
    pub m: [C64; 16],
}

impl Matrix4C {
    /// The zero matrix.
    pub const fn zero() -> Self {
        Self { m: [ZERO; 16] }
    }

    /// The identity matrix.
    pub fn identity() -> Self {
        Self::from_blocks(
            Matrix2C::identity(),
            Matrix2C::zero(),
            Matrix2C::zero(),
            Matrix2C::identity(),
        )
    }

    /// Assembles `[[a, b], [c, d]]` from 2×2 blocks.
    pub fn from_blocks(a: Matrix2C, b: Matrix2C, c: Matrix2C, d: Matrix2C) -> Self {
        let mut m = [ZERO; 16];
        for r in 0..2 {
            for col in 0..2 {
                m[4 * r + col] = a.at(r, col);
                m[4 * r + col + 2] = b.at(r, col);
                m[4 * (r + 2) + col] = c.at(r, col);
                m[4 * (r + 2) + col + 2] = d.at(r, col);
            }
        }
        Self { m }
    }

    /// Block `(br, bc)` with `br, bc ∈ {0, 1}`.
    pub fn block(&self, br: usize, bc: usize) -> Matrix2C {
        let at = |r: usize, c: usize| self.m[4 * (2 * br + r) + 2 * bc + c];
        Matrix2C::new(at(0, 0), at(0, 1), at(1, 0), at(1, 1))
    }

    /// Entry at row `r`, column `c`.
    pub fn at(&self, r: usize, c: usize) -> C64 {
        self.m[4 * r + c]
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self {
            m: std::array::from_fn(|i| self.m[4 * (i % 4) + i / 4].conj()),
        }
    }

    /// Transpose.
    pub fn transpose(&self) -> Self {
        Self {
            m: std::array::from_fn(|i| self.m[4 * (i % 4) + i / 4]),
        }
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            m: self.m.map(|z| z.conj()),
        }
    }

    /// Trace.
    pub fn trace(&self) -> C64 {
        self.m[0] + self.m[5] + self.m[10] + self.m[15]
    }

    /// Multiplication by a complex scalar.
    pub fn scale(&self, c: C64) -> Self {
        Self {
            m: self.m.map(|z| z * c),
        }
    }

    /// Multiplication by a real scalar.
    pub fn scale_re(&self, c: f64) -> Self {
        Self {
            m: self.m.map(|z| z * c),
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &Spinor4) -> Spinor4 {
        std::array::from_fn(|r| {
            self.m[4 * r] * v[0] + self.m[4 * r + 1] * v[1] + self.m[4 * r + 2] * v[2] + self.m[4 * r + 3] * v[3]
        })
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> C64 {
        let mut a = self.m;
        let mut det = ONE;
        for col in 0..4 {
            let pivot = (col..4)
                .max_by(|&i, &j| {
                    a[4 * i + col]
                        .norm()
                        .partial_cmp(&a[4 * j + col].norm())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(col);
            if a[4 * pivot + col] == ZERO {
                return ZERO;
            }
            if pivot != col {
                for c in 0..4 {
                    a.swap(4 * pivot + c, 4 * col + c);
                }
                det = -det;
            }
            let p = a[4 * col + col];
            det *= p;
            for r in col + 1..4 {
                let f = a[4 * r + col] / p;
                for c in col..4 {
                    let v = a[4 * col + c];
                    a[4 * r + c] -= f * v;
                }
            }
        }
        det
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// Largest entry modulus of `self − other`.
    pub fn dist(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    /// `self·o + o·self`.
    pub fn anticommutator(&self, o: &Self) -> Self {
        *self * *o + *o * *self
    }

    /// `self·o − o·self`.
    pub fn commutator(&self, o: &Self) -> Self {
        *self * *o - *o * *self
    }
}

impl Mul for Matrix4C {
    type Output = Matrix4C;
    fn mul(self, o: Matrix4C) -> Matrix4C {
        let mut m = [ZERO; 16];
        for r in 0..4 {
            for c in 0..4 {
                let mut acc = ZERO;
                for k in 0..4 {
                    acc += self.m[4 * r + k] * o.m[4 * k + c];
                }
                m[4 * r + c] = acc;
            }
        }
        Matrix4C { m }
    }
}

impl Add for Matrix4C {
    type Output = Matrix4C;
    fn add(self, o: Matrix4C) -> Matrix4C {
        Matrix4C {
            m: std::array::from_fn(|i| self.m[i] + o.m[i]),
        }
    }
}

impl Sub for Matrix4C {
    type Output = Matrix4C;
    fn sub(self, o: Matrix4C) -> Matrix4C {
        Matrix4C {
            m: std::array::from_fn(|i| self.m[i] - o.m[i]),
        }
    }
}

impl Neg for Matrix4C {
    type Output = Matrix4C;
    fn neg(self) -> Matrix4C {
        Matrix4C { m: self.m.map(|z| -z) }
    }
}

/// The hermitian matrix associated with a four-vector.
pub fn slash2(x: &FourVector, variant: SlashVariant) -> Matrix2C {
    let s = match variant {
        SlashVariant::Under => 1.0,
        SlashVariant::Tilde => -1.0,
    };
    Matrix2C::scalar(C64::new(x.x0, 0.0)) + Matrix2C::sigma_dot(&x.x).scale_re(s)
}

fn nonzero_momentum(p: &[f64; 3]) -> Result<f64, SpinorError> {
    let n = norm3(p);
    if n > 0.0 && n.is_finite() {
        Ok(n)
    } else {
        Err(SpinorError::ZeroMomentum)
    }
}

/// The on-shell matrices `(under(p₊), under(p₋))` with `p± = (±|p|, p)`.
///
/// They satisfy `p̰± p̰± = ±2|p| p̰±`, `p̰₊ p̰₋ = 0` and `p̰₊ − p̰₋ = 2|p|·𝟙`.
pub fn onshell_matrices(p: &[f64; 3]) -> Result<(Matrix2C, Matrix2C), SpinorError> {
    let n = nonzero_momentum(p)?;
    let s = Matrix2C::sigma_dot(p);
    Ok((
        Matrix2C::scalar(C64::new(n, 0.0)) + s,
        Matrix2C::scalar(C64::new(-n, 0.0)) + s,
    ))
}

/// Polar angles `(θ, φ)` of a nonzero momentum, with `φ = 0` on the 3-axis
/// and `φ ∈ [0, 2π)` elsewhere.
pub fn polar_angles(p: &[f64; 3]) -> Result<(f64, f64), SpinorError> {
    let n = nonzero_momentum(p)?;
    let theta = (p[2] / n).clamp(-1.0, 1.0).acos();
    let phi = if p[0] == 0.0 && p[1] == 0.0 {
        0.0
    } else {
        let a = p[1].atan2(p[0]);
        if a < 0.0 {
            a + std::f64::consts::TAU
        } else {
            a
        }
    };
    Ok((theta, phi))
}

/// The positive-helicity unit spinor `(cos θ/2, sin θ/2·e^{iφ})` of a
/// momentum.
///
/// It satisfies `p̰₋ ν₀ = 0` and `ν₀ ν₀† = p̰₊ / (2|p|)`. The half-angle
/// factors are formed from `|p| ± p₃` on whichever side avoids cancellation.
pub fn nu0(p: &[f64; 3]) -> Result<Spinor2, SpinorError> {
    let n = nonzero_momentum(p)?;
    let rho = p[0].hypot(p[1]);
    let phase = if rho == 0.0 {
        ONE
    } else {
        C64::new(p[0] / rho, p[1] / rho)
    };
    let (c, s) = if p[2] >= 0.0 {
        let a = n + p[2];
        ((a / (2.0 * n)).sqrt(), rho / (2.0 * n * a).sqrt())
    } else {
        let b = n - p[2];
        (rho / (2.0 * n * b).sqrt(), (b / (2.0 * n)).sqrt())
    };
    Ok([C64::new(c, 0.0), phase * s])
}

/// The complex structure on momentum space, `ι(p) = i (p·σ) / |p|`.
pub fn iota_matrix(p: &[f64; 3]) -> Result<Matrix2C, SpinorError> {
    let n = nonzero_momentum(p)?;
    let unit = [p[0] / n, p[1] / n, p[2] / n];
    Ok(Matrix2C::sigma_dot(&unit).scale(I))
}

/// The chiral Dirac matrices and the derived constants used by the Dirac and
/// Majorana layer.
#[derive(Clone, Debug)]
pub struct DiracMatrices {
    /// `γ⁰, γ¹, γ², γ³`.
    pub gamma: [Matrix4C; 4],
    /// Charge-conjugation matrix `C = diag(−σ₂, σ₂)`.
    pub charge_conjugation: Matrix4C,
    /// `σ^{jk} = (i/2)[γʲ, γᵏ]` for spatial `j, k` (0-based indices).
    pub sigma: [[Matrix4C; 3]; 3],
    /// Spin matrices `Σ_h = ½ ε_{hjk} σ^{jk}`.
    pub spin: [Matrix4C; 3],
    /// Hermitian form `B = [[0, −i], [i, 0]]` preserved by `SU(2,2)`.
    pub b_form: Matrix4C,
    /// `γ⁰γᵏ = diag(σ_k, −σ_k)` (0-based `k`).
    pub alpha: [Matrix4C; 3],
}

impl DiracMatrices {
    /// Builds the table.
    pub fn new() -> Self {
        let z = Matrix2C::zero();
        let one = Matrix2C::identity();
        let g0 = Matrix4C::from_blocks(z, -one, -one, z);
        let gk = |k: usize| {
            let s = Matrix2C::pauli(k);
            Matrix4C::from_blocks(z, s, -s, z)
        };
        let gamma = [g0, gk(1), gk(2), gk(3)];
        let s2 = Matrix2C::pauli(2);
        let charge_conjugation = Matrix4C::from_blocks(-s2, z, z, s2);
        let sigma: [[Matrix4C; 3]; 3] =
            std::array::from_fn(|j| std::array::from_fn(|k| gamma[j + 1].commutator(&gamma[k + 1]).scale(I * 0.5)));
        let spin: [Matrix4C; 3] = std::array::from_fn(|h| {
            let mut acc = Matrix4C::zero();
            for j in 0..3 {
                for k in 0..3 {
                    let e = levi_civita(h, j, k);
                    if e != 0.0 {
                        acc = acc + sigma[j][k].scale_re(0.5 * e);
                    }
                }
            }
            acc
        });
        let b_form = Matrix4C::from_blocks(z, Matrix2C::scalar(-I), Matrix2C::scalar(I), z);
        let alpha = std::array::from_fn(|k| g0 * gamma[k + 1]);
        Self {
            gamma,
            charge_conjugation,
            sigma,
            spin,
            b_form,
            alpha,
        }
    }

    /// The one-parameter subgroup
    /// `e(λ) = [[cosh λ/2, −sinh λ/2], [−sinh λ/2, cosh λ/2]]` (2×2 blocks).
    pub fn modular_boost(&self, lambda: f64) -> Matrix4C {
        let c = Matrix2C::scalar(C64::new((0.5 * lambda).cosh(), 0.0));
        let s = Matrix2C::scalar(C64::new(-(0.5 * lambda).sinh(), 0.0));
        Matrix4C::from_blocks(c, s, s, c)
    }

    /// The Poincaré element `p(a, y) = [[a, under(y)(a†)⁻¹], [0, (a†)⁻¹]]`.
    ///
    /// Returns an error if `a` is singular.
    pub fn poincare(&self, a: &Matrix2C, y: &FourVector) -> Result<Matrix4C, SpinorError> {
        let adi = a.dagger().inverse().ok_or(SpinorError::SingularMatrix)?;
        Ok(Matrix4C::from_blocks(
            *a,
            slash2(y, SlashVariant::Under) * adi,
            Matrix2C::zero(),
            adi,
        ))
    }

    /// `max(‖g B g† − B‖_max, |det g − 1|)`, zero exactly for `g ∈ SU(2,2)`.
    pub fn su22_defect(&self, g: &Matrix4C) -> f64 {
        let form = (*g * self.b_form * g.dagger()).dist(&self.b_form);
        form.max((g.det() - ONE).norm())
    }

    /// Minkowski metric entry `η^{μν}`.
    pub fn metric(mu: usize, nu: usize) -> f64 {
        match (mu, nu) {
            (0, 0) => 1.0,
            (a, b) if a == b => -1.0,
            _ => 0.0,
        }
    }
}

impl Default for DiracMatrices {
    fn default() -> Self {
        Self::new()
    }
}

/// A shared, lazily built table of Dirac matrices.
pub fn dirac_matrices() -> &'static DiracMatrices {
    static TABLE: OnceLock<DiracMatrices> = OnceLock::new();
    TABLE.get_or_init(DiracMatrices::new)
}

/// The Levi-Civita symbol on 0-based indices.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Applies `diag(σ·a, −σ·a)` (that is `a_k γ⁰γᵏ`) to a four-spinor.
pub fn alpha_dot_apply(a: &[f64; 3], v: &Spinor4) -> Spinor4 {
    let s = Matrix2C::sigma_dot(a);
    let up = s.apply(&[v[0], v[1]]);
    let lo = s.apply(&[v[2], v[3]]);
    [up[0], up[1], -lo[0], -lo[1]]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn slash_identity_and_axis_cases() {
        let e0 = FourVector::new(1.0, 0.0, 0.0, 0.0);
        assert_eq!(slash2(&e0, SlashVariant::Under), Matrix2C::identity());
        let e3 = FourVector::new(0.0, 0.0, 0.0, 1.0);
        assert_eq!(slash2(&e3, SlashVariant::Under), Matrix2C::pauli(3));
        assert_eq!(slash2(&e3, SlashVariant::Tilde), -Matrix2C::pauli(3));
    }

    #[test]
    fn onshell_axis_example() {
        let (pp, pm) = onshell_matrices(&[0.0, 0.0, 1.0]).unwrap();
        let d = |a: f64, b: f64| Matrix2C::new(c(a, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(b, 0.0));
        assert_eq!(pp, d(2.0, 0.0));
        assert_eq!(pm, d(0.0, -2.0));
        assert_eq!(onshell_matrices(&[0.0; 3]), Err(SpinorError::ZeroMomentum));
    }

    #[test]
    fn nu0_reference_values() {
        let a = nu0(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(a, [c(1.0, 0.0), c(0.0, 0.0)]);
        let b = nu0(&[1.0, 0.0, 0.0]).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((b[0] - c(r, 0.0)).norm() < 1e-15);
        assert!((b[1] - c(r, 0.0)).norm() < 1e-15);
        // Negative axis: θ = π with the φ = 0 convention.
        let m = nu0(&[0.0, 0.0, -2.0]).unwrap();
        assert_eq!(m, [c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(nu0(&[0.0; 3]).is_err());
    }

    #[test]
    fn nu0_matches_polar_angle_definition() {
        let p = [0.3, -1.1, 0.4];
        let (theta, phi) = polar_angles(&p).unwrap();
        let v = nu0(&p).unwrap();
        let expect = [c((0.5 * theta).cos(), 0.0), C64::from_polar((0.5 * theta).sin(), phi)];
        assert!((v[0] - expect[0]).norm() < 1e-15);
        assert!((v[1] - expect[1]).norm() < 1e-15);
    }

    #[test]
    fn iota_axis_case() {
        let m = iota_matrix(&[0.0, 0.0, 5.0]).unwrap();
        assert!(m.dist(&Matrix2C::pauli(3).scale(I)) < 1e-16);
    }

    #[test]
    fn gamma_zero_block_form() {
        let d = dirac_matrices();
        let one = Matrix2C::identity();
        assert_eq!(d.gamma[0].block(0, 1), -one);
        assert_eq!(d.gamma[0].block(1, 0), -one);
        assert_eq!(d.gamma[0].block(0, 0), Matrix2C::zero());
        for k in 0..3 {
            let s = Matrix2C::pauli(k + 1);
            assert!(d.alpha[k].block(0, 0).dist(&s) < 1e-16);
            assert!(d.alpha[k].block(1, 1).dist(&(-s)) < 1e-16);
        }
    }

    #[test]
    fn spin_matrices_are_block_pauli() {
        // Σ_h = diag(σ_h, σ_h) in the chiral representation.
        let d = dirac_matrices();
        for h in 0..3 {
            let s = Matrix2C::pauli(h + 1);
            let expect = Matrix4C::from_blocks(s, Matrix2C::zero(), Matrix2C::zero(), s);
            assert!(d.spin[h].dist(&expect) < 1e-15);
        }
    }

    #[test]
    fn determinant_of_known_matrices() {
        let d = dirac_matrices();
        assert!((d.gamma[0].det() - ONE).norm() < 1e-15);
        assert!((Matrix4C::identity().scale_re(2.0).det() - c(16.0, 0.0)).norm() < 1e-14);
        assert_eq!(Matrix4C::zero().det(), ZERO);
    }

    #[test]
    fn poincare_requires_invertible_block() {
        let d = dirac_matrices();
        let y = FourVector::new(0.1, 0.2, 0.3, 0.4);
        assert!(d.poincare(&Matrix2C::zero(), &y).is_err());
        let g = d.poincare(&Matrix2C::identity(), &y).unwrap();
        assert!(d.su22_defect(&g) < 1e-14);
    }

    #[test]
    fn alpha_dot_matches_matrix_sum() {
        let d = dirac_matrices();
        let a = [0.3, -0.7, 1.9];
        let v = [c(1.0, 0.5), c(-0.2, 0.1), c(0.4, -1.0), c(0.0, 2.0)];
        let m = d.alpha[0].scale_re(a[0]) + d.alpha[1].scale_re(a[1]) + d.alpha[2].scale_re(a[2]);
        let w = m.apply(&v);
        let u = alpha_dot_apply(&a, &v);
        for i in 0..4 {
            assert!((w[i] - u[i]).norm() < 1e-15);
        }
    }
}
