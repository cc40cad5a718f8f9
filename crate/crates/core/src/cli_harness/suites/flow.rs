//! Flow suite: τ against its determinant form, the group law and double-cone
//! invariance of `ν_λ`, the Jacobian against finite differences, the
//! inversion identity for τ, light-cone coordinates, the profile `f_λ` and
//! the Möbius action of `SU(2,2)` on the tube.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::Rng;

use super::{max_of, random_four_vector, random_in_double_cone, stream};
use crate::cli_harness::SuiteContext;
use crate::conformal_flow::{
    f_profile, from_lightcone, jacobian, lightcone_coords, mobius, nu, nu_via_lightcone, tau, TubePoint,
};
use crate::error::Result;
use crate::spinor_algebra::{dirac_matrices, slash2, FourVector, Matrix2C, SlashVariant};

/// Checks emitted by this suite.
pub(crate) const CHECKS: &[&str] = &[
    "tau_determinant",
    "flow_group_law",
    "double_cone_invariance",
    "lightcone_flow_agreement",
    "jacobian_finite_difference",
    "tau_inverse_product",
    "tau_sign_consistency",
    "lightcone_round_trip",
    "profile_inverse",
    "mobius_boundary_limit",
    "mobius_translation",
];

/// Imaginary time used for the boundary limit of the Möbius action.
const BOUNDARY_OFFSET: f64 = 1e-10;
/// Step of the central differences in the Jacobian check.
const FD_STEP: f64 = 1e-5;
/// Points with `|τ|` below this are skipped by the inversion check.
const TAU_FLOOR: f64 = 0.05;

/// 4×4 determinant by Laplace expansion along the first row.
fn det4(m: &[[f64; 4]; 4]) -> f64 {
    let minor = |skip: usize| -> f64 {
        let cols: Vec<usize> = (0..4).filter(|&c| c != skip).collect();
        let r = |i: usize, j: usize| m[i][cols[j]];
        r(1, 0) * (r(2, 1) * r(3, 2) - r(2, 2) * r(3, 1)) - r(1, 1) * (r(2, 0) * r(3, 2) - r(2, 2) * r(3, 0))
            + r(1, 2) * (r(2, 0) * r(3, 1) - r(2, 1) * r(3, 0))
    };
    (0..4)
        .map(|c| {
            if c % 2 == 0 {
                m[0][c] * minor(c)
            } else {
                -m[0][c] * minor(c)
            }
        })
        .sum()
}

fn components(x: &FourVector) -> [f64; 4] {
    [x.x0, x.x[0], x.x[1], x.x[2]]
}

fn shifted(x: &FourVector, axis: usize, h: f64) -> FourVector {
    let mut c = components(x);
    c[axis] += h;
    FourVector::new(c[0], c[1], c[2], c[3])
}

/// Relative error of the analytic Jacobian against a central-difference
/// determinant.
fn jacobian_error(lambda: f64, x: &FourVector) -> Result<f64> {
    let mut m = [[0.0; 4]; 4];
    for axis in 0..4 {
        let plus = components(&nu(lambda, &shifted(x, axis, FD_STEP))?);
        let minus = components(&nu(lambda, &shifted(x, axis, -FD_STEP))?);
        for row in 0..4 {
            m[row][axis] = (plus[row] - minus[row]) / (2.0 * FD_STEP);
        }
    }
    let exact = jacobian(lambda, x)?;
    Ok((det4(&m) - exact).abs() / exact.abs())
}

pub(crate) fn run(ctx: &mut SuiteContext<'_>) -> Result<()> {
    let n = ctx.config().instances();
    let seed = ctx.config().seed;

    let mut rng = stream(seed, 11);
    let det_err = max_of((0..n).map(|_| {
        let l: f64 = rng.gen_range(-3.0..3.0);
        let x = random_four_vector(&mut rng, 1.5);
        let (c, s) = ((0.5 * l).cosh(), (0.5 * l).sinh());
        let m = Matrix2C::identity().scale_re(c) - slash2(&x, SlashVariant::Under).scale_re(s);
        let t = tau(l, &x);
        (m.det() - C64::new(t, 0.0)).norm() / t.abs().max(1.0)
    }));
    ctx.bound("tau_determinant", det_err, 1e-12);

    let mut rng = stream(seed, 12);
    let (mut law, mut escaped, mut lc) = (0.0f64, 0usize, 0.0f64);
    for _ in 0..n {
        let x = random_in_double_cone(&mut rng);
        let (l, m) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let y = nu(l, &x)?;
        law = law.max(nu(m, &y)?.max_abs_diff(&nu(l + m, &x)?));
        let far = nu(rng.gen_range(-8.0..8.0), &x)?;
        if !far.in_unit_double_cone() {
            escaped += 1;
        }
        let z = random_four_vector(&mut rng, 2.0);
        let lz = rng.gen_range(-2.0..2.0);
        if tau(lz, &z).abs() > TAU_FLOOR {
            let a = nu(lz, &z)?;
            let b = nu_via_lightcone(lz, &z)?;
            let scale = components(&a).iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
            lc = lc.max(a.max_abs_diff(&b) / scale);
        }
    }
    ctx.bound("flow_group_law", law, 1e-10);
    ctx.bound("double_cone_invariance", escaped as f64, 0.0);
    ctx.bound("lightcone_flow_agreement", lc, 1e-10);

    let mut rng = stream(seed, 13);
    let fd_instances = (n / 10).max(1);
    let mut fd = 0.0f64;
    for _ in 0..fd_instances {
        let x = random_in_double_cone(&mut rng);
        let l = rng.gen_range(-2.0..2.0);
        fd = fd.max(jacobian_error(l, &x)?);
    }
    ctx.bound("jacobian_finite_difference", fd, 1e-6);
    ctx.diagnostic("jacobian_instances", fd_instances as f64);

    let mut rng = stream(seed, 14);
    let (mut inv, mut mismatched, mut used) = (0.0f64, 0usize, 0usize);
    for _ in 0..n {
        let l = rng.gen_range(-3.0..3.0);
        let x = random_four_vector(&mut rng, 2.0);
        let t = tau(l, &x);
        if t.abs() <= TAU_FLOOR {
            continue;
        }
        used += 1;
        let back = tau(-l, &nu(l, &x)?);
        inv = inv.max((back * t - 1.0).abs());
        if back.signum() != t.signum() {
            mismatched += 1;
        }
    }
    ctx.bound("tau_inverse_product", inv, 1e-10);
    ctx.bound("tau_sign_consistency", mismatched as f64, 0.0);
    ctx.diagnostic("tau_inverse_instances", used as f64);

    let mut rng = stream(seed, 15);
    let (mut rt, mut prof) = (0.0f64, 0.0f64);
    for _ in 0..n {
        let x = random_four_vector(&mut rng, 2.0);
        if x.spatial_norm() > 1e-3 {
            rt = rt.max(from_lightcone(&lightcone_coords(&x)).max_abs_diff(&x));
        }
        let l = rng.gen_range(-3.0..3.0);
        let u = rng.gen_range(-0.999..0.999);
        prof = prof.max((f_profile(-l, f_profile(l, u)?)? - u).abs());
    }
    ctx.bound("lightcone_round_trip", rt, 1e-13);
    ctx.bound("profile_inverse", prof, 1e-12);

    let mut rng = stream(seed, 16);
    let d = dirac_matrices();
    let (mut limit, mut trans) = (0.0f64, 0.0f64);
    let im = FourVector::new(BOUNDARY_OFFSET, 0.0, 0.0, 0.0);
    for _ in 0..n {
        let x = random_in_double_cone(&mut rng);
        let l = rng.gen_range(-0.5..0.5);
        let g = d.modular_boost(2.0 * PI * l);
        let z = mobius(&g, &TubePoint::new(&x, &im))?;
        limit = limit.max(z.re().max_abs_diff(&nu(2.0 * PI * l, &x)?));

        let y = random_four_vector(&mut rng, 1.0);
        let w = TubePoint::new(
            &random_four_vector(&mut rng, 1.0),
            &FourVector::new(1.5, 0.3, -0.2, 0.4),
        );
        let shifted = mobius(&d.poincare(&Matrix2C::identity(), &y)?, &w)?;
        let want_re = components(&w.re())
            .iter()
            .zip(components(&y))
            .map(|(a, b)| a + b)
            .collect::<Vec<_>>();
        let got_re = components(&shifted.re());
        let got_im = components(&shifted.im());
        let want_im = components(&w.im());
        let e = (0..4)
            .map(|k| (got_re[k] - want_re[k]).abs().max((got_im[k] - want_im[k]).abs()))
            .fold(0.0, f64::max);
        trans = trans.max(e);
    }
    ctx.bound("mobius_boundary_limit", limit, 1e-8);
    ctx.bound("mobius_translation", trans, 1e-12);
    ctx.diagnostic("instances", n as f64);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_of_known_matrices() {
        let id = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ];
        assert_eq!(det4(&id), 1.0);
        let m = [
            [2.0, 1.0, 0.0, 0.0],
            [1.0, 3.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
            [4.0, 0.0, 2.0, 1.0],
        ];
        // Expanding along the third row leaves the 3×3 minor of rows/cols {0,1,3}.
        let minor = 2.0 * (3.0 - 0.0) - 1.0 * (1.0 - 4.0) + 0.0;
        assert!((det4(&m) - minor).abs() < 1e-14);
    }

    #[test]
    fn jacobian_error_is_small_at_a_generic_point() {
        let x = FourVector::new(0.2, -0.3, 0.1, 0.25);
        assert!(jacobian_error(0.7, &x).unwrap() < 1e-8);
    }
}
