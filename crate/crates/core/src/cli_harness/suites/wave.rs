//! Wave suite: Parseval and the wave norm, convergence of the Weyl-equation
//! residual under grid refinement, Huygens exterior decay, the V map, the
//! complex structure, and the waves generated by a test function.

use num_complex::Complex64 as C64;

use crate::cli_harness::{states, Rule, SuiteContext};
use crate::error::Result;
use crate::numerics::{observed_order, ordered_max, ordered_sum};
use crate::spinor_algebra::onshell_matrices;
use crate::wave_space::{
    apply_iota, evolve, inner, testfunction_pair, transform, v_inverse, v_map, wave_from_testfunction, weyl_residual,
    GridSpec,
};

/// Checks emitted by this suite.
pub(crate) const CHECKS: &[&str] = &[
    "parseval",
    "wave_norm_is_l2_norm",
    "weyl_residual_order",
    "huygens_exterior_leak",
    "v_isometry",
    "v_invertibility",
    "iota_square",
    "iota_phase",
    "onshell_testfunction_identity",
    "v_testfunction_pair",
];

/// Points per axis of the residual refinement study.
pub(crate) const REFINEMENT: [usize; 3] = [24, 32, 48];
/// Time at which the residual is measured.
pub(crate) const RESIDUAL_TIME: f64 = 0.5;
/// Ratio `Δt / h` of the residual's time step to the grid spacing.
pub(crate) const RESIDUAL_STEP_RATIO: f64 = 0.25;
/// Evolution time of the Huygens check.
pub(crate) const HUYGENS_TIME: f64 = 0.5;

/// `L = 2.5`, `N = 48`.
pub(crate) fn default_grid() -> GridSpec {
    GridSpec::default()
}

pub(crate) fn run(ctx: &mut SuiteContext<'_>) -> Result<()> {
    let grid = ctx.grid();
    let smooth = states::sample(&grid, &states::smooth_spec())?;

    let l2 = smooth.l2_norm_sq();
    let spectrum = transform(&smooth);
    let sv = spectrum.values();
    let spectral = ordered_sum(grid.len(), |i| sv[0][i].norm_sqr() + sv[1][i].norm_sqr()) * grid.spectral_weight();
    ctx.bound("parseval", (spectral - l2).abs() / l2, 1e-10);
    let wave_norm = inner(&smooth, &smooth)?;
    ctx.bound(
        "wave_norm_is_l2_norm",
        (wave_norm - C64::new(l2, 0.0)).norm() / l2,
        1e-10,
    );

    let mut residuals = Vec::with_capacity(REFINEMENT.len());
    for n in REFINEMENT {
        let g = GridSpec::new(grid.half_width(), n)?;
        let f = states::sample(&g, &states::smooth_spec())?;
        let r = weyl_residual(&f, RESIDUAL_TIME, RESIDUAL_STEP_RATIO * g.spacing())?;
        ctx.diagnostic(format!("weyl_residual_n{n}"), r);
        residuals.push((n, g.spacing(), r));
    }
    for w in residuals.windows(2) {
        let ((n0, h0, r0), (n1, h1, r1)) = (w[0], w[1]);
        let order = observed_order(r0, r1, h0, h1);
        let name = format!("weyl_residual_order_{n0}_{n1}");
        ctx.check_in("weyl_residual_order", name, order, 2.0, 0.0, Rule::AtLeast);
    }

    let evolved = evolve(&smooth, HUYGENS_TIME)?;
    let leak = evolved.support_leak(smooth.support_radius() + HUYGENS_TIME);
    ctx.bound("huygens_exterior_leak", leak, 1e-8);

    let wide = states::sample(&grid, &states::wide_spec())?.without_nyquist();
    let pair = v_map(&wide);
    let wn = inner(&wide, &wide)?.re;
    ctx.bound("v_isometry", (pair.norm_sq() - wn).abs() / wn, 1e-10);
    let back = v_inverse(&pair, wide.support_radius());
    ctx.bound("v_invertibility", back.relative_distance(&wide)?, 1e-10);
    let unbanded = states::sample(&grid, &states::wide_spec())?;
    ctx.diagnostic(
        "v_invertibility_with_nyquist_content",
        v_inverse(&v_map(&unbanded), unbanded.support_radius()).relative_distance(&unbanded)?,
    );

    let iota = apply_iota(&smooth);
    let iota2 = apply_iota(&iota);
    ctx.bound(
        "iota_square",
        iota2.relative_distance(&smooth.scaled(C64::new(-1.0, 0.0)))?,
        1e-10,
    );
    let phase = inner(&smooth, &iota)?;
    ctx.bound(
        "iota_phase",
        (phase - C64::new(0.0, wave_norm.re)).norm() / wave_norm.re,
        1e-10,
    );

    let f = states::onshell_testfunction();
    let generated = transform(&wave_from_testfunction(&grid, &f)?);
    let (diff, scale) = {
        let per_mode = |idx: usize| -> (f64, f64) {
            let p = grid.momentum(idx);
            let Ok((_, pm)) = onshell_matrices(&p) else {
                return (0.0, 0.0);
            };
            let pn = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            let lhs = pm.apply(&generated.at(idx));
            let rhs = pm.apply(&f.conj_transform(-pn, &p));
            (
                (lhs[0] - rhs[0]).norm().max((lhs[1] - rhs[1]).norm()),
                rhs[0].norm().max(rhs[1].norm()),
            )
        };
        (
            ordered_max(grid.len(), |i| per_mode(i).0),
            ordered_max(grid.len(), |i| per_mode(i).1),
        )
    };
    ctx.bound("onshell_testfunction_identity", diff / scale, 1e-10);

    let got = v_map(&wave_from_testfunction(&grid, &f)?);
    let want = testfunction_pair(&grid, &f)?;
    let keep = |i: usize| !grid.on_nyquist_plane(i);
    let num = ordered_sum(grid.len(), |i| {
        if keep(i) {
            (got.l[i] - want.l[i]).norm_sqr() + (got.h[i] - want.h[i]).norm_sqr()
        } else {
            0.0
        }
    });
    let den = ordered_sum(grid.len(), |i| {
        if keep(i) {
            want.l[i].norm_sqr() + want.h[i].norm_sqr()
        } else {
            0.0
        }
    });
    ctx.bound("v_testfunction_pair", (num / den).sqrt(), 1e-8);
    Ok(())
}
