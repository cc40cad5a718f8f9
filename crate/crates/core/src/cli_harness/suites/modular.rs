//! Modular suite: unitarity, group law, complex linearity and support of
//! `Δ^{iλ}`, convergence of its difference quotients to the generator, and
//! the cross-check against the induced map on test functions.

use num_complex::Complex64 as C64;

use super::max_of;
use crate::cli_harness::{states, Rule, SuiteContext};
use crate::error::Result;
use crate::modular_flow::{complex_linearity_defect, e_lambda, generator_convergence, modular_apply, ModularFlow};
use crate::wave_space::{wave_from_sampled_testfunction, wave_from_testfunction, GridSpec};

/// Checks emitted by this suite.
pub(crate) const CHECKS: &[&str] = &[
    "unitarity_drift",
    "group_law",
    "iota_linearity",
    "support_leak",
    "central_difference_order",
    "extrapolated_generator_error",
    "e_lambda_cross_check",
];

/// Parameters at which unitarity and support are checked.
pub(crate) const FLOW_PARAMETERS: [f64; 4] = [0.05, -0.05, 0.1, -0.1];
/// The two factors of the group-law check.
pub(crate) const GROUP_LAW_STEPS: (f64, f64) = (0.06, 0.04);
/// Parameter of the complex-linearity and `E_λ` checks.
pub(crate) const CROSS_CHECK_PARAMETER: f64 = 0.05;
/// Radius of the ball in which complex linearity is compared.
pub(crate) const LINEARITY_WINDOW: f64 = 1.0;
/// Zero-padding factor for the complex-linearity check.
pub(crate) const LINEARITY_PADDING: usize = 2;
/// Default generator-convergence steps.
pub(crate) const DEFAULT_STEPS: [f64; 5] = [0.04, 0.02, 0.01, 0.005, 0.0025];
/// Trapezoid slices of the sampled test-function route.
pub(crate) const TIME_SLICES: usize = 240;

/// `L = 1.75`, `N = 48`.
pub(crate) fn default_grid() -> GridSpec {
    GridSpec::new(1.75, 48).expect("valid default grid")
}

pub(crate) fn run(ctx: &mut SuiteContext<'_>) -> Result<()> {
    let grid = ctx.grid();
    let field = states::sample(&grid, &states::ball_spec())?;
    let flow = ModularFlow::new(&field);

    let mut drifts = Vec::new();
    let mut leaks = Vec::new();
    for lambda in FLOW_PARAMETERS {
        let a = flow.apply(lambda)?;
        let d = a.diagnostics;
        drifts.push((d.norm_out / d.norm_in - 1.0).abs());
        leaks.push(a.output.support_leak(d.support_radius_out));
    }
    ctx.bound("unitarity_drift", max_of(drifts), 1e-5);
    ctx.bound("support_leak", max_of(leaks), 1e-6);

    let (first, second) = GROUP_LAW_STEPS;
    let step = flow.apply(first)?.output;
    let composed = modular_apply(second, &step)?;
    let direct = flow.apply(first + second)?.output;
    ctx.bound("group_law", composed.relative_distance(&direct)?, 1e-4);

    let padded = complex_linearity_defect(CROSS_CHECK_PARAMETER, &field, LINEARITY_WINDOW, LINEARITY_PADDING)?;
    ctx.bound("iota_linearity", padded, 1e-5);
    let plain = complex_linearity_defect(CROSS_CHECK_PARAMETER, &field, LINEARITY_WINDOW, 1)?;
    ctx.diagnostic("iota_linearity_unpadded", plain);

    let steps = ctx.config().lambdas.clone().unwrap_or_else(|| DEFAULT_STEPS.to_vec());
    let table = generator_convergence(&field, &steps)?;
    let last = table.rows.last().expect("at least one step");
    let order = last.central_order.unwrap_or(f64::NAN);
    ctx.check("central_difference_order", order, 2.0, 0.0, Rule::AtLeast);
    let extrapolated = table.best_extrapolated_error().unwrap_or(f64::NAN);
    ctx.bound("extrapolated_generator_error", extrapolated, 1e-4);
    ctx.diagnostic("generator_norm", table.generator_norm);
    ctx.detail("generator_convergence", &table)?;

    let f = states::modular_testfunction();
    let wave = wave_from_testfunction(&grid, &f)?;
    let lhs = modular_apply(CROSS_CHECK_PARAMETER, &wave)?;
    let (t0, t1) = (-f.wave_support_radius(), f.wave_support_radius());
    let rhs = wave_from_sampled_testfunction(
        &grid,
        |x| e_lambda(CROSS_CHECK_PARAMETER, &f, x).unwrap_or([C64::new(0.0, 0.0); 2]),
        (t0, t1),
        TIME_SLICES,
        lhs.support_radius(),
    )?;
    ctx.bound("e_lambda_cross_check", lhs.relative_distance(&rhs)?, 1e-4);
    Ok(())
}
