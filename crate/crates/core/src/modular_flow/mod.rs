//! The modular group of the unit double cone acting on Weyl waves.
//!
//! For Cauchy data supported in a ball `B_R` with `R < 1`, the modular unitary
//! `Δ^{iλ}` acts geometrically through the flow at angle `−2πλ`:
//!
//! ```text
//! (Δ^{iλ}Φ)₀(x) = τ(−2πλ, (0,x))^{-2} (cosh πλ·𝟙 + sinh πλ·x·σ) Φ(ν_{−2πλ}(0, x))
//! ```
//!
//! where `Φ(y)` is the spacetime value of the wave. The spacetime values are
//! obtained by direct summation over the momentum grid. The output is
//! supported in the ball of radius `f_{−2π|λ|}(R)`; nodes outside that ball
//! (plus a margin of three grid steps) are set to zero.
//!
//! The generator of this one-parameter group, differentiated at `λ = 0` on
//! Cauchy data, is the first-order operator
//!
//! ```text
//! (KΦ)₀(x) = −π[(1 − r²) σ·∇Φ₀(x) − (x·σ) Φ₀(x)]
//! ```
//!
//! On test functions the same group acts through the map `E_λ`, which pulls
//! back along `ν_{−2πλ}` with a conformal weight and a spinor twist.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conformal_flow::{f_profile, nu, tau, FlowParameter, SINGULAR_TOLERANCE};
use crate::error::{Error, FlowError, Result};
use crate::numerics::{observed_order, ordered_sum};
use crate::spinor_algebra::{slash2, FourVector, Matrix2C, SlashVariant, Spinor2};
use crate::wave_space::{
    apply_iota, partial_derivative, sigma_dot_apply, unzip, TestFunctionSpec, WaveEvaluator, WeylCauchyData,
};

/// Number of grid steps added to the predicted output support radius when
/// choosing the nodes at which the flowed wave is evaluated.
pub const WINDOW_MARGIN_STEPS: f64 = 3.0;

/// Largest admissible `|λ|` for Cauchy data supported in `B_R`: the largest
/// value with `f_{−4π|λ|}(R) < 2R` and `coth(π|λ|) > 2R`. Infinite when
/// neither condition binds.
pub fn lambda_max(support_radius: f64) -> f64 {
    let r = support_radius.abs();
    let from_profile = if r < 0.5 {
        let bound = (1.0 + r) * (1.0 - 2.0 * r) / ((1.0 - r) * (1.0 + 2.0 * r));
        -bound.ln() / (4.0 * PI)
    } else {
        f64::INFINITY
    };
    let from_singular_set = if 2.0 * r > 1.0 {
        (1.0 / (2.0 * r)).atanh() / PI
    } else {
        f64::INFINITY
    };
    from_profile.min(from_singular_set)
}

/// Radius `f_{−2π|λ|}(R)` of the ball containing the support of `Δ^{iλ}Φ`
/// when `Φ₀` is supported in `B_R` with `R < 1`.
pub fn support_bound(lambda: f64, support_radius: f64) -> Result<f64> {
    Ok(f_profile(-2.0 * PI * lambda.abs(), support_radius)?)
}

/// Diagnostics attached to one application of `Δ^{iλ}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModularDiagnostics {
    /// Predicted support radius of the output.
    pub support_radius_out: f64,
    /// Radius of the ball of evaluated nodes.
    pub window_radius: f64,
    /// Number of nodes at which the wave was evaluated.
    pub evaluated_nodes: usize,
    /// L² norm of the input.
    pub norm_in: f64,
    /// L² norm of the output.
    pub norm_out: f64,
}

/// Result of applying `Δ^{iλ}` to Cauchy data.
#[derive(Clone, Debug)]
pub struct ModularApplication {
    /// Modular parameter.
    pub lambda: f64,
    /// Input Cauchy data.
    pub input: WeylCauchyData,
    /// Output Cauchy data.
    pub output: WeylCauchyData,
    /// Support and norm diagnostics.
    pub diagnostics: ModularDiagnostics,
}

/// A wave prepared for repeated application of the modular group: the
/// evaluator is built once and shared by every `λ`.
#[derive(Clone, Debug)]
pub struct ModularFlow {
    field: WeylCauchyData,
    evaluator: WaveEvaluator,
}

impl ModularFlow {
    /// Prepares `field` for repeated modular evolution.
    pub fn new(field: &WeylCauchyData) -> Self {
        Self {
            field: field.clone(),
            evaluator: WaveEvaluator::new(field),
        }
    }

    /// The prepared Cauchy data.
    pub fn field(&self) -> &WeylCauchyData {
        &self.field
    }

    /// `Δ^{iλ}Φ` for `|λ| ≤ λ_max(R)`, evaluated on the nodes within
    /// `f_{−2π|λ|}(R)` plus [`WINDOW_MARGIN_STEPS`] grid steps.
    pub fn apply(&self, lambda: f64) -> Result<ModularApplication> {
        let r = self.field.support_radius();
        let max = lambda_max(r);
        if !(lambda.abs() <= max) {
            return Err(Error::LambdaOutOfRange { lambda, max });
        }
        if r >= 1.0 {
            return Err(Error::InvalidInput(format!(
                "the modular flow needs Cauchy data supported in a ball of radius < 1, got {r}"
            )));
        }
        let out_radius = support_bound(lambda, r)?;
        let window = out_radius + WINDOW_MARGIN_STEPS * self.field.grid().spacing();
        let reach = self.field.grid().half_width() - r;
        self.apply_nodes(lambda, window, out_radius, Some(reach))
    }

    /// `Δ^{iλ}Φ` evaluated on every node with `|x| ≤ window` and zero
    /// elsewhere, without the admissibility check on `λ` and without
    /// assuming compact support of the data. Nodes where the pulled-back
    /// point is singular are set to zero. The declared output support radius
    /// is `support_radius_out` (clamped to the box).
    pub fn apply_in_window(&self, lambda: f64, window: f64, support_radius_out: f64) -> Result<ModularApplication> {
        self.apply_nodes(lambda, window, support_radius_out, None)
    }

    /// Shared worker. With `reach = Some(a)`, nodes whose pulled-back time
    /// satisfies `|y0| > a` are set to zero: there the sampled wave would
    /// have propagated across the periodic box.
    fn apply_nodes(
        &self,
        lambda: f64,
        window: f64,
        support_radius_out: f64,
        reach: Option<f64>,
    ) -> Result<ModularApplication> {
        let grid = *self.field.grid();
        let param = FlowParameter::new(lambda);
        let angle = param.pullback_angle();
        let (c, s) = param.half_angle_factors();
        let window_sq = window * window;

        let mut nodes = Vec::new();
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for idx in 0..grid.len() {
            if grid.node_radius_sq(idx) > window_sq {
                continue;
            }
            let x = FourVector::from_parts(0.0, grid.node(idx));
            let t = tau(angle, &x);
            if t <= SINGULAR_TOLERANCE {
                continue;
            }
            let Ok(y) = nu(angle, &x) else { continue };
            if reach.is_some_and(|a| y.x0.abs() > a + 1e-12) {
                continue;
            }
            let twist = (Matrix2C::identity().scale_re(c) + slash2(&x, SlashVariant::Under).scale_re(s))
                .scale_re(1.0 / (t * t));
            nodes.push(idx);
            points.push(y);
            weights.push(twist);
        }

        let values = self.evaluator.evaluate_many_unchecked(&points);
        let zero = C64::new(0.0, 0.0);
        let mut out = [vec![zero; grid.len()], vec![zero; grid.len()]];
        for ((&idx, w), v) in nodes.iter().zip(&weights).zip(&values) {
            let o = w.apply(v);
            out[0][idx] = o[0];
            out[1][idx] = o[1];
        }
        let output = WeylCauchyData::from_parts(grid, out, support_radius_out.max(0.0));
        let diagnostics = ModularDiagnostics {
            support_radius_out: output.support_radius(),
            window_radius: window,
            evaluated_nodes: nodes.len(),
            norm_in: self.field.l2_norm(),
            norm_out: output.l2_norm(),
        };
        Ok(ModularApplication {
            lambda,
            input: self.field.clone(),
            output,
            diagnostics,
        })
    }
}

/// `Δ^{iλ}Φ` for `|λ| ≤ λ_max(R)`.
pub fn modular_apply(lambda: f64, field: &WeylCauchyData) -> Result<WeylCauchyData> {
    if lambda == 0.0 {
        return Ok(field.clone());
    }
    Ok(ModularFlow::new(field).apply(lambda)?.output)
}

/// Relative defect of complex-linearity,
/// `‖Δ^{iλ}(ιΦ) − ι(Δ^{iλ}Φ)‖ / ‖ι(Δ^{iλ}Φ)‖` restricted to the ball of radius
/// `window`. Since `ιΦ` is not compactly supported, both sides are computed
/// on the data zero-padded into a box `pad` times larger with the same
/// spacing (`pad = 1` keeps the original box).
pub fn complex_linearity_defect(lambda: f64, field: &WeylCauchyData, window: f64, pad: usize) -> Result<f64> {
    let padded = if pad > 1 {
        field.zero_padded(pad)?
    } else {
        field.clone()
    };
    let rotated = apply_iota(&padded);
    let lhs = ModularFlow::new(&rotated)
        .apply_in_window(lambda, window, padded.grid().half_width())?
        .output;
    let rhs = apply_iota(&ModularFlow::new(&padded).apply(lambda)?.output);
    let grid = padded.grid();
    let w2 = window * window;
    let (lv, rv) = (lhs.values(), rhs.values());
    let inside = |i: usize| grid.node_radius_sq(i) <= w2;
    let num = ordered_sum(grid.len(), |i| {
        if inside(i) {
            (lv[0][i] - rv[0][i]).norm_sqr() + (lv[1][i] - rv[1][i]).norm_sqr()
        } else {
            0.0
        }
    });
    let den = ordered_sum(grid.len(), |i| {
        if inside(i) {
            rv[0][i].norm_sqr() + rv[1][i].norm_sqr()
        } else {
            0.0
        }
    });
    Ok(if den > 0.0 { (num / den).sqrt() } else { num.sqrt() })
}

/// The generator `(KΦ)₀ = −π[(1 − r²) σ·∇Φ₀ − (x·σ) Φ₀]`, with spectral
/// gradients. The output is declared on the whole box.
pub fn modular_generator(field: &WeylCauchyData) -> WeylCauchyData {
    let grid = *field.grid();
    let grads: Vec<WeylCauchyData> = (0..3).map(|a| partial_derivative(field, a)).collect();
    let nodes: Vec<Spinor2> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let x = grid.node(idx);
            let weight = 1.0 - grid.node_radius_sq(idx);
            let mut acc = [C64::new(0.0, 0.0); 2];
            for (a, g) in grads.iter().enumerate() {
                let mut e = [0.0; 3];
                e[a] = 1.0;
                let d = sigma_dot_apply(&e, &g.at(idx));
                acc[0] += d[0] * weight;
                acc[1] += d[1] * weight;
            }
            let xs = sigma_dot_apply(&x, &field.at(idx));
            [-PI * (acc[0] - xs[0]), -PI * (acc[1] - xs[1])]
        })
        .collect();
    WeylCauchyData::from_parts(grid, unzip(&nodes), grid.half_width())
}

/// The spinor factor `τ(−2πλ,x)^{-2}[cosh πλ·𝟙 − sinh πλ·ν̰]` of `E_λ` before
/// transposition, with `ν̰ = ν₀𝟙 + ν·σ` at `ν = ν_{−2πλ}(x)`. It is hermitian
/// for real `x`.
pub fn e_lambda_factor(lambda: f64, x: &FourVector) -> Result<(Matrix2C, FourVector), FlowError> {
    let param = FlowParameter::new(lambda);
    let angle = param.pullback_angle();
    let (c, s) = param.half_angle_factors();
    let y = nu(angle, x)?;
    let t = tau(angle, x);
    let m = (Matrix2C::identity().scale_re(c) - slash2(&y, SlashVariant::Under).scale_re(s)).scale_re(1.0 / (t * t));
    Ok((m, y))
}

/// `(E_λ f)(x) = τ(−2πλ,x)^{-2}[cosh πλ − sinh πλ·ν̰]ᵗ f(ν_{−2πλ}(x))` for a
/// test function given pointwise.
pub fn e_lambda_with<F>(lambda: f64, f: F, x: &FourVector) -> Result<Spinor2, FlowError>
where
    F: Fn(&FourVector) -> Spinor2,
{
    let (m, y) = e_lambda_factor(lambda, x)?;
    Ok(m.transpose().apply(&f(&y)))
}

/// [`e_lambda_with`] for a separable test function.
pub fn e_lambda(lambda: f64, f: &TestFunctionSpec, x: &FourVector) -> Result<Spinor2, FlowError> {
    e_lambda_with(lambda, |y| f.value(y), x)
}

/// One row of a generator convergence table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    /// Step `λ`.
    pub lambda: f64,
    /// `‖(Δ^{iλ}Φ − Φ)/λ − KΦ‖ / ‖KΦ‖`.
    pub forward_error: f64,
    /// `‖(Δ^{iλ}Φ − Δ^{−iλ}Φ)/(2λ) − KΦ‖ / ‖KΦ‖`.
    pub central_error: f64,
    /// Observed order of the forward quotient against the previous row.
    pub forward_order: Option<f64>,
    /// Observed order of the central quotient against the previous row.
    pub central_order: Option<f64>,
    /// Error of the Richardson combination `(4D(λ) − D(2λ))/3` of central
    /// quotients, available when the previous row used `2λ`.
    pub extrapolated_error: Option<f64>,
}

/// Difference-quotient convergence of `Δ^{iλ}` towards `K`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    /// Rows in the order of the requested steps.
    pub rows: Vec<ConvergenceRow>,
    /// `‖KΦ‖`.
    pub generator_norm: f64,
}

impl ConvergenceTable {
    /// Smallest extrapolated error in the table.
    pub fn best_extrapolated_error(&self) -> Option<f64> {
        self.rows.iter().filter_map(|r| r.extrapolated_error).reduce(f64::min)
    }
}

fn relative_l2(a: &[Vec<C64>; 2], b: &[Vec<C64>; 2], scale: f64) -> f64 {
    let n = a[0].len();
    let d = ordered_sum(n, |i| (a[0][i] - b[0][i]).norm_sqr() + (a[1][i] - b[1][i]).norm_sqr());
    if scale == 0.0 {
        0.0
    } else {
        d.sqrt() / scale
    }
}

/// Errors of the forward and central difference quotients of `λ ↦ Δ^{iλ}Φ`
/// against `KΦ` for each step in `lambdas` (expected to decrease), with
/// observed orders between successive rows and Richardson extrapolation of
/// the central quotients. Norms are plain L² sums; the cell volume cancels.
/// A zero field gives zero errors.
pub fn generator_convergence(field: &WeylCauchyData, lambdas: &[f64]) -> Result<ConvergenceTable> {
    let flow = ModularFlow::new(field);
    let k = modular_generator(field);
    let kv = k.values();
    let n = field.grid().len();
    let k_norm = ordered_sum(n, |i| kv[0][i].norm_sqr() + kv[1][i].norm_sqr()).sqrt();
    let base = field.values();

    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(lambdas.len());
    let mut previous_central: Option<(f64, [Vec<C64>; 2])> = None;
    for &lambda in lambdas {
        if lambda == 0.0 {
            return Err(Error::InvalidInput("convergence steps must be nonzero".into()));
        }
        let plus = flow.apply(lambda)?.output;
        let minus = flow.apply(-lambda)?.output;
        let (pv, mv) = (plus.values(), minus.values());
        let forward: [Vec<C64>; 2] =
            std::array::from_fn(|c| (0..n).map(|i| (pv[c][i] - base[c][i]) / lambda).collect());
        let central: [Vec<C64>; 2] =
            std::array::from_fn(|c| (0..n).map(|i| (pv[c][i] - mv[c][i]) / (2.0 * lambda)).collect());
        let forward_error = relative_l2(&forward, kv, k_norm);
        let central_error = relative_l2(&central, kv, k_norm);
        let (forward_order, central_order) = match rows.last() {
            Some(prev) if forward_error > 0.0 && central_error > 0.0 => (
                Some(observed_order(prev.forward_error, forward_error, prev.lambda, lambda)),
                Some(observed_order(prev.central_error, central_error, prev.lambda, lambda)),
            ),
            _ => (None, None),
        };
        let extrapolated_error = match &previous_central {
            Some((prev_lambda, prev)) if ((prev_lambda / lambda) - 2.0).abs() < 1e-12 => {
                let rich: [Vec<C64>; 2] =
                    std::array::from_fn(|c| (0..n).map(|i| (central[c][i] * 4.0 - prev[c][i]) / 3.0).collect());
                Some(relative_l2(&rich, kv, k_norm))
            }
            _ => None,
        };
        rows.push(ConvergenceRow {
            lambda,
            forward_error,
            central_error,
            forward_order,
            central_order,
            extrapolated_error,
        });
        previous_central = Some((lambda, central));
    }
    Ok(ConvergenceTable {
        rows,
        generator_norm: k_norm,
    })
}
