//! Entropy suite: the three entropy routes on a set of admissible Majorana
//! states at two resolutions, positivity, decay and normalization of the
//! energy density, and the double-sum oracle for the energy density.

use serde::Serialize;

use super::stream;
use crate::cli_harness::{states, Rule, SuiteContext};
use crate::dirac_majorana::majorana_embed;
use crate::entropy::{energy_density_double_sum, energy_density_unchecked, entropy_report, EntropyReport};
use crate::error::{Error, Result};
use crate::wave_space::{GridSpec, StateSpec};

/// Check families emitted by this suite. Per-state checks carry a `_<k>`
/// suffix.
pub(crate) const CHECKS: &[&str] = &[
    "generator_fourier_agreement",
    "generator_energy_agreement",
    "generator_fourier_refinement",
    "generator_energy_refinement",
    "positivity",
    "energy_exterior_decay",
    "energy_integral",
    "double_sum_oracle",
];

/// Number of generated states.
pub(crate) const STATE_COUNT: usize = 5;
/// Box of the double-sum oracle.
pub(crate) const ORACLE_GRID: (f64, usize) = (1.5, 12);

/// `L = 2.5`, `N = 48`.
pub(crate) fn default_grid() -> GridSpec {
    GridSpec::default()
}

/// The refined grid: four thirds of the points, rounded up to even.
pub(crate) fn refined(grid: &GridSpec) -> Result<GridSpec> {
    let n = (grid.points() * 4).div_ceil(3);
    GridSpec::new(grid.half_width(), n + n % 2)
}

#[derive(Serialize)]
struct StateRecord {
    label: String,
    state: StateSpec,
    normalization_factor: f64,
    report: EntropyReport,
    refined_report: EntropyReport,
}

fn evaluate(grid: &GridSpec, spec: &StateSpec) -> Result<(EntropyReport, f64)> {
    let (state, factor) = states::unit_majorana(grid, spec)?;
    Ok((entropy_report(&state)?, factor))
}

pub(crate) fn run(ctx: &mut SuiteContext<'_>) -> Result<()> {
    let grid = ctx.grid();
    let fine = refined(&grid)?;
    let mut rng = stream(ctx.config().seed, 21);
    let mut specs: Vec<(String, StateSpec)> = (0..STATE_COUNT)
        .map(|k| (k.to_string(), states::random_entropy_spec(&mut rng)))
        .collect();
    if let Some(path) = &ctx.config().state {
        let spec =
            StateSpec::from_path(path).map_err(|e| Error::InvalidInput(format!("state: {}: {e}", path.display())))?;
        specs.push(("file".to_string(), spec));
    }

    let mut records = Vec::with_capacity(specs.len());
    for (label, spec) in &specs {
        let (coarse, factor) = evaluate(&grid, spec)?;
        let (refined_report, _) = evaluate(&fine, spec)?;
        let name = |family: &str| format!("{family}_{label}");
        ctx.check_in(
            "generator_fourier_agreement",
            name("generator_fourier_agreement"),
            coarse.dev_generator_fourier,
            0.0,
            1e-6,
            Rule::Within,
        );
        ctx.check_in(
            "generator_energy_agreement",
            name("generator_energy_agreement"),
            coarse.dev_generator_energy,
            0.0,
            1e-4,
            Rule::Within,
        );
        ctx.check_in(
            "generator_fourier_refinement",
            name("generator_fourier_refinement"),
            refined_report.dev_generator_fourier,
            coarse.dev_generator_fourier,
            0.0,
            Rule::AtMost,
        );
        ctx.check_in(
            "generator_energy_refinement",
            name("generator_energy_refinement"),
            refined_report.dev_generator_energy,
            coarse.dev_generator_energy,
            0.0,
            Rule::AtMost,
        );
        let lowest = coarse.s_generator.min(coarse.s_fourier).min(coarse.s_energy);
        ctx.check_in("positivity", name("positivity"), lowest, 0.0, 1e-6, Rule::AtLeast);
        ctx.check_in(
            "energy_exterior_decay",
            name("energy_exterior_decay"),
            coarse.exterior_ratio,
            0.0,
            1e-6,
            Rule::Within,
        );
        ctx.check_in(
            "energy_integral",
            name("energy_integral"),
            coarse.energy_deviation,
            0.0,
            1e-6,
            Rule::Within,
        );
        ctx.diagnostic(name("s_generator"), coarse.s_generator);
        ctx.diagnostic(name("s_fourier"), coarse.s_fourier);
        ctx.diagnostic(name("s_energy"), coarse.s_energy);
        ctx.diagnostic(name("observed_prefactor"), coarse.observed_prefactor);
        records.push(StateRecord {
            label: label.clone(),
            state: spec.clone(),
            normalization_factor: factor,
            report: coarse,
            refined_report,
        });
    }

    let (half_width, points) = ORACLE_GRID;
    let oracle_grid = GridSpec::new(half_width, points)?;
    let phi = states::sample(&oracle_grid, &specs[0].1)?.without_nyquist();
    let psi = majorana_embed(&phi).dirac().clone();
    let profile = energy_density_unchecked(&psi);
    let scale = profile.max_abs();
    let c = points / 2;
    let nodes = [
        oracle_grid.flat(c, c, c),
        oracle_grid.flat(c + 1, c - 1, c),
        oracle_grid.flat(c - 2, c + 1, c + 2),
        oracle_grid.flat(c + 3, c, c - 3),
        oracle_grid.flat(0, 0, 0),
        oracle_grid.flat(c, points - 1, 1),
    ];
    let worst = nodes
        .iter()
        .map(|&idx| {
            let t = energy_density_double_sum(&psi, &oracle_grid.node(idx));
            ((t.re - profile.values()[idx]).abs() + t.im.abs()) / scale
        })
        .fold(0.0, f64::max);
    ctx.bound("double_sum_oracle", worst, 1e-6);

    ctx.detail("refined_grid", &crate::wave_space::GridSettings::from(fine))?;
    ctx.detail("states", &records)?;
    Ok(())
}
