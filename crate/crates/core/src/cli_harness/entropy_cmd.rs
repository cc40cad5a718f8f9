//! The `entropy` command: load a state description, embed it as a Majorana
//! state, normalize it and evaluate the three entropy routes.

use std::path::PathBuf;

use serde::Serialize;

use super::report::{timestamp_now, CheckRecord, Environment, Rule};
use crate::dirac_majorana::majorana_embed;
use crate::entropy::{check_admissible, entropy_report, EntropyReport};
use crate::error::{Error, Result};
use crate::wave_space::{synthesize_cauchy, GridSpec, StateSpec};

/// Largest pairwise relative deviation accepted between the routes.
pub const ROUTE_TOLERANCE: f64 = 1e-4;

/// Arguments of the `entropy` command.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyCommand {
    /// State description (JSON).
    pub state: PathBuf,
    /// Rescale the embedded state to unit norm.
    pub normalize: bool,
    /// Embed the state even when its `majorana` flag is unset.
    pub embed: bool,
    /// Grid override; otherwise the grid carried by the state, else the default.
    pub grid: Option<GridSpec>,
}

impl EntropyCommand {
    /// Command with normalization enabled and no overrides.
    pub fn new(state: impl Into<PathBuf>) -> Self {
        Self {
            state: state.into(),
            normalize: true,
            embed: false,
            grid: None,
        }
    }
}

/// Output document of the `entropy` command.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyOutput {
    /// Creation time; the only field that varies between identical runs.
    pub timestamp: String,
    /// Grid and version.
    pub environment: Environment,
    /// The state file as given.
    pub state_file: String,
    /// Factor applied by normalization, if it ran.
    pub normalization_factor: Option<f64>,
    /// Route values and deviations.
    pub report: EntropyReport,
    /// Pass/fail of finiteness and route agreement.
    pub checks: Vec<CheckRecord>,
    /// Whether every check passed.
    pub pass: bool,
}

impl EntropyOutput {
    /// A copy with the timestamp cleared.
    pub fn without_timestamp(&self) -> Self {
        Self {
            timestamp: String::new(),
            ..self.clone()
        }
    }
}

/// Runs the command. Input problems are errors; a failed route comparison
/// is reported through [`EntropyOutput::pass`].
pub fn run_entropy_command(cmd: &EntropyCommand) -> Result<EntropyOutput> {
    let display = cmd.state.display().to_string();
    let spec = StateSpec::from_path(&cmd.state).map_err(|e| Error::InvalidInput(format!("state: {display}: {e}")))?;
    if !spec.majorana && !cmd.embed {
        return Err(Error::InvalidInput(format!(
            "state: {display}: the majorana flag is unset and embedding was not requested"
        )));
    }
    let grid = cmd.grid.or(spec.grid).unwrap_or_default();
    let embedded = majorana_embed(&synthesize_cauchy(&grid, &spec)?);
    let (state, factor) = if cmd.normalize {
        let (s, f) = embedded.normalized()?;
        log::info!("normalized {display} by the factor {}", crate::numerics::fmt17(f));
        (s, Some(f))
    } else {
        (embedded, None)
    };
    check_admissible(&state)?;
    let report = entropy_report(&state)?;

    let finite = [report.s_generator, report.s_fourier, report.s_energy]
        .iter()
        .filter(|v| !v.is_finite())
        .count();
    let checks = vec![
        CheckRecord::new("finite_values", finite as f64, 0.0, 0.0, Rule::Within),
        CheckRecord::new(
            "generator_fourier_agreement",
            report.dev_generator_fourier,
            0.0,
            ROUTE_TOLERANCE,
            Rule::Within,
        ),
        CheckRecord::new(
            "generator_energy_agreement",
            report.dev_generator_energy,
            0.0,
            ROUTE_TOLERANCE,
            Rule::Within,
        ),
        CheckRecord::new(
            "fourier_energy_agreement",
            report.dev_fourier_energy,
            0.0,
            ROUTE_TOLERANCE,
            Rule::Within,
        ),
    ];
    let pass = checks.iter().all(|c| c.pass);
    Ok(EntropyOutput {
        timestamp: timestamp_now(),
        environment: Environment::new(Some(grid.into()), 0),
        state_file: display,
        normalization_factor: factor,
        report,
        checks,
        pass,
    })
}
