//! Batch front end: verification suites, flow traces and entropy reports.
//!
//! [`run_suite`] executes one suite and returns a [`CheckReport`]; nothing is
//! written until the suite has finished, so a failing configuration leaves
//! no partial output. [`flow_trace`] samples trajectories of the conformal
//! flow and [`run_entropy_command`] evaluates the three entropy routes on a
//! state file.
//!
//! Exit statuses of the binary are `0` when every check passes, `1` when a
//! check fails and `2` for configuration or input errors. The thread count
//! can be fixed with the `CONEMOD_THREADS` environment variable; all
//! reductions are deterministic, so reports do not depend on it.

mod config;
mod entropy_cmd;
mod report;
mod states;
mod suites;
mod trace;

use std::collections::BTreeMap;

use serde::Serialize;

pub use config::{parse_json_with_path, RunConfig, Suite, DEFAULT_INSTANCES, DEFAULT_SEED};
pub use entropy_cmd::{run_entropy_command, EntropyCommand, EntropyOutput};
pub use report::{
    timestamp_now, to_json_string, to_value, write_json, CheckRecord, CheckReport, Diagnostic, Environment, Rule,
};
pub use trace::{flow_trace, load_seeds, singular_parameters, FlowTrace, RowKind, TraceRow};

use crate::error::{Error, Result};
use crate::wave_space::GridSpec;

/// Environment variable overriding the worker-thread count.
pub const THREADS_ENV: &str = "CONEMOD_THREADS";

/// Process exit status: all checks passed.
pub const EXIT_PASS: i32 = 0;
/// Process exit status: at least one check failed.
pub const EXIT_FAIL: i32 = 1;
/// Process exit status: configuration or input error.
pub const EXIT_CONFIG: i32 = 2;

/// Names of the checks a suite can emit (per-state entropy checks are listed
/// without their state suffix).
pub fn suite_checks(suite: Suite) -> &'static [&'static str] {
    match suite {
        Suite::Spinor => suites::spinor::CHECKS,
        Suite::Flow => suites::flow::CHECKS,
        Suite::Wave => suites::wave::CHECKS,
        Suite::Modular => suites::modular::CHECKS,
        Suite::Entropy => suites::entropy::CHECKS,
    }
}

/// Grid a suite uses when the configuration does not override it.
pub fn default_grid(suite: Suite) -> Option<GridSpec> {
    match suite {
        Suite::Spinor | Suite::Flow => None,
        Suite::Wave => Some(suites::wave::default_grid()),
        Suite::Modular => Some(suites::modular::default_grid()),
        Suite::Entropy => Some(suites::entropy::default_grid()),
    }
}

/// Collects checks, diagnostics and details while a suite runs.
pub(crate) struct SuiteContext<'a> {
    config: &'a RunConfig,
    grid: Option<GridSpec>,
    checks: Vec<CheckRecord>,
    diagnostics: Vec<Diagnostic>,
    details: BTreeMap<String, serde_json::Value>,
}

impl<'a> SuiteContext<'a> {
    fn new(config: &'a RunConfig, grid: Option<GridSpec>) -> Self {
        Self {
            config,
            grid,
            checks: Vec::new(),
            diagnostics: Vec::new(),
            details: BTreeMap::new(),
        }
    }

    pub(crate) fn config(&self) -> &RunConfig {
        self.config
    }

    /// The suite grid. Panics for grid-less suites.
    pub(crate) fn grid(&self) -> GridSpec {
        self.grid.expect("suite declares a grid")
    }

    /// Records a check. `family` selects the tolerance override.
    pub(crate) fn check_in(
        &mut self,
        family: &str,
        name: impl Into<String>,
        value: f64,
        reference: f64,
        tolerance: f64,
        rule: Rule,
    ) {
        let tol = self.config.tolerances.get(family).copied().unwrap_or(tolerance);
        let record = CheckRecord::new(name, value, reference, tol, rule);
        log::info!(
            "{} {}: value {} (reference {}, tolerance {})",
            if record.pass { "PASS" } else { "FAIL" },
            record.check_name,
            crate::numerics::fmt17(value),
            crate::numerics::fmt17(reference),
            crate::numerics::fmt17(tol)
        );
        self.checks.push(record);
    }

    /// Records a check whose name is its own override key.
    pub(crate) fn check(&mut self, name: &str, value: f64, reference: f64, tolerance: f64, rule: Rule) {
        self.check_in(name, name, value, reference, tolerance, rule);
    }

    /// Records an error-type check: `value ≤ tolerance` around zero.
    pub(crate) fn bound(&mut self, name: &str, value: f64, tolerance: f64) {
        self.check(name, value, 0.0, tolerance, Rule::Within);
    }

    /// Records an informational number.
    pub(crate) fn diagnostic(&mut self, name: impl Into<String>, value: f64) {
        self.diagnostics.push(Diagnostic {
            name: name.into(),
            value,
        });
    }

    /// Stores structured data under `key`.
    pub(crate) fn detail<T: Serialize + ?Sized>(&mut self, key: &str, value: &T) -> Result<()> {
        self.details.insert(key.to_string(), to_value(value)?);
        Ok(())
    }
}

/// Runs the configured suite. The configuration is validated before any
/// work starts.
pub fn run_suite(config: &RunConfig) -> Result<CheckReport> {
    config.validate(suite_checks(config.suite))?;
    let grid = match default_grid(config.suite) {
        None => {
            if config.grid.is_some() {
                log::warn!("suite {} does not sample fields; grid override ignored", config.suite);
            }
            None
        }
        Some(default) => Some(config.grid_override()?.unwrap_or(default)),
    };
    let mut ctx = SuiteContext::new(config, grid);
    match config.suite {
        Suite::Spinor => suites::spinor::run(&mut ctx)?,
        Suite::Flow => suites::flow::run(&mut ctx)?,
        Suite::Wave => suites::wave::run(&mut ctx)?,
        Suite::Modular => suites::modular::run(&mut ctx)?,
        Suite::Entropy => suites::entropy::run(&mut ctx)?,
    }
    let pass = ctx.checks.iter().all(|c| c.pass);
    Ok(CheckReport {
        suite: config.suite.name().to_string(),
        timestamp: timestamp_now(),
        environment: Environment::new(grid.map(Into::into), config.seed),
        pass,
        checks: ctx.checks,
        diagnostics: ctx.diagnostics,
        details: ctx.details,
    })
}

/// Exit status for a finished report.
pub fn exit_status(pass: bool) -> i32 {
    if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

/// Thread count requested through [`THREADS_ENV`], if set.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(Error::InvalidInput(format!("{THREADS_ENV}: {e}"))),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::InvalidInput(format!(
                "{THREADS_ENV}: expected a positive integer, got '{v}'"
            ))),
        },
    }
}

/// Runs `f` on a dedicated pool of `threads` workers.
pub fn with_threads<T, F>(threads: usize, f: F) -> Result<T>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_lists_its_checks() {
        for s in Suite::ALL {
            assert!(!suite_checks(s).is_empty());
        }
        assert!(default_grid(Suite::Spinor).is_none());
        assert_eq!(default_grid(Suite::Modular).unwrap().half_width(), 1.75);
    }

    #[test]
    fn unknown_tolerance_key_is_a_config_error() {
        let mut c = RunConfig::new(Suite::Spinor);
        c.tolerances.insert("no_such_check".into(), 1.0);
        assert!(matches!(run_suite(&c), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn spinor_suite_passes_with_defaults() {
        let mut c = RunConfig::new(Suite::Spinor);
        c.instances = Some(500);
        let r = run_suite(&c).unwrap();
        assert!(r.pass, "{:?}", r.failures());
        assert_eq!(r.checks.len(), suite_checks(Suite::Spinor).len());
    }

    #[test]
    fn reports_are_thread_count_independent() {
        let mut c = RunConfig::new(Suite::Flow);
        c.instances = Some(300);
        let a = with_threads(1, || run_suite(&c)).unwrap().unwrap();
        let b = with_threads(3, || run_suite(&c)).unwrap().unwrap();
        assert_eq!(
            to_json_string(&a.without_timestamp()).unwrap(),
            to_json_string(&b.without_timestamp()).unwrap()
        );
    }

    #[test]
    fn tolerance_override_changes_the_outcome() {
        let mut c = RunConfig::new(Suite::Spinor);
        c.instances = Some(50);
        c.tolerances.insert("boost_group_law".into(), 0.0);
        c.tolerances.insert("ppm_difference".into(), 1.0);
        let r = run_suite(&c).unwrap();
        assert_eq!(r.check("ppm_difference").unwrap().tolerance, 1.0);
        assert_eq!(r.check("boost_group_law").unwrap().tolerance, 0.0);
    }
}
