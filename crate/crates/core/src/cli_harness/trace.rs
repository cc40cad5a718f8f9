//! Trajectories of the conformal flow in the `(x0, x1)` plane.
//!
//! Each seed is pushed through `ν_λ` on a uniform grid of parameters in
//! `[−λ_max, λ_max]`. Rows record the sign of `τ(λ, x)`, which labels the
//! branch of the trajectory. When the sign flips between two samples, a
//! branch row is inserted at the crossing located by bisection; a sample
//! that falls on the singular set itself is emitted as a singular row.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::conformal_flow::{nu, tau, SINGULAR_TOLERANCE};
use crate::error::{Error, Result};
use crate::numerics::fmt17;
use crate::spinor_algebra::FourVector;

/// Bisection steps used to locate a sign change of τ.
const BISECTION_STEPS: usize = 80;

/// Kind of a trajectory row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    /// Regular sample of `ν_λ(x)`.
    Sample,
    /// Sign change of τ between two samples; the row's `λ` is the crossing.
    Branch,
    /// A sample on the singular set, where `ν_λ(x)` is undefined.
    Singular,
}

impl RowKind {
    fn label(self) -> &'static str {
        match self {
            Self::Sample => "sample",
            Self::Branch => "branch",
            Self::Singular => "singular",
        }
    }
}

/// One row of a trajectory table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    /// Index of the seed.
    pub seed: usize,
    /// Flow parameter.
    pub lambda: f64,
    /// Time coordinate of `ν_λ(x)` (absent on branch and singular rows).
    pub x0: Option<f64>,
    /// First spatial coordinate of `ν_λ(x)` (absent on branch and singular rows).
    pub x1: Option<f64>,
    /// Sign of `τ(λ, x)`: `+1`, `−1`, or `0` on singular rows. On branch rows
    /// the sign after the crossing.
    pub branch_sign: i8,
    /// Row kind.
    pub kind: RowKind,
}

/// Trajectory table of a set of seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowTrace {
    /// Largest `|λ|` sampled.
    pub lambda_max: f64,
    /// Samples per seed.
    pub steps: usize,
    /// Seeds in input order.
    pub seeds: Vec<FourVector>,
    /// Rows grouped by seed, in increasing `λ`.
    pub rows: Vec<TraceRow>,
}

impl FlowTrace {
    /// Rows of one seed.
    pub fn rows_of(&self, seed: usize) -> impl Iterator<Item = &TraceRow> {
        self.rows.iter().filter(move |r| r.seed == seed)
    }

    /// CSV with header `seed,lambda,x0,x1,branch_sign,kind`; coordinates are
    /// empty on branch and singular rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("seed,lambda,x0,x1,branch_sign,kind\n");
        let opt = |v: Option<f64>| v.map(fmt17).unwrap_or_default();
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.seed,
                fmt17(r.lambda),
                opt(r.x0),
                opt(r.x1),
                r.branch_sign,
                r.kind.label()
            );
        }
        out
    }

    /// Writes [`FlowTrace::to_csv`] to a file.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

fn sign_of(t: f64) -> i8 {
    if t.abs() <= SINGULAR_TOLERANCE {
        0
    } else if t > 0.0 {
        1
    } else {
        -1
    }
}

/// Parameter in `[a, b]` where `τ(·, x)` changes sign, by bisection.
fn crossing(x: &FourVector, mut a: f64, mut b: f64) -> f64 {
    let sa = tau(a, x) > 0.0;
    for _ in 0..BISECTION_STEPS {
        let m = 0.5 * (a + b);
        if (tau(m, x) > 0.0) == sa {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// The parameters at which `τ(λ, x) = 0`, in increasing order.
///
/// With `x² = x0² − |x|²`, `τ = ½(1 − x²) + ½(1 + x²) cosh λ − x0 sinh λ`, so
/// `e^λ` solves `(b − x0)e² + 2a e + (b + x0) = 0` with `a = ½(1 − x²)`,
/// `b = ½(1 + x²)`; every positive root gives one singular parameter.
pub fn singular_parameters(x: &FourVector) -> Vec<f64> {
    let s = x.minkowski_square();
    let (a, b) = (0.5 * (1.0 - s), 0.5 * (1.0 + s));
    let (qa, qb, qc) = (b - x.x0, 2.0 * a, b + x.x0);
    let mut roots = Vec::new();
    if qa.abs() < 1e-300 {
        if qb != 0.0 {
            roots.push(-qc / qb);
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            // Stable quadratic formula.
            let q = -0.5 * (qb + qb.signum() * sq);
            if q != 0.0 {
                roots.push(q / qa);
                roots.push(qc / q);
            } else {
                roots.push(0.0);
            }
        }
    }
    let mut out: Vec<f64> = roots.into_iter().filter(|e| *e > 0.0).map(f64::ln).collect();
    out.sort_by(f64::total_cmp);
    out.dedup_by(|p, q| (*p - *q).abs() < 1e-14);
    out
}

/// Samples `ν_λ(seed)` at `steps` uniform parameters in `[−λ_max, λ_max]`.
pub fn flow_trace(lambda_max: f64, steps: usize, seeds: &[FourVector]) -> Result<FlowTrace> {
    if steps < 2 {
        return Err(Error::InvalidInput(format!("steps: need at least 2, got {steps}")));
    }
    if !(lambda_max.is_finite() && lambda_max > 0.0) {
        return Err(Error::InvalidInput(format!(
            "lambda-max: must be finite and positive, got {lambda_max}"
        )));
    }
    let dl = 2.0 * lambda_max / (steps - 1) as f64;
    let mut rows = Vec::new();
    for (k, x) in seeds.iter().enumerate() {
        let mut previous: Option<(f64, i8)> = None;
        for j in 0..steps {
            let lambda = -lambda_max + j as f64 * dl;
            let sign = sign_of(tau(lambda, x));
            if let Some((pl, ps)) = previous {
                if ps != 0 && sign != 0 && ps != sign {
                    rows.push(TraceRow {
                        seed: k,
                        lambda: crossing(x, pl, lambda),
                        x0: None,
                        x1: None,
                        branch_sign: sign,
                        kind: RowKind::Branch,
                    });
                }
            }
            let row = match nu(lambda, x) {
                Ok(y) if sign != 0 => TraceRow {
                    seed: k,
                    lambda,
                    x0: Some(y.x0),
                    x1: Some(y.x[0]),
                    branch_sign: sign,
                    kind: RowKind::Sample,
                },
                _ => TraceRow {
                    seed: k,
                    lambda,
                    x0: None,
                    x1: None,
                    branch_sign: 0,
                    kind: RowKind::Singular,
                },
            };
            rows.push(row);
            previous = Some((lambda, sign));
        }
    }
    Ok(FlowTrace {
        lambda_max,
        steps,
        seeds: seeds.to_vec(),
        rows,
    })
}

/// Reads seeds from a JSON array of `[x0, x1, x2, x3]` quadruples.
pub fn load_seeds(path: &Path) -> Result<Vec<FourVector>> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("seeds: {}: {e}", path.display())))?;
    let raw: Vec<[f64; 4]> = super::parse_json_with_path(&text)
        .map_err(|e| Error::InvalidInput(format!("seeds: {}: {e}", path.display())))?;
    if raw.is_empty() {
        return Err(Error::InvalidInput(format!(
            "seeds: {} contains no seeds",
            path.display()
        )));
    }
    for (i, s) in raw.iter().enumerate() {
        if s.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("seeds[{i}]: non-finite coordinate")));
        }
    }
    Ok(raw
        .into_iter()
        .map(|s| FourVector::new(s[0], s[1], s[2], s[3]))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_follows_the_closed_form() {
        let t = flow_trace(3.0, 13, &[FourVector::new(0.0, 0.0, 0.0, 0.0)]).unwrap();
        assert_eq!(t.rows.len(), 13);
        for r in &t.rows {
            assert_eq!(r.kind, RowKind::Sample);
            assert!((r.x0.unwrap() + (0.5 * r.lambda).tanh()).abs() < 1e-15);
            assert_eq!(r.branch_sign, 1);
        }
    }

    #[test]
    fn unit_sphere_seed_is_stationary() {
        let x = FourVector::new(0.0, 0.6, 0.0, 0.8);
        let t = flow_trace(5.0, 21, &[x]).unwrap();
        for r in &t.rows {
            assert!((r.x0.unwrap()).abs() < 1e-14);
            assert!((r.x1.unwrap() - 0.6).abs() < 1e-14);
        }
    }

    #[test]
    fn exterior_seed_reports_branch_rows_at_the_analytic_crossing() {
        let x = FourVector::new(0.0, 2.0, 0.0, 0.0);
        let roots = singular_parameters(&x);
        // τ(λ, (0, x)) vanishes at |x| = coth(|λ|/2).
        let expected = 2.0 * (0.5f64).atanh();
        assert_eq!(roots.len(), 2);
        assert!((roots[0] + expected).abs() < 1e-12 && (roots[1] - expected).abs() < 1e-12);
        let t = flow_trace(3.0, 61, &[x]).unwrap();
        let branches: Vec<_> = t.rows.iter().filter(|r| r.kind == RowKind::Branch).collect();
        assert_eq!(branches.len(), 2);
        for (b, r) in branches.iter().zip(&roots) {
            assert!((b.lambda - r).abs() < 1e-12);
        }
        assert_eq!(branches[0].branch_sign, 1);
        assert_eq!(branches[1].branch_sign, -1);
    }

    #[test]
    fn singular_parameters_vanish_for_interior_points() {
        for x in [
            FourVector::new(0.3, 0.2, 0.1, -0.1),
            FourVector::new(-0.5, 0.0, 0.4, 0.0),
        ] {
            assert!(singular_parameters(&x).is_empty());
        }
    }

    #[test]
    fn roots_solve_the_defining_equation() {
        let x = FourVector::new(0.7, 1.5, -0.3, 0.2);
        let roots = singular_parameters(&x);
        assert!(!roots.is_empty());
        for r in roots {
            assert!(tau(r, &x).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_layout_and_invalid_arguments() {
        let t = flow_trace(1.0, 3, &[FourVector::new(0.0, 2.0, 0.0, 0.0)]).unwrap();
        let csv = t.to_csv();
        assert!(csv.starts_with("seed,lambda,x0,x1,branch_sign,kind\n"));
        assert_eq!(csv.lines().count(), t.rows.len() + 1);
        assert!(flow_trace(1.0, 1, &[]).is_err());
        assert!(flow_trace(f64::NAN, 5, &[]).is_err());
    }
}
