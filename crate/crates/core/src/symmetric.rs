//! Even solutions (zero initial velocity) and odd solutions (zero initial
//! position, odd field), single runs and parameter families.

use std::io;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::norm;
use crate::oracle::{compare, rk4_symmetric, OracleConfig};
use crate::picard::{resolve_interval, solve_ivp, ConvergenceReport, DomainTube, PicardConfig, MIRROR_TOL};
use crate::symmetry::{classify_field_parity, ParityReport, SampleBall};
use crate::trajectory::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryKind {
    Even,
    Odd,
}

#[derive(Debug, Clone)]
pub struct SymmetricRun {
    pub kind: SymmetryKind,
    pub trajectory: Trajectory,
    pub report: ConvergenceReport,
    /// Parity of the positions about `t0`.
    pub parity: ParityReport,
    /// Parity of the velocities about `t0`; opposite to `parity`.
    pub velocity_parity: ParityReport,
}

impl SymmetricRun {
    /// The defect the run's kind promises to keep small.
    pub fn parity_defect(&self) -> f64 {
        match self.kind {
            SymmetryKind::Even => self.parity.even_defect,
            SymmetryKind::Odd => self.parity.odd_defect,
        }
    }

    pub fn velocity_defect(&self) -> f64 {
        match self.kind {
            SymmetryKind::Even => self.velocity_parity.odd_defect,
            SymmetryKind::Odd => self.velocity_parity.even_defect,
        }
    }
}

fn finish(kind: SymmetryKind, trajectory: Trajectory, report: ConvergenceReport) -> Result<SymmetricRun> {
    if !report.converged {
        return Err(Error::NotConverged {
            iterations: report.iterations_run,
            last_increment: report.increments.last().copied().unwrap_or(f64::NAN),
        });
    }
    let parity = trajectory.position_parity(MIRROR_TOL)?;
    let velocity_parity = trajectory.velocity_parity(MIRROR_TOL)?;
    let run = SymmetricRun {
        kind,
        trajectory,
        report,
        parity,
        velocity_parity,
    };
    let (name, vname) = match kind {
        SymmetryKind::Even => ("even position", "odd velocity"),
        SymmetryKind::Odd => ("odd position", "even velocity"),
    };
    if run.parity_defect() > MIRROR_TOL {
        return Err(Error::SymmetryViolation {
            kind: name,
            defect: run.parity_defect(),
            tol: MIRROR_TOL,
        });
    }
    if run.velocity_defect() > MIRROR_TOL {
        return Err(Error::SymmetryViolation {
            kind: vname,
            defect: run.velocity_defect(),
            tol: MIRROR_TOL,
        });
    }
    Ok(run)
}

/// Solution with `y(t0) = y0`, `y'(t0) = 0`; it satisfies
/// `y(t0 + tau) = y(t0 - tau)` whatever the parity of `f`.
pub fn solve_even(f: &VectorField, y0: &[f64], t0: f64, b: f64, cfg: &PicardConfig) -> Result<SymmetricRun> {
    let tube = DomainTube::new(y0.to_vec(), vec![0.0; y0.len()], t0, b)?;
    let (trajectory, report) = solve_ivp(f, &tube, cfg)?;
    finish(SymmetryKind::Even, trajectory, report)
}

/// Solution with `y(t0) = 0`, `y'(t0) = eta` for an odd `f`; it satisfies
/// `y(t0 + tau) = -y(t0 - tau)`.
///
/// Oddness is checked on the ball `|y| <= b + L |eta|` swept by the tube.
pub fn solve_odd(
    f: &VectorField,
    eta: &[f64],
    t0: f64,
    b: f64,
    cfg: &PicardConfig,
    parity_tol: f64,
) -> Result<SymmetricRun> {
    let origin = vec![0.0; eta.len()];
    if eta.len() != f.dim() {
        return Err(Error::Invalid(format!(
            "field `{}` has dimension {} but eta has {} components",
            f.name(),
            f.dim(),
            eta.len()
        )));
    }
    if let Err(e) = f.eval_vec(&origin) {
        return Err(Error::OddOriginSingular {
            field: f.name().into(),
            reason: e.reason,
        });
    }
    let tube = DomainTube::new(origin.clone(), eta.to_vec(), t0, b)?;
    cfg.validate()?;
    let (_, l, _) = resolve_interval(f, &tube, cfg)?;
    let radius = b + l * norm::sup(eta);
    let ball = SampleBall::new(origin, radius, cfg.samples_for_estimation, cfg.seed);
    let measured = classify_field_parity(f, &ball, parity_tol)?;
    if measured.odd_defect > parity_tol {
        return Err(Error::FieldNotOdd {
            field: f.name().into(),
            radius,
            odd_defect: measured.odd_defect,
            tol: parity_tol,
        });
    }
    let (trajectory, report) = solve_ivp(f, &tube, cfg)?;
    finish(SymmetryKind::Odd, trajectory, report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyParameter {
    /// Samples are `y0`; members are even runs.
    InitialPosition,
    /// Samples are `eta` with `y0 = 0`; members are odd runs.
    InitialVelocity,
}

#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub field: VectorField,
    pub parameter: FamilyParameter,
    pub samples: Vec<Vec<f64>>,
    pub t0: f64,
    pub b: f64,
    pub config: PicardConfig,
    pub parity_tol: f64,
    /// Reference integration for the `oracle_dev` column; `None` skips it.
    pub oracle: Option<OracleConfig>,
}

impl FamilySpec {
    fn validate(&self) -> Result<()> {
        if self.samples.is_empty() {
            return Err(Error::Invalid("family needs at least one sample".into()));
        }
        if let Some(s) = self.samples.iter().find(|s| s.len() != self.field.dim()) {
            return Err(Error::Invalid(format!(
                "sample {s:?} does not match the field dimension {}",
                self.field.dim()
            )));
        }
        self.config.validate()
    }
}

#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub index: usize,
    pub sample: Vec<f64>,
    pub outcome: std::result::Result<SymmetricRun, String>,
    pub oracle_dev: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct FamilyResult {
    pub parameter: FamilyParameter,
    pub members: Vec<FamilyMember>,
}

/// Runs every member independently (in parallel); output keeps input order.
/// Member failures are recorded; only a family where all fail is an error.
pub fn family_sweep(spec: &FamilySpec) -> Result<FamilyResult> {
    spec.validate()?;
    let members: Vec<FamilyMember> = spec
        .samples
        .par_iter()
        .enumerate()
        .map(|(index, sample)| run_member(spec, index, sample))
        .collect();
    if members.iter().all(|m| m.outcome.is_err()) {
        return Err(Error::EmptyFamily);
    }
    Ok(FamilyResult {
        parameter: spec.parameter,
        members,
    })
}

fn run_member(spec: &FamilySpec, index: usize, sample: &[f64]) -> FamilyMember {
    let outcome = match spec.parameter {
        FamilyParameter::InitialPosition => solve_even(&spec.field, sample, spec.t0, spec.b, &spec.config),
        FamilyParameter::InitialVelocity => {
            solve_odd(&spec.field, sample, spec.t0, spec.b, &spec.config, spec.parity_tol)
        }
    };
    let oracle_dev = match (&outcome, &spec.oracle) {
        (Ok(run), Some(ocfg)) => oracle_deviation(&spec.field, run, ocfg).ok(),
        _ => None,
    };
    FamilyMember {
        index,
        sample: sample.to_vec(),
        outcome: outcome.map_err(|e| e.to_string()),
        oracle_dev,
    }
}

/// Position deviation between a run and the RK4 path over the same interval.
pub fn oracle_deviation(f: &VectorField, run: &SymmetricRun, cfg: &OracleConfig) -> Result<f64> {
    let t = &run.trajectory;
    let center = t.len() / 2;
    let oracle = rk4_symmetric(f, t.position(center), t.velocity(center), t.t0, t.half_width(), cfg)?;
    Ok(compare(t, &oracle.trajectory)?.position)
}

impl FamilyResult {
    /// Summary table as CSV: `member_index, p1..pn, L, iterations,
    /// parity_defect, oracle_dev, converged, error`.
    pub fn write_summary<W: io::Write>(&self, out: W) -> Result<()> {
        let width = self.members.first().map_or(0, |m| m.sample.len());
        let prefix = match self.parameter {
            FamilyParameter::InitialPosition => "y0_",
            FamilyParameter::InitialVelocity => "eta_",
        };
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["member_index".to_string()];
        header.extend((1..=width).map(|i| format!("{prefix}{i}")));
        header.extend(["L", "iterations", "parity_defect", "oracle_dev", "converged", "error"].map(String::from));
        w.write_record(&header)?;
        let num = |v: f64| format!("{v:.16e}");
        for m in &self.members {
            let mut row = vec![m.index.to_string()];
            row.extend(m.sample.iter().map(|v| num(*v)));
            match &m.outcome {
                Ok(run) => row.extend([
                    num(run.report.l_used),
                    run.report.iterations_run.to_string(),
                    num(run.parity_defect()),
                    m.oracle_dev.map(num).unwrap_or_default(),
                    run.report.converged.to_string(),
                    String::new(),
                ]),
                Err(e) => row.extend([
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    "false".into(),
                    e.clone(),
                ]),
            }
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn summary_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_summary(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
    }
}
