//! Fixed-step classical Runge-Kutta on the doubled system `z = (y, y')`,
//! `z' = (y', f(y))`. Used as an independent reference for the iteration.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::norm;
use crate::trajectory::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Step size, `h > 0`. The span is divided into `round(|span| / h)`
    /// equal steps.
    pub step: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { step: 1e-4 }
    }
}

impl OracleConfig {
    pub fn new(step: f64) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::Invalid(format!("oracle step must be positive, got {step}")));
        }
        Ok(Self { step })
    }
}

/// Where a run stopped because the field was undefined.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleHalt {
    /// Last time with a completed step.
    pub last_safe_time: f64,
    /// Runge-Kutta stage (1 to 4) whose evaluation tripped.
    pub stage: usize,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct OracleRun {
    pub trajectory: Trajectory,
    pub halt: Option<OracleHalt>,
}

/// Integrates from `t0` over the signed `span`. A guard trip stops the run
/// and returns what was computed so far.
pub fn rk4_solve(
    f: &VectorField,
    y0: &[f64],
    eta: &[f64],
    t0: f64,
    span: f64,
    cfg: &OracleConfig,
) -> Result<OracleRun> {
    let (offsets, positions, velocities, halt) = march(f, y0, eta, t0, span, cfg)?;
    let trajectory = if span < 0.0 {
        reversed(f, t0, &offsets, &positions, &velocities)?
    } else {
        Trajectory::new(f.name(), t0, f.dim(), offsets, positions, velocities)?
    };
    Ok(OracleRun { trajectory, halt })
}

/// Backward and forward runs of half-width `half` joined at `t0`. Both
/// directions use the same step count, so the grid is mirrored.
pub fn rk4_symmetric(
    f: &VectorField,
    y0: &[f64],
    eta: &[f64],
    t0: f64,
    half: f64,
    cfg: &OracleConfig,
) -> Result<OracleRun> {
    if !(half > 0.0) {
        return Err(Error::Invalid(format!("half-width must be positive, got {half}")));
    }
    let (bo, bp, bv, bhalt) = march(f, y0, eta, t0, -half, cfg)?;
    let (fo, fp, fv, fhalt) = march(f, y0, eta, t0, half, cfg)?;
    let d = f.dim();
    let mut offsets = Vec::with_capacity(bo.len() + fo.len());
    let mut positions = Vec::with_capacity(bp.len() + fp.len());
    let mut velocities = Vec::with_capacity(bv.len() + fv.len());
    for i in (1..bo.len()).rev() {
        offsets.push(bo[i]);
        positions.extend_from_slice(&bp[i * d..(i + 1) * d]);
        velocities.extend_from_slice(&bv[i * d..(i + 1) * d]);
    }
    offsets.extend_from_slice(&fo);
    positions.extend_from_slice(&fp);
    velocities.extend_from_slice(&fv);
    let trajectory = Trajectory::new(f.name(), t0, d, offsets, positions, velocities)?;
    Ok(OracleRun {
        trajectory,
        halt: bhalt.or(fhalt),
    })
}

type March = (Vec<f64>, Vec<f64>, Vec<f64>, Option<OracleHalt>);

/// Raw integration: offsets `k h_eff` (signed), node-major states.
fn march(f: &VectorField, y0: &[f64], eta: &[f64], t0: f64, span: f64, cfg: &OracleConfig) -> Result<March> {
    let d = f.dim();
    if y0.len() != d || eta.len() != d {
        return Err(Error::Invalid(format!(
            "field `{}` has dimension {d}; got {} positions and {} velocities",
            f.name(),
            y0.len(),
            eta.len()
        )));
    }
    if !(cfg.step > 0.0) || !span.is_finite() {
        return Err(Error::Invalid("oracle step must be positive and span finite".into()));
    }
    let steps = (span.abs() / cfg.step).round().max(1.0) as usize;
    let h = span / steps as f64;

    let mut offsets = vec![0.0];
    let mut positions = y0.to_vec();
    let mut velocities = eta.to_vec();
    let mut y = y0.to_vec();
    let mut v = eta.to_vec();

    let mut k1 = vec![0.0; d];
    let mut k2 = vec![0.0; d];
    let mut k3 = vec![0.0; d];
    let mut k4 = vec![0.0; d];
    let mut probe = vec![0.0; d];
    let mut halt = None;

    'steps: for s in 0..steps {
        // Position stages y, y + h/2 v, y + h/2 (v + h/2 a1), y + h (v + h/2 a2).
        for stage in 0..4 {
            for i in 0..d {
                probe[i] = match stage {
                    0 => y[i],
                    1 => y[i] + 0.5 * h * v[i],
                    2 => y[i] + 0.5 * h * (v[i] + 0.5 * h * k1[i]),
                    _ => y[i] + h * (v[i] + 0.5 * h * k2[i]),
                };
            }
            let out = match stage {
                0 => &mut k1,
                1 => &mut k2,
                2 => &mut k3,
                _ => &mut k4,
            };
            if let Err(e) = f.eval(&probe, out) {
                halt = Some(OracleHalt {
                    last_safe_time: t0 + offsets[offsets.len() - 1],
                    stage: stage + 1,
                    reason: e.to_string(),
                });
                break 'steps;
            }
        }
        for i in 0..d {
            let (a1, a2, a3, a4) = (k1[i], k2[i], k3[i], k4[i]);
            let dy = v[i] + h / 6.0 * (a1 + a2 + a3);
            y[i] += h * dy;
            v[i] += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        }
        offsets.push((s + 1) as f64 * h);
        positions.extend_from_slice(&y);
        velocities.extend_from_slice(&v);
    }
    Ok((offsets, positions, velocities, halt))
}

fn reversed(f: &VectorField, t0: f64, offsets: &[f64], positions: &[f64], velocities: &[f64]) -> Result<Trajectory> {
    let d = f.dim();
    let n = offsets.len();
    let mut o = Vec::with_capacity(n);
    let mut p = Vec::with_capacity(positions.len());
    let mut v = Vec::with_capacity(velocities.len());
    for i in (0..n).rev() {
        o.push(offsets[i]);
        p.extend_from_slice(&positions[i * d..(i + 1) * d]);
        v.extend_from_slice(&velocities[i * d..(i + 1) * d]);
    }
    Trajectory::new(f.name(), t0, d, o, p, v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Deviation {
    pub position: f64,
    pub velocity: f64,
    pub compared_points: usize,
}

/// Sup-norm deviation on the common time range. The trajectory with more
/// nodes per unit time is interpolated linearly onto the other's nodes.
pub fn compare(a: &Trajectory, b: &Trajectory) -> Result<Deviation> {
    if a.dim != b.dim {
        return Err(Error::Invalid(format!("dimensions differ: {} vs {}", a.dim, b.dim)));
    }
    let lo = a.start().max(b.start());
    let hi = a.end().min(b.end());
    if lo > hi {
        return Err(Error::DisjointRanges);
    }
    let density = |t: &Trajectory| {
        let span = t.end() - t.start();
        if span > 0.0 {
            (t.len() - 1) as f64 / span
        } else {
            f64::INFINITY
        }
    };
    let (coarse, fine) = if density(a) <= density(b) { (a, b) } else { (b, a) };
    let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
    let mut dev = Deviation {
        position: 0.0,
        velocity: 0.0,
        compared_points: 0,
    };
    for i in 0..coarse.len() {
        let t = coarse.time(i);
        if t < lo - slack || t > hi + slack {
            continue;
        }
        let Some((y, v)) = fine.interpolate(t) else {
            continue;
        };
        dev.position = dev.position.max(norm::sup_diff(coarse.position(i), &y));
        dev.velocity = dev.velocity.max(norm::sup_diff(coarse.velocity(i), &v));
        dev.compared_points += 1;
    }
    if dev.compared_points == 0 {
        return Err(Error::DisjointRanges);
    }
    Ok(dev)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear9() -> VectorField {
        VectorField::scalar("linear9", |x| -9.0 * x)
    }

    #[test]
    fn cosine_at_unit_time() {
        let run = rk4_solve(&linear9(), &[1.0], &[0.0], 0.0, 1.0, &OracleConfig::default()).unwrap();
        assert!(run.halt.is_none());
        let end = run.trajectory.len() - 1;
        assert!((run.trajectory.position(end)[0] - 3.0_f64.cos()).abs() < 1e-10);
        assert!((run.trajectory.velocity(end)[0] + 3.0 * 3.0_f64.sin()).abs() < 1e-9);
    }

    #[test]
    fn fourth_order() {
        let err = |h: f64| {
            let run = rk4_solve(&linear9(), &[1.0], &[0.0], 0.0, 1.0, &OracleConfig::new(h).unwrap()).unwrap();
            let end = run.trajectory.len() - 1;
            (run.trajectory.position(end)[0] - 3.0_f64.cos()).abs()
        };
        let ratio = err(0.02) / err(0.01);
        assert!(ratio >= 14.0, "{ratio}");
    }

    #[test]
    fn zero_field_is_linear_motion() {
        let zero = VectorField::new("zero", 2, |_, out| out.fill(0.0));
        let run = rk4_solve(&zero, &[1.0, -1.0], &[0.5, 2.0], 3.0, -2.0, &OracleConfig::new(0.25).unwrap()).unwrap();
        let t = &run.trajectory;
        assert_eq!(t.start(), 1.0);
        assert_eq!(t.end(), 3.0);
        for i in 0..t.len() {
            let tau = t.offsets()[i];
            assert!((t.position(i)[0] - (1.0 + 0.5 * tau)).abs() < 1e-15);
            assert!((t.position(i)[1] - (-1.0 + 2.0 * tau)).abs() < 1e-15);
        }
    }

    #[test]
    fn forward_then_backward_returns() {
        let pendulum = VectorField::scalar("pendulum", |x| -x.sin());
        let cfg = OracleConfig::default();
        let fwd = rk4_solve(&pendulum, &[0.7], &[0.2], 0.0, 1.0, &cfg).unwrap();
        let end = fwd.trajectory.len() - 1;
        let back = rk4_solve(
            &pendulum,
            fwd.trajectory.position(end),
            fwd.trajectory.velocity(end),
            1.0,
            -1.0,
            &cfg,
        )
        .unwrap();
        assert!((back.trajectory.position(0)[0] - 0.7).abs() < 1e-9);
        assert!((back.trajectory.velocity(0)[0] - 0.2).abs() < 1e-9);
    }

    #[test]
    fn guard_trip_keeps_partial_path() {
        let inverse = VectorField::scalar("fall", |x| -1.0 / (x * x))
            .with_guard(0.05, |y| (y[0] < 0.05).then(|| "too close".into()));
        let run = rk4_solve(&inverse, &[1.0], &[0.0], 0.0, 5.0, &OracleConfig::new(1e-3).unwrap()).unwrap();
        let halt = run.halt.expect("the particle reaches the singularity");
        assert!(halt.last_safe_time < 5.0);
        assert!((1..=4).contains(&halt.stage));
        assert_eq!(run.trajectory.end(), halt.last_safe_time);
        assert!(run.trajectory.positions().iter().all(|&x| x >= 0.05));
    }

    #[test]
    fn symmetric_helper_is_mirrored() {
        let run = rk4_symmetric(&linear9(), &[1.0], &[0.0], 2.0, 0.5, &OracleConfig::new(1e-3).unwrap()).unwrap();
        assert!(run.trajectory.is_symmetric());
        assert!(run.trajectory.position_parity(1e-12).unwrap().even_defect < 1e-14);
    }

    #[test]
    fn compare_examples() {
        let run = rk4_solve(&linear9(), &[1.0], &[0.0], 0.0, 1.0, &OracleConfig::default()).unwrap();
        let d = compare(&run.trajectory, &run.trajectory).unwrap();
        assert_eq!(d.position, 0.0);
        assert_eq!(d.velocity, 0.0);

        let pendulum = VectorField::scalar("pendulum", |x| -x.sin());
        let coarse = rk4_solve(&pendulum, &[1.0], &[0.0], 0.0, 1.0, &OracleConfig::new(1e-3).unwrap()).unwrap();
        let fine = rk4_solve(&pendulum, &[1.0], &[0.0], 0.0, 1.0, &OracleConfig::new(1e-4).unwrap()).unwrap();
        let d = compare(&coarse.trajectory, &fine.trajectory).unwrap();
        assert!(d.position <= 1e-8, "{d:?}");

        let later = rk4_solve(&pendulum, &[1.0], &[0.0], 5.0, 1.0, &OracleConfig::new(1e-3).unwrap()).unwrap();
        assert!(matches!(compare(&coarse.trajectory, &later.trajectory), Err(Error::DisjointRanges)));
    }
}
