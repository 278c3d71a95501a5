//! Successive approximations for `y'' = f(y)`, `y(t0) = y0`, `y'(t0) = eta`.
//!
//! The problem is recast as the fixed point
//!
//! ```text
//! phi(t) = phi0(t) + \int_{t0}^{t} \int_{t0}^{u} f(phi(s)) ds du,   phi0(t) = y0 + (t - t0) eta
//! ```
//!
//! and iterated on a uniform grid mirrored about `t0`. The tube
//! `D = { y : |y - phi0(t)| <= b }` with `|f| <= M` on `D` guarantees every
//! iterate stays in `D` for `|t - t0| <= sqrt(2b/M)`, and with a Lipschitz
//! constant `K` the increments obey
//! `|phi_j - phi_{j-1}| <= M K^{j-1} |t - t0|^{2j} / (2j)!`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::norm;
use crate::quadrature;
use crate::sampling::{extreme_points, HaltonCube};
use crate::symmetry::symmetric_grid;
use crate::trajectory::Trajectory;

/// Relative margin applied to sampled suprema of `|f|` and of the Jacobian.
pub const SAFETY_MARGIN: f64 = 0.05;

/// Parity tolerance promised by the symmetric constructors.
pub const MIRROR_TOL: f64 = 1e-12;

/// The tube `{ y : |y - y0 - (t - t0) eta| <= b }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainTube {
    pub y0: Vec<f64>,
    pub eta: Vec<f64>,
    pub t0: f64,
    pub b: f64,
}

impl DomainTube {
    pub fn new(y0: Vec<f64>, eta: Vec<f64>, t0: f64, b: f64) -> Result<Self> {
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::Invalid(format!("tube radius b must be positive and finite, got {b}")));
        }
        if y0.len() != eta.len() || y0.is_empty() {
            return Err(Error::Invalid(format!(
                "y0 has {} components and eta has {}",
                y0.len(),
                eta.len()
            )));
        }
        if y0.iter().chain(&eta).chain([&t0]).any(|v| !v.is_finite()) {
            return Err(Error::Invalid("initial data must be finite".into()));
        }
        Ok(Self { y0, eta, t0, b })
    }

    pub fn dim(&self) -> usize {
        self.y0.len()
    }

    /// `phi0` at offset `tau = t - t0`.
    pub fn seed(&self, tau: f64) -> Vec<f64> {
        self.y0.iter().zip(&self.eta).map(|(y, e)| y + tau * e).collect()
    }

    pub fn is_moving(&self) -> bool {
        self.eta.iter().any(|e| *e != 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PicardConfig {
    pub grid_points_per_half: usize,
    pub max_iterations: usize,
    pub stop_tol: f64,
    pub m_override: Option<f64>,
    pub k_override: Option<f64>,
    /// Sub-linear growth constants `(M1, M2)` with `|f(y)| <= M1 |y| + M2`.
    pub sublinear: Option<(f64, f64)>,
    /// Upper limit on the half-width `L`; it may only shrink the interval.
    pub l_cap: Option<f64>,
    pub samples_for_estimation: usize,
    pub seed: u64,
}

impl Default for PicardConfig {
    fn default() -> Self {
        Self {
            grid_points_per_half: 512,
            max_iterations: 40,
            stop_tol: 1e-12,
            m_override: None,
            k_override: None,
            sublinear: None,
            l_cap: None,
            samples_for_estimation: 512,
            seed: 0,
        }
    }
}

impl PicardConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Invalid(msg.to_string()));
        if self.grid_points_per_half < 8 {
            return bad("grid_points_per_half must be at least 8");
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be at least 1");
        }
        if !(self.stop_tol > 0.0) {
            return bad("stop_tol must be positive");
        }
        if self.samples_for_estimation == 0 {
            return bad("samples_for_estimation must be positive");
        }
        if self.m_override.is_some_and(|m| !(m >= 0.0) || !m.is_finite()) {
            return bad("M override must be finite and non-negative");
        }
        if self.k_override.is_some_and(|k| !(k >= 0.0) || !k.is_finite()) {
            return bad("K override must be finite and non-negative");
        }
        if self.sublinear.is_some_and(|(a, b)| !(a >= 0.0 && b >= 0.0)) {
            return bad("sub-linear constants must be non-negative");
        }
        if self.l_cap.is_some_and(|l| !(l > 0.0)) {
            return bad("L cap must be positive");
        }
        Ok(())
    }
}

/// Points of the tube over `|t - t0| <= l`: Halton samples plus the cube
/// corners at `tau = -l, 0, l`. Yields `(tau, y)`.
fn tube_points(tube: &DomainTube, l: f64, cfg: &PicardConfig) -> Vec<Vec<f64>> {
    let n = tube.dim();
    let taus: &[f64] = if l > 0.0 && tube.is_moving() { &[-l, 0.0, l] } else { &[0.0] };
    let mut out = Vec::new();
    for &tau in taus {
        let c = tube.seed(tau);
        out.push(c.clone());
        for corner in extreme_points(n) {
            out.push(c.iter().zip(corner).map(|(ci, u)| ci + tube.b * u).collect());
        }
    }
    for u in HaltonCube::new(n + 1, cfg.seed).take(cfg.samples_for_estimation) {
        let tau = if tube.is_moving() { l * u[0] } else { 0.0 };
        let c = tube.seed(tau);
        out.push(c.iter().zip(&u[1..]).map(|(ci, x)| ci + tube.b * x).collect());
    }
    out
}

/// Bound `M` on `|f|` over the tube for `|t - t0| <= l_candidate`.
///
/// Sampled mode returns `(1 + 0.05) max |f|`. With sub-linear constants the
/// bound is `M1 (sup |phi0| + b) + M2` and `f` is not evaluated.
pub fn estimate_bound_m(
    f: &VectorField,
    tube: &DomainTube,
    l_candidate: f64,
    cfg: &PicardConfig,
) -> Result<f64> {
    check_dims(f, tube)?;
    if let Some((m1, m2)) = cfg.sublinear {
        let lo = tube.seed(-l_candidate);
        let hi = tube.seed(l_candidate);
        let reach = norm::sup(&lo).max(norm::sup(&hi)) + tube.b;
        return Ok(m1 * reach + m2);
    }
    let mut out = vec![0.0; f.dim()];
    let mut worst = 0.0_f64;
    for y in tube_points(tube, l_candidate, cfg) {
        f.eval(&y, &mut out)?;
        worst = worst.max(norm::sup(&out));
    }
    Ok((1.0 + SAFETY_MARGIN) * worst)
}

/// Lipschitz constant `K` of `f` on the tube, from central-difference
/// Jacobians (relative step `1e-6`) in the induced max norm.
pub fn estimate_lipschitz_k(
    f: &VectorField,
    tube: &DomainTube,
    l: f64,
    cfg: &PicardConfig,
) -> Result<f64> {
    check_dims(f, tube)?;
    let n = f.dim();
    let mut jac = vec![0.0; n * n];
    let mut up = vec![0.0; n];
    let mut down = vec![0.0; n];
    let mut worst = 0.0_f64;
    for y in tube_points(tube, l, cfg) {
        let mut probe = y.clone();
        for j in 0..n {
            let step = 1e-6 * y[j].abs().max(1.0);
            probe[j] = y[j] + step;
            f.eval(&probe, &mut up)?;
            probe[j] = y[j] - step;
            f.eval(&probe, &mut down)?;
            probe[j] = y[j];
            for i in 0..n {
                jac[i * n + j] = (up[i] - down[i]) / (2.0 * step);
            }
        }
        worst = worst.max(norm::induced_sup(&jac, n));
    }
    Ok((1.0 + SAFETY_MARGIN) * worst)
}

fn check_dims(f: &VectorField, tube: &DomainTube) -> Result<()> {
    if f.dim() != tube.dim() {
        return Err(Error::Invalid(format!(
            "field `{}` has dimension {} but the initial data has {}",
            f.name(),
            f.dim(),
            tube.dim()
        )));
    }
    Ok(())
}

/// `L = sqrt(2b/M)`; `+inf` when `M = 0`.
pub fn existence_interval(b: f64, m: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::Invalid(format!("tube radius must be positive, got {b}")));
    }
    if !(m >= 0.0) {
        return Err(Error::Invalid(format!("bound M must be non-negative, got {m}")));
    }
    Ok(if m == 0.0 { f64::INFINITY } else { (2.0 * b / m).sqrt() })
}

/// `M K^{j-1} t^{2j} / (2j)!`, the bound on `|phi_j - phi_{j-1}|`.
///
/// With `K = 0` the field is constant: only the first term, `M t^2 / 2`,
/// survives.
pub fn majorant_bound(m: f64, k: f64, j: usize, t: f64) -> f64 {
    assert!(j >= 1, "iteration index starts at 1");
    let t2 = t * t;
    let mut term = m * t2 / 2.0;
    for i in 2..=j {
        if term == 0.0 {
            break;
        }
        let (a, b) = ((2 * i - 1) as f64, (2 * i) as f64);
        term *= k * t2 / (a * b);
    }
    term
}

/// Sum of all majorant terms: `(M/K)(cosh(sqrt(K) t) - 1)`, or `M t^2 / 2`
/// when `K = 0`.
pub fn majorant_total(m: f64, k: f64, t: f64) -> f64 {
    if k == 0.0 {
        return m * t * t / 2.0;
    }
    // cosh(x) - 1 = 2 sinh(x/2)^2 avoids cancellation for small x.
    let half = 0.5 * k.sqrt() * t.abs();
    2.0 * m / k * half.sinh().powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Tolerance,
    QuadratureFloor,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    #[serde(rename = "iterations")]
    pub iterations_run: usize,
    pub increments: Vec<f64>,
    pub majorant_terms: Vec<f64>,
    #[serde(rename = "M")]
    pub m_used: f64,
    #[serde(rename = "K")]
    pub k_used: f64,
    #[serde(rename = "b")]
    pub b_used: f64,
    #[serde(rename = "L")]
    pub l_used: f64,
    /// `sqrt(2b/M)` before any cap.
    pub l_theory: f64,
    #[serde(rename = "integral_residual")]
    pub final_integral_residual: f64,
    #[serde(rename = "ode_residual")]
    pub final_ode_residual: f64,
    pub converged: bool,
    pub stop_reason: StopReason,
    pub stop_tol: f64,
    /// `max |phi_j - phi0|` per iteration.
    pub tube_excursions: Vec<f64>,
    pub quadrature_floor: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl ConvergenceReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Iterations whose increment exceeds its majorant term by more than
    /// the quadrature floor, checked until increments reach the floor.
    pub fn majorant_violations(&self) -> Vec<usize> {
        self.increments
            .iter()
            .zip(&self.majorant_terms)
            .enumerate()
            .take_while(|(_, (inc, _))| **inc > self.quadrature_floor)
            .filter(|(_, (inc, maj))| **inc > **maj + self.quadrature_floor)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

/// `100 eps max |phi|`: increments below this are rounding noise.
pub fn quadrature_floor(positions: &[f64]) -> f64 {
    100.0 * f64::EPSILON * norm::sup(positions).max(1.0)
}

/// Resolves `(M, L, sqrt(2b/M))`. For a moving seed the tube depends on
/// `L`, so the candidate is shrunk until `L <= sqrt(2b/M(L))`.
pub fn resolve_interval(f: &VectorField, tube: &DomainTube, cfg: &PicardConfig) -> Result<(f64, f64, f64)> {
    let cap = cfg.l_cap.unwrap_or(f64::INFINITY);
    if let Some(m) = cfg.m_override {
        let lt = existence_interval(tube.b, m)?;
        return finite_interval(m, lt.min(cap), lt);
    }
    if !tube.is_moving() {
        let m = estimate_bound_m(f, tube, 0.0, cfg)?;
        let lt = existence_interval(tube.b, m)?;
        return finite_interval(m, lt.min(cap), lt);
    }
    let mut candidate = if cap.is_finite() {
        cap
    } else {
        let m0 = estimate_bound_m(f, tube, 0.0, cfg)?;
        existence_interval(tube.b, m0)?
    };
    if !candidate.is_finite() {
        return Err(Error::UnboundedInterval);
    }
    let mut last = (0.0, candidate, candidate);
    for _ in 0..64 {
        let m = estimate_bound_m(f, tube, candidate, cfg)?;
        let lt = existence_interval(tube.b, m)?;
        if lt.min(cap) >= candidate {
            return Ok((m, candidate, lt));
        }
        last = (m, lt.min(cap), lt);
        candidate = lt.min(cap);
    }
    Ok(last)
}

fn finite_interval(m: f64, l: f64, lt: f64) -> Result<(f64, f64, f64)> {
    if l.is_finite() {
        Ok((m, l, lt))
    } else {
        Err(Error::UnboundedInterval)
    }
}

/// Fixed data of one iteration run: grid, seed curve and spacing.
struct Scheme<'a> {
    f: &'a VectorField,
    tube: &'a DomainTube,
    offsets: Vec<f64>,
    seed: Vec<f64>,
    h: f64,
}

struct Iterate {
    positions: Vec<f64>,
    velocities: Vec<f64>,
}

impl<'a> Scheme<'a> {
    fn new(f: &'a VectorField, tube: &'a DomainTube, offsets: Vec<f64>) -> Self {
        let n = offsets.len() / 2;
        let h = offsets[n + 1] - offsets[n];
        let seed = offsets.iter().flat_map(|&tau| tube.seed(tau)).collect();
        Self {
            f,
            tube,
            offsets,
            seed,
            h,
        }
    }

    fn dim(&self) -> usize {
        self.tube.dim()
    }

    fn eval_all(&self, positions: &[f64]) -> Result<Vec<f64>> {
        let d = self.dim();
        let mut g = vec![0.0; positions.len()];
        for (y, out) in positions.chunks(d).zip(g.chunks_mut(d)) {
            self.f.eval(y, out)?;
        }
        Ok(g)
    }

    /// `phi0 + double integral of f(phi)` and `eta + single integral`.
    fn step(&self, positions: &[f64]) -> Result<Iterate> {
        let g = self.eval_all(positions)?;
        let ints = quadrature::mirrored(self.h, &g, self.dim());
        let positions = self.seed.iter().zip(&ints.double).map(|(s, d)| s + d).collect();
        let d = self.dim();
        let velocities = ints
            .single
            .iter()
            .enumerate()
            .map(|(i, s)| self.tube.eta[i % d] + s)
            .collect();
        Ok(Iterate {
            positions,
            velocities,
        })
    }

    /// Largest `|phi - phi0|` and the offset where it occurs.
    fn excursion(&self, positions: &[f64]) -> (f64, f64) {
        let d = self.dim();
        positions
            .chunks(d)
            .zip(self.seed.chunks(d))
            .zip(&self.offsets)
            .fold((0.0, 0.0), |(best, at), ((p, s), &tau)| {
                let e = norm::sup_diff(p, s);
                if e > best {
                    (e, tau)
                } else {
                    (best, at)
                }
            })
    }

    fn check_containment(&self, positions: &[f64], iteration: usize) -> Result<f64> {
        let (e, tau) = self.excursion(positions);
        if e > self.tube.b {
            return Err(Error::TubeEscape {
                iteration,
                offset: tau,
                excursion: e,
                b: self.tube.b,
            });
        }
        Ok(e)
    }

    fn trajectory(&self, it: Iterate) -> Trajectory {
        Trajectory::new(
            self.f.name(),
            self.tube.t0,
            self.dim(),
            self.offsets.clone(),
            it.positions,
            it.velocities,
        )
        .expect("scheme grid is valid")
    }
}

fn require_mirrored_uniform(traj: &Trajectory) -> Result<()> {
    if !traj.is_symmetric() || traj.len() < 5 {
        return Err(Error::Invalid("iterate must live on a mirrored grid of at least 5 nodes".into()));
    }
    let n = traj.len() / 2;
    let h = traj.offsets()[n + 1];
    for (i, w) in traj.offsets().windows(2).enumerate() {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h {
            return Err(Error::NonUniformGrid {
                index: i + 1,
                found: w[1] - w[0],
                expected: h,
            });
        }
    }
    Ok(())
}

/// The iterate `phi0` itself on a mirrored grid of half-width `l`.
pub fn seed_trajectory(f: &VectorField, tube: &DomainTube, l: f64, n_half: usize) -> Result<Trajectory> {
    check_dims(f, tube)?;
    let offsets = symmetric_grid(l, n_half);
    let positions = offsets.iter().flat_map(|&tau| tube.seed(tau)).collect();
    let velocities = offsets.iter().flat_map(|_| tube.eta.clone()).collect();
    Trajectory::new(f.name(), tube.t0, tube.dim(), offsets, positions, velocities)
}

/// One successive approximation: `phi0 + \int\int f(phi_j)`, with the
/// velocity `eta + \int f(phi_j)`. Both the input and output must lie in the tube.
pub fn picard_step(phi: &Trajectory, f: &VectorField, tube: &DomainTube) -> Result<Trajectory> {
    check_dims(f, tube)?;
    require_mirrored_uniform(phi)?;
    let scheme = Scheme::new(f, tube, phi.offsets().to_vec());
    scheme.check_containment(phi.positions(), 0)?;
    let next = scheme.step(phi.positions())?;
    scheme.check_containment(&next.positions, 1)?;
    Ok(scheme.trajectory(next))
}

/// Solves the initial value problem on `|t - t0| <= L`, `L = min(sqrt(2b/M), cap)`.
///
/// Non-convergence is not an error: the report carries `converged = false`.
pub fn solve_ivp(
    f: &VectorField,
    tube: &DomainTube,
    cfg: &PicardConfig,
) -> Result<(Trajectory, ConvergenceReport)> {
    cfg.validate()?;
    check_dims(f, tube)?;
    let (m, l, l_theory) = resolve_interval(f, tube, cfg)?;
    let k = match cfg.k_override.or(f.lipschitz_override()) {
        Some(k) => k,
        None => estimate_lipschitz_k(f, tube, l, cfg)?,
    };

    let scheme = Scheme::new(f, tube, symmetric_grid(l, cfg.grid_points_per_half));
    let mut positions = scheme.seed.clone();
    let mut velocities: Vec<f64> = scheme.offsets.iter().flat_map(|_| tube.eta.clone()).collect();
    let mut increments = Vec::new();
    let mut majorant_terms = Vec::new();
    let mut tube_excursions = Vec::new();
    let mut stop_reason = StopReason::MaxIterations;
    let mut floor = quadrature_floor(&positions);

    for j in 1..=cfg.max_iterations {
        let next = scheme.step(&positions)?;
        tube_excursions.push(scheme.check_containment(&next.positions, j)?);
        let inc = norm::sup_diff(&next.positions, &positions);
        increments.push(inc);
        majorant_terms.push(majorant_bound(m, k, j, l));
        positions = next.positions;
        velocities = next.velocities;
        floor = quadrature_floor(&positions);
        if inc <= cfg.stop_tol {
            stop_reason = StopReason::Tolerance;
            break;
        }
        if inc <= floor {
            stop_reason = StopReason::QuadratureFloor;
            break;
        }
    }

    let traj = scheme.trajectory(Iterate {
        positions,
        velocities,
    });
    let integral = integral_residual(&traj, f)?;
    let ode = ode_residual(&traj, f)?;

    let mut warnings = Vec::new();
    if !tube.is_moving() {
        let p = traj.position_parity(MIRROR_TOL)?;
        if p.even_defect > MIRROR_TOL {
            warnings.push(format!("zero initial velocity but even defect {:e}", p.even_defect));
        }
    }
    if tube.y0.iter().all(|v| *v == 0.0) && f.declared_parity() == crate::field::Parity::Odd {
        let p = traj.position_parity(MIRROR_TOL)?;
        if p.odd_defect > MIRROR_TOL {
            warnings.push(format!("odd field through the origin but odd defect {:e}", p.odd_defect));
        }
    }

    let report = ConvergenceReport {
        iterations_run: increments.len(),
        converged: stop_reason != StopReason::MaxIterations,
        increments,
        majorant_terms,
        m_used: m,
        k_used: k,
        b_used: tube.b,
        l_used: l,
        l_theory,
        final_integral_residual: integral,
        final_ode_residual: ode,
        stop_reason,
        stop_tol: cfg.stop_tol,
        tube_excursions,
        quadrature_floor: floor,
        warnings,
    };
    Ok((traj, report))
}

/// Max-norm defect of the integral equation, with the double integral
/// recomputed in single-integral form `\int_0^t (t - s) f(phi(s)) ds`
/// (a quadrature route independent of the one used by the iteration).
/// `y0` and `eta` are read from the centre node.
pub fn integral_residual(traj: &Trajectory, f: &VectorField) -> Result<f64> {
    require_mirrored_uniform(traj)?;
    let d = traj.dim;
    let n = traj.len() / 2;
    let h = traj.offsets()[n + 1];
    let y0 = traj.position(n).to_vec();
    let eta = traj.velocity(n).to_vec();

    let mut forward = Vec::with_capacity((n + 1) * d);
    let mut backward = Vec::with_capacity((n + 1) * d);
    let mut out = vec![0.0; d];
    for k in 0..=n {
        f.eval(traj.position(n + k), &mut out)?;
        forward.extend_from_slice(&out);
        f.eval(traj.position(n - k), &mut out)?;
        backward.extend_from_slice(&out);
    }

    let mut worst = 0.0_f64;
    let mut dbl = vec![0.0; d];
    for k in 0..=n {
        for (values, node, sign) in [(&forward, n + k, 1.0), (&backward, n - k, -1.0)] {
            quadrature::cauchy_double(h, values, d, k, &mut dbl);
            let tau = sign * traj.offsets()[n + k];
            let y = traj.position(node);
            for c in 0..d {
                let rhs = y0[c] + tau * eta[c] + dbl[c];
                worst = worst.max((y[c] - rhs).abs());
            }
        }
    }
    Ok(worst)
}

/// `max |phi'' - f(phi)|` with central second differences inside and
/// second-order one-sided differences at the two ends.
pub fn ode_residual(traj: &Trajectory, f: &VectorField) -> Result<f64> {
    require_mirrored_uniform(traj)?;
    let d = traj.dim;
    let len = traj.len();
    let h = traj.offsets()[len / 2 + 1];
    let h2 = h * h;
    let y = |i: usize, c: usize| traj.position(i)[c];
    let mut fy = vec![0.0; d];
    let mut worst = 0.0_f64;
    for i in 0..len {
        f.eval(traj.position(i), &mut fy)?;
        for (c, fc) in fy.iter().enumerate() {
            let second = if i == 0 {
                (2.0 * y(0, c) - 5.0 * y(1, c) + 4.0 * y(2, c) - y(3, c)) / h2
            } else if i == len - 1 {
                (2.0 * y(i, c) - 5.0 * y(i - 1, c) + 4.0 * y(i - 2, c) - y(i - 3, c)) / h2
            } else {
                (y(i + 1, c) - 2.0 * y(i, c) + y(i - 1, c)) / h2
            };
            worst = worst.max((second - fc).abs());
        }
    }
    Ok(worst)
}

/// Result of chaining local solves out to `|t - t0| >= T`.
#[derive(Debug, Clone)]
pub struct GlobalRun {
    pub trajectory: Trajectory,
    /// Absolute times where one local solve hands over to the next.
    pub stitches: Vec<f64>,
    /// `|y'|` jump at each stitch.
    pub stitch_velocity_jumps: Vec<f64>,
    pub segments: usize,
    /// Why the extension stopped short, if it did.
    pub halt: Option<String>,
}

impl GlobalRun {
    pub fn reached(&self, t0: f64, t_target: f64) -> bool {
        let tol = 1e-9 * (1.0 + t_target.abs());
        self.halt.is_none()
            && self.trajectory.end() >= t0 + t_target - tol
            && self.trajectory.start() <= t0 - t_target + tol
    }
}

/// Maximum number of local solves per direction.
pub const MAX_SEGMENTS: usize = 10_000;

/// Extends the solution to `[t0 - T, t0 + T]` by restarting at each interval
/// edge from the attained `(y, y')`. A guard trip or a failed local solve
/// stops that direction and is recorded in `halt`.
pub fn global_extend(
    f: &VectorField,
    tube: &DomainTube,
    cfg: &PicardConfig,
    t_target: f64,
) -> Result<GlobalRun> {
    cfg.validate()?;
    check_dims(f, tube)?;
    if !(t_target > 0.0) || !t_target.is_finite() {
        return Err(Error::Invalid(format!("target half-width must be positive, got {t_target}")));
    }
    let mut halts = Vec::new();
    let mut stitches = Vec::new();
    let mut jumps = Vec::new();
    let mut segments = 0;

    let mut halves = Vec::new();
    for direction in [1.0, -1.0] {
        let mut nodes: Vec<(f64, Vec<f64>, Vec<f64>)> = Vec::new();
        let mut start = (tube.t0, tube.y0.clone(), tube.eta.clone());
        let mut previous_end_velocity: Option<Vec<f64>> = None;
        let goal = tube.t0 + direction * t_target;
        let tol = 1e-12 * (1.0 + goal.abs());
        let mut local = 0;
        while direction * (goal - start.0) > tol {
            if local >= MAX_SEGMENTS {
                halts.push(format!("segment limit {MAX_SEGMENTS} reached at t = {}", start.0));
                break;
            }
            let remaining = direction * (goal - start.0);
            let seg_cfg = PicardConfig {
                l_cap: Some(cfg.l_cap.map_or(remaining, |c| c.min(remaining))),
                ..cfg.clone()
            };
            let seg_tube = DomainTube {
                y0: start.1.clone(),
                eta: start.2.clone(),
                t0: start.0,
                b: tube.b,
            };
            let (traj, report) = match solve_ivp(f, &seg_tube, &seg_cfg) {
                Ok(ok) => ok,
                Err(e) => {
                    halts.push(format!("halted at t = {}: {e}", start.0));
                    break;
                }
            };
            if !report.converged {
                halts.push(format!("local solve at t = {} did not converge", start.0));
                break;
            }
            local += 1;
            segments += 1;
            let center = traj.len() / 2;
            if let Some(prev) = previous_end_velocity.take() {
                stitches.push(start.0);
                jumps.push(norm::sup_diff(&prev, traj.velocity(center)));
            }
            let idx: Vec<usize> = if direction > 0.0 {
                (center + 1..traj.len()).collect()
            } else {
                (0..center).rev().collect()
            };
            for &i in &idx {
                nodes.push((traj.time(i), traj.position(i).to_vec(), traj.velocity(i).to_vec()));
            }
            let last = *idx.last().expect("grid has nodes on both sides");
            start = (traj.time(last), traj.position(last).to_vec(), traj.velocity(last).to_vec());
            previous_end_velocity = Some(start.2.clone());
        }
        halves.push(nodes);
    }

    let template = seed_trajectory(f, tube, 1.0, 8)?;
    let mut out = template.empty_like(tube.t0);
    let backward = halves.pop().expect("two directions");
    let forward = halves.pop().expect("two directions");
    for (t, y, v) in backward.iter().rev() {
        out.push_absolute(*t, y, v);
    }
    out.push_absolute(tube.t0, &tube.y0, &tube.eta);
    for (t, y, v) in &forward {
        out.push_absolute(*t, y, v);
    }
    let trajectory = out;
    stitches.sort_by(f64::total_cmp);

    Ok(GlobalRun {
        trajectory,
        stitches,
        stitch_velocity_jumps: jumps,
        segments,
        halt: (!halts.is_empty()).then(|| halts.join("; ")),
    })
}
