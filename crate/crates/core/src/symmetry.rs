//! Parity calculus for sampled functions and vector fields.
//!
//! A [`SampledFunction`] lives on a grid mirrored about `t = 0`, so the
//! parity of derivatives, antiderivatives and double integrals can be
//! measured directly by comparing node `k` with node `-k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, FieldError, Result};
use crate::field::{Parity, VectorField};
use crate::norm;
use crate::quadrature;
use crate::sampling::HaltonCube;

pub const DEFAULT_PARITY_TOL: f64 = 1e-10;

/// Vector-valued samples on a grid `t_{-N} < ... < t_0 = 0 < ... < t_N` with
/// `t_{-k} = -t_k` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Vec<f64>,
    dim: usize,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(grid: Vec<f64>, dim: usize, values: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        if values.len() != grid.len() * dim {
            return Err(Error::Invalid(format!(
                "{} values for {} grid points of dimension {dim}",
                values.len(),
                grid.len()
            )));
        }
        check_symmetric(&grid)?;
        Ok(Self { grid, dim, values })
    }

    /// Uniform grid of `2 n_half + 1` points on `[-half_width, half_width]`,
    /// built by mirroring the non-negative half.
    pub fn uniform<F>(half_width: f64, n_half: usize, dim: usize, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Vec<f64>,
    {
        if !(half_width > 0.0) || n_half == 0 {
            return Err(Error::Invalid("need half_width > 0 and n_half >= 1".into()));
        }
        let grid = symmetric_grid(half_width, n_half);
        let mut values = Vec::with_capacity(grid.len() * dim);
        for &t in &grid {
            let v = f(t);
            if v.len() != dim {
                return Err(Error::Invalid(format!("f returned {} components, expected {dim}", v.len())));
            }
            values.extend(v);
        }
        Self::new(grid, dim, values)
    }

    pub fn scalar<F: Fn(f64) -> f64>(half_width: f64, n_half: usize, f: F) -> Result<Self> {
        Self::uniform(half_width, n_half, 1, |t| vec![f(t)])
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    fn half(&self) -> usize {
        self.grid.len() / 2
    }

    /// Spacing of a uniform grid; errors otherwise.
    pub fn uniform_step(&self) -> Result<f64> {
        let n = self.half();
        if n == 0 {
            return Err(Error::Invalid("grid has a single point".into()));
        }
        let h = self.grid[n + 1];
        for i in 1..self.grid.len() {
            let d = self.grid[i] - self.grid[i - 1];
            if (d - h).abs() > 1e-9 * h {
                return Err(Error::NonUniformGrid {
                    index: i,
                    found: d,
                    expected: h,
                });
            }
        }
        Ok(h)
    }
}

/// `2 n + 1` mirrored nodes; positive nodes are `half_width * k / n`.
pub fn symmetric_grid(half_width: f64, n: usize) -> Vec<f64> {
    let pos: Vec<f64> = (0..=n).map(|k| half_width * (k as f64 / n as f64)).collect();
    pos.iter().skip(1).rev().map(|t| -t).chain(pos.iter().copied()).collect()
}

fn check_symmetric(grid: &[f64]) -> Result<()> {
    let len = grid.len();
    if len % 2 == 0 {
        return Err(Error::Invalid(format!("symmetric grid needs an odd length, got {len}")));
    }
    let mid = len / 2;
    for k in 0..=mid {
        let (lo, hi) = (mid - k, mid + k);
        if grid[lo] + grid[hi] != 0.0 {
            return Err(Error::AsymmetricGrid {
                lo,
                hi,
                t_lo: grid[lo],
                t_hi: grid[hi],
            });
        }
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Invalid("grid must be strictly increasing".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParityReport {
    pub even_defect: f64,
    pub odd_defect: f64,
    pub classification: Parity,
    pub tol: f64,
    /// Mirrored pairs left out of the defects (non-smooth points).
    #[serde(default)]
    pub excluded_points: usize,
}

impl ParityReport {
    fn from_defects(even_defect: f64, odd_defect: f64, tol: f64, excluded_points: usize) -> Self {
        Self {
            even_defect,
            odd_defect,
            classification: Parity::classify(even_defect, odd_defect, tol),
            tol,
            excluded_points,
        }
    }
}

/// Max-norm defects of `v(t) - v(-t)` and `v(t) + v(-t)` over mirrored
/// node pairs of a flat node-major array. Pairs with `skip[k]` set are ignored.
pub(crate) fn mirrored_defects(values: &[f64], dim: usize, skip: Option<&[bool]>) -> (f64, f64) {
    let nodes = values.len() / dim;
    let mid = nodes / 2;
    let mut even = 0.0_f64;
    let mut odd = 0.0_f64;
    for k in 1..=mid {
        if skip.is_some_and(|s| s[k]) {
            continue;
        }
        let a = &values[(mid + k) * dim..(mid + k + 1) * dim];
        let b = &values[(mid - k) * dim..(mid - k + 1) * dim];
        even = even.max(norm::sup_diff(a, b));
        odd = odd.max(norm::sup_sum(a, b));
    }
    // v(0) + v(-0) = 2 v(0)
    if !skip.is_some_and(|s| s[0]) {
        odd = odd.max(2.0 * norm::sup(&values[mid * dim..(mid + 1) * dim]));
    }
    (even, odd)
}

pub fn parity_defects(f: &SampledFunction, tol: f64) -> Result<ParityReport> {
    check_symmetric(&f.grid)?;
    let (even, odd) = mirrored_defects(&f.values, f.dim, None);
    Ok(ParityReport::from_defects(even, odd, tol, 0))
}

/// `G(t) = \int_0^t f`, with the parity report of `G`.
pub fn antiderivative_parity_check(
    f: &SampledFunction,
    tol: f64,
) -> Result<(SampledFunction, ParityReport)> {
    let h = integration_step(f)?;
    let integrals = quadrature::mirrored(h, &f.values, f.dim);
    let g = SampledFunction {
        grid: f.grid.clone(),
        dim: f.dim,
        values: integrals.single,
    };
    let report = parity_defects(&g, tol)?;
    Ok((g, report))
}

/// `F(t) = \int_0^t \int_0^u f`, with the parity report of `F`.
pub fn double_integral_parity_check(
    f: &SampledFunction,
    tol: f64,
) -> Result<(SampledFunction, ParityReport)> {
    let h = integration_step(f)?;
    let integrals = quadrature::mirrored(h, &f.values, f.dim);
    let g = SampledFunction {
        grid: f.grid.clone(),
        dim: f.dim,
        values: integrals.double,
    };
    let report = parity_defects(&g, tol)?;
    Ok((g, report))
}

fn integration_step(f: &SampledFunction) -> Result<f64> {
    check_symmetric(&f.grid)?;
    if f.len() < 5 {
        return Err(Error::Invalid(format!("need at least 5 grid points, got {}", f.len())));
    }
    f.uniform_step()
}

/// Finite-difference derivative with the parity report of the result.
///
/// Central differences inside, second-order one-sided differences at the two
/// ends. Nodes where the forward and backward one-sided stencils disagree by
/// more than ten times their median disagreement are treated as kinks and
/// left out of the parity report.
pub fn derivative_parity_check(
    f: &SampledFunction,
    tol: f64,
) -> Result<(SampledFunction, ParityReport)> {
    check_symmetric(&f.grid)?;
    if f.len() < 5 {
        return Err(Error::Invalid(format!("need at least 5 grid points, got {}", f.len())));
    }
    let h = f.uniform_step()?;
    let dim = f.dim;
    let len = f.len();
    let last = len - 1;
    let v = |i: usize, c: usize| f.values[i * dim + c];

    let mut out = vec![0.0; f.values.len()];
    for c in 0..dim {
        out[c] = (-3.0 * v(0, c) + 4.0 * v(1, c) - v(2, c)) / (2.0 * h);
        out[last * dim + c] = (3.0 * v(last, c) - 4.0 * v(last - 1, c) + v(last - 2, c)) / (2.0 * h);
        for i in 1..last {
            out[i * dim + c] = (v(i + 1, c) - v(i - 1, c)) / (2.0 * h);
        }
    }

    let mut disagreement = vec![0.0; len];
    let mut measured = Vec::new();
    for (i, d) in disagreement.iter_mut().enumerate().take(last - 1).skip(2) {
        let mut worst = 0.0_f64;
        for c in 0..dim {
            let fwd = (-3.0 * v(i, c) + 4.0 * v(i + 1, c) - v(i + 2, c)) / (2.0 * h);
            let bwd = (3.0 * v(i, c) - 4.0 * v(i - 1, c) + v(i - 2, c)) / (2.0 * h);
            worst = worst.max((fwd - bwd).abs());
        }
        *d = worst;
        measured.push(worst);
    }
    let median = if measured.is_empty() {
        0.0
    } else {
        measured.sort_by(f64::total_cmp);
        measured[measured.len() / 2]
    };
    let rounding_floor = 1e3 * f64::EPSILON * norm::sup(&f.values) / h;
    let threshold = (10.0 * median).max(rounding_floor);

    let mid = len / 2;
    let skip: Vec<bool> = (0..=mid)
        .map(|k| disagreement[mid + k] > threshold || disagreement[mid - k] > threshold)
        .collect();
    let excluded = skip.iter().filter(|s| **s).count();

    let (even, odd) = mirrored_defects(&out, dim, Some(&skip));
    let derivative = SampledFunction {
        grid: f.grid.clone(),
        dim,
        values: out,
    };
    Ok((derivative, ParityReport::from_defects(even, odd, tol, excluded)))
}

/// Sampling region for the field classifiers: the max-norm ball
/// `|y - center| <= radius`, together with its reflection `-y`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBall {
    pub center: Vec<f64>,
    pub radius: f64,
    pub samples: usize,
    pub seed: u64,
}

impl SampleBall {
    pub fn new(center: Vec<f64>, radius: f64, samples: usize, seed: u64) -> Self {
        Self {
            center,
            radius,
            samples,
            seed,
        }
    }

    fn points(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        HaltonCube::new(self.center.len(), self.seed)
            .take(self.samples)
            .map(move |u| {
                self.center
                    .iter()
                    .zip(u)
                    .map(|(c, x)| c + self.radius * x)
                    .collect()
            })
    }
}

/// Ordinary parity of a vector field: compares `f(y)` with `f(-y)`.
pub fn classify_field_parity(f: &VectorField, ball: &SampleBall, tol: f64) -> Result<ParityReport> {
    if ball.center.len() != f.dim() {
        return Err(Error::Invalid(format!(
            "centre has {} components, field has {}",
            ball.center.len(),
            f.dim()
        )));
    }
    let mut even = 0.0_f64;
    let mut odd = 0.0_f64;
    let mut fy = vec![0.0; f.dim()];
    let mut fm = vec![0.0; f.dim()];
    for y in ball.points() {
        let minus: Vec<f64> = y.iter().map(|x| -x).collect();
        f.eval(&y, &mut fy)?;
        f.eval(&minus, &mut fm)?;
        even = even.max(norm::sup_diff(&fy, &fm));
        odd = odd.max(norm::sup_sum(&fy, &fm));
    }
    Ok(ParityReport::from_defects(even, odd, tol, 0))
}

fn checked(h: &dyn Fn(&[f64]) -> f64, y: &[f64]) -> std::result::Result<f64, FieldError> {
    let v = h(y);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(FieldError {
            point: y.to_vec(),
            reason: "non-finite value".into(),
        })
    }
}

/// Ordinary parity of a scalar function of several variables.
pub fn classify_scalar_parity(
    h: &dyn Fn(&[f64]) -> f64,
    ball: &SampleBall,
    tol: f64,
) -> Result<ParityReport> {
    let mut even = 0.0_f64;
    let mut odd = 0.0_f64;
    for y in ball.points() {
        let minus: Vec<f64> = y.iter().map(|x| -x).collect();
        let (a, b) = (checked(h, &y)?, checked(h, &minus)?);
        even = even.max((a - b).abs());
        odd = odd.max((a + b).abs());
    }
    Ok(ParityReport::from_defects(even, odd, tol, 0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrictParity {
    pub per_coordinate: Vec<ParityReport>,
    /// Even (odd) when every coordinate is even (odd), otherwise neither.
    pub aggregate: Parity,
}

/// Parity in the strict sense: one coordinate is flipped at a time.
pub fn classify_strict_parity(
    h: &dyn Fn(&[f64]) -> f64,
    ball: &SampleBall,
    tol: f64,
) -> Result<StrictParity> {
    let n = ball.center.len();
    let mut even = vec![0.0_f64; n];
    let mut odd = vec![0.0_f64; n];
    for y in ball.points() {
        let base = checked(h, &y)?;
        let mut flipped = y.clone();
        for j in 0..n {
            flipped[j] = -y[j];
            let v = checked(h, &flipped)?;
            flipped[j] = y[j];
            even[j] = even[j].max((base - v).abs());
            odd[j] = odd[j].max((base + v).abs());
        }
    }
    let per_coordinate: Vec<ParityReport> = even
        .iter()
        .zip(&odd)
        .map(|(&e, &o)| ParityReport::from_defects(e, o, tol, 0))
        .collect();
    let aggregate = if per_coordinate.iter().all(|r| r.classification == Parity::Even) {
        Parity::Even
    } else if per_coordinate.iter().all(|r| r.classification == Parity::Odd) {
        Parity::Odd
    } else {
        Parity::Neither
    };
    Ok(StrictParity {
        per_coordinate,
        aggregate,
    })
}

/// Exponents of a monomial `y_1^{p_1} ... y_N^{p_N}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialSpec {
    exponents: Vec<u32>,
}

impl MonomialSpec {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::Invalid("monomial needs at least one variable".into()));
        }
        Ok(Self { exponents })
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        self.exponents
            .iter()
            .zip(y)
            .map(|(&p, &x)| x.powi(p as i32))
            .product()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MonomialParity {
    pub ordinary: Parity,
    pub strict_even: bool,
    pub strict_odd: bool,
}

/// Flipping every variable multiplies the monomial by `(-1)^{sum p}`;
/// flipping only `y_j` multiplies it by `(-1)^{p_j}`.
pub fn classify_monomial_parity(m: &MonomialSpec) -> MonomialParity {
    let total: u64 = m.exponents.iter().map(|&p| u64::from(p)).sum();
    MonomialParity {
        ordinary: if total % 2 == 0 { Parity::Even } else { Parity::Odd },
        strict_even: m.exponents.iter().all(|p| p % 2 == 0),
        strict_odd: m.exponents.iter().all(|p| p % 2 == 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five_point(f: impl Fn(f64) -> f64) -> SampledFunction {
        SampledFunction::scalar(1.0, 2, f).unwrap()
    }

    #[test]
    fn grid_is_mirror_exact() {
        for n in [1, 3, 10, 333] {
            let g = symmetric_grid(0.7, n);
            for k in 0..=n {
                assert_eq!(g[n - k] + g[n + k], 0.0);
            }
        }
    }

    #[test]
    fn rejects_asymmetric_grid() {
        let err = SampledFunction::new(vec![-1.0, 0.0, 1.1], 1, vec![0.0; 3]).unwrap_err();
        assert!(matches!(err, Error::AsymmetricGrid { .. }));
        assert!(SampledFunction::new(vec![-1.0, 1.0], 1, vec![0.0; 2]).is_err());
    }

    #[test]
    fn defects_of_simple_polynomials() {
        let r = parity_defects(&five_point(|t| t * t), DEFAULT_PARITY_TOL).unwrap();
        assert_eq!((r.even_defect, r.odd_defect, r.classification), (0.0, 2.0, Parity::Even));

        let r = parity_defects(&five_point(|t| t * t * t), DEFAULT_PARITY_TOL).unwrap();
        assert_eq!((r.even_defect, r.odd_defect, r.classification), (2.0, 0.0, Parity::Odd));

        let r = parity_defects(&five_point(|t| t + t * t), DEFAULT_PARITY_TOL).unwrap();
        assert_eq!((r.even_defect, r.odd_defect, r.classification), (2.0, 2.0, Parity::Neither));
    }

    #[test]
    fn zero_function_is_even() {
        let r = parity_defects(&five_point(|_| 0.0), DEFAULT_PARITY_TOL).unwrap();
        assert_eq!(r.classification, Parity::Even);
        assert_eq!((r.even_defect, r.odd_defect), (0.0, 0.0));
    }

    #[test]
    fn antiderivative_examples() {
        let f = SampledFunction::scalar(1.0, 100, |t| t).unwrap();
        let (g, r) = antiderivative_parity_check(&f, DEFAULT_PARITY_TOL).unwrap();
        assert!(r.even_defect <= 1e-12);
        for (t, v) in g.grid().iter().zip(g.values()) {
            assert!((v - t * t / 2.0).abs() < 1e-14);
        }

        let f = SampledFunction::scalar(1.0, 100, f64::cos).unwrap();
        let (g, r) = antiderivative_parity_check(&f, DEFAULT_PARITY_TOL).unwrap();
        assert_eq!(r.classification, Parity::Odd);
        assert!(r.odd_defect <= 1e-9);
        for (t, v) in g.grid().iter().zip(g.values()) {
            assert!((v - t.sin()).abs() < 1e-9);
        }

        let f = SampledFunction::scalar(1.0, 100, |_| 1.0).unwrap();
        let (_, r) = antiderivative_parity_check(&f, DEFAULT_PARITY_TOL).unwrap();
        assert_eq!(r.odd_defect, 0.0);
    }

    #[test]
    fn double_integral_examples() {
        let f = SampledFunction::scalar(1.0, 100, |_| 1.0).unwrap();
        let (g, r) = double_integral_parity_check(&f, DEFAULT_PARITY_TOL).unwrap();
        assert_eq!(r.even_defect, 0.0);
        for (t, v) in g.grid().iter().zip(g.values()) {
            assert!((v - t * t / 2.0).abs() < 1e-14);
        }

        let f = SampledFunction::scalar(1.0, 100, |t| t).unwrap();
        let (g, r) = double_integral_parity_check(&f, DEFAULT_PARITY_TOL).unwrap();
        assert!(r.odd_defect <= 1e-12);
        for (t, v) in g.grid().iter().zip(g.values()) {
            assert!((v - t.powi(3) / 6.0).abs() < 1e-14);
        }

        let f = SampledFunction::scalar(1.0, 100, f64::cos).unwrap();
        let (g, r) = double_integral_parity_check(&f, DEFAULT_PARITY_TOL).unwrap();
        assert!(r.even_defect <= 1e-9);
        for (t, v) in g.grid().iter().zip(g.values()) {
            assert!((v - (1.0 - t.cos())).abs() < 1e-9);
        }
    }

    #[test]
    fn derivative_examples() {
        let f = SampledFunction::scalar(1.0, 100, |t| t * t).unwrap();
        let (d, r) = derivative_parity_check(&f, DEFAULT_PARITY_TOL).unwrap();
        assert_eq!(r.classification, Parity::Odd);
        assert!(r.odd_defect <= 1e-10);
        for (t, v) in d.grid().iter().zip(d.values()) {
            assert!((v - 2.0 * t).abs() < 1e-10);
        }

        let f = SampledFunction::scalar(1.0, 100, f64::sin).unwrap();
        let (d, r) = derivative_parity_check(&f, DEFAULT_PARITY_TOL).unwrap();
        assert!(r.even_defect <= 1e-6);
        for (t, v) in d.grid().iter().zip(d.values()) {
            assert!((v - t.cos()).abs() < 1e-4);
        }
    }

    #[test]
    fn derivative_of_abs_excludes_the_kink() {
        let f = SampledFunction::scalar(1.0, 100, f64::abs).unwrap();
        let (_, r) = derivative_parity_check(&f, 1e-6).unwrap();
        assert_eq!(r.classification, Parity::Odd);
        assert!(r.excluded_points >= 1);
    }

    #[test]
    fn derivative_needs_uniform_grid() {
        let grid = vec![-1.0, -0.3, -0.1, 0.0, 0.1, 0.3, 1.0];
        let f = SampledFunction::new(grid, 1, vec![0.0; 7]).unwrap();
        assert!(matches!(
            derivative_parity_check(&f, 1e-10),
            Err(Error::NonUniformGrid { .. })
        ));
    }

    #[test]
    fn strict_parity_examples() {
        let ball = SampleBall::new(vec![0.0, 0.0], 1.0, 64, 3);
        let h = |y: &[f64]| y[0].powi(5) * y[1].powi(3);
        assert_eq!(classify_scalar_parity(&h, &ball, 1e-12).unwrap().classification, Parity::Even);
        assert_eq!(classify_strict_parity(&h, &ball, 1e-12).unwrap().aggregate, Parity::Odd);

        let l = |y: &[f64]| y[0].powi(10) * y[1].powi(6);
        assert_eq!(classify_scalar_parity(&l, &ball, 1e-12).unwrap().classification, Parity::Even);
        assert_eq!(classify_strict_parity(&l, &ball, 1e-12).unwrap().aggregate, Parity::Even);

        let mixed = |y: &[f64]| y[0] + y[1] * y[1];
        let s = classify_strict_parity(&mixed, &ball, 1e-12).unwrap();
        assert_eq!(s.per_coordinate[0].classification, Parity::Neither);
        assert_eq!(s.per_coordinate[1].classification, Parity::Even);
        assert_eq!(s.aggregate, Parity::Neither);
    }

    #[test]
    fn monomial_examples() {
        let c = |e: Vec<u32>| classify_monomial_parity(&MonomialSpec::new(e).unwrap());
        assert_eq!(
            c(vec![5, 3]),
            MonomialParity { ordinary: Parity::Even, strict_even: false, strict_odd: true }
        );
        assert_eq!(
            c(vec![10, 6]),
            MonomialParity { ordinary: Parity::Even, strict_even: true, strict_odd: false }
        );
        assert_eq!(
            c(vec![0]),
            MonomialParity { ordinary: Parity::Even, strict_even: true, strict_odd: false }
        );
        assert!(MonomialSpec::new(vec![]).is_err());
    }

    #[test]
    fn field_classification() {
        let duffing = VectorField::scalar("duffing", |x| -x - x * x * x);
        let ball = SampleBall::new(vec![0.0], 2.0, 256, 1);
        let r = classify_field_parity(&duffing, &ball, 1e-10).unwrap();
        assert_eq!(r.classification, Parity::Odd);
        assert!(r.odd_defect <= 1e-14);

        let shifted = VectorField::scalar("a-exp", |x| 1.0 - x.exp());
        let r = classify_field_parity(&shifted, &ball, 1e-10).unwrap();
        assert_eq!(r.classification, Parity::Neither);
    }

    #[test]
    fn field_classification_reports_guard_trips() {
        let f = VectorField::scalar("inv", |x| 1.0 / x)
            .with_guard(0.5, |y| (y[0].abs() < 0.5).then(|| "singular".into()));
        let far = SampleBall::new(vec![3.0], 1.0, 64, 0);
        assert!(classify_field_parity(&f, &far, 1e-10).is_ok());
        let near = SampleBall::new(vec![0.0], 1.0, 64, 0);
        match classify_field_parity(&f, &near, 1e-10) {
            Err(Error::Field(e)) => assert!(e.point[0].abs() < 0.5),
            other => panic!("expected guard trip, got {other:?}"),
        }
    }
}
