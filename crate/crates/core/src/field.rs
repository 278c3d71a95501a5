use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::FieldError;

/// Parity of a function of one or several variables under `y -> -y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Neither,
    Unknown,
}

impl Parity {
    /// Classification from measured defects; a tie (zero function) is even.
    pub fn classify(even_defect: f64, odd_defect: f64, tol: f64) -> Self {
        if even_defect <= tol {
            Parity::Even
        } else if odd_defect <= tol {
            Parity::Odd
        } else {
            Parity::Neither
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
            other => other,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::Neither => "neither",
            Parity::Unknown => "unknown",
        };
        f.write_str(s)
    }
}

type Rhs = dyn Fn(&[f64], &mut [f64]) + Send + Sync;
type Guard = dyn Fn(&[f64]) -> Option<String> + Send + Sync;
type Potential = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// Right-hand side `f` of `y'' = f(y)`.
///
/// Evaluation must be a pure function of the point. The optional potential
/// `V` is mass weighted: `w_i f_i(y) = -dV/dy_i`, with unit weights unless
/// the field says otherwise (N-body fields use the body masses).
#[derive(Clone)]
pub struct VectorField {
    name: String,
    dim: usize,
    rhs: Arc<Rhs>,
    guard: Option<Arc<Guard>>,
    guard_eps: f64,
    potential: Option<Arc<Potential>>,
    weights: Option<Vec<f64>>,
    declared_parity: Parity,
    lipschitz_override: Option<f64>,
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorField")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("declared_parity", &self.declared_parity)
            .field("guard_eps", &self.guard_eps)
            .field("has_potential", &self.potential.is_some())
            .finish()
    }
}

impl VectorField {
    pub fn new<F>(name: impl Into<String>, dim: usize, rhs: F) -> Self
    where
        F: Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
    {
        assert!(dim > 0, "vector field dimension must be positive");
        Self {
            name: name.into(),
            dim,
            rhs: Arc::new(rhs),
            guard: None,
            guard_eps: 0.0,
            potential: None,
            weights: None,
            declared_parity: Parity::Unknown,
            lipschitz_override: None,
        }
    }

    /// Scalar field `x'' = g(x)`.
    pub fn scalar<F>(name: impl Into<String>, g: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(name, 1, move |y, out| out[0] = g(y[0]))
    }

    /// `guard` returns a reason when the point is outside the domain of `f`.
    pub fn with_guard<G>(mut self, eps: f64, guard: G) -> Self
    where
        G: Fn(&[f64]) -> Option<String> + Send + Sync + 'static,
    {
        self.guard = Some(Arc::new(guard));
        self.guard_eps = eps;
        self
    }

    pub fn with_potential<P>(mut self, potential: P) -> Self
    where
        P: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        self.potential = Some(Arc::new(potential));
        self
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Self {
        assert_eq!(weights.len(), self.dim);
        self.weights = Some(weights);
        self
    }

    pub fn with_parity(mut self, parity: Parity) -> Self {
        self.declared_parity = parity;
        self
    }

    pub fn with_lipschitz(mut self, k: f64) -> Self {
        self.lipschitz_override = Some(k);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn declared_parity(&self) -> Parity {
        self.declared_parity
    }

    pub fn guard_eps(&self) -> f64 {
        self.guard_eps
    }

    pub fn lipschitz_override(&self) -> Option<f64> {
        self.lipschitz_override
    }

    pub fn has_potential(&self) -> bool {
        self.potential.is_some()
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[i])
    }

    /// Reason the point is outside the domain, if it is.
    pub fn guard_violation(&self, y: &[f64]) -> Option<String> {
        self.guard.as_ref().and_then(|g| g(y))
    }

    pub fn eval(&self, y: &[f64], out: &mut [f64]) -> Result<(), FieldError> {
        debug_assert_eq!(y.len(), self.dim);
        debug_assert_eq!(out.len(), self.dim);
        if let Some(reason) = self.guard_violation(y) {
            return Err(FieldError {
                point: y.to_vec(),
                reason,
            });
        }
        (self.rhs)(y, out);
        if out.iter().any(|v| !v.is_finite()) {
            return Err(FieldError {
                point: y.to_vec(),
                reason: "non-finite value".into(),
            });
        }
        Ok(())
    }

    pub fn eval_vec(&self, y: &[f64]) -> Result<Vec<f64>, FieldError> {
        let mut out = vec![0.0; self.dim];
        self.eval(y, &mut out)?;
        Ok(out)
    }

    /// Mass-weighted potential energy, when the field is conservative.
    pub fn potential(&self, y: &[f64]) -> Option<f64> {
        self.potential.as_ref().map(|p| p(y))
    }

    /// `1/2 sum w_i v_i^2 + V(y)`.
    pub fn energy(&self, y: &[f64], v: &[f64]) -> Option<f64> {
        let pot = self.potential(y)?;
        let kin: f64 = v
            .iter()
            .enumerate()
            .map(|(i, vi)| 0.5 * self.weight(i) * vi * vi)
            .sum();
        Some(kin + pot)
    }

    /// Largest relative mismatch between `-grad V / w` (central differences)
    /// and `f` over the given points; `None` without a potential.
    pub fn potential_gradient_mismatch(
        &self,
        points: &[Vec<f64>],
    ) -> Option<Result<f64, FieldError>> {
        let pot = self.potential.as_ref()?;
        let mut worst = 0.0_f64;
        for y in points {
            let f = match self.eval_vec(y) {
                Ok(f) => f,
                Err(e) => return Some(Err(e)),
            };
            let mut probe = y.clone();
            let mut fd = vec![0.0; self.dim];
            for i in 0..self.dim {
                let step = 1e-6 * y[i].abs().max(1.0);
                probe[i] = y[i] + step;
                let up = pot(&probe);
                probe[i] = y[i] - step;
                let down = pot(&probe);
                probe[i] = y[i];
                fd[i] = -(up - down) / (2.0 * step) / self.weight(i);
            }
            let scale = crate::norm::sup(&f).max(1.0);
            worst = worst.max(crate::norm::sup_diff(&fd, &f) / scale);
        }
        Some(Ok(worst))
    }
}
