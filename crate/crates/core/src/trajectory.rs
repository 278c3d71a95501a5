use serde::Serialize;

use crate::error::{Error, Result};
use crate::symmetry::{mirrored_defects, ParityReport};
use crate::field::{Parity, VectorField};

/// Sampled solution: positions and velocities at times `t0 + offset`.
///
/// Offsets are strictly increasing. Solutions built by successive
/// approximation are mirrored (`offset[-k] = -offset[k]` bit-exactly), which
/// makes parity about `t0` a comparison of node pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub field_name: String,
    pub t0: f64,
    pub dim: usize,
    offsets: Vec<f64>,
    positions: Vec<f64>,
    velocities: Vec<f64>,
}

impl Trajectory {
    pub fn new(
        field_name: impl Into<String>,
        t0: f64,
        dim: usize,
        offsets: Vec<f64>,
        positions: Vec<f64>,
        velocities: Vec<f64>,
    ) -> Result<Self> {
        if dim == 0 || offsets.is_empty() {
            return Err(Error::Invalid("empty trajectory".into()));
        }
        if positions.len() != offsets.len() * dim || velocities.len() != offsets.len() * dim {
            return Err(Error::Invalid("state arrays do not match the grid length".into()));
        }
        if offsets.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Invalid("offsets must be strictly increasing".into()));
        }
        Ok(Self {
            field_name: field_name.into(),
            t0,
            dim,
            offsets,
            positions,
            velocities,
        })
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + self.offsets[i]
    }

    pub fn times(&self) -> Vec<f64> {
        self.offsets.iter().map(|o| self.t0 + o).collect()
    }

    pub fn start(&self) -> f64 {
        self.time(0)
    }

    pub fn end(&self) -> f64 {
        self.time(self.len() - 1)
    }

    pub fn position(&self, i: usize) -> &[f64] {
        &self.positions[i * self.dim..(i + 1) * self.dim]
    }

    pub fn velocity(&self, i: usize) -> &[f64] {
        &self.velocities[i * self.dim..(i + 1) * self.dim]
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn velocities(&self) -> &[f64] {
        &self.velocities
    }

    /// True when the offsets are mirrored about zero bit-exactly.
    pub fn is_symmetric(&self) -> bool {
        let n = self.len();
        n % 2 == 1
            && self.offsets[n / 2] == 0.0
            && (0..n / 2).all(|k| self.offsets[k] + self.offsets[n - 1 - k] == 0.0)
    }

    pub fn center_index(&self) -> Option<usize> {
        self.is_symmetric().then_some(self.len() / 2)
    }

    /// Half-width `L` of a mirrored grid.
    pub fn half_width(&self) -> f64 {
        self.offsets[self.len() - 1].max(-self.offsets[0])
    }

    fn require_symmetric(&self) -> Result<()> {
        if self.is_symmetric() {
            Ok(())
        } else {
            Err(Error::Invalid("trajectory grid is not mirrored about t0".into()))
        }
    }

    /// Parity of the positions about `t0`.
    pub fn position_parity(&self, tol: f64) -> Result<ParityReport> {
        self.require_symmetric()?;
        let (even, odd) = mirrored_defects(&self.positions, self.dim, None);
        Ok(report(even, odd, tol))
    }

    /// Parity of the velocities about `t0`.
    pub fn velocity_parity(&self, tol: f64) -> Result<ParityReport> {
        self.require_symmetric()?;
        let (even, odd) = mirrored_defects(&self.velocities, self.dim, None);
        Ok(report(even, odd, tol))
    }

    /// Linear interpolation of position and velocity at absolute time `t`.
    pub fn interpolate(&self, t: f64) -> Option<(Vec<f64>, Vec<f64>)> {
        let off = t - self.t0;
        let first = self.offsets[0];
        let last = self.offsets[self.len() - 1];
        let slack = 1e-12 * (1.0 + first.abs().max(last.abs()));
        if off < first - slack || off > last + slack {
            return None;
        }
        let off = off.clamp(first, last);
        let i = match self.offsets.partition_point(|&o| o <= off) {
            0 => 0,
            p if p >= self.len() => self.len() - 1,
            p => p - 1,
        };
        if i + 1 >= self.len() || self.offsets[i] == off {
            return Some((self.position(i).to_vec(), self.velocity(i).to_vec()));
        }
        let w = (off - self.offsets[i]) / (self.offsets[i + 1] - self.offsets[i]);
        let lerp = |a: &[f64], b: &[f64]| -> Vec<f64> {
            a.iter().zip(b).map(|(x, y)| x + w * (y - x)).collect()
        };
        Some((
            lerp(self.position(i), self.position(i + 1)),
            lerp(self.velocity(i), self.velocity(i + 1)),
        ))
    }

    /// Relative energy drift `max |E(t) - E(t_c)| / scale`, where `t_c` is
    /// the centre (or first) node and `scale` is the largest `|T| + |V|`
    /// seen along the path. `None` for non-conservative fields.
    pub fn energy_drift(&self, field: &VectorField) -> Option<f64> {
        let reference = self.center_index().unwrap_or(0);
        let e0 = field.energy(self.position(reference), self.velocity(reference))?;
        let mut worst = 0.0_f64;
        let mut scale = e0.abs();
        for i in 0..self.len() {
            let y = self.position(i);
            let v = self.velocity(i);
            let pot = field.potential(y)?;
            let e = field.energy(y, v)?;
            scale = scale.max((e - pot).abs() + pot.abs());
            worst = worst.max((e - e0).abs());
        }
        Some(if scale > 0.0 { worst / scale } else { worst })
    }

    /// Smallest pairwise distance between 3-D bodies packed in the state.
    pub fn min_pair_distance(&self) -> Option<f64> {
        if self.dim % 3 != 0 || self.dim < 6 {
            return None;
        }
        let bodies = self.dim / 3;
        let mut best = f64::INFINITY;
        for i in 0..self.len() {
            let y = self.position(i);
            for a in 0..bodies {
                for b in a + 1..bodies {
                    let d2: f64 = (0..3).map(|c| (y[3 * a + c] - y[3 * b + c]).powi(2)).sum();
                    best = best.min(d2.sqrt());
                }
            }
        }
        Some(best)
    }

    /// Same path relabelled around a new centre time.
    pub fn shifted(&self, t0: f64) -> Self {
        Self {
            t0,
            ..self.clone()
        }
    }

    /// Appends nodes at absolute times; times must continue increasing.
    pub(crate) fn push_absolute(&mut self, t: f64, y: &[f64], v: &[f64]) {
        self.offsets.push(t - self.t0);
        self.positions.extend_from_slice(y);
        self.velocities.extend_from_slice(v);
    }

    pub(crate) fn empty_like(&self, t0: f64) -> Self {
        Self {
            t0,
            offsets: Vec::new(),
            positions: Vec::new(),
            velocities: Vec::new(),
            ..self.clone()
        }
    }
}

fn report(even: f64, odd: f64, tol: f64) -> ParityReport {
    ParityReport {
        even_defect: even,
        odd_defect: odd,
        classification: Parity::classify(even, odd, tol),
        tol,
        excluded_points: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> Trajectory {
        let offsets = vec![-1.0, -0.5, 0.0, 0.5, 1.0];
        let positions = offsets.iter().map(|o| 2.0 * o).collect();
        let velocities = vec![2.0; 5];
        Trajectory::new("line", 3.0, 1, offsets, positions, velocities).unwrap()
    }

    #[test]
    fn symmetric_metadata() {
        let t = line();
        assert!(t.is_symmetric());
        assert_eq!(t.center_index(), Some(2));
        assert_eq!(t.half_width(), 1.0);
        assert_eq!(t.times(), vec![2.0, 2.5, 3.0, 3.5, 4.0]);
        let p = t.position_parity(1e-12).unwrap();
        assert_eq!(p.classification, Parity::Odd);
        let v = t.velocity_parity(1e-12).unwrap();
        assert_eq!(v.classification, Parity::Even);
    }

    #[test]
    fn interpolation() {
        let t = line();
        let (y, v) = t.interpolate(3.25).unwrap();
        assert!((y[0] - 0.5).abs() < 1e-15);
        assert_eq!(v[0], 2.0);
        assert!(t.interpolate(4.5).is_none());
        assert_eq!(t.interpolate(4.0).unwrap().0, vec![2.0]);
        assert_eq!(t.interpolate(2.0).unwrap().0, vec![-2.0]);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(Trajectory::new("x", 0.0, 1, vec![0.0, 0.0], vec![0.0; 2], vec![0.0; 2]).is_err());
        assert!(Trajectory::new("x", 0.0, 1, vec![0.0, 1.0], vec![0.0; 3], vec![0.0; 2]).is_err());
    }
}
