//! Deterministic low-discrepancy samples in the cube `[-1, 1]^d`, which is
//! the unit ball of the max norm.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut candidate = 2u64;
    while out.len() < count {
        if out.iter().take_while(|p| *p * *p <= candidate).all(|p| candidate % p != 0) {
            out.push(candidate);
        }
        candidate += 1;
    }
    out
}

fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut acc = 0.0;
    while index > 0 {
        acc += (index % base) as f64 * scale;
        index /= base;
        scale *= inv;
    }
    acc
}

/// Halton points with a seeded Cranley-Patterson shift.
#[derive(Debug, Clone)]
pub struct HaltonCube {
    bases: Vec<u64>,
    shift: Vec<f64>,
    index: u64,
}

impl HaltonCube {
    pub fn new(dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self {
            bases: primes(dim),
            shift: (0..dim).map(|_| rng.gen::<f64>()).collect(),
            index: 1,
        }
    }
}

impl Iterator for HaltonCube {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        let i = self.index;
        self.index += 1;
        Some(
            self.bases
                .iter()
                .zip(&self.shift)
                .map(|(&b, &s)| {
                    let u = (radical_inverse(i, b) + s).fract();
                    2.0 * u - 1.0
                })
                .collect(),
        )
    }
}

/// Corners of the cube when there are at most 4096 of them, otherwise the
/// `2d` face centres.
pub fn extreme_points(dim: usize) -> Vec<Vec<f64>> {
    if dim <= 12 {
        (0..1u32 << dim)
            .map(|mask| {
                (0..dim)
                    .map(|i| if mask & (1 << i) != 0 { 1.0 } else { -1.0 })
                    .collect()
            })
            .collect()
    } else {
        let mut out = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            for s in [-1.0, 1.0] {
                let mut p = vec![0.0; dim];
                p[i] = s;
                out.push(p);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_primes() {
        assert_eq!(primes(6), vec![2, 3, 5, 7, 11, 13]);
    }

    #[test]
    fn samples_lie_in_cube_and_are_deterministic() {
        let a: Vec<_> = HaltonCube::new(3, 7).take(100).collect();
        let b: Vec<_> = HaltonCube::new(3, 7).take(100).collect();
        let c: Vec<_> = HaltonCube::new(3, 8).take(100).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.iter().flatten().all(|x| (-1.0..1.0).contains(x)));
    }

    #[test]
    fn radical_inverse_base_two() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert_eq!(radical_inverse(4, 2), 0.125);
    }

    #[test]
    fn extreme_point_counts() {
        assert_eq!(extreme_points(1), vec![vec![-1.0], vec![1.0]]);
        assert_eq!(extreme_points(6).len(), 64);
        assert_eq!(extreme_points(15).len(), 30);
    }
}
