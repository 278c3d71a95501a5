//! Max-norm helpers. The max norm is used throughout: it is compatible with
//! the induced max-row-sum matrix norm, so |Ay| <= |A| |y| holds.

pub fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

pub fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
}

pub fn sup_sum(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(0.0_f64, |m, (x, y)| m.max((x + y).abs()))
}

/// Induced max-norm of a row-major `n x n` matrix (max absolute row sum).
pub fn induced_sup(matrix: &[f64], n: usize) -> f64 {
    matrix
        .chunks(n)
        .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn induced_norm_bounds_matrix_vector_product() {
        let a = [1.0, -2.0, 0.5, 3.0];
        let y = [0.7, -1.1];
        let ay = [a[0] * y[0] + a[1] * y[1], a[2] * y[0] + a[3] * y[1]];
        assert!(sup(&ay) <= induced_sup(&a, 2) * sup(&y));
        assert_eq!(induced_sup(&a, 2), 3.5);
    }

    #[test]
    fn sup_helpers() {
        assert_eq!(sup(&[]), 0.0);
        assert_eq!(sup(&[-3.0, 2.0]), 3.0);
        assert_eq!(sup_diff(&[1.0, 2.0], &[1.0, -2.0]), 4.0);
        assert_eq!(sup_sum(&[1.0, 2.0], &[1.0, -2.0]), 2.0);
    }
}
