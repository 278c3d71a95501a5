//! Cumulative quadrature on a uniform half-grid `0, h, 2h, ..., N h`.
//!
//! Values are stored node-major with `dim` components per node. Even nodes
//! accumulate composite Simpson panels; odd nodes add a single-interval
//! correction from the cubic through four neighbouring nodes, so every node
//! is exact on cubics.

/// Writes `out[k] = \int_0^{kh} g` for every node `k` and component.
///
/// `values.len()` and `out.len()` must both equal `(N + 1) * dim`.
pub fn cumulative(h: f64, values: &[f64], dim: usize, out: &mut [f64]) {
    assert!(dim > 0);
    assert_eq!(values.len() % dim, 0);
    assert_eq!(values.len(), out.len());
    let nodes = values.len() / dim;
    if nodes == 0 {
        return;
    }
    let last = nodes - 1;
    let g = |k: usize, c: usize| values[k * dim + c];

    out[..dim].fill(0.0);
    for k in 1..nodes {
        for c in 0..dim {
            let v = if k % 2 == 0 {
                out[(k - 2) * dim + c] + h / 3.0 * (g(k - 2, c) + 4.0 * g(k - 1, c) + g(k, c))
            } else {
                out[(k - 1) * dim + c] + single_interval(h, &g, k - 1, last, c)
            };
            out[k * dim + c] = v;
        }
    }
}

/// Integral over `[x_a, x_{a+1}]` from the polynomial through nearby nodes.
fn single_interval(h: f64, g: &impl Fn(usize, usize) -> f64, a: usize, last: usize, c: usize) -> f64 {
    match last {
        1 => h / 2.0 * (g(0, c) + g(1, c)),
        2 => {
            if a == 0 {
                h / 12.0 * (5.0 * g(0, c) + 8.0 * g(1, c) - g(2, c))
            } else {
                h / 12.0 * (-g(0, c) + 8.0 * g(1, c) + 5.0 * g(2, c))
            }
        }
        _ => {
            if a >= 1 && a + 2 <= last {
                h / 24.0 * (-g(a - 1, c) + 13.0 * g(a, c) + 13.0 * g(a + 1, c) - g(a + 2, c))
            } else if a + 3 <= last {
                h / 24.0 * (9.0 * g(a, c) + 19.0 * g(a + 1, c) - 5.0 * g(a + 2, c) + g(a + 3, c))
            } else {
                // a + 1 == last
                h / 24.0
                    * (g(a - 2, c) - 5.0 * g(a - 1, c) + 19.0 * g(a, c) + 9.0 * g(a + 1, c))
            }
        }
    }
}

/// Double integral `\int_0^t \int_0^u g` at every node, as two cumulative passes.
/// Returns `(inner, outer)`.
pub fn cumulative_twice(h: f64, values: &[f64], dim: usize) -> (Vec<f64>, Vec<f64>) {
    let mut inner = vec![0.0; values.len()];
    cumulative(h, values, dim, &mut inner);
    let mut outer = vec![0.0; values.len()];
    cumulative(h, &inner, dim, &mut outer);
    (inner, outer)
}

/// Double integral at node `k` through the single-integral (Cauchy) form
/// `\int_0^{t_k} (t_k - s) g(s) ds`, using Simpson panels plus a closing
/// three-eighths panel for odd `k`. Independent of [`cumulative_twice`].
pub fn cauchy_double(h: f64, values: &[f64], dim: usize, k: usize, out: &mut [f64]) {
    let nodes = values.len() / dim;
    let tk = k as f64 * h;
    let w = |i: usize, c: usize| (tk - i as f64 * h) * values[i * dim + c];
    for (c, o) in out.iter_mut().enumerate().take(dim) {
        *o = match k {
            0 => 0.0,
            1 if nodes >= 4 => h / 24.0 * (9.0 * w(0, c) + 19.0 * w(1, c) - 5.0 * w(2, c) + w(3, c)),
            1 if nodes >= 3 => h / 12.0 * (5.0 * w(0, c) + 8.0 * w(1, c) - w(2, c)),
            1 => h / 2.0 * (w(0, c) + w(1, c)),
            _ => {
                let simpson_end = if k % 2 == 0 { k } else { k - 3 };
                let mut acc = 0.0;
                let mut i = 0;
                while i < simpson_end {
                    acc += h / 3.0 * (w(i, c) + 4.0 * w(i + 1, c) + w(i + 2, c));
                    i += 2;
                }
                if k % 2 == 1 {
                    let j = k - 3;
                    acc += 3.0 * h / 8.0
                        * (w(j, c) + 3.0 * w(j + 1, c) + 3.0 * w(j + 2, c) + w(j + 3, c));
                }
                acc
            }
        };
    }
}

/// Single and double integrals from the centre of a symmetric grid.
///
/// `values` holds `2N + 1` nodes (node `N` is the centre, spacing `h`). The
/// half-axis `t < 0` is integrated by mirroring: with `v = -s` the inner
/// integral becomes `-\int_0^{|t|} g(-v) dv` and the double integral
/// `\int_0^{|t|}\int_0^{v_2} g(-v_1) dv_1 dv_2`, so both halves accumulate over
/// non-negative limits. An even or odd `g` therefore gives bit-exact mirrored
/// results.
#[derive(Debug, Clone)]
pub struct MirroredIntegrals {
    pub single: Vec<f64>,
    pub double: Vec<f64>,
}

pub fn mirrored(h: f64, values: &[f64], dim: usize) -> MirroredIntegrals {
    let nodes = values.len() / dim;
    assert!(nodes % 2 == 1, "symmetric grid needs an odd node count");
    let n = nodes / 2;
    let mut forward = Vec::with_capacity((n + 1) * dim);
    let mut backward = Vec::with_capacity((n + 1) * dim);
    for k in 0..=n {
        forward.extend_from_slice(&values[(n + k) * dim..(n + k + 1) * dim]);
        backward.extend_from_slice(&values[(n - k) * dim..(n - k + 1) * dim]);
    }
    let (f_in, f_out) = cumulative_twice(h, &forward, dim);
    let (b_in, b_out) = cumulative_twice(h, &backward, dim);

    let mut single = vec![0.0; values.len()];
    let mut double = vec![0.0; values.len()];
    for k in 0..=n {
        for c in 0..dim {
            single[(n + k) * dim + c] = f_in[k * dim + c];
            double[(n + k) * dim + c] = f_out[k * dim + c];
            if k > 0 {
                single[(n - k) * dim + c] = -b_in[k * dim + c];
                double[(n - k) * dim + c] = b_out[k * dim + c];
            }
        }
    }
    MirroredIntegrals { single, double }
}
