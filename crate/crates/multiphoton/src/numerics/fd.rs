//! Eighth-order centered finite differences on uniform grids.
//!
//! Samples are implicitly zero-padded beyond the grid, which is exact to the
//! grid-construction tolerance (|ψ| < 1e-12 at the endpoints).

use num_complex::Complex64;

const D1: [f64; 9] = [
    1.0 / 280.0,
    -4.0 / 105.0,
    1.0 / 5.0,
    -4.0 / 5.0,
    0.0,
    4.0 / 5.0,
    -1.0 / 5.0,
    4.0 / 105.0,
    -1.0 / 280.0,
];

const D2: [f64; 9] = [
    -1.0 / 560.0,
    8.0 / 315.0,
    -1.0 / 5.0,
    8.0 / 5.0,
    -205.0 / 72.0,
    8.0 / 5.0,
    -1.0 / 5.0,
    8.0 / 315.0,
    -1.0 / 560.0,
];

fn apply_stencil(values: &[Complex64], stencil: &[f64; 9], scale: f64) -> Vec<Complex64> {
    let n = values.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &c) in stencil.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let j = i as isize + k as isize - 4;
            if j >= 0 && (j as usize) < n {
                acc += values[j as usize] * c;
            }
        }
        out[i] = acc * scale;
    }
    out
}

/// First derivative of uniformly sampled complex data.
pub fn derivative(values: &[Complex64], dx: f64) -> Vec<Complex64> {
    apply_stencil(values, &D1, 1.0 / dx)
}

/// Second derivative of uniformly sampled complex data.
pub fn second_derivative(values: &[Complex64], dx: f64) -> Vec<Complex64> {
    apply_stencil(values, &D2, 1.0 / (dx * dx))
}
