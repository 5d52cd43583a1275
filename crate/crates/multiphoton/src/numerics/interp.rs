//! Six-point Lagrange interpolation on uniform grids.
//!
//! O(h⁶) local error, which keeps interpolated wavefunction samples well
//! below the 1e-8 budget of the quadratures that consume them. Points
//! outside the grid evaluate to zero (the grids are built so the data has
//! decayed below 1e-12 there).

use num_complex::Complex64;

use super::grid::Grid;

/// Interpolate complex samples at an arbitrary point.
pub fn interp6(grid: &Grid, values: &[Complex64], x: f64) -> Complex64 {
    debug_assert_eq!(values.len(), grid.n_points);
    if x < grid.x_min || x > grid.x_max {
        return Complex64::new(0.0, 0.0);
    }
    let dx = grid.dx();
    let t = (x - grid.x_min) / dx;
    let n = grid.n_points;
    // Window of 6 points roughly centered on x.
    let mut i0 = t.floor() as isize - 2;
    i0 = i0.clamp(0, n as isize - 6);
    let i0 = i0 as usize;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..6 {
        let xj = i0 + j;
        let mut w = 1.0f64;
        for k in 0..6 {
            if k == j {
                continue;
            }
            let xk = (i0 + k) as f64;
            w *= (t - xk) / (xj as f64 - xk);
        }
        acc += values[xj] * w;
    }
    acc
}
