//! Integration utilities.
//!
//! Adaptive Simpson for callables on finite intervals; plain trapezoid sums
//! for sampled data. For smooth integrands that have decayed below roundoff
//! at both grid ends the trapezoid rule is spectrally accurate
//! (Euler–Maclaurin: all boundary corrections vanish), which is exactly the
//! regime the wavefunction grids are built for.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuadError {
    #[error("adaptive quadrature did not reach tolerance {tol:e}; achieved estimate {estimate:e} with error bound {err:e}")]
    NoConvergence { tol: f64, estimate: f64, err: f64 },
}

/// Adaptive Simpson quadrature to absolute tolerance `tol` (default callers
/// use 1e-10). Errors out with the achieved estimate if the recursion depth
/// is exhausted.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64, QuadError> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    let mut worst_err = 0.0f64;
    let v = adapt(f, a, b, fa, fm, fb, whole, tol, 50, &mut worst_err);
    if worst_err > tol.max(1e-15) {
        return Err(QuadError::NoConvergence {
            tol,
            estimate: v,
            err: worst_err,
        });
    }
    Ok(v)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    worst_err: &mut f64,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let err = (left + right - whole) / 15.0;
    if err.abs() <= tol || depth == 0 {
        if depth == 0 {
            *worst_err = worst_err.max(err.abs());
        }
        return left + right + err;
    }
    adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, worst_err)
        + adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, worst_err)
}

/// Trapezoid sum of real samples with uniform spacing.
pub fn trapezoid(values: &[f64], dx: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let inner: f64 = values[1..values.len() - 1].iter().sum();
    dx * (0.5 * (values[0] + values[values.len() - 1]) + inner)
}

/// Trapezoid sum of complex samples with uniform spacing.
pub fn trapezoid_c(values: &[Complex64], dx: f64) -> Complex64 {
    if values.len() < 2 {
        return Complex64::new(0.0, 0.0);
    }
    let inner: Complex64 = values[1..values.len() - 1].iter().sum();
    (0.5 * (values[0] + values[values.len() - 1]) + inner) * dx
}
