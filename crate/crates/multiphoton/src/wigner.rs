//! The Wigner quasiprobability distribution and its diagnostics.
//!
//! Convention:
//!
//! ```text
//! W(x, p) = (1/π) ∫ ψ*(x + y) ψ(x − y) e^{2ipy} dy
//! ```
//!
//! which gives ∬W = 1, marginals `∫W dp = |ψ(x)|²` and
//! `∫W dx = |ψ̃(p)|²` (X₂-representation density), the bound |W| ≤ 1/π, and
//! pure-state purity `2π∬W² = 1`.
//!
//! The y-integral runs by trapezoid over interpolated wavefunction samples,
//! restricted per x-row to the window where the product can be nonzero. The
//! transform of real smooth data is real up to roundoff; the imaginary
//! residue is checked against 1e-10 and discarded.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::numerics::{interp6, trapezoid, Grid, Representation};
use crate::states::{representation_transform, SampledWavefunction, StateError};

#[derive(Debug, Error)]
pub enum WignerError {
    #[error("Wigner transform needs an X1-representation wavefunction")]
    WrongRepresentation,
    #[error("wavefunction has not decayed at its grid ends (|ψ|² edge/peak = {0:e})")]
    InsufficientDecay(f64),
    #[error("imaginary residue {0:e} exceeds 1e-10; integration grids are inconsistent")]
    ImaginaryResidue(f64),
    #[error(transparent)]
    State(#[from] StateError),
}

/// W sampled on a rectangular phase-space grid (row-major over x).
#[derive(Clone, Debug)]
pub struct WignerGrid {
    pub x_axis: Grid,
    pub p_axis: Grid,
    pub values: Vec<f64>,
    /// Largest |Im| discarded when realizing the transform.
    pub max_imag_residue: f64,
}

impl WignerGrid {
    pub fn value(&self, ix: usize, ip: usize) -> f64 {
        self.values[ix * self.p_axis.n_points + ip]
    }

    /// ∬ W dx dp by the 2D trapezoid rule.
    pub fn total_mass(&self) -> f64 {
        let rows: Vec<f64> = (0..self.x_axis.n_points)
            .map(|ix| {
                let row = &self.values
                    [ix * self.p_axis.n_points..(ix + 1) * self.p_axis.n_points];
                trapezoid(row, self.p_axis.dx())
            })
            .collect();
        trapezoid(&rows, self.x_axis.dx())
    }

    /// 2π ∬ W² dx dp (1 for a pure state).
    pub fn purity(&self) -> f64 {
        let rows: Vec<f64> = (0..self.x_axis.n_points)
            .map(|ix| {
                let row: Vec<f64> = self.values
                    [ix * self.p_axis.n_points..(ix + 1) * self.p_axis.n_points]
                    .iter()
                    .map(|w| w * w)
                    .collect();
                trapezoid(&row, self.p_axis.dx())
            })
            .collect();
        2.0 * std::f64::consts::PI * trapezoid(&rows, self.x_axis.dx())
    }

    /// Marginal over p as a function of x.
    pub fn marginal_x(&self) -> Vec<f64> {
        (0..self.x_axis.n_points)
            .map(|ix| {
                let row = &self.values
                    [ix * self.p_axis.n_points..(ix + 1) * self.p_axis.n_points];
                trapezoid(row, self.p_axis.dx())
            })
            .collect()
    }

    /// Marginal over x as a function of p.
    pub fn marginal_p(&self) -> Vec<f64> {
        let nx = self.x_axis.n_points;
        let np = self.p_axis.n_points;
        (0..np)
            .map(|ip| {
                let col: Vec<f64> = (0..nx).map(|ix| self.values[ix * np + ip]).collect();
                trapezoid(&col, self.x_axis.dx())
            })
            .collect()
    }
}

/// Compute W on the product of the two axes.
pub fn wigner_transform(
    psi: &SampledWavefunction,
    x_axis: &Grid,
    p_axis: &Grid,
) -> Result<WignerGrid, WignerError> {
    if psi.representation != Representation::X1 {
        return Err(WignerError::WrongRepresentation);
    }
    let dens = psi.density();
    let peak = dens.iter().cloned().fold(0.0f64, f64::max);
    let edge = dens[0].max(dens[dens.len() - 1]);
    if peak <= 0.0 || edge > 1e-12 {
        return Err(WignerError::InsufficientDecay(edge / peak.max(1e-300)));
    }

    let dy = psi.grid.dx();
    let np = p_axis.n_points;
    let results: Vec<(Vec<f64>, f64)> = (0..x_axis.n_points)
        .into_par_iter()
        .map(|ix| {
            let x = x_axis.point(ix);
            // The product ψ*(x+y)ψ(x−y) vanishes once either argument
            // leaves the source grid.
            let y_lim = (psi.grid.x_max - x)
                .min(x - psi.grid.x_min)
                .max(0.0);
            let n_half = (y_lim / dy).floor() as usize;
            let mut prod = Vec::with_capacity(2 * n_half + 1);
            let mut ys = Vec::with_capacity(2 * n_half + 1);
            for k in 0..(2 * n_half + 1) {
                let y = (k as isize - n_half as isize) as f64 * dy;
                let left = interp6(&psi.grid, &psi.values, x + y);
                let right = interp6(&psi.grid, &psi.values, x - y);
                prod.push(left.conj() * right);
                ys.push(y);
            }
            let mut row = vec![0.0f64; np];
            let mut max_imag = 0.0f64;
            for (ip, slot) in row.iter_mut().enumerate() {
                let p = p_axis.point(ip);
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, pr) in prod.iter().enumerate() {
                    let w = if k == 0 || k + 1 == prod.len() { 0.5 } else { 1.0 };
                    acc += pr * Complex64::from_polar(w, 2.0 * p * ys[k]);
                }
                let val = acc * dy / std::f64::consts::PI;
                max_imag = max_imag.max(val.im.abs());
                *slot = val.re;
            }
            (row, max_imag)
        })
        .collect();

    let mut values = Vec::with_capacity(x_axis.n_points * np);
    let mut max_imag = 0.0f64;
    for (row, mi) in results {
        values.extend(row);
        max_imag = max_imag.max(mi);
    }
    if max_imag >= 1e-10 {
        return Err(WignerError::ImaginaryResidue(max_imag));
    }
    Ok(WignerGrid {
        x_axis: *x_axis,
        p_axis: *p_axis,
        values,
        max_imag_residue: max_imag,
    })
}

/// Default 201×201 axes spanning mean ± 6σ per quadrature.
pub fn default_axes(psi: &SampledWavefunction) -> Result<(Grid, Grid), WignerError> {
    let stats = crate::states::quadrature_stats(psi)?;
    let span = |mean: f64, var: f64| {
        let s = var.sqrt();
        Grid::new(mean - 6.0 * s, mean + 6.0 * s, 201).expect("positive span")
    };
    Ok((
        span(stats.mean_x1, stats.var_x1),
        span(stats.mean_x2, stats.var_x2),
    ))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct WignerDiagnostics {
    pub norm: f64,
    pub purity: f64,
    pub min_value: f64,
    pub argmin: (f64, f64),
    pub peak: (f64, f64),
    pub peak_value: f64,
    pub marginal_x_error: f64,
    pub marginal_p_error: f64,
    /// Covariance of the positive part of W.
    pub cov_xx: f64,
    pub cov_pp: f64,
    pub cov_xp: f64,
    /// Angle (degrees, in (−45, 45]) between the nearest coordinate axis and
    /// the principal axes of the positive-mass covariance ellipse.
    pub axis_misalignment_deg: f64,
    pub max_imag_residue: f64,
}

/// Quadratic-refined location of the grid extremum.
fn refine_peak(w: &WignerGrid, ix: usize, ip: usize) -> (f64, f64) {
    let np = w.p_axis.n_points;
    let nx = w.x_axis.n_points;
    let refine = |m: f64, l: f64, c: f64, r: f64, d: f64| {
        let denom = l - 2.0 * c + r;
        if denom.abs() < 1e-300 {
            m
        } else {
            m + 0.5 * (l - r) / denom * d
        }
    };
    let x = if ix > 0 && ix + 1 < nx {
        refine(
            w.x_axis.point(ix),
            w.value(ix - 1, ip),
            w.value(ix, ip),
            w.value(ix + 1, ip),
            w.x_axis.dx(),
        )
    } else {
        w.x_axis.point(ix)
    };
    let p = if ip > 0 && ip + 1 < np {
        refine(
            w.p_axis.point(ip),
            w.value(ix, ip - 1),
            w.value(ix, ip),
            w.value(ix, ip + 1),
            w.p_axis.dx(),
        )
    } else {
        w.p_axis.point(ip)
    };
    (x, p)
}

/// Norm, purity, extrema, marginal errors, and the orientation of the
/// positive-mass covariance ellipse.
pub fn wigner_diagnostics(
    w: &WignerGrid,
    psi: &SampledWavefunction,
) -> Result<WignerDiagnostics, WignerError> {
    let norm = w.total_mass();
    let purity = w.purity();

    let mut min_value = f64::INFINITY;
    let mut min_idx = (0usize, 0usize);
    let mut max_value = f64::NEG_INFINITY;
    let mut max_idx = (0usize, 0usize);
    let np = w.p_axis.n_points;
    for ix in 0..w.x_axis.n_points {
        for ip in 0..np {
            let v = w.values[ix * np + ip];
            if v < min_value {
                min_value = v;
                min_idx = (ix, ip);
            }
            if v > max_value {
                max_value = v;
                max_idx = (ix, ip);
            }
        }
    }
    let argmin = refine_peak(w, min_idx.0, min_idx.1);
    let peak = refine_peak(w, max_idx.0, max_idx.1);

    // Marginal against the X₁ density.
    let marg_x = w.marginal_x();
    let mut marginal_x_error = 0.0f64;
    for (ix, mx) in marg_x.iter().enumerate() {
        let x = w.x_axis.point(ix);
        let d = crate::states::sample_at(psi, x).norm_sqr();
        marginal_x_error = marginal_x_error.max((mx - d).abs());
    }

    // Marginal against the X₂-representation density.
    let dual = representation_transform(psi, &w.p_axis)?;
    let dual_density = dual.density();
    let marg_p = w.marginal_p();
    let mut marginal_p_error = 0.0f64;
    for (ip, mp) in marg_p.iter().enumerate() {
        marginal_p_error = marginal_p_error.max((mp - dual_density[ip]).abs());
    }

    // Covariance of max(W, 0).
    let mut mass = 0.0;
    let mut mx = 0.0;
    let mut mp = 0.0;
    for ix in 0..w.x_axis.n_points {
        let x = w.x_axis.point(ix);
        for ip in 0..np {
            let v = w.values[ix * np + ip].max(0.0);
            mass += v;
            mx += v * x;
            mp += v * w.p_axis.point(ip);
        }
    }
    mx /= mass;
    mp /= mass;
    let (mut cxx, mut cpp, mut cxp) = (0.0, 0.0, 0.0);
    for ix in 0..w.x_axis.n_points {
        let x = w.x_axis.point(ix) - mx;
        for ip in 0..np {
            let v = w.values[ix * np + ip].max(0.0);
            let p = w.p_axis.point(ip) - mp;
            cxx += v * x * x;
            cpp += v * p * p;
            cxp += v * x * p;
        }
    }
    cxx /= mass;
    cpp /= mass;
    cxp /= mass;
    // Principal angle folded into (−45°, 45°]: distance to the nearest axis.
    let theta = 0.5 * (2.0 * cxp).atan2(cxx - cpp);
    let mut deg = theta.to_degrees();
    while deg > 45.0 {
        deg -= 90.0;
    }
    while deg <= -45.0 {
        deg += 90.0;
    }

    Ok(WignerDiagnostics {
        norm,
        purity,
        min_value,
        argmin,
        peak,
        peak_value: max_value,
        marginal_x_error,
        marginal_p_error,
        cov_xx: cxx,
        cov_pp: cpp,
        cov_xp: cxp,
        axis_misalignment_deg: deg.abs(),
        max_imag_residue: w.max_imag_residue,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{
        build_state, default_native_grid, psi_native, StateFamily, StateParams,
    };

    const SQRT_2: f64 = std::f64::consts::SQRT_2;
    const INV_PI: f64 = std::f64::consts::FRAC_1_PI;

    fn vacuum() -> SampledWavefunction {
        let p = StateParams::from_alpha(
            StateFamily::Tpss,
            0.0,
            0.0,
            num_complex::Complex64::new(0.0, 0.0),
        )
        .unwrap();
        psi_native(&p, &default_native_grid(&p)).unwrap()
    }

    #[test]
    fn vacuum_wigner_is_the_unit_gaussian() {
        let psi = vacuum();
        let (xa, pa) = default_axes(&psi).unwrap();
        let w = wigner_transform(&psi, &xa, &pa).unwrap();
        for ix in (0..xa.n_points).step_by(40) {
            for ip in (0..pa.n_points).step_by(40) {
                let x = xa.point(ix);
                let p = pa.point(ip);
                let want = INV_PI * (-x * x - p * p).exp();
                assert!(
                    (w.value(ix, ip) - want).abs() < 1e-8,
                    "W({x}, {p}) = {} vs {want}",
                    w.value(ix, ip)
                );
            }
        }
        // W(0,0) = 1/π ≈ 0.31831
        let center = wigner_transform(
            &psi,
            &Grid::new(-0.01, 0.01, 3).unwrap(),
            &Grid::new(-0.01, 0.01, 3).unwrap(),
        )
        .unwrap();
        assert!((center.value(1, 1) - 0.318_309_886).abs() < 1e-8);
    }

    #[test]
    fn tpss_wigner_is_the_analytic_squeezed_gaussian() {
        let p = StateParams::from_beta(
            StateFamily::Tpss,
            0.8,
            0.0,
            num_complex::Complex64::new(3.0 * SQRT_2, 0.0),
        )
        .unwrap();
        let psi = psi_native(&p, &default_native_grid(&p)).unwrap();
        let (xa, pa) = default_axes(&psi).unwrap();
        let w = wigner_transform(&psi, &xa, &pa).unwrap();
        let x_bar = 6.0 * (-0.8f64).exp();
        for ix in (0..xa.n_points).step_by(37) {
            for ip in (0..pa.n_points).step_by(41) {
                let x = xa.point(ix);
                let q = pa.point(ip);
                let want = INV_PI
                    * (-(x - x_bar) * (x - x_bar) * (1.6f64).exp() - q * q * (-1.6f64).exp())
                        .exp();
                assert!(
                    (w.value(ix, ip) - want).abs() < 1e-8,
                    "W({x}, {q}) mismatch"
                );
            }
        }
    }

    #[test]
    fn gaussian_states_pass_the_diagnostic_suite() {
        let psi = vacuum();
        let (xa, pa) = default_axes(&psi).unwrap();
        let w = wigner_transform(&psi, &xa, &pa).unwrap();
        let d = wigner_diagnostics(&w, &psi).unwrap();
        assert!((d.norm - 1.0).abs() < 1e-4);
        assert!((d.purity - 1.0).abs() < 1e-4);
        assert!(d.min_value >= -1e-6);
        assert!(d.marginal_x_error < 1e-6);
        assert!(d.marginal_p_error < 1e-6);
        assert!(d.max_imag_residue < 1e-10);
    }

    #[test]
    fn fpss2_wigner_goes_negative_but_stays_axis_aligned() {
        let p = StateParams::from_beta(
            StateFamily::FpssII,
            0.8,
            0.14,
            num_complex::Complex64::new(3.0 * SQRT_2, 0.0),
        )
        .unwrap();
        let psi = build_state(&p).unwrap();
        let (xa, pa) = default_axes(&psi).unwrap();
        let w = wigner_transform(&psi, &xa, &pa).unwrap();
        let d = wigner_diagnostics(&w, &psi).unwrap();
        assert!(d.min_value < 0.0, "no negativity: min = {}", d.min_value);
        assert!(d.axis_misalignment_deg <= 5.0);
        let bound = INV_PI + 1e-8;
        for v in &w.values {
            assert!(v.abs() <= bound);
        }
    }

    #[test]
    fn fpss1_wigner_is_translated_or_rotated() {
        let tp = StateParams::from_beta(
            StateFamily::Tpss,
            0.8,
            0.0,
            num_complex::Complex64::new(3.0 * SQRT_2, 0.0),
        )
        .unwrap();
        let tpsi = build_state(&tp).unwrap();
        let (txa, tpa) = default_axes(&tpsi).unwrap();
        let tw = wigner_transform(&tpsi, &txa, &tpa).unwrap();
        let td = wigner_diagnostics(&tw, &tpsi).unwrap();

        let p = StateParams::from_beta(
            StateFamily::FpssI,
            0.8,
            0.14,
            num_complex::Complex64::new(3.0 * SQRT_2, 0.0),
        )
        .unwrap();
        let psi = build_state(&p).unwrap();
        let (xa, pa) = default_axes(&psi).unwrap();
        let w = wigner_transform(&psi, &xa, &pa).unwrap();
        let d = wigner_diagnostics(&w, &psi).unwrap();

        let dx = d.peak.0 - td.peak.0;
        let dp = d.peak.1 - td.peak.1;
        let displaced = (dx * dx + dp * dp).sqrt();
        assert!(
            displaced > 0.3 || d.axis_misalignment_deg > 5.0,
            "neither displaced ({displaced}) nor rotated ({}°)",
            d.axis_misalignment_deg
        );
    }
}
