//! Wavefunctions of the multiphoton squeezed states.
//!
//! Every state here is an eigenvector of the transformed mode
//! `b = μa + νa† + γF(Xᵢ)` with eigenvalue `β = μα + να*`; the wavefunctions
//! are obtained by integrating the first-order eigenvalue equation in the
//! representation where the `F`-quadrature is diagonal:
//!
//! ```text
//! Ψ(xᵢ) = (πσᵢ)^{−1/4} exp[−(xᵢ − xᵢ⁽⁰⁾)²/(2σᵢ)]
//!         · exp{i[cᵢxᵢ + sᵢ √2 e^{rᵢ} γ̃ G(xᵢ)]}
//! ```
//!
//! with `σᵢ = e^{−2rᵢ}` (`r₁ = r`, `r₂ = −r`), antiderivative `G' = F`, and
//!
//! * variant I  (X₁ diagonal): `x₁⁽⁰⁾ = √2α₁`, `c₁ = √2α₂`, `s₁ = −1`;
//! * variant II (X₂ diagonal): `x₂⁽⁰⁾ = √2α₂`, `c₂ = −√2α₁`, `s₂ = +1`.
//!
//! Both sign tables are pinned by executed checks: the discretized
//! eigenvalue residual ‖(b − β)ψ‖ and the γ̃ → 0 transform limit against the
//! analytic Gaussian (see `docs/conventions.md`).
//!
//! For the four-photon state of variant II the X₁-diagonal wavefunction has
//! the closed exponential-Airy form `N^{−1/2} e^{kx} Ai[(lx + m)/l^{2/3}]`
//! with
//!
//! ```text
//! l = e^r/(√2 γ̃),   m = e^{−2r}/(8γ̃²) − β/γ̃,   k = e^{−r}/(2√2 γ̃),
//! ```
//!
//! constants obtained by solving the second-order form of the eigenvalue
//! equation and revalidated against the transform route at every test run.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::canonical::{CanonicalError, NonlinearitySpec, Variant};
use crate::numerics::{
    airy_ai, fd, interp6, oscillatory_transform, trapezoid, trapezoid_c, Grid, GridError,
    Representation, TransformError,
};

const SQRT_2: f64 = std::f64::consts::SQRT_2;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("coupling strength must be nonnegative, got {0}")]
    NegativeCoupling(f64),
    #[error("the TPSS family has no coupling; got gamma_tilde = {0}")]
    TpssWithCoupling(f64),
    #[error("grid too narrow: needs |x − x₀| ≥ 8√σ at both ends (x₀ = {x0}, σ = {sigma}, grid [{x_min}, {x_max}])")]
    GridTooNarrow {
        x0: f64,
        sigma: f64,
        x_min: f64,
        x_max: f64,
    },
    #[error("the exponential-Airy form needs real β; got {0} — use the transform path")]
    AiryNeedsRealBeta(Complex64),
    #[error("the exponential-Airy form degenerates at γ̃ = 0 — the state is the TPSS")]
    AiryDegenerateCoupling,
    #[error("window too narrow for the Airy tail: endpoint density is {0:e} of the peak (needs < 1e-14)")]
    WindowTooNarrow(f64),
    #[error("wavefunctions live on different grids")]
    GridMismatch,
    #[error("applying F on the dual quadrature is supported up to degree 2, got {0}")]
    DualRepUnsupported(usize),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Canonical(#[from] CanonicalError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Which state family a parameter set describes.
#[derive(Clone, Debug, PartialEq)]
pub enum StateFamily {
    /// Two-photon squeezed state: the γ̃ = 0 Gaussian limit.
    Tpss,
    /// Four-photon state with quadratic nonlinearity on X₁.
    FpssI,
    /// Four-photon state with quadratic nonlinearity on X₂.
    FpssII,
    /// Arbitrary polynomial nonlinearity on either quadrature.
    Generic(NonlinearitySpec, Variant),
}

impl StateFamily {
    pub fn label(&self) -> String {
        match self {
            StateFamily::Tpss => "tpss".to_string(),
            StateFamily::FpssI => "fpss1".to_string(),
            StateFamily::FpssII => "fpss2".to_string(),
            StateFamily::Generic(f, v) => {
                format!("generic(X{}-deg{}, variant {v})", f.quadrature(), f.degree())
            }
        }
    }
}

/// Parameters of a state: family, squeezing `r`, coupling `γ̃ ≥ 0`, and the
/// coherent amplitude `α = α₁ + iα₂` (the eigenvalue is
/// `β = e^r α₁ + i e^{−r} α₂` for φ = 0).
#[derive(Clone, Debug)]
pub struct StateParams {
    pub family: StateFamily,
    pub r: f64,
    pub gamma_tilde: f64,
    pub alpha: Complex64,
}

impl StateParams {
    pub fn from_alpha(
        family: StateFamily,
        r: f64,
        gamma_tilde: f64,
        alpha: Complex64,
    ) -> Result<Self, StateError> {
        if gamma_tilde < 0.0 {
            return Err(StateError::NegativeCoupling(gamma_tilde));
        }
        if matches!(family, StateFamily::Tpss) && gamma_tilde != 0.0 {
            return Err(StateError::TpssWithCoupling(gamma_tilde));
        }
        Ok(StateParams {
            family,
            r,
            gamma_tilde,
            alpha,
        })
    }

    pub fn from_beta(
        family: StateFamily,
        r: f64,
        gamma_tilde: f64,
        beta: Complex64,
    ) -> Result<Self, StateError> {
        let alpha = Complex64::new(beta.re * (-r).exp(), beta.im * r.exp());
        Self::from_alpha(family, r, gamma_tilde, alpha)
    }

    /// The mode eigenvalue `β = μα + να*`.
    pub fn beta(&self) -> Complex64 {
        Complex64::new(
            self.r.exp() * self.alpha.re,
            (-self.r).exp() * self.alpha.im,
        )
    }

    pub fn mu(&self) -> f64 {
        self.r.cosh()
    }

    pub fn nu(&self) -> f64 {
        self.r.sinh()
    }

    /// The nonlinearity and variant realized by this family.
    pub fn nonlinearity(&self) -> (NonlinearitySpec, Variant) {
        match &self.family {
            StateFamily::Tpss => (NonlinearitySpec::zero(1), Variant::I),
            StateFamily::FpssI => (
                NonlinearitySpec::monomial(1, 2).expect("degree 2 is admissible"),
                Variant::I,
            ),
            StateFamily::FpssII => (
                NonlinearitySpec::monomial(2, 2).expect("degree 2 is admissible"),
                Variant::II,
            ),
            StateFamily::Generic(f, v) => (f.clone(), *v),
        }
    }

    /// The complex coupling: `i·γ̃` for variant I, `γ̃` for variant II.
    pub fn gamma(&self) -> Complex64 {
        let (_, variant) = self.nonlinearity();
        match variant {
            Variant::I => Complex64::new(0.0, self.gamma_tilde),
            Variant::II => Complex64::new(self.gamma_tilde, 0.0),
        }
    }
}

/// The data of the native-representation wavefunction.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct NativeRepData {
    pub sigma: f64,
    pub x0: f64,
    pub c: f64,
    pub r_i: f64,
    pub gamma_eff: f64,
    /// Coefficient of G(x) in the phase: `sᵢ √2 e^{rᵢ} γ̃`.
    pub phase_scale: f64,
    pub representation: Representation,
}

impl NativeRepData {
    pub fn for_params(params: &StateParams) -> NativeRepData {
        let (_, variant) = params.nonlinearity();
        let r_i = params.r * variant.r_sign();
        let sigma = (-2.0 * r_i).exp();
        let (x0, c, sign, rep) = match variant {
            Variant::I => (
                SQRT_2 * params.alpha.re,
                SQRT_2 * params.alpha.im,
                -1.0,
                Representation::X1,
            ),
            Variant::II => (
                SQRT_2 * params.alpha.im,
                -SQRT_2 * params.alpha.re,
                1.0,
                Representation::X2,
            ),
        };
        NativeRepData {
            sigma,
            x0,
            c,
            r_i,
            gamma_eff: params.gamma_tilde,
            phase_scale: sign * SQRT_2 * r_i.exp() * params.gamma_tilde,
            representation: rep,
        }
    }
}

/// The constants of the exponential-Airy form `N^{−1/2} e^{kx} Ai[(lx+m)/l^{2/3}]`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AiryFormData {
    pub l: f64,
    pub m: f64,
    pub k: f64,
    /// Normalization ∫ e^{2kx} Ai²[(lx+m)/l^{2/3}] dx, computed by quadrature.
    pub n: f64,
}

impl AiryFormData {
    /// Constants for real β, γ̃ > 0 (the normalization is filled in when the
    /// state is sampled).
    pub fn for_params(params: &StateParams) -> Result<AiryFormData, StateError> {
        let beta = params.beta();
        if beta.im.abs() > 1e-12 {
            return Err(StateError::AiryNeedsRealBeta(beta));
        }
        if params.gamma_tilde <= 0.0 {
            return Err(StateError::AiryDegenerateCoupling);
        }
        let g = params.gamma_tilde;
        let r = params.r;
        let l = r.exp() / (SQRT_2 * g);
        let k = (-r).exp() / (2.0 * SQRT_2 * g);
        let m = k * k - beta.re / g;
        Ok(AiryFormData {
            l,
            m,
            k,
            n: f64::NAN,
        })
    }

    /// Argument of the Airy function at position x: `(lx + m)/l^{2/3}`.
    pub fn airy_argument(&self, x: f64) -> f64 {
        let p = self.l.cbrt();
        p * x + self.m / (p * p)
    }
}

/// A wavefunction sampled on a uniform grid, tagged with the representation
/// in which it is diagonal. Values are immutable after construction.
#[derive(Clone, Debug)]
pub struct SampledWavefunction {
    pub grid: Grid,
    pub values: Vec<Complex64>,
    pub representation: Representation,
    pub norm_residual: f64,
}

impl SampledWavefunction {
    /// |ψ(xᵢ)|² samples.
    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        trapezoid(&self.density(), self.grid.dx())
    }

    /// |⟨self|other⟩| on a shared grid.
    pub fn overlap(&self, other: &SampledWavefunction) -> Result<f64, StateError> {
        if self.grid != other.grid {
            return Err(StateError::GridMismatch);
        }
        let prod: Vec<Complex64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .collect();
        Ok(trapezoid_c(&prod, self.grid.dx()).norm())
    }

    /// Mean and variance of the diagonal quadrature from the density.
    pub fn density_moments(&self) -> (f64, f64) {
        let dx = self.grid.dx();
        let dens = self.density();
        let norm = trapezoid(&dens, dx);
        let m1: Vec<f64> = dens
            .iter()
            .enumerate()
            .map(|(i, d)| d * self.grid.point(i))
            .collect();
        let mean = trapezoid(&m1, dx) / norm;
        let m2: Vec<f64> = dens
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let t = self.grid.point(i) - mean;
                d * t * t
            })
            .collect();
        (mean, trapezoid(&m2, dx) / norm)
    }

    /// Excess kurtosis of the density: m₄/m₂² − 3 (zero for a Gaussian).
    pub fn density_excess_kurtosis(&self) -> f64 {
        let dx = self.grid.dx();
        let dens = self.density();
        let (mean, var) = self.density_moments();
        let m4: Vec<f64> = dens
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let t = self.grid.point(i) - mean;
                d * t * t * t * t
            })
            .collect();
        trapezoid(&m4, dx) / (var * var) - 3.0
    }
}

/// Rescale to unit norm (optionally) and apply the global phase convention:
/// the value at the maximum-|ψ| sample is made real positive.
fn finalize(
    grid: Grid,
    mut values: Vec<Complex64>,
    representation: Representation,
    rescale: bool,
) -> SampledWavefunction {
    let dens: Vec<f64> = values.iter().map(|v| v.norm_sqr()).collect();
    let norm_sqr = trapezoid(&dens, grid.dx());
    if rescale {
        let s = 1.0 / norm_sqr.sqrt();
        for v in &mut values {
            *v *= s;
        }
    }
    let (idx, _) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
        .expect("non-empty grid");
    let peak = values[idx];
    if peak.norm() > 0.0 {
        let rot = (peak / peak.norm()).conj();
        for v in &mut values {
            *v *= rot;
        }
    }
    let final_norm = if rescale { 1.0 } else { norm_sqr };
    SampledWavefunction {
        grid,
        values,
        representation,
        norm_residual: (final_norm - 1.0).abs(),
    }
}

const DX_TARGET: f64 = 24.0 / 4095.0;

/// Default native-representation grid: symmetric, with at least the baseline
/// half-width 12, widened to `|x₀| + 8.5√σ` as `e^{|r|}` grows.
pub fn default_native_grid(params: &StateParams) -> Grid {
    let data = NativeRepData::for_params(params);
    let half = (data.x0.abs() + 8.5 * data.sigma.sqrt()).max(12.0);
    Grid::spanning(-half, half, DX_TARGET)
}

/// Default X₁-representation grid for the variant-II four-photon state: the
/// left end is extended so the `e^{kx}` Airy tail has decayed below 1e-14 of
/// the peak density.
pub fn default_x1_grid(params: &StateParams) -> Grid {
    match AiryFormData::for_params(params) {
        Ok(airy) => {
            let center = SQRT_2 * params.alpha.re;
            // 30/k puts the e^{kx} tail below 1e-12 of the peak amplitude,
            // which also satisfies the transform's absolute edge bound.
            let left_tail = 30.0 / airy.k + 2.0;
            let x_min = (center - left_tail).min(-12.0);
            let x_max = (center + 12.0).max(12.0);
            Grid::spanning(x_min, x_max, DX_TARGET)
        }
        Err(_) => {
            // Transform-path fallback: Gaussian-dominated envelope in X₁.
            let sigma = (-2.0 * params.r).exp();
            let center = SQRT_2 * params.alpha.re;
            let half = (center.abs() + 8.5 * sigma.sqrt()).max(12.0);
            Grid::spanning(-half, half, DX_TARGET)
        }
    }
}

/// The generic native-representation state: Gaussian envelope times the
/// `G`-phase, sampled in the representation where the `F`-quadrature is
/// diagonal. Normalized analytically by the `(πσ)^{−1/4}` prefactor.
pub fn psi_native(params: &StateParams, grid: &Grid) -> Result<SampledWavefunction, StateError> {
    let (f, _) = params.nonlinearity();
    let data = NativeRepData::for_params(params);
    let margin = 8.0 * data.sigma.sqrt();
    if data.x0 - grid.x_min < margin || grid.x_max - data.x0 < margin {
        return Err(StateError::GridTooNarrow {
            x0: data.x0,
            sigma: data.sigma,
            x_min: grid.x_min,
            x_max: grid.x_max,
        });
    }
    let g_coeffs: Option<Vec<f64>> = if f.is_zero() || params.gamma_tilde == 0.0 {
        None
    } else {
        // G(x) = Σ fₖ x^{k+1}/(k+1): store as [f₀/1, f₁/2, …], evaluate
        // by Horner and multiply by x.
        Some(
            f.numeric_coeffs()?
                .iter()
                .enumerate()
                .map(|(k, fk)| fk / (k as f64 + 1.0))
                .collect(),
        )
    };
    let eval_g = |x: f64| -> f64 {
        match &g_coeffs {
            None => 0.0,
            Some(cs) => cs.iter().rev().fold(0.0, |acc, c| acc * x + c) * x,
        }
    };
    let prefactor = (std::f64::consts::PI * data.sigma).powf(-0.25);
    let values: Vec<Complex64> = grid
        .points()
        .map(|x| {
            let d = x - data.x0;
            let env = prefactor * (-d * d / (2.0 * data.sigma)).exp();
            let phase = data.c * x + data.phase_scale * eval_g(x);
            Complex64::from_polar(env, phase)
        })
        .collect();
    Ok(finalize(*grid, values, data.representation, false))
}

/// The four-photon state of variant I (quadratic nonlinearity on X₁) in its
/// native X₁-diagonal representation.
pub fn psi_fpss1(params: &StateParams, grid: &Grid) -> Result<SampledWavefunction, StateError> {
    psi_native(params, grid)
}

/// The four-photon state of variant II in the X₁-diagonal representation via
/// its closed exponential-Airy form (real β, γ̃ > 0).
pub fn psi_fpss2_airy(
    params: &StateParams,
    grid: &Grid,
) -> Result<(SampledWavefunction, AiryFormData), StateError> {
    let mut airy = AiryFormData::for_params(params)?;
    // Evaluate in log magnitude: for weak coupling the unnormalized product
    // e^{kx}·Ai spans hundreds of e-folds even though the normalized state
    // is O(1); everything is shifted relative to the log peak before exp.
    let mut log_mag = Vec::with_capacity(grid.n_points);
    let mut signs = Vec::with_capacity(grid.n_points);
    for x in grid.points() {
        let arg = airy.airy_argument(x);
        let (lm, sgn) = if arg > 5.9 {
            let (a, zeta) = crate::numerics::airy::airy_ai_scaled_positive(arg);
            (airy.k * x - zeta + a.ln(), 1.0)
        } else {
            let v = airy_ai(arg);
            if v == 0.0 {
                (f64::NEG_INFINITY, 1.0)
            } else {
                (airy.k * x + v.abs().ln(), v.signum())
            }
        };
        log_mag.push(lm);
        signs.push(sgn);
    }
    let l_max = log_mag.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !l_max.is_finite() {
        return Err(StateError::WindowTooNarrow(1.0));
    }
    let raw: Vec<Complex64> = log_mag
        .iter()
        .zip(&signs)
        .map(|(&lm, &s)| Complex64::new(s * (lm - l_max).exp(), 0.0))
        .collect();
    let dens: Vec<f64> = raw.iter().map(|v| v.norm_sqr()).collect();
    let peak = dens.iter().cloned().fold(0.0f64, f64::max);
    let edge = dens[0].max(dens[dens.len() - 1]);
    if edge > 1e-14 * peak {
        return Err(StateError::WindowTooNarrow(edge / peak));
    }
    // Normalization of the peak-relative form (the literal ∫e^{2kx}Ai² can
    // leave the f64 range for weak coupling; this is the computed quantity
    // every consumer actually divides by).
    airy.n = trapezoid(&dens, grid.dx());
    Ok((finalize(*grid, raw, Representation::X1, true), airy))
}

/// Unitary change of representation on sampled data; the output carries the
/// deviation of its norm from the input norm as `norm_residual` evidence of
/// unitarity (it is not renormalized).
pub fn representation_transform(
    psi: &SampledWavefunction,
    target: &Grid,
) -> Result<SampledWavefunction, StateError> {
    let sign = match psi.representation {
        Representation::X2 => 1.0,
        Representation::X1 => -1.0,
    };
    let values = oscillatory_transform(&psi.grid, &psi.values, target, sign)?;
    let dens: Vec<f64> = values.iter().map(|v| v.norm_sqr()).collect();
    let out_norm = trapezoid(&dens, target.dx());
    Ok(SampledWavefunction {
        grid: *target,
        values,
        representation: psi.representation.other(),
        norm_residual: (out_norm - psi.norm_sqr()).abs(),
    })
}

/// The four-photon state of variant II in the X₁ representation via the
/// native X₂-diagonal form and the representation transform. Defined for all
/// γ̃ ≥ 0 and any complex β.
pub fn psi_fpss2_transform(
    params: &StateParams,
    target: &Grid,
) -> Result<SampledWavefunction, StateError> {
    let source_grid = default_native_grid(params);
    let native = psi_native(params, &source_grid)?;
    let moved = representation_transform(&native, target)?;
    Ok(finalize(*target, moved.values, Representation::X1, true))
}

/// Build the X₁-representation state on its default grid, choosing the
/// cheapest valid route per family.
pub fn build_state(params: &StateParams) -> Result<SampledWavefunction, StateError> {
    build_state_on(params, None)
}

/// As [`build_state`] but with an optional caller-supplied X₁ grid.
pub fn build_state_on(
    params: &StateParams,
    grid: Option<&Grid>,
) -> Result<SampledWavefunction, StateError> {
    match &params.family {
        StateFamily::Tpss | StateFamily::FpssI => {
            let def = default_native_grid(params);
            psi_native(params, grid.unwrap_or(&def))
        }
        StateFamily::FpssII => {
            let def = default_x1_grid(params);
            let g = grid.unwrap_or(&def);
            match psi_fpss2_airy(params, g) {
                Ok((psi, _)) => Ok(psi),
                Err(StateError::AiryNeedsRealBeta(_)) | Err(StateError::AiryDegenerateCoupling) => {
                    psi_fpss2_transform(params, g)
                }
                Err(e) => Err(e),
            }
        }
        StateFamily::Generic(_, variant) => match variant {
            Variant::I => {
                let def = default_native_grid(params);
                psi_native(params, grid.unwrap_or(&def))
            }
            Variant::II => {
                let def = default_x1_grid(params);
                psi_fpss2_transform(params, grid.unwrap_or(&def))
            }
        },
    }
}

/// Quadrature means and variances, computed as density moments in the two
/// diagonal representations (the dual one is reached by the transform).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct QuadratureStats {
    pub mean_x1: f64,
    pub var_x1: f64,
    pub mean_x2: f64,
    pub var_x2: f64,
}

/// Estimate dual-representation moments from derivatives, used to size the
/// target grid before transforming.
fn dual_moment_estimate(psi: &SampledWavefunction) -> (f64, f64) {
    let dx = psi.grid.dx();
    let deriv = fd::derivative(&psi.values, dx);
    let overlap: Vec<Complex64> = psi
        .values
        .iter()
        .zip(&deriv)
        .map(|(v, d)| v.conj() * d)
        .collect();
    let first = trapezoid_c(&overlap, dx).im;
    let mean = match psi.representation {
        Representation::X1 => first,
        Representation::X2 => -first,
    };
    let sq: Vec<f64> = deriv.iter().map(|d| d.norm_sqr()).collect();
    let second = trapezoid(&sq, dx);
    (mean, (second - mean * mean).max(1e-12))
}

pub fn quadrature_stats(psi: &SampledWavefunction) -> Result<QuadratureStats, StateError> {
    let (mean_here, var_here) = psi.density_moments();
    let (mean_est, var_est) = dual_moment_estimate(psi);
    let half = (mean_est.abs() + 9.0 * var_est.sqrt()).max(10.0);
    let dual_grid = Grid::spanning(-half, half, 0.008);
    let dual = representation_transform(psi, &dual_grid)?;
    let (mean_there, var_there) = dual.density_moments();
    Ok(match psi.representation {
        Representation::X1 => QuadratureStats {
            mean_x1: mean_here,
            var_x1: var_here,
            mean_x2: mean_there,
            var_x2: var_there,
        },
        Representation::X2 => QuadratureStats {
            mean_x1: mean_there,
            var_x1: var_there,
            mean_x2: mean_here,
            var_x2: var_here,
        },
    })
}

/// Apply the discretized transformed mode `b` to a sampled wavefunction in
/// its own representation.
///
/// In the X₁-diagonal representation `a = (x + d/dx)/√2`; in the X₂-diagonal
/// one `a = i(x + d/dx)/√2`. A nonlinearity on the diagonal quadrature is a
/// multiplication; on the dual quadrature it becomes `F(∓i d/dx)`, supported
/// here to quadratic order.
pub fn apply_mode(
    psi: &SampledWavefunction,
    params: &StateParams,
) -> Result<Vec<Complex64>, StateError> {
    let (f, _) = params.nonlinearity();
    let mu = params.mu();
    let nu = params.nu();
    let gamma = params.gamma();
    let dx = psi.grid.dx();
    let deriv = fd::derivative(&psi.values, dx);
    let n = psi.values.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];

    // Bogoliubov part: μa + νa†.
    let (cx, cd) = match psi.representation {
        // (μ+ν)/√2 · x + (μ−ν)/√2 · d/dx
        Representation::X1 => (
            Complex64::new((mu + nu) / SQRT_2, 0.0),
            Complex64::new((mu - nu) / SQRT_2, 0.0),
        ),
        // i(μ−ν)/√2 · x + i(μ+ν)/√2 · d/dx
        Representation::X2 => (
            Complex64::new(0.0, (mu - nu) / SQRT_2),
            Complex64::new(0.0, (mu + nu) / SQRT_2),
        ),
    };
    for i in 0..n {
        let x = psi.grid.point(i);
        out[i] = cx * x * psi.values[i] + cd * deriv[i];
    }

    if f.is_zero() || params.gamma_tilde == 0.0 {
        return Ok(out);
    }
    let f_quadrature = match f.quadrature() {
        1 => Representation::X1,
        _ => Representation::X2,
    };
    if f_quadrature == psi.representation {
        let coeffs = f.numeric_coeffs()?;
        for i in 0..n {
            let x = psi.grid.point(i);
            let fx = coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
            out[i] += gamma * fx * psi.values[i];
        }
    } else {
        // Dual quadrature: X_dual = ∓i d/dx (−i in X₁-rep, +i in X₂-rep).
        if f.degree() > 2 {
            return Err(StateError::DualRepUnsupported(f.degree()));
        }
        let coeffs = f.numeric_coeffs()?;
        let unit = match psi.representation {
            Representation::X1 => Complex64::new(0.0, -1.0),
            Representation::X2 => Complex64::new(0.0, 1.0),
        };
        if let Some(&f0) = coeffs.first() {
            if f0 != 0.0 {
                for i in 0..n {
                    out[i] += gamma * f0 * psi.values[i];
                }
            }
        }
        if coeffs.len() > 1 && coeffs[1] != 0.0 {
            for i in 0..n {
                out[i] += gamma * coeffs[1] * unit * deriv[i];
            }
        }
        if coeffs.len() > 2 && coeffs[2] != 0.0 {
            let second = fd::second_derivative(&psi.values, dx);
            for i in 0..n {
                // unit² = −1 in either representation
                out[i] -= gamma * coeffs[2] * second[i];
            }
        }
    }
    Ok(out)
}

/// ‖(b − β)ψ‖ / ‖ψ‖ with `b` discretized in ψ's representation.
pub fn eigen_residual(psi: &SampledWavefunction, params: &StateParams) -> Result<f64, StateError> {
    let beta = params.beta();
    let applied = apply_mode(psi, params)?;
    let res: Vec<f64> = applied
        .iter()
        .zip(&psi.values)
        .map(|(bv, v)| (bv - beta * v).norm_sqr())
        .collect();
    let num = trapezoid(&res, psi.grid.dx()).sqrt();
    Ok(num / psi.norm_sqr().sqrt())
}

/// Interpolate a sampled wavefunction at an arbitrary point.
pub fn sample_at(psi: &SampledWavefunction, x: f64) -> Complex64 {
    interp6(&psi.grid, &psi.values, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig_params(family: StateFamily, gamma_tilde: f64) -> StateParams {
        StateParams::from_beta(family, 0.8, gamma_tilde, Complex64::new(3.0 * SQRT_2, 0.0))
            .unwrap()
    }

    #[test]
    fn beta_alpha_relation_both_directions() {
        let p =
            StateParams::from_beta(StateFamily::FpssII, 0.8, 0.14, Complex64::new(1.3, -0.7))
                .unwrap();
        let b = p.beta();
        assert!((b - Complex64::new(1.3, -0.7)).norm() < 1e-12);
        let q = StateParams::from_alpha(StateFamily::FpssII, 0.8, 0.14, p.alpha).unwrap();
        assert!((q.beta() - b).norm() < 1e-12);
    }

    #[test]
    fn gamma_tilde_must_be_nonnegative() {
        let err =
            StateParams::from_beta(StateFamily::FpssII, 0.8, -0.1, Complex64::new(1.0, 0.0))
                .unwrap_err();
        assert!(matches!(err, StateError::NegativeCoupling(_)));
    }

    #[test]
    fn tpss_native_density_moments() {
        // γ̃ = 0, r = 0.8, real α: density N(√2α₁, e^{−1.6}/2).
        let p =
            StateParams::from_alpha(StateFamily::Tpss, 0.8, 0.0, Complex64::new(1.9, 0.0))
                .unwrap();
        let grid = default_native_grid(&p);
        let psi = psi_native(&p, &grid).unwrap();
        assert!(psi.norm_residual < 1e-10);
        let (mean, var) = psi.density_moments();
        assert!((mean - SQRT_2 * 1.9).abs() < 1e-9);
        assert!((var - (-1.6f64).exp() / 2.0).abs() < 1e-9);
    }

    #[test]
    fn fpss1_density_is_gaussian_regardless_of_coupling() {
        let p0 = fig_params(StateFamily::FpssI, 0.0);
        let p1 = fig_params(StateFamily::FpssI, 0.05);
        let grid = default_native_grid(&p1);
        let a = psi_native(&p0, &grid).unwrap();
        let b = psi_native(&p1, &grid).unwrap();
        let sup = a
            .density()
            .iter()
            .zip(b.density())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max);
        assert!(sup < 1e-12, "density deformed by phase-only coupling: {sup:e}");
    }

    #[test]
    fn fpss1_mean_and_variance() {
        let p = fig_params(StateFamily::FpssI, 0.14);
        let grid = default_native_grid(&p);
        let psi = psi_native(&p, &grid).unwrap();
        let (mean, var) = psi.density_moments();
        assert!((mean - 6.0 * (-0.8f64).exp()).abs() < 1e-9);
        assert!((mean - 2.695_973_8).abs() < 1e-6);
        assert!((var - (-1.6f64).exp() / 2.0).abs() < 1e-9);
    }

    #[test]
    fn fpss1_phase_derivative_matches_convention() {
        // d(arg ψ)/dx = c₁ + phase_scale·x² = √2α₂ − √2 e^{r} γ̃ x².
        let p = StateParams::from_alpha(
            StateFamily::FpssI,
            0.8,
            0.14,
            Complex64::new(1.9, 0.4),
        )
        .unwrap();
        let grid = default_native_grid(&p);
        let psi = psi_native(&p, &grid).unwrap();
        let data = NativeRepData::for_params(&p);
        assert!(data.phase_scale < 0.0);
        let dx = grid.dx();
        for i in (600..grid.n_points - 600).step_by(257) {
            let x = grid.point(i);
            // Fourth-order phase derivative from ratio arguments.
            let a1 = (psi.values[i + 1] / psi.values[i - 1]).arg();
            let a2 = (psi.values[i + 2] / psi.values[i - 2]).arg();
            let dphase = (8.0 * a1 - a2) / (12.0 * dx);
            let want = data.c + data.phase_scale * x * x;
            assert!(
                (dphase - want).abs() < 1e-6,
                "phase derivative at x = {x}: {dphase} vs {want}"
            );
        }
    }

    #[test]
    fn variant_ii_native_is_antisqueezed() {
        let p = fig_params(StateFamily::FpssII, 0.14);
        let grid = default_native_grid(&p);
        let psi = psi_native(&p, &grid).unwrap();
        assert_eq!(psi.representation, Representation::X2);
        let (mean, var) = psi.density_moments();
        assert!(mean.abs() < 1e-9); // β real ⟹ x₂⁽⁰⁾ = 0
        assert!((var - (1.6f64).exp() / 2.0).abs() < 1e-8);
    }

    #[test]
    fn airy_and_transform_paths_agree() {
        let p = fig_params(StateFamily::FpssII, 0.14);
        let grid = default_x1_grid(&p);
        let (airy, data) = psi_fpss2_airy(&p, &grid).unwrap();
        assert!(data.n.is_finite() && data.n > 0.0);
        let transformed = psi_fpss2_transform(&p, &grid).unwrap();
        let ov = airy.overlap(&transformed).unwrap();
        assert!(ov >= 1.0 - 1e-6, "overlap {ov}");
    }

    #[test]
    fn airy_density_is_non_gaussian() {
        let p = fig_params(StateFamily::FpssII, 0.14);
        let grid = default_x1_grid(&p);
        let (psi, _) = psi_fpss2_airy(&p, &grid).unwrap();
        assert!(psi.density_excess_kurtosis().abs() > 0.01);
        assert!(psi.norm_residual < 1e-10);
    }

    #[test]
    fn airy_rejects_complex_beta_and_zero_coupling() {
        let complex_beta =
            StateParams::from_beta(StateFamily::FpssII, 0.8, 0.14, Complex64::new(1.0, 0.5))
                .unwrap();
        let grid = default_x1_grid(&complex_beta);
        assert!(matches!(
            psi_fpss2_airy(&complex_beta, &grid),
            Err(StateError::AiryNeedsRealBeta(_))
        ));
        let zero_coupling = fig_params(StateFamily::FpssII, 0.0);
        assert!(matches!(
            psi_fpss2_airy(&zero_coupling, &default_x1_grid(&zero_coupling)),
            Err(StateError::AiryDegenerateCoupling)
        ));
    }

    #[test]
    fn transform_limit_recovers_tpss_with_complex_alpha() {
        // γ̃ = 0 via the X₂-native + transform route must match the analytic
        // X₁ Gaussian including the signs of x₂⁽⁰⁾ and c₂ — the executed
        // check that pins the kernel and center-sign conventions.
        let alpha = Complex64::new(1.1, -0.6);
        let p2 = StateParams::from_alpha(
            StateFamily::Generic(NonlinearitySpec::zero(2), Variant::II),
            0.5,
            0.0,
            alpha,
        )
        .unwrap();
        let grid = Grid::spanning(-14.0, 14.0, DX_TARGET);
        let via_transform = psi_fpss2_transform(&p2, &grid).unwrap();
        let p1 = StateParams::from_alpha(StateFamily::Tpss, 0.5, 0.0, alpha).unwrap();
        let analytic = psi_native(&p1, &grid).unwrap();
        let ov = via_transform.overlap(&analytic).unwrap();
        assert!(ov >= 1.0 - 1e-8, "overlap {ov}");
    }

    #[test]
    fn transform_is_unitary() {
        let p = fig_params(StateFamily::FpssI, 0.14);
        let grid = default_native_grid(&p);
        let psi = psi_native(&p, &grid).unwrap();
        let out = representation_transform(&psi, &Grid::spanning(-16.0, 16.0, 0.007)).unwrap();
        assert!(out.norm_residual < 1e-8);
        assert_eq!(out.representation, Representation::X2);
    }

    #[test]
    fn quadrature_stats_vacuum_and_squeezed() {
        let vac =
            StateParams::from_alpha(StateFamily::Tpss, 0.0, 0.0, Complex64::new(0.0, 0.0))
                .unwrap();
        let psi = psi_native(&vac, &default_native_grid(&vac)).unwrap();
        let st = quadrature_stats(&psi).unwrap();
        assert!((st.var_x1 - 0.5).abs() < 1e-8);
        assert!((st.var_x2 - 0.5).abs() < 1e-8);

        let p = fig_params(StateFamily::FpssI, 0.14);
        let psi = psi_native(&p, &default_native_grid(&p)).unwrap();
        let st = quadrature_stats(&psi).unwrap();
        assert!((st.var_x1 - (-1.6f64).exp() / 2.0).abs() < 1e-8);
    }

    #[test]
    fn eigen_residuals_are_small_in_native_representations() {
        for (family, gamma) in [
            (StateFamily::Tpss, 0.0),
            (StateFamily::FpssI, 0.14),
            (StateFamily::FpssII, 0.14),
        ] {
            let p = fig_params(family.clone(), gamma);
            let grid = default_native_grid(&p);
            let psi = psi_native(&p, &grid).unwrap();
            let res = eigen_residual(&psi, &p).unwrap();
            assert!(res < 1e-5, "{}: residual {res:e}", family.label());
        }
    }

    #[test]
    fn eigen_residual_of_airy_state_in_x1() {
        // Applies b with F(X₂) = X₂² = −d²/dx², validating the Airy
        // constants independently of the transform route.
        let p = fig_params(StateFamily::FpssII, 0.14);
        let grid = default_x1_grid(&p);
        let (psi, _) = psi_fpss2_airy(&p, &grid).unwrap();
        let res = eigen_residual(&psi, &p).unwrap();
        assert!(res < 1e-5, "residual {res:e}");
    }

    #[test]
    fn tpss_limit_of_both_families() {
        for family in [StateFamily::FpssI, StateFamily::FpssII] {
            let p = fig_params(family.clone(), 1e-3);
            let tp = fig_params(StateFamily::Tpss, 0.0);
            let grid = default_x1_grid(&p);
            let state = match family {
                StateFamily::FpssI => psi_native(&p, &grid).unwrap(),
                _ => psi_fpss2_airy(&p, &grid).unwrap().0,
            };
            let tpss = psi_native(&tp, &grid).unwrap();
            let ov = state.overlap(&tpss).unwrap();
            assert!(ov >= 1.0 - 1e-3, "{}: overlap {ov}", family.label());
        }
    }

    #[test]
    fn coupling_continuity_no_branch_jumps() {
        for (r, g) in [(0.0, 0.01), (0.8, 0.14), (1.5, 0.5)] {
            let base = StateParams::from_beta(
                StateFamily::FpssII,
                r,
                g,
                Complex64::new(3.0 * SQRT_2, 0.0),
            )
            .unwrap();
            let bumped = StateParams {
                gamma_tilde: g + 1e-4,
                ..base.clone()
            };
            let grid = default_x1_grid(&base);
            let (sa, _) = psi_fpss2_airy(&base, &grid).unwrap();
            let (sb, _) = psi_fpss2_airy(&bumped, &grid).unwrap();
            let ov = sa.overlap(&sb).unwrap();
            assert!(ov > 1.0 - 1e-3, "jump at r={r}, γ̃={g}: overlap {ov}");
        }
    }

    #[test]
    fn grid_too_narrow_is_rejected() {
        let p = fig_params(StateFamily::FpssI, 0.14);
        let narrow = Grid::new(-2.0, 2.0, 256).unwrap();
        assert!(matches!(
            psi_native(&p, &narrow),
            Err(StateError::GridTooNarrow { .. })
        ));
    }
}
