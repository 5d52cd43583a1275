//! Fock-space projections and photon statistics.
//!
//! A sampled X₁-representation wavefunction is projected onto the
//! oscillator eigenfunctions by Gauss–Hermite quadrature,
//! `cₙ = ∫ φₙ(x) ψ(x) dx`, giving `P(n) = |cₙ|²`, the factorial moments
//! `⟨a†ᵏaᵏ⟩ = Σ n!/(n−k)!·P(n)`, and the normalized correlations
//! `g⁽ᵏ⁾(0) = ⟨a†ᵏaᵏ⟩/⟨a†a⟩ᵏ` (the convention that makes every coherent
//! state exactly 1).
//!
//! An independent oracle for the Gaussian (γ̃ = 0) states builds truncated
//! matrices for `a`, `a†` and applies `D(α)·S(r)` to the vacuum with a dense
//! matrix exponential. For `D(α)S(r)|0⟩` to be the `μa + νa†` eigenvector
//! with eigenvalue `β = μα + να*` (and variance e^{−2r}/2 in X₁), the
//! squeeze must be `S(r) = exp[(r/2)(a² − a†²)]`: then `S†(μa+νa†)S = a`.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::numerics::{
    expm, fd, hermite_column, trapezoid, CMatrix, GaussHermite, Representation,
    MAX_HERMITE_INDEX,
};
use crate::states::{sample_at, SampledWavefunction};

#[derive(Debug, Error)]
pub enum FockError {
    #[error("Fock projection needs an X1-representation wavefunction")]
    WrongRepresentation,
    #[error("truncation {0} exceeds the oscillator-index cap {MAX_HERMITE_INDEX}")]
    TruncationTooLarge(usize),
    #[error("tail mass {0:e} ≥ 1e-4: increase the truncation or widen the grid")]
    TailTooHeavy(f64),
    #[error("tail mass {0:e} too heavy for moments (needs < 1e-6)")]
    TailTooHeavyForMoments(f64),
    #[error("factorial order must be in 1..=8, got {0}")]
    BadMomentOrder(usize),
    #[error("correlation order must be 2 or 4, got {0}")]
    BadCorrelationOrder(usize),
    #[error("mean photon number vanishes; g^(k) undefined")]
    ZeroMeanPhotonNumber,
    #[error("oracle truncation tail {0:e} ≥ 1e-8: increase N")]
    OracleTail(f64),
}

/// A truncated Fock expansion `c₀ … c_N` with its unresolved tail mass.
#[derive(Clone, Debug, Serialize)]
pub struct FockExpansion {
    pub coefficients: Vec<Complex64>,
    pub tail_mass: f64,
}

impl FockExpansion {
    pub fn new(coefficients: Vec<Complex64>) -> Self {
        let captured: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
        let tail = 1.0 - captured;
        assert!(
            tail >= -1e-9,
            "captured probability exceeds 1 beyond the quadrature noise floor: tail = {tail:e}"
        );
        FockExpansion {
            coefficients,
            tail_mass: tail,
        }
    }

    pub fn truncation(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }
}

/// Default Gauss–Hermite node count for a given truncation.
fn node_count(n_max: usize) -> usize {
    (n_max + 128).clamp(320, 2 * MAX_HERMITE_INDEX)
}

/// Project an X₁-representation wavefunction onto `φ₀ … φ_{n_max}` by
/// Gauss–Hermite quadrature (wavefunction samples are interpolated onto the
/// nodes). Errors if more than 1e-4 of the state escapes the truncation.
fn project(
    psi: &SampledWavefunction,
    n_max: usize,
    nodes: Option<usize>,
) -> Result<FockExpansion, FockError> {
    if psi.representation != Representation::X1 {
        return Err(FockError::WrongRepresentation);
    }
    if n_max > MAX_HERMITE_INDEX {
        return Err(FockError::TruncationTooLarge(n_max));
    }
    let rule = GaussHermite::new(nodes.unwrap_or_else(|| node_count(n_max)));
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n_max + 1];
    let mut col = Vec::new();
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let v = sample_at(psi, x);
        if v.norm_sqr() == 0.0 {
            continue;
        }
        hermite_column(n_max, x, &mut col);
        for (c, phi) in coeffs.iter_mut().zip(&col) {
            *c += v * (w * phi);
        }
    }
    Ok(FockExpansion::new(coeffs))
}

pub fn fock_coefficients(
    psi: &SampledWavefunction,
    n_max: usize,
    nodes: Option<usize>,
) -> Result<FockExpansion, FockError> {
    let out = project(psi, n_max, nodes)?;
    if out.tail_mass >= 1e-4 {
        return Err(FockError::TailTooHeavy(out.tail_mass));
    }
    Ok(out)
}

/// Projection with the truncation ladder 120 → 240 → 480 → 512: stop at the
/// first rung whose tail mass is below 1e-8; the 1e-4 gate applies to the
/// final rung only.
pub fn fock_coefficients_auto(psi: &SampledWavefunction) -> Result<FockExpansion, FockError> {
    let mut last = None;
    for n_max in [120usize, 240, 480, MAX_HERMITE_INDEX] {
        let f = project(psi, n_max, None)?;
        if f.tail_mass < 1e-8 {
            return Ok(f);
        }
        last = Some(f);
    }
    let f = last.expect("ladder is non-empty");
    if f.tail_mass >= 1e-4 {
        return Err(FockError::TailTooHeavy(f.tail_mass));
    }
    Ok(f)
}

/// `P(n) = |cₙ|²` (reported without tail renormalization).
pub fn photon_number_distribution(f: &FockExpansion) -> Vec<f64> {
    f.coefficients.iter().map(|c| c.norm_sqr()).collect()
}

/// `⟨a†ᵏaᵏ⟩ = Σₙ n(n−1)…(n−k+1) P(n)` for 1 ≤ k ≤ 8.
pub fn factorial_moment(f: &FockExpansion, k: usize) -> Result<f64, FockError> {
    if !(1..=8).contains(&k) {
        return Err(FockError::BadMomentOrder(k));
    }
    if f.tail_mass >= 1e-6 {
        return Err(FockError::TailTooHeavyForMoments(f.tail_mass));
    }
    let mut total = 0.0;
    for (n, c) in f.coefficients.iter().enumerate() {
        if n < k {
            continue;
        }
        let mut w = 1.0f64;
        for j in 0..k {
            w *= (n - j) as f64;
        }
        total += w * c.norm_sqr();
    }
    Ok(total)
}

/// `g⁽ᵏ⁾(0) = ⟨a†ᵏaᵏ⟩ / ⟨a†a⟩ᵏ` for k ∈ {2, 4}.
pub fn g_correlation(f: &FockExpansion, k: usize) -> Result<f64, FockError> {
    if k != 2 && k != 4 {
        return Err(FockError::BadCorrelationOrder(k));
    }
    let mean = factorial_moment(f, 1)?;
    if mean <= 0.0 {
        return Err(FockError::ZeroMeanPhotonNumber);
    }
    Ok(factorial_moment(f, k)? / mean.powi(k as i32))
}

/// Independent grid route for the mean photon number:
/// `⟨a†a⟩ = ∫ (|ψ'|² + x²|ψ|²)/2 dx − ½`.
pub fn mean_photon_grid(psi: &SampledWavefunction) -> f64 {
    let dx = psi.grid.dx();
    let deriv = fd::derivative(&psi.values, dx);
    let integrand: Vec<f64> = psi
        .values
        .iter()
        .zip(&deriv)
        .enumerate()
        .map(|(i, (v, d))| {
            let x = psi.grid.point(i);
            0.5 * (d.norm_sqr() + x * x * v.norm_sqr())
        })
        .collect();
    trapezoid(&integrand, dx) / psi.norm_sqr() - 0.5
}

/// The truncated-matrix oracle for the Gaussian states: the Fock vector of
/// `D(α)·S(r)|0⟩` with `S(r) = exp[(r/2)(a² − a†²)]`, both exponentials via
/// dense scaling-and-squaring.
pub fn tpss_oracle(alpha: Complex64, r: f64, n: usize) -> Result<FockExpansion, FockError> {
    if n > MAX_HERMITE_INDEX {
        return Err(FockError::TruncationTooLarge(n));
    }
    let dim = n + 1;
    let a = CMatrix::annihilator(dim);
    let ad = CMatrix::creator(dim);

    // K_S = (r/2)(a² − a†²)
    let a2 = a.matmul(&a);
    let ad2 = ad.matmul(&ad);
    let ks = a2
        .scale(Complex64::new(r / 2.0, 0.0))
        .add(&ad2.scale(Complex64::new(-r / 2.0, 0.0)));
    // K_D = α a† − α* a
    let kd = ad.scale(alpha).add(&a.scale(-alpha.conj()));

    let mut v = vec![Complex64::new(0.0, 0.0); dim];
    v[0] = Complex64::new(1.0, 0.0);
    let v = expm(&ks).matvec(&v);
    let v = expm(&kd).matvec(&v);

    // The truncated generators are exactly anti-Hermitian, so the result is
    // normalized no matter how badly it is truncated; truncation error shows
    // up as probability piled against the boundary instead.
    let boundary: f64 = v.iter().rev().take(6).map(|c| c.norm_sqr()).sum();
    if boundary >= 1e-8 {
        return Err(FockError::OracleTail(boundary));
    }
    Ok(FockExpansion::new(v))
}

/// Align the global phase of two expansions (largest coefficient made real
/// positive in both) and return the maximum per-coefficient distance.
pub fn max_coefficient_distance(a: &FockExpansion, b: &FockExpansion) -> f64 {
    let rotate = |f: &FockExpansion| -> Vec<Complex64> {
        let lead = f
            .coefficients
            .iter()
            .cloned()
            .max_by(|x, y| x.norm_sqr().total_cmp(&y.norm_sqr()))
            .unwrap_or(Complex64::new(1.0, 0.0));
        let phase = if lead.norm() > 0.0 {
            (lead / lead.norm()).conj()
        } else {
            Complex64::new(1.0, 0.0)
        };
        f.coefficients.iter().map(|c| c * phase).collect()
    };
    let ra = rotate(a);
    let rb = rotate(b);
    let zero = Complex64::new(0.0, 0.0);
    let n = ra.len().max(rb.len());
    (0..n)
        .map(|i| (ra.get(i).unwrap_or(&zero) - rb.get(i).unwrap_or(&zero)).norm())
        .fold(0.0, f64::max)
}

/// Indices of strict local maxima of a distribution (above a noise floor).
pub fn local_maxima(p: &[f64], floor: f64) -> Vec<usize> {
    let mut out = Vec::new();
    for i in 0..p.len() {
        if p[i] <= floor {
            continue;
        }
        let left = if i == 0 { f64::NEG_INFINITY } else { p[i - 1] };
        let right = if i + 1 == p.len() {
            f64::NEG_INFINITY
        } else {
            p[i + 1]
        };
        if p[i] > left && p[i] > right {
            out.push(i);
        }
    }
    out
}

/// Total-variation distance ½Σ|p−q| over the common support.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    let n = p.len().max(q.len());
    let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    0.5 * (0..n).map(|i| (get(p, i) - get(q, i)).abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{
        build_state, default_native_grid, psi_native, StateFamily, StateParams,
    };

    const SQRT_2: f64 = std::f64::consts::SQRT_2;

    fn coherent_state(alpha: f64) -> SampledWavefunction {
        let p = StateParams::from_alpha(
            StateFamily::Tpss,
            0.0,
            0.0,
            Complex64::new(alpha, 0.0),
        )
        .unwrap();
        psi_native(&p, &default_native_grid(&p)).unwrap()
    }

    #[test]
    fn coherent_fock_coefficients() {
        // cₙ = e^{−|α|²/2} αⁿ/√n!; c₀(α=1) = e^{−1/2} ≈ 0.60653.
        let psi = coherent_state(1.0);
        let f = fock_coefficients(&psi, 64, None).unwrap();
        let mut fact = 1.0f64;
        for n in 0..20 {
            if n > 0 {
                fact *= n as f64;
            }
            let want = (-0.5f64).exp() / fact.sqrt();
            assert!(
                (f.coefficients[n] - Complex64::new(want, 0.0)).norm() < 1e-9,
                "n = {n}"
            );
        }
        assert!((f.coefficients[0].re - 0.606_530_66).abs() < 1e-8);
    }

    #[test]
    fn vacuum_projection() {
        let psi = coherent_state(0.0);
        let f = fock_coefficients(&psi, 32, None).unwrap();
        assert!((f.coefficients[0].norm() - 1.0).abs() < 1e-10);
        for c in &f.coefficients[1..] {
            assert!(c.norm() < 1e-10);
        }
    }

    #[test]
    fn squeezed_vacuum_has_even_parity() {
        let p = StateParams::from_alpha(
            StateFamily::Tpss,
            0.8,
            0.0,
            Complex64::new(0.0, 0.0),
        )
        .unwrap();
        let psi = psi_native(&p, &default_native_grid(&p)).unwrap();
        let f = fock_coefficients(&psi, 96, None).unwrap();
        for (n, c) in f.coefficients.iter().enumerate() {
            if n % 2 == 1 {
                assert!(c.norm() < 1e-10, "odd coefficient c_{n} = {c}");
            }
        }
    }

    #[test]
    fn poisson_distribution_for_coherent_state() {
        let psi = coherent_state(1.0);
        let f = fock_coefficients(&psi, 64, None).unwrap();
        let p = photon_number_distribution(&f);
        let mut fact = 1.0f64;
        for n in 0..15 {
            if n > 0 {
                fact *= n as f64;
            }
            let want = (-1.0f64).exp() / fact;
            assert!((p[n] - want).abs() < 1e-10, "P({n})");
        }
        let total: f64 = p.iter().sum();
        assert!((total + f.tail_mass - 1.0).abs() < 1e-9);
    }

    #[test]
    fn factorial_moments_basics() {
        // Fock |2⟩: ⟨a†²a²⟩ = 2; vacuum: 0; coherent α=1: all moments 1.
        let mut fock2 = vec![Complex64::new(0.0, 0.0); 8];
        fock2[2] = Complex64::new(1.0, 0.0);
        let f2 = FockExpansion::new(fock2);
        assert_eq!(factorial_moment(&f2, 2).unwrap(), 2.0);
        assert_eq!(g_correlation(&f2, 2).unwrap(), 0.5);

        let mut vac = vec![Complex64::new(0.0, 0.0); 4];
        vac[0] = Complex64::new(1.0, 0.0);
        let fv = FockExpansion::new(vac);
        assert_eq!(factorial_moment(&fv, 1).unwrap(), 0.0);
        assert_eq!(factorial_moment(&fv, 4).unwrap(), 0.0);
        assert!(matches!(
            g_correlation(&fv, 2),
            Err(FockError::ZeroMeanPhotonNumber)
        ));

        let psi = coherent_state(1.0);
        let f = fock_coefficients(&psi, 64, None).unwrap();
        for k in 1..=4 {
            assert!(
                (factorial_moment(&f, k).unwrap() - 1.0).abs() < 1e-9,
                "k = {k}"
            );
        }
        assert!((g_correlation(&f, 2).unwrap() - 1.0).abs() < 1e-9);
        assert!((g_correlation(&f, 4).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn moment_order_bounds() {
        let psi = coherent_state(1.0);
        let f = fock_coefficients(&psi, 64, None).unwrap();
        assert!(matches!(
            factorial_moment(&f, 0),
            Err(FockError::BadMomentOrder(0))
        ));
        assert!(matches!(
            factorial_moment(&f, 9),
            Err(FockError::BadMomentOrder(9))
        ));
        assert!(matches!(
            g_correlation(&f, 3),
            Err(FockError::BadCorrelationOrder(3))
        ));
    }

    #[test]
    fn squeezed_vacuum_g2_analytic() {
        // g² = 3 + 1/sinh²r for the squeezed vacuum.
        let r = 0.8f64;
        let p = StateParams::from_alpha(
            StateFamily::Tpss,
            r,
            0.0,
            Complex64::new(0.0, 0.0),
        )
        .unwrap();
        let psi = psi_native(&p, &default_native_grid(&p)).unwrap();
        let f = fock_coefficients(&psi, 160, None).unwrap();
        let want = 3.0 + 1.0 / r.sinh().powi(2);
        assert!((want - 4.267_857_6).abs() < 1e-6);
        let got = g_correlation(&f, 2).unwrap();
        assert!((got - want).abs() < 1e-6, "{got} vs {want}");

        let oracle = tpss_oracle(Complex64::new(0.0, 0.0), r, 200).unwrap();
        let got = g_correlation(&oracle, 2).unwrap();
        assert!((got - want).abs() < 1e-6, "oracle: {got} vs {want}");
    }

    #[test]
    fn oracle_matches_coherent_expansion() {
        let f = tpss_oracle(Complex64::new(1.0, 0.0), 0.0, 120).unwrap();
        let mut fact = 1.0f64;
        for n in 0..16 {
            if n > 0 {
                fact *= n as f64;
            }
            let want = (-0.5f64).exp() / fact.sqrt();
            assert!(
                (f.coefficients[n] - Complex64::new(want, 0.0)).norm() < 1e-10,
                "n = {n}"
            );
        }
    }

    #[test]
    fn oracle_squeezed_vacuum_mean_and_parity() {
        let r = 0.8f64;
        let f = tpss_oracle(Complex64::new(0.0, 0.0), r, 200).unwrap();
        for (n, c) in f.coefficients.iter().enumerate() {
            if n % 2 == 1 {
                assert!(c.norm() < 1e-12);
            }
        }
        let mean = factorial_moment(&f, 1).unwrap();
        assert!((mean - r.sinh().powi(2)).abs() < 1e-8);
    }

    #[test]
    fn oracle_agrees_with_grid_pipeline() {
        // Two fully independent routes to the same Fock vector.
        let p = StateParams::from_beta(
            StateFamily::Tpss,
            0.8,
            0.0,
            Complex64::new(3.0 * SQRT_2, 0.0),
        )
        .unwrap();
        let psi = psi_native(&p, &default_native_grid(&p)).unwrap();
        let grid_route = fock_coefficients(&psi, 160, None).unwrap();
        let oracle = tpss_oracle(p.alpha, 0.8, 200).unwrap();
        let d = max_coefficient_distance(&grid_route, &oracle);
        assert!(d < 1e-6, "max per-coefficient distance {d:e}");
    }

    #[test]
    fn grid_route_mean_photon_number() {
        let p = StateParams::from_beta(
            StateFamily::FpssII,
            0.8,
            0.1,
            Complex64::new(3.0 * SQRT_2, 0.0),
        )
        .unwrap();
        let psi = build_state(&p).unwrap();
        let f = fock_coefficients_auto(&psi).unwrap();
        let via_fock = factorial_moment(&f, 1).unwrap();
        let via_grid = mean_photon_grid(&psi);
        assert!(
            (via_fock - via_grid).abs() < 1e-6,
            "{via_fock} vs {via_grid}"
        );
    }

    #[test]
    fn g_is_phase_invariant() {
        let psi = coherent_state(1.3);
        let f = fock_coefficients(&psi, 64, None).unwrap();
        let rotated = FockExpansion::new(
            f.coefficients
                .iter()
                .map(|c| c * Complex64::from_polar(1.0, 0.7))
                .collect(),
        );
        let a = g_correlation(&f, 2).unwrap();
        let b = g_correlation(&rotated, 2).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn truncation_is_monotone_within_tail_bound() {
        let p = StateParams::from_beta(
            StateFamily::Tpss,
            0.8,
            0.0,
            Complex64::new(3.0 * SQRT_2, 0.0),
        )
        .unwrap();
        let psi = psi_native(&p, &default_native_grid(&p)).unwrap();
        let small = fock_coefficients(&psi, 140, None).unwrap();
        let large = fock_coefficients(&psi, 280, None).unwrap();
        for k in [1usize, 2, 4] {
            let a = factorial_moment(&small, k).unwrap();
            let b = factorial_moment(&large, k).unwrap();
            let mut kfact = 1.0;
            for j in 1..=k {
                kfact *= j as f64;
            }
            let bound = kfact * (280f64).powi(k as i32) * small.tail_mass + 1e-9;
            assert!((a - b).abs() <= bound, "k = {k}: |{a} - {b}| > {bound}");
        }
    }

    #[test]
    fn oracle_tail_is_enforced() {
        // A huge amplitude cannot fit in a tiny truncation.
        let err = tpss_oracle(Complex64::new(6.0, 0.0), 0.0, 40).unwrap_err();
        assert!(matches!(err, FockError::OracleTail(_)));
    }
}
