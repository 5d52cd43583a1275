//! The nonlinearly transformed mode `b = μa + νa† + γF(Xᵢ)` and its
//! Hamiltonians.
//!
//! Two variants exist: the nonlinearity sits either on `X₁` (variant I) or on
//! `X₂` (variant II). Canonicity (`[b, b†] = 1`) requires the Bogoliubov
//! constraint `|μ|² − |ν|² = 1` together with one linear condition that does
//! not depend on `F`: `Re(μγ* − ν*γ) = 0` for variant I, `Im(μγ* − ν*γ) = 0`
//! for variant II. With the real parameterization `μ = cosh r`, `ν = sinh r`
//! (phase fixed to zero) the linear condition makes `γ` purely imaginary for
//! variant I and purely real for variant II, so everything is driven by one
//! real coupling strength `γ̃ ≥ 0`: `γ = i·γ̃` (variant I) or `γ = γ̃`
//! (variant II).
//!
//! Symbolic results use the symbols `mu`, `nu`, `gamma`, where `gamma` is the
//! real strength γ̃. `e^{±r}` is encoded as `mu ± nu` so the quadrature form
//! of the Hamiltonian lives in the same ring as the normal-ordered expansion.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    parse_univariate, Bindings, OperatorPoly, ParseError, PolyCoeff,
};

/// Cap on the polynomial degree of the nonlinearity.
pub const MAX_NONLINEARITY_DEGREE: usize = 16;

/// Which quadrature carries the nonlinearity.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Variant {
    /// `F` acts on X₁; canonical constraints make γ purely imaginary.
    I,
    /// `F` acts on X₂; canonical constraints make γ purely real.
    II,
}

impl Variant {
    pub fn quadrature(self) -> u8 {
        match self {
            Variant::I => 1,
            Variant::II => 2,
        }
    }

    /// Sign of r in `rᵢ`: `r₁ = r`, `r₂ = −r`.
    pub fn r_sign(self) -> f64 {
        match self {
            Variant::I => 1.0,
            Variant::II => -1.0,
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Variant::I => write!(f, "I"),
            Variant::II => write!(f, "II"),
        }
    }
}

#[derive(Debug, Error)]
pub enum CanonicalError {
    #[error("nonlinearity degree {0} exceeds the cap {MAX_NONLINEARITY_DEGREE}")]
    DegreeCap(usize),
    #[error("the phase φ is fixed to 0 in this artifact; got φ = {0}")]
    NonzeroPhase(f64),
    #[error("nonlinearity coefficients must be numeric here; symbol `{0}` is unbound")]
    SymbolicCoefficient(String),
    #[error("nonlinearity coefficients must be real; coefficient of X^{0} is {1}")]
    ComplexCoefficient(usize, Complex64),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Polynomial nonlinearity `F(X) = Σ fₖ Xᵏ` on one quadrature, plus its
/// antiderivative `G(x) = Σ fₖ x^{k+1}/(k+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NonlinearitySpec {
    quadrature: u8,
    coeffs: Vec<PolyCoeff>,
}

impl NonlinearitySpec {
    pub fn new(quadrature: u8, coeffs: Vec<PolyCoeff>) -> Result<Self, CanonicalError> {
        assert!(quadrature == 1 || quadrature == 2, "quadrature must be 1 or 2");
        let mut coeffs = coeffs;
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        if coeffs.len() > MAX_NONLINEARITY_DEGREE + 1 {
            return Err(CanonicalError::DegreeCap(coeffs.len() - 1));
        }
        Ok(NonlinearitySpec { quadrature, coeffs })
    }

    /// `F = X_q^n`.
    pub fn monomial(quadrature: u8, n: usize) -> Result<Self, CanonicalError> {
        let mut coeffs = vec![PolyCoeff::zero(); n + 1];
        coeffs[n] = PolyCoeff::one();
        NonlinearitySpec::new(quadrature, coeffs)
    }

    /// `F = 0` (the Bogoliubov limit) on the given quadrature.
    pub fn zero(quadrature: u8) -> Self {
        NonlinearitySpec {
            quadrature,
            coeffs: vec![],
        }
    }

    /// Parse a nonlinearity such as `"X2^2"` or `"3*X1 - 1/2*X1^3"`.
    pub fn parse(text: &str, quadrature: u8) -> Result<Self, CanonicalError> {
        let coeffs = parse_univariate(text, quadrature)?;
        NonlinearitySpec::new(quadrature, coeffs)
    }

    pub fn quadrature(&self) -> u8 {
        self.quadrature
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[PolyCoeff] {
        &self.coeffs
    }

    /// The quadrature operator the nonlinearity acts on.
    pub fn quadrature_operator(&self) -> OperatorPoly {
        match self.quadrature {
            1 => OperatorPoly::quadrature_x1(),
            _ => OperatorPoly::quadrature_x2(),
        }
    }

    /// `F(Xᵢ)` as a normal-ordered operator polynomial.
    pub fn operator(&self) -> OperatorPoly {
        let x = self.quadrature_operator();
        let mut out = OperatorPoly::zero();
        let mut xk = OperatorPoly::identity();
        for c in &self.coeffs {
            out = &out + &xk.scale(c);
            xk = &xk * &x;
        }
        out
    }

    /// Numeric coefficient list; errors if any coefficient is symbolic or
    /// not real (Hermitian `F` requires real coefficients).
    pub fn numeric_coeffs(&self) -> Result<Vec<f64>, CanonicalError> {
        let empty = std::collections::BTreeMap::new();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let z = c.eval(&empty).map_err(|e| match e {
                    crate::algebra::SymbolError::Unbound(s) => {
                        CanonicalError::SymbolicCoefficient(s)
                    }
                    other => panic!("unexpected evaluation error: {other}"),
                })?;
                if z.im.abs() > 1e-14 {
                    return Err(CanonicalError::ComplexCoefficient(k, z));
                }
                Ok(z.re)
            })
            .collect()
    }

    /// Evaluate `F(x)` for numeric coefficients.
    pub fn eval_f(&self, x: f64) -> Result<f64, CanonicalError> {
        let coeffs = self.numeric_coeffs()?;
        Ok(horner(&coeffs, x))
    }

    /// Evaluate the antiderivative `G(x) = ∫₀ˣ F`.
    pub fn eval_g(&self, x: f64) -> Result<f64, CanonicalError> {
        let coeffs = self.numeric_coeffs()?;
        let g: Vec<f64> = std::iter::once(0.0)
            .chain(
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, f)| f / (k as f64 + 1.0)),
            )
            .collect();
        Ok(horner(&g, x))
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Numeric parameters of the transformation: squeezing `r`, real coupling
/// strength `γ̃`, and the variant. The phase φ is fixed to 0.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CanonicalParams {
    pub r: f64,
    pub gamma_tilde: f64,
    pub variant: Variant,
}

impl CanonicalParams {
    pub fn new(r: f64, gamma_tilde: f64, variant: Variant) -> Self {
        CanonicalParams {
            r,
            gamma_tilde,
            variant,
        }
    }

    /// Constructor that accepts a phase for callers that have one; any
    /// nonzero φ is rejected with a clear diagnostic rather than silently
    /// supported.
    pub fn with_phi(
        r: f64,
        phi: f64,
        gamma_tilde: f64,
        variant: Variant,
    ) -> Result<Self, CanonicalError> {
        if phi != 0.0 {
            return Err(CanonicalError::NonzeroPhase(phi));
        }
        Ok(CanonicalParams::new(r, gamma_tilde, variant))
    }

    pub fn mu(&self) -> f64 {
        self.r.cosh()
    }

    pub fn nu(&self) -> f64 {
        self.r.sinh()
    }

    /// The complex coupling: `i·γ̃` for variant I, `γ̃` for variant II.
    pub fn gamma(&self) -> Complex64 {
        match self.variant {
            Variant::I => Complex64::new(0.0, self.gamma_tilde),
            Variant::II => Complex64::new(self.gamma_tilde, 0.0),
        }
    }

    /// Symbol bindings for numeric evaluation of the symbolic expansions.
    pub fn bindings(&self) -> std::collections::BTreeMap<String, Complex64> {
        let mut m = std::collections::BTreeMap::new();
        m.insert("mu".to_string(), Complex64::new(self.mu(), 0.0));
        m.insert("nu".to_string(), Complex64::new(self.nu(), 0.0));
        m.insert("gamma".to_string(), Complex64::new(self.gamma_tilde, 0.0));
        m.insert("gt".to_string(), Complex64::new(self.gamma_tilde, 0.0));
        m
    }
}

/// Symbolic mode coefficients `(μ, ν, γ)` for a variant, in terms of the real
/// symbols `mu`, `nu`, `gamma`.
pub fn symbolic_coefficients(variant: Variant) -> (PolyCoeff, PolyCoeff, PolyCoeff) {
    let gamma = match variant {
        Variant::I => &PolyCoeff::i() * &PolyCoeff::symbol("gamma"),
        Variant::II => PolyCoeff::symbol("gamma"),
    };
    (PolyCoeff::symbol("mu"), PolyCoeff::symbol("nu"), gamma)
}

/// `b = μ·a + ν·a† + γ·F(Xᵢ)`, normal ordered, with arbitrary coefficient
/// polynomials (symbolic or exact numeric).
pub fn build_mode(
    mu: &PolyCoeff,
    nu: &PolyCoeff,
    gamma: &PolyCoeff,
    f: &NonlinearitySpec,
) -> Result<OperatorPoly, CanonicalError> {
    if f.degree() > MAX_NONLINEARITY_DEGREE {
        return Err(CanonicalError::DegreeCap(f.degree()));
    }
    let mut b = &OperatorPoly::annihilator().scale(mu) + &OperatorPoly::creator().scale(nu);
    if !f.is_zero() {
        b = &b + &f.operator().scale(gamma);
    }
    Ok(b)
}

/// Symbolic `b` for the variant's canonical parameterization.
pub fn build_mode_symbolic(
    variant: Variant,
    f: &NonlinearitySpec,
) -> Result<OperatorPoly, CanonicalError> {
    let (mu, nu, gamma) = symbolic_coefficients(variant);
    build_mode(&mu, &nu, &gamma, f)
}

/// Substitutions that make `mu`, `nu`, `gamma` real symbols.
fn realness_bindings() -> Bindings {
    Bindings::new()
        .set("mu_bar", PolyCoeff::symbol("mu"))
        .set("nu_bar", PolyCoeff::symbol("nu"))
        .set("gamma_bar", PolyCoeff::symbol("gamma"))
}

/// The Bogoliubov reduction `mu² → 1 + nu²`.
pub fn bogoliubov_reduction() -> Bindings {
    let target = &PolyCoeff::one() + &(&PolyCoeff::symbol("nu") * &PolyCoeff::symbol("nu"));
    Bindings::new().set_power("mu", 2, target)
}

/// Apply realness and the Bogoliubov constraint to a symbolic polynomial.
pub fn canonical_reduce(p: &OperatorPoly) -> OperatorPoly {
    let real = p
        .substitute(&realness_bindings())
        .expect("realness substitution cannot cycle");
    real.substitute(&bogoliubov_reduction())
        .expect("bogoliubov substitution cannot cycle")
}

/// Residuals of the two canonical constraints for free complex coefficients.
///
/// Returns `(|μ|² − |ν|² − 1, Re or Im of (μγ* − ν*γ))`; the second slot uses
/// `Re` for variant I and `Im` for variant II. Both vanish iff the
/// transformation is canonical.
pub fn check_canonical(
    mu: Complex64,
    nu: Complex64,
    gamma: Complex64,
    variant: Variant,
) -> (f64, f64) {
    let residual1 = mu.norm_sqr() - nu.norm_sqr() - 1.0;
    let cross = mu * gamma.conj() - nu.conj() * gamma;
    let residual2 = match variant {
        Variant::I => cross.re,
        Variant::II => cross.im,
    };
    (residual1, residual2)
}

/// Residuals for the cosh/sinh parameterization (always canonical; useful as
/// a sanity check of parameter intake).
pub fn check_canonical_params(params: &CanonicalParams) -> (f64, f64) {
    check_canonical(
        Complex64::new(params.mu(), 0.0),
        Complex64::new(params.nu(), 0.0),
        params.gamma(),
        params.variant,
    )
}

/// Symbolic `[b, b†]` after imposing the constraints; equals the identity
/// exactly for any polynomial `F` when the transformation is canonical.
pub fn verify_ccr(variant: Variant, f: &NonlinearitySpec) -> Result<OperatorPoly, CanonicalError> {
    let b = build_mode_symbolic(variant, f)?;
    let comm = b.commutator(&b.adjoint());
    Ok(canonical_reduce(&comm))
}

/// Normal-ordered `H = b†b + ½` in the real symbols `mu`, `nu`, `gamma`.
pub fn expand_hamiltonian(
    variant: Variant,
    f: &NonlinearitySpec,
) -> Result<OperatorPoly, CanonicalError> {
    let b = build_mode_symbolic(variant, f)?;
    let h = &(&b.adjoint() * &b) + &OperatorPoly::from_coeff(PolyCoeff::from_ratio(1, 2));
    Ok(h.substitute(&realness_bindings())
        .expect("realness substitution cannot cycle"))
}

/// Numeric Hamiltonian coefficients for concrete parameters.
pub fn expand_hamiltonian_numeric(
    params: &CanonicalParams,
    f: &NonlinearitySpec,
) -> Result<
    std::collections::BTreeMap<crate::algebra::OperatorMonomial, Complex64>,
    CanonicalError,
> {
    let h = expand_hamiltonian(params.variant, f)?;
    Ok(h.evaluate_numeric(&params.bindings())
        .expect("all symbols bound"))
}

/// The quadrature form of the Hamiltonian,
///
/// ```text
/// H = (e^{2rᵢ}/2) Xᵢ² + (e^{−2rᵢ}/2) [Xⱼ + √2 γ̃ e^{rᵢ} F(Xᵢ)]²
/// ```
///
/// with `e^{±rᵢ}` encoded symbolically as `mu ± nu` (variant I has `rᵢ = r`,
/// variant II has `rᵢ = −r`). Equal to [`expand_hamiltonian`] exactly after
/// [`canonical_reduce`] on both sides.
pub fn quadratic_form_hamiltonian(
    variant: Variant,
    f: &NonlinearitySpec,
) -> Result<OperatorPoly, CanonicalError> {
    if f.degree() > MAX_NONLINEARITY_DEGREE {
        return Err(CanonicalError::DegreeCap(f.degree()));
    }
    let mu = PolyCoeff::symbol("mu");
    let nu = PolyCoeff::symbol("nu");
    let e_plus = &mu + &nu; // e^{+r}
    let e_minus = &mu - &nu; // e^{-r}
    let (e_ri, e_mri) = match variant {
        Variant::I => (e_plus.clone(), e_minus.clone()),
        Variant::II => (e_minus.clone(), e_plus.clone()),
    };
    let (xi, xj) = match variant {
        Variant::I => (OperatorPoly::quadrature_x1(), OperatorPoly::quadrature_x2()),
        Variant::II => (OperatorPoly::quadrature_x2(), OperatorPoly::quadrature_x1()),
    };
    let half = PolyCoeff::from_ratio(1, 2);
    let sqrt2 = PolyCoeff::scalar(crate::algebra::ExactScalar::sqrt2());
    let gamma = PolyCoeff::symbol("gamma");

    // (e^{2rᵢ}/2) Xᵢ²
    let first = xi.pow(2).scale(&(&(&e_ri * &e_ri) * &half));
    // Xⱼ + √2 γ̃ e^{rᵢ} F(Xᵢ)
    let shift = f.operator().scale(&(&(&sqrt2 * &gamma) * &e_ri));
    let inner = &xj + &shift;
    let second = inner.pow(2).scale(&(&(&e_mri * &e_mri) * &half));
    Ok(&first + &second)
}
