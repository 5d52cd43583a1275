//! Harmonic-oscillator eigenfunctions and Gauss–Hermite quadrature.
//!
//! `φₙ(x) = π^{−1/4} (2ⁿ n!)^{−1/2} Hₙ(x) e^{−x²/2}` evaluated through the
//! normalized three-term recurrence
//!
//! ```text
//! φ₀ = π^{−1/4} e^{−x²/2},   φ₁ = √2·x·φ₀,
//! φₙ₊₁ = x √(2/(n+1)) φₙ − √(n/(n+1)) φₙ₋₁
//! ```
//!
//! which stays bounded for every `n ≤ 512`, `|x| ≤ 40` (the Gaussian factor
//! may underflow to zero far outside the classical region, which is the
//! correct limit at this precision).
//!
//! Quadrature nodes are the roots of φₙ, found by interlacing bisection plus
//! Newton polish; the plain-integration weights are the Christoffel numbers
//! with the Gaussian weight folded in, `wᵢ* = 1/Σ_{k<n} φₖ(xᵢ)²`, so that
//! `∫f ≈ Σ wᵢ* f(xᵢ)` for smooth `f` decaying inside the node span.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

/// Largest admitted oscillator index.
pub const MAX_HERMITE_INDEX: usize = 512;

#[derive(Debug, Error, PartialEq)]
pub enum HermiteError {
    #[error("oscillator index {0} out of range (max {MAX_HERMITE_INDEX})")]
    IndexOutOfRange(usize),
}

const PI_POW_NEG_QUARTER: f64 = 0.751_125_544_464_942_5;

/// φₙ(x) for 0 ≤ n ≤ 512.
pub fn hermite_function(n: usize, x: f64) -> Result<f64, HermiteError> {
    if n > MAX_HERMITE_INDEX {
        return Err(HermiteError::IndexOutOfRange(n));
    }
    let mut prev = 0.0f64;
    let mut cur = PI_POW_NEG_QUARTER * (-0.5 * x * x).exp();
    for k in 0..n {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// All of φ₀(x) … φ_{n_max}(x) in one recurrence pass.
pub fn hermite_column(n_max: usize, x: f64, out: &mut Vec<f64>) {
    out.clear();
    let mut prev = 0.0f64;
    let mut cur = PI_POW_NEG_QUARTER * (-0.5 * x * x).exp();
    out.push(cur);
    for k in 0..n_max {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
}

/// φₙ(x) and φₙ'(x) = √(2n)·φₙ₋₁(x) − x·φₙ(x).
fn phi_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0f64;
    let mut cur = PI_POW_NEG_QUARTER * (-0.5 * x * x).exp();
    for k in 0..n {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    let deriv = (2.0 * n as f64).sqrt() * prev - x * cur;
    (cur, deriv)
}

/// Gauss–Hermite rule presented for plain integration: `∫f ≈ Σ wᵢ f(xᵢ)`.
#[derive(Clone, Debug)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    /// Construct (or fetch from the process-wide cache) the n-point rule.
    pub fn new(n: usize) -> Arc<GaussHermite> {
        assert!(n >= 1 && n <= 2 * MAX_HERMITE_INDEX, "node count {n} unsupported");
        static CACHE: OnceLock<Mutex<BTreeMap<usize, Arc<GaussHermite>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
        if let Some(rule) = cache.lock().unwrap().get(&n) {
            return Arc::clone(rule);
        }
        let rule = Arc::new(GaussHermite::build(n));
        cache.lock().unwrap().insert(n, Arc::clone(&rule));
        rule
    }

    fn build(n: usize) -> GaussHermite {
        let nodes = hermite_roots(n);
        // wᵢ* = 1/Σ_{k<n} φₖ(xᵢ)²
        let mut weights = Vec::with_capacity(n);
        let mut col = Vec::new();
        for &x in &nodes {
            hermite_column(n - 1, x, &mut col);
            let s: f64 = col.iter().map(|p| p * p).sum();
            weights.push(1.0 / s);
        }
        GaussHermite { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Plain integral of a callable against the rule.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Roots of φₙ by interlacing: the roots of φ_{m+1} are bracketed by the
/// roots of φ_m and the outer bound ±√(2m+3).
fn hermite_roots(n: usize) -> Vec<f64> {
    let mut roots: Vec<f64> = vec![]; // roots of φ_0 (none)
    for m in 1..=n {
        let bound = (2.0 * m as f64 + 1.0).sqrt();
        let mut brackets = Vec::with_capacity(m + 1);
        brackets.push(-bound);
        brackets.extend(roots.iter().copied());
        brackets.push(bound);
        let mut next = Vec::with_capacity(m);
        for w in brackets.windows(2) {
            next.push(refine_root(m, w[0], w[1]));
        }
        roots = next;
    }
    // Enforce exact symmetry; the rule is even.
    let n_half = roots.len() / 2;
    for i in 0..n_half {
        let avg = 0.5 * (roots[i].abs() + roots[roots.len() - 1 - i].abs());
        roots[i] = -avg;
        let last = roots.len() - 1 - i;
        roots[last] = avg;
    }
    if roots.len() % 2 == 1 {
        roots[n_half] = 0.0;
    }
    roots
}

fn refine_root(m: usize, mut lo: f64, mut hi: f64) -> f64 {
    let flo = phi_and_derivative(m, lo).0;
    // Bisection to a loose tolerance.
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        let fm = phi_and_derivative(m, mid).0;
        if fm == 0.0 {
            break;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-10 * (1.0 + mid.abs()) {
            break;
        }
    }
    // Newton polish.
    let mut x = 0.5 * (lo + hi);
    for _ in 0..4 {
        let (p, d) = phi_and_derivative(m, x);
        if d == 0.0 {
            break;
        }
        let step = p / d;
        x -= step;
        if step.abs() < 1e-15 * (1.0 + x.abs()) {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_state_and_parity() {
        let phi0 = hermite_function(0, 0.0).unwrap();
        assert!((phi0 - 0.751_125_544_464_942_5).abs() < 1e-15);
        assert_eq!(hermite_function(1, 0.0).unwrap(), 0.0);
        assert!(hermite_function(513, 0.0).is_err());
    }

    #[test]
    fn recurrence_residual_is_tiny() {
        let mut col = Vec::new();
        for &x in &[-7.3, -1.0, 0.4, 2.9, 11.0] {
            hermite_column(60, x, &mut col);
            for n in 1..60usize {
                let nf = n as f64;
                let lhs = col[n + 1];
                let rhs =
                    x * (2.0 / (nf + 1.0)).sqrt() * col[n] - (nf / (nf + 1.0)).sqrt() * col[n - 1];
                assert!((lhs - rhs).abs() < 1e-12, "residual at n={n}, x={x}");
            }
        }
    }

    #[test]
    fn no_overflow_at_extremes() {
        for n in [0usize, 17, 256, 512] {
            for x in [-40.0, -32.0, 0.5, 32.0, 40.0] {
                let v = hermite_function(n, x).unwrap();
                assert!(v.is_finite());
            }
        }
    }

    #[test]
    fn gauss_hermite_integrates_gaussian_moments() {
        let rule = GaussHermite::new(64);
        let sqrt_pi = std::f64::consts::PI.sqrt();
        let i0 = rule.integrate(|x| (-x * x).exp());
        assert!((i0 - sqrt_pi).abs() < 1e-12);
        let i2 = rule.integrate(|x| x * x * (-x * x).exp());
        assert!((i2 - sqrt_pi / 2.0).abs() < 1e-12);
        let odd = rule.integrate(|x| x * (-x * x).exp());
        assert!(odd.abs() < 1e-14);
    }

    #[test]
    fn nodes_are_symmetric_and_sorted() {
        let rule = GaussHermite::new(33);
        for w in rule.nodes.windows(2) {
            assert!(w[0] < w[1]);
        }
        for i in 0..rule.len() {
            let j = rule.len() - 1 - i;
            assert!((rule.nodes[i] + rule.nodes[j]).abs() < 1e-14);
            assert!((rule.weights[i] - rule.weights[j]).abs() < 1e-14);
        }
    }

    #[test]
    fn orthonormality_to_1e10() {
        // ∫ φₙ φₘ = δₙₘ for n, m ≤ 50 with a 128-node rule.
        let rule = GaussHermite::new(128);
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(rule.len());
        let mut buf = Vec::new();
        for &x in &rule.nodes {
            hermite_column(50, x, &mut buf);
            cols.push(buf.clone());
        }
        for n in (0..=50).step_by(5) {
            for m in (0..=50).step_by(7) {
                let mut s = 0.0;
                for (i, &w) in rule.weights.iter().enumerate() {
                    s += w * cols[i][n] * cols[i][m];
                }
                let want = if n == m { 1.0 } else { 0.0 };
                assert!(
                    (s - want).abs() < 1e-10,
                    "⟨{n}|{m}⟩ = {s} (want {want})"
                );
            }
        }
    }
}
