//! Exact scalars: the ring Q(i)[√2].
//!
//! An [`ExactScalar`] is `p + q·√2` with `p`, `q` Gaussian rationals
//! (complex numbers with rational real and imaginary parts). The ring is
//! closed under `+ − ×` and under division by nonzero elements, and `√2·√2`
//! reduces to `2` exactly, so all symbolic computations in this crate stay
//! exact and equality is literal structural equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A complex number with rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRational { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRational {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        GaussRational {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn i() -> Self {
        GaussRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Squared modulus, a nonnegative rational.
    fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    fn recip(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        Some(GaussRational {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Add for &GaussRational {
    type Output = GaussRational;
    fn add(self, rhs: &GaussRational) -> GaussRational {
        GaussRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &GaussRational {
    type Output = GaussRational;
    fn sub(self, rhs: &GaussRational) -> GaussRational {
        GaussRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &GaussRational {
    type Output = GaussRational;
    fn mul(self, rhs: &GaussRational) -> GaussRational {
        GaussRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

/// An element `p + q·√2` of Q(i)[√2].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactScalar {
    /// Rational (Gaussian) part.
    pub p: GaussRational,
    /// Coefficient of √2.
    pub q: GaussRational,
}

impl ExactScalar {
    pub fn new(p: GaussRational, q: GaussRational) -> Self {
        ExactScalar { p, q }
    }

    pub fn zero() -> Self {
        ExactScalar::default()
    }

    pub fn one() -> Self {
        ExactScalar {
            p: GaussRational::from_int(1),
            q: GaussRational::default(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        ExactScalar {
            p: GaussRational::from_int(n),
            q: GaussRational::default(),
        }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        ExactScalar {
            p: GaussRational {
                re: BigRational::from_integer(n),
                im: BigRational::zero(),
            },
            q: GaussRational::default(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        ExactScalar {
            p: GaussRational::from_ratio(num, den),
            q: GaussRational::default(),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        ExactScalar {
            p: GaussRational::i(),
            q: GaussRational::default(),
        }
    }

    /// √2 itself.
    pub fn sqrt2() -> Self {
        ExactScalar {
            p: GaussRational::default(),
            q: GaussRational::from_int(1),
        }
    }

    /// 1/√2 = √2/2.
    pub fn inv_sqrt2() -> Self {
        ExactScalar {
            p: GaussRational::default(),
            q: GaussRational::from_ratio(1, 2),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self == &ExactScalar::one()
    }

    /// Complex conjugation (√2 is real, so it conjugates componentwise).
    pub fn conj(&self) -> Self {
        ExactScalar {
            p: self.p.conj(),
            q: self.q.conj(),
        }
    }

    /// Multiplicative inverse, if nonzero.
    ///
    /// `1/(p + q√2) = (p − q√2)/(p² − 2q²)`; the denominator is a Gaussian
    /// rational, which is inverted by conjugation. `p² − 2q²` can only vanish
    /// when both parts vanish because √2 is irrational over Q(i).
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let two = GaussRational::from_int(2);
        let den = &(&self.p * &self.p) - &(&two * &(&self.q * &self.q));
        let den_inv = den.recip()?;
        Some(ExactScalar {
            p: &self.p * &den_inv,
            q: &(-&self.q) * &den_inv,
        })
    }

    pub fn checked_div(&self, rhs: &ExactScalar) -> Option<ExactScalar> {
        rhs.recip().map(|r| self * &r)
    }

    pub fn to_c64(&self) -> Complex64 {
        self.p.to_c64() + self.q.to_c64() * std::f64::consts::SQRT_2
    }
}

impl Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar {
            p: &self.p + &rhs.p,
            q: &self.q + &rhs.q,
        }
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar {
            p: &self.p - &rhs.p,
            q: &self.q - &rhs.q,
        }
    }
}

impl Mul for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        // (p1 + q1√2)(p2 + q2√2) = (p1p2 + 2q1q2) + (p1q2 + q1p2)√2
        let two = GaussRational::from_int(2);
        ExactScalar {
            p: &(&self.p * &rhs.p) + &(&two * &(&self.q * &rhs.q)),
            q: &(&self.p * &rhs.q) + &(&self.q * &rhs.p),
        }
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            p: -&self.p,
            q: -&self.q,
        }
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// One printable addend of an `ExactScalar`: rational magnitude together with
/// optional `i` and `sqrt2` markers.
fn push_addend(out: &mut Vec<String>, r: &BigRational, imag: bool, surd: bool) {
    if r.is_zero() {
        return;
    }
    let mut factors: Vec<String> = Vec::new();
    let abs = r.abs();
    let is_unit = abs.is_one();
    if !is_unit || (!imag && !surd) {
        factors.push(fmt_rational(&abs));
    }
    if imag {
        factors.push("i".to_string());
    }
    if surd {
        factors.push("sqrt2".to_string());
    }
    let body = factors.join("*");
    if r.is_negative() {
        out.push(format!("-{body}"));
    } else {
        out.push(body);
    }
}

impl ExactScalar {
    /// Number of printed addends (0 for zero).
    pub fn addend_count(&self) -> usize {
        [
            !self.p.re.is_zero(),
            !self.p.im.is_zero(),
            !self.q.re.is_zero(),
            !self.q.im.is_zero(),
        ]
        .iter()
        .filter(|&&b| b)
        .count()
    }

    /// True when the scalar prints as a single addend with magnitude one
    /// (e.g. `1`, `-i`, `sqrt2`), so `1*x` can collapse to `x`.
    pub fn is_signed_unit(&self) -> bool {
        if self.addend_count() != 1 {
            return false;
        }
        for part in [&self.p.re, &self.p.im, &self.q.re, &self.q.im] {
            if !part.is_zero() && !part.abs().is_one() {
                return false;
            }
        }
        // sqrt2 and i*sqrt2 still need explicit factors, but count as units
        // only when purely rational or purely imaginary rational.
        self.q.re.is_zero() && self.q.im.is_zero()
    }

    /// True when the single printed addend carries a leading minus.
    pub fn is_negative_leading(&self) -> bool {
        if self.addend_count() != 1 {
            return false;
        }
        for part in [&self.p.re, &self.p.im, &self.q.re, &self.q.im] {
            if !part.is_zero() {
                return part.is_negative();
            }
        }
        false
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut addends = Vec::new();
        push_addend(&mut addends, &self.p.re, false, false);
        push_addend(&mut addends, &self.p.im, true, false);
        push_addend(&mut addends, &self.q.re, false, true);
        push_addend(&mut addends, &self.q.im, true, true);
        if addends.is_empty() {
            return write!(f, "0");
        }
        let mut s = addends[0].clone();
        for a in &addends[1..] {
            if let Some(rest) = a.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(a);
            }
        }
        write!(f, "{s}")
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_squares_to_two() {
        let s = ExactScalar::sqrt2();
        assert_eq!(&s * &s, ExactScalar::from_int(2));
    }

    #[test]
    fn inv_sqrt2_is_reciprocal() {
        let s = ExactScalar::sqrt2();
        let t = ExactScalar::inv_sqrt2();
        assert_eq!(&s * &t, ExactScalar::one());
        assert_eq!(s.recip().unwrap(), t);
    }

    #[test]
    fn division_round_trips() {
        let a = &ExactScalar::from_ratio(3, 4) + &(&ExactScalar::i() * &ExactScalar::sqrt2());
        let b = &(&ExactScalar::from_int(2) - &ExactScalar::sqrt2()) * &ExactScalar::i();
        let q = a.checked_div(&b).unwrap();
        assert_eq!(&q * &b, a);
    }

    #[test]
    fn conjugation_is_involutive_and_multiplicative() {
        let a = &ExactScalar::from_ratio(1, 2) + &(&ExactScalar::i() * &ExactScalar::from_int(3));
        let b = &ExactScalar::sqrt2() + &(&ExactScalar::i() * &ExactScalar::from_ratio(-2, 5));
        assert_eq!(a.conj().conj(), a);
        assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
    }

    #[test]
    fn to_c64_matches() {
        let a = &ExactScalar::from_ratio(1, 2) + &ExactScalar::sqrt2();
        let z = a.to_c64();
        assert!((z.re - (0.5 + std::f64::consts::SQRT_2)).abs() < 1e-15);
        assert_eq!(z.im, 0.0);
    }

    #[test]
    fn display_forms() {
        assert_eq!(ExactScalar::zero().to_string(), "0");
        assert_eq!(ExactScalar::from_ratio(-3, 4).to_string(), "-3/4");
        assert_eq!(ExactScalar::i().to_string(), "i");
        assert_eq!(ExactScalar::inv_sqrt2().to_string(), "1/2*sqrt2");
        let mixed = &ExactScalar::from_ratio(1, 2) - &(&ExactScalar::i() * &ExactScalar::sqrt2());
        assert_eq!(mixed.to_string(), "1/2 - i*sqrt2");
    }
}
