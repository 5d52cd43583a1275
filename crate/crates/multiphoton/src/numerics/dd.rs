//! Double-double arithmetic (~31 significant digits).
//!
//! Used by the Airy Maclaurin series, where the alternating sum for negative
//! arguments loses up to ~14 digits to cancellation before the result is
//! rounded to f64. The standard error-free transformations (Knuth two-sum,
//! FMA two-product) are enough here; division is a two-step Newton refinement.

#[derive(Clone, Copy, Debug, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, rhs: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let e = e + self.lo + rhs.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    pub fn sub(self, rhs: Dd) -> Dd {
        self.add(Dd {
            hi: -rhs.hi,
            lo: -rhs.lo,
        })
    }

    pub fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + self.hi * rhs.lo + self.lo * rhs.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn mul_f64(self, rhs: f64) -> Dd {
        let (p, e) = two_prod(self.hi, rhs);
        let e = e + self.lo * rhs;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div_f64(self, rhs: f64) -> Dd {
        let q1 = self.hi / rhs;
        let (p, e) = two_prod(q1, rhs);
        let r = Dd {
            hi: self.hi - p,
            lo: self.lo - e,
        };
        let q2 = (r.hi + r.lo) / rhs;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }

    pub fn abs(self) -> f64 {
        self.to_f64().abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catastrophic_cancellation_is_survived() {
        // (1 + 1e-20) - 1 is exactly 1e-20 in double-double.
        let one_eps = Dd::from(1.0).add(Dd::from(1e-20));
        let diff = one_eps.sub(Dd::from(1.0));
        assert_eq!(diff.to_f64(), 1e-20);
    }

    #[test]
    fn product_keeps_low_bits() {
        // The dd square of f64-sqrt2 represents (sqrt2_f64)² exactly, which
        // differs from 2 only by the input's representation error (~2e-16),
        // and its low word is nonzero — the rounding of hi*hi was captured.
        let a = Dd::from(std::f64::consts::SQRT_2);
        let sq = a.mul(a);
        assert!((sq.to_f64() - 2.0).abs() < 5e-16);
        assert!(sq.lo != 0.0);
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = Dd::from(1.0).div_f64(3.0);
        let b = a.mul_f64(3.0);
        assert!((b.to_f64() - 1.0).abs() < 1e-30);
    }
}
