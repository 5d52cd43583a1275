//! Normal-ordered operator polynomials for one bosonic mode.
//!
//! Every operator expression is stored as a map from `a†^m a^n` to a
//! [`PolyCoeff`]. Products are reduced with the closed-form reordering
//!
//! ```text
//! a^n a†^m = Σ_k k! C(n,k) C(m,k) a†^(m−k) a^(n−k)
//! ```
//!
//! which is the iterated commutation rule `a a† = a†a + 1`, so the normal
//! form is reached in one pass and is unique: two expressions denote the same
//! operator iff their maps are equal.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use super::coeff::{Bindings, PolyCoeff, SymbolError};
use super::scalar::ExactScalar;

/// `a†^m a^n`, normal ordered by construction.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct OperatorMonomial {
    pub dagger_power: u32,
    pub annihilation_power: u32,
}

impl OperatorMonomial {
    pub fn new(dagger_power: u32, annihilation_power: u32) -> Self {
        OperatorMonomial {
            dagger_power,
            annihilation_power,
        }
    }

    pub fn identity() -> Self {
        OperatorMonomial::new(0, 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.dagger_power + self.annihilation_power
    }
}

impl PartialOrd for OperatorMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OperatorMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // (total degree, dagger power) — also the pretty-printer order.
        self.total_degree()
            .cmp(&other.total_degree())
            .then(self.dagger_power.cmp(&other.dagger_power))
    }
}

impl fmt::Display for OperatorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.dagger_power {
            0 => {}
            1 => parts.push("ad".to_string()),
            m => parts.push(format!("ad^{m}")),
        }
        match self.annihilation_power {
            0 => {}
            1 => parts.push("a".to_string()),
            n => parts.push(format!("a^{n}")),
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A single `a` or `a†` letter, used to feed raw words to the rewrite engine.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Ladder {
    Lower,
    Raise,
}

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}

/// A normal-ordered polynomial in `a`, `a†` with [`PolyCoeff`] coefficients.
/// No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct OperatorPoly {
    terms: BTreeMap<OperatorMonomial, PolyCoeff>,
}

impl OperatorPoly {
    pub fn zero() -> Self {
        OperatorPoly::default()
    }

    pub fn identity() -> Self {
        OperatorPoly::from_coeff(PolyCoeff::one())
    }

    pub fn from_coeff(c: PolyCoeff) -> Self {
        let mut out = OperatorPoly::zero();
        out.insert(OperatorMonomial::identity(), c);
        out
    }

    pub fn from_scalar(s: ExactScalar) -> Self {
        OperatorPoly::from_coeff(PolyCoeff::scalar(s))
    }

    pub fn annihilator() -> Self {
        let mut out = OperatorPoly::zero();
        out.insert(OperatorMonomial::new(0, 1), PolyCoeff::one());
        out
    }

    pub fn creator() -> Self {
        let mut out = OperatorPoly::zero();
        out.insert(OperatorMonomial::new(1, 0), PolyCoeff::one());
        out
    }

    pub fn monomial(m: OperatorMonomial, c: PolyCoeff) -> Self {
        let mut out = OperatorPoly::zero();
        out.insert(m, c);
        out
    }

    /// X₁ = (a + a†)/√2.
    pub fn quadrature_x1() -> Self {
        let half = PolyCoeff::scalar(ExactScalar::inv_sqrt2());
        &OperatorPoly::annihilator().scale(&half) + &OperatorPoly::creator().scale(&half)
    }

    /// X₂ = −i(a − a†)/√2.
    pub fn quadrature_x2() -> Self {
        let c = PolyCoeff::scalar(&(-&ExactScalar::i()) * &ExactScalar::inv_sqrt2());
        let diff = &OperatorPoly::annihilator() - &OperatorPoly::creator();
        diff.scale(&c)
    }

    pub fn insert(&mut self, m: OperatorMonomial, c: PolyCoeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&OperatorMonomial::identity())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OperatorMonomial, &PolyCoeff)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: OperatorMonomial) -> PolyCoeff {
        self.terms.get(&m).cloned().unwrap_or_else(PolyCoeff::zero)
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Largest total degree among stored monomials.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: &PolyCoeff) -> OperatorPoly {
        let mut out = OperatorPoly::zero();
        for (m, existing) in &self.terms {
            out.insert(*m, existing * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> OperatorPoly {
        let mut out = OperatorPoly::identity();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Adjoint: reverses each monomial (`a†^m a^n → a†^n a^m`), conjugates
    /// scalars, and swaps each symbol with its conjugate partner. The
    /// reversed monomial is already normal ordered.
    pub fn adjoint(&self) -> OperatorPoly {
        let mut out = OperatorPoly::zero();
        for (m, c) in &self.terms {
            out.insert(
                OperatorMonomial::new(m.annihilation_power, m.dagger_power),
                c.conj(),
            );
        }
        out
    }

    /// Normal-ordered commutator `[self, rhs] = self·rhs − rhs·self`.
    pub fn commutator(&self, rhs: &OperatorPoly) -> OperatorPoly {
        &(self * rhs) - &(rhs * self)
    }

    /// Apply symbol substitutions to every coefficient.
    pub fn substitute(&self, bindings: &Bindings) -> Result<OperatorPoly, SymbolError> {
        let mut out = OperatorPoly::zero();
        for (m, c) in &self.terms {
            out.insert(*m, c.substitute(bindings)?);
        }
        Ok(out)
    }

    /// Coefficient-wise numeric evaluation; entries with modulus below `eps`
    /// are dropped (default 1e-14 via [`OperatorPoly::evaluate_numeric`]).
    pub fn evaluate_numeric_eps(
        &self,
        values: &BTreeMap<String, Complex64>,
        eps: f64,
    ) -> Result<BTreeMap<OperatorMonomial, Complex64>, EvalError> {
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            let v = c.eval(values)?;
            if v.norm() > eps {
                out.insert(*m, v);
            }
        }
        Ok(out)
    }

    pub fn evaluate_numeric(
        &self,
        values: &BTreeMap<String, Complex64>,
    ) -> Result<BTreeMap<OperatorMonomial, Complex64>, EvalError> {
        self.evaluate_numeric_eps(values, 1e-14)
    }

    /// Normal order a raw word of ladder operators with a scalar coefficient.
    pub fn normal_order_word(coeff: PolyCoeff, word: &[Ladder]) -> OperatorPoly {
        let mut out = OperatorPoly::from_coeff(coeff);
        for letter in word {
            let factor = match letter {
                Ladder::Lower => OperatorPoly::annihilator(),
                Ladder::Raise => OperatorPoly::creator(),
            };
            out = &out * &factor;
        }
        out
    }

    /// Term list in pretty-printer order: (total degree, dagger power).
    pub fn sorted_terms(&self) -> Vec<(OperatorMonomial, PolyCoeff)> {
        self.terms.iter().map(|(m, c)| (*m, c.clone())).collect()
    }
}

/// Binomial coefficient as a big integer.
fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let mut out = BigInt::one();
    for j in 0..k {
        out = out * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    out
}

/// `k! C(n,k) C(m,k)` — the reordering weight.
fn reorder_weight(n: u32, m: u32, k: u32) -> BigInt {
    let mut fact = BigInt::one();
    for j in 1..=k {
        fact *= BigInt::from(j);
    }
    fact * binomial(n, k) * binomial(m, k)
}

impl Mul for &OperatorPoly {
    type Output = OperatorPoly;
    fn mul(self, rhs: &OperatorPoly) -> OperatorPoly {
        let mut out = OperatorPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let coeff = c1 * c2;
                let n1 = m1.annihilation_power;
                let m2d = m2.dagger_power;
                for k in 0..=n1.min(m2d) {
                    let w = reorder_weight(n1, m2d, k);
                    let scaled = coeff.scale(&ExactScalar::from_bigint(w));
                    out.insert(
                        OperatorMonomial::new(
                            m1.dagger_power + m2d - k,
                            n1 + m2.annihilation_power - k,
                        ),
                        scaled,
                    );
                }
            }
        }
        out
    }
}

impl Add for &OperatorPoly {
    type Output = OperatorPoly;
    fn add(self, rhs: &OperatorPoly) -> OperatorPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert(*m, c.clone());
        }
        out
    }
}

impl Sub for &OperatorPoly {
    type Output = OperatorPoly;
    fn sub(self, rhs: &OperatorPoly) -> OperatorPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert(*m, -c);
        }
        out
    }
}

impl Neg for &OperatorPoly {
    type Output = OperatorPoly;
    fn neg(self) -> OperatorPoly {
        let mut out = OperatorPoly::zero();
        for (m, c) in &self.terms {
            out.insert(*m, -c);
        }
        out
    }
}

impl fmt::Display for OperatorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut rendered = Vec::new();
        for (m, c) in &self.terms {
            let is_identity_mono = *m == OperatorMonomial::identity();
            let body = if is_identity_mono {
                if c.term_count() > 1 {
                    // A parenthesized sum parses back to the same constant.
                    format!("({c})")
                } else {
                    format!("{c}")
                }
            } else if c.is_one() {
                format!("{m}")
            } else if c.term_count() > 1 {
                format!("({c})*{m}")
            } else {
                let cs = c.to_string();
                format!("{cs}*{m}")
            };
            rendered.push(body);
        }
        let mut s = rendered[0].clone();
        for r in &rendered[1..] {
            if let Some(rest) = r.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(r);
            }
        }
        write!(f, "{s}")
    }
}

impl fmt::Debug for OperatorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// JSON-facing view of one term: `{m, n, coefficient}` with the coefficient
/// as a symbolic string or a `[re, im]` pair when numeric.
#[derive(Serialize)]
pub struct TermJson {
    pub daggers: u32,
    pub annihilators: u32,
    pub coefficient: serde_json::Value,
}

impl OperatorPoly {
    pub fn to_term_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(m, c)| TermJson {
                daggers: m.dagger_power,
                annihilators: m.annihilation_power,
                coefficient: match c.as_scalar() {
                    Some(s) if c.symbols().next().is_none() => {
                        let z = s.to_c64();
                        serde_json::json!([z.re, z.im])
                    }
                    _ => serde_json::Value::String(c.to_string()),
                },
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_expr;

    fn half() -> ExactScalar {
        ExactScalar::from_ratio(1, 2)
    }

    #[test]
    fn ccr_single_step() {
        // a·a† = a†a + 1
        let prod = &OperatorPoly::annihilator() * &OperatorPoly::creator();
        let mut expected = OperatorPoly::zero();
        expected.insert(OperatorMonomial::new(1, 1), PolyCoeff::one());
        expected.insert(OperatorMonomial::identity(), PolyCoeff::one());
        assert_eq!(prod, expected);
    }

    #[test]
    fn two_step_reduction() {
        // a a a† = a†a² + 2a
        let out = OperatorPoly::normal_order_word(
            PolyCoeff::one(),
            &[Ladder::Lower, Ladder::Lower, Ladder::Raise],
        );
        let mut expected = OperatorPoly::zero();
        expected.insert(OperatorMonomial::new(1, 2), PolyCoeff::one());
        expected.insert(OperatorMonomial::new(0, 1), PolyCoeff::from_int(2));
        assert_eq!(out, expected);
    }

    #[test]
    fn already_normal_ordered_word_is_unchanged() {
        let out =
            OperatorPoly::normal_order_word(PolyCoeff::one(), &[Ladder::Raise, Ladder::Lower]);
        let mut expected = OperatorPoly::zero();
        expected.insert(OperatorMonomial::new(1, 1), PolyCoeff::one());
        assert_eq!(out, expected);
    }

    #[test]
    fn commutator_of_mode_operators() {
        let c = OperatorPoly::annihilator().commutator(&OperatorPoly::creator());
        assert!(c.is_identity());
    }

    #[test]
    fn quadrature_commutator_is_i() {
        let c = OperatorPoly::quadrature_x1().commutator(&OperatorPoly::quadrature_x2());
        assert_eq!(c, OperatorPoly::from_scalar(ExactScalar::i()));
    }

    #[test]
    fn commutator_with_x2_squared() {
        // [a, X₂²] = a − a† (equals i√2·X₂ in normal order).
        let x2sq = OperatorPoly::quadrature_x2().pow(2);
        let c = OperatorPoly::annihilator().commutator(&x2sq);
        let expected = &OperatorPoly::annihilator() - &OperatorPoly::creator();
        assert_eq!(c, expected);
        let i_sqrt2 = PolyCoeff::scalar(&ExactScalar::i() * &ExactScalar::sqrt2());
        assert_eq!(c, OperatorPoly::quadrature_x2().scale(&i_sqrt2));
    }

    #[test]
    fn x2_squared_normal_form() {
        // X₂² = −½a†² − ½a² + a†a + ½
        let x2sq = OperatorPoly::quadrature_x2().pow(2);
        let mut expected = OperatorPoly::zero();
        expected.insert(OperatorMonomial::new(2, 0), PolyCoeff::scalar(-&half()));
        expected.insert(OperatorMonomial::new(0, 2), PolyCoeff::scalar(-&half()));
        expected.insert(OperatorMonomial::new(1, 1), PolyCoeff::one());
        expected.insert(OperatorMonomial::identity(), PolyCoeff::scalar(half()));
        assert_eq!(x2sq, expected);
    }

    #[test]
    fn adjoint_examples() {
        // adjoint(mu·a) = mu_bar·a†
        let b = OperatorPoly::annihilator().scale(&PolyCoeff::symbol("mu"));
        let bd = b.adjoint();
        assert_eq!(
            bd,
            OperatorPoly::creator().scale(&PolyCoeff::symbol("mu_bar"))
        );
        // a†a is self-adjoint
        let n = parse_expr("ad*a").unwrap();
        assert_eq!(n.adjoint(), n);
        // adjoint(i·X₂²) = −i·X₂²
        let x2sq = OperatorPoly::quadrature_x2().pow(2);
        let op = x2sq.scale(&PolyCoeff::i());
        assert_eq!(op.adjoint(), -&op);
    }

    #[test]
    fn evaluate_numeric_examples() {
        // (mu² + nu²)·a†a at mu=cosh 0.8, nu=sinh 0.8 → cosh 1.6
        let c = &(&PolyCoeff::symbol("mu") * &PolyCoeff::symbol("mu"))
            + &(&PolyCoeff::symbol("nu") * &PolyCoeff::symbol("nu"));
        let op = OperatorPoly::monomial(OperatorMonomial::new(1, 1), c);
        let mut vals = BTreeMap::new();
        vals.insert("mu".to_string(), Complex64::new(0.8f64.cosh(), 0.0));
        vals.insert("nu".to_string(), Complex64::new(0.8f64.sinh(), 0.0));
        let out = op.evaluate_numeric(&vals).unwrap();
        let z = out[&OperatorMonomial::new(1, 1)];
        assert!((z.re - 1.6f64.cosh()).abs() < 1e-12);
        assert!((z.re - 2.577_464_471).abs() < 1e-9);

        // gamma·a at gamma = 0 → empty map
        let op = OperatorPoly::annihilator().scale(&PolyCoeff::symbol("gamma"));
        let mut vals = BTreeMap::new();
        vals.insert("gamma".to_string(), Complex64::new(0.0, 0.0));
        assert!(op.evaluate_numeric(&vals).unwrap().is_empty());

        // an i√2·s coefficient evaluates purely imaginary at any real binding
        let i_sqrt2 = PolyCoeff::scalar(&ExactScalar::i() * &ExactScalar::sqrt2());
        let coeff = &i_sqrt2 * &PolyCoeff::symbol("s");
        for s in [0.3, -1.7, 4.0] {
            let mut vals = BTreeMap::new();
            vals.insert("s".to_string(), Complex64::new(s, 0.0));
            let v = coeff.eval(&vals).unwrap();
            assert!(v.re.abs() < 1e-15 && (v.im - std::f64::consts::SQRT_2 * s).abs() < 1e-15);
        }
    }

    #[test]
    fn unbound_symbol_errors() {
        let op = OperatorPoly::annihilator().scale(&PolyCoeff::symbol("mu"));
        let err = op.evaluate_numeric(&BTreeMap::new()).unwrap_err();
        assert_eq!(
            err,
            EvalError::Symbol(SymbolError::Unbound("mu".to_string()))
        );
    }

    #[test]
    fn product_is_associative_on_a_sample() {
        let x1 = OperatorPoly::quadrature_x1();
        let x2 = OperatorPoly::quadrature_x2();
        let n = parse_expr("ad*a").unwrap();
        let left = &(&x1 * &x2) * &n;
        let right = &x1 * &(&x2 * &n);
        assert_eq!(left, right);
    }
}
