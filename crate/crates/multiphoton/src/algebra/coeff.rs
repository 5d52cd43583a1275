//! Polynomial coefficients in named commuting symbols.
//!
//! Symbols are plain identifiers with an involutive conjugation partner: the
//! partner of `mu` is `mu_bar` and vice versa. Realness of a parameter is not
//! a property of the symbol itself; it is imposed where needed by explicit
//! substitution (`mu_bar → mu`), which keeps the ring free and printing
//! unambiguous.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

use super::scalar::ExactScalar;

pub type Symbol = String;

/// Conjugation partner of a symbol name: append or strip the `_bar` suffix.
pub fn conj_symbol(name: &str) -> String {
    match name.strip_suffix("_bar") {
        Some(base) => base.to_string(),
        None => format!("{name}_bar"),
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymbolError {
    #[error("symbol `{0}` is not bound and neither is its conjugate")]
    Unbound(String),
    #[error("cyclic substitution: target of a binding mentions bound symbol `{0}`")]
    Cyclic(String),
    #[error("binding power must be >= 1")]
    ZeroPower,
}

/// A product of symbol powers, e.g. `mu^2 * nu_bar`. The map never stores
/// zero exponents, so equal products have equal representations.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Default, Debug)]
pub struct SymbolProduct(BTreeMap<Symbol, u32>);

impl SymbolProduct {
    pub fn one() -> Self {
        SymbolProduct::default()
    }

    pub fn symbol(name: &str) -> Self {
        let mut m = BTreeMap::new();
        m.insert(name.to_string(), 1);
        SymbolProduct(m)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &u32)> {
        self.0.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.values().sum()
    }

    fn mul(&self, rhs: &SymbolProduct) -> SymbolProduct {
        let mut out = self.0.clone();
        for (s, e) in &rhs.0 {
            *out.entry(s.clone()).or_insert(0) += e;
        }
        SymbolProduct(out)
    }

    fn conj(&self) -> SymbolProduct {
        SymbolProduct(
            self.0
                .iter()
                .map(|(s, e)| (conj_symbol(s), *e))
                .collect(),
        )
    }

    fn contains(&self, name: &str) -> bool {
        self.0.contains_key(name)
    }
}

/// One substitution rule: every occurrence of `symbol^power` is replaced by
/// `replacement`; a leftover exponent smaller than `power` keeps the symbol.
/// `power = 1` is the ordinary case; `power = 2` expresses relations such as
/// `mu^2 → 1 + nu^2`.
#[derive(Clone, Debug)]
pub struct Binding {
    pub symbol: Symbol,
    pub power: u32,
    pub replacement: PolyCoeff,
}

/// A set of simultaneous substitution rules.
#[derive(Clone, Debug, Default)]
pub struct Bindings(Vec<Binding>);

impl Bindings {
    pub fn new() -> Self {
        Bindings::default()
    }

    pub fn set(mut self, symbol: &str, replacement: PolyCoeff) -> Self {
        self.0.push(Binding {
            symbol: symbol.to_string(),
            power: 1,
            replacement,
        });
        self
    }

    pub fn set_power(mut self, symbol: &str, power: u32, replacement: PolyCoeff) -> Self {
        self.0.push(Binding {
            symbol: symbol.to_string(),
            power,
            replacement,
        });
        self
    }

    pub fn rules(&self) -> &[Binding] {
        &self.0
    }

    /// Reject rules with zero power and targets that mention bound symbols.
    pub fn validate(&self) -> Result<(), SymbolError> {
        for b in &self.0 {
            if b.power == 0 {
                return Err(SymbolError::ZeroPower);
            }
        }
        for b in &self.0 {
            for bound in &self.0 {
                if b.replacement.mentions(&bound.symbol) {
                    return Err(SymbolError::Cyclic(bound.symbol.clone()));
                }
            }
        }
        Ok(())
    }
}

/// A polynomial in commuting symbols with [`ExactScalar`] coefficients.
/// Zero-valued entries are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct PolyCoeff {
    terms: BTreeMap<SymbolProduct, ExactScalar>,
}

impl PolyCoeff {
    pub fn zero() -> Self {
        PolyCoeff::default()
    }

    pub fn one() -> Self {
        PolyCoeff::scalar(ExactScalar::one())
    }

    pub fn scalar(s: ExactScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !s.is_zero() {
            terms.insert(SymbolProduct::one(), s);
        }
        PolyCoeff { terms }
    }

    pub fn from_int(n: i64) -> Self {
        PolyCoeff::scalar(ExactScalar::from_int(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        PolyCoeff::scalar(ExactScalar::from_ratio(num, den))
    }

    pub fn symbol(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(SymbolProduct::symbol(name), ExactScalar::one());
        PolyCoeff { terms }
    }

    pub fn i() -> Self {
        PolyCoeff::scalar(ExactScalar::i())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&SymbolProduct::one())
                .map(|s| s.is_one())
                .unwrap_or(false)
    }

    /// The scalar value if the polynomial has no symbol content.
    pub fn as_scalar(&self) -> Option<ExactScalar> {
        if self.terms.is_empty() {
            return Some(ExactScalar::zero());
        }
        if self.terms.len() == 1 {
            if let Some(s) = self.terms.get(&SymbolProduct::one()) {
                return Some(s.clone());
            }
        }
        None
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SymbolProduct, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn mentions(&self, name: &str) -> bool {
        self.terms.keys().any(|m| m.contains(name))
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.terms.keys().flat_map(|m| m.iter().map(|(s, _)| s))
    }

    fn insert_term(&mut self, m: SymbolProduct, s: ExactScalar) {
        if s.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + &s;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, s);
            }
        }
    }

    pub fn scale(&self, s: &ExactScalar) -> PolyCoeff {
        let mut out = PolyCoeff::zero();
        for (m, c) in &self.terms {
            out.insert_term(m.clone(), c * s);
        }
        out
    }

    pub fn conj(&self) -> PolyCoeff {
        let mut out = PolyCoeff::zero();
        for (m, c) in &self.terms {
            out.insert_term(m.conj(), c.conj());
        }
        out
    }

    pub fn pow(&self, e: u32) -> PolyCoeff {
        let mut out = PolyCoeff::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Simultaneous substitution of the given rules, then renormalization.
    pub fn substitute(&self, bindings: &Bindings) -> Result<PolyCoeff, SymbolError> {
        bindings.validate()?;
        let mut out = PolyCoeff::zero();
        for (mono, coeff) in &self.terms {
            let mut residual = SymbolProduct::one();
            let mut factor = PolyCoeff::scalar(coeff.clone());
            for (sym, &exp) in mono.iter() {
                let rule = bindings.rules().iter().find(|b| &b.symbol == sym);
                match rule {
                    None => {
                        residual = residual.mul(&SymbolProduct(
                            [(sym.clone(), exp)].into_iter().collect(),
                        ));
                    }
                    Some(b) => {
                        let times = exp / b.power;
                        let rem = exp % b.power;
                        factor = &factor * &b.replacement.pow(times);
                        if rem > 0 {
                            residual = residual.mul(&SymbolProduct(
                                [(sym.clone(), rem)].into_iter().collect(),
                            ));
                        }
                    }
                }
            }
            for (m, c) in &factor.terms {
                out.insert_term(m.mul(&residual), c.clone());
            }
        }
        Ok(out)
    }

    /// Numeric evaluation. Symbols missing from `values` fall back to the
    /// conjugate of their partner's value; a symbol with neither bound is an
    /// error.
    pub fn eval(&self, values: &BTreeMap<String, Complex64>) -> Result<Complex64, SymbolError> {
        let lookup = |name: &str| -> Result<Complex64, SymbolError> {
            if let Some(v) = values.get(name) {
                return Ok(*v);
            }
            if let Some(v) = values.get(&conj_symbol(name)) {
                return Ok(v.conj());
            }
            Err(SymbolError::Unbound(name.to_string()))
        };
        let mut total = Complex64::new(0.0, 0.0);
        for (mono, coeff) in &self.terms {
            let mut prod = coeff.to_c64();
            for (sym, &exp) in mono.iter() {
                prod *= lookup(sym)?.powu(exp);
            }
            total += prod;
        }
        Ok(total)
    }

    /// Render one term for embedding in a product context.
    fn fmt_term(mono: &SymbolProduct, coeff: &ExactScalar) -> String {
        let sym_part: Vec<String> = mono
            .iter()
            .map(|(s, &e)| {
                if e == 1 {
                    s.clone()
                } else {
                    format!("{s}^{e}")
                }
            })
            .collect();
        if sym_part.is_empty() {
            return if coeff.addend_count() > 1 {
                format!("({coeff})")
            } else {
                coeff.to_string()
            };
        }
        let syms = sym_part.join("*");
        if coeff.is_one() {
            syms
        } else if coeff.is_signed_unit() && coeff.is_negative_leading() && (-coeff).is_one() {
            format!("-{syms}")
        } else if coeff.addend_count() > 1 {
            format!("({coeff})*{syms}")
        } else {
            format!("{coeff}*{syms}")
        }
    }
}

impl Add for &PolyCoeff {
    type Output = PolyCoeff;
    fn add(self, rhs: &PolyCoeff) -> PolyCoeff {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &PolyCoeff {
    type Output = PolyCoeff;
    fn sub(self, rhs: &PolyCoeff) -> PolyCoeff {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &PolyCoeff {
    type Output = PolyCoeff;
    fn mul(self, rhs: &PolyCoeff) -> PolyCoeff {
        let mut out = PolyCoeff::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.insert_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &PolyCoeff {
    type Output = PolyCoeff;
    fn neg(self) -> PolyCoeff {
        let mut out = PolyCoeff::zero();
        for (m, c) in &self.terms {
            out.insert_term(m.clone(), -c);
        }
        out
    }
}

impl fmt::Display for PolyCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Sort: total degree, then the map order of the symbol product.
        let mut items: Vec<(&SymbolProduct, &ExactScalar)> = self.terms.iter().collect();
        items.sort_by(|a, b| a.0.total_degree().cmp(&b.0.total_degree()).then(a.0.cmp(b.0)));
        let rendered: Vec<String> = items
            .iter()
            .map(|(m, c)| PolyCoeff::fmt_term(m, c))
            .collect();
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

impl fmt::Debug for PolyCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(name: &str) -> PolyCoeff {
        PolyCoeff::symbol(name)
    }

    #[test]
    fn conjugate_partner_naming() {
        assert_eq!(conj_symbol("mu"), "mu_bar");
        assert_eq!(conj_symbol("mu_bar"), "mu");
    }

    #[test]
    fn bogoliubov_constraint_reduces_to_one() {
        // mu*mu_bar - nu*nu_bar, with mu_bar→mu, nu_bar→nu, then mu^2→1+nu^2.
        let expr = &(&sym("mu") * &sym("mu_bar")) - &(&sym("nu") * &sym("nu_bar"));
        let real = Bindings::new()
            .set("mu_bar", sym("mu"))
            .set("nu_bar", sym("nu"));
        let step1 = expr.substitute(&real).unwrap();
        let reduce = Bindings::new().set_power(
            "mu",
            2,
            &PolyCoeff::one() + &(&sym("nu") * &sym("nu")),
        );
        let step2 = step1.substitute(&reduce).unwrap();
        assert!(step2.is_one());
    }

    #[test]
    fn rename_and_identity_substitutions() {
        let g = sym("gamma_bar");
        let out = g
            .substitute(&Bindings::new().set("gamma_bar", sym("gamma")))
            .unwrap();
        assert_eq!(out, sym("gamma"));

        let s = &sym("mu") + &sym("nu");
        let renamed = s
            .substitute(
                &Bindings::new()
                    .set("mu", sym("coshSym"))
                    .set("nu", sym("sinhSym")),
            )
            .unwrap();
        assert_eq!(renamed, &sym("coshSym") + &sym("sinhSym"));
    }

    #[test]
    fn cyclic_binding_rejected() {
        let err = sym("mu")
            .substitute(&Bindings::new().set("mu", &sym("mu") + &PolyCoeff::one()))
            .unwrap_err();
        assert_eq!(err, SymbolError::Cyclic("mu".to_string()));

        let err = sym("mu")
            .substitute(
                &Bindings::new()
                    .set("mu", sym("nu"))
                    .set("nu", sym("mu")),
            )
            .unwrap_err();
        assert!(matches!(err, SymbolError::Cyclic(_)));
    }

    #[test]
    fn eval_with_automatic_conjugates() {
        let expr = &sym("mu") * &sym("mu_bar");
        let mut vals = BTreeMap::new();
        vals.insert("mu".to_string(), Complex64::new(0.6, 0.8));
        let v = expr.eval(&vals).unwrap();
        assert!((v.re - 1.0).abs() < 1e-15 && v.im.abs() < 1e-15);

        let unbound = sym("zeta").eval(&vals).unwrap_err();
        assert_eq!(unbound, SymbolError::Unbound("zeta".to_string()));
    }

    #[test]
    fn display_is_canonical() {
        let p = &(&sym("nu") * &sym("nu")) - &sym("mu");
        assert_eq!(p.to_string(), "-mu + nu^2");
    }
}
