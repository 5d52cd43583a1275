//! Expression grammar for operator polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' uint)?
//! atom   := '(' expr ')' | 'a' | 'ad' | 'X1' | 'X2' | 'i' | 'sqrt2'
//!         | integer | identifier
//! ```
//!
//! `X1` and `X2` expand to `(a + ad)/sqrt2` and `−i(a − ad)/sqrt2` before
//! normal ordering. `^` takes a literal non-negative integer exponent;
//! negative exponents are a syntax error. `/` requires the divisor to reduce
//! to a nonzero exact scalar (no operators, no symbols), which is how
//! rational literals such as `3/4` are formed. Any other identifier is a
//! named commuting symbol; names ending in `_bar` denote conjugates.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use super::coeff::PolyCoeff;
use super::poly::OperatorPoly;
use super::scalar::ExactScalar;

#[derive(Debug, Error, PartialEq)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        msg: msg.into(),
    })
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Int(BigInt),
    Ident(String),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Plus => write!(f, "+"),
            Tok::Minus => write!(f, "-"),
            Tok::Star => write!(f, "*"),
            Tok::Slash => write!(f, "/"),
            Tok::Caret => write!(f, "^"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::Int(n) => write!(f, "{n}"),
            Tok::Ident(s) => write!(f, "{s}"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '/' => {
                out.push((i, Tok::Slash));
                i += 1;
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let lit = &text[start..i];
                let n = BigInt::from_str(lit)
                    .map_err(|e| ParseError {
                        pos: start,
                        msg: format!("bad integer literal: {e}"),
                    })?;
                out.push((start, Tok::Int(n)));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
            }
            other => return err(i, format!("unexpected character `{other}`")),
        }
    }
    Ok(out)
}

/// Parse tree prior to lowering.
#[derive(Clone, Debug)]
enum Ast {
    Sum(Vec<(bool, Ast)>), // (negated, term)
    Product(Vec<(bool, Ast)>), // (inverted, factor)
    Neg(Box<Ast>),
    Pow(Box<Ast>, u32),
    Int(BigInt),
    Ident(String, usize),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&(usize, Tok)> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut terms = Vec::new();
        // optional leading sign
        let mut neg = false;
        if let Some((_, Tok::Minus)) = self.peek() {
            self.next();
            neg = true;
        } else if let Some((_, Tok::Plus)) = self.peek() {
            self.next();
        }
        terms.push((neg, self.term()?));
        while let Some((_, t)) = self.peek() {
            match t {
                Tok::Plus => {
                    self.next();
                    terms.push((false, self.term()?));
                }
                Tok::Minus => {
                    self.next();
                    terms.push((true, self.term()?));
                }
                _ => break,
            }
        }
        Ok(Ast::Sum(terms))
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut factors = vec![(false, self.unary()?)];
        while let Some((_, t)) = self.peek() {
            match t {
                Tok::Star => {
                    self.next();
                    factors.push((false, self.unary()?));
                }
                Tok::Slash => {
                    self.next();
                    factors.push((true, self.unary()?));
                }
                _ => break,
            }
        }
        Ok(Ast::Product(factors))
    }

    fn unary(&mut self) -> Result<Ast, ParseError> {
        if let Some((_, Tok::Minus)) = self.peek() {
            self.next();
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast, ParseError> {
        let base = self.atom()?;
        if let Some((cpos, Tok::Caret)) = self.peek().cloned() {
            self.next();
            match self.next() {
                Some((_, Tok::Int(n))) => {
                    let e = u32::try_from(&n).map_err(|_| ParseError {
                        pos: cpos,
                        msg: "exponent too large".to_string(),
                    })?;
                    return Ok(Ast::Pow(Box::new(base), e));
                }
                Some((p, Tok::Minus)) => {
                    return err(p, "negative exponent rejected");
                }
                Some((p, other)) => {
                    return err(p, format!("expected integer exponent, found `{other}`"));
                }
                None => return err(self.end, "expected integer exponent, found end of input"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        match self.next() {
            Some((_, Tok::Int(n))) => Ok(Ast::Int(n)),
            Some((p, Tok::Ident(s))) => Ok(Ast::Ident(s, p)),
            Some((_, Tok::LParen)) => {
                let inner = self.expr()?;
                match self.next() {
                    Some((_, Tok::RParen)) => Ok(inner),
                    Some((p, other)) => err(p, format!("expected `)`, found `{other}`")),
                    None => err(self.end, "expected `)`, found end of input"),
                }
            }
            Some((p, other)) => err(p, format!("expected an atom, found `{other}`")),
            None => err(self.end, "expected an atom, found end of input"),
        }
    }
}

fn parse_ast(text: &str) -> Result<Ast, ParseError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return err(0, "empty expression");
    }
    let end = text.len();
    let mut p = Parser { toks, pos: 0, end };
    let ast = p.expr()?;
    if let Some((pos, t)) = p.peek() {
        return err(*pos, format!("unexpected trailing token `{t}`"));
    }
    Ok(ast)
}

fn lower_operator(ast: &Ast) -> Result<OperatorPoly, ParseError> {
    match ast {
        Ast::Int(n) => Ok(OperatorPoly::from_scalar(ExactScalar::from_bigint(
            n.clone(),
        ))),
        Ast::Ident(name, _) => Ok(match name.as_str() {
            "a" => OperatorPoly::annihilator(),
            "ad" => OperatorPoly::creator(),
            "X1" => OperatorPoly::quadrature_x1(),
            "X2" => OperatorPoly::quadrature_x2(),
            "i" => OperatorPoly::from_scalar(ExactScalar::i()),
            "sqrt2" => OperatorPoly::from_scalar(ExactScalar::sqrt2()),
            other => OperatorPoly::from_coeff(PolyCoeff::symbol(other)),
        }),
        Ast::Neg(inner) => Ok(-&lower_operator(inner)?),
        Ast::Pow(base, e) => Ok(lower_operator(base)?.pow(*e)),
        Ast::Sum(terms) => {
            let mut out = OperatorPoly::zero();
            for (neg, t) in terms {
                let v = lower_operator(t)?;
                out = if *neg { &out - &v } else { &out + &v };
            }
            Ok(out)
        }
        Ast::Product(factors) => {
            let mut out = OperatorPoly::identity();
            for (invert, f) in factors {
                let v = lower_operator(f)?;
                if *invert {
                    let s = operator_as_scalar(&v).ok_or_else(|| ParseError {
                        pos: ast_pos(f),
                        msg: "division requires a pure scalar divisor".to_string(),
                    })?;
                    let r = s.recip().ok_or_else(|| ParseError {
                        pos: ast_pos(f),
                        msg: "division by zero".to_string(),
                    })?;
                    out = out.scale(&PolyCoeff::scalar(r));
                } else {
                    out = &out * &v;
                }
            }
            Ok(out)
        }
    }
}

fn operator_as_scalar(p: &OperatorPoly) -> Option<ExactScalar> {
    if p.is_zero() {
        return Some(ExactScalar::zero());
    }
    if p.term_count() != 1 {
        return None;
    }
    let (m, c) = p.terms().next()?;
    if m.total_degree() != 0 {
        return None;
    }
    c.as_scalar()
}

fn ast_pos(ast: &Ast) -> usize {
    match ast {
        Ast::Ident(_, p) => *p,
        Ast::Pow(b, _) => ast_pos(b),
        Ast::Neg(b) => ast_pos(b),
        Ast::Sum(v) | Ast::Product(v) => v.first().map(|(_, a)| ast_pos(a)).unwrap_or(0),
        Ast::Int(_) => 0,
    }
}

/// Parse an expression into a normal-ordered [`OperatorPoly`].
pub fn parse_expr(text: &str) -> Result<OperatorPoly, ParseError> {
    let ast = parse_ast(text)?;
    lower_operator(&ast)
}

/// Parse an expression that must contain no mode operators at all: a
/// polynomial in named symbols over Q(i)[√2].
pub fn parse_poly_coeff(text: &str) -> Result<PolyCoeff, ParseError> {
    let op = parse_expr(text)?;
    let mut out = PolyCoeff::zero();
    for (m, c) in op.terms() {
        if m.total_degree() != 0 {
            return err(0, "expression contains mode operators; expected a scalar polynomial");
        }
        out = &out + c;
    }
    Ok(out)
}

/// Parse an expression as a univariate polynomial in the quadrature
/// `X{quadrature}` (1 or 2). Mode operators and the other quadrature are
/// rejected; the result is the coefficient list `[f₀, f₁, …]` of
/// `F(X) = Σ fₖ Xᵏ`.
pub fn parse_univariate(text: &str, quadrature: u8) -> Result<Vec<PolyCoeff>, ParseError> {
    let var = format!("X{quadrature}");
    let other = format!("X{}", 3 - quadrature);
    let ast = parse_ast(text)?;
    let poly = lower_univariate(&ast, &var, &other)?;
    Ok(poly.0)
}

/// Dense univariate polynomial with PolyCoeff coefficients.
#[derive(Clone, Debug)]
struct UniPoly(Vec<PolyCoeff>);

impl UniPoly {
    fn constant(c: PolyCoeff) -> Self {
        if c.is_zero() {
            UniPoly(vec![])
        } else {
            UniPoly(vec![c])
        }
    }

    fn variable() -> Self {
        UniPoly(vec![PolyCoeff::zero(), PolyCoeff::one()])
    }

    fn add(&self, rhs: &UniPoly) -> UniPoly {
        let n = self.0.len().max(rhs.0.len());
        let mut out = vec![PolyCoeff::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            out[i] = &out[i] + c;
        }
        for (i, c) in rhs.0.iter().enumerate() {
            out[i] = &out[i] + c;
        }
        UniPoly(trim(out))
    }

    fn neg(&self) -> UniPoly {
        UniPoly(self.0.iter().map(|c| -c).collect())
    }

    fn mul(&self, rhs: &UniPoly) -> UniPoly {
        if self.0.is_empty() || rhs.0.is_empty() {
            return UniPoly(vec![]);
        }
        let mut out = vec![PolyCoeff::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UniPoly(trim(out))
    }

    fn pow(&self, e: u32) -> UniPoly {
        let mut out = UniPoly::constant(PolyCoeff::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    fn as_constant(&self) -> Option<PolyCoeff> {
        match self.0.len() {
            0 => Some(PolyCoeff::zero()),
            1 => Some(self.0[0].clone()),
            _ => None,
        }
    }
}

fn trim(mut v: Vec<PolyCoeff>) -> Vec<PolyCoeff> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn lower_univariate(ast: &Ast, var: &str, other: &str) -> Result<UniPoly, ParseError> {
    match ast {
        Ast::Int(n) => Ok(UniPoly::constant(PolyCoeff::scalar(
            ExactScalar::from_bigint(n.clone()),
        ))),
        Ast::Ident(name, p) => match name.as_str() {
            "a" | "ad" => err(*p, "mode operators are not allowed in a nonlinearity"),
            s if s == other => err(*p, format!("only {var} may appear in this nonlinearity")),
            s if s == var => Ok(UniPoly::variable()),
            "i" => Ok(UniPoly::constant(PolyCoeff::i())),
            "sqrt2" => Ok(UniPoly::constant(PolyCoeff::scalar(ExactScalar::sqrt2()))),
            s => Ok(UniPoly::constant(PolyCoeff::symbol(s))),
        },
        Ast::Neg(inner) => Ok(lower_univariate(inner, var, other)?.neg()),
        Ast::Pow(base, e) => Ok(lower_univariate(base, var, other)?.pow(*e)),
        Ast::Sum(terms) => {
            let mut out = UniPoly(vec![]);
            for (neg, t) in terms {
                let v = lower_univariate(t, var, other)?;
                out = out.add(&if *neg { v.neg() } else { v });
            }
            Ok(out)
        }
        Ast::Product(factors) => {
            let mut out = UniPoly::constant(PolyCoeff::one());
            for (invert, f) in factors {
                let v = lower_univariate(f, var, other)?;
                if *invert {
                    let s = v
                        .as_constant()
                        .and_then(|c| c.as_scalar())
                        .ok_or_else(|| ParseError {
                            pos: ast_pos(f),
                            msg: "division requires a pure scalar divisor".to_string(),
                        })?;
                    let r = s.recip().ok_or_else(|| ParseError {
                        pos: ast_pos(f),
                        msg: "division by zero".to_string(),
                    })?;
                    out = out.mul(&UniPoly::constant(PolyCoeff::scalar(r)));
                } else {
                    out = out.mul(&v);
                }
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::OperatorMonomial;

    #[test]
    fn parses_ccr_example() {
        // a*ad → a†a + 1
        let p = parse_expr("a*ad").unwrap();
        assert_eq!(p, parse_expr("ad*a + 1").unwrap());
    }

    #[test]
    fn parses_quadrature_definition() {
        let p = parse_expr("X1").unwrap();
        let q = parse_expr("(a + ad)/sqrt2").unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn parses_x2_squared() {
        let p = parse_expr("X2^2").unwrap();
        let q = parse_expr("-1/2*ad^2 - 1/2*a^2 + ad*a + 1/2").unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse_expr("a + * ad").unwrap_err();
        assert_eq!(e.pos, 4);
        let e = parse_expr("a^-2").unwrap_err();
        assert_eq!(e.pos, 2);
        assert!(e.msg.contains("negative exponent"));
        let e = parse_expr("(a + ad").unwrap_err();
        assert!(e.msg.contains("end of input"));
    }

    #[test]
    fn exponent_on_parenthesized_base() {
        let p = parse_expr("(a + ad)^2").unwrap();
        let q = parse_expr("a^2 + ad^2 + 2*ad*a + 1").unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn division_by_operator_rejected() {
        let e = parse_expr("1/a").unwrap_err();
        assert!(e.msg.contains("pure scalar"));
        let e = parse_expr("1/(2 - 2)").unwrap_err();
        assert!(e.msg.contains("division by zero"));
    }

    #[test]
    fn print_parse_round_trip() {
        let exprs = [
            "X2^2",
            "mu*a + nu*ad + gamma*X2^2",
            "(1/2 + 1/2*i)*ad^3*a - sqrt2*nu_bar",
            "ad*a + 1/2",
        ];
        for text in exprs {
            let p = parse_expr(text).unwrap();
            let printed = p.to_string();
            let reparsed = parse_expr(&printed)
                .unwrap_or_else(|e| panic!("reparse of `{printed}` failed: {e}"));
            assert_eq!(reparsed, p, "round trip failed for {text} → {printed}");
        }
    }

    #[test]
    fn univariate_lowering() {
        let coeffs = parse_univariate("X2^2", 2).unwrap();
        assert_eq!(coeffs.len(), 3);
        assert!(coeffs[0].is_zero());
        assert!(coeffs[1].is_zero());
        assert!(coeffs[2].is_one());

        let coeffs = parse_univariate("3*X1 - 1/2*X1^3 + 2", 1).unwrap();
        assert_eq!(coeffs.len(), 4);
        assert_eq!(coeffs[0], PolyCoeff::from_int(2));
        assert_eq!(coeffs[1], PolyCoeff::from_int(3));
        assert!(coeffs[2].is_zero());
        assert_eq!(coeffs[3], PolyCoeff::from_ratio(-1, 2));

        assert!(parse_univariate("X1*X2", 2).is_err());
        assert!(parse_univariate("a*X2", 2).is_err());
    }

    #[test]
    fn scalar_polynomial_lowering() {
        let c = parse_poly_coeff("mu^2 + nu^2 + 3*gamma^2").unwrap();
        assert!(c.mentions("mu") && c.mentions("gamma"));
        assert!(parse_poly_coeff("mu*a").is_err());
    }

    #[test]
    fn identity_monomial_prints_parseably() {
        let p = parse_expr("ad*a + nu^2 + 1/2").unwrap();
        let q = parse_expr(&p.to_string()).unwrap();
        assert_eq!(p, q);
        let c = p.coefficient(OperatorMonomial::identity());
        assert_eq!(c, parse_poly_coeff("nu^2 + 1/2").unwrap());
    }
}
