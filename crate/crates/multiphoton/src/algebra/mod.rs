//! Exact symbolic algebra for a single bosonic mode.
//!
//! Everything here is exact: scalars live in the ring Q(i)[√2] (Gaussian
//! rationals extended by √2, which is all the quadrature conventions ever
//! inject), coefficients are polynomials in named commuting symbols over that
//! ring, and operator expressions are kept in normal order (all creation
//! operators to the left) so that equality of operators is equality of maps.

mod coeff;
mod parse;
mod poly;
mod scalar;

pub use coeff::{conj_symbol, Binding, Bindings, PolyCoeff, SymbolError};
pub use parse::{parse_expr, parse_poly_coeff, parse_univariate, ParseError};
pub use poly::{EvalError, OperatorMonomial, OperatorPoly};
pub use scalar::{GaussRational, ExactScalar};
