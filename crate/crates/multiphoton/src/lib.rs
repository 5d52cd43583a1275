//! Nonlinear canonical transformations of a single bosonic mode and the
//! non-Gaussian multiphoton squeezed states they generate.
//!
//! The crate is organized in layers:
//!
//! * [`algebra`] — an exact symbolic engine for normal-ordered polynomials in
//!   the mode operators `a`, `ad` and the quadratures `X1`, `X2`, over the
//!   coefficient ring Q(i)[√2] extended by named commuting symbols.
//! * [`canonical`] — the transformed mode `b = μa + νa† + γF(Xᵢ)`, its
//!   canonicity constraints, and the multiphoton Hamiltonians `b†b + ½`,
//!   expanded symbolically or numerically.
//! * [`numerics`] — Airy function, harmonic-oscillator eigenfunctions,
//!   Gauss–Hermite quadrature, the unitary change between the `X1`- and
//!   `X2`-diagonal representations, and a dense matrix exponential.
//! * [`states`] — sampled wavefunctions for the two-photon squeezed state and
//!   both four-photon families, in closed form and via the representation
//!   transform.
//! * [`statistics`] — Fock-space projections, P(n), factorial moments,
//!   g²(0)/g⁴(0), and a truncated-matrix displacement/squeeze oracle.
//! * [`wigner`] — the Wigner quasiprobability distribution and its
//!   diagnostics (norm, purity, negativity, peak and orientation).
//! * [`cli`] — the command-line front end used by the `multiphoton` binary.
//!
//! Conventions (quadratures, transform kernel sign, and the constants of the
//! exponential-Airy wavefunction) are collected in `docs/conventions.md` at
//! the repository root; every sign choice is pinned by an executed test.

pub mod algebra;
pub mod canonical;
pub mod cli;
pub mod numerics;
pub mod states;
pub mod statistics;
pub mod wigner;
