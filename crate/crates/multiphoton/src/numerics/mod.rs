//! Special functions, quadrature, and representation transforms.

pub mod airy;
pub mod dd;
pub mod expm;
pub mod fd;
pub mod grid;
pub mod hermite;
pub mod interp;
pub mod quad;
pub mod transform;

pub use airy::airy_ai;
pub use expm::{expm, CMatrix};
pub use grid::{Grid, GridError};
pub use hermite::{hermite_column, hermite_function, GaussHermite, HermiteError, MAX_HERMITE_INDEX};
pub use interp::interp6;
pub use quad::{integrate, trapezoid, trapezoid_c, QuadError};
pub use transform::{oscillatory_transform, Representation, TransformError};
