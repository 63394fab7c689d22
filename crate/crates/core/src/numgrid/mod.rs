//! Numerical substrate: grids with quadrature weights, sampled fields,
//! finite-difference derivatives and discrete transfer kernels.

mod field;
mod grid;
mod kernel;
mod stencil;

pub use field::{ComplexField, Field, FieldValue, RealField};
pub use grid::{Axis, AxisKind, Domain, Grid, MIN_NODES};
pub use kernel::{convolve, convolve_along, Kernel};
pub use stencil::{differentiate, differentiate_with, fornberg_weights, Stencils, DEFAULT_ACCURACY};
