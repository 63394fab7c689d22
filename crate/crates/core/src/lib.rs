//! Grid numerics for quantum fluctuation estimators.
//!
//! The crate has two halves. The first evaluates means, correlations and
//! standard deviations of observables on sampled wave functions and audits
//! whether the Robertson–Schrödinger inequality actually follows from the
//! Cauchy–Schwarz inequality for a given pair and state (it does only when the
//! scalar-product condition `(Aψ, Bψ) = (ψ, ABψ)` holds). The second treats a
//! measurement as a pair of stochastic kernels acting on the probability
//! density and current, and reports how the estimators and Shannon entropies
//! change between input and output.
//!
//! Module map:
//!
//! * [`numgrid`]: grids, quadrature, finite differences, kernels.
//! * [`states`]: the catalog of sampled states and their known closed forms.
//! * [`observables`]: operators, estimator sets, condition gaps, spin matrices.
//! * [`urelations`]: Cauchy–Schwarz / Robertson–Schrödinger verdicts.
//! * [`channel`]: classical and quantum measurement channels.
//! * [`oracle`]: closed-form Gaussian-packet and oscillator channel results.

pub mod card;
pub mod channel;
pub mod error;
pub mod numgrid;
pub mod observables;
pub mod oracle;
pub mod states;
pub mod urelations;

pub use card::{Quantity, QuantityCard};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use numgrid::{ComplexField, Domain, Grid, Kernel, RealField};
pub use observables::{EstimatorSet, Operator};
pub use states::StateSpec;
pub use urelations::{RelationClass, UrVerdict};

/// Reduced Planck constant in natural units, the default for every run.
pub const DEFAULT_HBAR: f64 = 1.0;
