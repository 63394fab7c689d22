//! Observables on grids and finite matrices, their estimators and the
//! scalar-product condition audit.

mod estimators;
pub mod matrix;
mod operator;

pub use estimators::{commutator_mean, condition_gap, estimator_set, EstimatorSet, NORMALIZATION_TOL};
pub use matrix::{
    magnetization_operators, magnetization_residual, matrix_estimator_set, random_density_matrix, random_hermitian, DensityMatrix,
    MatrixObservable,
};
pub use operator::{apply_chain, Operator};
