use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};

/// Scalar types a field can hold.
pub trait FieldValue:
    Copy
    + Debug
    + Send
    + Sync
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<f64, Output = Self>
    + 'static
{
    fn zero() -> Self;
    fn finite(&self) -> bool;
}

impl FieldValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

impl FieldValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Samples of a function at every node of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    grid: Arc<Grid>,
    values: Vec<T>,
}

pub type ComplexField = Field<Complex64>;
pub type RealField = Field<f64>;

impl<T: FieldValue> Field<T> {
    pub fn new(grid: Arc<Grid>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::FieldLength { expected: grid.len(), got: values.len() });
        }
        if let Some(i) = values.iter().position(|v| !v.finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Field { grid, values })
    }

    /// Samples `f` at the node coordinates.
    pub fn from_fn(grid: Arc<Grid>, f: impl Fn([f64; 2]) -> T) -> Result<Self> {
        let values = (0..grid.len()).map(|i| f(grid.point(i))).collect();
        Field::new(grid, values)
    }

    pub(crate) fn from_parts_unchecked(grid: Arc<Grid>, values: Vec<T>) -> Self {
        debug_assert_eq!(grid.len(), values.len());
        Field { grid, values }
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        let values = vec![T::zero(); grid.len()];
        Field { grid, values }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn same_grid<U>(&self, other: &Field<U>) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    pub fn check_same_grid<U>(&self, other: &Field<U>) -> Result<()> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn map<U: FieldValue>(&self, f: impl Fn(T) -> U) -> Field<U> {
        Field {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise map that also receives the node coordinates.
    pub fn map_with_point<U: FieldValue>(&self, f: impl Fn([f64; 2], T) -> U) -> Field<U> {
        Field {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(i, &v)| f(self.grid.point(i), v))
                .collect(),
        }
    }

    pub fn zip_with<U: FieldValue, V: FieldValue>(
        &self,
        other: &Field<U>,
        f: impl Fn(T, U) -> V,
    ) -> Result<Field<V>> {
        self.check_same_grid(other)?;
        Ok(Field {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|v| v * s)
    }

    /// Quadrature of the field over its grid.
    pub fn integrate(&self) -> T {
        self.values
            .iter()
            .zip(self.grid.weights())
            .fold(T::zero(), |acc, (&v, &w)| acc + v * w)
    }
}

impl ComplexField {
    /// Scalar product `(self, other) = ∫ conj(self)·other`.
    pub fn inner(&self, other: &ComplexField) -> Result<Complex64> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .zip(self.grid.weights())
            .fold(Complex64::new(0.0, 0.0), |acc, ((a, b), &w)| acc + a.conj() * b * w))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values
            .iter()
            .zip(self.grid.weights())
            .map(|(v, w)| v.norm_sqr() * w)
            .sum()
    }

    pub fn modulus_sqr(&self) -> RealField {
        self.map(|v| v.norm_sqr())
    }

    pub fn from_real(field: &RealField) -> ComplexField {
        field.map(|v| Complex64::new(v, 0.0))
    }

    pub fn scale_complex(&self, s: Complex64) -> ComplexField {
        self.map(|v| v * s)
    }

    /// `self − c·other`.
    pub fn sub_scaled(&self, c: Complex64, other: &ComplexField) -> Result<ComplexField> {
        self.zip_with(other, |a, b| a - c * b)
    }
}

impl RealField {
    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn constant_on_circle_integrates_to_two_pi() {
        let g = Grid::circle(64).unwrap();
        let f = RealField::from_fn(g, |_| 1.0).unwrap();
        assert!((f.integrate() - 2.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn rejects_length_and_nonfinite() {
        let g = Grid::segment(0.0, 1.0, 16).unwrap();
        assert_eq!(
            RealField::new(g.clone(), vec![0.0; 3]).unwrap_err(),
            Error::FieldLength { expected: 16, got: 3 }
        );
        let mut v = vec![0.0; 16];
        v[5] = f64::NAN;
        assert_eq!(RealField::new(g, v).unwrap_err(), Error::NonFinite(5));
    }

    #[test]
    fn grid_mismatch_detected() {
        let a = RealField::zeros(Grid::segment(0.0, 1.0, 16).unwrap());
        let b = RealField::zeros(Grid::segment(0.0, 2.0, 16).unwrap());
        assert_eq!(a.zip_with(&b, |x, y| x + y).unwrap_err(), Error::GridMismatch);
        let c = RealField::zeros(Grid::segment(0.0, 1.0, 16).unwrap());
        assert!(a.same_grid(&c));
    }

    #[test]
    fn segment_trapezoid_weights_unit_interval() {
        let g = Grid::segment(0.0, 1.0, 16).unwrap();
        let f = RealField::from_fn(g, |_| 1.0).unwrap();
        assert!((f.integrate() - 1.0).abs() < 1e-15);
    }
}
