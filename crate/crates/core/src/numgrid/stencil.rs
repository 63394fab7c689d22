//! Finite-difference stencils on uniform axes.
//!
//! Interior nodes use centered stencils; nodes closer to an end than the
//! stencil half-width use one-sided stencils of the same formal accuracy.
//! No axis is ever wrapped around, the circle included: its first node gets
//! a forward stencil and its last node a backward one.

use super::field::{Field, FieldValue};
use crate::error::{Error, Result};

/// Formal order of accuracy used by [`differentiate`].
pub const DEFAULT_ACCURACY: usize = 8;

/// Finite-difference weights by Fornberg's recursion.
///
/// Returns `c[k][j]`, the weight of `x[j]` in the `k`-th derivative at `z`,
/// for every `k ≤ max_deriv`.
pub fn fornberg_weights(z: f64, x: &[f64], max_deriv: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut c = vec![vec![0.0; n]; max_deriv + 1];
    if n == 0 {
        return c;
    }
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(max_deriv);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Per-node stencils for one axis: the first node of the window and the
/// weights (already divided by `h^deriv`).
#[derive(Debug, Clone)]
pub struct Stencils {
    rows: Vec<(usize, Vec<f64>)>,
}

impl Stencils {
    pub fn new(len: usize, step: f64, deriv: usize, accuracy: usize) -> Result<Stencils> {
        if !(deriv == 1 || deriv == 2) {
            return Err(Error::InvalidParameter(format!("derivative order {deriv}")));
        }
        if accuracy < 2 || !accuracy.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!("stencil accuracy {accuracy}")));
        }
        let half = accuracy / 2;
        let edge_width = accuracy + deriv;
        let min = edge_width.max(5);
        if len < min {
            return Err(Error::TooFewNodes { min, got: len });
        }
        let scale = step.powi(deriv as i32);
        let weights_at = |z: f64, offsets: &[f64]| -> Vec<f64> {
            fornberg_weights(z, offsets, deriv)[deriv]
                .iter()
                .map(|w| w / scale)
                .collect()
        };
        let central: Vec<f64> = (0..=2 * half).map(|k| k as f64).collect();
        let central = weights_at(half as f64, &central);
        let window: Vec<f64> = (0..edge_width).map(|k| k as f64).collect();
        let rows = (0..len)
            .map(|i| {
                if i < half {
                    (0, weights_at(i as f64, &window))
                } else if i + half >= len {
                    let start = len - edge_width;
                    (start, weights_at((i - start) as f64, &window))
                } else {
                    (i - half, central.clone())
                }
            })
            .collect();
        Ok(Stencils { rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, i: usize) -> (usize, &[f64]) {
        let (s, w) = &self.rows[i];
        (*s, w)
    }

    /// Applies the stencils to a strided line of `values`.
    fn apply_line<T: FieldValue>(&self, values: &[T], base: usize, stride: usize, out: &mut [T]) {
        for (i, (start, w)) in self.rows.iter().enumerate() {
            let mut acc = T::zero();
            for (k, &c) in w.iter().enumerate() {
                acc = acc + values[base + (start + k) * stride] * c;
            }
            out[base + i * stride] = acc;
        }
    }
}

/// Derivative of `order` 1 or 2 along `axis` at [`DEFAULT_ACCURACY`].
pub fn differentiate<T: FieldValue>(field: &Field<T>, axis: usize, order: usize) -> Result<Field<T>> {
    differentiate_with(field, axis, order, DEFAULT_ACCURACY)
}

pub fn differentiate_with<T: FieldValue>(
    field: &Field<T>,
    axis: usize,
    order: usize,
    accuracy: usize,
) -> Result<Field<T>> {
    let grid = field.grid();
    if axis >= grid.ndim() {
        return Err(Error::InvalidParameter(format!("axis {axis} on a {}-d grid", grid.ndim())));
    }
    let ax = grid.axis(axis);
    let stencils = Stencils::new(ax.len(), ax.step(), order, accuracy)?;
    let (outer, len, inner) = grid.line_layout(axis);
    let values = field.values();
    let mut out = vec![T::zero(); values.len()];
    for o in 0..outer {
        for i in 0..inner {
            stencils.apply_line(values, o * len * inner + i, inner, &mut out);
        }
    }
    Ok(Field::from_parts_unchecked(grid.clone(), out))
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::numgrid::{ComplexField, Grid, RealField};

    fn plane_wave(n: usize, m: f64) -> ComplexField {
        ComplexField::from_fn(Grid::circle(n).unwrap(), |p| Complex64::new(0.0, m * p[0]).exp())
            .unwrap()
    }

    fn max_rel_err(n: usize, m: f64, accuracy: usize) -> f64 {
        let f = plane_wave(n, m);
        let d = differentiate_with(&f, 0, 1, accuracy).unwrap();
        d.values()
            .iter()
            .zip(f.values())
            .map(|(d, v)| (d - Complex64::i() * m * v).norm() / m)
            .fold(0.0, f64::max)
    }

    #[test]
    fn classic_weights() {
        let c = fornberg_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        assert_eq!(c[1], vec![-0.5, 0.0, 0.5]);
        assert_eq!(c[2], vec![1.0, -2.0, 1.0]);
        let f = fornberg_weights(0.0, &[0.0, 1.0, 2.0], 1);
        assert_eq!(f[1], vec![-1.5, 2.0, -0.5]);
    }

    #[test]
    fn derivative_of_plane_wave_on_circle() {
        let f = plane_wave(2048, 1.0);
        let d = differentiate(&f, 0, 1).unwrap();
        for (dv, v) in d.values().iter().zip(f.values()) {
            assert!((dv - Complex64::i() * v).norm() < 1e-4);
        }
    }

    #[test]
    fn constant_has_zero_derivative() {
        let f = RealField::from_fn(Grid::segment(-1.0, 3.0, 64).unwrap(), |_| 2.5).unwrap();
        for order in [1, 2] {
            let d = differentiate(&f, 0, order).unwrap();
            for &v in &d.values()[8..56] {
                assert!(v.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn endpoint_derivative_without_wraparound() {
        // φ·e^{iφ} jumps under periodic wrap; one-sided stencils must not see it.
        let g = Grid::circle(2048).unwrap();
        let f = ComplexField::from_fn(g.clone(), |p| p[0] * Complex64::new(0.0, p[0]).exp()).unwrap();
        let d = differentiate(&f, 0, 1).unwrap();
        let last = g.len() - 1;
        let phi = g.point(last)[0];
        let exact = (1.0 + Complex64::i() * phi) * Complex64::new(0.0, phi).exp();
        assert!((d.values()[last] - exact).norm() < 1e-3);
        let exact0 = Complex64::new(1.0, 0.0);
        assert!((d.values()[0] - exact0).norm() < 1e-3);
    }

    #[test]
    fn convergence_under_refinement() {
        for accuracy in [2, 4, 8] {
            let coarse = max_rel_err(64, 3.0, accuracy);
            let fine = max_rel_err(128, 3.0, accuracy);
            assert!(coarse / fine >= 3.0, "accuracy {accuracy}: {coarse} -> {fine}");
        }
    }

    #[test]
    fn second_derivative_matches_twice_first() {
        let g = Grid::segment(-8.0, 8.0, 1024).unwrap();
        let f = RealField::from_fn(g, |p| (-p[0] * p[0] / 2.0).exp() * (1.0 + p[0])).unwrap();
        let dd = differentiate(&differentiate(&f, 0, 1).unwrap(), 0, 1).unwrap();
        let d2 = differentiate(&f, 0, 2).unwrap();
        let scale = d2.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (a, b) in dd.values().iter().zip(d2.values()) {
            assert!((a - b).abs() <= 1e-3 * scale);
        }
    }

    #[test]
    fn too_few_nodes() {
        let f = RealField::zeros(Grid::circle(8).unwrap());
        assert!(matches!(differentiate(&f, 0, 1), Err(Error::TooFewNodes { .. })));
        assert!(differentiate_with(&f, 0, 1, 2).is_ok());
    }
}
