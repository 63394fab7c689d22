//! Discrete transfer kernels.
//!
//! A kernel `W` acts on a field sampled on a segment axis as
//! `out[i] = Σ_j W[i][j]·f[j]·q[j]` where `q` are the quadrature weights.
//! A transfer probability must satisfy `Σ_i q[i]·W[i][j] = 1` and
//! `Σ_j W[i][j]·q[j] = 1`.

use std::f64::consts::PI;

use super::field::{Field, FieldValue};
use super::grid::{Axis, AxisKind};
use crate::error::{Error, Result};

const NORMALIZATION_TOL: f64 = 1e-8;
const SINKHORN_TOL: f64 = 1e-14;
const SINKHORN_MAX_ITER: usize = 20_000;
/// Gaussian entries further than this many widths from the diagonal are
/// below `e^{-72}` relative and are dropped.
const BAND_WIDTHS: f64 = 12.0;

#[derive(Debug, Clone, PartialEq)]
enum Weights {
    Identity,
    /// Row-major `n × n`; entries with `|i − j| > band` are zero.
    Dense { band: usize, w: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    axis: Axis,
    width: f64,
    weights: Weights,
}

impl Kernel {
    /// The Dirac kernel: `W[i][j] = δ_ij / q[j]`.
    pub fn identity(axis: &Axis) -> Kernel {
        Kernel { axis: axis.clone(), width: 0.0, weights: Weights::Identity }
    }

    /// Samples `exp(−(a−a′)²/2w²)/(w√2π)` on the axis and rescales it with a
    /// symmetric Sinkhorn iteration `W = D·K·D` until both normalization
    /// conditions hold to round-off. Width zero gives [`Kernel::identity`].
    pub fn gaussian(axis: &Axis, width: f64) -> Result<Kernel> {
        if !(width.is_finite() && width >= 0.0) {
            return Err(Error::InvalidParameter(format!("kernel width {width}")));
        }
        if axis.kind() != AxisKind::Segment {
            return Err(Error::DomainMismatch("gaussian kernels need a segment axis".into()));
        }
        if width > 0.25 * axis.span() {
            return Err(Error::KernelTooWide { width, span: axis.span() });
        }
        if width == 0.0 {
            return Ok(Kernel::identity(axis));
        }
        let n = axis.len();
        let h = axis.step();
        let band = ((BAND_WIDTHS * width / h).ceil() as usize).min(n - 1);
        let norm = 1.0 / (width * (2.0 * PI).sqrt());
        let mut k = vec![0.0; n * n];
        for i in 0..n {
            let lo = i.saturating_sub(band);
            let hi = (i + band).min(n - 1);
            for j in lo..=hi {
                let d = (i as f64 - j as f64) * h;
                k[i * n + j] = norm * (-d * d / (2.0 * width * width)).exp();
            }
        }
        let q = axis.weights();
        let mut d = vec![1.0; n];
        let mut s = vec![0.0; n];
        for _ in 0..SINKHORN_MAX_ITER {
            banded_product(&k, n, band, |j| q[j] * d[j], &mut s);
            let defect = d.iter().zip(&s).map(|(di, si)| (di * si - 1.0).abs()).fold(0.0, f64::max);
            if defect < SINKHORN_TOL {
                break;
            }
            for (di, si) in d.iter_mut().zip(&s) {
                *di = (*di / si).sqrt();
            }
        }
        for i in 0..n {
            let lo = i.saturating_sub(band);
            let hi = (i + band).min(n - 1);
            for j in lo..=hi {
                k[i * n + j] *= d[i] * d[j];
            }
        }
        let kernel = Kernel { axis: axis.clone(), width, weights: Weights::Dense { band, w: k } };
        kernel.check_normalization()?;
        Ok(kernel)
    }

    /// Wraps a user-supplied row-major weight matrix, which must be
    /// nonnegative and normalized within `1e-8`.
    pub fn from_matrix(axis: &Axis, width: f64, matrix: Vec<f64>) -> Result<Kernel> {
        let n = axis.len();
        if matrix.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "kernel matrix has {} entries, axis needs {}",
                matrix.len(),
                n * n
            )));
        }
        if let Some(i) = matrix.iter().position(|&v| !(v.is_finite() && v >= 0.0)) {
            return Err(Error::NegativeValue { index: i, value: matrix[i] });
        }
        let kernel = Kernel {
            axis: axis.clone(),
            width,
            weights: Weights::Dense { band: n - 1, w: matrix },
        };
        kernel.check_normalization()?;
        Ok(kernel)
    }

    pub fn axis(&self) -> &Axis {
        &self.axis
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.weights, Weights::Identity)
    }

    pub fn len(&self) -> usize {
        self.axis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axis.is_empty()
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        match &self.weights {
            Weights::Identity => {
                if i == j {
                    1.0 / self.axis.weights()[j]
                } else {
                    0.0
                }
            }
            Weights::Dense { w, .. } => w[i * self.len() + j],
        }
    }

    /// `Σ_j W[i][j]·q[j]` for every row.
    pub fn row_sums(&self) -> Vec<f64> {
        let q = self.axis.weights();
        match &self.weights {
            Weights::Identity => vec![1.0; self.len()],
            Weights::Dense { band, w } => {
                let mut s = vec![0.0; self.len()];
                banded_product(w, self.len(), *band, |j| q[j], &mut s);
                s
            }
        }
    }

    /// `Σ_i q[i]·W[i][j]` for every column.
    pub fn column_sums(&self) -> Vec<f64> {
        let n = self.len();
        let q = self.axis.weights();
        match &self.weights {
            Weights::Identity => vec![1.0; n],
            Weights::Dense { w, .. } => (0..n)
                .map(|j| (0..n).map(|i| q[i] * w[i * n + j]).sum())
                .collect(),
        }
    }

    fn check_normalization(&self) -> Result<()> {
        let worst = self
            .row_sums()
            .into_iter()
            .chain(self.column_sums())
            .map(|s| (s - 1.0).abs())
            .fold(0.0, f64::max);
        if worst > NORMALIZATION_TOL {
            return Err(Error::KernelNotStochastic(format!(
                "row/column sums deviate from 1 by {worst:e}"
            )));
        }
        Ok(())
    }

    /// The kernel of applying `other` and then `self`.
    pub fn compose(&self, other: &Kernel) -> Result<Kernel> {
        if self.axis != other.axis {
            return Err(Error::GridMismatch);
        }
        if self.is_identity() {
            return Ok(other.clone());
        }
        if other.is_identity() {
            return Ok(self.clone());
        }
        let n = self.len();
        let q = self.axis.weights();
        let mut w = vec![0.0; n * n];
        for i in 0..n {
            #[allow(clippy::needless_range_loop)]
            for l in 0..n {
                let a = self.weight(i, l) * q[l];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    w[i * n + j] += a * other.weight(l, j);
                }
            }
        }
        let width = self.width.hypot(other.width);
        Ok(Kernel { axis: self.axis.clone(), width, weights: Weights::Dense { band: n - 1, w } })
    }

    fn apply_line<T: FieldValue>(&self, values: &[T], base: usize, stride: usize, out: &mut [T]) {
        let n = self.len();
        let q = self.axis.weights();
        match &self.weights {
            Weights::Identity => {
                for i in 0..n {
                    out[base + i * stride] = values[base + i * stride];
                }
            }
            Weights::Dense { band, w } => {
                for i in 0..n {
                    let lo = i.saturating_sub(*band);
                    let hi = (i + band).min(n - 1);
                    let row = &w[i * n..(i + 1) * n];
                    let mut acc = T::zero();
                    for j in lo..=hi {
                        acc = acc + values[base + j * stride] * (row[j] * q[j]);
                    }
                    out[base + i * stride] = acc;
                }
            }
        }
    }
}

fn banded_product(k: &[f64], n: usize, band: usize, x: impl Fn(usize) -> f64, out: &mut [f64]) {
    let xs: Vec<f64> = (0..n).map(x).collect();
    for i in 0..n {
        let lo = i.saturating_sub(band);
        let hi = (i + band).min(n - 1);
        out[i] = (lo..=hi).map(|j| k[i * n + j] * xs[j]).sum();
    }
}

/// Convolves a field on a one-dimensional grid.
pub fn convolve<T: FieldValue>(kernel: &Kernel, field: &Field<T>) -> Result<Field<T>> {
    if field.grid().ndim() != 1 {
        return Err(Error::DimensionMismatch("use convolve_along on multi-axis grids".into()));
    }
    convolve_along(kernel, field, 0)
}

/// Convolves along one axis of a tensor-product grid.
pub fn convolve_along<T: FieldValue>(kernel: &Kernel, field: &Field<T>, axis: usize) -> Result<Field<T>> {
    let grid = field.grid();
    if axis >= grid.ndim() || *grid.axis(axis) != kernel.axis {
        return Err(Error::DimensionMismatch("kernel does not conform to the grid axis".into()));
    }
    let (outer, len, inner) = grid.line_layout(axis);
    let values = field.values();
    let mut out = vec![T::zero(); values.len()];
    for o in 0..outer {
        for i in 0..inner {
            kernel.apply_line(values, o * len * inner + i, inner, &mut out);
        }
    }
    Ok(Field::from_parts_unchecked(grid.clone(), out))
}
