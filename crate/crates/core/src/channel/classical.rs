use crate::error::{Error, Result};
use crate::numgrid::{convolve, Grid, Kernel, RealField};

use super::report::{ErrorReport, Indicator};

/// Highest central moment the classical indicators will compute.
pub const MAX_ORDER: usize = 6;
pub const DEFAULT_MAX_ORDER: usize = 4;

const NEGATIVE_TOL: f64 = 1e-12;
const NORM_TOL: f64 = 1e-8;

/// A probability density `w(a)` on a one-dimensional grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalDistribution {
    w: RealField,
}

impl ClassicalDistribution {
    pub fn new(w: RealField) -> Result<Self> {
        if w.grid().ndim() != 1 {
            return Err(Error::DimensionMismatch("classical distributions live on one axis".into()));
        }
        check_nonnegative(&w)?;
        let total = w.integrate();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(total));
        }
        Ok(ClassicalDistribution { w })
    }

    /// Divides a nonnegative field by its integral.
    pub fn normalized(w: RealField) -> Result<Self> {
        check_nonnegative(&w)?;
        let total = w.integrate();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::NotNormalized(total));
        }
        ClassicalDistribution::new(w.scale(1.0 / total))
    }

    pub fn field(&self) -> &RealField {
        &self.w
    }

    pub fn mean(&self) -> f64 {
        self.w.map_with_point(|p, v| p[0] * v).integrate()
    }

    /// `⟨(a − ⟨a⟩)ⁿ⟩`.
    pub fn central_moment(&self, n: usize) -> f64 {
        let m = self.mean();
        self.w.map_with_point(|p, v| (p[0] - m).powi(n as i32) * v).integrate()
    }

    pub fn std_dev(&self) -> f64 {
        self.central_moment(2).max(0.0).sqrt()
    }

    pub fn entropy(&self) -> f64 {
        distribution_entropy(&self.w).expect("validated nonnegative")
    }
}

fn check_nonnegative(f: &RealField) -> Result<()> {
    match f.values().iter().position(|&v| v < -NEGATIVE_TOL) {
        Some(index) => Err(Error::NegativeValue { index, value: f.values()[index] }),
        None => Ok(()),
    }
}

/// Gaussian transfer kernel of the given width on one axis of `grid`.
pub fn make_gaussian_kernel(grid: &Grid, axis: usize, width: f64) -> Result<Kernel> {
    if axis >= grid.ndim() {
        return Err(Error::DimensionMismatch(format!("grid has no axis {axis}")));
    }
    Kernel::gaussian(grid.axis(axis), width)
}

/// `w_out(a) = ∫ G(a, a′) w_in(a′) da′`.
pub fn classical_transform(w_in: &ClassicalDistribution, kernel: &Kernel) -> Result<ClassicalDistribution> {
    let out = convolve(kernel, &w_in.w)?;
    ClassicalDistribution::new(out)
}

/// `−∫ f ln f`, skipping nodes where `f = 0`.
pub fn distribution_entropy(f: &RealField) -> Result<f64> {
    check_nonnegative(f)?;
    Ok(f
        .values()
        .iter()
        .zip(f.grid().weights())
        .filter(|(&v, _)| v > 0.0)
        .map(|(&v, &q)| -v * v.ln() * q)
        .sum())
}

/// Mean, spread and higher-moment differences between two distributions.
pub fn classical_error_indicators(
    w_in: &ClassicalDistribution,
    w_out: &ClassicalDistribution,
    max_order: usize,
) -> Result<ErrorReport> {
    if max_order > MAX_ORDER {
        return Err(Error::InvalidParameter(format!("max_order {max_order} exceeds {MAX_ORDER}")));
    }
    w_in.w.check_same_grid(&w_out.w)?;
    let moments = (3..=max_order)
        .map(|n| Indicator {
            label: format!("central moment {n}"),
            value: (w_out.central_moment(n) - w_in.central_moment(n)).abs(),
        })
        .collect();
    Ok(ErrorReport {
        means: vec![Indicator { label: "a".into(), value: (w_out.mean() - w_in.mean()).abs() }],
        deltas: vec![Indicator { label: "a".into(), value: (w_out.std_dev() - w_in.std_dev()).abs() }],
        moments,
        entropy_classical: Some(w_out.entropy() - w_in.entropy()),
        ..ErrorReport::default()
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn gaussian(grid: &std::sync::Arc<Grid>, s: f64) -> ClassicalDistribution {
        ClassicalDistribution::new(
            RealField::from_fn(grid.clone(), |p| (-p[0] * p[0] / (2.0 * s * s)).exp() / (s * (2.0 * PI).sqrt()))
                .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn identity_kernel_changes_nothing() {
        let grid = Grid::segment(-8.0, 8.0, 1024).unwrap();
        let w = gaussian(&grid, 1.0);
        let out = classical_transform(&w, &make_gaussian_kernel(&grid, 0, 0.0).unwrap()).unwrap();
        assert_eq!(out, w);
        let rep = classical_error_indicators(&w, &out, DEFAULT_MAX_ORDER).unwrap();
        assert!(rep.indicators().all(|i| i.value == 0.0));
        assert_eq!(rep.entropy_classical, Some(0.0));
    }

    #[test]
    fn gaussian_blur_adds_variance() {
        let grid = Grid::segment(-16.0, 16.0, 2048).unwrap();
        let w = gaussian(&grid, 1.0);
        let out = classical_transform(&w, &make_gaussian_kernel(&grid, 0, 1.0).unwrap()).unwrap();
        assert!((out.std_dev() - 2f64.sqrt()).abs() < 1e-4);
        let rep = classical_error_indicators(&w, &out, 4).unwrap();
        assert!((rep.get("a").unwrap() - 0.0).abs() < 1e-6);
        assert!((rep.deltas[0].value - (2f64.sqrt() - 1.0)).abs() < 1e-4);
        assert!(rep.get("central moment 3").unwrap() < 1e-6);
        assert!((rep.entropy_classical.unwrap() - 0.5 * 2f64.ln()).abs() < 1e-4);
    }

    #[test]
    fn uniform_mean_preserved() {
        let grid = Grid::segment(-1.0, 2.0, 1201).unwrap();
        let w = ClassicalDistribution::normalized(
            RealField::from_fn(grid.clone(), |p| if (0.0..=1.0).contains(&p[0]) { 1.0 } else { 0.0 }).unwrap(),
        )
        .unwrap();
        let out = classical_transform(&w, &make_gaussian_kernel(&grid, 0, 0.05).unwrap()).unwrap();
        assert!((out.mean() - w.mean()).abs() < 1e-6);
        assert!((w.mean() - 0.5).abs() < 1e-3);
    }

    #[test]
    fn entropy_values() {
        let grid = Grid::segment(0.0, 2.0, 64).unwrap();
        let flat = RealField::from_fn(grid, |_| 0.5).unwrap();
        assert!((distribution_entropy(&flat).unwrap() - 2f64.ln()).abs() < 1e-12);
        let grid = Grid::segment(-10.0, 10.0, 2048).unwrap();
        let w = gaussian(&grid, 1.0);
        assert!((w.entropy() - 0.5 * (2.0 * PI * std::f64::consts::E).ln()).abs() < 1e-4);
        let neg = RealField::from_fn(grid, |p| p[0]).unwrap();
        assert!(matches!(distribution_entropy(&neg), Err(Error::NegativeValue { .. })));
    }

    #[test]
    fn bad_inputs() {
        let grid = Grid::segment(-8.0, 8.0, 256).unwrap();
        let w = gaussian(&grid, 1.0);
        assert!(classical_error_indicators(&w, &w, 7).is_err());
        assert!(ClassicalDistribution::new(w.field().scale(2.0)).is_err());
        assert!(matches!(make_gaussian_kernel(&grid, 0, 5.0), Err(Error::KernelTooWide { .. })));
    }
}
