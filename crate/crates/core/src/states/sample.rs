use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::special::{hermite_function, spherical_harmonic};
use super::spec::StateSpec;
use crate::error::{Error, Result};
use crate::numgrid::{differentiate, ComplexField, Domain, Grid, RealField};

/// Half-width of line grids in units of the largest length scale.
pub const LINE_HALF_WIDTH: f64 = 8.0;

/// Node counts used when a state picks its own grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSize {
    pub line: usize,
    /// `[θ, φ]` nodes.
    pub sphere: [usize; 2],
    /// `[x₁, y₁]` nodes.
    pub plane: [usize; 2],
}

impl Default for GridSize {
    fn default() -> Self {
        GridSize { line: 2048, sphere: [256, 512], plane: [256, 512] }
    }
}

impl GridSize {
    /// Default 2D grids with a custom line count.
    pub fn with_line(line: usize) -> GridSize {
        GridSize { line, ..GridSize::default() }
    }
}

/// The grid each catalog state is naturally sampled on.
pub fn natural_grid(spec: &StateSpec, size: &GridSize, hbar: f64) -> Result<Arc<Grid>> {
    spec.validate()?;
    match spec {
        StateSpec::Azimuthal { .. } | StateSpec::Phase { .. } => Grid::circle(size.line),
        StateSpec::Qtp { n, inertia, omega } => {
            // Hermite functions reach out to ξ ≈ √(2N+1) before decaying.
            let s = (hbar / (inertia * omega)).sqrt();
            let half = ((2 * n + 1) as f64).sqrt() + LINE_HALF_WIDTH;
            Grid::segment(-half * s, half * s, size.line)
        }
        StateSpec::Rotor { .. } => Grid::sphere(size.sphere[0], size.sphere[1]),
        StateSpec::Gaussian { x0, sigma, .. } => {
            Grid::segment(x0 - LINE_HALF_WIDTH * sigma, x0 + LINE_HALF_WIDTH * sigma, size.line)
        }
        StateSpec::Box2d { a, b } => Grid::plane([0.0, *a], [0.0, *b], size.plane[0], size.plane[1]),
        StateSpec::Raw { .. } => Err(Error::Unsupported("raw states carry no grid".into())),
    }
}

fn mismatch(spec: &StateSpec, grid: &Grid) -> Error {
    Error::DomainMismatch(format!("{} state cannot be sampled on {:?}", spec.kind(), grid.domain()))
}

/// Samples a catalog state on `grid`.
pub fn sample(spec: &StateSpec, grid: &Arc<Grid>, hbar: f64) -> Result<ComplexField> {
    spec.validate()?;
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
    }
    let g = grid.clone();
    let norm_circle = (2.0 * PI).powf(-0.5);
    match (spec, grid.domain()) {
        (StateSpec::Azimuthal { m }, Domain::Circle) => {
            let m = *m as f64;
            ComplexField::from_fn(g, |p| Complex64::from_polar(norm_circle, m * p[0]))
        }
        (StateSpec::Phase { n }, Domain::Circle) => {
            let n = *n as f64;
            ComplexField::from_fn(g, |p| Complex64::from_polar(norm_circle, -n * p[0]))
        }
        (StateSpec::Qtp { n, inertia, omega }, Domain::Segment { .. }) => {
            let scale = (inertia * omega / hbar).sqrt();
            let amp = scale.sqrt();
            let n = *n as usize;
            ComplexField::from_fn(g, |p| Complex64::new(amp * hermite_function(n, scale * p[0]), 0.0))
        }
        (StateSpec::Rotor { l, c }, Domain::Sphere) => {
            let l = *l as usize;
            ComplexField::from_fn(g, |p| {
                c.iter()
                    .enumerate()
                    .map(|(j, &cm)| cm * spherical_harmonic(l, j as i64 - l as i64, p[0], p[1]))
                    .sum()
            })
        }
        (StateSpec::Gaussian { x0, sigma, k }, Domain::Segment { .. }) => {
            let amp = (sigma * (2.0 * PI).sqrt()).powf(-0.5);
            ComplexField::from_fn(g, |p| {
                let d = p[0] - x0;
                Complex64::from_polar(amp * (-d * d / (4.0 * sigma * sigma)).exp(), k * p[0])
            })
        }
        (StateSpec::Box2d { a, b }, Domain::Plane { x, y }) => {
            let tol = 1e-12 * b;
            if x[0].abs() > tol || (x[1] - a).abs() > tol || y[0].abs() > tol || (y[1] - b).abs() > tol {
                return Err(mismatch(spec, grid));
            }
            let amp = 2.0 / (a * b).sqrt();
            ComplexField::from_fn(g, |p| {
                Complex64::new(amp * (PI * p[0] / a).sin() * (PI * p[1] / b).sin(), 0.0)
            })
        }
        (StateSpec::Raw { values }, _) => ComplexField::new(g, values.clone()),
        _ => Err(mismatch(spec, grid)),
    }
}

/// Probability density `|ψ|²` and the current `(ħ/m)·Im(ψ*∂ψ)` along each axis.
pub fn density_and_current(field: &ComplexField, mass: f64, hbar: f64) -> Result<(RealField, Vec<RealField>)> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
    }
    let rho = field.modulus_sqr();
    let mut currents = Vec::with_capacity(field.grid().ndim());
    for axis in 0..field.grid().ndim() {
        let d = differentiate(field, axis, 1)?;
        currents.push(field.zip_with(&d, |psi, dpsi| hbar / mass * (psi.conj() * dpsi).im)?);
    }
    Ok((rho, currents))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalog() -> Vec<StateSpec> {
        vec![
            StateSpec::Azimuthal { m: 2 },
            StateSpec::Phase { n: 3 },
            StateSpec::Qtp { n: 4, inertia: 2.0, omega: 0.5 },
            StateSpec::Rotor {
                l: 2,
                c: vec![
                    Complex64::new(0.5, 0.0),
                    Complex64::new(0.0, 0.5),
                    Complex64::new(0.5, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(-0.5, 0.0),
                ],
            },
            StateSpec::Gaussian { x0: 0.3, sigma: 1.2, k: 1.0 },
            StateSpec::Box2d { a: 1.0, b: 2.0 },
        ]
    }

    #[test]
    fn catalog_states_are_normalized() {
        let size = GridSize { line: 1024, sphere: [64, 128], plane: [128, 256] };
        for spec in catalog() {
            let grid = natural_grid(&spec, &size, 1.0).unwrap();
            let psi = sample(&spec, &grid, 1.0).unwrap();
            assert!((psi.norm_sqr() - 1.0).abs() < 1e-8, "{spec}: {}", psi.norm_sqr());
        }
    }

    #[test]
    fn documented_values() {
        let grid = Grid::circle(16).unwrap();
        let psi = sample(&StateSpec::Azimuthal { m: 1 }, &grid, 1.0).unwrap();
        assert!((psi.values()[0] - Complex64::new((2.0 * PI).powf(-0.5), 0.0)).norm() < 1e-15);
        let psi = sample(&StateSpec::Phase { n: 0 }, &grid, 1.0).unwrap();
        assert!(psi.values().iter().all(|z| (z.norm() - (2.0 * PI).powf(-0.5)).abs() < 1e-15));

        // QTP ground state is a Gaussian density of variance ħ/(2Iω).
        let spec = StateSpec::Qtp { n: 0, inertia: 1.0, omega: 1.0 };
        let grid = natural_grid(&spec, &GridSize::default(), 1.0).unwrap();
        let psi = sample(&spec, &grid, 1.0).unwrap();
        for (i, z) in psi.values().iter().enumerate().step_by(97) {
            let x = grid.point(i)[0];
            let expect = (-x * x / (2.0 * 0.5)).exp() / (2.0 * PI * 0.5).sqrt();
            assert!((z.norm_sqr() - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn qtp_states_orthonormal() {
        let grid = natural_grid(&StateSpec::Qtp { n: 5, inertia: 1.0, omega: 1.0 }, &GridSize::default(), 1.0).unwrap();
        let states: Vec<_> = (0..=5)
            .map(|n| sample(&StateSpec::Qtp { n, inertia: 1.0, omega: 1.0 }, &grid, 1.0).unwrap())
            .collect();
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((a.inner(b).unwrap() - expect).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn wrong_domain_rejected() {
        let circle = Grid::circle(64).unwrap();
        let seg = Grid::segment(-1.0, 1.0, 64).unwrap();
        assert!(matches!(
            sample(&StateSpec::Gaussian { x0: 0.0, sigma: 1.0, k: 0.0 }, &circle, 1.0),
            Err(Error::DomainMismatch(_))
        ));
        assert!(matches!(sample(&StateSpec::Azimuthal { m: 1 }, &seg, 1.0), Err(Error::DomainMismatch(_))));
        let plane = Grid::plane([0.0, 1.0], [0.0, 3.0], 16, 16).unwrap();
        assert!(sample(&StateSpec::Box2d { a: 1.0, b: 2.0 }, &plane, 1.0).is_err());
        let bad = StateSpec::Rotor { l: 1, c: vec![Complex64::new(1.0, 0.0); 3] };
        assert!(matches!(sample(&bad, &Grid::sphere(16, 32).unwrap(), 1.0), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn gaussian_current_is_velocity_times_density() {
        let spec = StateSpec::Gaussian { x0: 0.0, sigma: 1.0, k: 1.0 };
        let grid = natural_grid(&spec, &GridSize::default(), 1.0).unwrap();
        let psi = sample(&spec, &grid, 1.0).unwrap();
        let (rho, j) = density_and_current(&psi, 1.0, 1.0).unwrap();
        for (r, jj) in rho.values().iter().zip(j[0].values()) {
            assert!((jj - r).abs() < 1e-6);
        }
    }

    #[test]
    fn real_fields_carry_no_current_and_plane_waves_flat_density() {
        let grid = Grid::segment(0.0, 1.0, 64).unwrap();
        let psi = ComplexField::from_fn(grid, |p| Complex64::new((3.0 * p[0]).sin(), 0.0)).unwrap();
        let (_, j) = density_and_current(&psi, 2.0, 1.0).unwrap();
        assert!(j[0].values().iter().all(|&v| v == 0.0));

        let grid = Grid::circle(256).unwrap();
        let psi = sample(&StateSpec::Azimuthal { m: 2 }, &grid, 1.0).unwrap();
        let (rho, _) = density_and_current(&psi, 1.0, 1.0).unwrap();
        assert!(rho.values().iter().all(|r| (r - 0.5 / PI).abs() < 1e-14));
    }
}
