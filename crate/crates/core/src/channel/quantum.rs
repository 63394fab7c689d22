use num_complex::Complex64;

use super::classical::distribution_entropy;
use super::report::{ErrorReport, Indicator};
use crate::error::{Error, Result};
use crate::numgrid::{convolve_along, differentiate, Domain, Grid, Kernel, RealField};
use crate::observables::{EstimatorSet, Operator};

/// Densities below this fraction of the peak carry no local values.
const DENSITY_FLOOR: f64 = 1e-14;
/// Relative current allowed where the density is below the floor.
const CURRENT_FLOOR: f64 = 1e-8;

/// Density kernels Γ and current kernels Λ, one per grid axis, plus the
/// speed scale υ that makes `|J|/υ` a density.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    gamma: Vec<Kernel>,
    lambda: Vec<Kernel>,
    upsilon: f64,
}

impl QuantumChannel {
    /// Gaussian kernels of widths `gamma` and `lambda` along every axis.
    pub fn gaussian(grid: &Grid, gamma: f64, lambda: f64, upsilon: f64) -> Result<Self> {
        let g = grid.axes().iter().map(|a| Kernel::gaussian(a, gamma)).collect::<Result<Vec<_>>>()?;
        let l = grid.axes().iter().map(|a| Kernel::gaussian(a, lambda)).collect::<Result<Vec<_>>>()?;
        QuantumChannel::from_kernels(g, l, upsilon)
    }

    pub fn ideal(grid: &Grid, upsilon: f64) -> Result<Self> {
        QuantumChannel::gaussian(grid, 0.0, 0.0, upsilon)
    }

    pub fn from_kernels(gamma: Vec<Kernel>, lambda: Vec<Kernel>, upsilon: f64) -> Result<Self> {
        if !(upsilon.is_finite() && upsilon > 0.0) {
            return Err(Error::InvalidParameter(format!("upsilon must be positive, got {upsilon}")));
        }
        if gamma.is_empty() || gamma.len() != lambda.len() {
            return Err(Error::DimensionMismatch("one density and one current kernel per axis".into()));
        }
        Ok(QuantumChannel { gamma, lambda, upsilon })
    }

    pub fn gamma(&self) -> &[Kernel] {
        &self.gamma
    }

    pub fn lambda(&self) -> &[Kernel] {
        &self.lambda
    }

    pub fn upsilon(&self) -> f64 {
        self.upsilon
    }

    /// Requires `λ² < σ² + 2γ²` on every axis, with σ the spread of `rho`
    /// along that axis. Otherwise `∫J²_out/ρ_out` diverges.
    pub fn check_validity(&self, rho: &RealField) -> Result<()> {
        let grid = rho.grid();
        let total = rho.integrate();
        for axis in 0..grid.ndim() {
            let mean = rho.map_with_point(|p, v| p[axis] * v).integrate() / total;
            let var = rho.map_with_point(|p, v| (p[axis] - mean).powi(2) * v).integrate() / total;
            let (g, l) = (self.gamma[axis].width(), self.lambda[axis].width());
            if l * l >= var + 2.0 * g * g {
                return Err(Error::InvalidChannel(format!(
                    "axis {axis}: lambda^2 = {} is not below sigma^2 + 2 gamma^2 = {}",
                    l * l,
                    var + 2.0 * g * g
                )));
            }
        }
        Ok(())
    }
}

/// `ρ_out = Γ∗ρ_in` and `J_out = Λ∗J_in` (diagonal Λ, separable along axes).
pub fn quantum_transform(
    rho: &RealField,
    current: &[RealField],
    channel: &QuantumChannel,
) -> Result<(RealField, Vec<RealField>)> {
    let ndim = rho.grid().ndim();
    if channel.gamma.len() != ndim || current.len() != ndim {
        return Err(Error::DimensionMismatch(format!("{ndim}-axis grid needs {ndim} kernels and currents")));
    }
    let total = rho.integrate();
    if (total - 1.0).abs() > 1e-6 {
        return Err(Error::NotNormalized(total));
    }
    for j in current {
        rho.check_same_grid(j)?;
    }
    channel.check_validity(rho)?;
    let along = |f: &RealField, kernels: &[Kernel]| -> Result<RealField> {
        let mut out = f.clone();
        for (axis, k) in kernels.iter().enumerate() {
            out = convolve_along(k, &out, axis)?;
        }
        Ok(out)
    };
    let rho_out = along(rho, &channel.gamma)?;
    let j_out = current.iter().map(|j| along(j, &channel.lambda)).collect::<Result<Vec<_>>>()?;
    Ok((rho_out, j_out))
}

/// Estimators of line observables from a density and current alone.
///
/// Each operator is replaced by its local value `A_loc = ψ*Âψ/ρ` for the
/// wave function `√ρ·e^{iS}` with `J = (ħ/m)ρS′`:
/// `p_loc = −iħρ′/2ρ + mJ/ρ` and
/// `ψ*ψ″ = √ρ(√ρ)″ + (im/ħ)J′ − (m²/ħ²)J²/ρ`.
/// Then `⟨A⟩ = ∫ρA_loc` and `C(A,B) = ∫ρ·conj(A_loc − ⟨A⟩)(B_loc − ⟨B⟩)`.
pub fn estimators_from_density_current(
    rho: &RealField,
    current: &RealField,
    ops: &[Operator],
    mass: f64,
    hbar: f64,
) -> Result<EstimatorSet> {
    let grid = rho.grid().clone();
    if !matches!(grid.domain(), Domain::Segment { .. }) {
        return Err(Error::DomainMismatch("density estimators need a line grid".into()));
    }
    rho.check_same_grid(current)?;
    if !(mass > 0.0 && hbar > 0.0) {
        return Err(Error::InvalidParameter("mass and hbar must be positive".into()));
    }
    let i = Complex64::new(0.0, 1.0);
    let r = rho.values();
    let j = current.values();
    let floor = DENSITY_FLOOR * rho.max_value();
    let j_floor = CURRENT_FLOOR * j.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    for (idx, (&rv, &jv)) in r.iter().zip(j).enumerate() {
        if rv < floor && jv.abs() > j_floor && jv != 0.0 {
            return Err(Error::VanishingDensity(idx));
        }
    }
    let d_rho = differentiate(rho, 0, 1)?;
    let sqrt_rho = rho.map(|v| v.max(0.0).sqrt());
    let d2_sqrt = differentiate(&sqrt_rho, 0, 2)?;
    let d_j = differentiate(current, 0, 1)?;

    // ψ*ψ″/ρ at node n.
    let second = |n: usize| -> Complex64 {
        let rv = r[n];
        Complex64::new(d2_sqrt.values()[n] / sqrt_rho.values()[n] - (mass * j[n] / (hbar * rv)).powi(2), 0.0)
            + i * (mass / hbar) * d_j.values()[n] / rv
    };
    let local = |op: &Operator, n: usize, x: f64| -> Result<Complex64> {
        let rv = r[n];
        let p_loc = -i * hbar * d_rho.values()[n] / (2.0 * rv) + mass * j[n] / rv;
        Ok(match *op {
            Operator::X => Complex64::new(x, 0.0),
            Operator::X2 => Complex64::new(x * x, 0.0),
            Operator::P => p_loc,
            Operator::P2 => -hbar * hbar * second(n),
            Operator::HOsc { mass: m, omega } => {
                second(n) * (-hbar * hbar / (2.0 * m)) + 0.5 * m * omega * omega * x * x
            }
            other => {
                return Err(Error::Unsupported(format!("operator {other} has no density-current form")));
            }
        })
    };

    let weights = grid.weights();
    let active: Vec<usize> = (0..r.len()).filter(|&n| r[n] >= floor && r[n] > 0.0).collect();
    let mut locals = Vec::with_capacity(ops.len());
    for op in ops {
        let vals = active
            .iter()
            .map(|&n| local(op, n, grid.point(n)[0]))
            .collect::<Result<Vec<_>>>()?;
        locals.push(vals);
    }
    let w: Vec<f64> = active.iter().map(|&n| r[n] * weights[n]).collect();
    let means: Vec<Complex64> = locals.iter().map(|l| l.iter().zip(&w).map(|(a, &q)| a * q).sum()).collect();
    let correlations = (0..ops.len())
        .map(|a| {
            (0..ops.len())
                .map(|b| {
                    locals[a]
                        .iter()
                        .zip(&locals[b])
                        .zip(&w)
                        .map(|((la, lb), &q)| (la - means[a]).conj() * (lb - means[b]) * q)
                        .sum()
                })
                .collect()
        })
        .collect();
    let labels = ops.iter().map(|op| op.name().to_string()).collect();
    EstimatorSet::from_parts(labels, means, correlations)
}

/// Indicators between input and output estimators, and the entropy changes
/// of the density and of `|J|/υ`.
#[allow(clippy::too_many_arguments)]
pub fn quantum_error_report(
    in_set: &EstimatorSet,
    out_set: &EstimatorSet,
    rho_in: &RealField,
    rho_out: &RealField,
    j_in: &RealField,
    j_out: &RealField,
    upsilon: f64,
) -> Result<ErrorReport> {
    if !(upsilon.is_finite() && upsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("upsilon must be positive, got {upsilon}")));
    }
    if in_set.labels != out_set.labels {
        return Err(Error::LabelMismatch(format!("{:?} vs {:?}", in_set.labels, out_set.labels)));
    }
    let mut report = ErrorReport::default();
    for (a, label) in in_set.labels.iter().enumerate() {
        report.means.push(Indicator {
            label: label.clone(),
            value: (out_set.means[a] - in_set.means[a]).norm(),
        });
        report.deltas.push(Indicator {
            label: label.clone(),
            value: (out_set.deltas[a] - in_set.deltas[a]).abs(),
        });
        for (b, other) in in_set.labels.iter().enumerate().skip(a + 1) {
            report.correlations.push(Indicator {
                label: format!("{label},{other}"),
                value: (out_set.correlations[a][b] - in_set.correlations[a][b]).norm(),
            });
        }
    }
    report.entropy_density = Some(distribution_entropy(rho_out)? - distribution_entropy(rho_in)?);
    if j_in.values().iter().any(|&v| v != 0.0) {
        let scaled = |j: &RealField| j.map(|v| v.abs() / upsilon);
        report.entropy_current = Some(distribution_entropy(&scaled(j_out))? - distribution_entropy(&scaled(j_in))?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::numgrid::Grid;

    fn packet(grid: &std::sync::Arc<Grid>, var: f64, k: f64) -> (RealField, RealField) {
        let rho = RealField::from_fn(grid.clone(), |p| (-p[0] * p[0] / (2.0 * var)).exp() / (2.0 * PI * var).sqrt())
            .unwrap();
        let j = rho.scale(k);
        (rho, j)
    }

    #[test]
    fn ideal_channel_is_identity() {
        let grid = Grid::segment(-8.0, 8.0, 512).unwrap();
        let (rho, j) = packet(&grid, 1.0, 1.0);
        let ch = QuantumChannel::ideal(&grid, 1.0).unwrap();
        let (ro, jo) = quantum_transform(&rho, std::slice::from_ref(&j), &ch).unwrap();
        assert_eq!(ro, rho);
        assert_eq!(jo[0], j);
    }

    #[test]
    fn blurred_variances() {
        let grid = Grid::segment(-8.0, 8.0, 2048).unwrap();
        let (rho, j) = packet(&grid, 1.0, 1.0);
        let ch = QuantumChannel::gaussian(&grid, 0.5, 0.5, 1.0).unwrap();
        let (ro, jo) = quantum_transform(&rho, std::slice::from_ref(&j), &ch).unwrap();
        let (expect, _) = packet(&grid, 1.25, 1.0);
        for (a, b) in ro.values().iter().zip(expect.values()) {
            assert!((a - b).abs() < 1e-4);
        }
        for (a, b) in jo[0].values().iter().zip(expect.values()) {
            assert!((a - b).abs() < 1e-4);
        }
        assert!((ro.integrate() - 1.0).abs() < 1e-8);
        assert!((jo[0].integrate() - j.integrate()).abs() < 1e-8);
    }

    #[test]
    fn invalid_channel_rejected() {
        let grid = Grid::segment(-8.0, 8.0, 512).unwrap();
        let (rho, j) = packet(&grid, 0.25, 1.0);
        let ch = QuantumChannel::gaussian(&grid, 0.0, 1.0, 1.0).unwrap();
        let err = quantum_transform(&rho, &[j], &ch).unwrap_err();
        assert!(err.is_validity_violation());
    }

    #[test]
    fn density_route_matches_wave_function_route() {
        let grid = Grid::segment(-8.0, 8.0, 2048).unwrap();
        let (rho, j) = packet(&grid, 1.0, 1.0);
        let ops = [Operator::X, Operator::P, Operator::P2, Operator::HOsc { mass: 1.0, omega: 1.0 }];
        let est = estimators_from_density_current(&rho, &j, &ops, 1.0, 1.0).unwrap();
        assert!((est.delta("x").unwrap() - 1.0).abs() < 1e-8);
        assert!((est.delta("p").unwrap() - 0.5).abs() < 1e-8);
        assert!((est.mean("p").unwrap() - 1.0).norm() < 1e-8);
        assert!((est.mean("p2").unwrap() - 1.25).norm() < 1e-8);
        assert!((est.correlation("x", "p").unwrap() - Complex64::new(0.0, 0.5)).norm() < 1e-8);
    }

    #[test]
    fn current_without_density_is_rejected() {
        let grid = Grid::segment(-8.0, 8.0, 256).unwrap();
        let (rho, _) = packet(&grid, 0.25, 0.0);
        let j = RealField::from_fn(grid, |_| 0.1).unwrap();
        assert!(matches!(
            estimators_from_density_current(&rho, &j, &[Operator::P], 1.0, 1.0),
            Err(Error::VanishingDensity(_))
        ));
    }
}
