use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::quantum::{estimators_from_density_current, quantum_error_report, quantum_transform, QuantumChannel};
use super::report::ErrorReport;
use crate::card::{Quantity, QuantityCard};
use crate::error::{Error, Result};
use crate::numgrid::{Grid, RealField};
use crate::observables::{EstimatorSet, Operator};
use crate::oracle::{labels, PacketParams};
use crate::states::{density_and_current, sample, StateSpec};

const SRC: &str = "grid pipeline";

/// Everything a numeric channel run produces.
#[derive(Debug, Clone, Serialize)]
pub struct ChannelRun {
    #[serde(skip)]
    pub grid: Arc<Grid>,
    #[serde(skip)]
    pub rho_in: RealField,
    #[serde(skip)]
    pub j_in: RealField,
    #[serde(skip)]
    pub rho_out: RealField,
    #[serde(skip)]
    pub j_out: RealField,
    pub in_set: EstimatorSet,
    pub out_set: EstimatorSet,
    pub report: ErrorReport,
    pub card: QuantityCard,
}

/// Line grid `x0 ± 8·max(σ, γ, λ)`.
pub fn packet_grid(x0: f64, sigma: f64, gamma: f64, lambda: f64, nodes: usize) -> Result<Arc<Grid>> {
    let s = sigma.max(gamma).max(lambda);
    let half = crate::states::LINE_HALF_WIDTH * s;
    Grid::segment(x0 - half, x0 + half, nodes)
}

#[allow(clippy::too_many_arguments)]
fn run(
    spec: &StateSpec,
    grid: &Arc<Grid>,
    ops: &[Operator],
    gamma: f64,
    lambda: f64,
    upsilon: f64,
    mass: f64,
    hbar: f64,
) -> Result<(RealField, RealField, RealField, RealField, EstimatorSet, EstimatorSet, ErrorReport)> {
    let psi = sample(spec, grid, hbar)?;
    let (rho_in, mut j_in) = density_and_current(&psi, mass, hbar)?;
    let j_in = j_in.remove(0);
    let channel = QuantumChannel::gaussian(grid, gamma, lambda, upsilon)?;
    let (rho_out, mut j_out) = quantum_transform(&rho_in, std::slice::from_ref(&j_in), &channel)?;
    let j_out = j_out.remove(0);
    let in_set = estimators_from_density_current(&rho_in, &j_in, ops, mass, hbar)?;
    let out_set = estimators_from_density_current(&rho_out, &j_out, ops, mass, hbar)?;
    let report = quantum_error_report(&in_set, &out_set, &rho_in, &rho_out, &j_in, &j_out, upsilon)?;
    Ok((rho_in, j_in, rho_out, j_out, in_set, out_set, report))
}

/// Gaussian packet measured through Gaussian kernels, observables `x` and `p`.
/// `upsilon` defaults to `ħk/m`, which makes `J_in/υ = ρ_in`.
pub fn gaussian_packet_pipeline(p: &PacketParams, nodes: usize, upsilon: Option<f64>) -> Result<ChannelRun> {
    if !p.is_valid_channel() {
        return Err(Error::InvalidChannel(format!(
            "lambda^2 = {} must be below sigma^2 + 2 gamma^2 = {}",
            p.lambda * p.lambda,
            p.sigma * p.sigma + 2.0 * p.gamma * p.gamma
        )));
    }
    let upsilon = match upsilon {
        Some(u) => u,
        None if p.k != 0.0 => (p.hbar * p.k / p.mass).abs(),
        None => 1.0,
    };
    let grid = packet_grid(p.x0, p.sigma, p.gamma, p.lambda, nodes)?;
    let spec = StateSpec::Gaussian { x0: p.x0, sigma: p.sigma, k: p.k };
    let ops = [Operator::X, Operator::P];
    let (rho_in, j_in, rho_out, j_out, in_set, out_set, report) =
        run(&spec, &grid, &ops, p.gamma, p.lambda, upsilon, p.mass, p.hbar)?;

    let mut card = QuantityCard::new();
    let re = |z: Complex64| z.re;
    use labels::*;
    card.push(Quantity::real(MEAN_IN_X, re(in_set.mean("x")?), SRC));
    card.push(Quantity::real(MEAN_OUT_X, re(out_set.mean("x")?), SRC));
    card.push(Quantity::real(MEAN_IN_P, re(in_set.mean("p")?), SRC));
    card.push(Quantity::real(MEAN_OUT_P, re(out_set.mean("p")?), SRC));
    card.push(Quantity::complex(C_IN_XP, in_set.correlation("x", "p")?, SRC));
    card.push(Quantity::complex(C_OUT_XP, out_set.correlation("x", "p")?, SRC));
    card.push(Quantity::real(DELTA_IN_X, in_set.delta("x")?, SRC));
    card.push(Quantity::real(DELTA_OUT_X, out_set.delta("x")?, SRC));
    card.push(Quantity::real(DELTA_IN_P, in_set.delta("p")?, SRC));
    card.push(Quantity::real(DELTA_OUT_P, out_set.delta("p")?, SRC));
    let get = |label: &str| report.get(label).unwrap_or(0.0);
    card.push(Quantity::real(EPS_MEAN_X, report.means[0].value, SRC));
    card.push(Quantity::real(EPS_MEAN_P, report.means[1].value, SRC));
    card.push(Quantity::real(EPS_C_XP, get("x,p"), SRC));
    card.push(Quantity::real(EPS_DELTA_X, report.deltas[0].value, SRC));
    card.push(Quantity::real(EPS_DELTA_P, report.deltas[1].value, SRC));
    if let Some(s) = report.entropy_density {
        card.push(Quantity::real(EPS_S_RHO, s, SRC));
    }
    if let Some(s) = report.entropy_current {
        card.push(Quantity::real(EPS_S_J, s, SRC));
    }
    card.push(Quantity::real(MU, report.deltas[0].value * report.deltas[1].value / p.hbar, SRC));
    Ok(ChannelRun { grid, rho_in, j_in, rho_out, j_out, in_set, out_set, report, card })
}

/// Oscillator ground state measured through kernels of width `gamma` for both
/// density and current, observable `H`.
pub fn oscillator_pipeline(mass: f64, omega: f64, gamma: f64, hbar: f64, nodes: usize) -> Result<ChannelRun> {
    if !(mass > 0.0 && omega > 0.0 && hbar > 0.0) {
        return Err(Error::InvalidParameter("oscillator needs m, omega, hbar > 0".into()));
    }
    let sigma = (hbar / (2.0 * mass * omega)).sqrt();
    let grid = packet_grid(0.0, sigma, gamma, gamma, nodes)?;
    let spec = StateSpec::Gaussian { x0: 0.0, sigma, k: 0.0 };
    let ops = [Operator::HOsc { mass, omega }];
    let (rho_in, j_in, rho_out, j_out, in_set, out_set, report) =
        run(&spec, &grid, &ops, gamma, gamma, 1.0, mass, hbar)?;
    use labels::*;
    let mut card = QuantityCard::new();
    card.push(Quantity::real(MEAN_IN_H, in_set.means[0].re, SRC));
    card.push(Quantity::real(DELTA_IN_H, in_set.deltas[0], SRC));
    card.push(Quantity::real(MEAN_OUT_H, out_set.means[0].re, SRC));
    card.push(Quantity::real(DELTA_OUT_H, out_set.deltas[0], SRC));
    card.push(Quantity::real(EPS_MEAN_H, report.means[0].value, SRC));
    card.push(Quantity::real(EPS_DELTA_H, report.deltas[0].value, SRC));
    Ok(ChannelRun { grid, rho_in, j_in, rho_out, j_out, in_set, out_set, report, card })
}
