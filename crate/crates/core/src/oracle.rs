//! Closed-form values for the Gaussian packet and oscillator measurement
//! examples. Nothing here touches a grid, so the numeric pipelines can be
//! checked against it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::card::{Quantity, QuantityCard};
use crate::error::{Error, Result};

/// Labels of a Gaussian channel card, in report order.
pub mod labels {
    pub const MEAN_IN_X: &str = "mean_in(x)";
    pub const MEAN_OUT_X: &str = "mean_out(x)";
    pub const MEAN_IN_P: &str = "mean_in(p)";
    pub const MEAN_OUT_P: &str = "mean_out(p)";
    pub const C_IN_XP: &str = "C_in(x,p)";
    pub const C_OUT_XP: &str = "C_out(x,p)";
    pub const DELTA_IN_X: &str = "delta_in(x)";
    pub const DELTA_OUT_X: &str = "delta_out(x)";
    pub const DELTA_IN_P: &str = "delta_in(p)";
    pub const DELTA_OUT_P: &str = "delta_out(p)";
    pub const EPS_MEAN_X: &str = "eps(mean x)";
    pub const EPS_MEAN_P: &str = "eps(mean p)";
    pub const EPS_C_XP: &str = "eps(C(x,p))";
    pub const EPS_DELTA_X: &str = "eps(delta x)";
    pub const EPS_DELTA_P: &str = "eps(delta p)";
    pub const EPS_S_RHO: &str = "eps(S(rho))";
    pub const EPS_S_J: &str = "eps(S(J))";
    pub const MU: &str = "mu";

    pub const MEAN_IN_H: &str = "mean_in(H)";
    pub const MEAN_OUT_H: &str = "mean_out(H)";
    pub const DELTA_IN_H: &str = "delta_in(H)";
    pub const DELTA_OUT_H: &str = "delta_out(H)";
    pub const EPS_MEAN_H: &str = "eps(mean H)";
    pub const EPS_DELTA_H: &str = "eps(delta H)";
}

/// Labels that are reported but never compared.
pub const REPORT_ONLY: &[&str] = &[labels::MU];

/// Parameters of a Gaussian packet seen through Gaussian kernels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketParams {
    pub x0: f64,
    pub sigma: f64,
    pub k: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub hbar: f64,
    pub mass: f64,
}

impl PacketParams {
    /// `λ² < σ² + 2γ²`, needed for a finite output momentum spread.
    pub fn is_valid_channel(&self) -> bool {
        self.lambda * self.lambda < self.sigma * self.sigma + 2.0 * self.gamma * self.gamma
    }
}

/// Output momentum spread of a Gaussian packet.
pub fn delta_out_p(p: &PacketParams) -> f64 {
    let (s2, g2, l2, k2) = (p.sigma * p.sigma, p.gamma * p.gamma, p.lambda * p.lambda, p.k * p.k);
    let inner = k2 * (s2 + g2) / ((s2 + l2) * (s2 + 2.0 * g2 - l2)).sqrt() - k2 + 1.0 / (4.0 * (s2 + g2));
    p.hbar * inner.max(0.0).sqrt()
}

pub fn gaussian_packet_oracle(p: &PacketParams) -> Result<QuantityCard> {
    use labels::*;
    let finite = [p.x0, p.sigma, p.k, p.gamma, p.lambda, p.hbar, p.mass].iter().all(|v| v.is_finite());
    if !finite || p.sigma <= 0.0 || p.gamma < 0.0 || p.lambda < 0.0 || p.hbar <= 0.0 || p.mass <= 0.0 {
        return Err(Error::InvalidParameter(format!("bad packet parameters {p:?}")));
    }
    if !p.is_valid_channel() {
        return Err(Error::InvalidChannel(format!(
            "lambda^2 = {} must be below sigma^2 + 2 gamma^2 = {}",
            p.lambda * p.lambda,
            p.sigma * p.sigma + 2.0 * p.gamma * p.gamma
        )));
    }
    let s2 = p.sigma * p.sigma;
    let c = Complex64::new(0.0, p.hbar / 2.0);
    let dx_out = (s2 + p.gamma * p.gamma).sqrt();
    let dp_in = p.hbar / (2.0 * p.sigma);
    let dp_out = delta_out_p(p);
    let eps_dx = dx_out - p.sigma;
    let eps_dp = (dp_out - dp_in).abs();

    let mut card = QuantityCard::new();
    let src = "gaussian packet through gaussian kernels";
    for (label, v) in [
        (MEAN_IN_X, p.x0),
        (MEAN_OUT_X, p.x0),
        (MEAN_IN_P, p.hbar * p.k),
        (MEAN_OUT_P, p.hbar * p.k),
    ] {
        card.push(Quantity::real(label, v, src));
    }
    card.push(Quantity::complex(C_IN_XP, c, src));
    card.push(Quantity::complex(C_OUT_XP, c, src));
    for (label, v) in [
        (DELTA_IN_X, p.sigma),
        (DELTA_OUT_X, dx_out),
        (DELTA_IN_P, dp_in),
        (DELTA_OUT_P, dp_out),
        (EPS_MEAN_X, 0.0),
        (EPS_MEAN_P, 0.0),
        (EPS_C_XP, 0.0),
        (EPS_DELTA_X, eps_dx),
        (EPS_DELTA_P, eps_dp),
        (EPS_S_RHO, 0.5 * (1.0 + p.gamma * p.gamma / s2).ln()),
        (MU, eps_dx * eps_dp / p.hbar),
    ] {
        card.push(Quantity::real(label, v, src));
    }
    // A packet at rest carries no current, so its current entropy is undefined.
    if p.k != 0.0 {
        card.push(Quantity::real(EPS_S_J, 0.5 * (1.0 + p.lambda * p.lambda / s2).ln(), src));
    }
    Ok(card)
}

/// Oscillator ground state blurred by a density kernel of width `gamma`.
pub fn oscillator_oracle(mass: f64, omega: f64, gamma: f64, hbar: f64) -> Result<QuantityCard> {
    use labels::*;
    if !(mass > 0.0 && omega > 0.0 && hbar > 0.0 && gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter("oscillator needs m, omega, hbar > 0 and gamma >= 0".into()));
    }
    let u = hbar + 2.0 * mass * omega * gamma * gamma;
    let mean_in = 0.5 * hbar * omega;
    let mean_out = omega * (hbar * hbar + u * u) / (4.0 * u);
    let delta_out = 2f64.sqrt() * mass * omega * omega * gamma * gamma * (hbar + mass * omega * gamma * gamma) / u;
    let src = "oscillator ground state through a gaussian kernel";
    let mut card = QuantityCard::new();
    for (label, v) in [
        (MEAN_IN_H, mean_in),
        (DELTA_IN_H, 0.0),
        (MEAN_OUT_H, mean_out),
        (DELTA_OUT_H, delta_out),
        (EPS_MEAN_H, (mean_out - mean_in).abs()),
        (EPS_DELTA_H, delta_out),
    ] {
        card.push(Quantity::real(label, v, src));
    }
    Ok(card)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub label: String,
    pub oracle: Complex64,
    pub numeric: Complex64,
    /// `|numeric − oracle| / max(|oracle|, 1)`.
    pub error: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub rel_tol: f64,
    pub rows: Vec<CheckRow>,
    pub pass: bool,
}

/// Compares every oracle entry with the numeric entry of the same label.
pub fn crosscheck(oracle: &QuantityCard, numeric: &QuantityCard, rel_tol: f64) -> Result<CheckReport> {
    let mut rows = Vec::new();
    for q in &oracle.entries {
        if REPORT_ONLY.contains(&q.label.as_str()) {
            continue;
        }
        let num = numeric.value(&q.label).ok_or_else(|| Error::LabelMismatch(q.label.clone()))?;
        let reference = q.value();
        let error = (num - reference).norm() / reference.norm().max(1.0);
        rows.push(CheckRow { label: q.label.clone(), oracle: reference, numeric: num, error, pass: error <= rel_tol });
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(CheckReport { rel_tol, rows, pass })
}
