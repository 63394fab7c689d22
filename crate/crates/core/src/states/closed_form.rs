use std::f64::consts::PI;

use num_complex::Complex64;

use super::spec::StateSpec;
use crate::card::{Quantity, QuantityCard};
use crate::error::{Error, Result};

/// Every closed-form estimator value known for a catalog state.
///
/// Labels follow `mean(A)`, `delta(A)`, `C(A,B)`, `|C(A,B)|` and
/// `gap(A,B)` with the operator text names.
pub fn closed_form_card(spec: &StateSpec, hbar: f64) -> Result<QuantityCard> {
    spec.validate()?;
    let mut card = QuantityCard::new();
    let uniform_phi_spread = PI / 3f64.sqrt();
    match spec {
        StateSpec::Azimuthal { m } => {
            let src = "azimuthal eigenstate";
            card.push(Quantity::real("mean(Lz)", hbar * *m as f64, src));
            card.push(Quantity::real("delta(Lz)", 0.0, src));
            card.push(Quantity::real("delta(phi)", uniform_phi_spread, src));
            card.push(Quantity::complex("gap(Lz,phi)", Complex64::new(0.0, hbar), "azimuthal boundary term"));
        }
        StateSpec::Phase { n } => {
            let src = "phase eigenstate";
            card.push(Quantity::real("mean(N)", *n as f64, src));
            card.push(Quantity::real("delta(N)", 0.0, src));
            card.push(Quantity::real("delta(phase)", uniform_phi_spread, src));
            card.push(Quantity::complex("gap(N,phase)", Complex64::new(0.0, -1.0), "phase boundary term"));
        }
        StateSpec::Qtp { n, inertia, omega } => {
            let src = "torsion pendulum eigenstate";
            let level = *n as f64 + 0.5;
            card.push(Quantity::real("delta(Lz)", (hbar * inertia * omega * level).sqrt(), src));
            card.push(Quantity::real("delta(phi)", (hbar / (inertia * omega) * level).sqrt(), src));
            card.push(Quantity::real("mean(H_qtp)", hbar * omega * level, src));
            card.push(Quantity::real("delta(H_qtp)", 0.0, src));
            card.push(Quantity::complex("gap(Lz,phi)", Complex64::new(0.0, 0.0), "decaying pendulum state"));
        }
        StateSpec::Rotor { l, c } => {
            let src = "degenerate rotor weights";
            let ms = (-(*l as i64)..=*l as i64).map(|m| m as f64);
            let (m1, m2) = c.iter().zip(ms).fold((0.0, 0.0), |(a, b), (z, m)| {
                let w = z.norm_sqr();
                (a + w * m, b + w * m * m)
            });
            card.push(Quantity::real("mean(Lz)", hbar * m1, src));
            card.push(Quantity::real("delta(Lz)", hbar * (m2 - m1 * m1).max(0.0).sqrt(), src));
        }
        StateSpec::Gaussian { x0, sigma, k } => {
            let src = "gaussian packet";
            card.push(Quantity::real("mean(x)", *x0, src));
            card.push(Quantity::real("mean(p)", hbar * k, src));
            card.push(Quantity::real("delta(x)", *sigma, src));
            card.push(Quantity::real("delta(p)", hbar / (2.0 * sigma), src));
            card.push(Quantity::complex("C(x,p)", Complex64::new(0.0, hbar / 2.0), src));
        }
        StateSpec::Box2d { a, b } => {
            let src = "rectangular well ground state";
            let scale = hbar * PI / (a * b);
            let dp = scale * ((a * a + b * b) / 2.0).sqrt();
            card.push(Quantity::real("delta(px)", dp, src));
            card.push(Quantity::real("delta(py)", dp, src));
            card.push(Quantity::real("|C(px,py)|", scale * scale * (b * b - a * a) / 2.0, src));
        }
        StateSpec::Raw { .. } => {
            return Err(Error::Unsupported("raw states have no closed forms".into()));
        }
    }
    Ok(card)
}
