use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numgrid::{differentiate, ComplexField, Domain};

/// A grid observable.
///
/// Text forms: `Lz`, `phi`, `N`, `phase`, `x`, `p`, `x2`, `p2`,
/// `H_qtp[:I=..,omega=..]`, `H_osc[:m=..,omega=..]`, `H_rotor[:I=..]`,
/// `px`, `py`. Omitted parameters default to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Operator {
    /// `−iħ ∂/∂φ`.
    Lz,
    /// Multiplication by the azimuthal angle.
    Phi,
    /// `i ∂/∂φ`.
    Number,
    /// Multiplication by the phase angle.
    Phase,
    X,
    /// `−iħ ∂/∂x`.
    P,
    X2,
    /// `−ħ² ∂²/∂x²`.
    P2,
    /// `L_z²/2I + Iω²φ²/2`.
    HQtp { inertia: f64, omega: f64 },
    /// `p²/2m + mω²x²/2`.
    HOsc { mass: f64, omega: f64 },
    /// `L_z²/2I`.
    HRotor { inertia: f64 },
    /// `−iħ(∂₁ − ∂₂)/√2` in the rotated well frame.
    Px,
    /// `−iħ(∂₁ + ∂₂)/√2` in the rotated well frame.
    Py,
}

impl Operator {
    /// Short name used in labels.
    pub fn name(&self) -> &'static str {
        match self {
            Operator::Lz => "Lz",
            Operator::Phi => "phi",
            Operator::Number => "N",
            Operator::Phase => "phase",
            Operator::X => "x",
            Operator::P => "p",
            Operator::X2 => "x2",
            Operator::P2 => "p2",
            Operator::HQtp { .. } => "H_qtp",
            Operator::HOsc { .. } => "H_osc",
            Operator::HRotor { .. } => "H_rotor",
            Operator::Px => "px",
            Operator::Py => "py",
        }
    }

    /// True for pure multiplication by a real function.
    pub fn is_multiplicative(&self) -> bool {
        matches!(self, Operator::Phi | Operator::Phase | Operator::X | Operator::X2)
    }

    /// Highest derivative order in the operator.
    pub fn derivative_order(&self) -> usize {
        match self {
            Operator::Phi | Operator::Phase | Operator::X | Operator::X2 => 0,
            Operator::Lz | Operator::Number | Operator::P | Operator::Px | Operator::Py => 1,
            Operator::P2 | Operator::HQtp { .. } | Operator::HOsc { .. } | Operator::HRotor { .. } => 2,
        }
    }

    /// Axis of `domain` the operator acts along, or an error if it does not
    /// belong there.
    pub fn axis_for(&self, domain: Domain) -> Result<usize> {
        let ok = match (self, domain) {
            (Operator::Lz | Operator::Phi | Operator::HRotor { .. }, Domain::Circle | Domain::Segment { .. }) => Some(0),
            (Operator::Lz | Operator::Phi | Operator::HRotor { .. }, Domain::Sphere) => Some(1),
            (Operator::Number | Operator::Phase, Domain::Circle) => Some(0),
            (Operator::HQtp { .. }, Domain::Segment { .. }) => Some(0),
            (Operator::X | Operator::P | Operator::X2 | Operator::P2 | Operator::HOsc { .. }, Domain::Segment { .. }) => {
                Some(0)
            }
            (Operator::Px | Operator::Py, Domain::Plane { .. }) => Some(0),
            _ => None,
        };
        ok.ok_or_else(|| Error::DomainMismatch(format!("operator {self} does not act on {domain:?}")))
    }

    /// Applies the operator to `psi`.
    pub fn apply(&self, psi: &ComplexField, hbar: f64) -> Result<ComplexField> {
        let grid = psi.grid().clone();
        let axis = self.axis_for(grid.domain())?;
        let i = Complex64::new(0.0, 1.0);
        let coord = |p: [f64; 2]| p[axis];
        match *self {
            Operator::Phi | Operator::Phase | Operator::X => Ok(psi.map_with_point(|p, v| v * coord(p))),
            Operator::X2 => Ok(psi.map_with_point(|p, v| v * (coord(p) * coord(p)))),
            Operator::Lz | Operator::P => Ok(differentiate(psi, axis, 1)?.scale_complex(-i * hbar)),
            Operator::Number => Ok(differentiate(psi, axis, 1)?.scale_complex(i)),
            Operator::P2 => Ok(differentiate(psi, axis, 2)?.scale(-hbar * hbar)),
            Operator::HRotor { inertia } => Ok(differentiate(psi, axis, 2)?.scale(-hbar * hbar / (2.0 * inertia))),
            Operator::HQtp { inertia: m, omega } | Operator::HOsc { mass: m, omega } => {
                let c = -hbar * hbar / (2.0 * m);
                let k = 0.5 * m * omega * omega;
                let potential = psi.map_with_point(|p, v| v * (k * coord(p) * coord(p)));
                differentiate(psi, axis, 2)?.zip_with(&potential, |t, v| t * c + v)
            }
            Operator::Px | Operator::Py => {
                let d1 = differentiate(psi, 0, 1)?;
                let d2 = differentiate(psi, 1, 1)?;
                let sign = if matches!(self, Operator::Px) { -1.0 } else { 1.0 };
                let c = -i * hbar / 2f64.sqrt();
                d1.zip_with(&d2, |a, b| (a + b * sign) * c)
            }
        }
    }

    pub fn check_params(&self) -> Result<()> {
        let vals: &[f64] = match self {
            Operator::HQtp { inertia, omega } => &[*inertia, *omega],
            Operator::HOsc { mass, omega } => &[*mass, *omega],
            Operator::HRotor { inertia } => &[*inertia],
            _ => &[],
        };
        if vals.iter().all(|v| v.is_finite() && *v > 0.0) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("operator {self} needs positive parameters")))
        }
    }
}

/// Applies `ops[0]·ops[1]·…·ops[n−1]` to `psi`, rightmost first.
pub fn apply_chain(ops: &[Operator], psi: &ComplexField, hbar: f64) -> Result<ComplexField> {
    let mut out = psi.clone();
    for op in ops.iter().rev() {
        out = op.apply(&out, hbar)?;
    }
    Ok(out)
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operator::HQtp { inertia, omega } => write!(f, "H_qtp:I={inertia},omega={omega}"),
            Operator::HOsc { mass, omega } => write!(f, "H_osc:m={mass},omega={omega}"),
            Operator::HRotor { inertia } => write!(f, "H_rotor:I={inertia}"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for Operator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Operator> {
        let (name, rest) = s.trim().split_once(':').unwrap_or((s.trim(), ""));
        let mut params: Vec<(&str, f64)> = Vec::new();
        for item in rest.split(',').filter(|t| !t.trim().is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("operator parameter '{item}' is not key=value")))?;
            let v: f64 = v.trim().parse().map_err(|_| Error::Parse(format!("bad number '{v}' in '{s}'")))?;
            params.push((k.trim(), v));
        }
        let mut take = |key: &str| -> f64 {
            match params.iter().position(|(k, _)| *k == key) {
                Some(i) => params.remove(i).1,
                None => 1.0,
            }
        };
        let op = match name {
            "Lz" => Operator::Lz,
            "phi" => Operator::Phi,
            "N" => Operator::Number,
            "phase" => Operator::Phase,
            "x" => Operator::X,
            "p" => Operator::P,
            "x2" => Operator::X2,
            "p2" => Operator::P2,
            "H_qtp" => Operator::HQtp { inertia: take("I"), omega: take("omega") },
            "H_osc" => Operator::HOsc { mass: take("m"), omega: take("omega") },
            "H_rotor" => Operator::HRotor { inertia: take("I") },
            "px" => Operator::Px,
            "py" => Operator::Py,
            other => return Err(Error::Parse(format!("unknown operator '{other}'"))),
        };
        if let Some((k, _)) = params.first() {
            return Err(Error::Parse(format!("operator {name}: unknown parameter '{k}'")));
        }
        op.check_params()?;
        Ok(op)
    }
}
