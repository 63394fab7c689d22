//! The relation hierarchy: correlation determinants, the Cauchy–Schwarz
//! formula and the Robertson–Schrödinger relation, with a verdict on which
//! of them applies to a given pair in a given state.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numgrid::{fornberg_weights, ComplexField, Domain};
use crate::observables::{condition_gap, estimator_set, EstimatorSet, Operator};

/// Default tolerance for "gap ≈ 0" and "Δ ≈ 0".
pub const DEFAULT_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelationClass {
    /// Both gaps vanish and the commutator bound is non-trivial.
    #[serde(rename = "RS_VALID")]
    RsValid,
    /// Only the Cauchy–Schwarz formula is a meaningful statement.
    #[serde(rename = "CS_ONLY")]
    CsOnly,
    /// One of the spreads vanishes, so Cauchy–Schwarz reads `0 = 0`.
    #[serde(rename = "TRIVIAL_ZERO")]
    TrivialZero,
    /// The spread product falls below half the commutator mean.
    #[serde(rename = "RS_VIOLATED")]
    RsViolated,
}

impl fmt::Display for RelationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationClass::RsValid => "RS_VALID",
            RelationClass::CsOnly => "CS_ONLY",
            RelationClass::TrivialZero => "TRIVIAL_ZERO",
            RelationClass::RsViolated => "RS_VIOLATED",
        })
    }
}

mod complex_object {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Obj {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        Obj { re: z.re, im: z.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let o = Obj::deserialize(d)?;
        Ok(Complex64::new(o.re, o.im))
    }
}

/// Verdict for one observable pair in one state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UrVerdict {
    pub pair: String,
    /// `ΔA·ΔB`.
    pub lhs: f64,
    /// `|C(A,B)|`.
    pub cs_rhs: f64,
    /// `½|⟨[A,B]⟩|`.
    pub rs_rhs: f64,
    #[serde(with = "complex_object")]
    pub gap_ab: Complex64,
    #[serde(with = "complex_object")]
    pub gap_ba: Complex64,
    pub class: RelationClass,
}

/// Classifies a pair from its estimators and the two condition gaps.
///
/// `⟨[A,B]⟩` is recovered from the same numbers:
/// `(ψ,ABψ) = (Aψ,Bψ) − gap_ab` and `(Aψ,Bψ) = C(A,B) + conj⟨A⟩⟨B⟩`.
pub fn relation_verdict(
    est: &EstimatorSet,
    a: &str,
    b: &str,
    gap_ab: Complex64,
    gap_ba: Complex64,
    tol: f64,
) -> Result<UrVerdict> {
    let c_ab = est.correlation(a, b)?;
    let c_ba = est.correlation(b, a)?;
    let (ma, mb) = (est.mean(a)?, est.mean(b)?);
    let (da, db) = (est.delta(a)?, est.delta(b)?);
    let ab = c_ab + ma.conj() * mb - gap_ab;
    let ba = c_ba + mb.conj() * ma - gap_ba;
    let lhs = da * db;
    let cs_rhs = c_ab.norm();
    let rs_rhs = 0.5 * (ab - ba).norm();
    let class = if da < tol || db < tol {
        RelationClass::TrivialZero
    } else if lhs < rs_rhs - tol {
        RelationClass::RsViolated
    } else if gap_ab.norm() < tol && gap_ba.norm() < tol && rs_rhs > tol {
        RelationClass::RsValid
    } else {
        RelationClass::CsOnly
    };
    Ok(UrVerdict { pair: format!("{a},{b}"), lhs, cs_rhs, rs_rhs, gap_ab, gap_ba, class })
}

/// Full audit of `(A, B)` in the state `psi`.
pub fn audit_pair(a: &Operator, b: &Operator, psi: &ComplexField, hbar: f64, tol: f64) -> Result<UrVerdict> {
    let est = estimator_set(&[*a, *b], psi, hbar)?;
    let gap_ab = condition_gap(a, b, psi, hbar)?;
    let gap_ba = condition_gap(b, a, psi, hbar)?;
    relation_verdict(&est, a.name(), b.name(), gap_ab, gap_ba, tol)
}

/// Determinant of the correlation matrix and whether it is `≥ −1e-8`.
pub fn correlation_determinant(est: &EstimatorSet) -> Result<(f64, bool)> {
    let r = est.len();
    if r == 0 || r > 4 {
        return Err(Error::Unsupported(format!("determinants of {r} observables")));
    }
    let defect = est.hermiticity_defect();
    let scale = est.correlations.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
    if defect > 1e-8 * scale {
        return Err(Error::NotHermitian(defect));
    }
    let c: DMatrix<Complex64> = est.correlation_matrix();
    // Symmetrize before taking the determinant so the result is real.
    let h = (&c + c.adjoint()).scale(0.5);
    let det = h.determinant().re;
    Ok((det, det >= -1e-8))
}

/// The circle-state value `ψ(2π − 0)`, extrapolated from the last nodes.
pub fn boundary_limit(psi: &ComplexField) -> Result<Complex64> {
    if psi.grid().domain() != Domain::Circle {
        return Err(Error::DomainMismatch("boundary limit needs a circle field".into()));
    }
    let n = psi.len();
    let p = 8.min(n);
    let window: Vec<f64> = (n - p..n).map(|j| j as f64).collect();
    let w = &fornberg_weights(n as f64, &window, 0)[0];
    Ok(psi.values()[n - p..].iter().zip(w).map(|(v, c)| v * *c).sum())
}

/// `(ħ/2)·|1 − 2π|ψ(2π − 0)|²|`, the lower bound on `|C(L_z, φ)|` for circle states.
pub fn boundary_rhs(psi: &ComplexField, hbar: f64) -> Result<f64> {
    let end = boundary_limit(psi)?;
    Ok(0.5 * hbar * (1.0 - 2.0 * PI * end.norm_sqr()).abs())
}

/// The energy–time pair: time is not a random variable, so `Δt ≡ 0`.
pub fn energy_time_verdict(delta_e: f64, hbar: f64) -> Result<UrVerdict> {
    if !(delta_e.is_finite() && delta_e >= 0.0) {
        return Err(Error::InvalidParameter(format!("energy spread must be finite and >= 0, got {delta_e}")));
    }
    Ok(UrVerdict {
        pair: "E,t".into(),
        lhs: 0.0,
        cs_rhs: 0.0,
        rs_rhs: 0.5 * hbar,
        gap_ab: Complex64::new(0.0, -hbar),
        gap_ba: Complex64::new(0.0, 0.0),
        class: RelationClass::TrivialZero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::commutator_mean;
    use crate::states::{natural_grid, sample, GridSize, StateSpec};

    fn state(spec: &StateSpec) -> ComplexField {
        let grid = natural_grid(spec, &GridSize::default(), 1.0).unwrap();
        sample(spec, &grid, 1.0).unwrap()
    }

    #[test]
    fn azimuthal_is_trivial_zero() {
        let v = audit_pair(&Operator::Lz, &Operator::Phi, &state(&StateSpec::Azimuthal { m: 1 }), 1.0, DEFAULT_TOL).unwrap();
        assert_eq!(v.class, RelationClass::TrivialZero);
        assert!(v.cs_rhs < 1e-8);
        assert!((v.rs_rhs - 0.5).abs() < 1e-6);
        assert!((v.gap_ab - Complex64::new(0.0, 1.0)).norm() < 1e-3);
    }

    #[test]
    fn pendulum_is_rs_valid() {
        let v = audit_pair(
            &Operator::Lz,
            &Operator::Phi,
            &state(&StateSpec::Qtp { n: 0, inertia: 1.0, omega: 1.0 }),
            1.0,
            DEFAULT_TOL,
        )
        .unwrap();
        assert_eq!(v.class, RelationClass::RsValid);
        assert!((v.lhs - 0.5).abs() < 1e-6);
        assert!((v.rs_rhs - 0.5).abs() < 1e-6);
    }

    #[test]
    fn rs_rhs_matches_direct_commutator() {
        let psi = state(&StateSpec::Qtp { n: 2, inertia: 1.5, omega: 0.8 });
        let v = audit_pair(&Operator::Lz, &Operator::Phi, &psi, 1.0, DEFAULT_TOL).unwrap();
        let direct = commutator_mean(&Operator::Lz, &Operator::Phi, &psi, 1.0).unwrap();
        assert!((v.rs_rhs - 0.5 * direct.norm()).abs() < 1e-9);
    }

    #[test]
    fn determinant_cases() {
        let psi = state(&StateSpec::Qtp { n: 1, inertia: 1.0, omega: 1.0 });
        let h = Operator::HQtp { inertia: 1.0, omega: 1.0 };
        let est = estimator_set(&[Operator::Lz], &psi, 1.0).unwrap();
        let (d, ok) = correlation_determinant(&est).unwrap();
        assert!(ok && (d - est.deltas[0].powi(2)).abs() < 1e-10);
        let est = estimator_set(&[Operator::Lz, Operator::Phi, h], &psi, 1.0).unwrap();
        let (d, ok) = correlation_determinant(&est).unwrap();
        assert!(ok, "det = {d}");
        assert!(d.abs() < 1e-6, "H row vanishes on an eigenstate, det = {d}");
    }

    #[test]
    fn boundary_values() {
        let psi = state(&StateSpec::Azimuthal { m: 2 });
        assert!(boundary_rhs(&psi, 1.0).unwrap() < 1e-10);
        let grid = crate::numgrid::Grid::circle(512).unwrap();
        // sin(φ/2)·√(1/π) vanishes at both ends of [0, 2π].
        let psi = ComplexField::from_fn(grid, |p| Complex64::new((p[0] / 2.0).sin() / PI.sqrt(), 0.0)).unwrap();
        assert!((boundary_rhs(&psi, 1.0).unwrap() - 0.5).abs() < 1e-10);
        let line = crate::numgrid::Grid::segment(0.0, 1.0, 16).unwrap();
        assert!(boundary_rhs(&ComplexField::zeros(line), 1.0).is_err());
    }

    #[test]
    fn energy_time() {
        for de in [0.0, 1.0] {
            let v = energy_time_verdict(de, 1.0).unwrap();
            assert_eq!(v.class, RelationClass::TrivialZero);
            assert_eq!(v.lhs, 0.0);
            assert_eq!(v.rs_rhs, 0.5);
            assert_eq!(v.gap_ab, Complex64::new(0.0, -1.0));
        }
        assert!(energy_time_verdict(-1.0, 1.0).is_err());
    }

    #[test]
    fn verdict_json_shape() {
        let v = energy_time_verdict(1.0, 1.0).unwrap();
        let j = serde_json::to_value(&v).unwrap();
        assert_eq!(j["class"], "TRIVIAL_ZERO");
        assert_eq!(j["gap_ab"]["im"], -1.0);
        for key in ["pair", "lhs", "cs_rhs", "rs_rhs", "gap_ab", "gap_ba", "class"] {
            assert!(j.get(key).is_some());
        }
    }
}
