use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::operator::Operator;
use crate::error::{Error, Result};
use crate::numgrid::ComplexField;

/// Largest accepted deviation of `∫|ψ|²` from 1.
pub const NORMALIZATION_TOL: f64 = 1e-6;

/// Means, correlation matrix and standard deviations of a list of observables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSet {
    pub labels: Vec<String>,
    pub means: Vec<Complex64>,
    /// `correlations[j][k] = C(A_j, A_k)`.
    pub correlations: Vec<Vec<Complex64>>,
    pub deltas: Vec<f64>,
}

impl EstimatorSet {
    /// Builds a set from means and a square correlation matrix; the standard
    /// deviations are `√max(Re C_jj, 0)`.
    pub fn from_parts(labels: Vec<String>, means: Vec<Complex64>, correlations: Vec<Vec<Complex64>>) -> Result<Self> {
        let r = labels.len();
        if means.len() != r || correlations.len() != r || correlations.iter().any(|row| row.len() != r) {
            return Err(Error::DimensionMismatch(format!("estimator set of {r} labels")));
        }
        let deltas = (0..r).map(|j| correlations[j][j].re.max(0.0).sqrt()).collect();
        Ok(EstimatorSet { labels, means, correlations, deltas })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::MissingCorrelation(label.to_string(), label.to_string()))
    }

    pub fn mean(&self, label: &str) -> Result<Complex64> {
        Ok(self.means[self.index(label)?])
    }

    pub fn delta(&self, label: &str) -> Result<f64> {
        Ok(self.deltas[self.index(label)?])
    }

    pub fn correlation(&self, a: &str, b: &str) -> Result<Complex64> {
        let missing = || Error::MissingCorrelation(a.to_string(), b.to_string());
        let j = self.index(a).map_err(|_| missing())?;
        let k = self.index(b).map_err(|_| missing())?;
        Ok(self.correlations[j][k])
    }

    pub fn correlation_matrix(&self) -> DMatrix<Complex64> {
        let r = self.len();
        DMatrix::from_fn(r, r, |j, k| self.correlations[j][k])
    }

    /// Largest `|C_jk − conj(C_kj)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let c = self.correlation_matrix();
        (&c - c.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn check_normalized(psi: &ComplexField) -> Result<()> {
    let n = psi.norm_sqr();
    if (n - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized(n));
    }
    Ok(())
}

/// Estimators of `ops` in the state `psi`.
pub fn estimator_set(ops: &[Operator], psi: &ComplexField, hbar: f64) -> Result<EstimatorSet> {
    check_normalized(psi)?;
    let mut means = Vec::with_capacity(ops.len());
    let mut shifted = Vec::with_capacity(ops.len());
    for op in ops {
        let a_psi = op.apply(psi, hbar)?;
        let mean = psi.inner(&a_psi)?;
        shifted.push(a_psi.sub_scaled(mean, psi)?);
        means.push(mean);
    }
    let correlations = shifted
        .iter()
        .map(|dj| shifted.iter().map(|dk| dj.inner(dk)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let labels = ops.iter().map(|op| op.name().to_string()).collect();
    EstimatorSet::from_parts(labels, means, correlations)
}

/// `(Aψ, Bψ) − (ψ, ABψ)`, with `AB` applied literally right to left.
pub fn condition_gap(a: &Operator, b: &Operator, psi: &ComplexField, hbar: f64) -> Result<Complex64> {
    let a_psi = a.apply(psi, hbar)?;
    let b_psi = b.apply(psi, hbar)?;
    let ab_psi = a.apply(&b_psi, hbar)?;
    Ok(a_psi.inner(&b_psi)? - psi.inner(&ab_psi)?)
}

/// `(ψ, ABψ) − (ψ, BAψ)`.
pub fn commutator_mean(a: &Operator, b: &Operator, psi: &ComplexField, hbar: f64) -> Result<Complex64> {
    let ab = a.apply(&b.apply(psi, hbar)?, hbar)?;
    let ba = b.apply(&a.apply(psi, hbar)?, hbar)?;
    Ok(psi.inner(&ab)? - psi.inner(&ba)?)
}
