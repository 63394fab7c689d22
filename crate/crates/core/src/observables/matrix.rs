//! Finite-dimensional observables and density matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use super::estimators::EstimatorSet;
use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const HERMITIAN_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entry of `A − A†`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// A labelled Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixObservable {
    label: String,
    matrix: CMatrix,
}

impl MatrixObservable {
    pub fn new(label: impl Into<String>, matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!("{}x{} observable", matrix.nrows(), matrix.ncols())));
        }
        let defect = hermiticity_defect(&matrix);
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(MatrixObservable { label: label.into(), matrix })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// A statistical operator: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidDensityMatrix("not square".into()));
        }
        let defect = hermiticity_defect(&matrix);
        if defect > HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!("not Hermitian (defect {defect:e})")));
        }
        let tr = matrix.trace();
        if (tr - c(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
        }
        let min = matrix.clone().symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOL {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:e}")));
        }
        Ok(DensityMatrix { matrix })
    }

    /// The projector onto a normalized vector.
    pub fn pure(state: &[Complex64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(state);
        DensityMatrix::new(&v * v.adjoint())
    }

    /// `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix { matrix: CMatrix::identity(dim, dim).scale(1.0 / dim as f64) }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// `⟨A⟩ = Tr(Aρ)`, `C(A,B) = Tr(δA δB ρ)`.
pub fn matrix_estimator_set(obs: &[MatrixObservable], rho: &DensityMatrix) -> Result<EstimatorSet> {
    let d = rho.dim();
    if let Some(o) = obs.iter().find(|o| o.dim() != d) {
        return Err(Error::DimensionMismatch(format!("{} is {}-dimensional, state is {d}", o.label, o.dim())));
    }
    let id = CMatrix::identity(d, d);
    let mut means = Vec::with_capacity(obs.len());
    let mut shifted = Vec::with_capacity(obs.len());
    for o in obs {
        let mean = (o.matrix() * rho.matrix()).trace();
        shifted.push(o.matrix() - &id * mean);
        means.push(mean);
    }
    let correlations = shifted
        .iter()
        .map(|a| shifted.iter().map(|b| (a * b * rho.matrix()).trace()).collect())
        .collect();
    let labels = obs.iter().map(|o| o.label.clone()).collect();
    EstimatorSet::from_parts(labels, means, correlations)
}

/// Pauli matrices `σ_x, σ_y, σ_z`.
pub fn pauli() -> [CMatrix; 3] {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        CMatrix::from_row_slice(2, 2, &[z, one, one, z]),
        CMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        CMatrix::from_row_slice(2, 2, &[one, z, z, -one]),
    ]
}

/// Largest number of spins for the magnetization operators.
pub const MAX_SPINS: usize = 8;

/// Global magnetization `M_α = Σ_i (γħ/2) σ_α^{(i)}` for `n` spins.
pub fn magnetization_operators(n: usize, gamma: f64, hbar: f64) -> Result<[MatrixObservable; 3]> {
    if !(1..=MAX_SPINS).contains(&n) {
        return Err(Error::InvalidParameter(format!("spin count must be in 1..={MAX_SPINS}, got {n}")));
    }
    let dim = 1usize << n;
    let s = pauli();
    let build = |alpha: usize| {
        let mut total = CMatrix::zeros(dim, dim);
        for slot in 0..n {
            let left = CMatrix::identity(1 << slot, 1 << slot);
            let right = CMatrix::identity(1 << (n - slot - 1), 1 << (n - slot - 1));
            total += left.kronecker(&s[alpha]).kronecker(&right);
        }
        total.scale(0.5 * gamma * hbar)
    };
    Ok([
        MatrixObservable::new("Mx", build(0))?,
        MatrixObservable::new("My", build(1))?,
        MatrixObservable::new("Mz", build(2))?,
    ])
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Largest entry of `[M_α, M_β] − iħγ ε_{αβμ} M_μ` over the three cyclic pairs.
pub fn magnetization_residual(m: &[MatrixObservable; 3], gamma: f64, hbar: f64) -> f64 {
    let i = c(0.0, hbar * gamma);
    [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
        .iter()
        .map(|&(a, b, mu)| max_abs(&(commutator(m[a].matrix(), m[b].matrix()) - m[mu].matrix() * i)))
        .fold(0.0, f64::max)
}

/// A random Hermitian matrix with entries uniform in `[−1, 1]`.
pub fn random_hermitian<R: Rng>(dim: usize, rng: &mut R) -> CMatrix {
    let a = CMatrix::from_fn(dim, dim, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    (&a + a.adjoint()).scale(0.5)
}

/// A random full-rank density matrix `AA†/Tr(AA†)`.
pub fn random_density_matrix<R: Rng>(dim: usize, rng: &mut R) -> DensityMatrix {
    let a = CMatrix::from_fn(dim, dim, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let m = &a * a.adjoint();
    let tr = m.trace().re;
    let mut m = m.scale(1.0 / tr);
    // Remove rounding asymmetry so the Hermitian check is exact.
    m = (&m + m.adjoint()).scale(0.5);
    DensityMatrix::new(m).expect("Gram matrices are density matrices")
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn identity_observable() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho = random_density_matrix(3, &mut rng);
        let id = MatrixObservable::new("I", CMatrix::identity(3, 3)).unwrap();
        let est = matrix_estimator_set(&[id], &rho).unwrap();
        assert!((est.means[0] - 1.0).norm() < 1e-12);
        assert!(est.deltas[0] < 1e-7);
    }

    #[test]
    fn single_spin_mixed_state() {
        let m = magnetization_operators(1, 1.0, 1.0).unwrap();
        let est = matrix_estimator_set(&m, &DensityMatrix::maximally_mixed(2)).unwrap();
        assert!(est.mean("Mz").unwrap().norm() < 1e-15);
        assert!((est.delta("Mz").unwrap() - 0.5).abs() < 1e-15);
        let comm = commutator(m[0].matrix(), m[1].matrix());
        assert_eq!(comm, m[2].matrix() * c(0.0, 1.0));
    }

    #[test]
    fn two_spin_mz_spectrum() {
        let m = magnetization_operators(2, 1.0, 1.0).unwrap();
        let mut ev: Vec<f64> = m[2].matrix().clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        for (a, b) in ev.iter().zip([-1.0, 0.0, 0.0, 1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn commutators_hold() {
        for n in 1..=4 {
            let m = magnetization_operators(n, 0.7, 1.3).unwrap();
            assert!(magnetization_residual(&m, 0.7, 1.3) < 1e-12);
        }
        assert!(magnetization_operators(0, 1.0, 1.0).is_err());
        assert!(magnetization_operators(9, 1.0, 1.0).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        let bad_trace = CMatrix::identity(2, 2);
        assert!(DensityMatrix::new(bad_trace).is_err());
        let negative = CMatrix::from_row_slice(2, 2, &[c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)]);
        assert!(DensityMatrix::new(negative).is_err());
        let nonherm = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.1, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
        assert!(DensityMatrix::new(nonherm).is_err());
        let s = 0.5f64.sqrt();
        assert!(DensityMatrix::pure(&[c(s, 0.0), c(0.0, s)]).is_ok());
    }

    #[test]
    fn cauchy_schwarz_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let rho = random_density_matrix(4, &mut rng);
            let a = MatrixObservable::new("A", random_hermitian(4, &mut rng)).unwrap();
            let b = MatrixObservable::new("B", random_hermitian(4, &mut rng)).unwrap();
            let est = matrix_estimator_set(&[a, b], &rho).unwrap();
            assert!(est.deltas[0] * est.deltas[1] >= est.correlations[0][1].norm() - 1e-12);
        }
    }
}
