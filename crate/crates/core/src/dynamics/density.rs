use ndarray::Array2;
use ndarray_linalg::{EigValsh, UPLO};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::space::{max_abs_diff, Operator};

/// Density matrix on the truncated emitter ⊗ cavity space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(pub Array2<C64>);

/// Worst-case deviations from a physical state.
#[derive(Debug, Clone, Copy)]
pub struct StateDiagnostics {
    pub hermiticity: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

impl StateDiagnostics {
    pub fn is_physical(&self, tol: f64) -> bool {
        self.hermiticity < tol && self.trace_error < tol && self.min_eigenvalue > -tol
    }
}

impl DensityMatrix {
    pub fn new(m: Array2<C64>) -> Self {
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.0
    }

    pub fn trace(&self) -> C64 {
        self.0.diag().sum()
    }

    /// Column-stacked vectorization, `vec[i + j*n] = ρ[i, j]`.
    pub fn to_vec(&self) -> Vec<C64> {
        vectorize(&self.0)
    }

    pub fn from_vec(v: &[C64], n: usize) -> Self {
        Self(unvectorize(v, n))
    }

    pub fn hermitized(&self) -> Self {
        let h = (&self.0 + &self.0.t().mapv(|z| z.conj())) * C64::new(0.5, 0.0);
        Self(h)
    }

    pub fn diagnostics(&self) -> Result<StateDiagnostics> {
        let hermiticity = max_abs_diff(&self.0, &self.0.t().mapv(|z| z.conj()));
        let trace_error = (self.trace() - C64::new(1.0, 0.0)).norm();
        let eig = self.hermitized().0.eigvalsh(UPLO::Lower)?;
        let min_eigenvalue = eig.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok(StateDiagnostics {
            hermiticity,
            trace_error,
            min_eigenvalue,
        })
    }
}

pub(crate) fn vectorize(m: &Array2<C64>) -> Vec<C64> {
    m.t().iter().cloned().collect()
}

pub(crate) fn unvectorize(v: &[C64], n: usize) -> Array2<C64> {
    Array2::from_shape_fn((n, n), |(i, j)| v[i + j * n])
}

/// `Tr(O ρ)`.
pub fn expectation(rho: &DensityMatrix, op: &Operator) -> Result<C64> {
    if rho.dim() != op.dim() {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            actual: rho.dim(),
        });
    }
    let n = rho.dim();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += op.0[[i, k]] * rho.0[[k, i]];
        }
    }
    Ok(acc)
}
