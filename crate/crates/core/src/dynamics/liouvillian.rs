//! Lindblad generator acting on column-stacked density matrices.

use ndarray::Array2;
use ndarray_linalg::EigVals;
use num_complex::Complex64 as C64;

use super::sparse::CsrMatrix;
use crate::error::{Error, Result};
use crate::hamiltonian::Channel;
use crate::space::Operator;

#[derive(Debug, Clone)]
pub struct Superoperator {
    hilbert_dim: usize,
    dense: Array2<C64>,
    csr: CsrMatrix,
    csr_t: CsrMatrix,
    omega: f64,
}

fn nonzeros(m: &Array2<C64>) -> Vec<(usize, usize, C64)> {
    m.indexed_iter()
        .filter(|(_, z)| z.norm() != 0.0)
        .map(|((i, j), &z)| (i, j, z))
        .collect()
}

fn validate_inputs(h: &Operator, channels: &[Channel]) -> Result<()> {
    let deviation = h.hermiticity_deviation();
    if deviation > 1e-9 * h.max_abs().max(f64::MIN_POSITIVE) {
        return Err(Error::NonHermitian { deviation });
    }
    if let Some(c) = channels.iter().find(|c| !(c.rate >= 0.0)) {
        return Err(Error::NegativeRate(c.rate));
    }
    let n = h.dim();
    for c in channels {
        if c.op.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: c.op.dim(),
            });
        }
    }
    Ok(())
}

/// Matrix entries of the generator in the column-stacked basis, with
/// repeated positions left unsummed.
fn generator_entries(h: &Operator, channels: &[Channel], hbar: f64) -> Vec<(usize, usize, C64)> {
    let n = h.dim();
    // Left factor -iH/ħ - K/2 and right factor +iH/ħ - K/2 with K = Σ r C†C.
    let mut k = Array2::<C64>::zeros((n, n));
    for c in channels {
        let cd = c.op.dag();
        k.scaled_add(C64::new(c.rate, 0.0), &cd.0.dot(&c.op.0));
    }
    let ih = h.0.mapv(|z| z * C64::new(0.0, 1.0 / hbar));
    let half_k = &k * C64::new(0.5, 0.0);
    let left = -&ih - &half_k;
    let right = &ih - &half_k;

    let mut out = Vec::new();
    // A ρ  ->  (I ⊗ A)
    for (i, kk, a) in nonzeros(&left) {
        for j in 0..n {
            out.push((i + j * n, kk + j * n, a));
        }
    }
    // ρ B  ->  (Bᵀ ⊗ I)
    for (l, j, b) in nonzeros(&right) {
        for i in 0..n {
            out.push((i + j * n, i + l * n, b));
        }
    }
    // r C ρ C†  ->  r (C̄ ⊗ C)
    for c in channels.iter().filter(|c| c.rate > 0.0) {
        let nz = nonzeros(&c.op.0);
        for &(i, kk, a) in &nz {
            for &(j, l, b) in &nz {
                out.push((i + j * n, kk + l * n, a * b.conj() * c.rate));
            }
        }
    }
    out
}

/// Sparse generator only, for spaces too large for the dense form.
pub fn build_liouvillian_sparse(h: &Operator, channels: &[Channel], hbar: f64) -> Result<CsrMatrix> {
    validate_inputs(h, channels)?;
    let nn = h.dim() * h.dim();
    Ok(CsrMatrix::from_triplets(nn, generator_entries(h, channels, hbar)))
}

/// `L[ρ] = -(i/ħ)[H, ρ] + Σ_c r_c (C ρ C† - ½{C†C, ρ})`.
///
/// `hbar` converts the Hamiltonian (meV) into a rate (1/ps); `omega` is kept
/// as a tag for caching and error reporting.
pub fn build_liouvillian(
    h: &Operator,
    channels: &[Channel],
    hbar: f64,
    omega: f64,
) -> Result<Superoperator> {
    validate_inputs(h, channels)?;
    let n = h.dim();
    let nn = n * n;
    let entries = generator_entries(h, channels, hbar);
    let mut dense = Array2::<C64>::zeros((nn, nn));
    for &(r, c, v) in &entries {
        dense[[r, c]] += v;
    }
    let transposed = entries.iter().map(|&(r, c, v)| (c, r, v)).collect();
    let csr = CsrMatrix::from_triplets(nn, entries);
    let csr_t = CsrMatrix::from_triplets(nn, transposed);
    Ok(Superoperator {
        hilbert_dim: n,
        dense,
        csr,
        csr_t,
        omega,
    })
}

impl Superoperator {
    /// Dimension of the vectorized space, `hilbert_dim²`.
    pub fn dim(&self) -> usize {
        self.dense.nrows()
    }

    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.dense
    }

    pub fn sparse(&self) -> &CsrMatrix {
        &self.csr
    }

    /// Transpose, for propagating observables (covectors) backwards.
    pub fn sparse_transpose(&self) -> &CsrMatrix {
        &self.csr_t
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.csr.mul_vec(v)
    }

    /// Row vector `vec(I)ᵀ`, the trace functional.
    pub fn trace_covector(&self) -> Vec<C64> {
        let n = self.hilbert_dim;
        let mut v = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            v[i + i * n] = C64::new(1.0, 0.0);
        }
        v
    }

    /// `max |vec(I)ᵀ L|`, zero for a trace-preserving generator.
    pub fn trace_leak(&self) -> f64 {
        self.csr_t
            .mul_vec(&self.trace_covector())
            .iter()
            .fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn max_abs(&self) -> f64 {
        self.dense.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest real part of the spectrum (dense eigen-decomposition).
    pub fn spectral_abscissa(&self) -> Result<f64> {
        let eig = self.dense.eigvals()?;
        Ok(eig.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
    }
}
