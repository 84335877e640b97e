use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use super::density::DensityMatrix;
use super::expm::expm;
use super::liouvillian::Superoperator;
use crate::error::{Error, Result};

/// Dense `exp(L·duration)`.
#[derive(Debug, Clone)]
pub struct Propagator {
    matrix: Array2<C64>,
    duration: f64,
}

impl Propagator {
    pub fn new(l: &Superoperator, duration: f64) -> Result<Self> {
        if !(duration >= 0.0) {
            return Err(Error::NegativeDuration(duration));
        }
        let scaled = l.matrix() * C64::new(duration, 0.0);
        let matrix = expm(&scaled).map_err(|e| match e {
            Error::NonFinite { .. } => Error::NonFinite { duration },
            other => other,
        })?;
        Ok(Self { matrix, duration })
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn apply_vec(&self, v: &[C64]) -> Vec<C64> {
        self.matrix.dot(&Array1::from(v.to_vec())).to_vec()
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let n = rho.dim();
        if n * n != self.matrix.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.matrix.nrows(),
                actual: n * n,
            });
        }
        let out = self.apply_vec(&rho.to_vec());
        if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                duration: self.duration,
            });
        }
        Ok(DensityMatrix::from_vec(&out, n))
    }
}

/// `ρ(t + duration) = exp(L·duration) ρ(t)` with a dense exponential.
pub fn propagate(l: &Superoperator, rho: &DensityMatrix, duration: f64) -> Result<DensityMatrix> {
    if duration == 0.0 {
        return Ok(rho.clone());
    }
    Propagator::new(l, duration)?.apply(rho)
}

/// Same map as [`propagate`], through the sparse exponential action.
pub fn evolve(l: &Superoperator, rho: &DensityMatrix, duration: f64) -> Result<DensityMatrix> {
    if !(duration >= 0.0) {
        return Err(Error::NegativeDuration(duration));
    }
    let n = rho.dim();
    if n != l.hilbert_dim() {
        return Err(Error::DimensionMismatch {
            expected: l.hilbert_dim(),
            actual: n,
        });
    }
    let out = l.sparse().expm_action(&rho.to_vec(), duration);
    if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite { duration });
    }
    Ok(DensityMatrix::from_vec(&out, n))
}

/// Dense propagators keyed by `(Ω, duration)`.
#[derive(Debug, Default)]
pub struct PropagatorCache {
    entries: Mutex<HashMap<(u64, u64), Arc<Propagator>>>,
}

impl PropagatorCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, l: &Superoperator, duration: f64) -> Result<Arc<Propagator>> {
        let key = (l.omega().to_bits(), duration.to_bits());
        if let Some(p) = self.entries.lock().unwrap().get(&key) {
            return Ok(Arc::clone(p));
        }
        let p = Arc::new(Propagator::new(l, duration)?);
        self.entries
            .lock()
            .unwrap()
            .entry(key)
            .or_insert_with(|| Arc::clone(&p));
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
