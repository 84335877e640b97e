use ndarray::{Array1, Array2};
use ndarray_linalg::{JobSvd, SVDDC, Solve};
use num_complex::Complex64 as C64;

use super::density::DensityMatrix;
use super::liouvillian::Superoperator;
use crate::error::{Error, Result};

/// Minimum ratio of the second-smallest to the largest singular value of L.
pub const NULL_SPACE_GAP: f64 = 1e-6;

/// Whether to verify the null space of L is one-dimensional before solving.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NullSpaceCheck {
    #[default]
    SingularValues,
    Skip,
}

/// Ratio `σ_{n-1} / σ_max` of the singular values of L.
pub fn null_space_gap(l: &Superoperator) -> Result<f64> {
    let (_, s, _) = l.matrix().svddc(JobSvd::None)?;
    let mut s = s.to_vec();
    s.sort_by(f64::total_cmp);
    let largest = *s.last().unwrap_or(&0.0);
    if largest == 0.0 || s.len() < 2 {
        return Ok(0.0);
    }
    Ok(s[1] / largest)
}

/// Solves `L ρ = 0` with one row replaced by the trace condition `Tr ρ = 1`.
pub fn steady_state(l: &Superoperator) -> Result<DensityMatrix> {
    steady_state_with(l, NullSpaceCheck::SingularValues)
}

pub fn steady_state_with(l: &Superoperator, check: NullSpaceCheck) -> Result<DensityMatrix> {
    if check == NullSpaceCheck::SingularValues {
        let ratio = null_space_gap(l)?;
        if ratio < NULL_SPACE_GAP {
            return Err(Error::DegenerateSteadyState {
                ratio,
                threshold: NULL_SPACE_GAP,
            });
        }
    }
    let n = l.hilbert_dim();
    let mut a: Array2<C64> = l.matrix().clone();
    // Row 0 is the equation for ρ[0,0]; the trace row makes the system regular.
    let trace = l.trace_covector();
    a.row_mut(0).assign(&Array1::from(trace));
    let mut b = Array1::<C64>::zeros(n * n);
    b[0] = C64::new(1.0, 0.0);
    let x = a.solve_into(b)?;
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::DegenerateSteadyState {
            ratio: 0.0,
            threshold: NULL_SPACE_GAP,
        });
    }
    Ok(DensityMatrix::from_vec(x.as_slice().unwrap(), n).hermitized())
}

/// `max |L vec(ρ)|`.
pub fn residual(l: &Superoperator, rho: &DensityMatrix) -> f64 {
    l.apply(&rho.to_vec())
        .iter()
        .fold(0.0, |m, z| m.max(z.norm()))
}
