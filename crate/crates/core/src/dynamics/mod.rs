//! Liouvillian assembly, propagation and steady states.

mod density;
mod expm;
mod liouvillian;
mod propagate;
mod schedule;
mod sparse;
mod steady;

pub use density::{expectation, DensityMatrix, StateDiagnostics};
pub use expm::expm;
pub use liouvillian::{build_liouvillian, build_liouvillian_sparse, Superoperator};
pub use propagate::{evolve, propagate, Propagator, PropagatorCache};
pub use schedule::LiouvillianSchedule;
pub use sparse::CsrMatrix;
pub use steady::{
    null_space_gap, residual, steady_state, steady_state_with, NullSpaceCheck, NULL_SPACE_GAP,
};

pub(crate) use density::vectorize;

use std::sync::Arc;

use crate::error::Result;
use crate::hamiltonian::{build_dissipators, build_hamiltonian};
use crate::params::SystemParams;
use crate::space::HilbertSpace;

/// Liouvillian of the full model at driving strength `omega` (meV).
pub fn model_liouvillian(
    space: &HilbertSpace,
    p: &SystemParams,
    omega: f64,
) -> Result<Arc<Superoperator>> {
    let h = build_hamiltonian(space, p, omega);
    let channels = build_dissipators(space, p);
    build_liouvillian(&h, &channels, p.hbar, omega).map(Arc::new)
}
