//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use entswitch_core::dynamics::{model_liouvillian, steady_state_with, NullSpaceCheck, Superoperator};
use entswitch_core::dynamics::DensityMatrix;
use entswitch_core::{HilbertSpace, SystemParams};

pub struct Fixture {
    pub params: SystemParams,
    pub space: HilbertSpace,
    pub liouvillian: Arc<Superoperator>,
    pub steady: DensityMatrix,
}

/// Default parameters at photon cutoff `n_max`, driven at `omega_over_g`.
pub fn fixture(n_max: usize, omega_over_g: f64) -> Fixture {
    let params = SystemParams::default().with_n_max(n_max);
    let space = HilbertSpace::new(n_max).expect("valid cutoff");
    let liouvillian = model_liouvillian(&space, &params, omega_over_g * params.g).expect("liouvillian");
    let steady = steady_state_with(&liouvillian, NullSpaceCheck::Skip).expect("steady state");
    Fixture { params, space, liouvillian, steady }
}
