//! Windowed two-photon coincidences and their entanglement content.

mod g2;
mod two_photon;
mod window;

pub use g2::{averaged_g2, g2_point, trapezoid_weights, CorrelationEngine, G2Tensor, PairOperators};
pub use two_photon::{
    classify_entanglement, concurrence, mean_photon_number, two_photon_density_matrix, BellState,
    Entanglement, TwoPhotonDensityMatrix, DEFAULT_ENTANGLEMENT_THRESHOLD, TWO_PHOTON_BASIS,
};
pub use window::{MeasurementWindow, Quadrature, DEFAULT_TAU};
