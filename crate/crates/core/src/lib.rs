//! Open-system simulation of a laser-driven four-level emitter in a
//! polarization-degenerate two-mode cavity.
//!
//! The crate builds the rotating-frame Lindblad model, propagates it under
//! piecewise-constant driving, and turns windowed two-photon coincidences
//! into a polarization density matrix, its concurrence and the dominant Bell
//! family.

pub mod correlations;
pub mod dressed;
pub mod dynamics;
mod error;
pub mod hamiltonian;
pub mod params;
pub mod protocol;
pub mod space;

pub use error::{Error, Result};
pub use params::SystemParams;
pub use space::{build_space, HilbertSpace, Mode, Operator};
