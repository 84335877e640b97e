use crate::error::{Error, Result};

/// Default delay window (ps).
pub const DEFAULT_TAU: f64 = 50.0;

/// Windowed coincidence measurement: first detections in `[t0, t0 + dt]`,
/// delays in `[0, tau]` (all in ps).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementWindow {
    pub t0: f64,
    pub dt: f64,
    pub tau: f64,
}

impl MeasurementWindow {
    pub fn new(t0: f64, dt: f64, tau: f64) -> Result<Self> {
        let w = Self { t0, dt, tau };
        w.validate()?;
        Ok(w)
    }

    /// Point-in-time measurement, as used in the steady state.
    pub fn instant(t0: f64, tau: f64) -> Self {
        Self { t0, dt: 0.0, tau }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.t0.is_finite() || !(self.dt >= 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidWindow(format!(
                "need finite t0 and dt >= 0, got t0 = {}, dt = {}",
                self.t0, self.dt
            )));
        }
        if !(self.tau > 0.0) || !self.tau.is_finite() {
            return Err(Error::InvalidWindow(format!("tau must be positive, got {}", self.tau)));
        }
        Ok(())
    }
}

/// Uniform trapezoid grids for the real-time and delay integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quadrature {
    pub t_nodes: usize,
    pub tau_nodes: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            t_nodes: 17,
            tau_nodes: 51,
        }
    }
}

impl Quadrature {
    pub fn validate(&self) -> Result<()> {
        if self.t_nodes < 2 || self.tau_nodes < 2 {
            return Err(Error::InvalidWindow(format!(
                "quadrature needs at least 2 nodes per axis, got {} x {}",
                self.t_nodes, self.tau_nodes
            )));
        }
        Ok(())
    }

    /// Twice as many intervals on both axes.
    pub fn refined(&self) -> Self {
        Self {
            t_nodes: 2 * self.t_nodes - 1,
            tau_nodes: 2 * self.tau_nodes - 1,
        }
    }
}
