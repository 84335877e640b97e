//! Physical parameters of the emitter-cavity system.
//!
//! Energies are in meV, times in ps and rates in 1/ps throughout the crate.

use crate::error::{Error, Result};

/// Reduced Planck constant in meV·ps.
pub const HBAR_MEV_PS: f64 = 0.658_211_956_9;

/// Default emitter-cavity coupling in meV.
pub const DEFAULT_G: f64 = 0.051;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Emitter-cavity coupling, equal for all four transitions (meV).
    pub g: f64,
    /// Laser detuning of the single-excited states, half the binding energy (meV).
    pub delta0: f64,
    /// Cavity-laser detuning (meV).
    pub delta: f64,
    /// Cavity loss rate per mode (1/ps).
    pub kappa: f64,
    /// Radiative decay rate per emitter transition (1/ps).
    pub gamma: f64,
    /// Pure dephasing rate (1/ps).
    pub gamma_pd: f64,
    /// Fine-structure splitting `E(X_H) - E(X_V)` (meV).
    pub fss: f64,
    /// Photon-number cutoff per cavity mode.
    pub n_max: usize,
    /// Conversion constant (meV·ps).
    pub hbar: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        let g = DEFAULT_G;
        let delta0 = 20.0 * g;
        Self {
            g,
            delta0,
            delta: 0.8 * delta0,
            kappa: 0.1 * g / HBAR_MEV_PS,
            gamma: 0.01 * g / HBAR_MEV_PS,
            gamma_pd: 0.0,
            fss: 0.0,
            n_max: 2,
            hbar: HBAR_MEV_PS,
        }
    }
}

impl SystemParams {
    /// Checks the invariants every downstream builder relies on.
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.g,
            self.delta0,
            self.delta,
            self.kappa,
            self.gamma,
            self.gamma_pd,
            self.fss,
            self.hbar,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParams("all parameters must be finite".into()));
        }
        if self.g <= 0.0 {
            return Err(Error::InvalidParams(format!("g must be positive, got {}", self.g)));
        }
        for (name, rate) in [
            ("kappa", self.kappa),
            ("gamma", self.gamma),
            ("gamma_pd", self.gamma_pd),
        ] {
            if rate < 0.0 {
                return Err(Error::InvalidParams(format!(
                    "{name} must be nonnegative, got {rate}"
                )));
            }
        }
        if self.n_max < 1 {
            return Err(Error::InvalidParams("n_max must be at least 1".into()));
        }
        if self.hbar <= 0.0 {
            return Err(Error::InvalidParams("hbar must be positive".into()));
        }
        Ok(())
    }

    /// Driving strength given in units of `g`, converted to meV.
    pub fn omega_from_g(&self, omega_over_g: f64) -> f64 {
        omega_over_g * self.g
    }

    /// Converts a rate in 1/ps to the equivalent energy `hbar * rate` in meV.
    pub fn rate_to_energy(&self, rate: f64) -> f64 {
        rate * self.hbar
    }

    /// Converts an energy in meV to the rate `energy / hbar` in 1/ps.
    pub fn energy_to_rate(&self, energy: f64) -> f64 {
        energy / self.hbar
    }

    pub fn with_fss(mut self, fss: f64) -> Self {
        self.fss = fss;
        self
    }

    pub fn with_gamma_pd(mut self, gamma_pd: f64) -> Self {
        self.gamma_pd = gamma_pd;
        self
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self
    }
}
