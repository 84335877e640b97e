use rayon::prelude::*;

use crate::correlations::{
    classify_entanglement, concurrence, mean_photon_number, two_photon_density_matrix,
    CorrelationEngine, Entanglement, MeasurementWindow, Quadrature, TwoPhotonDensityMatrix,
    DEFAULT_ENTANGLEMENT_THRESHOLD,
};
use crate::dynamics::{model_liouvillian, steady_state_with, DensityMatrix, NullSpaceCheck};
use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::space::HilbertSpace;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    pub quadrature: Quadrature,
    /// Concurrence below which pairs are reported as unentangled.
    pub threshold: f64,
    pub null_space_check: NullSpaceCheck,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            quadrature: Quadrature::default(),
            threshold: DEFAULT_ENTANGLEMENT_THRESHOLD,
            null_space_check: NullSpaceCheck::SingularValues,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    /// Driving strength (meV).
    pub omega: f64,
    pub mean_n: f64,
    pub concurrence: f64,
    pub ent_type: Entanglement,
    pub rho2p: TwoPhotonDensityMatrix,
}

/// Steady state and its photon-pair statistics at one driving strength.
#[derive(Debug, Clone)]
pub struct SteadyAnalysis {
    pub record: SweepRecord,
    pub rho: DensityMatrix,
}

pub fn analyze_steady_state(
    p: &SystemParams,
    omega: f64,
    tau: f64,
    opts: &AnalysisOptions,
) -> Result<SteadyAnalysis> {
    let inner = || -> Result<SteadyAnalysis> {
        if !(omega >= 0.0) {
            return Err(Error::InvalidParams(format!("driving strength must be >= 0, got {omega}")));
        }
        let space = HilbertSpace::new(p.n_max)?;
        let l = model_liouvillian(&space, p, omega)?;
        let rho = steady_state_with(&l, opts.null_space_check)?;
        let mean_n = mean_photon_number(&space, &rho)?;
        // The steady state is stationary, so the real-time average is a
        // point evaluation.
        let engine = CorrelationEngine::stationary(l, tau, opts.quadrature)?;
        let g = engine.averaged_g2(&rho, MeasurementWindow::instant(0.0, tau))?;
        let rho2p = two_photon_density_matrix(&g)?;
        let c = concurrence(&rho2p)?;
        let ent_type = classify_entanglement(&rho2p, c, opts.threshold);
        Ok(SteadyAnalysis {
            record: SweepRecord {
                omega,
                mean_n,
                concurrence: c,
                ent_type,
                rho2p,
            },
            rho,
        })
    };
    inner().map_err(|e| e.at_omega(omega))
}

/// Steady-state photon number, concurrence and entanglement type for each
/// driving strength; records come back sorted by Ω.
pub fn run_sweep(
    p: &SystemParams,
    omegas: &[f64],
    tau: f64,
    opts: &AnalysisOptions,
) -> Result<Vec<SweepRecord>> {
    p.validate()?;
    let mut records = omegas
        .par_iter()
        .map(|&omega| analyze_steady_state(p, omega, tau, opts).map(|a| a.record))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| a.omega.total_cmp(&b.omega));
    Ok(records)
}

/// `count` uniformly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let h = (stop - start) / (count - 1) as f64;
            (0..count).map(|i| start + i as f64 * h).collect()
        }
    }
}
