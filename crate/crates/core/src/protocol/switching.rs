use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::schedule::ProtocolSchedule;
use super::sweep::AnalysisOptions;
use crate::correlations::{
    classify_entanglement, concurrence, two_photon_density_matrix, CorrelationEngine,
    Entanglement, G2Tensor, MeasurementWindow, TwoPhotonDensityMatrix,
};
use crate::dynamics::{model_liouvillian, DensityMatrix, LiouvillianSchedule, Superoperator};
use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::space::{BasisState, FleState, HilbertSpace};

#[derive(Debug, Clone, PartialEq)]
pub struct SwitchRecord {
    pub t0: f64,
    pub concurrence: f64,
    pub ent_type: Entanglement,
    pub rho2p: TwoPhotonDensityMatrix,
}

/// Node times are matched on a 1 fs lattice so that windows starting on a
/// shared grid reuse each other's delay integrals.
fn node_key(t: f64) -> i64 {
    (t * 1e3).round() as i64
}

/// Builds the generator schedule, sharing one Liouvillian per distinct Ω.
pub fn liouvillian_schedule(
    space: &HilbertSpace,
    p: &SystemParams,
    schedule: &ProtocolSchedule,
) -> Result<LiouvillianSchedule> {
    schedule.validate()?;
    let mut cache: Vec<(u64, Arc<Superoperator>)> = Vec::new();
    let mut steps = Vec::with_capacity(schedule.steps.len());
    for step in &schedule.steps {
        let key = step.omega.to_bits();
        let l = match cache.iter().find(|(k, _)| *k == key) {
            Some((_, l)) => Arc::clone(l),
            None => {
                let l = model_liouvillian(space, p, step.omega).map_err(|e| e.at_omega(step.omega))?;
                cache.push((key, Arc::clone(&l)));
                l
            }
        };
        steps.push((l, step.duration));
    }
    LiouvillianSchedule::from_steps(steps)
}

/// Time-resolved windowed measurements along the switching protocol,
/// starting from the emitter ground state with empty cavity.
pub fn run_switching(
    p: &SystemParams,
    schedule: &ProtocolSchedule,
    t0_grid: &[f64],
    dt: f64,
    tau: f64,
    opts: &AnalysisOptions,
) -> Result<Vec<SwitchRecord>> {
    p.validate()?;
    let end = schedule.total_duration();
    for &t0 in t0_grid {
        MeasurementWindow::new(t0, dt, tau)?;
        if t0 < 0.0 || t0 + dt > end + 1e-9 {
            return Err(Error::InvalidWindow(format!(
                "window [{t0}, {}] ps lies outside the schedule [0, {end}] ps",
                t0 + dt
            )));
        }
    }

    let space = HilbertSpace::new(p.n_max)?;
    let generators = liouvillian_schedule(&space, p, schedule)?;
    let engine = CorrelationEngine::new(generators, tau, opts.quadrature)?;

    // Every real-time quadrature node of every window, deduplicated.
    let mut nodes: BTreeMap<i64, f64> = BTreeMap::new();
    let windows: Vec<Vec<(i64, f64)>> = t0_grid
        .iter()
        .map(|&t0| {
            engine
                .time_nodes(t0, dt)
                .into_iter()
                .map(|(t, w)| {
                    let key = node_key(t);
                    nodes.entry(key).or_insert(t);
                    (key, w)
                })
                .collect()
        })
        .collect();

    // Single pass along the trajectory.
    let n = space.total_dim();
    let mut v = DensityMatrix(space.pure_state(BasisState::new(FleState::G, 0, 0))).to_vec();
    let mut t_prev = 0.0;
    let mut states: Vec<(i64, f64, DensityMatrix)> = Vec::with_capacity(nodes.len());
    for (&key, &t) in &nodes {
        v = engine.schedule().evolve_vec(&v, t_prev, t)?;
        t_prev = t;
        states.push((key, t, DensityMatrix::from_vec(&v, n)));
    }

    let integrals: BTreeMap<i64, G2Tensor> = states
        .par_iter()
        .map(|(key, t, rho)| engine.delay_integral(*t, rho).map(|g| (*key, g)))
        .collect::<Result<_>>()?;

    t0_grid
        .iter()
        .zip(windows)
        .map(|(&t0, nodes)| {
            let mut g = G2Tensor::zeros();
            for (key, w) in nodes {
                g.entries.scaled_add(C64::new(w, 0.0), &integrals[&key].entries);
            }
            g.window = Some(MeasurementWindow { t0, dt, tau });
            let rho2p = two_photon_density_matrix(&g)?;
            let c = concurrence(&rho2p)?;
            Ok(SwitchRecord {
                t0,
                concurrence: c,
                ent_type: classify_entanglement(&rho2p, c, opts.threshold),
                rho2p,
            })
        })
        .collect()
}
