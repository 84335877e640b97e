use std::fs;
use std::path::{Path, PathBuf};

use entswitch_core::dressed::{dressed_energies, resonance_table};
use entswitch_core::protocol::{
    analyze_steady_state, run_sweep, run_switching, ProtocolSchedule, ScheduleStep,
};

use crate::config::{Experiment, RunConfig};
use crate::error::CliError;
use crate::output;

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub experiment: Experiment,
    pub files: Vec<PathBuf>,
}

/// Window starts closer than this (ps) are treated as the same.
const T0_MATCH: f64 = 1e-6;

pub fn run(cfg: &RunConfig) -> Result<RunSummary, CliError> {
    cfg.params.validate()?;
    fs::create_dir_all(&cfg.out_dir).map_err(|source| CliError::Io {
        path: cfg.out_dir.clone(),
        source,
    })?;
    let files = match cfg.experiment {
        Experiment::Sweep => sweep(cfg)?,
        Experiment::Switch => switch(cfg)?,
        Experiment::Steady => steady(cfg)?,
        Experiment::Dressed => dressed(cfg)?,
    };
    Ok(RunSummary { experiment: cfg.experiment, files })
}

fn target(cfg: &RunConfig, name: &Path) -> PathBuf {
    cfg.out_dir.join(name)
}

fn sweep(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let p = &cfg.params;
    let omegas: Vec<f64> = cfg.sweep.grid().iter().map(|w| w * p.g).collect();
    let records = run_sweep(p, &omegas, cfg.analysis.tau, &cfg.analysis.options())?;
    let path = target(cfg, &cfg.sweep.csv);
    output::emit_sweep_csv(&path, &records, p.g)?;
    Ok(vec![path])
}

fn switch(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let p = &cfg.params;
    let s = &cfg.switch;
    let schedule = ProtocolSchedule::new(
        s.steps
            .iter()
            .map(|w| ScheduleStep { omega: w * p.g, duration: s.step_length })
            .collect(),
    )?;
    let mut grid = schedule.t0_grid(s.t0_per_step, s.dt);
    if !grid.iter().any(|t| (t - s.rho2p_t0).abs() < T0_MATCH) {
        grid.push(s.rho2p_t0);
        grid.sort_by(f64::total_cmp);
    }
    let records = run_switching(p, &schedule, &grid, s.dt, cfg.analysis.tau, &cfg.analysis.options())?;

    let csv = target(cfg, &s.csv);
    output::emit_switch_csv(&csv, &records, |t| s.steps[schedule.step_at(t)])?;
    let picked = records
        .iter()
        .find(|r| (r.t0 - s.rho2p_t0).abs() < T0_MATCH)
        .expect("grid contains the matrix window");
    let json = target(cfg, &s.rho2p);
    output::emit_rho2p(&picked.rho2p, &json)?;
    Ok(vec![csv, json])
}

fn steady(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let p = &cfg.params;
    let omega = cfg.steady.omega * p.g;
    let a = analyze_steady_state(p, omega, cfg.analysis.tau, &cfg.analysis.options())?;
    let csv = target(cfg, &cfg.steady.csv);
    output::emit_sweep_csv(&csv, std::slice::from_ref(&a.record), p.g)?;
    let json = target(cfg, &cfg.steady.rho2p);
    output::emit_rho2p(&a.record.rho2p, &json)?;
    Ok(vec![csv, json])
}

fn dressed(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let p = &cfg.params;
    let spectra: Vec<_> = cfg
        .sweep
        .grid()
        .iter()
        .map(|w| dressed_energies(p.delta0, w * p.g))
        .collect();
    let energies = target(cfg, &cfg.dressed.energies_csv);
    output::emit_energies_csv(&energies, &spectra, p.g)?;

    let table: Vec<_> = resonance_table(p.delta, p.delta0, cfg.sweep.omega_max * p.g, cfg.dressed.max_order)
        .into_iter()
        .filter(|r| r.omega >= cfg.sweep.omega_min * p.g)
        .collect();
    let resonances = target(cfg, &cfg.dressed.resonances_csv);
    output::emit_resonances_csv(&resonances, &table, p.g)?;
    Ok(vec![energies, resonances])
}
