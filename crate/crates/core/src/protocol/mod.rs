//! Steady-state driving sweep and the time-dependent switching protocol.

mod schedule;
mod sweep;
mod switching;

pub use schedule::{
    ProtocolSchedule, ScheduleStep, DEFAULT_STEP_LENGTH, DEFAULT_T0_PER_STEP, OMEGA_PHI_OVER_G,
    OMEGA_PSI_OVER_G, OMEGA_ZERO_OVER_G,
};
pub use sweep::{analyze_steady_state, linspace, run_sweep, AnalysisOptions, SteadyAnalysis, SweepRecord};
pub use switching::{liouvillian_schedule, run_switching, SwitchRecord};
