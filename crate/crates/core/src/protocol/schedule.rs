use crate::error::{Error, Result};
use crate::params::SystemParams;

/// Driving strengths of the switching protocol, in units of `g`.
pub const OMEGA_PHI_OVER_G: f64 = 8.85;
pub const OMEGA_PSI_OVER_G: f64 = 28.75;
pub const OMEGA_ZERO_OVER_G: f64 = 18.0;

/// Default step length (ps).
pub const DEFAULT_STEP_LENGTH: f64 = 1000.0;

/// Default number of measurement start times per step.
pub const DEFAULT_T0_PER_STEP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleStep {
    /// Driving strength (meV).
    pub omega: f64,
    /// Step length (ps).
    pub duration: f64,
}

/// Piecewise-constant driving, switched instantaneously between steps.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolSchedule {
    pub steps: Vec<ScheduleStep>,
}

impl ProtocolSchedule {
    pub fn new(steps: Vec<ScheduleStep>) -> Result<Self> {
        let s = Self { steps };
        s.validate()?;
        Ok(s)
    }

    /// Φ, Ψ, none, Ψ, Φ, none with steps of length `step_length`.
    pub fn switching_default(p: &SystemParams, step_length: f64) -> Self {
        let omegas = [
            OMEGA_PHI_OVER_G,
            OMEGA_PSI_OVER_G,
            OMEGA_ZERO_OVER_G,
            OMEGA_PSI_OVER_G,
            OMEGA_PHI_OVER_G,
            OMEGA_ZERO_OVER_G,
        ];
        Self {
            steps: omegas
                .iter()
                .map(|&w| ScheduleStep {
                    omega: w * p.g,
                    duration: step_length,
                })
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps.is_empty() {
            return Err(Error::InvalidSchedule("schedule has no steps".into()));
        }
        for (i, s) in self.steps.iter().enumerate() {
            if !(s.duration > 0.0) || !s.duration.is_finite() {
                return Err(Error::InvalidSchedule(format!(
                    "step {i} has non-positive duration {}",
                    s.duration
                )));
            }
            if !(s.omega >= 0.0) || !s.omega.is_finite() {
                return Err(Error::InvalidSchedule(format!(
                    "step {i} has invalid driving strength {}",
                    s.omega
                )));
            }
        }
        Ok(())
    }

    pub fn total_duration(&self) -> f64 {
        self.steps.iter().map(|s| s.duration).sum()
    }

    /// Start time of each step.
    pub fn step_starts(&self) -> Vec<f64> {
        let mut t = 0.0;
        self.steps
            .iter()
            .map(|s| {
                let start = t;
                t += s.duration;
                start
            })
            .collect()
    }

    /// Index of the step active at `t`.
    pub fn step_at(&self, t: f64) -> usize {
        let starts = self.step_starts();
        starts.partition_point(|&s| s <= t).saturating_sub(1)
    }

    /// `per_step` uniform start times per step, keeping only those whose
    /// window `[t0, t0 + dt]` ends inside the schedule.
    pub fn t0_grid(&self, per_step: usize, dt: f64) -> Vec<f64> {
        let end = self.total_duration();
        let mut out = Vec::new();
        for (start, step) in self.step_starts().into_iter().zip(&self.steps) {
            let h = step.duration / per_step as f64;
            for k in 0..per_step {
                let t0 = start + k as f64 * h;
                if t0 + dt <= end + 1e-9 {
                    out.push(t0);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_sequence() {
        let p = SystemParams::default();
        let s = ProtocolSchedule::switching_default(&p, 1000.0);
        let omegas: Vec<f64> = s.steps.iter().map(|x| x.omega / p.g).collect();
        assert_eq!(omegas, [8.85, 28.75, 18.0, 28.75, 8.85, 18.0]);
        assert_eq!(s.total_duration(), 6000.0);
        assert_eq!(s.step_at(0.0), 0);
        assert_eq!(s.step_at(999.9), 0);
        assert_eq!(s.step_at(1000.0), 1);
        assert_eq!(s.step_at(5500.0), 5);
    }

    #[test]
    fn grid_stops_before_the_end() {
        let p = SystemParams::default();
        let s = ProtocolSchedule::switching_default(&p, 1000.0);
        let grid = s.t0_grid(64, 250.0);
        assert_eq!(grid.len(), 6 * 64 - 15);
        assert_eq!(*grid.last().unwrap(), 5750.0);
        assert!(grid.contains(&500.0) && grid.contains(&1500.0) && grid.contains(&2500.0));
    }

    #[test]
    fn rejects_bad_steps() {
        let bad = vec![ScheduleStep { omega: 0.1, duration: 0.0 }];
        assert!(ProtocolSchedule::new(bad).is_err());
        assert!(ProtocolSchedule::new(vec![]).is_err());
    }
}
