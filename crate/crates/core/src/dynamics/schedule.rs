//! Piecewise-constant generators in time.

use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::liouvillian::Superoperator;
use crate::error::{Error, Result};

/// Generators on consecutive intervals starting at t = 0. The last generator
/// keeps acting after the final boundary.
#[derive(Debug, Clone)]
pub struct LiouvillianSchedule {
    /// Start time of each segment; `starts[0] == 0`.
    starts: Vec<f64>,
    end: f64,
    generators: Vec<Arc<Superoperator>>,
}

impl LiouvillianSchedule {
    /// A single generator acting for all time.
    pub fn constant(l: Arc<Superoperator>) -> Self {
        Self {
            starts: vec![0.0],
            end: f64::INFINITY,
            generators: vec![l],
        }
    }

    pub fn from_steps(steps: Vec<(Arc<Superoperator>, f64)>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::InvalidSchedule("no steps".into()));
        }
        let dim = steps[0].0.dim();
        let mut starts = Vec::with_capacity(steps.len());
        let mut generators = Vec::with_capacity(steps.len());
        let mut t = 0.0;
        for (l, duration) in steps {
            if !(duration > 0.0) || !duration.is_finite() {
                return Err(Error::InvalidSchedule(format!(
                    "step duration must be positive and finite, got {duration}"
                )));
            }
            if l.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: l.dim(),
                });
            }
            starts.push(t);
            generators.push(l);
            t += duration;
        }
        Ok(Self {
            starts,
            end: t,
            generators,
        })
    }

    /// Nominal end of the last step.
    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn hilbert_dim(&self) -> usize {
        self.generators[0].hilbert_dim()
    }

    /// Interior switching times.
    pub fn boundaries(&self) -> &[f64] {
        &self.starts[1..]
    }

    pub fn segment_at(&self, t: f64) -> usize {
        self.starts.partition_point(|&s| s <= t).saturating_sub(1)
    }

    pub fn generator_at(&self, t: f64) -> &Arc<Superoperator> {
        &self.generators[self.segment_at(t)]
    }

    /// Number of switching times strictly inside `(from, to)`.
    pub fn crossings(&self, from: f64, to: f64) -> usize {
        self.boundaries()
            .iter()
            .filter(|&&b| b > from && b < to)
            .count()
    }

    /// Propagates a vectorized operator from `from` to `to`, switching
    /// generators at the boundaries in between.
    pub fn evolve_vec(&self, v: &[C64], from: f64, to: f64) -> Result<Vec<C64>> {
        if to < from {
            return Err(Error::NegativeDuration(to - from));
        }
        let mut out = v.to_vec();
        let mut t = from;
        while t < to {
            let seg = self.segment_at(t);
            let seg_end = self.starts.get(seg + 1).copied().unwrap_or(f64::INFINITY);
            let stop = seg_end.min(to);
            out = self.generators[seg].sparse().expm_action(&out, stop - t);
            t = stop;
        }
        if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { duration: to - from });
        }
        Ok(out)
    }
}
