//! Two-time photon correlations via the quantum regression theorem.
//!
//! For a first detection at time t the conditional operator
//! `σ_jl = a_l ρ(t) a_j†` is propagated over the delay τ' with the same
//! generator as the state, and
//! `G_{jk,lm}(t, τ') = Tr[a_k† a_m σ_jl(τ')]`.

use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64 as C64;

use super::window::{MeasurementWindow, Quadrature};
use crate::dynamics::{vectorize, DensityMatrix, LiouvillianSchedule, Superoperator};
use crate::error::{Error, Result};
use crate::space::{HilbertSpace, Mode, Operator};

/// Correlation entries `(j,k,l,m)` stored as a 4×4 matrix with row `2j+k` and
/// column `2l+m` (H = 0, V = 1).
#[derive(Debug, Clone, PartialEq)]
pub struct G2Tensor {
    pub entries: Array2<C64>,
    pub window: Option<MeasurementWindow>,
}

impl G2Tensor {
    pub fn zeros() -> Self {
        Self {
            entries: Array2::zeros((4, 4)),
            window: None,
        }
    }

    pub fn get(&self, j: Mode, k: Mode, l: Mode, m: Mode) -> C64 {
        self.entries[[2 * j.index() + k.index(), 2 * l.index() + m.index()]]
    }

    /// Largest violation of `G(j,k,l,m) = conj(G(l,m,j,k))`.
    pub fn exchange_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                worst = worst.max((self.entries[[r, c]] - self.entries[[c, r]].conj()).norm());
            }
        }
        worst
    }

    /// Coincidence normalization `Σ_{jk} G(j,k,j,k)`.
    pub fn pair_total(&self) -> f64 {
        (0..4).map(|i| self.entries[[i, i]].re).sum()
    }
}

/// Cavity operators entering the correlation functions.
#[derive(Debug, Clone)]
pub struct PairOperators {
    annihilators: [Operator; 2],
    creators: [Operator; 2],
    /// `vec((a_k† a_m)ᵀ)` so that `c·vec(σ) = Tr[a_k† a_m σ]`, indexed `2k+m`.
    observables: [Vec<C64>; 4],
}

impl PairOperators {
    pub fn new(space: &HilbertSpace) -> Self {
        let annihilators = [space.annihilation(Mode::H), space.annihilation(Mode::V)];
        let creators = [annihilators[0].dag(), annihilators[1].dag()];
        let observables = std::array::from_fn(|km| {
            let (k, m) = (km / 2, km % 2);
            let o = creators[k].matmul(&annihilators[m]);
            vectorize(&o.0.t().to_owned())
        });
        Self {
            annihilators,
            creators,
            observables,
        }
    }

    pub fn dim(&self) -> usize {
        self.annihilators[0].dim()
    }

    /// Vectorized `a_l ρ a_j†`, indexed `2j+l`.
    fn conditional(&self, rho: &Array2<C64>) -> [Vec<C64>; 4] {
        std::array::from_fn(|jl| {
            let (j, l) = (jl / 2, jl % 2);
            let s = self.annihilators[l].0.dot(rho).dot(&self.creators[j].0);
            vectorize(&s)
        })
    }

    fn observe(&self, km: usize, sigma: &[C64]) -> C64 {
        dot(&self.observables[km], sigma)
    }
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_dim(ops: &PairOperators, rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != ops.dim() {
        return Err(Error::DimensionMismatch {
            expected: ops.dim(),
            actual: rho.dim(),
        });
    }
    Ok(())
}

/// `G(t, τ')` for all polarization indices at a single delay.
pub fn g2_point(l: &Superoperator, rho_t: &DensityMatrix, tau_prime: f64) -> Result<G2Tensor> {
    if !(tau_prime >= 0.0) {
        return Err(Error::NegativeDuration(tau_prime));
    }
    let space = HilbertSpace::from_total_dim(l.hilbert_dim())?;
    let ops = PairOperators::new(&space);
    check_dim(&ops, rho_t)?;
    let sigmas = ops.conditional(&rho_t.0);
    let mut g = G2Tensor::zeros();
    for (jl, sigma) in sigmas.iter().enumerate() {
        let evolved = l.sparse().expm_action(sigma, tau_prime);
        let (j, ll) = (jl / 2, jl % 2);
        for km in 0..4 {
            let (k, m) = (km / 2, km % 2);
            g.entries[[2 * j + k, 2 * ll + m]] = ops.observe(km, &evolved);
        }
    }
    Ok(g)
}

/// Covectors `Σ_i w_i c_kmᵀ exp(L τ'_i)` for a delay window under one
/// constant generator, turning the delay integral into four dot products.
#[derive(Debug, Clone)]
struct DelayKernel {
    covectors: [Vec<C64>; 4],
}

impl DelayKernel {
    fn new(l: &Superoperator, ops: &PairOperators, tau: f64, weights: &[f64]) -> Self {
        let step = if weights.len() > 1 {
            tau / (weights.len() - 1) as f64
        } else {
            0.0
        };
        let lt = l.sparse_transpose();
        let covectors = std::array::from_fn(|km| {
            let mut c = ops.observables[km].clone();
            let mut acc: Vec<C64> = c.iter().map(|z| z * weights[0]).collect();
            for &w in &weights[1..] {
                c = lt.expm_action(&c, step);
                for (a, z) in acc.iter_mut().zip(&c) {
                    *a += z * w;
                }
            }
            acc
        });
        Self { covectors }
    }
}

/// Delay-window integrals `∫₀^τ G(t, τ') dτ'` under a switching schedule.
#[derive(Debug, Clone)]
pub struct CorrelationEngine {
    schedule: LiouvillianSchedule,
    ops: PairOperators,
    tau: f64,
    quadrature: Quadrature,
    tau_weights: Vec<f64>,
    /// Kernel per schedule segment; segments sharing a generator share a kernel.
    kernels: Vec<Arc<DelayKernel>>,
}

impl CorrelationEngine {
    pub fn new(schedule: LiouvillianSchedule, tau: f64, quadrature: Quadrature) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidWindow(format!("delay window must be positive, got {tau}")));
        }
        quadrature.validate()?;
        let space = HilbertSpace::from_total_dim(schedule.hilbert_dim())?;
        let ops = PairOperators::new(&space);
        let tau_weights = trapezoid_weights(quadrature.tau_nodes, tau);

        let mut kernels: Vec<Arc<DelayKernel>> = Vec::new();
        let mut seen: Vec<(*const Superoperator, Arc<DelayKernel>)> = Vec::new();
        let starts: Vec<f64> = std::iter::once(0.0)
            .chain(schedule.boundaries().iter().copied())
            .collect();
        for t in starts {
            let l = schedule.generator_at(t);
            let ptr = Arc::as_ptr(l);
            let kernel = match seen.iter().find(|(p, _)| *p == ptr) {
                Some((_, k)) => Arc::clone(k),
                None => {
                    let k = Arc::new(DelayKernel::new(l, &ops, tau, &tau_weights));
                    seen.push((ptr, Arc::clone(&k)));
                    k
                }
            };
            kernels.push(kernel);
        }
        Ok(Self {
            schedule,
            ops,
            tau,
            quadrature,
            tau_weights,
            kernels,
        })
    }

    /// Engine for a time-independent generator.
    pub fn stationary(l: Arc<Superoperator>, tau: f64, quadrature: Quadrature) -> Result<Self> {
        Self::new(LiouvillianSchedule::constant(l), tau, quadrature)
    }

    pub fn schedule(&self) -> &LiouvillianSchedule {
        &self.schedule
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn quadrature(&self) -> Quadrature {
        self.quadrature
    }

    /// Delay integral for a first detection at `t` with state `rho_t`.
    pub fn delay_integral(&self, t: f64, rho_t: &DensityMatrix) -> Result<G2Tensor> {
        check_dim(&self.ops, rho_t)?;
        match self.schedule.crossings(t, t + self.tau) {
            0 => Ok(self.delay_integral_kernel(t, rho_t)),
            1 => self.delay_integral_forward(t, rho_t),
            crossings => Err(Error::WindowSpansMultipleSwitches { t, crossings }),
        }
    }

    fn delay_integral_kernel(&self, t: f64, rho_t: &DensityMatrix) -> G2Tensor {
        let kernel = &self.kernels[self.schedule.segment_at(t)];
        let sigmas = self.ops.conditional(&rho_t.0);
        let mut g = G2Tensor::zeros();
        for (jl, sigma) in sigmas.iter().enumerate() {
            let (j, l) = (jl / 2, jl % 2);
            for km in 0..4 {
                let (k, m) = (km / 2, km % 2);
                g.entries[[2 * j + k, 2 * l + m]] = dot(&kernel.covectors[km], sigma);
            }
        }
        g
    }

    /// Reference route: propagates each conditional operator node by node
    /// through the schedule.
    pub fn delay_integral_forward(&self, t: f64, rho_t: &DensityMatrix) -> Result<G2Tensor> {
        check_dim(&self.ops, rho_t)?;
        let n = self.tau_weights.len();
        let step = if n > 1 { self.tau / (n - 1) as f64 } else { 0.0 };
        let sigmas = self.ops.conditional(&rho_t.0);
        let mut g = G2Tensor::zeros();
        for (jl, sigma) in sigmas.into_iter().enumerate() {
            let (j, l) = (jl / 2, jl % 2);
            let mut s = sigma;
            let mut acc = [C64::new(0.0, 0.0); 4];
            for (i, &w) in self.tau_weights.iter().enumerate() {
                if i > 0 {
                    let from = t + (i - 1) as f64 * step;
                    let to = t + i as f64 * step;
                    s = self.schedule.evolve_vec(&s, from, to)?;
                }
                for (km, a) in acc.iter_mut().enumerate() {
                    *a += self.ops.observe(km, &s) * w;
                }
            }
            for km in 0..4 {
                let (k, m) = (km / 2, km % 2);
                g.entries[[2 * j + k, 2 * l + m]] = acc[km];
            }
        }
        Ok(g)
    }

    /// Real-time nodes and trapezoid weights for a window starting at `t0`.
    pub fn time_nodes(&self, t0: f64, dt: f64) -> Vec<(f64, f64)> {
        if dt == 0.0 {
            return vec![(t0, 1.0)];
        }
        let n = self.quadrature.t_nodes;
        let h = dt / (n - 1) as f64;
        trapezoid_weights(n, dt)
            .into_iter()
            .enumerate()
            .map(|(i, w)| (t0 + i as f64 * h, w))
            .collect()
    }

    /// `Ḡ = ∫_{t0}^{t0+Δt} dt ∫_0^τ dτ' G(t, τ')` from the state at `t0`.
    ///
    /// A zero-width window reduces the outer integral to a point evaluation.
    pub fn averaged_g2(&self, rho_t0: &DensityMatrix, window: MeasurementWindow) -> Result<G2Tensor> {
        window.validate()?;
        check_dim(&self.ops, rho_t0)?;
        if (window.tau - self.tau).abs() > 1e-12 * self.tau {
            return Err(Error::InvalidWindow(format!(
                "engine built for tau = {} ps, window has tau = {} ps",
                self.tau, window.tau
            )));
        }
        let mut total = G2Tensor::zeros();
        let mut v = rho_t0.to_vec();
        let mut t_prev = window.t0;
        let n = rho_t0.dim();
        for (t, w) in self.time_nodes(window.t0, window.dt) {
            if t > t_prev {
                v = self.schedule.evolve_vec(&v, t_prev, t)?;
                t_prev = t;
            }
            let rho_t = DensityMatrix::from_vec(&v, n);
            let g = self.delay_integral(t, &rho_t)?;
            total.entries.scaled_add(C64::new(w, 0.0), &g.entries);
        }
        total.window = Some(window);
        Ok(total)
    }
}

/// Convenience wrapper building a one-off [`CorrelationEngine`].
pub fn averaged_g2(
    schedule: &LiouvillianSchedule,
    rho_at_t0: &DensityMatrix,
    window: MeasurementWindow,
    quadrature: Quadrature,
) -> Result<G2Tensor> {
    CorrelationEngine::new(schedule.clone(), window.tau, quadrature)?.averaged_g2(rho_at_t0, window)
}

/// Composite trapezoid weights for `n` uniform nodes spanning `span`.
pub fn trapezoid_weights(n: usize, span: f64) -> Vec<f64> {
    if n < 2 {
        return vec![span];
    }
    let h = span / (n - 1) as f64;
    (0..n)
        .map(|i| if i == 0 || i == n - 1 { 0.5 * h } else { h })
        .collect()
}
