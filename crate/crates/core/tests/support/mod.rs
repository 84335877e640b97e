#![allow(dead_code)]

use std::sync::Arc;

use ndarray::{Array2, Zip};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use entswitch_core::correlations::{
    concurrence, g2_point, two_photon_density_matrix, BellState, CorrelationEngine,
    MeasurementWindow, Quadrature, TwoPhotonDensityMatrix, DEFAULT_TAU,
};
use entswitch_core::dynamics::{
    evolve, expectation, model_liouvillian, propagate, steady_state, DensityMatrix, Propagator, Superoperator,
};
use entswitch_core::protocol::{analyze_steady_state, AnalysisOptions};
use entswitch_core::space::{BasisState, FleState};
use entswitch_core::{HilbertSpace, Mode, SystemParams};

/// `Ok(detail)` on success, `Err(detail)` on failure.
pub type Check = std::result::Result<String, String>;

pub const PROTOCOL_OMEGAS: [f64; 3] = [8.85, 18.0, 28.75];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> Array2<C64> {
    Array2::from_shape_fn((n, n), |_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// `A A† / Tr(A A†)` for a random complex `A`.
pub fn random_density(n: usize, rng: &mut ChaCha8Rng) -> Array2<C64> {
    let a = random_matrix(n, rng);
    let rho = a.dot(&a.t().mapv(|z| z.conj()));
    let tr = rho.diag().sum();
    rho / tr
}

pub fn random_unitary2(rng: &mut ChaCha8Rng) -> Array2<C64> {
    let (t, p1, p2, p0) = (
        rng.gen_range(0.0..std::f64::consts::PI),
        rng.gen_range(0.0..std::f64::consts::TAU),
        rng.gen_range(0.0..std::f64::consts::TAU),
        rng.gen_range(0.0..std::f64::consts::TAU),
    );
    let a = C64::from_polar((0.5 * t).cos(), p1);
    let b = C64::from_polar((0.5 * t).sin(), p2);
    let g = C64::from_polar(1.0, p0);
    ndarray::array![[a * g, b * g], [-b.conj() * g, a.conj() * g]]
}

pub fn kron2(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    Array2::from_shape_fn((4, 4), |(r, s)| a[[r / 2, s / 2]] * b[[r % 2, s % 2]])
}

pub fn max_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    Zip::from(a).and(b).fold(0.0f64, |m, x, y| m.max((x - y).norm()))
}

pub fn dagger(a: &Array2<C64>) -> Array2<C64> {
    a.t().mapv(|z| z.conj())
}

fn induced_one_norm(a: &Array2<C64>) -> f64 {
    a.columns()
        .into_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn liouvillian(p: &SystemParams, omega_over_g: f64) -> (HilbertSpace, Arc<Superoperator>) {
    let space = HilbertSpace::new(p.n_max).unwrap();
    let l = model_liouvillian(&space, p, omega_over_g * p.g).unwrap();
    (space, l)
}

fn all_ok(failures: Vec<String>, detail: String) -> Check {
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(failures.join("; "))
    }
}

/// Trace, Hermiticity and positivity after propagation of random states.
pub fn cptp_random_states(samples: usize) -> Check {
    let p = SystemParams::default();
    let (space, l) = liouvillian(&p, 8.85);
    let n = space.total_dim();
    let mut r = rng(11);
    let durations = [0.5, 40.0, 1000.0];
    let props: Vec<Propagator> = durations.iter().map(|&d| Propagator::new(&l, d).unwrap()).collect();
    let (mut tr, mut herm, mut neg) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..samples {
        let rho = DensityMatrix::new(random_density(n, &mut r));
        let out = props[i % props.len()].apply(&rho).map_err(|e| e.to_string())?;
        let d = out.diagnostics().map_err(|e| e.to_string())?;
        tr = tr.max(d.trace_error);
        herm = herm.max(d.hermiticity);
        neg = neg.min(d.min_eigenvalue);
    }
    let mut failures = Vec::new();
    if tr >= 1e-8 {
        failures.push(format!("trace error {tr:.2e}"));
    }
    if herm >= 1e-8 {
        failures.push(format!("hermiticity {herm:.2e}"));
    }
    if neg <= -1e-7 {
        failures.push(format!("min eigenvalue {neg:.2e}"));
    }
    all_ok(failures, format!("{samples} states, trace {tr:.1e}, herm {herm:.1e}, min eig {neg:.1e}"))
}

/// `P(t1 + t2) = P(t2) P(t1)` in the induced 1-norm.
pub fn semigroup() -> Check {
    let p = SystemParams::default().with_n_max(1);
    let (_, l) = liouvillian(&p, 28.75);
    let (t1, t2) = (37.0, 115.0);
    let p1 = Propagator::new(&l, t1).map_err(|e| e.to_string())?;
    let p2 = Propagator::new(&l, t2).map_err(|e| e.to_string())?;
    let p12 = Propagator::new(&l, t1 + t2).map_err(|e| e.to_string())?;
    let composed = p2.matrix().dot(p1.matrix());
    let err = induced_one_norm(&(&composed - p12.matrix()));
    if err < 1e-9 {
        Ok(format!("composition error {err:.1e}"))
    } else {
        Err(format!("composition error {err:.2e}"))
    }
}

/// Dense exponential and sparse Taylor action agree.
pub fn dense_and_sparse_propagation_agree() -> Check {
    let p = SystemParams::default();
    let (space, l) = liouvillian(&p, 18.0);
    let mut r = rng(5);
    let rho = DensityMatrix::new(random_density(space.total_dim(), &mut r));
    let mut worst = 0.0f64;
    for d in [3.0, 250.0] {
        let a = propagate(&l, &rho, d).map_err(|e| e.to_string())?;
        let b = evolve(&l, &rho, d).map_err(|e| e.to_string())?;
        worst = worst.max(max_diff(a.matrix(), b.matrix()));
    }
    if worst < 1e-10 {
        Ok(format!("max deviation {worst:.1e}"))
    } else {
        Err(format!("max deviation {worst:.2e}"))
    }
}

/// Null-space solve against long propagation at the Φ drive.
pub fn steady_state_matches_long_time_limit() -> Check {
    let p = SystemParams::default();
    let (space, l) = liouvillian(&p, 8.85);
    let ss = steady_state(&l).map_err(|e| e.to_string())?;
    let ground = DensityMatrix::new(space.pure_state(BasisState::new(FleState::G, 0, 0)));
    let duration = 20_000.0;
    let late = propagate(&l, &ground, duration).map_err(|e| e.to_string())?;
    let number = space.total_number();
    let n_ss = expectation(&ss, &number).unwrap().re;
    let n_late = expectation(&late, &number).unwrap().re;
    let err = (n_ss - n_late).abs();
    if err < 1e-6 {
        Ok(format!("|Δ⟨n⟩| = {err:.1e} after {duration} ps"))
    } else {
        Err(format!("|Δ⟨n⟩| = {err:.2e} after {duration} ps"))
    }
}

/// `G(t, 0) = Tr[a_j† a_k† a_m a_l ρ]` on random states.
pub fn regression_zero_delay(samples: usize) -> Check {
    let p = SystemParams::default();
    let (space, l) = liouvillian(&p, 28.75);
    let n = space.total_dim();
    let a = [space.annihilation(Mode::H).0, space.annihilation(Mode::V).0];
    let ad = [dagger(&a[0]), dagger(&a[1])];
    let mut r = rng(23);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let rho = random_density(n, &mut r);
        let g = g2_point(&l, &DensityMatrix::new(rho.clone()), 0.0).map_err(|e| e.to_string())?;
        for j in Mode::ALL {
            for k in Mode::ALL {
                for ll in Mode::ALL {
                    for m in Mode::ALL {
                        let op = ad[j.index()]
                            .dot(&ad[k.index()])
                            .dot(&a[m.index()])
                            .dot(&a[ll.index()]);
                        let direct = op.dot(&rho).diag().sum();
                        worst = worst.max((g.get(j, k, ll, m) - direct).norm());
                    }
                }
            }
        }
    }
    if worst < 1e-10 {
        Ok(format!("{samples} states, max deviation {worst:.1e}"))
    } else {
        Err(format!("max deviation {worst:.2e}"))
    }
}

pub fn werner(p: f64) -> TwoPhotonDensityMatrix {
    let bell = TwoPhotonDensityMatrix::bell(BellState::PhiPlus).entries;
    let mixed = Array2::<C64>::eye(4) * c(0.25, 0.0);
    TwoPhotonDensityMatrix::new(bell * c(p, 0.0) + mixed * c(1.0 - p, 0.0))
}

/// Bell states, a product state and Werner states against closed forms.
pub fn concurrence_oracles() -> Check {
    let mut worst = 0.0f64;
    for b in BellState::ALL {
        let cval = concurrence(&TwoPhotonDensityMatrix::bell(b)).map_err(|e| e.to_string())?;
        worst = worst.max((cval - 1.0).abs());
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // (|H⟩ + i|V⟩)/√2 ⊗ |H⟩
    let product = TwoPhotonDensityMatrix::pure([c(s, 0.0), c(0.0, 0.0), c(0.0, s), c(0.0, 0.0)]);
    worst = worst.max(concurrence(&product).map_err(|e| e.to_string())?);
    for i in 0..20 {
        let p = i as f64 / 19.0;
        let expected = ((3.0 * p - 1.0) / 2.0).max(0.0);
        let cval = concurrence(&werner(p)).map_err(|e| e.to_string())?;
        worst = worst.max((cval - expected).abs());
    }
    if worst < 1e-9 {
        Ok(format!("Bell, product and 20 Werner states, max error {worst:.1e}"))
    } else {
        Err(format!("max error {worst:.2e}"))
    }
}

/// Concurrence is unchanged by `U_A ⊗ U_B`.
pub fn local_unitary_invariance(samples: usize) -> Check {
    let mut r = rng(31);
    let mut worst = 0.0f64;
    for i in 0..samples {
        let w = (i as f64 + 0.5) / samples as f64;
        let base = random_density(4, &mut r) * c(1.0 - w, 0.0)
            + TwoPhotonDensityMatrix::bell(BellState::PsiMinus).entries * c(w, 0.0);
        let u = kron2(&random_unitary2(&mut r), &random_unitary2(&mut r));
        let rotated = u.dot(&base).dot(&dagger(&u));
        let c0 = concurrence(&TwoPhotonDensityMatrix::new(base)).map_err(|e| e.to_string())?;
        let c1 = concurrence(&TwoPhotonDensityMatrix::new(rotated)).map_err(|e| e.to_string())?;
        worst = worst.max((c0 - c1).abs());
    }
    if worst < 1e-9 {
        Ok(format!("{samples} states, max change {worst:.1e}"))
    } else {
        Err(format!("max change {worst:.2e}"))
    }
}

/// Steady-state ρ²ᵖ is invariant under H↔V relabeling at zero splitting.
pub fn hv_symmetry_of_pairs() -> Check {
    let p = SystemParams::default();
    let opts = AnalysisOptions::default();
    let mut worst = 0.0f64;
    for w in PROTOCOL_OMEGAS {
        let a = analyze_steady_state(&p, w * p.g, DEFAULT_TAU, &opts).map_err(|e| e.to_string())?;
        let rho = &a.record.rho2p;
        worst = worst.max(max_diff(&rho.entries, &rho.hv_relabeled().entries));
    }
    if worst < 1e-8 {
        Ok(format!("max deviation {worst:.1e}"))
    } else {
        Err(format!("max deviation {worst:.2e}"))
    }
}

fn concurrence_with(
    engine: &CorrelationEngine,
    rho: &DensityMatrix,
    window: MeasurementWindow,
) -> Result<f64, String> {
    let g = engine.averaged_g2(rho, window).map_err(|e| e.to_string())?;
    let r2p = two_photon_density_matrix(&g).map_err(|e| e.to_string())?;
    concurrence(&r2p).map_err(|e| e.to_string())
}

/// Doubling both quadrature grids moves C by less than 1e-3, in steady
/// state and for a transient window.
pub fn quadrature_convergence() -> Check {
    let p = SystemParams::default();
    let base = Quadrature::default();
    let fine = base.refined();
    let mut worst = 0.0f64;
    for w in PROTOCOL_OMEGAS {
        let (_, l) = liouvillian(&p, w);
        let ss = steady_state(&l).map_err(|e| e.to_string())?;
        let window = MeasurementWindow::instant(0.0, DEFAULT_TAU);
        let coarse_engine = CorrelationEngine::stationary(l.clone(), DEFAULT_TAU, base).unwrap();
        let fine_engine = CorrelationEngine::stationary(l.clone(), DEFAULT_TAU, fine).unwrap();
        let c0 = concurrence_with(&coarse_engine, &ss, window)?;
        let c1 = concurrence_with(&fine_engine, &ss, window)?;
        worst = worst.max((c0 - c1).abs());

        // transient: 100 ps after switching on from the ground state
        let (space, _) = liouvillian(&p, w);
        let ground = DensityMatrix::new(space.pure_state(BasisState::new(FleState::G, 0, 0)));
        let rho_t0 = evolve(&l, &ground, 100.0).map_err(|e| e.to_string())?;
        let window = MeasurementWindow::new(0.0, 250.0, DEFAULT_TAU).unwrap();
        let c0 = concurrence_with(&coarse_engine, &rho_t0, window)?;
        let c1 = concurrence_with(&fine_engine, &rho_t0, window)?;
        worst = worst.max((c0 - c1).abs());
    }
    if worst < 1e-3 {
        Ok(format!("max |ΔC| {worst:.1e}"))
    } else {
        Err(format!("max |ΔC| {worst:.2e}"))
    }
}
