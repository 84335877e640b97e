//! Rotating-frame Hamiltonian and Lindblad collapse channels.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::params::SystemParams;
use crate::space::{BasisState, FleState, HilbertSpace, Mode, Operator};

/// Hamiltonian in the frame rotating with the laser, in meV.
///
/// The biexciton sits at zero (two-photon resonant drive) and the single
/// excitons at `delta0 ± fss/2`. The linearly polarized laser drives every
/// emitter transition with amplitude `omega / √2`, so that the undamped
/// emitter alone has the dressed energies `(Δ₀ ± √(Δ₀² + 8Ω²))/2`, `Δ₀`, `0`.
pub fn build_hamiltonian(space: &HilbertSpace, p: &SystemParams, omega: f64) -> Operator {
    let dim = space.total_dim();
    let mut h = Operator::zeros(dim);

    h = h + space.projector(FleState::XH) * (p.delta0 + 0.5 * p.fss);
    h = h + space.projector(FleState::XV) * (p.delta0 - 0.5 * p.fss);
    h = h + space.total_number() * p.delta;

    let drive = omega / std::f64::consts::SQRT_2;
    for mode in Mode::ALL {
        let x = mode.exciton();
        let up = space.transition(x, FleState::G) + space.transition(FleState::XX, x);
        h = h + (up.clone() + up.dag()) * drive;

        let a_dag = space.annihilation(mode).dag();
        let lower = space.transition(FleState::G, x) + space.transition(x, FleState::XX);
        let emit = a_dag.matmul(&lower);
        h = h + (emit.clone() + emit.dag()) * p.g;
    }
    h
}

/// Emitter-only Hamiltonian block at fixed photon numbers, in the basis
/// order `G, X_H, X_V, XX`.
pub fn fle_block(space: &HilbertSpace, h: &Operator, n_h: usize, n_v: usize) -> Array2<C64> {
    let idx: Vec<usize> = FleState::ALL
        .iter()
        .map(|&s| space.index(BasisState::new(s, n_h, n_v)))
        .collect();
    Array2::from_shape_fn((4, 4), |(i, j)| h.0[[idx[i], idx[j]]])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    CavityLoss(Mode),
    Radiative,
    PureDephasing(FleState),
}

/// A collapse operator with its rate (1/ps).
#[derive(Debug, Clone)]
pub struct Channel {
    pub op: Operator,
    pub rate: f64,
    pub kind: ChannelKind,
}

/// Cavity loss on both modes, radiative decay on all four emitter
/// transitions and, for nonzero `gamma_pd`, projector dephasing.
///
/// The projector channels carry rate `gamma_pd / 2`: summed in Lindblad form
/// they give `-(gamma_pd/2) Σ_{χ≠χ'} |χ⟩⟨χ|ρ|χ'⟩⟨χ'|`, leaving populations
/// untouched.
pub fn build_dissipators(space: &HilbertSpace, p: &SystemParams) -> Vec<Channel> {
    let mut channels = Vec::with_capacity(10);
    for mode in Mode::ALL {
        channels.push(Channel {
            op: space.annihilation(mode),
            rate: p.kappa,
            kind: ChannelKind::CavityLoss(mode),
        });
    }
    for x in [FleState::XH, FleState::XV] {
        channels.push(Channel {
            op: space.transition(FleState::G, x),
            rate: p.gamma,
            kind: ChannelKind::Radiative,
        });
    }
    for x in [FleState::XH, FleState::XV] {
        channels.push(Channel {
            op: space.transition(x, FleState::XX),
            rate: p.gamma,
            kind: ChannelKind::Radiative,
        });
    }
    if p.gamma_pd > 0.0 {
        for s in FleState::ALL {
            channels.push(Channel {
                op: space.projector(s),
                rate: 0.5 * p.gamma_pd,
                kind: ChannelKind::PureDephasing(s),
            });
        }
    }
    channels
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::build_space;
    use ndarray_linalg::{EigValsh, UPLO};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lindblad_action(channels: &[Channel], rho: &Array2<C64>) -> Array2<C64> {
        let mut out = Array2::zeros(rho.raw_dim());
        for c in channels {
            let a = &c.op.0;
            let ad = c.op.dag().0;
            let ada = ad.dot(a);
            let term = a.dot(rho).dot(&ad) - (ada.dot(rho) + rho.dot(&ada)) * C64::new(0.5, 0.0);
            out = out + term * C64::new(c.rate, 0.0);
        }
        out
    }

    #[test]
    fn undriven_emitter_energies() {
        let space = build_space(2).unwrap();
        let p = SystemParams { g: 0.0, ..Default::default() };
        let h = build_hamiltonian(&space, &p, 0.0);
        let mut e = fle_block(&space, &h, 0, 0).eigvalsh(UPLO::Lower).unwrap().to_vec();
        e.sort_by(f64::total_cmp);
        let d0 = p.delta0;
        let expected = [0.0, 0.0, d0, d0];
        for (a, b) in e.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12 * d0);
        }
    }

    #[test]
    fn upper_lower_gap_at_phi_drive() {
        let space = build_space(1).unwrap();
        let g = SystemParams::default().g;
        let p = SystemParams { g: 0.0, ..Default::default() };
        let h = build_hamiltonian(&space, &p, 8.85 * g);
        let e = fle_block(&space, &h, 0, 0).eigvalsh(UPLO::Lower).unwrap();
        let gap = (e[3] - e[0]) / g;
        // √(400 + 8·8.85²) = 32.04029
        assert!((gap - 32.040_287).abs() < 1e-6, "{gap}");
    }

    #[test]
    fn hamiltonian_is_hermitian_and_swap_symmetric() {
        let space = build_space(2).unwrap();
        let swap = space.hv_swap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let omega = rng.gen_range(0.0..2.0);
            let fss = rng.gen_range(-0.2..0.2);
            let p = SystemParams { fss, ..Default::default() };
            let h = build_hamiltonian(&space, &p, omega);
            assert_eq!(h.hermiticity_deviation(), 0.0);

            let p0 = SystemParams::default();
            let h0 = build_hamiltonian(&space, &p0, omega);
            let conj = swap.matmul(&h0).matmul(&swap);
            assert!(crate::space::max_abs_diff(&conj.0, &h0.0) < 1e-12);
        }
    }

    #[test]
    fn six_channels_without_dephasing() {
        let space = build_space(2).unwrap();
        let channels = build_dissipators(&space, &SystemParams::default());
        assert_eq!(channels.len(), 6);
        assert!(channels.iter().all(|c| c.rate >= 0.0));
        let p = SystemParams::default().with_gamma_pd(0.01);
        assert_eq!(build_dissipators(&space, &p).len(), 10);
    }

    #[test]
    fn dephasing_damps_coherences_at_half_rate() {
        let space = build_space(1).unwrap();
        let gamma_pd = 0.004;
        let p = SystemParams { kappa: 0.0, gamma: 0.0, gamma_pd, ..Default::default() };
        let channels = build_dissipators(&space, &p);

        let g = space.index(BasisState::new(FleState::G, 0, 0));
        let xh = space.index(BasisState::new(FleState::XH, 0, 0));
        let mut rho = Array2::zeros((space.total_dim(), space.total_dim()));
        rho[[g, xh]] = C64::new(1.0, 0.0);
        let out = lindblad_action(&channels, &rho);
        let expected = &rho * C64::new(-0.5 * gamma_pd, 0.0);
        assert!(crate::space::max_abs_diff(&out, &expected) < 1e-15);

        let rho = space.pure_state(BasisState::new(FleState::G, 0, 0));
        let out = lindblad_action(&channels, &rho);
        assert!(out.iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn cavity_loss_moves_population_to_vacuum() {
        let space = build_space(2).unwrap();
        let p = SystemParams::default();
        let channels: Vec<_> = build_dissipators(&space, &p)
            .into_iter()
            .filter(|c| matches!(c.kind, ChannelKind::CavityLoss(_)))
            .collect();
        let one = space.index(BasisState::new(FleState::G, 1, 0));
        let vac = space.index(BasisState::new(FleState::G, 0, 0));
        let rho = space.pure_state(BasisState::new(FleState::G, 1, 0));
        let out = lindblad_action(&channels, &rho);
        assert!((out[[one, one]].re + p.kappa).abs() < 1e-15);
        assert!((out[[vac, vac]].re - p.kappa).abs() < 1e-15);
    }
}
