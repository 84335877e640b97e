use ndarray::Array2;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

use entswitch_core::correlations::{concurrence, BellState, TwoPhotonDensityMatrix};
use entswitch_core::dressed::{dressed_energies, resonance_table, TransitionPair};
use entswitch_core::dynamics::{expm, CsrMatrix};

fn complex_matrix(n: usize, scale: f64) -> impl Strategy<Value = Array2<C64>> {
    prop::collection::vec((-scale..scale, -scale..scale), n * n).prop_map(move |v| {
        Array2::from_shape_vec((n, n), v.into_iter().map(|(re, im)| C64::new(re, im)).collect()).unwrap()
    })
}

fn amplitudes() -> impl Strategy<Value = [C64; 4]> {
    prop::array::uniform4((-1.0..1.0f64, -1.0..1.0f64))
        .prop_filter("nonzero", |a| a.iter().map(|(x, y)| x * x + y * y).sum::<f64>() > 1e-3)
        .prop_map(|a| {
            let norm = a.iter().map(|(x, y)| x * x + y * y).sum::<f64>().sqrt();
            a.map(|(x, y)| C64::new(x / norm, y / norm))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dressed_levels_stay_ordered(delta0 in 0.1..5.0f64, omega in 0.0..10.0f64) {
        let e = dressed_energies(delta0, omega);
        prop_assert!(e.e_u >= e.e_m && e.e_m >= e.e_n && e.e_n >= e.e_l);
        // trace of the emitter block: 2Δ₀
        let sum: f64 = e.as_array().iter().sum();
        prop_assert!((sum - 2.0 * delta0).abs() < 1e-12 * delta0.max(omega));
    }

    #[test]
    fn resonances_solve_their_condition(delta0 in 0.2..3.0f64, ratio in 0.3..2.0f64) {
        let delta = ratio * delta0;
        for r in resonance_table(delta, delta0, 50.0 * delta0, 3) {
            let gap = r.pair.gap(&dressed_energies(delta0, r.omega));
            prop_assert!((r.photons as f64 * delta - gap).abs() < 1e-9 * delta0);
        }
        prop_assert_eq!(TransitionPair::all().len(), 6);
    }

    #[test]
    fn pure_state_concurrence(a in amplitudes()) {
        // C = 2|αδ - βγ| for α|HH⟩ + β|HV⟩ + γ|VH⟩ + δ|VV⟩
        let expected = 2.0 * (a[0] * a[3] - a[1] * a[2]).norm();
        let c = concurrence(&TwoPhotonDensityMatrix::pure(a)).unwrap();
        prop_assert!((c - expected).abs() < 1e-7, "{} vs {}", c, expected);
    }

    #[test]
    fn mixing_with_noise_never_raises_concurrence(p in 0.0..1.0f64) {
        let bell = TwoPhotonDensityMatrix::bell(BellState::PsiMinus);
        let noise = TwoPhotonDensityMatrix::maximally_mixed();
        let rho = TwoPhotonDensityMatrix::new(&bell.entries * p + &noise.entries * (1.0 - p));
        let c = concurrence(&rho).unwrap();
        prop_assert!((0.0..=1.0).contains(&c));
        prop_assert!(c <= p + 1e-12);
    }

    #[test]
    fn sparse_action_matches_dense_exponential(a in complex_matrix(6, 1.0), t in 0.0..3.0f64) {
        let dense = expm(&(&a * C64::new(t, 0.0))).unwrap();
        let v: Vec<C64> = (0..6).map(|i| C64::new(1.0 / (i + 1) as f64, 0.5)).collect();
        let got = CsrMatrix::from_dense(&a).expm_action(&v, t);
        let want = dense.dot(&ndarray::Array1::from(v));
        let err = got.iter().zip(want.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        let scale = want.iter().map(|z| z.norm()).fold(1.0, f64::max);
        prop_assert!(err < 1e-10 * scale, "{}", err);
    }

    #[test]
    fn exponential_of_sum_of_commuting_parts(d in prop::collection::vec(-2.0..2.0f64, 5), s in -1.0..1.0f64) {
        // exp(D + sI) = e^s exp(D) for diagonal D
        let diag = Array2::from_diag(&ndarray::Array1::from(d.iter().map(|&x| C64::new(0.0, x)).collect::<Vec<_>>()));
        let shifted = &diag + &(Array2::<C64>::eye(5) * C64::new(s, 0.0));
        let lhs = expm(&shifted).unwrap();
        let rhs = expm(&diag).unwrap() * C64::new(s.exp(), 0.0);
        let err = (&lhs - &rhs).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-13, "{}", err);
    }
}
