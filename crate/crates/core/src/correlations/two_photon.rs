//! Two-photon polarization density matrix, concurrence and Bell-family
//! classification.

use std::fmt;
use std::str::FromStr;

use ndarray::{array, Array1, Array2};
use ndarray_linalg::{EigVals, EigValsh, UPLO};
use num_complex::Complex64 as C64;

use super::g2::G2Tensor;
use super::window::MeasurementWindow;
use crate::dynamics::{expectation, DensityMatrix};
use crate::error::{Error, Result};
use crate::space::HilbertSpace;

/// Basis labels in matrix order; the first letter is the first detected photon.
pub const TWO_PHOTON_BASIS: [&str; 4] = ["HH", "HV", "VH", "VV"];

/// Concurrence below which photon pairs count as unentangled.
pub const DEFAULT_ENTANGLEMENT_THRESHOLD: f64 = 0.05;

const EIGEN_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TwoPhotonDensityMatrix {
    pub entries: Array2<C64>,
    pub window: Option<MeasurementWindow>,
}

impl TwoPhotonDensityMatrix {
    pub fn new(entries: Array2<C64>) -> Self {
        Self {
            entries,
            window: None,
        }
    }

    /// `|ψ⟩⟨ψ|` for a 4-component amplitude vector.
    pub fn pure(amplitudes: [C64; 4]) -> Self {
        let v = Array1::from(amplitudes.to_vec());
        let m = Array2::from_shape_fn((4, 4), |(i, j)| v[i] * v[j].conj());
        Self::new(m)
    }

    pub fn bell(state: BellState) -> Self {
        Self::pure(state.amplitudes())
    }

    pub fn maximally_mixed() -> Self {
        Self::new(Array2::eye(4) * C64::new(0.25, 0.0))
    }

    pub fn trace(&self) -> C64 {
        self.entries.diag().sum()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[[row, col]]
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let e = self.entries.eigvalsh(UPLO::Lower)?;
        Ok(e.iter().cloned().fold(f64::INFINITY, f64::min))
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                worst = worst.max((self.entries[[r, c]] - self.entries[[c, r]].conj()).norm());
            }
        }
        worst
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn fidelity(&self, state: BellState) -> f64 {
        let psi = state.amplitudes();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                acc += psi[i].conj() * self.entries[[i, j]] * psi[j];
            }
        }
        acc.re
    }

    /// Matrix with H and V exchanged on both photons.
    pub fn hv_relabeled(&self) -> Self {
        const PERM: [usize; 4] = [3, 2, 1, 0];
        let m = Array2::from_shape_fn((4, 4), |(i, j)| self.entries[[PERM[i], PERM[j]]]);
        Self {
            entries: m,
            window: self.window,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    pub fn amplitudes(self) -> [C64; 4] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let (a, b, c, d) = match self {
            BellState::PhiPlus => (s, 0.0, 0.0, s),
            BellState::PhiMinus => (s, 0.0, 0.0, -s),
            BellState::PsiPlus => (0.0, s, s, 0.0),
            BellState::PsiMinus => (0.0, s, -s, 0.0),
        };
        [a, b, c, d].map(|x| C64::new(x, 0.0))
    }

    pub fn family(self) -> Entanglement {
        match self {
            BellState::PhiPlus | BellState::PhiMinus => Entanglement::Phi,
            BellState::PsiPlus | BellState::PsiMinus => Entanglement::Psi,
        }
    }
}

/// Dominant Bell family of the detected photon pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Entanglement {
    /// Same polarization for both photons.
    Phi,
    /// Opposite polarizations.
    Psi,
    None,
}

impl fmt::Display for Entanglement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Entanglement::Phi => "Phi",
            Entanglement::Psi => "Psi",
            Entanglement::None => "None",
        })
    }
}

impl FromStr for Entanglement {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "Phi" => Ok(Entanglement::Phi),
            "Psi" => Ok(Entanglement::Psi),
            "None" => Ok(Entanglement::None),
            other => Err(format!("unknown entanglement type {other:?}")),
        }
    }
}

/// Normalizes the averaged correlations by the total pair count.
pub fn two_photon_density_matrix(g: &G2Tensor) -> Result<TwoPhotonDensityMatrix> {
    let norm = g.pair_total();
    if !(norm > 0.0) || !norm.is_finite() || norm < 1e-300 {
        return Err(Error::VanishingNormalization(norm));
    }
    let m = &g.entries / C64::new(norm, 0.0);
    let hermitian = (&m + &m.t().mapv(|z| z.conj())) * C64::new(0.5, 0.0);
    Ok(TwoPhotonDensityMatrix {
        entries: hermitian,
        window: g.window,
    })
}

/// Wootters concurrence from the eigenvalues of `ρ T ρ* T`,
/// `T = antidiag(-1, 1, 1, -1)`.
pub fn concurrence(rho: &TwoPhotonDensityMatrix) -> Result<f64> {
    let flip: Array2<C64> = array![
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0]
    ]
    .mapv(|x| C64::new(x, 0.0));
    let r = rho
        .entries
        .dot(&flip)
        .dot(&rho.entries.mapv(|z| z.conj()))
        .dot(&flip);
    let eig = r.eigvals()?;
    let mut lambdas = Vec::with_capacity(4);
    for z in eig.iter() {
        let lam = z.re;
        if lam < 0.0 {
            if lam.abs() < EIGEN_CLAMP {
                lambdas.push(0.0);
            } else {
                return Err(Error::NegativeEigenvalue(lam));
            }
        } else {
            lambdas.push(lam);
        }
    }
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let roots: Vec<f64> = lambdas.iter().map(|l| l.sqrt()).collect();
    let c = roots[0] - roots[1] - roots[2] - roots[3];
    Ok(c.clamp(0.0, 1.0))
}

/// `None` below `threshold`; otherwise the family of the Bell state with the
/// largest fidelity.
pub fn classify_entanglement(
    rho: &TwoPhotonDensityMatrix,
    concurrence: f64,
    threshold: f64,
) -> Entanglement {
    if concurrence < threshold {
        return Entanglement::None;
    }
    BellState::ALL
        .iter()
        .map(|&b| (b, rho.fidelity(b)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(b, _)| b.family())
        .unwrap_or(Entanglement::None)
}

/// `⟨a_H† a_H + a_V† a_V⟩`.
pub fn mean_photon_number(space: &HilbertSpace, rho: &DensityMatrix) -> Result<f64> {
    Ok(expectation(rho, &space.total_number())?.re)
}

impl fmt::Display for TwoPhotonDensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "        {:>16} {:>16} {:>16} {:>16}", "HH", "HV", "VH", "VV")?;
        for (i, label) in TWO_PHOTON_BASIS.iter().enumerate() {
            write!(f, "{label:>6}")?;
            for j in 0..4 {
                let z = self.entries[[i, j]];
                write!(f, "  {:>+7.4}{:>+7.4}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
