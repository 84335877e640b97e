//! Laser-dressed emitter energies and the driving strengths at which the
//! cavity bridges an n-photon transition between two dressed states.
//!
//! Every pair gap is affine in `s = √(Δ₀² + 8Ω²)`, so the resonance
//! condition `nΔ = E₁ - E₂` inverts in closed form.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DressedState {
    U,
    M,
    N,
    L,
}

impl DressedState {
    pub const ALL: [DressedState; 4] = [DressedState::U, DressedState::M, DressedState::N, DressedState::L];

    /// Position in the energy ordering, highest first.
    fn rank(self) -> usize {
        self as usize
    }

    pub fn label(self) -> char {
        match self {
            DressedState::U => 'U',
            DressedState::M => 'M',
            DressedState::N => 'N',
            DressedState::L => 'L',
        }
    }

    /// Energy as `a + b·s`.
    fn affine(self, delta0: f64) -> (f64, f64) {
        match self {
            DressedState::U => (0.5 * delta0, 0.5),
            DressedState::M => (delta0, 0.0),
            DressedState::N => (0.0, 0.0),
            DressedState::L => (0.5 * delta0, -0.5),
        }
    }
}

impl fmt::Display for DressedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedSpectrum {
    pub omega: f64,
    pub e_u: f64,
    pub e_m: f64,
    pub e_n: f64,
    pub e_l: f64,
}

impl DressedSpectrum {
    pub fn energy(&self, s: DressedState) -> f64 {
        match s {
            DressedState::U => self.e_u,
            DressedState::M => self.e_m,
            DressedState::N => self.e_n,
            DressedState::L => self.e_l,
        }
    }

    /// Energies sorted descending: `[U, M, N, L]`.
    pub fn as_array(&self) -> [f64; 4] {
        [self.e_u, self.e_m, self.e_n, self.e_l]
    }
}

pub fn dressed_energies(delta0: f64, omega: f64) -> DressedSpectrum {
    let s = (delta0 * delta0 + 8.0 * omega * omega).sqrt();
    DressedSpectrum {
        omega,
        e_u: 0.5 * (delta0 + s),
        e_m: delta0,
        e_n: 0.0,
        e_l: 0.5 * (delta0 - s),
    }
}

/// An ordered pair `χ₁|χ₂` with `χ₁` above `χ₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransitionPair {
    pub upper: DressedState,
    pub lower: DressedState,
}

impl TransitionPair {
    pub fn new(upper: DressedState, lower: DressedState) -> Result<Self> {
        if upper.rank() >= lower.rank() {
            return Err(Error::InvalidPair(upper.label(), lower.label()));
        }
        Ok(Self { upper, lower })
    }

    /// All six pairs, in `U|M, U|N, U|L, M|N, M|L, N|L` order.
    pub fn all() -> Vec<TransitionPair> {
        let mut out = Vec::with_capacity(6);
        for (i, &a) in DressedState::ALL.iter().enumerate() {
            for &b in &DressedState::ALL[i + 1..] {
                out.push(TransitionPair { upper: a, lower: b });
            }
        }
        out
    }

    pub fn gap(&self, spectrum: &DressedSpectrum) -> f64 {
        spectrum.energy(self.upper) - spectrum.energy(self.lower)
    }
}

impl fmt::Display for TransitionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.upper, self.lower)
    }
}

/// Relative tolerance for treating an Ω-independent gap as resonant.
const FLAT_GAP_TOL: f64 = 1e-12;

/// Driving strength with `n·delta = E₁(Ω) - E₂(Ω)`, if one with `Ω ≥ 0` exists.
///
/// For `M|N`, whose gap `Δ₀` does not depend on Ω, the condition holds for all
/// Ω or for none; the former is reported as `Some(0.0)`.
pub fn resonance_driving_strength(
    pair: TransitionPair,
    n: u32,
    delta: f64,
    delta0: f64,
) -> Option<f64> {
    if n == 0 {
        return None;
    }
    let (a1, b1) = pair.upper.affine(delta0);
    let (a2, b2) = pair.lower.affine(delta0);
    let (a, b) = (a1 - a2, b1 - b2);
    let target = n as f64 * delta;
    if b == 0.0 {
        return if (target - a).abs() <= FLAT_GAP_TOL * delta0.abs().max(target.abs()) {
            Some(0.0)
        } else {
            None
        };
    }
    let s = (target - a) / b;
    if s < delta0 {
        return None;
    }
    let omega_sq = (s * s - delta0 * delta0) / 8.0;
    Some(omega_sq.max(0.0).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    pub pair: TransitionPair,
    pub photons: u32,
    pub omega: f64,
}

impl Resonance {
    /// `n p χ₁|χ₂` label.
    pub fn label(&self) -> String {
        format!("{}p {}", self.photons, self.pair)
    }
}

/// All resonances of order `1..=max_order` with `Ω ∈ [0, omega_max]`, sorted by Ω.
pub fn resonance_table(delta: f64, delta0: f64, omega_max: f64, max_order: u32) -> Vec<Resonance> {
    let mut out = Vec::new();
    for n in 1..=max_order {
        for pair in TransitionPair::all() {
            if let Some(omega) = resonance_driving_strength(pair, n, delta, delta0) {
                if omega <= omega_max {
                    out.push(Resonance {
                        pair,
                        photons: n,
                        omega,
                    });
                }
            }
        }
    }
    out.sort_by(|a, b| {
        a.omega
            .total_cmp(&b.omega)
            .then(a.photons.cmp(&b.photons))
            .then(a.pair.cmp(&b.pair))
    });
    out
}
