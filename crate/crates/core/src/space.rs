//! Truncated emitter ⊗ cavity Hilbert space and its bare operators.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Emitter basis state, in basis order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FleState {
    G,
    XH,
    XV,
    XX,
}

impl FleState {
    pub const ALL: [FleState; 4] = [FleState::G, FleState::XH, FleState::XV, FleState::XX];

    pub fn index(self) -> usize {
        self as usize
    }

    /// The state with H and V exchanged.
    pub fn swapped(self) -> Self {
        match self {
            FleState::XH => FleState::XV,
            FleState::XV => FleState::XH,
            s => s,
        }
    }
}

/// Cavity polarization mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    H,
    V,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::H, Mode::V];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Single-excited emitter state coupled to this polarization.
    pub fn exciton(self) -> FleState {
        match self {
            Mode::H => FleState::XH,
            Mode::V => FleState::XV,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::H => f.write_str("H"),
            Mode::V => f.write_str("V"),
        }
    }
}

/// A basis label `|fle, n_H, n_V⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisState {
    pub fle: FleState,
    pub n_h: usize,
    pub n_v: usize,
}

impl BasisState {
    pub fn new(fle: FleState, n_h: usize, n_v: usize) -> Self {
        Self { fle, n_h, n_v }
    }
}

/// Truncated space with flat index `fle * (n_max+1)^2 + n_H * (n_max+1) + n_V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HilbertSpace {
    n_max: usize,
}

pub fn build_space(n_max: usize) -> Result<HilbertSpace> {
    HilbertSpace::new(n_max)
}

impl HilbertSpace {
    pub const FLE_DIM: usize = 4;

    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidParams(format!(
                "photon cutoff must be at least 1, got {n_max}"
            )));
        }
        Ok(Self { n_max })
    }

    /// Recovers the cutoff from `4 (n_max+1)²`.
    pub fn from_total_dim(total_dim: usize) -> Result<Self> {
        let d = ((total_dim / Self::FLE_DIM) as f64).sqrt().round() as usize;
        if d < 2 || Self::FLE_DIM * d * d != total_dim {
            return Err(Error::InvalidParams(format!(
                "{total_dim} is not a valid emitter-cavity dimension"
            )));
        }
        Self::new(d - 1)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn photon_dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn total_dim(&self) -> usize {
        Self::FLE_DIM * self.photon_dim() * self.photon_dim()
    }

    pub fn index(&self, s: BasisState) -> usize {
        let d = self.photon_dim();
        debug_assert!(s.n_h < d && s.n_v < d);
        s.fle.index() * d * d + s.n_h * d + s.n_v
    }

    pub fn state(&self, index: usize) -> BasisState {
        let d = self.photon_dim();
        let fle = FleState::ALL[index / (d * d)];
        let rem = index % (d * d);
        BasisState::new(fle, rem / d, rem % d)
    }

    pub fn states(&self) -> impl Iterator<Item = BasisState> + '_ {
        (0..self.total_dim()).map(move |i| self.state(i))
    }

    /// Photon annihilator of one mode, `a|n⟩ = √n |n-1⟩`.
    pub fn annihilation(&self, mode: Mode) -> Operator {
        let mut op = Operator::zeros(self.total_dim());
        for s in self.states() {
            let n = match mode {
                Mode::H => s.n_h,
                Mode::V => s.n_v,
            };
            if n == 0 {
                continue;
            }
            let lowered = match mode {
                Mode::H => BasisState::new(s.fle, n - 1, s.n_v),
                Mode::V => BasisState::new(s.fle, s.n_h, n - 1),
            };
            op.0[[self.index(lowered), self.index(s)]] = C64::new((n as f64).sqrt(), 0.0);
        }
        op
    }

    /// Emitter transition `|to⟩⟨from|` tensored with photon identities.
    pub fn transition(&self, to: FleState, from: FleState) -> Operator {
        let mut op = Operator::zeros(self.total_dim());
        let d = self.photon_dim();
        for n_h in 0..d {
            for n_v in 0..d {
                let i = self.index(BasisState::new(to, n_h, n_v));
                let j = self.index(BasisState::new(from, n_h, n_v));
                op.0[[i, j]] = C64::new(1.0, 0.0);
            }
        }
        op
    }

    pub fn projector(&self, state: FleState) -> Operator {
        self.transition(state, state)
    }

    pub fn number(&self, mode: Mode) -> Operator {
        let a = self.annihilation(mode);
        a.dag().matmul(&a)
    }

    /// Total photon number `a_H^dag a_H + a_V^dag a_V`.
    pub fn total_number(&self) -> Operator {
        self.number(Mode::H) + self.number(Mode::V)
    }

    pub fn identity(&self) -> Operator {
        Operator::identity(self.total_dim())
    }

    /// Permutation exchanging `X_H ↔ X_V` and `n_H ↔ n_V`.
    pub fn hv_swap(&self) -> Operator {
        let mut op = Operator::zeros(self.total_dim());
        for s in self.states() {
            let t = BasisState::new(s.fle.swapped(), s.n_v, s.n_h);
            op.0[[self.index(t), self.index(s)]] = C64::new(1.0, 0.0);
        }
        op
    }

    /// `|s⟩⟨s|` as a density matrix.
    pub fn pure_state(&self, s: BasisState) -> Array2<C64> {
        let mut rho = Array2::zeros((self.total_dim(), self.total_dim()));
        let i = self.index(s);
        rho[[i, i]] = C64::new(1.0, 0.0);
        rho
    }
}

/// Dense operator on the truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator(pub Array2<C64>);

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        Self(Array2::zeros((dim, dim)))
    }

    pub fn identity(dim: usize) -> Self {
        Self(Array2::eye(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> Array2<C64> {
        self.0
    }

    pub fn dag(&self) -> Self {
        Self(self.0.t().mapv(|z| z.conj()))
    }

    pub fn matmul(&self, other: &Operator) -> Self {
        Self(self.0.dot(&other.0))
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self(&self.0 * factor)
    }

    /// Largest absolute entry of `O - O^dag`.
    pub fn hermiticity_deviation(&self) -> f64 {
        max_abs_diff(&self.0, &self.0.t().mapv(|z| z.conj()))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

impl Add for Operator {
    type Output = Operator;
    fn add(self, rhs: Operator) -> Operator {
        Operator(self.0 + rhs.0)
    }
}

impl Sub for Operator {
    type Output = Operator;
    fn sub(self, rhs: Operator) -> Operator {
        Operator(self.0 - rhs.0)
    }
}

impl Mul<f64> for Operator {
    type Output = Operator;
    fn mul(self, rhs: f64) -> Operator {
        Operator(self.0 * C64::new(rhs, 0.0))
    }
}

pub(crate) fn max_abs_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array1;

    fn ket(space: &HilbertSpace, s: BasisState) -> Array1<C64> {
        let mut v = Array1::zeros(space.total_dim());
        v[space.index(s)] = C64::new(1.0, 0.0);
        v
    }

    #[test]
    fn dimensions() {
        assert_eq!(build_space(1).unwrap().total_dim(), 16);
        assert_eq!(build_space(2).unwrap().total_dim(), 36);
        assert_eq!(build_space(3).unwrap().total_dim(), 64);
        assert!(build_space(0).is_err());
    }

    #[test]
    fn index_round_trip() {
        for n_max in 1..=4 {
            let space = build_space(n_max).unwrap();
            for i in 0..space.total_dim() {
                assert_eq!(space.index(space.state(i)), i);
            }
        }
    }

    #[test]
    fn annihilation_examples() {
        use FleState::*;
        let space = build_space(2).unwrap();
        let a_h = space.annihilation(Mode::H);
        let a_v = space.annihilation(Mode::V);

        let out = a_h.0.dot(&ket(&space, BasisState::new(G, 1, 0)));
        assert_eq!(out, ket(&space, BasisState::new(G, 0, 0)));

        let out = a_h.0.dot(&ket(&space, BasisState::new(G, 0, 0)));
        assert!(out.iter().all(|z| z.norm() == 0.0));

        let out = a_v.0.dot(&ket(&space, BasisState::new(XX, 0, 2)));
        let expected = ket(&space, BasisState::new(XX, 0, 1)) * C64::new(2f64.sqrt(), 0.0);
        assert_eq!(out, expected);
    }

    #[test]
    fn truncated_commutator_is_identity_below_cutoff() {
        let space = build_space(3).unwrap();
        for mode in Mode::ALL {
            let a = space.annihilation(mode);
            let comm = a.matmul(&a.dag()) - a.dag().matmul(&a);
            for s in space.states() {
                let n = match mode {
                    Mode::H => s.n_h,
                    Mode::V => s.n_v,
                };
                let i = space.index(s);
                let expected = if n < space.n_max() { 1.0 } else { -(space.n_max() as f64) };
                assert!((comm.0[[i, i]].re - expected).abs() < 1e-12);
                for j in 0..space.total_dim() {
                    if j != i {
                        assert_eq!(comm.0[[i, j]].norm(), 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn transitions_are_single_entry_in_emitter_factor() {
        let space = build_space(2).unwrap();
        let op = space.transition(FleState::G, FleState::XH);
        let nonzero = op.0.iter().filter(|z| z.norm() > 0.0).count();
        assert_eq!(nonzero, space.photon_dim().pow(2));
        let i = space.index(BasisState::new(FleState::G, 1, 2));
        let j = space.index(BasisState::new(FleState::XH, 1, 2));
        assert_eq!(op.0[[i, j]], C64::new(1.0, 0.0));
    }

    #[test]
    fn swap_is_an_involution() {
        let space = build_space(2).unwrap();
        let s = space.hv_swap();
        let ss = s.matmul(&s);
        assert_eq!(max_abs_diff(&ss.0, &space.identity().0), 0.0);
    }
}
