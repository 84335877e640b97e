use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("hamiltonian is not hermitian (|H - H^dag| = {deviation:.3e})")]
    NonHermitian { deviation: f64 },

    #[error("negative rate {0} for a dissipation channel")]
    NegativeRate(f64),

    #[error("non-finite entries after propagating for {duration} ps")]
    NonFinite { duration: f64 },

    #[error("negative duration {0}")]
    NegativeDuration(f64),

    #[error(
        "steady state is not unique: second smallest singular value ratio {ratio:.3e} \
         is below {threshold:.1e}"
    )]
    DegenerateSteadyState { ratio: f64, threshold: f64 },

    #[error("no photon pairs in the measurement window (normalization {0:.3e})")]
    VanishingNormalization(f64),

    #[error("spin-flip eigenvalue {0:.3e} is negative beyond roundoff")]
    NegativeEigenvalue(f64),

    #[error("invalid measurement window: {0}")]
    InvalidWindow(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("delay integration starting at t = {t} ps crosses {crossings} switching boundaries")]
    WindowSpansMultipleSwitches { t: f64, crossings: usize },

    #[error("invalid dressed-state pair {0}|{1}: first state must lie above the second")]
    InvalidPair(char, char),

    #[error("at omega = {omega} meV: {source}")]
    AtOmega {
        omega: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Linalg(#[from] ndarray_linalg::error::LinalgError),
}

impl Error {
    pub fn at_omega(self, omega: f64) -> Self {
        Error::AtOmega {
            omega,
            source: Box::new(self),
        }
    }
}
