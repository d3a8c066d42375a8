use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("derivative order ({m}, {n}) exceeds cap {cap}")]
    OrderTooLarge { m: usize, n: usize, cap: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("covariance matrix is singular (det = {0:e})")]
    SingularCovariance(f64),

    #[error("heralding probability {0:e} is below the floor")]
    NegligibleProbability(f64),

    #[error("Fock tail {tail:e} exceeds tolerance {eps:e} at cutoff {cutoff}")]
    TailTooLarge { tail: f64, eps: f64, cutoff: usize },

    #[error("phase uncertainty is monotone on [{lo}, {hi}]")]
    NoMinimumInRange { lo: f64, hi: f64 },

    #[error("Wigner kernel does not decay: M1 eigenvalue {0:e} is not negative")]
    NonDecayingKernel(f64),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
