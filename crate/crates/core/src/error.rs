use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A constructor left too much probability in the top tenth of the
    /// retained photon numbers.
    #[error("truncation tail mass {tail:.3e} exceeds {limit:.0e} at cutoff {cutoff}")]
    TailTooLarge { tail: f64, limit: f64, cutoff: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("mode index {index} out of range for a {modes}-mode state")]
    ModeIndex { index: usize, modes: usize },

    #[error("photon number {n} outside cutoff {cutoff}")]
    PhotonNumber { n: usize, cutoff: usize },

    #[error("herald success probability {0:.3e} is indistinguishable from zero")]
    ZeroProbabilityHerald(f64),

    #[error("{name} = {value} is outside {range}")]
    ParameterRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid phase-space grid: {0}")]
    InvalidGrid(String),

    #[error("cutoff {cutoff} exceeds the Wigner kernel limit of {limit}")]
    CutoffTooLarge { cutoff: usize, limit: usize },

    #[error("gaussian fit rejected: {0}")]
    Fit(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerical checks (tails, norms, heralds) as
    /// opposed to malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::TailTooLarge { .. }
                | Error::ZeroProbabilityHerald(_)
                | Error::InvalidState(_)
                | Error::Fit(_)
        )
    }
}

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    range: &'static str,
) -> Result<()> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::ParameterRange { name, value, range })
    }
}
