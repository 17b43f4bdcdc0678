use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("{what}: argument {value} outside domain ({reason})")]
    Domain {
        what: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The refinement schedule was exhausted before successive levels agreed.
    /// `best` is the finest estimate available.
    #[error("{what} did not converge: best estimate {best}, last difference {err}")]
    NotConverged {
        what: &'static str,
        best: f64,
        err: f64,
    },

    #[error("{0} is not supported by this method")]
    Unsupported(&'static str),

    #[error("step too coarse: k*dx = {kdx} exceeds {limit}")]
    StepResolution { kdx: f64, limit: f64 },

    #[error("norm drifted by {drift} (allowed {limit})")]
    NormDrift { drift: f64, limit: f64 },
}

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and strictly positive",
        })
    }
}
