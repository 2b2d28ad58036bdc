use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Energy at or below the mass gap `m v^2`; carries the evanescent
    /// decay rate `sqrt(m^2 v^4 - E^2) / v`.
    #[error("energy at or below the mass gap (evanescent decay rate {decay_rate})")]
    Evanescent { decay_rate: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular matching system: {0}")]
    SingularSystem(String),

    #[error("momentum {p} within guard distance of pole {pole}")]
    PoleProximity { p: f64, pole: f64 },

    /// The formal full-line amplitude has a non-integrable density; a
    /// windowed amplitude is required for entropy evaluation.
    #[error("formal amplitude is not square-integrable; use a windowed amplitude")]
    RegularizationRequired,

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("accuracy error: {message} (best estimate {best}, error estimate {error})")]
    Accuracy {
        message: String,
        best: f64,
        error: f64,
    },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wraps an upstream error with the name of the pipeline stage it came from.
    pub fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// True for errors caused by parameters outside the valid domain
    /// (as opposed to numerical accuracy failures).
    pub fn is_domain(&self) -> bool {
        match self {
            Error::Accuracy { .. } => false,
            Error::Stage { source, .. } => source.is_domain(),
            _ => true,
        }
    }
}
