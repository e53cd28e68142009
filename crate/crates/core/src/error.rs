use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates one of its type invariants. `constraint` is the
    /// invariant written as an expression, e.g. `width > 0`.
    #[error("invalid parameter `{name}` = {value}: violates `{constraint}`")]
    InvalidParameter {
        name: String,
        value: f64,
        constraint: &'static str,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Some density-matrix element grew past the physical bound; the step
    /// size is too large for the fields in use.
    #[error("numerical blow-up at t = {t} fs: |rho| element reached {magnitude}")]
    NumericalBlowup { t: f64, magnitude: f64 },

    #[error("trajectory is empty")]
    EmptyTrajectory,

    #[error("initial state is mixed (purity {purity}); a pure state is required")]
    MixedInitialState { purity: f64 },
}

impl Error {
    pub(crate) fn param(name: impl Into<String>, value: f64, constraint: &'static str) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            value,
            constraint,
        }
    }

    /// True for errors caused by the numerics rather than the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NumericalBlowup { .. })
    }
}
