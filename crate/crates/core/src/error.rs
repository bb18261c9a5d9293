use thiserror::Error;

/// Errors raised by parameter validation, the model formulas and the integrator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {constraint}")]
    InvalidParameter {
        field: &'static str,
        constraint: String,
    },

    #[error("inconsistent dimensionless parameters: {0}")]
    Inconsistent(String),

    #[error("C(Δ) has a pole at Δ/Δ_th = {ratio} (Δ = {delta}); only Δ < Δ_th is reachable at steady state")]
    CFactorPole { delta: f64, ratio: f64 },

    #[error("saturation photon number requires Δ_th/N₀ > 1, got {dth_over_n0} (the configuration lases)")]
    LasingRegime { dth_over_n0: f64 },

    #[error("invalid pump grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite state at step {step} (t = {time}): {state:?}")]
    NonFinite {
        step: u64,
        time: f64,
        state: Vec<f64>,
    },

    #[error(
        "adaptive step size underflow at t = {time} (h = {step_size}); \
         reduce the rate ratios or use the closed-form stationary solution"
    )]
    StepUnderflow { time: f64, step_size: f64 },

    #[error("stationary solution is not finite at P = {pump}")]
    NonFiniteStationary { pump: f64 },

    #[error("no steady state reached (final scaled residual {residual:e}, state {state:?})")]
    NotConverged { residual: f64, state: Vec<f64> },

    #[error("model `{0}` has no time-domain dynamics")]
    NoDynamics(&'static str),

    #[error("unknown figure `{0}`")]
    UnknownFigure(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, constraint: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            constraint: constraint.into(),
        }
    }

    /// `true` for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonFinite { .. }
                | Error::NonFiniteStationary { .. }
                | Error::StepUnderflow { .. }
                | Error::NotConverged { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
