use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Array shapes disagree with each other or with the grid/basis they belong to.
    #[error("structural error: {0}")]
    Structural(String),

    /// A documented precondition does not hold (normalization, hermiticity, ...).
    #[error("contract violated: {0}")]
    Contract(String),

    #[error("non-finite value in `{field}` at x = {x:?}, t = {t}")]
    Evaluation { field: &'static str, x: Vec<f64>, t: f64 },

    #[error("blow-up detected at step {step} (t = {time})")]
    BlowUp { step: usize, time: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("dimension {required} exceeds cap {cap}")]
    Size { required: usize, cap: usize },

    #[error("Krylov propagation did not converge (residual {residual:e})")]
    Accuracy { residual: f64 },

    #[error("shell construction failed: {0}")]
    Construction(String),

    #[error("quadrature did not reach tolerance: {0}")]
    Tolerance(String),

    #[error("scenario `{scenario}` failed: {source}")]
    Scenario {
        scenario: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn in_scenario(self, scenario: &str) -> Self {
        Error::Scenario { scenario: scenario.to_string(), source: Box::new(self) }
    }
}
