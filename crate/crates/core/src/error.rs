use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cell index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("degenerate state: {0}")]
    DegenerateState(String),
    #[error("insufficient delay history: requested t={t} precedes oldest snapshot t1d={t1d}")]
    InsufficientHistory { t: f64, t1d: f64 },
    #[error("linear solver did not converge after {iterations} iterations (residual {residual:e})")]
    SolverFailure { iterations: usize, residual: f64 },
    #[error("time step collapsed below dt_min={0:e}")]
    StepSizeCollapse(f64),
    #[error("snapshot format: {0}")]
    SnapshotFormat(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
