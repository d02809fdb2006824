use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid level {0} outside 4..=16")]
    GridLevel(u32),
    #[error("expected {expected} samples, got {got}")]
    Length { expected: usize, got: usize },
    #[error("grid mismatch: level {left} vs level {right}")]
    GridMismatch { left: u32, right: u32 },
    #[error("transition sharpness {0} outside (0, 1]")]
    Sharpness(f64),
    #[error("block index {index} outside 0..={max}")]
    BlockIndex { index: usize, max: usize },
    #[error("low-pass index {0} below 2")]
    LowPassIndex(usize),
    #[error("integrability exponent p = {0} outside the admissible range")]
    Exponent(f64),
    #[error("smoothness s = {0} outside [-8, 8]")]
    Smoothness(f64),
    #[error("roughness sigma = {0} must be positive")]
    Roughness(f64),
    #[error("{usable} usable blocks above j = 2, need at least 4")]
    TooFewBlocks { usable: usize },
    #[error("reflection order {0} not in {{2, 3, 4}}")]
    ReflectionOrder(usize),
    #[error("{count} modes exceed the limit {limit}")]
    TooManyModes { count: usize, limit: usize },
    #[error("mode index must be at least 1")]
    ModeIndex,
    #[error("series length {0} exceeds 64")]
    SeriesLength(usize),
    #[error("input function vanishes identically")]
    TrivialInput,
    #[error("invalid smoothness point: {0}")]
    InvalidPoint(&'static str),
    #[error("dimension mismatch: n = {0} vs n = {1}")]
    Dimension(u32, u32),
    #[error("epsilon = {0} must be nonnegative")]
    Epsilon(f64),
    #[error("precondition violated: {inequality} fails ({lhs} vs {rhs})")]
    Precondition {
        inequality: &'static str,
        lhs: f64,
        rhs: f64,
    },
    #[error("degenerate window: {0}")]
    Window(&'static str),
    #[error("resolution {0} outside 1..=2000")]
    Resolution(usize),
}
