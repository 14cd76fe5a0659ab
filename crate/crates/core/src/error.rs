use thiserror::Error;

/// Errors produced anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unsupported index {index} ({what})")]
    UnsupportedIndex { what: &'static str, index: i64 },
    #[error("parameters (r1, r2) = ({r1}, {r2}) lie outside the Dyck model domain r1*r2 >= 5")]
    ModelDomain { r1: u32, r2: u32 },
    #[error("value too large for a lattice path: {0}")]
    TooLarge(String),
    #[error("rectangle ({width}, {height}) for n = {n} matches no supported quadrant")]
    QuadrantUnsupported { n: u32, width: i64, height: i64 },
    #[error("base path missing in recursive assembly: {0}")]
    BaseCaseMissing(String),
    #[error("hook starting at nu_{from_nu} has horizontal displacement {displacement}, type {htype} is outside 1..=3")]
    HookTypeOutOfRange { from_nu: usize, displacement: i64, htype: i64 },
    #[error("subpath index out of range: ({i}, {k}) with height {height}")]
    IndexOutOfRange { i: usize, k: usize, height: i64 },
    #[error("enumeration budget of {budget} collections exceeded")]
    EnumerationBudgetExceeded { budget: u64 },
    #[error("edge {edge} inside a colored subpath is neither horizontal nor the last edge of a hook")]
    UncoveredCase { edge: usize },
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("singular intermediate while evaluating an expression")]
    SingularIntermediate,
    #[error("oracle degenerate: no invertible sample after {retries} attempts")]
    OracleDegenerate { retries: usize },
    #[error("Laurent division is not exact")]
    InexactDivision,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
