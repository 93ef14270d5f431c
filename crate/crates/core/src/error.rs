use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("series shape mismatch: ({0} vars, order {1}) vs ({2} vars, order {3})")]
    SeriesMismatch(usize, u32, usize, u32),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("no numeric evaluation for generator {0}")]
    UnsupportedGenerator(String),

    #[error("requested {requested} digits, supported range is 1..={cap}")]
    PrecisionOutOfRange { requested: u32, cap: u32 },

    #[error("not invertible: {0}")]
    NonInvertible(String),

    #[error("expected degree {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("facet {0:?} is not simplicial")]
    NonSimplicialFacet(Vec<usize>),

    #[error("polytope fails the smooth Fano conditions: {0}")]
    NotSmoothFano(String),

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("no admissible Mori cone basis: {0}")]
    MoriBasis(String),

    #[error("hypersurface is not Calabi-Yau: first Chern class reduces to {0}")]
    NotCalabiYau(String),

    #[error("insufficient order: {0}")]
    InsufficientOrder(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
