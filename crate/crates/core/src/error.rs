use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid step {found:?} at position {position}")]
    Parse { position: usize, found: char },

    #[error("empty path")]
    EmptyPath,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("lower path is above upper path after step {index}")]
    Ordering { index: usize },

    #[error("{0}")]
    Domain(String),

    #[error("no basis left: {0}")]
    EmptyBasis(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("not Eulerian: {0}")]
    NotEulerian(String),
}

impl Error {
    /// True for errors caused by the input rather than by a size limit.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Resource(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
