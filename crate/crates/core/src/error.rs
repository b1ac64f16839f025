use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) already present")]
    DuplicateEdge(usize, usize),
    #[error("unknown edge {0}")]
    UnknownEdge(usize),
    #[error("graph is not a forest")]
    Cyclic,
    #[error("graph is not a tree")]
    NotTree,
    #[error("graph is not a path")]
    NotPath,
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("improper coloring: edge {edge} cannot take color {color}")]
    Improper { edge: usize, color: u8 },
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
