use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at n = {0}")]
    Pole(i64),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid input: {0}")]
    Domain(String),
    #[error("{what} cap exceeded: limit {limit}, reached {reached}")]
    CapExceeded { what: &'static str, limit: u64, reached: u64 },
    #[error("empty word")]
    EmptyWord,
    #[error("{word} is a proper power of {root} (exponent {exponent})")]
    ProperPower { word: String, root: String, exponent: u32 },
    #[error("class functions belong to different groups")]
    GroupMismatch,
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
