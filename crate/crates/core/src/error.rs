use thiserror::Error;

#[derive(Debug, Error)]
pub enum TcamError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("format error at line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error("resistance order violated: {0}")]
    ResistanceOrder(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, TcamError>;

pub(crate) fn ensure_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(TcamError::InvalidInput(format!("{name} is not finite ({v})")))
    }
}
