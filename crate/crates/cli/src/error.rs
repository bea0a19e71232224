use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),

    #[error("invalid value `{value}` for `{key}`: {reason}")]
    Value {
        key: String,
        value: String,
        reason: String,
    },

    #[error("expected `key = value`, got `{0}`")]
    Syntax(String),

    #[error("row has {actual} fields, header has {expected}")]
    RowWidth { expected: usize, actual: usize },

    #[error(transparent)]
    Core(#[from] cvqt_core::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;
