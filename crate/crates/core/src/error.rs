use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },

    #[error("duplicate (model, item_id) = ({model}, {item_id}) on lines {first_line} and {second_line}")]
    DuplicateItem {
        model: String,
        item_id: String,
        first_line: u64,
        second_line: u64,
    },

    #[error("line {line}: unknown track label `{track}`")]
    UnknownTrack { line: u64, track: String },

    #[error("line {line}: field `{field}` must be 0 or 1, got `{value}`")]
    NonBinary {
        line: u64,
        field: &'static str,
        value: String,
    },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("undefined statistic: {0}")]
    Undefined(String),

    #[error("split-half: no split retained both tiers with at least 2 models ({requested} requested)")]
    NoRetainedSplits { requested: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
