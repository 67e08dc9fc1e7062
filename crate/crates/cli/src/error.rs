use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: key `{key}`: {message}")]
    BodyJson {
        path: PathBuf,
        key: String,
        message: String,
    },

    #[error("--{flag}: {message}")]
    Flag { flag: &'static str, message: String },

    #[error(transparent)]
    Core(#[from] tomoslice::Error),
}

pub(crate) fn flag(flag: &'static str, message: impl Into<String>) -> CliError {
    CliError::Flag {
        flag,
        message: message.into(),
    }
}
