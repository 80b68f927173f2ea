use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty text")]
    EmptyText,
    #[error("not FASTA")]
    NotFasta,
    #[error("FASTA input contains no sequence")]
    EmptySequence,
    #[error("alphabet too large: {0} distinct bytes (at most {max} supported)", max = crate::corpus::MAX_SIGMA)]
    AlphabetTooLarge(usize),
    #[error("invalid subsample rate")]
    InvalidSubsampleRate,
    #[error("{what} out of range: {value} (limit {limit})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("symbol absent")]
    SymbolAbsent,
    #[error("minimum length 0: use full engine")]
    ZeroMinLength,
    #[error("index was built without augmented thresholds")]
    AugmentMissing,
    #[error("index corrupt: {0}")]
    Corrupt(String),
    #[error("bad index file: {0}")]
    Format(String),
    #[error("index format version {found} not supported (expected {expected})")]
    VersionMismatch { found: u64, expected: u64 },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn range(what: &'static str, value: usize, limit: usize) -> Self {
        Error::OutOfRange { what, value, limit }
    }

    /// True for errors that indicate a broken index or engine invariant
    /// rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Corrupt(_) | Error::OutOfRange { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
