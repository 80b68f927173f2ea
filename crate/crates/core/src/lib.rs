//! Matching statistics, MEMs and longest common substrings against a
//! compressed index: a run-length BWT with thresholds and subsampled SA
//! samples for positions, and a balanced grammar with Karp-Rabin
//! fingerprints for lengths.

pub mod corpus;
pub mod error;
pub mod format;
pub mod hash;
pub mod index;
pub mod ms;
pub mod oracle;
pub mod rlbwt;
pub mod slp;
pub mod suffix;

pub use corpus::{
    load_fasta, load_raw, parse_fasta, parse_lines, Alphabet, RecordSpan, TextRecord,
};
pub use error::{Error, Result};
pub use hash::HashConfig;
pub use index::Index;
pub use ms::{
    lcs, long_mems, mems_from_ms, ms_eager, ms_lazy, ms_lazy_verified, ms_naive_fallback,
    verify_mems, MatchingStatistics, Mem, MemList, QueryStats,
};
pub use rlbwt::RlbwtIndex;
pub use slp::Grammar;
