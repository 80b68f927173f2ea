//! The queryable bundle: alphabet, record spans, run-length BWT and grammar.

use crate::corpus::{Alphabet, RecordSpan, TextRecord};
use crate::error::{Error, Result};
use crate::hash::HashConfig;
use crate::rlbwt::RlbwtIndex;
use crate::slp::Grammar;
use crate::suffix::{build_suffix_structures, compute_thresholds, make_sample_plan, segment_runs};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Index {
    pub alphabet: Alphabet,
    pub records: Vec<RecordSpan>,
    pub rlbwt: RlbwtIndex,
    pub grammar: Grammar,
}

impl Index {
    pub fn build(text: &TextRecord, s: usize, augment: bool, config: HashConfig) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidSubsampleRate);
        }
        if text.n() < 2 {
            return Err(Error::EmptyText);
        }
        let st = build_suffix_structures(&text.symbols);
        let runs = segment_runs(&st.bwt);
        let thresholds = compute_thresholds(&st, &runs, augment);
        let plan = make_sample_plan(&st, &runs, s)?;
        drop(st);
        let rlbwt = RlbwtIndex::new(text.n(), &runs, &thresholds, plan)?;
        let grammar = Grammar::build(&text.symbols, config);
        Ok(Index {
            alphabet: text.alphabet.clone(),
            records: text.records.clone(),
            rlbwt,
            grammar,
        })
    }

    pub fn n(&self) -> usize {
        self.rlbwt.n()
    }

    pub fn r(&self) -> usize {
        self.rlbwt.r()
    }

    pub fn g(&self) -> usize {
        self.grammar.g()
    }

    pub fn s(&self) -> usize {
        self.rlbwt.samples().s
    }

    pub fn encode_pattern(&self, bytes: &[u8]) -> Vec<u8> {
        self.alphabet.encode_pattern(bytes)
    }
}
