//! Matching statistics and MEMs.
//!
//! All engines process the pattern right to left with the same LF /
//! threshold recurrence and differ only in when they pay for lengths:
//! [`ms_eager`] issues one capped pattern-vs-text LCP query per mismatch,
//! [`ms_lazy`] delimits MEMs with exponentially spaced substring-equality
//! checks, and [`long_mems`] / [`lcs`] skip queries whose answer cannot
//! reach the length of interest.
//!
//! Pattern and text offsets are 0-based throughout.

mod eager;
mod lazy;
mod long;

pub use eager::ms_eager;
pub use lazy::{ms_lazy, ms_lazy_verified};
pub use long::{lcs, long_mems};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hash::PatternHashes;
use crate::rlbwt::RlbwtIndex;
use crate::slp::Grammar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingStatistics {
    /// Text offset of one occurrence of the match; `None` when `len` is 0.
    pub pos: Vec<Option<usize>>,
    pub len: Vec<usize>,
}

impl MatchingStatistics {
    pub fn new(m: usize) -> Self {
        MatchingStatistics {
            pos: vec![None; m],
            len: vec![0; m],
        }
    }

    pub fn m(&self) -> usize {
        self.len.len()
    }
}

/// A maximal exact match `P[start..start + len]`, occurring at `text_pos`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Mem {
    pub start: usize,
    pub len: usize,
    pub text_pos: usize,
}

impl Mem {
    /// Last pattern offset covered.
    pub fn end(&self) -> usize {
        self.start + self.len - 1
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MemList {
    pub entries: Vec<Mem>,
}

impl MemList {
    pub fn mu(&self) -> usize {
        self.entries.len()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct QueryStats {
    pub lf_steps: u64,
    pub lcp_queries: u64,
    pub equality_checks: u64,
    /// Checks forced by the latency bound rather than the exponential
    /// schedule.
    pub extra_paced_queries: u64,
    pub mismatch_events: u64,
    pub mems: u64,
    pub verified: bool,
    pub fallback_used: bool,
    /// Largest number of characters processed after position `i` before
    /// `len[i]` was known.
    pub max_len_latency: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Eager,
    /// Eager, taking stored threshold LCEs as a shortcut when they already
    /// cover the current length.
    EagerAug,
    /// Positions and ranks only; lengths left pending.
    PositionsOnly,
}

/// Recurrence state after processing some pattern position.
///
/// `q` is the BWT row of the suffix starting at `pos`. The restart state
/// (no match yet, or the previous symbol absent from the text) sits on the
/// sentinel suffix: row 0, text offset `n - 1`, length 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MsState {
    pub q: usize,
    pub pos: Option<usize>,
    /// `None` while pending (positions-only mode).
    pub len: Option<usize>,
}

impl MsState {
    pub fn restart() -> Self {
        MsState {
            q: 0,
            pos: None,
            len: Some(0),
        }
    }
}

/// One right-to-left step: extends `state` (describing pattern offset
/// `p_next`, or the restart state) by the symbol `c` at `p_next - 1`.
/// Returns the new state and whether the step was a mismatch event.
#[allow(clippy::too_many_arguments)]
pub fn ms_step(
    state: &MsState,
    c: u8,
    p_next: usize,
    ph: &PatternHashes,
    index: &RlbwtIndex,
    slp: &Grammar,
    mode: Mode,
    stats: &mut QueryStats,
) -> Result<(MsState, bool)> {
    let n = index.n();
    if index.symbol_at(state.q)? == c {
        let prev = state.pos.unwrap_or(n - 1);
        if prev == 0 {
            return Err(Error::Corrupt("match step before text offset 0".into()));
        }
        stats.lf_steps += 1;
        return Ok((
            MsState {
                q: index.lf_step(state.q)?,
                pos: Some(prev - 1),
                len: state.len.map(|l| l + 1),
            },
            false,
        ));
    }
    stats.mismatch_events += 1;
    let jump = match index.pick_side(state.q, c) {
        Ok(j) => j,
        Err(Error::SymbolAbsent) => return Ok((MsState::restart(), true)),
        Err(e) => return Err(e),
    };
    let (sa, steps) = index.sa_at(jump.offset)?;
    stats.lf_steps += steps as u64 + 1;
    let q = index.lf_step(jump.offset)?;
    if sa == 0 {
        return Err(Error::Corrupt(format!(
            "run boundary {} has SA 0",
            jump.offset
        )));
    }
    let len = match (mode, state.len) {
        (Mode::PositionsOnly, _) => None,
        (_, None) => return Err(Error::Corrupt("eager step on a pending length".into())),
        (_, Some(0)) => Some(1),
        (Mode::EagerAug, Some(l)) if jump.lce_hint.is_some_and(|h| l <= h) => Some(l + 1),
        (_, Some(l)) => {
            stats.lcp_queries += 1;
            Some(slp.lcp_pattern_text(ph, p_next, l, sa)? + 1)
        }
    };
    Ok((
        MsState {
            q,
            pos: Some(sa - 1),
            len,
        },
        true,
    ))
}

/// Positions `i` with `len[i] > 0` and `len[i - 1] <= len[i]` (or `i == 0`).
pub fn mems_from_ms(ms: &MatchingStatistics) -> MemList {
    let entries = (0..ms.m())
        .filter(|&i| ms.len[i] > 0 && (i == 0 || ms.len[i - 1] <= ms.len[i]))
        .map(|i| Mem {
            start: i,
            len: ms.len[i],
            text_pos: ms.pos[i].expect("positive length has a position"),
        })
        .collect();
    MemList { entries }
}

/// Extracts, for each MEM left to right, the part not covered by the
/// previous MEM and compares it symbol by symbol. Detects overlong MEMs,
/// the only error hashing can introduce.
pub fn verify_mems(pattern: &[u8], mems: &MemList, slp: &Grammar) -> Result<bool> {
    let mut covered_to = 0usize; // exclusive end of the previous MEM
    for e in &mems.entries {
        let end = e.start + e.len;
        if e.len == 0 || end > pattern.len() || end <= covered_to {
            return Ok(false);
        }
        let skip = covered_to.saturating_sub(e.start);
        let t_off = e.text_pos + skip;
        if t_off + (e.len - skip) >= slp.n() {
            return Ok(false);
        }
        let want = &pattern[e.start + skip..end];
        if slp.lcp_direct(t_off, want)? != want.len() {
            return Ok(false);
        }
        covered_to = end;
    }
    Ok(true)
}

/// Exact lengths from known-correct positions by direct comparison.
pub fn ms_naive_fallback(
    pattern: &[u8],
    pos: &[Option<usize>],
    slp: &Grammar,
) -> Result<MatchingStatistics> {
    let m = pattern.len();
    if pos.len() != m {
        return Err(Error::range("position count", pos.len(), m));
    }
    let mut ms = MatchingStatistics::new(m);
    for i in 0..m {
        ms.pos[i] = pos[i];
        if let Some(p) = pos[i] {
            ms.len[i] = slp.lcp_direct(p, &pattern[i..])?;
            if ms.len[i] == 0 {
                ms.pos[i] = None;
            }
        }
    }
    Ok(ms)
}

pub(crate) fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        1
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}
