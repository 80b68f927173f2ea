//! Lazy length evaluation.
//!
//! The positions pass is exact without any LCP work. Lengths follow from
//! MEM ends: writing `e(i) = i + len[i] - 1`, `e` is non-decreasing in `i`,
//! is constant across match steps, and `len[i] = e - i + 1` for every `i`
//! in the group of positions sharing the end `e`. So it suffices to find
//! where each group starts. Whether position `i` still reaches the current
//! end `E` is a single substring-equality check of `P[i..=E]` against the
//! text at `pos[i]`; that predicate is monotone in `i`, so group starts are
//! found by exponential probing over mismatch events followed by binary
//! search, and only the first position of a new group needs a real LCP
//! query.
//!
//! A check is also forced whenever the oldest unresolved position has
//! waited `ceil(log2 n)` characters, which bounds the latency of every
//! length.

use super::{
    ceil_log2, mems_from_ms, ms_naive_fallback, ms_step, verify_mems, MatchingStatistics, MemList,
    Mode, MsState, QueryStats,
};
use crate::error::Result;
use crate::hash::PatternHashes;
use crate::rlbwt::RlbwtIndex;
use crate::slp::Grammar;

struct Lazy<'a> {
    pattern: &'a [u8],
    ph: PatternHashes,
    slp: &'a Grammar,
    n: usize,
    pos: Vec<Option<usize>>,
    event: Vec<bool>,
    len: Vec<usize>,
    /// Current group end; may be -1 after an absent symbol at offset 0.
    end: isize,
    /// Positions `>= anchor` have final lengths.
    anchor: usize,
    /// Last processed position.
    cur: usize,
    /// Unresolved mismatch events, right to left.
    pending: Vec<usize>,
    events_in_group: usize,
    next_check: usize,
    pace: usize,
    stats: QueryStats,
}

impl<'a> Lazy<'a> {
    fn finalize(&mut self, x: usize, len: usize) {
        self.len[x] = len;
        self.stats.max_len_latency = self.stats.max_len_latency.max((x - self.cur) as u64);
    }

    /// Moves the anchor down through processed positions that continue the
    /// current group.
    fn advance(&mut self) {
        while self.anchor > self.cur && !self.event[self.anchor - 1] {
            let x = self.anchor - 1;
            self.finalize(x, (self.end - x as isize + 1) as usize);
            self.anchor = x;
        }
    }

    /// Assigns the current end to everything down to and including the
    /// first `count` pending events.
    fn confirm(&mut self, count: usize) {
        if count == 0 {
            return;
        }
        let low = self.pending[count - 1];
        for x in (low..self.anchor).rev() {
            self.finalize(x, (self.end - x as isize + 1) as usize);
        }
        self.anchor = low;
        self.pending.drain(..count);
        self.advance();
    }

    /// Whether `P[i..=end]` matches the text at `pos[i]`. The first symbol
    /// always matches by construction of the positions pass.
    fn reaches_end(&mut self, i: usize) -> Result<bool> {
        let Some(p) = self.pos[i] else {
            return Ok(false);
        };
        let need = (self.end - i as isize + 1) as usize;
        if need <= 1 {
            return Ok(need == 1);
        }
        // the sentinel at n - 1 never matches a pattern symbol
        if p + need > self.n - 1 {
            return Ok(false);
        }
        self.stats.equality_checks += 1;
        self.slp.substring_equal(&self.ph, i + 1, p + 1, need - 1)
    }

    /// Exact-with-high-probability length of `f`, knowing it falls short of
    /// the current end.
    fn resolve_len(&mut self, f: usize) -> Result<usize> {
        let Some(p) = self.pos[f] else {
            return Ok(0);
        };
        let cap = (self.end - f as isize) as usize;
        if cap <= 1 {
            return Ok(1);
        }
        self.stats.lcp_queries += 1;
        Ok(1 + self.slp.lcp_pattern_text(&self.ph, f + 1, cap - 1, p + 1)?)
    }

    /// Checks the newest pending event; on failure binary-searches for the
    /// group boundary, resolves it, and repeats until nothing is pending.
    fn settle(&mut self) -> Result<()> {
        while let Some(&newest) = self.pending.last() {
            let k = self.pending.len() - 1;
            if self.reaches_end(newest)? {
                self.confirm(k + 1);
                return Ok(());
            }
            let (mut lo, mut hi) = (0, k);
            while lo < hi {
                let mid = (lo + hi) / 2;
                if self.reaches_end(self.pending[mid])? {
                    lo = mid + 1;
                } else {
                    hi = mid;
                }
            }
            self.confirm(lo);
            let f = self.pending[0];
            for x in (f + 1..self.anchor).rev() {
                self.finalize(x, (self.end - x as isize + 1) as usize);
            }
            let len = self.resolve_len(f)?;
            self.finalize(f, len);
            self.end = f as isize + len as isize - 1;
            self.anchor = f;
            self.pending.remove(0);
            self.advance();
            self.events_in_group = self.pending.len();
            self.next_check = (self.events_in_group + 1).next_power_of_two();
        }
        Ok(())
    }

    fn on_processed(&mut self, i: usize) -> Result<()> {
        self.cur = i;
        if self.event[i] {
            self.pending.push(i);
            self.events_in_group += 1;
            if self.events_in_group >= self.next_check {
                self.next_check *= 2;
                self.settle()?;
            }
        } else if self.pending.is_empty() {
            self.advance();
        }
        while let Some(&oldest) = self.pending.first() {
            if oldest - self.cur < self.pace {
                break;
            }
            self.stats.extra_paced_queries += 1;
            self.settle()?;
        }
        Ok(())
    }
}

/// Matching statistics and MEMs by lazy length evaluation. Lengths are
/// exact with high probability and never too short; see
/// [`ms_lazy_verified`] for the checked variant.
pub fn ms_lazy(
    pattern: &[u8],
    index: &RlbwtIndex,
    slp: &Grammar,
) -> Result<(MatchingStatistics, MemList, QueryStats)> {
    let m = pattern.len();
    let n = index.n();
    let mut lz = Lazy {
        pattern,
        ph: slp.pattern_hashes(pattern),
        slp,
        n,
        pos: vec![None; m],
        event: vec![false; m],
        len: vec![0; m],
        end: m as isize - 1,
        anchor: m,
        cur: m,
        pending: Vec::new(),
        events_in_group: 0,
        next_check: 1,
        pace: ceil_log2(n),
        stats: QueryStats::default(),
    };
    let mut state = MsState::restart();
    for i in (0..m).rev() {
        let mut stats = std::mem::take(&mut lz.stats);
        let (next, event) = ms_step(
            &state,
            lz.pattern[i],
            i + 1,
            &lz.ph,
            index,
            slp,
            Mode::PositionsOnly,
            &mut stats,
        )?;
        lz.stats = stats;
        state = next;
        lz.pos[i] = state.pos;
        lz.event[i] = event;
        lz.on_processed(i)?;
    }
    lz.settle()?;
    debug_assert!(lz.anchor == 0 && lz.pending.is_empty());
    let ms = MatchingStatistics {
        pos: lz.pos,
        len: lz.len,
    };
    let mems = mems_from_ms(&ms);
    lz.stats.mems = mems.mu() as u64;
    Ok((ms, mems, lz.stats))
}

/// [`ms_lazy`] followed by verification of the MEMs against extracted
/// text, falling back to direct comparison if a hash collision slipped
/// through.
pub fn ms_lazy_verified(
    pattern: &[u8],
    index: &RlbwtIndex,
    slp: &Grammar,
) -> Result<(MatchingStatistics, MemList, QueryStats)> {
    let (ms, mems, mut stats) = ms_lazy(pattern, index, slp)?;
    stats.verified = true;
    if verify_mems(pattern, &mems, slp)? {
        return Ok((ms, mems, stats));
    }
    stats.fallback_used = true;
    let ms = ms_naive_fallback(pattern, &ms.pos, slp)?;
    let mems = mems_from_ms(&ms);
    stats.mems = mems.mu() as u64;
    Ok((ms, mems, stats))
}
