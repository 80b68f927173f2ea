//! MEMs of a minimum length, and longest common substrings.
//!
//! A MEM can only start right after a mismatch event (or at offset 0), so
//! only those candidates need lengths. A candidate `x` whose length falls
//! short of `d` caps every later candidate `x' < x` at `x + len[x] - x'`,
//! which lets the next `d - len[x]` candidates go unqueried.

use super::{ms_step, Mem, MemList, Mode, MsState, QueryStats};
use crate::error::{Error, Result};
use crate::hash::PatternHashes;
use crate::rlbwt::RlbwtIndex;
use crate::slp::Grammar;

struct Scan<'a> {
    ph: PatternHashes,
    slp: &'a Grammar,
    m: usize,
    /// End of the last queried candidate's match; bounds all later ends.
    bound_e: isize,
    /// Candidate start above which lengths cannot reach `d`.
    wait_until: isize,
    pending: Option<Mem>,
    found: Vec<Mem>,
    longest: usize,
    stats: QueryStats,
}

impl Scan<'_> {
    fn candidate(&mut self, x: usize, pos: Option<usize>, d: usize) -> Result<()> {
        if self.pending.is_none() && x as isize > self.wait_until {
            return Ok(());
        }
        let len = match pos {
            None => 0,
            Some(p) => {
                let cap = (self.m - x).min((self.bound_e - x as isize + 1) as usize);
                if cap <= 1 {
                    1
                } else {
                    self.stats.lcp_queries += 1;
                    1 + self.slp.lcp_pattern_text(&self.ph, x + 1, cap - 1, p + 1)?
                }
            }
        };
        let e = x as isize + len as isize - 1;
        self.bound_e = e;
        self.longest = self.longest.max(len);
        if let Some(z) = self.pending {
            if e < z.end() as isize {
                self.found.push(z);
                self.pending = None;
            }
        }
        if len >= d {
            self.pending = Some(Mem {
                start: x,
                len,
                text_pos: pos.expect("positive length has a position"),
            });
        } else {
            self.pending = None;
            self.wait_until = x as isize - d as isize + len as isize;
        }
        Ok(())
    }
}

fn scan(
    pattern: &[u8],
    index: &RlbwtIndex,
    slp: &Grammar,
    mut min_len: impl FnMut(usize) -> usize,
) -> Result<(MemList, QueryStats)> {
    let m = pattern.len();
    let mut sc = Scan {
        ph: slp.pattern_hashes(pattern),
        slp,
        m,
        bound_e: m as isize - 1,
        wait_until: isize::MAX,
        pending: None,
        found: Vec::new(),
        longest: 0,
        stats: QueryStats::default(),
    };
    let mut state = MsState::restart();
    for i in (0..m).rev() {
        let prev = state.pos;
        let (next, event) = ms_step(
            &state,
            pattern[i],
            i + 1,
            &sc.ph,
            index,
            slp,
            Mode::PositionsOnly,
            &mut sc.stats,
        )?;
        if event && i + 1 < m {
            let d = min_len(sc.longest);
            sc.candidate(i + 1, prev, d)?;
        }
        state = next;
    }
    if m > 0 {
        let d = min_len(sc.longest);
        sc.candidate(0, state.pos, d)?;
    }
    if let Some(z) = sc.pending.take() {
        sc.found.push(z);
    }
    sc.found.reverse();
    sc.stats.mems = sc.found.len() as u64;
    Ok((MemList { entries: sc.found }, sc.stats))
}

/// All MEMs of length at least `d`, in pattern order.
pub fn long_mems(
    pattern: &[u8],
    index: &RlbwtIndex,
    slp: &Grammar,
    d: usize,
) -> Result<(MemList, QueryStats)> {
    if d == 0 {
        return Err(Error::ZeroMinLength);
    }
    scan(pattern, index, slp, |_| d)
}

/// Every MEM of maximum length. The threshold tracks the longest length
/// seen so far, so ties with the eventual maximum are kept.
pub fn lcs(pattern: &[u8], index: &RlbwtIndex, slp: &Grammar) -> Result<(MemList, QueryStats)> {
    let (mut mems, mut stats) = scan(pattern, index, slp, |best| best.max(1))?;
    let best = mems.entries.iter().map(|e| e.len).max().unwrap_or(0);
    mems.entries.retain(|e| e.len == best);
    stats.mems = mems.mu() as u64;
    Ok((mems, stats))
}
