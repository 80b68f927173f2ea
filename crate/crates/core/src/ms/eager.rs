use super::{ms_step, MatchingStatistics, Mode, MsState, QueryStats};
use crate::error::Result;
use crate::rlbwt::RlbwtIndex;
use crate::slp::Grammar;

/// Matching statistics with one capped LCP query per mismatch event.
/// With `aug`, stored threshold LCEs short-circuit queries they already
/// answer.
pub fn ms_eager(
    pattern: &[u8],
    index: &RlbwtIndex,
    slp: &Grammar,
    aug: bool,
) -> Result<(MatchingStatistics, QueryStats)> {
    let m = pattern.len();
    let mode = if aug { Mode::EagerAug } else { Mode::Eager };
    let ph = slp.pattern_hashes(pattern);
    let mut stats = QueryStats::default();
    let mut ms = MatchingStatistics::new(m);
    let mut state = MsState::restart();
    for i in (0..m).rev() {
        state = ms_step(&state, pattern[i], i + 1, &ph, index, slp, mode, &mut stats)?.0;
        ms.pos[i] = state.pos;
        ms.len[i] = state.len.unwrap_or(0);
    }
    stats.mems = super::mems_from_ms(&ms).mu() as u64;
    Ok((ms, stats))
}
