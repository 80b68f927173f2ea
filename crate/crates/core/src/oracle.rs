//! Brute-force reference implementations. Slow on purpose; tests and
//! example derivation only.

use crate::ms::{MatchingStatistics, Mem, MemList};

pub fn naive_sa(text: &[u8]) -> Vec<usize> {
    let mut sa: Vec<usize> = (0..text.len()).collect();
    sa.sort_by(|&a, &b| text[a..].cmp(&text[b..]));
    sa
}

pub fn naive_lcp(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

pub fn naive_lce(text: &[u8], x: usize, y: usize) -> usize {
    naive_lcp(&text[x..], &text[y..])
}

/// Matching statistics by scanning every text offset for every pattern
/// position. `pos` is the leftmost offset attaining the maximum.
pub fn naive_ms(pattern: &[u8], text: &[u8]) -> MatchingStatistics {
    let m = pattern.len();
    let mut ms = MatchingStatistics::new(m);
    for i in 0..m {
        let mut best = 0;
        let mut at = None;
        for t in 0..text.len() {
            let l = naive_lcp(&pattern[i..], &text[t..]);
            if l > best {
                best = l;
                at = Some(t);
            }
        }
        ms.len[i] = best;
        ms.pos[i] = at;
    }
    ms
}

/// Matching statistics by narrowing a suffix-array interval one symbol at a
/// time. Exact given a correct `sa`; used where the quadratic scan is too
/// slow.
pub fn sa_ms(pattern: &[u8], text: &[u8], sa: &[usize]) -> MatchingStatistics {
    let m = pattern.len();
    let mut ms = MatchingStatistics::new(m);
    for i in 0..m {
        let (mut lo, mut hi) = (0usize, sa.len());
        let mut depth = 0;
        while i + depth < m {
            let c = pattern[i + depth];
            let at = |k: usize| text.get(sa[k] + depth).copied();
            // suffixes shorter than depth+1 sort first within the interval
            let first =
                lo + sa[lo..hi].partition_point(|&s| text.get(s + depth).is_none_or(|&x| x < c));
            let last = first + sa[first..hi].partition_point(|&s| text.get(s + depth) == Some(&c));
            if first == last {
                break;
            }
            debug_assert_eq!(at(first), Some(c));
            lo = first;
            hi = last;
            depth += 1;
        }
        ms.len[i] = depth;
        ms.pos[i] = (depth > 0).then(|| sa[lo..hi].iter().copied().min().unwrap());
    }
    ms
}

/// Applies the MEM predicate: `len[i] > 0` and `i == 0 || len[i-1] <= len[i]`.
pub fn mems_of(ms: &MatchingStatistics) -> MemList {
    let mut out = Vec::new();
    for i in 0..ms.len.len() {
        if ms.len[i] == 0 {
            continue;
        }
        if i == 0 || ms.len[i - 1] <= ms.len[i] {
            out.push(Mem {
                start: i,
                len: ms.len[i],
                text_pos: ms.pos[i].expect("positive length has a position"),
            });
        }
    }
    MemList { entries: out }
}

pub fn naive_mems(pattern: &[u8], text: &[u8]) -> MemList {
    mems_of(&naive_ms(pattern, text))
}

/// Every MEM of maximum length.
pub fn lcs_of(mems: &MemList) -> MemList {
    let best = mems.entries.iter().map(|e| e.len).max().unwrap_or(0);
    MemList {
        entries: mems
            .entries
            .iter()
            .filter(|e| e.len == best)
            .cloned()
            .collect(),
    }
}

pub fn naive_lcs(pattern: &[u8], text: &[u8]) -> MemList {
    lcs_of(&naive_mems(pattern, text))
}

/// Checks the occurrence predicate for every position: the claimed text
/// slice matches and the match cannot be extended anywhere in the text.
/// Extension is judged against the expected (oracle) length.
pub fn positions_valid(
    pattern: &[u8],
    text: &[u8],
    ms: &MatchingStatistics,
    expected_len: &[usize],
) -> bool {
    (0..pattern.len()).all(|i| match (ms.pos[i], expected_len[i]) {
        (None, 0) => true,
        (Some(p), l) if l > 0 => {
            p + l <= text.len() && text[p..p + l] == pattern[i..i + l] && ms.len[i] == l
        }
        _ => false,
    })
}
